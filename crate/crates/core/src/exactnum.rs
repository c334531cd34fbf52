//! Exact arithmetic for angles, comparisons and the sign of `α_Q`.
//!
//! An angle in `[0, π]` is named by an integer pair `(p, p′)`: it is the
//! unique `θ` with `p′(1 − 3cos²θ) − p√6 cosθ = 0` and `p′ cosθ ≥ 0`.
//! Every decision below reduces to integer determinants or to the sign of
//! an element of `ℚ(√6)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("undefined angle source: the pair (0,0) names no angle")]
    UndefinedAngleSource,
    #[error("pair {0} does not define an angle in (0, π)")]
    NoAngle(IntPair),
    #[error("degenerate interval: lower end {lo} is not below upper end {hi}")]
    DegenerateInterval { lo: AngleSpec, hi: AngleSpec },
    #[error("α_{d} vanishes at the angle of {at}")]
    VanishingDenominator { d: IntPair, at: IntPair },
    #[error("integer overflow while searching for an angle between {lo} and {hi}")]
    Overflow { lo: AngleSpec, hi: AngleSpec },
}

/// An ordered pair of integers `(p, p′)`; serialized as `[p, p′]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(i64, i64)", into = "(i64, i64)")]
pub struct IntPair {
    pub p: i64,
    pub pp: i64,
}

impl From<(i64, i64)> for IntPair {
    fn from((p, pp): (i64, i64)) -> Self {
        IntPair { p, pp }
    }
}

impl From<IntPair> for (i64, i64) {
    fn from(v: IntPair) -> Self {
        (v.p, v.pp)
    }
}

impl fmt::Display for IntPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.pp)
    }
}

impl std::ops::Add for IntPair {
    type Output = IntPair;
    fn add(self, o: IntPair) -> IntPair {
        IntPair::new(self.p + o.p, self.pp + o.pp)
    }
}

impl std::ops::Sub for IntPair {
    type Output = IntPair;
    fn sub(self, o: IntPair) -> IntPair {
        IntPair::new(self.p - o.p, self.pp - o.pp)
    }
}

impl std::ops::Neg for IntPair {
    type Output = IntPair;
    fn neg(self) -> IntPair {
        IntPair::new(-self.p, -self.pp)
    }
}

impl std::ops::Mul<IntPair> for i64 {
    type Output = IntPair;
    fn mul(self, v: IntPair) -> IntPair {
        IntPair::new(self * v.p, self * v.pp)
    }
}

impl IntPair {
    pub const ZERO: IntPair = IntPair { p: 0, pp: 0 };

    pub const fn new(p: i64, pp: i64) -> Self {
        IntPair { p, pp }
    }

    pub fn is_zero(&self) -> bool {
        self.p == 0 && self.pp == 0
    }

    /// `p′q − pq′` for `self = (p, p′)` and `other = (q, q′)`.
    pub fn det(&self, other: &IntPair) -> i128 {
        self.pp as i128 * other.p as i128 - self.p as i128 * other.pp as i128
    }

    pub fn gcd(&self) -> i64 {
        self.p.gcd(&self.pp)
    }

    /// Divides out the gcd; the zero pair is returned unchanged.
    pub fn primitive(&self) -> IntPair {
        let g = self.gcd();
        if g == 0 {
            *self
        } else {
            IntPair::new(self.p / g, self.pp / g)
        }
    }

    pub fn is_primitive(&self) -> bool {
        self.gcd() == 1
    }

    /// `k` with `self = k·dir`, if there is one.
    pub fn multiple_of(&self, dir: &IntPair) -> Option<i64> {
        if dir.is_zero() {
            return if self.is_zero() { Some(0) } else { None };
        }
        if self.det(dir) != 0 {
            return None;
        }
        if dir.p != 0 {
            if self.p % dir.p == 0 {
                let k = self.p / dir.p;
                (k * dir.pp == self.pp).then_some(k)
            } else {
                None
            }
        } else if self.pp % dir.pp == 0 {
            let k = self.pp / dir.pp;
            (k * dir.p == self.p).then_some(k)
        } else {
            None
        }
    }
}

pub fn primitive(p: IntPair) -> IntPair {
    p.primitive()
}

/// `a + b√6` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub a: Rational,
    pub b: Rational,
}

impl QuadInt {
    pub fn new(a: Rational, b: Rational) -> Self {
        QuadInt { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        QuadInt::new(Rational::from_integer(a.into()), Rational::from_integer(b.into()))
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * 6f64.sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of<T: Signed>(x: &T) -> Sign {
        if x.is_zero() {
            Sign::Zero
        } else if x.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn of_i128(x: i128) -> Sign {
        match x.cmp(&0) {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

pub fn sign_quadint(x: &QuadInt) -> Sign {
    let sa = Sign::of(&x.a);
    let sb = Sign::of(&x.b);
    match (sa, sb) {
        (Sign::Zero, s) | (s, Sign::Zero) => s,
        _ if sa == sb => sa,
        _ => {
            let a2 = &x.a * &x.a;
            let b2 = &x.b * &x.b * Rational::from_integer(6.into());
            match a2.cmp(&b2) {
                Ordering::Greater => sa,
                Ordering::Less => sb,
                Ordering::Equal => Sign::Zero,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HalfPlane {
    #[serde(rename = "below")]
    BelowEquator,
    #[serde(rename = "equator")]
    Equator,
    #[serde(rename = "above")]
    AboveEquator,
}

impl fmt::Display for HalfPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HalfPlane::BelowEquator => "below",
            HalfPlane::Equator => "equator",
            HalfPlane::AboveEquator => "above",
        })
    }
}

pub fn defines_angle(p: IntPair) -> Result<bool, ExactError> {
    if p.is_zero() {
        return Err(ExactError::UndefinedAngleSource);
    }
    Ok(p.p >= 0 || 2 * (p.pp as i128).pow(2) > 3 * (p.p as i128).pow(2))
}

pub fn half_plane(p: IntPair) -> Result<HalfPlane, ExactError> {
    if !defines_angle(p)? {
        return Err(ExactError::NoAngle(p));
    }
    Ok(match p.pp.cmp(&0) {
        Ordering::Greater => HalfPlane::BelowEquator,
        Ordering::Equal => HalfPlane::Equator,
        Ordering::Less => HalfPlane::AboveEquator,
    })
}

/// A point of `[0, π]`: an endpoint, or the angle named by a pair.
///
/// Serialized as `"zero"`, `"pi"` or `[p, p′]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "AngleWire", into = "AngleWire")]
pub enum AngleSpec {
    Zero,
    Interior(IntPair),
    Pi,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum AngleWire {
    Name(String),
    Pair(IntPair),
}

impl From<AngleSpec> for AngleWire {
    fn from(a: AngleSpec) -> Self {
        match a {
            AngleSpec::Zero => AngleWire::Name("zero".into()),
            AngleSpec::Pi => AngleWire::Name("pi".into()),
            AngleSpec::Interior(p) => AngleWire::Pair(p),
        }
    }
}

impl TryFrom<AngleWire> for AngleSpec {
    type Error = String;
    fn try_from(w: AngleWire) -> Result<Self, String> {
        match w {
            AngleWire::Name(s) if s == "zero" => Ok(AngleSpec::Zero),
            AngleWire::Name(s) if s == "pi" => Ok(AngleSpec::Pi),
            AngleWire::Name(s) => Err(format!("unknown angle name {s:?}")),
            AngleWire::Pair(p) => Ok(AngleSpec::Interior(p)),
        }
    }
}

impl fmt::Display for AngleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AngleSpec::Zero => f.write_str("0"),
            AngleSpec::Pi => f.write_str("π"),
            AngleSpec::Interior(p) => write!(f, "θ{}", p),
        }
    }
}

impl AngleSpec {
    pub fn interior(p: IntPair) -> Result<AngleSpec, ExactError> {
        if defines_angle(p)? {
            Ok(AngleSpec::Interior(p))
        } else {
            Err(ExactError::NoAngle(p))
        }
    }

    pub fn is_valid(&self) -> bool {
        match self {
            AngleSpec::Interior(p) => defines_angle(*p).unwrap_or(false),
            _ => true,
        }
    }

    /// Same angle, with an interior pair reduced to primitive form.
    pub fn normalized(&self) -> AngleSpec {
        match self {
            AngleSpec::Interior(p) => AngleSpec::Interior(p.primitive()),
            a => *a,
        }
    }

    pub fn pair(&self) -> Option<IntPair> {
        match self {
            AngleSpec::Interior(p) => Some(*p),
            _ => None,
        }
    }

    pub fn same_angle(&self, other: &AngleSpec) -> bool {
        cmp_angle(self, other) == Ordering::Equal
    }
}

/// Sign of `α_P` at the given angle.
pub fn sign_alpha_at(p: IntPair, at: &AngleSpec) -> Result<Sign, ExactError> {
    if p.is_zero() {
        return Err(ExactError::UndefinedAngleSource);
    }
    Ok(match at {
        AngleSpec::Interior(q) => {
            if q.pp != 0 {
                Sign::of_i128(p.det(q))
            } else {
                Sign::of_i128(p.pp as i128)
            }
        }
        AngleSpec::Zero => sign_quadint(&QuadInt::from_ints(-2 * p.pp, -p.p)),
        AngleSpec::Pi => sign_quadint(&QuadInt::from_ints(-2 * p.pp, p.p)),
    })
}

/// Total order on `[0, π]`. Both arguments must be valid.
pub fn cmp_angle(a: &AngleSpec, b: &AngleSpec) -> Ordering {
    use AngleSpec::*;
    match (a, b) {
        (Zero, Zero) | (Pi, Pi) => Ordering::Equal,
        (Zero, _) | (_, Pi) => Ordering::Less,
        (_, Zero) | (Pi, _) => Ordering::Greater,
        (Interior(p), Interior(q)) => {
            let hp = half_plane_unchecked(p);
            let hq = half_plane_unchecked(q);
            if hp != hq {
                return hp.cmp(&hq);
            }
            if hp == HalfPlane::Equator {
                return Ordering::Equal;
            }
            // θ_P > θ_Q iff p′q − pq′ < 0
            0i128.cmp(&p.det(q))
        }
    }
}

fn half_plane_unchecked(p: &IntPair) -> HalfPlane {
    match p.pp.cmp(&0) {
        Ordering::Greater => HalfPlane::BelowEquator,
        Ordering::Equal => HalfPlane::Equator,
        Ordering::Less => HalfPlane::AboveEquator,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Positivity {
    PositiveThroughout,
    ZeroAtLo,
    ZeroAtHi,
    /// Positive inside, zero at both ends (happens only between the two roots).
    ZeroAtBoth,
    Fails(AngleSpec),
}

impl Positivity {
    pub fn is_positive(&self) -> bool {
        !matches!(self, Positivity::Fails(_))
    }
}

/// The zeros of `α_Q` in `(0, π)` in increasing order: `θ_Q` and `θ_{−Q}` when defined.
pub fn alpha_roots(q: IntPair) -> Result<Vec<AngleSpec>, ExactError> {
    let mut out = Vec::with_capacity(2);
    if defines_angle(q)? {
        out.push(AngleSpec::Interior(q));
    }
    if defines_angle(-q)? {
        out.push(AngleSpec::Interior(-q));
    }
    out.sort_by(cmp_angle);
    Ok(out)
}

/// Decides whether `α_Q > 0` on the open interval `(lo, hi)`.
pub fn alpha_positive_on(q: IntPair, lo: &AngleSpec, hi: &AngleSpec) -> Result<Positivity, ExactError> {
    if cmp_angle(lo, hi) != Ordering::Less {
        return Err(ExactError::DegenerateInterval { lo: *lo, hi: *hi });
    }
    let roots = alpha_roots(q)?;
    if let Some(r) = roots
        .iter()
        .find(|r| cmp_angle(lo, r) == Ordering::Less && cmp_angle(r, hi) == Ordering::Less)
    {
        return Ok(Positivity::Fails(*r));
    }
    let slo = sign_alpha_at(q, lo)?;
    let shi = sign_alpha_at(q, hi)?;
    let inside = match (slo, shi) {
        (Sign::Zero, Sign::Zero) => {
            if q.pp > 0 {
                Sign::Positive
            } else {
                Sign::Negative
            }
        }
        (Sign::Zero, s) | (s, _) => s,
    };
    if inside == Sign::Negative {
        return Ok(Positivity::Fails(angle_strictly_between(lo, hi)?));
    }
    Ok(match (slo, shi) {
        (Sign::Zero, Sign::Zero) => Positivity::ZeroAtBoth,
        (Sign::Zero, _) => Positivity::ZeroAtLo,
        (_, Sign::Zero) => Positivity::ZeroAtHi,
        _ => Positivity::PositiveThroughout,
    })
}

/// An angle strictly inside `(lo, hi)` where `α_Q < 0`, if there is one.
pub fn negative_witness(q: IntPair, lo: &AngleSpec, hi: &AngleSpec) -> Result<Option<AngleSpec>, ExactError> {
    if cmp_angle(lo, hi) != Ordering::Less {
        return Err(ExactError::DegenerateInterval { lo: *lo, hi: *hi });
    }
    let mut cuts = vec![*lo];
    for r in alpha_roots(q)? {
        if cmp_angle(lo, &r) == Ordering::Less && cmp_angle(&r, hi) == Ordering::Less {
            cuts.push(r);
        }
    }
    cuts.push(*hi);
    for w in cuts.windows(2) {
        let c = angle_strictly_between(&w[0], &w[1])?;
        if sign_alpha_at(q, &c)? == Sign::Negative {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// An interior pair whose angle lies strictly between `lo < hi`.
///
/// Within one half-plane the ratio `p/p′` is increasing in the angle, so
/// sums of pairs act as mediants.
pub fn angle_strictly_between(lo: &AngleSpec, hi: &AngleSpec) -> Result<AngleSpec, ExactError> {
    use AngleSpec::*;
    use HalfPlane::*;
    if cmp_angle(lo, hi) != Ordering::Less {
        return Err(ExactError::DegenerateInterval { lo: *lo, hi: *hi });
    }
    let equator = Interior(IntPair::new(1, 0));
    let strictly = |c: &AngleSpec| cmp_angle(lo, c) == Ordering::Less && cmp_angle(c, hi) == Ordering::Less;
    if strictly(&equator) {
        return Ok(equator);
    }
    let hlo = lo.pair().map(|p| half_plane_unchecked(&p));
    let hhi = hi.pair().map(|p| half_plane_unchecked(&p));
    let overflow = || ExactError::Overflow { lo: *lo, hi: *hi };
    let found = match (lo, hi, hlo, hhi) {
        (Interior(p), Interior(q), Some(a), Some(b)) if a == b && a != Equator => Some(*p + *q),
        // both in the upper half-plane up to π, or both below by symmetry of the cases
        (Interior(p), Interior(_), Some(BelowEquator), Some(Equator)) => Some(IntPair::new(p.p + 1, p.pp)),
        (Interior(_), Interior(q), Some(Equator), Some(AboveEquator)) => Some(IntPair::new(q.p + 1, q.pp)),
        (Zero, Interior(_), None, Some(Equator)) => Some(IntPair::new(0, 1)),
        (Interior(_), Pi, Some(Equator), None) => Some(IntPair::new(0, -1)),
        (Zero, Interior(q), None, Some(BelowEquator)) => {
            // approach θ_Q from below: (kq − 1, kq′)
            let mut k: i64 = 1;
            loop {
                let cand = IntPair::new(
                    k.checked_mul(q.p).and_then(|v| v.checked_sub(1)).ok_or_else(overflow)?,
                    k.checked_mul(q.pp).ok_or_else(overflow)?,
                );
                if defines_angle(cand)? && strictly(&Interior(cand)) {
                    break Some(cand);
                }
                k = k.checked_mul(2).ok_or_else(overflow)?;
            }
        }
        (Interior(p), Pi, Some(AboveEquator), None) => {
            let mut k: i64 = 1;
            loop {
                let cand = IntPair::new(
                    k.checked_mul(p.p).and_then(|v| v.checked_sub(1)).ok_or_else(overflow)?,
                    k.checked_mul(p.pp).ok_or_else(overflow)?,
                );
                if defines_angle(cand)? && strictly(&Interior(cand)) {
                    break Some(cand);
                }
                k = k.checked_mul(2).ok_or_else(overflow)?;
            }
        }
        _ => None,
    };
    match found {
        Some(c) if defines_angle(c)? && strictly(&Interior(c)) => Ok(Interior(c)),
        _ => Err(overflow()),
    }
}

/// `α_N(θ)/α_D(θ)` at the angle named by `at`.
pub fn alpha_ratio(n: IntPair, d: IntPair, at: IntPair) -> Result<Rational, ExactError> {
    if !defines_angle(at)? {
        return Err(ExactError::NoAngle(at));
    }
    let (num, den) = if at.pp != 0 {
        (n.det(&at), d.det(&at))
    } else {
        (n.pp as i128, d.pp as i128)
    };
    if den == 0 {
        return Err(ExactError::VanishingDenominator { d, at });
    }
    Ok(Rational::new(BigInt::from(num), BigInt::from(den)))
}

/// `α_P(θ) = p′(1 − 3cos²θ) − p√6 cosθ` in floating point.
pub fn alpha_float(p: IntPair, theta: f64) -> f64 {
    let c = theta.cos();
    p.pp as f64 * (1.0 - 3.0 * c * c) - p.p as f64 * 6f64.sqrt() * c
}

pub fn cos_float(a: &AngleSpec) -> f64 {
    match a {
        AngleSpec::Zero => 1.0,
        AngleSpec::Pi => -1.0,
        AngleSpec::Interior(q) => {
            if q.pp == 0 {
                return 0.0;
            }
            let (p, pp) = (q.p as f64, q.pp as f64);
            let r6 = 6f64.sqrt();
            let s = (6.0 * p * p + 12.0 * pp * pp).sqrt();
            let c = if p >= 0.0 { 2.0 * pp / (s + r6 * p) } else { (s - r6 * p) / (6.0 * pp) };
            c.clamp(-1.0, 1.0)
        }
    }
}

pub fn angle_float(a: &AngleSpec) -> f64 {
    match a {
        AngleSpec::Zero => 0.0,
        AngleSpec::Pi => std::f64::consts::PI,
        AngleSpec::Interior(q) if q.pp == 0 => std::f64::consts::FRAC_PI_2,
        _ => cos_float(a).acos(),
    }
}

pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Serde adapter writing rationals as `"num/den"`.
pub mod serde_rational {
    use super::*;
    use serde::{de::Error, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}")))
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&rational_to_string(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| parse_rational(s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}"))))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(p: i64, pp: i64) -> IntPair {
        IntPair::new(p, pp)
    }

    #[test]
    fn defines_examples() {
        assert!(defines_angle(ip(1, 0)).unwrap());
        assert!(defines_angle(ip(-1, 2)).unwrap());
        assert!(!defines_angle(ip(-1, 1)).unwrap());
        assert_eq!(defines_angle(ip(0, 0)), Err(ExactError::UndefinedAngleSource));
    }

    #[test]
    fn half_plane_examples() {
        assert_eq!(half_plane(ip(1, 0)).unwrap(), HalfPlane::Equator);
        assert_eq!(half_plane(ip(0, 1)).unwrap(), HalfPlane::BelowEquator);
        assert!((cos_float(&AngleSpec::Interior(ip(0, 1))) - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert_eq!(half_plane(ip(-1, -2)).unwrap(), HalfPlane::AboveEquator);
        assert!((cos_float(&AngleSpec::Interior(ip(-1, -2))) + 6f64.sqrt() / 3.0).abs() < 1e-14);
    }

    #[test]
    fn sign_alpha_examples() {
        assert_eq!(sign_alpha_at(ip(0, 1), &AngleSpec::Interior(ip(1, 0))).unwrap(), Sign::Positive);
        assert_eq!(sign_alpha_at(ip(2, 3), &AngleSpec::Interior(ip(-2, -3))).unwrap(), Sign::Zero);
        assert_eq!(sign_alpha_at(ip(1, 1), &AngleSpec::Pi).unwrap(), Sign::Positive);
    }

    #[test]
    fn quadint_examples() {
        assert_eq!(sign_quadint(&QuadInt::from_ints(0, 0)), Sign::Zero);
        assert_eq!(sign_quadint(&QuadInt::from_ints(-2, 1)), Sign::Positive);
        assert_eq!(sign_quadint(&QuadInt::from_ints(-5, 2)), Sign::Negative);
    }

    #[test]
    fn cmp_examples() {
        let i = |p, q| AngleSpec::Interior(ip(p, q));
        assert_eq!(cmp_angle(&i(0, 1), &i(1, 0)), Ordering::Less);
        assert_eq!(cmp_angle(&i(1, 2), &i(-1, -2)), Ordering::Less);
        assert_eq!(cmp_angle(&i(2, 4), &i(1, 2)), Ordering::Equal);
    }

    #[test]
    fn positivity_examples() {
        let i = |p, q| AngleSpec::Interior(ip(p, q));
        assert_eq!(alpha_positive_on(ip(1, 1), &i(1, 1), &AngleSpec::Pi).unwrap(), Positivity::ZeroAtLo);
        assert_eq!(
            alpha_positive_on(ip(0, -1), &AngleSpec::Zero, &i(-1, -2)).unwrap(),
            Positivity::Fails(i(0, 1))
        );
        assert_eq!(alpha_positive_on(ip(2, 3), &i(-1, -2), &i(-2, -3)).unwrap(), Positivity::ZeroAtHi);
        assert!(alpha_positive_on(ip(1, 1), &AngleSpec::Pi, &AngleSpec::Zero).is_err());
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(alpha_ratio(ip(0, 1), ip(1, 1), ip(1, 0)).unwrap(), rat_int(1));
        assert_eq!(alpha_ratio(ip(1, 2), ip(1, 2), ip(0, 1)).unwrap(), rat_int(1));
        assert_eq!(alpha_ratio(ip(2, 3), ip(1, 1), ip(1, 0)).unwrap(), rat_int(3));
        assert!(alpha_ratio(ip(1, 1), ip(2, 3), ip(-2, -3)).is_err());
    }

    #[test]
    fn float_angles() {
        assert_eq!(angle_float(&AngleSpec::Zero), 0.0);
        assert_eq!(angle_float(&AngleSpec::Interior(ip(1, 0))), std::f64::consts::FRAC_PI_2);
        assert!((angle_float(&AngleSpec::Interior(ip(0, 1))) - 0.955317).abs() < 1e-6);
    }

    #[test]
    fn between_cases() {
        let i = |p, q| AngleSpec::Interior(ip(p, q));
        let cases = [
            (AngleSpec::Zero, i(0, 1)),
            (AngleSpec::Zero, i(-4, 5)),
            (i(0, 1), i(1, 0)),
            (i(1, 0), i(-1, -2)),
            (i(-1, -2), AngleSpec::Pi),
            (i(-2, -3), AngleSpec::Pi),
            (i(1, 2), i(1, 1)),
            (i(-1, -2), i(-2, -3)),
            (AngleSpec::Zero, AngleSpec::Pi),
            (i(1, 0), AngleSpec::Pi),
            (AngleSpec::Zero, i(1, 0)),
        ];
        for (lo, hi) in cases {
            let m = angle_strictly_between(&lo, &hi).unwrap();
            assert_eq!(cmp_angle(&lo, &m), Ordering::Less, "{lo} {hi} {m}");
            assert_eq!(cmp_angle(&m, &hi), Ordering::Less, "{lo} {hi} {m}");
        }
    }

    #[test]
    fn rational_strings() {
        assert_eq!(rational_to_string(&rat(-6, 4)), "-3/2");
        assert_eq!(parse_rational("-3/2").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("5").unwrap(), rat_int(5));
        assert!(parse_rational("1/0").is_none());
    }
}
