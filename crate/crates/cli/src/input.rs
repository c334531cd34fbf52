//! Reading inputs: files or stdin, sniffed by shape.

use std::fs;
use std::io::Read;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::Value;
use strata_core::asymptotic::AsymptoticData;
use strata_core::graph::DecoratedGraph;
use strata_core::orbit::{GroupElement, OrbitPoint};
use strata_core::strata::Bounds;

pub fn read_source(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display())),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("cannot read stdin")?;
            Ok(s)
        }
    }
}

pub enum Input {
    Data(AsymptoticData),
    Graph(DecoratedGraph),
}

/// A data set has `tuples`, a graph has `vertices`.
pub fn read_input(path: Option<&Path>) -> Result<Input> {
    let text = read_source(path)?;
    let v: Value = serde_json::from_str(&text).context("input is not JSON")?;
    if v.get("tuples").is_some() {
        let a: AsymptoticData = serde_json::from_value(v).context("data set does not match the schema")?;
        Ok(Input::Data(a))
    } else if v.get("vertices").is_some() {
        DecoratedGraph::from_json(&text).map(Input::Graph).map_err(|e| anyhow!("graph does not match the schema: {e}"))
    } else {
        bail!("input is neither a data set (no \"tuples\") nor a graph (no \"vertices\")")
    }
}

pub fn read_data(path: Option<&Path>) -> Result<AsymptoticData> {
    match read_input(path)? {
        Input::Data(a) => Ok(a),
        Input::Graph(_) => bail!("expected a data set, got a graph"),
    }
}

pub fn read_graph(path: Option<&Path>) -> Result<DecoratedGraph> {
    match read_input(path)? {
        Input::Graph(g) => Ok(g),
        Input::Data(_) => bail!("expected a graph, got a data set"),
    }
}

pub fn read_point(path: &Path) -> Result<OrbitPoint> {
    OrbitPoint::from_json(&read_source(Some(path))?).context("point does not match the schema")
}

pub fn read_element(path: &Path) -> Result<GroupElement> {
    serde_json::from_str(&read_source(Some(path))?).context("group element does not match the schema")
}

/// `--bounds` takes `key=value` pairs separated by commas, or a JSON file.
pub fn parse_bounds(spec: Option<&str>) -> Result<Bounds> {
    let mut b = Bounds::default();
    let Some(spec) = spec else { return Ok(b) };
    if !spec.contains('=') {
        return serde_json::from_str(&read_source(Some(Path::new(spec)))?).context("bounds file does not match the schema");
    }
    for part in spec.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| anyhow!("bad bound {part:?}"))?;
        let n: i64 = v.trim().parse().with_context(|| format!("bound {k} is not an integer"))?;
        let as_usize = || usize::try_from(n).with_context(|| format!("bound {k} must be non-negative"));
        match k.trim() {
            "max_leaves" => b.max_leaves = as_usize()?,
            "max_codim" => b.max_codim = n,
            "max_entries" => b.max_entries = as_usize()?,
            "max_label" => b.max_label = n,
            other => bail!("unknown bound {other:?}"),
        }
    }
    Ok(b)
}
