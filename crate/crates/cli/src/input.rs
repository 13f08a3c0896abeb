//! Turning command-line arguments into ideals, graphs and complexes.

use std::path::Path;

use dgres_core::combin::{build_family, edge_ideal, FamilySpec, Graph};
use dgres_core::complex::LabeledFreeComplex;
use dgres_core::poly::IdealDoc;
use dgres_core::{MonomialIdeal, VarSet};

use crate::Failure;

/// Raw input bytes, kept for hashing.
pub struct Loaded<T> {
    pub value: T,
    pub bytes: Vec<u8>,
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn text(bytes: &[u8]) -> Result<&str, Failure> {
    std::str::from_utf8(bytes).map_err(|_| Failure::Input("input is not UTF-8".into()))
}

fn is_json(t: &str) -> bool {
    t.trim_start().starts_with(['{', '['])
}

/// A graph from a JSON file, an adjacency-list file, or a family shorthand.
pub fn graph(arg: &str) -> Result<Loaded<Graph>, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        let bytes = read(path)?;
        let t = text(&bytes)?;
        let value = if is_json(t) { Graph::from_json(t)? } else { Graph::from_adjacency_text(t)? };
        return Ok(Loaded { value, bytes });
    }
    let spec: FamilySpec = arg.parse()?;
    Ok(Loaded { value: build_family(&spec)?, bytes: arg.as_bytes().to_vec() })
}

/// Variable names in order of first appearance.
fn infer_vars(text: &str) -> Result<VarSet, Failure> {
    let mut names: Vec<String> = Vec::new();
    for factor in text.split([',', '*']).map(str::trim).filter(|s| !s.is_empty()) {
        let name = factor.split('^').next().unwrap_or(factor).trim();
        if name != "1" && !names.iter().any(|n| n == name) {
            names.push(name.to_string());
        }
    }
    Ok(VarSet::new(names)?)
}

/// An ideal from an ideal JSON file, a graph file, a family shorthand, or
/// an inline list like `x*w, y*z`. `vars` fixes the variable order of an
/// inline list.
pub fn ideal(arg: &str, vars: Option<&str>) -> Result<Loaded<MonomialIdeal>, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        let bytes = read(path)?;
        let t = text(&bytes)?;
        let value = match serde_json::from_str::<IdealDoc>(t) {
            Ok(doc) => doc.to_ideal()?,
            Err(_) if is_json(t) => edge_ideal(&Graph::from_json(t)?),
            Err(_) => edge_ideal(&Graph::from_adjacency_text(t)?),
        };
        return Ok(Loaded { value, bytes });
    }
    if let Ok(spec) = arg.parse::<FamilySpec>() {
        return Ok(Loaded { value: edge_ideal(&build_family(&spec)?), bytes: arg.as_bytes().to_vec() });
    }
    let vars = match vars {
        Some(v) => VarSet::new(v.split(',').map(str::trim).filter(|s| !s.is_empty()))?,
        None => infer_vars(arg)?,
    };
    let mut bytes = arg.as_bytes().to_vec();
    bytes.extend(vars.names().join(",").bytes());
    Ok(Loaded { value: MonomialIdeal::parse(vars, arg)?, bytes })
}

/// A generator order given as indices or generator strings.
pub fn order(ideal: &MonomialIdeal, arg: &str) -> Result<Vec<usize>, Failure> {
    let names: Vec<String> = ideal.generators().iter().map(|g| g.display(ideal.vars()).to_string()).collect();
    let mut out = Vec::new();
    for tok in arg.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let k = match tok.parse::<usize>() {
            Ok(k) => k,
            Err(_) => {
                let m = ideal.vars().parse_monomial(tok)?;
                ideal
                    .generators()
                    .iter()
                    .position(|g| *g == m)
                    .ok_or_else(|| Failure::Input(format!("{tok} is not a generator")))?
            }
        };
        out.push(k);
    }
    let mut sorted = out.clone();
    sorted.sort_unstable();
    if sorted != (0..names.len()).collect::<Vec<_>>() {
        return Err(Failure::Input(format!("order must list each of the {} generators once", names.len())));
    }
    Ok(out)
}

pub fn complex_file(path: &Path) -> Result<Loaded<LabeledFreeComplex>, Failure> {
    let bytes = read(path)?;
    let value = LabeledFreeComplex::from_json(text(&bytes)?)?;
    Ok(Loaded { value, bytes })
}

pub fn json_file<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Loaded<T>, Failure> {
    let bytes = read(path)?;
    let value = serde_json::from_slice(&bytes).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(Loaded { value, bytes })
}
