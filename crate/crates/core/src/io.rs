//! JSON formats for complexes, chains and cone functions.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::chains::{Chain, CoefficientGroup};
use crate::cones::ConeFunction;
use crate::error::{HdxError, Result};
use crate::simplicial::{Complex, Simplex};

/// `{"vertices":[labels],"maximal_faces":[[indices]]}` plus optional metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub vertices: Vec<String>,
    pub maximal_faces: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Value>,
}

/// Writes faces by vertex position, so ids are dropped in favour of `0..n`.
pub fn complex_to_json(x: &Complex, metadata: Option<Value>) -> ComplexJson {
    let maximal_faces = x
        .facets()
        .iter()
        .map(|f| f.iter().map(|v| x.vertex_index(*v).unwrap()).collect())
        .collect();
    ComplexJson { vertices: x.labels().to_vec(), maximal_faces, metadata }
}

pub fn complex_from_json(j: &ComplexJson) -> Result<Complex> {
    Complex::from_maximal_faces(j.vertices.clone(), j.maximal_faces.clone())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn read_complex(path: &Path) -> Result<Complex> {
    complex_from_json(&read_json(path)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry<T> {
    pub simplex: Simplex,
    pub coeff: T,
}

/// `{"degree":k,"entries":[{"simplex":[...],"coeff":c}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainJson<T> {
    pub degree: i32,
    pub entries: Vec<Entry<T>>,
}

pub fn chain_to_json(c: &Chain) -> ChainJson<i64> {
    ChainJson {
        degree: c.degree(),
        entries: c.iter().map(|(s, &k)| Entry { simplex: s.clone(), coeff: k }).collect(),
    }
}

pub fn chain_from_json(j: &ChainJson<i64>) -> Result<Chain> {
    let mut c = Chain::zero(j.degree);
    for e in &j.entries {
        if e.simplex.len() as i32 != j.degree + 1 {
            return Err(HdxError::Malformed(format!("simplex {:?} in a {}-chain", e.simplex, j.degree)));
        }
        c.add_oriented(&e.simplex, e.coeff)?;
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeEntry {
    pub simplex: Simplex,
    pub chain: Vec<Entry<i64>>,
}

/// `{"apex":v,"k":k,"coeff":"Z"|"Z/m"|[...],"table":[{"simplex":[...],"chain":[...]}]}`.
/// Table chains are integral; other coefficient groups act by reduction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeJson {
    pub apex: u32,
    pub k: i32,
    pub coeff: Value,
    pub table: Vec<ConeEntry>,
}

fn coeff_value(g: &CoefficientGroup) -> Value {
    if g.rank() == 1 {
        Value::String(g.descriptor())
    } else {
        Value::Array(g.descriptor().split('+').map(|s| Value::String(s.to_string())).collect())
    }
}

fn coeff_group(v: &Value) -> Result<CoefficientGroup> {
    match v {
        Value::String(s) => CoefficientGroup::parse(s),
        Value::Array(parts) => {
            let strs: Vec<&str> = parts
                .iter()
                .map(|p| p.as_str().ok_or_else(|| HdxError::Malformed("coefficient list holds a non-string".into())))
                .collect::<Result<_>>()?;
            CoefficientGroup::parse(&strs.join("+"))
        }
        _ => Err(HdxError::Malformed("coeff must be a string or a list of strings".into())),
    }
}

pub fn cone_to_json(c: &ConeFunction, group: &CoefficientGroup) -> ConeJson {
    let table = c
        .table()
        .iter()
        .map(|(s, ch)| ConeEntry { simplex: s.clone(), chain: chain_to_json(ch).entries })
        .collect();
    ConeJson { apex: c.apex(), k: c.degree(), coeff: coeff_value(group), table }
}

pub fn cone_from_json(j: &ConeJson) -> Result<(ConeFunction, CoefficientGroup)> {
    let group = coeff_group(&j.coeff)?;
    let mut table = BTreeMap::new();
    for e in &j.table {
        let mut s = e.simplex.clone();
        s.sort_unstable();
        if s != e.simplex {
            return Err(HdxError::Malformed(format!("table simplex {:?} is not in ascending order", e.simplex)));
        }
        let chain = chain_from_json(&ChainJson { degree: s.len() as i32, entries: e.chain.clone() })?;
        if table.insert(s, chain).is_some() {
            return Err(HdxError::Malformed(format!("duplicate table simplex {:?}", e.simplex)));
        }
    }
    Ok((ConeFunction::from_table(j.apex, j.k, table)?, group))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::graph_bfs_cone;
    use crate::standard;

    #[test]
    fn complex_round_trip() {
        let x = standard::octahedron();
        let j = complex_to_json(&x, None);
        let text = serde_json::to_string(&j).unwrap();
        let back: ComplexJson = serde_json::from_str(&text).unwrap();
        let y = complex_from_json(&back).unwrap();
        assert_eq!(y, x.normalized());
        assert_eq!(serde_json::to_string(&complex_to_json(&y, None)).unwrap(), text);
    }

    #[test]
    fn cone_round_trip() {
        let x = standard::cycle(6).unwrap();
        let c = graph_bfs_cone(&x, 0).unwrap();
        let g = CoefficientGroup::parse("Z/2+Z").unwrap();
        let j = cone_to_json(&c, &g);
        assert_eq!(j.coeff, serde_json::json!(["Z/2", "Z"]));
        let (d, h) = cone_from_json(&j).unwrap();
        assert_eq!(d, c);
        assert_eq!(h, g);
    }

    #[test]
    fn malformed_inputs() {
        let j: ComplexJson = serde_json::from_str(r#"{"vertices":["a"],"maximal_faces":[[0,3]]}"#).unwrap();
        assert!(matches!(complex_from_json(&j), Err(HdxError::Malformed(_))));
        let bad = ChainJson { degree: 1, entries: vec![Entry { simplex: vec![1], coeff: 1 }] };
        assert!(chain_from_json(&bad).is_err());
    }
}
