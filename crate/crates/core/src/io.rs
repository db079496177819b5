//! JSON instance format.
//!
//! ```json
//! {"orientation":"directed"|"undirected","n":int,"k":int,"gamma":"p/q"|null,
//!  "weights":[[ [int,...k], ...], ...]}
//! ```
//!
//! `weights` is an n-by-n matrix of k-vectors; diagonal entries must be
//! null. Undirected instances must be symmetric (validated on load).
//! Standalone cycle-cover fixtures extend the format with
//! `"standalone_cycle_cover": true` and an explicit `"cycle_cover"` edge
//! list; off-cover entries of the matrix are zero vectors.

use serde::{Deserialize, Serialize};

use crate::decompose::WeightedCycleCover;
use crate::error::{Error, Result};
use crate::graph::{Edge, Instance, Orientation};
use crate::rat::{format_rat, parse_rat};

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    orientation: Orientation,
    n: usize,
    k: usize,
    gamma: Option<String>,
    weights: Vec<Vec<Option<Vec<u64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    standalone_cycle_cover: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cycle_cover: Option<Vec<Edge>>,
}

fn weights_matrix(inst: &Instance) -> Vec<Vec<Option<Vec<u64>>>> {
    (0..inst.n())
        .map(|u| {
            (0..inst.n())
                .map(|v| {
                    if u == v {
                        None
                    } else {
                        Some(inst.weight(u, v).to_vec())
                    }
                })
                .collect()
        })
        .collect()
}

pub fn instance_to_json(inst: &Instance) -> String {
    let file = InstanceFile {
        orientation: inst.orientation(),
        n: inst.n(),
        k: inst.k(),
        gamma: inst.gamma().map(format_rat),
        weights: weights_matrix(inst),
        standalone_cycle_cover: None,
        cycle_cover: None,
    };
    let mut s = serde_json::to_string_pretty(&file).expect("instance serialization");
    s.push('\n');
    s
}

fn instance_from_file(file: &InstanceFile) -> Result<Instance> {
    if file.weights.len() != file.n {
        return Err(Error::Dimension(file.weights.len(), file.n));
    }
    for (u, row) in file.weights.iter().enumerate() {
        if row.len() != file.n {
            return Err(Error::Dimension(row.len(), file.n));
        }
        for (v, cell) in row.iter().enumerate() {
            match cell {
                None if u != v => return Err(Error::Parse(format!("missing weight for ({u},{v})"))),
                Some(_) if u == v => {
                    return Err(Error::Parse(format!("diagonal entry ({u},{u}) must be null")))
                }
                _ => {}
            }
        }
    }
    if file.orientation == Orientation::Undirected {
        for u in 0..file.n {
            for v in u + 1..file.n {
                if file.weights[u][v] != file.weights[v][u] {
                    return Err(Error::Structure(format!("asymmetric weights on ({u},{v})")));
                }
            }
        }
    }
    let gamma = file.gamma.as_deref().map(parse_rat).transpose()?;
    let inst = Instance::from_fn(file.orientation, file.n, file.k, gamma.clone(), |u, v| {
        file.weights[u][v].clone().unwrap()
    })?;
    if let Some(g) = &gamma {
        match crate::graph::gamma_check(&inst, g)? {
            crate::graph::GammaCheck::Ok => {}
            crate::graph::GammaCheck::Violated(w) => {
                return Err(Error::Structure(format!(
                    "declared gamma violated at triple ({}, {}, {}) coordinate {}",
                    w.u, w.x, w.v, w.coord
                )))
            }
        }
    }
    Ok(inst)
}

pub fn instance_from_json(s: &str) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(s)?;
    if file.standalone_cycle_cover == Some(true) {
        return Err(Error::Parse(
            "file is a standalone cycle cover, not a plain instance".into(),
        ));
    }
    instance_from_file(&file)
}

pub fn cover_to_json(cover: &WeightedCycleCover) -> String {
    let n = cover.vertex_count();
    let k = cover.k();
    let mut weights: Vec<Vec<Option<Vec<u64>>>> = (0..n)
        .map(|u| (0..n).map(|v| if u == v { None } else { Some(vec![0; k]) }).collect())
        .collect();
    let mut edges = Vec::new();
    for cyc in cover.cycles() {
        for e in cyc {
            let w: Vec<u64> = e.weight.iter().map(|&x| x as u64).collect();
            weights[e.tail][e.head] = Some(w.clone());
            if cover.orientation() == Orientation::Undirected {
                weights[e.head][e.tail] = Some(w);
            }
            edges.push((e.tail, e.head));
        }
    }
    let file = InstanceFile {
        orientation: cover.orientation(),
        n,
        k,
        gamma: None,
        weights,
        standalone_cycle_cover: Some(true),
        cycle_cover: Some(edges),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("cover serialization");
    s.push('\n');
    s
}

pub fn cover_from_json(s: &str) -> Result<WeightedCycleCover> {
    let file: InstanceFile = serde_json::from_str(s)?;
    if file.standalone_cycle_cover != Some(true) {
        return Err(Error::Parse("file lacks the standalone_cycle_cover flag".into()));
    }
    let edges = file
        .cycle_cover
        .clone()
        .ok_or_else(|| Error::Parse("standalone cycle cover lacks the cycle_cover edge list".into()))?;
    let weight_of = |u: usize, v: usize| -> Result<Vec<u128>> {
        let cell = file
            .weights
            .get(u)
            .and_then(|row| row.get(v))
            .cloned()
            .flatten()
            .ok_or(Error::InvalidEdge(u, v))?;
        if cell.len() != file.k {
            return Err(Error::Dimension(cell.len(), file.k));
        }
        Ok(cell.into_iter().map(|x| x as u128).collect())
    };
    let mut weighted = Vec::new();
    for &(u, v) in &edges {
        weighted.push((u, v, weight_of(u, v)?));
    }
    WeightedCycleCover::from_weighted_edges(file.orientation, file.k, file.n, &weighted)
}

pub fn is_standalone_cover_json(s: &str) -> bool {
    serde_json::from_str::<InstanceFile>(s)
        .map(|f| f.standalone_cycle_cover == Some(true))
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Instance;

    #[test]
    fn instance_roundtrip() {
        let inst = crate::gen::gamma_instance(Orientation::Directed, 3, 2, 5, &crate::rat::rat(3, 5), 40)
            .unwrap();
        let json = instance_to_json(&inst);
        let back = instance_from_json(&json).unwrap();
        assert_eq!(back.n(), 3);
        assert_eq!(back.k(), 2);
        assert_eq!(back.gamma(), inst.gamma());
        assert!(instance_from_json(
            &json.replace("\"3/5\"", "\"1/2\"")
        ).is_err());
        for u in 0..3 {
            for v in 0..3 {
                if u != v {
                    assert_eq!(back.weight(u, v), inst.weight(u, v));
                }
            }
        }
        // Identical serialization both times.
        assert_eq!(json, instance_to_json(&back));
    }

    #[test]
    fn rejects_asymmetric_undirected() {
        let json = r#"{"orientation":"undirected","n":2,"k":1,"gamma":null,
            "weights":[[null,[1]],[[2],null]]}"#;
        assert!(instance_from_json(json).is_err());
    }

    #[test]
    fn rejects_diagonal_weights() {
        let json = r#"{"orientation":"directed","n":2,"k":1,"gamma":null,
            "weights":[[[1],[1]],[[1],null]]}"#;
        assert!(instance_from_json(json).is_err());
    }
}
