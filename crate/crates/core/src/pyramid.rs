//! Layered view of the 2x2x2xd subfamilies.
//!
//! Subfamilies are grouped into layers by the sum of all their ranks, the
//! fully separable signature at the apex. An edge joins two subfamilies in
//! consecutive layers when every rank of the upper one is at most the
//! matching rank of the lower one.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::catalog::{Catalog, System};
use crate::classify::{classify, RankSignature};
use crate::error::Result;

/// Layer key in use. Any other grouping would give different layer counts.
pub const LAYER_CONVENTION: &str = "rank-sum";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PyramidNode {
    /// `(r1,r2,r3,r4)-(r1',r2',r3')`.
    pub name: String,
    pub label: String,
    pub family: String,
    pub rank_sum: usize,
    /// Catalog ids realizing this subfamily.
    pub entries: Vec<String>,
    #[serde(skip)]
    signature: Option<RankSignature>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PyramidEdge {
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pyramid {
    pub d: usize,
    pub convention: &'static str,
    /// Layers from the apex down, each sorted by node name.
    pub layers: Vec<Vec<PyramidNode>>,
    pub edges: Vec<PyramidEdge>,
}

impl Pyramid {
    /// Builds the pyramid from the counted 2x2x2xd entries that fit in
    /// dimension `d`.
    pub fn build(catalog: &Catalog, d: usize) -> Result<Pyramid> {
        let mut nodes: BTreeMap<String, PyramidNode> = BTreeMap::new();
        for entry in catalog.representatives(System::Qubits3QuditD) {
            if !entry.counts_toward_totals() || entry.min_d > d {
                continue;
            }
            let result = classify(&entry.state_in(d)?)?;
            let sig = result.signature;
            nodes
                .entry(sig.node_name())
                .or_insert_with(|| PyramidNode {
                    name: sig.node_name(),
                    label: sig.label(),
                    family: result.family.to_string(),
                    rank_sum: sig.rank_sum(),
                    entries: Vec::new(),
                    signature: Some(sig.clone()),
                })
                .entries
                .push(entry.id.clone());
        }

        let mut by_sum: BTreeMap<usize, Vec<PyramidNode>> = BTreeMap::new();
        for node in nodes.into_values() {
            by_sum.entry(node.rank_sum).or_default().push(node);
        }
        let layers: Vec<Vec<PyramidNode>> = by_sum.into_values().collect();

        let mut edges = Vec::new();
        for pair in layers.windows(2) {
            for upper in &pair[0] {
                for lower in &pair[1] {
                    let (a, b) = (upper.signature.as_ref(), lower.signature.as_ref());
                    if a.zip(b).is_some_and(|(a, b)| a.dominated_by(b)) {
                        edges.push(PyramidEdge {
                            from: upper.name.clone(),
                            to: lower.name.clone(),
                        });
                    }
                }
            }
        }
        Ok(Pyramid {
            d,
            convention: LAYER_CONVENTION,
            layers,
            edges,
        })
    }

    pub fn node_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &PyramidNode> {
        self.layers.iter().flatten()
    }

    /// Graphviz digraph with one node per subfamily and one rank per layer.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        writeln!(out, "digraph pyramid_2x2x2x{} {{", self.d).unwrap();
        writeln!(out, "  rankdir=TB;").unwrap();
        writeln!(out, "  node [shape=box, fontsize=10];").unwrap();
        for (i, layer) in self.layers.iter().enumerate() {
            let sum = layer[0].rank_sum;
            writeln!(out, "  subgraph layer_{i} {{").unwrap();
            writeln!(out, "    rank=same; // rank sum {sum}").unwrap();
            for node in layer {
                writeln!(out, "    \"{}\" [tooltip=\"{}\"];", node.name, node.family).unwrap();
            }
            writeln!(out, "  }}").unwrap();
        }
        for e in &self.edges {
            writeln!(out, "  \"{}\" -> \"{}\";", e.from, e.to).unwrap();
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apex_and_shape() {
        let c = Catalog::builtin().unwrap();
        let p = Pyramid::build(&c, 8).unwrap();
        assert_eq!(p.node_count(), 60);
        assert_eq!(p.layers[0].len(), 1);
        assert_eq!(p.layers[0][0].name, "(1,1,1,1)-(1,1,1)");
        assert_eq!(p.layers.last().unwrap()[0].name, "(2,2,2,8)-(4,4,4)");
        for w in p.layers.windows(2) {
            assert!(w[0][0].rank_sum < w[1][0].rank_sum);
        }
        let dot = p.to_dot();
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot.matches(" -> ").count(), p.edges.len());
    }

    #[test]
    fn every_edge_joins_consecutive_layers() {
        let c = Catalog::builtin().unwrap();
        let p = Pyramid::build(&c, 4).unwrap();
        let layer_of = |name: &str| p.layers.iter().position(|l| l.iter().any(|n| n.name == name)).unwrap();
        for e in &p.edges {
            assert_eq!(layer_of(&e.from) + 1, layer_of(&e.to));
        }
    }
}
