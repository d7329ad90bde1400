use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{BoundedGraph, ExplicitGraph, NeighborOracle, Subgroup};
use crate::error::{input, Result};
use crate::groups::{GeneratorSpec, GroupSpec};

/// JSON description of a ball:
/// `{"kind": "cayley"|"schreier"|"bass_serre"|"pentagon"|"explicit", "group": {...},
///   "seeds": [...], "radius": R}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GraphSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    /// Overrides the group's generator names.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<GeneratorSpec>>,
    /// `"a"` (BS(m,n)) or `"first_factor"` (products); Schreier graphs only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<String>,
    /// Explicit graphs only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjacency: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<Value>>,
    pub radius: u32,
}

impl GraphSpec {
    pub fn oracle(&self) -> Result<NeighborOracle> {
        let group = || -> Result<crate::groups::GroupOracle> {
            let Some(spec) = &self.group else {
                return input(format!("group: a {} graph needs a group", self.kind));
            };
            let mut spec = spec.clone();
            if self.generators.is_some() {
                spec.generators = self.generators.clone();
            }
            spec.build()
        };
        match self.kind.as_str() {
            "cayley" => Ok(NeighborOracle::Cayley(group()?)),
            "schreier" => {
                let sub = Subgroup::parse(self.subgroup.as_deref().unwrap_or(""))?;
                NeighborOracle::schreier(group()?, sub)
            }
            "bass_serre" => {
                let g = group()?;
                match g.backend() {
                    crate::groups::Backend::BaumslagSolitar { .. } => Ok(NeighborOracle::BassSerre { group: g }),
                    _ => input("group: the bass_serre kind needs a bs group"),
                }
            }
            "pentagon" => Ok(NeighborOracle::Pentagon),
            "explicit" => {
                let Some(adj) = &self.adjacency else {
                    return input("adjacency: an explicit graph needs adjacency lists");
                };
                Ok(NeighborOracle::Explicit(ExplicitGraph::new(adj.clone())?))
            }
            other => input(format!("kind: unknown graph kind {other:?}")),
        }
    }

    pub fn build(&self, budget: usize) -> Result<BoundedGraph> {
        let oracle = self.oracle()?;
        let seeds = match &self.seeds {
            None => vec![oracle.base_vertex()],
            Some(list) => list
                .iter()
                .enumerate()
                .map(|(i, v)| oracle.parse_key(v).map_err(|e| prefix(e, &format!("seeds[{i}]"))))
                .collect::<Result<Vec<_>>>()?,
        };
        BoundedGraph::build(&oracle, &seeds, self.radius, budget)
    }

    /// Spec that rebuilds `bg` (same oracle, seeds, radius).
    pub fn describe(bg: &BoundedGraph) -> GraphSpec {
        let oracle = bg.oracle();
        let (group, subgroup, adjacency) = match oracle {
            NeighborOracle::Cayley(g) | NeighborOracle::BassSerre { group: g } => (Some(g.to_spec()), None, None),
            NeighborOracle::Schreier { group, subgroup } => (Some(group.to_spec()), Some(subgroup.name().to_string()), None),
            NeighborOracle::Pentagon => (None, None, None),
            NeighborOracle::Explicit(e) => (None, None, Some(e.adjacency().to_vec())),
        };
        GraphSpec {
            kind: oracle.kind().to_string(),
            group,
            generators: None,
            subgroup,
            adjacency,
            seeds: Some(bg.seeds().iter().map(|&v| bg.format_vertex(v)).collect()),
            radius: bg.radius(),
        }
    }
}

fn prefix(e: crate::Error, path: &str) -> crate::Error {
    match e {
        crate::Error::Input(msg) => crate::Error::Input(format!("{path}: {msg}")),
        other => other,
    }
}
