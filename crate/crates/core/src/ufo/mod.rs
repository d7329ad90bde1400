//! (m,k,r)-UFOs: verification on bounded graphs and the explicit families.

mod families;
mod lift;
mod matching;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{input, Error, Result};
use crate::graphs::{BfsScratch, BoundedGraph, NeighborOracle, NONE};
use crate::groups::Key;

pub use families::{amenable_ufo, multiended_ufo, pentagon_ufo, zd_ufo, Construction};
pub use lift::{lift_ufo, BoxFolner, FolnerProvider, LiftResult};
pub use matching::{bounded_matching, HallCertificate, MatchingOutcome, Side};

/// A triple of disjoint finite vertex sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ufo {
    pub u: Vec<Key>,
    pub f: Vec<Key>,
    pub o: Vec<Key>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UfoParams {
    pub m: u64,
    pub k: u32,
    pub r: u32,
}

impl UfoParams {
    pub fn new(m: u64, k: u32, r: u32) -> Self {
        UfoParams { m, k, r }
    }

    /// Parses `"m,k,r"`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return input(format!("params: expected m,k,r, got {text:?}"));
        }
        let bad = |p: &str| Error::Input(format!("params: {p:?} is not a non-negative integer"));
        Ok(UfoParams {
            m: parts[0].parse().map_err(|_| bad(parts[0]))?,
            k: parts[1].parse().map_err(|_| bad(parts[1]))?,
            r: parts[2].parse().map_err(|_| bad(parts[2]))?,
        })
    }
}

impl Ufo {
    pub fn is_empty(&self) -> bool {
        self.u.is_empty() && self.f.is_empty() && self.o.is_empty()
    }

    /// All vertices of the triple, for use as ball seeds.
    pub fn support(&self) -> Vec<Key> {
        let mut all: Vec<Key> = self.u.iter().chain(&self.f).chain(&self.o).cloned().collect();
        all.sort();
        all.dedup();
        all
    }

    /// Ball around the triple that is wide enough to verify it at `p`.
    pub fn ball(&self, oracle: &NeighborOracle, p: UfoParams, budget: usize) -> Result<BoundedGraph> {
        let seeds = if self.is_empty() { vec![oracle.base_vertex()] } else { self.support() };
        BoundedGraph::build(oracle, &seeds, p.k.max(p.r), budget)
    }

    pub fn to_json(&self, oracle: &NeighborOracle, p: Option<UfoParams>) -> Value {
        let fmt = |ks: &[Key]| Value::Array(ks.iter().map(|k| oracle.format_key(k)).collect());
        let mut v = json!({ "u": fmt(&self.u), "f": fmt(&self.f), "o": fmt(&self.o) });
        if let Some(p) = p {
            v["params"] = json!(p);
        }
        v
    }

    /// Reads `{"u":[..],"f":[..],"o":[..],"params":{..}}`; params are optional.
    pub fn from_json(oracle: &NeighborOracle, value: &Value) -> Result<(Ufo, Option<UfoParams>)> {
        let read = |name: &str| -> Result<Vec<Key>> {
            match value.get(name) {
                None => Ok(Vec::new()),
                Some(Value::Array(items)) => items
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        oracle.parse_key(v).map_err(|e| match e {
                            Error::Input(msg) => Error::Input(format!("{name}[{i}]: {msg}")),
                            other => other,
                        })
                    })
                    .collect(),
                Some(_) => input(format!("{name}: expected an array of vertices")),
            }
        };
        let ufo = Ufo { u: read("u")?, f: read("f")?, o: read("o")? };
        let params = match value.get("params") {
            None | Some(Value::Null) => None,
            Some(p) => Some(serde_json::from_value(p.clone()).map_err(|e| Error::Input(format!("params: {e}")))?),
        };
        Ok((ufo, params))
    }
}

/// The triple resolved to vertex ids of a ball, checked for disjointness.
#[derive(Clone, Debug)]
pub struct ResolvedUfo {
    pub u: Vec<u32>,
    pub f: Vec<u32>,
    pub o: Vec<u32>,
}

pub fn resolve(bg: &BoundedGraph, ufo: &Ufo) -> Result<ResolvedUfo> {
    let mut seen: HashSet<u32> = HashSet::new();
    let mut side = |name: &str, keys: &[Key]| -> Result<Vec<u32>> {
        let ids = bg.resolve(keys).map_err(|e| match e {
            Error::Input(msg) => Error::Input(format!("{name}: {msg}")),
            other => other,
        })?;
        for &v in &ids {
            if !seen.insert(v) {
                return input(format!(
                    "{name}: vertex {} appears twice or in two of U, F, O (the sets must be disjoint)",
                    bg.format_vertex(v)
                ));
            }
        }
        let mut ids = ids;
        ids.sort_unstable();
        Ok(ids)
    };
    Ok(ResolvedUfo { u: side("u", &ufo.u)?, f: side("f", &ufo.f)?, o: side("o", &ufo.o)? })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cond1 {
    pub holds: bool,
    pub u_size: usize,
    pub f_size: usize,
    /// `m·|F|`.
    pub required: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cond2 {
    pub holds: bool,
    /// Complete matching `(u, o)` sorted by `u`, when one exists.
    pub matching: Option<Vec<(u32, u32)>>,
    pub hall: Option<HallCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cond3 {
    pub holds: bool,
    /// Shortest F-avoiding U–O path found within `searched_cap`.
    pub min_avoiding_distance: Option<u32>,
    pub searched_cap: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UfoReport {
    pub params: UfoParams,
    pub cond1: Cond1,
    pub cond2: Cond2,
    pub cond3: Cond3,
    pub exact: bool,
    pub accept: bool,
    pub explanations: Vec<String>,
}

impl UfoReport {
    pub fn to_json(&self, bg: &BoundedGraph) -> Value {
        let vs = |ids: &[u32]| Value::Array(ids.iter().map(|&v| bg.format_vertex(v)).collect());
        let matching = self.cond2.matching.as_ref().map(|pairs| {
            Value::Array(pairs.iter().map(|&(u, o)| json!([bg.format_vertex(u), bg.format_vertex(o)])).collect())
        });
        let hall = self.cond2.hall.as_ref().map(|h| {
            json!({ "side": h.side.name(), "w": vs(&h.w), "neighborhood": vs(&h.neighborhood) })
        });
        json!({
            "params": self.params,
            "cond1": {
                "holds": self.cond1.holds,
                "u_size": self.cond1.u_size,
                "f_size": self.cond1.f_size,
                "required": self.cond1.required.to_string(),
            },
            "cond2": { "holds": self.cond2.holds, "matching": matching, "hall_certificate": hall },
            "cond3": {
                "holds": self.cond3.holds,
                "min_avoiding_distance": self.cond3.min_avoiding_distance,
                "searched_cap": self.cond3.searched_cap,
            },
            "exact": self.exact,
            "accept": self.accept,
            "explanations": self.explanations,
        })
    }
}

/// Checks the three UFO conditions for `ufo` at `p` inside `bg`.
///
/// Matching distances are taken with F present. Condition 3 searches for
/// F-avoiding U–O paths up to the largest cap the ball certifies (at least
/// `r − 1`), so the report also carries the minimum avoiding distance.
pub fn verify_ufo(bg: &BoundedGraph, ufo: &Ufo, p: UfoParams) -> Result<UfoReport> {
    let set = resolve(bg, ufo)?;
    verify_resolved(bg, &set, p)
}

pub fn verify_resolved(bg: &BoundedGraph, set: &ResolvedUfo, p: UfoParams) -> Result<UfoReport> {
    let mut explanations = Vec::new();

    let required = p.m as u128 * set.f.len() as u128;
    let cond1 = Cond1 { holds: set.u.len() as u128 >= required, u_size: set.u.len(), f_size: set.f.len(), required };
    if !cond1.holds {
        explanations.push(format!("condition 1 fails: |U| = {} < m|F| = {}", set.u.len(), required));
    }

    let need = p.k.max(p.r);
    let min_margin = set.u.iter().map(|&u| bg.margin(u)).min().unwrap_or(u32::MAX);
    let exact = min_margin >= need;
    if !exact {
        let worst = set.u.iter().copied().find(|&u| bg.margin(u) < need).unwrap();
        explanations.push(format!(
            "margin insufficient: U vertex {} has margin {} < max(k, r) = {}",
            bg.format_vertex(worst),
            bg.margin(worst),
            need
        ));
    }

    let cond2 = match bounded_matching(bg, &set.u, &set.o, p.k) {
        MatchingOutcome::Complete(pairs) => Cond2 { holds: true, matching: Some(pairs), hall: None },
        MatchingOutcome::Deficient(cert) => {
            explanations.push(format!(
                "condition 2 fails: {} vertices of {} have only {} partners within distance {}",
                cert.w.len(),
                cert.side.name(),
                cert.neighborhood.len(),
                p.k
            ));
            Cond2 { holds: false, matching: None, hall: Some(cert) }
        }
    };

    let cap = if bg.is_closed() {
        bg.len() as u32
    } else {
        min_margin.min(bg.radius()).max(p.r.saturating_sub(1))
    };
    let min_avoiding_distance = if set.u.is_empty() || set.o.is_empty() {
        None
    } else {
        bg.distance_avoiding(&set.u, &set.o, &set.f, cap)?.distance
    };
    let cond3 = Cond3 { holds: min_avoiding_distance.is_none_or(|d| d >= p.r), min_avoiding_distance, searched_cap: cap };
    if !cond3.holds {
        explanations.push(format!(
            "condition 3 fails: an F-avoiding U-O path of length {} < r = {}",
            min_avoiding_distance.unwrap(),
            p.r
        ));
    }

    let accept = cond1.holds && cond2.holds && cond3.holds && exact;
    Ok(UfoReport { params: p, cond1, cond2, cond3, exact, accept, explanations })
}

/// Exact maximum distance between `a` and `b`, failing when some pair is not
/// within the ball's certified range.
///
/// A ball distance `d(x, y)` is exact once `d ≤ 2R − depth(x) − depth(y)`:
/// every vertex of a true geodesic then has depth at most `R`.
pub(crate) fn max_distance(bg: &BoundedGraph, a: &[u32], b: &[u32]) -> Result<u32> {
    let mut scratch = BfsScratch::new();
    let mut best = 0;
    let reach = |v: u32| if bg.is_closed() { bg.len() as u32 } else { 2 * bg.radius() - bg.depth(v) };
    for &x in a {
        scratch.run(bg, &[x], None, reach(x));
        for &y in b {
            let d = scratch.dist(y);
            let certified = if bg.is_closed() { u32::MAX } else { (2 * bg.radius()).saturating_sub(bg.depth(x) + bg.depth(y)) };
            if d == NONE || d > certified {
                return input(format!(
                    "margin insufficient: the distance from {} to {} is not certified by a ball of radius {}",
                    bg.format_vertex(x),
                    bg.format_vertex(y),
                    bg.radius()
                ));
            }
            best = best.max(d);
        }
    }
    Ok(best)
}
