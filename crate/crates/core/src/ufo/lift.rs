use std::collections::{BTreeSet, HashSet};

use super::{verify_ufo, Ufo, UfoParams, UfoReport};
use crate::error::{input, Error, Result};
use crate::graphs::{BfsScratch, BoundedGraph, NeighborOracle, Subgroup};
use crate::groups::{Backend, Gen, GroupOracle, Key};

/// Supplies Følner sets of the subgroup `H`, in integer coordinates of `H`.
pub trait FolnerProvider {
    /// A finite `T ⊂ H` with `|TK ∖ T| ≤ |T|`.
    fn folner(&self, k: &[Vec<i64>]) -> Result<Vec<Vec<i64>>>;
}

/// Følner sets for `H ≅ Z^d`: `{0}` if it works, else the first cube
/// `[−s, s)^d` satisfying the inequality.
#[derive(Clone, Copy, Debug)]
pub struct BoxFolner {
    pub max_side: i64,
}

impl Default for BoxFolner {
    fn default() -> Self {
        BoxFolner { max_side: 64 }
    }
}

fn sum_set(t: &[Vec<i64>], k: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    for a in t {
        for b in k {
            out.insert(a.iter().zip(b).map(|(x, y)| x + y).collect());
        }
    }
    out
}

impl FolnerProvider for BoxFolner {
    fn folner(&self, k: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
        let Some(dim) = k.first().map(Vec::len) else {
            return Ok(vec![]);
        };
        let holds = |t: &[Vec<i64>]| {
            let tset: HashSet<&Vec<i64>> = t.iter().collect();
            sum_set(t, k).iter().filter(|x| !tset.contains(x)).count() <= t.len()
        };
        let origin = vec![vec![0; dim]];
        if holds(&origin) {
            return Ok(origin);
        }
        for s in 1..=self.max_side {
            let mut t = vec![Vec::new()];
            for _ in 0..dim {
                t = t
                    .into_iter()
                    .flat_map(|p: Vec<i64>| {
                        (-s..s).map(move |x| {
                            let mut q = p.clone();
                            q.push(x);
                            q
                        })
                    })
                    .collect();
            }
            if holds(&t) {
                return Ok(t);
            }
        }
        Err(Error::Rejected(format!("no Følner cube of side at most {} for K", 2 * self.max_side)))
    }
}

/// Integer coordinates of `h ∈ H`, or `None` when `h ∉ H`.
fn h_coords(group: &GroupOracle, subgroup: Subgroup, h: &Key) -> Result<Option<Vec<i64>>> {
    match (subgroup, group.backend(), h) {
        (Subgroup::CyclicA, Backend::BaumslagSolitar { .. }, Key::Ints(v)) => Ok((v.len() == 1).then(|| v.clone())),
        (Subgroup::FirstFactor, Backend::Product(fs), Key::Tuple(parts)) => {
            if !matches!(fs[0].backend(), Backend::FreeAbelian { .. }) {
                return input("lift needs the first factor to be free abelian (no other Følner provider)");
            }
            let trivial_rest = fs.iter().zip(parts).skip(1).all(|(f, p)| *p == f.identity());
            Ok(trivial_rest.then(|| parts[0].ints().expect("free abelian key").to_vec()))
        }
        _ => input("lift needs ⟨a⟩ in BS(m,n) or the first factor of a product"),
    }
}

fn h_element(group: &GroupOracle, subgroup: Subgroup, coords: &[i64]) -> Key {
    match (subgroup, group.backend()) {
        (Subgroup::CyclicA, _) => Key::Ints(coords.to_vec()),
        (Subgroup::FirstFactor, Backend::Product(fs)) => {
            let mut parts: Vec<Key> = fs.iter().map(GroupOracle::identity).collect();
            parts[0] = Key::Ints(coords.to_vec());
            Key::Tuple(parts)
        }
        _ => unreachable!("checked by h_coords"),
    }
}

#[derive(Clone, Debug)]
pub struct LiftResult {
    pub ufo: Ufo,
    pub params: UfoParams,
    /// Coset representatives `U′`, `F′` and the matched lifts `O′`.
    pub u_lift: Vec<Key>,
    pub f_lift: Vec<Key>,
    pub o_lift: Vec<Key>,
    /// `K_r` and `T`, in subgroup coordinates.
    pub heights: Vec<Vec<i64>>,
    pub folner: Vec<Vec<i64>>,
    pub ball: BoundedGraph,
    pub report: UfoReport,
}

/// Lifts a `(m_s, κ, r)`-UFO of the Schreier graph to `(TU′, TK_rF′, TO′)`
/// in the Cayley graph, with params `(⌊m_s/2⌋, κ, r)`.
pub fn lift_ufo(
    schreier: &BoundedGraph,
    ufo: &Ufo,
    p: UfoParams,
    provider: &dyn FolnerProvider,
    budget: usize,
) -> Result<LiftResult> {
    let NeighborOracle::Schreier { group, subgroup } = schreier.oracle() else {
        return input("lift needs a Schreier graph ball");
    };
    let (group, subgroup) = (group, *subgroup);
    h_coords(group, subgroup, &group.identity())?;
    let report = verify_ufo(schreier, ufo, p)?;
    if !report.accept {
        return Err(Error::Rejected(format!(
            "the Schreier triple is not a UFO at the given params: {}",
            report.explanations.join("; ")
        )));
    }
    let pairs = report.cond2.matching.clone().unwrap_or_default();

    // coset keys have trivial H-part, so they double as representatives
    let mut u_lift = Vec::new();
    let mut o_lift = Vec::new();
    for &(u, o) in &pairs {
        let labels = schreier.path_labels(u, o, p.k).expect("matched pairs are within distance k");
        let mut x = schreier.key(u).clone();
        for l in labels {
            group.apply_in_place(&mut x, l as Gen);
        }
        debug_assert_eq!(subgroup.normalize(group, &x), *schreier.key(o));
        u_lift.push(schreier.key(u).clone());
        o_lift.push(x);
    }
    let f_lift: Vec<Key> = ufo.f.clone();
    let f_cosets: HashSet<&Key> = f_lift.iter().collect();

    let cayley = NeighborOracle::Cayley(group.clone());
    let mut heights: BTreeSet<Vec<i64>> = BTreeSet::new();
    if !u_lift.is_empty() && !f_lift.is_empty() {
        let seeds: Vec<Key> = u_lift.iter().chain(&f_lift).cloned().collect();
        let near = BoundedGraph::build(&cayley, &seeds, p.r, budget)?;
        let sources = near.resolve(&u_lift)?;
        let mut scratch = BfsScratch::new();
        scratch.run(&near, &sources, None, p.r);
        for &v in scratch.reached() {
            let key = near.key(v);
            let coset = subgroup.normalize(group, key);
            if f_cosets.contains(&coset) {
                let h = group.multiply(key, &group.inverse(&coset));
                let c = h_coords(group, subgroup, &h)?.expect("v and its coset representative differ by H");
                heights.insert(c);
            }
        }
    }
    let heights: Vec<Vec<i64>> = heights.into_iter().collect();
    let folner = if u_lift.is_empty() && f_lift.is_empty() {
        Vec::new()
    } else {
        let k = if heights.is_empty() { vec![h_coords(group, subgroup, &group.identity())?.unwrap()] } else { heights.clone() };
        provider.folner(&k)?
    };

    let t_elems: Vec<Key> = folner.iter().map(|c| h_element(group, subgroup, c)).collect();
    let k_elems: Vec<Key> = heights.iter().map(|c| h_element(group, subgroup, c)).collect();
    let translate = |xs: &[Key]| -> Vec<Key> {
        let mut out: Vec<Key> = t_elems.iter().flat_map(|t| xs.iter().map(move |x| group.multiply(t, x))).collect();
        out.sort();
        out.dedup();
        out
    };
    let kf: Vec<Key> = k_elems.iter().flat_map(|h| f_lift.iter().map(move |f| group.multiply(h, f))).collect();
    let lifted = Ufo { u: translate(&u_lift), f: translate(&kf), o: translate(&o_lift) };
    let params = UfoParams::new(p.m / 2, p.k, p.r);
    let ball = lifted.ball(&cayley, params, budget)?;
    let report = verify_ufo(&ball, &lifted, params)?;
    Ok(LiftResult { ufo: lifted, params, u_lift, f_lift, o_lift, heights, folner, ball, report })
}
