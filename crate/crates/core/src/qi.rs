//! Transfer of UFOs across quasi-isometries, with the explicit constants.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{input, Error, Result};
use crate::graphs::{BfsScratch, BoundedGraph, NONE};
use crate::groups::Key;
use crate::ufo::{resolve, verify_resolved, ResolvedUfo, Ufo, UfoParams, UfoReport};

/// Quasi-isometry constants: `d/A − B ≤ d′ ≤ A·d + B`, image `C`-dense.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QiConstants {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

impl QiConstants {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) || a < 1.0 || b < 0.0 || c < 0.0 {
            return input(format!("constants: need A >= 1 and B, C >= 0, got ({a}, {b}, {c})"));
        }
        Ok(QiConstants { a, b, c })
    }

    /// Parses `"A,B,C"`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<f64> = text
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Input(format!("constants: bad number {s:?}"))))
            .collect::<Result<_>>()?;
        match parts[..] {
            [a, b, c] => QiConstants::new(a, b, c),
            _ => input(format!("constants: expected A,B,C, got {text:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DerivedConstants {
    pub alpha: f64,
    pub m_prime: i64,
    pub k_prime: u32,
    pub r_prime: u32,
    #[serde(rename = "D")]
    pub d: u64,
}

impl DerivedConstants {
    /// Integer radius used for `F′`.
    pub fn alpha_radius(&self) -> u32 {
        self.alpha.ceil() as u32
    }
}

/// `α = A²(1+B+2C)+B+C`, `m′ = ⌊m/D^{2AB+α} − 2⌋`, `k′ = ⌈k(A+B)⌉`,
/// `r′ = ⌈r/(A(1+B+2C))⌉`.
///
/// `m′` lies in `[−2, m−2]`, so huge powers simply drive it to `−2`.
pub fn derived_constants(qc: QiConstants, d: u64, p: UfoParams) -> Result<DerivedConstants> {
    if d == 0 {
        return input("derived_constants needs D >= 1");
    }
    let QiConstants { a, b, c } = qc;
    let spread = 1.0 + b + 2.0 * c;
    let alpha = a * a * spread + b + c;
    let exponent = 2.0 * a * b + alpha;
    let ratio = p.m as f64 / (d as f64).powf(exponent);
    let m_prime = ratio.floor() as i64 - 2;
    let k_prime = (p.k as f64 * (a + b)).ceil();
    let r_prime = (p.r as f64 / (a * spread)).ceil();
    if k_prime > u32::MAX as f64 {
        return input("k' overflows");
    }
    Ok(DerivedConstants { alpha, m_prime, k_prime: k_prime as u32, r_prime: r_prime as u32, d })
}

/// A vertex map from one ball into another, indexed by source vertex id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QiMap {
    image: Vec<u32>,
}

impl QiMap {
    pub fn new(g: &BoundedGraph, g2: &BoundedGraph, image: Vec<u32>) -> Result<Self> {
        if image.len() != g.len() {
            return input(format!("map: has {} entries for {} vertices", image.len(), g.len()));
        }
        if let Some(v) = image.iter().position(|&w| w as usize >= g2.len()) {
            return input(format!("map: image of {} is outside the target ball", g.format_vertex(v as u32)));
        }
        Ok(QiMap { image })
    }

    /// Builds the map from a key function; every image must lie in `g2`.
    pub fn from_fn(g: &BoundedGraph, g2: &BoundedGraph, f: impl Fn(&Key) -> Key) -> Result<Self> {
        let mut image = Vec::with_capacity(g.len());
        for v in 0..g.len() as u32 {
            let w = f(g.key(v));
            match g2.id_of(&w) {
                Some(id) => image.push(id),
                None => {
                    return input(format!(
                        "map: image {} of {} is outside the target ball",
                        g2.oracle().format_key(&w),
                        g.format_vertex(v)
                    ))
                }
            }
        }
        Ok(QiMap { image })
    }

    /// Reads `{"pairs": [[key, key′], ...]}`; must cover every vertex of `g`.
    pub fn from_json(g: &BoundedGraph, g2: &BoundedGraph, value: &Value) -> Result<Self> {
        let Some(pairs) = value.get("pairs").and_then(Value::as_array) else {
            return input("map.pairs: expected an array of [key, key'] pairs");
        };
        let mut image = vec![NONE; g.len()];
        for (i, pair) in pairs.iter().enumerate() {
            let (Some(x), Some(y)) = (pair.get(0), pair.get(1)) else {
                return input(format!("map.pairs[{i}]: expected [key, key']"));
            };
            let at = |e: Error| match e {
                Error::Input(m) => Error::Input(format!("map.pairs[{i}]: {m}")),
                other => other,
            };
            let kx = g.oracle().parse_key(x).map_err(at)?;
            let ky = g2.oracle().parse_key(y).map_err(at)?;
            let (Some(vx), Some(vy)) = (g.id_of(&kx), g2.id_of(&ky)) else {
                return input(format!("map.pairs[{i}]: vertex outside its ball"));
            };
            image[vx as usize] = vy;
        }
        if let Some(v) = image.iter().position(|&w| w == NONE) {
            return input(format!("map: no image given for {}", g.format_vertex(v as u32)));
        }
        Ok(QiMap { image })
    }

    pub fn to_json(&self, g: &BoundedGraph, g2: &BoundedGraph) -> Value {
        let pairs: Vec<Value> =
            self.image.iter().enumerate().map(|(v, &w)| json!([g.format_vertex(v as u32), g2.format_vertex(w)])).collect();
        json!({ "pairs": pairs })
    }

    pub fn apply(&self, v: u32) -> u32 {
        self.image[v as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QiViolation {
    pub kind: &'static str,
    pub v1: Value,
    pub v2: Value,
    pub d: u32,
    pub d_prime: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QiCheck {
    pub holds: bool,
    pub pairs_checked: u64,
    pub pairs_skipped: u64,
    pub density_checked: u64,
    pub violation: Option<QiViolation>,
}

/// Largest ball distance from `x` that is guaranteed to be the true distance to `y`.
fn certified(bg: &BoundedGraph, x: u32, y: u32) -> u32 {
    if bg.is_closed() {
        u32::MAX
    } else {
        (2 * bg.radius()).saturating_sub(bg.depth(x) + bg.depth(y))
    }
}

fn bfs_cap(bg: &BoundedGraph, x: u32) -> u32 {
    if bg.is_closed() {
        bg.len() as u32
    } else {
        2 * bg.radius() - bg.depth(x)
    }
}

/// Checks the two distance inequalities on pairs whose distances the balls
/// certify, and `C`-density of the image on the interior of `g2`.
/// With `stride > 1` only every `stride`-th source vertex is used.
pub fn qi_check_on_ball(g: &BoundedGraph, g2: &BoundedGraph, f: &QiMap, qc: QiConstants, stride: usize) -> QiCheck {
    let mut out = QiCheck { holds: true, pairs_checked: 0, pairs_skipped: 0, density_checked: 0, violation: None };
    let mut s1 = BfsScratch::new();
    let mut s2 = BfsScratch::new();
    let eps = 1e-9;
    'outer: for x in (0..g.len() as u32).step_by(stride.max(1)) {
        s1.run(g, &[x], None, bfs_cap(g, x));
        let fx = f.apply(x);
        s2.run(g2, &[fx], None, bfs_cap(g2, fx));
        for y in 0..g.len() as u32 {
            let d = s1.dist(y);
            let fy = f.apply(y);
            let d2 = s2.dist(fy);
            if d == NONE || d > certified(g, x, y) || d2 == NONE || d2 > certified(g2, fx, fy) {
                out.pairs_skipped += 1;
                continue;
            }
            out.pairs_checked += 1;
            let (df, d2f) = (d as f64, d2 as f64);
            let kind = if d2f > qc.a * df + qc.b + eps {
                Some("upper")
            } else if df / qc.a - qc.b > d2f + eps {
                Some("lower")
            } else {
                None
            };
            if let Some(kind) = kind {
                out.holds = false;
                out.violation = Some(QiViolation { kind, v1: g.format_vertex(x), v2: g.format_vertex(y), d, d_prime: d2 });
                break 'outer;
            }
        }
    }
    if out.holds {
        let c = qc.c.floor() as u32;
        let image: Vec<u32> = {
            let mut im: Vec<u32> = (0..g.len() as u32).map(|v| f.apply(v)).collect();
            im.sort_unstable();
            im.dedup();
            im
        };
        s2.run(g2, &image, None, c);
        for w in 0..g2.len() as u32 {
            if g2.margin(w) < c {
                continue;
            }
            out.density_checked += 1;
            if s2.dist(w) == NONE {
                out.holds = false;
                out.violation =
                    Some(QiViolation { kind: "density", v1: g2.format_vertex(w), v2: Value::Null, d: c, d_prime: NONE });
                break;
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct Transfer {
    pub ufo: Ufo,
    pub derived: DerivedConstants,
    /// Params used for verification: `(max(m′, 0), k′, r′)`.
    pub params: UfoParams,
    pub cond1_vacuous: bool,
    /// `M″` as pairs of source-ball ids, `M′` as pairs of target-ball ids.
    pub m_second: Vec<(u32, u32)>,
    pub m_prime: Vec<(u32, u32)>,
    pub f_prime: Vec<u32>,
    pub separation_holds: bool,
    pub size_bound_holds: bool,
    pub report: UfoReport,
}

impl Transfer {
    pub fn to_json(&self, g: &BoundedGraph, g2: &BoundedGraph) -> Value {
        let pairs = |ps: &[(u32, u32)], bg: &BoundedGraph| -> Value {
            ps.iter().map(|&(a, b)| json!([bg.format_vertex(a), bg.format_vertex(b)])).collect()
        };
        json!({
            "derived": self.derived,
            "params": self.params,
            "cond1_vacuous": self.cond1_vacuous,
            "ufo": self.ufo.to_json(g2.oracle(), Some(self.params)),
            "f_prime_size": self.f_prime.len(),
            "m_second": pairs(&self.m_second, g),
            "m_prime": pairs(&self.m_prime, g2),
            "separation_holds": self.separation_holds,
            "size_bound_holds": self.size_bound_holds,
            "report": self.report.to_json(g2),
        })
    }
}

/// Pushes a verified UFO of `g` through `f` into `g2`.
///
/// `matching` is a complete ≤k matching of the UFO (as returned by the
/// verifier); when `None` it is recomputed.
pub fn transfer_ufo(
    g: &BoundedGraph,
    g2: &BoundedGraph,
    f: &QiMap,
    qc: QiConstants,
    ufo: &Ufo,
    p: UfoParams,
    matching: Option<&[(u32, u32)]>,
) -> Result<Transfer> {
    let set = resolve(g, ufo)?;
    let owned;
    let matching = match matching {
        Some(m) => m,
        None => {
            let rep = verify_resolved(g, &set, p)?;
            if !rep.cond2.holds {
                return Err(Error::Rejected("the source triple has no complete matching within k".into()));
            }
            owned = rep.cond2.matching.unwrap_or_default();
            &owned
        }
    };
    let d = g.max_degree().max(g2.max_degree()).max(1) as u64;
    let derived = derived_constants(qc, d, p)?;
    let alpha_r = derived.alpha_radius();

    // F′: closed ⌈α⌉-neighborhood of f(F)
    let f_img: Vec<u32> = set.f.iter().map(|&v| f.apply(v)).collect();
    if let Some(&w) = f_img.iter().find(|&&w| g2.margin(w) < alpha_r) {
        return input(format!("margin insufficient: f(F) vertex {} has margin < ⌈α⌉ = {alpha_r}", g2.format_vertex(w)));
    }
    let mut scratch = BfsScratch::new();
    let f_prime: Vec<u32> = if f_img.is_empty() {
        Vec::new()
    } else {
        scratch.run(g2, &f_img, None, alpha_r);
        let mut v = scratch.reached().to_vec();
        v.sort_unstable();
        v
    };
    let in_f_prime: HashSet<u32> = f_prime.iter().copied().collect();

    // M″: greedy AB-separated submatching, pairs ordered by the key of u
    let ab = qc.a * qc.b;
    let ab_floor = ab.floor() as u32;
    let mut pairs: Vec<(u32, u32)> = matching.to_vec();
    pairs.sort_by(|x, y| g.key(x.0).cmp(g.key(y.0)));
    let mut m_second: Vec<(u32, u32)> = Vec::new();
    let far = |scr: &mut BfsScratch, x: u32, others: &[u32]| -> Result<bool> {
        scr.run(g, &[x], None, ab_floor);
        for &y in others {
            if scr.dist(y) != NONE {
                return Ok(false);
            }
            if certified(g, x, y) < ab_floor {
                return input(format!(
                    "margin insufficient: cannot certify d({}, {}) > AB",
                    g.format_vertex(x),
                    g.format_vertex(y)
                ));
            }
        }
        Ok(true)
    };
    for &(u, o) in &pairs {
        let us: Vec<u32> = m_second.iter().map(|p| p.0).collect();
        let os: Vec<u32> = m_second.iter().map(|p| p.1).collect();
        // min(d(u1,u2), d(o1,o2)) > AB  ⇔  both distances exceed AB
        if far(&mut scratch, u, &us)? && far(&mut scratch, o, &os)? {
            m_second.push((u, o));
        }
    }

    let m_prime: Vec<(u32, u32)> = m_second
        .iter()
        .map(|&(u, o)| (f.apply(u), f.apply(o)))
        .filter(|(fu, fo)| !in_f_prime.contains(fu) && !in_f_prime.contains(fo))
        .collect();
    let separation_holds = check_separation(g, &m_second, ab);
    let size_bound_holds = m_prime.len() as i64 >= m_second.len() as i64 - 2 * f_prime.len() as i64;

    let mut u2: Vec<u32> = m_prime.iter().map(|p| p.0).collect();
    let mut o2: Vec<u32> = m_prime.iter().map(|p| p.1).collect();
    u2.sort_unstable();
    o2.sort_unstable();
    let need = alpha_r + derived.k_prime + derived.r_prime;
    if let Some(&w) = u2.iter().find(|&&w| g2.margin(w) < need) {
        return input(format!(
            "margin insufficient: U' vertex {} needs margin ⌈α⌉ + k' + r' = {need} in the target ball",
            g2.format_vertex(w)
        ));
    }
    let params = UfoParams::new(derived.m_prime.max(0) as u64, derived.k_prime, derived.r_prime);
    let resolved = ResolvedUfo { u: u2.clone(), f: f_prime.clone(), o: o2.clone() };
    if resolved.u.iter().any(|x| resolved.o.binary_search(x).is_ok()) {
        return Err(Error::Rejected("the projections of M' overlap".into()));
    }
    let report = verify_resolved(g2, &resolved, params)?;
    let keys = |ids: &[u32]| ids.iter().map(|&v| g2.key(v).clone()).collect::<Vec<_>>();
    Ok(Transfer {
        ufo: Ufo { u: keys(&u2), f: keys(&f_prime), o: keys(&o2) },
        derived,
        params,
        cond1_vacuous: derived.m_prime <= 0,
        m_second,
        m_prime,
        f_prime,
        separation_holds,
        size_bound_holds,
        report,
    })
}

/// Direct check that every two pairs of `m` satisfy `min(d(u1,u2), d(o1,o2)) > AB`.
pub fn check_separation(g: &BoundedGraph, m: &[(u32, u32)], ab: f64) -> bool {
    let mut scratch = BfsScratch::new();
    let cap = ab.floor() as u32;
    for (i, &(u1, o1)) in m.iter().enumerate() {
        scratch.run(g, &[u1], None, cap);
        let du: Vec<u32> = m[i + 1..].iter().map(|&(u2, _)| scratch.dist(u2)).collect();
        scratch.run(g, &[o1], None, cap);
        for (j, &(_, o2)) in m[i + 1..].iter().enumerate() {
            let d = du[j].min(scratch.dist(o2));
            if d != NONE && d as f64 <= ab {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::NeighborOracle;
    use crate::groups::GroupOracle;

    #[test]
    fn constant_examples() {
        let p = UfoParams::new(1, 4, 18);
        let dc = derived_constants(QiConstants::new(1.0, 0.0, 0.0).unwrap(), 4, p).unwrap();
        assert_eq!((dc.alpha, dc.k_prime, dc.r_prime, dc.m_prime), (1.0, 4, 18, -2));
        let dc = derived_constants(QiConstants::new(1.0, 1.0, 1.0).unwrap(), 3, p).unwrap();
        assert_eq!(dc.alpha, 6.0);
        let dc = derived_constants(QiConstants::new(2.0, 0.0, 1.0).unwrap(), 2, UfoParams::new(1, 3, 18)).unwrap();
        assert_eq!((dc.k_prime, dc.r_prime), (6, 3));
    }

    #[test]
    fn bad_constants() {
        assert!(QiConstants::new(0.5, 0.0, 0.0).is_err());
        assert!(QiConstants::parse("1,2").is_err());
        assert_eq!(QiConstants::parse("2, 0, 1").unwrap(), QiConstants { a: 2.0, b: 0.0, c: 1.0 });
    }

    fn line(radius: u32) -> BoundedGraph {
        let z = NeighborOracle::Cayley(GroupOracle::free_abelian(1).unwrap());
        BoundedGraph::build(&z, &[Key::Ints(vec![0])], radius, 10_000).unwrap()
    }

    #[test]
    fn doubling_is_a_qi() {
        let (g, g2) = (line(6), line(12));
        let f = QiMap::from_fn(&g, &g2, |k| Key::Ints(vec![2 * k.ints().unwrap()[0]])).unwrap();
        let chk = qi_check_on_ball(&g, &g2, &f, QiConstants::new(2.0, 0.0, 1.0).unwrap(), 1);
        assert!(chk.holds, "{chk:?}");
        assert!(chk.pairs_checked > 0);
    }

    #[test]
    fn constant_map_fails() {
        let g = line(3);
        let f = QiMap::new(&g, &g, vec![0; g.len()]).unwrap();
        let chk = qi_check_on_ball(&g, &g, &f, QiConstants::new(1.0, 0.0, 0.0).unwrap(), 1);
        assert!(!chk.holds);
        assert_eq!(chk.violation.unwrap().kind, "lower");
    }
}
