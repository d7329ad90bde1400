use super::{max_distance, resolve, Ufo, UfoParams};
use crate::error::{input, Error, Result};
use crate::graphs::{BoundedGraph, NeighborOracle, NONE};
use crate::groups::Key;

/// Output of the data-driven constructions (`amenable_ufo`, `multiended_ufo`).
#[derive(Clone, Debug)]
pub struct Construction {
    pub ufo: Ufo,
    /// `k` is the exact maximum U–O distance; `r` is the cap up to which the
    /// ball certifies that U and O are disconnected once F is removed.
    pub params: UfoParams,
    /// True when removing F leaves no U–O path inside the ball at all.
    pub disconnected: bool,
}

fn cube(lo: &[i64], hi: &[i64]) -> Vec<Key> {
    let mut out = vec![Vec::new()];
    for (a, b) in lo.iter().zip(hi) {
        let mut next = Vec::new();
        for prefix in &out {
            for x in *a..=*b {
                let mut p: Vec<i64> = prefix.clone();
                p.push(x);
                next.push(p);
            }
        }
        out = next;
    }
    out.into_iter().map(Key::Ints).collect()
}

/// The three boxes of the `Z^d` family, with params `(m, 3^{d−1}m + 1, 2r + 4)`.
pub fn zd_ufo(d: usize, m: u64, r: u32) -> Result<(Ufo, UfoParams)> {
    if d < 2 {
        return input(format!("zd_ufo needs d >= 2, got d = {d}"));
    }
    if m == 0 || r == 0 {
        return input("zd_ufo needs m >= 1 and r >= 1");
    }
    let h = 3i64
        .checked_pow(d as u32 - 1)
        .and_then(|p| p.checked_mul(m as i64))
        .ok_or_else(|| Error::Input("zd_ufo: 3^(d-1) m overflows".into()))?;
    let r = r as i64;
    let t = d - 1;
    let with_last = |lo: i64, hi: i64, side_lo: i64, side_hi: i64| {
        let mut l = vec![side_lo; t];
        let mut u = vec![side_hi; t];
        l.push(lo);
        u.push(hi);
        cube(&l, &u)
    };
    let ufo = Ufo {
        u: with_last(-h, -1, 0, r - 1),
        f: with_last(0, 0, -r, 2 * r - 1),
        o: with_last(1, h, 0, r - 1),
    };
    let k = u32::try_from(h + 1).map_err(|_| Error::Input("zd_ufo: k overflows".into()))?;
    Ok((ufo, UfoParams::new(m, k, 2 * r as u32 + 4)))
}

/// The pentagon-model triple with params `(m, 6m + 1, r)`.
pub fn pentagon_ufo(m: u64, r: u32) -> Result<(Ufo, UfoParams)> {
    if m == 0 || r == 0 {
        return input("pentagon_ufo needs m >= 1 and r >= 1");
    }
    let (m3, r) = (3 * m as i64, r as i64);
    let u = cube(&[-m3, 0], &[-1, r - 1]);
    let f = cube(&[0, -r], &[0, 2 * r - 1]);
    let o = cube(&[1, 0], &[m3, r - 1]);
    Ok((Ufo { u, f, o }, UfoParams::new(m, 6 * m as u32 + 1, r as u32)))
}

fn certified_cap(bg: &BoundedGraph, u: &[u32]) -> u32 {
    u.iter().map(|&v| bg.margin(v)).min().unwrap_or(0).min(bg.len() as u32)
}

fn finish(bg: &BoundedGraph, u: Vec<u32>, f: Vec<u32>, o: Vec<u32>, m: u64) -> Result<Construction> {
    let k = max_distance(bg, &u, &o)?;
    let cap = certified_cap(bg, &u);
    let reach = bg.distance_avoiding(&u, &o, &f, cap)?;
    let keys = |ids: &[u32]| ids.iter().map(|&v| bg.key(v).clone()).collect::<Vec<_>>();
    Ok(Construction {
        ufo: Ufo { u: keys(&u), f: keys(&f), o: keys(&o) },
        params: UfoParams::new(m, k, cap),
        disconnected: reach.distance.is_none(),
    })
}

/// Følner construction: `F = US ∖ U`, `O` the first `|U|` ball vertices
/// outside `U ∪ F` in depth-then-key order.
pub fn amenable_ufo(bg: &BoundedGraph, folner: &[Key], m: u64) -> Result<Construction> {
    if !matches!(bg.oracle(), NeighborOracle::Cayley(_)) {
        return input("amenable_ufo needs a Cayley graph");
    }
    let u = resolve(bg, &Ufo { u: folner.to_vec(), ..Ufo::default() })?.u;
    if u.is_empty() {
        return input("amenable_ufo needs a nonempty Følner set");
    }
    let mut in_u = vec![false; bg.len()];
    for &v in &u {
        if bg.margin(v) == 0 {
            return input(format!("margin insufficient: {} lies on the ball boundary", bg.format_vertex(v)));
        }
        in_u[v as usize] = true;
    }
    let mut f: Vec<u32> = u.iter().flat_map(|&v| bg.neighbors(v).iter().copied()).filter(|&w| !in_u[w as usize]).collect();
    f.sort_unstable();
    f.dedup();
    if m as u128 * f.len() as u128 > u.len() as u128 {
        return Err(Error::Rejected(format!(
            "Følner inequality fails: |US \\ U| = {} > |U|/m = {}/{} (ratio {:.4})",
            f.len(),
            u.len(),
            m,
            f.len() as f64 / u.len() as f64
        )));
    }
    let mut taken = in_u;
    for &v in &f {
        taken[v as usize] = true;
    }
    let o: Vec<u32> = (0..bg.len() as u32).filter(|&v| !taken[v as usize]).take(u.len()).collect();
    if o.len() < u.len() {
        return input(format!("margin insufficient: only {} vertices outside U ∪ F, need {}", o.len(), u.len()));
    }
    finish(bg, u, f, o, m)
}

/// Cut-set construction: `U` and `O` are the first `m|F|` vertices of the two
/// boundary-reaching components of `ball ∖ F` with the smallest vertex ids.
pub fn multiended_ufo(bg: &BoundedGraph, cut: &[Key], m: u64) -> Result<Construction> {
    let f = resolve(bg, &Ufo { f: cut.to_vec(), ..Ufo::default() })?.f;
    if f.is_empty() {
        return input("multiended_ufo needs a nonempty cut set");
    }
    let mut comp = vec![NONE; bg.len()];
    for &v in &f {
        comp[v as usize] = NONE - 1;
    }
    let mut components: Vec<Vec<u32>> = Vec::new();
    for s in 0..bg.len() as u32 {
        if comp[s as usize] != NONE {
            continue;
        }
        let c = components.len() as u32;
        comp[s as usize] = c;
        let mut members = vec![s];
        let mut i = 0;
        while i < members.len() {
            let v = members[i];
            i += 1;
            for &w in bg.neighbors(v) {
                if comp[w as usize] == NONE {
                    comp[w as usize] = c;
                    members.push(w);
                }
            }
        }
        members.sort_unstable();
        if bg.is_closed() || members.iter().any(|&v| bg.depth(v) == bg.radius()) {
            components.push(members);
        } else {
            // bounded pieces are not candidates
            for &v in &members {
                comp[v as usize] = NONE - 2;
            }
        }
    }
    if components.len() < 2 {
        return Err(Error::Rejected(format!(
            "removing F leaves {} component(s) reaching the ball boundary, need 2",
            components.len()
        )));
    }
    let want = (m as usize).saturating_mul(f.len());
    let (a, b) = (&components[0], &components[1]);
    if a.len() < want || b.len() < want {
        return input(format!("margin insufficient: components hold {} and {} vertices, need {want} each", a.len(), b.len()));
    }
    finish(bg, a[..want].to_vec(), f, b[..want].to_vec(), m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupOracle;
    use crate::ufo::verify_ufo;

    #[test]
    fn zd_examples() {
        let (ufo, p) = zd_ufo(2, 1, 2).unwrap();
        assert_eq!(p, UfoParams::new(1, 4, 8));
        assert_eq!(ufo.u, cube(&[0, -3], &[1, -1]));
        assert_eq!(ufo.f, cube(&[-2, 0], &[3, 0]));
        assert_eq!(ufo.o, cube(&[0, 1], &[1, 3]));
        let (ufo, p) = zd_ufo(2, 2, 1).unwrap();
        assert_eq!(p, UfoParams::new(2, 7, 6));
        assert_eq!((ufo.u.len(), ufo.f.len(), ufo.o.len()), (6, 3, 6));
        let (ufo, p) = zd_ufo(3, 1, 1).unwrap();
        assert_eq!(p, UfoParams::new(1, 10, 6));
        assert_eq!((ufo.u.len(), ufo.f.len(), ufo.o.len()), (9, 9, 9));
        assert!(zd_ufo(1, 1, 1).is_err());
    }

    #[test]
    fn zd_2_1_2_verifies() {
        let (ufo, p) = zd_ufo(2, 1, 2).unwrap();
        let oracle = NeighborOracle::Cayley(GroupOracle::free_abelian(2).unwrap());
        let bg = ufo.ball(&oracle, p, 1 << 20).unwrap();
        assert!(verify_ufo(&bg, &ufo, p).unwrap().accept);
    }

    #[test]
    fn pentagon_examples() {
        let (ufo, p) = pentagon_ufo(1, 2).unwrap();
        assert_eq!((ufo.u.len(), ufo.f.len(), p), (6, 6, UfoParams::new(1, 7, 2)));
        let (ufo, p) = pentagon_ufo(2, 1).unwrap();
        assert_eq!(p, UfoParams::new(2, 13, 1));
        assert_eq!(ufo.u, cube(&[-6, 0], &[-1, 0]));
        assert_eq!(ufo.f, cube(&[0, -1], &[0, 1]));
        assert_eq!(ufo.o, cube(&[1, 0], &[6, 0]));
    }

    fn z(d: usize) -> NeighborOracle {
        NeighborOracle::Cayley(GroupOracle::free_abelian(d).unwrap())
    }

    #[test]
    fn amenable_examples() {
        let line = BoundedGraph::build(&z(1), &cube(&[0], &[3]), 6, 1000).unwrap();
        let c = amenable_ufo(&line, &cube(&[0], &[3]), 2).unwrap();
        assert_eq!(c.ufo.f, vec![Key::Ints(vec![-1]), Key::Ints(vec![4])]);
        assert!(c.disconnected);

        let folner = cube(&[0, 0], &[3, 3]);
        let plane = BoundedGraph::build(&z(2), &folner, 6, 10_000).unwrap();
        let c = amenable_ufo(&plane, &folner, 1).unwrap();
        assert_eq!((c.ufo.f.len(), c.ufo.o.len()), (16, 16));
        assert!(c.disconnected);

        let small = cube(&[0, 0], &[1, 1]);
        let plane = BoundedGraph::build(&z(2), &small, 4, 10_000).unwrap();
        assert!(matches!(amenable_ufo(&plane, &small, 3), Err(Error::Rejected(_))));
    }

    #[test]
    fn multiended_examples() {
        let f2 = NeighborOracle::Cayley(GroupOracle::free(2).unwrap());
        let bg = BoundedGraph::build(&f2, &[f2.base_vertex()], 6, 100_000).unwrap();
        let c = multiended_ufo(&bg, &[f2.base_vertex()], 3).unwrap();
        let g = f2.group().unwrap();
        let words: Vec<String> = c.ufo.u.iter().map(|k| g.format_key(k).as_str().unwrap().to_string()).collect();
        assert_eq!(words, vec!["a", "a a", "a b"]);
        assert!(c.disconnected);

        let line = BoundedGraph::build(&z(1), &[Key::Ints(vec![0])], 5, 100).unwrap();
        let c = multiended_ufo(&line, &[Key::Ints(vec![0])], 2).unwrap();
        assert!(c.ufo.u.iter().all(|k| k.ints().unwrap()[0] < 0));
        assert!(c.ufo.o.iter().all(|k| k.ints().unwrap()[0] > 0));

        let plane = BoundedGraph::build(&z(2), &[Key::Ints(vec![0, 0])], 5, 1000).unwrap();
        assert!(matches!(multiended_ufo(&plane, &[Key::Ints(vec![0, 0])], 1), Err(Error::Rejected(_))));
    }
}
