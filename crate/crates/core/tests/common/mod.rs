//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ufolab::mirror::{Kind, Pattern, Symbol};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------- explicit graphs and exhaustive UFO checking ----------

/// Random simple graph on `n` vertices with about `n·deg/2` edges.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, deg: f64) -> Vec<Vec<u32>> {
    let p = (deg / n.max(2) as f64).min(1.0);
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                adj[i].push(j as u32);
                adj[j].push(i as u32);
            }
        }
    }
    adj
}

/// Random disjoint `(U, F, O)` of the given sizes.
pub fn random_triple(rng: &mut ChaCha8Rng, n: usize, su: usize, sf: usize, so: usize) -> (Vec<u32>, Vec<u32>, Vec<u32>) {
    let mut ids: Vec<u32> = (0..n as u32).collect();
    ids.shuffle(rng);
    let u = ids[..su].to_vec();
    let f = ids[su..su + sf].to_vec();
    let o = ids[su + sf..su + sf + so].to_vec();
    (u, f, o)
}

/// All-pairs distances by Floyd–Warshall (`u32::MAX / 4` = unreachable).
pub fn floyd(adj: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let n = adj.len();
    let inf = u32::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for &j in &adj[i] {
            d[i][j as usize] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

fn permutations(items: &[u32]) -> Vec<Vec<u32>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Is there a bijection `U → O` moving every vertex at most `k`?
pub fn brute_matching(dist: &[Vec<u32>], u: &[u32], o: &[u32], k: u32) -> bool {
    u.len() == o.len()
        && permutations(o).iter().any(|perm| u.iter().zip(perm).all(|(&x, &y)| dist[x as usize][y as usize] <= k))
}

/// Is there a simple path of length `< r` from `U` to `O` that never enters `F`?
pub fn brute_short_avoiding_path(adj: &[Vec<u32>], u: &[u32], f: &[u32], o: &[u32], r: u32) -> bool {
    fn dfs(adj: &[Vec<u32>], v: u32, len: u32, r: u32, blocked: &mut Vec<bool>, o: &[u32]) -> bool {
        if o.contains(&v) {
            return true;
        }
        if len + 1 >= r {
            return false;
        }
        for &w in &adj[v as usize] {
            if !blocked[w as usize] {
                blocked[w as usize] = true;
                let found = dfs(adj, w, len + 1, r, blocked, o);
                blocked[w as usize] = false;
                if found {
                    return true;
                }
            }
        }
        false
    }
    if r == 0 {
        return false;
    }
    let mut blocked = vec![false; adj.len()];
    for &x in f {
        blocked[x as usize] = true;
    }
    u.iter().any(|&s| {
        blocked[s as usize] = true;
        let hit = dfs(adj, s, 0, r, &mut blocked, o);
        blocked[s as usize] = false;
        hit
    })
}

/// `(cond1, cond2, cond3)` by exhaustive enumeration.
#[allow(clippy::too_many_arguments)]
pub fn brute_ufo(adj: &[Vec<u32>], dist: &[Vec<u32>], u: &[u32], f: &[u32], o: &[u32], m: u64, k: u32, r: u32) -> (bool, bool, bool) {
    (
        u.len() as u64 >= m * f.len() as u64,
        brute_matching(dist, u, o, k),
        !brute_short_avoiding_path(adj, u, f, o, r),
    )
}

// ---------- rational transfer constants ----------

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn ceil(x: &BigRational) -> BigInt {
    x.ceil().to_integer()
}

/// `(α, m′, k′, r′)` in exact arithmetic; `m′` via the integer comparison
/// `q^s · D^p ≤ m^s` for the exponent `p/s = 2AB + α`.
pub fn exact_constants(a: &BigRational, b: &BigRational, c: &BigRational, d: u64, m: u64, k: u32, r: u32) -> (BigRational, i64, BigInt, BigInt) {
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    let spread = &one + b + &two * c;
    let alpha = a * a * &spread + b + c;
    let e = &two * a * b + &alpha;
    let (p, s) = (e.numer().clone(), e.denom().clone());
    let s_u = s.to_u32().expect("small denominator");
    let p_u = p.to_u32().expect("small numerator");
    let lhs_d = BigInt::from(d).pow(p_u);
    let ms = BigInt::from(m).pow(s_u);
    let ok = |q: u64| BigInt::from(q).pow(s_u) * &lhs_d <= ms;
    let (mut lo, mut hi) = (0u64, m + 1);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let kq = ceil(&(BigRational::from_integer(BigInt::from(k)) * (a + b)));
    let rq = ceil(&(BigRational::from_integer(BigInt::from(r)) / (a * &spread)));
    (alpha, lo as i64 - 2, kq, rq)
}

pub fn rational_of(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

// ---------- BS(1, n) as affine maps x ↦ s·x + t ----------

#[derive(Clone, Debug, PartialEq)]
pub struct Affine {
    pub s: BigRational,
    pub t: BigRational,
}

impl Affine {
    pub fn id() -> Self {
        Affine { s: BigRational::one(), t: BigRational::zero() }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Affine) -> Affine {
        Affine { s: &self.s * &other.s, t: &self.s * &other.t + &self.t }
    }
}

/// Faithful image of a word of BS(1, n) (generators a, a⁻¹, b, b⁻¹ as 0..4)
/// with `a ↦ x+1`, `b ↦ n·x`, products composed left to right.
pub fn affine_bs1(n: i64, word: &[u8]) -> Affine {
    let nn = ratio(n, 1);
    let gen = |g: u8| match g {
        0 => Affine { s: BigRational::one(), t: BigRational::one() },
        1 => Affine { s: BigRational::one(), t: -BigRational::one() },
        2 => Affine { s: nn.clone(), t: BigRational::zero() },
        3 => Affine { s: nn.recip(), t: BigRational::zero() },
        _ => unreachable!(),
    };
    word.iter().fold(Affine::id(), |acc, &g| acc.compose(&gen(g)))
}

pub fn is_negative(x: &BigRational) -> bool {
    x.is_negative()
}

// ---------- rank-1 mirror patterns over the integers ----------

/// Word index of the integer `z` in a rank-1 pattern's ball.
pub fn z_index(p: &Pattern, z: i64) -> u32 {
    let w: Vec<u8> = if z >= 0 { vec![0; z as usize] } else { vec![1; (-z) as usize] };
    p.ball().index_of(&w).expect("inside the ball")
}

pub fn z_symbol(p: &Pattern, z: i64) -> Symbol {
    p.get(z_index(p, z))
}

/// `0, 1, −1, 2, −2, …, k, −k`: shortlex order of `B_k` in rank 1.
pub fn z_shortlex(k: i64) -> Vec<i64> {
    let mut out = vec![0];
    for i in 1..=k {
        out.push(i);
        out.push(-i);
    }
    out
}

pub fn z_equiv(p: &Pattern, g: i64, h: i64) -> bool {
    let ka = (p.k() * p.a()) as i64;
    (-ka..=ka).all(|t| z_symbol(p, g + t).bit == z_symbol(p, h + t).bit)
}

pub fn z_coherent(p: &Pattern) -> bool {
    let k = p.k() as i64;
    for g in -k..=k {
        for h in -k..=k {
            if z_equiv(p, g, h) && z_symbol(p, g).sigma() != z_symbol(p, h).sigma() {
                return false;
            }
        }
    }
    true
}

/// The matching procedure re-run on integers; pairs as `(g, h)`.
pub fn z_matching(p: &Pattern) -> Vec<(i64, i64)> {
    let k = p.k() as i64;
    let order = z_shortlex(k);
    let ws: Vec<i64> = order[1..].to_vec();
    let m = ws.len();
    let kind = |z: i64| z_symbol(p, z).kind;
    let mut avail: Vec<i64> = order.iter().copied().filter(|&z| kind(z) != Kind::Star).collect();
    let mut pairs = Vec::new();
    for i in 0..m {
        let w = ws[i];
        avail.retain(|&g| match kind(g) {
            Kind::U => !(i + 1 < m && (g + ws[i + 1]).abs() > k),
            Kind::O => (g - w).abs() <= k,
            Kind::Star => unreachable!(),
        });
        for &g in &order {
            if !avail.contains(&g) || kind(g) != Kind::U {
                continue;
            }
            let h = g + w;
            if avail.contains(&h) && kind(h) == Kind::O {
                pairs.push((g, h));
                avail.retain(|&t| !z_equiv(p, t, g) && !z_equiv(p, t, h));
            }
        }
    }
    pairs
}

pub fn z_matched(p: &Pattern) -> bool {
    z_matching(p).iter().all(|&(g, h)| z_symbol(p, g).sign == z_symbol(p, h).sign)
}

pub fn random_symbol(rng: &mut ChaCha8Rng) -> Symbol {
    Symbol::from_index(rng.gen_range(0..Symbol::COUNT))
}
