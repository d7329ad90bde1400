//! Mirror-shift patterns on balls of a free group: `p`-equivalence,
//! coherence, the inductive greedy matching `M(p)` and the two forbidden
//! pattern rules. Also the greedy separating sets and the greedy
//! lexicographic matching bound used on UFOs.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{input, Error, Result};
use crate::graphs::{BoundedGraph, NONE};
use crate::groups::{Backend, Gen, GroupOracle, Key};
use crate::ufo::{bounded_matching, MatchingOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Star,
    U,
    O,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }
}

/// One letter of `Λ = {★,u,o} × {−,+} × {0,1}`, written `star+0`, `u-1`, ….
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub kind: Kind,
    pub sign: Sign,
    pub bit: bool,
}

impl Symbol {
    pub const COUNT: usize = 12;

    pub fn new(kind: Kind, sign: Sign, bit: bool) -> Self {
        Symbol { kind, sign, bit }
    }

    /// Position in `0..12`: kind, then sign, then bit.
    pub fn index(self) -> usize {
        let k = match self.kind {
            Kind::Star => 0,
            Kind::U => 1,
            Kind::O => 2,
        };
        k * 4 + (self.sign == Sign::Plus) as usize * 2 + self.bit as usize
    }

    pub fn from_index(i: usize) -> Self {
        assert!(i < Self::COUNT, "symbol index {i} out of range");
        let kind = [Kind::Star, Kind::U, Kind::O][i / 4];
        let sign = if (i / 2) % 2 == 1 { Sign::Plus } else { Sign::Minus };
        Symbol { kind, sign, bit: i % 2 == 1 }
    }

    /// The `Σ` component.
    pub fn sigma(self) -> (Kind, Sign) {
        (self.kind, self.sign)
    }

    pub fn parse(code: &str) -> Result<Self> {
        let (kind, rest) = if let Some(r) = code.strip_prefix("star") {
            (Kind::Star, r)
        } else if let Some(r) = code.strip_prefix('u') {
            (Kind::U, r)
        } else if let Some(r) = code.strip_prefix('o') {
            (Kind::O, r)
        } else {
            return input(format!("bad symbol code {code:?}"));
        };
        let (sign, bit) = match rest {
            "-0" => (Sign::Minus, false),
            "-1" => (Sign::Minus, true),
            "+0" => (Sign::Plus, false),
            "+1" => (Sign::Plus, true),
            _ => return input(format!("bad symbol code {code:?}")),
        };
        Ok(Symbol { kind, sign, bit })
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            Kind::Star => "star",
            Kind::U => "u",
            Kind::O => "o",
        };
        let s = if self.sign == Sign::Plus { '+' } else { '-' };
        write!(f, "{k}{s}{}", self.bit as u8)
    }
}

/// The ball `B_R` of a free group, indexed in shortlex order, so that
/// `B_r` is always the prefix `0..size(r)`.
#[derive(Clone, Debug)]
pub struct FreeBall {
    group: GroupOracle,
    radius: usize,
    words: Vec<Vec<Gen>>,
    index: HashMap<Vec<Gen>, u32>,
    sizes: Vec<usize>,
}

impl FreeBall {
    pub fn new(rank: usize, radius: usize) -> Result<Self> {
        let group = GroupOracle::free(rank)?;
        let words: Vec<Vec<Gen>> = group.shortlex_enumerate(radius).into_iter().map(|(w, _)| w).collect();
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
        let mut sizes = vec![0; radius + 1];
        for w in &words {
            sizes[w.len()] += 1;
        }
        for r in 1..=radius {
            sizes[r] += sizes[r - 1];
        }
        Ok(FreeBall { group, radius, words, index, sizes })
    }

    pub fn rank(&self) -> usize {
        self.group.generators().len() / 2
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn group(&self) -> &GroupOracle {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// `|B_r|` for `r ≤ radius`.
    pub fn size(&self, r: usize) -> usize {
        self.sizes[r.min(self.radius)]
    }

    pub fn word(&self, i: u32) -> &[Gen] {
        &self.words[i as usize]
    }

    pub fn index_of(&self, reduced: &[Gen]) -> Option<u32> {
        self.index.get(reduced).copied()
    }

    /// Index of `g·t`, if it lies in the ball.
    pub fn product(&self, g: u32, t: u32) -> Option<u32> {
        let mut w = self.words[g as usize].clone();
        w.extend_from_slice(&self.words[t as usize]);
        self.index_of(&self.group.generators().free_reduce(&w))
    }

    pub fn inverse(&self, g: u32) -> u32 {
        let w = self.group.generators().invert_word(&self.words[g as usize]);
        self.index[&w]
    }

    pub fn format(&self, i: u32) -> String {
        self.group.generators().format_word(&self.words[i as usize])
    }

    pub fn parse(&self, text: &str) -> Result<u32> {
        let gens = self.group.generators();
        let w = gens.free_reduce(&gens.parse_word(text)?);
        match self.index_of(&w) {
            Some(i) => Ok(i),
            None => input(format!("{text:?} is outside the ball of radius {}", self.radius)),
        }
    }
}

/// A pattern `p ∈ Λ^{B_{(A+1)k}}` on a free group.
#[derive(Clone, Debug)]
pub struct Pattern {
    k: usize,
    a: usize,
    ball: Arc<FreeBall>,
    values: Vec<Symbol>,
}

impl Pattern {
    pub fn ball_for(rank: usize, k: usize, a: usize) -> Result<Arc<FreeBall>> {
        check_ka(k, a)?;
        Ok(Arc::new(FreeBall::new(rank, (a + 1) * k)?))
    }

    pub fn new(rank: usize, k: usize, a: usize, values: Vec<Symbol>) -> Result<Self> {
        Self::with_ball(Self::ball_for(rank, k, a)?, k, a, values)
    }

    pub fn with_ball(ball: Arc<FreeBall>, k: usize, a: usize, values: Vec<Symbol>) -> Result<Self> {
        check_ka(k, a)?;
        if ball.radius() != (a + 1) * k {
            return input(format!("ball radius {} is not (A+1)k = {}", ball.radius(), (a + 1) * k));
        }
        if values.len() != ball.len() {
            return input(format!("pattern has {} values for a ball of {} elements", values.len(), ball.len()));
        }
        Ok(Pattern { k, a, ball, values })
    }

    pub fn from_fn(rank: usize, k: usize, a: usize, mut f: impl FnMut(&[Gen]) -> Symbol) -> Result<Self> {
        let ball = Self::ball_for(rank, k, a)?;
        let values = (0..ball.len() as u32).map(|i| f(ball.word(i))).collect();
        Self::with_ball(ball, k, a, values)
    }

    pub fn rank(&self) -> usize {
        self.ball.rank()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn ball(&self) -> &FreeBall {
        &self.ball
    }

    pub fn values(&self) -> &[Symbol] {
        &self.values
    }

    pub fn get(&self, i: u32) -> Symbol {
        self.values[i as usize]
    }

    pub fn set(&mut self, i: u32, s: Symbol) {
        self.values[i as usize] = s;
    }

    /// `|B_k|`; the elements of `B_k` are the indices below this.
    pub fn inner_len(&self) -> usize {
        self.ball.size(self.k)
    }

    /// `p|_{B_{(A+1)k'}}` for `1 ≤ k' ≤ k`, with the same `A`.
    pub fn restrict(&self, k: usize) -> Result<Pattern> {
        if k == 0 || k > self.k {
            return input(format!("cannot restrict a k={} pattern to k={k}", self.k));
        }
        let ball = Self::ball_for(self.rank(), k, self.a)?;
        let values = (0..ball.len() as u32)
            .map(|i| self.values[self.ball.index_of(ball.word(i)).expect("smaller ball") as usize])
            .collect();
        Self::with_ball(ball, k, self.a, values)
    }

    /// The same pattern with every `±` swapped.
    pub fn flip_signs(&self) -> Pattern {
        let mut p = self.clone();
        for s in &mut p.values {
            s.sign = s.sign.flip();
        }
        p
    }

    pub fn to_json(&self) -> Value {
        let mut values = Map::new();
        for (i, s) in self.values.iter().enumerate() {
            values.insert(self.ball.format(i as u32), Value::String(s.to_string()));
        }
        json!({ "rank": self.rank(), "k": self.k, "A": self.a, "values": values })
    }

    pub fn from_json(value: &Value) -> Result<Pattern> {
        let field = |name: &str| -> Result<usize> {
            match value.get(name).and_then(Value::as_u64) {
                Some(x) => Ok(x as usize),
                None => input(format!("{name}: expected a non-negative integer")),
            }
        };
        let (rank, k, a) = (field("rank")?, field("k")?, field("A")?);
        let Some(map) = value.get("values").and_then(Value::as_object) else {
            return input("values: expected an object from words to symbol codes");
        };
        let ball = Self::ball_for(rank, k, a)?;
        let mut values: Vec<Option<Symbol>> = vec![None; ball.len()];
        for (word, code) in map {
            let i = ball.parse(word).map_err(|e| Error::Input(format!("values[{word:?}]: {e}")))?;
            let Some(code) = code.as_str() else {
                return input(format!("values[{word:?}]: expected a symbol code string"));
            };
            let s = Symbol::parse(code).map_err(|e| Error::Input(format!("values[{word:?}]: {e}")))?;
            if values[i as usize].replace(s).is_some() {
                return input(format!("values[{word:?}]: position given twice"));
            }
        }
        if let Some(i) = values.iter().position(Option::is_none) {
            return input(format!("values: missing position {:?}", ball.format(i as u32)));
        }
        Self::with_ball(ball, k, a, values.into_iter().map(Option::unwrap).collect())
    }

    /// Bit signature of each `g ∈ B_k`: `p_{0,1}(gt)` for `t ∈ B_{kA}`.
    fn signatures(&self) -> Vec<Vec<bool>> {
        let outer = self.ball.size(self.k * self.a) as u32;
        (0..self.inner_len() as u32)
            .map(|g| {
                (0..outer)
                    .map(|t| self.values[self.ball.product(g, t).expect("gt stays in B_(A+1)k") as usize].bit)
                    .collect()
            })
            .collect()
    }

    /// `≃_p` class label of each element of `B_k` (its least member).
    pub fn classes(&self) -> Vec<u32> {
        let mut first: HashMap<Vec<bool>, u32> = HashMap::new();
        self.signatures()
            .into_iter()
            .enumerate()
            .map(|(g, sig)| *first.entry(sig).or_insert(g as u32))
            .collect()
    }

    fn inner_index(&self, word: &[Gen]) -> Result<u32> {
        let w = self.ball.group().generators().free_reduce(word);
        match self.ball.index_of(&w) {
            Some(i) if (i as usize) < self.inner_len() => Ok(i),
            _ => input(format!("{:?} is not in B_{}", self.ball.group().generators().format_word(&w), self.k)),
        }
    }
}

fn check_ka(k: usize, a: usize) -> Result<()> {
    if k == 0 || a == 0 {
        return input("k and A must be positive");
    }
    Ok(())
}

/// `g ≃_p h` for `g, h ∈ B_k`.
pub fn p_equiv(p: &Pattern, g: &[Gen], h: &[Gen]) -> Result<bool> {
    let (g, h) = (p.inner_index(g)?, p.inner_index(h)?);
    let outer = p.ball.size(p.k * p.a) as u32;
    Ok((0..outer).all(|t| {
        let x = p.ball.product(g, t).expect("in ball");
        let y = p.ball.product(h, t).expect("in ball");
        p.values[x as usize].bit == p.values[y as usize].bit
    }))
}

pub fn is_coherent(p: &Pattern) -> bool {
    let classes = p.classes();
    classes.iter().enumerate().all(|(g, &c)| p.values[g].sigma() == p.values[c as usize].sigma())
}

/// One step `i` of the matching procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchStep {
    pub i: usize,
    pub w: u32,
    /// Removed by the boundary rule before matching.
    pub removed: Vec<u32>,
    pub added: Vec<(u32, u32)>,
    /// `A_i(p)` at the end of the step.
    pub available: Vec<u32>,
}

/// `M(p)` with its construction trace; indices refer to the pattern's ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PMatching {
    pub pairs: Vec<(u32, u32)>,
    pub initial: Vec<u32>,
    pub steps: Vec<MatchStep>,
}

impl PMatching {
    pub fn to_json(&self, ball: &FreeBall) -> Value {
        let words = |xs: &[u32]| -> Value { xs.iter().map(|&x| Value::String(ball.format(x))).collect() };
        let pairs = |xs: &[(u32, u32)]| -> Value {
            xs.iter().map(|&(g, h)| json!([ball.format(g), ball.format(h)])).collect()
        };
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| {
                json!({
                    "i": s.i,
                    "w": ball.format(s.w),
                    "removed": words(&s.removed),
                    "added": pairs(&s.added),
                    "available": words(&s.available),
                })
            })
            .collect();
        json!({ "pairs": pairs(&self.pairs), "initial": words(&self.initial), "steps": steps })
    }
}

/// Runs the inductive greedy matching on a coherent pattern.
///
/// Conventions where the procedure is ambiguous:
/// (a) the boundary test for `g ∈ U(p)` at step `i` uses `w_{i+1}` and is
/// skipped at the last step; (b) boundary removals precede matching;
/// (c) candidates `(g, g·w_i)` are scanned in shortlex order of `g`;
/// (d) an element removed at step `i` cannot be matched at step `i`.
pub fn build_matching(p: &Pattern) -> Result<PMatching> {
    if !is_coherent(p) {
        return Err(Error::NotApplicable("pattern is not coherent".into()));
    }
    let ball = &p.ball;
    let inner = p.inner_len() as u32;
    let classes = p.classes();
    let kind = |g: u32| p.values[g as usize].kind;
    let in_inner = |x: Option<u32>| x.is_some_and(|x| x < inner);

    let mut avail: Vec<bool> = (0..inner).map(|g| kind(g) != Kind::Star).collect();
    let initial: Vec<u32> = (0..inner).filter(|&g| avail[g as usize]).collect();
    let ws: Vec<u32> = (1..inner).collect();
    let m = ws.len();
    let mut pairs = Vec::new();
    let mut steps = Vec::with_capacity(m);
    for i in 1..=m {
        let w = ws[i - 1];
        let w_inv = ball.inverse(w);
        let mut removed = Vec::new();
        for g in 0..inner {
            if !avail[g as usize] {
                continue;
            }
            let drop = match kind(g) {
                Kind::U => i < m && !in_inner(ball.product(g, ws[i])),
                Kind::O => !in_inner(ball.product(g, w_inv)),
                Kind::Star => unreachable!(),
            };
            if drop {
                avail[g as usize] = false;
                removed.push(g);
            }
        }
        let mut added = Vec::new();
        for g in 0..inner {
            if !avail[g as usize] || kind(g) != Kind::U {
                continue;
            }
            let Some(h) = ball.product(g, w).filter(|&h| h < inner) else { continue };
            if !avail[h as usize] || kind(h) != Kind::O {
                continue;
            }
            added.push((g, h));
            let (cg, ch) = (classes[g as usize], classes[h as usize]);
            for t in 0..inner {
                let c = classes[t as usize];
                if c == cg || c == ch {
                    avail[t as usize] = false;
                }
            }
        }
        pairs.extend_from_slice(&added);
        let available = (0..inner).filter(|&g| avail[g as usize]).collect();
        steps.push(MatchStep { i, w, removed, added, available });
    }
    Ok(PMatching { pairs, initial, steps })
}

/// Every pair of `M(p)` carries equal signs. Needs a coherent pattern.
pub fn is_matched(p: &Pattern) -> Result<bool> {
    let m = build_matching(p)?;
    Ok(m.pairs.iter().all(|&(g, h)| p.get(g).sign == p.get(h).sign))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    CoherenceViolation,
    MatchingViolation,
    Allowed,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::CoherenceViolation => "COHERENCE_VIOLATION",
            Verdict::MatchingViolation => "MATCHING_VIOLATION",
            Verdict::Allowed => "ALLOWED",
        }
    }
}

pub fn is_forbidden(p: &Pattern) -> Verdict {
    if !is_coherent(p) {
        return Verdict::CoherenceViolation;
    }
    match is_matched(p) {
        Ok(true) => Verdict::Allowed,
        Ok(false) => Verdict::MatchingViolation,
        Err(_) => unreachable!("coherence checked above"),
    }
}

/// Lazily walks all of `Λ^{B_{(A+1)k}}` (identity position varying fastest)
/// and yields the forbidden patterns, stopping after `budget` patterns.
pub struct ForbiddenPatterns {
    ball: Arc<FreeBall>,
    k: usize,
    a: usize,
    digits: Vec<u8>,
    budget: u64,
    examined: u64,
    exhausted: bool,
}

impl ForbiddenPatterns {
    pub fn new(rank: usize, k: usize, a: usize, budget: u64) -> Result<Self> {
        let ball = Pattern::ball_for(rank, k, a)?;
        let digits = vec![0; ball.len()];
        Ok(ForbiddenPatterns { ball, k, a, digits, budget, examined: 0, exhausted: false })
    }

    pub fn examined(&self) -> u64 {
        self.examined
    }

    /// True once every pattern has been examined.
    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    /// `12^|B|`, when it fits.
    pub fn total(&self) -> Option<u128> {
        (Symbol::COUNT as u128).checked_pow(self.ball.len() as u32)
    }

    pub fn ball(&self) -> &Arc<FreeBall> {
        &self.ball
    }

    fn advance(&mut self) {
        for d in &mut self.digits {
            *d += 1;
            if (*d as usize) < Symbol::COUNT {
                return;
            }
            *d = 0;
        }
        self.exhausted = true;
    }
}

impl Iterator for ForbiddenPatterns {
    type Item = (Pattern, Verdict);

    fn next(&mut self) -> Option<Self::Item> {
        while !self.exhausted && self.examined < self.budget {
            let values = self.digits.iter().map(|&d| Symbol::from_index(d as usize)).collect();
            let p = Pattern::with_ball(self.ball.clone(), self.k, self.a, values).expect("sizes agree");
            self.examined += 1;
            self.advance();
            let v = is_forbidden(&p);
            if v != Verdict::Allowed {
                return Some((p, v));
            }
        }
        None
    }
}

#[derive(Clone, Debug)]
pub struct SeparatingSet {
    /// `T`, in shortlex order of insertion.
    pub t: Vec<Key>,
    pub ball_k: usize,
    pub ball_ka: usize,
    /// `3|T| ≥ A|B_k|`.
    pub bound_holds: bool,
}

/// `B_{kA}` in shortlex order, enumerated once for many calls of
/// [`SeparationBall::greedy`].
#[derive(Clone, Debug)]
pub struct SeparationBall {
    oracle: GroupOracle,
    k: usize,
    a: usize,
    keys: Vec<Key>,
    lookup: Lookup,
    ball_k: usize,
}

#[derive(Clone, Debug)]
enum Lookup {
    Hashed(HashMap<Key, u32>),
    /// Free groups: the ball as a tree, `child[i·L + g]` being `w_i·g`
    /// (or [`NONE`] past the radius). Left products are walks, which stay
    /// inside the ball whenever the product does.
    Tree { words: Vec<Vec<Gen>>, child: Vec<u32>, labels: usize },
}

impl SeparationBall {
    pub fn new(oracle: &GroupOracle, k: usize, a: usize) -> Self {
        let radius = k * a;
        let (keys, lookup, ball_k) = if let Backend::Free { .. } = oracle.backend() {
            let gens = oracle.generators();
            let labels = gens.len();
            let mut words: Vec<Vec<Gen>> = vec![Vec::new()];
            let mut parent: Vec<u32> = vec![NONE];
            let mut child = vec![NONE; labels];
            let mut layer = 0..1;
            for _ in 0..radius {
                let next_start = words.len();
                for i in layer.clone() {
                    for g in 0..labels as Gen {
                        if words[i].last() == Some(&gens.inverse(g)) {
                            continue;
                        }
                        let mut w = words[i].clone();
                        w.push(g);
                        child[i * labels + g as usize] = words.len() as u32;
                        words.push(w);
                        parent.push(i as u32);
                        child.extend(std::iter::repeat_n(NONE, labels));
                    }
                }
                layer = next_start..words.len();
            }
            for (i, w) in words.iter().enumerate().skip(1) {
                let back = gens.inverse(*w.last().expect("nonempty"));
                child[i * labels + back as usize] = parent[i];
            }
            let ball_k = words.iter().filter(|w| w.len() <= k).count();
            let keys = words.iter().map(|w| Key::Word(w.clone())).collect();
            (keys, Lookup::Tree { words, child, labels }, ball_k)
        } else {
            let ball = oracle.shortlex_enumerate(radius);
            let ball_k = ball.iter().filter(|(w, _)| w.len() <= k).count();
            let keys: Vec<Key> = ball.into_iter().map(|(_, x)| x).collect();
            let index = keys.iter().enumerate().map(|(i, x)| (x.clone(), i as u32)).collect();
            (keys, Lookup::Hashed(index), ball_k)
        };
        SeparationBall { oracle: oracle.clone(), k, a, keys, lookup, ball_k }
    }

    /// Index of `x·y` for ball elements, when it lies in the ball.
    fn left_product(&self, x: &Key, y: u32) -> Option<u32> {
        match &self.lookup {
            Lookup::Hashed(index) => index.get(&self.oracle.multiply(x, &self.keys[y as usize])).copied(),
            Lookup::Tree { words, child, labels } => {
                let Key::Word(xw) = x else { unreachable!("free group keys are words") };
                let mut cur = 0u32;
                for &g in xw.iter().chain(&words[y as usize]) {
                    cur = child[cur as usize * labels + g as usize];
                    if cur == NONE {
                        return None;
                    }
                }
                Some(cur)
            }
        }
    }

    /// Greedy maximal `T ⊂ B_{kA}` with `T ∩ sT = ∅`: `t` is added when
    /// neither `s·t` nor `s⁻¹·t` is already in `T`.
    pub fn greedy(&self, s: &Key) -> Result<SeparatingSet> {
        let oracle = &self.oracle;
        oracle.check_key(s)?;
        if *s == oracle.identity() {
            return input("s must not be the identity");
        }
        let len = oracle.word_of(s).len();
        if len > self.k {
            return input(format!("|s| = {len} exceeds k = {}", self.k));
        }
        let s_inv = oracle.inverse(s);
        let mut chosen = vec![false; self.keys.len()];
        let mut t = Vec::new();
        for i in 0..self.keys.len() {
            let hit = |z: &Key| self.left_product(z, i as u32).is_some_and(|j| chosen[j as usize]);
            if hit(s) || hit(&s_inv) {
                continue;
            }
            chosen[i] = true;
            t.push(self.keys[i].clone());
        }
        let bound_holds = 3 * t.len() as u128 >= self.a as u128 * self.ball_k as u128;
        Ok(SeparatingSet { t, ball_k: self.ball_k, ball_ka: self.keys.len(), bound_holds })
    }
}

/// One-shot form of [`SeparationBall::greedy`].
pub fn greedy_separating_set(oracle: &GroupOracle, s: &Key, k: usize, a: usize) -> Result<SeparatingSet> {
    if *s == oracle.identity() {
        return input("s must not be the identity");
    }
    SeparationBall::new(oracle, k, a).greedy(s)
}

#[derive(Clone, Debug)]
pub struct GreedyBound {
    pub pairs: Vec<(u32, u32)>,
    pub u_size: usize,
    /// `2|M_g| ≥ |U|`.
    pub holds: bool,
}

/// Greedy lexicographic matching: label words `w` of length `1..=k` in
/// shortlex order, and for each, every unused `g ∈ U` in key order is paired
/// with `g·w` when that is an unused vertex of `O`.
pub fn greedy_matching_bound(bg: &BoundedGraph, u: &[u32], o: &[u32], k: u32) -> Result<GreedyBound> {
    if let MatchingOutcome::Deficient(c) = bounded_matching(bg, u, o, k) {
        return Err(Error::NotApplicable(format!(
            "no complete matching by paths of length at most {k} ({} vertices of {} have {} partners)",
            c.w.len(),
            c.side.name(),
            c.neighborhood.len()
        )));
    }
    let mut in_o = vec![false; bg.len()];
    for &v in o {
        in_o[v as usize] = true;
    }
    let mut starts = u.to_vec();
    starts.sort_by(|&x, &y| bg.key(x).cmp(bg.key(y)));
    let mut used = vec![false; bg.len()];
    let mut pairs = Vec::new();
    let labels = bg.label_count();
    for len in 1..=k as usize {
        if pairs.len() == u.len() {
            break;
        }
        let live: Vec<(u32, u32)> = starts.iter().filter(|&&g| !used[g as usize]).map(|&g| (g, g)).collect();
        extend_words(bg, labels, len, live, &in_o, &mut used, &mut pairs);
    }
    let holds = 2 * pairs.len() >= u.len();
    Ok(GreedyBound { pairs, u_size: u.len(), holds })
}

/// Depth-first over label words of exactly `left` more letters, in
/// lexicographic order; `live` holds `(start, current position)`.
fn extend_words(
    bg: &BoundedGraph,
    labels: usize,
    left: usize,
    live: Vec<(u32, u32)>,
    in_o: &[bool],
    used: &mut [bool],
    pairs: &mut Vec<(u32, u32)>,
) {
    if left == 0 {
        for (g, h) in live {
            if !used[g as usize] && in_o[h as usize] && !used[h as usize] {
                used[g as usize] = true;
                used[h as usize] = true;
                pairs.push((g, h));
            }
        }
        return;
    }
    for l in 0..labels {
        let next: Vec<(u32, u32)> = live
            .iter()
            .filter(|&&(g, _)| !used[g as usize])
            .filter_map(|&(g, x)| {
                let y = bg.step(x, l);
                (y != NONE).then_some((g, y))
            })
            .collect();
        if !next.is_empty() {
            extend_words(bg, labels, left - 1, next, in_o, used, pairs);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(code: &str) -> Symbol {
        Symbol::parse(code).unwrap()
    }

    /// Rank 1, k = A = 1, bits 1,0,0,1,0 on (1, a, a⁻¹, a², a⁻²), so the
    /// three signatures on `B_1` are distinct.
    fn golden(kinds: [&str; 3]) -> Pattern {
        let bits = [1, 0, 0, 1, 0];
        let mut values: Vec<Symbol> = bits.iter().map(|&b| sym(&format!("star+{b}"))).collect();
        for (i, k) in kinds.iter().enumerate() {
            values[i] = sym(&format!("{k}+{}", bits[i]));
        }
        Pattern::new(1, 1, 1, values).unwrap()
    }

    #[test]
    fn symbols_round_trip() {
        for i in 0..Symbol::COUNT {
            let s = Symbol::from_index(i);
            assert_eq!(s.index(), i);
            assert_eq!(Symbol::parse(&s.to_string()).unwrap(), s);
        }
        assert_eq!(sym("star+0").to_string(), "star+0");
        assert!(Symbol::parse("x+0").is_err());
        assert!(Symbol::parse("u+2").is_err());
    }

    #[test]
    fn ball_sizes() {
        let b = FreeBall::new(2, 3).unwrap();
        assert_eq!((b.size(0), b.size(1), b.size(2), b.size(3)), (1, 5, 17, 53));
        assert_eq!(b.format(0), "");
        assert_eq!(b.parse("a a_inv b").unwrap(), b.parse("b").unwrap());
    }

    #[test]
    fn equivalence_examples() {
        let constant = Pattern::from_fn(1, 1, 1, |_| sym("star+0")).unwrap();
        assert!(p_equiv(&constant, &[], &[0]).unwrap());
        let spike = Pattern::from_fn(1, 1, 1, |w| if w.is_empty() { sym("star+1") } else { sym("star+0") }).unwrap();
        assert!(!p_equiv(&spike, &[], &[0]).unwrap());
        assert!(p_equiv(&spike, &[1], &[1]).unwrap());
        assert!(p_equiv(&spike, &[0, 0], &[]).is_err());
    }

    #[test]
    fn coherence_examples() {
        assert!(is_coherent(&Pattern::from_fn(2, 1, 1, |_| sym("u-1")).unwrap()));
        let two = Pattern::from_fn(1, 1, 1, |w| if w.is_empty() { sym("u+0") } else { sym("o+0") }).unwrap();
        assert!(!is_coherent(&two));
        assert_eq!(is_forbidden(&two), Verdict::CoherenceViolation);
        assert!(build_matching(&two).is_err());
        assert!(is_coherent(&golden(["o", "u", "star"])));
    }

    #[test]
    fn golden_trace_u_inverse_o_identity() {
        let p = golden(["o", "star", "u"]);
        let m = build_matching(&p).unwrap();
        assert_eq!(
            m.to_json(p.ball()).to_string(),
            r#"{"pairs":[],"initial":["","a_inv"],"steps":[{"i":1,"w":"a","removed":["a_inv"],"added":[],"available":[""]},{"i":2,"w":"a_inv","removed":[],"added":[],"available":[""]}]}"#
        );
        assert_eq!(is_forbidden(&p), Verdict::Allowed);
    }

    #[test]
    fn golden_trace_u_identity_o_a() {
        let p = golden(["u", "o", "star"]);
        let m = build_matching(&p).unwrap();
        assert_eq!(
            m.to_json(p.ball()).to_string(),
            r#"{"pairs":[["","a"]],"initial":["","a"],"steps":[{"i":1,"w":"a","removed":[],"added":[["","a"]],"available":[]},{"i":2,"w":"a_inv","removed":[],"added":[],"available":[]}]}"#
        );
        assert_eq!(is_forbidden(&p), Verdict::Allowed);
        let mut q = p.clone();
        q.set(1, sym("o-0"));
        assert_eq!(is_forbidden(&q), Verdict::MatchingViolation);
        assert_eq!(is_forbidden(&q.flip_signs()), Verdict::MatchingViolation);
    }

    #[test]
    fn no_u_means_empty_matching() {
        let p = golden(["o", "o", "star"]);
        assert!(build_matching(&p).unwrap().pairs.is_empty());
        let q = golden(["u", "u", "star"]);
        assert!(build_matching(&q).unwrap().pairs.is_empty());
    }

    #[test]
    fn pattern_json_round_trip() {
        let p = golden(["u", "o", "star"]);
        let text = p.to_json().to_string();
        assert_eq!(
            text,
            r#"{"rank":1,"k":1,"A":1,"values":{"":"u+1","a":"o+0","a_inv":"star+0","a a":"star+1","a_inv a_inv":"star+0"}}"#
        );
        let back = Pattern::from_json(&p.to_json()).unwrap();
        assert_eq!(back.values(), p.values());
        let mut broken = p.to_json();
        broken["values"].as_object_mut().unwrap().remove("a a");
        assert!(Pattern::from_json(&broken).unwrap_err().to_string().contains("missing position \"a a\""));
    }

    #[test]
    fn restrict_keeps_values() {
        let p = Pattern::from_fn(1, 2, 1, |w| if w.len() % 2 == 0 { sym("u+1") } else { sym("o-0") }).unwrap();
        let q = p.restrict(1).unwrap();
        assert_eq!(q.ball().len(), 5);
        assert_eq!(q.values()[3], sym("u+1"));
    }

    #[test]
    fn forbidden_stream_respects_budget() {
        let mut s = ForbiddenPatterns::new(1, 1, 1, 30).unwrap();
        let first = s.next().unwrap();
        // identity symbol varies first; star-1 breaks the all-zero class
        assert_eq!(first.1, Verdict::CoherenceViolation);
        let rest = s.by_ref().count();
        assert_eq!(s.examined(), 30);
        assert!(rest < 30);
        assert!(!s.is_exhausted());
        assert_eq!(s.total(), Some(248_832));
    }

    #[test]
    fn separating_set_on_z() {
        let z = GroupOracle::free_abelian(1).unwrap();
        let one = z.evaluate_str("x").unwrap();
        let t = greedy_separating_set(&z, &one, 1, 3).unwrap();
        let ints: Vec<i64> = t.t.iter().map(|k| k.ints().unwrap()[0]).collect();
        assert_eq!(ints, vec![0, 2, -2]);
        assert_eq!((t.ball_k, t.ball_ka), (3, 7));
        assert!(t.bound_holds);
        assert!(greedy_separating_set(&z, &z.identity(), 1, 3).is_err());
    }

    #[test]
    fn separating_set_on_free_group() {
        let f = GroupOracle::free(2).unwrap();
        let a = f.evaluate_str("a").unwrap();
        let t = greedy_separating_set(&f, &a, 1, 3).unwrap();
        assert_eq!(t.ball_ka, 53);
        assert!(t.t.len() >= 5);
        assert!(t.bound_holds);
    }
}
