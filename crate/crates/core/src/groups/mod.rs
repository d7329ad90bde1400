//! Word-problem backends for finitely generated groups.
//!
//! Every backend produces canonical [`Key`]s: two keys are equal iff the
//! group elements they name are equal. Keys are acted on by right
//! multiplication with generators, which is all the Cayley and Schreier
//! graph machinery needs.

pub mod bs;
mod spec;

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use serde_json::Value;

use crate::error::{input, Result};

pub use spec::{GeneratorSpec, GroupSpec};

/// Index of a generator symbol inside its [`GeneratorSet`].
pub type Gen = u8;

/// Ordered symmetric generating set. The order on symbols is index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    names: Vec<String>,
    inverse: Vec<Gen>,
}

impl GeneratorSet {
    pub fn new(names: Vec<String>, inverse: Vec<Gen>) -> Result<Self> {
        if names.len() != inverse.len() {
            return input("generator names and inverse table differ in length");
        }
        if names.len() > Gen::MAX as usize {
            return input("too many generators");
        }
        let mut seen = HashSet::new();
        for name in &names {
            if name.is_empty() || name.contains(char::is_whitespace) || name.contains('^') {
                return input(format!("invalid generator name {name:?}"));
            }
            if !seen.insert(name.as_str()) {
                return input(format!("duplicate generator name {name:?}"));
            }
        }
        for (i, &j) in inverse.iter().enumerate() {
            if j as usize >= names.len() || inverse[j as usize] as usize != i {
                return input(format!("inverse pairing is not an involution at {:?}", names[i]));
            }
        }
        Ok(GeneratorSet { names, inverse })
    }

    /// Builds a set from `(name, inverse)` pairs; each pair contributes the
    /// symbol and then its inverse, or a single symbol when both names agree.
    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, S)]) -> Result<Self> {
        let mut names = Vec::new();
        let mut inverse = Vec::new();
        for (a, b) in pairs {
            let i = names.len() as Gen;
            if a.as_ref() == b.as_ref() {
                names.push(a.as_ref().to_string());
                inverse.push(i);
            } else {
                names.push(a.as_ref().to_string());
                names.push(b.as_ref().to_string());
                inverse.push(i + 1);
                inverse.push(i);
            }
        }
        GeneratorSet::new(names, inverse)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, g: Gen) -> &str {
        &self.names[g as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn inverse(&self, g: Gen) -> Gen {
        self.inverse[g as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<Gen> {
        self.names.iter().position(|n| n == name).map(|i| i as Gen)
    }

    /// The `(name, inverse)` pairs in declaration order.
    pub fn pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (i, name) in self.names.iter().enumerate() {
            let j = self.inverse[i] as usize;
            if j >= i {
                out.push((name.clone(), self.names[j].clone()));
            }
        }
        out
    }

    /// Parses whitespace-separated symbols; `s^k` repeats `s` (or its
    /// inverse for negative `k`).
    pub fn parse_word(&self, text: &str) -> Result<Vec<Gen>> {
        let mut word = Vec::new();
        for token in text.split_whitespace() {
            let (name, power) = match token.split_once('^') {
                Some((name, p)) => {
                    let p: i64 = p
                        .parse()
                        .map_err(|_| crate::Error::Input(format!("bad exponent in {token:?}")))?;
                    (name, p)
                }
                None => (token, 1),
            };
            let Some(g) = self.index_of(name) else {
                return input(format!("unknown generator symbol {name:?}"));
            };
            let sym = if power >= 0 { g } else { self.inverse(g) };
            word.extend(std::iter::repeat_n(sym, power.unsigned_abs() as usize));
        }
        Ok(word)
    }

    pub fn format_word(&self, word: &[Gen]) -> String {
        word.iter().map(|&g| self.name(g)).collect::<Vec<_>>().join(" ")
    }

    pub fn invert_word(&self, word: &[Gen]) -> Vec<Gen> {
        word.iter().rev().map(|&g| self.inverse(g)).collect()
    }

    /// Free reduction (cancels adjacent `s s⁻¹`).
    pub fn free_reduce(&self, word: &[Gen]) -> Vec<Gen> {
        let mut out: Vec<Gen> = Vec::with_capacity(word.len());
        for &g in word {
            if out.last() == Some(&self.inverse(g)) {
                out.pop();
            } else {
                out.push(g);
            }
        }
        out
    }
}

/// Length first, then lexicographic in generator order.
pub fn shortlex_cmp(a: &[Gen], b: &[Gen]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Canonical vertex / group element key.
///
/// Keys compare words in shortlex order, integer tuples lexicographically,
/// and tuples of keys componentwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Key {
    Word(Vec<Gen>),
    Ints(Vec<i64>),
    Tuple(Vec<Key>),
    Id(u32),
}

impl Key {
    fn rank(&self) -> u8 {
        match self {
            Key::Word(_) => 0,
            Key::Ints(_) => 1,
            Key::Tuple(_) => 2,
            Key::Id(_) => 3,
        }
    }

    pub fn ints(&self) -> Option<&[i64]> {
        match self {
            Key::Ints(v) => Some(v),
            _ => None,
        }
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Key::Word(a), Key::Word(b)) => shortlex_cmp(a, b),
            (Key::Ints(a), Key::Ints(b)) => a.cmp(b),
            (Key::Tuple(a), Key::Tuple(b)) => a.cmp(b),
            (Key::Id(a), Key::Id(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite group given by its multiplication table.
#[derive(Clone, Debug)]
pub struct ExplicitGroup {
    table: Vec<Vec<u32>>,
    identity: u32,
    gen_elements: Vec<u32>,
}

impl ExplicitGroup {
    pub fn order(&self) -> usize {
        self.table.len()
    }

    fn mul(&self, x: u32, y: u32) -> u32 {
        self.table[x as usize][y as usize]
    }

    fn inv(&self, x: u32) -> u32 {
        self.table[x as usize]
            .iter()
            .position(|&z| z == self.identity)
            .expect("validated table has inverses") as u32
    }
}

#[derive(Clone, Debug)]
pub enum Backend {
    Free { rank: usize },
    FreeAbelian { dim: usize },
    BaumslagSolitar { m: i64, n: i64 },
    Product(Vec<GroupOracle>),
    Explicit(ExplicitGroup),
}

/// A finitely generated group with a solved word problem.
#[derive(Clone, Debug)]
pub struct GroupOracle {
    backend: Backend,
    gens: GeneratorSet,
    /// First global generator index of each product factor.
    offsets: Vec<usize>,
}

fn default_letter(i: usize, letters: &[&str], prefix: &str) -> String {
    if letters.len() > i {
        letters[i].to_string()
    } else {
        format!("{prefix}{}", i + 1)
    }
}

const FREE_LETTERS: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];
const ABELIAN_LETTERS: [&str; 3] = ["x", "y", "z"];

impl GroupOracle {
    /// Free group of the given rank on `a, a_inv, b, b_inv, …`.
    pub fn free(rank: usize) -> Result<Self> {
        if rank == 0 {
            return input("free group rank must be positive");
        }
        let letters: &[&str] = if rank <= FREE_LETTERS.len() { &FREE_LETTERS } else { &[] };
        let pairs: Vec<(String, String)> = (0..rank)
            .map(|i| {
                let s = default_letter(i, letters, "g");
                (s.clone(), format!("{s}_inv"))
            })
            .collect();
        Ok(GroupOracle {
            backend: Backend::Free { rank },
            gens: GeneratorSet::from_pairs(&pairs)?,
            offsets: Vec::new(),
        })
    }

    /// `Z^dim` with the standard basis `x, y, z` (or `x1, …, xd` beyond three).
    pub fn free_abelian(dim: usize) -> Result<Self> {
        if dim == 0 {
            return input("free abelian rank must be positive");
        }
        let letters: &[&str] = if dim <= ABELIAN_LETTERS.len() { &ABELIAN_LETTERS } else { &[] };
        let pairs: Vec<(String, String)> = (0..dim)
            .map(|i| {
                let s = default_letter(i, letters, "x");
                (s.clone(), format!("{s}_inv"))
            })
            .collect();
        Ok(GroupOracle {
            backend: Backend::FreeAbelian { dim },
            gens: GeneratorSet::from_pairs(&pairs)?,
            offsets: Vec::new(),
        })
    }

    pub fn baumslag_solitar(m: i64, n: i64) -> Result<Self> {
        if m == 0 || n == 0 {
            return input("BS(m,n) needs nonzero m and n");
        }
        Ok(GroupOracle {
            backend: Backend::BaumslagSolitar { m, n },
            gens: GeneratorSet::from_pairs(&[("a", "a_inv"), ("b", "b_inv")])?,
            offsets: Vec::new(),
        })
    }

    /// Direct product; the generating set is the concatenation of the factors'.
    pub fn product(factors: Vec<GroupOracle>) -> Result<Self> {
        if factors.is_empty() {
            return input("a direct product needs at least one factor");
        }
        let mut names = Vec::new();
        let mut inverse = Vec::new();
        let mut offsets = Vec::new();
        for f in &factors {
            let off = names.len();
            offsets.push(off);
            names.extend(f.gens.names.iter().cloned());
            inverse.extend(f.gens.inverse.iter().map(|&j| (j as usize + off) as Gen));
        }
        Ok(GroupOracle {
            gens: GeneratorSet::new(names, inverse)?,
            backend: Backend::Product(factors),
            offsets,
        })
    }

    /// Finite group from a Cayley table; `generators` are `(name, element)`
    /// and must be closed under inverses.
    pub fn explicit(table: Vec<Vec<u32>>, identity: u32, generators: &[(String, u32)]) -> Result<Self> {
        let n = table.len();
        if n == 0 || identity as usize >= n {
            return input("explicit group needs a nonempty table and a valid identity");
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return input("multiplication table is not square");
            }
            let mut seen = vec![false; n];
            for &x in row {
                if x as usize >= n || std::mem::replace(&mut seen[x as usize], true) {
                    return input(format!("row {i} of the multiplication table is not a permutation"));
                }
            }
            if row[identity as usize] as usize != i || table[identity as usize][i] as usize != i {
                return input("identity is not neutral in the multiplication table");
            }
        }
        if n <= 64 {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let l = table[table[x][y] as usize][z];
                        let r = table[x][table[y][z] as usize];
                        if l != r {
                            return input(format!("multiplication table is not associative at ({x},{y},{z})"));
                        }
                    }
                }
            }
        }
        let group = ExplicitGroup { table, identity, gen_elements: Vec::new() };
        let mut names = Vec::new();
        let mut elems = Vec::new();
        for (name, e) in generators {
            if *e as usize >= n {
                return input(format!("generator {name:?} names element {e} outside the table"));
            }
            if elems.contains(e) {
                return input(format!("generator {name:?} duplicates another generator's element"));
            }
            names.push(name.clone());
            elems.push(*e);
        }
        let mut inverse = Vec::new();
        for (i, &e) in elems.iter().enumerate() {
            let ie = group.inv(e);
            match elems.iter().position(|&x| x == ie) {
                Some(j) => inverse.push(j as Gen),
                None => return input(format!("generator {:?} has no inverse in the generating set", names[i])),
            }
        }
        Ok(GroupOracle {
            gens: GeneratorSet::new(names, inverse)?,
            backend: Backend::Explicit(ExplicitGroup { gen_elements: elems, ..group }),
            offsets: Vec::new(),
        })
    }

    /// Renames the generators positionally; the inverse pairing is kept.
    pub fn with_generator_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.gens.len() {
            return input(format!("expected {} generator names, got {}", self.gens.len(), names.len()));
        }
        let gens = GeneratorSet::new(names.clone(), self.gens.inverse.clone())?;
        if let Backend::Product(factors) = &mut self.backend {
            for (i, f) in factors.iter_mut().enumerate() {
                let lo = self.offsets[i];
                let hi = lo + f.gens.len();
                *f = f.clone().with_generator_names(names[lo..hi].to_vec())?;
            }
        }
        self.gens = gens;
        Ok(self)
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn identity(&self) -> Key {
        match &self.backend {
            Backend::Free { .. } => Key::Word(Vec::new()),
            Backend::FreeAbelian { dim } => Key::Ints(vec![0; *dim]),
            Backend::BaumslagSolitar { .. } => Key::Ints(vec![0]),
            Backend::Product(fs) => Key::Tuple(fs.iter().map(|f| f.identity()).collect()),
            Backend::Explicit(g) => Key::Id(g.identity),
        }
    }

    fn factor_of(&self, g: Gen) -> (usize, Gen) {
        let i = self.offsets.partition_point(|&o| o <= g as usize) - 1;
        (i, (g as usize - self.offsets[i]) as Gen)
    }

    /// Right multiplication by a generator.
    pub fn apply(&self, key: &Key, g: Gen) -> Key {
        let mut out = key.clone();
        self.apply_in_place(&mut out, g);
        out
    }

    pub fn apply_in_place(&self, key: &mut Key, g: Gen) {
        match (&self.backend, key) {
            (Backend::Free { .. }, Key::Word(w)) => {
                if w.last() == Some(&self.gens.inverse(g)) {
                    w.pop();
                } else {
                    w.push(g);
                }
            }
            (Backend::FreeAbelian { .. }, Key::Ints(v)) => {
                v[g as usize / 2] += if g.is_multiple_of(2) { 1 } else { -1 };
            }
            (Backend::BaumslagSolitar { m, n }, Key::Ints(v)) => bs::apply(*m, *n, v, g),
            (Backend::Product(fs), Key::Tuple(parts)) => {
                let (i, local) = self.factor_of(g);
                fs[i].apply_in_place(&mut parts[i], local);
            }
            (Backend::Explicit(t), Key::Id(x)) => *x = t.mul(*x, t.gen_elements[g as usize]),
            (_, k) => panic!("key {k:?} does not belong to this group"),
        }
    }

    pub fn evaluate_word(&self, word: &[Gen]) -> Key {
        let mut k = self.identity();
        for &g in word {
            self.apply_in_place(&mut k, g);
        }
        k
    }

    /// Parses and evaluates a word written with this group's symbol names.
    pub fn evaluate_str(&self, text: &str) -> Result<Key> {
        Ok(self.evaluate_word(&self.gens.parse_word(text)?))
    }

    /// A word (in this group's generators) representing `key`.
    pub fn word_of(&self, key: &Key) -> Vec<Gen> {
        match (&self.backend, key) {
            (Backend::Free { .. }, Key::Word(w)) => w.clone(),
            (Backend::FreeAbelian { .. }, Key::Ints(v)) => {
                let mut out = Vec::new();
                for (axis, &e) in v.iter().enumerate() {
                    let g = (2 * axis + usize::from(e < 0)) as Gen;
                    out.extend(std::iter::repeat_n(g, e.unsigned_abs() as usize));
                }
                out
            }
            (Backend::BaumslagSolitar { .. }, Key::Ints(v)) => bs::expand(v),
            (Backend::Product(fs), Key::Tuple(parts)) => {
                let mut out = Vec::new();
                for (i, f) in fs.iter().enumerate() {
                    out.extend(f.word_of(&parts[i]).into_iter().map(|g| (g as usize + self.offsets[i]) as Gen));
                }
                out
            }
            (Backend::Explicit(t), Key::Id(x)) => {
                // shortest word by BFS over the finite group
                let start = t.identity;
                let mut prev: HashMap<u32, (u32, Gen)> = HashMap::new();
                let mut queue = std::collections::VecDeque::from([start]);
                let mut seen = HashSet::from([start]);
                while let Some(y) = queue.pop_front() {
                    if y == *x {
                        break;
                    }
                    for (gi, &e) in t.gen_elements.iter().enumerate() {
                        let z = t.mul(y, e);
                        if seen.insert(z) {
                            prev.insert(z, (y, gi as Gen));
                            queue.push_back(z);
                        }
                    }
                }
                let mut word = Vec::new();
                let mut cur = *x;
                while cur != start {
                    let (p, g) = prev[&cur];
                    word.push(g);
                    cur = p;
                }
                word.reverse();
                word
            }
            (_, k) => panic!("key {k:?} does not belong to this group"),
        }
    }

    pub fn multiply(&self, x: &Key, y: &Key) -> Key {
        match (&self.backend, x, y) {
            (Backend::FreeAbelian { .. }, Key::Ints(a), Key::Ints(b)) => {
                Key::Ints(a.iter().zip(b).map(|(p, q)| p + q).collect())
            }
            (Backend::Product(fs), Key::Tuple(a), Key::Tuple(b)) => {
                Key::Tuple(fs.iter().zip(a.iter().zip(b)).map(|(f, (p, q))| f.multiply(p, q)).collect())
            }
            (Backend::Explicit(t), Key::Id(a), Key::Id(b)) => Key::Id(t.mul(*a, *b)),
            _ => {
                let mut out = x.clone();
                for g in self.word_of(y) {
                    self.apply_in_place(&mut out, g);
                }
                out
            }
        }
    }

    pub fn inverse(&self, x: &Key) -> Key {
        match (&self.backend, x) {
            (Backend::FreeAbelian { .. }, Key::Ints(a)) => Key::Ints(a.iter().map(|v| -v).collect()),
            (Backend::Product(fs), Key::Tuple(a)) => {
                Key::Tuple(fs.iter().zip(a).map(|(f, p)| f.inverse(p)).collect())
            }
            (Backend::Explicit(t), Key::Id(a)) => Key::Id(t.inv(*a)),
            _ => self.evaluate_word(&self.gens.invert_word(&self.word_of(x))),
        }
    }

    /// Checks that `key` has the shape and canonical form of this backend.
    pub fn check_key(&self, key: &Key) -> Result<()> {
        let ok = match (&self.backend, key) {
            (Backend::Free { .. }, Key::Word(w)) => {
                w.iter().all(|&g| (g as usize) < self.gens.len()) && self.gens.free_reduce(w) == *w
            }
            (Backend::FreeAbelian { dim }, Key::Ints(v)) => v.len() == *dim,
            (Backend::BaumslagSolitar { m, n }, Key::Ints(v)) => bs::is_normal(*m, *n, v),
            (Backend::Product(fs), Key::Tuple(parts)) => {
                parts.len() == fs.len() && fs.iter().zip(parts).all(|(f, p)| f.check_key(p).is_ok())
            }
            (Backend::Explicit(t), Key::Id(x)) => (*x as usize) < t.order(),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            input(format!("{key:?} is not a canonical key for this group"))
        }
    }

    /// JSON form of a key: words as symbol strings, vectors and normal forms
    /// as integer arrays, product elements as arrays of components.
    pub fn format_key(&self, key: &Key) -> Value {
        match (&self.backend, key) {
            (Backend::Free { .. }, Key::Word(w)) => Value::String(self.gens.format_word(w)),
            (Backend::Product(fs), Key::Tuple(parts)) => {
                Value::Array(fs.iter().zip(parts).map(|(f, p)| f.format_key(p)).collect())
            }
            (_, Key::Ints(v)) => Value::Array(v.iter().map(|&x| Value::from(x)).collect()),
            (_, Key::Id(x)) => Value::from(*x),
            (_, k) => panic!("key {k:?} does not belong to this group"),
        }
    }

    /// Inverse of [`format_key`](Self::format_key). A string is always
    /// accepted and evaluated as a word.
    pub fn parse_key(&self, value: &Value) -> Result<Key> {
        if let Value::String(s) = value {
            return self.evaluate_str(s);
        }
        let key = match (&self.backend, value) {
            (Backend::Product(fs), Value::Array(parts)) if parts.len() == fs.len() => Key::Tuple(
                fs.iter().zip(parts).map(|(f, p)| f.parse_key(p)).collect::<Result<Vec<_>>>()?,
            ),
            (Backend::FreeAbelian { .. } | Backend::BaumslagSolitar { .. }, Value::Array(xs)) => {
                Key::Ints(parse_ints(xs)?)
            }
            (Backend::Explicit(_), Value::Number(n)) => match n.as_u64() {
                Some(x) if x <= u32::MAX as u64 => Key::Id(x as u32),
                _ => return input(format!("bad element id {n}")),
            },
            _ => return input(format!("cannot read {value} as a group element")),
        };
        self.check_key(&key)?;
        Ok(key)
    }

    /// One shortlex-least word per element of the ball `B_k`, in shortlex order.
    pub fn shortlex_enumerate(&self, k: usize) -> Vec<(Vec<Gen>, Key)> {
        let mut out = vec![(Vec::new(), self.identity())];
        let mut seen: HashSet<Key> = HashSet::from([self.identity()]);
        let mut layer_start = 0;
        for _ in 0..k {
            let layer_end = out.len();
            for idx in layer_start..layer_end {
                for g in 0..self.gens.len() as Gen {
                    let key = self.apply(&out[idx].1, g);
                    if seen.insert(key.clone()) {
                        let mut w = out[idx].0.clone();
                        w.push(g);
                        out.push((w, key));
                    }
                }
            }
            if out.len() == layer_end {
                break;
            }
            layer_start = layer_end;
        }
        out
    }

    /// Britton reduction of a word; only defined for BS backends.
    pub fn britton_reduce(&self, word: &[Gen]) -> Result<Vec<Gen>> {
        match self.backend {
            Backend::BaumslagSolitar { m, n } => Ok(bs::britton_reduce(m, n, word)),
            _ => input("Britton reduction needs a BS(m,n) backend"),
        }
    }

    pub fn to_spec(&self) -> GroupSpec {
        spec::to_spec(self)
    }
}

fn parse_ints(xs: &[Value]) -> Result<Vec<i64>> {
    xs.iter()
        .map(|x| x.as_i64().ok_or_else(|| crate::Error::Input(format!("expected an integer, got {x}"))))
        .collect()
}
