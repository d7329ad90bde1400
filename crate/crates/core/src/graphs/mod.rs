//! Implicit graphs and their exact finite balls.

mod spec;

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde_json::Value;

use crate::error::{input, Error, Result};
use crate::groups::{bs, Backend, Gen, GroupOracle, Key};

pub use spec::GraphSpec;

/// Default cap on the number of vertices a single ball may hold.
pub const DEFAULT_BUDGET: usize = 5_000_000;

/// Sentinel for "no vertex" in label tables and distance arrays.
pub const NONE: u32 = u32::MAX;

/// Reads `UFOLAB_BUDGET_VERTICES`, falling back to [`DEFAULT_BUDGET`].
pub fn budget_from_env() -> usize {
    std::env::var("UFOLAB_BUDGET_VERTICES")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Subgroups whose right cosets have a built-in canonical key.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subgroup {
    /// `⟨a⟩` in `BS(m,n)`.
    CyclicA,
    /// The first factor of a direct product.
    FirstFactor,
}

impl Subgroup {
    pub fn name(self) -> &'static str {
        match self {
            Subgroup::CyclicA => "a",
            Subgroup::FirstFactor => "first_factor",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "a" | "<a>" => Ok(Subgroup::CyclicA),
            "first_factor" => Ok(Subgroup::FirstFactor),
            _ => input(format!("subgroup: unknown subgroup {s:?}")),
        }
    }

    pub fn check(self, group: &GroupOracle) -> Result<()> {
        match (self, group.backend()) {
            (Subgroup::CyclicA, Backend::BaumslagSolitar { .. }) => Ok(()),
            (Subgroup::FirstFactor, Backend::Product(_)) => Ok(()),
            _ => input(format!("subgroup {:?} is not available for this group", self.name())),
        }
    }

    /// Canonical key of the right coset `Hg` given the key of `g`.
    pub fn normalize(self, group: &GroupOracle, key: &Key) -> Key {
        match (self, group.backend(), key) {
            (Subgroup::CyclicA, Backend::BaumslagSolitar { .. }, Key::Ints(v)) => {
                let mut v = v.clone();
                v[0] = 0;
                Key::Ints(v)
            }
            (Subgroup::FirstFactor, Backend::Product(factors), Key::Tuple(parts)) => {
                let mut parts = parts.clone();
                parts[0] = factors[0].identity();
                Key::Tuple(parts)
            }
            _ => panic!("key {key:?} does not fit subgroup {self:?}"),
        }
    }
}

/// A finite graph given by adjacency lists; neighbor `i` of a vertex is its port `i`.
#[derive(Clone, Debug)]
pub struct ExplicitGraph {
    adjacency: Vec<Vec<u32>>,
    max_ports: usize,
}

impl ExplicitGraph {
    pub fn new(adjacency: Vec<Vec<u32>>) -> Result<Self> {
        let n = adjacency.len();
        for (v, list) in adjacency.iter().enumerate() {
            for &w in list {
                if w as usize >= n {
                    return input(format!("adjacency[{v}] names vertex {w} outside the graph"));
                }
                if !adjacency[w as usize].contains(&(v as u32)) {
                    return input(format!("adjacency is not symmetric: {v} -> {w} has no reverse edge"));
                }
            }
        }
        let max_ports = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        Ok(ExplicitGraph { adjacency, max_ports })
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adjacency
    }
}

/// Implicit graph: a rule producing the labeled neighbors of a vertex key.
#[derive(Clone, Debug)]
pub enum NeighborOracle {
    Cayley(GroupOracle),
    Schreier { group: GroupOracle, subgroup: Subgroup },
    /// The Bass–Serre tree of `BS(m,n)`: vertices are the cosets `g⟨a⟩`,
    /// joined to `g a^j b^{±1}⟨a⟩`. A vertex is keyed by the canonical key of
    /// the right coset `⟨a⟩g⁻¹`.
    BassSerre { group: GroupOracle },
    Pentagon,
    Explicit(ExplicitGraph),
}

impl NeighborOracle {
    pub fn schreier(group: GroupOracle, subgroup: Subgroup) -> Result<Self> {
        subgroup.check(&group)?;
        Ok(NeighborOracle::Schreier { group, subgroup })
    }

    pub fn bass_serre(m: i64, n: i64) -> Result<Self> {
        Ok(NeighborOracle::BassSerre { group: GroupOracle::baumslag_solitar(m, n)? })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            NeighborOracle::Cayley(_) => "cayley",
            NeighborOracle::Schreier { .. } => "schreier",
            NeighborOracle::BassSerre { .. } => "bass_serre",
            NeighborOracle::Pentagon => "pentagon",
            NeighborOracle::Explicit(_) => "explicit",
        }
    }

    pub fn group(&self) -> Option<&GroupOracle> {
        match self {
            NeighborOracle::Cayley(g) | NeighborOracle::Schreier { group: g, .. } | NeighborOracle::BassSerre { group: g } => {
                Some(g)
            }
            _ => None,
        }
    }

    /// Number of move labels. A label may be unavailable at some vertices.
    pub fn label_count(&self) -> usize {
        match self {
            NeighborOracle::Cayley(g) | NeighborOracle::Schreier { group: g, .. } => g.generators().len(),
            NeighborOracle::BassSerre { group } => match group.backend() {
                Backend::BaumslagSolitar { m, n } => (m.abs() + n.abs()) as usize,
                _ => unreachable!(),
            },
            NeighborOracle::Pentagon => 4,
            NeighborOracle::Explicit(e) => e.max_ports,
        }
    }

    /// The canonical base vertex: identity, its coset, the origin, or vertex 0.
    pub fn base_vertex(&self) -> Key {
        match self {
            NeighborOracle::Cayley(g) => g.identity(),
            NeighborOracle::Schreier { group, subgroup } => subgroup.normalize(group, &group.identity()),
            NeighborOracle::BassSerre { group } => group.identity(),
            NeighborOracle::Pentagon => Key::Ints(vec![0, 0]),
            NeighborOracle::Explicit(_) => Key::Id(0),
        }
    }

    /// Writes the target of every label (or `None`) into `out`.
    pub fn moves(&self, key: &Key, out: &mut Vec<Option<Key>>) {
        out.clear();
        match self {
            NeighborOracle::Cayley(g) => {
                for s in 0..g.generators().len() as Gen {
                    out.push(Some(g.apply(key, s)));
                }
            }
            NeighborOracle::Schreier { group, subgroup } => {
                for s in 0..group.generators().len() as Gen {
                    out.push(Some(subgroup.normalize(group, &group.apply(key, s))));
                }
            }
            NeighborOracle::BassSerre { group } => {
                let Backend::BaumslagSolitar { m, n } = *group.backend() else { unreachable!() };
                for (eps, count) in [(1i64, n.abs()), (-1, m.abs())] {
                    for j in 0..count {
                        // ⟨a⟩ b^{-ε} a^{-j} x
                        let mut nf = vec![0i64];
                        bs::apply(m, n, &mut nf, if eps == 1 { bs::B_INV } else { bs::B });
                        for _ in 0..j {
                            bs::apply(m, n, &mut nf, bs::A_INV);
                        }
                        let prefix = Key::Ints(nf);
                        let full = group.multiply(&prefix, key);
                        out.push(Some(Subgroup::CyclicA.normalize(group, &full)));
                    }
                }
            }
            NeighborOracle::Pentagon => {
                let Key::Ints(v) = key else { panic!("pentagon vertices are integer pairs") };
                let (x, y) = (v[0], v[1]);
                out.push(Some(Key::Ints(vec![x - 1, y])));
                out.push(Some(Key::Ints(vec![x + 1, y])));
                let down = x.checked_mul(2).expect("pentagon coordinate overflow");
                out.push(Some(Key::Ints(vec![down, y - 1])));
                out.push(if x % 2 == 0 { Some(Key::Ints(vec![x / 2, y + 1])) } else { None });
            }
            NeighborOracle::Explicit(e) => {
                let Key::Id(v) = key else { panic!("explicit vertices are ids") };
                let ports = &e.adjacency[*v as usize];
                for p in 0..e.max_ports {
                    out.push(ports.get(p).map(|&w| Key::Id(w)));
                }
            }
        }
    }

    pub fn check_key(&self, key: &Key) -> Result<()> {
        match (self, key) {
            (NeighborOracle::Cayley(g), _) => g.check_key(key),
            (NeighborOracle::Schreier { group, subgroup }, _) => {
                group.check_key(key)?;
                if subgroup.normalize(group, key) != *key {
                    return input(format!("{} is not a canonical coset key", group.format_key(key)));
                }
                Ok(())
            }
            (NeighborOracle::BassSerre { group }, _) => {
                group.check_key(key)?;
                if Subgroup::CyclicA.normalize(group, key) != *key {
                    return input(format!("{} is not a canonical coset key", group.format_key(key)));
                }
                Ok(())
            }
            (NeighborOracle::Pentagon, Key::Ints(v)) if v.len() == 2 => Ok(()),
            (NeighborOracle::Explicit(e), Key::Id(v)) if (*v as usize) < e.len() => Ok(()),
            _ => input(format!("{key:?} is not a vertex of this {} graph", self.kind())),
        }
    }

    pub fn format_key(&self, key: &Key) -> Value {
        match self.group() {
            Some(g) => g.format_key(key),
            None => match key {
                Key::Ints(v) => Value::Array(v.iter().map(|&x| Value::from(x)).collect()),
                Key::Id(x) => Value::from(*x),
                _ => panic!("unexpected key {key:?}"),
            },
        }
    }

    /// Reads a vertex; group-based graphs also accept words, which are
    /// evaluated (and projected to their coset for Schreier graphs).
    pub fn parse_key(&self, value: &Value) -> Result<Key> {
        let key = match self {
            NeighborOracle::Cayley(g) => g.parse_key(value)?,
            NeighborOracle::Schreier { group, subgroup } => subgroup.normalize(group, &group.parse_key(value)?),
            NeighborOracle::BassSerre { group } => Subgroup::CyclicA.normalize(group, &group.parse_key(value)?),
            NeighborOracle::Pentagon => match value.as_array().map(|a| a.iter().map(Value::as_i64).collect::<Option<Vec<_>>>()) {
                Some(Some(v)) if v.len() == 2 => Key::Ints(v),
                _ => return input(format!("pentagon vertex must be [x, y], got {value}")),
            },
            NeighborOracle::Explicit(_) => match value.as_u64() {
                Some(v) if v < u32::MAX as u64 => Key::Id(v as u32),
                _ => return input(format!("explicit vertex must be an id, got {value}")),
            },
        };
        self.check_key(&key)?;
        Ok(key)
    }
}

/// The ball of radius `R` around a seed set, as an induced subgraph.
#[derive(Clone, Debug)]
pub struct BoundedGraph {
    oracle: NeighborOracle,
    keys: Vec<Key>,
    index: HashMap<Key, u32>,
    depth: Vec<u32>,
    adj_start: Vec<u32>,
    adj: Vec<u32>,
    labels: usize,
    moves: Vec<u32>,
    seeds: Vec<u32>,
    radius: u32,
    closed: bool,
    max_degree: usize,
}

impl BoundedGraph {
    /// BFS closure of `seeds` to depth `radius`. Each layer is ordered by key.
    pub fn build(oracle: &NeighborOracle, seeds: &[Key], radius: u32, budget: usize) -> Result<Self> {
        if seeds.is_empty() {
            return input("seeds: at least one seed is required");
        }
        for s in seeds {
            oracle.check_key(s)?;
        }
        let mut layer: Vec<Key> = seeds.to_vec();
        layer.sort();
        layer.dedup();
        let labels = oracle.label_count();
        let mut keys: Vec<Key> = Vec::new();
        let mut index: HashMap<Key, u32> = HashMap::new();
        let mut depth = Vec::new();
        let mut targets: Vec<Vec<Option<Key>>> = Vec::new();
        let mut scratch = Vec::with_capacity(labels);
        let mut d = 0u32;
        let mut closed = true;
        loop {
            if keys.len() + layer.len() > budget {
                return Err(Error::Budget(format!(
                    "ball of radius {radius} exceeds {budget} vertices (reached {} at depth {d})",
                    keys.len() + layer.len()
                )));
            }
            for k in layer.drain(..) {
                index.insert(k.clone(), keys.len() as u32);
                keys.push(k);
                depth.push(d);
            }
            let start = targets.len();
            let mut next: Vec<Key> = Vec::new();
            for key in &keys[start..] {
                oracle.moves(key, &mut scratch);
                for t in scratch.iter().flatten() {
                    if !index.contains_key(t) {
                        if d < radius {
                            next.push(t.clone());
                        } else {
                            closed = false;
                        }
                    }
                }
                targets.push(std::mem::take(&mut scratch));
            }
            next.sort();
            next.dedup();
            if next.is_empty() {
                break;
            }
            layer = next;
            d += 1;
        }
        let n = keys.len();
        let mut moves = vec![NONE; n * labels];
        let mut adj_start = Vec::with_capacity(n + 1);
        let mut adj = Vec::new();
        let mut max_degree = 0;
        adj_start.push(0);
        for v in 0..n {
            let mut nbrs = Vec::with_capacity(labels);
            for (l, t) in targets[v].iter().enumerate() {
                if let Some(&w) = t.as_ref().and_then(|t| index.get(t)) {
                    moves[v * labels + l] = w;
                    if w as usize != v {
                        nbrs.push(w);
                    }
                }
            }
            nbrs.sort_unstable();
            nbrs.dedup();
            if depth[v] < radius || closed {
                max_degree = max_degree.max(nbrs.len());
            }
            adj.extend_from_slice(&nbrs);
            adj_start.push(adj.len() as u32);
        }
        let seeds = (0..n as u32).filter(|&v| depth[v as usize] == 0).collect();
        Ok(BoundedGraph {
            oracle: oracle.clone(),
            keys,
            index,
            depth,
            adj_start,
            adj,
            labels,
            moves,
            seeds,
            radius,
            closed,
            max_degree,
        })
    }

    pub fn oracle(&self) -> &NeighborOracle {
        &self.oracle
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[Key] {
        &self.keys
    }

    pub fn key(&self, v: u32) -> &Key {
        &self.keys[v as usize]
    }

    pub fn id_of(&self, key: &Key) -> Option<u32> {
        self.index.get(key).copied()
    }

    pub fn depth(&self, v: u32) -> u32 {
        self.depth[v as usize]
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn seeds(&self) -> &[u32] {
        &self.seeds
    }

    /// True when the ball is a whole connected component.
    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Maximum degree over interior vertices (all vertices when closed).
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// How far a BFS may run from `v` while staying exact.
    pub fn margin(&self, v: u32) -> u32 {
        if self.closed {
            u32::MAX
        } else {
            self.radius - self.depth[v as usize]
        }
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        let (a, b) = (self.adj_start[v as usize] as usize, self.adj_start[v as usize + 1] as usize);
        &self.adj[a..b]
    }

    pub fn label_count(&self) -> usize {
        self.labels
    }

    /// Target of label `l` at `v`, or [`NONE`] when absent from the ball.
    pub fn step(&self, v: u32, l: usize) -> u32 {
        self.moves[v as usize * self.labels + l]
    }

    /// Follows a label sequence; `None` as soon as a step leaves the ball.
    pub fn walk(&self, v: u32, labels: &[usize]) -> Option<u32> {
        let mut cur = v;
        for &l in labels {
            cur = self.step(cur, l);
            if cur == NONE {
                return None;
            }
        }
        Some(cur)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.len() / 2
    }

    pub fn resolve(&self, keys: &[Key]) -> Result<Vec<u32>> {
        keys.iter()
            .map(|k| {
                self.id_of(k).ok_or_else(|| {
                    Error::Input(format!("vertex {} is not in the ball", self.oracle.format_key(k)))
                })
            })
            .collect()
    }

    pub fn format_vertex(&self, v: u32) -> Value {
        self.oracle.format_key(self.key(v))
    }

    /// Multi-source BFS distances up to `cap` (unreached vertices get [`NONE`]).
    /// Vertices flagged in `avoid` are never entered.
    pub fn bfs(&self, sources: &[u32], avoid: Option<&[bool]>, cap: u32) -> Vec<u32> {
        let mut dist = vec![NONE; self.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s as usize] == NONE {
                dist[s as usize] = 0;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let dv = dist[v as usize];
            if dv >= cap {
                continue;
            }
            for &w in self.neighbors(v) {
                if dist[w as usize] == NONE && !avoid.is_some_and(|a| a[w as usize]) {
                    dist[w as usize] = dv + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest `avoid`-free path length from `sources` to `targets`, if one of
    /// length at most `cap` exists.
    pub fn distance_avoiding(&self, sources: &[u32], targets: &[u32], avoid: &[u32], cap: u32) -> Result<AvoidingDistance> {
        let mut blocked = vec![false; self.len()];
        for &a in avoid {
            blocked[a as usize] = true;
        }
        if let Some(&s) = sources.iter().find(|&&s| blocked[s as usize]) {
            return input(format!("source {} lies in the avoided set", self.format_vertex(s)));
        }
        let dist = self.bfs(sources, Some(&blocked), cap);
        let distance = targets.iter().map(|&t| dist[t as usize]).filter(|&d| d != NONE).min();
        let exact = sources.iter().all(|&s| self.margin(s) >= cap);
        Ok(AvoidingDistance { distance, exact })
    }

    /// Labels of a shortest path from `from` to `to` of length at most `cap`.
    /// Ties are broken by the smallest label at each step from the end.
    pub fn path_labels(&self, from: u32, to: u32, cap: u32) -> Option<Vec<usize>> {
        let dist = self.bfs(&[to], None, cap);
        if dist[from as usize] == NONE {
            return None;
        }
        let mut labels = Vec::new();
        let mut cur = from;
        while cur != to {
            let d = dist[cur as usize];
            let l = (0..self.labels).find(|&l| {
                let w = self.step(cur, l);
                w != NONE && dist[w as usize] == d - 1
            })?;
            labels.push(l);
            cur = self.step(cur, l);
        }
        Some(labels)
    }

    /// DOT export; each `(vertices, color)` group is filled with that color.
    pub fn to_dot(&self, highlight: &[(&[u32], &str)]) -> String {
        let mut fill: HashMap<u32, &str> = HashMap::new();
        for (vs, color) in highlight {
            for &v in *vs {
                fill.insert(v, color);
            }
        }
        let mut out = String::from("graph ball {\n  node [shape=circle, style=filled, fillcolor=white];\n");
        for v in 0..self.len() as u32 {
            let label = self.format_vertex(v).to_string().replace('"', "\\\"");
            let color = fill.get(&v).copied().unwrap_or("white");
            let _ = writeln!(out, "  v{v} [label=\"{label}\", fillcolor=\"{color}\"];");
        }
        for v in 0..self.len() as u32 {
            for &w in self.neighbors(v) {
                if v < w {
                    let _ = writeln!(out, "  v{v} -- v{w};");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Reusable BFS state for many small searches on one large ball.
#[derive(Debug, Default)]
pub struct BfsScratch {
    dist: Vec<u32>,
    reached: Vec<u32>,
    queue: VecDeque<u32>,
}

impl BfsScratch {
    pub fn new() -> Self {
        Self::default()
    }

    /// Runs a multi-source BFS to depth `cap`, never entering `avoid`ed vertices.
    pub fn run(&mut self, bg: &BoundedGraph, sources: &[u32], avoid: Option<&[bool]>, cap: u32) {
        if self.dist.len() != bg.len() {
            self.dist = vec![NONE; bg.len()];
        } else {
            for &v in &self.reached {
                self.dist[v as usize] = NONE;
            }
        }
        self.reached.clear();
        self.queue.clear();
        for &s in sources {
            if self.dist[s as usize] == NONE {
                self.dist[s as usize] = 0;
                self.reached.push(s);
                self.queue.push_back(s);
            }
        }
        while let Some(v) = self.queue.pop_front() {
            let dv = self.dist[v as usize];
            if dv >= cap {
                continue;
            }
            for &w in bg.neighbors(v) {
                if self.dist[w as usize] == NONE && !avoid.is_some_and(|a| a[w as usize]) {
                    self.dist[w as usize] = dv + 1;
                    self.reached.push(w);
                    self.queue.push_back(w);
                }
            }
        }
    }

    /// Distance from the last run's sources, or [`NONE`].
    pub fn dist(&self, v: u32) -> u32 {
        self.dist[v as usize]
    }

    /// Vertices reached by the last run, in BFS order.
    pub fn reached(&self) -> &[u32] {
        &self.reached
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AvoidingDistance {
    /// `None` means no path of length at most the cap.
    pub distance: Option<u32>,
    pub exact: bool,
}

/// Number of components of `B_N ∖ B_n` that reach the sphere of radius `N`.
pub fn ends_lower_bound(oracle: &NeighborOracle, seed: &Key, n: u32, big_n: u32, budget: usize) -> Result<usize> {
    if n >= big_n {
        return input(format!("ends_lower_bound needs n < N, got n={n}, N={big_n}"));
    }
    let bg = BoundedGraph::build(oracle, std::slice::from_ref(seed), big_n, budget)?;
    let mut comp = vec![NONE; bg.len()];
    let mut count = 0;
    for start in 0..bg.len() as u32 {
        if bg.depth(start) <= n || comp[start as usize] != NONE {
            continue;
        }
        let mut reaches = false;
        let mut stack = vec![start];
        comp[start as usize] = start;
        while let Some(v) = stack.pop() {
            reaches |= bg.depth(v) == big_n;
            for &w in bg.neighbors(v) {
                if bg.depth(w) > n && comp[w as usize] == NONE {
                    comp[w as usize] = start;
                    stack.push(w);
                }
            }
        }
        if reaches {
            count += 1;
        }
    }
    Ok(count)
}

/// Ball of the Schreier graph of `H \ G` around the coset of `seed`.
pub fn schreier_ball(group: &GroupOracle, subgroup: Subgroup, seed: &Key, radius: u32, budget: usize) -> Result<BoundedGraph> {
    let oracle = NeighborOracle::schreier(group.clone(), subgroup)?;
    BoundedGraph::build(&oracle, &[subgroup.normalize(group, seed)], radius, budget)
}

/// True when the simple graph underlying the ball has no cycle.
pub fn is_forest(bg: &BoundedGraph) -> bool {
    // a graph is a forest iff |E| = |V| − #components
    let mut seen = vec![false; bg.len()];
    let mut components = 0;
    for s in 0..bg.len() {
        if seen[s] {
            continue;
        }
        components += 1;
        seen[s] = true;
        let mut stack = vec![s as u32];
        while let Some(v) = stack.pop() {
            for &w in bg.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
    }
    bg.edge_count() + components == bg.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> NeighborOracle {
        NeighborOracle::Cayley(GroupOracle::free_abelian(2).unwrap())
    }

    #[test]
    fn ball_sizes() {
        let g = z2();
        assert_eq!(BoundedGraph::build(&g, &[g.base_vertex()], 2, 1000).unwrap().len(), 13);
        let f2 = NeighborOracle::Cayley(GroupOracle::free(2).unwrap());
        assert_eq!(BoundedGraph::build(&f2, &[f2.base_vertex()], 2, 1000).unwrap().len(), 17);
    }

    #[test]
    fn pentagon_unit_ball() {
        let bg = BoundedGraph::build(&NeighborOracle::Pentagon, &[Key::Ints(vec![0, 0])], 1, 100).unwrap();
        let mut got: Vec<Key> = bg.keys().to_vec();
        got.sort();
        let mut want: Vec<Key> = [[0, 0], [-1, 0], [1, 0], [0, -1], [0, 1]].iter().map(|p| Key::Ints(p.to_vec())).collect();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn budget_is_enforced() {
        let g = z2();
        assert!(matches!(BoundedGraph::build(&g, &[g.base_vertex()], 10, 50), Err(Error::Budget(_))));
    }

    #[test]
    fn cut_line() {
        let z = NeighborOracle::Cayley(GroupOracle::free_abelian(1).unwrap());
        let bg = BoundedGraph::build(&z, &[z.base_vertex()], 5, 100).unwrap();
        let id = |x: i64| bg.id_of(&Key::Ints(vec![x])).unwrap();
        let r = bg.distance_avoiding(&[id(-1)], &[id(1)], &[id(0)], 3).unwrap();
        assert_eq!(r.distance, None);
        let r = bg.distance_avoiding(&[id(2)], &[id(2)], &[], 3).unwrap();
        assert_eq!(r.distance, Some(0));
        assert!(bg.distance_avoiding(&[id(0)], &[id(1)], &[id(0)], 3).is_err());
    }

    #[test]
    fn explicit_graph_is_closed() {
        let e = ExplicitGraph::new(vec![vec![1], vec![0, 2], vec![1]]).unwrap();
        let o = NeighborOracle::Explicit(e);
        let bg = BoundedGraph::build(&o, &[Key::Id(0)], 1, 100).unwrap();
        assert_eq!(bg.len(), 2);
        assert!(!bg.is_closed());
        let bg = BoundedGraph::build(&o, &[Key::Id(0)], 2, 100).unwrap();
        assert_eq!(bg.len(), 3);
        assert!(bg.is_closed());
        assert_eq!(bg.margin(0), u32::MAX);
        assert!(ExplicitGraph::new(vec![vec![1], vec![]]).is_err());
    }

    #[test]
    fn ends_examples() {
        let z = NeighborOracle::Cayley(GroupOracle::free_abelian(1).unwrap());
        assert_eq!(ends_lower_bound(&z, &z.base_vertex(), 1, 5, 1000).unwrap(), 2);
        let z2 = z2();
        assert_eq!(ends_lower_bound(&z2, &z2.base_vertex(), 1, 5, 1000).unwrap(), 1);
        let f2 = NeighborOracle::Cayley(GroupOracle::free(2).unwrap());
        assert_eq!(ends_lower_bound(&f2, &f2.base_vertex(), 0, 3, 1000).unwrap(), 4);
    }

    #[test]
    fn bass_serre_tree_of_bs12() {
        let o = NeighborOracle::bass_serre(1, 2).unwrap();
        let bg = BoundedGraph::build(&o, &[o.base_vertex()], 5, 10_000).unwrap();
        assert!(is_forest(&bg));
        // 3-regular tree: 1 + 3(2^R − 1) vertices
        assert_eq!(bg.len(), 1 + 3 * 31);
        assert_eq!(bg.max_degree(), 3);
    }

    #[test]
    fn product_schreier_drops_first_factor() {
        let g = GroupOracle::product(vec![GroupOracle::free_abelian(1).unwrap(), GroupOracle::free(2).unwrap()]).unwrap();
        let bg = schreier_ball(&g, Subgroup::FirstFactor, &g.identity(), 2, 1000).unwrap();
        assert_eq!(bg.len(), 17);
        assert!(is_forest(&bg));
    }

    #[test]
    fn dot_export_mentions_every_edge() {
        let g = z2();
        let bg = BoundedGraph::build(&g, &[g.base_vertex()], 1, 100).unwrap();
        let dot = bg.to_dot(&[(&[0], "red")]);
        assert_eq!(dot.matches(" -- ").count(), 4);
        assert!(dot.contains("fillcolor=\"red\""));
    }
}
