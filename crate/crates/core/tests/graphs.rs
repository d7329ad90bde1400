mod common;

use std::collections::{HashMap, VecDeque};

use proptest::prelude::*;

use common::{brute_short_avoiding_path, floyd, random_graph, random_triple, rng};
use ufolab::graphs::{ends_lower_bound, is_forest, schreier_ball, ExplicitGraph, GraphSpec, Subgroup};
use ufolab::{BoundedGraph, Error, GroupOracle, Key, NeighborOracle};

const BUDGET: usize = 1_000_000;

fn cayley(g: GroupOracle) -> NeighborOracle {
    NeighborOracle::Cayley(g)
}

fn ball(o: &NeighborOracle, radius: u32) -> BoundedGraph {
    BoundedGraph::build(o, &[o.base_vertex()], radius, BUDGET).unwrap()
}

#[test]
fn cayley_ball_sizes() {
    let z2 = cayley(GroupOracle::free_abelian(2).unwrap());
    let f2 = cayley(GroupOracle::free(2).unwrap());
    let f3 = cayley(GroupOracle::free(3).unwrap());
    for r in 0..=6u32 {
        assert_eq!(ball(&z2, r).len() as u32, 2 * r * r + 2 * r + 1);
        assert_eq!(ball(&f2, r).len(), 2 * 3usize.pow(r) - 1);
        // 1 + 6(5^r − 1)/4
        assert_eq!(ball(&f3, r).len(), 1 + 6 * (5usize.pow(r) - 1) / 4);
    }
    let bs = GroupOracle::baumslag_solitar(1, 2).unwrap();
    for r in 0..=5 {
        assert_eq!(ball(&cayley(bs.clone()), r as u32).len(), bs.shortlex_enumerate(r).len());
    }
}

/// Pentagon neighbors written out independently of the library.
fn pentagon_neighbors(x: i64, y: i64) -> Vec<(i64, i64)> {
    let mut out = vec![(x - 1, y), (x + 1, y), (2 * x, y - 1)];
    if x % 2 == 0 {
        out.push((x / 2, y + 1));
    }
    out
}

#[test]
fn pentagon_ball_matches_reference_bfs() {
    let bg = ball(&NeighborOracle::Pentagon, 6);
    let mut depth: HashMap<(i64, i64), u32> = HashMap::from([((0, 0), 0)]);
    let mut queue = VecDeque::from([(0i64, 0i64)]);
    while let Some(v) = queue.pop_front() {
        let d = depth[&v];
        if d == 6 {
            continue;
        }
        for w in pentagon_neighbors(v.0, v.1) {
            depth.entry(w).or_insert_with(|| {
                queue.push_back(w);
                d + 1
            });
        }
    }
    assert_eq!(bg.len(), depth.len());
    for v in 0..bg.len() as u32 {
        let k = bg.key(v).ints().unwrap();
        assert_eq!(bg.depth(v), depth[&(k[0], k[1])]);
    }
}

#[test]
fn balls_grow_monotonically() {
    let oracles = [
        cayley(GroupOracle::free_abelian(3).unwrap()),
        cayley(GroupOracle::baumslag_solitar(2, 3).unwrap()),
        NeighborOracle::Pentagon,
        NeighborOracle::schreier(GroupOracle::baumslag_solitar(1, 2).unwrap(), Subgroup::CyclicA).unwrap(),
    ];
    for o in &oracles {
        for r in 0..5 {
            let (small, big) = (ball(o, r), ball(o, r + 1));
            assert!(small.len() <= big.len());
            for v in 0..small.len() as u32 {
                let w = big.id_of(small.key(v)).expect("vertex lost when the ball grew");
                assert_eq!(small.depth(v), big.depth(w));
                assert_eq!(small.margin(v), r - small.depth(v));
            }
        }
    }
}

#[test]
fn budget_is_enforced() {
    let f2 = cayley(GroupOracle::free(2).unwrap());
    assert!(matches!(BoundedGraph::build(&f2, &[f2.base_vertex()], 10, 1000), Err(Error::Budget(_))));
}

#[test]
fn forests_and_ends() {
    let f2 = cayley(GroupOracle::free(2).unwrap());
    let z2 = cayley(GroupOracle::free_abelian(2).unwrap());
    assert!(is_forest(&ball(&f2, 5)));
    assert!(is_forest(&ball(&z2, 1)));
    assert!(!is_forest(&ball(&z2, 2)));
    let tree = NeighborOracle::bass_serre(1, 3).unwrap();
    let bg = ball(&tree, 4);
    assert!(is_forest(&bg));
    // (|m| + |n|)-regular: 1 + 4 + 12 + 36 + 108
    assert_eq!(bg.len(), 161);
    let z = cayley(GroupOracle::free_abelian(1).unwrap());
    assert_eq!(ends_lower_bound(&z, &z.base_vertex(), 2, 7, BUDGET).unwrap(), 2);
    assert_eq!(ends_lower_bound(&f2, &f2.base_vertex(), 1, 3, BUDGET).unwrap(), 12);
    assert!(ends_lower_bound(&z, &z.base_vertex(), 3, 3, BUDGET).is_err());
}

#[test]
fn schreier_first_factor_is_free_group() {
    // H = Z in Z × F2: the coset graph is the Cayley graph of F2 plus a loop per vertex
    let g = GroupOracle::product(vec![GroupOracle::free_abelian(1).unwrap(), GroupOracle::free(2).unwrap()]).unwrap();
    let sch = schreier_ball(&g, Subgroup::FirstFactor, &g.identity(), 4, BUDGET).unwrap();
    assert_eq!(sch.len(), 2 * 3usize.pow(4) - 1);
    assert!(is_forest(&sch));
}

#[test]
fn graph_spec_round_trip() {
    let bs = GroupOracle::baumslag_solitar(1, 2).unwrap();
    let oracles = [
        cayley(GroupOracle::free_abelian(2).unwrap()),
        NeighborOracle::schreier(bs.clone(), Subgroup::CyclicA).unwrap(),
        NeighborOracle::bass_serre(1, 2).unwrap(),
        NeighborOracle::Pentagon,
        NeighborOracle::Explicit(ExplicitGraph::new(vec![vec![1], vec![0, 2], vec![1]]).unwrap()),
    ];
    for o in &oracles {
        let bg = ball(o, 3);
        let spec = GraphSpec::describe(&bg);
        let text = serde_json::to_string(&spec).unwrap();
        let again: GraphSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(again, spec);
        let rebuilt = again.build(BUDGET).unwrap();
        assert_eq!(rebuilt.keys(), bg.keys());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bfs_matches_floyd(seed in any::<u64>(), n in 2usize..30) {
        let mut r = rng(seed);
        let adj = random_graph(&mut r, n, 2.5);
        let dist = floyd(&adj);
        let o = NeighborOracle::Explicit(ExplicitGraph::new(adj).unwrap());
        let all: Vec<Key> = (0..n as u32).map(Key::Id).collect();
        let bg = BoundedGraph::build(&o, &all, 0, BUDGET).unwrap();
        prop_assert!(bg.is_closed());
        for s in 0..n as u32 {
            let d = bg.bfs(&[bg.id_of(&Key::Id(s)).unwrap()], None, n as u32);
            for t in 0..n as u32 {
                let want = dist[s as usize][t as usize];
                let got = d[bg.id_of(&Key::Id(t)).unwrap() as usize];
                prop_assert_eq!(got, if want >= n as u32 { u32::MAX } else { want });
            }
        }
    }

    #[test]
    fn avoiding_distance_matches_path_search(seed in any::<u64>(), n in 6usize..24, r in 0u32..8) {
        let mut g = rng(seed);
        let adj = random_graph(&mut g, n, 2.5);
        let (u, f, o) = random_triple(&mut g, n, 2, 2, 2);
        let oracle = NeighborOracle::Explicit(ExplicitGraph::new(adj.clone()).unwrap());
        let all: Vec<Key> = (0..n as u32).map(Key::Id).collect();
        let bg = BoundedGraph::build(&oracle, &all, 0, BUDGET).unwrap();
        let ids = |xs: &[u32]| xs.iter().map(|&x| bg.id_of(&Key::Id(x)).unwrap()).collect::<Vec<_>>();
        let d = bg.distance_avoiding(&ids(&u), &ids(&o), &ids(&f), r).unwrap();
        prop_assert!(d.exact);
        prop_assert_eq!(d.distance.is_some_and(|x| x < r), brute_short_avoiding_path(&adj, &u, &f, &o, r));
    }
}
