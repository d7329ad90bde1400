mod common;

use proptest::prelude::*;
use std::collections::HashSet;

use common::affine_bs1;
use ufolab::{Gen, GroupOracle, Key};

fn groups() -> Vec<GroupOracle> {
    vec![
        GroupOracle::free(2).unwrap(),
        GroupOracle::free_abelian(3).unwrap(),
        GroupOracle::baumslag_solitar(1, 2).unwrap(),
        GroupOracle::baumslag_solitar(2, 3).unwrap(),
        GroupOracle::baumslag_solitar(1, -2).unwrap(),
        GroupOracle::product(vec![GroupOracle::free_abelian(1).unwrap(), GroupOracle::free(2).unwrap()]).unwrap(),
        s3(),
    ]
}

/// S3 as permutations of {0,1,2}, generated by a transposition and a 3-cycle.
fn s3() -> GroupOracle {
    let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
    let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap() as u32;
    let table = perms
        .iter()
        .map(|x| perms.iter().map(|y| idx([x[y[0]], x[y[1]], x[y[2]]])).collect())
        .collect();
    GroupOracle::explicit(table, 0, &[("s".into(), 1), ("c".into(), 4), ("c_inv".into(), 5)]).unwrap()
}

fn word(len: usize) -> impl Strategy<Value = Vec<Gen>> {
    prop::collection::vec(0..4u8, 0..len)
}

proptest! {
    #[test]
    fn bs1n_keys_are_canonical(n in prop::sample::select(vec![2i64, 3, -2, -3]), u in word(14), v in word(14)) {
        let g = GroupOracle::baumslag_solitar(1, n).unwrap();
        let same = g.evaluate_word(&u) == g.evaluate_word(&v);
        prop_assert_eq!(same, affine_bs1(n, &u) == affine_bs1(n, &v));
    }

    #[test]
    fn relator_insertion_keeps_key(m in prop::sample::select(vec![1i64, 2, -3]), n in prop::sample::select(vec![2i64, 3, -1]), u in word(12), at in 0usize..12, inv in any::<bool>()) {
        let g = GroupOracle::baumslag_solitar(m, n).unwrap();
        let gens = g.generators();
        let pow = |e: i64| vec![if e > 0 { 0u8 } else { 1 }; e.unsigned_abs() as usize];
        let mut rel = vec![2u8];
        rel.extend(pow(m));
        rel.push(3);
        rel.extend(pow(-n));
        if inv {
            rel = gens.invert_word(&rel);
        }
        let at = at.min(u.len());
        let v: Vec<Gen> = u[..at].iter().chain(&rel).chain(&u[at..]).copied().collect();
        prop_assert_eq!(g.evaluate_word(&v), g.evaluate_word(&u));
        if m == 1 {
            prop_assert_eq!(affine_bs1(n, &v), affine_bs1(n, &u));
        }
    }

    #[test]
    fn bs1n_britton_detects_identity(n in prop::sample::select(vec![2i64, 3, -2]), u in word(16)) {
        let g = GroupOracle::baumslag_solitar(1, n).unwrap();
        let trivial = affine_bs1(n, &u) == common::Affine::id();
        prop_assert_eq!(g.britton_reduce(&u).unwrap().is_empty(), trivial);
    }

    #[test]
    fn britton_agrees_with_normal_form(m in prop::sample::select(vec![1i64, 2, 3, -2]), n in prop::sample::select(vec![1i64, 2, 3, -3]), u in word(16)) {
        let g = GroupOracle::baumslag_solitar(m, n).unwrap();
        let reduced = g.britton_reduce(&u).unwrap();
        prop_assert_eq!(g.evaluate_word(&reduced), g.evaluate_word(&u));
        prop_assert_eq!(reduced.is_empty(), g.evaluate_word(&u) == g.identity());
    }

    #[test]
    fn word_of_round_trips(gi in 0usize..7, seed in prop::collection::vec(any::<u8>(), 0..12)) {
        let g = &groups()[gi];
        let w: Vec<Gen> = seed.iter().map(|x| x % g.generators().len() as u8).collect();
        let key = g.evaluate_word(&w);
        prop_assert_eq!(g.evaluate_word(&g.word_of(&key)), key.clone());
        prop_assert_eq!(g.parse_key(&g.format_key(&key)).unwrap(), key);
    }

    #[test]
    fn group_axioms(gi in 0usize..7, a in prop::collection::vec(any::<u8>(), 0..8), b in prop::collection::vec(any::<u8>(), 0..8), c in prop::collection::vec(any::<u8>(), 0..8)) {
        let g = &groups()[gi];
        let r = g.generators().len() as u8;
        let ev = |s: &[u8]| g.evaluate_word(&s.iter().map(|x| x % r).collect::<Vec<_>>());
        let (x, y, z) = (ev(&a), ev(&b), ev(&c));
        prop_assert_eq!(g.multiply(&g.multiply(&x, &y), &z), g.multiply(&x, &g.multiply(&y, &z)));
        prop_assert_eq!(g.multiply(&x, &g.inverse(&x)), g.identity());
        prop_assert_eq!(g.multiply(&g.identity(), &x), x.clone());
        let ab: Vec<u8> = a.iter().chain(&b).copied().collect();
        prop_assert_eq!(ev(&ab), g.multiply(&x, &y));
    }
}

#[test]
fn ball_sizes() {
    let f2 = GroupOracle::free(2).unwrap();
    let z2 = GroupOracle::free_abelian(2).unwrap();
    let z3 = GroupOracle::free_abelian(3).unwrap();
    for k in 0..=5usize {
        assert_eq!(f2.shortlex_enumerate(k).len(), 2 * 3usize.pow(k as u32) - 1);
        assert_eq!(z2.shortlex_enumerate(k).len(), 2 * k * k + 2 * k + 1);
        // |B_k| in Z³: sum over |x| ≤ k of (2(k−|x|)² + 2(k−|x|) + 1)
        let z3_size: usize = (-(k as i64)..=k as i64)
            .map(|x| {
                let j = k - x.unsigned_abs() as usize;
                2 * j * j + 2 * j + 1
            })
            .sum();
        assert_eq!(z3.shortlex_enumerate(k).len(), z3_size);
    }
    assert_eq!(s3().shortlex_enumerate(10).len(), 6);
}

#[test]
fn shortlex_enumeration_is_ordered_and_geodesic() {
    for g in groups() {
        let ball = g.shortlex_enumerate(4);
        let keys: HashSet<&Key> = ball.iter().map(|(_, k)| k).collect();
        assert_eq!(keys.len(), ball.len());
        for pair in ball.windows(2) {
            assert_eq!(ufolab::groups::shortlex_cmp(&pair[0].0, &pair[1].0), std::cmp::Ordering::Less);
        }
        for (w, k) in &ball {
            assert_eq!(&g.evaluate_word(w), k);
        }
        // every element at distance ≤ 3 shows up with a word no longer than any representative
        let r = g.generators().len() as Gen;
        let mut stack = vec![Vec::new()];
        while let Some(w) = stack.pop() {
            let k = g.evaluate_word(&w);
            let found = ball.iter().find(|(_, key)| *key == k).expect("element of B_3 missing");
            assert!(found.0.len() <= w.len());
            if w.len() < 3 {
                for x in 0..r {
                    let mut v = w.clone();
                    v.push(x);
                    stack.push(v);
                }
            }
        }
    }
}

#[test]
fn britton_examples() {
    let g = GroupOracle::baumslag_solitar(1, 2).unwrap();
    let gens = g.generators();
    let reduce = |s: &str| gens.format_word(&g.britton_reduce(&gens.parse_word(s).unwrap()).unwrap());
    assert_eq!(reduce("b a b_inv a_inv a_inv"), "");
    assert_eq!(reduce("b a a b_inv"), "a a a a");
    assert_eq!(reduce("b_inv a a b"), "a");
    // b⁻¹ a b is not a pinch for n = 2
    assert_eq!(reduce("b_inv a b"), "b_inv a b");
    let g = GroupOracle::baumslag_solitar(2, 3).unwrap();
    assert_eq!(gens.format_word(&g.britton_reduce(&gens.parse_word("b a b_inv").unwrap()).unwrap()), "b a b_inv");
    assert!(GroupOracle::free(2).unwrap().britton_reduce(&[0]).is_err());
}

#[test]
fn explicit_tables_are_validated() {
    let bad = vec![vec![0, 1], vec![1, 1]];
    assert!(GroupOracle::explicit(bad, 0, &[]).is_err());
    let z2 = vec![vec![0, 1], vec![1, 0]];
    assert!(GroupOracle::explicit(z2.clone(), 0, &[("t".into(), 1)]).is_ok());
    let z3 = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
    assert!(GroupOracle::explicit(z3, 0, &[("t".into(), 1)]).is_err());
}
