//! Exhaustive agreement with brute-force oracles at small dimension.

mod common;

use std::collections::{BTreeSet, HashMap};

use common::*;
use primeq::decompose::Move;
use primeq::matrix::{canonical_form, digraph_from_matrix};
use primeq::search::{canonical_census, classify, Filter};
use primeq::*;

#[test]
fn enumerate_matches_naive_on_all_3x3() {
    for a in all_matrices(3) {
        for trivial in [false, true] {
            let mut naive = naive_enumerate(&a, trivial);
            naive.sort_by_key(|t| (t.pivot, t.summed));
            assert_eq!(enumerate(&a, trivial), naive, "{a:?}");
        }
    }
}

#[test]
fn enumerate_chain_by_hand() {
    let a = m(&["010", "001", "000"]);
    let naive = naive_enumerate(&a, false);
    assert_eq!(naive, vec![PrimitiveTransfer::new(0, set("2"), set("1"))]);
    assert_eq!(enumerate(&a, false), naive);
}

#[test]
fn canonical_forms_match_brute_force_on_3x3() {
    for a in all_matrices(3) {
        assert_eq!(canonical_form(&a).unwrap().0, naive_canonical(&a));
    }
}

/// Orbits of all 3×3 matrices under the six relabellings, found by flood
/// fill.
#[test]
fn orbit_count_3x3() {
    let perms = all_permutations(3);
    let mut orbit_of: HashMap<String, usize> = HashMap::new();
    let mut orbits = 0;
    for a in all_matrices(3) {
        if orbit_of.contains_key(&a.to_string()) {
            continue;
        }
        for p in &perms {
            orbit_of.insert(relabel(&a, p).to_string(), orbits);
        }
        orbits += 1;
    }
    assert_eq!(orbits, 104);
    let census = canonical_census(3).unwrap();
    assert_eq!(census.len(), orbits);
    assert_eq!(census.iter().map(|c| c.1).sum::<u64>(), 512);
    let canon: BTreeSet<_> = all_matrices(3)
        .map(|a| canonical_form(&a).unwrap().0.to_string())
        .collect();
    assert_eq!(canon.len(), orbits);
}

#[test]
fn orbit_counts_2_and_4() {
    assert_eq!(canonical_census(2).unwrap().len(), 10);
    assert_eq!(canonical_census(4).unwrap().len(), 3044);
}

#[test]
fn conjugate_matches_relabel_on_4x4() {
    let p = Permutation::new(vec![2, 0, 3, 1]).unwrap();
    for key in (0..1u64 << 16).step_by(97) {
        let a = ZeroOneMatrix::from_key(4, key).unwrap();
        let c = conjugate(&a, &p).unwrap();
        let g = digraph_from_matrix(&c);
        for v in 0..4 {
            for w in 0..4 {
                assert_eq!(g.has_edge(p.apply(v), p.apply(w)), a.entry(v, w));
            }
        }
        assert_eq!(c, relabel(&a, p.as_slice()));
    }
}

#[test]
fn irreducibility_matches_closure_on_3x3() {
    for a in all_matrices(3) {
        assert_eq!(search::is_irreducible(&a), naive_irreducible(&a), "{a:?}");
    }
    for a in all_matrices(1) {
        assert_eq!(search::is_irreducible(&a), naive_irreducible(&a));
    }
}

#[test]
fn neighbor_relation_is_symmetric_on_3x3() {
    let mut edges: HashMap<ZeroOneMatrix, Vec<(Move, ZeroOneMatrix)>> = HashMap::new();
    for a in all_matrices(3) {
        let ns = neighbors(&a);
        for (mv, b) in &ns {
            assert_eq!(b.n(), 3);
            assert_eq!(&mv.step(&a).unwrap(), b);
        }
        edges.insert(a, ns);
    }
    for (a, ns) in &edges {
        for (mv, b) in ns {
            let back = mv.reversed();
            assert!(
                edges[b].contains(&(back, a.clone())),
                "{a:?} -> {b:?} has no way back"
            );
        }
    }
}

/// Classes at n = 2 from a closure that never canonicalizes: union every
/// matrix with all its transfers (found by the naive row-equation search)
/// and all its conjugates.
#[test]
fn n2_partition_matches_naive_closure() {
    let mats: Vec<ZeroOneMatrix> = all_matrices(2).collect();
    let index: HashMap<ZeroOneMatrix, usize> = mats
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, a)| (a, i))
        .collect();
    let mut parent: Vec<usize> = (0..mats.len()).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for (i, a) in mats.iter().enumerate() {
        let mut targets: Vec<ZeroOneMatrix> = naive_enumerate(a, true)
            .iter()
            .map(|t| a.with_row(t.pivot, t.summed.union(t.units)))
            .collect();
        targets.extend(all_permutations(2).iter().map(|p| relabel(a, p)));
        for b in targets {
            let (x, y) = (find(&mut parent, i), find(&mut parent, index[&b]));
            parent[x] = y;
        }
    }
    let mut naive_classes: BTreeSet<BTreeSet<String>> = BTreeSet::new();
    let mut groups: HashMap<usize, BTreeSet<String>> = HashMap::new();
    for (i, a) in mats.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().insert(a.to_string());
    }
    naive_classes.extend(groups.into_values());

    let atlas = classify(2, Filter::All, &Limits::default()).unwrap();
    let mut searched: BTreeSet<BTreeSet<String>> = BTreeSet::new();
    for class in &atlas.classes {
        let keys: BTreeSet<u64> = class.members.iter().copied().collect();
        let members: BTreeSet<String> = mats
            .iter()
            .filter(|a| keys.contains(&primeq::matrix::canonical_key(a).unwrap()))
            .map(|a| a.to_string())
            .collect();
        assert_eq!(members.len() as u64, class.matrix_count);
        searched.insert(members);
    }
    assert_eq!(searched, naive_classes);
    assert_eq!(atlas.classes.len(), 6);
}

#[test]
fn class_sizes_partition_3x3_forms() {
    let atlas = classify(3, Filter::All, &Limits::default()).unwrap();
    assert_eq!(atlas.classes.iter().map(|c| c.size()).sum::<usize>(), 104);
    assert_eq!(
        atlas.classes.iter().map(|c| c.matrix_count).sum::<u64>(),
        512
    );
    assert_eq!(atlas.classes.len(), 31);
    let irr = classify(3, Filter::Irreducible, &Limits::default()).unwrap();
    assert_eq!(irr.classes.len(), 8);
    let irreducible_forms = canonical_census(3)
        .unwrap()
        .iter()
        .filter(|(k, _)| naive_irreducible(&ZeroOneMatrix::from_key(3, *k).unwrap()))
        .count();
    assert_eq!(
        irr.classes.iter().map(|c| c.size()).sum::<usize>(),
        irreducible_forms
    );
    let reps: Vec<u64> = atlas
        .classes
        .iter()
        .map(|c| c.representative.key().unwrap())
        .collect();
    assert!(reps.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn zero_matrix_class_is_not_a_singleton() {
    // A_0 = A_1 holds for two zero rows, so the zero matrix gains an edge
    let z = ZeroOneMatrix::zero(3).unwrap();
    let t = PrimitiveTransfer::new(0, set("1"), set(""));
    assert_eq!(apply(&z, &t).unwrap(), m(&["010", "000", "000"]));
    let ex = equivalence_class(&z, &Limits::default()).unwrap();
    assert!(ex.complete);
    assert_eq!(ex.members.len(), 6);
    let ones = ZeroOneMatrix::ones(3).unwrap();
    assert!(!ex.contains(primeq::matrix::canonical_key(&ones).unwrap()));
    assert!(matches!(
        are_equivalent(&z, &ones, &Limits::default()).unwrap(),
        search::Verdict::NotEquivalent
    ));
}

#[test]
fn identity_is_a_singleton_class() {
    let i3 = ZeroOneMatrix::identity(3).unwrap();
    let ex = equivalence_class(&i3, &Limits::default()).unwrap();
    assert_eq!(ex.members, vec![i3.key().unwrap()]);
}

/// Every pair inside a class is decided equivalent with a replaying
/// certificate; representatives of distinct classes are not.
#[test]
fn class_consistency_at_n3() {
    let atlas = classify(3, Filter::All, &Limits::default()).unwrap();
    let limits = Limits::default();
    for class in &atlas.classes {
        let rep = &class.representative;
        for &k in &class.members {
            let b = ZeroOneMatrix::from_key(3, k).unwrap();
            let search::Verdict::Equivalent(seq) = are_equivalent(rep, &b, &limits).unwrap() else {
                panic!("{rep:?} and {b:?} share a class");
            };
            assert!(verify(&seq));
            // the stored spanning tree is a certificate too
            let tree = MoveSequence::new(rep.clone(), class.path_from_root(k), b.clone());
            assert!(verify(&tree));
        }
    }
    for (i, x) in atlas.classes.iter().enumerate() {
        for y in &atlas.classes[i + 1..] {
            let v = are_equivalent(&x.representative, &y.representative, &limits).unwrap();
            assert!(matches!(v, search::Verdict::NotEquivalent));
        }
    }
}

#[test]
fn decompose_every_transfer_of_every_3x3() {
    for a in all_matrices(3) {
        for t in enumerate(&a, false) {
            let seq = decompose(&a, &t).unwrap();
            assert!(verify(&seq), "{a:?} {t}");
            let comps = transfer_graph(&a, &t).unwrap().components.len();
            assert_eq!(seq.moves.len(), 2 * t.size() - comps);
            assert_eq!(seq.forward_count(), t.size());
        }
    }
}
