#![allow(dead_code)]

use primeq::{PrimitiveTransfer, VertexSet, ZeroOneMatrix};
use rand::Rng;

/// Matrix `A` of the 8×8 worked example, 0-based.
pub const EXAMPLE_A: [&str; 8] = [
    "11011111", "00000000", "01000000", "00011000", "00000000", "10000000", "00000101", "00000010",
];

/// Matrix `B` of the worked example: row 0 replaced by the indicator of {2,3,5,6,7}.
pub const EXAMPLE_B: [&str; 8] = [
    "00110111", "00000000", "01000000", "00011000", "00000000", "10000000", "00000101", "00000010",
];

pub fn example_a() -> ZeroOneMatrix {
    ZeroOneMatrix::from_strs(&EXAMPLE_A).unwrap()
}

pub fn example_b() -> ZeroOneMatrix {
    ZeroOneMatrix::from_strs(&EXAMPLE_B).unwrap()
}

pub fn set(s: &str) -> VertexSet {
    s.parse().unwrap()
}

/// `A_1 = A_3 + A_4 + A_6 + A_7 + A_8` in 1-based labels.
pub fn example_transfer() -> PrimitiveTransfer {
    PrimitiveTransfer::new(0, set("2,3,5,6,7"), VertexSet::EMPTY)
}

pub fn m(rows: &[&str]) -> ZeroOneMatrix {
    ZeroOneMatrix::from_strs(rows).unwrap()
}

pub fn all_matrices(n: usize) -> impl Iterator<Item = ZeroOneMatrix> {
    (0..1u64 << (n * n)).map(move |k| ZeroOneMatrix::from_key(n, k).unwrap())
}

pub fn random_matrix(rng: &mut impl Rng, n: usize, density: f64) -> ZeroOneMatrix {
    ZeroOneMatrix::from_fn(n, |_, _| rng.gen_bool(density)).unwrap()
}

/// A matrix and a valid transfer built directly from the row equation:
/// rows over `M` get disjoint random supports, row `p` is set to their union
/// plus `K`.
pub fn random_transfer(rng: &mut impl Rng, n: usize) -> (ZeroOneMatrix, PrimitiveTransfer) {
    let base = random_matrix(rng, n, 0.3);
    let p = rng.gen_range(0..n);
    let summed: VertexSet = (0..n).filter(|&i| i != p && rng.gen_bool(0.6)).collect();
    let members: Vec<usize> = summed.iter().collect();
    let mut rows: Vec<VertexSet> = base.rows().to_vec();
    for &mm in &members {
        rows[mm] = VertexSet::EMPTY;
    }
    let mut units = VertexSet::EMPTY;
    for col in 0..n {
        // owner: one of M, K (if col ∉ M), or nobody
        let choice = rng.gen_range(0..members.len() + 2);
        if choice < members.len() {
            rows[members[choice]].insert(col);
        } else if choice == members.len() && !summed.contains(col) {
            units.insert(col);
        }
    }
    let union = members
        .iter()
        .fold(VertexSet::EMPTY, |acc, &i| acc.union(rows[i]));
    rows[p] = union.union(units);
    let a = ZeroOneMatrix::new(n, rows).unwrap();
    (a, PrimitiveTransfer::new(p, summed, units))
}

/// Validity straight from the integer row equation.
pub fn naive_valid(a: &ZeroOneMatrix, t: &PrimitiveTransfer) -> bool {
    let n = a.n();
    if t.summed.contains(t.pivot) || !t.summed.is_disjoint(t.units) {
        return false;
    }
    (0..n).all(|j| {
        let sum: u32 = t.summed.iter().map(|mm| a.entry(mm, j) as u32).sum::<u32>()
            + t.units.contains(j) as u32;
        sum == a.entry(t.pivot, j) as u32
    })
}

/// Every (p, M, K) satisfying the row equation, by exhaustive search over all
/// subsets M and K.
pub fn naive_enumerate(a: &ZeroOneMatrix, include_trivial: bool) -> Vec<PrimitiveTransfer> {
    let n = a.n();
    let mut out = Vec::new();
    for p in 0..n {
        for mbits in 0..1u64 << n {
            for kbits in 0..1u64 << n {
                let t = PrimitiveTransfer::new(
                    p,
                    VertexSet::from_bits(mbits),
                    VertexSet::from_bits(kbits),
                );
                if (include_trivial || mbits != 0) && naive_valid(a, &t) {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// Relabelling by an explicit permutation list: edge (v, w) ↦ (p[v], p[w]).
pub fn relabel(a: &ZeroOneMatrix, p: &[usize]) -> ZeroOneMatrix {
    let n = a.n();
    let mut entries = vec![vec![false; n]; n];
    for v in 0..n {
        for w in 0..n {
            entries[p[v]][p[w]] = a.entry(v, w);
        }
    }
    ZeroOneMatrix::from_fn(n, |i, j| entries[i][j]).unwrap()
}

pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in all_permutations(n - 1) {
        for pos in 0..n {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

/// Least conjugate by trying all permutations, comparing row strings.
pub fn naive_canonical(a: &ZeroOneMatrix) -> ZeroOneMatrix {
    all_permutations(a.n())
        .iter()
        .map(|p| relabel(a, p))
        .min_by_key(|c| c.to_string())
        .unwrap()
}

/// Transitive closure by repeated squaring over booleans.
pub fn reachability(a: &ZeroOneMatrix) -> Vec<Vec<bool>> {
    let n = a.n();
    let mut r: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| a.entry(i, j)).collect())
        .collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

pub fn naive_irreducible(a: &ZeroOneMatrix) -> bool {
    let r = reachability(a);
    (0..a.n()).all(|i| (0..a.n()).all(|j| r[i][j]))
}
