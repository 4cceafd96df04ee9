//! Deciding primitive equivalence by breadth-first search.
//!
//! All three moves (forward transfer, reverse transfer, conjugation) keep the
//! dimension, so the equivalence class of an `n × n` matrix is a finite set.
//! The search runs over canonical forms: conjugation is factored out of the
//! state space and reinstated as explicit permute moves when a certificate
//! is rebuilt.
//!
//! Frontiers are expanded level by level. Successors of a level are computed
//! in parallel and merged in ascending key order, so the first parent to
//! reach a state is its least predecessor and results do not depend on the
//! thread count.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::decompose::{check, Move, MoveSequence};
use crate::error::{Error, Result};
use crate::matrix::{canonical_form, canonical_key, Permutation, ZeroOneMatrix, CANONICAL_LIMIT};
use crate::par;
use crate::transfer::{apply, enumerate, enumerate_reverse, invert};
use crate::vertex_set::VertexSet;

/// Largest dimension accepted by [`equivalence_class`] and [`classify`].
pub const CLASS_HARD_LIMIT: usize = 5;

pub const DEFAULT_MAX_STATES: usize = 1 << 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Cap on visited canonical states.
    pub max_states: usize,
    /// Largest dimension for class exploration; at most [`CLASS_HARD_LIMIT`].
    pub max_n: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_states: DEFAULT_MAX_STATES,
            max_n: 4,
        }
    }
}

impl Limits {
    fn check_class_dim(&self, n: usize) -> Result<()> {
        let limit = self.max_n.min(CLASS_HARD_LIMIT);
        if n > limit {
            return Err(Error::DimensionTooLarge { n, limit });
        }
        Ok(())
    }
}

/// Every matrix one transfer away from `a`, forward moves first.
/// Permutation moves are not listed.
pub fn neighbors(a: &ZeroOneMatrix) -> Vec<(Move, ZeroOneMatrix)> {
    let mut out = Vec::new();
    for t in enumerate(a, false) {
        let b = apply(a, &t).expect("enumerated transfers are valid");
        out.push((Move::ForwardTransfer(t), b));
    }
    for t in enumerate_reverse(a) {
        let c = invert(a, &t).expect("enumerated preimages exist");
        out.push((Move::ReverseTransfer(t), c));
    }
    debug_assert!(out.iter().all(|(_, m)| m.n() == a.n()));
    out
}

/// How a state was first reached: `mv` takes the parent's canonical matrix
/// to some `Y`, and `conjugate(Y, witness)` is this state's canonical matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Link {
    pub parent: u64,
    pub mv: Move,
    pub witness: Permutation,
}

struct Explorer {
    n: usize,
    visited: HashMap<u64, Option<Link>>,
    frontier: Vec<u64>,
}

impl Explorer {
    fn new(n: usize, root: u64) -> Self {
        Explorer {
            n,
            visited: HashMap::from([(root, None)]),
            frontier: vec![root],
        }
    }

    /// Expands one level. Returns newly found states that `other` already
    /// knows, in ascending order.
    fn expand(&mut self, other: Option<&HashMap<u64, Option<Link>>>) -> Vec<u64> {
        let n = self.n;
        let children = par::map_collect(&self.frontier, |&key| successors(n, key));
        let mut next = Vec::new();
        let mut meets = Vec::new();
        for (&parent, kids) in self.frontier.iter().zip(children) {
            for (child, mv, witness) in kids {
                if self.visited.contains_key(&child) {
                    continue;
                }
                self.visited.insert(
                    child,
                    Some(Link {
                        parent,
                        mv,
                        witness,
                    }),
                );
                next.push(child);
                if other.is_some_and(|o| o.contains_key(&child)) {
                    meets.push(child);
                }
            }
        }
        next.sort_unstable();
        meets.sort_unstable();
        self.frontier = next;
        meets
    }

    /// Moves from the root's canonical matrix to `key`'s.
    fn path_to(&self, key: u64) -> Vec<Move> {
        path_via(key, |k| self.visited.get(&k).and_then(Option::as_ref))
    }
}

/// Follows parent links from `key` up to the root and returns the moves in
/// root-to-`key` order.
fn path_via<'a>(mut key: u64, link_of: impl Fn(u64) -> Option<&'a Link>) -> Vec<Move> {
    let mut rev = Vec::new();
    while let Some(link) = link_of(key) {
        rev.push(Move::Permute {
            perm: link.witness.clone(),
        });
        rev.push(link.mv.clone());
        key = link.parent;
    }
    rev.reverse();
    rev
}

fn successors(n: usize, key: u64) -> Vec<(u64, Move, Permutation)> {
    let a = ZeroOneMatrix::from_key(n, key).expect("visited keys decode");
    neighbors(&a)
        .into_iter()
        .map(|(mv, y)| {
            let (canon, witness) = canonical_form(&y).expect("dimension checked on entry");
            (
                canon.key().expect("canonical dimension fits a key"),
                mv,
                witness,
            )
        })
        .collect()
}

/// The explored part of one equivalence class.
#[derive(Clone, Debug)]
pub struct ClassExploration {
    pub n: usize,
    /// Canonical key of the starting matrix.
    pub root: u64,
    /// Canonical keys of all members found, ascending.
    pub members: Vec<u64>,
    /// Spanning tree: how each non-root member was first reached.
    pub links: HashMap<u64, Link>,
    /// False when the state cap stopped the search early.
    pub complete: bool,
}

impl ClassExploration {
    pub fn contains(&self, key: u64) -> bool {
        self.members.binary_search(&key).is_ok()
    }

    /// Moves leading from the root's canonical matrix to `key`'s.
    pub fn path_from_root(&self, key: u64) -> Option<Vec<Move>> {
        self.contains(key)
            .then(|| path_via(key, |k| self.links.get(&k)))
    }
}

/// Breadth-first closure of `canonical_form(a)` under transfers in both
/// directions, modulo conjugation.
pub fn equivalence_class(a: &ZeroOneMatrix, limits: &Limits) -> Result<ClassExploration> {
    limits.check_class_dim(a.n())?;
    Ok(explore_class(a.n(), canonical_key(a)?, limits.max_states))
}

fn explore_class(n: usize, root: u64, max_states: usize) -> ClassExploration {
    let mut ex = Explorer::new(n, root);
    let mut complete = true;
    while !ex.frontier.is_empty() {
        if ex.visited.len() > max_states {
            complete = false;
            break;
        }
        ex.expand(None);
    }
    let mut members: Vec<u64> = ex.visited.keys().copied().collect();
    members.sort_unstable();
    let links = ex
        .visited
        .into_iter()
        .filter_map(|(k, l)| l.map(|l| (k, l)))
        .collect();
    ClassExploration {
        n,
        root,
        members,
        links,
        complete,
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Equivalent(MoveSequence),
    NotEquivalent,
    /// The state cap was reached before the search could decide.
    Unknown,
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent(_))
    }
}

/// Decides whether `a` and `b` are primitively equivalent by bidirectional
/// breadth-first search over canonical forms. A positive answer carries a
/// certificate that passes [`crate::verify`].
pub fn are_equivalent(a: &ZeroOneMatrix, b: &ZeroOneMatrix, limits: &Limits) -> Result<Verdict> {
    if a.n() != b.n() {
        return Ok(Verdict::NotEquivalent);
    }
    let n = a.n();
    if n > CANONICAL_LIMIT {
        return Err(Error::DimensionTooLarge {
            n,
            limit: CANONICAL_LIMIT,
        });
    }
    let (ca, wa) = canonical_form(a)?;
    let (cb, wb) = canonical_form(b)?;
    let (ka, kb) = (ca.key().unwrap(), cb.key().unwrap());

    let mut left = Explorer::new(n, ka);
    let mut right = Explorer::new(n, kb);
    let meet = if ka == kb {
        ka
    } else {
        loop {
            if left.frontier.is_empty() || right.frontier.is_empty() {
                return Ok(Verdict::NotEquivalent);
            }
            if left.visited.len() + right.visited.len() > limits.max_states {
                return Ok(Verdict::Unknown);
            }
            let meets = if left.frontier.len() <= right.frontier.len() {
                left.expand(Some(&right.visited))
            } else {
                right.expand(Some(&left.visited))
            };
            if let Some(&m) = meets.first() {
                break m;
            }
        }
    };

    let mut moves = vec![Move::Permute { perm: wa }];
    moves.extend(left.path_to(meet));
    moves.extend(right.path_to(meet).iter().rev().map(Move::reversed));
    moves.push(Move::Permute { perm: wb.inverse() });
    let seq = MoveSequence::new(a.clone(), simplify(moves), b.clone());
    check(&seq)
        .map_err(|e| Error::Certificate(format!("reconstructed chain does not replay: {e}")))?;
    Ok(Verdict::Equivalent(seq))
}

/// Merges adjacent permute moves and drops identities.
fn simplify(moves: Vec<Move>) -> Vec<Move> {
    let mut out: Vec<Move> = Vec::with_capacity(moves.len());
    for mv in moves {
        match (out.last_mut(), mv) {
            (Some(Move::Permute { perm: prev }), Move::Permute { perm }) => {
                *prev = perm.compose(prev);
            }
            (_, mv) => out.push(mv),
        }
        if matches!(out.last(), Some(Move::Permute { perm }) if perm.is_identity()) {
            out.pop();
        }
    }
    out
}

/// Strong connectivity of the digraph of `a`. A 1×1 matrix counts as
/// irreducible only when it has its loop.
pub fn is_irreducible(a: &ZeroOneMatrix) -> bool {
    let n = a.n();
    if n == 1 {
        return a.entry(0, 0);
    }
    let full = VertexSet::full(n);
    let reach = |step: &dyn Fn(usize) -> VertexSet| {
        let mut seen = VertexSet::singleton(0);
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            for w in step(v).difference(seen) {
                seen.insert(w);
                stack.push(w);
            }
        }
        seen
    };
    let forward = reach(&|v| a.row(v));
    if forward != full {
        return false;
    }
    let backward = reach(&|v| (0..n).filter(|&u| a.entry(u, v)).collect());
    backward == full
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Filter {
    #[default]
    All,
    Irreducible,
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Filter::All => "all",
            Filter::Irreducible => "irreducible",
        })
    }
}

impl FromStr for Filter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "all" => Ok(Filter::All),
            "irreducible" => Ok(Filter::Irreducible),
            other => Err(format!(
                "unknown filter {other:?} (expected all or irreducible)"
            )),
        }
    }
}

/// One primitive-equivalence class of the atlas.
#[derive(Clone, Debug)]
pub struct AtlasClass {
    /// Least member in canonical key order.
    pub representative: ZeroOneMatrix,
    /// Canonical keys of the members kept by the filter, ascending.
    pub members: Vec<u64>,
    /// Number of labelled `n × n` matrices whose canonical form is a member.
    pub matrix_count: u64,
    pub irreducible: bool,
    /// Spanning tree over the whole class (unfiltered), rooted at the least
    /// canonical form of the class.
    pub links: HashMap<u64, Link>,
    pub root: u64,
}

impl AtlasClass {
    /// Number of canonical forms in the class.
    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Certificate from the class root to the canonical matrix `key`.
    pub fn path_from_root(&self, key: u64) -> Vec<Move> {
        path_via(key, |k| self.links.get(&k))
    }
}

#[derive(Clone, Debug)]
pub struct ClassAtlas {
    pub n: usize,
    pub filter: Filter,
    pub classes: Vec<AtlasClass>,
}

impl ClassAtlas {
    pub fn class_of(&self, key: u64) -> Option<usize> {
        self.classes
            .iter()
            .position(|c| c.members.binary_search(&key).is_ok())
    }
}

/// Canonical key of every `n × n` matrix paired with how many labelled
/// matrices share it, ascending by key.
pub fn canonical_census(n: usize) -> Result<Vec<(u64, u64)>> {
    if n > CLASS_HARD_LIMIT {
        return Err(Error::DimensionTooLarge {
            n,
            limit: CLASS_HARD_LIMIT,
        });
    }
    let total = 1u64 << (n * n);
    let keys = par::filter_map_range(total, |k| {
        let a = ZeroOneMatrix::from_key(n, k).expect("in range");
        Some(canonical_key(&a).expect("small dimension"))
    });
    let mut counts: HashMap<u64, u64> = HashMap::new();
    for k in keys {
        *counts.entry(k).or_default() += 1;
    }
    let mut out: Vec<(u64, u64)> = counts.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

/// Partitions all canonical `n × n` forms into primitive-equivalence
/// classes, in ascending order of representative.
///
/// Classes are always computed over the full set of matrices; with
/// [`Filter::Irreducible`] each class then keeps only its irreducible members
/// and classes without any are dropped.
pub fn classify(n: usize, filter: Filter, limits: &Limits) -> Result<ClassAtlas> {
    if n == 0 {
        return Err(Error::EmptyDimension);
    }
    limits.check_class_dim(n)?;
    let census = canonical_census(n)?;
    let counts: HashMap<u64, u64> = census.iter().copied().collect();
    let mut assigned: HashMap<u64, usize> = HashMap::with_capacity(census.len());
    let mut classes = Vec::new();
    for &(key, _) in &census {
        if assigned.contains_key(&key) {
            continue;
        }
        let ex = explore_class(n, key, limits.max_states);
        if !ex.complete {
            return Err(Error::StateCapExceeded {
                cap: limits.max_states,
            });
        }
        let index = classes.len();
        for &m in &ex.members {
            assigned.insert(m, index);
        }
        classes.push(ex);
    }

    let mut out = Vec::new();
    for ex in classes {
        let keep: Vec<u64> = ex
            .members
            .iter()
            .copied()
            .filter(|&k| match filter {
                Filter::All => true,
                Filter::Irreducible => is_irreducible(&ZeroOneMatrix::from_key(n, k).unwrap()),
            })
            .collect();
        let Some(&first) = keep.first() else { continue };
        let representative = ZeroOneMatrix::from_key(n, first)?;
        out.push(AtlasClass {
            irreducible: is_irreducible(&representative),
            representative,
            matrix_count: keep.iter().map(|k| counts[k]).sum(),
            members: keep,
            links: ex.links,
            root: ex.root,
        });
    }
    Ok(ClassAtlas {
        n,
        filter,
        classes: out,
    })
}
