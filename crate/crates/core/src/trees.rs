//! Rooted plane trees with uniform leaf depth, their transformation and
//! automorphism counts, and the tree families that lower-bound bell_k(p).
//!
//! A (k,p)-tree has p leaves, all at depth k+1; its internal levels 1..k give
//! a k-level hierarchical partition of the leaves.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::bell::{bell_kp, iter_log, HierPartition, Partition};
use crate::error::{Error, Result};
use crate::math::{factorial, ln_big, rat, rat_pow, Rational};
use crate::report::{BoundCheck, GapReport, Relation};

pub const DEFAULT_TREE_CAP: u64 = 1_000_000;
/// τ-enumeration cross-checks run up to this many leaves.
pub const MAX_TAU_ENUM_P: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaneTree {
    children: Vec<PlaneTree>,
}

impl PlaneTree {
    pub fn leaf() -> Self {
        PlaneTree { children: Vec::new() }
    }

    pub fn node(children: Vec<PlaneTree>) -> Self {
        PlaneTree { children }
    }

    /// Root with p leaf children.
    pub fn star(p: usize) -> Self {
        PlaneTree::node(vec![PlaneTree::leaf(); p])
    }

    /// A chain of `len` edges ending in `bottom`.
    pub fn chain(len: usize, bottom: PlaneTree) -> Self {
        (0..len).fold(bottom, |t, _| PlaneTree::node(vec![t]))
    }

    pub fn children(&self) -> &[PlaneTree] {
        &self.children
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn num_leaves(&self) -> usize {
        if self.is_leaf() {
            1
        } else {
            self.children.iter().map(PlaneTree::num_leaves).sum()
        }
    }

    pub fn num_nodes(&self) -> usize {
        1 + self.children.iter().map(PlaneTree::num_nodes).sum::<usize>()
    }

    /// Common depth of all leaves, if uniform.
    pub fn leaf_depth(&self) -> Option<usize> {
        if self.is_leaf() {
            return Some(0);
        }
        let d = self.children[0].leaf_depth()?;
        self.children.iter().all(|c| c.leaf_depth() == Some(d)).then_some(d + 1)
    }

    /// k for a (k,p)-tree (leaf depth minus one).
    pub fn k(&self) -> Option<usize> {
        self.leaf_depth()?.checked_sub(1)
    }

    /// Preorder child counts, comma separated.
    pub fn code(&self) -> String {
        let mut out = Vec::new();
        self.preorder(&mut out);
        out.iter().join(",")
    }

    fn preorder(&self, out: &mut Vec<usize>) {
        out.push(self.children.len());
        for c in &self.children {
            c.preorder(out);
        }
    }

    /// Children sorted recursively; equal for equivalent trees.
    pub fn canonical(&self) -> PlaneTree {
        let mut children: Vec<PlaneTree> = self.children.iter().map(PlaneTree::canonical).collect();
        children.sort();
        PlaneTree { children }
    }

    pub fn is_equivalent(&self, other: &PlaneTree) -> bool {
        self.canonical() == other.canonical()
    }

    /// Every node has at most two children.
    pub fn is_binary(&self) -> bool {
        self.children.len() <= 2 && self.children.iter().all(PlaneTree::is_binary)
    }

    /// Replace every leaf, left to right, by `f(i)`.
    pub fn graft(&self, f: &mut impl FnMut(usize) -> PlaneTree) -> PlaneTree {
        fn go(t: &PlaneTree, next: &mut usize, f: &mut impl FnMut(usize) -> PlaneTree) -> PlaneTree {
            if t.is_leaf() {
                let i = *next;
                *next += 1;
                return f(i);
            }
            PlaneTree::node(t.children.iter().map(|c| go(c, next, f)).collect())
        }
        go(self, &mut 0, f)
    }

    /// Level-`level` ancestor id of every leaf, left to right.
    fn ancestors_at(&self, level: usize) -> Vec<usize> {
        fn go(t: &PlaneTree, depth: usize, level: usize, id: &mut usize, cur: usize, out: &mut Vec<usize>) {
            let cur = if depth == level {
                *id += 1;
                *id
            } else {
                cur
            };
            if t.is_leaf() {
                out.push(cur);
            }
            for c in &t.children {
                go(c, depth + 1, level, id, cur, out);
            }
        }
        let mut out = Vec::new();
        go(self, 0, level, &mut 0, 0, &mut out);
        out
    }
}

impl fmt::Display for PlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

impl FromStr for PlaneTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let counts: Vec<usize> = s
            .split(',')
            .map(|x| x.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidArgument(format!("bad tree code {s:?}: {e}")))?;
        fn go(counts: &[usize], pos: &mut usize) -> Option<PlaneTree> {
            let n = *counts.get(*pos)?;
            *pos += 1;
            let children = (0..n).map(|_| go(counts, pos)).collect::<Option<Vec<_>>>()?;
            Some(PlaneTree { children })
        }
        let mut pos = 0;
        match go(&counts, &mut pos) {
            Some(t) if pos == counts.len() => Ok(t),
            _ => Err(Error::InvalidArgument(format!("tree code {s:?} is not a single preorder tree"))),
        }
    }
}

impl serde::Serialize for PlaneTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.code())
    }
}

impl<'de> serde::Deserialize<'de> for PlaneTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Compositions of n, lexicographic.
fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Number of plane trees with n leaves all at depth `depth`.
pub fn count_trees(depth: usize, n: usize) -> BigUint {
    // c[d][m] = Σ over compositions of m of Π c[d-1][part]
    let mut c = vec![BigUint::zero(); n + 1];
    if n >= 1 {
        c[1] = BigUint::one();
    }
    if depth == 0 {
        return c[n].clone();
    }
    for _ in 0..depth {
        let prev = c.clone();
        // s[m] = Σ_{first} prev[first]·s[m-first], s[0] = 1
        let mut s = vec![BigUint::zero(); n + 1];
        s[0] = BigUint::one();
        for m in 1..=n {
            s[m] = (1..=m).map(|f| &prev[f] * &s[m - f]).sum();
        }
        s[0] = BigUint::zero();
        c = s;
    }
    c[n].clone()
}

fn trees_with(depth: usize, n: usize) -> Vec<PlaneTree> {
    if depth == 0 {
        return if n == 1 { vec![PlaneTree::leaf()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for comp in compositions(n) {
        let options: Vec<Vec<PlaneTree>> = comp.iter().map(|&m| trees_with(depth - 1, m)).collect();
        if options.iter().any(Vec::is_empty) {
            continue;
        }
        for children in options.iter().map(|o| o.iter().cloned()).multi_cartesian_product() {
            out.push(PlaneTree::node(children));
        }
    }
    out
}

/// All (k,p)-trees, each once up to identity.
pub fn enumerate_kp_trees(k: usize, p: usize, cap: u64) -> Result<Vec<PlaneTree>> {
    if p == 0 {
        return Err(Error::InvalidArgument("p must be positive".into()));
    }
    let n = count_trees(k + 1, p);
    if n > BigUint::from(cap) {
        return Err(Error::SearchSpaceTooLarge { needed: n.to_string(), cap });
    }
    Ok(trees_with(k + 1, p))
}

/// Π over nodes of (child count)!.
pub fn tran(t: &PlaneTree) -> BigUint {
    factorial(t.children.len() as u64) * t.children.iter().map(tran).product::<BigUint>()
}

/// Number of root-preserving automorphisms.
pub fn aut_count(t: &PlaneTree) -> BigUint {
    let mut groups: BTreeMap<PlaneTree, u64> = BTreeMap::new();
    let mut out = BigUint::one();
    for c in &t.children {
        out *= aut_count(c);
        *groups.entry(c.canonical()).or_default() += 1;
    }
    for m in groups.values() {
        out *= factorial(*m);
    }
    out
}

/// P(T, τ): a and b share a level-i part iff leaves v_τ(a) and v_τ(b) share
/// a level-i ancestor. `tau` is a permutation of 0..p.
pub fn partition_from_tree(t: &PlaneTree, tau: &[usize]) -> Result<HierPartition> {
    let p = t.num_leaves();
    let k = t.k().ok_or_else(|| Error::InvalidArgument("tree leaves are not at one depth".into()))?;
    let mut seen = vec![false; p];
    if tau.len() != p || tau.iter().any(|&x| x >= p || std::mem::replace(&mut seen[x], true)) {
        return Err(Error::InvalidArgument(format!("tau is not a permutation of {p} elements")));
    }
    let levels = (1..=k)
        .map(|i| {
            let anc = t.ancestors_at(i);
            Partition::from_labels(&tau.iter().map(|&x| anc[x]).collect::<Vec<_>>())
        })
        .collect();
    Ok(HierPartition { levels })
}

/// |Γ_T| = p!/|Aut(T)|.
pub fn gamma_size(t: &PlaneTree) -> Result<BigUint> {
    let (q, r) = factorial(t.num_leaves() as u64).div_rem(&aut_count(t));
    if !r.is_zero() {
        return Err(Error::Precondition(format!("|Aut| does not divide p! for {t}")));
    }
    Ok(q)
}

/// |Γ_T| by applying every τ ∈ S_p.
pub fn gamma_by_enumeration(t: &PlaneTree) -> Result<usize> {
    let p = t.num_leaves();
    if p > MAX_TAU_ENUM_P {
        return Err(Error::SearchSpaceTooLarge { needed: format!("{p}!"), cap: MAX_TAU_ENUM_P as u64 });
    }
    let mut seen = HashSet::new();
    for tau in (0..p).permutations(p) {
        seen.insert(partition_from_tree(t, &tau)?);
    }
    Ok(seen.len())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeLowerBound {
    pub k: usize,
    pub p: usize,
    /// p!·Σ 1/|Aut(T)| over non-equivalent (k,p)-trees.
    pub bound: BigUint,
    pub bell: BigUint,
    pub classes: usize,
    pub holds: bool,
    pub equal: bool,
}

/// One representative per equivalence class, smallest canonical form first.
pub fn equivalence_classes(trees: &[PlaneTree]) -> Vec<PlaneTree> {
    trees.iter().map(PlaneTree::canonical).collect::<BTreeSet<_>>().into_iter().collect()
}

pub fn tree_lower_bound(k: usize, p: usize, cap: u64) -> Result<TreeLowerBound> {
    let classes = equivalence_classes(&enumerate_kp_trees(k, p, cap)?);
    let mut bound = BigUint::zero();
    for t in &classes {
        bound += gamma_size(t)?;
    }
    let bell = bell_kp(k as u32, p);
    Ok(TreeLowerBound { k, p, holds: bound <= bell, equal: bound == bell, bound, bell, classes: classes.len() })
}

/// Tree with few transformations: star for k = 0, otherwise a
/// (k−1, ⌊p/log^{(k)} p⌋)-tree whose leaves get ⌈p/p′⌉ or ⌊p/p′⌋ children.
pub fn build_low_tran_tree(k: u32, p: usize) -> Result<PlaneTree> {
    if p == 0 {
        return Err(Error::InvalidArgument("p must be positive".into()));
    }
    let l = iter_log(p as f64, k)?;
    if l < 1.0 {
        return Err(Error::Precondition(format!("log^({k}) {p} = {l} is below 1")));
    }
    if k == 0 {
        return Ok(PlaneTree::star(p));
    }
    let pp = ((p as f64) / l).floor() as usize;
    if pp == 0 {
        return Err(Error::Precondition(format!("p' = 0 for k={k}, p={p}")));
    }
    let inner = build_low_tran_tree(k - 1, pp)?;
    let lo = p / pp;
    let a_plus = if p.is_multiple_of(pp) { pp } else { p - pp * lo };
    let hi = if p.is_multiple_of(pp) { lo } else { lo + 1 };
    Ok(inner.graft(&mut |i| PlaneTree::star(if i < a_plus { hi } else { lo })))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowTranCheck {
    pub tree: PlaneTree,
    pub tran: BigUint,
    /// Tran(T)^{1/p}.
    pub tran_root: f64,
    /// 10·log^{(k)} p.
    pub bound: f64,
    pub holds: bool,
}

pub fn check_low_tran(k: u32, p: usize) -> Result<LowTranCheck> {
    let tree = build_low_tran_tree(k, p)?;
    let tran = tran(&tree);
    let bound = 10.0 * iter_log(p as f64, k)?;
    let ln_root = ln_big(&tran) / p as f64;
    Ok(LowTranCheck { holds: ln_root <= bound.ln() + 1e-12, tran_root: ln_root.exp(), bound, tran, tree })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryFamily {
    pub delta: usize,
    pub q: usize,
    pub trees: Vec<PlaneTree>,
    /// Π_j |I_j|^{λ_j}, the number of labelings.
    pub labelings: BigUint,
    /// ⌈Δ^{q−1}/(8q)⌉.
    pub stated_bound: BigUint,
    pub meets_stated: bool,
    /// Δ^{q−1}/3^{Σ_j (Δ₀+1−j)λ_j}, what the interval argument gives.
    pub derived_bound: Rational,
    pub meets_derived: bool,
}

fn ceil_log2(q: usize) -> usize {
    (usize::BITS - (q.max(1) - 1).leading_zeros()) as usize
}

/// Full binary tree with q leaves and height ⌈log₂ q⌉, as child lists
/// indexed by node id (0 is the root).
fn balanced_binary(q: usize) -> Vec<Vec<usize>> {
    fn go(q: usize, nodes: &mut Vec<Vec<usize>>) -> usize {
        let id = nodes.len();
        nodes.push(Vec::new());
        if q > 1 {
            let a = go(q.div_ceil(2), nodes);
            let b = go(q / 2, nodes);
            nodes[id] = vec![a, b];
        }
        id
    }
    let mut nodes = Vec::new();
    go(q, &mut nodes);
    nodes
}

/// Binary (Δ,q)-trees from level labelings of a balanced binary tree under a
/// new root, internal level-j nodes restricted to the interval I_j.
pub fn build_binary_family(delta: usize, q: usize, cap: u64) -> Result<BinaryFamily> {
    if q == 0 {
        return Err(Error::InvalidArgument("q must be positive".into()));
    }
    let d0 = ceil_log2(q);
    if 2 * d0 > delta {
        return Err(Error::Precondition(format!("2·⌈log₂ {q}⌉ = {} exceeds Δ = {delta}", 2 * d0)));
    }
    // I_j for j = 1..d0, consecutive from 1
    let mut intervals = Vec::with_capacity(d0);
    let mut start = 1usize;
    for j in 1..=d0 {
        let len = delta.div_ceil(3usize.pow((d0 + 1 - j) as u32));
        intervals.push(start..start + len);
        start += len;
    }
    debug_assert!(start <= delta + 1);
    let nodes = balanced_binary(q);
    // Q-level of each node: the old root sits at level 1
    let mut level = vec![0usize; nodes.len()];
    let mut internal = Vec::new();
    for id in 0..nodes.len() {
        if id == 0 {
            level[0] = 1;
        }
        for &c in &nodes[id] {
            level[c] = level[id] + 1;
        }
        if !nodes[id].is_empty() {
            internal.push(id);
        }
    }
    let mut labelings = BigUint::one();
    let mut exponent = 0u32;
    for &id in &internal {
        labelings *= intervals[level[id] - 1].len();
        exponent += (d0 + 1 - level[id]) as u32;
    }
    if labelings > BigUint::from(cap) {
        return Err(Error::SearchSpaceTooLarge { needed: labelings.to_string(), cap });
    }
    let choices: Vec<Vec<usize>> = internal.iter().map(|&id| intervals[level[id] - 1].clone().collect()).collect();
    let mut trees = Vec::new();
    let mut h = vec![delta + 1; nodes.len()];
    let mut emit = |h: &[usize]| {
        fn build(id: usize, nodes: &[Vec<usize>], h: &[usize]) -> PlaneTree {
            PlaneTree::node(
                nodes[id].iter().map(|&c| PlaneTree::chain(h[c] - h[id] - 1, build(c, nodes, h))).collect(),
            )
        }
        let below = if nodes[0].is_empty() { PlaneTree::leaf() } else { build(0, &nodes, h) };
        trees.push(PlaneTree::chain(h[0], below));
    };
    if internal.is_empty() {
        emit(&h);
    } else {
        for combo in choices.iter().map(|c| c.iter().copied()).multi_cartesian_product() {
            for (&id, &v) in internal.iter().zip(&combo) {
                h[id] = v;
            }
            emit(&h);
        }
    }
    let power = BigUint::from(delta).pow(q as u32 - 1);
    let stated_bound = power.div_ceil(&BigUint::from(8 * q));
    let derived_bound =
        Rational::new(BigInt::from(power), BigInt::from(1)) / rat_pow(&Rational::from_integer(3.into()), exponent);
    let count = BigUint::from(trees.len());
    Ok(BinaryFamily {
        delta,
        q,
        meets_stated: count >= stated_bound,
        meets_derived: Rational::from_integer(BigInt::from(count)) >= derived_bound,
        trees,
        labelings,
        stated_bound,
        derived_bound,
    })
}

/// Niceness constant for the combined family.
pub const NICE_C: u64 = 30;

/// Lower bound on bell_k(p) from a family of 30-nice (k,p)-trees; only the
/// branch with p′ = 1 (k ≥ 2⌈log₂ p⌉), where the family is binary.
pub fn nice_family_bound(k: usize, p: usize, cap: u64) -> Result<GapReport> {
    if p == 0 {
        return Err(Error::InvalidArgument("p must be positive".into()));
    }
    if k < 2 * ceil_log2(p) {
        return Err(Error::Precondition(format!("k = {k} is below 2⌈log₂ {p}⌉; only the p′ = 1 branch is built")));
    }
    let family = build_binary_family(k, p, cap)?;
    let size = family.trees.len();
    let c_p = BigUint::from(NICE_C).pow(p as u32);
    let nice = family.trees.iter().filter(|t| tran(t) <= c_p).count();
    let bell = Rational::from_integer(BigInt::from(bell_kp(k as u32, p)));
    let mut rep = GapReport::new("nice-family-bound");
    rep.param("k", k);
    rep.param("p", p);
    rep.param("family", size);
    rep.param("C", NICE_C);
    rep.paths_enumerated = size.to_string();
    rep.checks.push(BoundCheck::new(
        "members that are 30-nice",
        rat(nice as i64, 1),
        Relation::Eq,
        rat(size as i64, 1),
        false,
    ));
    let c2p = Rational::from_integer(BigInt::from(c_p.pow(2)));
    let fact = Rational::from_integer(BigInt::from(factorial(p as u64)));
    rep.checks.push(BoundCheck::new(
        "bell_k(p) >= p!·|𝒯|/C^{2p}",
        bell.clone(),
        Relation::Ge,
        fact * rat(size as i64, 1) / &c2p,
        false,
    ));
    // (p/(e·C²))^p·|𝒯| with e replaced by the smaller 2718/1000
    let base = rat(1000 * p as i64, 2718 * (NICE_C * NICE_C) as i64);
    rep.checks.push(BoundCheck::new(
        "bell_k(p) >= (p/(e·C²))^p·|𝒯|",
        bell,
        Relation::Ge,
        rat_pow(&base, p as u32) * rat(size as i64, 1),
        false,
    ));
    let ln_rhs = p as f64 * ((p as f64).ln() - 1.0 - 2.0 * (NICE_C as f64).ln()) + (size as f64).ln();
    rep.notes.push(format!(
        "ln bell_k(p) = {:.6}, ln rhs = {:.6}",
        ln_big(&bell_kp(k as u32, p)),
        ln_rhs
    ));
    Ok(rep)
}

/// Size of the family as an integer, for callers that only need the count.
pub fn family_size(k: usize, p: usize, cap: u64) -> Result<u64> {
    Ok(build_binary_family(k, p, cap)?.trees.len().to_u64().expect("fits"))
}
