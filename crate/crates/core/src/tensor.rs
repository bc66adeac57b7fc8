//! Paths through G^{⊗k} as recursive objects, their exact costs, an exact
//! minimum-cost search, and the gap verifiers built on it.
//!
//! A path of order k picks, in every block of G, one edge and a path of
//! order k−1; its cost is Σ_b c(e_b) ⊗ cost(Q_b). The tensored graph itself
//! is never built.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::bell::{bell_kp, bell_t, Partition};
use crate::error::{Error, Result};
use crate::label_cover::{is_colorful, max_weak_fraction, DEFAULT_ASSIGNMENT_CAP};
use crate::math::{ceil_y_plus_sqrt_y_over_10, meets_y_plus_sqrt_y_over_100, rat, rat_int, rat_pow, Rational, ScaledVector};
use crate::reduction::{CostSystem, Mode, ReductionInstance, SparseVec};
use crate::report::{BoundCheck, GapReport, Relation};

pub const DEFAULT_PATH_CAP: u64 = 1_000_000;
pub const DEFAULT_DIM_CAP: u64 = 10_000_000;
pub const DEFAULT_PAIR_CAP: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TensorPath {
    /// The single edge of G^{⊗0}.
    Unit,
    /// One (label, sub-path) per block, in block order.
    Node(Vec<(usize, Arc<TensorPath>)>),
}

impl TensorPath {
    /// Order-1 path P_σ from labels in block order.
    pub fn base(labels: &[usize]) -> Self {
        let unit = Arc::new(TensorPath::Unit);
        TensorPath::Node(labels.iter().map(|&l| (l, unit.clone())).collect())
    }

    /// P^{⊗k}.
    pub fn uniform(labels: &[usize], k: u32) -> Self {
        let mut cur = Arc::new(TensorPath::Unit);
        for _ in 0..k {
            cur = Arc::new(TensorPath::Node(labels.iter().map(|&l| (l, cur.clone())).collect()));
        }
        Arc::try_unwrap(cur).unwrap_or_else(|a| (*a).clone())
    }

    /// Recursion depth, or None when sub-paths disagree.
    pub fn order(&self) -> Option<u32> {
        match self {
            TensorPath::Unit => Some(0),
            TensorPath::Node(entries) => {
                let first = entries.first()?.1.order()?;
                entries.iter().all(|(_, s)| s.order() == Some(first)).then_some(first + 1)
            }
        }
    }

    /// Projection onto G.
    pub fn labels(&self) -> Vec<usize> {
        match self {
            TensorPath::Unit => Vec::new(),
            TensorPath::Node(entries) => entries.iter().map(|e| e.0).collect(),
        }
    }
}

impl fmt::Display for TensorPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TensorPath::Unit => write!(f, "·"),
            TensorPath::Node(entries) => {
                write!(f, "[")?;
                for (i, (l, sub)) in entries.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    match sub.as_ref() {
                        TensorPath::Unit => write!(f, "{l}")?,
                        s => write!(f, "{l}{s}")?,
                    }
                }
                write!(f, "]")
            }
        }
    }
}

/// Serialized as nested arrays: the unit path is `[]`, a node is a list of
/// `[label, sub-path]` pairs.
impl serde::Serialize for TensorPath {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        match self {
            TensorPath::Unit => s.serialize_seq(Some(0))?.end(),
            TensorPath::Node(entries) => {
                let mut seq = s.serialize_seq(Some(entries.len()))?;
                for (l, sub) in entries {
                    seq.serialize_element(&(l, sub.as_ref()))?;
                }
                seq.end()
            }
        }
    }
}

impl<'de> serde::Deserialize<'de> for TensorPath {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries: Vec<(usize, TensorPath)> = serde::Deserialize::deserialize(d)?;
        if entries.is_empty() {
            return Ok(TensorPath::Unit);
        }
        Ok(TensorPath::Node(entries.into_iter().map(|(l, s)| (l, Arc::new(s))).collect()))
    }
}

/// N_k = (|L|·N_{k−1})^{blocks}, N_0 = 1.
pub fn path_count(inst: &ReductionInstance, k: u32) -> BigUint {
    let mut n = BigUint::one();
    for _ in 0..k {
        n = (n * inst.num_labels()).pow(inst.num_blocks() as u32);
    }
    n
}

fn check_paths(inst: &ReductionInstance, k: u32, cap: u64) -> Result<u64> {
    let n = path_count(inst, k);
    match n.to_u64() {
        Some(v) if v <= cap => Ok(v),
        _ => Err(Error::SearchSpaceTooLarge { needed: n.to_string(), cap }),
    }
}

/// d^k, checked against a cap.
fn check_dims(inst: &ReductionInstance, k: u32, cap: u64) -> Result<u64> {
    let dim = (inst.d() as u128).checked_pow(k).unwrap_or(u128::MAX);
    if dim > cap as u128 {
        return Err(Error::DimensionCap { needed: dim.to_string(), cap });
    }
    Ok(dim as u64)
}

fn inner_dim(inst: &ReductionInstance, order: u32) -> u64 {
    inst.d().pow(order)
}

/// Cost numerators of a path (denominator denom^k, scaling alpha^k).
pub fn path_numerators(inst: &ReductionInstance, path: &TensorPath) -> Result<SparseVec> {
    match path {
        TensorPath::Unit => Ok(SparseVec::unit()),
        TensorPath::Node(entries) => {
            if entries.len() != inst.num_blocks() {
                return Err(Error::InvalidArgument(format!(
                    "path has {} blocks, graph has {}",
                    entries.len(),
                    inst.num_blocks()
                )));
            }
            let order = path.order().ok_or_else(|| Error::InvalidArgument("ragged tensor path".into()))?;
            if (inst.d() as u128).checked_pow(order).is_none_or(|v| v > u64::MAX as u128) {
                return Err(Error::DimensionCap { needed: format!("{}^{order}", inst.d()), cap: u64::MAX });
            }
            let inner = inner_dim(inst, order - 1);
            let mut parts = Vec::with_capacity(entries.len());
            for (b, (l, sub)) in entries.iter().enumerate() {
                if *l >= inst.num_labels() {
                    return Err(Error::InvalidArgument(format!("label {l} out of range")));
                }
                parts.push(inst.edge_numerators(b, *l).tensor(&path_numerators(inst, sub)?, inner));
            }
            Ok(SparseVec::sum(&parts))
        }
    }
}

/// Exact cost of a path of order k as a dense scaled vector.
pub fn tensor_path_cost(inst: &ReductionInstance, k: u32, path: &TensorPath, dim_cap: u64) -> Result<ScaledVector> {
    if path.order() != Some(k) {
        return Err(Error::InvalidArgument(format!("path is not of order {k}")));
    }
    check_dims(inst, k, dim_cap)?;
    Ok(inst.to_scaled(&path_numerators(inst, path)?, k))
}

/// Exact norm (‖·‖_p^p or ‖·‖∞) of a path's cost.
pub fn path_norm(inst: &ReductionInstance, path: &TensorPath) -> Result<Rational> {
    let k = path.order().ok_or_else(|| Error::InvalidArgument("ragged tensor path".into()))?;
    Ok(inst.norm_of(&path_numerators(inst, path)?, k))
}

/// All paths of order k with their cost numerators, in lexicographic order.
pub fn all_paths(inst: &ReductionInstance, k: u32, cap: u64) -> Result<Vec<(Arc<TensorPath>, SparseVec)>> {
    check_paths(inst, k, cap)?;
    Ok(all_paths_unchecked(inst, k))
}

fn all_paths_unchecked(inst: &ReductionInstance, k: u32) -> Vec<(Arc<TensorPath>, SparseVec)> {
    if k == 0 {
        return vec![(Arc::new(TensorPath::Unit), SparseVec::unit())];
    }
    let subs = all_paths_unchecked(inst, k - 1);
    let inner = inner_dim(inst, k - 1);
    let blocks = inst.num_blocks();
    let per_block = inst.num_labels() * subs.len();
    // option o of block b: label o / |subs|, sub-path o % |subs|
    let options: Vec<Vec<SparseVec>> = (0..blocks)
        .map(|b| {
            (0..per_block)
                .map(|o| inst.edge_numerators(b, o / subs.len()).tensor(&subs[o % subs.len()].1, inner))
                .collect()
        })
        .collect();
    let mut idx = vec![0usize; blocks];
    let mut out = Vec::new();
    loop {
        let entries = idx.iter().map(|&o| (o / subs.len(), subs[o % subs.len()].0.clone())).collect();
        let cost = SparseVec::sum(idx.iter().enumerate().map(|(b, &o)| &options[b][o]));
        out.push((Arc::new(TensorPath::Node(entries)), cost));
        let mut b = blocks;
        loop {
            if b == 0 {
                return out;
            }
            b -= 1;
            idx[b] += 1;
            if idx[b] < per_block {
                break;
            }
            idx[b] = 0;
        }
    }
}

/// Deterministic lexicographic enumeration of all paths of order k.
pub fn enumerate_tensor_paths(inst: &ReductionInstance, k: u32, cap: u64) -> Result<Vec<TensorPath>> {
    Ok(all_paths(inst, k, cap)?.into_iter().map(|(p, _)| Arc::try_unwrap(p).unwrap_or_else(|a| (*a).clone())).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    /// ‖cost‖_p^p for finite p, ‖cost‖∞ for ℓ∞.
    pub best: Rational,
    pub witness: TensorPath,
    /// Size of the path space covered (every path is either evaluated or
    /// provably no better than the incumbent).
    pub paths_enumerated: BigUint,
    /// Complete paths actually evaluated.
    pub leaves_evaluated: u64,
}

#[derive(Clone, Copy)]
enum Objective {
    PowerSum(u32),
    Max,
}

struct Search<'a> {
    inst: &'a ReductionInstance,
    subs: &'a [(Arc<TensorPath>, SparseVec)],
    inner: u64,
    objective: Objective,
    prune: bool,
    acc: Vec<u64>,
    value: u128,
    choice: Vec<usize>,
    best: Option<(u128, Vec<usize>)>,
    leaves: u64,
    overflow: bool,
}

impl Search<'_> {
    fn option_entries(&self, b: usize, o: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        let s = self.subs.len();
        let edge = self.inst.edge_numerators(b, o / s);
        let sub = &self.subs[o % s].1;
        let inner = self.inner;
        edge.entries()
            .iter()
            .flat_map(move |&(i, a)| sub.entries().iter().map(move |&(j, x)| ((i * inner + j) as usize, a * x)))
    }

    fn pow(&mut self, x: u64, p: u32) -> u128 {
        match (x as u128).checked_pow(p) {
            Some(v) => v,
            None => {
                self.overflow = true;
                u128::MAX
            }
        }
    }

    fn apply(&mut self, b: usize, o: usize) -> u128 {
        let before = self.value;
        let entries: Vec<(usize, u64)> = self.option_entries(b, o).collect();
        for (z, x) in entries {
            let old = self.acc[z];
            let new = old + x;
            self.acc[z] = new;
            match self.objective {
                Objective::PowerSum(p) => {
                    let delta = self.pow(new, p) - self.pow(old, p);
                    self.value = self.value.saturating_add(delta);
                }
                Objective::Max => self.value = self.value.max(new as u128),
            }
        }
        before
    }

    fn undo(&mut self, b: usize, o: usize, before: u128) {
        let entries: Vec<(usize, u64)> = self.option_entries(b, o).collect();
        for (z, x) in entries {
            self.acc[z] -= x;
        }
        self.value = before;
    }

    fn run(&mut self, b: usize) {
        if let (true, Some((best, _))) = (self.prune, &self.best) {
            if self.value >= *best {
                return;
            }
        }
        if b == self.inst.num_blocks() {
            self.leaves += 1;
            if self.best.as_ref().is_none_or(|(best, _)| self.value < *best) {
                self.best = Some((self.value, self.choice.clone()));
            }
            return;
        }
        for o in 0..self.inst.num_labels() * self.subs.len() {
            self.choice.push(o);
            let before = self.apply(b, o);
            self.run(b + 1);
            self.undo(b, o, before);
            self.choice.pop();
        }
    }
}

/// Exact minimum of the mode's norm over all paths of order k; ties go to
/// the first minimizer in lexicographic order.
pub fn min_cost(inst: &ReductionInstance, k: u32, path_cap: u64, dim_cap: u64) -> Result<SolveResult> {
    min_cost_with(inst, k, path_cap, dim_cap, true)
}

/// `min_cost` with branch-and-bound pruning switchable (for cross-checks).
pub fn min_cost_with(inst: &ReductionInstance, k: u32, path_cap: u64, dim_cap: u64, prune: bool) -> Result<SolveResult> {
    let total = check_paths(inst, k, path_cap)?;
    if k == 0 {
        return Ok(SolveResult {
            best: inst.norm_of(&SparseVec::unit(), 0),
            witness: TensorPath::Unit,
            paths_enumerated: BigUint::one(),
            leaves_evaluated: 1,
        });
    }
    let dim = check_dims(inst, k, dim_cap)?;
    let subs = all_paths_unchecked(inst, k - 1);
    let objective = match inst.mode() {
        Mode::Finite { p } => Objective::PowerSum(p),
        Mode::Infty => Objective::Max,
    };
    let mut search = Search {
        inst,
        subs: &subs,
        inner: inner_dim(inst, k - 1),
        objective,
        prune,
        acc: vec![0; dim as usize],
        value: 0,
        choice: Vec::with_capacity(inst.num_blocks()),
        best: None,
        leaves: 0,
        overflow: false,
    };
    search.run(0);
    if search.overflow {
        return Err(Error::Overflow("integer power sum exceeds 128 bits".into()));
    }
    let (_, choice) = search.best.expect("at least one path");
    let s = subs.len();
    let witness = TensorPath::Node(choice.iter().map(|&o| (o / s, subs[o % s].0.clone())).collect());
    let best = path_norm(inst, &witness)?;
    Ok(SolveResult { best, witness, paths_enumerated: BigUint::from(total), leaves_evaluated: search.leaves })
}

/// Caps shared by the verifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub paths: u64,
    pub dims: u64,
    pub pairs: u64,
    pub assignments: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { paths: DEFAULT_PATH_CAP, dims: DEFAULT_DIM_CAP, pairs: DEFAULT_PAIR_CAP, assignments: DEFAULT_ASSIGNMENT_CAP }
    }
}

fn finite_p(inst: &ReductionInstance) -> Result<u32> {
    match inst.mode() {
        Mode::Finite { p } => Ok(p),
        Mode::Infty => Err(Error::Precondition("finite-p instance required".into())),
    }
}

/// α_k = (1−p/r)^{pk}(1−p²ε)^k.
pub fn alpha_general(p: u32, r: usize, eps: &Rational, k: u32) -> Rational {
    let one = Rational::one();
    let base = rat_pow(&(&one - rat(p as i64, r as i64)), p) * (&one - rat_int(p as i64 * p as i64) * eps);
    rat_pow(&base, k)
}

/// α_k = (1−(1/r+4ε))^k.
pub fn alpha_two(r: usize, eps: &Rational, k: u32) -> Rational {
    let one = Rational::one();
    rat_pow(&(&one - (rat(1, r as i64) + rat_int(4) * eps)), k)
}

fn general_vacuous(p: u32, r: usize, eps: &Rational) -> bool {
    p as usize >= r || rat_int(p as i64 * p as i64) * eps >= Rational::one()
}

fn report_header(name: &str, inst: &ReductionInstance, k: u32, eps: &Rational) -> GapReport {
    let mut rep = GapReport::new(name);
    match inst.mode() {
        Mode::Finite { p } => rep.param("p", p),
        Mode::Infty => rep.param("p", "inf"),
    }
    rep.param("k", k);
    rep.param("r", inst.r());
    rep.param("blocks", inst.num_blocks());
    rep.param("labels", inst.num_labels());
    rep.param("hyperedges", inst.m());
    rep.param("d", inst.d());
    rep.eps_star = Some(eps.clone());
    rep.notes.extend(inst.warnings().iter().cloned());
    rep
}

/// min ‖cost‖_p^p over G^{⊗k} against α_k·bell_k(p), and for p = 2 also
/// against (1−(1/r+4ε*))^k·(k+1).
pub fn verify_no_bound(inst: &ReductionInstance, k: u32, caps: &Caps) -> Result<GapReport> {
    let p = finite_p(inst)?;
    let eps = max_weak_fraction(inst.source(), caps.assignments)?;
    let sol = min_cost(inst, k, caps.paths, caps.dims)?;
    let r = inst.r();
    let mut rep = report_header("no-case-bound", inst, k, &eps);
    rep.paths_enumerated = sol.paths_enumerated.to_string();
    let alpha = alpha_general(p, r, &eps, k);
    rep.param("alpha_k", crate::math::fmt_rational(&alpha));
    let bell = Rational::from_integer(BigInt::from(bell_kp(k, p as usize)));
    rep.param("bell_k(p)", &bell);
    let vacuous = k > 0 && general_vacuous(p, r, &eps);
    rep.checks.push(
        BoundCheck::new("min ‖cost‖_p^p >= α_k·bell_k(p)", sol.best.clone(), Relation::Ge, alpha * bell, vacuous)
            .with_witness(sol.witness.to_string()),
    );
    if p == 2 {
        let a2 = alpha_two(r, &eps, k);
        let vacuous = k > 0 && rat(1, r as i64) + rat_int(4) * &eps >= Rational::one();
        rep.checks.push(BoundCheck::new(
            "min ‖cost‖_2^2 >= (1−(1/r+4ε*))^k·(k+1)",
            sol.best.clone(),
            Relation::Ge,
            a2 * rat_int(k as i64 + 1),
            vacuous,
        ));
    }
    Ok(rep)
}

/// Minimum of ⟨cost(P), cost(Q)⟩ over all pairs of paths of order k against
/// (1−(1/r+4ε*))^k.
pub fn verify_pairwise_l2(inst: &ReductionInstance, k: u32, caps: &Caps) -> Result<GapReport> {
    if finite_p(inst)? != 2 {
        return Err(Error::Precondition("pairwise check needs p = 2".into()));
    }
    let n = path_count(inst, k);
    let pairs = &n * (&n + 1u32) / 2u32;
    if pairs > BigUint::from(caps.pairs) {
        return Err(Error::SearchSpaceTooLarge { needed: pairs.to_string(), cap: caps.pairs });
    }
    let eps = max_weak_fraction(inst.source(), caps.assignments)?;
    let paths = all_paths(inst, k, caps.paths)?;
    let mut best: Option<(u128, usize, usize)> = None;
    for i in 0..paths.len() {
        for j in i..paths.len() {
            let v = paths[i].1.dot(&paths[j].1);
            if best.is_none_or(|(b, _, _)| v < b) {
                best = Some((v, i, j));
            }
        }
    }
    let (v, i, j) = best.expect("non-empty path space");
    let min = inst.alpha_k(k) * rat_int(v) * rat_pow(&rat(1, inst.denom() as i64), 2 * k);
    let mut rep = report_header("pairwise-l2", inst, k, &eps);
    rep.paths_enumerated = pairs.to_string();
    let vacuous = k > 0 && rat(1, inst.r() as i64) + rat_int(4) * &eps >= Rational::one();
    rep.checks.push(
        BoundCheck::new("min ⟨cost(P),cost(Q)⟩ >= (1−(1/r+4ε*))^k", min, Relation::Ge, alpha_two(inst.r(), &eps, k), vacuous)
            .with_witness(format!("{} / {}", paths[i].0, paths[j].0)),
    );
    Ok(rep)
}

/// ⊙ cost(P_i) against α_k·bell_k(T) for paths consistent with T.
pub fn verify_consistent_bound(
    inst: &ReductionInstance,
    k: u32,
    paths: &[TensorPath],
    t: &Partition,
    caps: &Caps,
) -> Result<GapReport> {
    let p = finite_p(inst)?;
    if paths.len() != p as usize || t.len() != p as usize {
        return Err(Error::InvalidArgument(format!("need {p} paths and a partition of [{p}]")));
    }
    if paths.iter().any(|q| q.order() != Some(k)) {
        return Err(Error::InvalidArgument(format!("every path must have order {k}")));
    }
    for a in 0..paths.len() {
        for b in 0..paths.len() {
            if t.same_part(a, b) && paths[a] != paths[b] {
                return Err(Error::Precondition(format!("paths {a} and {b} share a part but differ")));
            }
        }
    }
    let dim = (inst.d() as u128).checked_pow(k).unwrap_or(u128::MAX);
    if dim > u64::MAX as u128 {
        return Err(Error::DimensionCap { needed: dim.to_string(), cap: u64::MAX });
    }
    let eps = max_weak_fraction(inst.source(), caps.assignments)?;
    let costs: Vec<SparseVec> = paths.iter().map(|q| path_numerators(inst, q)).collect::<Result<_>>()?;
    let refs: Vec<&SparseVec> = costs.iter().collect();
    let product = inst.product_of(&refs, k);
    let bell = Rational::from_integer(BigInt::from(bell_t(k, t)));
    let alpha = alpha_general(p, inst.r(), &eps, k);
    let mut rep = report_header("consistent-bound", inst, k, &eps);
    rep.param("T", t);
    rep.param("bell_k(T)", &bell);
    rep.paths_enumerated = paths.len().to_string();
    let vacuous = k > 0 && general_vacuous(p, inst.r(), &eps);
    rep.checks.push(BoundCheck::new("⊙ cost(P_i) >= α_k·bell_k(T)", product, Relation::Ge, alpha * bell, vacuous));
    Ok(rep)
}

fn mvs_arity(inst: &ReductionInstance) -> Result<u32> {
    match (inst.mode(), inst.system()) {
        (Mode::Infty, CostSystem::Modified(s)) => Ok(s.p()),
        _ => Err(Error::Precondition("ℓ∞ instance required".into())),
    }
}

/// ‖Σ cost(P_i)‖∞ >= y + √(y/100) for y base paths, applicable when some
/// hyperedge is colorful for the y assignments and 2y is within the system's p.
pub fn verify_infty_sum_bound(inst: &ReductionInstance, sigmas: &[Vec<usize>]) -> Result<GapReport> {
    let sp = mvs_arity(inst)?;
    let y = sigmas.len();
    if y == 0 {
        return Err(Error::InvalidArgument("need at least one path".into()));
    }
    let refs: Vec<&[usize]> = sigmas.iter().map(Vec::as_slice).collect();
    let colorful = (0..inst.m()).find(|&h| is_colorful(inst.source(), h, &refs));
    let costs: Vec<SparseVec> = sigmas.iter().map(|s| inst.base_path_numerators(s)).collect::<Result<_>>()?;
    let total = SparseVec::sum(&costs);
    let (coord, s) = total.entries().iter().copied().max_by_key(|&(z, x)| (x, std::cmp::Reverse(z))).unwrap_or((0, 0));
    let target = ceil_y_plus_sqrt_y_over_10(y as u64);
    let mut rep = GapReport::new("infty-sum-bound");
    rep.param("y", y);
    rep.param("mvs-p", sp);
    rep.param("colorful-hyperedge", colorful.map_or("none".to_string(), |h| h.to_string()));
    rep.paths_enumerated = y.to_string();
    let label = "‖Σ cost(P_i)‖∞ >= ⌈y + √(y/100)⌉";
    let check = if colorful.is_none() || 2 * y as u64 > sp as u64 {
        BoundCheck::not_applicable(label, rat_int(s), Relation::Ge, rat_int(target))
    } else {
        debug_assert_eq!(meets_y_plus_sqrt_y_over_100(s as i64, y as i64), s >= target);
        BoundCheck::new(label, rat_int(s), Relation::Ge, rat_int(target), false)
    };
    rep.checks.push(check.with_witness(format!("coordinate {coord}")));
    Ok(rep)
}

/// y_1 = 1, y_{j+1} = min{k², ⌈y_j + √(y_j/100)⌉}.
pub fn abstract_infty_sequence(k: u64, len: usize) -> Vec<u64> {
    let mut ys = Vec::with_capacity(len);
    let mut y = 1u64;
    for _ in 0..len {
        ys.push(y);
        y = (k * k).min(ceil_y_plus_sqrt_y_over_10(y));
    }
    ys
}

/// Checks 900·y_j >= j² along the abstract sequence for j <= min(k, len).
pub fn verify_abstract_sequence(k: u64, len: usize) -> GapReport {
    let ys = abstract_infty_sequence(k, len);
    let mut rep = GapReport::new("infty-abstract-sequence");
    rep.param("k", k);
    rep.param("length", len);
    for (i, &y) in ys.iter().enumerate().take(k as usize) {
        let j = i as i64 + 1;
        rep.checks.push(BoundCheck::new(&format!("y_{j} >= {j}²/900"), rat_int(y), Relation::Ge, rat(j * j, 900), false));
    }
    rep.paths_enumerated = "0".into();
    rep
}

/// Exact minima μ_1..μ_k of the ℓ∞ cost over G^{⊗j} and the one-step
/// recurrence μ_{j+1} >= min{k², ⌈μ_j + √(μ_j/100)⌉}. Applicable when
/// ε* <= 1/(8k⁴) and the system's p is at least 2(k²−1).
pub fn verify_infty_recurrence(inst: &ReductionInstance, k: u32, caps: &Caps) -> Result<GapReport> {
    let sp = mvs_arity(inst)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let eps = max_weak_fraction(inst.source(), caps.assignments)?;
    let kk = k as u64 * k as u64;
    let applicable = eps <= rat(1, 8 * (kk * kk) as i64) && sp as u64 >= 2 * (kk - 1);
    let mut mus = Vec::with_capacity(k as usize);
    let mut total = BigUint::zero();
    for j in 1..=k {
        let sol = min_cost(inst, j, caps.paths, caps.dims)?;
        total += &sol.paths_enumerated;
        mus.push(sol.best.to_integer().to_u64().expect("integral ℓ∞ cost"));
    }
    let mut rep = report_header("infty-recurrence", inst, k, &eps);
    rep.param("mvs-p", sp);
    rep.param("mu", format!("{mus:?}"));
    rep.paths_enumerated = total.to_string();
    let make = |label: &str, lhs: Rational, rhs: Rational| {
        if applicable {
            BoundCheck::new(label, lhs, Relation::Ge, rhs, false)
        } else {
            BoundCheck::not_applicable(label, lhs, Relation::Ge, rhs)
        }
    };
    for j in 1..k as usize {
        let target = kk.min(ceil_y_plus_sqrt_y_over_10(mus[j - 1]));
        rep.checks.push(make(
            &format!("μ_{} >= min{{k², ⌈μ_{j} + √(μ_{j}/100)⌉}}", j + 1),
            rat_int(mus[j]),
            rat_int(target),
        ));
    }
    rep.checks.push(make(&format!("μ_{k} >= k²/900"), rat_int(mus[k as usize - 1]), rat(kk as i64, 900)));
    if !applicable {
        rep.notes.push("ε* above 1/(8k⁴) or system p below 2(k²−1): recurrence not guaranteed".into());
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label_cover::{gen_disjoint, gen_planted, gen_random, Hyperedge, LabelCoverInstance};
    use crate::math::{lp_norm_pow, multilinear_product, tensor};
    use crate::modified_vs::search_mvs;
    use crate::reduction::base_path_cost;
    use crate::report::Status;
    use crate::vector_systems::VectorSystem;

    fn finite(lc: &LabelCoverInstance, r: u64, p: u32) -> ReductionInstance {
        let vs = VectorSystem::for_reduction(r, p, lc.num_colors(), false).unwrap();
        ReductionInstance::build_base(lc, p, &vs, false).unwrap()
    }

    fn two_blocks() -> ReductionInstance {
        let lc = LabelCoverInstance::new(
            vec![1, 1],
            2,
            3,
            vec![Hyperedge { vertices: vec![0, 1], maps: vec![vec![0, 1], vec![1, 2]] }],
        )
        .unwrap();
        finite(&lc, 2, 2)
    }

    #[test]
    fn counts_and_enumeration() {
        let inst = two_blocks();
        assert_eq!(path_count(&inst, 1), BigUint::from(4u32));
        assert_eq!(path_count(&inst, 2), BigUint::from(64u32));
        let p1 = enumerate_tensor_paths(&inst, 1, 100).unwrap();
        assert_eq!(p1.len(), 4);
        let p2 = enumerate_tensor_paths(&inst, 2, 100).unwrap();
        assert_eq!(p2.len(), 64);
        assert!(p2.windows(2).all(|w| w[0] < w[1]));
        assert!(matches!(enumerate_tensor_paths(&inst, 1, 1), Err(Error::SearchSpaceTooLarge { .. })));
        assert_eq!(enumerate_tensor_paths(&inst, 0, 1).unwrap(), vec![TensorPath::Unit]);
    }

    #[test]
    fn order_one_matches_base_cost() {
        let (lc, _) = gen_planted(2, 2, 2, 4, 3, 2).unwrap();
        let inst = finite(&lc, 2, 2);
        for path in enumerate_tensor_paths(&inst, 1, 100).unwrap() {
            let labels = path.labels();
            let a = tensor_path_cost(&inst, 1, &path, DEFAULT_DIM_CAP).unwrap();
            let b = base_path_cost(&inst, &labels).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn uniform_path_is_tensor_power() {
        let (lc, sigma) = gen_planted(2, 1, 2, 3, 2, 4).unwrap();
        let inst = finite(&lc, 2, 2);
        let base = base_path_cost(&inst, &sigma).unwrap();
        let p2 = TensorPath::uniform(&sigma, 2);
        assert_eq!(tensor_path_cost(&inst, 2, &p2, DEFAULT_DIM_CAP).unwrap(), tensor(&base, &base, DEFAULT_DIM_CAP).unwrap());
        // also for a non-planted path
        let other = vec![1, 0];
        let c = base_path_cost(&inst, &other).unwrap();
        let q = TensorPath::uniform(&other, 2);
        assert_eq!(tensor_path_cost(&inst, 2, &q, DEFAULT_DIM_CAP).unwrap(), tensor(&c, &c, DEFAULT_DIM_CAP).unwrap());
    }

    #[test]
    fn mixed_path_cost_by_definition() {
        let inst = two_blocks();
        let p1 = enumerate_tensor_paths(&inst, 1, 100).unwrap();
        let path = TensorPath::Node(vec![(1, Arc::new(p1[0].clone())), (0, Arc::new(p1[3].clone()))]);
        let got = tensor_path_cost(&inst, 2, &path, DEFAULT_DIM_CAP).unwrap();
        let e0 = inst.edge_cost(0, 1);
        let e1 = inst.edge_cost(1, 0);
        let q0 = base_path_cost(&inst, &p1[0].labels()).unwrap();
        let q1 = base_path_cost(&inst, &p1[3].labels()).unwrap();
        let want = tensor(&e0, &q0, DEFAULT_DIM_CAP).unwrap().add(&tensor(&e1, &q1, DEFAULT_DIM_CAP).unwrap()).unwrap();
        assert_eq!(got, want);
        assert_eq!(path_norm(&inst, &path).unwrap(), lp_norm_pow(&want, 2));
    }

    #[test]
    fn min_cost_yes_instances() {
        for (r, p) in [(2u64, 2u32), (4, 2), (4, 3)] {
            let (lc, sigma) = gen_planted(r as usize, 1, 2, 4, 2, 9).unwrap();
            let inst = finite(&lc, r, p);
            for k in 1..=2 {
                if path_count(&inst, k) > BigUint::from(DEFAULT_PATH_CAP) {
                    continue;
                }
                let sol = min_cost(&inst, k, DEFAULT_PATH_CAP, DEFAULT_DIM_CAP).unwrap();
                assert_eq!(sol.best, rat_int(1), "r={r} p={p} k={k}");
                assert_eq!(path_norm(&inst, &sol.witness).unwrap(), sol.best);
                assert_eq!(path_norm(&inst, &TensorPath::uniform(&sigma, k)).unwrap(), rat_int(1));
            }
        }
        let inst = two_blocks();
        assert_eq!(min_cost(&inst, 0, 10, 10).unwrap().best, rat_int(1));
    }

    #[test]
    fn pruning_is_exact() {
        for seed in 0..12u64 {
            let lc = gen_random(2, 1, 3, 3, 3, seed).unwrap();
            let inst = finite(&lc, 2, 2);
            for k in 1..=2 {
                let a = min_cost_with(&inst, k, 1 << 20, DEFAULT_DIM_CAP, true).unwrap();
                let b = min_cost_with(&inst, k, 1 << 20, DEFAULT_DIM_CAP, false).unwrap();
                assert_eq!(a.best, b.best);
                assert_eq!(a.witness, b.witness);
                assert!(a.leaves_evaluated <= b.leaves_evaluated);
                // oracle: evaluate every path directly
                let brute = enumerate_tensor_paths(&inst, k, 1 << 20)
                    .unwrap()
                    .into_iter()
                    .map(|q| (path_norm(&inst, &q).unwrap(), q))
                    .min_by(|x, y| x.0.cmp(&y.0))
                    .unwrap();
                assert_eq!(brute.0, a.best);
                assert_eq!(brute.1, a.witness);
            }
        }
    }

    #[test]
    fn no_bound_examples() {
        let lc = gen_disjoint(8, 1, 2, 1, 2, 0, 3).unwrap();
        let inst = finite(&lc, 8, 2);
        let rep = verify_no_bound(&inst, 1, &Caps::default()).unwrap();
        assert_eq!(rep.eps_star, Some(rat_int(0)));
        assert_eq!(rep.checks[0].rhs, rat(9, 8));
        assert_eq!(rep.checks[1].rhs, rat(7, 4));
        assert_eq!(rep.status(), Status::Pass);
        let (yes, _) = gen_planted(2, 1, 2, 2, 2, 1).unwrap();
        let inst = finite(&yes, 2, 2);
        let rep = verify_no_bound(&inst, 1, &Caps::default()).unwrap();
        assert!(rep.checks.iter().all(|c| c.status == Status::Vacuous));
    }

    #[test]
    fn pairwise_examples() {
        let lc = gen_disjoint(8, 1, 2, 1, 2, 0, 5).unwrap();
        let inst = finite(&lc, 8, 2);
        let rep = verify_pairwise_l2(&inst, 1, &Caps::default()).unwrap();
        assert_eq!(rep.checks[0].rhs, rat(7, 8));
        assert_eq!(rep.status(), Status::Pass);
        let (yes, sigma) = gen_planted(2, 1, 2, 3, 2, 2).unwrap();
        let inst = finite(&yes, 2, 2);
        let c = base_path_cost(&inst, &sigma).unwrap();
        assert_eq!(multilinear_product(&[&c, &c]).unwrap(), rat_int(1));
    }

    #[test]
    fn consistent_bound_examples() {
        let lc = gen_disjoint(8, 1, 1, 1, 2, 0, 7).unwrap();
        let inst = finite(&lc, 8, 2);
        let caps = Caps::default();
        let t0 = TensorPath::Unit;
        let rep = verify_consistent_bound(&inst, 0, &[t0.clone(), t0.clone()], &Partition::whole(2), &caps).unwrap();
        assert_eq!(rep.checks[0].lhs, rat_int(1));
        assert_eq!(rep.checks[0].rhs, rat_int(0));
        let p = TensorPath::base(&[0; 8]);
        let rep = verify_consistent_bound(&inst, 1, &[p.clone(), p.clone()], &Partition::whole(2), &caps).unwrap();
        let nb = verify_no_bound(&inst, 1, &caps).unwrap();
        assert_eq!(rep.checks[0].rhs, nb.checks[0].rhs);
        assert_eq!(rep.checks[0].lhs, nb.checks[0].lhs);
        let rep = verify_consistent_bound(&inst, 1, &[p.clone(), p.clone()], &Partition::singletons(2), &caps).unwrap();
        assert_eq!(rep.checks[0].rhs, alpha_general(2, 8, &rat_int(0), 1));
        assert_eq!(rep.status(), Status::Pass);
        let q = TensorPath::base(&[0; 7]);
        assert!(verify_consistent_bound(&inst, 1, &[p.clone(), q], &Partition::singletons(2), &caps).is_err());
    }

    #[test]
    fn consistent_bound_sweep() {
        // every pair of order-1 paths on small general-p instances
        let lc = gen_disjoint(4, 1, 2, 1, 2, 0, 1).unwrap();
        for p in [2u32, 3] {
            let inst = finite(&lc, 4, p);
            let paths = enumerate_tensor_paths(&inst, 1, 1000).unwrap();
            for t in crate::bell::set_partitions(p as usize).unwrap() {
                for a in &paths {
                    for b in &paths {
                        let chosen: Vec<TensorPath> =
                            t.rgs().iter().map(|&x| if x == 0 { a.clone() } else { b.clone() }).collect();
                        if t.num_parts() > 2 {
                            continue;
                        }
                        let rep = verify_consistent_bound(&inst, 1, &chosen, &t, &Caps::default()).unwrap();
                        assert_ne!(rep.status(), Status::Fail);
                    }
                }
            }
        }
    }

    fn infty_instance(k: u32) -> ReductionInstance {
        let lc = gen_disjoint(2, 1, 2, 2, 1, 0, 3).unwrap();
        let mvs = search_mvs(lc.num_colors(), 2 * k * k, Some(40), 1, 2000).unwrap().system;
        ReductionInstance::build_base_infty(&lc, &mvs).unwrap()
    }

    #[test]
    fn infty_sum_bound() {
        let inst = infty_instance(2);
        let sigma = vec![vec![0, 1]];
        let rep = verify_infty_sum_bound(&inst, &sigma).unwrap();
        assert_eq!(rep.checks[0].rhs, rat_int(2));
        assert_eq!(rep.status(), Status::Pass);
        let three = vec![vec![1, 1]; 3];
        assert_eq!(verify_infty_sum_bound(&inst, &three).unwrap().status(), Status::Pass);
        let (yes, s) = gen_planted(2, 1, 2, 2, 1, 4).unwrap();
        let mvs = search_mvs(2, 8, Some(40), 1, 2000).unwrap().system;
        let inst = ReductionInstance::build_base_infty(&yes, &mvs).unwrap();
        assert_eq!(verify_infty_sum_bound(&inst, &[s]).unwrap().status(), Status::NotApplicable);
    }

    #[test]
    fn infty_recurrence_small() {
        let inst = infty_instance(2);
        let rep = verify_infty_recurrence(&inst, 2, &Caps::default()).unwrap();
        assert_eq!(rep.status(), Status::Pass, "{rep}");
        let (yes, sigma) = gen_planted(2, 1, 2, 2, 1, 4).unwrap();
        let mvs = search_mvs(2, 8, Some(40), 1, 2000).unwrap().system;
        let inst = ReductionInstance::build_base_infty(&yes, &mvs).unwrap();
        for k in 1..=2 {
            assert!(path_norm(&inst, &TensorPath::uniform(&sigma, k)).unwrap() <= rat_int(1));
        }
        assert_eq!(verify_infty_recurrence(&inst, 2, &Caps::default()).unwrap().status(), Status::NotApplicable);
    }

    #[test]
    fn abstract_sequence() {
        let ys = abstract_infty_sequence(100, 100);
        assert_eq!(&ys[..3], &[1, 2, 3]);
        assert!(ys.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(verify_abstract_sequence(100, 100).status(), Status::Pass);
        assert_eq!(abstract_infty_sequence(2, 6), vec![1, 2, 3, 4, 4, 4]);
    }
}
