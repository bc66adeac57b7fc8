//! Block-serial graph built from a label-cover instance, with grouped vector
//! edge costs from a vector system (finite p) or a modified vector system (ℓ∞).
//!
//! Costs are kept as sparse non-negative integer numerators over a common
//! per-instance denominator (r for finite p, 1 for ℓ∞).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bell::bell_kp;
use crate::error::{Error, Result};
use crate::label_cover::{max_weak_fraction, LabelCoverInstance};
use crate::math::{rat, rat_int, rat_pow, Rational, ScaledVector};
use crate::modified_vs::ModifiedVectorSystem;
use crate::report::{BoundCheck, GapReport, Relation};
use crate::vector_systems::VectorSystem;

/// Sorted (coordinate, numerator) pairs with non-zero numerators.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseVec(pub Vec<(u64, u64)>);

impl SparseVec {
    pub fn unit() -> Self {
        SparseVec(vec![(0, 1)])
    }

    pub fn entries(&self) -> &[(u64, u64)] {
        &self.0
    }

    pub fn nnz(&self) -> usize {
        self.0.len()
    }

    /// self ⊗ other where other lives in dimension `inner`.
    pub fn tensor(&self, other: &SparseVec, inner: u64) -> SparseVec {
        let mut out = Vec::with_capacity(self.0.len() * other.0.len());
        for &(i, a) in &self.0 {
            for &(j, b) in &other.0 {
                out.push((i * inner + j, a * b));
            }
        }
        SparseVec(out)
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
        SparseVec(out)
    }

    pub fn sum<'a>(vs: impl IntoIterator<Item = &'a SparseVec>) -> SparseVec {
        let mut acc: Vec<(u64, u64)> = vs.into_iter().flat_map(|v| v.0.iter().copied()).collect();
        acc.sort_unstable_by_key(|e| e.0);
        let mut out: Vec<(u64, u64)> = Vec::with_capacity(acc.len());
        for (i, x) in acc {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 += x,
                _ => out.push((i, x)),
            }
        }
        SparseVec(out)
    }

    pub fn dot(&self, other: &SparseVec) -> u128 {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j, mut acc) = (0, 0, 0u128);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += a[i].1 as u128 * b[j].1 as u128;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    /// Σ_j Π_i v_i(j) over integer numerators.
    pub fn multi_dot(vs: &[&SparseVec]) -> BigInt {
        let mut total = BigInt::zero();
        if vs.is_empty() {
            return total;
        }
        let rest = &vs[1..];
        let mut pos = vec![0usize; rest.len()];
        'outer: for &(z, a) in &vs[0].0 {
            let mut prod = BigInt::from(a);
            for (n, v) in rest.iter().enumerate() {
                while pos[n] < v.0.len() && v.0[pos[n]].0 < z {
                    pos[n] += 1;
                }
                if pos[n] == v.0.len() || v.0[pos[n]].0 != z {
                    continue 'outer;
                }
                prod *= v.0[pos[n]].1;
            }
            total += prod;
        }
        total
    }

    pub fn power_sum(&self, p: u32) -> BigInt {
        self.0.iter().map(|&(_, x)| BigInt::from(x).pow(p)).sum()
    }

    pub fn max(&self) -> u64 {
        self.0.iter().map(|e| e.1).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Finite { p: u32 },
    Infty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CostSystem {
    Vector(VectorSystem),
    Modified(ModifiedVectorSystem),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionInstance {
    source: LabelCoverInstance,
    mode: Mode,
    system: CostSystem,
    block_order: Vec<usize>,
    d0: usize,
    /// Scaling of the order-1 space: r^{p−p'}/m for finite p, 1 for ℓ∞.
    alpha: Rational,
    denom: u64,
    /// costs[block][label]
    costs: Vec<Vec<SparseVec>>,
    warnings: Vec<String>,
}

fn group_layout(
    source: &LabelCoverInstance,
    d0: usize,
    support: impl Fn(usize, usize) -> Vec<usize>,
) -> Vec<Vec<SparseVec>> {
    let n = source.num_vertices();
    let mut costs = vec![vec![Vec::new(); source.num_labels()]; n];
    for (h, edge) in source.hyperedges().iter().enumerate() {
        for (j, &u) in edge.vertices.iter().enumerate() {
            for (l, slot) in costs[u].iter_mut().enumerate() {
                let c = edge.color(j, l);
                slot.extend(support(j, c).into_iter().map(|z| ((h * d0 + z) as u64, 1u64)));
            }
        }
    }
    costs.into_iter().map(|row| row.into_iter().map(|mut v| {
        v.sort_unstable_by_key(|e| e.0);
        SparseVec(v)
    }).collect()).collect()
}

fn degenerate_warnings(source: &LabelCoverInstance) -> Vec<String> {
    (0..source.num_vertices())
        .filter(|&u| source.degree(u) == 0)
        .map(|u| format!("vertex {u} lies in no hyperedge; its block has all-zero costs"))
        .collect()
}

impl ReductionInstance {
    /// Finite-p reduction. `allow_width_mismatch` permits a system wider
    /// than the number of parts.
    pub fn build_base(source: &LabelCoverInstance, p: u32, system: &VectorSystem, allow_width_mismatch: bool) -> Result<Self> {
        if system.arity() != p {
            return Err(Error::Precondition(format!("vector system has arity {}, need {p}", system.arity())));
        }
        if system.q() < source.num_colors() {
            return Err(Error::InsufficientColors { needed: source.num_colors(), have: system.q() });
        }
        let width = system.r() as usize;
        if width < source.r() || (width != source.r() && !allow_width_mismatch) {
            return Err(Error::Precondition(format!(
                "vector system width {width} does not match {} parts",
                source.r()
            )));
        }
        let m = source.hyperedges().len();
        if m == 0 {
            return Err(Error::InvalidArgument("instance has no hyperedges".into()));
        }
        let d0 = system.d0();
        let costs = group_layout(source, d0, |j, c| system.support(j, c));
        Ok(ReductionInstance {
            source: source.clone(),
            mode: Mode::Finite { p },
            system: CostSystem::Vector(system.clone()),
            block_order: (0..source.num_vertices()).collect(),
            d0,
            alpha: system.scale() / rat_int(m as i64),
            denom: width as u64,
            costs,
            warnings: degenerate_warnings(source),
        })
    }

    /// ℓ∞ reduction from a 2-part instance.
    pub fn build_base_infty(source: &LabelCoverInstance, system: &ModifiedVectorSystem) -> Result<Self> {
        if source.r() != 2 {
            return Err(Error::Precondition(format!("ℓ∞ reduction needs 2 parts, got {}", source.r())));
        }
        if system.q() < source.num_colors() {
            return Err(Error::InsufficientColors { needed: source.num_colors(), have: system.q() });
        }
        if source.hyperedges().is_empty() {
            return Err(Error::InvalidArgument("instance has no hyperedges".into()));
        }
        let d0 = system.d0();
        let costs = group_layout(source, d0, |b, c| {
            system.vector(b, c).iter().enumerate().filter(|(_, &x)| x == 1).map(|(z, _)| z).collect()
        });
        Ok(ReductionInstance {
            source: source.clone(),
            mode: Mode::Infty,
            system: CostSystem::Modified(system.clone()),
            block_order: (0..source.num_vertices()).collect(),
            d0,
            alpha: Rational::one(),
            denom: 1,
            costs,
            warnings: degenerate_warnings(source),
        })
    }

    pub fn source(&self) -> &LabelCoverInstance {
        &self.source
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn system(&self) -> &CostSystem {
        &self.system
    }

    pub fn block_order(&self) -> &[usize] {
        &self.block_order
    }

    pub fn num_blocks(&self) -> usize {
        self.block_order.len()
    }

    pub fn num_labels(&self) -> usize {
        self.source.num_labels()
    }

    pub fn m(&self) -> usize {
        self.source.hyperedges().len()
    }

    pub fn d0(&self) -> usize {
        self.d0
    }

    pub fn d(&self) -> u64 {
        (self.d0 * self.m()) as u64
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    /// Common denominator of the order-1 cost entries.
    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Numerators of c(e(u, l)) for the vertex of block `b`.
    pub fn edge_numerators(&self, b: usize, l: usize) -> &SparseVec {
        &self.costs[self.block_order[b]][l]
    }

    /// c(e(u, l)) as a dense scaled vector.
    pub fn edge_cost(&self, u: usize, l: usize) -> ScaledVector {
        self.to_scaled(&self.costs[u][l], 1)
    }

    /// Dense vector of order k from numerators.
    pub fn to_scaled(&self, v: &SparseVec, k: u32) -> ScaledVector {
        let dim = self.d().pow(k) as usize;
        let den = rat_pow(&rat(1, self.denom as i64), k);
        let mut coords = vec![Rational::zero(); dim];
        for &(z, x) in v.entries() {
            coords[z as usize] = rat_int(x) * &den;
        }
        ScaledVector::new(self.alpha_k(k), coords).expect("positive alpha and dimension")
    }

    pub fn alpha_k(&self, k: u32) -> Rational {
        rat_pow(&self.alpha, k)
    }

    /// Numerators of cost(P_σ).
    pub fn base_path_numerators(&self, sigma: &[usize]) -> Result<SparseVec> {
        self.source.check_assignment(sigma)?;
        Ok(SparseVec::sum((0..self.num_blocks()).map(|b| self.edge_numerators(b, sigma[self.block_order[b]]))))
    }

    /// Exact value of ‖v‖_p^p (finite) or ‖v‖∞ (ℓ∞) for numerators of order k.
    pub fn norm_of(&self, v: &SparseVec, k: u32) -> Rational {
        match self.mode {
            Mode::Finite { p } => {
                self.alpha_k(k) * Rational::from_integer(v.power_sum(p)) * rat_pow(&rat(1, self.denom as i64), k * p)
            }
            Mode::Infty => rat_int(v.max()),
        }
    }

    /// Exact scaled multilinear product of numerator vectors of order k.
    pub fn product_of(&self, vs: &[&SparseVec], k: u32) -> Rational {
        let t = vs.len() as u32;
        self.alpha_k(k) * Rational::from_integer(SparseVec::multi_dot(vs)) * rat_pow(&rat(1, self.denom as i64), k * t)
    }

    /// Parts count r of the source instance.
    pub fn r(&self) -> usize {
        self.source.r()
    }
}

/// cost(P_σ) as a dense scaled vector.
pub fn base_path_cost(inst: &ReductionInstance, sigma: &[usize]) -> Result<ScaledVector> {
    Ok(inst.to_scaled(&inst.base_path_numerators(sigma)?, 1))
}

/// Σ_t S(p,t) · (parts)^{(t)} · width^{−t}: the exact per-group value of
/// ‖Σ_j v_j^{c_j}‖_p^p when all colors c_j are distinct.
pub fn distinct_color_group_norm(parts: u64, width: u64, p: u32) -> Rational {
    // Stirling numbers of the second kind by the triangle recurrence
    let p = p as usize;
    let mut s = vec![vec![BigInt::zero(); p + 1]; p + 1];
    s[0][0] = BigInt::one();
    for n in 1..=p {
        for t in 1..=n {
            s[n][t] = BigInt::from(t) * &s[n - 1][t] + &s[n - 1][t - 1];
        }
    }
    let mut total = Rational::zero();
    let mut falling = BigInt::one();
    for t in 1..=p {
        falling *= BigInt::from(parts as i64 - (t as i64 - 1));
        if falling.is_zero() {
            break;
        }
        total += Rational::new(&s[p][t] * &falling, BigInt::from(width).pow(t as u32));
    }
    total
}

/// Minimum of ‖cost(P)‖_p^p over all base paths against (1−ε*)·g, with g the
/// exact distinct-color group value, plus the α₁·bell₁(p) form.
pub fn verify_base_gap(inst: &ReductionInstance, cap: u64) -> Result<GapReport> {
    let Mode::Finite { p } = inst.mode() else {
        return Err(Error::Precondition("base gap check is defined for finite p".into()));
    };
    let sol = crate::tensor::min_cost(inst, 1, cap, crate::tensor::DEFAULT_DIM_CAP)?;
    let eps = max_weak_fraction(inst.source(), cap)?;
    let r = inst.r() as u64;
    let one = Rational::one();
    let mut rep = GapReport::new("base-gap");
    rep.param("p", p);
    rep.param("r", r);
    rep.param("blocks", inst.num_blocks());
    rep.param("labels", inst.num_labels());
    rep.param("hyperedges", inst.m());
    rep.eps_star = Some(eps.clone());
    rep.paths_enumerated = sol.paths_enumerated.to_string();
    let g = distinct_color_group_norm(r, inst.denom(), p);
    let bound = (&one - &eps) * &g;
    let vacuous = eps >= one;
    rep.checks.push(
        BoundCheck::new("min ‖cost‖_p^p >= (1−ε*)·g(r,p)", sol.best.clone(), Relation::Ge, bound, vacuous)
            .with_witness(sol.witness.to_string()),
    );
    let pr = rat(p as i64, r as i64);
    let a1 = rat_pow(&(&one - pr), p) * (&one - rat_int(p as i64 * p as i64) * &eps);
    let vacuous = a1 <= Rational::zero() || p as u64 >= r;
    let bell = Rational::from_integer(BigInt::from(bell_kp(1, p as usize)));
    rep.checks.push(BoundCheck::new("min ‖cost‖_p^p >= α₁·bell₁(p)", sol.best.clone(), Relation::Ge, a1 * bell, vacuous));
    rep.notes.extend(inst.warnings().iter().cloned());
    Ok(rep)
}
