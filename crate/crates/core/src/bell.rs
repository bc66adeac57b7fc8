//! Set partitions, hierarchical partitions and higher-order Bell numbers.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{factorial, ln_big};

pub const MAX_SET_PARTITION_P: usize = 12;
pub const DEFAULT_HIER_CAP: u64 = 1_000_000;

/// A partition of [p] as a restricted-growth string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<u8>);

impl Partition {
    /// Canonicalize an arbitrary block labelling.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map: Vec<(usize, u8)> = Vec::new();
        let mut rgs = Vec::with_capacity(labels.len());
        for &l in labels {
            let id = match map.iter().find(|(k, _)| *k == l) {
                Some(&(_, v)) => v,
                None => {
                    let v = map.len() as u8;
                    map.push((l, v));
                    v
                }
            };
            rgs.push(id);
        }
        Partition(rgs)
    }

    pub fn from_rgs(rgs: Vec<u8>) -> Result<Self> {
        let mut max: i32 = -1;
        for &x in &rgs {
            if x as i32 > max + 1 {
                return Err(Error::InvalidArgument(format!("{rgs:?} is not a restricted-growth string")));
            }
            max = max.max(x as i32);
        }
        Ok(Partition(rgs))
    }

    /// {[p]}.
    pub fn whole(p: usize) -> Self {
        Partition(vec![0; p])
    }

    pub fn singletons(p: usize) -> Self {
        Partition((0..p as u8).collect())
    }

    pub fn rgs(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn num_parts(&self) -> usize {
        self.0.iter().map(|&x| x as usize + 1).max().unwrap_or(0)
    }

    pub fn parts(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_parts()];
        for (i, &x) in self.0.iter().enumerate() {
            out[x as usize].push(i);
        }
        out
    }

    /// Part sizes, descending.
    pub fn sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.parts().iter().map(Vec::len).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    pub fn is_singletons(&self) -> bool {
        self.num_parts() == self.len()
    }

    pub fn same_part(&self, a: usize, b: usize) -> bool {
        self.0[a] == self.0[b]
    }

    /// Whether every part of self lies inside a part of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.len() == coarser.len()
            && (0..self.len()).all(|a| (0..self.len()).all(|b| !self.same_part(a, b) || coarser.same_part(a, b)))
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for part in self.parts() {
            write!(f, "{{")?;
            for (n, i) in part.iter().enumerate() {
                if n > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", i + 1)?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

/// All restricted-growth strings of length n, lexicographic.
fn rgs_all(n: usize) -> Vec<Vec<u8>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut a = vec![0u8; n];
    let mut maxes = vec![0u8; n];
    loop {
        out.push(a.clone());
        // rightmost position that can be incremented
        let mut i = n - 1;
        loop {
            if i == 0 {
                return out;
            }
            if a[i] <= maxes[i - 1] {
                break;
            }
            i -= 1;
        }
        a[i] += 1;
        maxes[i] = maxes[i - 1].max(a[i]);
        for j in i + 1..n {
            a[j] = 0;
            maxes[j] = maxes[i];
        }
    }
}

pub fn set_partitions(p: usize) -> Result<Vec<Partition>> {
    if p > MAX_SET_PARTITION_P {
        return Err(Error::InvalidArgument(format!("p = {p} exceeds {MAX_SET_PARTITION_P}")));
    }
    Ok(rgs_all(p).into_iter().map(Partition).collect())
}

/// Every refinement of T exactly once, in restricted-growth order.
pub fn refinements(t: &Partition) -> Vec<Partition> {
    let parts = t.parts();
    let per_part: Vec<Vec<Vec<u8>>> = parts.iter().map(|s| rgs_all(s.len())).collect();
    let mut idx = vec![0usize; parts.len()];
    let mut out = Vec::new();
    loop {
        let mut labels = vec![0usize; t.len()];
        for (pi, part) in parts.iter().enumerate() {
            for (pos, &elem) in part.iter().enumerate() {
                labels[elem] = pi * 256 + per_part[pi][idx[pi]][pos] as usize;
            }
        }
        out.push(Partition::from_labels(&labels));
        let mut j = parts.len();
        loop {
            if j == 0 {
                out.sort();
                return out;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < per_part[j].len() {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// k levels, each refining the previous one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HierPartition {
    pub levels: Vec<Partition>,
}

impl HierPartition {
    pub fn k(&self) -> usize {
        self.levels.len()
    }

    pub fn is_valid(&self, p: usize) -> bool {
        self.levels.iter().all(|t| t.len() == p) && self.levels.windows(2).all(|w| w[1].refines(&w[0]))
    }
}

impl std::fmt::Display for HierPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, t) in self.levels.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ")")
    }
}

fn memo() -> &'static Mutex<HashMap<(u32, usize), BigUint>> {
    static TABLE: OnceLock<Mutex<HashMap<(u32, usize), BigUint>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Integer partitions of n, parts descending.
fn integer_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            cur.push(part);
            go(n - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Number of set partitions of [n] with the given block sizes.
fn shape_count(shape: &[usize]) -> BigUint {
    let n: usize = shape.iter().sum();
    let mut den = BigUint::one();
    for &s in shape {
        den *= factorial(s as u64);
    }
    let mut i = 0;
    while i < shape.len() {
        let mut j = i;
        while j < shape.len() && shape[j] == shape[i] {
            j += 1;
        }
        den *= factorial((j - i) as u64);
        i = j;
    }
    factorial(n as u64) / den
}

/// bell_k(p) by the product rule: bell_k(p) = Σ_{T ∈ 𝒫} Π_{S ∈ T} bell_{k-1}(|S|),
/// grouping partitions by block shape. Memoized.
pub fn bell_kp(k: u32, p: usize) -> BigUint {
    if k == 0 || p <= 1 {
        return BigUint::one();
    }
    if let Some(v) = memo().lock().expect("memo poisoned").get(&(k, p)) {
        return v.clone();
    }
    let mut total = BigUint::zero();
    for shape in integer_partitions(p) {
        let mut term = shape_count(&shape);
        for &s in &shape {
            term *= bell_kp(k - 1, s);
        }
        total += term;
    }
    memo().lock().expect("memo poisoned").insert((k, p), total.clone());
    total
}

/// bell_k(T) = Π_{S ∈ T} bell_k(|S|) for k >= 1; bell_0(T) = [T is all singletons].
pub fn bell_t(k: u32, t: &Partition) -> BigUint {
    if k == 0 {
        return if t.is_singletons() { BigUint::one() } else { BigUint::zero() };
    }
    t.sizes().iter().map(|&s| bell_kp(k, s)).product()
}

/// bell_k(T) by the refinement recurrence, enumerating refinements
/// explicitly; base bell_1(T) = |𝒫(T)|.
pub fn bell_t_refinement(k: u32, t: &Partition) -> BigUint {
    match k {
        0 => bell_t(0, t),
        1 => BigUint::from(refinements(t).len()),
        _ => refinements(t).iter().map(|t2| bell_t_refinement(k - 1, t2)).sum(),
    }
}

/// bell_k(p) through the refinement route.
pub fn bell_kp_refinement(k: u32, p: usize) -> BigUint {
    if k == 0 {
        return BigUint::one();
    }
    bell_t_refinement(k, &Partition::whole(p))
}

/// All k-level hierarchical partitions of [p].
pub fn enumerate_hier(k: u32, p: usize, cap: u64) -> Result<Vec<HierPartition>> {
    let count = bell_kp(k, p);
    if count > BigUint::from(cap) {
        return Err(Error::SearchSpaceTooLarge { needed: count.to_string(), cap });
    }
    let mut out = Vec::new();
    let mut levels = Vec::new();
    fn go(k: u32, parent: &Partition, levels: &mut Vec<Partition>, out: &mut Vec<HierPartition>) {
        if levels.len() == k as usize {
            out.push(HierPartition { levels: levels.clone() });
            return;
        }
        for t in refinements(parent) {
            levels.push(t);
            go(k, &levels[levels.len() - 1].clone(), levels, out);
            levels.pop();
        }
    }
    go(k, &Partition::whole(p), &mut levels, &mut out);
    Ok(out)
}

/// log^{(k)} x with natural logs.
pub fn iter_log(x: f64, k: u32) -> Result<f64> {
    let mut v = x;
    for i in 0..k {
        if v <= 0.0 || !v.is_finite() {
            return Err(Error::UndefinedIterate { p: x.to_string(), k: i });
        }
        v = v.ln();
    }
    Ok(v)
}

/// Smallest k with log^{(k)} x <= 1.
pub fn log_star(x: f64) -> Result<u32> {
    if x <= 0.0 || x.is_nan() {
        return Err(Error::InvalidArgument(format!("log* needs a positive argument, got {x}")));
    }
    let mut v = x;
    let mut k = 0;
    while v > 1.0 {
        v = v.ln();
        k += 1;
    }
    Ok(k)
}

pub const BAND_LOW: f64 = 1.0 / 64.0;
pub const BAND_HIGH: f64 = 64.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandReport {
    pub k: u32,
    pub p: usize,
    pub k0: i64,
    /// Which reference branch applied: "log" or "power".
    pub branch: String,
    pub bell_root: f64,
    pub reference: f64,
    pub ratio: f64,
    pub within_band: bool,
}

/// ρ = bell_k(p)^{1/p} / ref(k,p) with ref = p/log^{(k)} p for k <= k0,
/// p·(k−k0)^{1−1/p} otherwise, k0 = log*(p) − 1.
pub fn bound_band(k: u32, p: usize) -> Result<BandReport> {
    if p == 0 {
        return Err(Error::InvalidArgument("p must be positive".into()));
    }
    let pf = p as f64;
    let k0 = log_star(pf)? as i64 - 1;
    let (branch, reference) = if (k as i64) <= k0 {
        ("log", pf / iter_log(pf, k)?)
    } else {
        ("power", pf * ((k as i64 - k0) as f64).powf(1.0 - 1.0 / pf))
    };
    let bell_root = (ln_big(&bell_kp(k, p)) / pf).exp();
    let ratio = bell_root / reference;
    Ok(BandReport {
        k,
        p,
        k0,
        branch: branch.into(),
        bell_root,
        reference,
        ratio,
        within_band: (BAND_LOW..=BAND_HIGH).contains(&ratio),
    })
}

/// f_k(x): f_0 = e^x, f_{i+1} = e^{f_i − 1}.
fn egf_f(k: u32, x: f64) -> f64 {
    let mut f = x.exp();
    for _ in 0..k {
        f = (f - 1.0).exp();
    }
    f
}

/// p!/x^p · (f_k(x) − 1).
pub fn egf_upper(k: u32, p: usize, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::InvalidArgument("x must be positive".into()));
    }
    let f = egf_f(k, x);
    let pf = factorial(p as u64).to_f64().unwrap_or(f64::INFINITY);
    let v = pf / x.powi(p as i32) * (f - 1.0);
    if !v.is_finite() {
        return Err(Error::Overflow(format!("egf bound for k={k}, p={p}, x={x}")));
    }
    Ok(v)
}

/// ln of `egf_upper`, computed without forming f_k(x). Returns +∞ when even
/// ln f_k(x) is beyond double range; the bound is then trivially true.
pub fn egf_upper_ln(k: u32, p: usize, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::InvalidArgument("x must be positive".into()));
    }
    // ln f_k = f_{k-1} − 1 for k >= 1, and x for k = 0
    let ln_f = if k == 0 { x } else { egf_f(k - 1, x) - 1.0 };
    // ln(f − 1) = ln f + ln(1 − e^{−ln f})
    let ln_f_minus_1 = if ln_f.is_infinite() { f64::INFINITY } else { ln_f + (-(-ln_f).exp()).ln_1p() };
    Ok(ln_big(&factorial(p as u64)) - p as f64 * x.ln() + ln_f_minus_1)
}

/// Whether the generating-function bound dominates bell_k(p), with a 1e-9
/// relative slack.
pub fn egf_dominates(k: u32, p: usize, x: f64) -> Result<bool> {
    let lhs = egf_upper_ln(k, p, x)?;
    let rhs = ln_big(&bell_kp(k, p));
    Ok(lhs >= rhs + (1.0 - 1e-9f64).ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn partition_counts() {
        let bell = [1u64, 1, 2, 5, 15, 52, 203, 877, 4140];
        for (p, &b) in bell.iter().enumerate() {
            assert_eq!(set_partitions(p).unwrap().len() as u64, b);
            assert_eq!(bell_kp(1, p.max(1)), big(if p == 0 { 1 } else { b }));
        }
        assert!(set_partitions(13).is_err());
        let all = set_partitions(4).unwrap();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn refinement_counts() {
        let t = Partition::from_rgs(vec![0, 0, 1]).unwrap();
        assert_eq!(refinements(&t).len(), 2);
        assert_eq!(refinements(&Partition::singletons(4)), vec![Partition::singletons(4)]);
        assert_eq!(refinements(&Partition::whole(3)), set_partitions(3).unwrap());
        for t in set_partitions(6).unwrap() {
            let refs = refinements(&t);
            let expected: u64 = t.sizes().iter().map(|&s| set_partitions(s).unwrap().len() as u64).product();
            assert_eq!(refs.len() as u64, expected);
            assert!(refs.iter().all(|r| r.refines(&t)));
            let brute = set_partitions(6).unwrap().into_iter().filter(|r| r.refines(&t)).count();
            assert_eq!(brute, refs.len());
        }
    }

    #[test]
    fn two_level_partitions_of_three() {
        assert_eq!(bell_kp(2, 3), big(12));
        let all = enumerate_hier(2, 3, DEFAULT_HIER_CAP).unwrap();
        assert_eq!(all.len(), 12);
        let shown: Vec<String> = all.iter().map(|h| h.to_string()).collect();
        for s in [
            "({1,2,3}, {1,2,3})",
            "({1,2,3}, {1,2}{3})",
            "({1,2,3}, {1,3}{2})",
            "({1,2,3}, {1}{2,3})",
            "({1,2,3}, {1}{2}{3})",
            "({1,2}{3}, {1,2}{3})",
            "({1,2}{3}, {1}{2}{3})",
            "({1,3}{2}, {1,3}{2})",
            "({1,3}{2}, {1}{2}{3})",
            "({1}{2,3}, {1}{2,3})",
            "({1}{2,3}, {1}{2}{3})",
            "({1}{2}{3}, {1}{2}{3})",
        ] {
            assert!(shown.contains(&s.to_string()), "missing {s}");
        }
        assert_eq!(enumerate_hier(1, 2, DEFAULT_HIER_CAP).unwrap().len(), 2);
        assert_eq!(enumerate_hier(0, 4, DEFAULT_HIER_CAP).unwrap(), vec![HierPartition { levels: vec![] }]);
    }

    #[test]
    fn routes_agree() {
        for k in 0..=4 {
            for p in 1..=8 {
                assert_eq!(bell_kp(k, p), bell_kp_refinement(k, p), "k={k} p={p}");
            }
        }
        for k in 0..=3 {
            for p in 1..=6 {
                let n = enumerate_hier(k, p, DEFAULT_HIER_CAP).unwrap();
                assert_eq!(BigUint::from(n.len()), bell_kp(k, p));
                assert!(n.iter().all(|h| h.is_valid(p)));
                let distinct: std::collections::HashSet<_> = n.iter().collect();
                assert_eq!(distinct.len(), n.len());
            }
        }
    }

    #[test]
    fn product_rule_on_partitions() {
        for k in 1..=3 {
            for t in set_partitions(5).unwrap() {
                // towers of k levels rooted at T, counted directly
                let mut count = 0u64;
                fn go(level: u32, k: u32, t: &Partition, count: &mut u64) {
                    if level == k {
                        *count += 1;
                        return;
                    }
                    for r in refinements(t) {
                        go(level + 1, k, &r, count);
                    }
                }
                go(0, k, &t, &mut count);
                assert_eq!(bell_t(k, &t), big(count), "k={k} T={t}");
                assert_eq!(bell_t_refinement(k, &t), bell_t(k, &t));
            }
        }
        assert_eq!(bell_t(0, &Partition::singletons(3)), big(1));
        assert_eq!(bell_t(0, &Partition::whole(3)), big(0));
        assert_eq!(bell_kp(0, 7), big(1));
    }

    #[test]
    fn monotone_on_grid() {
        for k in 0..=4 {
            for p in 1..=8 {
                assert!(bell_kp(k + 1, p) >= bell_kp(k, p));
                assert!(bell_kp(k, p + 1) >= bell_kp(k, p));
            }
        }
    }

    #[test]
    fn logs() {
        assert_eq!(log_star(1.0).unwrap(), 0);
        assert_eq!(log_star(std::f64::consts::E).unwrap(), 1);
        assert_eq!(log_star(16.0).unwrap(), 3);
        assert!((iter_log(16.0, 2).unwrap() - 16f64.ln().ln()).abs() < 1e-12);
        assert!(matches!(iter_log(0.5, 2), Err(Error::UndefinedIterate { .. })));
        assert!(log_star(0.0).is_err());
    }

    #[test]
    fn band() {
        let b = bound_band(1, 2).unwrap();
        assert_eq!(b.k0, 0);
        assert_eq!(b.branch, "power");
        assert!((b.reference - 2.0).abs() < 1e-12);
        assert!((b.ratio - 2f64.sqrt() / 2.0).abs() < 1e-12);
        for p in 1..=12 {
            for k in 0..=6 {
                let b = bound_band(k, p).unwrap();
                assert!(b.within_band, "{b:?}");
                assert_eq!(b.branch == "log", (k as i64) <= b.k0);
            }
        }
    }

    #[test]
    fn egf() {
        let v = egf_upper(1, 3, 1.0).unwrap();
        assert!((v - 6.0 * ((std::f64::consts::E - 1.0).exp() - 1.0)).abs() < 1e-9);
        assert!(v >= 5.0 && (v - 27.4).abs() < 0.1);
        let v = egf_upper(0, 2, 1.0).unwrap();
        assert!((v - 3.4366).abs() < 1e-3);
        for x in [0.25, 0.5, 1.0, 2.0] {
            for p in 1..=10 {
                for k in 0..=4 {
                    assert!(egf_dominates(k, p, x).unwrap(), "k={k} p={p} x={x}");
                    if let Ok(v) = egf_upper(k, p, x) {
                        assert!((v.ln() - egf_upper_ln(k, p, x).unwrap()).abs() < 1e-6 * v.ln().abs().max(1.0));
                    }
                }
            }
        }
        assert!(matches!(egf_upper(4, 5, 2.0), Err(Error::Overflow(_))));
        assert_eq!(egf_upper_ln(4, 5, 2.0).unwrap(), f64::INFINITY);
    }
}
