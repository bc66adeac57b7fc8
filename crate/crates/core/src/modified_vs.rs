//! (2,q,p)-modified vector systems: 0/1 vectors, two per color, whose
//! same-color sums stay at most 1 in every coordinate while sums over
//! distinct colors exceed p'/2 by a σ-scale margin somewhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::math::{meets_half_threshold, rat, Rational};
use crate::report::{VerificationReport, Violation};

pub const MVS_EXHAUSTIVE_CAP: u64 = 2_000_000;
pub const MVS_SAMPLES: u64 = 100_000;
pub const MVS_SAMPLE_SEED: u64 = 0x5EED;
/// Brute force is limited to 2q·d0 <= 24 bits of search space.
pub const BRUTE_FORCE_BITS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModifiedVectorSystem {
    q: usize,
    p: u32,
    d0: usize,
    /// Vector (b, c) at index 2c + b.
    vectors: Vec<Vec<u8>>,
}

impl ModifiedVectorSystem {
    pub fn new(q: usize, p: u32, d0: usize, vectors: Vec<Vec<u8>>) -> Result<Self> {
        if q == 0 || p == 0 || d0 == 0 {
            return Err(Error::InvalidArgument("q, p and d0 must be positive".into()));
        }
        if vectors.len() != 2 * q {
            return Err(Error::InvalidArgument(format!("expected {} vectors, got {}", 2 * q, vectors.len())));
        }
        for v in &vectors {
            if v.len() != d0 {
                return Err(Error::DimensionMismatch(d0, v.len()));
            }
            if v.iter().any(|&x| x > 1) {
                return Err(Error::InvalidArgument("entries must be 0 or 1".into()));
            }
        }
        Ok(ModifiedVectorSystem { q, p, d0, vectors })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn d0(&self) -> usize {
        self.d0
    }

    /// v_b^c with b ∈ {0,1}, c ∈ 0..q.
    pub fn vector(&self, b: usize, c: usize) -> &[u8] {
        &self.vectors[2 * c + b]
    }

    pub fn vectors(&self) -> &[Vec<u8>] {
        &self.vectors
    }

    /// Same system with coordinates permuted: new[j] = old[perm[j]].
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let vectors = self.vectors.iter().map(|v| perm.iter().map(|&j| v[j]).collect()).collect();
        ModifiedVectorSystem { vectors, ..self.clone() }
    }
}

/// ⌈100·p·log₂ q⌉.
pub fn default_d0(q: usize, p: u32) -> usize {
    (100.0 * p as f64 * (q as f64).log2()).ceil() as usize
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub system: ModifiedVectorSystem,
    /// 1-based index of the successful try.
    pub tries: u64,
}

/// Random complementary pair per color, verified; first success wins.
pub fn search_mvs(q: usize, p: u32, d0: Option<usize>, seed: u64, max_tries: u64) -> Result<SearchOutcome> {
    if q < 2 || p < 2 {
        return Err(Error::InvalidArgument("search needs q >= 2 and p >= 2".into()));
    }
    let d0 = d0.unwrap_or_else(|| default_d0(q, p));
    for t in 0..max_tries {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t);
        let mut vectors = Vec::with_capacity(2 * q);
        for _ in 0..q {
            let first: Vec<u8> = (0..d0).map(|_| rng.gen_range(0..2u8)).collect();
            let second = first.iter().map(|&x| 1 - x).collect();
            vectors.push(first);
            vectors.push(second);
        }
        let sys = ModifiedVectorSystem::new(q, p, d0, vectors)?;
        if verify_mvs(&sys).pass() {
            return Ok(SearchOutcome { system: sys, tries: t + 1 });
        }
    }
    Err(Error::Exhausted(max_tries))
}

/// Count of multisets with at most one vector per color and size in 1..=p.
pub fn valid_multiset_count(q: usize, p: u32) -> u128 {
    let binom = |n: u128, k: u128| -> u128 {
        if k > n {
            return 0;
        }
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    };
    (1..=q.min(p as usize) as u128)
        .map(|s| binom(q as u128, s).saturating_mul(1u128 << s).saturating_mul(binom(p as u128, s)))
        .fold(0u128, |a, b| a.saturating_add(b))
}

struct Checker<'a> {
    vecs: &'a [Vec<u8>],
    p: u32,
    sum: Vec<i64>,
    chosen: Vec<(usize, u32)>,
}

impl Checker<'_> {
    fn add(&mut self, v: usize, w: i64) {
        for (s, &x) in self.sum.iter_mut().zip(&self.vecs[v]) {
            *s += w * x as i64;
        }
    }

    fn witness(&self) -> String {
        let parts: Vec<String> = self.chosen.iter().map(|&(v, w)| format!("{w}×v[{}]^{}", v % 2, v / 2)).collect();
        parts.join(" + ")
    }

    /// DFS over colors from `c`, visiting each valid multiset once.
    fn walk(&mut self, c: usize, total: u32, q: usize, rep: &mut VerificationReport, present: &[bool]) {
        for next in c..q {
            for b in 0..2 {
                let v = 2 * next + b;
                if !present[v] {
                    continue;
                }
                for w in 1..=(self.p - total) {
                    self.add(v, w as i64);
                    self.chosen.push((v, w));
                    let pp = total + w;
                    let best = *self.sum.iter().max().unwrap();
                    rep.checked += 1;
                    if !meets_half_threshold(best, pp as i64) {
                        rep.record(Violation {
                            witness: format!("p'={pp}: {}", self.witness()),
                            expected: Some(rat(pp as i64, 2)),
                            found: Some(rat(best, 1)),
                        });
                    }
                    self.walk(next + 1, pp, q, rep, present);
                    self.chosen.pop();
                    self.add(v, -(w as i64));
                }
            }
        }
    }
}

fn check_pairs(vecs: &[Option<&[u8]>], rep: &mut VerificationReport) {
    for a in 0..vecs.len() {
        let Some(u) = vecs[a] else { continue };
        for b in a + 1..vecs.len() {
            let Some(v) = vecs[b] else { continue };
            if u == v {
                rep.record(Violation {
                    witness: format!("v[{}]^{} = v[{}]^{}", a % 2, a / 2, b % 2, b / 2),
                    expected: None,
                    found: None,
                });
            }
            if a / 2 == b / 2 {
                let m = u.iter().zip(v).map(|(x, y)| x + y).max().unwrap_or(0);
                if m > 1 {
                    rep.record(Violation {
                        witness: format!("‖v[0]^{c} + v[1]^{c}‖∞", c = a / 2),
                        expected: Some(rat(1, 1)),
                        found: Some(rat(m as i64, 1)),
                    });
                }
            }
        }
    }
}

pub fn verify_mvs(s: &ModifiedVectorSystem) -> VerificationReport {
    verify_mvs_with(s, MVS_EXHAUSTIVE_CAP, MVS_SAMPLES, MVS_SAMPLE_SEED)
}

pub fn verify_mvs_with(s: &ModifiedVectorSystem, cap: u64, samples: u64, seed: u64) -> VerificationReport {
    let mut rep = VerificationReport::new("modified-vector-system");
    rep.param("q", s.q);
    rep.param("p", s.p);
    rep.param("d0", s.d0);
    let refs: Vec<Option<&[u8]>> = s.vectors.iter().map(|v| Some(v.as_slice())).collect();
    check_pairs(&refs, &mut rep);

    let count = valid_multiset_count(s.q, s.p);
    rep.param("valid-multisets", count);
    rep.param("(2q)^p", (2 * s.q as u128).saturating_pow(s.p));
    let mut ck = Checker { vecs: &s.vectors, p: s.p, sum: vec![0; s.d0], chosen: Vec::new() };
    if count <= cap as u128 {
        ck.walk(0, 0, s.q, &mut rep, &vec![true; 2 * s.q]);
    } else {
        rep.exhaustive = false;
        rep.sample_seed = Some(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let pp = rng.gen_range(1..=s.p);
            let mut pick: Vec<Option<usize>> = vec![None; s.q];
            let mut weights = vec![0i64; 2 * s.q];
            for _ in 0..pp {
                let c = rng.gen_range(0..s.q);
                let b = *pick[c].get_or_insert_with(|| rng.gen_range(0..2));
                weights[2 * c + b] += 1;
            }
            let mut sum = vec![0i64; s.d0];
            for (v, &w) in weights.iter().enumerate() {
                if w > 0 {
                    for (x, &e) in sum.iter_mut().zip(&s.vectors[v]) {
                        *x += w * e as i64;
                    }
                }
            }
            let best = *sum.iter().max().unwrap();
            rep.checked += 1;
            if !meets_half_threshold(best, pp as i64) {
                let parts: Vec<String> = weights
                    .iter()
                    .enumerate()
                    .filter(|(_, &w)| w > 0)
                    .map(|(v, w)| format!("{w}×v[{}]^{}", v % 2, v / 2))
                    .collect();
                rep.record(Violation {
                    witness: format!("p'={pp}: {}", parts.join(" + ")),
                    expected: Some(rat(pp as i64, 2)),
                    found: Some(rat(best, 1)),
                });
            }
        }
    }
    rep
}

fn bits_to_vec(x: u32, d0: usize) -> Vec<u8> {
    (0..d0).map(|j| ((x >> (d0 - 1 - j)) & 1) as u8).collect()
}

/// Lexicographically first valid system over {0,1}^{d0}, or `None`.
///
/// Sequences (v[0]^0, v[1]^0, v[0]^1, ...) are explored in lexicographic
/// order with every condition checked on each prefix; all conditions are
/// inherited by sub-systems, so pruning never skips a valid sequence.
pub fn brute_force_mvs(q: usize, p: u32, d0: usize) -> Result<Option<ModifiedVectorSystem>> {
    if q == 0 || p == 0 || d0 == 0 {
        return Err(Error::InvalidArgument("q, p and d0 must be positive".into()));
    }
    if 2 * q * d0 > BRUTE_FORCE_BITS {
        return Err(Error::SearchSpaceTooLarge {
            needed: format!("2^{}", 2 * q * d0),
            cap: 1 << BRUTE_FORCE_BITS,
        });
    }
    let mut seq: Vec<u32> = Vec::with_capacity(2 * q);
    if extend(&mut seq, q, p, d0) {
        let vectors = seq.iter().map(|&x| bits_to_vec(x, d0)).collect();
        Ok(Some(ModifiedVectorSystem::new(q, p, d0, vectors)?))
    } else {
        Ok(None)
    }
}

fn prefix_ok(seq: &[u32], q: usize, p: u32, d0: usize) -> bool {
    let vecs: Vec<Vec<u8>> = seq.iter().map(|&x| bits_to_vec(x, d0)).collect();
    let mut rep = VerificationReport::new("prefix");
    let refs: Vec<Option<&[u8]>> = vecs.iter().map(|v| Some(v.as_slice())).collect();
    check_pairs(&refs, &mut rep);
    if !rep.pass() {
        return false;
    }
    let mut padded = vecs.clone();
    padded.resize(2 * q, vec![0; d0]);
    let mut present = vec![false; 2 * q];
    for x in present.iter_mut().take(seq.len()) {
        *x = true;
    }
    let mut ck = Checker { vecs: &padded, p, sum: vec![0; d0], chosen: Vec::new() };
    ck.walk(0, 0, q, &mut rep, &present);
    rep.pass()
}

fn extend(seq: &mut Vec<u32>, q: usize, p: u32, d0: usize) -> bool {
    if seq.len() == 2 * q {
        return true;
    }
    for x in 0..(1u32 << d0) {
        seq.push(x);
        if prefix_ok(seq, q, p, d0) && extend(seq, q, p, d0) {
            return true;
        }
        seq.pop();
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BernoulliOutcome {
    pub prob: Rational,
    pub bound: Rational,
    pub pass: bool,
}

pub const BERNOULLI_MAX_K: usize = 20;

/// Exact Pr(X >= μ + cσ) for X = Σ a_i Y_i, Y_i ~ Bernoulli(1/2), against (1-c)²/4.
pub fn bernoulli_tail(weights: &[Rational], c: &Rational) -> Result<BernoulliOutcome> {
    let k = weights.len();
    if k == 0 {
        return Err(Error::InvalidArgument("need at least one weight".into()));
    }
    if k > BERNOULLI_MAX_K {
        return Err(Error::SearchSpaceTooLarge { needed: format!("2^{k}"), cap: 1 << BERNOULLI_MAX_K });
    }
    if weights.iter().any(|a| a.is_negative()) {
        return Err(Error::InvalidArgument("weights must be non-negative".into()));
    }
    if c.is_negative() || *c > Rational::one() {
        return Err(Error::InvalidArgument("c must lie in [0, 1]".into()));
    }
    // clear denominators: a_i = A_i / D
    let den = weights.iter().fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
    let ints: Vec<BigInt> = weights.iter().map(|a| (a * Rational::from_integer(den.clone())).to_integer()).collect();
    let total: BigInt = ints.iter().sum();
    let sq: BigInt = ints.iter().map(|a| a * a).sum();
    // X - μ = (2S - T)/(2D), Var = ΣA²/(4D²); compare (2S-T)² c_d² >= c_n² ΣA²
    let rhs = c.numer() * c.numer() * &sq;
    let cd2 = c.denom() * c.denom();
    let mut hits: u64 = 0;
    for mask in 0u64..(1 << k) {
        let mut s = BigInt::zero();
        for (i, a) in ints.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s += a;
            }
        }
        let diff: BigInt = 2 * s - &total;
        if !diff.is_negative() && &diff * &diff * &cd2 >= rhs {
            hits += 1;
        }
    }
    let prob = Rational::new(BigInt::from(hits), BigInt::from(1u64 << k));
    let one_minus = Rational::one() - c;
    let bound = &one_minus * &one_minus / Rational::from_integer(BigInt::from(4));
    Ok(BernoulliOutcome { pass: prob >= bound, prob, bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::rat_int;

    fn ones(k: usize) -> Vec<Rational> {
        vec![rat_int(1); k]
    }

    #[test]
    fn bernoulli_examples() {
        let o = bernoulli_tail(&ones(2), &rat_int(0)).unwrap();
        assert_eq!(o.prob, rat(3, 4));
        assert!(o.pass);
        let o = bernoulli_tail(&ones(1), &rat_int(1)).unwrap();
        assert_eq!(o.bound, rat_int(0));
        assert!(o.pass);
        let o = bernoulli_tail(&ones(12), &rat(1, 2)).unwrap();
        assert!(o.prob >= rat(1, 16));
        assert!(bernoulli_tail(&ones(21), &rat_int(0)).is_err());
        assert!(bernoulli_tail(&ones(2), &rat(3, 2)).is_err());
    }

    #[test]
    fn bernoulli_matches_binomial_tail() {
        // oracle: binomial counts and floating σ, away from ties
        for k in 1..=12u32 {
            for ci in 0..=10 {
                let c = rat(ci, 10);
                let o = bernoulli_tail(&ones(k as usize), &c).unwrap();
                let mu = k as f64 / 2.0;
                let sigma = (k as f64).sqrt() / 2.0;
                let thr = mu + ci as f64 / 10.0 * sigma;
                let mut binom = vec![1u64];
                for _ in 0..k {
                    let mut next = vec![1u64; binom.len() + 1];
                    for i in 1..binom.len() {
                        next[i] = binom[i - 1] + binom[i];
                    }
                    binom = next;
                }
                let hits: u64 = (0..=k).filter(|&x| x as f64 >= thr - 1e-12).map(|x| binom[x as usize]).sum();
                assert_eq!(o.prob, rat(hits as i64, 1 << k), "k={k} c={ci}/10");
                assert!(o.pass);
            }
        }
    }

    #[test]
    fn default_dimension() {
        assert_eq!(default_d0(2, 2), 200);
        assert_eq!(default_d0(3, 4), 634);
        assert_eq!(default_d0(4, 3), 600);
    }

    #[test]
    fn brute_force_small_cases() {
        assert_eq!(brute_force_mvs(2, 2, 1).unwrap(), None);
        let found = brute_force_mvs(2, 2, 6).unwrap();
        assert_eq!(found, brute_force_mvs(2, 2, 6).unwrap());
        if let Some(s) = found {
            assert!(verify_mvs(&s).pass());
        }
        assert!(matches!(brute_force_mvs(3, 2, 5), Err(Error::SearchSpaceTooLarge { .. })));
    }

    #[test]
    fn brute_force_is_lexicographically_first() {
        // oracle: plain lexicographic scan of all sequences, no pruning
        for (q, p, d0) in [(2usize, 2u32, 3usize), (2, 2, 4), (2, 1, 3)] {
            let mut expected = None;
            let total = 1u64 << (2 * q * d0);
            for code in 0..total {
                let vecs: Vec<Vec<u8>> = (0..2 * q)
                    .map(|v| {
                        let x = (code >> ((2 * q - 1 - v) * d0)) as u32 & ((1 << d0) - 1);
                        bits_to_vec(x, d0)
                    })
                    .collect();
                let s = ModifiedVectorSystem::new(q, p, d0, vecs).unwrap();
                if verify_mvs(&s).pass() {
                    expected = Some(s);
                    break;
                }
            }
            assert_eq!(brute_force_mvs(q, p, d0).unwrap(), expected, "q={q} p={p} d0={d0}");
        }
    }

    #[test]
    fn search_is_deterministic_and_verified() {
        let a = search_mvs(3, 4, Some(24), 1, 100).unwrap();
        let b = search_mvs(3, 4, Some(24), 1, 100).unwrap();
        assert_eq!(a, b);
        let s = &a.system;
        assert!(verify_mvs(s).pass());
        for c in 0..3 {
            assert!(s.vector(0, c).iter().zip(s.vector(1, c)).all(|(x, y)| x + y == 1));
        }
    }

    #[test]
    fn planted_defects() {
        let s = search_mvs(3, 2, Some(16), 5, 100).unwrap().system;
        let mut vecs = s.vectors().to_vec();
        vecs[2] = vecs[0].clone();
        let bad = ModifiedVectorSystem::new(3, 2, 16, vecs).unwrap();
        let rep = verify_mvs(&bad);
        assert!(!rep.pass());
        assert!(rep.violations.iter().any(|v| v.witness.contains('=')));
        let mut vecs = s.vectors().to_vec();
        vecs[1] = vecs[0].iter().map(|_| 1).collect();
        let rep = verify_mvs(&ModifiedVectorSystem::new(3, 2, 16, vecs).unwrap());
        assert!(rep.violations.iter().any(|v| v.witness.contains("‖")));
    }

    #[test]
    fn multiset_count_matches_walk() {
        let s = search_mvs(3, 3, Some(16), 2, 100).unwrap().system;
        let rep = verify_mvs(&s);
        assert_eq!(rep.checked as u128, valid_multiset_count(3, 3));
        assert!(rep.exhaustive);
    }

    #[test]
    fn permutations_preserve_validity() {
        let s = search_mvs(3, 4, Some(24), 3, 100).unwrap().system;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let mut perm: Vec<usize> = (0..24).collect();
            for i in (1..24).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            assert!(verify_mvs(&s.permuted(&perm)).pass());
        }
    }

    #[test]
    fn sampled_verification() {
        let s = search_mvs(3, 4, Some(24), 1, 100).unwrap().system;
        let a = verify_mvs_with(&s, 10, 2000, 4);
        assert!(!a.exhaustive);
        assert_eq!(a, verify_mvs_with(&s, 10, 2000, 4));
        assert!(a.pass());
    }
}
