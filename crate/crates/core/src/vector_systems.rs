//! (r,q,p)-vector systems from affine hyperplanes over a finite field.
//!
//! Vector `v_i^c` is the indicator of the i-th hyperplane of color c, scaled
//! by 1/r. Colors are classes of parallel hyperplanes {z : ⟨a,z⟩ = b}; the
//! direction `a` is normalized so its first nonzero coordinate is 1, colors are
//! ordered lexicographically by that direction, and within a color the
//! hyperplane index is `b` itself.
//!
//! When the ambient space 𝔽_r^{p'} has more dimensions than the product arity
//! p, products are taken in the scaled space with alpha = r^{p-p'} so that the
//! identities of the definition keep their exact values.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::math::{rat, rat_int, rat_pow, FiniteField, Rational, ScaledVector};
use crate::report::{VerificationReport, Violation};

pub const DEFAULT_EXHAUSTIVE_CAP: u64 = 2_000_000;
pub const DEFAULT_SAMPLES: u64 = 100_000;
pub const DEFAULT_SAMPLE_SEED: u64 = 0x5EED;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorSystem {
    r: u32,
    arity: u32,
    embed: u32,
    field: FiniteField,
    directions: Vec<Vec<u32>>,
    color_ids: Vec<usize>,
    /// Bitset rows, vector (i, c) at index c * r + i.
    rows: Vec<Vec<u64>>,
}

/// Number of colors (r^e - 1)/(r - 1) for embedding power e, saturating.
pub fn color_count(r: u64, e: u32) -> u128 {
    let mut total: u128 = 0;
    let mut pw: u128 = 1;
    for _ in 0..e {
        total = total.saturating_add(pw);
        pw = pw.saturating_mul(r as u128);
    }
    total
}

/// Smallest p' >= 2 with (r^{p'} - 1)/(r - 1) >= needed.
pub fn choose_embedding_power(r: u64, needed: u64) -> u32 {
    let mut e = 2;
    while color_count(r, e) < needed as u128 {
        e += 1;
    }
    e
}

/// Smallest p' >= 2 with r^{p'} - 1 >= needed (the other phrasing of the same condition).
pub fn embedding_power_text_form(r: u64, needed: u64) -> u32 {
    let mut e = 2;
    while (r as u128).saturating_pow(e) - 1 < needed as u128 {
        e += 1;
    }
    e
}

fn check_order(r: u64, allow_prime: bool) -> Result<FiniteField> {
    let f = FiniteField::new(r)?;
    if !allow_prime && !r.is_power_of_two() {
        return Err(Error::UnsupportedOrder(r));
    }
    Ok(f)
}

/// All normalized directions of 𝔽_r^e in lexicographic order.
fn normalized_directions(r: u32, e: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut a = vec![0u32; e as usize];
    loop {
        // advance odometer (last coordinate fastest)
        let mut pos = e as usize;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            a[pos] += 1;
            if a[pos] < r {
                break;
            }
            a[pos] = 0;
        }
        if a.iter().find(|&&x| x != 0) == Some(&1) {
            out.push(a.clone());
        }
    }
}

/// Greedy lexicographic choice of `needed` directions in which every `arity`
/// of them are linearly independent.
fn general_position(field: &FiniteField, all: &[Vec<u32>], arity: u32, needed: usize) -> Vec<usize> {
    if arity <= 2 {
        return (0..needed.min(all.len())).collect();
    }
    let k = arity as usize - 1;
    let mut chosen: Vec<usize> = Vec::new();
    for (idx, a) in all.iter().enumerate() {
        if chosen.len() == needed {
            break;
        }
        let ok = if chosen.len() <= k {
            let mut rows: Vec<Vec<u32>> = chosen.iter().map(|&c| all[c].clone()).collect();
            rows.push(a.clone());
            field.rank(&rows) == rows.len()
        } else {
            subsets(chosen.len(), k).all(|s| {
                let mut rows: Vec<Vec<u32>> = s.iter().map(|&j| all[chosen[j]].clone()).collect();
                rows.push(a.clone());
                field.rank(&rows) == k + 1
            })
        };
        if ok {
            chosen.push(idx);
        }
    }
    chosen
}

/// k-subsets of 0..n in lexicographic order.
fn subsets(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let c = cur.as_mut().unwrap();
        let mut i = k;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if c[i] < n - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

impl VectorSystem {
    /// Full system over 𝔽_r^{embed} with product arity `arity` (embed >= arity).
    pub fn build_embedded(r: u64, arity: u32, embed: u32, allow_prime: bool) -> Result<Self> {
        let field = check_order(r, allow_prime)?;
        check_shape(arity, embed)?;
        let dirs = normalized_directions(r as u32, embed);
        let ids: Vec<usize> = (0..dirs.len()).collect();
        Self::materialize(field, arity, embed, &dirs, &ids)
    }

    /// Smallest system serving a reduction with `needed` colors: embedding
    /// power at least the arity and at least `choose_embedding_power`, raised
    /// further until enough colors in general position exist.
    pub fn for_reduction(r: u64, arity: u32, needed: usize, allow_prime: bool) -> Result<Self> {
        let field = check_order(r, allow_prime)?;
        if arity < 2 {
            return Err(Error::InvalidArgument("arity must be at least 2".into()));
        }
        let mut embed = arity.max(choose_embedding_power(r, needed as u64));
        loop {
            let d0 = (r as u128).saturating_pow(embed);
            if d0 > 1 << 24 {
                return Err(Error::SearchSpaceTooLarge { needed: d0.to_string(), cap: 1 << 24 });
            }
            let dirs = normalized_directions(r as u32, embed);
            let ids = general_position(&field, &dirs, arity, needed);
            if ids.len() >= needed {
                return Self::materialize(field, arity, embed, &dirs, &ids);
            }
            embed += 1;
        }
    }

    fn materialize(field: FiniteField, arity: u32, embed: u32, dirs: &[Vec<u32>], ids: &[usize]) -> Result<Self> {
        let r = field.order();
        let d0 = (r as usize).pow(embed);
        let words = d0.div_ceil(64);
        let mut rows = vec![vec![0u64; words]; ids.len() * r as usize];
        let mut z = vec![0u32; embed as usize];
        for idx in 0..d0 {
            for (c, &id) in ids.iter().enumerate() {
                let a = &dirs[id];
                let mut b = 0;
                for t in 0..embed as usize {
                    b = field.add(b, field.mul(a[t], z[t]));
                }
                rows[c * r as usize + b as usize][idx / 64] |= 1 << (idx % 64);
            }
            for t in (0..embed as usize).rev() {
                z[t] += 1;
                if z[t] < r {
                    break;
                }
                z[t] = 0;
            }
        }
        Ok(VectorSystem {
            r,
            arity,
            embed,
            field,
            directions: ids.iter().map(|&i| dirs[i].clone()).collect(),
            color_ids: ids.to_vec(),
            rows,
        })
    }

    /// Reassemble from serialized parts, checking shapes.
    pub fn from_parts(
        r: u64,
        arity: u32,
        embed: u32,
        allow_prime: bool,
        directions: Vec<Vec<u32>>,
        color_ids: Vec<usize>,
        rows: Vec<Vec<bool>>,
    ) -> Result<Self> {
        let field = check_order(r, allow_prime)?;
        check_shape(arity, embed)?;
        let q = directions.len();
        let d0 = (r as usize).pow(embed);
        if color_ids.len() != q || rows.len() != q * r as usize {
            return Err(Error::InvalidArgument("row count does not match r·q".into()));
        }
        if directions.iter().any(|a| a.len() != embed as usize || a.iter().any(|&x| x >= r as u32)) {
            return Err(Error::InvalidArgument("malformed direction".into()));
        }
        let mut packed = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != d0 {
                return Err(Error::DimensionMismatch(d0, row.len()));
            }
            let mut bits = vec![0u64; d0.div_ceil(64)];
            for (z, on) in row.into_iter().enumerate() {
                if on {
                    bits[z / 64] |= 1 << (z % 64);
                }
            }
            packed.push(bits);
        }
        Ok(VectorSystem { r: r as u32, arity, embed, field, directions, color_ids, rows: packed })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Product arity p.
    pub fn arity(&self) -> u32 {
        self.arity
    }

    /// Embedding power p' (ambient space 𝔽_r^{p'}).
    pub fn embed(&self) -> u32 {
        self.embed
    }

    pub fn q(&self) -> usize {
        self.directions.len()
    }

    pub fn d0(&self) -> usize {
        (self.r as usize).pow(self.embed)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn directions(&self) -> &[Vec<u32>] {
        &self.directions
    }

    /// Position of each kept color in the full lexicographic color order.
    pub fn color_ids(&self) -> &[usize] {
        &self.color_ids
    }

    /// Scaling of the product space, r^{p - p'}.
    pub fn scale(&self) -> Rational {
        rat_pow(&rat(1, self.r as i64), self.embed - self.arity)
    }

    fn row_index(&self, i: usize, c: usize) -> usize {
        assert!(i < self.r as usize && c < self.q(), "vector ({i},{c}) out of range");
        c * self.r as usize + i
    }

    pub fn entry(&self, i: usize, c: usize, z: usize) -> bool {
        self.rows[self.row_index(i, c)][z / 64] >> (z % 64) & 1 == 1
    }

    /// Overwrite one entry (numerator 1 or 0); used to plant defects.
    pub fn set_entry(&mut self, i: usize, c: usize, z: usize, on: bool) {
        let idx = self.row_index(i, c);
        if on {
            self.rows[idx][z / 64] |= 1 << (z % 64);
        } else {
            self.rows[idx][z / 64] &= !(1 << (z % 64));
        }
    }

    pub fn row_bits(&self, i: usize, c: usize) -> &[u64] {
        &self.rows[self.row_index(i, c)]
    }

    /// Coordinates in the support of v_i^c, ascending.
    pub fn support(&self, i: usize, c: usize) -> Vec<usize> {
        (0..self.d0()).filter(|&z| self.entry(i, c, z)).collect()
    }

    pub fn vector(&self, i: usize, c: usize) -> ScaledVector {
        let one_over_r = rat(1, self.r as i64);
        let coords = (0..self.d0())
            .map(|z| if self.entry(i, c, z) { one_over_r.clone() } else { rat_int(0) })
            .collect();
        ScaledVector::new(self.scale(), coords).expect("positive scale and dimension")
    }

    /// Keep colors 0..q_target.
    pub fn restrict_colors(&self, q_target: usize) -> Result<Self> {
        if q_target == 0 || q_target > self.q() {
            return Err(Error::InvalidArgument(format!("q_target {q_target} not in 1..={}", self.q())));
        }
        let mut out = self.clone();
        out.directions.truncate(q_target);
        out.color_ids.truncate(q_target);
        out.rows.truncate(q_target * self.r as usize);
        Ok(out)
    }

    /// Exact multilinear product of vectors given as flat indices c * r + i.
    pub fn product_of(&self, flat: &[usize]) -> Rational {
        let words = self.rows[0].len();
        let mut count: u64 = 0;
        for w in 0..words {
            let mut acc = u64::MAX;
            for &v in flat {
                acc &= self.rows[v][w];
            }
            count += acc.count_ones() as u64;
        }
        let r = self.r as i64;
        self.scale() * rat_int(count) * rat_pow(&rat(1, r), flat.len() as u32)
    }
}

fn check_shape(arity: u32, embed: u32) -> Result<()> {
    if arity < 2 {
        return Err(Error::InvalidArgument("arity must be at least 2".into()));
    }
    if embed < arity {
        return Err(Error::Precondition(format!("embedding power {embed} below arity {arity}")));
    }
    Ok(())
}

/// The (r, (r^p-1)/(r-1), p)-system of the hyperplane construction in 𝔽_r^p.
pub fn build_vector_system(r: u64, p: u32) -> Result<VectorSystem> {
    VectorSystem::build_embedded(r, p, p, false)
}

pub fn restrict_colors(s: &VectorSystem, q_target: usize) -> Result<VectorSystem> {
    s.restrict_colors(q_target)
}

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Number of size-k multisets over n items.
pub fn multiset_count(n: u64, k: u64) -> u128 {
    if n == 0 {
        return if k == 0 { 1 } else { 0 };
    }
    binom(n as u128 + k as u128 - 1, k as u128)
}

/// The `rank`-th size-k multiset over 0..n in lexicographic order.
fn unrank_multiset(n: usize, k: usize, mut rank: u128) -> Vec<usize> {
    // multisets m_0 <= m_1 <= ... correspond to combinations m_i + i of n + k - 1
    let big_n = n + k - 1;
    let mut out = Vec::with_capacity(k);
    let mut next = 0usize;
    for i in 0..k {
        let mut x = next;
        loop {
            let rest = binom((big_n - x - 1) as u128, (k - i - 1) as u128);
            if rank < rest {
                break;
            }
            rank -= rest;
            x += 1;
        }
        out.push(x - i);
        next = x + 1;
    }
    out
}

fn next_multiset(m: &mut [usize], n: usize) -> bool {
    let k = m.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if m[i] + 1 < n {
            let v = m[i] + 1;
            for x in &mut m[i..] {
                *x = v;
            }
            return true;
        }
    }
    false
}

/// What the definition prescribes for a multiset of flat indices.
fn expected_product(s: &VectorSystem, flat: &[usize]) -> Rational {
    let r = s.r as usize;
    let mut distinct: Vec<usize> = flat.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    for (a, &u) in distinct.iter().enumerate() {
        for &v in &distinct[a + 1..] {
            if u / r == v / r {
                return rat_int(0);
            }
        }
    }
    rat_pow(&rat(1, s.r as i64), distinct.len() as u32)
}

fn describe(s: &VectorSystem, flat: &[usize]) -> String {
    let r = s.r as usize;
    let parts: Vec<String> = flat.iter().map(|&v| format!("v[{}]^{}", v % r, v / r)).collect();
    parts.join(",")
}

pub fn verify_vector_system(s: &VectorSystem, exhaustive_cap: u64) -> VerificationReport {
    verify_vector_system_with(s, exhaustive_cap, DEFAULT_SAMPLES, DEFAULT_SAMPLE_SEED)
}

/// Check every p-multiset against the definition (or a seeded uniform sample
/// when there are more than `exhaustive_cap` multisets), plus the structural
/// invariants of the construction.
pub fn verify_vector_system_with(s: &VectorSystem, exhaustive_cap: u64, samples: u64, seed: u64) -> VerificationReport {
    let mut rep = VerificationReport::new("vector-system");
    let n = s.q() * s.r as usize;
    let p = s.arity as usize;
    rep.param("r", s.r);
    rep.param("q", s.q());
    rep.param("p", s.arity);
    rep.param("embed", s.embed);
    rep.param("d0", s.d0());

    // structure: per-color partition of the coordinates, r^{p'-1} points each
    let expected_support = s.d0() / s.r as usize;
    for c in 0..s.q() {
        let mut union = vec![0u64; s.rows[0].len()];
        for i in 0..s.r as usize {
            let bits = s.row_bits(i, c);
            let size: u32 = bits.iter().map(|w| w.count_ones()).sum();
            if size as usize != expected_support {
                rep.record(Violation {
                    witness: format!("support of v[{i}]^{c} has {size} points"),
                    expected: Some(rat_int(expected_support as u64)),
                    found: Some(rat_int(size)),
                });
            }
            for (u, b) in union.iter_mut().zip(bits) {
                if *u & b != 0 {
                    rep.record(Violation {
                        witness: format!("color {c} supports overlap at v[{i}]^{c}"),
                        expected: None,
                        found: None,
                    });
                }
                *u |= b;
            }
        }
        let covered: u32 = union.iter().map(|w| w.count_ones()).sum();
        if covered as usize != s.d0() {
            rep.record(Violation {
                witness: format!("color {c} covers {covered} of {} coordinates", s.d0()),
                expected: Some(rat_int(s.d0() as u64)),
                found: Some(rat_int(covered)),
            });
        }
    }

    let total = multiset_count(n as u64, p as u64);
    let check = |flat: &[usize], rep: &mut VerificationReport| {
        let want = expected_product(s, flat);
        let got = s.product_of(flat);
        rep.checked += 1;
        if want != got {
            rep.record(Violation { witness: describe(s, flat), expected: Some(want), found: Some(got) });
        }
    };
    if total <= exhaustive_cap as u128 {
        let mut m = vec![0usize; p];
        loop {
            check(&m, &mut rep);
            if !next_multiset(&mut m, n) {
                break;
            }
        }
    } else {
        rep.exhaustive = false;
        rep.sample_seed = Some(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let rank = rng.gen_range(0..total);
            let m = unrank_multiset(n, p, rank);
            check(&m, &mut rep);
        }
    }
    rep.param("multisets", total);
    rep
}
