use crate::error::{Error, Result};

/// Finite field of prime order or of order 2^m (m <= 16).
///
/// Elements are `0..order`; for GF(2^m) an element is the bitmask of its
/// polynomial coefficients. The integer order is the canonical element order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    order: u32,
    kind: Kind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Prime,
    Binary { m: u32, modulus: u32 },
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn poly_degree(a: u32) -> i32 {
    31 - a.leading_zeros() as i32
}

fn poly_mod(mut a: u32, b: u32) -> u32 {
    let db = poly_degree(b);
    while a != 0 && poly_degree(a) >= db {
        a ^= b << (poly_degree(a) - db);
    }
    a
}

fn is_irreducible(f: u32) -> bool {
    let deg = poly_degree(f);
    for g in 2u32..(1 << (deg / 2 + 1)) {
        if poly_degree(g) >= 1 && poly_degree(g) <= deg / 2 && poly_mod(f, g) == 0 {
            return false;
        }
    }
    true
}

/// Least irreducible polynomial of degree m over GF(2), as a bitmask.
fn least_irreducible(m: u32) -> u32 {
    ((1u32 << m)..(1u32 << (m + 1)))
        .find(|&f| is_irreducible(f))
        .expect("irreducible polynomials exist in every degree")
}

impl FiniteField {
    pub fn new(r: u64) -> Result<Self> {
        if !(2..=1 << 16).contains(&r) {
            return Err(Error::UnsupportedOrder(r));
        }
        if is_prime(r) {
            return Ok(FiniteField { order: r as u32, kind: Kind::Prime });
        }
        if r.is_power_of_two() {
            let m = r.trailing_zeros();
            return Ok(FiniteField {
                order: r as u32,
                kind: Kind::Binary { m, modulus: least_irreducible(m) },
            });
        }
        Err(Error::UnsupportedOrder(r))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_prime_order(&self) -> bool {
        matches!(self.kind, Kind::Prime)
    }

    /// Modulus description: the prime, or the reduction polynomial bitmask.
    pub fn modulus(&self) -> u32 {
        match self.kind {
            Kind::Prime => self.order,
            Kind::Binary { modulus, .. } => modulus,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match self.kind {
            Kind::Prime => ((a as u64 + b as u64) % self.order as u64) as u32,
            Kind::Binary { .. } => a ^ b,
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        match self.kind {
            Kind::Prime => (self.order - a) % self.order,
            Kind::Binary { .. } => a,
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match self.kind {
            Kind::Prime => ((a as u64 * b as u64) % self.order as u64) as u32,
            Kind::Binary { m, modulus } => {
                let mut acc: u32 = 0;
                let mut a = a;
                let mut b = b;
                while b != 0 {
                    if b & 1 == 1 {
                        acc ^= a;
                    }
                    b >>= 1;
                    a <<= 1;
                    if a & (1 << m) != 0 {
                        a ^= modulus;
                    }
                }
                acc
            }
        }
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.order as u64 - 2))
        }
    }

    /// Rank of a set of vectors over the field (Gaussian elimination).
    pub fn rank(&self, rows: &[Vec<u32>]) -> usize {
        let mut m: Vec<Vec<u32>> = rows.to_vec();
        let ncols = m.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for col in 0..ncols {
            let Some(pivot) = (rank..m.len()).find(|&i| m[i][col] != 0) else {
                continue;
            };
            m.swap(rank, pivot);
            let inv = self.inv(m[rank][col]).unwrap();
            for j in 0..ncols {
                m[rank][j] = self.mul(m[rank][j], inv);
            }
            for i in 0..m.len() {
                if i != rank && m[i][col] != 0 {
                    let f = m[i][col];
                    for j in 0..ncols {
                        let t = self.mul(f, m[rank][j]);
                        m[i][j] = self.sub(m[i][j], t);
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(f: &FiniteField) {
        let n = f.order();
        for a in 0..n {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in 0..n {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert!(f.mul(a, b) < n);
                for c in 0..n {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn axioms_hold_up_to_16() {
        for r in [2u64, 3, 4, 5, 7, 8, 11, 13, 16] {
            check_axioms(&FiniteField::new(r).unwrap());
        }
    }

    #[test]
    fn small_fields() {
        let f2 = FiniteField::new(2).unwrap();
        assert_eq!(f2.add(1, 1), 0);
        let f3 = FiniteField::new(3).unwrap();
        assert_eq!(f3.inv(2), Some(2));
        let f4 = FiniteField::new(4).unwrap();
        assert_eq!(f4.modulus(), 0b111);
        assert!(!f4.is_prime_order());
    }

    #[test]
    fn least_irreducible_by_brute_force() {
        // independent check: no product of two nonconstant polynomials equals f,
        // and every smaller monic candidate of the same degree factors
        fn clmul(a: u32, b: u32) -> u32 {
            let mut acc = 0;
            for i in 0..16 {
                if b >> i & 1 == 1 {
                    acc ^= a << i;
                }
            }
            acc
        }
        for m in 1..=8u32 {
            let f = least_irreducible(m);
            for g in 2u32..(1 << m) {
                for h in 2u32..(1 << m) {
                    assert_ne!(clmul(g, h), f, "m={m}");
                }
            }
            for smaller in (1u32 << m)..f {
                let reducible = (2u32..(1 << m)).any(|g| (2u32..(1 << m)).any(|h| clmul(g, h) == smaller));
                assert!(reducible, "m={m} smaller={smaller:b}");
            }
        }
        assert_eq!(least_irreducible(8), 0x11b);
    }

    #[test]
    fn rejects_bad_orders() {
        for r in [0u64, 1, 6, 9, 12, 15, 1 << 17] {
            assert_eq!(FiniteField::new(r), Err(Error::UnsupportedOrder(r)));
        }
        assert!(FiniteField::new(1 << 16).is_ok());
        assert!(FiniteField::new(65521).is_ok());
    }

    #[test]
    fn rank_over_gf2() {
        let f = FiniteField::new(2).unwrap();
        let dep = vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]];
        assert_eq!(f.rank(&dep), 2);
        let ind = vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 1]];
        assert_eq!(f.rank(&ind), 3);
    }
}
