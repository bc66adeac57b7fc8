use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};

pub const DEFAULT_DIM_CAP: u64 = 10_000_000;

/// A vector living in a scaled product space: ⟨u, v⟩ = alpha · Σ u(j) v(j).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledVector {
    alpha: Rational,
    coords: Vec<Rational>,
}

impl ScaledVector {
    pub fn new(alpha: Rational, coords: Vec<Rational>) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(Error::InvalidArgument("alpha must be positive".into()));
        }
        if coords.is_empty() {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        Ok(ScaledVector { alpha, coords })
    }

    /// Unscaled vector (alpha = 1).
    pub fn plain(coords: Vec<Rational>) -> Result<Self> {
        Self::new(Rational::one(), coords)
    }

    pub fn zeros(alpha: Rational, dim: usize) -> Result<Self> {
        Self::new(alpha, vec![Rational::zero(); dim])
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn add(&self, other: &ScaledVector) -> Result<ScaledVector> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        if self.alpha != other.alpha {
            return Err(Error::AlphaMismatch);
        }
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(ScaledVector { alpha: self.alpha.clone(), coords })
    }
}

/// alpha · Σ_j Π_i v_i(j).
pub fn multilinear_product(vs: &[&ScaledVector]) -> Result<Rational> {
    let first = vs.first().ok_or_else(|| Error::InvalidArgument("empty product".into()))?;
    for v in &vs[1..] {
        if v.dim() != first.dim() {
            return Err(Error::DimensionMismatch(first.dim(), v.dim()));
        }
        if v.alpha != first.alpha {
            return Err(Error::AlphaMismatch);
        }
    }
    let mut total = Rational::zero();
    for j in 0..first.dim() {
        let mut prod = first.coords[j].clone();
        for v in &vs[1..] {
            if prod.is_zero() {
                break;
            }
            prod *= &v.coords[j];
        }
        total += prod;
    }
    Ok(total * &first.alpha)
}

/// ‖v‖_p^p in the scaled space.
pub fn lp_norm_pow(v: &ScaledVector, p: u32) -> Rational {
    let mut total = Rational::zero();
    for x in &v.coords {
        if !x.is_zero() {
            total += super::rat_pow(&x.abs(), p);
        }
    }
    total * &v.alpha
}

/// Max coordinate of an unscaled vector.
pub fn linf_norm(v: &ScaledVector) -> Result<Rational> {
    if !v.alpha.is_one() {
        return Err(Error::ScaledSpace(super::fmt_rational(&v.alpha)));
    }
    Ok(v.coords.iter().map(|x| x.abs()).max().expect("dimension > 0"))
}

/// u ⊗ v, row-major (u index outer).
pub fn tensor(u: &ScaledVector, v: &ScaledVector, cap: u64) -> Result<ScaledVector> {
    let needed = u.dim() as u128 * v.dim() as u128;
    if needed > cap as u128 {
        return Err(Error::DimensionCap { needed: needed.to_string(), cap });
    }
    let mut coords = Vec::with_capacity(needed as usize);
    for a in &u.coords {
        for b in &v.coords {
            coords.push(a * b);
        }
    }
    Ok(ScaledVector { alpha: &u.alpha * &v.alpha, coords })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{rat, rat_int};
    use proptest::prelude::*;

    fn sv(alpha: Rational, xs: &[i64]) -> ScaledVector {
        ScaledVector::new(alpha, xs.iter().map(|&x| rat_int(x)).collect()).unwrap()
    }

    #[test]
    fn basics() {
        let e1 = sv(rat_int(1), &[1, 0]);
        let e2 = sv(rat_int(1), &[0, 1]);
        assert_eq!(multilinear_product(&[&e1, &e1]).unwrap(), rat_int(1));
        let t = tensor(&e1, &e2, DEFAULT_DIM_CAP).unwrap();
        assert_eq!(t.coords()[1], rat_int(1));
        assert_eq!(t.coords().iter().filter(|x| x.is_zero()).count(), 3);
        let ones = sv(rat(1, 2), &[1, 1]);
        assert_eq!(multilinear_product(&[&ones, &ones]).unwrap(), rat_int(1));
        assert_eq!(lp_norm_pow(&sv(rat(1, 4), &[1, 1, 1, 1]), 3), rat_int(1));
        assert_eq!(lp_norm_pow(&sv(rat_int(1), &[0, 0]), 5), rat_int(0));
        assert_eq!(linf_norm(&sv(rat_int(1), &[3, 1, 2])).unwrap(), rat_int(3));
        assert!(matches!(linf_norm(&ones), Err(Error::ScaledSpace(_))));
    }

    #[test]
    fn mismatches_and_caps() {
        let a = sv(rat_int(1), &[1, 0]);
        let b = sv(rat_int(1), &[1, 0, 0]);
        let c = sv(rat(1, 2), &[1, 0]);
        assert_eq!(multilinear_product(&[&a, &b]), Err(Error::DimensionMismatch(2, 3)));
        assert_eq!(multilinear_product(&[&a, &c]), Err(Error::AlphaMismatch));
        assert!(matches!(tensor(&b, &b, 8), Err(Error::DimensionCap { .. })));
        assert!(ScaledVector::new(rat_int(0), vec![rat_int(1)]).is_err());
        assert!(ScaledVector::new(rat_int(1), vec![]).is_err());
    }

    fn small_vec(dim: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
        prop::collection::vec((-6i64..7, 1i64..5), dim)
    }

    fn to_sv(alpha: (i64, i64), xs: &[(i64, i64)]) -> ScaledVector {
        ScaledVector::new(rat(alpha.0, alpha.1), xs.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
    }

    proptest! {
        #[test]
        fn tensor_norm_multiplies(a in small_vec(3), b in small_vec(4), aa in 1i64..4, ab in 1i64..4, p in 1u32..5) {
            let u = to_sv((1, aa), &a);
            let v = to_sv((1, ab), &b);
            let t = tensor(&u, &v, DEFAULT_DIM_CAP).unwrap();
            // direct expansion of the tensor's norm
            let mut direct = Rational::zero();
            for x in u.coords() {
                for y in v.coords() {
                    direct += crate::math::rat_pow(&(x * y).abs(), p);
                }
            }
            direct *= u.alpha() * v.alpha();
            prop_assert_eq!(lp_norm_pow(&t, p), direct.clone());
            prop_assert_eq!(direct, lp_norm_pow(&u, p) * lp_norm_pow(&v, p));
        }

        #[test]
        fn product_of_tensors_factors(xs in prop::collection::vec(small_vec(2), 3), ys in prop::collection::vec(small_vec(3), 3)) {
            let us: Vec<_> = xs.iter().map(|x| to_sv((1, 2), x)).collect();
            let vs: Vec<_> = ys.iter().map(|y| to_sv((1, 3), y)).collect();
            let ts: Vec<_> = us.iter().zip(&vs).map(|(u, v)| tensor(u, v, DEFAULT_DIM_CAP).unwrap()).collect();
            let lhs = multilinear_product(&ts.iter().collect::<Vec<_>>()).unwrap();
            let rhs = multilinear_product(&us.iter().collect::<Vec<_>>()).unwrap()
                * multilinear_product(&vs.iter().collect::<Vec<_>>()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn equal_arguments_give_norm(x in small_vec(5), p in 1u32..5) {
            let v = to_sv((2, 3), &x);
            let args: Vec<&ScaledVector> = (0..p).map(|_| &v).collect();
            if p % 2 == 0 || x.iter().all(|&(n, _)| n >= 0) {
                prop_assert_eq!(multilinear_product(&args).unwrap(), lp_norm_pow(&v, p));
            }
        }
    }
}
