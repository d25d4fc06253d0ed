use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactnum::{rat_int, BigInt, Rational};

/// The one linear relation satisfied by the coefficients `c_0..c_{4k+1}` of a
/// generating-function numerator `T(y)` that comes from a degree-`4k` summand.
///
/// `multiplier` is the `mu` of the weight `(mu n + 1)`; the relation reads
/// `sum_l y_l c_l = 0` with
/// `y_l = (-1)^l prod_{i=1}^{4k+1-l} (mu i - 1) prod_{i=1}^{l-1} (mu i + 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintVector {
    pub k: u32,
    pub multiplier: i64,
    pub coeffs: Vec<BigInt>,
}

impl ConstraintVector {
    pub fn new(k: u32, multiplier: i64) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("k must be at least 1"));
        }
        let top = 4 * k as i64 + 1;
        let coeffs = (0..=top)
            .map(|l| {
                let minus: BigInt = (1..=top - l)
                    .map(|i| BigInt::from(multiplier * i - 1))
                    .product();
                let plus: BigInt = (1..l).map(|i| BigInt::from(multiplier * i + 1)).product();
                let v = minus * plus;
                if l % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .collect();
        Ok(ConstraintVector {
            k,
            multiplier,
            coeffs,
        })
    }

    /// Multiplier `4k`: the row-0 vector of the block matrix M whose determinant
    /// reduction (miracle zeros, Laplace steps, M^X specialization) is studied.
    pub fn determinant_chain(k: u32) -> Result<Self> {
        Self::new(k, 4 * k as i64)
    }

    /// Multiplier `8k`: the relation actually satisfied by the series over
    /// `C(8kn, 4kn)`, whose beta integral carries the weight `8kn + 1`.
    pub fn series(k: u32) -> Result<Self> {
        Self::new(k, 8 * k as i64)
    }

    /// Number of `c` coefficients, `4k + 2`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

fn check_len(what: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::domain(format!(
            "{what}: expected {want} entries, got {got}"
        )));
    }
    Ok(())
}

/// Left-hand side `sum_l y_l c_l`.
pub fn ck1_eval(cv: &ConstraintVector, c: &[Rational]) -> Result<Rational> {
    check_len("ck1_eval", c.len(), cv.len())?;
    Ok(cv
        .coeffs
        .iter()
        .zip(c)
        .fold(Rational::zero(), |acc, (y, cj)| {
            acc + cj * rat_int(y.clone())
        }))
}

/// Maps binomial-basis coefficients `s_0..s_{4k}` (with `S(n) = sum_j s_j C(n+j, 4k)`)
/// to the numerator coefficients
/// `c_j = (mu j + 1) s_{4k-j} + (mu (4k-j+2) - 1) s_{4k-j+1}`, out-of-range `s` read as 0.
pub fn s_to_c(cv: &ConstraintVector, s: &[Rational]) -> Result<Vec<Rational>> {
    let four_k = 4 * cv.k as i64;
    check_len("s_to_c", s.len(), four_k as usize + 1)?;
    let mu = cv.multiplier;
    let get = |idx: i64| -> Rational {
        if (0..=four_k).contains(&idx) {
            s[idx as usize].clone()
        } else {
            Rational::zero()
        }
    };
    Ok((0..=four_k + 1)
        .map(|j| {
            rat_int(mu * j + 1) * get(four_k - j)
                + rat_int(mu * (four_k - j + 2) - 1) * get(four_k - j + 1)
        })
        .collect())
}

/// Inverse of [`s_to_c`] on the constraint hyperplane; `c_0` is checked against
/// the recovered `s_{4k}` and a mismatch reported as a domain error.
pub fn c_to_s(cv: &ConstraintVector, c: &[Rational]) -> Result<Vec<Rational>> {
    let four_k = 4 * cv.k as i64;
    check_len("c_to_s", c.len(), cv.len())?;
    let mu = cv.multiplier;
    let mut s: Vec<Rational> = Vec::with_capacity(four_k as usize + 1);
    for t in 0..=four_k {
        let i = four_k + 1 - t;
        let prev = if t == 0 {
            Rational::zero()
        } else {
            s[t as usize - 1].clone()
        };
        let num = &c[i as usize] - rat_int(mu * i + 1) * prev;
        s.push(num / rat_int(mu * (t + 1) - 1));
    }
    if c[0] != s[four_k as usize] {
        return Err(Error::domain(
            "coefficients violate the numerator constraint",
        ));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::polyring::{binomial_basis_poly, gf_numerator, Poly};
    use num_traits::One;
    use proptest::prelude::*;

    #[test]
    fn leading_entry_is_product() {
        let cv = ConstraintVector::determinant_chain(1).unwrap();
        assert_eq!(cv.len(), 6);
        assert_eq!(cv.coeffs[0], BigInt::from(3 * 7 * 11 * 15 * 19));
        let mut e0 = vec![Rational::zero(); 6];
        e0[0] = Rational::one();
        assert_eq!(ck1_eval(&cv, &e0).unwrap(), rat(3 * 7 * 11 * 15 * 19, 1));
        assert_eq!(
            ck1_eval(&cv, &vec![Rational::zero(); 6]).unwrap(),
            Rational::zero()
        );
    }

    #[test]
    fn signs_alternate() {
        let cv = ConstraintVector::series(2).unwrap();
        for (l, y) in cv.coeffs.iter().enumerate() {
            assert_eq!(y.sign() == num_bigint::Sign::Minus, l % 2 == 1);
        }
    }

    #[test]
    fn length_errors() {
        let cv = ConstraintVector::series(1).unwrap();
        assert!(ck1_eval(&cv, &[Rational::one()]).is_err());
        assert!(s_to_c(&cv, &[Rational::one()]).is_err());
        assert!(ConstraintVector::new(0, 4).is_err());
    }

    #[test]
    fn unit_vectors_satisfy_constraint() {
        for k in 1..=3 {
            for cv in [
                ConstraintVector::determinant_chain(k).unwrap(),
                ConstraintVector::series(k).unwrap(),
            ] {
                for i in 0..=4 * k as usize {
                    let mut s = vec![Rational::zero(); 4 * k as usize + 1];
                    s[i] = Rational::one();
                    let c = s_to_c(&cv, &s).unwrap();
                    assert!(
                        ck1_eval(&cv, &c).unwrap().is_zero(),
                        "k={k} mu={} i={i}",
                        cv.multiplier
                    );
                }
            }
        }
    }

    fn rat_vec(n: usize) -> impl Strategy<Value = Vec<Rational>> {
        prop::collection::vec((-50i64..50, 1i64..20), n)
            .prop_map(|v| v.into_iter().map(|(a, b)| rat(a, b)).collect())
    }

    proptest! {
        #[test]
        fn images_lie_on_hyperplane(s in rat_vec(9), mu in 2i64..20) {
            let cv = ConstraintVector::new(2, mu).unwrap();
            let c = s_to_c(&cv, &s).unwrap();
            prop_assert!(ck1_eval(&cv, &c).unwrap().is_zero());
            prop_assert_eq!(c_to_s(&cv, &c).unwrap(), s);
        }

        #[test]
        fn c_matches_generating_function(s in rat_vec(5), mu in prop::sample::select(vec![4i64, 8])) {
            let k = 1u32;
            let cv = ConstraintVector::new(k, mu).unwrap();
            let summand = s.iter().enumerate().fold(Poly::zero(), |acc, (j, sj)| {
                &acc + &binomial_basis_poly(j, 4 * k as usize - 1).scale(sj)
            });
            prop_assume!(summand.degree() == Some(4));
            let t = gf_numerator(&summand, mu).unwrap();
            let c = s_to_c(&cv, &s).unwrap();
            prop_assert_eq!(t, Poly::new(c));
        }
    }
}
