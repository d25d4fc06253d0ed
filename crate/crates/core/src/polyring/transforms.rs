use num_traits::{One, Zero};

use super::Poly;
use crate::error::{Error, Result};
use crate::exactnum::{factorial, rat_int, rat_pow, BigInt, Rational};

/// C(n + j, d + 1) as a polynomial in n.
pub fn binomial_basis_poly(j: usize, d: usize) -> Poly {
    let mut acc = Poly::one();
    for i in 0..=d {
        let shift = j as i64 - i as i64;
        acc = &acc * &Poly::from_ints([shift, 1]);
    }
    acc.scale(&Rational::new(BigInt::one(), factorial(d as u64 + 1)))
}

/// Coefficients `a(0..=d+1)` with `S(n) = sum_j a(j) C(n+j, d+1)`.
///
/// At `n = t` only the basis elements with `j >= d+1-t` are nonzero, so the
/// values `S(0), S(1), ..., S(d+1)` determine the coefficients from the top down.
pub fn binomial_basis_expand(s: &Poly, d: usize) -> Result<Vec<Rational>> {
    if s.degree().is_some_and(|deg| deg > d + 1) {
        return Err(Error::domain(format!(
            "degree {:?} exceeds d+1 = {}",
            s.degree(),
            d + 1
        )));
    }
    let top = d + 1;
    let mut a = vec![Rational::zero(); d + 2];
    for t in 0..=top {
        let mut rest = s.eval(&rat_int(t as i64));
        let j_min = top - t;
        for (j, aj) in a.iter().enumerate().skip(j_min + 1) {
            rest -= aj * rat_int(crate::exactnum::binomial((t + j) as u64, top as u64)?);
        }
        // C(t + j_min, d+1) = C(d+1, d+1) = 1
        a[j_min] = rest;
    }
    Ok(a)
}

/// Numerator `T` of `sum_n (m n + 1) S(n) y^n = T(y) / (1 - y)^(deg S + 2)`.
pub fn gf_numerator(s: &Poly, m: i64) -> Result<Poly> {
    let d = s
        .degree()
        .ok_or_else(|| Error::domain("generating function of the zero polynomial"))?;
    gf_numerator_padded(s, m, d)
}

/// As [`gf_numerator`] but over the denominator `(1 - y)^(d + 2)` for any
/// `d >= deg S`; the zero polynomial maps to zero.
pub fn gf_numerator_padded(s: &Poly, m: i64, d: usize) -> Result<Poly> {
    let weighted = s * &Poly::from_ints([1, m]);
    let a = binomial_basis_expand(&weighted, d)?;
    // sum_n C(n+j, d+1) y^n = y^(d+1-j) / (1-y)^(d+2)
    let mut t = vec![Rational::zero(); d + 2];
    for (j, aj) in a.into_iter().enumerate() {
        t[d + 1 - j] = aj;
    }
    Ok(Poly::new(t))
}

/// `(-a)^(d+2) * T(w / a)`: the numerator over `(w - a)^(d+2)` once `y = w / a`.
pub fn substitute_numerator(t: &Poly, a: &BigInt, d: usize, w: &Poly) -> Result<Poly> {
    if a.is_zero() {
        return Err(Error::domain("a must be nonzero"));
    }
    let a = rat_int(a.clone());
    let scaled: Vec<Rational> = t
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| c * rat_pow(&a, -(j as i64)))
        .collect();
    let composed = Poly::new(scaled).compose(w);
    Ok(composed.scale(&rat_pow(&-a, d as i64 + 2)))
}

/// Integrand numerator `P(x)` of the beta-integral representation, i.e.
/// `T(y)/(1-y)^(d+2) = P(x)/(x^p (1-x)^(m-p) - a)^(d+2)` under
/// `y = x^p (1-x)^(m-p) / a`.
pub fn integrand_numerator(t: &Poly, m: i64, p: i64, a: &BigInt, d: usize) -> Result<Poly> {
    if !(0 < p && p < m) {
        return Err(Error::domain(format!("need 0 < p < m, got m={m}, p={p}")));
    }
    let w = &Poly::var().pow(p as u32) * &Poly::from_ints([1, -1]).pow((m - p) as u32);
    substitute_numerator(t, a, d, &w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c.iter().copied())
    }

    #[test]
    fn basis_element_expands_to_unit_vector() {
        let d = 3;
        let s = binomial_basis_poly(0, d);
        assert_eq!(
            binomial_basis_expand(&s, d).unwrap(),
            vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1)]
        );
    }

    #[test]
    fn constant_one_in_degree_zero_basis() {
        // 1 = -1 * n + 1 * (n + 1)
        assert_eq!(
            binomial_basis_expand(&p(&[1]), 0).unwrap(),
            vec![rat(-1, 1), rat(1, 1)]
        );
    }

    #[test]
    fn expand_rejects_high_degree() {
        assert!(binomial_basis_expand(&p(&[0, 0, 0, 1]), 1).is_err());
    }

    #[test]
    fn gosper_generating_function() {
        let t = gf_numerator(&p(&[-6, 50]), 3).unwrap();
        assert_eq!(t, p(&[-3, 97, 56]).scale(&rat(2, 1)));
    }

    #[test]
    fn padding_multiplies_by_powers_of_one_minus_y() {
        let s = p(&[-6, 50]);
        let t = gf_numerator(&s, 3).unwrap();
        let padded = gf_numerator_padded(&s, 3, 3).unwrap();
        assert_eq!(padded, &t * &p(&[1, -1]).pow(2));
        assert!(gf_numerator_padded(&Poly::zero(), 3, 2).unwrap().is_zero());
    }

    #[test]
    fn constant_series_with_zero_multiplier() {
        // sum y^n = 1/(1-y) = (1-y)/(1-y)^2
        assert_eq!(gf_numerator(&p(&[1]), 0).unwrap(), p(&[1, -1]));
    }

    #[test]
    fn gosper_integrand_matches_mirrored_closed_form() {
        let t = p(&[-3, 97, 56]).scale(&rat(2, 1));
        // x^2 (1-x) orientation: P = -8 (28x^6 - 56x^5 + 28x^4 - 97x^3 + 97x^2 - 6)
        let direct = integrand_numerator(&t, 3, 2, &int(2), 1).unwrap();
        let published = p(&[-6, 0, 97, -97, 28, -56, 28]).scale(&rat(-8, 1));
        assert_eq!(direct, published);
        // x (1-x)^2 orientation is the mirror image x -> 1 - x
        let mirrored = integrand_numerator(&t, 3, 1, &int(2), 1).unwrap();
        assert_eq!(mirrored, published.compose(&p(&[1, -1])));
    }

    #[test]
    fn zero_numerator_stays_zero() {
        assert!(integrand_numerator(&Poly::zero(), 8, 4, &int(-4), 4)
            .unwrap()
            .is_zero());
        assert!(integrand_numerator(&p(&[1]), 3, 3, &int(2), 0).is_err());
    }

    fn int_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec(-30i64..30, 1..=max_deg + 1)
            .prop_map(Poly::from_ints)
            .prop_filter("nonzero", |s| !s.is_zero())
    }

    // Taylor coefficients of T(y)/(1-y)^e: convolve with C(n+e-1, e-1).
    fn series_coeffs(t: &Poly, e: usize, count: usize) -> Vec<Rational> {
        (0..count)
            .map(|n| {
                (0..=n)
                    .map(|j| {
                        t.coeff(j)
                            * rat_int(
                                crate::exactnum::binomial((n - j + e - 1) as u64, (e - 1) as u64)
                                    .unwrap(),
                            )
                    })
                    .fold(Rational::zero(), |a, b| a + b)
            })
            .collect()
    }

    proptest! {
        #[test]
        fn expansion_round_trips(s in int_poly(6), extra in 0usize..3) {
            let d = s.degree().unwrap_or(0) + extra;
            let a = binomial_basis_expand(&s, d).unwrap();
            let rebuilt = a.iter().enumerate().fold(Poly::zero(), |acc, (j, aj)| {
                &acc + &binomial_basis_poly(j, d).scale(aj)
            });
            prop_assert_eq!(rebuilt, s);
        }

        #[test]
        fn gf_numerator_matches_direct_series(s in int_poly(6), m in 0i64..=10) {
            let d = s.degree().unwrap();
            let t = gf_numerator(&s, m).unwrap();
            prop_assert!(t.degree().is_none_or(|dt| dt <= d + 1));
            let got = series_coeffs(&t, d + 2, 26);
            for (n, c) in got.iter().enumerate() {
                let n_r = rat_int(n as i64);
                let want = (&n_r * rat_int(m) + Rational::one()) * s.eval(&n_r);
                prop_assert_eq!(c, &want);
            }
        }

        #[test]
        fn integrand_identity_at_rational_points(
            t in int_poly(4), m in 3i64..9, p_frac in 1i64..8, a in -5i64..=5, xs in prop::collection::vec((1i64..40, 1i64..40), 5)
        ) {
            prop_assume!(a != 0);
            let p_exp = 1 + p_frac % (m - 1);
            let d = t.degree().unwrap().saturating_sub(1);
            let big_p = integrand_numerator(&t, m, p_exp, &int(a), d).unwrap();
            prop_assert!(big_p.degree().is_none_or(|dp| dp <= (m as usize) * (d + 1)));
            for (xn, xd) in xs {
                let x = rat(xn, xd + xn);
                let w = num_traits::pow(x.clone(), p_exp as usize)
                    * num_traits::pow(Rational::one() - &x, (m - p_exp) as usize);
                let aq = rat_int(a);
                prop_assume!(w != aq);
                let y = &w / &aq;
                let lhs = t.eval(&y) / num_traits::pow(Rational::one() - &y, d + 2);
                let rhs = big_p.eval(&x) / num_traits::pow(&w - &aq, d + 2);
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
