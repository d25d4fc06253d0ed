//! Linear systems for the symmetric family m = 8k, p = 4k, a = (-4)^k.
//!
//! With z = x(1-x) the integrand numerator P and an auxiliary polynomial Ř are
//! tied together by a first-order differential equation. Writing Ř and the
//! summand S (or P directly) with unknown coefficients turns that equation into
//! a square linear system, whose unique solution is the series for π.

mod matrix;

pub use matrix::{content, det_structured, rank, solve_exact, MatrixKind, StructuredMatrix};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{common_denominator, factorial, int, rat_int, rat_pow, BigInt, Rational};
use crate::polyring::{gf_numerator_padded, substitute_numerator, ConstraintVector, Poly};

/// Fixed data of the differential equation for one `k`.
#[derive(Debug, Clone)]
pub struct ProverContext {
    pub k: u32,
    /// `N(k) = 4k(4k+1)`, one more than the degree of Ř.
    pub n: usize,
    /// `Q = z^(4k) - (-4)^k`.
    pub q: Poly,
    /// Degree of the summand, `4k`.
    pub d: usize,
    pub a: BigInt,
    forcing: Poly,
    coupling: Poly,
}

impl ProverContext {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("k must be at least 1"));
        }
        let four_k = 4 * k as usize;
        let n = four_k * (four_k + 1);
        let a = int(-4).pow(k);
        let q = &Poly::monomial(Rational::one(), four_k) - &Poly::constant(rat_int(a.clone()));
        // z^4 + 4 = (z^2 - 2z + 2)(z^2 + 2z + 2) divides Q
        q.exact_div(&Poly::from_ints([4, 0, 0, 0, 1]))?;
        let one_minus_4z = Poly::from_ints([1, -4]);
        let coupling = &q.scale(&rat_int(2))
            + &(&one_minus_4z * &Poly::monomial(rat_int(n as i64), four_k - 1));
        let forcing = (&Poly::from_ints([6, -4]) * &q.pow(four_k as u32 + 2))
            .exact_div(&Poly::from_ints([2, -2, 1]))?;
        Ok(ProverContext {
            k,
            n,
            q,
            d: four_k,
            a,
            forcing,
            coupling,
        })
    }

    /// Number of residual coefficients, i.e. equations: `N + 4k`.
    pub fn equations(&self) -> usize {
        self.n + self.d
    }

    /// `-(1-4z) Q Ř' + (2Q + N(1-4z) z^(4k-1)) Ř`.
    pub fn apply_operator(&self, rcheck: &Poly) -> Poly {
        let drift = &Poly::from_ints([-1, 4]) * &self.q;
        &(&drift * &rcheck.derivative()) + &(&self.coupling * rcheck)
    }

    /// The Ř- and P-independent term `2(3-2z) Q^(4k+2) / (z^2 - 2z + 2)`.
    pub fn forcing(&self) -> &Poly {
        &self.forcing
    }

    /// Integrand numerator in `z` for a summand of degree at most `4k`:
    /// `P(z) = a^(4k+2) T(z^(4k) / a)` with `T` over `(1 - y)^(4k+2)`.
    pub fn p_from_s(&self, s: &Poly) -> Result<Poly> {
        if s.degree().is_some_and(|deg| deg > self.d) {
            return Err(Error::domain(format!(
                "summand degree {:?} exceeds 4k = {}",
                s.degree(),
                self.d
            )));
        }
        let t = gf_numerator_padded(s, 2 * self.d as i64, self.d)?;
        substitute_numerator(
            &t,
            &self.a,
            self.d,
            &Poly::monomial(Rational::one(), self.d),
        )
    }
}

/// Residual of the differential equation; zero exactly when `(Ř, P)` solves it.
pub fn ode_residual(ctx: &ProverContext, rcheck: &Poly, p: &Poly) -> Poly {
    &(&ctx.apply_operator(rcheck) - p) + ctx.forcing()
}

/// How the unknown integrand numerator enters the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parameterization {
    /// Unknowns are the monomial coefficients of `S(n)`; gives A(k).
    Monomial,
    /// Unknowns are the coefficients of `P(z) = sum_j c_j z^(4jk) / (-4)^(jk)`,
    /// with the numerator constraint prepended as row 0.
    Constrained,
}

fn coeff_column(m: &mut StructuredMatrix, row_offset: usize, col: usize, p: &Poly) -> Result<()> {
    for (i, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let row = row_offset + i;
        if row >= m.rows {
            return Err(Error::internal(format!("column {col} overflows at z^{i}")));
        }
        m.entries[row][col] = c.clone();
    }
    Ok(())
}

fn rcheck_labels(ctx: &ProverContext) -> Vec<String> {
    (1..ctx.n).map(|j| format!("a({j})")).collect()
}

/// Builds the linear system from the residual by reading off the coefficient
/// of each unknown; rows are `z^0, z^1, ...` (after the constraint row, if any).
pub fn linearize(
    ctx: &ProverContext,
    parameterization: Parameterization,
) -> Result<(StructuredMatrix, Vec<Rational>)> {
    let eqs = ctx.equations();
    let offset = usize::from(parameterization == Parameterization::Constrained);
    let mut row_labels: Vec<String> = (0..eqs).map(|i| format!("z^{i}")).collect();
    let mut col_labels = rcheck_labels(ctx);
    let kind = match parameterization {
        Parameterization::Monomial => {
            col_labels.extend((0..=ctx.d).map(|i| format!("s[n^{i}]")));
            MatrixKind::SystemA
        }
        Parameterization::Constrained => {
            row_labels.insert(0, "constraint".to_string());
            col_labels.extend((0..=ctx.d + 1).map(|j| format!("a({})", ctx.n + j)));
            MatrixKind::SystemM
        }
    };
    let mut m = StructuredMatrix::zeros(kind, row_labels, col_labels);
    for j in 1..ctx.n {
        let image = ctx.apply_operator(&Poly::monomial(Rational::one(), j));
        coeff_column(&mut m, offset, j - 1, &image)?;
    }
    let base = ctx.n - 1;
    match parameterization {
        Parameterization::Monomial => {
            for i in 0..=ctx.d {
                let p = ctx.p_from_s(&Poly::monomial(Rational::one(), i))?;
                coeff_column(&mut m, 0, base + i, &-&p)?;
            }
        }
        Parameterization::Constrained => {
            let cv = ConstraintVector::series(ctx.k)?;
            let step = rat_pow(&rat_int(ctx.a.clone()), -1);
            for j in 0..=ctx.d + 1 {
                let p = Poly::monomial(rat_pow(&step, j as i64), j * ctx.d);
                coeff_column(&mut m, offset, base + j, &-&p)?;
                m.entries[0][base + j] = rat_int(cv.coeffs[j].clone());
            }
        }
    }
    let mut rhs = vec![Rational::zero(); m.rows];
    for (i, c) in ctx.forcing().coeffs().iter().enumerate() {
        rhs[offset + i] = -c;
    }
    Ok((m, rhs))
}

/// The block matrix M assembled from its band description: row 0 holds the
/// constraint vector `cv` in the last `4k+2` columns, the `U` block has the four
/// diagonals `f0, f1, g0, g1`, and column `N+j` of `V` has its only nonzero entry
/// `(-4)^(-jk)` in row `4jk+1`.
pub fn closed_form_m(k: u32, cv: &ConstraintVector) -> Result<StructuredMatrix> {
    let ctx = ProverContext::new(k)?;
    if cv.k != k {
        return Err(Error::domain("constraint vector built for a different k"));
    }
    let n = ctx.n as i64;
    let four_k = ctx.d;
    let size = ctx.equations() + 1;
    let mut m = StructuredMatrix::with_size(MatrixKind::ClosedFormM, size, size);
    let a = rat_int(ctx.a.clone());
    for (j, y) in cv.coeffs.iter().enumerate() {
        m.set(0, ctx.n - 1 + j, rat_int(y.clone()));
    }
    for j in 1..ctx.n {
        let jj = j as i64;
        let col = j - 1;
        m.set(j, col, rat_int(jj) * &a);
        m.set(j + 1, col, rat_int(-(4 * jj + 2)) * &a);
        m.set(j + four_k, col, rat_int(n - jj));
        m.set(j + four_k + 1, col, rat_int(-(4 * n - 4 * jj - 2)));
    }
    for j in 0..=four_k + 1 {
        m.set(j * four_k + 1, ctx.n - 1 + j, rat_pow(&a, -(j as i64)));
    }
    Ok(m)
}

/// A solved instance of the system together with everything needed to
/// re-check it without solving.
#[derive(Debug, Clone, PartialEq)]
pub struct ProofCertificate {
    pub k: u32,
    pub s: Poly,
    pub r: BigInt,
    pub s_int: Vec<BigInt>,
    pub rcheck: Poly,
    pub residual_zero: bool,
}

impl ProofCertificate {
    /// Recomputes the residual from `S` and `Ř` alone.
    pub fn recheck(&self) -> Result<bool> {
        let ctx = ProverContext::new(self.k)?;
        if self.rcheck.coeff(0) != Rational::zero()
            || self.rcheck.degree().is_some_and(|d| d >= ctx.n)
        {
            return Ok(false);
        }
        let p = ctx.p_from_s(&self.s)?;
        Ok(ode_residual(&ctx, &self.rcheck, &p).is_zero())
    }
}

/// Splits `S` into the least common denominator and the integer numerators.
pub fn integer_form(s: &Poly) -> (BigInt, Vec<BigInt>) {
    let r = common_denominator(s.coeffs());
    let ints = s
        .coeffs()
        .iter()
        .map(|c| (c * rat_int(r.clone())).to_integer())
        .collect();
    (r, ints)
}

fn certificate(ctx: &ProverContext, s: Poly, rcheck: Poly) -> Result<ProofCertificate> {
    let p = ctx.p_from_s(&s)?;
    let residual_zero = ode_residual(ctx, &rcheck, &p).is_zero();
    let (r, s_int) = integer_form(&s);
    Ok(ProofCertificate {
        k: ctx.k,
        s,
        r,
        s_int,
        rcheck,
        residual_zero,
    })
}

/// Solves A(k) and packages the solution as a certificate.
pub fn prove(k: u32) -> Result<ProofCertificate> {
    let ctx = ProverContext::new(k)?;
    let (m, rhs) = linearize(&ctx, Parameterization::Monomial)?;
    let x = solve_exact(&m, &rhs)?;
    let rcheck = Poly::new(
        std::iter::once(Rational::zero())
            .chain(x[..ctx.n - 1].iter().cloned())
            .collect(),
    );
    let s = Poly::new(x[ctx.n - 1..].to_vec());
    if s.degree() != Some(ctx.d) {
        return Err(Error::internal(format!(
            "summand has degree {:?}",
            s.degree()
        )));
    }
    certificate(&ctx, s, rcheck)
}

/// Solves the constrained system M and converts the `P` coefficients back to `S`.
pub fn prove_constrained(k: u32) -> Result<ProofCertificate> {
    let ctx = ProverContext::new(k)?;
    let (m, rhs) = linearize(&ctx, Parameterization::Constrained)?;
    let x = solve_exact(&m, &rhs)?;
    let rcheck = Poly::new(
        std::iter::once(Rational::zero())
            .chain(x[..ctx.n - 1].iter().cloned())
            .collect(),
    );
    // P = a^(4k+2) T(z^(4k)/a), so c_j = a^(-4k-2) * (coefficient of z^(4jk) / (-4)^(-jk))
    let scale = rat_pow(&rat_int(ctx.a.clone()), -(ctx.d as i64 + 2));
    let c: Vec<Rational> = x[ctx.n - 1..].iter().map(|v| v * &scale).collect();
    let cv = ConstraintVector::series(k)?;
    let coeffs = crate::polyring::c_to_s(&cv, &c)?;
    let basis = (0..=ctx.d).map(|j| crate::polyring::binomial_basis_poly(j, ctx.d - 1));
    let s = coeffs
        .iter()
        .zip(basis)
        .fold(Poly::zero(), |acc, (sj, b)| &acc + &b.scale(sj));
    certificate(&ctx, s, rcheck)
}

/// Closed form for det A(k):
/// `(-1)^(k-1) 2^(32k^3+32k^2+2k-1) k^(8k^2+2k) ((4k+1)!)^(4k) (8k)!/(4k)! prod_{j=1}^{4k} (2j)!/j!`.
pub fn det_a_closed_form(k: u32) -> Result<BigInt> {
    if k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    let k64 = k as u64;
    let two_exp = 32 * k64.pow(3) + 32 * k64.pow(2) + 2 * k64 - 1;
    let mut v = BigInt::one() << two_exp;
    v *= BigInt::from(k).pow((8 * k64 * k64 + 2 * k64) as u32);
    v *= factorial(4 * k64 + 1).pow(4 * k);
    v *= factorial(8 * k64) / factorial(4 * k64);
    for j in 1..=4 * k64 {
        v *= factorial(2 * j) / factorial(j);
    }
    if k.is_multiple_of(2) {
        v = -v;
    }
    Ok(v)
}

/// Builds A(k) and returns its exact determinant.
pub fn det_a(k: u32) -> Result<BigInt> {
    let ctx = ProverContext::new(k)?;
    let (m, _) = linearize(&ctx, Parameterization::Monomial)?;
    let d = det_structured(&m)?;
    if !d.is_integer() {
        return Err(Error::internal(
            "A(k) has integer entries but a fractional determinant",
        ));
    }
    Ok(d.to_integer())
}

/// Absolute value comparison used for determinant tables whose sign depends on
/// an ordering convention.
pub fn same_magnitude(a: &BigInt, b: &BigInt) -> bool {
    a.abs() == b.abs()
}
