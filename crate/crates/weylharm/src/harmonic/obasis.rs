//! Terminating hypergeometric polynomials, the Chu-Vandermonde closed form,
//! the basis `O_l^{m,n} = (1-x)^l F(-n+l, m-n+l, m+1; x)` of degree-`n`
//! polynomials, and the change-of-basis coefficients `t_{l,k}^{m,n}`
//! expressing the powers `(1-x)^l` in that basis.

use crate::linalg::Matrix;
use crate::poly::UniPoly;
use crate::scalar::{binomial, pochhammer_rat, GaussRational, Rational};
use crate::Error;
use num_traits::{Signed, Zero};

fn non_positive_integer_order(a: &GaussRational) -> Option<u32> {
    if a.is_integer() && !a.re().is_positive() {
        Some((-a.re().to_integer()).try_into().unwrap())
    } else {
        None
    }
}

fn check_denominator_param(c: &GaussRational, degree: u32) -> Result<(), Error> {
    // (c)_k vanishes for some k <= degree exactly when c is an integer in
    // (-degree, 0].
    if c.is_integer() && !c.re().is_positive() {
        let neg: i64 = (-c.re().to_integer()).try_into().unwrap();
        if neg < degree as i64 {
            return Err(Error::ZeroHypergeometricDenominator);
        }
    }
    Ok(())
}

/// The terminating Gauss hypergeometric series
/// `F(a, b, c; x) = sum_k (a)_k (b)_k / ((c)_k k!) x^k` as an exact
/// polynomial. Requires `a` to be a non-positive integer; the degree is at
/// most `-a`.
pub fn hypergeom_poly(
    a: &GaussRational,
    b: &GaussRational,
    c: &GaussRational,
) -> Result<UniPoly, Error> {
    let degree = non_positive_integer_order(a).ok_or(Error::NonTerminatingSeries)?;
    check_denominator_param(c, degree)?;
    let mut out = UniPoly::zero();
    let mut coeff = GaussRational::one();
    out.add_term(0, coeff.clone());
    for k in 0..degree {
        let kq = GaussRational::from_integer(k as i64);
        let numer = &(a + &kq) * &(b + &kq);
        let denom = &(c + &kq) * &GaussRational::from_integer(k as i64 + 1);
        coeff = &(&coeff * &numer) / &denom;
        out.add_term(k + 1, coeff.clone());
    }
    Ok(out)
}

/// The Chu-Vandermonde evaluation `F(a, b, c; 1) = (c-b)_{-a} / (c)_{-a}`
/// for a non-positive integer `a`.
pub fn chu_vandermonde(
    a: &GaussRational,
    b: &GaussRational,
    c: &GaussRational,
) -> Result<GaussRational, Error> {
    let degree = non_positive_integer_order(a).ok_or(Error::NonTerminatingSeries)?;
    check_denominator_param(c, degree)?;
    let numer = crate::scalar::pochhammer(&(c - b), degree);
    let denom = crate::scalar::pochhammer(c, degree);
    Ok(&numer / &denom)
}

/// `o_l^{m,n}(x) = F(-n+l, m-n+l, m+1; x)`.
pub fn o_small(m: u32, n: u32, l: u32) -> UniPoly {
    assert!(l <= n);
    let a = GaussRational::from_integer(l as i64 - n as i64);
    let b = GaussRational::from_integer(m as i64 - n as i64 + l as i64);
    let c = GaussRational::from_integer(m as i64 + 1);
    hypergeom_poly(&a, &b, &c).expect("c = m + 1 is positive")
}

/// The polynomials `O_0^{m,n}, ..., O_n^{m,n}`, a basis of the space of
/// polynomials of degree at most `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OBasis {
    pub m: u32,
    pub n: u32,
    pub polys: Vec<UniPoly>,
}

/// Builds the basis `O_l^{m,n} = (1-x)^l o_l^{m,n}` and verifies its
/// triangular structure in the `(1-x)`-power basis constructively: the
/// coefficient of `(1-x)^l` in `O_l` is the non-zero Chu-Vandermonde
/// constant `(n+1-l)_{n-l} / (m+1)_{n-l}` and all lower coefficients
/// vanish, which forces linear independence.
pub fn o_basis(m: u32, n: u32) -> OBasis {
    let mut polys = Vec::with_capacity(n as usize + 1);
    for l in 0..=n {
        let o = &UniPoly::one_minus_x_pow(l) * &o_small(m, n, l);
        // Degree can drop below n when the parameter m - n + l hits zero
        // and truncates the series; independence never depends on it.
        debug_assert!(o.degree() <= n);
        let in_one_minus_x = o.compose_one_minus_x();
        for k in 0..l {
            assert!(
                in_one_minus_x.coeff(k).is_zero(),
                "O_{l}^{m},{n} has a (1-x)^{k} component"
            );
        }
        let lead = in_one_minus_x.coeff(l);
        let expected = pochhammer_rat(&Rational::from_integer((n as i64 + 1 - l as i64).into()), n - l)
            / pochhammer_rat(&Rational::from_integer((m as i64 + 1).into()), n - l);
        assert_eq!(lead, GaussRational::from_rational(expected));
        polys.push(o);
    }
    OBasis { m, n, polys }
}

impl OBasis {
    /// Expresses an arbitrary polynomial of degree at most `n` in this
    /// basis. Returns the coefficient vector.
    pub fn coordinates(&self, p: &UniPoly) -> Option<Vec<GaussRational>> {
        if p.degree() > self.n && !p.is_zero() {
            return None;
        }
        let n = self.n as usize;
        let mut matrix = Matrix::zeros(n + 1, n + 1);
        for (col, o) in self.polys.iter().enumerate() {
            for (&k, c) in o.terms() {
                matrix.set(k as usize, col, c.clone());
            }
        }
        let rhs: Vec<GaussRational> = (0..=n).map(|k| p.coeff(k as u32)).collect();
        matrix.solve(&rhs)
    }
}

/// The coefficients `t_{l,k}^{m,n}` with
/// `(1-x)^l = sum_k t_{l,k} O_k^{m,n}(x)`; zero below the diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisChangeTable {
    pub m: u32,
    pub n: u32,
    /// `t[l][k]`, both indices in `0..=n`.
    pub t: Vec<Vec<Rational>>,
}

impl BasisChangeTable {
    pub fn entry(&self, l: u32, k: u32) -> &Rational {
        &self.t[l as usize][k as usize]
    }
}

fn int_rat(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// `theta_{k,j}^{m,n} = (-n+k)_j (m-n+k)_j / ((m+1)_j j!)`.
fn theta(m: u32, n: u32, k: u32, j: u32) -> Rational {
    let a = pochhammer_rat(&int_rat(k as i64 - n as i64), j);
    let b = pochhammer_rat(&int_rat(m as i64 - n as i64 + k as i64), j);
    let c = pochhammer_rat(&int_rat(m as i64 + 1), j);
    let fact = Rational::from_integer(crate::scalar::factorial(j));
    a * b / (c * fact)
}

/// `S_{j,k}^{m,n} = (-1)^{k-j} sum_i C(k-j+i, k-j) theta_{j,k-j+i}^{m,n}`:
/// the coefficient of `(1-x)^k` in `O_j^{m,n}`.
fn s_sum(m: u32, n: u32, j: u32, k: u32) -> Rational {
    let mut acc = Rational::zero();
    for i in 0..=n - k {
        acc += binomial(k - j + i, k - j) * theta(m, n, j, k - j + i);
    }
    if (k - j) % 2 == 1 {
        acc = -acc;
    }
    acc
}

/// Change-of-basis coefficients by the diagonal-plus-recursion route:
/// `t_{l,l} = (m+1)_{n-l} / (n+1-l)_{n-l}` and
/// `t_{l,k} = -((m+1)_{n-k} / (n+1-k)_{n-k}) (t_{l,k-1} S_{k-1,k} + ... + t_{l,l} S_{l,k})`.
pub fn basis_change_recursive(m: u32, n: u32) -> BasisChangeTable {
    let size = n as usize + 1;
    let mut t = vec![vec![Rational::zero(); size]; size];
    for l in 0..=n {
        let diag = pochhammer_rat(&int_rat(m as i64 + 1), n - l)
            / pochhammer_rat(&int_rat(n as i64 + 1 - l as i64), n - l);
        t[l as usize][l as usize] = diag;
        for k in l + 1..=n {
            let mut lambda = Rational::zero();
            for j in l..k {
                lambda += &t[l as usize][j as usize] * s_sum(m, n, j, k);
            }
            let scale = pochhammer_rat(&int_rat(m as i64 + 1), n - k)
                / pochhammer_rat(&int_rat(n as i64 + 1 - k as i64), n - k);
            t[l as usize][k as usize] = -scale * lambda;
        }
    }
    BasisChangeTable { m, n, t }
}

/// Independent route to the same table: an exact linear solve expressing
/// each `(1-x)^l` in the `O`-basis.
pub fn basis_change_solve(m: u32, n: u32) -> BasisChangeTable {
    let basis = o_basis(m, n);
    let size = n as usize + 1;
    let mut t = vec![vec![Rational::zero(); size]; size];
    for l in 0..=n {
        let target = UniPoly::one_minus_x_pow(l);
        let coords = basis
            .coordinates(&target)
            .expect("O-basis spans degree <= n");
        for (k, c) in coords.into_iter().enumerate() {
            assert!(c.is_real(), "basis change coefficients are rational");
            t[l as usize][k] = c.re().clone();
        }
    }
    BasisChangeTable { m, n, t }
}
