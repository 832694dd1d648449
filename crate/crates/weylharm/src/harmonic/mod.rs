//! Polyharmonic structure at polynomial scale: polyharmonic order, Almansi
//! layers, the operators `L_{g1,g2}`, expansions of `(g1,g2)`-harmonic
//! polynomials through terminating hypergeometric series, the `e_{m,n}`
//! grading, cellular decomposition, and the module inner product.

mod cellular;
mod obasis;

pub use cellular::{cellular_decompose, cellular_decompose_with_order, CellularDecomposition};
pub use obasis::{
    basis_change_recursive, basis_change_solve, chu_vandermonde, hypergeom_poly, o_basis, o_small,
    BasisChangeTable, OBasis,
};

use crate::poly::{BiPoly, UniPoly};
use crate::scalar::{binomial, GaussRational};
use crate::weyl::WeylOp2;
use crate::Error;
use std::collections::BTreeMap;

/// The least `n` with `dz^n dzb^n p = 0`: one more than the largest
/// `min(i, j)` over the monomials of `p`, and `0` for `p = 0`.
pub fn polyharmonic_order(p: &BiPoly) -> u32 {
    p.terms()
        .map(|(&(i, j), _)| i.min(j) + 1)
        .max()
        .unwrap_or(0)
}

/// Almansi layers of a polyharmonic polynomial: harmonic `q_0, ..., q_{n-1}`
/// with `p = sum_j (1 - z*zb)^j q_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmansiDecomposition {
    pub layers: Vec<BiPoly>,
}

impl AlmansiDecomposition {
    pub fn reconstruct(&self) -> BiPoly {
        let mut acc = BiPoly::zero();
        for (j, q) in self.layers.iter().enumerate() {
            acc = &acc + &(&BiPoly::one_minus_zzb_pow(j as u32) * q);
        }
        acc
    }
}

/// Almansi representation, built per monomial: `z^i zb^j` with `i >= j`
/// expands as `z^{i-j} sum_l C(j,l) (-1)^l (1-z*zb)^l`, and symmetrically
/// for `j > i`. Rejects the zero polynomial.
pub fn almansi_decompose(p: &BiPoly) -> Result<AlmansiDecomposition, Error> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let order = polyharmonic_order(p);
    let mut layers = vec![BiPoly::zero(); order as usize];
    for (&(i, j), c) in p.terms() {
        let radial = i.min(j);
        let m = i as i64 - j as i64;
        for l in 0..=radial {
            let sign = if l % 2 == 0 { 1 } else { -1 };
            let coeff = c * &GaussRational::from_rational(
                binomial(radial, l) * crate::scalar::Rational::from_integer(sign.into()),
            );
            layers[l as usize] = &layers[l as usize] + &BiPoly::xi(m).scale(&coeff);
        }
    }
    Ok(AlmansiDecomposition { layers })
}

/// The generalized harmonic operator
/// `L_{g1,g2} = (1 - z*zb) dz*dzb + g1 z*dz + g2 zb*dzb - g1*g2` in
/// canonical form.
pub fn build_l_operator(g1: &GaussRational, g2: &GaussRational) -> WeylOp2 {
    let mut op = WeylOp2::laplacian();
    op.add_term(1, 1, 1, 1, -&GaussRational::one());
    op.add_term(1, 0, 1, 0, g1.clone());
    op.add_term(0, 1, 0, 1, g2.clone());
    op.add_term(0, 0, 0, 0, -&(g1 * g2));
    op
}

/// Finitely supported expansion coefficients of a `(g1,g2)`-harmonic
/// polynomial: `c_m` multiplies `F(-g1, m-g2, m+1; z*zb) z^m` for `m >= 1`,
/// `F(-g2, |m|-g1, |m|+1; z*zb) zb^|m|` for `m <= -1`, and
/// `F(-g1, -g2, 1; z*zb)` for `m = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaHarmonicCoefficients {
    pub gamma1: GaussRational,
    pub gamma2: GaussRational,
    pub coeffs: BTreeMap<i64, GaussRational>,
}

impl GammaHarmonicCoefficients {
    pub fn new(gamma1: GaussRational, gamma2: GaussRational) -> Self {
        GammaHarmonicCoefficients {
            gamma1,
            gamma2,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, m: i64, c: GaussRational) {
        if c.is_zero() {
            self.coeffs.remove(&m);
        } else {
            self.coeffs.insert(m, c);
        }
    }
}

/// A terminating `F(a, b, c; x)`, using the symmetry in `a, b` to accept
/// either parameter as the terminating one.
fn terminating_hypergeom(
    a: &GaussRational,
    b: &GaussRational,
    c: &GaussRational,
) -> Result<UniPoly, Error> {
    match hypergeom_poly(a, b, c) {
        Err(Error::NonTerminatingSeries) => hypergeom_poly(b, a, c),
        other => other,
    }
}

/// The radial factor attached to `xi_m` in the hypergeometric expansion.
fn gamma_radial_factor(
    g1: &GaussRational,
    g2: &GaussRational,
    m: i64,
) -> Result<UniPoly, Error> {
    let c = GaussRational::from_integer(m.abs() + 1);
    if m >= 0 {
        let a = -g1;
        let b = &GaussRational::from_integer(m) - g2;
        terminating_hypergeom(&a, &b, &c)
    } else {
        let a = -g2;
        let b = &GaussRational::from_integer(-m) - g1;
        terminating_hypergeom(&a, &b, &c)
    }
}

/// Reconstructs the `(g1,g2)`-harmonic polynomial from its coefficients.
pub fn gamma_harmonic_from_coeffs(g: &GammaHarmonicCoefficients) -> Result<BiPoly, Error> {
    let mut acc = BiPoly::zero();
    for (&m, c) in &g.coeffs {
        let radial = gamma_radial_factor(&g.gamma1, &g.gamma2, m)?;
        acc = &acc + &(&radial.substitute_radial() * &BiPoly::xi(m)).scale(c);
    }
    Ok(acc)
}

/// Recovers the expansion coefficients of a `(g1,g2)`-harmonic polynomial:
/// `c_m = (1/|m|!) dz^|m| p (0)` for `m >= 0` and the `dzb` analogue for
/// `m < 0`. Rejects inputs not annihilated by `L_{g1,g2}`.
pub fn gamma_harmonic_to_coeffs(
    p: &BiPoly,
    g1: &GaussRational,
    g2: &GaussRational,
) -> Result<GammaHarmonicCoefficients, Error> {
    let l_op = build_l_operator(g1, g2);
    if !l_op.apply(p).is_zero() {
        return Err(Error::NotInKernel);
    }
    let mut out = GammaHarmonicCoefficients::new(g1.clone(), g2.clone());
    for m in p.component_support() {
        let m_abs = m.unsigned_abs() as u32;
        let derivative = if m >= 0 {
            WeylOp2::term(0, 0, m_abs, 0, GaussRational::one())
        } else {
            WeylOp2::term(0, 0, 0, m_abs, GaussRational::one())
        };
        let value = derivative.apply(p).eval_origin();
        let fact = GaussRational::from_rational(crate::scalar::Rational::from_integer(
            crate::scalar::factorial(m_abs),
        ));
        out.set(m, &value / &fact);
    }
    // The recovered coefficients must reproduce the input; anything else
    // means p is outside the representable kernel.
    if gamma_harmonic_from_coeffs(&out)? != *p {
        return Err(Error::NotInKernel);
    }
    Ok(out)
}

/// Splits the one-sided sum `sum_{m >= 1} c_m F(-g1, m-g2, m+1; x) z^m`
/// into holomorphic layers `h_0, ..., h_{g1}` with
/// `sum_j (1 - z*zb)^j h_j` equal to the reconstruction. Requires `g1` to
/// be a natural number and the support to lie in `m >= 1`.
pub fn gamma_layers(g: &GammaHarmonicCoefficients) -> Result<Vec<BiPoly>, Error> {
    if !g.gamma1.is_natural() {
        return Err(Error::NonTerminatingSeries);
    }
    if g.coeffs.keys().any(|&m| m <= 0) {
        return Err(Error::TwoSidedSupport);
    }
    let g1: u32 = g
        .gamma1
        .re()
        .to_integer()
        .try_into()
        .expect("natural gamma1");
    let mut layers = vec![BiPoly::zero(); g1 as usize + 1];
    for (&m, c) in &g.coeffs {
        for (j, t) in layer_coefficients(g1, &g.gamma2, m).into_iter().enumerate() {
            layers[j] = &layers[j] + &BiPoly::xi(m).scale(&(c * &t));
        }
    }
    Ok(layers)
}

/// `t_j(m) = (-1)^j sum_{k=j}^{g1} (-g1)_k (m-g2)_k / ((m+1)_k k!) C(k,j)`
/// for `0 <= j <= g1`.
fn layer_coefficients(g1: u32, g2: &GaussRational, m: i64) -> Vec<GaussRational> {
    let neg_g1 = GaussRational::from_integer(-(g1 as i64));
    let shifted = &GaussRational::from_integer(m) - g2;
    let mplus1 = GaussRational::from_integer(m + 1);
    let mut out = Vec::with_capacity(g1 as usize + 1);
    for j in 0..=g1 {
        let mut acc = GaussRational::zero();
        for k in j..=g1 {
            let numer = &crate::scalar::pochhammer(&neg_g1, k)
                * &crate::scalar::pochhammer(&shifted, k);
            let denom = &crate::scalar::pochhammer(&mplus1, k)
                * &GaussRational::from_rational(crate::scalar::Rational::from_integer(
                    crate::scalar::factorial(k),
                ));
            let term = &(&numer / &denom) * &GaussRational::from_rational(binomial(k, j));
            acc = &acc + &term;
        }
        if j % 2 == 1 {
            acc = -&acc;
        }
        out.push(acc);
    }
    out
}

/// Projection of `p * conj(q)` onto the radial component: the module inner
/// product with values in `K[x]`.
pub fn module_inner_product(p: &BiPoly, q: &BiPoly) -> UniPoly {
    (p * &q.conjugate_full()).component_project(0)
}

/// The normalized `L^2` inner product over the unit disc, computed
/// symbolically: only the radial part of `p * conj(q)` survives and
/// `x^k` integrates to `1/(k+1)`.
pub fn l2_disc_inner_product(p: &BiPoly, q: &BiPoly) -> GaussRational {
    let radial = module_inner_product(p, q);
    let mut acc = GaussRational::zero();
    for (&k, c) in radial.terms() {
        acc = &acc + &(c / &GaussRational::from_integer(k as i64 + 1));
    }
    acc
}

/// Coefficients of `p` in the basis `e_{m,n} = (1 - z*zb)^n xi_m`.
pub fn e_grading_decompose(p: &BiPoly) -> BTreeMap<(i64, u32), GaussRational> {
    let mut out = BTreeMap::new();
    for m in p.component_support() {
        let radial = p.component_project(m);
        let in_one_minus_x = radial.compose_one_minus_x();
        for (&n, c) in in_one_minus_x.terms() {
            out.insert((m, n), c.clone());
        }
    }
    out
}

/// Reconstruction from `e`-grading coefficients; inverse of
/// `e_grading_decompose`.
pub fn e_grading_reconstruct(coeffs: &BTreeMap<(i64, u32), GaussRational>) -> BiPoly {
    let mut acc = BiPoly::zero();
    for (&(m, n), c) in coeffs {
        acc = &acc + &BiPoly::e_basis(m, n).scale(c);
    }
    acc
}

/// For a `(g1,g2)`-harmonic polynomial with natural parameters, verifies
/// the polyharmonic bound `dz^g dzb^g p = 0` with `g = max(g1,g2) + 1` and
/// returns the exact polyharmonic order.
pub fn gamma_to_polyharmonic_bound(g1: u32, g2: u32, p: &BiPoly) -> Result<u32, Error> {
    let l_op = build_l_operator(
        &GaussRational::from_integer(g1 as i64),
        &GaussRational::from_integer(g2 as i64),
    );
    if !l_op.apply(p).is_zero() {
        return Err(Error::NotInKernel);
    }
    let bound = g1.max(g2) + 1;
    let power = WeylOp2::term(0, 0, bound, bound, GaussRational::one());
    assert!(
        power.apply(p).is_zero(),
        "(g1,g2)-harmonic polynomial must be polyharmonic of order <= max(g1,g2)+1"
    );
    Ok(polyharmonic_order(p))
}
