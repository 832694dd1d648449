//! Per-component reduction of rotation-invariant operators to ordinary
//! differential operators: the map sending `D` to the family `T_m` with
//! `D(p(z*zb) xi_m) = xi_m (T_m p)(z*zb)`, projection operators built from
//! the angular derivative, and exact kernels on bounded-degree spaces.

use crate::invariance::{factor_invariant_basis_element, is_rotation_invariant};
use crate::linalg::Matrix;
use crate::poly::{BiPoly, UniPoly};
use crate::scalar::{binomial, falling, GaussRational, Rational};
use crate::weyl::{WeylOp1, WeylOp2};
use crate::Error;

/// Multiplication by `x^alpha`.
fn t_radial(alpha: u32) -> WeylOp1 {
    WeylOp1::term(alpha, 0, GaussRational::one())
}

/// Reduction of `z^alpha dz^alpha` on the component `|m|`:
/// `sum_l C(alpha,l) (|m|-l+1)_l x^{alpha-l} d^{alpha-l}`. The Pochhammer
/// factor equals `|m|(|m|-1)...(|m|-l+1)` and vanishes exactly for `l > |m|`.
fn t_euler_same(m_abs: u32, alpha: u32) -> WeylOp1 {
    let mut op = WeylOp1::zero();
    for l in 0..=alpha {
        let coeff = binomial(alpha, l) * Rational::from_integer(falling(m_abs, l));
        op.add_term(alpha - l, alpha - l, GaussRational::from_rational(coeff));
    }
    op
}

/// Reduction of the opposite-variable Euler factor: `x^alpha d^alpha`.
fn t_euler_opposite(alpha: u32) -> WeylOp1 {
    WeylOp1::term(alpha, alpha, GaussRational::one())
}

/// Reduction of `dz^alpha dzb^alpha`:
/// `sum_l C(alpha,l) (|m|+alpha)!/(|m|+alpha-l)! x^{alpha-l} d^{2 alpha-l}`.
fn t_laplace(m_abs: u32, alpha: u32) -> WeylOp1 {
    let mut op = WeylOp1::zero();
    for l in 0..=alpha {
        let coeff = binomial(alpha, l) * Rational::from_integer(falling(m_abs + alpha, l));
        op.add_term(alpha - l, 2 * alpha - l, GaussRational::from_rational(coeff));
    }
    op
}

/// The ordinary differential operator `T_m` with
/// `D(p(z*zb) xi_m) = xi_m (T_m p)(z*zb)` for every polynomial `p`.
///
/// Each canonical term of `D` is factored into generator powers
/// `(radial, euler_z, euler_zb, laplace)` and the four one-variable
/// families are composed right-to-left. For `m < 0` the roles of the two
/// Euler exponents are interchanged and `|m|` is used throughout.
pub fn lambda_m(d: &WeylOp2, m: i64) -> Result<WeylOp1, Error> {
    if !is_rotation_invariant(d) {
        return Err(Error::NotRotationInvariant);
    }
    let m_abs = m.unsigned_abs() as u32;
    let mut total = WeylOp1::zero();
    for (&(a1, b1, a2, b2), c) in d.terms() {
        let w = factor_invariant_basis_element(a1, b1, a2, b2)?;
        let (same_side, opposite_side) = if m >= 0 {
            (w.euler_z, w.euler_zb)
        } else {
            (w.euler_zb, w.euler_z)
        };
        let composed = &t_radial(w.radial)
            * &(&t_euler_same(m_abs, same_side)
                * &(&t_euler_opposite(opposite_side) * &t_laplace(m_abs, w.laplace)));
        total = &total + &composed.scale(c);
    }
    Ok(total)
}

/// A rotation-invariant operator together with its family of reduced
/// one-variable operators, one per component index `m`. The defining
/// contract is the intertwining identity
/// `D(p(z*zb) xi_m) = xi_m (T_m p)(z*zb)` for every `m` and `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentFamily {
    source: WeylOp2,
}

impl ComponentFamily {
    /// Wraps an operator; rejects operators that do not commute with
    /// rotations.
    pub fn new(source: WeylOp2) -> Result<Self, Error> {
        if !is_rotation_invariant(&source) {
            return Err(Error::NotRotationInvariant);
        }
        Ok(ComponentFamily { source })
    }

    pub fn source(&self) -> &WeylOp2 {
        &self.source
    }

    /// The reduced operator `T_m`; total once construction has succeeded.
    pub fn reduce(&self, m: i64) -> WeylOp1 {
        lambda_m(&self.source, m).expect("source is invariant by construction")
    }
}

/// The projection operator `prod_{k != j} (A - m_k) / (m_j - m_k)` for a
/// set of distinct integers, built from the angular derivative
/// `A = z*dz - zb*dzb`. Applied to `p(z*zb) xi_{m_i}` it returns the term
/// unchanged when `m_i = m_j` and kills it otherwise.
pub fn projector_as_operator(nodes: &[i64], pick: i64) -> Result<WeylOp2, Error> {
    let mut seen = std::collections::BTreeSet::new();
    for &m in nodes {
        if !seen.insert(m) {
            return Err(Error::RepeatedProjectorNode(m));
        }
    }
    if !seen.contains(&pick) {
        return Err(Error::ProjectorNodeMissing(pick));
    }
    let angular = WeylOp2::angular();
    let mut op = WeylOp2::one();
    for &m in nodes {
        if m == pick {
            continue;
        }
        let numer = &angular - &WeylOp2::constant(GaussRational::from_integer(m));
        let denom = GaussRational::from_integer(pick - m).inv();
        op = &op * &numer.scale(&denom);
    }
    Ok(op)
}

/// Checks the intertwining identity
/// `D(p(z*zb) xi_m) = (T_m p)(z*zb) xi_m` for a single `(m, p)`.
pub fn verify_intertwining(d: &WeylOp2, m: i64, p: &UniPoly) -> Result<bool, Error> {
    let t = lambda_m(d, m)?;
    let xi = BiPoly::xi(m);
    let lhs = d.apply(&(&p.substitute_radial() * &xi));
    let rhs = &t.apply(p).substitute_radial() * &xi;
    Ok(lhs == rhs)
}

/// Monomials `(i, j)` with `i + j <= max_degree`, in the canonical graded
/// order.
fn monomials_up_to(max_degree: u32) -> Vec<(u32, u32)> {
    let mut monos = Vec::new();
    for total in 0..=max_degree {
        for i in 0..=total {
            monos.push((i, total - i));
        }
    }
    monos.sort_by_key(|&(i, j)| (i + j, i));
    monos
}

/// Exact basis of `{p : total degree <= max_degree, D p = 0}`, computed by
/// Gaussian elimination over the Gaussian rationals. The reduced echelon
/// form makes the returned basis canonical.
pub fn kernel_bounded(d: &WeylOp2, max_degree: u32) -> Vec<BiPoly> {
    let monos = monomials_up_to(max_degree);
    let images: Vec<BiPoly> = monos
        .iter()
        .map(|&(i, j)| d.apply(&BiPoly::monomial(i, j, GaussRational::one())))
        .collect();
    let mut row_index = std::collections::BTreeMap::new();
    for image in &images {
        for (key, _) in image.terms() {
            let next = row_index.len();
            row_index.entry(*key).or_insert(next);
        }
    }
    let mut matrix = Matrix::zeros(row_index.len(), monos.len());
    for (col, image) in images.iter().enumerate() {
        for (key, c) in image.terms() {
            matrix.set(row_index[key], col, c.clone());
        }
    }
    matrix
        .nullspace()
        .into_iter()
        .map(|vec| {
            let mut p = BiPoly::zero();
            for (col, c) in vec.into_iter().enumerate() {
                let (i, j) = monos[col];
                p.add_term(i, j, c);
            }
            p
        })
        .collect()
}

/// Exact nullspace basis of an ordinary differential operator restricted to
/// polynomials of degree at most `max_degree`.
pub fn component_kernel_bounded(t: &WeylOp1, max_degree: u32) -> Vec<UniPoly> {
    let images: Vec<UniPoly> = (0..=max_degree)
        .map(|k| t.apply(&UniPoly::monomial(k, GaussRational::one())))
        .collect();
    let rows = images.iter().map(|q| q.degree() + 1).max().unwrap_or(1) as usize;
    let mut matrix = Matrix::zeros(rows, images.len());
    for (col, image) in images.iter().enumerate() {
        for (&k, c) in image.terms() {
            matrix.set(k as usize, col, c.clone());
        }
    }
    matrix
        .nullspace()
        .into_iter()
        .map(|vec| {
            let mut p = UniPoly::zero();
            for (k, c) in vec.into_iter().enumerate() {
                p.add_term(k as u32, c);
            }
            p
        })
        .collect()
}
