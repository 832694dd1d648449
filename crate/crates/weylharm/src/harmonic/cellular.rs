//! Cellular decomposition of polyharmonic polynomials: the unique
//! expression `p = w_0 + (1-z*zb) w_1 + ... + (1-z*zb)^{n-1} w_{n-1}` with
//! `L_{n-1-j, n-1-j} w_j = 0` for every layer.

use super::obasis::{basis_change_recursive, o_small};
use super::{almansi_decompose, polyharmonic_order};
use crate::poly::BiPoly;
use crate::scalar::GaussRational;
use crate::Error;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Result of a cellular decomposition at order `n`: the coefficient table
/// `k_{m,j}` and the assembled layers
/// `w_j = sum_m k_{m,j} o_j^{|m|, n-1}(z*zb) xi_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellularDecomposition {
    pub order: u32,
    pub coeffs: BTreeMap<(i64, u32), GaussRational>,
    pub layers: Vec<BiPoly>,
}

impl CellularDecomposition {
    pub fn reconstruct(&self) -> BiPoly {
        let mut acc = BiPoly::zero();
        for (j, w) in self.layers.iter().enumerate() {
            acc = &acc + &(&BiPoly::one_minus_zzb_pow(j as u32) * w);
        }
        acc
    }
}

/// Assembles the layers from a coefficient table at order `n`.
pub(crate) fn layers_from_coeffs(
    n: u32,
    coeffs: &BTreeMap<(i64, u32), GaussRational>,
) -> Vec<BiPoly> {
    let mut layers = vec![BiPoly::zero(); n as usize];
    for (&(m, j), k) in coeffs {
        let radial = o_small(m.unsigned_abs() as u32, n - 1, j);
        let term = (&radial.substitute_radial() * &BiPoly::xi(m)).scale(k);
        layers[j as usize] = &layers[j as usize] + &term;
    }
    layers
}

/// Cellular decomposition at the exact polyharmonic order of `p`.
pub fn cellular_decompose(p: &BiPoly) -> Result<CellularDecomposition, Error> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    cellular_decompose_with_order(p, polyharmonic_order(p))
}

/// Cellular decomposition at a caller-chosen order `n`, which must be at
/// least the polyharmonic order of `p`; layers beyond the needed depth come
/// out zero. The route follows the Almansi representation: project each
/// harmonic layer onto its components and change basis from the powers
/// `(1-x)^j` to the `O`-polynomials.
pub fn cellular_decompose_with_order(p: &BiPoly, n: u32) -> Result<CellularDecomposition, Error> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    assert!(
        n >= polyharmonic_order(p),
        "requested order {n} is below the polyharmonic order"
    );
    let almansi = almansi_decompose(p)?;
    let mut coeffs: BTreeMap<(i64, u32), GaussRational> = BTreeMap::new();
    for m in p.component_support() {
        let table = basis_change_recursive(m.unsigned_abs() as u32, n - 1);
        for (j, layer) in almansi.layers.iter().enumerate() {
            let radial = layer.component_project(m);
            if radial.is_zero() {
                continue;
            }
            // Almansi layers are harmonic, so each component is a constant.
            debug_assert_eq!(radial.degree(), 0);
            let c = radial.coeff(0);
            for i in j as u32..=n - 1 {
                let t = table.entry(j as u32, i);
                if t.is_zero() {
                    continue;
                }
                let contribution = &c * &GaussRational::from_rational(t.clone());
                merge(&mut coeffs, (m, i), contribution);
            }
        }
    }
    let layers = layers_from_coeffs(n, &coeffs);
    Ok(CellularDecomposition {
        order: n,
        coeffs,
        layers,
    })
}

fn merge(
    map: &mut BTreeMap<(i64, u32), GaussRational>,
    key: (i64, u32),
    value: GaussRational,
) {
    if value.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(value);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = e.get() + &value;
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}
