//! Sparse polynomial rings: `K[z, zb]`, its radial subring `K[x]` with
//! `x = z*zb`, and the Laurent extension in a formal rotation parameter `t`.

use crate::scalar::GaussRational;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A sparse polynomial in the commuting variables `z` and `zb`.
///
/// Keys are exponent pairs `(i, j)` for `z^i * zb^j`; zero coefficients are
/// never stored, so map equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), GaussRational>,
}

/// A sparse polynomial in one variable `x`, identified with the radial
/// subring `K[z*zb]` via `x = z*zb`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct UniPoly {
    terms: BTreeMap<u32, GaussRational>,
}

/// A Laurent polynomial in `z`, `zb` and a formal rotation unit `t`.
///
/// `t` stands in for `e^{i*theta}`; two expressions agree for every rotation
/// angle exactly when they agree as `RotPoly` identities.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RotPoly {
    terms: BTreeMap<(u32, u32, i64), GaussRational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, GaussRational::one())
    }

    pub fn constant(c: GaussRational) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(i: u32, j: u32, c: GaussRational) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    /// `xi_m`: `z^m` for `m >= 0` and `zb^|m|` for `m < 0`.
    pub fn xi(m: i64) -> Self {
        if m >= 0 {
            Self::monomial(m as u32, 0, GaussRational::one())
        } else {
            Self::monomial(0, (-m) as u32, GaussRational::one())
        }
    }

    /// `(1 - z*zb)^n`.
    pub fn one_minus_zzb_pow(n: u32) -> Self {
        let base = &Self::one() - &Self::monomial(1, 1, GaussRational::one());
        base.pow(n)
    }

    /// The generalized harmonic basis element `e_{m,n} = (1 - z*zb)^n * xi_m`.
    pub fn e_basis(m: i64, n: u32) -> Self {
        &Self::one_minus_zzb_pow(n) * &Self::xi(m)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: GaussRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((i, j)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &GaussRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> GaussRational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(GaussRational::zero)
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        let mut out = Self::zero();
        for (&(i, j), v) in &self.terms {
            out.add_term(i, j, v * c);
        }
        out
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Argument swap `p(z, zb) -> p(zb, z)`; coefficients untouched.
    pub fn conjugate_swap(&self) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            out.add_term(j, i, c.clone());
        }
        out
    }

    /// Complex conjugate of the polynomial function: argument swap and
    /// conjugation of every coefficient.
    pub fn conjugate_full(&self) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            out.add_term(j, i, c.conj());
        }
        out
    }

    /// The integers `m` with a non-trivial component `i - j = m`.
    pub fn component_support(&self) -> Vec<i64> {
        let mut ms: Vec<i64> = self
            .terms
            .keys()
            .map(|&(i, j)| i as i64 - j as i64)
            .collect();
        ms.sort_unstable();
        ms.dedup();
        ms
    }

    /// The radial part `phi_m` of the `m`-th component, so that the
    /// projection of `self` onto `K*[x] xi_m` is `phi_m(z*zb) * xi_m`.
    pub fn component_project(&self, m: i64) -> UniPoly {
        let mut out = UniPoly::zero();
        for (&(i, j), c) in &self.terms {
            if i as i64 - j as i64 == m {
                out.add_term(i.min(j), c.clone());
            }
        }
        out
    }

    /// Tags each term with the formal rotation weight `i - j`.
    pub fn rotate_formal(&self) -> RotPoly {
        let mut out = RotPoly::zero();
        for (&(i, j), c) in &self.terms {
            out.add_term(i, j, i as i64 - j as i64, c.clone());
        }
        out
    }

    /// Value at `z = zb = 0`, i.e. the constant term.
    pub fn eval_origin(&self) -> GaussRational {
        self.coeff(0, 0)
    }
}

impl UniPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, GaussRational::one())
    }

    pub fn constant(c: GaussRational) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(k: u32, c: GaussRational) -> Self {
        let mut p = Self::zero();
        p.add_term(k, c);
        p
    }

    /// `(1 - x)^l`.
    pub fn one_minus_x_pow(l: u32) -> Self {
        let base = &Self::one() - &Self::monomial(1, GaussRational::one());
        base.pow(l)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: u32, c: GaussRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u32, &GaussRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, k: u32) -> GaussRational {
        self.terms.get(&k).cloned().unwrap_or_else(GaussRational::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().max().copied().unwrap_or(0)
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        let mut out = Self::zero();
        for (&k, v) in &self.terms {
            out.add_term(k, v * c);
        }
        out
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Sends `x` to `z*zb`; the left inverse of `component_project` at `m = 0`.
    pub fn substitute_radial(&self) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&k, c) in &self.terms {
            out.add_term(k, k, c.clone());
        }
        out
    }

    /// The polynomial `x -> self(1 - x)`, i.e. the coefficient vector in the
    /// `(1-x)`-power basis.
    pub fn compose_one_minus_x(&self) -> Self {
        let mut out = Self::zero();
        for (&k, c) in &self.terms {
            out = &out + &Self::one_minus_x_pow(k).scale(c);
        }
        out
    }

    pub fn eval(&self, x: &GaussRational) -> GaussRational {
        let mut acc = GaussRational::zero();
        // Horner over the sparse support.
        let mut last_deg = None;
        for (&k, c) in self.terms.iter().rev() {
            if let Some(prev) = last_deg {
                acc = &acc * &x.pow(prev - k);
            }
            acc = &acc + c;
            last_deg = Some(k);
        }
        if let Some(k) = last_deg {
            acc = &acc * &x.pow(k);
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (&k, c) in &self.terms {
            if k > 0 {
                out.add_term(k - 1, c * &GaussRational::from_integer(k as i64));
            }
        }
        out
    }
}

impl RotPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, i: u32, j: u32, t_exp: i64, c: GaussRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((i, j, t_exp)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32, i64), &GaussRational)> {
        self.terms.iter()
    }

    /// The distinct `t`-exponents with the attached `z, zb` parts.
    pub fn t_slices(&self) -> BTreeMap<i64, BiPoly> {
        let mut slices: BTreeMap<i64, BiPoly> = BTreeMap::new();
        for (&(i, j, e), c) in &self.terms {
            slices.entry(e).or_default().add_term(i, j, c.clone());
        }
        slices
    }

    /// Specializes the formal unit to `t = 1`.
    pub fn specialize_t1(&self) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j, _), c) in &self.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

macro_rules! impl_ring_ops {
    ($ty:ident, $key:ty) => {
        impl Add for &$ty {
            type Output = $ty;
            fn add(self, rhs: &$ty) -> $ty {
                let mut out = self.clone();
                for (k, c) in &rhs.terms {
                    add_key(&mut out.terms, k.clone(), c.clone());
                }
                out
            }
        }

        impl Sub for &$ty {
            type Output = $ty;
            fn sub(self, rhs: &$ty) -> $ty {
                let mut out = self.clone();
                for (k, c) in &rhs.terms {
                    add_key(&mut out.terms, k.clone(), -c);
                }
                out
            }
        }

        impl Neg for &$ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                let mut out = $ty::zero();
                for (k, c) in &self.terms {
                    out.terms.insert(k.clone(), -c);
                }
                out
            }
        }
    };
}

fn add_key<K: Ord>(map: &mut BTreeMap<K, GaussRational>, key: K, c: GaussRational) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = e.get() + &c;
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

impl_ring_ops!(BiPoly, (u32, u32));
impl_ring_ops!(UniPoly, u32);
impl_ring_ops!(RotPoly, (u32, u32, i64));

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        let mut out = UniPoly::zero();
        for (&k1, c1) in &self.terms {
            for (&k2, c2) in &rhs.terms {
                out.add_term(k1 + k2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for &RotPoly {
    type Output = RotPoly;
    fn mul(self, rhs: &RotPoly) -> RotPoly {
        let mut out = RotPoly::zero();
        for (&(i1, j1, e1), c1) in &self.terms {
            for (&(i2, j2, e2), c2) in &rhs.terms {
                out.add_term(i1 + i2, j1 + j2, e1 + e2, c1 * c2);
            }
        }
        out
    }
}

/// Renders a sum of `(coefficient, monomial-text)` pairs in canonical form:
/// signs pulled out for real and pure-imaginary coefficients, mixed Gaussian
/// coefficients parenthesized, unit coefficients dropped.
pub(crate) fn format_term_sum(f: &mut fmt::Formatter<'_>, terms: &[(GaussRational, String)]) -> fmt::Result {
    use num_traits::{Signed, Zero};
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (idx, (c, mono)) in terms.iter().enumerate() {
        let (negative, magnitude) = if c.is_real() {
            (c.re().is_negative(), GaussRational::from_rational(c.re().abs()))
        } else if c.re().is_zero() {
            (
                c.im().is_negative(),
                GaussRational::new(num_traits::Zero::zero(), c.im().abs()),
            )
        } else {
            (false, c.clone())
        };
        if idx == 0 {
            if negative {
                write!(f, "-")?;
            }
        } else if negative {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        let coeff_text = if !magnitude.is_real() && !magnitude.re().is_zero() {
            Some(format!("({magnitude})"))
        } else if magnitude.is_one() {
            None
        } else {
            Some(magnitude.to_string())
        };
        match (coeff_text, mono.is_empty()) {
            (None, true) => write!(f, "1")?,
            (None, false) => write!(f, "{mono}")?,
            (Some(ct), true) => write!(f, "{ct}")?,
            (Some(ct), false) => write!(f, "{ct}*{mono}")?,
        }
    }
    Ok(())
}

pub(crate) fn power_text(var: &str, e: u32) -> Option<String> {
    match e {
        0 => None,
        1 => Some(var.to_string()),
        _ => Some(format!("{var}^{e}")),
    }
}

pub(crate) fn join_powers(parts: &[Option<String>]) -> String {
    parts
        .iter()
        .flatten()
        .cloned()
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for BiPoly {
    /// Canonical text: terms in ascending graded-lexicographic order on
    /// `(i + j, i)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by_key(|&&(i, j)| (i + j, i));
        let rendered: Vec<(GaussRational, String)> = keys
            .into_iter()
            .map(|&(i, j)| {
                let mono = join_powers(&[power_text("z", i), power_text("zb", j)]);
                (self.terms[&(i, j)].clone(), mono)
            })
            .collect();
        format_term_sum(f, &rendered)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered: Vec<(GaussRational, String)> = self
            .terms
            .iter()
            .map(|(&k, c)| (c.clone(), join_powers(&[power_text("x", k)])))
            .collect();
        format_term_sum(f, &rendered)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn g(re: i64, im: i64) -> GaussRational {
        GaussRational::new(
            Rational::from_integer(BigInt::from(re)),
            Rational::from_integer(BigInt::from(im)),
        )
    }

    fn arb_scalar() -> impl Strategy<Value = GaussRational> {
        (-4i64..=4, -2i64..=2).prop_map(|(re, im)| g(re, im))
    }

    pub(crate) fn arb_bipoly() -> impl Strategy<Value = BiPoly> {
        proptest::collection::vec(((0u32..=5, 0u32..=5), arb_scalar()), 0..6).prop_map(|terms| {
            let mut p = BiPoly::zero();
            for ((i, j), c) in terms {
                p.add_term(i, j, c);
            }
            p
        })
    }

    fn arb_radial() -> impl Strategy<Value = BiPoly> {
        proptest::collection::vec((0u32..=4, arb_scalar()), 0..4).prop_map(|terms| {
            let mut p = BiPoly::zero();
            for (k, c) in terms {
                p.add_term(k, k, c);
            }
            p
        })
    }

    #[test]
    fn conjugate_swap_examples() {
        let z2 = BiPoly::monomial(2, 0, g(1, 0));
        assert_eq!(z2.conjugate_swap(), BiPoly::monomial(0, 2, g(1, 0)));
        let zzb = BiPoly::monomial(1, 1, g(1, 0));
        assert_eq!(zzb.conjugate_swap(), zzb);
        let p = &BiPoly::monomial(1, 0, g(2, 0)) + &BiPoly::monomial(0, 2, g(3, 0));
        let q = &BiPoly::monomial(0, 1, g(2, 0)) + &BiPoly::monomial(2, 0, g(3, 0));
        assert_eq!(p.conjugate_swap(), q);
    }

    #[test]
    fn conjugate_full_examples() {
        let iz = BiPoly::monomial(1, 0, g(0, 1));
        assert_eq!(iz.conjugate_full(), BiPoly::monomial(0, 1, g(0, -1)));
        let zzb = BiPoly::monomial(1, 1, g(1, 0));
        assert_eq!(zzb.conjugate_full(), zzb);
        let p = BiPoly::monomial(2, 0, g(1, 1));
        assert_eq!(p.conjugate_full(), BiPoly::monomial(0, 2, g(1, -1)));
    }

    #[test]
    fn component_project_examples() {
        // p = z^2 + z*zb
        let p = &BiPoly::monomial(2, 0, g(1, 0)) + &BiPoly::monomial(1, 1, g(1, 0));
        assert_eq!(p.component_project(2), UniPoly::one());
        assert_eq!(p.component_project(0), UniPoly::monomial(1, g(1, 0)));
        // p = z^3*zb + 2 z^2, m = 2 -> x + 2
        let p = &BiPoly::monomial(3, 1, g(1, 0)) + &BiPoly::monomial(2, 0, g(2, 0));
        let expected = &UniPoly::monomial(1, g(1, 0)) + &UniPoly::constant(g(2, 0));
        assert_eq!(p.component_project(2), expected);
    }

    #[test]
    fn substitute_radial_examples() {
        assert_eq!(
            UniPoly::monomial(2, g(1, 0)).substitute_radial(),
            BiPoly::monomial(2, 2, g(1, 0))
        );
        let one_minus_x = &UniPoly::one() - &UniPoly::monomial(1, g(1, 0));
        assert_eq!(one_minus_x.substitute_radial(), BiPoly::one_minus_zzb_pow(1));
        let x_plus_2 = &UniPoly::monomial(1, g(1, 0)) + &UniPoly::constant(g(2, 0));
        let expected = &BiPoly::monomial(1, 1, g(1, 0)) + &BiPoly::constant(g(2, 0));
        assert_eq!(x_plus_2.substitute_radial(), expected);
    }

    #[test]
    fn rotate_formal_examples() {
        let z = BiPoly::monomial(1, 0, g(1, 0));
        let mut expect = RotPoly::zero();
        expect.add_term(1, 0, 1, g(1, 0));
        assert_eq!(z.rotate_formal(), expect);

        let zzb = BiPoly::monomial(1, 1, g(1, 0));
        let mut expect = RotPoly::zero();
        expect.add_term(1, 1, 0, g(1, 0));
        assert_eq!(zzb.rotate_formal(), expect);

        let zb2 = BiPoly::monomial(0, 2, g(1, 0));
        let mut expect = RotPoly::zero();
        expect.add_term(0, 2, -2, g(1, 0));
        assert_eq!(zb2.rotate_formal(), expect);
    }

    #[test]
    fn display_canonical_order() {
        // (1 - z*zb)^2 expands with ascending graded order.
        assert_eq!(BiPoly::one_minus_zzb_pow(2).to_string(), "1 - 2*z*zb + z^2*zb^2");
        let p = &BiPoly::monomial(1, 0, g(0, 1)) + &BiPoly::constant(g(1, 1));
        assert_eq!(p.to_string(), "(1+i) + i*z");
        assert_eq!(BiPoly::zero().to_string(), "0");
    }

    proptest! {
        #[test]
        fn conjugations_are_ring_involutions(p in arb_bipoly(), q in arb_bipoly()) {
            prop_assert_eq!(p.conjugate_swap().conjugate_swap(), p.clone());
            prop_assert_eq!(p.conjugate_full().conjugate_full(), p.clone());
            prop_assert_eq!(
                (&p + &q).conjugate_swap(),
                &p.conjugate_swap() + &q.conjugate_swap()
            );
            prop_assert_eq!(
                (&p * &q).conjugate_swap(),
                &p.conjugate_swap() * &q.conjugate_swap()
            );
            prop_assert_eq!(
                (&p + &q).conjugate_full(),
                &p.conjugate_full() + &q.conjugate_full()
            );
            prop_assert_eq!(
                (&p * &q).conjugate_full(),
                &p.conjugate_full() * &q.conjugate_full()
            );
        }

        #[test]
        fn component_reconstruction(p in arb_bipoly()) {
            let mut sum = BiPoly::zero();
            for m in p.component_support() {
                let part = &p.component_project(m).substitute_radial() * &BiPoly::xi(m);
                sum = &sum + &part;
            }
            prop_assert_eq!(sum, p);
        }

        #[test]
        fn radial_subring_is_closed(p in arb_radial(), q in arb_radial()) {
            let lhs = (&p * &q).component_project(0);
            let rhs = &p.component_project(0) * &q.component_project(0);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn rotate_formal_is_ring_hom(p in arb_bipoly(), q in arb_bipoly()) {
            prop_assert_eq!(
                (&p * &q).rotate_formal(),
                &p.rotate_formal() * &q.rotate_formal()
            );
            prop_assert_eq!(
                (&p + &q).rotate_formal(),
                &p.rotate_formal() + &q.rotate_formal()
            );
            prop_assert_eq!(p.rotate_formal().specialize_t1(), p.clone());
        }

        #[test]
        fn degree_is_additive(p in arb_bipoly(), q in arb_bipoly()) {
            if !p.is_zero() && !q.is_zero() {
                prop_assert_eq!((&p * &q).degree(), p.degree() + q.degree());
            }
        }
    }
}
