//! Canonical forms and arithmetic for the Weyl algebras `A_2` and `A_1`.
//!
//! Elements of `A_2` are kept in the canonical basis
//! `z^a1 * zb^b1 * dz^a2 * dzb^b2`; every product is renormalized on the
//! spot through the closed form
//! `dz^a z^b = sum_k C(a,k) b(b-1)...(b-k+1) z^{b-k} dz^{a-k}`
//! (and its barred analogue), so map equality is operator equality.

use crate::poly::{format_term_sum, join_powers, power_text, BiPoly, RotPoly, UniPoly};
use crate::scalar::{binomial, falling, GaussRational, Rational};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Canonical-form element of the second Weyl algebra.
///
/// Keys are exponent quadruples `(a1, b1, a2, b2)` standing for
/// `z^a1 zb^b1 dz^a2 dzb^b2`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct WeylOp2 {
    terms: BTreeMap<(u32, u32, u32, u32), GaussRational>,
}

/// Canonical-form element of the first Weyl algebra: keys `(a, b)` stand
/// for `x^a d^b/dx^b`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct WeylOp1 {
    terms: BTreeMap<(u32, u32), GaussRational>,
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

impl WeylOp2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(0, 0, 0, 0, GaussRational::one())
    }

    pub fn constant(c: GaussRational) -> Self {
        Self::term(0, 0, 0, 0, c)
    }

    pub fn term(a1: u32, b1: u32, a2: u32, b2: u32, c: GaussRational) -> Self {
        let mut op = Self::zero();
        op.add_term(a1, b1, a2, b2, c);
        op
    }

    /// Multiplication by `z`.
    pub fn z() -> Self {
        Self::term(1, 0, 0, 0, GaussRational::one())
    }

    /// Multiplication by `zb`.
    pub fn zb() -> Self {
        Self::term(0, 1, 0, 0, GaussRational::one())
    }

    pub fn dz() -> Self {
        Self::term(0, 0, 1, 0, GaussRational::one())
    }

    pub fn dzb() -> Self {
        Self::term(0, 0, 0, 1, GaussRational::one())
    }

    /// The angular derivative `A = z*dz - zb*dzb`.
    pub fn angular() -> Self {
        &Self::term(1, 0, 1, 0, GaussRational::one()) - &Self::term(0, 1, 0, 1, GaussRational::one())
    }

    /// The Laplace-type generator `dz*dzb`.
    pub fn laplacian() -> Self {
        Self::term(0, 0, 1, 1, GaussRational::one())
    }

    pub fn add_term(&mut self, a1: u32, b1: u32, a2: u32, b2: u32, c: GaussRational) {
        add_key(&mut self.terms, (a1, b1, a2, b2), c);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32, u32, u32), &GaussRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The order of the operator: the largest total derivative exponent
    /// `a2 + b2` over all canonical terms. Zero for the zero operator.
    pub fn order(&self) -> u32 {
        self.terms
            .keys()
            .map(|&(_, _, a2, b2)| a2 + b2)
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        let mut out = Self::zero();
        for (&k, v) in &self.terms {
            add_key(&mut out.terms, k, v * c);
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

    /// Conjugation in the operator sense: `f(z, zb, dz, dzb)` becomes
    /// `f(zb, z, dzb, dz)`; coefficients are untouched.
    pub fn conjugate(&self) -> Self {
        let mut out = Self::zero();
        for (&(a1, b1, a2, b2), c) in &self.terms {
            out.add_term(b1, a1, b2, a2, c.clone());
        }
        out
    }

    /// `self * rhs - rhs * self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        &(self * rhs) - &(rhs * self)
    }

    /// Applies the operator to a polynomial: each canonical term
    /// differentiates first and multiplies afterwards.
    pub fn apply(&self, p: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(a1, b1, a2, b2), c) in &self.terms {
            for (&(i, j), w) in p.terms() {
                if a2 > i || b2 > j {
                    continue;
                }
                let factor = Rational::from_integer(falling(i, a2) * falling(j, b2));
                let coeff = &(c * w) * &GaussRational::from_rational(factor);
                out.add_term(i - a2 + a1, j - b2 + b1, coeff);
            }
        }
        out
    }

    /// Applies the operator to a formal-rotation polynomial, treating the
    /// rotation unit `t` as a scalar constant.
    pub fn apply_rot(&self, p: &RotPoly) -> RotPoly {
        let mut out = RotPoly::zero();
        for (t_exp, slice) in p.t_slices() {
            let image = self.apply(&slice);
            for (&(i, j), c) in image.terms() {
                out.add_term(i, j, t_exp, c.clone());
            }
        }
        out
    }
}

impl WeylOp1 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(0, 0, GaussRational::one())
    }

    pub fn constant(c: GaussRational) -> Self {
        Self::term(0, 0, c)
    }

    pub fn term(a: u32, b: u32, c: GaussRational) -> Self {
        let mut op = Self::zero();
        add_key(&mut op.terms, (a, b), c);
        op
    }

    pub fn add_term(&mut self, a: u32, b: u32, c: GaussRational) {
        add_key(&mut self.terms, (a, b), c);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &GaussRational)> {
        self.terms.iter()
    }

    pub fn order(&self) -> u32 {
        self.terms.keys().map(|&(_, b)| b).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        let mut out = Self::zero();
        for (&k, v) in &self.terms {
            add_key(&mut out.terms, k, v * c);
        }
        out
    }

    /// Applies `x^a d^b/dx^b` term-wise.
    pub fn apply(&self, p: &UniPoly) -> UniPoly {
        let mut out = UniPoly::zero();
        for (&(a, b), c) in &self.terms {
            for (&e, w) in p.terms() {
                if b > e {
                    continue;
                }
                let factor = Rational::from_integer(falling(e, b));
                out.add_term(e - b + a, &(c * w) * &GaussRational::from_rational(factor));
            }
        }
        out
    }
}

macro_rules! impl_additive_ops {
    ($ty:ident) => {
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

impl_additive_ops!(WeylOp2);
impl_additive_ops!(WeylOp1);

impl Mul for &WeylOp2 {
    type Output = WeylOp2;

    /// Composition `self ∘ rhs`, renormalized to canonical form.
    fn mul(self, rhs: &WeylOp2) -> WeylOp2 {
        let mut out = WeylOp2::zero();
        for (&(a1, b1, c1, d1), u) in &self.terms {
            for (&(a2, b2, c2, d2), v) in &rhs.terms {
                let uv = u * v;
                // dz^c1 past z^a2 and dzb^d1 past zb^b2; the two rewrites
                // are independent because mixed generators commute.
                for k in 0..=c1.min(a2) {
                    let zk = binomial(c1, k) * Rational::from_integer(falling(a2, k));
                    for l in 0..=d1.min(b2) {
                        let zl = binomial(d1, l) * Rational::from_integer(falling(b2, l));
                        let coeff = &uv * &GaussRational::from_rational(&zk * &zl);
                        out.add_term(
                            a1 + a2 - k,
                            b1 + b2 - l,
                            c1 + c2 - k,
                            d1 + d2 - l,
                            coeff,
                        );
                    }
                }
            }
        }
        out
    }
}

impl Mul for &WeylOp1 {
    type Output = WeylOp1;

    fn mul(self, rhs: &WeylOp1) -> WeylOp1 {
        let mut out = WeylOp1::zero();
        for (&(a1, b1), u) in &self.terms {
            for (&(a2, b2), v) in &rhs.terms {
                let uv = u * v;
                for k in 0..=b1.min(a2) {
                    let zk = binomial(b1, k) * Rational::from_integer(falling(a2, k));
                    out.add_term(
                        a1 + a2 - k,
                        b1 + b2 - k,
                        &uv * &GaussRational::from_rational(zk),
                    );
                }
            }
        }
        out
    }
}

impl fmt::Display for WeylOp2 {
    /// Canonical text: terms in descending graded-lexicographic order on
    /// `(a1+b1+a2+b2, a1, b1, a2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<&(u32, u32, u32, u32)> = self.terms.keys().collect();
        keys.sort_by_key(|&&(a1, b1, a2, b2)| std::cmp::Reverse((a1 + b1 + a2 + b2, a1, b1, a2)));
        let rendered: Vec<(GaussRational, String)> = keys
            .into_iter()
            .map(|&(a1, b1, a2, b2)| {
                let mono = join_powers(&[
                    power_text("z", a1),
                    power_text("zb", b1),
                    power_text("dz", a2),
                    power_text("dzb", b2),
                ]);
                (self.terms[&(a1, b1, a2, b2)].clone(), mono)
            })
            .collect();
        format_term_sum(f, &rendered)
    }
}

impl fmt::Display for WeylOp1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by_key(|&&(a, b)| std::cmp::Reverse((a + b, a)));
        let rendered: Vec<(GaussRational, String)> = keys
            .into_iter()
            .map(|&(a, b)| {
                let mono = join_powers(&[power_text("x", a), power_text("d", b)]);
                (self.terms[&(a, b)].clone(), mono)
            })
            .collect();
        format_term_sum(f, &rendered)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::One;
    use proptest::prelude::*;

    fn g(re: i64) -> GaussRational {
        GaussRational::from_integer(re)
    }

    fn arb_scalar() -> impl Strategy<Value = GaussRational> {
        (-3i64..=3, -2i64..=2)
            .prop_map(|(re, im)| GaussRational::new(
                Rational::from_integer(BigInt::from(re)),
                Rational::from_integer(BigInt::from(im)),
            ))
    }

    fn arb_op() -> impl Strategy<Value = WeylOp2> {
        proptest::collection::vec(((0u32..=2, 0u32..=2, 0u32..=2, 0u32..=1), arb_scalar()), 0..4)
            .prop_map(|terms| {
                let mut op = WeylOp2::zero();
                for ((a1, b1, a2, b2), c) in terms {
                    op.add_term(a1, b1, a2, b2, c);
                }
                op
            })
    }

    fn arb_poly() -> impl Strategy<Value = BiPoly> {
        proptest::collection::vec(((0u32..=4, 0u32..=4), arb_scalar()), 0..5).prop_map(|terms| {
            let mut p = BiPoly::zero();
            for ((i, j), c) in terms {
                p.add_term(i, j, c);
            }
            p
        })
    }

    #[test]
    fn defining_commutator() {
        // dz * z = z*dz + 1
        let prod = &WeylOp2::dz() * &WeylOp2::z();
        let expected = &WeylOp2::term(1, 0, 1, 0, g(1)) + &WeylOp2::one();
        assert_eq!(prod, expected);
    }

    #[test]
    fn second_order_normalization() {
        // dz^2 * z = z*dz^2 + 2*dz, checked against the application oracle
        // on z^k for k <= 4.
        let lhs = &WeylOp2::term(0, 0, 2, 0, g(1)) * &WeylOp2::z();
        let expected = &WeylOp2::term(1, 0, 2, 0, g(1)) + &WeylOp2::term(0, 0, 1, 0, g(2));
        assert_eq!(lhs, expected);
        for k in 0..=4u32 {
            let p = BiPoly::monomial(k, 0, g(1));
            let via_product = lhs.apply(&p);
            let via_steps = WeylOp2::term(0, 0, 2, 0, g(1)).apply(&WeylOp2::z().apply(&p));
            assert_eq!(via_product, via_steps);
        }
    }

    #[test]
    fn disjoint_variables_commute() {
        let zdz = WeylOp2::term(1, 0, 1, 0, g(1));
        let zbdzb = WeylOp2::term(0, 1, 0, 1, g(1));
        assert_eq!(&zdz * &zbdzb, WeylOp2::term(1, 1, 1, 1, g(1)));
        assert!(zdz.commutator(&zbdzb).is_zero());
    }

    #[test]
    fn apply_examples() {
        // dz*dzb on z^2 zb^2 -> 4 z zb
        let lap = WeylOp2::laplacian();
        assert_eq!(
            lap.apply(&BiPoly::monomial(2, 2, g(1))),
            BiPoly::monomial(1, 1, g(4))
        );
        // angular derivative acts as multiplication by m on x^2 * xi_3
        let p = &UniPoly::monomial(2, g(1)).substitute_radial() * &BiPoly::xi(3);
        assert_eq!(WeylOp2::angular().apply(&p), p.scale(&g(3)));
        // z*dz on z*zb*z = z^2 zb -> 2 z^2 zb
        let zdz = WeylOp2::term(1, 0, 1, 0, g(1));
        assert_eq!(
            zdz.apply(&BiPoly::monomial(2, 1, g(1))),
            BiPoly::monomial(2, 1, g(2))
        );
    }

    #[test]
    fn commutator_examples() {
        let lap = WeylOp2::laplacian();
        let zdz = WeylOp2::term(1, 0, 1, 0, g(1));
        let zbdzb = WeylOp2::term(0, 1, 0, 1, g(1));
        assert_eq!(lap.commutator(&zdz), lap);
        assert_eq!(lap.commutator(&zbdzb), lap);
        // [a4 L + a2 z dz, b4 L + b3 zb dzb] = (a4 b3 - b4 a2) L
        let d1 = &lap.scale(&g(2)) + &zdz;
        let d2 = &lap + &zbdzb;
        let gamma = g(1); // a4(b2+b3) - b4(a2+a3) = 2*1 - 1*1
        assert_eq!(d1.commutator(&d2), lap.scale(&gamma));
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(
            WeylOp2::term(1, 0, 1, 0, g(1)).conjugate(),
            WeylOp2::term(0, 1, 0, 1, g(1))
        );
        assert_eq!(WeylOp2::laplacian().conjugate(), WeylOp2::laplacian());
        assert_eq!(
            WeylOp2::term(2, 0, 0, 1, g(1)).conjugate(),
            WeylOp2::term(0, 2, 1, 0, g(1))
        );
    }

    #[test]
    fn weyl1_apply_examples() {
        let xd = WeylOp1::term(1, 1, g(1));
        assert_eq!(
            xd.apply(&UniPoly::monomial(3, g(1))),
            UniPoly::monomial(3, g(3))
        );
        let d2 = WeylOp1::term(0, 2, g(1));
        assert!(d2.apply(&UniPoly::monomial(1, g(1))).is_zero());
        // (x d^2 + 2 d) x^2 = 2x + 4x = 6x
        let op = &WeylOp1::term(1, 2, g(1)) + &WeylOp1::term(0, 1, g(2));
        assert_eq!(
            op.apply(&UniPoly::monomial(2, g(1))),
            UniPoly::monomial(1, g(6))
        );
    }

    #[test]
    fn canonical_monomial_extraction() {
        // dz^c dzb^d applied to z^c zb^d yields c! d!; applied to any
        // lexicographically smaller pair it yields zero.
        for c in 0..=3u32 {
            for d in 0..=3u32 {
                let op = WeylOp2::term(0, 0, c, d, g(1));
                let image = op.apply(&BiPoly::monomial(c, d, g(1)));
                let expected = BiPoly::constant(GaussRational::from_rational(
                    Rational::from_integer(crate::scalar::factorial(c) * crate::scalar::factorial(d)),
                ));
                assert_eq!(image, expected);
                for cc in 0..=c {
                    for dd in 0..=d {
                        if (cc, dd) < (c, d) {
                            assert!(op.apply(&BiPoly::monomial(cc, dd, g(1))).is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn display_examples() {
        let op = &WeylOp2::term(1, 0, 1, 0, g(1)) + &WeylOp2::one();
        assert_eq!(op.to_string(), "z*dz + 1");
        let t = &WeylOp1::term(1, 2, g(1)) + &WeylOp1::term(0, 1, g(2));
        assert_eq!(t.to_string(), "x*d^2 + 2*d");
        assert_eq!(WeylOp2::zero().to_string(), "0");
    }

    #[test]
    fn weyl1_multiplication_matches_action() {
        let ops = [
            WeylOp1::term(1, 1, g(1)),
            WeylOp1::term(0, 2, g(1)),
            &WeylOp1::term(2, 1, g(-2)) + &WeylOp1::term(0, 0, g(3)),
            WeylOp1::term(1, 2, g(1)),
        ];
        for t1 in &ops {
            for t2 in &ops {
                let prod = t1 * t2;
                for e in 0..=5u32 {
                    let p = UniPoly::monomial(e, g(1));
                    assert_eq!(prod.apply(&p), t1.apply(&t2.apply(&p)));
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn multiplication_is_faithful(d1 in arb_op(), d2 in arb_op(), p in arb_poly()) {
            let via_product = (&d1 * &d2).apply(&p);
            let via_steps = d1.apply(&d2.apply(&p));
            prop_assert_eq!(via_product, via_steps);
        }

        #[test]
        fn jacobi_identity(d1 in arb_op(), d2 in arb_op(), d3 in arb_op()) {
            let lhs = &d1.commutator(&d2.commutator(&d3))
                + &d2.commutator(&d3.commutator(&d1));
            let total = &lhs + &d3.commutator(&d1.commutator(&d2));
            prop_assert!(total.is_zero());
        }

        #[test]
        fn conjugation_is_multiplicative(d1 in arb_op(), d2 in arb_op()) {
            prop_assert_eq!(
                (&d1 * &d2).conjugate(),
                &d1.conjugate() * &d2.conjugate()
            );
        }

        // Cross-check of the canonical-form equality convention: the only
        // operator acting as zero on every monomial is the zero operator.
        #[test]
        fn action_is_faithful(d in arb_op()) {
            let mut acts_as_zero = true;
            'outer: for i in 0..=6u32 {
                for j in 0..=6u32 {
                    if !d.apply(&BiPoly::monomial(i, j, g(1))).is_zero() {
                        acts_as_zero = false;
                        break 'outer;
                    }
                }
            }
            prop_assert_eq!(acts_as_zero, d.is_zero());
        }
    }

    #[test]
    fn one_is_identity() {
        let op = WeylOp2::term(2, 1, 1, 2, GaussRational::new(
            Rational::new(BigInt::from(3), BigInt::from(2)),
            Rational::one(),
        ));
        assert_eq!(&op * &WeylOp2::one(), op);
        assert_eq!(&WeylOp2::one() * &op, op);
    }
}
