//! Classification of the rotation-invariant operators in `A_2`: the
//! term-wise parameter test `a1 - a2 = b1 - b2`, a formal-rotation oracle,
//! factorization of invariant basis elements into the four generators
//! `z*zb`, `z*dz`, `zb*dzb`, `dz*dzb`, and rewriting whole operators over
//! that generating set.

use crate::poly::BiPoly;
use crate::scalar::{stirling_first, GaussRational, Rational};
use crate::weyl::WeylOp2;
use crate::Error;
use num_traits::{One, Zero};
use std::fmt;

/// True when every canonical term of `d` satisfies `a1 - a2 = b1 - b2`.
///
/// Sufficiency is term-wise; necessity of the term-wise check holds because
/// an invariant operator lies in the span of invariant basis elements.
pub fn is_rotation_invariant(d: &WeylOp2) -> bool {
    d.terms()
        .all(|(&(a1, b1, a2, b2), _)| a1 as i64 - a2 as i64 == b1 as i64 - b2 as i64)
}

/// Formal-rotation oracle: compares `D` applied to the rotated polynomial
/// with the rotation of `D` applied to the polynomial, as identities in the
/// formal rotation unit `t`.
pub fn commutes_with_formal_rotation(d: &WeylOp2, p: &BiPoly) -> bool {
    d.apply_rot(&p.rotate_formal()) == d.apply(p).rotate_formal()
}

/// A product of generator powers
/// `(z*zb)^radial * (z*dz)^euler_z... ` — precisely,
/// `(z zb)^radial (z^e dz^e) (zb^f dzb^f) (dz dzb)^laplace` with the four
/// factors in this fixed order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GeneratorWord {
    pub radial: u32,
    pub euler_z: u32,
    pub euler_zb: u32,
    pub laplace: u32,
}

impl GeneratorWord {
    /// Multiplies the word out in `A_2`. The factor order never moves a
    /// derivative past a matching multiplication, so the result is a single
    /// canonical monomial.
    pub fn expand(&self) -> WeylOp2 {
        let one = GaussRational::one();
        let radial = WeylOp2::term(self.radial, self.radial, 0, 0, one.clone());
        let euler_z = WeylOp2::term(self.euler_z, 0, self.euler_z, 0, one.clone());
        let euler_zb = WeylOp2::term(0, self.euler_zb, 0, self.euler_zb, one.clone());
        let laplace = WeylOp2::term(0, 0, self.laplace, self.laplace, one);
        &(&(&radial * &euler_z) * &euler_zb) * &laplace
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "R^{} * Ez^{} * Ebz^{} * L^{}",
            self.radial, self.euler_z, self.euler_zb, self.laplace
        )
    }
}

/// Factors the canonical basis element with exponents `(a1, b1, a2, b2)`
/// into a `GeneratorWord`, following the three case branches in order:
/// `a1 <= a2`, then `a1 <= b1`, then `a1 > a2 && a1 > b1`.
pub fn factor_invariant_basis_element(
    a1: u32,
    b1: u32,
    a2: u32,
    b2: u32,
) -> Result<GeneratorWord, Error> {
    if a1 as i64 - a2 as i64 != b1 as i64 - b2 as i64 {
        return Err(Error::NotRotationInvariant);
    }
    let word = if a1 <= a2 {
        GeneratorWord {
            radial: 0,
            euler_z: a1,
            euler_zb: b1,
            laplace: a2 - a1,
        }
    } else if a1 <= b1 {
        GeneratorWord {
            radial: a1,
            euler_z: 0,
            euler_zb: b1 - a1,
            laplace: a2,
        }
    } else {
        // a1 > a2 and a1 > b1; here b2 = a2 + b1 - a1 >= 0.
        GeneratorWord {
            radial: b1,
            euler_z: a1 - b1,
            euler_zb: 0,
            laplace: a2 + b1 - a1,
        }
    };
    Ok(word)
}

/// Coefficients of `z^n dz^n` as a polynomial in the single operator
/// `z*dz`: entry `m` is the Stirling number `s(n, m)` of the first kind.
pub fn euler_power_expand(n: u32) -> Vec<Rational> {
    (0..=n).map(|m| stirling_first(n, m)).collect()
}

/// One of the four generators of the rotation-invariant subalgebra.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Generator {
    /// `z*zb`
    Radial,
    /// `z*dz`
    EulerZ,
    /// `zb*dzb`
    EulerZb,
    /// `dz*dzb`
    Laplace,
}

impl Generator {
    pub fn as_op(&self) -> WeylOp2 {
        let one = GaussRational::one();
        match self {
            Generator::Radial => WeylOp2::term(1, 1, 0, 0, one),
            Generator::EulerZ => WeylOp2::term(1, 0, 1, 0, one),
            Generator::EulerZb => WeylOp2::term(0, 1, 0, 1, one),
            Generator::Laplace => WeylOp2::term(0, 0, 1, 1, one),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Generator::Radial => "R",
            Generator::EulerZ => "Ez",
            Generator::EulerZb => "Ebz",
            Generator::Laplace => "L",
        }
    }
}

/// Expression tree over the four generators with scalar coefficients.
/// Products are order-preserving; evaluation multiplies in `A_2`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GenExpr {
    Scalar(GaussRational),
    Gen(Generator),
    Pow(Generator, u32),
    Sum(Vec<GenExpr>),
    Prod(Vec<GenExpr>),
}

impl GenExpr {
    pub fn evaluate(&self) -> WeylOp2 {
        match self {
            GenExpr::Scalar(c) => WeylOp2::constant(c.clone()),
            GenExpr::Gen(g) => g.as_op(),
            GenExpr::Pow(g, n) => g.as_op().pow(*n),
            GenExpr::Sum(terms) => terms
                .iter()
                .fold(WeylOp2::zero(), |acc, t| &acc + &t.evaluate()),
            GenExpr::Prod(factors) => factors
                .iter()
                .fold(WeylOp2::one(), |acc, t| &acc * &t.evaluate()),
        }
    }

    /// Splits off a leading real or pure-imaginary sign for rendering.
    fn sign_split(&self) -> (bool, GenExpr) {
        use num_traits::Signed;
        let split_scalar = |c: &GaussRational| -> Option<GaussRational> {
            let negative_real = c.is_real() && c.re().is_negative();
            let negative_imaginary = c.re().is_zero() && c.im().is_negative();
            (negative_real || negative_imaginary).then(|| -c)
        };
        match self {
            GenExpr::Scalar(c) => match split_scalar(c) {
                Some(m) => (true, GenExpr::Scalar(m)),
                None => (false, self.clone()),
            },
            GenExpr::Prod(factors) => {
                if let Some(GenExpr::Scalar(c)) = factors.first() {
                    if let Some(m) = split_scalar(c) {
                        let mut rest = factors.clone();
                        if m.is_one() && rest.len() > 1 {
                            rest.remove(0);
                            let inner = if rest.len() == 1 {
                                rest.pop().unwrap()
                            } else {
                                GenExpr::Prod(rest)
                            };
                            return (true, inner);
                        }
                        rest[0] = GenExpr::Scalar(m);
                        return (true, GenExpr::Prod(rest));
                    }
                }
                (false, self.clone())
            }
            _ => (false, self.clone()),
        }
    }
}

impl fmt::Display for GenExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenExpr::Scalar(c) => {
                if c.is_real() || c.re().is_zero() {
                    write!(f, "{c}")
                } else {
                    write!(f, "({c})")
                }
            }
            GenExpr::Gen(g) => write!(f, "{}", g.symbol()),
            GenExpr::Pow(g, n) => write!(f, "{}^{}", g.symbol(), n),
            GenExpr::Sum(terms) => {
                for (idx, term) in terms.iter().enumerate() {
                    let (neg, body) = term.sign_split();
                    if idx == 0 {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else if neg {
                        write!(f, " - ")?;
                    } else {
                        write!(f, " + ")?;
                    }
                    write!(f, "{body}")?;
                }
                Ok(())
            }
            GenExpr::Prod(factors) => {
                for (idx, factor) in factors.iter().enumerate() {
                    if idx > 0 {
                        write!(f, " * ")?;
                    }
                    if matches!(factor, GenExpr::Sum(_)) {
                        write!(f, "({factor})")?;
                    } else {
                        write!(f, "{factor}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

fn euler_polynomial(gen: Generator, n: u32) -> GenExpr {
    if n == 1 {
        return GenExpr::Gen(gen);
    }
    let mut terms = Vec::new();
    for (m, s) in euler_power_expand(n).into_iter().enumerate().skip(1).rev() {
        if s.is_zero() {
            continue;
        }
        let power = if m == 1 {
            GenExpr::Gen(gen)
        } else {
            GenExpr::Pow(gen, m as u32)
        };
        if s.is_one() {
            terms.push(power);
        } else {
            terms.push(GenExpr::Prod(vec![
                GenExpr::Scalar(GaussRational::from_rational(s)),
                power,
            ]));
        }
    }
    GenExpr::Sum(terms)
}

/// Rewrites a rotation-invariant operator as an expression over the
/// generating set `{z*zb, z*dz, zb*dzb, dz*dzb}`: each canonical term is
/// factored into a `GeneratorWord` and the Euler factors `z^n dz^n` are
/// expanded through Stirling numbers.
pub fn rewrite_in_generators(d: &WeylOp2) -> Result<GenExpr, Error> {
    let mut terms = Vec::new();
    let mut keys: Vec<_> = d.terms().collect();
    keys.sort_by_key(|(&(a1, b1, a2, b2), _)| std::cmp::Reverse((a1 + b1 + a2 + b2, a1, b1, a2)));
    for (&(a1, b1, a2, b2), c) in keys {
        let word = factor_invariant_basis_element(a1, b1, a2, b2)?;
        let mut factors = Vec::new();
        if !c.is_one() || (word.radial == 0 && word.euler_z == 0 && word.euler_zb == 0 && word.laplace == 0)
        {
            factors.push(GenExpr::Scalar(c.clone()));
        }
        if word.radial > 0 {
            factors.push(if word.radial == 1 {
                GenExpr::Gen(Generator::Radial)
            } else {
                GenExpr::Pow(Generator::Radial, word.radial)
            });
        }
        if word.euler_z > 0 {
            factors.push(euler_polynomial(Generator::EulerZ, word.euler_z));
        }
        if word.euler_zb > 0 {
            factors.push(euler_polynomial(Generator::EulerZb, word.euler_zb));
        }
        if word.laplace > 0 {
            factors.push(if word.laplace == 1 {
                GenExpr::Gen(Generator::Laplace)
            } else {
                GenExpr::Pow(Generator::Laplace, word.laplace)
            });
        }
        terms.push(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            GenExpr::Prod(factors)
        });
    }
    Ok(if terms.len() == 1 {
        terms.pop().unwrap()
    } else {
        GenExpr::Sum(terms)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64) -> GaussRational {
        GaussRational::from_integer(n)
    }

    #[test]
    fn invariance_examples() {
        assert!(is_rotation_invariant(&WeylOp2::laplacian()));
        assert!(!is_rotation_invariant(&WeylOp2::term(1, 0, 0, 1, g(1))));
        // (1 - z*zb) dz*dzb + z*dz has three invariant canonical terms.
        let d = &(&WeylOp2::laplacian() - &WeylOp2::term(1, 1, 1, 1, g(1)))
            + &WeylOp2::term(1, 0, 1, 0, g(1));
        assert!(is_rotation_invariant(&d));
    }

    #[test]
    fn formal_rotation_examples() {
        let lap = WeylOp2::laplacian();
        assert!(commutes_with_formal_rotation(
            &lap,
            &BiPoly::monomial(2, 1, g(1))
        ));
        // z*dzb on zb: left side z * t^{-1}, right side z * t.
        let zdzb = WeylOp2::term(1, 0, 0, 1, g(1));
        assert!(!commutes_with_formal_rotation(
            &zdzb,
            &BiPoly::monomial(0, 1, g(1))
        ));
        let angular = WeylOp2::angular();
        for i in 0..=3u32 {
            for j in 0..=3 - i {
                assert!(commutes_with_formal_rotation(
                    &angular,
                    &BiPoly::monomial(i, j, g(1))
                ));
            }
        }
    }

    #[test]
    fn factor_examples() {
        assert_eq!(
            factor_invariant_basis_element(1, 2, 1, 2).unwrap(),
            GeneratorWord { radial: 0, euler_z: 1, euler_zb: 2, laplace: 0 }
        );
        assert_eq!(
            factor_invariant_basis_element(1, 1, 0, 0).unwrap(),
            GeneratorWord { radial: 1, euler_z: 0, euler_zb: 0, laplace: 0 }
        );
        assert_eq!(
            factor_invariant_basis_element(2, 1, 1, 0).unwrap(),
            GeneratorWord { radial: 1, euler_z: 1, euler_zb: 0, laplace: 0 }
        );
        assert_eq!(
            factor_invariant_basis_element(1, 0, 0, 0),
            Err(Error::NotRotationInvariant)
        );
    }

    #[test]
    fn factor_round_trip_exhaustive() {
        // Every invariant quadruple with entries <= 5 expands back to itself.
        for a1 in 0..=5u32 {
            for b1 in 0..=5u32 {
                for a2 in 0..=5u32 {
                    let b2 = a2 as i64 + b1 as i64 - a1 as i64;
                    if !(0..=5).contains(&b2) {
                        continue;
                    }
                    let b2 = b2 as u32;
                    let word = factor_invariant_basis_element(a1, b1, a2, b2).unwrap();
                    assert_eq!(
                        word.expand(),
                        WeylOp2::term(a1, b1, a2, b2, g(1)),
                        "({a1},{b1},{a2},{b2})"
                    );
                }
            }
        }
    }

    #[test]
    fn euler_power_examples() {
        let one = Rational::from_integer(1.into());
        assert_eq!(euler_power_expand(1), vec![Rational::from_integer(0.into()), one.clone()]);
        // n = 2: (z dz)^2 - (z dz)
        assert_eq!(
            euler_power_expand(2),
            vec![
                Rational::from_integer(0.into()),
                Rational::from_integer((-1).into()),
                one.clone(),
            ]
        );
        // n = 3: (z dz)^3 - 3 (z dz)^2 + 2 (z dz)
        assert_eq!(
            euler_power_expand(3),
            vec![
                Rational::from_integer(0.into()),
                Rational::from_integer(2.into()),
                Rational::from_integer((-3).into()),
                one,
            ]
        );
    }

    #[test]
    fn euler_power_evaluates_to_operator() {
        for n in 1..=5u32 {
            let euler = WeylOp2::term(1, 0, 1, 0, g(1));
            let mut acc = WeylOp2::zero();
            for (m, s) in euler_power_expand(n).into_iter().enumerate() {
                acc = &acc + &euler.pow(m as u32).scale(&GaussRational::from_rational(s));
            }
            assert_eq!(acc, WeylOp2::term(n, 0, n, 0, g(1)));
        }
    }

    #[test]
    fn rewrite_examples() {
        // z^2 dz^2 -> Ez^2 - Ez
        let d = WeylOp2::term(2, 0, 2, 0, g(1));
        let expr = rewrite_in_generators(&d).unwrap();
        assert_eq!(expr.evaluate(), d);
        assert_eq!(expr.to_string(), "Ez^2 - Ez");

        // z zb dz dzb is already a generator word; the first case branch
        // picks the Euler pairing, which expands to the same operator.
        let d = WeylOp2::term(1, 1, 1, 1, g(1));
        let expr = rewrite_in_generators(&d).unwrap();
        assert_eq!(expr.evaluate(), d);
        assert_eq!(expr.to_string(), "Ez * Ebz");

        // z zb^2 dz dzb^2 -> Ez * (Ebz^2 - Ebz)
        let d = WeylOp2::term(1, 2, 1, 2, g(1));
        let expr = rewrite_in_generators(&d).unwrap();
        assert_eq!(expr.evaluate(), d);
        assert_eq!(expr.to_string(), "Ez * (Ebz^2 - Ebz)");

        assert!(rewrite_in_generators(&WeylOp2::term(1, 0, 0, 1, g(1))).is_err());
    }

    #[test]
    fn closure_under_ring_operations() {
        // Products and sums of invariant operators stay invariant.
        let samples = [
            WeylOp2::laplacian(),
            WeylOp2::angular(),
            WeylOp2::term(1, 1, 0, 0, g(3)),
            WeylOp2::term(2, 1, 2, 1, g(-2)),
            &WeylOp2::term(1, 0, 1, 0, g(1)) + &WeylOp2::constant(g(5)),
        ];
        for d1 in &samples {
            for d2 in &samples {
                assert!(is_rotation_invariant(&(d1 * d2)));
                assert!(is_rotation_invariant(&(d1 + d2)));
            }
        }
    }
}
