//! Exact scalar arithmetic: big-integer rationals, Gaussian rationals and
//! the combinatorial primitives (Pochhammer symbols, Stirling numbers,
//! binomial coefficients) that the operator formulas consume.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Mutex;

/// Exact rational number with a positive, reduced denominator.
pub type Rational = num_rational::BigRational;

/// A Gaussian rational `re + im*i`, the scalar field for every coefficient
/// in this crate.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GaussRational {
    re: Rational,
    im: Rational,
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRational { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        GaussRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// The ratio `p/q` as a real scalar. Panics when `q = 0`.
    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::from_rational(Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussRational {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    /// True when the imaginary part vanishes.
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// True when the value is an integer in `ℤ`.
    pub fn is_integer(&self) -> bool {
        self.is_real() && self.re.is_integer()
    }

    /// True when the value is a non-negative integer.
    pub fn is_natural(&self) -> bool {
        self.is_integer() && !self.re.is_negative()
    }

    /// Complex conjugate `re - im*i`.
    pub fn conj(&self) -> Self {
        GaussRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `re² + im²`; zero exactly when the value is zero.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "division by zero GaussRational");
        GaussRational {
            re: &self.re / &n,
            im: -&self.im / &n,
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl From<i64> for GaussRational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<Rational> for GaussRational {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl Add for &GaussRational {
    type Output = GaussRational;
    fn add(self, rhs: &GaussRational) -> GaussRational {
        GaussRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &GaussRational {
    type Output = GaussRational;
    fn sub(self, rhs: &GaussRational) -> GaussRational {
        GaussRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussRational {
    type Output = GaussRational;
    fn mul(self, rhs: &GaussRational) -> GaussRational {
        GaussRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for &GaussRational {
    type Output = GaussRational;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &GaussRational) -> GaussRational {
        self * &rhs.inv()
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for GaussRational {
            type Output = GaussRational;
            fn $method(self, rhs: GaussRational) -> GaussRational {
                $trait::$method(&self, &rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl Neg for GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        -&self
    }
}

fn rational_str(r: &Rational) -> String {
    r.to_string()
}

impl fmt::Display for GaussRational {
    /// Canonical text form: `p/q`, `r/s*i` or `p/q+r/s*i`, with `i` spelled
    /// out and unit imaginary parts shortened to `i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", rational_str(&self.re));
        }
        let im_abs = self.im.abs();
        let im_part = if im_abs.is_one() {
            "i".to_string()
        } else {
            format!("{}*i", rational_str(&im_abs))
        };
        if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-{im_part}")
            } else {
                write!(f, "{im_part}")
            }
        } else {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            write!(f, "{}{}{}", rational_str(&self.re), sign, im_part)
        }
    }
}

/// Error raised when a scalar literal does not match the text grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarParseError(pub String);

impl fmt::Display for ScalarParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid scalar literal: {}", self.0)
    }
}

impl std::error::Error for ScalarParseError {}

impl FromStr for GaussRational {
    type Err = ScalarParseError;

    /// Parses the canonical text form emitted by `Display`: an optional
    /// leading sign, a real part, and an optional signed imaginary part
    /// (`3`, `-3/2`, `i`, `2*i`, `1/2+3/4*i`, ...).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ScalarParseError("empty string".into()));
        }
        // Split into at most two signed parts at '+'/'-' boundaries that are
        // not the leading character.
        let bytes = s.as_bytes();
        let mut split = None;
        for (idx, &b) in bytes.iter().enumerate().skip(1) {
            if b == b'+' || b == b'-' {
                if split.is_some() {
                    return Err(ScalarParseError(s.into()));
                }
                split = Some(idx);
            }
        }
        let parse_part = |part: &str| -> Result<(Rational, bool), ScalarParseError> {
            // Returns (value, is_imaginary).
            let (neg, body) = match part.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, part.strip_prefix('+').unwrap_or(part)),
            };
            let (is_im, num) = if body == "i" {
                (true, "1".to_string())
            } else if let Some(rest) = body.strip_suffix("*i") {
                (true, rest.to_string())
            } else {
                (false, body.to_string())
            };
            let mut value =
                Rational::from_str(&num).map_err(|_| ScalarParseError(part.into()))?;
            if neg {
                value = -value;
            }
            Ok((value, is_im))
        };
        let (first, second) = match split {
            Some(idx) => (&s[..idx], Some(&s[idx..])),
            None => (s, None),
        };
        let (v1, im1) = parse_part(first)?;
        match second {
            None => Ok(if im1 {
                GaussRational::new(Rational::zero(), v1)
            } else {
                GaussRational::from_rational(v1)
            }),
            Some(rest) => {
                let (v2, im2) = parse_part(rest)?;
                if im1 || !im2 {
                    return Err(ScalarParseError(s.into()));
                }
                Ok(GaussRational::new(v1, v2))
            }
        }
    }
}

/// Total bit-length of all numerators and denominators; a cheap size
/// measure for pivot selection and growth guards.
pub(crate) fn bit_weight(v: &GaussRational) -> u64 {
    v.re.numer().bits() + v.re.denom().bits() + v.im.numer().bits() + v.im.denom().bits()
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n as u64 {
        acc *= k;
    }
    acc
}

/// Falling factorial `b(b-1)...(b-k+1)` of a non-negative integer `b`;
/// zero when `k > b`.
pub fn falling(b: u32, k: u32) -> BigInt {
    if k > b {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k as u64 {
        acc *= b as u64 - j;
    }
    acc
}

fn binomial_int(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n as u64 - j as u64) / (j as u64 + 1);
    }
    acc
}

/// Binomial coefficient `C(n, k)`, zero for `k > n`.
pub fn binomial(n: u32, k: u32) -> Rational {
    Rational::from_integer(binomial_int(n, k))
}

/// Rising factorial `(a)_n = a(a+1)...(a+n-1)`, with `(a)_0 = 1`.
///
/// For `a` a negative integer the product is exactly zero once `n`
/// passes the terminating index `-a`; callers rely on those exact zeros.
pub fn pochhammer(a: &GaussRational, n: u32) -> GaussRational {
    let mut acc = GaussRational::one();
    let mut factor = a.clone();
    let one = GaussRational::one();
    for _ in 0..n {
        acc = &acc * &factor;
        factor = &factor + &one;
    }
    acc
}

/// Rising factorial over the rationals.
pub fn pochhammer_rat(a: &Rational, n: u32) -> Rational {
    let mut acc = Rational::one();
    let mut factor = a.clone();
    for _ in 0..n {
        acc *= &factor;
        factor += Rational::one();
    }
    acc
}

static STIRLING_ROWS: Mutex<Vec<Vec<BigInt>>> = Mutex::new(Vec::new());

/// Signed Stirling number of the first kind `s(n, m)`: the coefficient of
/// `x^m` in the falling factorial `x(x-1)...(x-n+1)`. Zero for `m > n`.
///
/// Rows are built by the recurrence `s(n+1, m) = s(n, m-1) - n*s(n, m)` and
/// cached; the cache is transparent to callers.
pub fn stirling_first(n: u32, m: u32) -> Rational {
    if m > n {
        return Rational::zero();
    }
    let mut rows = STIRLING_ROWS.lock().unwrap();
    if rows.is_empty() {
        rows.push(vec![BigInt::one()]);
    }
    while rows.len() <= n as usize {
        let prev = rows.last().unwrap();
        let k = rows.len(); // building row k from row k-1
        let mut row = vec![BigInt::zero(); k + 1];
        for (m, entry) in row.iter_mut().enumerate() {
            let from_shift = if m >= 1 { prev[m - 1].clone() } else { BigInt::zero() };
            let from_scale = if m < prev.len() {
                &prev[m] * (k as u64 - 1)
            } else {
                BigInt::zero()
            };
            *entry = from_shift - from_scale;
        }
        rows.push(row);
    }
    Rational::from_integer(rows[n as usize][m as usize].clone())
}
