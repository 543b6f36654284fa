//! Dense univariate polynomials in `q` with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational scalar, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,
}

/// A polynomial stored as its coefficient vector, index `i` holding the
/// coefficient of `q^i`.
///
/// The highest stored coefficient is never zero; the zero polynomial is the
/// empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The variable `q`.
    pub fn q() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * q^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self { coeffs }
    }

    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Ascending integer coefficients, handy for literals in tests.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `q^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// Degree, with `None` standing for the degree of the zero polynomial.
    ///
    /// `Option`'s ordering puts `None` below every `Some(d)`, so degree
    /// comparisons stay total.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// True for nonzero constants as well as zero.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(One::is_one)
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => Self::zero(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplicity of `q` as a factor, i.e. the index of the lowest nonzero
    /// coefficient. Zero for the zero polynomial.
    pub fn q_valuation(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Multiplies by `q^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Divides by `q^k`; the caller guarantees `k <= q_valuation()`.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.is_zero() || k <= self.q_valuation());
        Self::from_coeffs(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division over the rationals: `self = b * quotient + remainder`
    /// with `deg(remainder) < deg(b)`.
    pub fn div_rem(&self, b: &Polynomial) -> Result<(Polynomial, Polynomial), PolyError> {
        let db = b.degree().ok_or(PolyError::DivisionByZero)?;
        let da = match self.degree() {
            Some(da) if da >= db => da,
            _ => return Ok((Self::zero(), self.clone())),
        };
        let lc_inv = b.coeffs[db].recip();
        let b_monic = b.coeffs[db].is_one();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); da - db + 1];
        for k in (0..=da - db).rev() {
            let top = &rem[k + db];
            if top.is_zero() {
                continue;
            }
            let c = if b_monic { top.clone() } else { top * &lc_inv };
            for (j, bj) in b.coeffs.iter().enumerate() {
                if !bj.is_zero() {
                    rem[k + j] -= &c * bj;
                }
            }
            quot[k] = c;
        }
        rem.truncate(db);
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// Quotient when `b` divides `self` exactly, `None` otherwise (or when `b` is zero).
    pub fn div_exact(&self, b: &Polynomial) -> Option<Polynomial> {
        match self.div_rem(b) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    /// Monic greatest common divisor.
    ///
    /// Runs a primitive pseudo-remainder sequence over the integers after
    /// clearing denominators, which keeps coefficient growth in check.
    pub fn gcd(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Err(PolyError::GcdOfZeros),
            (true, false) => return Ok(other.monic()),
            (false, true) => return Ok(self.monic()),
            _ => {}
        }
        if self.is_constant() || other.is_constant() {
            return Ok(Self::one());
        }
        let mut a = primitive_part(&self.coeffs);
        let mut b = primitive_part(&other.coeffs);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            let r = pseudo_rem(&a, &b);
            if r.is_empty() {
                break;
            }
            if r.len() == 1 {
                return Ok(Self::one());
            }
            a = b;
            b = primitive_part_int(r);
        }
        Ok(Self::from_coeffs(b.into_iter().map(Rational::from_integer).collect()).monic())
    }

    /// `p(q^m)`.
    pub fn compose_power(&self, m: u64) -> Polynomial {
        assert!(m >= 1, "compose_power: m must be positive");
        if m == 1 || self.is_constant() {
            return self.clone();
        }
        let m = usize::try_from(m).expect("exponent fits in usize");
        let deg = self.coeffs.len() - 1;
        let mut coeffs = vec![Rational::zero(); deg * m + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * m] = c.clone();
        }
        Self { coeffs }
    }

    /// Exact value at `x` by Horner's rule.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// The dilated quantum integer `[n]_{q^r} = 1 + q^r + ... + q^{r(n-1)}`.
    pub fn quantum_integer(n: u64, r: u64) -> Polynomial {
        assert!(n >= 1 && r >= 1, "quantum_integer: n and r must be positive");
        let (n, r) = (n as usize, r as usize);
        let mut coeffs = vec![Rational::zero(); r * (n - 1) + 1];
        for i in 0..n {
            coeffs[i * r] = Rational::one();
        }
        Self { coeffs }
    }

    /// `q^k - 1`.
    pub fn q_power_minus_one(k: u64) -> Polynomial {
        let k = usize::try_from(k).expect("exponent fits in usize");
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[0] = -Rational::one();
        coeffs[k] += Rational::one();
        Self::from_coeffs(coeffs)
    }

    fn add_impl(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            let b = other.coeffs.get(i);
            coeffs.push(match (a, b) {
                (Some(a), Some(b)) if negate => a - b,
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) if negate => -b,
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::from_coeffs(coeffs)
    }

    fn mul_impl(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Self::from_coeffs(coeffs)
    }
}

fn lcm_of_denominators(coeffs: &[Rational]) -> BigInt {
    coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

/// Integer primitive part of a rational coefficient vector, leading coefficient positive.
fn primitive_part(coeffs: &[Rational]) -> Vec<BigInt> {
    let l = lcm_of_denominators(coeffs);
    let ints = coeffs.iter().map(|c| c.numer() * (&l / c.denom())).collect();
    primitive_part_int(ints)
}

fn primitive_part_int(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let content = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let negate = v.last().is_some_and(Signed::is_negative);
    if !content.is_zero() && !content.is_one() {
        for c in v.iter_mut() {
            *c /= &content;
        }
    }
    if negate {
        for c in v.iter_mut() {
            *c = -&*c;
        }
    }
    v
}

/// Pseudo-remainder of `a` by `b` (both trimmed, `b` nonempty).
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    while r.len() > db {
        let top = r.last().cloned().expect("nonempty");
        let shift = r.len() - 1 - db;
        if !lb.is_one() {
            for c in r.iter_mut() {
                *c *= lb;
            }
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                r[shift + j] -= &top * bj;
            }
        }
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                let f: fn(&Polynomial, &Polynomial) -> Polynomial = $body;
                f(self, rhs)
            }
        }
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_impl(b, false));
forward_binop!(Sub, sub, |a, b| a.add_impl(b, true));
forward_binop!(Mul, mul, |a, b| a.mul_impl(b));

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

/// Descending-power text such as `q^2 - q + 1` or `3/2*q - 1/2`, parseable
/// by [`crate::expr::parse_expr`].
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let var = match k {
                0 => None,
                1 => Some("q".to_string()),
                _ => Some(format!("q^{k}")),
            };
            match var {
                None => write!(f, "{mag}")?,
                Some(v) if mag.is_one() => f.write_str(&v)?,
                Some(v) => write!(f, "{mag}*{v}")?,
            }
        }
        Ok(())
    }
}
