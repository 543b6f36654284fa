//! Reduced rational functions over the rationals and their standard form
//! `lambda * q^e * u(q) / v(q)`.

use std::fmt;
use std::ops::Mul;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::{Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatFuncError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by the zero function")]
    DivisionByZero,
    #[error("the zero function has no standard form")]
    ZeroInput,
    #[error("invalid standard form: {0}")]
    InvalidStandardForm(&'static str),
}

/// `numerator / denominator` in lowest terms with a monic denominator.
///
/// Because the representation is canonical, structural equality is equality
/// of functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Reduces `p / d`, folding the leading coefficient of `d` into the numerator.
    pub fn new(p: Polynomial, d: Polynomial) -> Result<Self, RatFuncError> {
        if d.is_zero() {
            return Err(RatFuncError::ZeroDenominator);
        }
        if p.is_zero() {
            return Ok(Self::zero());
        }
        let g = p.gcd(&d).expect("d is nonzero");
        let (p, d) = if g.is_one() {
            (p, d)
        } else {
            (
                p.div_exact(&g).expect("gcd divides"),
                d.div_exact(&g).expect("gcd divides"),
            )
        };
        Ok(Self::normalized(p, d))
    }

    /// Assumes `p` and `d` coprime and `d` nonzero; only fixes the denominator's scale.
    fn normalized(p: Polynomial, d: Polynomial) -> Self {
        let lc = d.leading_coeff().expect("nonzero denominator").clone();
        if lc.is_one() {
            Self { num: p, den: d }
        } else {
            let inv = lc.recip();
            Self {
                num: p.scale(&inv),
                den: d.scale(&inv),
            }
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        Self {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        // Cross-cancel so each factor stays small and the result is already reduced.
        let g1 = self.num.gcd(&other.den).expect("nonzero");
        let g2 = other.num.gcd(&self.den).expect("nonzero");
        let cancel = |p: &Polynomial, g: &Polynomial| {
            if g.is_one() {
                p.clone()
            } else {
                p.div_exact(g).expect("gcd divides")
            }
        };
        let num = &cancel(&self.num, &g1) * &cancel(&other.num, &g2);
        let den = &cancel(&self.den, &g2) * &cancel(&other.den, &g1);
        Self { num, den }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_impl(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_impl(other, true)
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        let rhs = if negate { -&(other.num) } else { other.num.clone() };
        if self.den == other.den {
            return Self::new(&self.num + &rhs, self.den.clone()).expect("nonzero denominator");
        }
        let num = &(&self.num * &other.den) + &(&rhs * &self.den);
        Self::new(num, &self.den * &other.den).expect("nonzero denominator")
    }

    pub fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<Self, RatFuncError> {
        if self.is_zero() {
            return Err(RatFuncError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, RatFuncError> {
        Ok(self.mul(&other.recip()?))
    }

    /// Integer power; `pow(0)` is 1 and negative powers of zero fail.
    pub fn pow(&self, t: i64) -> Result<Self, RatFuncError> {
        let base = if t < 0 { self.recip()? } else { self.clone() };
        let e = u32::try_from(t.unsigned_abs()).expect("exponent out of range");
        if e == 0 {
            return Ok(Self::one());
        }
        // Powers of coprime polynomials stay coprime.
        Ok(Self {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// `f(q^m)`. Substitution preserves coprimality and monicity, so no
    /// further reduction is needed.
    pub fn compose_power(&self, m: u64) -> Self {
        Self {
            num: self.num.compose_power(m),
            den: self.den.compose_power(m),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            num: self.num.scale(c),
            den: if c.is_zero() {
                Polynomial::one()
            } else {
                self.den.clone()
            },
        }
    }

    /// Splits a nonzero function as `lambda * q^e * u / v` with `u`, `v` monic
    /// and nonvanishing at zero.
    pub fn to_standard_form(&self) -> Result<StandardForm, RatFuncError> {
        if self.is_zero() {
            return Err(RatFuncError::ZeroInput);
        }
        let a = self.num.q_valuation();
        let b = self.den.q_valuation();
        let lambda = self.num.leading_coeff().expect("nonzero").clone();
        let u = self.num.shift_down(a).scale(&lambda.recip());
        let v = self.den.shift_down(b);
        Ok(StandardForm {
            lambda,
            e: a as i64 - b as i64,
            u,
            v,
        })
    }

    pub fn from_standard_form(s: &StandardForm) -> Self {
        let (num_shift, den_shift) = if s.e >= 0 {
            (s.e as usize, 0)
        } else {
            (0, s.e.unsigned_abs() as usize)
        };
        Self {
            num: s.u.scale(&s.lambda).shift_up(num_shift),
            den: s.v.shift_up(den_shift),
        }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::mul(self, rhs)
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

/// Same text as [`crate::expr::format_expr`].
impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.num.to_string();
        if self.den.is_one() {
            return f.write_str(&num);
        }
        let single_term = self.num.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1;
        if single_term && !num.contains('/') {
            write!(f, "{num}")?;
        } else {
            write!(f, "({num})")?;
        }
        let den_terms = self.den.coeffs().iter().filter(|c| !c.is_zero()).count();
        if den_terms == 1 {
            // monic single term: a bare power of q
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

/// `lambda * q^e * u(q) / v(q)` with `u`, `v` monic, nonzero constant terms
/// and coprime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StandardForm {
    pub lambda: Rational,
    pub e: i64,
    pub u: Polynomial,
    pub v: Polynomial,
}

impl StandardForm {
    pub fn new(lambda: Rational, e: i64, u: Polynomial, v: Polynomial) -> Result<Self, RatFuncError> {
        let s = Self { lambda, e, u, v };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), RatFuncError> {
        use RatFuncError::InvalidStandardForm as Bad;
        if self.lambda.is_zero() {
            return Err(Bad("lambda must be nonzero"));
        }
        for p in [&self.u, &self.v] {
            if !p.is_monic() {
                return Err(Bad("u and v must be monic"));
            }
            if p.constant_term().is_zero() {
                return Err(Bad("u and v must have nonzero constant terms"));
            }
        }
        if !self.u.gcd(&self.v).expect("nonzero").is_one() {
            return Err(Bad("u and v must be coprime"));
        }
        Ok(())
    }

    /// `deg(u) - deg(v)`.
    pub fn degree_difference(&self) -> i64 {
        let d = |p: &Polynomial| p.degree().expect("nonzero") as i64;
        d(&self.u) - d(&self.v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(p(n), p(d)).unwrap()
    }

    #[test]
    fn make_reduces() {
        assert_eq!(rf(&[-1, 0, 1], &[-1, 1]), RationalFunction::from_poly(p(&[1, 1])));
        assert_eq!(rf(&[1, 0, 0, 1], &[1, 1]), RationalFunction::from_poly(p(&[1, -1, 1])));
        let half = RationalFunction::from_poly(Polynomial::from_coeffs(vec![rat(1, 2), rat(1, 2)]));
        let made = rf(&[2, 2], &[4]);
        assert_eq!(made, half);
        // multiply back: (q/2 + 1/2) * 4 = 2q + 2
        assert_eq!(made.numer().scale(&rat(4, 1)), p(&[2, 2]));
        assert_eq!(
            RationalFunction::new(p(&[1]), Polynomial::zero()),
            Err(RatFuncError::ZeroDenominator)
        );
    }

    #[test]
    fn denominator_is_monic() {
        let f = rf(&[1], &[2, 6]);
        assert!(f.denom().is_monic());
        assert_eq!(f.numer(), &Polynomial::constant(rat(1, 6)));
    }

    #[test]
    fn arithmetic_examples() {
        let q2_3 = RationalFunction::from_poly(Polynomial::quantum_integer(2, 3));
        let q2 = RationalFunction::from_poly(Polynomial::quantum_integer(2, 1));
        assert_eq!(q2_3.div(&q2).unwrap(), RationalFunction::from_poly(p(&[1, -1, 1])));
        assert_eq!(q2.pow(0).unwrap(), RationalFunction::one());
        assert_eq!(q2.pow(-1).unwrap(), rf(&[1], &[1, 1]));
        assert_eq!(RationalFunction::zero().recip(), Err(RatFuncError::DivisionByZero));
        assert_eq!(RationalFunction::zero().pow(-2), Err(RatFuncError::DivisionByZero));
        assert_eq!(q2.div(&RationalFunction::zero()), Err(RatFuncError::DivisionByZero));
    }

    #[test]
    fn compose_examples() {
        assert_eq!(rf(&[1, 1], &[1]).compose_power(2), rf(&[1, 0, 1], &[1]));
        let a = rf(&[3, 1], &[1, 0, 2]);
        assert_eq!(a.compose_power(1), a);
        assert_eq!(rf(&[1, -1, 1], &[1]).compose_power(2), rf(&[1, 0, -1, 0, 1], &[1]));
    }

    #[test]
    fn standard_form_examples() {
        let s = rf(&[0, 0, 0, 2, 2], &[0, 4]).to_standard_form().unwrap();
        assert_eq!(s, StandardForm::new(rat(1, 2), 2, p(&[1, 1]), p(&[1])).unwrap());

        let s = RationalFunction::one().to_standard_form().unwrap();
        assert_eq!(
            (s.lambda.clone(), s.e, s.u.clone(), s.v.clone()),
            (rat(1, 1), 0, p(&[1]), p(&[1]))
        );

        let f = RationalFunction::new(Polynomial::quantum_integer(5, 3), Polynomial::quantum_integer(5, 1)).unwrap();
        let s = f.to_standard_form().unwrap();
        assert_eq!((s.lambda.clone(), s.e), (rat(1, 1), 0));
        assert!(s.v.is_one());
        assert_eq!(
            RationalFunction::from_standard_form(&s),
            RationalFunction::from_poly(p(&[1, -1, 0, 1, -1, 1, 0, -1, 1]))
        );

        assert_eq!(
            RationalFunction::zero().to_standard_form(),
            Err(RatFuncError::ZeroInput)
        );
    }

    #[test]
    fn from_standard_form_examples() {
        let one = StandardForm::new(rat(1, 1), 0, p(&[1]), p(&[1])).unwrap();
        assert_eq!(RationalFunction::from_standard_form(&one), RationalFunction::one());

        let s = StandardForm::new(rat(1, 2), 2, p(&[1, 1]), p(&[1])).unwrap();
        let f = RationalFunction::from_standard_form(&s);
        // cross-multiplied against (2q^4 + 2q^3) / (4q)
        assert_eq!(f.numer() * &p(&[0, 4]), f.denom() * &p(&[0, 0, 0, 2, 2]));

        let s = StandardForm::new(rat(1, 1), -1, p(&[1]), p(&[1])).unwrap();
        assert_eq!(RationalFunction::from_standard_form(&s), rf(&[1], &[0, 1]));
    }

    #[test]
    fn standard_form_validation() {
        assert!(StandardForm::new(rat(0, 1), 0, p(&[1]), p(&[1])).is_err());
        assert!(StandardForm::new(rat(1, 1), 0, p(&[0, 1]), p(&[1])).is_err());
        assert!(StandardForm::new(rat(1, 1), 0, p(&[2, 2]), p(&[1])).is_err());
        assert!(StandardForm::new(rat(1, 1), 0, p(&[1, 1]), p(&[-1, 0, 1])).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(rf(&[1, -1, 1], &[1]).to_string(), "q^2 - q + 1");
        assert_eq!(rf(&[1], &[1, 1]).to_string(), "1/(q + 1)");
        assert_eq!(RationalFunction::zero().to_string(), "0");
        assert_eq!(rf(&[1], &[0, 0, 2]).to_string(), "(1/2)/q^2");
        assert_eq!(rf(&[0, 3], &[1, 1]).to_string(), "3*q/(q + 1)");
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((-6i64..6, 1i64..4), 0..5)
            .prop_map(|v| Polynomial::from_coeffs(v.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    fn arb_rf() -> impl Strategy<Value = RationalFunction> {
        (arb_poly(), arb_poly())
            .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
            .prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
    }

    fn arb_nonzero_rf() -> impl Strategy<Value = RationalFunction> {
        arb_rf().prop_filter("nonzero", |f| !f.is_zero())
    }

    proptest! {
        #[test]
        fn standard_form_round_trip(a in arb_nonzero_rf()) {
            let s = a.to_standard_form().unwrap();
            prop_assert!(s.validate().is_ok());
            prop_assert_eq!(RationalFunction::from_standard_form(&s), a);
        }

        #[test]
        fn mul_commutes_and_associates(a in arb_rf(), b in arb_rf(), c in arb_rf()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn pow_adds_exponents(a in arb_nonzero_rf(), s in -3i64..=3, t in -3i64..=3) {
            prop_assert_eq!(a.pow(s + t).unwrap(), a.pow(s).unwrap().mul(&a.pow(t).unwrap()));
        }

        #[test]
        fn compose_distributes_over_mul(a in arb_rf(), b in arb_rf(), m in 1u64..=5) {
            prop_assert_eq!(a.mul(&b).compose_power(m), a.compose_power(m).mul(&b.compose_power(m)));
        }

        #[test]
        fn add_sub_inverse(a in arb_rf(), b in arb_rf()) {
            prop_assert_eq!(a.add(&b).sub(&b), a.clone());
            prop_assert_eq!(a.add(&a.neg()), RationalFunction::zero());
            prop_assert_eq!(a.add(&b), b.add(&a));
        }

        #[test]
        fn mul_matches_unreduced_product(a in arb_rf(), b in arb_rf()) {
            let direct = RationalFunction::new(a.numer() * b.numer(), a.denom() * b.denom()).unwrap();
            prop_assert_eq!(a.mul(&b), direct);
        }
    }
}
