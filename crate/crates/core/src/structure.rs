//! Classification of rational solutions.
//!
//! Every solution over the rationals supported on `S(P)` with at least two
//! primes has the shape
//!
//! ```text
//! f_n(q) = lambda(n) * q^{t0 (n-1)} * prod_{r in R} [n]_{q^r}^{t_r}
//! ```
//!
//! with `lambda` completely multiplicative. [`StructureData`] holds
//! `(P, lambda|_P, t0, {t_r})`; [`StructureData::closed_form`] evaluates the
//! formula and [`decompose`] recovers the data from prime generators.
//!
//! Decomposition works on the `F`-multiset pairs of the generators. At each
//! step the largest index `m_p` must equal `r * p` for one shared `r`, on the
//! same side for every prime; one factor `[p]_{q^r}` is then peeled off using
//! `F_{rp} = F_r * [p]_{q^r}`, which swaps `F_{rp}` for `F_r` in the pair.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith;
use crate::cyclotomic::{to_f_pair, CycloError, FMultisetPair, Side};
use crate::poly::{Polynomial, Rational};
use crate::ratfunc::RationalFunction;
use crate::solutions::{support_membership, SolutionSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("need at least two primes, got {0}")]
    TooFewPrimes(usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("primes must be strictly increasing")]
    UnsortedPrimes,
    #[error("lambda must be given exactly on the primes (offending prime {0})")]
    LambdaMismatch(u64),
    #[error("lambda({0}) must be nonzero")]
    ZeroLambda(u64),
    #[error("t0 = {0} does not make t0 (p - 1) an integer for every prime")]
    InvalidT0(Rational),
    #[error("term index r must be positive")]
    InvalidTermIndex,
    #[error("{0} is outside the support")]
    OutsideSupport(u64),
}

/// Why a set of generators is not a solution of the classified shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    /// `h_p` has a zero or pole other than 0 and the roots of unity.
    NotCyclotomic {
        prime: u64,
        residual: Polynomial,
    },
    /// `e_p / (p - 1)` differs between the two primes.
    InconsistentT0 {
        first: u64,
        second: u64,
    },
    NotCommuting {
        pairs: Vec<(u64, u64)>,
    },
    PeelingStalled {
        iteration: usize,
        cause: StallCause,
    },
    /// Rebuilding `h_p` from the recovered data did not reproduce it.
    ReconstructionMismatch {
        prime: u64,
    },
}

/// The reason a peeling step could not be taken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StallCause {
    /// `max(U_p, V_p)` is not a multiple of `p`.
    MaximumNotMultiple { prime: u64, max: u64 },
    /// `m_p / p` differs between the two primes.
    MaximaDisagree { first: u64, second: u64 },
    /// The maxima sit on different sides (numerator vs denominator).
    SidesDisagree { first: u64, second: u64 },
    /// The total weight of the pairs did not decrease.
    NoProgress,
}

impl std::fmt::Display for Rejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rejection::NotCyclotomic { prime, residual } => write!(
                f,
                "h_{prime} has a zero or pole that is neither 0 nor a root of unity (residual factor {residual})"
            ),
            Rejection::InconsistentT0 { first, second } => {
                write!(f, "q-exponents of h_{first} and h_{second} give different t0")
            }
            Rejection::NotCommuting { pairs } => write!(f, "commutativity fails for prime pairs {pairs:?}"),
            Rejection::PeelingStalled { iteration, cause } => {
                write!(f, "peeling stalled at step {iteration}: ")?;
                match cause {
                    StallCause::MaximumNotMultiple { prime, max } => {
                        write!(f, "largest F-index {max} of h_{prime} is not a multiple of {prime}")
                    }
                    StallCause::MaximaDisagree { first, second } => {
                        write!(f, "largest F-indices of h_{first} and h_{second} give different r")
                    }
                    StallCause::SidesDisagree { first, second } => {
                        write!(f, "largest F-indices of h_{first} and h_{second} lie on opposite sides")
                    }
                    StallCause::NoProgress => write!(f, "no progress"),
                }
            }
            Rejection::ReconstructionMismatch { prime } => {
                write!(f, "recovered data does not reproduce h_{prime}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("decomposition needs at least two primes, got {0}")]
    TooFewPrimes(usize),
    #[error("not a solution: {0}")]
    NotASolution(Rejection),
}

/// `denominator(t0)` divides `p - 1` for every `p`, i.e. `t0 (n - 1)` is an
/// integer for all `n` in `S(P)`.
pub fn validate_t0(primes: &[u64], t0: &Rational) -> bool {
    primes
        .iter()
        .all(|&p| (num_bigint::BigInt::from(p - 1) % t0.denom()).is_zero())
}

/// Classification data `(P, lambda on P, t0, {r: t_r})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureData {
    primes: Vec<u64>,
    lambda: BTreeMap<u64, Rational>,
    t0: Rational,
    terms: BTreeMap<u64, i64>,
}

impl StructureData {
    /// Validates the data; zero exponents in `terms` are dropped.
    pub fn new(
        primes: Vec<u64>,
        lambda: BTreeMap<u64, Rational>,
        t0: Rational,
        terms: BTreeMap<u64, i64>,
    ) -> Result<Self, StructureError> {
        if primes.len() < 2 {
            return Err(StructureError::TooFewPrimes(primes.len()));
        }
        if let Some(&p) = primes.iter().find(|&&p| !arith::is_prime(p)) {
            return Err(StructureError::NotPrime(p));
        }
        if primes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(StructureError::UnsortedPrimes);
        }
        if let Some(&k) = lambda.keys().find(|k| primes.binary_search(k).is_err()) {
            return Err(StructureError::LambdaMismatch(k));
        }
        if let Some(&p) = primes.iter().find(|p| !lambda.contains_key(p)) {
            return Err(StructureError::LambdaMismatch(p));
        }
        if let Some((&p, _)) = lambda.iter().find(|(_, l)| l.is_zero()) {
            return Err(StructureError::ZeroLambda(p));
        }
        if !validate_t0(&primes, &t0) {
            return Err(StructureError::InvalidT0(t0));
        }
        if terms.keys().any(|&r| r == 0) {
            return Err(StructureError::InvalidTermIndex);
        }
        let terms = terms.into_iter().filter(|&(_, t)| t != 0).collect();
        Ok(Self {
            primes,
            lambda,
            t0,
            terms,
        })
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn lambda(&self) -> &BTreeMap<u64, Rational> {
        &self.lambda
    }

    pub fn t0(&self) -> &Rational {
        &self.t0
    }

    /// `{r: t_r}` keyed by ascending `r`; `R` is the key set.
    pub fn terms(&self) -> &BTreeMap<u64, i64> {
        &self.terms
    }

    /// `lambda(n) = prod lambda(p)^{a_p}` for `n = prod p^{a_p}` in `S(P)`.
    pub fn lambda_extend(&self, n: u64) -> Result<Rational, StructureError> {
        if n == 0 || !support_membership(&self.primes, n) {
            return Err(StructureError::OutsideSupport(n));
        }
        Ok(arith::factorize(n).into_iter().fold(Rational::one(), |acc, (p, a)| {
            acc * num_traits::pow(self.lambda[&p].clone(), a as usize)
        }))
    }

    /// `t0 (n - 1)`, an integer for `n` in `S(P)`.
    fn q_exponent(&self, n: u64) -> i64 {
        let e = &self.t0 * Rational::from_integer((n - 1).into());
        debug_assert!(e.is_integer());
        e.to_integer().to_i64().expect("q-exponent fits in i64")
    }

    /// `f_n` from the closed formula; zero outside `S(P)`.
    pub fn closed_form(&self, n: u64) -> RationalFunction {
        assert!(n >= 1, "n must be positive");
        let Ok(lambda) = self.lambda_extend(n) else {
            return RationalFunction::zero();
        };
        if n == 1 {
            return RationalFunction::one();
        }
        let mut num = Polynomial::one();
        let mut den = Polynomial::one();
        for (&r, &t) in &self.terms {
            let factor = Polynomial::quantum_integer(n, r).pow(t.unsigned_abs() as u32);
            if t > 0 {
                num = &num * &factor;
            } else {
                den = &den * &factor;
            }
        }
        let e = self.q_exponent(n);
        if e >= 0 {
            num = num.shift_up(e as usize);
        } else {
            den = den.shift_up(e.unsigned_abs() as usize);
        }
        RationalFunction::new(num.scale(&lambda), den).expect("nonzero denominator")
    }

    /// `deg(u_n) - deg(v_n) = (n - 1) * sum_r r t_r` for `n` in `S(P)`.
    pub fn degree_signature(&self, n: u64) -> Result<i64, StructureError> {
        if n == 0 || !support_membership(&self.primes, n) {
            return Err(StructureError::OutsideSupport(n));
        }
        Ok((n as i64 - 1) * self.t1())
    }

    /// `t1 = sum_r r t_r`, the per-`(n - 1)` degree difference of `u_n / v_n`.
    pub fn t1(&self) -> i64 {
        self.terms.iter().map(|(&r, &t)| r as i64 * t).sum()
    }

    /// The spec whose generators are `closed_form(p)`.
    pub fn to_spec(&self) -> SolutionSpec {
        SolutionSpec::from_fn(self.primes.clone(), |p| self.closed_form(p)).expect("valid primes")
    }
}

/// Peels `[p]_{q^r}` factors off every pair until all are empty, returning
/// the accumulated exponents `{r: t_r}`.
pub fn peel(mut pairs: BTreeMap<u64, FMultisetPair>) -> Result<BTreeMap<u64, i64>, Rejection> {
    let mut terms: BTreeMap<u64, i64> = BTreeMap::new();
    for iteration in 0.. {
        if pairs.values().all(FMultisetPair::is_empty) {
            break;
        }
        let stall = |cause| Rejection::PeelingStalled { iteration, cause };
        let mut shared: Option<(u64, u64, Side)> = None;
        for (&p, pair) in &pairs {
            let max = pair.max_f();
            if max % p != 0 || max == 0 {
                return Err(stall(StallCause::MaximumNotMultiple { prime: p, max }));
            }
            let side = pair.max_side().expect("nonempty");
            match shared {
                None => shared = Some((p, max / p, side)),
                Some((first, r, _)) if r != max / p => {
                    return Err(stall(StallCause::MaximaDisagree { first, second: p }))
                }
                Some((first, _, s)) if s != side => return Err(stall(StallCause::SidesDisagree { first, second: p })),
                Some(_) => {}
            }
        }
        let (_, r, side) = shared.expect("at least one prime");
        let sign = match side {
            Side::Numerator => 1,
            Side::Denominator => -1,
        };
        let before: u64 = pairs.values().map(FMultisetPair::weight).sum();
        for (&p, pair) in pairs.iter_mut() {
            // F_{rp} = F_r [p]_{q^r}
            pair.adjust(r * p, -sign);
            pair.adjust(r, sign);
        }
        let after: u64 = pairs.values().map(FMultisetPair::weight).sum();
        if after >= before {
            return Err(stall(StallCause::NoProgress));
        }
        let t = terms.entry(r).or_default();
        *t += sign;
        if *t == 0 {
            terms.remove(&r);
        }
    }
    Ok(terms)
}

/// Recovers `(lambda, t0, {t_r})` from the generators of `spec`.
///
/// Checks run in this order so the report names the most specific defect:
/// each generator is certified to vanish only at 0 and roots of unity, the
/// q-exponents are checked for a common `t0`, commutativity is checked, and
/// then the `F`-pairs are peeled.
pub fn decompose(spec: &SolutionSpec) -> Result<StructureData, DecomposeError> {
    use DecomposeError::NotASolution;
    let primes = spec.primes();
    if primes.len() < 2 {
        return Err(DecomposeError::TooFewPrimes(primes.len()));
    }
    let mut lambda = BTreeMap::new();
    let mut exponents = Vec::with_capacity(primes.len());
    let mut pairs = BTreeMap::new();
    for &p in primes {
        let h = spec.generator(p).expect("generator for every prime");
        let sf = h.to_standard_form().expect("generators are nonzero");
        let pair = match to_f_pair(&sf.u, &sf.v) {
            Ok(pair) => pair,
            Err(CycloError::NotCyclotomic { residual }) => {
                return Err(NotASolution(Rejection::NotCyclotomic { prime: p, residual }))
            }
            Err(e) => unreachable!("standard form parts are normalized: {e}"),
        };
        lambda.insert(p, sf.lambda);
        exponents.push((p, sf.e));
        pairs.insert(p, pair);
    }

    let (p0, e0) = exponents[0];
    let t0 = Rational::new(e0.into(), (p0 as i64 - 1).into());
    for &(p, e) in &exponents[1..] {
        // e / (p - 1) == e0 / (p0 - 1)
        if e as i128 * (p0 as i128 - 1) != e0 as i128 * (p as i128 - 1) {
            return Err(NotASolution(Rejection::InconsistentT0 { first: p0, second: p }));
        }
    }

    let report = spec.check_commutativity();
    if !report.holds() {
        return Err(NotASolution(Rejection::NotCommuting {
            pairs: report.violations.clone(),
        }));
    }

    let terms = peel(pairs).map_err(NotASolution)?;
    let sd = StructureData::new(primes.to_vec(), lambda, t0, terms)
        .expect("recovered data satisfies the structure invariants");
    for &p in primes {
        if &sd.closed_form(p) != spec.generator(p).expect("present") {
            return Err(NotASolution(Rejection::ReconstructionMismatch { prime: p }));
        }
    }
    Ok(sd)
}

/// `gcd(p - 1)` over the primes: `t0` is valid iff its denominator divides this.
pub fn t0_denominator_bound(primes: &[u64]) -> u64 {
    primes.iter().fold(0u64, |g, &p| g.gcd(&(p - 1)))
}
