//! Solutions of `f_{mn}(q) = f_m(q) f_n(q^m)` described by their values on a
//! finite set of primes.
//!
//! A nontrivial solution is supported on the multiplicative semigroup `S(P)`
//! generated by a prime set `P` and is determined by the generators
//! `h_p = f_p` for `p` in `P`. Generators extend to a solution exactly when
//! every pair satisfies `h_a(q) h_b(q^a) = h_b(q) h_a(q^b)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use thiserror::Error;

use crate::arith;
use crate::ratfunc::{RatFuncError, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolutionError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("primes must be strictly increasing")]
    UnsortedPrimes,
    #[error("generator set does not match the prime set (offending key {0})")]
    GeneratorMismatch(u64),
    #[error("generator h_{0} is the zero function")]
    ZeroGenerator(u64),
    #[error("generators violate the commutativity condition for prime pairs {0:?}")]
    NotCommuting(Vec<(u64, u64)>),
    #[error("solutions have different prime sets")]
    PrimeSetMismatch,
    #[error(transparent)]
    Arithmetic(#[from] RatFuncError),
}

/// `n` lies in `S(P)` when all of its prime factors are in `primes`. 1 always does.
pub fn support_membership(primes: &[u64], n: u64) -> bool {
    assert!(n >= 1, "support_membership: n must be positive");
    arith::factorize(n).iter().all(|(p, _)| primes.binary_search(p).is_ok())
}

/// Outcome of checking the commutativity condition on every unordered pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutativityReport {
    pub violations: Vec<(u64, u64)>,
}

impl CommutativityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A candidate solution: a prime set and one nonzero generator per prime.
///
/// The commutativity check runs at most once per spec and its verdict is
/// cached; synthesized values are memoized per `n`.
pub struct SolutionSpec {
    primes: Vec<u64>,
    generators: BTreeMap<u64, RationalFunction>,
    verdict: OnceLock<CommutativityReport>,
    memo: Mutex<HashMap<u64, RationalFunction>>,
}

impl Clone for SolutionSpec {
    fn clone(&self) -> Self {
        Self {
            primes: self.primes.clone(),
            generators: self.generators.clone(),
            verdict: self.verdict.clone(),
            memo: Mutex::new(HashMap::new()),
        }
    }
}

impl std::fmt::Debug for SolutionSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SolutionSpec")
            .field("primes", &self.primes)
            .field("generators", &self.generators)
            .finish()
    }
}

impl PartialEq for SolutionSpec {
    fn eq(&self, other: &Self) -> bool {
        self.primes == other.primes && self.generators == other.generators
    }
}

impl Eq for SolutionSpec {}

impl SolutionSpec {
    pub fn new(primes: Vec<u64>, generators: BTreeMap<u64, RationalFunction>) -> Result<Self, SolutionError> {
        for &p in &primes {
            if !arith::is_prime(p) {
                return Err(SolutionError::NotPrime(p));
            }
        }
        if primes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SolutionError::UnsortedPrimes);
        }
        if let Some(&k) = generators.keys().find(|k| primes.binary_search(k).is_err()) {
            return Err(SolutionError::GeneratorMismatch(k));
        }
        if let Some(&p) = primes.iter().find(|p| !generators.contains_key(p)) {
            return Err(SolutionError::GeneratorMismatch(p));
        }
        if let Some((&p, _)) = generators.iter().find(|(_, h)| h.is_zero()) {
            return Err(SolutionError::ZeroGenerator(p));
        }
        Ok(Self {
            primes,
            generators,
            verdict: OnceLock::new(),
            memo: Mutex::new(HashMap::new()),
        })
    }

    /// Builds a spec by evaluating `h` at every prime.
    pub fn from_fn(primes: Vec<u64>, h: impl Fn(u64) -> RationalFunction) -> Result<Self, SolutionError> {
        let generators = primes.iter().map(|&p| (p, h(p))).collect();
        Self::new(primes, generators)
    }

    /// `h_p = [p]_q`, the generators of the quantum integers themselves.
    pub fn quantum_integers(primes: Vec<u64>) -> Result<Self, SolutionError> {
        Self::from_fn(primes, |p| crate::poly::Polynomial::quantum_integer(p, 1).into())
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn generators(&self) -> &BTreeMap<u64, RationalFunction> {
        &self.generators
    }

    pub fn generator(&self, p: u64) -> Option<&RationalFunction> {
        self.generators.get(&p)
    }

    pub fn in_support(&self, n: u64) -> bool {
        support_membership(&self.primes, n)
    }

    /// Checks `h_a(q) h_b(q^a) = h_b(q) h_a(q^b)` for every pair `a < b`.
    pub fn check_commutativity(&self) -> &CommutativityReport {
        self.verdict.get_or_init(|| {
            let mut violations = Vec::new();
            for (i, &a) in self.primes.iter().enumerate() {
                for &b in &self.primes[i + 1..] {
                    let (ha, hb) = (&self.generators[&a], &self.generators[&b]);
                    if ha.mul(&hb.compose_power(a)) != hb.mul(&ha.compose_power(b)) {
                        violations.push((a, b));
                    }
                }
            }
            CommutativityReport { violations }
        })
    }

    pub fn is_verified(&self) -> bool {
        self.check_commutativity().holds()
    }

    /// `f_n`, rejecting specs whose generators do not commute.
    pub fn synthesize(&self, n: u64) -> Result<RationalFunction, SolutionError> {
        let report = self.check_commutativity();
        if !report.holds() {
            return Err(SolutionError::NotCommuting(report.violations.clone()));
        }
        if let Some(f) = self.memo.lock().expect("memo poisoned").get(&n) {
            return Ok(f.clone());
        }
        let f = self.fold(n, None);
        self.memo.lock().expect("memo poisoned").insert(n, f.clone());
        Ok(f)
    }

    /// `f_n` by folding the law over the prime factorisation of `n`, taking
    /// the primes in the given order (ascending when `None`). Does not check
    /// commutativity; without it the result depends on the order.
    pub fn fold(&self, n: u64, order: Option<&[u64]>) -> RationalFunction {
        assert!(n >= 1, "n must be positive");
        let factors = arith::factorize(n);
        if factors.iter().any(|(p, _)| !self.generators.contains_key(p)) {
            return RationalFunction::zero();
        }
        let exps: BTreeMap<u64, u32> = factors.into_iter().collect();
        let ordered: Vec<(u64, u32)> = match order {
            None => exps.into_iter().collect(),
            Some(order) => {
                let picked: Vec<(u64, u32)> = order.iter().filter_map(|p| exps.get(p).map(|&a| (*p, a))).collect();
                assert_eq!(picked.len(), exps.len(), "order must list every prime factor of n");
                picked
            }
        };
        // f_{m p^a}(q) = f_m(q) f_{p^a}(q^m)
        let mut f = RationalFunction::one();
        let mut m = 1u64;
        for (p, a) in ordered {
            let g = self.prime_power(p, a);
            f = f.mul(&g.compose_power(m));
            m *= p.pow(a);
        }
        f
    }

    /// `f_{p^a}(q) = prod_{i < a} h_p(q^{p^i})`.
    fn prime_power(&self, p: u64, a: u32) -> RationalFunction {
        let h = &self.generators[&p];
        (0..a).fold(RationalFunction::one(), |acc, i| acc.mul(&h.compose_power(p.pow(i))))
    }

    /// Checks `f_{mn} = f_m(q) f_n(q^m)` and `f_m(q) f_n(q^m) = f_n(q) f_m(q^n)`
    /// for the sequence obtained by ascending folding.
    pub fn verify_fe(&self, m: u64, n: u64) -> bool {
        let value = |k: u64| {
            if self.is_verified() {
                self.synthesize(k).expect("verified")
            } else {
                self.fold(k, None)
            }
        };
        let (fm, fn_, fmn) = (value(m), value(n), value(m * n));
        let lhs = fm.mul(&fn_.compose_power(m));
        let rhs = fn_.mul(&fm.compose_power(n));
        fmn == lhs && lhs == rhs
    }

    /// Generators `h_p = f_p(q^r)^d * g_p(q^s)^e`.
    pub fn combine(&self, other: &SolutionSpec, r: u64, s: u64, d: i64, e: i64) -> Result<SolutionSpec, SolutionError> {
        if self.primes != other.primes {
            return Err(SolutionError::PrimeSetMismatch);
        }
        let mut generators = BTreeMap::new();
        for &p in &self.primes {
            let f = self.generators[&p].compose_power(r).pow(d)?;
            let g = other.generators[&p].compose_power(s).pow(e)?;
            generators.insert(p, f.mul(&g));
        }
        SolutionSpec::new(self.primes.clone(), generators)
    }

    /// Generators `1 / h_p`.
    pub fn invert(&self) -> SolutionSpec {
        let generators = self
            .generators
            .iter()
            .map(|(&p, h)| (p, h.recip().expect("generators are nonzero")))
            .collect();
        SolutionSpec::new(self.primes.clone(), generators).expect("same primes")
    }
}
