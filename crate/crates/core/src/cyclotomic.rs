//! Cyclotomic polynomials, the family `F_k = q^k - 1`, certification that a
//! polynomial vanishes only at zero and at roots of unity, and the unique
//! representation `prod_{u in U} F_u / prod_{v in V} F_v`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{self, pow_mod};
use crate::poly::{Polynomial, Rational};
use crate::ratfunc::RationalFunction;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycloError {
    #[error("cannot factor the zero polynomial")]
    ZeroPolynomial,
    /// Some zero is neither 0 nor a root of unity; `residual` is the monic
    /// factor left after removing every cyclotomic factor.
    #[error("not a product of cyclotomic polynomials; residual factor {residual}")]
    NotCyclotomic { residual: Polynomial },
    #[error("expected a monic polynomial with nonzero constant term, got {0}")]
    NotNormalized(Polynomial),
}

/// Möbius function.
pub fn moebius(k: u64) -> i8 {
    let mut sign = 1i8;
    for (_, a) in arith::factorize(k) {
        if a > 1 {
            return 0;
        }
        sign = -sign;
    }
    sign
}

/// `F_k(q) = q^k - 1`.
pub fn f_poly(k: u64) -> Polynomial {
    assert!(k >= 1, "f_poly: k must be positive");
    Polynomial::q_power_minus_one(k)
}

fn cache() -> &'static RwLock<HashMap<u64, Polynomial>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Polynomial>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The `k`-th cyclotomic polynomial, computed as `(q^k - 1)` divided by every
/// `Phi_d` with `d` a proper divisor of `k`. Results are memoized.
pub fn cyclotomic(k: u64) -> Polynomial {
    assert!(k >= 1, "cyclotomic: k must be positive");
    if let Some(p) = cache().read().expect("cache poisoned").get(&k) {
        return p.clone();
    }
    let mut p = f_poly(k);
    for d in arith::divisors(k) {
        if d < k {
            p = p.div_exact(&cyclotomic(d)).expect("Phi_d divides q^k - 1");
        }
    }
    cache().write().expect("cache poisoned").entry(k).or_insert(p).clone()
}

/// `unit * q^qpower * prod_d Phi_d^{factors[d]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloFactorization {
    pub unit: Rational,
    pub qpower: usize,
    pub factors: BTreeMap<u64, u32>,
}

impl CycloFactorization {
    pub fn reconstruct(&self) -> Polynomial {
        let mut acc = Polynomial::monomial(self.unit.clone(), self.qpower);
        for (&d, &m) in &self.factors {
            acc = &acc * &cyclotomic(d).pow(m);
        }
        acc
    }
}

/// All `d` with `phi(d) <= max_phi`, ascending, paired with `phi(d)`.
///
/// Every such `d` is at most `2 * max_phi^2`; rather than scanning that
/// range this walks prime-power products directly, using
/// `phi(p^a) = p^(a-1) (p-1)`.
pub fn totient_candidates(max_phi: u64) -> Vec<(u64, u64)> {
    fn walk(primes: &[u64], start: usize, n: u64, phi: u64, max_phi: u64, out: &mut Vec<(u64, u64)>) {
        out.push((n, phi));
        for i in start..primes.len() {
            let p = primes[i];
            if phi * (p - 1) > max_phi {
                break;
            }
            let (mut n2, mut phi2) = (n * p, phi * (p - 1));
            while phi2 <= max_phi {
                walk(primes, i + 1, n2, phi2, max_phi, out);
                n2 *= p;
                phi2 *= p;
            }
        }
    }
    if max_phi == 0 {
        return Vec::new();
    }
    let primes: Vec<u64> = (2..=max_phi + 1).filter(|&p| arith::is_prime(p)).collect();
    let mut out = Vec::new();
    walk(&primes, 0, 1, 1, max_phi, &mut out);
    out.sort_unstable();
    out
}

/// Cheap necessary condition for `Phi_d | p`: `p` must vanish at a primitive
/// `d`-th root of unity modulo a prime `l = 1 (mod d)` not dividing any
/// denominator of `p`. A `true` answer is confirmed by exact division.
fn may_have_cyclotomic_factor(p: &Polynomial, d: u64) -> bool {
    let Some(l) = filter_prime(p, d) else {
        return true;
    };
    let omega = primitive_root_of_unity(d, l);
    let lb = BigInt::from(l);
    let reduce = |c: &Rational| -> u64 {
        let n = (c.numer() % &lb + &lb) % &lb;
        let den = (c.denom() % &lb).to_u64().expect("reduced");
        let n = n.to_u64().expect("reduced");
        arith::mul_mod(n, pow_mod(den, l - 2, l), l)
    };
    let value = p
        .coeffs()
        .iter()
        .rev()
        .fold(0u64, |acc, c| (arith::mul_mod(acc, omega, l) + reduce(c)) % l);
    value == 0
}

fn filter_prime(p: &Polynomial, d: u64) -> Option<u64> {
    let k0 = (1 << 20) / d + 1;
    (k0..k0 + 10_000)
        .filter_map(|k| k.checked_mul(d).and_then(|x| x.checked_add(1)))
        .filter(|&l| l < 1 << 62 && arith::is_prime(l))
        .find(|&l| {
            let lb = BigInt::from(l);
            p.coeffs().iter().all(|c| !(c.denom() % &lb).is_zero())
        })
}

fn primitive_root_of_unity(d: u64, l: u64) -> u64 {
    let prime_factors: Vec<u64> = arith::factorize(d).into_iter().map(|(r, _)| r).collect();
    (2..l)
        .map(|a| pow_mod(a, (l - 1) / d, l))
        .find(|&w| prime_factors.iter().all(|&r| pow_mod(w, d / r, l) != 1))
        .unwrap_or(1)
}

/// Writes `p` as `unit * q^a * prod Phi_d^{m_d}`, or reports the non-cyclotomic
/// residual.
///
/// Candidate indices `d` are tried in increasing order, each extracted to its
/// full multiplicity before moving on.
pub fn cyclo_factor(p: &Polynomial) -> Result<CycloFactorization, CycloError> {
    let unit = p.leading_coeff().ok_or(CycloError::ZeroPolynomial)?.clone();
    let qpower = p.q_valuation();
    let mut rest = p.shift_down(qpower).monic();
    let mut factors = BTreeMap::new();
    let degree = rest.degree().expect("nonzero") as u64;
    for (d, phi) in totient_candidates(degree) {
        let remaining = rest.degree().expect("nonzero") as u64;
        if remaining == 0 {
            break;
        }
        if phi > remaining || !may_have_cyclotomic_factor(&rest, d) {
            continue;
        }
        let cyc = cyclotomic(d);
        let mut mult = 0u32;
        while let Some(quot) = rest.div_exact(&cyc) {
            rest = quot;
            mult += 1;
        }
        if mult > 0 {
            factors.insert(d, mult);
        }
    }
    if !rest.is_one() {
        return Err(CycloError::NotCyclotomic { residual: rest });
    }
    Ok(CycloFactorization { unit, qpower, factors })
}

/// Disjoint multisets `(U, V)` standing for `prod_{u in U} F_u / prod_{v in V} F_v`,
/// each multiset a map from index to multiplicity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FMultisetPair {
    u: BTreeMap<u64, u32>,
    v: BTreeMap<u64, u32>,
}

/// Which half of an [`FMultisetPair`] an index sits in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Numerator,
    Denominator,
}

impl FMultisetPair {
    pub fn new(u: BTreeMap<u64, u32>, v: BTreeMap<u64, u32>) -> Option<Self> {
        let valid = |m: &BTreeMap<u64, u32>| m.iter().all(|(&k, &c)| k >= 1 && c >= 1);
        if !valid(&u) || !valid(&v) || u.keys().any(|k| v.contains_key(k)) {
            return None;
        }
        Some(Self { u, v })
    }

    /// Builds the pair from net exponents of each `F_k`; zero exponents vanish.
    pub fn from_exponents(exponents: &BTreeMap<u64, i64>) -> Self {
        let mut pair = Self::default();
        for (&k, &e) in exponents {
            pair.adjust(k, e);
        }
        pair
    }

    pub fn u(&self) -> &BTreeMap<u64, u32> {
        &self.u
    }

    pub fn v(&self) -> &BTreeMap<u64, u32> {
        &self.v
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty() && self.v.is_empty()
    }

    /// Net exponent of `F_k`: positive in `U`, negative in `V`.
    pub fn exponent(&self, k: u64) -> i64 {
        self.u.get(&k).map_or(0, |&m| m as i64) - self.v.get(&k).map_or(0, |&m| m as i64)
    }

    /// Multiplies the represented function by `F_k^delta`, cancelling across
    /// the two sides so they stay disjoint.
    pub fn adjust(&mut self, k: u64, delta: i64) {
        assert!(k >= 1, "F-index must be positive");
        let e = self.exponent(k) + delta;
        self.u.remove(&k);
        self.v.remove(&k);
        let m = u32::try_from(e.unsigned_abs()).expect("multiplicity overflow");
        if e > 0 {
            self.u.insert(k, m);
        } else if e < 0 {
            self.v.insert(k, m);
        }
    }

    /// Largest index over both sides, 0 when both are empty.
    pub fn max_f(&self) -> u64 {
        let mu = self.u.keys().next_back().copied().unwrap_or(0);
        let mv = self.v.keys().next_back().copied().unwrap_or(0);
        mu.max(mv)
    }

    /// Side holding the maximum index, `None` when empty.
    pub fn max_side(&self) -> Option<Side> {
        let m = self.max_f();
        if m == 0 {
            None
        } else if self.u.contains_key(&m) {
            Some(Side::Numerator)
        } else {
            Some(Side::Denominator)
        }
    }

    /// `sum(index * multiplicity)` over both sides.
    pub fn weight(&self) -> u64 {
        self.u.iter().chain(self.v.iter()).map(|(&k, &m)| k * m as u64).sum()
    }

    /// `d * U, d * V`: the pair of `f(q^d)`, because `F_k(q^d) = F_{kd}(q)`.
    pub fn dilate(&self, d: u64) -> Self {
        assert!(d >= 1, "dilation factor must be positive");
        let scale = |m: &BTreeMap<u64, u32>| m.iter().map(|(&k, &c)| (k * d, c)).collect();
        Self {
            u: scale(&self.u),
            v: scale(&self.v),
        }
    }

    pub fn to_rational_function(&self) -> RationalFunction {
        let product = |m: &BTreeMap<u64, u32>| {
            m.iter()
                .fold(Polynomial::one(), |acc, (&k, &c)| &acc * &f_poly(k).pow(c))
        };
        RationalFunction::new(product(&self.u), product(&self.v)).expect("nonzero denominator")
    }
}

/// Converts `u / v` (monic, nonzero constant terms) into its `F`-multiset pair.
///
/// Both sides are factored into cyclotomic polynomials, then each `Phi_k` is
/// rewritten as `prod_{d | k} F_d^{mu(k/d)}`.
pub fn to_f_pair(u: &Polynomial, v: &Polynomial) -> Result<FMultisetPair, CycloError> {
    let mut exponents: BTreeMap<u64, i64> = BTreeMap::new();
    for (p, sign) in [(u, 1i64), (v, -1i64)] {
        if !p.is_monic() || p.constant_term().is_zero() {
            return Err(CycloError::NotNormalized(p.clone()));
        }
        let fac = cyclo_factor(p)?;
        debug_assert!(fac.unit.is_one() && fac.qpower == 0);
        for (&k, &m) in &fac.factors {
            for d in arith::divisors(k) {
                let mu = moebius(k / d) as i64;
                if mu != 0 {
                    *exponents.entry(d).or_default() += sign * mu * m as i64;
                }
            }
        }
    }
    Ok(FMultisetPair::from_exponents(&exponents))
}

pub fn from_f_pair(pair: &FMultisetPair) -> RationalFunction {
    pair.to_rational_function()
}
