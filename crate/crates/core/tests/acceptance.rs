//! Acceptance criteria, one PASS/FAIL line each. All comparisons are exact.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use qfe::arith::divisors;
use qfe::cyclotomic::{cyclotomic, f_poly, from_f_pair, moebius, to_f_pair};
use qfe::expr::parse_rational_function;
use qfe::solutions::support_membership;
use qfe::structure::{decompose, peel, t0_denominator_bound, DecomposeError, Rejection, StallCause};
use qfe::{FMultisetPair, Polynomial, Rational, RationalFunction, SolutionSpec, StructureData};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn poly(c: &[i64]) -> RationalFunction {
    Polynomial::from_ints(c).into()
}

fn ones(primes: &[u64]) -> BTreeMap<u64, Rational> {
    primes.iter().map(|&p| (p, Rational::one())).collect()
}

const H2: &str = "1 - q + q^2";
const H5: &str = "1 - q + q^3 - q^4 + q^5 - q^7 + q^8";
const H7: &str = "1 - q + q^3 - q^4 + q^6 - q^8 + q^9 - q^11 + q^12";

fn ratio_spec() -> SolutionSpec {
    let generators = [(2, H2), (5, H5), (7, H7)]
        .into_iter()
        .map(|(p, text)| (p, parse_rational_function(text).expect("generator parses")))
        .collect();
    SolutionSpec::new(vec![2, 5, 7], generators).expect("valid spec")
}

fn worked_example_exact() -> Outcome {
    let spec = ratio_spec();
    ensure!(spec.check_commutativity().holds(), "commutativity fails");
    let expected: [(u64, &[i64]); 3] = [
        (2, &[1, -1, 1]),
        (5, &[1, -1, 0, 1, -1, 1, 0, -1, 1]),
        (7, &[1, -1, 0, 1, -1, 0, 1, 0, -1, 1, 0, -1, 1]),
    ];
    for (n, coeffs) in expected {
        let f = spec.synthesize(n).map_err(|e| e.to_string())?;
        ensure!(f == poly(coeffs), "f_{n} = {f}");
        ensure!(
            f.is_polynomial() && f.numer().coeffs() == Polynomial::from_ints(coeffs).coeffs(),
            "f_{n} coefficients differ"
        );
    }
    Ok(())
}

fn worked_example_degree_law() -> Outcome {
    let spec = ratio_spec();
    for n in [2u64, 4, 5, 7, 10, 14, 35, 70] {
        let f = spec.synthesize(n).map_err(|e| e.to_string())?;
        ensure!(f.is_polynomial(), "f_{n} is not a polynomial");
        ensure!(
            f.numer().degree() == Some(2 * (n as usize - 1)),
            "f_{n} has degree {:?}",
            f.numer().degree()
        );
    }
    Ok(())
}

fn worked_example_decomposition() -> Outcome {
    let sd = decompose(&ratio_spec()).map_err(|e| e.to_string())?;
    ensure!(sd.primes() == [2, 5, 7], "primes {:?}", sd.primes());
    ensure!(sd.lambda() == &ones(&[2, 5, 7]), "lambda {:?}", sd.lambda());
    ensure!(sd.t0().is_zero(), "t0 = {}", sd.t0());
    ensure!(
        sd.terms() == &BTreeMap::from([(1, -1), (3, 1)]),
        "terms {:?}",
        sd.terms()
    );
    for n in [2u64, 10, 35, 70] {
        let want = RationalFunction::new(Polynomial::quantum_integer(n, 3), Polynomial::quantum_integer(n, 1))
            .map_err(|e| e.to_string())?;
        ensure!(sd.closed_form(n) == want, "closed form at {n}");
    }
    Ok(())
}

fn cyclotomic_identities() -> Outcome {
    for k in 1..=100u64 {
        let product = divisors(k)
            .into_iter()
            .fold(Polynomial::one(), |acc, d| &acc * &cyclotomic(d));
        ensure!(product == f_poly(k), "prod Phi_d != q^{k} - 1");
    }
    for k in 1..=500u64 {
        let sum: i64 = divisors(k).into_iter().map(|d| moebius(d) as i64).sum();
        ensure!(sum == i64::from(k == 1), "Moebius sum at {k} is {sum}");
    }
    Ok(())
}

fn functional_equation_suite() -> Outcome {
    let specs = [
        (
            "quantum {2,3}",
            SolutionSpec::quantum_integers(vec![2, 3]).map_err(|e| e.to_string())?,
        ),
        ("[n]_{q^3}/[n]_q over {2,5,7}", ratio_spec()),
    ];
    for (name, spec) in &specs {
        let f = |n: u64| spec.synthesize(n).map_err(|e| e.to_string());
        for m in 1..=30u64 {
            let fm = f(m)?;
            for n in 1..=30u64 {
                let fn_ = f(n)?;
                let lhs = fm.mul(&fn_.compose_power(m));
                ensure!(f(m * n)? == lhs, "{name}: f_mn != f_m(q) f_n(q^m) at ({m}, {n})");
                ensure!(
                    lhs == fn_.mul(&fm.compose_power(n)),
                    "{name}: symmetric law fails at ({m}, {n})"
                );
                ensure!(spec.verify_fe(m, n), "{name}: verify_fe({m}, {n}) is false");
            }
        }
        for m in (2..=30u64).filter(|&m| support_membership(spec.primes(), m)) {
            let fm = f(m)?;
            for k in 1..=3u32 {
                let product = (0..k).fold(RationalFunction::one(), |acc, i| acc.mul(&fm.compose_power(m.pow(i))));
                ensure!(f(m.pow(k))? == product, "{name}: power law fails at m = {m}, k = {k}");
            }
        }
    }
    Ok(())
}

fn random_structure(rng: &mut StdRng) -> StructureData {
    let pool = [2u64, 3, 5, 7, 11, 13];
    let size = rng.gen_range(2..=3);
    let mut primes: Vec<u64> = pool.choose_multiple(rng, size).copied().collect();
    primes.sort_unstable();
    let lambda = primes
        .iter()
        .map(|&p| {
            let mut num = rng.gen_range(-5i64..=4);
            if num >= 0 {
                num += 1;
            }
            (p, Rational::new(num.into(), rng.gen_range(1i64..=5).into()))
        })
        .collect();
    let g = t0_denominator_bound(&primes) as i64;
    let t0 = Rational::new(rng.gen_range(-3i64..=3).into(), g.into());
    let mut terms = BTreeMap::new();
    for _ in 0..rng.gen_range(0..=3) {
        let mut t = rng.gen_range(-3i64..=2);
        if t >= 0 {
            t += 1;
        }
        terms.insert(rng.gen_range(1u64..=4), t);
    }
    StructureData::new(primes, lambda, t0, terms).expect("valid random structure")
}

fn structure_round_trips() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0006);
    for i in 0..200 {
        let sd = random_structure(&mut rng);
        let got = decompose(&sd.to_spec()).map_err(|e| format!("instance {i} ({sd:?}): {e}"))?;
        ensure!(got == sd, "instance {i}: {sd:?} came back as {got:?}");
    }
    Ok(())
}

fn qint(n: u64, r: u64) -> Polynomial {
    Polynomial::quantum_integer(n, r)
}

fn rejection_suite() -> Outcome {
    let spec = |primes: Vec<u64>, gens: Vec<(u64, Polynomial)>| {
        SolutionSpec::new(primes, gens.into_iter().map(|(p, g)| (p, g.into())).collect()).expect("spec builds")
    };
    let not_a_solution = |r: &Result<StructureData, DecomposeError>| match r {
        Err(DecomposeError::NotASolution(rej)) => Some(rej.clone()),
        _ => None,
    };

    let commuting = spec(vec![2, 3], vec![(2, qint(2, 1)), (3, qint(3, 2))]);
    let got = decompose(&commuting);
    ensure!(
        matches!(not_a_solution(&got), Some(Rejection::NotCommuting { ref pairs }) if pairs == &[(2, 3)]),
        "commutativity violation gave {got:?}"
    );

    let off_torsion = spec(
        vec![2, 3],
        vec![(2, &Polynomial::from_ints(&[-2, 1]) * &qint(2, 1)), (3, qint(3, 1))],
    );
    let got = decompose(&off_torsion);
    ensure!(
        matches!(not_a_solution(&got), Some(Rejection::NotCyclotomic { prime: 2, ref residual }) if residual == &Polynomial::from_ints(&[-2, 1])),
        "off-torsion zero gave {got:?}"
    );

    let t0 = spec(
        vec![2, 3],
        vec![(2, qint(2, 1).shift_up(1)), (3, qint(3, 1).shift_up(1))],
    );
    let got = decompose(&t0);
    ensure!(
        matches!(
            not_a_solution(&got),
            Some(Rejection::InconsistentT0 { first: 2, second: 3 })
        ),
        "inconsistent t0 gave {got:?}"
    );

    let single = spec(vec![5], vec![(5, qint(5, 1))]);
    let got = decompose(&single);
    ensure!(
        matches!(got, Err(DecomposeError::TooFewPrimes(1))),
        "single prime gave {got:?}"
    );

    // h_2 = [2]_{q^3} [2]_q, h_3 = [3]_{q^3} [3]_{q^2}: one peel with r = 3, then
    // p = 2 asks for r = 1 while p = 3 asks for r = 2.
    let h2 = &qint(2, 3) * &qint(2, 1);
    let h3 = &qint(3, 3) * &qint(3, 2);
    let pairs = BTreeMap::from([
        (2, to_f_pair(&h2, &Polynomial::one()).map_err(|e| e.to_string())?),
        (3, to_f_pair(&h3, &Polynomial::one()).map_err(|e| e.to_string())?),
    ]);
    let got = peel(pairs);
    ensure!(
        got == Err(Rejection::PeelingStalled {
            iteration: 1,
            cause: StallCause::MaximaDisagree { first: 2, second: 3 }
        }),
        "peeling gave {got:?}"
    );
    // the same generators fail commutativity before peeling is reached
    let got = decompose(&spec(vec![2, 3], vec![(2, h2), (3, h3)]));
    ensure!(
        matches!(not_a_solution(&got), Some(Rejection::NotCommuting { .. })),
        "stalling spec gave {got:?}"
    );

    let wrong_degree = spec(
        vec![2, 3],
        vec![(2, qint(2, 1)), (3, Polynomial::from_ints(&[1, 0, 1]))],
    );
    let got = decompose(&wrong_degree);
    ensure!(got.is_err(), "non-solution decomposed to {got:?}");
    Ok(())
}

fn random_pair(rng: &mut StdRng) -> FMultisetPair {
    let mut indices: Vec<u64> = (1..=12).collect();
    indices.shuffle(rng);
    let nu = rng.gen_range(0..=3);
    let nv = rng.gen_range(0..=3);
    let side = |ks: &[u64], rng: &mut StdRng| ks.iter().map(|&k| (k, rng.gen_range(1u32..=3))).collect();
    let u = side(&indices[..nu], rng);
    let v = side(&indices[nu..nu + nv], rng);
    FMultisetPair::new(u, v).expect("disjoint by construction")
}

fn f_pair_uniqueness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0008);
    let mut seen: Vec<(FMultisetPair, RationalFunction)> = Vec::new();
    for _ in 0..200 {
        let pair = random_pair(&mut rng);
        let f = from_f_pair(&pair);
        let back = to_f_pair(f.numer(), f.denom()).map_err(|e| format!("{pair:?}: {e}"))?;
        ensure!(back == pair, "{pair:?} came back as {back:?}");
        seen.push((pair, f));
    }
    let distinct: BTreeSet<String> = seen.iter().map(|(p, _)| format!("{p:?}")).collect();
    ensure!(distinct.len() > 150, "too few distinct pairs ({})", distinct.len());
    for (i, (p1, f1)) in seen.iter().enumerate() {
        for (p2, f2) in &seen[i + 1..] {
            ensure!((p1 == p2) == (f1 == f2), "{p1:?} and {p2:?} disagree on equality");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 worked example, exact", worked_example_exact),
        ("2 worked example, degree law", worked_example_degree_law),
        ("3 worked example, decomposition", worked_example_decomposition),
        ("4 cyclotomic identities", cyclotomic_identities),
        ("5 functional-equation suite", functional_equation_suite),
        ("6 structure round trip (200 instances)", structure_round_trips),
        ("7 rejection suite", rejection_suite),
        ("8 F-pair uniqueness (200 pairs)", f_pair_uniqueness),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS criterion {name} ({secs:.2}s)"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.2}s): {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
