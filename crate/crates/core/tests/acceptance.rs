//! Acceptance criteria 1-8. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hamming_penalty::analysis::{
    average_over_closure, sparse_zero_witness, symmetrize, PermutationGroup,
};
use hamming_penalty::certify::{
    standard_grid, CertifyError, OptimalityCertificate, CERTIFICATE_TOLERANCE,
};
use hamming_penalty::enumerate::{default_workers, ground_set, min_penalty_with};
use hamming_penalty::model::Coefficients;
use hamming_penalty::{
    build_ising_hamming, build_qubo_hamming, ising_to_qubo, qubo_to_ising, weight_profile,
    Bitstring, CoefficientBounds, IsingModel, ModelKind, PenaltyModel, Qubo, Rational,
};
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn int(v: i64) -> Rational {
    Rational::from(v)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_rational(rng: &mut ChaCha8Rng, span: i64) -> Rational {
    Rational::new(rng.gen_range(-span..=span), rng.gen_range(1..=6))
}

fn bitstring(n: usize, mask: u64) -> Bitstring {
    Bitstring::new(n, mask).expect("mask fits")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:.1?}, limit {limit:.0?}")
    })
}

/// E (r - w)^2 computed from the weight alone.
fn squared_distance(e: &Rational, r: usize, w: usize) -> Rational {
    let d = int(r as i64 - w as i64);
    e * &d * d
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(1);
    let mut checked = 0u64;
    for n in 2..=16usize {
        for r in 0..=n {
            for e in [int(1), Rational::new(1, 2)] {
                let q = build_qubo_hamming(n, r, &e).map_err(|err| err.to_string())?;
                let full = (1u64 << n) - 1;
                let mut masks: Vec<u64> = (0..1000).map(|_| rng.gen_range(0..=full)).collect();
                if n <= 12 {
                    masks.extend(0..=full);
                }
                for mask in masks {
                    let x = bitstring(n, mask);
                    let value = q.evaluate(&x).map_err(|err| err.to_string())?;
                    let expected = squared_distance(&e, r, x.weight());
                    ensure(value == expected, || {
                        format!("n={n} r={r} E={e} x={x}: {value} != {expected}")
                    })?;
                    checked += 1;
                }
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!(
        "{checked} evaluations exact in {:.1?}",
        start.elapsed()
    ))
}

/// Gap read off a weight profile: lowest class other than `r` minus class `r`.
fn profile_gap<M: PenaltyModel>(
    model: &M,
    r: usize,
    expected_class: impl Fn(usize) -> Rational,
) -> Result<Rational, String> {
    let profile = weight_profile(model, default_workers()).map_err(|e| e.to_string())?;
    for (w, minimum) in profile.minima.iter().enumerate() {
        let expected = expected_class(w);
        ensure(
            *minimum == expected && profile.maxima[w] == expected,
            || {
                format!(
                    "n={} r={r} class {w}: min {minimum}, max {}, expected {expected}",
                    profile.n, profile.maxima[w]
                )
            },
        )?;
    }
    let others = profile
        .minima
        .iter()
        .enumerate()
        .filter(|&(w, _)| w != r)
        .map(|(_, m)| m.clone())
        .min()
        .expect("n >= 2");
    Ok(others - &profile.minima[r])
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let workers = default_workers();
    let mut cases = 0;
    for n in 2..=16usize {
        for r in 1..n {
            for e in [int(1), Rational::new(1, 2)] {
                let q = build_qubo_hamming(n, r, &e).map_err(|err| err.to_string())?;
                let h = build_ising_hamming(n, r, &e).map_err(|err| err.to_string())?;
                let two_e = &e * int(2);

                let q_gap = profile_gap(&q, r, |w| squared_distance(&e, r, w))?;
                let h_gap = profile_gap(&h, r, |w| squared_distance(&two_e, r, w))?;
                let q_report = min_penalty_with(&q, r, workers).map_err(|err| err.to_string())?;
                let h_report = min_penalty_with(&h, r, workers).map_err(|err| err.to_string())?;
                ensure(
                    q_gap == e && q_report.gap == e && q_report.exact_penalty,
                    || format!("QUBO n={n} r={r} E={e}: gap {} / {q_gap}", q_report.gap),
                )?;
                ensure(
                    h_gap == two_e && h_report.gap == two_e && h_report.exact_penalty,
                    || format!("Ising n={n} r={r} E={e}: gap {} / {h_gap}", h_report.gap),
                )?;
                cases += 1;
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(120))?;
    Ok(format!(
        "{cases} (n, r, E) cases, QUBO gap E and Ising gap 2E, in {:.1?}",
        start.elapsed()
    ))
}

fn certificates(kind: ModelKind) -> Result<Vec<OptimalityCertificate>, String> {
    standard_grid(kind, 3..=7)
        .iter()
        .map(|case| {
            hamming_penalty::certify::certify_optimality(case.n, case.r, &case.bounds)
                .map_err(|e: CertifyError| format!("n={} r={}: {e}", case.n, case.r))
        })
        .collect()
}

fn check_certificate(cert: &OptimalityCertificate, expected_gap: &Rational) -> Result<(), String> {
    let label = || format!("n={} r={} bounds {}", cert.n, cert.r, cert.bounds);
    ensure(cert.closed_form == *expected_gap, || {
        format!(
            "{}: closed form {} != {expected_gap}",
            label(),
            cert.closed_form
        )
    })?;
    let diff = (cert.lp_gap - expected_gap.to_f64()).abs();
    ensure(diff <= CERTIFICATE_TOLERANCE, || {
        format!(
            "{}: LP {} vs {expected_gap} (diff {diff:e})",
            label(),
            cert.lp_gap
        )
    })?;
    ensure(cert.witness_attains, || {
        format!(
            "{}: closed-form model violates the LP by {:e}",
            label(),
            cert.witness_violation
        )
    })?;
    ensure(cert.passed(), || {
        format!("{}: verdict {:?}", label(), cert.verdict)
    })
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let certs = certificates(ModelKind::Qubo)?;
    let mut worst = 0f64;
    for cert in &certs {
        let CoefficientBounds::Qubo(b) = &cert.bounds else {
            return Err("unexpected bounds kind".into());
        };
        let linear = b.linear_lower() / int(2 * cert.r as i64 - 1);
        let quadratic = b.quadratic_upper() / int(2);
        check_certificate(cert, &linear.min(quadratic))?;
        worst = worst.max(cert.abs_diff);
    }
    ensure(certs.len() == 4 * (2 + 3 + 4 + 5 + 6), || {
        format!("{} certificates", certs.len())
    })?;
    within(start.elapsed(), Duration::from_secs(120))?;
    Ok(format!(
        "{} certificates, max |LP - closed| {worst:.1e}, in {:.1?}",
        certs.len(),
        start.elapsed()
    ))
}

fn criterion_4() -> Outcome {
    let certs = certificates(ModelKind::Ising)?;
    let mut worst = 0f64;
    let mut misread_rejected = 0;
    for cert in &certs {
        let CoefficientBounds::Ising(b) = &cert.bounds else {
            return Err("unexpected bounds kind".into());
        };
        let (n, r) = (cert.n as i64, cert.r as i64);
        let scale = |denominator: i64, h: &Rational| b.j_max().clone().min(h / int(denominator));
        let e = match (2 * r).cmp(&n) {
            std::cmp::Ordering::Equal => b.j_max().clone(),
            std::cmp::Ordering::Less => scale(n - 2 * r, b.h_max()),
            std::cmp::Ordering::Greater => scale(2 * r - n, b.h_min()),
        };
        check_certificate(cert, &(&e * int(2)))?;
        worst = worst.max(cert.abs_diff);
        if 2 * r > n {
            // The alternative denominator |r - 2n| must disagree with the LP
            // whenever it changes the scale.
            let misread = scale((r - 2 * n).abs(), b.h_min());
            if misread != e {
                let gap = (&misread * int(2)).to_f64();
                ensure((gap - cert.lp_gap).abs() > CERTIFICATE_TOLERANCE, || {
                    format!("n={n} r={r}: |r-2n| reading also matches the LP")
                })?;
                misread_rejected += 1;
            }
        }
    }
    ensure(misread_rejected > 0, || {
        "no case separates the denominators".into()
    })?;
    Ok(format!(
        "{} certificates, max |LP - 2E| {worst:.1e}; denominator 2r-n confirmed, |r-2n| contradicted in {misread_rejected} cases",
        certs.len()
    ))
}

/// Ising energy computed straight from spins.
fn spin_energy(offset: &Rational, h: &Rational, j: &Rational, x: &Bitstring) -> Rational {
    let spins: Vec<i64> = (0..x.len()).map(|k| i64::from(x.spin(k))).collect();
    let mut value = offset.clone();
    for (a, &s) in spins.iter().enumerate() {
        value += h * int(s);
        for &t in &spins[a + 1..] {
            value += j * int(s * t);
        }
    }
    value
}

fn criterion_5() -> Outcome {
    let (n, r, e) = (4usize, 1usize, int(1));
    let d = int(n as i64 - 2 * r as i64);
    let naive_offset = &e * (Rational::new(n as i64, 2) - Rational::new(3, 2) * &d * &d);
    let derived_offset = &e * (int(n as i64) + &d * &d) / int(2);
    let h = &e * &d;

    let built = build_ising_hamming(n, r, &e).map_err(|err| err.to_string())?;
    ensure(*built.offset() == derived_offset, || {
        format!("builder offset {} != {derived_offset}", built.offset())
    })?;
    let naive = IsingModel::new(
        n,
        naive_offset.clone(),
        vec![h.clone(); n],
        built.couplings().clone(),
    )
    .map_err(|err| err.to_string())?;

    let mut naive_on_target = Vec::new();
    for mask in 0..1u64 << n {
        let x = bitstring(n, mask);
        let derived = spin_energy(&derived_offset, &h, &e, &x);
        let library = built.evaluate(&x).map_err(|err| err.to_string())?;
        ensure(derived == library, || {
            format!("x={x}: spin sum {derived} != library {library}")
        })?;
        let expected = match x.weight() {
            1 => Some(int(0)),
            0 | 2 => Some(int(2)),
            _ => None,
        };
        if let Some(expected) = expected {
            ensure(derived == expected, || {
                format!("x={x}: derived offset gives {derived}, expected {expected}")
            })?;
        }
        if x.weight() == r {
            let value = naive.evaluate(&x).map_err(|err| err.to_string())?;
            ensure(value == spin_energy(&naive_offset, &h, &e, &x), || {
                "naive model mismatch".into()
            })?;
            naive_on_target.push(value);
        }
    }
    ensure(naive_on_target.iter().all(|v| !v.is_zero()), || {
        "naive constant vanishes on a weight-1 string".into()
    })?;
    Ok(format!(
        "constant n/2 - 3(n-2r)^2/2 = {naive_offset} gives {} on weight 1; derived constant {derived_offset} gives 0 on weight 1 and 2 on weights 0, 2",
        naive_on_target[0]
    ))
}

fn random_coefficients(rng: &mut ChaCha8Rng, n: usize) -> Coefficients {
    let density = rng.gen_range(0.2..=1.0);
    let linear = (0..n).map(|_| random_rational(rng, 9)).collect();
    let mut quadratic = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                quadratic.push(((i, j), random_rational(rng, 9)));
            }
        }
    }
    Coefficients::new(n, random_rational(rng, 9), linear, quadratic).expect("valid shape")
}

/// Coefficients multiplied by `scale`, which must clear every denominator.
fn integer_form(c: &Coefficients, scale: i128) -> (i128, Vec<i128>, Vec<(usize, usize, i128)>) {
    let to_int = |v: &Rational| {
        let scaled = v * Rational::from_bigints(scale.into(), 1.into()).expect("nonzero");
        assert!(scaled.is_integer(), "{v} * {scale} is not integral");
        scaled.numer().to_i128().expect("small")
    };
    (
        to_int(c.offset()),
        c.linear().iter().map(to_int).collect(),
        c.quadratic()
            .iter()
            .map(|(&(i, j), v)| (i, j, to_int(v)))
            .collect(),
    )
}

fn lcm_of_denominators(c: &Coefficients, acc: i128) -> i128 {
    let gcd = |mut a: i128, mut b: i128| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    std::iter::once(c.offset())
        .chain(c.linear())
        .chain(c.quadratic().values())
        .map(|v| v.denom().to_i128().expect("small"))
        .fold(acc, |l, d| l / gcd(l, d) * d)
}

fn criterion_6() -> Outcome {
    let mut rng = rng(6);
    let mut assignments = 0u64;
    for index in 0..1000 {
        let n = rng.gen_range(1..=12usize);
        let q = Qubo::from_coefficients(random_coefficients(&mut rng, n));
        let h = IsingModel::from_coefficients(random_coefficients(&mut rng, n));

        let to_ising = qubo_to_ising(&q);
        ensure(ising_to_qubo(&to_ising) == q, || {
            format!("model {index}: QUBO round trip differs")
        })?;
        let to_qubo = ising_to_qubo(&h);
        ensure(qubo_to_ising(&to_qubo) == h, || {
            format!("model {index}: Ising round trip differs")
        })?;

        for (qubo, ising) in [(&q, &to_ising), (&to_qubo, &h)] {
            let scale = lcm_of_denominators(ising, lcm_of_denominators(qubo, 1));
            let (a, b, c) = integer_form(qubo, scale);
            let (e0, hs, js) = integer_form(ising, scale);
            for mask in 0..1u64 << n {
                let x = |k: usize| i128::from((mask >> k) & 1 == 1);
                let s = |k: usize| 2 * x(k) - 1;
                let qv = a
                    + b.iter().enumerate().map(|(k, v)| v * x(k)).sum::<i128>()
                    + c.iter().map(|&(i, j, v)| v * x(i) * x(j)).sum::<i128>();
                let hv = e0
                    + hs.iter().enumerate().map(|(k, v)| v * s(k)).sum::<i128>()
                    + js.iter().map(|&(i, j, v)| v * s(i) * s(j)).sum::<i128>();
                ensure(qv == hv, || {
                    format!("model {index}: mask {mask:b} gives {qv} vs {hv} (x{scale})")
                })?;
                if index % 20 == 0 {
                    let bits = bitstring(n, mask);
                    let lq = qubo.evaluate(&bits).map_err(|e| e.to_string())?;
                    let lh = ising.evaluate(&bits).map_err(|e| e.to_string())?;
                    let expected =
                        Rational::from_bigints(qv.into(), scale.into()).expect("nonzero");
                    ensure(lq == expected && lh == expected, || {
                        format!("model {index}: library values {lq}, {lh} vs {expected}")
                    })?;
                }
                assignments += 1;
            }
        }
    }
    Ok(format!(
        "1000 QUBO and 1000 Ising models round-trip; {assignments} assignments agree"
    ))
}

/// `(r - |x|) (alpha + sum beta_j x_j)` as a QUBO.
fn vanishing_qubo(n: usize, r: usize, alpha: &Rational, beta: &[Rational]) -> Qubo {
    let r = int(r as i64);
    let linear = beta.iter().map(|b| &(&r - int(1)) * b - alpha).collect();
    let mut quadratic = Vec::new();
    for j in 0..n {
        for k in j + 1..n {
            quadratic.push(((j, k), -(&beta[j] + &beta[k])));
        }
    }
    Qubo::new(n, &r * alpha, linear, quadratic).expect("valid shape")
}

fn check_vanishes(q: &Qubo, r: usize) -> Result<(), String> {
    for mask in 0..1u64 << q.n() {
        let x = bitstring(q.n(), mask);
        if x.weight() == r {
            let value = q.evaluate(&x).map_err(|e| e.to_string())?;
            ensure(value.is_zero(), || {
                format!("construction gives {value} at {x}")
            })?;
        }
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let mut rng = rng(7);
    let mut general = 0;
    let mut nonnegative = 0;
    for n in 3..=8usize {
        for trial in 0..400 {
            let r = rng.gen_range(1..n);
            let mut pair: Vec<usize> = (0..n).collect();
            pair.shuffle(&mut rng);
            let (u, v) = (pair[0], pair[1]);
            let repaired = trial % 2 == 1;
            let (alpha, beta) = if repaired {
                let t = Rational::new(rng.gen_range(1..=9), rng.gen_range(1..=6));
                let beta = (0..n)
                    .map(|j| if j == u || j == v { int(0) } else { -&t })
                    .collect::<Vec<_>>();
                (&t * int(r as i64 - 1), beta)
            } else {
                let mut beta: Vec<Rational> =
                    (0..n).map(|_| random_rational(&mut rng, 9)).collect();
                beta[v] = -&beta[u];
                (random_rational(&mut rng, 9), beta)
            };
            let q = vanishing_qubo(n, r, &alpha, &beta);
            ensure(q.coupling(u, v).is_zero(), || {
                format!("n={n}: c_{u}{v} not forced to zero")
            })?;
            check_vanishes(&q, r)?;

            let witness = sparse_zero_witness(&q, r).map_err(|e| format!("n={n} r={r}: {e}"))?;
            let w = witness.bitstring.weight();
            let value = q.evaluate(&witness.bitstring).map_err(|e| e.to_string())?;
            ensure(w + 1 == r || w == r + 1, || {
                format!("n={n} r={r}: witness weight {w}")
            })?;
            ensure(value == witness.value && !value.is_positive(), || {
                format!("n={n} r={r}: witness {} value {value}", witness.bitstring)
            })?;
            if repaired {
                ensure(witness.nonnegative && value.is_zero(), || {
                    format!("n={n} r={r}: nonnegative model has witness value {value}")
                })?;
                nonnegative += 1;
            } else {
                general += 1;
            }
        }
    }
    Ok(format!(
        "{general} general and {nonnegative} nonnegative models: witness at weight r±1 with value <= 0 (= 0 when nonnegative)"
    ))
}

/// Smallest interval containing the biases, and the one containing every
/// pair coupling (absent pairs count as zero).
fn intervals(c: &Coefficients) -> [(Rational, Rational); 2] {
    let n = c.n();
    let linear = c.linear();
    let lo = linear.iter().min().cloned().expect("n >= 1");
    let hi = linear.iter().max().cloned().expect("n >= 1");
    let couplings: Vec<Rational> = (0..n)
        .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
        .map(|(j, k)| c.coupling(j, k))
        .collect();
    let clo = couplings.iter().min().cloned().unwrap_or_default();
    let chi = couplings.iter().max().cloned().unwrap_or_default();
    [(lo, hi), (clo, chi)]
}

fn inside(inner: &[(Rational, Rational); 2], outer: &[(Rational, Rational); 2]) -> bool {
    inner
        .iter()
        .zip(outer)
        .all(|((a, b), (lo, hi))| lo <= a && b <= hi)
}

fn symmetrization_properties<M: PenaltyModel>(
    model: &M,
    r: usize,
    check_closure: bool,
) -> Result<(), String> {
    let n = model.coefficients().n();
    let workers = default_workers();
    let group = PermutationGroup::symmetric(n);
    let averaged = symmetrize(model, &group).map_err(|e| e.to_string())?;

    let before = ground_set(model, workers).map_err(|e| e.to_string())?;
    let after = ground_set(&averaged, workers).map_err(|e| e.to_string())?;
    ensure(
        before.energy.is_zero() && before.iter().all(|x| x.weight() == r),
        || format!("n={n} r={r}: ground set is not the weight-r class"),
    )?;
    ensure(before == after, || {
        format!("n={n} r={r}: ground set changed")
    })?;
    ensure(
        inside(
            &intervals(averaged.coefficients()),
            &intervals(model.coefficients()),
        ),
        || format!("n={n} r={r}: averaged coefficient left its interval"),
    )?;
    ensure(
        symmetrize(&averaged, &group).map_err(|e| e.to_string())? == averaged,
        || format!("n={n} r={r}: not idempotent"),
    )?;
    let gap_before = min_penalty_with(model, r, workers)
        .map_err(|e| e.to_string())?
        .gap;
    let gap_after = min_penalty_with(&averaged, r, workers)
        .map_err(|e| e.to_string())?
        .gap;
    ensure(gap_after >= gap_before, || {
        format!("n={n} r={r}: gap fell from {gap_before} to {gap_after}")
    })?;
    if check_closure {
        let oracle = average_over_closure(model, &group, 1_000_000).map_err(|e| e.to_string())?;
        ensure(oracle == averaged, || {
            format!("n={n} r={r}: orbit average differs from group average")
        })?;
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let mut rng = rng(8);
    let mut closure_checked = 0;
    for index in 0..500 {
        let n = rng.gen_range(2..=10usize);
        let r = rng.gen_range(1..n);
        let e = Rational::new(rng.gen_range(1..=9), rng.gen_range(1..=3));
        // Perturbation with |alpha| + sum |beta_j| < E keeps the ground set
        // equal to the weight-r class at energy zero.
        let budget = &e * Rational::new(99, 100);
        let raw: Vec<Rational> = (0..=n).map(|_| random_rational(&mut rng, 9)).collect();
        let total: Rational = raw.iter().map(Rational::abs).sum();
        let shrink = if total.is_zero() {
            int(0)
        } else {
            &budget / total
        };
        let alpha = &raw[0] * &shrink;
        let beta: Vec<Rational> = raw[1..].iter().map(|b| b * &shrink).collect();

        let base = build_qubo_hamming(n, r, &e).map_err(|err| err.to_string())?;
        let tilt = vanishing_qubo(n, r, &alpha, &beta);
        let c = base.coefficients();
        let t = tilt.coefficients();
        let quadratic = (0..n)
            .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
            .map(|(j, k)| ((j, k), c.coupling(j, k) + t.coupling(j, k)));
        let linear = c
            .linear()
            .iter()
            .zip(t.linear())
            .map(|(a, b)| a + b)
            .collect();
        let q = Qubo::new(n, c.offset() + t.offset(), linear, quadratic)
            .map_err(|err| err.to_string())?;

        let check_closure = n <= 6;
        symmetrization_properties(&q, r, check_closure)
            .map_err(|m| format!("model {index} (QUBO): {m}"))?;
        symmetrization_properties(&qubo_to_ising(&q), r, check_closure)
            .map_err(|m| format!("model {index} (Ising): {m}"))?;
        if check_closure {
            closure_checked += 1;
        }
    }
    Ok(format!(
        "500 models in QUBO and Ising form: ground set, intervals, idempotence, gap monotone ({closure_checked} also matched against the group average)"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("Q_r equals E(r-|x|)^2", criterion_1),
        ("gap is E for Q_r and 2E for H_r", criterion_2),
        ("QUBO optimal scale certified by LP", criterion_3),
        ("Ising optimal scale certified by LP", criterion_4),
        ("Ising offset for n=4, r=1", criterion_5),
        ("QUBO/Ising conversion", criterion_6),
        ("sparse models admit a zero witness", criterion_7),
        ("symmetrization properties", criterion_8),
    ];
    let mut failed = 0;
    for (index, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", index + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {reason}", index + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
