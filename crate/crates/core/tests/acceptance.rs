//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wittsig::field_arith::{embeddings_g0, exp_2pi_i, ntheory, CyclotomicNumber, Embedding};
use wittsig::forms::{
    extend_constant, make_canonical, make_metabolic, make_random_diagonal, mu_component, sigma_component,
    signature_constant, signature_vector, trace_form_rp, triple_to_fp_form, CanonicalBlock, ConstantForm,
    FpPolynomial, HermitianForm, WittElement,
};
use wittsig::funcfield::parse_expression;
use wittsig::rational::{int, rat};
use wittsig::sigfunc::{
    evaluate_class_at, numeric_class_at, signature_step_function, signature_step_function_with, CirclePoint,
    SignatureStepFunction,
};
use wittsig::witt_decide::is_trivial;
use wittsig::Settings;

type Check = fn() -> Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ex(n: u64, j: i64) -> CirclePoint {
    CirclePoint::exact(n, j).unwrap()
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure!(t <= limit, "took {:.1?}, limit {:.0?}", t, limit);
    Ok(())
}

fn gaussian_block() -> WittElement {
    make_canonical(&int(0), &[CanonicalBlock { n: 4, j: 1, r: int(1) }]).unwrap()
}

fn criterion_1() -> Result<String, String> {
    let start = Instant::now();
    let w = gaussian_block();
    let rho = Embedding::identity(4);
    let s = signature_step_function(&w, &rho).map_err(|e| e.to_string())?;
    ensure!(s.candidates() == [ex(1, 0), ex(4, 3)], "candidates {:?}", s.candidates());
    ensure!(s.arc_values() == [int(-1), int(1)], "arc values {:?}", s.arc_values());
    let arcs: Vec<_> = s.arcs().into_iter().map(|(a, b, v)| (a, b, v.clone())).collect();
    ensure!(
        arcs == vec![(int(0), rat(3, 4), int(-1)), (rat(3, 4), int(1), int(1))],
        "arcs {:?}",
        arcs
    );
    let jumps: Vec<_> = s.jumps().into_iter().map(|(_, v)| v).collect();
    ensure!(jumps == vec![int(-2), int(2)], "jumps {:?}", jumps);

    let entry = &w.summands()[0].form.gram()[0][0];
    let at = |n: u64, j: i64| entry.eval_root_of_unity(n, j).unwrap();
    ensure!(at(2, 1) == CyclotomicNumber::from_integer(4, -2), "form(-1) = {}", at(2, 1));
    ensure!(at(4, 1) == CyclotomicNumber::from_integer(4, -2), "form(i) = {}", at(4, 1));
    let v = entry
        .eval_numeric(&rho, &exp_2pi_i(&rat(-1, 8), 96), 96)
        .map_err(|e| e.to_string())?;
    let (re, im) = v.mid_f64();
    ensure!((re - (2f64.sqrt() - 1.0)).abs() < 1e-9 && im.abs() < 1e-9, "form(e^(-i pi/4)) = {re} + {im}i");
    ensure!(v.re.sign() == Some(1), "form(e^(-i pi/4)) not certified positive");
    within(start, Duration::from_secs(5))?;
    Ok(format!("values -1 on (0, 3/4), +1 on (3/4, 1); {:.2?}", start.elapsed()))
}

/// A random canonical configuration: `r0` and up to three distinct blocks.
fn random_configuration(rng: &mut ChaCha8Rng) -> (BigRational, Vec<CanonicalBlock>) {
    let r0 = int(rng.gen_range(-3..=3));
    let count = rng.gen_range(1..=3);
    let mut blocks: Vec<CanonicalBlock> = Vec::new();
    while blocks.len() < count {
        let n = rng.gen_range(2..=12u64);
        let units = ntheory::units(n);
        let j = *units.choose(rng).unwrap();
        if blocks.iter().any(|b| b.n == n && b.j == j) {
            continue;
        }
        blocks.push(CanonicalBlock { n, j, r: int(rng.gen_range(1..=3)) });
    }
    (r0, blocks)
}

/// Value predicted for an angle off the candidate set: each block `r [B_z]`
/// is `-r` between angle 0 and the angle of `conj z`, and `+r` after.
fn predicted_value(r0: &BigRational, blocks: &[CanonicalBlock], angle: &BigRational) -> BigRational {
    let mut v = r0.clone();
    for b in blocks {
        let zero = BigRational::new(((b.n - b.j) % b.n).into(), b.n.into());
        if angle < &zero {
            v -= &b.r;
        } else {
            v += &b.r;
        }
    }
    v
}

fn criterion_2() -> Result<String, String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut max_m = 0;
    for case in 0..20 {
        let (r0, blocks) = random_configuration(&mut rng);
        let w = make_canonical(&r0, &blocks).map_err(|e| e.to_string())?;
        max_m = max_m.max(w.conductor());
        let s = signature_step_function(&w, &Embedding::identity(w.conductor())).map_err(|e| e.to_string())?;
        let jumps = s.jumps();
        let jump_at = |p: &CirclePoint| jumps.iter().find(|x| &x.0 == p).map(|x| x.1.clone());
        let total: BigRational = blocks.iter().map(|b| b.r.clone()).sum();
        for b in &blocks {
            // -(1 - conj z)/(1 - z) = conj z
            let zero = ex(b.n, -(b.j as i64));
            let expected = &b.r * int(2);
            ensure!(
                jump_at(&zero) == Some(expected.clone()),
                "case {case}: jump at {zero} is {:?}, expected {expected}",
                jump_at(&zero)
            );
            // (1 - conj z)/(1 - z) = -conj z carries no jump unless another block sits there
            let alt = ex(2 * b.n, (b.n as i64) - 2 * b.j as i64);
            let other = blocks.iter().any(|c| ex(c.n, -(c.j as i64)) == alt);
            ensure!(other || alt == ex(1, 0) || jump_at(&alt).is_none(), "case {case}: jump at {alt}");
        }
        ensure!(jump_at(&ex(1, 0)) == Some(-&total * int(2)), "case {case}: jump at 1");
        ensure!(jumps.len() == blocks.len() + 1, "case {case}: {} jumps", jumps.len());
        for (sample, value) in s.samples().iter().zip(s.arc_values()) {
            let expected = predicted_value(&r0, &blocks, &sample.angle_lo());
            ensure!(value == &expected, "case {case}: value {value} at {sample}, expected {expected}");
        }
        // the constant part shifts every arc by exactly r0
        let bare = make_canonical(&int(0), &blocks).map_err(|e| e.to_string())?;
        let sb = signature_step_function(&bare, &Embedding::identity(bare.conductor())).map_err(|e| e.to_string())?;
        ensure!(sb.candidates() == s.candidates(), "case {case}: candidates differ without r0");
        for (a, b) in s.arc_values().iter().zip(sb.arc_values()) {
            ensure!(a - b == r0, "case {case}: constant part contributes {} not {r0}", a - b);
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("20 configurations, conductors up to {max_m}; {:.1?}", start.elapsed()))
}

fn criterion_3() -> Result<String, String> {
    let start = Instant::now();
    let ms = [1u64, 3, 4, 5, 8, 12];
    for i in 0..50u64 {
        let m = ms[i as usize % ms.len()];
        let n = 1 + (i as usize / ms.len()) % 3;
        let f = make_metabolic(m, n, 1, 1000 + i).map_err(|e| e.to_string())?;
        let w = WittElement::from_form(f);
        let d = is_trivial(&w).map_err(|e| format!("m = {m}, rank {}: {e}", 2 * n))?;
        ensure!(d.trivial, "m = {m}, rank {}, seed {}: not trivial", 2 * n, 1000 + i);
        ensure!(d.step_functions.iter().all(SignatureStepFunction::is_zero), "m = {m}: nonzero arc");
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("50 forms, ranks 2-6; {:.1?}", start.elapsed()))
}

const FP_FAMILY: [u64; 5] = [3, 4, 5, 8, 12];

fn criterion_4() -> Result<String, String> {
    let start = Instant::now();
    let rho = Embedding::identity(1);
    let mut pairs = 0;
    for d in FP_FAMILY {
        let p = FpPolynomial::cyclotomic(d).map_err(|e| e.to_string())?;
        for seed in 0..10u64 {
            let rank = 1 + (seed as usize % 3);
            let form = make_random_diagonal(d, rank, 1, 100 * d + seed).map_err(|e| e.to_string())?;
            for j in ntheory::units(d) {
                let mu = mu_component(&form, &p, &rho, d, j).map_err(|e| e.to_string())?;
                let s_mu = signature_constant(&mu, &Embedding::identity(d)).map_err(|e| e.to_string())?;
                let sigma = sigma_component(&form, &p, &rho, d, j).map_err(|e| e.to_string())?;
                let s_sigma = sigma.signature().map_err(|e| e.to_string())?;
                ensure!(s_mu == s_sigma, "Phi_{d}, seed {seed}, z = zeta_{d}^{j}: sigma {s_sigma}, mu {s_mu}");
                pairs += 1;
            }
        }
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("{pairs} (form, z) pairs; {:.1?}", start.elapsed()))
}

fn criterion_5() -> Result<String, String> {
    let start = Instant::now();
    for d in FP_FAMILY {
        let p = FpPolynomial::cyclotomic(d).map_err(|e| e.to_string())?;
        for seed in 0..10u64 {
            let rank = 1 + (seed as usize % 3);
            let form = make_random_diagonal(d, rank, 1, 100 * d + seed).map_err(|e| e.to_string())?;
            let triple = trace_form_rp(&form, &p).map_err(|e| e.to_string())?;
            let back = triple_to_fp_form(&triple, &p).map_err(|e| e.to_string())?;
            let before = signature_vector(&form).map_err(|e| e.to_string())?;
            let after = signature_vector(&back).map_err(|e| e.to_string())?;
            ensure!(before == after, "Phi_{d}, seed {seed}: {before:?} vs {after:?}");
        }
    }
    Ok(format!("50 forms; {:.1?}", start.elapsed()))
}

/// A random class over `Q(zeta_m)(t)`, `m` in {4, 8, 12}: hermitian lines
/// `a t + conj(a) / t + c`, optionally a canonical block, random
/// multiplicities.
fn random_element(rng: &mut ChaCha8Rng) -> WittElement {
    let m = *[4u64, 8, 12].choose(rng).unwrap();
    let mut w = WittElement::zero(m, 1);
    for _ in 0..rng.gen_range(1..=2) {
        let a = CyclotomicNumber::zeta_power(m, rng.gen_range(0..m as i64)).scale_int(rng.gen_range(1..=2));
        let c = rng.gen_range(-4..=4);
        let text = format!("({a}) * t + ({}) * t^-1 + {c}", a.conjugate());
        let x = parse_expression(m, &text).unwrap();
        let coeff = int(*[-2i64, -1, 1, 3].choose(rng).unwrap());
        w.push(HermitianForm::diagonal(m, 1, &[x]).unwrap(), coeff).unwrap();
    }
    if rng.gen_bool(0.5) {
        let divisors: Vec<u64> = ntheory::divisors(m).into_iter().filter(|&d| d > 1).collect();
        let n = *divisors.choose(rng).unwrap();
        let j = *ntheory::units(n).choose(rng).unwrap();
        let b = make_canonical(&int(0), &[CanonicalBlock { n, j, r: int(1) }]).unwrap();
        w = w.direct_sum(&b.lift(m).unwrap()).unwrap();
    }
    if rng.gen_bool(0.3) {
        // force a trivial class
        w = w.direct_sum(&w.scale(&int(-1))).unwrap();
    }
    w
}

fn criterion_6() -> Result<String, String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut nontrivial = 0;
    for case in 0..30u64 {
        let w = random_element(&mut rng);
        let m = w.conductor();
        let base = is_trivial(&w).map_err(|e| format!("case {case}: {e}"))?.trivial;
        if !base {
            nontrivial += 1;
        }
        let met = WittElement::from_form(make_metabolic(m, 1 + case as usize % 2, 1, case).unwrap());
        let with_met = is_trivial(&w.direct_sum(&met).unwrap()).map_err(|e| e.to_string())?.trivial;
        ensure!(with_met == base, "case {case}: adding a metabolic form changed the decision");
        let cancel = is_trivial(&w.direct_sum(&w.scale(&int(-1))).unwrap()).map_err(|e| e.to_string())?.trivial;
        ensure!(cancel, "case {case}: w + (-w) not trivial");
        for r in [rat(1, 2), int(2), int(-3)] {
            let scaled = is_trivial(&w.scale(&r)).map_err(|e| e.to_string())?.trivial;
            ensure!(scaled == base, "case {case}: scaling by {r} changed the decision");
        }
    }
    ensure!(nontrivial > 0 && nontrivial < 30, "degenerate sample: {nontrivial} nontrivial of 30");
    Ok(format!("30 classes ({nontrivial} nontrivial); {:.1?}", start.elapsed()))
}

fn criterion_7() -> Result<String, String> {
    let x = &CyclotomicNumber::zeta_power(5, 1) + &CyclotomicNumber::zeta_power(5, 4);
    let form = ConstantForm::diagonal(5, 1, &[x]).map_err(|e| e.to_string())?;
    let v: Vec<(u64, i64)> = signature_vector(&form)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|(rho, s)| (rho.exponent(), s))
        .collect();
    ensure!(v == vec![(1, 1), (2, -1)], "signature vector {v:?}");
    let d = is_trivial(&WittElement::from_form(extend_constant(&form))).map_err(|e| e.to_string())?;
    ensure!(!d.trivial, "extension decided trivial");
    let by: Vec<(u64, BigRational)> = d.witnesses.iter().map(|x| (x.embedding.exponent(), x.value.clone())).collect();
    ensure!(by == vec![(1, int(1)), (2, int(-1))], "witnesses {by:?}");
    Ok("signature vector (+1, -1); witnesses +1 at k=1, -1 at k=2".into())
}

fn compare_with_spurious(w: &WittElement, label: &str) -> Result<(), String> {
    let rho = Embedding::identity(w.conductor());
    let extra: Vec<CirclePoint> = (0..16).map(|j| ex(16, j)).collect();
    let plain = signature_step_function(w, &rho).map_err(|e| e.to_string())?;
    let noisy = signature_step_function_with(w, &rho, &Settings::default(), &extra).map_err(|e| e.to_string())?;
    for (sample, value) in noisy.samples().iter().zip(noisy.arc_values()) {
        let reference = plain.value_at(&sample.angle_lo());
        ensure!(reference.as_ref() == Some(value), "{label}: value {value} at {sample}, expected {reference:?}");
    }
    let (a, b) = (plain.merged(), noisy.merged());
    ensure!(a.candidates() == b.candidates(), "{label}: merged candidates differ");
    ensure!(a.arc_values() == b.arc_values(), "{label}: merged values differ");
    Ok(())
}

fn criterion_8() -> Result<String, String> {
    compare_with_spurious(&gaussian_block(), "block at zeta_4")?;
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for case in 0..20 {
        let (r0, blocks) = random_configuration(&mut rng);
        let w = make_canonical(&r0, &blocks).map_err(|e| e.to_string())?;
        compare_with_spurious(&w, &format!("configuration {case}"))?;
    }
    Ok("21 step functions unchanged by 16 spurious candidates".into())
}

fn criterion_9() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut compared = 0;
    let mut attempts = 0;
    while compared < 100 {
        attempts += 1;
        ensure!(attempts < 2000, "only {compared} decisive points in {attempts} attempts");
        let w = random_element(&mut rng);
        let embeddings = embeddings_g0(w.conductor());
        let rho = *embeddings.choose(&mut rng).unwrap();
        let n = rng.gen_range(1..=24u64);
        let z = ex(n, rng.gen_range(0..n as i64));
        let exact = match evaluate_class_at(&w, &rho, &z) {
            Ok(v) => v,
            Err(_) => continue,
        };
        if let Some(numeric) = numeric_class_at(&w, &rho, &z, 64).map_err(|e| e.to_string())? {
            ensure!(numeric == exact, "at {z} under {rho}: numeric {numeric}, exact {exact}");
            compared += 1;
        }
    }
    Ok(format!("100 decisive points ({attempts} drawn)"))
}

fn main() {
    let criteria: [(&str, Check); 9] = [
        ("canonical block fixture", criterion_1),
        ("jump law 2r", criterion_2),
        ("metabolic vanishing", criterion_3),
        ("sigma = mu", criterion_4),
        ("trace-form roundtrip", criterion_5),
        ("decision invariance", criterion_6),
        ("embedding decomposition", criterion_7),
        ("over-approximation safety", criterion_8),
        ("numeric/exact agreement", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS - {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL - {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
