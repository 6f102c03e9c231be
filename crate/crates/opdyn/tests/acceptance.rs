//! Acceptance gate: one test per release criterion, each printing a
//! single pass/fail line. Tolerances are pinned here, not configurable.

use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use opdyn::algebras::{
    commutator_model_check, functional_eigen_check, AhModelElement,
    MultiplicativeFunctional, TarbardModelElement,
};
use opdyn::dynamics::{
    hcc_probe, riesz_classify, transitivity_probe, Verdict,
    TRANSITIVITY_NEGATIVE_FLOOR, TRANSITIVITY_POSITIVE_THRESHOLD,
};
use opdyn::elementary::{tuple_eigen_obstruction, ElementaryOp};
use opdyn::hilbert::derivation_selfcommutator;
use opdyn::numlin::{
    eig, expm, random_vector, schatten_norm, svd, vec_norm, vec_normalize,
    vec_scale, vec_sub, CMatrix,
};
use opdyn::opmodel::{materialize, uniform_weights, OperatorSpec, Truncation};
use opdyn::scenario::{run_scenario, write_report_files, Scenario, ScenarioConfig};

/// Print the criterion line, then enforce it.
fn conclude(n: usize, label: &str, failures: Vec<String>) {
    let ok = failures.is_empty();
    println!("criterion {n} ({label}): {}", if ok { "pass" } else { "fail" });
    assert!(ok, "criterion {n} ({label}):\n{}", failures.join("\n"));
}

fn random_strictly_upper(d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let full = CMatrix::random(d, d, rng);
    let mut k = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in i + 1..d {
            k[(i, j)] = full[(i, j)];
        }
    }
    k
}

#[test]
fn criterion_1_lift_spectrum_matches_difference_set() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for trial in 0..200usize {
        let d = 2 + trial % 7; // 2..=8
        let a = CMatrix::random(d, d, &mut rng);
        let b = CMatrix::random(d, d, &mut rng);
        let e = ElementaryOp::derivation(a, b).unwrap();
        let spec = e.spectrum(None).unwrap();
        let h = spec.hausdorff_to_difference_set.unwrap();
        if h > 1e-6 {
            failures.push(format!("trial {trial} (d={d}): hausdorff {h:.3e}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs() >= 30 {
        failures.push(format!("runtime {elapsed:?} exceeds 30 s"));
    }
    conclude(1, "lift spectrum equals the eigenvalue difference set", failures);
}

#[test]
fn criterion_2_selfcommutator_identity() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for trial in 0..100usize {
        let d = 2 + trial % 5; // 2..=6
        let a = CMatrix::random(d, d, &mut rng);
        let b = CMatrix::random(d, d, &mut rng);
        let sc = derivation_selfcommutator(&a, &b).unwrap();
        if sc.residual > 1e-10 {
            failures.push(format!("trial {trial} (d={d}): residual {:.3e}", sc.residual));
        }
    }
    // normal factors: both sides of the identity vanish
    for trial in 0..20usize {
        let d = 2 + trial % 5;
        let diag = |rng: &mut ChaCha8Rng| {
            let entries: Vec<C64> = (0..d)
                .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            CMatrix::diag(&entries)
        };
        let a = diag(&mut rng);
        let b = diag(&mut rng);
        let sc = derivation_selfcommutator(&a, &b).unwrap();
        let scale = (1.0 + a.frobenius_norm() + b.frobenius_norm()).powi(4);
        let lhs = sc.lhs.frobenius_norm() / scale;
        let rhs = sc.rhs.frobenius_norm() / scale;
        if lhs > 1e-12 || rhs > 1e-12 {
            failures.push(format!(
                "normal trial {trial} (d={d}): lhs {lhs:.3e}, rhs {rhs:.3e}"
            ));
        }
    }
    conclude(2, "self-commutator identity for derivation lifts", failures);
}

#[test]
fn criterion_3_functional_eigen_checks() {
    let mut failures = Vec::new();
    let d = 6;
    let tol = 1e-12;
    let mut rng = ChaCha8Rng::seed_from_u64(303);

    for trial in 0..500usize {
        let make = |rng: &mut ChaCha8Rng| AhModelElement {
            lambda: C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            k: random_strictly_upper(d, rng),
        };
        let pairs: Vec<(CMatrix, CMatrix)> = (0..2)
            .map(|_| (make(&mut rng).matrix(), make(&mut rng).matrix()))
            .collect();
        let m1 = pairs[0].0.clone();
        let m2 = pairs[0].1.clone();
        let e = ElementaryOp::new(pairs).unwrap();
        let phi = MultiplicativeFunctional::AhScalar;
        let check = functional_eigen_check(&e, &phi, tol).unwrap();
        if check.residual > 1e-12 {
            failures.push(format!("ah trial {trial}: residual {:.3e}", check.residual));
        }
        let gap = (phi.apply(&m1.matmul(&m2), tol).unwrap()
            - phi.apply(&m1, tol).unwrap() * phi.apply(&m2, tol).unwrap())
        .norm();
        if gap > 1e-12 {
            failures.push(format!("ah trial {trial}: multiplicativity gap {gap:.3e}"));
        }
    }

    let order = 2;
    for trial in 0..500usize {
        let make = |rng: &mut ChaCha8Rng| {
            let coefficients: Vec<C64> = (0..order)
                .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let full = CMatrix::random(d, d, rng);
            let mut k = CMatrix::zeros(d, d);
            for i in 0..d {
                for j in (i + order)..d {
                    k[(i, j)] = full[(i, j)];
                }
            }
            TarbardModelElement { coefficients, k, order }
        };
        let m1 = make(&mut rng).matrix();
        let m2 = make(&mut rng).matrix();
        let e = ElementaryOp::derivation(m1.clone(), m2.clone()).unwrap();
        let phi = MultiplicativeFunctional::TarbardLeading { order };
        let check = functional_eigen_check(&e, &phi, tol).unwrap();
        if check.residual > 1e-12 {
            failures.push(format!(
                "tarbard trial {trial}: residual {:.3e}",
                check.residual
            ));
        }
        let gap = (phi.apply(&m1.matmul(&m2), tol).unwrap()
            - phi.apply(&m1, tol).unwrap() * phi.apply(&m2, tol).unwrap())
        .norm();
        if gap > 1e-12 {
            failures.push(format!(
                "tarbard trial {trial}: multiplicativity gap {gap:.3e}"
            ));
        }
    }
    conclude(3, "model functionals are exact adjoint eigenvectors", failures);
}

#[test]
fn criterion_4_shift_obstruction_certificates_replay() {
    let mut failures = Vec::new();
    let d = 16usize;
    let tol = 10.0 * 0.5f64.powi(d as i32 - 3);

    // replay an (eigenvalue, N) certificate through the lifted adjoint
    let replay = |e: &ElementaryOp, n: &CMatrix, lam: C64| -> f64 {
        let lift = e.adjoint_lift().unwrap().matrix;
        let v = n.vec();
        vec_norm(&vec_sub(&lift.matvec(&v), &vec_scale(&v, lam))) / vec_norm(&v)
    };

    // forward/backward shift derivation
    let tr = Truncation::bilinear(d);
    let fwd = OperatorSpec::ForwardShift { weights: uniform_weights(d - 1) };
    let bwd = OperatorSpec::BackwardShift { weights: uniform_weights(d - 1) };
    let out =
        opdyn::dynamics::point_spectrum_obstruction(&fwd, &bwd, &tr, tol).unwrap();
    if out.report.verdict() != Verdict::Obstructed {
        failures.push("point-spectrum probe not obstructed".into());
    }
    match (&out.left, &out.right) {
        (Some((xstar, alpha, ra)), Some((x, beta, rb))) => {
            if *ra > tol || *rb > tol {
                failures.push(format!("witness residuals {ra:.3e}, {rb:.3e} > {tol:.3e}"));
            }
            let a = materialize(&fwd, &tr).unwrap();
            let b = materialize(&bwd, &tr).unwrap();
            let e = ElementaryOp::derivation(a, b).unwrap();
            let n = CMatrix::outer(x, xstar);
            let r = replay(&e, &n, alpha - beta);
            if r > 10.0 * tol {
                failures.push(format!("derivation replay {r:.3e} > 10x tol"));
            }
        }
        _ => failures.push("missing point-spectrum witnesses".into()),
    }

    // three-pair tuple with geometric witnesses
    let s = materialize(&fwd, &tr).unwrap();
    let b = materialize(&bwd, &tr).unwrap();
    let id = CMatrix::identity(d);
    let a_tuple = [s.clone(), id.clone(), s.pow(2)];
    let b_tuple = [id.clone(), b.clone(), b.pow(2)];
    let mu = C64::new(0.5, 0.0);
    let w = uniform_weights(d - 1);
    let xstar = opdyn::opmodel::weighted_shift_eigenvector(mu, &w, d).unwrap();
    let x = opdyn::opmodel::weighted_shift_eigenvector(mu, &w, d).unwrap();
    let out = tuple_eigen_obstruction(&a_tuple, &b_tuple, &xstar, &x, tol).unwrap();
    if !out.obstructed || out.residual > tol {
        failures.push(format!(
            "tuple obstruction residual {:.3e} vs tol {tol:.3e}",
            out.residual
        ));
    }
    if (out.eigenvalue - C64::new(1.0625, 0.0)).norm() > 1e-6 {
        failures.push(format!("tuple eigenvalue {} != 1.0625", out.eigenvalue));
    }
    let pairs: Vec<(CMatrix, CMatrix)> =
        a_tuple.iter().cloned().zip(b_tuple.iter().cloned()).collect();
    let e = ElementaryOp::new(pairs).unwrap();
    let n = CMatrix::outer(&x, &xstar);
    let r = replay(&e, &n, out.eigenvalue);
    if r > 10.0 * tol {
        failures.push(format!("tuple replay {r:.3e} > 10x tol"));
    }
    conclude(4, "shift obstruction certificates replay through the lift", failures);
}

#[test]
fn criterion_5_probe_discrimination() {
    let mut failures = Vec::new();
    let d = 12usize;
    let tr = Truncation::bilinear(d);
    let b = materialize(
        &OperatorSpec::BackwardShift { weights: uniform_weights(d - 1) },
        &tr,
    )
    .unwrap();
    let mixing = CMatrix::identity(d).add(&b);
    let unitary = {
        let entries: Vec<C64> = (0..d)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * (k as f64 * 0.37 + 0.11);
                C64::new(th.cos(), th.sin())
            })
            .collect();
        CMatrix::diag(&entries)
    };

    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = vec_normalize(&random_vector(d, &mut rng));
        let v = vec_normalize(&random_vector(d, &mut rng));

        let r = transitivity_probe(&mixing, &u, &v, 60).unwrap();
        let min = r.min_score().unwrap();
        if min >= TRANSITIVITY_POSITIVE_THRESHOLD {
            failures.push(format!("seed {seed}: mixing min {min:.4} above threshold"));
        }

        let r = transitivity_probe(&unitary, &u, &v, 60).unwrap();
        let mut power_u = u.clone();
        for step in &r.steps {
            power_u = unitary.matvec(&power_u);
            let want = vec_norm(&vec_sub(&power_u, &v)) / 2.0f64.sqrt();
            if (step.score - want).abs() > 1e-10 {
                failures.push(format!(
                    "seed {seed}, n = {}: unitary score off closed form by {:.3e}",
                    step.n,
                    (step.score - want).abs()
                ));
            }
        }
        let min = r.min_score().unwrap();
        if min <= TRANSITIVITY_NEGATIVE_FLOOR {
            failures.push(format!("seed {seed}: unitary min {min:.4} below floor"));
        }
    }

    // criterion probe fires on the shift scenarios...
    for scenario in [Scenario::Ex2_1, Scenario::Thm2_2, Scenario::Dw, Scenario::Ex2_4] {
        let report = run_scenario(&ScenarioConfig::defaults(scenario)).unwrap();
        let hcc: Vec<_> =
            report.probes.iter().filter(|p| p.name == "hcc").collect();
        if hcc.is_empty() {
            failures.push(format!("{}: no criterion probe", scenario.name()));
        }
        for p in hcc {
            if p.verdict != "evidence-for" {
                failures.push(format!(
                    "{}: criterion probe verdict {}",
                    scenario.name(),
                    p.verdict
                ));
            }
        }
    }

    // ...and never on unitary diagonal controls under the same configs
    for (scenario, dim) in [(Scenario::Dw, 64usize), (Scenario::Ex2_1, 256usize)] {
        let cfg = ScenarioConfig::defaults(scenario);
        let entries: Vec<C64> = (0..dim)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * (k as f64 * 0.41 + 0.07);
                C64::new(th.cos(), th.sin())
            })
            .collect();
        let control = CMatrix::diag(&entries);
        let out = hcc_probe(&control, &cfg.hcc_config()).unwrap();
        if out.report.verdict() == Verdict::EvidenceFor {
            failures.push(format!(
                "unitary control (dim {dim}, {} config) reported evidence-for",
                scenario.name()
            ));
        }
    }
    conclude(5, "probes separate mixing shifts from unitary controls", failures);
}

#[test]
fn criterion_6_compact_model_obstructions() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(606);

    for trial in 0..50usize {
        let d = 6 + trial % 6; // 6..=11
        let tr = Truncation::bilinear(d);
        // genuine C/k decay with bounded jitter, so the model membership
        // test (|z_k| * k <= 4 max) holds by construction
        let entries = |rng: &mut ChaCha8Rng| -> Vec<C64> {
            let c = rng.gen_range(0.1..0.4);
            (1..=d)
                .map(|k| C64::new(c * rng.gen_range(0.5..1.0) / k as f64, 0.0))
                .collect()
        };
        let spec_a = OperatorSpec::Diagonal { entries: entries(&mut rng) };
        let spec_b = OperatorSpec::Diagonal { entries: entries(&mut rng) };
        let out = riesz_classify(&spec_a, &spec_b, &tr).unwrap();
        match out.report.certificate() {
            Some(cert) if out.report.verdict() == Verdict::Obstructed => {
                let comp = cert.component.as_ref().unwrap();
                if !comp.iter().any(|z| z.norm() < 1e-12) {
                    failures.push(format!("riesz trial {trial}: component misses 0"));
                }
                if comp.iter().any(|z| (z.norm() - 1.0).abs() <= 0.1) {
                    failures.push(format!(
                        "riesz trial {trial}: component touches the unit circle"
                    ));
                }
            }
            _ => failures.push(format!("riesz trial {trial}: not obstructed")),
        }
    }

    for trial in 0..50usize {
        let d = 6 + trial % 4; // 6..=9
        let elem = AhModelElement {
            lambda: C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            k: random_strictly_upper(d, &mut rng),
        };
        let out = commutator_model_check(&elem).unwrap();
        if out.report.verdict() != Verdict::Obstructed {
            failures.push(format!("commutator trial {trial}: not obstructed"));
        }
        if out.lift_gap != 0.0 {
            failures.push(format!(
                "commutator trial {trial}: lift gap {} != 0",
                out.lift_gap
            ));
        }
    }
    conclude(6, "compact and nilpotent models are spectrally obstructed", failures);
}

#[test]
fn criterion_7_kernel_contracts() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(707);

    for trial in 0..1000usize {
        let d = 2 + trial % 15; // 2..=16
        let m = CMatrix::random(d, d, &mut rng);
        let scale = m.frobenius_norm();

        let dec = eig(&m).unwrap();
        if dec.residuals.iter().any(|r| *r > 1e-8 * scale) {
            failures.push(format!("eig trial {trial} (d={d}): residual above 1e-8"));
        }

        let s = svd(&m).unwrap();
        let sigma = CMatrix::diag_real(&s.singular_values);
        let recon = s.u.matmul(&sigma).matmul(&s.v.conj_transpose());
        let r = recon.sub(&m).frobenius_norm();
        if r > 1e-8 * scale {
            failures.push(format!("svd trial {trial} (d={d}): residual {r:.3e}"));
        }
    }

    // nilpotent exponential agrees with the terminating series
    for trial in 0..50usize {
        let d = 4 + trial % 7; // 4..=10
        let n = random_strictly_upper(d, &mut rng);
        let e = expm(&n).unwrap();
        let mut series = CMatrix::identity(d);
        let mut term = CMatrix::identity(d);
        for k in 1..d as u32 {
            term = term.matmul(&n).scale(C64::new(1.0 / k as f64, 0.0));
            series = series.add(&term);
        }
        let gap = e.sub(&series).frobenius_norm();
        if gap > 1e-14 * series.frobenius_norm() {
            failures.push(format!("expm trial {trial} (d={d}): gap {gap:.3e}"));
        }
    }

    for trial in 0..500usize {
        let d = 2 + trial % 11; // 2..=12
        let m = CMatrix::random(d, d, &mut rng);
        let inf = schatten_norm(&m, f64::INFINITY).unwrap();
        let two = schatten_norm(&m, 2.0).unwrap();
        let one = schatten_norm(&m, 1.0).unwrap();
        let slack = 1e-10 * (1.0 + one);
        if inf > two + slack || two > one + slack {
            failures.push(format!(
                "schatten trial {trial} (d={d}): {inf} / {two} / {one}"
            ));
        }
    }
    conclude(7, "eig, svd, expm and Schatten norm contracts", failures);
}

#[test]
fn criterion_8_deterministic_reports() {
    let mut failures = Vec::new();
    for scenario in Scenario::all() {
        let cfg = ScenarioConfig::defaults(scenario);
        let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
        let mut written: Vec<Vec<std::path::PathBuf>> = Vec::new();
        for dir in &dirs {
            let report = run_scenario(&cfg).unwrap();
            written.push(write_report_files(&report, dir.path()).unwrap());
        }
        if written[0].len() != written[1].len() {
            failures.push(format!("{}: file sets differ", scenario.name()));
            continue;
        }
        for (p1, p2) in written[0].iter().zip(&written[1]) {
            if p1.file_name() != p2.file_name() {
                failures.push(format!("{}: file names differ", scenario.name()));
                continue;
            }
            let b1 = std::fs::read(p1).unwrap();
            let b2 = std::fs::read(p2).unwrap();
            if b1 != b2 {
                failures.push(format!(
                    "{}: {} differs between runs",
                    scenario.name(),
                    p1.file_name().unwrap().to_string_lossy()
                ));
            }
        }
    }
    conclude(8, "byte-identical reports across repeated runs", failures);
}
