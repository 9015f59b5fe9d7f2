//! Acceptance criteria, one line each. Runs without the libtest harness so the
//! lines are always printed; exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use kravchuk::halfint::TwiceInt;
use kravchuk::oscillator::build_oscillator;
use kravchuk::su2::{self, EulerAngles};
use kravchuk::transform::{self, CMatrix, StateVector};
use kravchuk::{poly, Report};
use num_complex::Complex64;

fn scaled(d: usize) -> f64 {
    1e-12 * (d * d) as f64
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn exact_all(name: &str, range: impl Iterator<Item = u32>, check: fn(u32) -> Report) -> (bool, String) {
    let mut failed = Vec::new();
    for two_j in range {
        let r = check(two_j);
        if !r.pass {
            failed.push(format!("{name}@{two_j}: {}", r.detail.unwrap_or_default()));
        }
    }
    (failed.is_empty(), failed.join("; "))
}

fn within(elapsed: Duration, budget_s: f64) -> (bool, String) {
    let s = elapsed.as_secs_f64();
    (s < budget_s, format!("{s:.2}s of {budget_s}s"))
}

fn orthogonality() -> Outcome {
    let started = Instant::now();
    let (ok, failures) = exact_all("orthogonality", 0..=24, poly::check_orthogonality_exact);
    let (fast, time) = within(started.elapsed(), 10.0);
    Outcome { pass: ok && fast, detail: format!("two_j 0..=24 exact, {time} {failures}") }
}

fn phase_sum() -> Outcome {
    let started = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for two_j in 0..=20 {
        let r = poly::check_phase_sum_exact(two_j);
        let detail = r.detail.clone().unwrap_or_default();
        let ring_ok = if two_j % 2 == 0 { detail.starts_with("ring=Z[i]") } else { detail.starts_with("ring=Z[exp") };
        if !(r.pass && ring_ok) {
            ok = false;
            notes.push(format!("two_j={two_j}: {detail}"));
        }
    }
    let (fast, time) = within(started.elapsed(), 30.0);
    Outcome { pass: ok && fast, detail: format!("integer j to 2j=20 in Z[i], half-integer to 2j=19 in Z[zeta8], {time} {}", notes.join("; ")) }
}

fn oracles() -> Outcome {
    let (gf, a) = exact_all("generating_function", 0..=24, poly::check_generating_function);
    let (hyp, b) = exact_all("hypergeometric", 0..=16, poly::check_hypergeometric);
    Outcome { pass: gf && hyp, detail: format!("generating function 0..=24, hypergeometric 0..=16 {a}{b}") }
}

fn cube() -> Outcome {
    let started = Instant::now();
    let mut worst_ratio = 0f64;
    for two_j in 0..=40 {
        let k = transform::kravchuk_transform_matrix(two_j);
        let r = transform::cubic_residuals(&k);
        let worst = r.cube.max(r.commutation).max(r.square_is_adjoint);
        worst_ratio = worst_ratio.max(worst / scaled(k.dim()));
    }
    let (fast, time) = within(started.elapsed(), 20.0);
    Outcome {
        pass: worst_ratio < 1.0 && fast,
        detail: format!("K^3=I, commutation and K^2=K^dagger for 0..=40, worst residual/bound={worst_ratio:.3e}, {time}"),
    }
}

fn commutators() -> Outcome {
    let mut worst_ratio = 0f64;
    for two_j in 0..=40 {
        let g = su2::build_generators(two_j);
        let [xy, yz, zx] = g.commutator_residuals();
        let worst = xy.max(yz).max(zx).max(g.casimir_residual());
        worst_ratio = worst_ratio.max(worst / scaled(g.dim()));
    }
    Outcome { pass: worst_ratio < 1.0, detail: format!("two_j 0..=40, worst residual/bound={worst_ratio:.3e}") }
}

fn ladder() -> Outcome {
    let mut worst_ratio = 0f64;
    for two_j in 0..=40 {
        let g = su2::build_generators(two_j);
        let (jp, jm) = su2::ladder_ops(&g);
        let d = g.dim();
        let j = two_j as f64 / 2.0;
        let mut worst = 0f64;
        // J+ |j;m> = sqrt((j-m)(j+m+1)) |j;m+1>, J- |j;m> = sqrt((j+m)(j-m+1)) |j;m-1>
        for row in 0..d {
            for col in 0..d {
                let m = col as f64 - j;
                let up = if row == col + 1 { ((j - m) * (j + m + 1.0)).sqrt() } else { 0.0 };
                let down = if row + 1 == col { ((j + m) * (j - m + 1.0)).sqrt() } else { 0.0 };
                worst = worst.max((jp[(row, col)] - up).norm()).max((jm[(row, col)] - down).norm());
            }
        }
        worst_ratio = worst_ratio.max(worst / scaled(d));
    }
    Outcome { pass: worst_ratio < 1.0, detail: format!("two_j 0..=40, worst entry/bound={worst_ratio:.3e}") }
}

fn euler() -> Outcome {
    let mut worst_oracle = 0f64;
    let mut worst_cover = 0f64;
    let mut error = None;
    for two_j in 0..=10u32 {
        let angles = su2::sample_angles(10, 0x5eed_0000 + u64::from(two_j));
        match su2::euler_oracle_residual(two_j, &angles) {
            Ok(r) => worst_oracle = worst_oracle.max(r),
            Err(e) => error = Some(e.to_string()),
        }
        let r = su2::x_rotation(two_j, 2.0 * PI);
        let d = r.dim();
        let sign = if two_j % 2 == 0 { 1.0 } else { -1.0 };
        worst_cover = worst_cover.max(r.distance(&(CMatrix::identity(d, d) * Complex64::new(sign, 0.0))));
    }
    Outcome {
        pass: error.is_none() && worst_oracle < 1e-9 && worst_cover < 1e-10,
        detail: format!(
            "10 triples per two_j 0..=10: oracle {worst_oracle:.3e} < 1e-9, double cover {worst_cover:.3e} < 1e-10{}",
            error.map(|e| format!(", {e}")).unwrap_or_default()
        ),
    }
}

fn fourier() -> Outcome {
    let mut worst_ratio = 0f64;
    for two_j in 0..=40 {
        let f = transform::fourier_matrix(two_j);
        let d = f.dim();
        let residual = (f.pow(4).into_matrix() - CMatrix::identity(d, d)).norm();
        worst_ratio = worst_ratio.max(residual / scaled(d));
    }
    Outcome { pass: worst_ratio < 1.0, detail: format!("F^4=I for 0..=40, worst residual/bound={worst_ratio:.3e}") }
}

fn oscillator() -> Outcome {
    let mut eigen_ratio = 0f64;
    let mut form_ratio = 0f64;
    for two_j in 0..=20u32 {
        let osc = build_oscillator(two_j);
        let d = osc.dim();
        let j = two_j as f64 / 2.0;
        for i in 0..d {
            let m = TwiceInt::from_doubled(2 * i as i64 - two_j as i64);
            let (psi, _) = osc.eigenstate(m).expect("label in range");
            let mv = m.doubled() as f64 / 2.0;
            let energy = (j * (j + 1.0) - mv * mv) / 2.0;
            eigen_ratio = eigen_ratio.max(osc.eigen_residual(&psi, energy) / (1e-11 * d as f64));
        }
        form_ratio = form_ratio.max(osc.form_residual() / scaled(d));
    }
    Outcome {
        pass: eigen_ratio < 1.0 && form_ratio < 1.0,
        detail: format!("two_j 0..=20, eigen residual/bound={eigen_ratio:.3e}, forms residual/bound={form_ratio:.3e}"),
    }
}

fn coherent() -> Outcome {
    let mut norm_dev = 0f64;
    let mut orbit_dev = 0f64;
    for two_j in 0..=10u32 {
        let lowest = StateVector::basis(two_j, TwiceInt::from_doubled(-(two_j as i64))).expect("label in range");
        for a in su2::sample_angles(20, 0xc0e_0000 + u64::from(two_j)) {
            let psi = su2::spin_coherent_state(two_j, a.alpha, a.beta);
            norm_dev = norm_dev.max((psi.norm() - 1.0).abs());
            let d = su2::euler_matrix(two_j, EulerAngles::new(a.alpha, a.beta, 0.0));
            let rotated = transform::apply(&d, &lowest, false).expect("dimension matches");
            orbit_dev = orbit_dev.max(psi.distance(&rotated));
        }
    }
    Outcome {
        pass: norm_dev < 1e-12 && orbit_dev < 1e-10,
        detail: format!("20 samples per two_j 0..=10: norm {norm_dev:.3e} < 1e-12, orbit {orbit_dev:.3e} < 1e-10"),
    }
}

fn end_to_end() -> Outcome {
    let started = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_kravchuk"))
        .args(["verify", "--two-j-range", "0..16"])
        .env_remove("KRAVCHUK_TOL")
        .output();
    let (fast, time) = within(started.elapsed(), 60.0);
    match out {
        Ok(out) => {
            let lines = String::from_utf8_lossy(&out.stdout).lines().count();
            let code = out.status.code();
            Outcome {
                pass: code == Some(0) && fast && lines == 17 * 17,
                detail: format!("exit {code:?}, {lines} reports, {time}"),
            }
        }
        Err(e) => Outcome { pass: false, detail: format!("could not run binary: {e}") },
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("exact orthogonality", orthogonality),
        ("phase-sum identity in exact rings", phase_sum),
        ("generating function and hypergeometric oracles", oracles),
        ("K^3 = I, commutation relation, K^2 = K^dagger", cube),
        ("su(2) commutators and Casimir", commutators),
        ("ladder structure", ladder),
        ("Euler matrices and double cover", euler),
        ("finite Fourier F^4 = I", fourier),
        ("finite oscillator", oscillator),
        ("spin coherent states", coherent),
        ("verify --two-j-range 0..16", end_to_end),
    ];
    let mut all = true;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = run();
        all &= outcome.pass;
        println!(
            "{} criterion {:>2} {name}: {} [{:.2}s]",
            if outcome.pass { "PASS" } else { "FAIL" },
            n + 1,
            outcome.detail.trim_end(),
            started.elapsed().as_secs_f64()
        );
    }
    if all {
        println!("acceptance: all 11 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
