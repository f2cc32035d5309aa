//! End-to-end acceptance run: one line per criterion, nonzero exit on any
//! failure.

use std::f64::consts::FRAC_1_SQRT_2;
use std::process::Command;

use phqm::composite::{energy_conservation_audit, repeated_measurement_experiment, Dynamics};
use phqm::evolution::{
    fast_flip_residual, pt_anisotropy_sweep, ray_distance, spin_flip_closed_form,
    spin_flip_hamiltonian, FlipConvention, SpinFlipParams, Trajectory,
};
use phqm::linalg::vector;
use phqm::metric::{hermitize, metric_from_spectrum, pt_family};
use phqm::random::{derive_seed, Sampler};
use phqm::scalar::c;
use phqm::verify::{
    closed_form_case, eta_unitarity_case, hermitization_case, isometry_case, measurement_case,
    speed_case, Check,
};
use phqm::{Matrix64, Metric64, PhysicalConstants, Ray64, System64};

const TOL: f64 = 1e-10;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn checks_outcome(checks: &[Check]) -> Outcome {
    Outcome {
        pass: checks.iter().all(Check::passed),
        detail: checks
            .iter()
            .map(|c| {
                format!(
                    "{} worst {:.2e} (<= {:.0e}, n={})",
                    c.name, c.worst, c.threshold, c.cases
                )
            })
            .collect::<Vec<_>>()
            .join("; "),
    }
}

fn spin_flip_closed_form_grid() -> Outcome {
    let mut s = Sampler::<f64>::new(derive_seed(2024, 1));
    let mut grid = Check::new("grid", 1e-10);
    for _ in 0..100 {
        let p = SpinFlipParams::new(
            s.uniform(-5.0, 5.0),
            s.uniform(-50.0, 50.0),
            s.uniform(0.0, 2.0),
            1.0,
        )
        .unwrap();
        grid.record_result(closed_form_case(&p, TOL));
    }
    let unit = SpinFlipParams::new(0.0, 1.0, 1.0, 1.0).unwrap();
    let want = Ray64::new(vec![c(0.0, FRAC_1_SQRT_2), c(FRAC_1_SQRT_2, 0.0)]).unwrap();
    let mut at_unit = Check::new("unit_drive", 1e-12);
    at_unit.record_result(spin_flip_closed_form(&unit).distance(&want));
    at_unit.record_result(closed_form_case(&unit, TOL));
    checks_outcome(&[grid, at_unit])
}

fn fast_flip_limit() -> Outcome {
    let p = SpinFlipParams::new(0.0, 100.0, 1.0, 1.0).unwrap();
    let (eps, residual) = fast_flip_residual(&p).unwrap();
    let exact = 1.0 / 1f64.hypot(100.0);
    let h = spin_flip_hamiltonian(0.0, 100.0, FlipConvention::Lower);
    let sys = System64::euclidean(h, PhysicalConstants::natural(), TOL).unwrap();
    let v = phqm::evolution::propagate(&sys, &[c(1.0, 0.0), c(0.0, 0.0)], 1.0).unwrap();
    let propagated = ray_distance(&Metric64::identity(2), &v, &[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    Outcome {
        pass: eps == 0.01 && residual <= 2.0 * eps && propagated <= 2.0 * eps && (residual - exact).abs() <= 1e-12,
        detail: format!(
            "epsilon {eps}, residual {residual:.6e} (propagated {propagated:.6e}), |residual - exact| {:.1e}",
            (residual - exact).abs()
        ),
    }
}

fn instances(
    n: usize,
    seed: u64,
) -> Vec<(
    phqm::random::QuasiHermitianInstance<f64>,
    Vec<phqm::Complex64>,
)> {
    let mut s = Sampler::<f64>::new(seed);
    (0..n)
        .map(|k| {
            let dim = 2 + k % 7;
            let inst = s.quasi_hermitian(dim);
            let psi = s.vector(dim);
            (inst, psi)
        })
        .collect()
}

fn hermitization() -> Outcome {
    let mut defect = Check::new("hermiticity_defect", 1e-10);
    let mut spectrum = Check::new("spectrum", 1e-8);
    for (inst, _) in instances(200, derive_seed(2024, 3)) {
        match hermitization_case(&inst, TOL) {
            Ok((d, g)) => {
                defect.record(d);
                spectrum.record(g);
            }
            Err(_) => {
                defect.record(f64::NAN);
                spectrum.record(f64::NAN);
            }
        }
    }
    checks_outcome(&[defect, spectrum])
}

fn measurement_equivalence() -> Outcome {
    let mut s = Sampler::<f64>::new(derive_seed(2024, 4));
    let mut gap = Check::new("per_outcome", 1e-10);
    let mut sum = Check::new("sum", 1e-12);
    let mut scale = Check::new("scale", 1e-12);
    for (inst, psi) in instances(200, derive_seed(2024, 3)) {
        match measurement_case(&inst, &psi, s.nonzero_scale(), TOL) {
            Ok((g, t, sc)) => {
                gap.record(g);
                sum.record(t);
                scale.record(sc);
            }
            Err(_) => [&mut gap, &mut sum, &mut scale]
                .into_iter()
                .for_each(|c| c.record(f64::NAN)),
        }
    }
    checks_outcome(&[gap, sum, scale])
}

fn eta_unitarity() -> Outcome {
    let mut closed = Check::new("closed_eta_drift", 1e-8);
    for (inst, psi) in instances(200, derive_seed(2024, 5)) {
        closed.record_result(eta_unitarity_case(&inst, &psi, 20.0, 10, TOL));
    }
    let mut growth = Check::new("jordan_norm_growth", 1e-8);
    for &(a, t_final) in &[(10.0, 1.0), (100.0, 0.1), (-3.0, 2.0), (0.5, 7.0)] {
        let h = spin_flip_hamiltonian(0.3, a, FlipConvention::Lower);
        let sys = System64::euclidean(h, PhysicalConstants::natural(), TOL).unwrap();
        let traj = Trajectory::sample(&sys, &[c(1.0, 0.0), c(0.0, 0.0)], t_final, 20).unwrap();
        for (t, n) in traj.times.iter().zip(&traj.euclid_norms) {
            growth.record((n - 1f64.hypot(a * t)).abs() / 1f64.hypot(a * t));
        }
    }
    checks_outcome(&[closed, growth])
}

fn travel_time_universality() -> Outcome {
    let mut s = Sampler::<f64>::new(derive_seed(2024, 6));
    let mut iso = Check::new("isometry", 1e-12);
    for k in 0..1000 {
        let n = 2 + k % 7;
        let inst = s.quasi_hermitian(n);
        let psi = s.vector(n);
        let phi = s.vector(n);
        iso.record_result(isometry_case(&inst, &psi, &phi, TOL));
    }
    let thetas: Vec<f64> = (0..24).map(|k| 1.56 * k as f64 / 23.0).collect();
    let sweep = pt_anisotropy_sweep(1.0, 1.0, &thetas, TOL).unwrap();
    let decreasing = sweep
        .windows(2)
        .all(|w| w[1].mapped_angle < w[0].mapped_angle);
    let first = sweep[0].mapped_angle;
    let last = sweep[sweep.len() - 1].mapped_angle;
    let mut out = checks_outcome(&[iso]);
    out.pass &= decreasing && last < 0.02 * first;
    out.detail += &format!(
        "; mapped angle {first:.4} -> {last:.4} over {} members, monotone {decreasing}, final metric condition {:.1e}",
        sweep.len(),
        sweep[sweep.len() - 1].metric_condition
    );
    out
}

fn speed_identity() -> Outcome {
    let mut speed = Check::new("speed", 1e-6);
    for (inst, psi) in instances(100, derive_seed(2024, 7)) {
        speed.record_result(speed_case(&inst, &psi, 1e-5, TOL));
    }
    checks_outcome(&[speed])
}

fn composite_inconsistency() -> Outcome {
    let big_h = pt_family(1.0, 1.0, 0.6);
    let eta = metric_from_spectrum(&big_h, TOL).unwrap();
    let (_, h) = hermitize(&big_h, &eta, TOL).unwrap();
    let h = Matrix64::from_fn(2, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
    let psi = Sampler::<f64>::new(derive_seed(2024, 8)).vector(2);
    let audit = energy_conservation_audit(&big_h, &h, &eta, &psi, 10.0, 200, 1.0, TOL).unwrap();
    let eta_drift = audit.get_real("eta_energy_drift").unwrap();
    let euclid_drift = audit.get_real("euclidean_energy_drift").unwrap();
    let audit_ok = eta_drift <= 1e-8 && euclid_drift >= 1e-3;

    let sz = Matrix64::diag_real(&[1.0, -1.0]);
    let e1 = [c(1.0, 0.0), c(0.0, 0.0)];
    let scaled = Dynamics::ScaledFlip {
        energy: 0.0,
        c: 10.0,
        convention: FlipConvention::Lower,
    };
    let target: f64 = 1.0 / 101.0;
    let mut flat = true;
    let mut observed = Vec::new();
    for k in 0..=4 {
        let dt = 1e-2 * 10f64.powi(-k);
        let r = repeated_measurement_experiment(
            &scaled,
            &sz,
            &e1,
            dt,
            10_000,
            derive_seed(2024, 10 + k as u64),
            1.0,
            TOL,
        )
        .unwrap();
        let sigma = (target * (1.0 - target) / 1e4).sqrt();
        flat &= (r.repeat_probability - target).abs() <= 3.0 * sigma;
        observed.push(format!("{:.4}", r.repeat_probability));
    }
    let mut psi0 = Sampler::<f64>::new(derive_seed(2024, 9)).vector(2);
    psi0 = vector::normalized(&psi0).unwrap();
    let baseline = repeated_measurement_experiment(
        &Dynamics::Fixed(sz.clone()),
        &sz,
        &psi0,
        0.37,
        10_000,
        99,
        1.0,
        TOL,
    )
    .unwrap();
    Outcome {
        pass: audit_ok && flat && baseline.repeat_probability == 1.0,
        detail: format!(
            "eta drift {eta_drift:.1e}, euclidean drift {euclid_drift:.3e}; repeat over dt 1e-2..1e-6: [{}] vs {target:.4}; baseline {}",
            observed.join(", "),
            baseline.repeat_probability
        ),
    }
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 6] = [
        &["spinflip", "--a", "100", "--t", "1"],
        &["equivalence", "--dim", "6", "--cases", "20", "--seed", "3"],
        &["brachistochrone", "--points", "4"],
        &[
            "brachistochrone",
            "--sweep",
            "anisotropy",
            "--format",
            "csv",
        ],
        &[
            "composite",
            "--mode",
            "scaled",
            "--c",
            "10",
            "--trials",
            "10000",
            "--seed",
            "1",
        ],
        &["verify", "--dim", "6", "--cases", "200", "--seed", "7"],
    ];
    let mut failed = Vec::new();
    for args in runs {
        let go = || {
            Command::new(env!("CARGO_BIN_EXE_phqm"))
                .args(args)
                .output()
                .unwrap()
        };
        let (a, b) = (go(), go());
        if a.stdout != b.stdout
            || a.status.code() != Some(0)
            || b.status.code() != Some(0)
            || a.stdout.is_empty()
        {
            failed.push(args[0]);
        }
    }
    Outcome {
        pass: failed.is_empty(),
        detail: if failed.is_empty() {
            format!(
                "{} commands byte-identical across reruns, exit 0",
                runs.len()
            )
        } else {
            format!("differing or failing: {}", failed.join(", "))
        },
    }
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("spin-flip closed form", spin_flip_closed_form_grid),
        ("fast-flip limit", fast_flip_limit),
        ("hermitization", hermitization),
        ("measurement equivalence", measurement_equivalence),
        ("eta-unitarity", eta_unitarity),
        ("travel-time universality", travel_time_universality),
        ("speed identity", speed_identity),
        ("composite inconsistency", composite_inconsistency),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let out = f();
        if !out.pass {
            failures += 1;
        }
        println!(
            "criterion {} [{}] {}: {}",
            k + 1,
            if out.pass { "PASS" } else { "FAIL" },
            name,
            out.detail
        );
    }
    println!(
        "acceptance: {}/{} criteria pass",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
