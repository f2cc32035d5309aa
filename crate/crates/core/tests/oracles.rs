//! Hand-derived reference values checked against the library.

use num_complex::Complex64 as Z;
use phqm::evolution::{
    propagate, spin_flip_closed_form, spin_flip_hamiltonian, FlipConvention, SpinFlipParams,
};
use phqm::linalg::eigenvalues;
use phqm::metric::{metric_from_spectrum, pt_family};
use phqm::qsystem::{measurement_distribution, validate_observable};
use phqm::scalar::c;
use phqm::{Matrix64, Metric64, PhysicalConstants, Ray64, System64};

fn z(re: f64, im: f64) -> Z {
    Z::new(re, im)
}

/// `||eta H - H^H eta||` with plain 2x2 arithmetic.
fn intertwining_residual(eta: [[Z; 2]; 2], h: [[Z; 2]; 2]) -> f64 {
    let mut r = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let mut lhs = z(0.0, 0.0);
            let mut rhs = z(0.0, 0.0);
            for k in 0..2 {
                lhs += eta[i][k] * h[k][j];
                rhs += h[k][i].conj() * eta[k][j];
            }
            r += (lhs - rhs).norm_sqr();
        }
    }
    r.sqrt()
}

#[test]
fn upper_triangular_metric_matches_hand_derivation() {
    // right eigenvectors (1,0), (1,1)/sqrt2; biorthonormal partners (1,-1), (0,sqrt2)
    let h = Matrix64::from_real_rows(&[&[1.0, 1.0], &[0.0, 2.0]]).unwrap();
    let eta = metric_from_spectrum(&h, 1e-10).unwrap();
    let want = [[z(1.0, 0.0), z(-1.0, 0.0)], [z(-1.0, 0.0), z(3.0, 0.0)]];
    for (i, row) in want.iter().enumerate() {
        for (j, w) in row.iter().enumerate() {
            assert!((eta.matrix()[(i, j)] - w).norm() < 1e-12, "({i},{j})");
        }
    }
    let hh = [[z(1.0, 0.0), z(1.0, 0.0)], [z(0.0, 0.0), z(2.0, 0.0)]];
    assert!(intertwining_residual(want, hh) == 0.0);
}

#[test]
fn general_solution_of_intertwining_system() {
    // eta = [[p, q], [q, r]] real symmetric solves eta H = H^T eta for
    // H = [[1,1],[0,2]] iff p = -q; positivity then needs r > p
    let hh = [[z(1.0, 0.0), z(1.0, 0.0)], [z(0.0, 0.0), z(2.0, 0.0)]];
    for (p, r) in [(1.0, 3.0), (2.0, 2.5), (0.5, 10.0)] {
        let eta = [[z(p, 0.0), z(-p, 0.0)], [z(-p, 0.0), z(r, 0.0)]];
        assert!(intertwining_residual(eta, hh) < 1e-15);
        let m = Matrix64::from_fn(2, |i, j| eta[i][j]);
        let h = Matrix64::from_fn(2, |i, j| hh[i][j]);
        let metric = Metric64::new(m, 1e-10).unwrap();
        assert!(phqm::metric::is_quasi_hermitian(&h, &metric, 1e-12).unwrap());
    }
}

#[test]
fn nilpotent_propagation_closed_form() {
    // exp(-i H t) (1,0) = exp(-i E t) (1, -i a t) for H = [[E,0],[a,E]]
    for &(e, a, t) in &[
        (0.0, 1.0, 1.0),
        (0.7, -3.0, 2.5),
        (-2.0, 40.0, 0.3),
        (5.0, 0.0, 1.0),
    ] {
        let h = spin_flip_hamiltonian(e, a, FlipConvention::Lower);
        let sys = System64::euclidean(h, PhysicalConstants::natural(), 1e-10).unwrap();
        let v = propagate(&sys, &[c(1.0, 0.0), c(0.0, 0.0)], t).unwrap();
        let phase = Z::from_polar(1.0, -e * t);
        let want = [phase, phase * z(0.0, -a * t)];
        let scale = 1f64.hypot(a * t);
        for k in 0..2 {
            assert!(
                (v[k] - want[k]).norm() <= 1e-13 * scale,
                "E={e} a={a} t={t}"
            );
        }
    }
}

#[test]
fn nilpotent_oracle_agrees_with_closed_form_ray() {
    let (e, a, t) = (1.3, -7.0, 0.4);
    let oracle = vec![z(1.0, 0.0), z(0.0, -a * t)];
    let p = SpinFlipParams::new(e, a, t, 1.0).unwrap();
    let d = Ray64::new(oracle)
        .unwrap()
        .distance(&spin_flip_closed_form(&p))
        .unwrap();
    assert!(d < 1e-15);
}

#[test]
fn hbar_rescales_time() {
    let p1 = SpinFlipParams::new(0.0, 2.0, 1.5, 1.0).unwrap();
    let p2 = SpinFlipParams::new(0.0, 2.0, 3.0, 2.0).unwrap();
    assert!(
        spin_flip_closed_form(&p1)
            .distance(&spin_flip_closed_form(&p2))
            .unwrap()
            < 1e-15
    );
}

#[test]
fn pt_family_spectrum() {
    for &(r, s, th) in &[(1.0, 1.0, 0.3), (2.0, 3.0, 1.1), (0.5, 2.0, -0.8)] {
        let h = pt_family(r, s, th);
        let mut ev = eigenvalues(&h).unwrap();
        ev.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap());
        let root: f64 = (s * s - (r * f64::sin(th)).powi(2)).sqrt();
        let base = r * f64::cos(th);
        assert!((ev[0] - z(base - root, 0.0)).norm() < 1e-12);
        assert!((ev[1] - z(base + root, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn born_rule_on_pauli_z() {
    let sz = Matrix64::diag_real(&[1.0, -1.0]);
    let sys = System64::euclidean(sz.clone(), PhysicalConstants::natural(), 1e-10).unwrap();
    let o = validate_observable(&sz, &sys, 1e-10).unwrap();
    let d = measurement_distribution(
        &o,
        &sys,
        &Ray64::new(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap(),
    )
    .unwrap();
    assert!((d.outcomes[0].probability - 0.64).abs() < 1e-15);
    assert!((d.outcomes[1].probability - 0.36).abs() < 1e-15);
}

/// Outcome probabilities with the square root kept over the denominator.
fn root_normalized_probabilities(eta: &Metric64, h: &Matrix64, psi: &[Z]) -> Vec<f64> {
    let dec = phqm::linalg::eig(h, 1e-10).unwrap();
    dec.right
        .iter()
        .map(|v| {
            let ov = eta.inner(psi, v).unwrap().norm_sqr();
            ov / (eta.norm_sqr(psi).unwrap() * eta.norm_sqr(v).unwrap()).sqrt()
        })
        .collect()
}

#[test]
fn root_normalization_is_not_a_probability() {
    let h = pt_family(1.0, 1.0, 0.5);
    let eta = metric_from_spectrum(&h, 1e-10).unwrap();
    let psi = vec![z(0.3, 0.4), z(-1.2, 0.1)];
    let scaled: Vec<Z> = psi.iter().map(|x| x * 3.0).collect();

    let root = root_normalized_probabilities(&eta, &h, &psi);
    let root_scaled = root_normalized_probabilities(&eta, &h, &scaled);
    assert!((root[0] - root_scaled[0]).abs() > 0.1);
    assert!((root.iter().sum::<f64>() - 1.0).abs() > 1e-3);

    let sys = System64::closed(h.clone(), eta, PhysicalConstants::natural(), 1e-10).unwrap();
    let o = validate_observable(&h, &sys, 1e-10).unwrap();
    let a = measurement_distribution(&o, &sys, &Ray64::new(psi).unwrap()).unwrap();
    let b = measurement_distribution(&o, &sys, &Ray64::new(scaled).unwrap()).unwrap();
    assert!((a.total_probability() - 1.0).abs() < 1e-14);
    for (x, y) in a.probabilities().iter().zip(b.probabilities()) {
        assert!((x - y).abs() < 1e-14);
    }
}
