use phqm::evolution::{
    fast_flip_residual, fs_angle, propagate, spin_flip_closed_form, SpinFlipParams,
};
use phqm::linalg::{eig, expm};
use phqm::metric::{hermitize, metric_from_spectrum, pt_family};
use phqm::qsystem::{measurement_distribution, validate_observable};
use phqm::random::Sampler;
use phqm::scalar::{c, Real};
use phqm::{Matrix32, Metric32, PhysicalConstants, Ray32, System32};

#[test]
fn default_tolerance() {
    assert_eq!(f32::default_tol(), 1e-4);
    assert_eq!(f64::default_tol(), 1e-10);
}

#[test]
fn pt_pipeline_in_f32() {
    let tol = f32::default_tol();
    let h: Matrix32 = pt_family(1.0, 1.0, 0.5);
    let eta = metric_from_spectrum(&h, tol).unwrap();
    let (map, herm) = hermitize(&h, &eta, tol).unwrap();
    assert!(herm.hermiticity_defect() < 1e-5);

    let sys = System32::closed(h.clone(), eta.clone(), PhysicalConstants::natural(), tol).unwrap();
    let o = validate_observable(&h, &sys, tol).unwrap();
    let psi = vec![c(0.3, 0.1), c(-0.8, 0.4)];
    let d = measurement_distribution(&o, &sys, &Ray32::new(psi.clone()).unwrap()).unwrap();
    assert!((d.total_probability() - 1.0).abs() < 1e-5);

    let phi = propagate(&sys, &psi, 0.7).unwrap();
    let a = fs_angle(&eta, &psi, &phi).unwrap();
    let b = fs_angle(
        &Metric32::identity(2),
        &map.map_vector(&psi).unwrap(),
        &map.map_vector(&phi).unwrap(),
    )
    .unwrap();
    assert!((a - b).abs() < 1e-5);
}

#[test]
fn spin_flip_in_f32() {
    let p = SpinFlipParams::<f32>::new(0.0, 100.0, 1.0, 1.0).unwrap();
    let (eps, res) = fast_flip_residual(&p).unwrap();
    assert!((eps - 0.01).abs() < 1e-8);
    assert!(res <= 2.0 * eps);
    let ray = spin_flip_closed_form(&SpinFlipParams::<f32>::new(0.0, 1.0, 1.0, 1.0).unwrap());
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!(
        ray.distance(&Ray32::new(vec![c(0.0, h), c(h, 0.0)]).unwrap())
            .unwrap()
            < 1e-6
    );
}

#[test]
fn random_instances_in_f32() {
    let mut s = Sampler::<f32>::new(3);
    let g = s.ginibre(4);
    let p = &expm(&g).unwrap() * &expm(&-&g).unwrap();
    assert!(p.distance(&Matrix32::identity(4)) < 1e-4);
    let inst = s.quasi_hermitian(3);
    let dec = eig(&inst.hamiltonian, 1e-4).unwrap();
    assert!(dec.max_residual(&inst.hamiltonian) < 1e-4);
}
