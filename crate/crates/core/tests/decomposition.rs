mod common;

use common::*;
use fmd_core::epcheck::{Classification, PROBE_TOL};
use fmd_core::fmd::{filter_side_split, residue_side_split};
use fmd_core::signal::{is_orthogonal, normalized_inner, DEFAULT_ORTHO_TOL};
use fmd_core::*;

fn all_filters(shape: Shape, stages: usize) -> Vec<FilterSpec> {
    vec![
        FilterSpec::default_gaussian(shape, stages),
        FilterSpec::default_ideal(stages),
        FilterSpec::IdealLowpass {
            cutoffs: (1..=stages).map(|i| 0.4 * i as f64 / stages as f64).collect(),
        },
        FilterSpec::default_moving_average(stages),
    ]
}

#[test]
fn reconstruction_on_1d_and_2d() {
    let inputs = [random_1d(1024, 1), random_image(64, 64, 2)];
    for x in &inputs {
        for spec in all_filters(x.shape(), 4) {
            for alg in Algorithm::ALL {
                let res = decompose(x, &spec, alg).unwrap();
                let err = reconstruction_error(x, &res.components);
                assert!(err <= 1e-9, "{:?} {} {err:e}", alg, spec.kind_name());
            }
        }
    }
}

#[test]
fn linoep_outputs_telescope_and_preserve_energy() {
    let inputs = [random_1d(1024, 3), random_image(64, 64, 4)];
    for x in &inputs {
        for spec in all_filters(x.shape(), 5) {
            for alg in [Algorithm::LinoepResidueSide, Algorithm::LinoepFilterSide] {
                let res = decompose(x, &spec, alg).unwrap();
                let comps = &res.components;
                for i in 0..comps.len() - 1 {
                    let tail = Signal::sum_all(&comps[i + 1..]).unwrap();
                    assert!(is_orthogonal(&comps[i], &tail, DEFAULT_ORTHO_TOL).unwrap());
                }
                assert!(res.ledger.pee_percent.abs() <= 1e-10, "{}", res.ledger.pee_percent);
                let verdict = verify_sequence(comps, DEFAULT_ORTHO_TOL).unwrap();
                assert!(verdict.is_energy_preserving);
                assert!(verdict.energy_identity_gap <= 1e-9);
            }
        }
    }
}

#[test]
fn gaussian_components_are_not_pairwise_orthogonal() {
    let x = random_1d(512, 5);
    let spec = FilterSpec::default_gaussian(x.shape(), 5);
    for alg in Algorithm::ALL {
        let res = decompose(&x, &spec, alg).unwrap();
        let n = res.components.len() - 1;
        let mut witness = false;
        for i in 0..n {
            for l in i + 1..n {
                if normalized_inner(&res.components[i], &res.components[l]).unwrap() > DEFAULT_ORTHO_TOL {
                    witness = true;
                }
            }
        }
        assert!(witness, "{alg:?}");
    }
    let plain = decompose_plain(&x, &spec).unwrap();
    assert!(!verify_sequence(&plain.components, DEFAULT_ORTHO_TOL).unwrap().is_energy_preserving);
    assert!(plain.ledger.pee_percent > 0.0);
}

#[test]
fn nested_ideal_cutoffs_give_orthogonal_components() {
    let n = 256;
    let x = Signal::real_1d(&sum_vecs(&[
        tone(n, 3.0, 1.0),
        tone(n, 17.0, 0.7),
        tone(n, 40.0, 1.3),
        tone(n, 77.0, 0.4),
        tone(n, 110.0, 2.0),
    ]))
    .unwrap();
    let spec = FilterSpec::IdealLowpass { cutoffs: vec![0.04, 0.1, 0.2, 0.35] };
    let res = decompose_plain(&x, &spec).unwrap();
    let verdict = verify_sequence(&res.components, DEFAULT_ORTHO_TOL).unwrap();
    assert_eq!(verdict.classification, Classification::Orthogonal);
    assert!(res.ledger.pee_percent.abs() <= 1e-9);
}

#[test]
fn two_tone_split_by_ideal_filter() {
    let n = 64;
    let low = tone(n, 3.0, 1.0);
    let high = tone(n, 20.0, 1.0);
    let x = Signal::real_1d(&sum_vecs(&[low.clone(), high.clone()])).unwrap();
    let spec = FilterSpec::IdealLowpass { cutoffs: vec![10.0 / 64.0] };
    let res = decompose_plain(&x, &spec).unwrap();
    assert_eq!(res.components.len(), 2);
    assert!(max_abs_diff(&res.components[0], &Signal::real_1d(&low).unwrap()) < 1e-10);
    assert!(max_abs_diff(&res.components[1], &Signal::real_1d(&high).unwrap()) < 1e-10);
    assert!(res.ledger.pee_percent.abs() <= 1e-9);

    // Filter output and residue are orthogonal, so both LINOEP variants reduce to the plain one.
    for alg in [Algorithm::LinoepResidueSide, Algorithm::LinoepFilterSide] {
        let other = decompose(&x, &spec, alg).unwrap();
        assert!(other.alphas[0].abs() < 1e-12);
        for (a, b) in other.components.iter().zip(&res.components) {
            assert!(max_abs_diff(a, b) < 1e-10);
        }
    }
}

#[test]
fn single_stage_hand_examples() {
    let y = Signal::real_1d(&[2.0, 0.0]).unwrap();
    let r = Signal::real_1d(&[1.0, 1.0]).unwrap();
    let s = residue_side_split(&y, &r).unwrap();
    assert_eq!(s.alpha, 1.0);
    assert_eq!(s.component.real_parts(), vec![1.0, -1.0]);
    assert_eq!(s.carry.real_parts(), vec![2.0, 2.0]);
    assert_eq!(inner_product(&s.component, &s.carry).unwrap().norm(), 0.0);
    assert_eq!(energy(&s.component) + energy(&s.carry), 10.0);

    let y = Signal::real_1d(&[1.0, 1.0]).unwrap();
    let r = Signal::real_1d(&[2.0, 0.0]).unwrap();
    let s = filter_side_split(&y, &r).unwrap();
    assert_eq!(s.alpha, 1.0);
    assert_eq!(s.component.real_parts(), vec![2.0, 2.0]);
    assert_eq!(s.carry.real_parts(), vec![1.0, -1.0]);
    assert_eq!(energy(&s.component) + energy(&s.carry), 10.0);
}

#[test]
fn plain_decomposition_is_linear() {
    let x1 = random_1d(256, 10);
    let x2 = random_1d(256, 11);
    let (a, b) = (1.7, -0.6);
    let mix = x1.scale(a).unwrap().add(&x2.scale(b).unwrap()).unwrap();
    for spec in all_filters(x1.shape(), 3) {
        let d = decompose_plain(&mix, &spec).unwrap().components;
        let d1 = decompose_plain(&x1, &spec).unwrap().components;
        let d2 = decompose_plain(&x2, &spec).unwrap().components;
        for ((m, p), q) in d.iter().zip(&d1).zip(&d2) {
            let expect = p.scale(a).unwrap().add(&q.scale(b).unwrap()).unwrap();
            assert!(norm(&m.sub(&expect).unwrap()) <= 1e-9 * norm(&mix));
        }
    }
}

#[test]
fn gram_schmidt_on_plain_components() {
    let x = random_1d(512, 12);
    let spec = FilterSpec::default_gaussian(x.shape(), 4);
    let comps = decompose_plain(&x, &spec).unwrap().components;
    let ortho = gram_schmidt(&comps).unwrap();
    assert_eq!(
        verify_sequence(&ortho, DEFAULT_ORTHO_TOL).unwrap().classification,
        Classification::Orthogonal
    );
    // Least-squares projection of x onto the orthogonal basis.
    let mut proj = Signal::zeros(x.shape()).unwrap();
    for u in &ortho {
        let coef = inner_product(&x, u).unwrap().re / energy(u);
        proj = proj.add(&u.scale(coef).unwrap()).unwrap();
    }
    let total = Signal::sum_all(&comps).unwrap();
    assert!(norm(&proj.sub(&total).unwrap()) <= 1e-9 * norm(&total));
}

#[test]
fn linoep_sets_classify_as_linoep() {
    let x = random_1d(256, 13);
    let spec = FilterSpec::default_gaussian(x.shape(), 3);
    let res = decompose_linoep_residue_side(&x, &spec).unwrap();
    let v = verify_sequence(&res.components, DEFAULT_ORTHO_TOL).unwrap();
    assert_eq!(v.classification, Classification::Linoep);
}

#[test]
fn gram_matrix_is_complete() {
    let x = random_1d(128, 14);
    let res = decompose_linoep_filter_side(&x, &FilterSpec::default_gaussian(x.shape(), 3)).unwrap();
    assert_eq!(res.gram.len(), 4);
    assert!(res.gram.iter().all(|row| row.len() == 4));
    for (i, row) in res.gram.iter().enumerate() {
        assert!((row[i].re - res.ledger.component_energies[i]).abs() <= 1e-12 * row[i].re.max(1.0));
    }
}

mod probes {
    use super::*;
    use fmd_core::epcheck::ProbeProperty;

    fn two_tone() -> (Signal, Signal) {
        // sin(2 pi 5 t) and sin(2 pi 50 t) sampled at N = 1024 on [0, 1)
        (
            Signal::real_1d(&tone(1024, 5.0, 1.0)).unwrap(),
            Signal::real_1d(&tone(1024, 50.0, 1.0)).unwrap(),
        )
    }

    fn gaussian(n: usize) -> FilterSpec {
        FilterSpec::default_gaussian(Shape::D1(n), 6)
    }

    #[test]
    fn plain_gaussian_is_additive() {
        let (x1, x2) = two_tone();
        let sys = fmd_system(gaussian(1024), Algorithm::Plain);
        let r = probe_additivity("alg1", &sys, &x1, &x2, PROBE_TOL).unwrap();
        assert!(r.passed, "{}", r.max_violation);
        assert_eq!(r.property, ProbeProperty::Additivity);
    }

    #[test]
    fn linoep_is_not_additive() {
        let (x1, x2) = two_tone();
        // Reference values from evaluating both sides directly.
        for (alg, floor) in [
            (Algorithm::LinoepResidueSide, 0.5),
            (Algorithm::LinoepFilterSide, 0.02),
        ] {
            let sys = fmd_system(gaussian(1024), alg);
            let r = probe_additivity(alg.name(), &sys, &x1, &x2, PROBE_TOL).unwrap();
            assert!(!r.passed);
            assert!(r.max_violation > floor, "{alg:?}: {}", r.max_violation);

            // independent evaluation of the two sides
            let joint = decompose(&x1.add(&x2).unwrap(), &gaussian(1024), alg).unwrap().components;
            let a = decompose(&x1, &gaussian(1024), alg).unwrap().components;
            let b = decompose(&x2, &gaussian(1024), alg).unwrap().components;
            let worst = joint
                .iter()
                .zip(a.iter().zip(&b))
                .map(|(j, (p, q))| norm(&j.sub(&p.add(q).unwrap()).unwrap()))
                .fold(0.0, f64::max)
                / norm(&x1.add(&x2).unwrap());
            assert!((worst - r.max_violation).abs() <= 1e-12);
        }
    }

    #[test]
    fn zero_partner_is_trivially_additive() {
        let x1 = random_1d(64, 20);
        let zero = Signal::zeros(x1.shape()).unwrap();
        for alg in Algorithm::ALL {
            let sys = fmd_system(gaussian(64), alg);
            let r = probe_additivity("sys", &sys, &x1, &zero, PROBE_TOL).unwrap();
            assert!(r.max_violation <= 1e-9, "{alg:?}");
        }
    }

    #[test]
    fn homogeneity() {
        let x = random_1d(256, 21);
        for alg in Algorithm::ALL {
            let sys = fmd_system(gaussian(256), alg);
            let one = probe_homogeneity("s", &sys, &x, 1.0, PROBE_TOL).unwrap();
            assert_eq!(one.max_violation, 0.0);
            let two = probe_homogeneity("s", &sys, &x, 2.0, PROBE_TOL).unwrap();
            assert!(two.passed && two.max_violation <= 1e-9);
            let odd = probe_homogeneity("s", &sys, &x, -0.37, PROBE_TOL).unwrap();
            assert!(odd.passed, "{alg:?} {}", odd.max_violation);
            let zero = probe_homogeneity("s", &sys, &x, 0.0, PROBE_TOL).unwrap();
            assert!(zero.max_violation <= 1e-12);
        }
    }

    #[test]
    fn circular_shift_invariance() {
        let x = random_1d(300, 22);
        for spec in all_filters(x.shape(), 3) {
            for alg in Algorithm::ALL {
                let sys = fmd_system(spec.clone(), alg);
                for tau in [0, 300] {
                    let r = probe_time_invariance("s", &sys, &x, tau, PROBE_TOL).unwrap();
                    assert_eq!(r.max_violation, 0.0);
                }
                let r = probe_time_invariance("s", &sys, &x, 17, PROBE_TOL).unwrap();
                assert!(r.passed, "{alg:?} {} {}", spec.kind_name(), r.max_violation);
            }
        }
    }

    #[test]
    fn shift_probe_needs_1d() {
        let img = random_image(4, 4, 23);
        let sys = fmd_system(FilterSpec::default_gaussian(img.shape(), 1), Algorithm::Plain);
        assert!(probe_time_invariance("s", &sys, &img, 1, PROBE_TOL).is_err());
    }
}
