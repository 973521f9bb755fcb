use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spinwit::gamma::{build_euclidean_gammas, commuting_sets, verify_clifford};
use spinwit::lp::{feasible_region, region_halfspaces, simplex_min, LpProblem, LpStatus, RegionFamily};
use spinwit::operator::{
    closed_form_spectrum_kind1, closed_form_spectrum_kind2, hermitian_eigenvalues, kron_all,
    partial_transpose_matrix,
};
use spinwit::relativistic::{boost_matrix, boost_state, BoostParams};
use spinwit::states::{
    bsd_from_mixture, random_product_locals, region_classify, wootters_concurrence, BsdState, LabelSet, Region,
};
use spinwit::witness::{classify, Family, WitnessSpec};
use spinwit::{CMatrix, CVector};

fn dense(a0: f64, coeffs: &[f64], blocks: &[CMatrix], m: usize) -> CMatrix {
    let n = blocks[0].nrows().pow(m as u32);
    let mut w = CMatrix::identity(n, n).map(|z| z * a0);
    for (a, b) in coeffs.iter().zip(blocks) {
        w += kron_all(&vec![b.clone(); m]).map(|z| z * *a);
    }
    w
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn density(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

fn shape() -> impl Strategy<Value = (usize, usize)> {
    prop_oneof![Just((2usize, 2usize)), Just((2, 4)), Just((4, 2))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn clifford_relations_hold(d in 2usize..=10) {
        prop_assert!(verify_clifford(&build_euclidean_gammas(d).unwrap()).is_empty());
    }

    #[test]
    fn kind1_closed_form_matches_dense((m, d) in shape(), seed in prop::collection::vec(-3.0f64..3.0, 6)) {
        let a: Vec<f64> = seed.iter().cycle().take(d + 2).copied().collect();
        let g = build_euclidean_gammas(d).unwrap().gammas;
        let numeric = sorted(hermitian_eigenvalues(&dense(a[0], &a[1..], &g, m)).unwrap());
        let closed = sorted(closed_form_spectrum_kind1(&a, m, d).unwrap());
        prop_assert!(close(&numeric, &closed, 1e-10));
    }

    #[test]
    fn kind2_closed_form_matches_dense((m, d) in shape(), seed in prop::collection::vec(-3.0f64..3.0, 7)) {
        let a: Vec<f64> = seed.iter().cycle().take(3 * d / 2 + 1).copied().collect();
        let blocks = commuting_sets(d).unwrap().primed_matrices();
        let numeric = sorted(hermitian_eigenvalues(&dense(a[0], &a[1..], &blocks, m)).unwrap());
        let closed = sorted(closed_form_spectrum_kind2(&a, m, d).unwrap());
        prop_assert!(close(&numeric, &closed, 1e-10));
    }

    #[test]
    fn simplex_agrees_with_vertices(
        family in prop::sample::select(RegionFamily::ALL.to_vec()),
        d in prop::sample::select(vec![2usize, 4]),
        raw in prop::collection::vec(-1.0f64..1.0, 7),
        offset in -1.0f64..1.0,
    ) {
        let region = feasible_region(family, d).unwrap();
        let obj: Vec<f64> = raw.iter().cycle().take(region.dim).copied().collect();
        let sol = simplex_min(&LpProblem::new(obj.clone(), offset, region.halfspaces.clone()).unwrap()).unwrap();
        prop_assert_eq!(sol.status, LpStatus::Optimal);
        let best = region
            .boxed_vertices()
            .unwrap()
            .iter()
            .map(|v| offset + v.iter().zip(&obj).map(|(x, y)| x * y).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        prop_assert!((sol.optimum - best).abs() < 1e-9);
        prop_assert!(region.contains(&sol.argmin));
    }

    #[test]
    fn verdict_is_scale_invariant(raw in prop::collection::vec(-1.0f64..1.0, 5), scale in 0.01f64..100.0) {
        let mut coeffs = vec![1.0];
        coeffs.extend(raw);
        let spec = WitnessSpec::new(Family::Kind1, 2, 4, coeffs).unwrap();
        let a = classify(&spec).unwrap();
        let b = classify(&spec.scaled(scale)).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert!((a.min_eig * scale - b.min_eig).abs() < 1e-8 * scale.max(1.0));
    }

    #[test]
    fn partial_transpose_is_an_involution(
        re in prop::collection::vec(-1.0f64..1.0, 64),
        im in prop::collection::vec(-1.0f64..1.0, 64),
        k in 1usize..=3,
    ) {
        let mat = CMatrix::from_fn(8, 8, |r, c| Complex64::new(re[8 * r + c], im[8 * r + c]));
        let once = partial_transpose_matrix(&mat, 2, 3, k).unwrap();
        let twice = partial_transpose_matrix(&once, 2, 3, k).unwrap();
        prop_assert_eq!(twice, mat.clone());
        prop_assert!((once.trace() - mat.trace()).norm() < 1e-12);
    }

    #[test]
    fn product_states_stay_in_exact_regions(seed in any::<u64>(), d in prop::sample::select(vec![2usize, 4, 6])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (family, region) in [(Family::Kind1, RegionFamily::Kind1), (Family::Kind2, RegionFamily::Kind2)] {
            let spec = WitnessSpec::new(family, 2, d, vec![0.0; family.coeff_len(d)]).unwrap();
            let locals = random_product_locals(&mut rng, 2, spec.local_dim());
            let p: Vec<f64> = spec
                .blocks()
                .unwrap()
                .iter()
                .map(|fs| fs.iter().zip(&locals).fold(Complex64::new(1.0, 0.0), |acc, (f, v)| acc * v.dotc(&(f * v))).re)
                .collect();
            for hs in region_halfspaces(region, d).unwrap() {
                prop_assert!(hs.slack(&p) >= -1e-9);
            }
        }
    }

    #[test]
    fn boosts_keep_products_and_trace(
        seed in any::<u64>(),
        xi in -3.0f64..3.0,
        theta in 0.0f64..std::f64::consts::PI,
        phi in 0.0f64..std::f64::consts::TAU,
    ) {
        let params = BoostParams::new(xi, [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let locals = random_product_locals(&mut rng, 2, 4);
        let (ra, rb) = (density(&locals[0]), density(&locals[1]));
        let boosted = boost_state(&ra.kronecker(&rb), &params).unwrap();
        prop_assert!((boosted.trace().re - 1.0).abs() < 1e-12);
        let d = boost_matrix(&params);
        let local = |r: &CMatrix| {
            let x = &d * r * d.adjoint();
            let t = x.trace();
            x.map(|z| z / t)
        };
        let expected = local(&ra).kronecker(&local(&rb));
        prop_assert!((boosted - expected).norm() < 1e-10);
    }

    #[test]
    fn detection_matches_concurrence(b in prop::collection::vec(-0.25f64..0.25, 3)) {
        let state = BsdState::from_labels(2, 2, LabelSet::Kind1, &b).unwrap();
        let report = region_classify(&state, Family::Kind1).unwrap();
        // stay clear of the boundaries where tolerances decide
        prop_assume!(report.min_eigenvalue.abs() > 1e-6 && report.min_detection.abs() > 1e-6);
        prop_assume!(report.region != Region::Invalid);
        let conc = wootters_concurrence(&state.matrix().unwrap()).unwrap();
        prop_assert_eq!(report.region == Region::DetectedEntangled, conc > 1e-9);
    }

    #[test]
    fn bell_mixtures_are_valid_states(raw in prop::collection::vec(0.0f64..1.0, 16)) {
        let total: f64 = raw.iter().sum();
        prop_assume!(total > 1e-6);
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let state = bsd_from_mixture(&weights).unwrap();
        prop_assert!(state.is_valid().unwrap());
        prop_assert!((state.matrix().unwrap().trace().re - 1.0).abs() < 1e-12);
    }
}
