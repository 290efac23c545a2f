use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use proptest::prelude::*;

use cvnet::exec::Execution;
use cvnet::gaussian::{
    coherent_fidelity, measure_homodyne, Forced, GaussianState, Quadrature, SqueezeAxis,
    SymplecticMap,
};
use cvnet::heisenberg::{fidelity_from_forms, nsplitter_forms, teleported_output_forms};
use cvnet::network::{
    build_ghz_state, distill_pair, duan_value, nsplitter_map, NetworkConfig, Scenario,
};
use cvnet::teleport::formulas::{all_equal_fidelity, one_squeezed_fidelity};
use cvnet::teleport::{
    closed_form_fidelity, run_protocol, threshold_scan, GainSchedule, ScanGrid, TeleportForms,
};

fn axis() -> impl Strategy<Value = SqueezeAxis> {
    prop_oneof![Just(SqueezeAxis::Position), Just(SqueezeAxis::Momentum)]
}

fn scenario() -> impl Strategy<Value = Scenario> {
    prop_oneof![Just(Scenario::AllEqual), Just(Scenario::OneSqueezed)]
}

/// Squeezed vacua scrambled by beamsplitters and displaced.
fn random_pure_state() -> impl Strategy<Value = GaussianState> {
    (2usize..=5)
        .prop_flat_map(|n| {
            (
                prop::collection::vec((0.0f64..2.0, axis()), n),
                prop::collection::vec((0..n, 0..n, -3.2f64..3.2), 0..8),
                prop::collection::vec(-2.0f64..2.0, 2 * n),
            )
        })
        .prop_map(|(sq, bs, shift)| {
            let n = sq.len();
            let mut s = GaussianState::vacuum(n).unwrap();
            for (m, (r, ax)) in sq.into_iter().enumerate() {
                s = s.squeeze(m, r, ax).unwrap();
            }
            for (i, j, theta) in bs.into_iter().filter(|(i, j, _)| i != j) {
                s = s.beamsplitter(i, j, theta).unwrap();
            }
            for m in 0..n {
                s = s.displace(m, shift[2 * m], shift[2 * m + 1]).unwrap();
            }
            s
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn library_maps_are_symplectic(
        n in 2usize..=6,
        theta in -3.2f64..3.2,
        r in 0.0f64..3.0,
        ax in axis(),
        gain in -2.0f64..2.0,
    ) {
        let maps = [
            SymplecticMap::beamsplitter(n, 0, n - 1, theta).unwrap(),
            SymplecticMap::squeezer(n, n / 2, r, ax).unwrap(),
            SymplecticMap::feed_forward(n, 0, 1, Quadrature::P, gain).unwrap(),
            SymplecticMap::feed_forward(n, 1, 0, Quadrature::X, gain).unwrap(),
            nsplitter_map(n).unwrap(),
        ];
        for map in &maps {
            prop_assert!(map.symplectic_error() < 1e-10);
        }
        prop_assert!(maps[4].orthogonality_error() < 1e-12);
    }

    #[test]
    fn unitary_steps_preserve_purity(state in random_pure_state(), theta in -3.2f64..3.2, r in 0.0f64..1.5) {
        prop_assert!((state.purity_determinant() - 1.0).abs() < 1e-10 * state.cov().amax().powi(4).max(1.0));
        let next = state.beamsplitter(0, 1, theta).unwrap().squeeze(1, r, SqueezeAxis::Momentum).unwrap();
        let scale = next.cov().amax().powi(2 * next.n_modes() as i32).max(1.0);
        prop_assert!((next.purity_determinant() - state.purity_determinant()).abs() < 1e-10 * scale);
    }

    #[test]
    fn homodyne_conditioning(state in random_pure_state(), a in -3.0f64..3.0, b in -3.0f64..3.0, q in any::<bool>()) {
        let quadrature = if q { Quadrature::X } else { Quadrature::P };
        let ha = measure_homodyne(&state, 0, quadrature, &mut Forced::new([a])).unwrap();
        let hb = measure_homodyne(&state, 0, quadrature, &mut Forced::new([b])).unwrap();
        prop_assert_eq!(ha.conditional.cov(), hb.conditional.cov());
        let scale = ha.conditional.cov().amax().powi(2 * ha.conditional.n_modes() as i32).max(1.0);
        prop_assert!((ha.conditional.purity_determinant() - 1.0).abs() < 1e-8 * scale);
        prop_assert!(ha.conditional.check_physical().is_ok());
    }

    #[test]
    fn balanced_beamsplitter_twice_restores_covariance(state in random_pure_state()) {
        let back = state.beamsplitter(0, 1, FRAC_PI_4).unwrap().beamsplitter(0, 1, FRAC_PI_4).unwrap();
        prop_assert!((back.cov() - state.cov()).amax() < 1e-12 * state.cov().amax().max(1.0));
    }

    #[test]
    fn coherent_fidelity_bounds(state in random_pure_state(), x in -3.0f64..3.0, p in -3.0f64..3.0) {
        let single = state.reduce(&[0]).unwrap();
        let f = coherent_fidelity(&single, x, p).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));
        let coherent = GaussianState::coherent(x, p).unwrap();
        prop_assert!((coherent_fidelity(&coherent, x, p).unwrap() - 1.0).abs() < 1e-15);
        prop_assert!(coherent_fidelity(&coherent, x + 0.1, p).unwrap() < 1.0);
    }

    #[test]
    fn beamsplitter_forms_conserve_squared_coefficients(axes in prop::collection::vec(prop::option::of(axis()), 2..=8)) {
        let forms = nsplitter_forms(&axes).unwrap();
        let mut totals: BTreeMap<_, f64> = BTreeMap::new();
        for form in &forms {
            for (key, coeff) in form.terms() {
                *totals.entry((key.source, key.quadrature)).or_default() += coeff.to_f64().powi(2);
            }
        }
        prop_assert_eq!(totals.len(), 2 * axes.len());
        for total in totals.values() {
            prop_assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unit_gain_fidelity_ignores_input(
        n in 2usize..=7,
        r in 0.0f64..3.0,
        gn in -0.5f64..1.5,
        x in -5.0f64..5.0,
        p in -5.0f64..5.0,
    ) {
        let config = NetworkConfig::all_equal(n, r).unwrap();
        let (xt, pt) = teleported_output_forms(&config.axes(), 0, 1, 1.0, &vec![gn; n - 2]).unwrap();
        let at_origin = fidelity_from_forms(&xt, &pt, 0.0, 0.0, config.r_values()).unwrap();
        let shifted = fidelity_from_forms(&xt, &pt, x, p, config.r_values()).unwrap();
        prop_assert_eq!(at_origin, shifted);
    }

    #[test]
    fn pipelines_agree(
        n in 2usize..=8,
        r in 0.0f64..3.0,
        scenario in scenario(),
        optimal in any::<bool>(),
        gn in -0.5f64..1.5,
        pair in (0usize..8, 0usize..8),
        alpha in (-2.0f64..2.0, -2.0f64..2.0),
    ) {
        let (k, l) = (pair.0 % n, pair.1 % n);
        prop_assume!(k != l);
        let config = NetworkConfig::with_scenario(scenario, n, r).unwrap();
        let gains = if optimal {
            GainSchedule::optimal(&config).unwrap()
        } else {
            GainSchedule::new(0.9, gn)
        };
        let shot = run_protocol(&config, k, l, alpha, &gains, &mut Forced::new(vec![0.2; n + 1])).unwrap();
        let closed = closed_form_fidelity(&config, k, l, &gains, alpha).unwrap();
        prop_assert!((shot.fidelity - closed).abs() < 1e-10, "{} vs {}", shot.fidelity, closed);
        prop_assert!((0.0..=1.0).contains(&shot.fidelity));
    }

    #[test]
    fn all_equal_bounds(n in 2usize..=29, r in 0.0f64..8.0) {
        let f = all_equal_fidelity(n, r).unwrap();
        prop_assert!((0.5 - 1e-15..=1.0).contains(&f), "N={n} r={r}: {f}");
    }

    #[test]
    fn one_squeezed_bounds_and_monotonicity(n in 2usize..=200, r1 in 0.0f64..10.0, dr in 0.001f64..1.0) {
        let f = one_squeezed_fidelity(n, r1).unwrap();
        prop_assert!(f <= FRAC_1_SQRT_2);
        prop_assert!(one_squeezed_fidelity(n, r1 + dr).unwrap() > f);
        if r1 > 0.0 {
            prop_assert!(one_squeezed_fidelity(n + 1, r1).unwrap() < f);
        }
    }

    #[test]
    fn duan_value_is_nonnegative_and_placement_free(
        n in 3usize..=7,
        r in 0.0f64..2.0,
        scenario in scenario(),
        gain in -1.0f64..1.5,
        outcomes in prop::collection::vec(-2.0f64..2.0, 5),
    ) {
        let state = build_ghz_state(&NetworkConfig::with_scenario(scenario, n, r).unwrap()).unwrap();
        let a = distill_pair(&state, 0, n - 1, gain, &mut Forced::new(outcomes.clone())).unwrap();
        let b = distill_pair(&state, n - 1, 0, gain, &mut Forced::new(outcomes)).unwrap();
        let (va, vb) = (duan_value(&a.pair).unwrap(), duan_value(&b.pair).unwrap());
        prop_assert!(va >= 0.0);
        prop_assert!((va - vb).abs() < 1e-12);
    }
}

#[test]
fn every_ordered_pair_gives_the_same_fidelity() {
    for n in 2..=7 {
        for r in [0.3, 1.1] {
            let config = NetworkConfig::all_equal(n, r).unwrap();
            let forms = TeleportForms::new(&config).unwrap();
            let gains = GainSchedule::optimal(&config).unwrap();
            let reference = forms
                .fidelity(config.r_values(), 0, 1, &gains, (0.0, 0.0))
                .unwrap();
            for k in 0..n {
                for l in (0..n).filter(|&l| l != k) {
                    let f = forms
                        .fidelity(config.r_values(), k, l, &gains, (0.0, 0.0))
                        .unwrap();
                    assert!((f - reference).abs() < 1e-12, "N={n} ({k},{l})");
                }
            }
        }
    }
}

#[test]
fn vacuum_inputs_give_unit_duan_value() {
    for n in 3..=6 {
        let state = build_ghz_state(&NetworkConfig::all_equal(n, 0.0).unwrap()).unwrap();
        let d = distill_pair(&state, 1, 2, 0.7, &mut Forced::new(vec![0.5; n])).unwrap();
        assert!((duan_value(&d.pair).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn no_extrema_up_to_26_parties() {
    let ns: Vec<usize> = (2..=26).collect();
    for report in threshold_scan(&ns, ScanGrid::default(), Execution::available_default()).unwrap()
    {
        assert!(
            report.stationary.is_empty(),
            "N={}: {:?}",
            report.n,
            report.stationary
        );
    }
}
