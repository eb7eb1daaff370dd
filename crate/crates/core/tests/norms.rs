use hajlasz::powerlog::log_l;
use hajlasz::{Exponent, Family, PowerLog, RISpaceSpec, Space, StepDecreasing, Young};
use proptest::prelude::*;

fn all_specs() -> Vec<RISpaceSpec> {
    vec![
        RISpaceSpec::lp(0.5),
        RISpaceSpec::lp(1.0),
        RISpaceSpec::lp(2.5),
        RISpaceSpec::lorentz(2.0, 1.0),
        RISpaceSpec::lorentz(2.0, f64::INFINITY),
        RISpaceSpec::lorentz(0.7, 3.0),
        RISpaceSpec::lorentz_zygmund(1.5, 2.0, 0.5),
        RISpaceSpec::lorentz_zygmund(3.0, f64::INFINITY, -0.4),
        Family::LambdaW { q: 2.0, w: PowerLog::new(1.0, -0.5, 0.0, 0.0) }.into(),
        Family::Marcinkiewicz { phi: PowerLog::power(0.5) }.into(),
        Family::MarcinkiewiczTilde { phi: PowerLog::new(1.0, 0.3, 0.5, 0.0) }.into(),
        Family::Orlicz { phi: Young::Power { p: 1.5 } }.into(),
        Family::Orlicz { phi: Young::PowerLog { p: 2.0, b: 1.0 } }.into(),
        RISpaceSpec::lp(1.0).convexify(3.0).unwrap(),
        RISpaceSpec { family: Family::Marcinkiewicz { phi: PowerLog::power(0.5) }, convexify: 0.5 },
    ]
}

/// Banach r.i. spaces with a concave fundamental function.
fn banach_specs() -> Vec<RISpaceSpec> {
    vec![
        RISpaceSpec::lp(1.0),
        RISpaceSpec::lp(2.5),
        RISpaceSpec::lorentz(2.0, 1.0),
        RISpaceSpec::lorentz(3.0, 2.0),
        Family::LambdaW { q: 1.0, w: PowerLog::new(1.0, -0.5, 0.0, 0.0) }.into(),
        Family::Marcinkiewicz { phi: PowerLog::power(0.5) }.into(),
        Family::Orlicz { phi: Young::Power { p: 1.5 } }.into(),
        Family::Orlicz { phi: Young::PowerLog { p: 2.0, b: 1.0 } }.into(),
    ]
}

fn rel_le(a: f64, b: f64) -> bool {
    a <= b * (1.0 + 1e-9) + 1e-12
}

fn function_and_weights() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..25).prop_flat_map(|n| (prop::collection::vec(-4.0..4.0f64, n), prop::collection::vec(0.02..0.6f64, n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn homogeneous((f, w) in function_and_weights(), lambda in -5.0..5.0f64) {
        let fs = StepDecreasing::from_weighted(&f, &w).unwrap();
        let scaled: Vec<f64> = f.iter().map(|v| lambda * v).collect();
        let gs = StepDecreasing::from_weighted(&scaled, &w).unwrap();
        for spec in all_specs() {
            let a = spec.quasi_norm(&gs).unwrap();
            let b = lambda.abs() * spec.quasi_norm(&fs).unwrap();
            prop_assert!((a - b).abs() <= 1e-8 * b.max(1e-300), "{}: {a} vs {b}", spec.label());
        }
    }

    #[test]
    fn lattice((f, w) in function_and_weights(), shrink in prop::collection::vec(0.0..=1.0f64, 25)) {
        let g: Vec<f64> = f.iter().zip(&shrink).map(|(v, s)| v * s).collect();
        let fs = StepDecreasing::from_weighted(&f, &w).unwrap();
        let gs = StepDecreasing::from_weighted(&g, &w).unwrap();
        for spec in all_specs() {
            let (a, b) = (spec.quasi_norm(&gs).unwrap(), spec.quasi_norm(&fs).unwrap());
            prop_assert!(rel_le(a, b), "{}: {a} > {b}", spec.label());
        }
    }

    /// Block averages of `|g|` over equal-weight blocks are majorized by `g`.
    #[test]
    fn majorization(g in prop::collection::vec(-4.0..4.0f64, 24), block in 1usize..6) {
        let w = vec![0.1; g.len()];
        let f: Vec<f64> = g
            .chunks(block)
            .flat_map(|c| {
                let avg = c.iter().map(|v| v.abs()).sum::<f64>() / c.len() as f64;
                vec![avg; c.len()]
            })
            .collect();
        let fs = StepDecreasing::from_weighted(&f, &w).unwrap();
        let gs = StepDecreasing::from_weighted(&g, &w).unwrap();
        for spec in banach_specs() {
            let (a, b) = (spec.quasi_norm(&fs).unwrap(), spec.quasi_norm(&gs).unwrap());
            prop_assert!(rel_le(a, b), "{}: {a} > {b}", spec.label());
        }
    }

    #[test]
    fn lambda_x_m_chain((f, w) in function_and_weights()) {
        let fs = StepDecreasing::from_weighted(&f, &w).unwrap();
        for spec in banach_specs() {
            let m = spec.m_norm(&fs).unwrap();
            let x = spec.quasi_norm(&fs).unwrap();
            let l = spec.lambda_norm(&fs).unwrap();
            prop_assert!(rel_le(m, x) && rel_le(x, l), "{}: {m} {x} {l}", spec.label());
        }
    }

    /// `‖f‖_{L^α+L^∞} ≤ φ_X(1)^{-1/α} ‖f‖_{X^{(α)}}` for Banach `X`.
    #[test]
    fn sum_space_embedding((f, w) in function_and_weights(), alpha in 0.2..=1.0f64) {
        let fs = StepDecreasing::from_weighted(&f, &w).unwrap();
        let lhs = fs.sum_plus_linf_norm(alpha).unwrap();
        for spec in banach_specs() {
            let c = spec.fundamental_function(1.0).unwrap().powf(-1.0 / alpha);
            let rhs = c * spec.convexify(alpha).unwrap().quasi_norm(&fs).unwrap();
            prop_assert!(rel_le(lhs, rhs), "{}: {lhs} > {rhs}", spec.label());
        }
    }

    #[test]
    fn triangle_for_normed_lebesgue(a in prop::collection::vec(-3.0..3.0f64, 8), b in prop::collection::vec(-3.0..3.0f64, 8), p in 1.0..4.0f64) {
        let space = Space::unit_path(8);
        let defect = RISpaceSpec::lp(p).alpha_convexity_defect(1.0, &[vec![a, b]], &space).unwrap();
        prop_assert!(defect <= 1.0 + 1e-12);
    }
}

#[test]
fn fundamental_function_of_convexification() {
    for spec in all_specs() {
        for r in [0.5, 2.0, 3.0] {
            let conv = spec.convexify(r).unwrap();
            for t in [1e-3, 0.2, 1.0, 7.0] {
                let a = conv.fundamental_function(t).unwrap();
                let b = spec.fundamental_function(t).unwrap().powf(1.0 / r);
                assert!((a - b).abs() <= 1e-9 * b, "{} r={r} t={t}: {a} vs {b}", spec.label());
            }
        }
    }
}

#[test]
fn fundamental_function_is_indicator_norm() {
    for spec in all_specs() {
        for t in [1e-3, 0.4, 2.0] {
            let ind = StepDecreasing::from_steps(vec![t], vec![1.0]).unwrap();
            let a = spec.quasi_norm(&ind).unwrap();
            let b = spec.fundamental_function(t).unwrap();
            assert!((a - b).abs() <= 1e-8 * b, "{} t={t}: {a} vs {b}", spec.label());
        }
    }
}

#[test]
fn lorentz_zygmund_fundamental_shape() {
    for (p, r, beta) in [(1.5, 2.0, 0.5), (2.0, 1.0, -1.0), (0.5, f64::INFINITY, 2.0)] {
        let spec = RISpaceSpec::lorentz_zygmund(p, r, beta);
        let ratios: Vec<f64> = (0..=8)
            .map(|k| 10f64.powf(-0.5 * k as f64))
            .map(|m0| spec.fundamental_function(m0).unwrap() / (m0.powf(1.0 / p) * log_l(m0).powf(beta)))
            .collect();
        let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)));
        assert!(lo > 0.0 && hi / lo < 4.0, "p={p} r={r} beta={beta}: ratios {ratios:?}");
    }
}

#[test]
fn exponent_text_forms() {
    let e: Exponent = serde_json::from_str("\"inf\"").unwrap();
    assert!(e.is_inf());
    let spec = RISpaceSpec::from_json(r#"{"family": "lorentz", "p": 2, "q": "inf"}"#).unwrap();
    assert_eq!(spec, RISpaceSpec::lorentz(2.0, f64::INFINITY));
}
