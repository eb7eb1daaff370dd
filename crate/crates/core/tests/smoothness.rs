use hajlasz::embed::tent_function;
use hajlasz::smoothness::{
    besov_seminorm, canonical_gradient, hajlasz_seminorm_l1, k_functional, k_functional_l1, modulus, nabla,
    t_r_sweep, Couple, ModulusSteps,
};
use hajlasz::{Exponent, RISpaceSpec, Space};
use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `min Σ w_x g_x` subject to `g_x + g_y ≥ |f(x) − f(y)|/d(x,y)` and
/// `g ≥ 0`, by enumerating every vertex of the feasible polyhedron.
fn vertex_enumeration(space: &Space, f: &[f64]) -> f64 {
    let n = space.n();
    let mut rows: Vec<(Vec<f64>, f64)> = (0..n)
        .map(|x| {
            let mut a = vec![0.0; n];
            a[x] = 1.0;
            (a, 0.0)
        })
        .collect();
    for (x, y) in (0..n).tuple_combinations() {
        let mut a = vec![0.0; n];
        a[x] = 1.0;
        a[y] = 1.0;
        rows.push((a, (f[x] - f[y]).abs() / space.d(x, y)));
    }
    let mut best = f64::INFINITY;
    for active in (0..rows.len()).combinations(n) {
        let a = DMatrix::from_fn(n, n, |i, j| rows[active[i]].0[j]);
        let b = DVector::from_iterator(n, active.iter().map(|&i| rows[i].1));
        let Some(g) = a.lu().solve(&b) else { continue };
        let feasible = rows.iter().all(|(a, b)| a.iter().zip(g.iter()).map(|(u, v)| u * v).sum::<f64>() >= b - 1e-10);
        if feasible {
            best = best.min(space.weights().iter().zip(g.iter()).map(|(w, v)| w * v).sum());
        }
    }
    best
}

fn random_space(rng: &mut ChaCha8Rng, n: usize) -> Space {
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
    let dist = (0..n)
        .map(|i| (0..n).map(|j| ((pts[i].0 - pts[j].0).powi(2) + (pts[i].1 - pts[j].1).powi(2)).sqrt()).collect())
        .collect();
    let w = (0..n).map(|_| rng.gen_range(0.1..3.0)).collect();
    Space::from_metric_matrix(dist, w).unwrap()
}

#[test]
fn lp_matches_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..150 {
        let n = rng.gen_range(1..=4);
        let space = random_space(&mut rng, n);
        let f: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let (lp, g) = hajlasz_seminorm_l1(&space, &f).unwrap();
        let oracle = vertex_enumeration(&space, &f);
        assert!((lp - oracle).abs() <= 1e-8 * oracle.max(1e-12), "n={n}: lp {lp} vs oracle {oracle}");
        assert!(g.max_violation(&space, &f) <= 1e-9);
    }
}

#[test]
fn lp_value_scales() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let space = random_space(&mut rng, 7);
    let f: Vec<f64> = (0..7).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let (v, _) = hajlasz_seminorm_l1(&space, &f).unwrap();
    let scaled: Vec<f64> = f.iter().map(|x| -3.0 * x).collect();
    assert!((hajlasz_seminorm_l1(&space, &scaled).unwrap().0 - 3.0 * v).abs() <= 1e-9 * v);
    let heavy = space.scale_weights(5.0).unwrap();
    assert!((hajlasz_seminorm_l1(&heavy, &f).unwrap().0 - 5.0 * v).abs() <= 1e-9 * v);
    let canon = canonical_gradient(&space, &f).unwrap();
    assert!(canon.max_violation(&space, &f) <= 1e-12);
    assert!(v <= canon.l1(&space) * (1.0 + 1e-12));
}

fn benchmark_spaces() -> Vec<(&'static str, Space)> {
    vec![
        ("path", Space::path(40, 0.25, vec![0.3; 40]).unwrap()),
        ("grid", Space::grid(8, 8, 1.0, vec![1.0; 64]).unwrap()),
        ("rgg", Space::random_geometric(100, 0.2, 5).unwrap()),
    ]
}

#[test]
fn averaging_operator_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (name, space) in benchmark_spaces() {
        let c_mu = space.doubling_constant();
        for _ in 0..10 {
            let f: Vec<f64> = (0..space.n()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let alpha = rng.gen_range(0.2..=1.0);
            let sup = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let mass: f64 = f.iter().zip(space.weights()).map(|(v, w)| v.abs().powf(alpha) * w).sum();
            let radii = space.critical_radii();
            for (tf, r) in t_r_sweep(&space, &f, alpha, &radii).into_iter().zip(&radii) {
                assert!(tf.iter().all(|v| *v <= sup * (1.0 + 1e-12)), "{name} r={r}");
                let lhs: f64 = tf.iter().zip(space.weights()).map(|(v, w)| v.powf(alpha) * w).sum();
                assert!(lhs <= c_mu * mass * (1.0 + 1e-12), "{name} r={r}: {lhs} > {c_mu} * {mass}");
            }
        }
    }
}

#[test]
fn gradient_vanishes_exactly_on_locally_constant() {
    let space = Space::unit_path(6);
    let f = [1.0, 1.0, 1.0, 4.0, 4.0, 4.0];
    assert!(nabla(&space, &f, 1.0, 0.5).unwrap().iter().all(|v| *v == 0.0));
    let g = nabla(&space, &f, 1.5, 0.5).unwrap();
    assert_eq!(g.iter().map(|v| *v > 0.0).collect::<Vec<_>>(), [false, false, true, true, false, false]);
}

#[test]
fn modulus_steps_match_direct_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let space = Space::random_geometric(30, 0.35, 2).unwrap();
    let f: Vec<f64> = (0..30).map(|_| rng.gen_range(-1.0..1.0)).collect();
    for (spec, alpha) in [(RISpaceSpec::lp(1.0), 1.0), (RISpaceSpec::lp(2.0), 0.5), (RISpaceSpec::lorentz(2.0, f64::INFINITY), 0.8)] {
        let steps = ModulusSteps::compute(&space, &f, &spec, alpha).unwrap();
        for _ in 0..10 {
            let r = rng.gen_range(1e-3..3.0 * space.diameter());
            let direct = modulus(&space, &f, r, &spec, alpha).unwrap();
            assert!((steps.eval(r) - direct).abs() <= 1e-12 * direct.max(1.0), "r={r}");
        }
    }
}

#[test]
fn besov_of_tent_scales_with_measure() {
    let space = Space::unit_path(9);
    let heavy = space.scale_weights(2.0).unwrap();
    let u = tent_function(&space, 4).unwrap();
    let l1 = RISpaceSpec::lp(1.0);
    let a = besov_seminorm(&space, &u, 0.5, Exponent(2.0), &l1, 1.0).unwrap();
    let b = besov_seminorm(&heavy, &u, 0.5, Exponent(2.0), &l1, 1.0).unwrap();
    assert!(a > 0.0 && a.is_finite());
    assert!((b - 2.0 * a).abs() <= 1e-10 * a);
    assert_eq!(besov_seminorm(&space, &[2.0; 9], 0.5, Exponent::INF, &l1, 1.0).unwrap(), 0.0);
}

#[test]
fn k_functional_structure() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let space = Space::random_geometric(12, 0.5, 9).unwrap();
    for _ in 0..5 {
        let f: Vec<f64> = (0..12).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let l1: f64 = f.iter().zip(space.weights()).map(|(v, w)| v.abs() * w).sum();
        let (m, _) = hajlasz_seminorm_l1(&space, &f).unwrap();
        let mut prev = 0.0;
        for t in [1e-3, 1e-2, 0.1, 0.5, 1.0, 3.0, 10.0] {
            let k = k_functional_l1(&space, &f, t).unwrap();
            assert!(k <= l1 * (1.0 + 1e-9) && k <= t * m * (1.0 + 1e-9) + 1e-12);
            assert!(k >= prev * (1.0 - 1e-9));
            prev = k;
            let inhom = k_functional(&space, &f, t, Couple::Inhomogeneous).unwrap();
            let model = k + t.min(1.0) * l1;
            assert!(inhom <= 2.0 * model * (1.0 + 1e-9) && model <= 2.0 * inhom * (1.0 + 1e-9), "t={t}");
        }
    }
    assert_eq!(k_functional_l1(&space, &[3.0; 12], 0.7).unwrap(), 0.0);
}
