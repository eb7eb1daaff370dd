//! Acceptance checks. Prints one PASS/FAIL line per criterion and always
//! exits 0; the lines are the verdict.

use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use hajlasz::corpus::{Generator, NamedFunction};
use hajlasz::embed::{
    embedding_report, lz_linf_condition, lz_m_function, regime_classify, teomo1_check, tent_function, tent_gradient,
    MFunction, RegimeCase,
};
use hajlasz::quad::{integrate, Tolerance};
use hajlasz::smoothness::{hajlasz_seminorm_l1, t_r_sweep};
use hajlasz::verify::{verify, Theorem, VerifyParams};
use hajlasz::{Exponent, RISpaceSpec, Space, StepDecreasing};
use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn run(id: usize, title: &str, limit: Duration, check: impl FnOnce() -> Verdict) -> bool {
    let start = Instant::now();
    let v = check();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let pass = v.pass && in_time;
    println!(
        "{} {id:>2} {title}: {} [{:.2}s, limit {}s{}]",
        if pass { "PASS" } else { "FAIL" },
        v.detail,
        elapsed.as_secs_f64(),
        limit.as_secs(),
        if in_time { "" } else { ", over time" }
    );
    pass
}

fn random_fw(rng: &mut ChaCha8Rng, n: usize) -> (Vec<f64>, Vec<f64>) {
    let f = (0..n)
        .map(|_| match rng.gen_range(0..4) {
            0 => 0.0,
            1 => rng.gen_range(-2i32..=2) as f64,
            _ => rng.gen_range(-5.0..5.0),
        })
        .collect();
    let w = (0..n).map(|_| rng.gen_range(0.01..2.0)).collect();
    (f, w)
}

fn c1_distribution() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    let mut levels_checked = 0usize;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=200);
        let (f, w) = random_fw(&mut rng, n);
        let fs = StepDecreasing::from_weighted(&f, &w).unwrap();
        let mut levels: Vec<f64> = f.iter().map(|v| v.abs()).collect();
        levels.push(0.0);
        for s in levels {
            let direct: f64 = f.iter().zip(&w).filter(|(v, _)| v.abs() > s).map(|(_, w)| w).sum();
            worst = worst.max((fs.distribution(s) - direct).abs() / direct.max(1.0));
            levels_checked += 1;
        }
    }
    Verdict { pass: worst <= 1e-12, detail: format!("1000 functions, {levels_checked} levels, max rel diff {worst:.1e}") }
}

/// `F(t)^q − F(1)^q − q ∫_t^1 F^{q−1} O ds/s` relative to `F(t)^q`, with
/// `F = (|f|^α)**`.
fn reconstruction_error(fs: &StepDecreasing, alpha: f64, q: f64, t: f64) -> f64 {
    let g = fs.powf(alpha);
    let big_f = |s: f64| g.maximal_average(s).unwrap();
    let mut cuts = vec![t];
    cuts.extend(g.breakpoints().iter().copied().filter(|&b| b > t && b < 1.0));
    cuts.push(1.0);
    let tol = Tolerance { rel: 1e-12, abs: 1e-14, ..Tolerance::default() };
    let integral: f64 = cuts
        .windows(2)
        .map(|w| integrate(|s| big_f(s).powf(q - 1.0) * fs.oscillation(alpha, s).unwrap() / s, w[0], w[1], tol).value)
        .sum();
    let lhs = big_f(t).powf(q);
    (lhs - big_f(1.0).powf(q) - q * integral).abs() / lhs.abs().max(1e-300)
}

fn c2_inequalities() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut fails = [0usize; 5];
    let mut worst_recon: f64 = 0.0;
    for _ in 0..500 {
        let n = rng.gen_range(2..30);
        let (f, w) = random_fw(&mut rng, n);
        let g: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let fs = StepDecreasing::from_weighted(&f, &w).unwrap();
        let gs = StepDecreasing::from_weighted(&g, &w).unwrap();
        let sum: Vec<f64> = f.iter().zip(&g).map(|(a, b)| a + b).collect();
        let hs = StepDecreasing::from_weighted(&sum, &w).unwrap();

        let lhs: f64 = f.iter().zip(&g).zip(&w).map(|((a, b), w)| (a * b).abs() * w).sum();
        let mut cuts: Vec<f64> = fs.breakpoints().iter().chain(gs.breakpoints()).copied().collect();
        cuts.sort_by(f64::total_cmp);
        let mut rhs = 0.0;
        let mut lo = 0.0;
        for hi in cuts {
            let mid = 0.5 * (lo + hi);
            rhs += fs.eval(mid) * gs.eval(mid) * (hi - lo);
            lo = hi;
        }
        fails[0] += usize::from(lhs > rhs * (1.0 + 1e-12) + 1e-12);

        let total = fs.mass();
        for _ in 0..10 {
            let (t1, t2) = (rng.gen_range(0.0..total), rng.gen_range(0.0..total));
            fails[1] += usize::from(hs.eval(t1 + t2) > fs.eval(t1) + gs.eval(t2) + 1e-12);
            let t = rng.gen_range(1e-6..1.5 * total);
            let (a, b) = (hs.maximal_average(t).unwrap(), fs.maximal_average(t).unwrap() + gs.maximal_average(t).unwrap());
            fails[2] += usize::from(a > b * (1.0 + 1e-12) + 1e-12);
        }

        let alpha = rng.gen_range(0.1..=1.0);
        let fa: Vec<f64> = f.iter().map(|v| v.abs().powf(alpha)).collect();
        let direct = StepDecreasing::from_weighted(&fa, &w).unwrap();
        let powered = fs.powf(alpha);
        for _ in 0..10 {
            let t = rng.gen_range(0.0..1.2 * total);
            let (a, b) = (powered.eval(t), direct.eval(t));
            fails[3] += usize::from((a - b).abs() > 1e-12 * b.max(1.0));
        }

        if fs.sup() > 0.0 {
            for q in [0.5, 1.0, 2.0] {
                let t = rng.gen_range(1e-3..0.9);
                let e = reconstruction_error(&fs, alpha, q, t);
                worst_recon = worst_recon.max(e);
                fails[4] += usize::from(!(e < 1e-6));
            }
        }
    }
    Verdict {
        pass: fails.iter().all(|&k| k == 0),
        detail: format!(
            "500 pairs; violations HL/sum/maximal-sum/power/reconstruction = {fails:?}; max reconstruction rel err {worst_recon:.1e}"
        ),
    }
}

fn c3_averaging() -> Verdict {
    let spaces = [
        ("path", Space::path(40, 0.25, vec![0.3; 40]).unwrap()),
        ("grid8x8", Space::grid(8, 8, 1.0, vec![1.0; 64]).unwrap()),
        ("rgg100", Space::random_geometric(100, 0.2, 5).unwrap()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut violations = 0;
    let mut checks = 0;
    for (_, space) in &spaces {
        let c_mu = space.doubling_constant();
        let radii = space.critical_radii();
        for _ in 0..200 {
            let f: Vec<f64> = (0..space.n()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let alpha = rng.gen_range(0.2..=1.0);
            let sup = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let mass: f64 = f.iter().zip(space.weights()).map(|(v, w)| v.abs().powf(alpha) * w).sum();
            for tf in t_r_sweep(space, &f, alpha, &radii) {
                let lhs: f64 = tf.iter().zip(space.weights()).map(|(v, w)| v.powf(alpha) * w).sum();
                violations += usize::from(tf.iter().any(|v| *v > sup * (1.0 + 1e-12)));
                violations += usize::from(lhs > c_mu * mass * (1.0 + 1e-12));
                checks += 2;
            }
        }
    }
    Verdict { pass: violations == 0, detail: format!("{checks} bound checks on path, grid 8x8, rgg n=100: {violations} violations") }
}

/// Minimum of `Σ w_x g_x` over the vertices of
/// `{g ≥ 0, g_x + g_y ≥ |f(x) − f(y)|/d(x,y)}`.
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
        if rows.iter().all(|(a, b)| a.iter().zip(g.iter()).map(|(u, v)| u * v).sum::<f64>() >= b - 1e-10) {
            best = best.min(space.weights().iter().zip(g.iter()).map(|(w, v)| w * v).sum());
        }
    }
    best
}

fn c4_lp_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let n = rng.gen_range(1..=4);
        let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
        let dist = (0..n).map(|i| (0..n).map(|j| (pts[i].0 - pts[j].0).hypot(pts[i].1 - pts[j].1)).collect()).collect();
        let w = (0..n).map(|_| rng.gen_range(0.1..3.0)).collect();
        let space = Space::from_metric_matrix(dist, w).unwrap();
        let f: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let (lp, _) = hajlasz_seminorm_l1(&space, &f).unwrap();
        let oracle = vertex_enumeration(&space, &f);
        worst = worst.max((lp - oracle).abs() / oracle.max(1e-12));
    }
    Verdict { pass: worst < 1e-8, detail: format!("500 instances, n <= 4, max rel diff {worst:.1e}") }
}

fn sandwich_constants(space: &Space, corpus: &[NamedFunction]) -> (f64, f64) {
    let out = verify(Theorem::TeoInterpol, space, corpus, &VerifyParams::new(RISpaceSpec::lp(1.0), 1.0, 0.5, Exponent(1.0)))
        .unwrap();
    let c1 = out.reports[0].empirical_constant;
    (c1, c1 * out.reports[1].empirical_constant)
}

fn c5_sandwich() -> Verdict {
    let base = Space::grid(8, 8, 1.0, vec![1.0; 64]).unwrap();
    let tents = Generator::Tents.generate(&base, 0).unwrap();
    let mut corpus: Vec<NamedFunction> = tents.into_iter().step_by(3).take(20).collect();
    corpus.extend(Generator::RandomUniform(20).generate(&base, 5).unwrap());
    let (c1, c2) = sandwich_constants(&base, &corpus);
    let mut drift: f64 = 0.0;
    let mut scaled = vec![];
    for lambda in [0.1, 10.0] {
        let (a, b) = sandwich_constants(&base.scale_weights(lambda).unwrap(), &corpus);
        drift = drift.max(((a - c1) / c1).abs()).max(((b - c2) / c2).abs());
        scaled.push(format!("lambda={lambda}: C1={a:.6}, C2={b:.6}"));
    }
    Verdict {
        pass: c1.is_finite() && c2.is_finite() && c1 > 0.0 && drift < 0.01,
        detail: format!(
            "{} functions x 20 t: C1={c1:.6}, C2={c2:.6}; {}; max drift {:.2e}",
            corpus.len(),
            scaled.join(", "),
            drift
        ),
    }
}

fn fine_path() -> Space {
    Space::path(61, 0.1, vec![0.125; 61]).unwrap()
}

fn band(values: &[f64]) -> (f64, f64) {
    values.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)))
}

fn c6_spec_independence() -> Verdict {
    let space = fine_path();
    let specs = [
        RISpaceSpec::lp(1.0),
        RISpaceSpec::lp(2.0),
        RISpaceSpec::lorentz(2.0, f64::INFINITY),
        RISpaceSpec::lorentz_zygmund(1.5, 2.0, 0.5),
    ];
    let (alpha, s, q) = (1.0, 0.9, Exponent(2.0));
    let constants = |corpus: &[NamedFunction]| -> Vec<f64> {
        specs.iter().map(|spec| embedding_report(&space, corpus, spec, alpha, s, q).unwrap().empirical_constant).collect()
    };
    let tents = Generator::Tents.generate(&space, 0).unwrap();
    let tent_c = constants(&tents);
    let (lo, hi) = band(&tent_c);
    let tent_ok = tent_c.iter().all(|c| c.is_finite()) && hi <= 3.0 * lo;

    let mut mixed = tents.clone();
    mixed.extend(Generator::RandomUniform(20).generate(&space, 1).unwrap());
    mixed.extend(Generator::LipschitzNoise(20).generate(&space, 2).unwrap());
    let mixed_c = constants(&mixed);
    let (mlo, mhi) = band(&mixed_c);
    let mixed_ok = mlo > 0.0 && mhi <= 3.0 * mlo;
    let fmt = |v: &[f64]| v.iter().map(|c| format!("{c:.4}")).join("/");
    Verdict {
        pass: tent_ok && mixed_ok,
        detail: format!(
            "b={}, L1/L2/L^(2,inf)/LZ tents: {} (all oscillations vanish on (0,1)); tents+random+lipschitz: {}, band {:.2}",
            space.noncollapsing_constant(),
            fmt(&tent_c),
            fmt(&mixed_c),
            mhi / mlo
        ),
    }
}

fn c7_collapse() -> Verdict {
    let base = fine_path();
    let corpus = Generator::Tents.generate(&base, 0).unwrap();
    let spec = RISpaceSpec::lp(1.0);
    let cs: Vec<f64> = [1.0, 1e-1, 1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&e| {
            embedding_report(&base.scale_weights(e).unwrap(), &corpus, &spec, 1.0, 0.9, Exponent(2.0))
                .unwrap()
                .empirical_constant
        })
        .collect();
    let monotone = cs.windows(2).all(|w| w[1] >= w[0]);
    let grows = cs[4] > 0.0 && cs[4] >= 10.0 * cs[0];
    Verdict {
        pass: monotone && grows,
        detail: format!(
            "eps 1..1e-4: {}; C(1e-4)/C(1) = {}, C(1e-4)/C(1e-1) = {:.1}",
            cs.iter().map(|c| format!("{c:.4}")).join(", "),
            if cs[0] == 0.0 { "inf".to_string() } else { format!("{:.1}", cs[4] / cs[0]) },
            cs[4] / cs[1]
        ),
    }
}

fn c8_pointwise() -> Verdict {
    let mut worst_drift: f64 = 0.0;
    let mut exact = true;
    let mut worst_scale: f64 = 0.0;
    let mut count = 0;
    for space in [Space::path(30, 0.2, vec![0.2; 30]).unwrap(), fine_path(), Space::grid(6, 6, 0.5, vec![0.3; 36]).unwrap()] {
        for x0 in 0..space.n() {
            let u = tent_function(&space, x0).unwrap();
            let g = tent_gradient(&space, x0).unwrap();
            for alpha in [1.0, 0.5] {
                let c = teomo1_check(&space, &u, alpha, &g, 64).unwrap();
                let fine = teomo1_check(&space, &u, alpha, &g, 128).unwrap();
                if c > 0.0 {
                    worst_drift = worst_drift.max((fine - c).abs() / c);
                }
                for lambda in [0.5f64, 2.0, 4.0, -8.0, 0.25, 16.0, 3.0, 0.1] {
                    let scaled: Vec<f64> = u.iter().map(|v| lambda * v).collect();
                    let mut gs = g.clone();
                    gs.g.iter_mut().for_each(|v| *v *= lambda.abs());
                    let cl = teomo1_check(&space, &scaled, alpha, &gs, 64).unwrap();
                    if lambda.abs().powf(alpha).log2().fract() == 0.0 {
                        exact &= cl == c;
                    } else if c > 0.0 {
                        worst_scale = worst_scale.max((cl - c).abs() / c);
                    }
                }
                count += 1;
            }
        }
    }
    Verdict {
        pass: worst_drift < 0.1 && exact && worst_scale <= 1e-14,
        detail: format!(
            "{count} tents: max change 64->128 t-points {worst_drift:.2e}; bit-exact when lambda^alpha = 2^k: {exact}; max rel change otherwise {worst_scale:.1e}"
        ),
    }
}

fn power_integral(g: f64, t: f64) -> f64 {
    if g.abs() < 1e-14 {
        -t.ln()
    } else {
        (1.0 - t.powf(g)) / g
    }
}

/// Points with `s = Q/p`, `p ≤ 1`, `p < r`, `q = p`, `β = 0`.
fn known_gap(p: f64, r: Exponent, beta: f64, s: f64, q: Exponent, q_dim: f64) -> bool {
    (s - q_dim / p).abs() < 1e-12 && p <= 1.0 && p < r.0 && q.0 == p && beta == 0.0
}

fn c9_machinery() -> Verdict {
    let ps = [0.25, 0.5, 0.8, 1.0, 1.5, 2.0, 4.0];
    let rs = [0.25, 0.5, 1.0, 2.0, f64::INFINITY];
    let betas = [-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5];
    let qs = [0.25, 0.5, 0.8, 1.0, 2.0, 4.0, f64::INFINITY];
    let (mut points, mut mismatches, mut outside_gap) = (0, 0, 0);
    for &p in &ps {
        for &r in &rs {
            for &beta in &betas {
                for &q in &qs {
                    for q_dim in [0.2, 0.4, 0.5] {
                        let crit = q_dim / p;
                        for s in [crit * 0.5, crit, crit * 1.5].into_iter().filter(|s| *s > 0.0 && *s < 1.0) {
                            let (r, q) = (Exponent(r), Exponent(q));
                            let bounded = lz_m_function(p, r, beta, s, q, q_dim).unwrap().finite_at_zero();
                            if bounded != lz_linf_condition(p, r, beta, s, q, q_dim) {
                                mismatches += 1;
                                outside_gap += usize::from(!known_gap(p, r, beta, s, q, q_dim));
                            }
                            points += 1;
                        }
                    }
                }
            }
        }
    }

    let mut worst_w: f64 = 0.0;
    for (p, alpha, s, q_dim, q) in [(2.0, 1.0, 0.5, 2.0, 2.0), (1.0, 0.5, 0.3, 1.0, 3.0), (4.0, 0.8, 0.9, 4.0, 1.5)] {
        let m = MFunction::new(&RISpaceSpec::lp(p), alpha, s, Exponent(q), q_dim).unwrap();
        let kappa = alpha * q / (q - alpha);
        let gamma = (s / q_dim - 1.0 / (p * alpha)) * kappa;
        let big = |t: f64| (1.0 + power_integral(gamma, t)).powf(1.0 - q / alpha);
        for k in 0..=24 {
            let t = 10f64.powf(-6.0 + 0.25 * k as f64).min(0.99);
            let h = 1e-5 * t;
            let d = (big(t + h) - big(t - h)) / (2.0 * h);
            worst_w = worst_w.max((m.pesos(t).unwrap().powf(q) / t - d).abs() / d.abs());
        }
    }

    let golden = include_str!("../../core/tests/golden/regimes.csv");
    let num = |s: &str| -> f64 { if s == "inf" { f64::INFINITY } else { s.parse().unwrap() } };
    let (mut rows, mut row_fails) = (0, 0);
    for line in golden.lines().skip(1).filter(|l| !l.trim().is_empty()) {
        let c: Vec<&str> = line.split(',').collect();
        let reg = regime_classify(num(c[0]), Exponent(num(c[1])), num(c[2]), num(c[3]), Exponent(num(c[4])), num(c[5])).unwrap();
        let case = serde_json::to_value(reg.case_id).unwrap();
        row_fails += usize::from(case != c[6] || reg.row != c[7]);
        rows += 1;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut total_fails = 0;
    for _ in 0..100_000 {
        let p = rng.gen_range(0.1..6.0);
        let r = if rng.gen_bool(0.2) { Exponent::INF } else { Exponent(rng.gen_range(0.1..6.0)) };
        let q = if rng.gen_bool(0.2) { Exponent::INF } else { Exponent(rng.gen_range(0.1..6.0)) };
        let (beta, q_dim) = (rng.gen_range(-3.0..3.0), rng.gen_range(0.1..3.0));
        let s = if rng.gen_bool(0.3) { q_dim / p } else { rng.gen_range(0.01..0.99) };
        if !(s > 0.0 && s < 1.0) {
            continue;
        }
        let reg = regime_classify(p, r, beta, s, q, q_dim).unwrap();
        let bounded = lz_m_function(p, r, beta, s, q, q_dim).unwrap().finite_at_zero();
        total_fails += usize::from((reg.case_id == RegimeCase::Linf) != bounded);
    }

    Verdict {
        pass: mismatches == 0 && worst_w < 1e-6 && row_fails == 0 && total_fails == 0,
        detail: format!(
            "m(0) vs stated conditions on {points} points: {mismatches} mismatches ({outside_gap} outside the s=Q/p, p<=1, p<r, q=p, beta=0 family); \
             weight vs numeric derivative max rel {worst_w:.1e}; golden rows {}/{rows}; random totality mismatches {total_fails}",
            rows - row_fails
        ),
    }
}

fn c10_determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_hajlasz");
    let config = dir.path().join("config.json");
    fs::write(
        &config,
        r#"{"space_path": "rgg:40:0.3:7", "corpus": "random-uniform:8", "seed": 42,
            "spec": [{"family": "lorentz", "p": 2, "q": "inf"}],
            "params": {"alpha": [1.0, 0.5], "s": [0.4], "q": [2, "inf"]}}"#,
    )
    .unwrap();
    let runs: Vec<Vec<(String, Vec<u8>)>> = ["a", "b"]
        .iter()
        .map(|tag| {
            let out = dir.path().join(tag);
            for args in [vec!["verify", "--theorem", "k1"], vec!["besov"], vec!["kfun"], vec!["regimes"]] {
                let status = Command::new(bin)
                    .args(&args)
                    .arg("--config")
                    .arg(&config)
                    .arg("--out")
                    .arg(&out)
                    .output()
                    .unwrap()
                    .status;
                assert!(status.success(), "{args:?} failed");
            }
            let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(&out)
                .unwrap()
                .map(|e| e.unwrap().path())
                .filter(|p| p.extension().is_some_and(|e| e == "csv"))
                .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
                .collect();
            files.sort();
            files
        })
        .collect();
    let same = runs[0] == runs[1] && !runs[0].is_empty();
    Verdict {
        pass: same,
        detail: format!("{} CSV files from verify/besov/kfun/regimes, byte-identical: {same}", runs[0].len()),
    }
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        run(1, "rearrangement exactness", secs(10), c1_distribution),
        run(2, "rearrangement inequalities", secs(30), c2_inequalities),
        run(3, "averaging operator bounds", secs(60), c3_averaging),
        run(4, "LP oracle agreement", secs(20), c4_lp_oracle),
        run(5, "K-functional sandwich", secs(300), c5_sandwich),
        run(6, "spec independence on a non-collapsed space", secs(120), c6_spec_independence),
        run(7, "collapse sensitivity", secs(120), c7_collapse),
        run(8, "pointwise oscillation bound stability", secs(60), c8_pointwise),
        run(9, "m-function and regime machinery", secs(60), c9_machinery),
        run(10, "CLI determinism", secs(10), c10_determinism),
    ];
    let passed = results.iter().filter(|p| **p).count();
    println!("{passed}/{} criteria passed", results.len());
}
