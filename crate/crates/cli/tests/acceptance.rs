//! Acceptance suite. Each criterion prints one `PASS`/`FAIL` line; the
//! process exits non-zero when any criterion fails.
//!
//! Run with `cargo test -p torus-spectra-cli --test acceptance`; pass
//! criterion ids (`c1 c7 ...`) after `--` to run a subset.

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torus_spectra::analytic::{lemma1_spectrum, lemma2_spectrum};
use torus_spectra::experiments::{run_sweep, ConnectivityRadius, Regime, RegimeConfig};
use torus_spectra::geometry::unit_ball_volume;
use torus_spectra::io::RunManifest;
use torus_spectra::spectra::{eigenvalues_circulant, eigenvalues_dense, DEFAULT_DENSE_CAP};
use torus_spectra::{
    assemble, assemble_circulant, build_dgg, ks_distance, levy_distance, sample_rgg, EigenOptions,
    Error, Metric, SpectralDistribution,
};

const EXACT_TOL: f64 = 1e-9;
const L3_BOUND: f64 = 0.16665;
const DIRAC_FRACTION: f64 = 0.95;
const FIG2B_KS: f64 = 0.02;

type Criterion = (&'static str, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn dense_opts() -> EigenOptions {
    EigenOptions {
        cap: DEFAULT_DENSE_CAP,
        verify: false,
    }
}

fn max_abs_diff(a: &SpectralDistribution, b: &SpectralDistribution) -> f64 {
    assert_eq!(a.len(), b.len());
    a.eigenvalues()
        .iter()
        .zip(b.eigenvalues())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn c1_closed_form() -> Outcome {
    let mut worst = 0.0f64;
    let mut lines = Vec::new();
    for (n, r) in [(8, 0.25), (64, 0.05), (512, 0.01), (2048, 0.004)] {
        let g = build_dgg(n, r, 1, Metric::Euclidean).unwrap();
        let dense = eigenvalues_dense(&assemble(&g, 0.0).unwrap(), &dense_opts()).unwrap();
        let diff = max_abs_diff(&lemma1_spectrum(n, r).unwrap(), &dense);
        worst = worst.max(diff);
        lines.push(format!("n={n}:{diff:.1e}"));
    }
    outcome(
        worst <= EXACT_TOL,
        format!("max |Δ| = {worst:.2e} ({})", lines.join(" ")),
    )
}

fn c2_circulant() -> Outcome {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in [32, 64, 256, 512] {
        for gp in [2usize, 4, 24] {
            if gp >= n {
                continue;
            }
            let r = (gp / 2) as f64 / n as f64;
            let g = build_dgg(n, r, 1, Metric::Euclidean).unwrap();
            assert_eq!(g.degrees()[0], gp, "lattice degree at n={n} r={r}");
            for alpha in [0.0, 0.001] {
                let c = eigenvalues_circulant(&assemble_circulant(&g, alpha).unwrap()).unwrap();
                let d = eigenvalues_dense(&assemble(&g, alpha).unwrap(), &dense_opts()).unwrap();
                worst = worst.max(max_abs_diff(&c, &d));
                cases += 1;
            }
        }
    }
    outcome(
        worst <= EXACT_TOL,
        format!("{cases} cases, max |Δ| = {worst:.2e}"),
    )
}

fn c3_zero_mode_and_range() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let metrics = [Metric::Euclidean, Metric::Chebyshev, Metric::Lp(3.0)];
    let (mut checked, mut singular, mut worst_min, mut worst_out) = (0, 0, 0.0f64, 0.0f64);
    let mut failures = Vec::new();
    for k in 0..50 {
        let d = rng.random_range(1..=3usize);
        let metric = metrics[rng.random_range(0..metrics.len())];
        let alpha = [0.0, 0.001, 0.1][rng.random_range(0..3)];
        let graph = if rng.random_bool(0.5) {
            let n = rng.random_range(20..=500usize);
            let degree = rng.random_range(3.0..30.0);
            let r = (degree / (unit_ball_volume(d, metric) * n as f64))
                .powf(1.0 / d as f64)
                .min(0.5);
            sample_rgg(n, r, d, metric, 1000 + k).unwrap()
        } else {
            let max_side: usize = [400, 22, 8][d - 1];
            let side = rng.random_range(4..=max_side);
            let n = side.pow(d as u32);
            let r =
                (rng.random_range(1..=side / 2) as f64 + rng.random_range(0.0..0.9)) / side as f64;
            build_dgg(n, r.min(0.5), d, metric).unwrap()
        };
        let l = match assemble(&graph, alpha) {
            Ok(l) => l,
            Err(Error::IsolatedVertex { .. }) => {
                singular += 1;
                continue;
            }
            Err(e) => panic!("config {k}: {e}"),
        };
        let f = eigenvalues_dense(&l, &dense_opts()).unwrap();
        let dev = f.min().abs();
        let out = (-f.min()).max(f.max() - 2.0).max(0.0);
        worst_min = worst_min.max(dev);
        worst_out = worst_out.max(out);
        if dev > EXACT_TOL || out > EXACT_TOL {
            failures.push(format!("config {k} ({} n={})", graph.kind(), graph.n()));
        }
        checked += 1;
    }
    let pass = failures.is_empty() && checked > 0;
    outcome(
        pass,
        format!(
            "{checked} spectra ({singular} singular α=0 configs reported), |λ_min| <= {worst_min:.1e}, range excess {worst_out:.1e}{}",
            if failures.is_empty() { String::new() } else { format!(", failing: {}", failures.join(", ")) }
        ),
    )
}

fn thermodynamic(sizes: Vec<usize>, trials: usize) -> RegimeConfig {
    RegimeConfig {
        regime: Regime::Thermodynamic { gamma: 12.0 },
        sizes,
        d: 1,
        metric: Metric::Euclidean,
        alpha: 0.001,
        trials,
        base_seed: 0,
        tol: EXACT_TOL,
        workers: workers(),
        eigen_cap: DEFAULT_DENSE_CAP,
        samples: None,
        grid_points: 2001,
    }
}

fn connectivity(sizes: Vec<usize>, trials: usize) -> RegimeConfig {
    RegimeConfig {
        regime: Regime::Connectivity(ConnectivityRadius::LogPower { exponent: 1.5 }),
        alpha: 0.0,
        ..thermodynamic(sizes, trials)
    }
}

fn c4_thermodynamic_bound() -> Outcome {
    let report = run_sweep(&thermodynamic(vec![4096], 20)).unwrap();
    let l3: Vec<f64> = report
        .trials
        .iter()
        .filter_map(|t| t.levy_cubed())
        .collect();
    let below = l3.iter().filter(|&&v| v <= L3_BOUND).count();
    let max = l3.iter().copied().fold(0.0, f64::max);
    outcome(
        below >= 19 && l3.len() == 20,
        format!(
            "{below}/{} trials with L³ <= {L3_BOUND} (max L³ = {max:.3e})",
            l3.len()
        ),
    )
}

fn c5_connectivity_trend() -> Outcome {
    let report = run_sweep(&connectivity(vec![512, 2048, 4096], 10)).unwrap();
    let means: Vec<f64> = report
        .summary
        .iter()
        .map(|s| {
            assert_eq!(s.completed, 10, "singular trials at n={}", s.n);
            s.mean_levy_cubed.unwrap()
        })
        .collect();
    let decreasing = means.windows(2).all(|w| w[1] < w[0]);
    let ratio = means[2] / means[0];
    outcome(
        decreasing && ratio < 0.5,
        format!(
            "mean L³: n=512 {:.3e}, n=2048 {:.3e}, n=4096 {:.3e}; ratio 4096/512 = {ratio:.3}",
            means[0], means[1], means[2]
        ),
    )
}

fn c6_dirac_at_one() -> Outcome {
    let cfg = connectivity(vec![512, 4096], 1);
    let fraction = |n: usize| {
        let g = build_dgg(n, cfg.radius(n), 1, Metric::Euclidean).unwrap();
        eigenvalues_circulant(&assemble_circulant(&g, 0.0).unwrap())
            .unwrap()
            .mass_in(0.9, 1.1)
    };
    let (small, large) = (fraction(512), fraction(4096));
    outcome(
        large > DIRAC_FRACTION && large > small,
        format!(
            "mass in [0.9, 1.1]: n=512 {small:.4}, n=4096 {large:.4} (need > {DIRAC_FRACTION})"
        ),
    )
}

/// Smallest `ε` on the grid `k h` with `F(x-ε) - ε <= G(x) <= F(x+ε) + ε`
/// at every candidate `x`, by direct counting.
fn levy_grid_oracle(f: &[f64], g: &[f64], h: f64) -> f64 {
    let cdf = |v: &[f64], x: f64| v.iter().filter(|&&a| a <= x).count() as f64 / v.len() as f64;
    let mut k = 0usize;
    loop {
        let eps = k as f64 * h;
        let mut xs: Vec<f64> = Vec::new();
        for &a in f.iter().chain(g) {
            for shift in [-eps, 0.0, eps] {
                // each breakpoint and a point just left of it
                xs.extend([a + shift, a + shift - h * 1e-3]);
            }
        }
        let ok = xs.iter().all(|&x| {
            let gx = cdf(g, x);
            cdf(f, x - eps) - eps <= gx && gx <= cdf(f, x + eps) + eps
        });
        if ok {
            return eps;
        }
        k += 1;
    }
}

fn random_step(rng: &mut ChaCha8Rng) -> SpectralDistribution {
    let atoms = rng.random_range(1..=50usize);
    let mut values: Vec<f64> = (0..atoms).map(|_| rng.random_range(0.0..2.0)).collect();
    // repeated atoms give unequal jump sizes
    for _ in 0..rng.random_range(0..atoms) {
        let v = values[rng.random_range(0..atoms)];
        values.push(v);
    }
    SpectralDistribution::new(values, "random").unwrap()
}

fn c7_levy_metric() -> Outcome {
    let tol = EXACT_TOL;
    let h = 1e-3;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut worst_gap, mut violations) = (0.0f64, Vec::new());
    for pair in 0..100 {
        let (f, g, third) = (
            random_step(&mut rng),
            random_step(&mut rng),
            random_step(&mut rng),
        );
        let l = levy_distance(&f, &g, tol);
        let oracle = levy_grid_oracle(f.eigenvalues(), g.eigenvalues(), h);
        // the oracle's grid step brackets the infimum: L ∈ (oracle - h, oracle]
        let gap = if l > oracle {
            l - oracle
        } else {
            (oracle - h - l).max(0.0)
        };
        worst_gap = worst_gap.max(gap);
        if gap > 2.0 * tol {
            violations.push(format!("pair {pair}: oracle {oracle} vs {l}"));
        }
        let lgf = levy_distance(&g, &f, tol);
        let lft = levy_distance(&f, &third, tol);
        let ltg = levy_distance(&third, &g, tol);
        let checks = [
            ("identity", levy_distance(&f, &f, tol) == 0.0),
            ("symmetry", (l - lgf).abs() <= tol),
            ("positivity", l > 0.0 || f.eigenvalues() == g.eigenvalues()),
            ("triangle", l <= lft + ltg + 3.0 * tol),
            ("L <= KS", l <= ks_distance(&f, &g) + tol),
        ];
        for (name, ok) in checks {
            if !ok {
                violations.push(format!("pair {pair}: {name}"));
            }
        }
    }
    outcome(
        violations.is_empty(),
        format!(
            "100 pairs, oracle bracket excess <= {worst_gap:.1e} (grid h = {h}){}",
            if violations.is_empty() {
                String::new()
            } else {
                format!("; {}", violations.join("; "))
            }
        ),
    )
}

fn cli(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_torus-spectra"))
        .args(args)
        .output()
        .expect("spawn torus-spectra");
    assert!(
        out.status.success(),
        "torus-spectra {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, json).unwrap();
    path.to_string_lossy().into_owned()
}

fn c8_fig2b() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "fig2b.json",
        r#"{"regime": "thermodynamic", "n": 4096, "gamma": 12, "alpha": 0.001, "seed": 0}"#,
    );
    let out = dir.path().join("out");
    cli(&[
        "experiment",
        "fig2b",
        "--config",
        &config,
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    let curves = ["rgg", "dgg", "analytic"]
        .iter()
        .filter(|k| out.join(format!("curves/fig2b_{k}_n4096.csv")).is_file())
        .count();
    let manifest = RunManifest::read(&out.join("manifest.json")).unwrap();
    let ks = manifest.extras["sizes"][0]["ks_dgg_analytic"]
        .as_f64()
        .unwrap();
    // independent recomputation from the library
    let g = build_dgg(4096, 12.0 / 4096.0, 1, Metric::Euclidean).unwrap();
    let dgg = eigenvalues_circulant(&assemble_circulant(&g, 0.001).unwrap()).unwrap();
    let ks_direct = ks_distance(&dgg, &lemma2_spectrum(12.0, 0.001, 4096).unwrap());
    outcome(
        curves == 3 && ks <= FIG2B_KS && (ks - ks_direct).abs() < 1e-12,
        format!("{curves}/3 curves, KS(DGG, analytic) = {ks:.3e} (recomputed {ks_direct:.3e}, need <= {FIG2B_KS})"),
    )
}

fn c9_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let configs = [
        (
            "sweep",
            r#"{"regime": "thermodynamic", "n": [256, 512], "trials": 4, "seed": 11, "workers": 2}"#,
        ),
        (
            "sweep",
            r#"{"regime": "connectivity", "n": [144, 256], "trials": 3, "seed": 5, "d": 2, "metric": "chebyshev", "workers": 2}"#,
        ),
        (
            "fig2a",
            r#"{"regime": "connectivity", "n": [128, 512], "seed": 2}"#,
        ),
        (
            "fig2b",
            r#"{"regime": "thermodynamic", "n": 512, "seed": 3}"#,
        ),
    ];
    let mut mismatches = Vec::new();
    for (k, (which, json)) in configs.iter().enumerate() {
        let config = write_config(dir.path(), &format!("c{k}.json"), json);
        let runs: Vec<Vec<u8>> = ["a", "b"]
            .iter()
            .map(|run| {
                let out = dir.path().join(format!("{k}{run}"));
                cli(&[
                    "experiment",
                    which,
                    "--config",
                    &config,
                    "--out-dir",
                    out.to_str().unwrap(),
                ]);
                fs::read(out.join("trials.csv")).unwrap()
            })
            .collect();
        if runs[0] != runs[1] || runs[0].is_empty() {
            mismatches.push(format!("{which} config {k}"));
        }
    }
    outcome(
        mismatches.is_empty(),
        format!(
            "{} experiments run twice{}",
            configs.len(),
            if mismatches.is_empty() {
                ", trials.csv byte-identical".to_string()
            } else {
                format!("; differing: {}", mismatches.join(", "))
            }
        ),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        (
            "c1",
            "closed-form lattice spectrum vs dense eigensolve",
            c1_closed_form,
        ),
        ("c2", "circulant spectrum vs dense eigensolve", c2_circulant),
        ("c3", "zero mode and spectral range", c3_zero_mode_and_range),
        (
            "c4",
            "thermodynamic L³ bound, n=4096, 20 seeds",
            c4_thermodynamic_bound,
        ),
        ("c5", "connectivity L³ trend over n", c5_connectivity_trend),
        ("c6", "lattice eigenvalue mass near one", c6_dirac_at_one),
        (
            "c7",
            "Lévy distance vs grid oracle and metric axioms",
            c7_levy_metric,
        ),
        ("c8", "fig2b curves, lattice vs analytic KS", c8_fig2b),
        ("c9", "determinism of trials.csv", c9_determinism),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .map(|a| a.to_lowercase())
        .collect();
    let mut failed = Vec::new();
    for (id, name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == id) {
            continue;
        }
        let start = Instant::now();
        let result = run();
        let verdict = if result.pass { "PASS" } else { "FAIL" };
        println!(
            "{verdict} {id} {name}: {} [{:.1}s]",
            result.detail,
            start.elapsed().as_secs_f64()
        );
        if !result.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed {}", failed.join(", "));
        std::process::exit(1);
    }
}
