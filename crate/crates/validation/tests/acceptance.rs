//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero when any criterion fails. Every criterion runs even when
//! an earlier one fails.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use dla_cli::analyze::{cmd_analyze, LadderKind, Results};
use dla_cli::config::{Analysis, Engine, ExperimentConfig};
use dla_cli::grow::{cmd_grow, SNAPSHOT_FILE};
use dla_cli::report::{cmd_report, Column};
use dla_cli::snapshot::Snapshot;
use dla_core::analysis::{
    box_count, extract_interface, fit_dimension, generate_fixture, scaling_window, FixtureKind,
    Ladder, PointSet,
};
use dla_core::dbm::{run_dbm, run_dbm_observed, solve_laplace, DbmParams, PotentialGrid, SiteKind};
use dla_core::walker::{grow, WalkerParams};
use dla_core::{Cluster, RngSeed};
use rand::Rng;

use dla_validation as tolerance;

const SEEDS_2D: [u64; 5] = [1, 2, 3, 4, 5];
const SEED: u64 = 1;
const DBM_SIZE: usize = 3000;

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

/// `grow --engine walker --dim <dim> --n <n> --seed <seed> --out <dir>`.
fn grow_cmd(dim: usize, n: usize, seed: u64, out: &Path) -> Result<String, String> {
    let cfg = ExperimentConfig {
        engine: Engine::Walker,
        dim,
        n_particles: n,
        seed,
        output_dir: out.to_path_buf(),
        ..Default::default()
    };
    cmd_grow(&cfg, false).map_err(|e| e.to_string())
}

/// `analyze <snapshot> ... --out <dir>`, returning the path of results.json.
fn analyze_cmd(run: &Path, analyses: &[Analysis]) -> Result<PathBuf, String> {
    let out = run.join("analysis");
    cmd_analyze(&run.join(SNAPSHOT_FILE), analyses, LadderKind::Dyadic, &out)
        .map_err(|e| e.to_string())?;
    Ok(out.join("results.json"))
}

fn estimate(results: &Results, wanted: Analysis) -> Option<(f64, f64)> {
    results
        .find(|a| *a == wanted)
        .map(|r| (r.estimate.d, r.estimate.stderr))
}

fn criterion_1(work: &Path) -> Result<Outcome, String> {
    let mut ds = Vec::new();
    for seed in SEEDS_2D {
        let run = work.join(format!("dla2d-{seed}"));
        grow_cmd(2, 20_000, seed, &run)?;
        let path = analyze_cmd(&run, &[Analysis::Rgdim])?;
        let results = Results::load(&path).map_err(|e| e.to_string())?;
        let (d, _) = estimate(&results, Analysis::Rgdim).ok_or("no rgdim estimate")?;
        ds.push(d);
    }
    let mean = ds.iter().sum::<f64>() / ds.len() as f64;
    let first = ds[0];
    let per_seed: Vec<String> = SEEDS_2D
        .iter()
        .zip(&ds)
        .map(|(s, d)| format!("{s}:{d:.3}"))
        .collect();
    let pass = (first - tolerance::DLA_2D_TARGET).abs() <= tolerance::DLA_2D_SINGLE
        && (mean - tolerance::DLA_2D_TARGET).abs() <= tolerance::DLA_2D_MEAN;
    Ok(outcome(
        pass,
        format!(
            "seed {SEED} D={first:.3} (1.70±0.06), seed mean D={mean:.3} (1.70±0.04) [{}]",
            per_seed.join(" ")
        ),
    ))
}

/// Grows the shared 3D cluster once and analyses both codimensions.
fn grow_3d(work: &Path) -> Result<PathBuf, String> {
    let run = work.join("dla3d");
    grow_cmd(3, 100_000, SEED, &run)?;
    analyze_cmd(
        &run,
        &[
            Analysis::Slicedim {
                codim: 1,
                n_slices: 10,
            },
            Analysis::Slicedim {
                codim: 2,
                n_slices: 10,
            },
        ],
    )
}

fn slicing(results: &Path, codim: usize) -> Result<(f64, f64), String> {
    let res = Results::load(results).map_err(|e| e.to_string())?;
    estimate(
        &res,
        Analysis::Slicedim {
            codim,
            n_slices: 10,
        },
    )
    .ok_or(format!("no codim-{codim} estimate"))
}

fn criterion_2(results: &Path) -> Result<Outcome, String> {
    let (d, se) = slicing(results, 1)?;
    Ok(outcome(
        (d - tolerance::DLA_3D_TARGET).abs() <= tolerance::DLA_3D,
        format!("planar-slicing D={d:.3}±{se:.3} (2.41±0.12)"),
    ))
}

fn criterion_3(results: &Path) -> Result<Outcome, String> {
    let (d1, _) = slicing(results, 1)?;
    let (d2, _) = slicing(results, 2)?;
    let gap = (d1 - d2).abs();
    Ok(outcome(
        gap <= tolerance::CODIM_AGREEMENT,
        format!("codim-1 D={d1:.3}, codim-2 D={d2:.3}, |gap|={gap:.3} (<=0.15)"),
    ))
}

fn criterion_4(results: &Path, work: &Path) -> Result<Outcome, String> {
    let (report, text) = cmd_report(&[results.to_path_buf()], Some(&work.join("report")))
        .map_err(|e| e.to_string())?;
    let row = |flow: &str, column: Column| {
        report
            .rows
            .iter()
            .find(|r| r.flow == flow && r.column == column)
            .cloned()
            .expect("reference row")
    };
    let bl = row("Boundary layer", Column::Planar);
    let ml = row("Mixing layer", Column::Linear);
    let absent = [
        row("Plane wake", Column::Planar),
        row("Mixing layer", Column::Planar),
    ];
    let dashes = absent
        .iter()
        .all(|r| r.reference.is_none() && r.within.is_none())
        && ["Plane wake", "Mixing layer"].iter().all(|flow| {
            text.lines()
                .any(|l| l.starts_with(flow) && l.contains("2-D slicing") && l.contains('—'))
        });
    let pass = bl.within == Some(true) && ml.within == Some(true) && dashes;
    let show = |r: &dla_cli::report::ComparisonRow| {
        format!(
            "|Δ|={:.3} vs tol {:.3} -> {}",
            r.delta.unwrap_or(f64::NAN).abs(),
            r.tolerance,
            if r.within == Some(true) {
                "within"
            } else {
                "outside"
            }
        )
    };
    Ok(outcome(
        pass,
        format!(
            "Boundary layer 2-D (2.38): {}; Mixing layer 1-D (2.40): {}; absent cells rendered as —: {}",
            show(&bl),
            show(&ml),
            dashes
        ),
    ))
}

fn criterion_5() -> Result<Outcome, String> {
    let cases = [
        (FixtureKind::CantorDust1D, 10, tolerance::FRACTAL),
        (FixtureKind::SierpinskiCarpet2D, 6, tolerance::FRACTAL),
        (FixtureKind::MengerSponge3D, 4, tolerance::FRACTAL),
        (FixtureKind::FilledSquare, 9, tolerance::EUCLIDEAN),
        (FixtureKind::LatticeLine, 12, tolerance::EUCLIDEAN),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (kind, depth, tol) in cases {
        let set = generate_fixture(kind, depth).map_err(|e| e.to_string())?;
        let series = box_count(&set, &kind.matched_ladder(depth)).map_err(|e| e.to_string())?;
        let est = fit_dimension(&series, (1.0, f64::INFINITY)).map_err(|e| e.to_string())?;
        let target = kind.similarity_dimension();
        pass &= (est.d - target).abs() <= tol;
        parts.push(format!("{kind:?} {:.4}/{target:.4}", est.d));
    }
    Ok(outcome(pass, parts.join(", ")))
}

fn criterion_6() -> Result<Outcome, String> {
    let (r0, r1) = (10.0f64, 40.0f64);
    let mut annulus = PotentialGrid::lattice_shell(2, r0, r1).map_err(|e| e.to_string())?;
    solve_laplace(&mut annulus, 1.8, tolerance::SOLVER_TOL, 100_000).map_err(|e| e.to_string())?;
    let mut err_2d = 0.0f64;
    for (pt, kind, u) in annulus.sites() {
        let r = pt.norm();
        if kind == SiteKind::Interior && (5.0..=38.0).contains(&r) {
            err_2d = err_2d.max((u - (r / r0).ln() / (r1 / r0).ln()).abs());
        }
    }
    let (s0, s1) = (8.0f64, 32.0f64);
    let mut shell = PotentialGrid::lattice_shell(3, s0, s1).map_err(|e| e.to_string())?;
    solve_laplace(&mut shell, 1.8, tolerance::SOLVER_TOL, 100_000).map_err(|e| e.to_string())?;
    let mut err_3d = 0.0f64;
    for (pt, kind, u) in shell.sites() {
        if kind == SiteKind::Interior {
            let r = pt.norm();
            err_3d = err_3d.max((u - (1.0 / s0 - 1.0 / r) / (1.0 / s0 - 1.0 / s1)).abs());
        }
    }
    Ok(outcome(
        err_2d <= tolerance::ANNULUS && err_3d <= tolerance::SHELL,
        format!("annulus max error {err_2d:.4} (<=0.02), shell max error {err_3d:.4} (<=0.03)"),
    ))
}

fn dbm_params(k: f64) -> DbmParams {
    DbmParams {
        dim: 2,
        n_particles: DBM_SIZE,
        eta: 1.0,
        k,
        seed: RngSeed(SEED),
        ..Default::default()
    }
}

fn criterion_7(reference: &Cluster) -> Result<Outcome, String> {
    let (scaled, _) = run_dbm(&dbm_params(10.0)).map_err(|e| e.to_string())?;
    let first_diff = reference
        .order()
        .iter()
        .zip(scaled.order())
        .position(|(a, b)| a != b);
    let same = reference.order() == scaled.order();
    Ok(outcome(
        same,
        match first_diff {
            None if same => format!(
                "{} sites, identical order for k=1 and k=10",
                reference.len()
            ),
            None => "cluster sizes differ".into(),
            Some(i) => format!("orders diverge at site {i}"),
        },
    ))
}

fn box_dimension(cluster: &Cluster) -> Result<(f64, f64), String> {
    let interface = extract_interface(cluster);
    let ladder = Ladder::dyadic_up_to(1024);
    let window = scaling_window(&ladder, interface.radius_of_gyration());
    let series = box_count(&interface, &ladder).map_err(|e| e.to_string())?;
    let est = fit_dimension(&series, window).map_err(|e| e.to_string())?;
    Ok((est.d, est.stderr))
}

fn criterion_8(dbm: &Cluster) -> Result<Outcome, String> {
    let (walker, _) = grow(&WalkerParams {
        dim: 2,
        n_particles: DBM_SIZE,
        seed: RngSeed(SEED),
        ..Default::default()
    })
    .map_err(|e| e.to_string())?;
    let (d_dbm, _) = box_dimension(dbm)?;
    let (d_walker, _) = box_dimension(&walker)?;
    let gap = (d_dbm - d_walker).abs();
    Ok(outcome(
        gap <= tolerance::CROSS_ENGINE,
        format!("DBM D={d_dbm:.3}, walker D={d_walker:.3}, |gap|={gap:.3} (<=0.1)"),
    ))
}

fn criterion_9() -> Result<Outcome, String> {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut check = |ok: bool, what: String| {
        if !ok {
            failures.push(what);
        }
    };

    // Connectivity and determinism of both engines.
    for seed in 0..6u64 {
        for dim in [2, 3] {
            let wp = WalkerParams {
                dim,
                n_particles: 400,
                seed: RngSeed(seed),
                ..Default::default()
            };
            let (a, _) = grow(&wp).map_err(|e| e.to_string())?;
            let (b, _) = grow(&wp).map_err(|e| e.to_string())?;
            check(
                a.is_connected(),
                format!("walker dim={dim} seed={seed} disconnected"),
            );
            check(
                a == b,
                format!("walker dim={dim} seed={seed} not reproducible"),
            );
        }
    }
    // Maximum principle after every solve, plus DBM connectivity/determinism.
    for dim in [2, 3] {
        let params = DbmParams {
            dim,
            n_particles: 80,
            seed: RngSeed(dim as u64),
            ..Default::default()
        };
        let mut violations = 0usize;
        let (a, _) = run_dbm_observed(&params, |_, grid, _| {
            let (lo, hi) = grid
                .sites()
                .filter(|(_, k, _)| *k != SiteKind::Exterior)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, _, u)| {
                    (lo.min(u), hi.max(u))
                });
            if lo != 0.0 || hi != 1.0 {
                violations += 1;
            }
        })
        .map_err(|e| e.to_string())?;
        let (b, _) = run_dbm(&params).map_err(|e| e.to_string())?;
        check(
            violations == 0,
            format!("dbm dim={dim}: {violations} solves break 0<=u<=1"),
        );
        check(a.is_connected(), format!("dbm dim={dim} disconnected"));
        check(a == b, format!("dbm dim={dim} not reproducible"));
    }
    // Box-count bounds and monotonicity on random point sets.
    let mut rng = RngSeed(2024).rng();
    for trial in 0..200 {
        let dim = rng.random_range(1..=3usize);
        let n = rng.random_range(1..500usize);
        let pts = (0..n)
            .map(|_| {
                let c: Vec<i32> = (0..dim).map(|_| rng.random_range(-300..300)).collect();
                dla_core::LatticePoint::from_slice(&c).unwrap()
            })
            .collect();
        let set = PointSet::new(dim, pts).map_err(|e| e.to_string())?;
        for ladder in [Ladder::dyadic_up_to(512), Ladder::ternary_up_to(729)] {
            let s = box_count(&set, &ladder).map_err(|e| e.to_string())?;
            let bounded = s
                .samples
                .iter()
                .all(|x| x.count >= 1 && x.count <= set.len())
                && s.samples[0].count == set.len();
            let monotone = s.samples.windows(2).all(|w| w[1].count <= w[0].count);
            check(bounded && monotone, format!("box counts trial {trial}"));
        }
    }
    // Snapshot round trip.
    for seed in 0..5u64 {
        let (cluster, _) = grow(&WalkerParams {
            dim: 2 + (seed as usize % 2),
            n_particles: 999,
            seed: RngSeed(seed),
            ..Default::default()
        })
        .map_err(|e| e.to_string())?;
        let snap = Snapshot { seed, cluster };
        let back = Snapshot::parse(&snap.to_text()).map_err(|e| e.to_string())?;
        check(
            back == snap,
            format!("snapshot seed={seed} did not round-trip"),
        );
    }

    let elapsed = start.elapsed();
    let in_budget = elapsed <= Duration::from_secs(tolerance::PROPERTY_BUDGET_SECS);
    let pass = failures.is_empty() && in_budget;
    Ok(outcome(
        pass,
        if failures.is_empty() {
            format!(
                "all properties hold in {:.1}s (<=60s)",
                elapsed.as_secs_f64()
            )
        } else {
            format!("{} failures: {}", failures.len(), failures.join("; "))
        },
    ))
}

fn main() {
    let work = tempfile::TempDir::new().expect("temp dir");
    let dir = work.path();
    let mut failed = 0;
    let mut report = |id: u32, name: &str, started: Instant, result: Result<Outcome, String>| {
        let secs = started.elapsed().as_secs_f64();
        let (pass, detail) = match result {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {id} [{name}]: {} ({secs:.1}s) {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
    };

    let t = Instant::now();
    report(1, "2D DLA dimension", t, criterion_1(dir));

    let t = Instant::now();
    let shared = grow_3d(dir);
    let grown = t.elapsed();
    match &shared {
        Ok(results) => {
            report(
                2,
                "3D DLA planar-slicing dimension",
                t,
                criterion_2(results),
            );
            let t = Instant::now();
            report(
                3,
                "codim-1/codim-2 slicing consistency",
                t,
                criterion_3(results),
            );
            let t = Instant::now();
            report(4, "comparison report", t, criterion_4(results, dir));
        }
        Err(e) => {
            for (id, name) in [
                (2, "3D DLA planar-slicing dimension"),
                (3, "codim-1/codim-2 slicing consistency"),
                (4, "comparison report"),
            ] {
                report(id, name, t, Err(e.clone()));
            }
        }
    }
    println!("  (3D growth and slicing took {:.1}s)", grown.as_secs_f64());

    let t = Instant::now();
    report(5, "estimator oracle suite", t, criterion_5());
    let t = Instant::now();
    report(6, "Laplace solver correctness", t, criterion_6());

    let t = Instant::now();
    match run_dbm(&dbm_params(1.0)) {
        Ok((reference, _)) => {
            report(7, "k-invariance", t, criterion_7(&reference));
            let t = Instant::now();
            report(8, "cross-engine agreement", t, criterion_8(&reference));
        }
        Err(e) => {
            report(7, "k-invariance", t, Err(e.to_string()));
            report(8, "cross-engine agreement", t, Err(e.to_string()));
        }
    }

    let t = Instant::now();
    report(9, "property suite", t, criterion_9());

    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
