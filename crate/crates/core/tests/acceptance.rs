//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use hermitia::analysis::{chen_nie_membership, constancy_test, nonbalanced_btp_feasible_params, scan_parameters, FeasibleSet, ScanConfig};
use hermitia::curvature::{curvature_d, symmetrize, verify_identities, vw_terms, CurvatureKind};
use hermitia::lie_hermitian::{self as lh, catalog, StructureConstants};
use hermitia::models::*;
use hermitia::{ConnectionParams, CurvatureTensor};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn two_step(idx: u64) -> StructureConstants {
    let n = 2 + (idx % 3) as usize;
    let m = 1 + (idx / 3 % (n as u64 - 1)) as usize;
    lh::random_two_step(n, m, 1000 + idx).unwrap()
}

fn catalog_entries() -> Vec<(String, StructureConstants)> {
    let mut out: Vec<(String, StructureConstants)> = (2..=4).map(|n| (format!("abelian_{n}"), catalog::abelian(n))).collect();
    for name in catalog::NAMES.iter().filter(|&&n| n != "abelian") {
        out.push((name.to_string(), catalog::catalog(name, None).unwrap()));
    }
    out
}

fn identity_suite() -> Outcome {
    let start = Instant::now();
    let params: Vec<ConnectionParams> = ConnectionParams::special_points().into_iter().map(|(_, p)| p).collect();
    let mut cases = catalog_entries();
    cases.extend((0..50).map(|i| (format!("two_step_{i}"), two_step(i))));
    let mut worst: f64 = 0.0;
    for (name, sc) in &cases {
        let rep = verify_identities(sc, &params, 1e-8).map_err(|e| format!("{name}: {e}"))?;
        ensure(rep.ok, || format!("{name}: residual {:e}", rep.max_residual()))?;
        worst = worst.max(rep.max_residual());
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs <= 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!("{} algebras x {} params, max residual {worst:.2e}, {secs:.2}s", cases.len(), params.len()))
}

fn d_squared_vs_jacobi() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let sc = if i < 50 { two_step(i) } else { lh::random_two_step(5, 2 + (i % 2) as usize, i).unwrap() };
        ensure(lh::validate(&sc, 1e-9).ok, || format!("valid instance {i} rejected"))?;
        worst = worst.max(lh::d_squared_defect(&sc));
    }
    ensure(worst <= 1e-10, || format!("valid max |d²| = {worst:e}"))?;
    for seed in 0..20 {
        let sc = catalog::random_dense_units(2 + (seed % 3) as usize, seed);
        let jac = lh::validate(&sc, 1e-9).max_residual();
        let dd = lh::d_squared_defect(&sc);
        ensure(jac > 1e-6 && dd > 1e-6, || format!("fuzzed seed {seed}: jacobi {jac:e}, d² {dd:e}"))?;
    }
    Ok(format!("valid max |d²| = {worst:.1e}; 20 fuzzed instances flagged by both"))
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> HopfPoint {
    let z = (0..n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    HopfPoint::new(z).unwrap()
}

fn random_params(rng: &mut ChaCha8Rng) -> ConnectionParams {
    loop {
        if let Ok(p) = ConnectionParams::new(rng.random_range(-4.0..4.0), rng.random_range(-3.0..3.0)) {
            return p;
        }
    }
}

fn hopf_closed_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut ea, mut eb, mut ec): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for n in 2..=4 {
        for _ in 0..100 {
            let pt = random_point(&mut rng, n);
            let params = random_params(&mut rng);
            let t = hopf_torsion(&pt);
            let rc_hat = symmetrize(&hopf_chern_curvature(&pt));
            let v_hat = CurvatureTensor::from_fn(n, CurvatureKind::Model, |i, j, k, l| vw_terms(&t, i, j, k, l).v_hat);
            ea = ea.max(4.0 * v_hat.max_diff(&rc_hat));
            let rd = hopf_curvature_d(&pt, params);
            let mu = params.t() * params.t() + 0.25 * params.s() * params.s();
            let scaled = CurvatureTensor::from_fn(n, CurvatureKind::Model, |i, j, k, l| rc_hat.get(i, j, k, l) * (1.0 - mu));
            eb = eb.max(symmetrize(&rd).max_diff(&scaled));
            ec = ec.max(hopf_curvature_d_assembled(&pt, params).max_diff(&rd));
        }
    }
    ensure(ea <= 1e-10 && eb <= 1e-10 && ec <= 1e-10, || format!("(a) {ea:e} (b) {eb:e} (c) {ec:e}"))?;
    Ok(format!("300 samples: (a) {ea:.1e} (b) {eb:.1e} (c) {ec:.1e}"))
}

fn hopf_flatness_and_hsc() -> Outcome {
    let flat = hopf_flat_params(2).map_err(|e| e.to_string())?;
    ensure(flat == vec![(-1.0, 0.0), (-1.0, 2.0), (1.0 / 3.0, -2.0)], || format!("n = 2 flat set {flat:?}"))?;
    for n in 3..=6 {
        let f = hopf_flat_params(n).map_err(|e| e.to_string())?;
        ensure(f.is_empty(), || format!("n = {n} flat set {f:?}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut on = 0;
    while on < 20 {
        let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let (t, s) = (theta.cos(), 2.0 * theta.sin());
        if (s - 1.0).abs() < 1e-3 {
            continue;
        }
        let params = ConnectionParams::new((2.0 * t - 1.0) / (s - 1.0), s).unwrap();
        let n = 2 + on % 3;
        let rep = hopf_hsc_report(&random_point(&mut rng, n), params, 1e-9).map_err(|e| e.to_string())?;
        ensure(rep.constant && rep.c.is_some_and(|c| c.abs() <= 1e-9), || format!("Γ point {params:?}: {rep:?}"))?;
        on += 1;
    }
    let mut off = 0;
    while off < 20 {
        let params = random_params(&mut rng);
        if (params.chen_nie_value() - 1.0).abs() < 1e-2 {
            continue;
        }
        let n = 2 + off % 3;
        let mut z = vec![Complex64::new(0.0, 0.0); n];
        z[1] = Complex64::new(1.0, 0.0);
        let rep = hopf_hsc_report(&HopfPoint::new(z).unwrap(), params, 1e-9).map_err(|e| e.to_string())?;
        ensure(!rep.constant && rep.witness.abs() >= 1e-3, || format!("off-Γ point {params:?}: {rep:?}"))?;
        off += 1;
    }
    Ok("flat sets exact; 20 Γ points constant c = 0; 20 off-Γ points non-constant".into())
}

fn chen_nie() -> Outcome {
    for (r, s) in [(-1.0, 0.0), (3.0, 0.0), (-1.0, 2.0), (1.0 / 3.0, -2.0)] {
        ensure(chen_nie_membership(r, s, 1e-9), || format!("({r}, {s}) should be on Γ"))?;
    }
    for (r, s) in [(1.0, 0.0), (0.0, 1.0), (0.0, 0.0)] {
        ensure(!chen_nie_membership(r, s, 1e-9), || format!("({r}, {s}) should be off Γ"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for trial in 0..50 {
        let len = 1 + trial % 4;
        let a: Vec<Complex64> = (0..len).map(|_| Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))).collect();
        let set = nonbalanced_btp_feasible_params(&a, 1e-9).map_err(|e| e.to_string())?;
        match set {
            FeasibleSet::Constrained { c, mu, .. } => {
                ensure(c.abs() <= 1e-12 && (mu - 1.0).abs() <= 1e-12, || format!("a = {a:?}: c = {c}, μ = {mu}"))?;
            }
            FeasibleSet::Balanced => return Err(format!("a = {a:?} treated as balanced")),
        }
        for _ in 0..10 {
            let p = random_params(&mut rng);
            ensure(set.contains(p, 1e-9) == chen_nie_membership(p.r(), p.s(), 1e-9), || format!("{p:?} disagrees with Γ"))?;
        }
        let named = ConnectionParams::bismut();
        ensure(set.contains(named, 1e-9), || "Bismut must be feasible".into())?;
    }
    Ok("membership table correct; 50 a-vectors give c = 0 on exactly Γ".into())
}

fn btp_threefolds() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let close = |a: Complex64, b: f64| (a - Complex64::new(b, 0.0)).norm() <= 1e-12;
    for _ in 0..10 {
        let b = rng.random_range(-2.0..2.0);
        let p = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let q = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let rb = wallach_rb(&WallachPattern { b, p, q });
        ensure(
            close(rb.get(0, 0, 0, 0), 2.0) && close(rb.get(1, 1, 1, 1), 1.0 - b) && close(rb.get(0, 0, 1, 1), 1.0) && close(rb.get(1, 1, 2, 2), b),
            || format!("wallach pattern b = {b}"),
        )?;
        let x = rng.random_range(-2.0..2.0);
        let rb = middle_type_rb(&MiddleTypePattern { x, y: rng.random_range(-2.0..2.0) });
        ensure(close(rb.get(0, 0, 0, 0), x) && close(rb.get(2, 2, 2, 2), 0.0) && close(rb.get(0, 0, 1, 1), x), || format!("middle pattern x = {x}"))?;
    }
    let rs = [-1.0, -1.0 / 3.0, 0.0, 1.0, 3.0];
    let ss = [-2.0, -1.0, 0.0, 0.5, 2.0];
    for &r in &rs {
        for &s in &ss {
            let params = ConnectionParams::new(r, s).unwrap();
            for case in [Btp3Case::Rank3, Btp3Case::Wallach, Btp3Case::Middle] {
                let v = btp3_constancy_analysis(case, params, 1.0, 1e-9).map_err(|e| e.to_string())?;
                let ok = match (case, &v.outcome) {
                    (Btp3Case::Rank3, Btp3Outcome::Consistent { c }) => r == 1.0 && s == 0.0 && *c == 0.0,
                    (Btp3Case::Rank3, Btp3Outcome::Infeasible { .. }) => !(r == 1.0 && s == 0.0),
                    (_, Btp3Outcome::Infeasible { .. }) => true,
                    _ => false,
                };
                ensure(ok, || format!("{case:?} at ({r}, {s}): {:?}", v.outcome))?;
            }
        }
    }
    Ok("pattern read-offs exact; rank3 consistent only at (1, 0); wallach and middle infeasible on 25 points".into())
}

fn constant_rows(sc: &StructureConstants) -> Result<Vec<(f64, f64, f64)>, String> {
    let rows = scan_parameters(sc, &ScanConfig::default()).map_err(|e| e.to_string())?;
    Ok(rows.iter().filter(|r| r.hsc.constant).map(|r| (r.r, r.s, r.hsc.c)).collect())
}

fn nilpotent_scan() -> Outcome {
    let kt = constant_rows(&catalog::kodaira_thurston())?;
    ensure(kt.is_empty(), || format!("kodaira_thurston constant rows {kt:?}"))?;
    for seed in 0..10 {
        let sc = lh::random_two_step(3 + (seed % 2) as usize, 2, 2000 + seed).unwrap();
        ensure(!sc.is_abelian(1e-9) && lh::check_nilpotent_j(&sc), || format!("instance {seed} is not a test case"))?;
        let rows = constant_rows(&sc)?;
        ensure(rows.is_empty(), || format!("random instance {seed} constant rows {rows:?}"))?;
    }
    let iw = constant_rows(&catalog::iwasawa())?;
    ensure(iw == vec![(1.0, 0.0, 0.0)], || format!("iwasawa constant rows {iw:?}"))?;
    Ok("kodaira_thurston and 10 random instances: none; iwasawa: only (1, 0) with c = 0".into())
}

fn frame_invariance() -> Outcome {
    let params = [ConnectionParams::chern(), ConnectionParams::bismut(), ConnectionParams::levi_civita(), ConnectionParams::new(0.4, -0.7).unwrap()];
    let mut cases = catalog_entries();
    cases.extend((0..5).map(|i| (format!("two_step_{i}"), two_step(i))));
    let mut worst: f64 = 0.0;
    for (name, sc) in &cases {
        let n = sc.n();
        let base: Vec<_> = params.iter().map(|&p| constancy_test(&symmetrize(&curvature_d(sc, p).unwrap()), 1e-9)).collect();
        for seed in 0..20 {
            let u = lh::random_unitary(n, seed);
            let moved = lh::change_frame(sc, &u, 1e-9).map_err(|e| format!("{name}: {e}"))?;
            for (p, b) in params.iter().zip(&base) {
                let v = constancy_test(&symmetrize(&curvature_d(&moved, *p).unwrap()), 1e-9);
                ensure(v.constant == b.constant, || format!("{name} seed {seed} {p:?}: verdict changed"))?;
                if b.constant {
                    worst = worst.max((v.c - b.c).abs());
                }
            }
        }
    }
    ensure(worst <= 1e-8, || format!("c moved by {worst:e}"))?;
    Ok(format!("{} algebras x 20 frames; max c shift {worst:.1e}", cases.len()))
}

fn run_cli(args: &[&str], seed: Option<&str>) -> std::process::Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hermitia"));
    cmd.args(args).current_dir(env!("CARGO_MANIFEST_DIR"));
    match seed {
        Some(s) => cmd.env("HERMITIA_SEED", s),
        None => cmd.env_remove("HERMITIA_SEED"),
    };
    cmd.output().expect("binary runs")
}

fn cli_determinism() -> Outcome {
    let fixture = |name: &str| PathBuf::from("tests/fixtures").join(name).display().to_string();
    let iw = fixture("iwasawa.json");
    let kt = fixture("kodaira_thurston.json");
    let runs: Vec<Vec<String>> = vec![
        vec!["validate".into(), iw.clone()],
        vec!["curvature".into(), iw.clone(), "--connection".into(), "bismut".into()],
        vec!["curvature".into(), kt.clone(), "--connection".into(), "general".into(), "--r".into(), "0.5".into(), "--s".into(), "-1".into(), "--format".into(), "csv".into()],
        vec!["scan".into(), kt.clone(), "--step".into(), "0.5".into()],
        vec!["hopf".into(), "--n".into(), "3".into(), "--r".into(), "-1".into(), "--s".into(), "0".into(), "--report".into()],
        vec!["btp3".into(), "--case".into(), "wallach".into(), "--r".into(), "0".into(), "--s".into(), "0".into()],
    ];
    for args in &runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = run_cli(&args, Some("7"));
        let b = run_cli(&args, Some("7"));
        ensure(a.status.code() == Some(0), || format!("{args:?} exited {:?}: {}", a.status.code(), String::from_utf8_lossy(&a.stderr)))?;
        ensure(a.stdout == b.stdout && !a.stdout.is_empty(), || format!("{args:?} output differs between runs"))?;
    }
    let codes = [
        (vec!["curvature", iw.as_str(), "--connection", "general", "--r", "2", "--s", "1"], 1),
        (vec!["validate", "tests/fixtures/invalid.json"], 1),
        (vec!["validate", "tests/fixtures/missing_n.json"], 2),
        (vec!["validate", "tests/fixtures/does_not_exist.json"], 2),
        (vec!["curvature", iw.as_str()], 2),
        (vec!["hopf", "--n", "2", "--z", "1,x", "--r", "0", "--s", "0", "--report"], 2),
    ];
    for (args, want) in &codes {
        let out = run_cli(args, None);
        ensure(out.status.code() == Some(*want), || format!("{args:?} exited {:?}, expected {want}", out.status.code()))?;
    }
    Ok(format!("{} commands byte-identical across runs; {} exit-code paths", runs.len(), codes.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("identity suite", identity_suite),
        ("d² = 0 iff Jacobi", d_squared_vs_jacobi),
        ("Hopf closed forms", hopf_closed_forms),
        ("Hopf flatness and HSC", hopf_flatness_and_hsc),
        ("Chen-Nie curve", chen_nie),
        ("BTP threefold patterns", btp_threefolds),
        ("nilpotent scan", nilpotent_scan),
        ("frame invariance", frame_invariance),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (idx, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {} {name}: {detail}", idx + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", idx + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
