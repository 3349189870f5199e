//! Holomorphic sectional curvature, the (r, s)-plane scan and the
//! constraint arithmetic for BTP manifolds with constant HSC.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::connections::ConnectionParams;
use crate::curvature::{check_flat, symmetrize, vw_terms, CurvatureDFamily, CurvatureTensor};
use crate::error::{Error, Result};
use crate::lie_hermitian::{StructureConstants, TorsionTensor};

/// Default tolerance for constancy and curve membership.
pub const DEFAULT_TOL: f64 = 1e-9;

/// H(X) = R(X, X̄, X, X̄) / |X|⁴.
pub fn hsc(rt: &CurvatureTensor, x: &[Complex64]) -> Result<f64> {
    let n = rt.n();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len() });
    }
    let norm2: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    if norm2 == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mut acc = Complex64::default();
    for i in 0..n {
        for j in 0..n {
            let ij = x[i] * x[j].conj();
            if ij == Complex64::default() {
                continue;
            }
            for k in 0..n {
                for l in 0..n {
                    acc += rt.get(i, j, k, l) * ij * x[k] * x[l].conj();
                }
            }
        }
    }
    Ok(acc.re / (norm2 * norm2))
}

/// HSC at `count` random unit vectors with complex Gaussian components.
pub fn sample_hsc(rt: &CurvatureTensor, count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rt.n();
    (0..count)
        .map(|_| {
            let x: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
                .collect();
            hsc(rt, &x).expect("Gaussian samples are nonzero")
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HscVerdict {
    pub constant: bool,
    /// Mean of R̂_{i ī i ī}; the HSC value when `constant`.
    pub c: f64,
    pub max_residual: f64,
    /// 0-based index tuple where the residual is attained.
    pub witness: Option<[usize; 4]>,
    pub tol: f64,
}

/// Compares R̂ with (c/2)(δ_ij δ_kl + δ_il δ_kj), c the diagonal mean.
pub fn constancy_test(rt: &CurvatureTensor, tol: f64) -> HscVerdict {
    let hat = if rt.symmetrized { rt.clone() } else { symmetrize(rt) };
    let n = hat.n();
    let c = if n == 0 {
        0.0
    } else {
        (0..n).map(|i| hat.get(i, i, i, i).re).sum::<f64>() / n as f64
    };
    let mut worst = 0.0f64;
    let mut witness = None;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut model = 0.0;
                    if i == j && k == l {
                        model += 0.5 * c;
                    }
                    if i == l && k == j {
                        model += 0.5 * c;
                    }
                    let res = (hat.get(i, j, k, l) - model).norm();
                    if res > worst || (res.is_nan() && !worst.is_nan()) {
                        worst = res;
                        witness = Some([i, j, k, l]);
                    }
                }
            }
        }
    }
    HscVerdict {
        constant: worst <= tol,
        c,
        max_residual: worst,
        witness,
        tol,
    }
}

/// |(1 − r + rs)² + s² − 4| ≤ tol.
pub fn chen_nie_membership(r: f64, s: f64, tol: f64) -> bool {
    let a = 1.0 - r + r * s;
    (a * a + s * s - 4.0).abs() <= tol
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub step: f64,
    pub tol: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            r_min: -4.0,
            r_max: 4.0,
            s_min: -3.0,
            s_max: 3.0,
            step: 0.1,
            tol: DEFAULT_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub r: f64,
    pub s: f64,
    pub t: f64,
    pub on_chen_nie: bool,
    pub hsc: HscVerdict,
    pub flat: bool,
    /// Name of the special connection at this point, if any.
    pub label: Option<&'static str>,
}

const SNAP: f64 = 1e-9;

fn axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = ((hi - lo) / step + SNAP).floor() as usize;
    // rounding to 1e-9 turns 0.30000000000000004 into the literal 0.3
    (0..=count).map(|i| ((lo + i as f64 * step) * 1e9).round() / 1e9).collect()
}

/// Grid points in r-major order, excluding s = 1 except (0, 1), with the
/// named special points snapped or injected when they lie in range.
pub fn scan_points(cfg: &ScanConfig) -> Result<Vec<(ConnectionParams, Option<&'static str>)>> {
    let finite = [cfg.r_min, cfg.r_max, cfg.s_min, cfg.s_max, cfg.step, cfg.tol].iter().all(|x| x.is_finite());
    if !finite || cfg.step <= 0.0 || cfg.r_min > cfg.r_max || cfg.s_min > cfg.s_max || cfg.tol < 0.0 {
        return Err(Error::InvalidParameter(format!("bad scan configuration {cfg:?}")));
    }
    let rs = axis(cfg.r_min, cfg.r_max, cfg.step);
    let ss = axis(cfg.s_min, cfg.s_max, cfg.step);
    if rs.len().saturating_mul(ss.len()) > 10_000_000 {
        return Err(Error::InvalidParameter("scan grid larger than 10^7 points".into()));
    }
    let named = ConnectionParams::special_points();
    let mut used = vec![false; named.len()];
    let mut out = Vec::with_capacity(rs.len() * ss.len() + named.len());
    for &r in &rs {
        for &s in &ss {
            let mut point = (r, s, None);
            for (idx, (name, p)) in named.iter().enumerate() {
                if (p.r() - r).abs() < SNAP && (p.s() - s).abs() < SNAP {
                    point = (p.r(), p.s(), Some(*name));
                    used[idx] = true;
                }
            }
            if (point.1 - 1.0).abs() < SNAP && !(point.0 == 0.0 && point.1 == 1.0) {
                continue;
            }
            let p = if point.1 == 1.0 {
                ConnectionParams::levi_civita()
            } else {
                ConnectionParams::new(point.0, point.1)?
            };
            out.push((p, point.2));
        }
    }
    for (idx, (name, p)) in named.iter().enumerate() {
        let inside = p.r() >= cfg.r_min - SNAP && p.r() <= cfg.r_max + SNAP && p.s() >= cfg.s_min - SNAP && p.s() <= cfg.s_max + SNAP;
        if inside && !used[idx] {
            out.push((*p, Some(*name)));
        }
    }
    out.sort_by(|a, b| a.0.r().total_cmp(&b.0.r()).then(a.0.s().total_cmp(&b.0.s())));
    Ok(out)
}

/// One row per grid point; see [`scan_points`] for the grid.
pub fn scan_parameters(sc: &StructureConstants, cfg: &ScanConfig) -> Result<Vec<ScanRow>> {
    let points = scan_points(cfg)?;
    let family = CurvatureDFamily::new(sc)?;
    Ok(points
        .par_iter()
        .map(|&(p, label)| {
            let rd = family.at(p);
            ScanRow {
                r: p.r(),
                s: p.s(),
                t: p.t(),
                on_chen_nie: chen_nie_membership(p.r(), p.s(), cfg.tol),
                hsc: constancy_test(&rd, cfg.tol),
                flat: check_flat(&rd, cfg.tol),
                label,
            }
        })
        .collect())
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b { 1.0 } else { 0.0 }
}

/// R^b_{i j̄ k l̄} forced by constant HSC c of D on a BTP manifold.
#[allow(clippy::too_many_arguments)]
pub fn predict_rb_under_constancy(
    t: &TorsionTensor,
    params: ConnectionParams,
    c: f64,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
) -> Complex64 {
    let mu = params.t() * params.t() + 0.25 * params.s() * params.s();
    let v = vw_terms(t, i, j, k, l);
    0.5 * c * (delta(i, j) * delta(k, l) + delta(i, l) * delta(k, j)) - 0.5 * v.w + 0.25 * (mu - 3.0) * (v.v_ji + v.v_lk)
        + 0.25 * (mu + 1.0) * (v.v_li + v.v_jk)
}

/// Diagonal specialization R^b_{i ī k k̄} written with torsion moduli.
pub fn predict_rb_diagonal(t: &TorsionTensor, params: ConnectionParams, c: f64, i: usize, k: usize) -> f64 {
    let n = t.n();
    let mu = params.t() * params.t() + 0.25 * params.s() * params.s();
    let mut w = 0.0;
    let mut cross = Complex64::default();
    let mut side = 0.0;
    for r in 0..n {
        w += t.get(r, i, k).norm_sqr();
        cross += t.get(i, i, r) * t.get(k, k, r).conj();
        side += t.get(i, k, r).norm_sqr() + t.get(k, i, r).norm_sqr();
    }
    0.5 * c * (1.0 + delta(i, k)) - 0.5 * w + 0.5 * (mu - 3.0) * cross.re + 0.25 * (mu + 1.0) * side
}

/// Outcome of the non-balanced BTP constraint computation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum FeasibleSet {
    /// Every a_i vanishes; the hypothesis is vacuous and nothing is derived.
    Balanced,
    /// The HSC must be `c` and (r, s) must satisfy t² + s²/4 = `mu`.
    Constrained {
        c: f64,
        mu: f64,
        /// Smallest singular value of the 2-column system in (c, μ − 1).
        min_singular_value: f64,
    },
}

impl FeasibleSet {
    /// Whether `params` satisfies the derived constraint.
    pub fn contains(&self, params: ConnectionParams, tol: f64) -> bool {
        match self {
            FeasibleSet::Balanced => true,
            FeasibleSet::Constrained { mu, .. } => {
                (params.t() * params.t() + 0.25 * params.s() * params.s() - mu).abs() <= tol
            }
        }
    }
}

/// Admissible-frame torsion T^j_{i n} = δ_ij a_i, T^n_{ij} = 0 with n = a.len() + 1.
pub fn admissible_torsion(a: &[Complex64]) -> TorsionTensor {
    let n = a.len() + 1;
    let mut t = TorsionTensor::zeros(n);
    for (i, &ai) in a.iter().enumerate() {
        t.set(i, i, n - 1, ai);
    }
    t
}

/// The vanishing R̂^b_{i ī n n̄} gives 0 = (c/2)(1 + δ_in) + (μ − 1) v̂_{i ī n n̄}
/// for every i. The system is solved in (c, μ − 1); `lambda_check` is the
/// threshold below which every |a_i| counts as zero.
pub fn nonbalanced_btp_feasible_params(a: &[Complex64], lambda_check: f64) -> Result<FeasibleSet> {
    if a.is_empty() {
        return Err(Error::InvalidParameter("need at least one a_i (n ≥ 2)".into()));
    }
    if !lambda_check.is_finite() || lambda_check < 0.0 || a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidParameter("non-finite input".into()));
    }
    if a.iter().all(|z| z.norm() <= lambda_check) {
        return Ok(FeasibleSet::Balanced);
    }
    let t = admissible_torsion(a);
    let n = t.n();
    let m = DMatrix::<f64>::from_fn(n, 2, |i, col| {
        if col == 0 {
            0.5 * (1.0 + delta(i, n - 1))
        } else {
            vw_terms(&t, i, i, n - 1, n - 1).v_hat.re
        }
    });
    let svd = m.clone().svd(true, true);
    let smin = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
    if smin <= lambda_check * lambda_check * 0.25 {
        return Ok(FeasibleSet::Balanced);
    }
    // full column rank: the homogeneous system has only the zero solution
    let x = svd.solve(&nalgebra::DVector::zeros(n), 0.0).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(FeasibleSet::Constrained {
        c: x[0] + 0.0,
        mu: 1.0 + x[1],
        min_singular_value: smin,
    })
}
