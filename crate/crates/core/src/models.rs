//! Closed-form models: the standard Hopf manifold evaluated pointwise, and
//! the Bismut curvature patterns of balanced BTP threefolds.

use num_complex::Complex64;
use serde::Serialize;

use crate::analysis::{chen_nie_membership, constancy_test, predict_rb_diagonal, HscVerdict};
use crate::connections::{ConnectionParams, FormMatrix};
use crate::curvature::identities::identity_d_minus_chern;
use crate::curvature::{curvature_from_structure, symmetrize, CurvatureKind, CurvatureTensor, TorsionDerivatives, Which};
use crate::error::{Error, Result};
use crate::exterior::{Covector, Form};
use crate::lie_hermitian::{catalog, chern_torsion, TorsionTensor};

/// A point z ∈ ℂⁿ∖{0}, n ≥ 2, with the unitary frame e_i = |z| ∂_i.
#[derive(Clone, Debug, PartialEq)]
pub struct HopfPoint {
    z: Vec<Complex64>,
    norm: f64,
}

impl HopfPoint {
    pub fn new(z: Vec<Complex64>) -> Result<Self> {
        if z.len() < 2 {
            return Err(Error::InvalidParameter(format!("Hopf model needs n ≥ 2, got {}", z.len())));
        }
        if z.len() > crate::exterior::MAX_DIM {
            return Err(Error::InvalidParameter(format!("n = {} exceeds {}", z.len(), crate::exterior::MAX_DIM)));
        }
        if z.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coordinate".into()));
        }
        let norm = z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(HopfPoint { z, norm })
    }

    /// The coordinate vector e_i (0-based).
    pub fn basis(n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        let mut z = vec![Complex64::default(); n];
        z[i] = Complex64::new(1.0, 0.0);
        Self::new(z)
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn z(&self) -> &[Complex64] {
        &self.z
    }

    /// z̄_a z_b / |z|².
    fn zz(&self, a: usize, b: usize) -> Complex64 {
        self.z[a].conj() * self.z[b] / (self.norm * self.norm)
    }
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b { 1.0 } else { 0.0 }
}

/// T^j_{ik} = (z̄_k δ_ij − z̄_i δ_kj) / |z|.
pub fn hopf_torsion(pt: &HopfPoint) -> TorsionTensor {
    let n = pt.n();
    let mut t = TorsionTensor::zeros(n);
    for j in 0..n {
        for i in 0..n {
            for k in (i + 1)..n {
                let v = (pt.z[k].conj() * delta(i, j) - pt.z[i].conj() * delta(k, j)) / pt.norm;
                t.set(j, i, k, v);
            }
        }
    }
    t
}

/// R^c_{i j̄ k l̄} = δ_ij δ_kl − z̄_i z_j δ_kl / |z|².
pub fn hopf_chern_curvature(pt: &HopfPoint) -> CurvatureTensor {
    CurvatureTensor::from_fn(pt.n(), CurvatureKind::Chern, |i, j, k, l| {
        (Complex64::new(delta(i, j), 0.0) - pt.zz(i, j)) * delta(k, l)
    })
}

/// Closed form of R^D at the point.
pub fn hopf_curvature_d(pt: &HopfPoint, params: ConnectionParams) -> CurvatureTensor {
    let t = params.t();
    let q = 0.25 * params.s() * params.s();
    CurvatureTensor::from_fn(pt.n(), CurvatureKind::General(params), |i, j, k, l| {
        let b_ij = pt.zz(i, j) * delta(k, l);
        let b_il = pt.zz(i, l) * delta(k, j);
        let b_kj = pt.zz(k, j) * delta(i, l);
        let b_kl = pt.zz(k, l) * delta(i, j);
        Complex64::new((1.0 - 2.0 * t) * delta(i, j) * delta(k, l) + (2.0 * t - t * t - q) * delta(i, l) * delta(k, j), 0.0)
            + (2.0 * t - 1.0) * b_ij
            + (t * t - q) * b_kl
            + (q - t) * (b_il + b_kj)
    })
}

/// R^D assembled from R^c, the torsion quadratics and vanishing Bismut
/// derivatives of the torsion (the Hopf manifold is BTP).
pub fn hopf_curvature_d_assembled(pt: &HopfPoint, params: ConnectionParams) -> CurvatureTensor {
    let n = pt.n();
    let t = hopf_torsion(pt);
    let rc = hopf_chern_curvature(pt);
    let semi = TorsionDerivatives::zeros(n, Which::Bismut);
    CurvatureTensor::from_fn(n, CurvatureKind::General(params), |i, j, k, l| {
        rc.get(i, j, k, l) + identity_d_minus_chern(&t, &semi, params, i, j, k, l)
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HopfProbe {
    /// "z", "e1" or "en".
    pub label: String,
    pub verdict: HscVerdict,
    /// R̂^D_{1 1̄ 1 1̄} at the probe.
    pub rhat_1111: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HopfHscReport {
    pub n: usize,
    pub r: f64,
    pub s: f64,
    pub t: f64,
    pub on_chen_nie: bool,
    /// Constant at z and at both probes, with the same c.
    pub constant: bool,
    pub c: Option<f64>,
    /// (1 − t² − s²/4)(1 − |z₁|²/|z|²), the value of R̂^D_{1 1̄ 1 1̄} at z.
    pub witness: f64,
    pub probes: Vec<HopfProbe>,
}

/// HSC constancy of D^r_s at `pt`, cross-checked at e₁ and e_n so that
/// variation between points is detected.
pub fn hopf_hsc_report(pt: &HopfPoint, params: ConnectionParams, tol: f64) -> Result<HopfHscReport> {
    let n = pt.n();
    let mu = params.t() * params.t() + 0.25 * params.s() * params.s();
    let mut probes = Vec::new();
    for (label, p) in [("z", pt.clone()), ("e1", HopfPoint::basis(n, 0)?), ("en", HopfPoint::basis(n, n - 1)?)] {
        let rd = hopf_curvature_d(&p, params);
        let hat = symmetrize(&rd);
        probes.push(HopfProbe {
            label: label.to_string(),
            rhat_1111: hat.get(0, 0, 0, 0).re,
            verdict: constancy_test(&hat, tol),
        });
    }
    let c0 = probes[0].verdict.c;
    let constant = probes.iter().all(|p| p.verdict.constant && (p.verdict.c - c0).abs() <= tol);
    Ok(HopfHscReport {
        n,
        r: params.r(),
        s: params.s(),
        t: params.t(),
        on_chen_nie: chen_nie_membership(params.r(), params.s(), tol),
        constant,
        c: constant.then_some(c0),
        witness: (1.0 - mu) * (1.0 - pt.z[0].norm_sqr() / (pt.norm * pt.norm)),
        probes,
    })
}

/// (r, s) ∈ Ω for which D^r_s of the standard Hopf manifold is flat.
///
/// For n ≥ 3 every coefficient of the closed form must vanish separately:
/// 1 − 2t = 0, 2t − t² − s²/4 = 0, t² − s²/4 = 0, s²/4 − t = 0. For n = 2,
/// |z_i|² + |z_k|² = |z|² couples them into t − t² = 0 and
/// t² − s²/4 − 2t + 1 = 0.
pub fn hopf_flat_params(n: usize) -> Result<Vec<(f64, f64)>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("Hopf model needs n ≥ 2, got {n}")));
    }
    let mut ts: Vec<(f64, f64)> = Vec::new();
    if n == 2 {
        // roots of t − t², then s² = 4(t − 1)²
        for t in [0.0f64, 1.0] {
            let s2 = 4.0 * (t - 1.0) * (t - 1.0);
            let s = s2.sqrt();
            ts.push((t, s));
            if s != 0.0 {
                ts.push((t, -s));
            }
        }
    } else {
        let t = 0.5f64;
        // s²/4 from the last three equations must agree and be ≥ 0
        let cands = [2.0 * t - t * t, t * t, t];
        if cands.iter().all(|&q| q == cands[0]) && cands[0] >= 0.0 {
            let s = 2.0 * cands[0].sqrt();
            ts.push((t, s));
            if s != 0.0 {
                ts.push((t, -s));
            }
        }
    }
    let mut out = Vec::new();
    for (t, s) in ts {
        if s != 1.0 {
            out.push(((1.0 - 2.0 * t) / (1.0 - s), s));
        } else if t == 0.5 {
            out.push((0.0, 1.0));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(out)
}

fn phi(n: usize, i: usize, j: usize, c: Complex64) -> Form {
    Form::monomial(n, &[Covector::Holo(i), Covector::Anti(j)], c)
}

fn cx(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WallachPattern {
    pub b: f64,
    pub p: Complex64,
    pub q: Complex64,
}

/// Bismut curvature matrix of the Wallach threefold under a special frame.
pub fn wallach_matrix(bp: &WallachPattern) -> FormMatrix {
    let (b, p, q) = (bp.b, bp.p, bp.q);
    let alpha = &(&(&(&phi(3, 0, 0, cx(1.0)) + &phi(3, 1, 1, cx(1.0 - b))) + &phi(3, 2, 2, cx(b))) + &phi(3, 1, 2, p))
        + &phi(3, 2, 1, p.conj());
    let beta = &(&(&(&phi(3, 0, 0, cx(1.0)) + &phi(3, 1, 1, cx(b))) + &phi(3, 2, 2, cx(1.0 - b))) - &phi(3, 1, 2, p))
        - &phi(3, 2, 1, p.conj());
    let sigma = &(&(&phi(3, 1, 1, p) - &phi(3, 2, 2, p)) + &phi(3, 1, 2, q)) + &phi(3, 2, 1, cx(1.0 + b));
    let mut m = FormMatrix::zeros(3);
    m.set(0, 0, &alpha + &beta);
    m.set(1, 1, alpha);
    m.set(1, 2, sigma.clone());
    m.set(2, 1, -&sigma.conj());
    m.set(2, 2, beta);
    m
}

pub fn wallach_rb(bp: &WallachPattern) -> CurvatureTensor {
    CurvatureTensor::from_curvature_matrix(&wallach_matrix(bp), CurvatureKind::Model)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MiddleTypePattern {
    pub x: f64,
    pub y: f64,
}

/// Bismut curvature matrix of a middle-type threefold under a special frame.
pub fn middle_type_matrix(mp: &MiddleTypePattern) -> FormMatrix {
    let (x, y) = (mp.x, mp.y);
    let iy = Complex64::new(0.0, y);
    let diag = &phi(3, 0, 0, cx(1.0)) + &phi(3, 1, 1, cx(1.0));
    let skew = &phi(3, 1, 0, cx(1.0)) - &phi(3, 0, 1, cx(1.0));
    let d_alpha = &diag.scale(cx(x)) + &skew.scale(iy);
    let d_beta0 = &diag.scale(-iy) + &skew.scale(cx(x - 2.0));
    let mut m = FormMatrix::zeros(3);
    m.set(0, 0, d_alpha.clone());
    m.set(0, 1, d_beta0.clone());
    m.set(1, 0, -&d_beta0);
    m.set(1, 1, d_alpha);
    m
}

pub fn middle_type_rb(mp: &MiddleTypePattern) -> CurvatureTensor {
    CurvatureTensor::from_curvature_matrix(&middle_type_matrix(mp), CurvatureKind::Model)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Btp3Case {
    Rank3,
    Wallach,
    Middle,
}

impl std::str::FromStr for Btp3Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rank3" => Ok(Btp3Case::Rank3),
            "wallach" => Ok(Btp3Case::Wallach),
            "middle" => Ok(Btp3Case::Middle),
            other => Err(Error::InvalidParameter(format!("unknown case {other:?}"))),
        }
    }
}

/// Special-frame torsion: a_i = T^i_{jk} for (ijk) cyclic, a_1 = … = a_rank = λ.
pub fn btp3_torsion(case: Btp3Case, lambda: f64) -> TorsionTensor {
    let rank = match case {
        Btp3Case::Wallach => 1,
        Btp3Case::Middle => 2,
        Btp3Case::Rank3 => 3,
    };
    let mut t = TorsionTensor::zeros(3);
    for i in 0..rank {
        t.set(i, (i + 1) % 3, (i + 2) % 3, cx(lambda));
    }
    t
}

/// One equation R^b_{i ī k k̄} = constant-HSC prediction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquationCheck {
    /// 1-based (i, k).
    pub i: usize,
    pub k: usize,
    pub pattern: f64,
    pub predicted: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Btp3Outcome {
    Consistent { c: f64 },
    Infeasible { violated: EquationCheck },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Btp3Verdict {
    pub case: Btp3Case,
    pub r: f64,
    pub s: f64,
    pub t: f64,
    pub lambda: f64,
    /// HSC forced by the diagonal of the pattern.
    pub c: f64,
    /// Pattern parameters fixed by the diagonal equations.
    pub fitted: Vec<(String, f64)>,
    pub checks: Vec<EquationCheck>,
    pub outcome: Btp3Outcome,
}

/// Tests whether D^r_s can have constant HSC on the given threefold type by
/// comparing the pattern R^b with the constant-HSC prediction on every
/// (i, i, k, k), i ≤ k. The first violated equation is reported.
pub fn btp3_constancy_analysis(case: Btp3Case, params: ConnectionParams, lambda: f64, tol: f64) -> Result<Btp3Verdict> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    let t = btp3_torsion(case, lambda);
    let pred0 = |i: usize, k: usize| predict_rb_diagonal(&t, params, 0.0, i, k);
    let (rb, c, fitted) = match case {
        Btp3Case::Rank3 => {
            let sc = catalog::sl2c(lambda);
            debug_assert!(chern_torsion(&sc).max_abs() == lambda);
            let rb = curvature_from_structure(&sc, Which::Bismut)?;
            let c = rb.get(0, 0, 0, 0).re - pred0(0, 0);
            (rb, c, vec![])
        }
        Btp3Case::Wallach => {
            // R^b_{1111} = 2 carries no parameter; R^b_{2222} = 1 − b = c fixes b
            let probe = wallach_rb(&WallachPattern { b: 0.0, p: cx(0.0), q: cx(0.0) });
            let c = probe.get(0, 0, 0, 0).re - pred0(0, 0);
            let b = 1.0 - (c + pred0(1, 1));
            let rb = wallach_rb(&WallachPattern { b, p: cx(0.0), q: cx(0.0) });
            (rb, c, vec![("b".to_string(), b)])
        }
        Btp3Case::Middle => {
            // R^b_{3333} = 0 carries no parameter; R^b_{1111} = x = c fixes x
            let probe = middle_type_rb(&MiddleTypePattern { x: 0.0, y: 0.0 });
            let c = probe.get(2, 2, 2, 2).re - pred0(2, 2);
            let x = c + pred0(0, 0);
            let rb = middle_type_rb(&MiddleTypePattern { x, y: 0.0 });
            (rb, c, vec![("x".to_string(), x), ("y".to_string(), 0.0)])
        }
    };
    let mut order: Vec<(usize, usize)> = (0..3).map(|i| (i, i)).collect();
    order.extend([(0, 1), (0, 2), (1, 2)]);
    let checks: Vec<EquationCheck> = order
        .into_iter()
        .map(|(i, k)| {
            let pattern = rb.get(i, i, k, k).re;
            let predicted = predict_rb_diagonal(&t, params, c, i, k);
            EquationCheck {
                i: i + 1,
                k: k + 1,
                pattern,
                predicted,
                residual: (pattern - predicted).abs(),
            }
        })
        .collect();
    let outcome = match checks.iter().find(|e| e.residual.is_nan() || e.residual > tol) {
        Some(v) => Btp3Outcome::Infeasible { violated: v.clone() },
        None => Btp3Outcome::Consistent { c },
    };
    Ok(Btp3Verdict {
        case,
        r: params.r(),
        s: params.s(),
        t: params.t(),
        lambda,
        c,
        fitted,
        checks,
        outcome,
    })
}
