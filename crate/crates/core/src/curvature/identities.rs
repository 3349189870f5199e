//! Closed formulas in (C, D) and T, checked against the structure equations.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{
    curvature_d_unchecked, curvature_from_structure, derivatives_from_connection, levicivita_curvature, symmetrize,
    vw_terms, CurvatureKind, CurvatureTensor, TorsionDerivatives, Which,
};
use crate::connections::{bismut_theta, chern_theta, ConnectionParams};
use crate::error::Result;
use crate::exterior::ExteriorDerivative;
use crate::lie_hermitian::{chern_torsion, require_valid, StructureConstants, TorsionTensor, DEFAULT_TOL};

/// R^b from the six-group closed formula.
pub fn bismut_curvature_closed_form(sc: &StructureConstants) -> Result<CurvatureTensor> {
    require_valid(sc, DEFAULT_TOL)?;
    Ok(bismut_closed_unchecked(sc))
}

fn bismut_closed_unchecked(sc: &StructureConstants) -> CurvatureTensor {
    let n = sc.n();
    let c = |a, b, e| sc.c(a, b, e);
    let d = |a, b, e| sc.d(a, b, e);
    // stored (k, l, i, j) holds R^b_{k l̄ i j̄}
    CurvatureTensor::from_fn(n, CurvatureKind::Bismut, |k, l, i, j| {
        let mut acc = Complex64::default();
        for r in 0..n {
            acc += c(r, i, k) * c(r, j, l).conj() - c(j, r, k) * c(i, r, l).conj();
            acc -= c(r, i, k) * d(r, l, j).conj() + c(r, j, l).conj() * d(r, k, i);
            acc += c(j, i, r) * d(k, r, l).conj() - c(j, k, r) * d(i, l, r).conj();
            acc += c(i, j, r).conj() * d(l, r, k) - c(i, l, r).conj() * d(j, k, r);
            acc -= d(j, r, i) * d(k, r, l).conj() + d(l, r, k) * d(i, r, j).conj();
            acc += d(r, k, i) * d(r, l, j).conj() - d(j, k, r) * d(i, l, r).conj();
        }
        acc
    })
}

fn abs2(z: Complex64) -> f64 {
    z.norm_sqr()
}

/// 4 R̂^b_{k k̄ i ī} from (C, D).
pub fn lie1(sc: &StructureConstants, k: usize, i: usize) -> f64 {
    let n = sc.n();
    let c = |a, b, e| sc.c(a, b, e);
    let d = |a, b, e| sc.d(a, b, e);
    let mut acc = 0.0;
    for r in 0..n {
        acc -= abs2(c(i, r, k)) + abs2(c(k, r, i)) + 2.0 * (c(i, r, i) * c(k, r, k).conj()).re;
        acc += 2.0
            * (c(i, i, r).conj() * (d(k, r, k) - d(k, k, r))
                + c(k, k, r).conj() * (d(i, r, i) - d(i, i, r))
                + c(i, k, r).conj() * (d(i, r, k) - d(i, k, r))
                + c(k, i, r).conj() * (d(k, r, i) - d(k, i, r)))
                .re;
        acc -= 2.0 * (abs2(d(i, r, k)) + abs2(d(k, r, i)) + 2.0 * (d(i, r, i) * d(k, r, k).conj()).re);
        acc += abs2(d(r, k, i)) + abs2(d(r, i, k)) + 2.0 * (d(r, i, k) * d(r, k, i).conj()).re;
        acc -= abs2(d(i, k, r)) + abs2(d(k, i, r)) + 2.0 * (d(i, i, r) * d(k, k, r).conj()).re;
    }
    acc
}

/// R̂^b_{i ī i ī} from (C, D).
pub fn lie2(sc: &StructureConstants, i: usize) -> f64 {
    let n = sc.n();
    let c = |a, b, e| sc.c(a, b, e);
    let d = |a, b, e| sc.d(a, b, e);
    let mut acc = 0.0;
    for r in 0..n {
        acc += -abs2(c(i, r, i)) + 2.0 * (c(i, i, r).conj() * (d(i, r, i) - d(i, i, r))).re - 2.0 * abs2(d(i, r, i))
            + abs2(d(r, i, i))
            - abs2(d(i, i, r));
    }
    acc
}

/// Right side of the comma-minus-semicolon identities: (holo, anti) at (j, i, k, l).
pub fn torsion_derivative_difference(t: &TorsionTensor, j: usize, i: usize, k: usize, l: usize) -> (Complex64, Complex64) {
    let n = t.n();
    let mut holo = Complex64::default();
    let mut anti = Complex64::default();
    for r in 0..n {
        holo += t.get(j, r, k) * t.get(r, i, l) + t.get(j, i, r) * t.get(r, k, l) - t.get(r, i, k) * t.get(j, r, l);
        anti += -t.get(j, r, k) * t.get(i, r, l).conj() - t.get(j, i, r) * t.get(k, r, l).conj()
            + t.get(r, i, k) * t.get(r, j, l).conj();
    }
    (holo, anti)
}

/// Levi-Civita minus Chern, in Chern derivatives. Stored slot (k, l, i, j).
pub fn identity_lc_minus_chern(t: &TorsionTensor, comma: &TorsionDerivatives, k: usize, l: usize, i: usize, j: usize) -> Complex64 {
    let n = t.n();
    let mut q = Complex64::default();
    for r in 0..n {
        q += t.get(r, i, k) * t.get(r, j, l).conj() - t.get(j, k, r) * t.get(i, l, r).conj()
            - t.get(l, i, r) * t.get(k, j, r).conj();
    }
    -0.5 * comma.anti(j, i, k, l) - 0.5 * comma.anti(i, j, l, k).conj() + 0.25 * q
}

/// Bismut minus Chern, in Chern derivatives. Stored slot (k, l, i, j).
pub fn identity_bismut_minus_chern(t: &TorsionTensor, comma: &TorsionDerivatives, k: usize, l: usize, i: usize, j: usize) -> Complex64 {
    let n = t.n();
    let mut q = Complex64::default();
    for r in 0..n {
        q += t.get(r, i, k) * t.get(r, j, l).conj() - t.get(j, k, r) * t.get(i, l, r).conj();
    }
    -comma.anti(j, i, k, l) - comma.anti(i, j, l, k).conj() + q
}

/// R^D − R^c in Bismut derivatives. Stored slot (i, j, k, l).
pub fn identity_d_minus_chern(
    t: &TorsionTensor,
    semi: &TorsionDerivatives,
    params: ConnectionParams,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
) -> Complex64 {
    let tt = params.t();
    let s2 = params.s() * params.s();
    let v = vw_terms(t, i, j, k, l);
    tt * (semi.anti(l, i, k, j) + semi.anti(k, j, l, i).conj()) + (tt * tt - 2.0 * tt) * (v.w - v.v_li)
        - tt * (v.v_ji + v.v_lk)
        - 0.25 * s2 * v.v_jk
}

/// R^b − R^c in Bismut derivatives. Stored slot (i, j, k, l).
pub fn identity_bismut_minus_chern_semicolon(t: &TorsionTensor, semi: &TorsionDerivatives, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
    let v = vw_terms(t, i, j, k, l);
    semi.anti(l, i, k, j) + semi.anti(k, j, l, i).conj() + v.v_li - v.v_ji - v.v_lk - v.w
}

/// R̂^D assembled from R̂^c and v̂.
pub fn rhat_from_chern(rc_hat: &CurvatureTensor, t: &TorsionTensor, params: ConnectionParams) -> CurvatureTensor {
    let mu = params.t() * params.t() + 0.25 * params.s() * params.s();
    let mut out = CurvatureTensor::from_fn(t.n(), CurvatureKind::General(params), |i, j, k, l| {
        rc_hat.get(i, j, k, l) - mu * vw_terms(t, i, j, k, l).v_hat
    });
    out.symmetrized = true;
    out
}

/// R̂^D assembled from R̂^b and v̂.
pub fn rhat_from_bismut(rb_hat: &CurvatureTensor, t: &TorsionTensor, params: ConnectionParams) -> CurvatureTensor {
    let mu = params.t() * params.t() + 0.25 * params.s() * params.s();
    let mut out = CurvatureTensor::from_fn(t.n(), CurvatureKind::General(params), |i, j, k, l| {
        rb_hat.get(i, j, k, l) + (1.0 - mu) * vw_terms(t, i, j, k, l).v_hat
    });
    out.symmetrized = true;
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityResidual {
    pub name: &'static str,
    pub max_residual: f64,
    /// Index into `params_list` for parameter-dependent identities.
    pub params_index: Option<usize>,
    /// 0-based index tuple of the worst component.
    pub worst: Option<[usize; 4]>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub residuals: Vec<IdentityResidual>,
    pub tol: f64,
    pub ok: bool,
}

impl IdentityReport {
    pub fn get(&self, name: &str) -> Option<&IdentityResidual> {
        self.residuals.iter().find(|r| r.name == name)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.max_residual).fold(0.0, f64::max)
    }
}

/// Names reported by [`verify_identities`], in order.
pub const IDENTITY_NAMES: &[&str] = &[
    "bismut_closed_form",
    "torsion_derivative_holo",
    "torsion_derivative_anti",
    "levi_civita_minus_chern",
    "bismut_minus_chern",
    "bismut_minus_chern_semicolon",
    "curvature_d",
    "rhat_chern",
    "rhat_bismut",
    "lie1",
    "lie2",
];

struct Tracker {
    max: f64,
    worst: Option<[usize; 4]>,
}

impl Tracker {
    fn new() -> Self {
        Tracker { max: 0.0, worst: None }
    }

    fn push(&mut self, res: f64, idx: [usize; 4]) {
        // NaN must register as a failure
        if res > self.max || (res.is_nan() && !self.max.is_nan()) {
            self.max = res;
            self.worst = Some(idx);
        }
    }

    fn finish(self, name: &'static str, params_index: Option<usize>) -> IdentityResidual {
        IdentityResidual {
            name,
            max_residual: self.max,
            params_index,
            worst: self.worst,
        }
    }
}

fn each_index(n: usize, mut f: impl FnMut(usize, usize, usize, usize)) {
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    f(i, j, k, l)
                }
            }
        }
    }
}

fn compare(name: &'static str, lhs: &CurvatureTensor, rhs: impl Fn(usize, usize, usize, usize) -> Complex64) -> IdentityResidual {
    let mut tr = Tracker::new();
    each_index(lhs.n(), |i, j, k, l| tr.push((lhs.get(i, j, k, l) - rhs(i, j, k, l)).norm(), [i, j, k, l]));
    tr.finish(name, None)
}

/// Checks every identity at every index tuple. Parameter-dependent ones are
/// evaluated for each entry of `params_list` and the worst entry is kept.
pub fn verify_identities(sc: &StructureConstants, params_list: &[ConnectionParams], tol: f64) -> Result<IdentityReport> {
    require_valid(sc, DEFAULT_TOL)?;
    let n = sc.n();
    let t = chern_torsion(sc);
    let dop = ExteriorDerivative::new(sc);
    let chern = chern_theta(sc);
    let bismut = bismut_theta(sc);
    let comma = derivatives_from_connection(&t, &chern, Which::Chern);
    let semi = derivatives_from_connection(&t, &bismut, Which::Bismut);
    let rc = curvature_from_structure(sc, Which::Chern)?;
    let rb = curvature_from_structure(sc, Which::Bismut)?;
    let lc = levicivita_curvature(sc)?.tensor;
    let rc_hat = symmetrize(&rc);
    let rb_hat = symmetrize(&rb);

    let mut out = Vec::new();
    let closed = bismut_closed_unchecked(sc);
    out.push(compare("bismut_closed_form", &rb, |i, j, k, l| closed.get(i, j, k, l)));

    let mut holo = Tracker::new();
    let mut anti = Tracker::new();
    each_index(n, |j, i, k, l| {
        let (h, a) = torsion_derivative_difference(&t, j, i, k, l);
        holo.push((comma.holo(j, i, k, l) - semi.holo(j, i, k, l) - h).norm(), [j, i, k, l]);
        anti.push((comma.anti(j, i, k, l) - semi.anti(j, i, k, l) - a).norm(), [j, i, k, l]);
    });
    out.push(holo.finish("torsion_derivative_holo", None));
    out.push(anti.finish("torsion_derivative_anti", None));

    out.push(compare("levi_civita_minus_chern", &lc, |k, l, i, j| {
        rc.get(k, l, i, j) + identity_lc_minus_chern(&t, &comma, k, l, i, j)
    }));
    out.push(compare("bismut_minus_chern", &rb, |k, l, i, j| {
        rc.get(k, l, i, j) + identity_bismut_minus_chern(&t, &comma, k, l, i, j)
    }));
    out.push(compare("bismut_minus_chern_semicolon", &rb, |i, j, k, l| {
        rc.get(i, j, k, l) + identity_bismut_minus_chern_semicolon(&t, &semi, i, j, k, l)
    }));

    let per_params: Vec<[IdentityResidual; 3]> = params_list
        .par_iter()
        .enumerate()
        .map(|(pi, &p)| {
            let rd = curvature_d_unchecked(sc, p, &dop);
            let rd_hat = symmetrize(&rd);
            let from_c = rhat_from_chern(&rc_hat, &t, p);
            let from_b = rhat_from_bismut(&rb_hat, &t, p);
            let mut a = compare("curvature_d", &rd, |i, j, k, l| rc.get(i, j, k, l) + identity_d_minus_chern(&t, &semi, p, i, j, k, l));
            let mut b = compare("rhat_chern", &rd_hat, |i, j, k, l| from_c.get(i, j, k, l));
            let mut c = compare("rhat_bismut", &rd_hat, |i, j, k, l| from_b.get(i, j, k, l));
            a.params_index = Some(pi);
            b.params_index = Some(pi);
            c.params_index = Some(pi);
            [a, b, c]
        })
        .collect();
    for slot in 0..3 {
        let name = IDENTITY_NAMES[6 + slot];
        let worst = per_params
            .iter()
            .map(|row| row[slot].clone())
            .fold(None::<IdentityResidual>, |acc, r| match acc {
                Some(a) if !(r.max_residual > a.max_residual || (r.max_residual.is_nan() && !a.max_residual.is_nan())) => Some(a),
                _ => Some(r),
            });
        out.push(worst.unwrap_or(IdentityResidual {
            name,
            max_residual: 0.0,
            params_index: None,
            worst: None,
        }));
    }

    let mut l1 = Tracker::new();
    let mut l2 = Tracker::new();
    for k in 0..n {
        for i in 0..n {
            l1.push((4.0 * rb_hat.get(k, k, i, i) - lie1(sc, k, i)).norm(), [k, k, i, i]);
        }
        l2.push((rb_hat.get(k, k, k, k) - lie2(sc, k)).norm(), [k, k, k, k]);
    }
    out.push(l1.finish("lie1", None));
    out.push(l2.finish("lie2", None));

    let ok = out.iter().all(|r| r.max_residual <= tol);
    Ok(IdentityReport { residuals: out, tol, ok })
}
