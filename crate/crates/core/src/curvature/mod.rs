//! Curvature of the canonical connections by structure equations.
//!
//! Component convention: for a curvature matrix Θ,
//! `Θ_kl = Σ_{i,j} R_{i j̄ k l̄} φ_i ∧ φ̄_j + (2,0) + (0,2)`, so the first
//! index pair comes from the form and the second from the matrix entry.
//! [`CurvatureTensor::get`]`(i, j, k, l)` returns R_{i j̄ k l̄}.

pub mod identities;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::connections::{
    bismut_theta, chern_theta, general_connection, ConnectionParams, FormMatrix,
};
use crate::error::Result;
use crate::exterior::{Covector, ExteriorDerivative};
use crate::lie_hermitian::{chern_torsion, require_valid, StructureConstants, TorsionTensor, DEFAULT_TOL};

pub use identities::{verify_identities, IdentityReport, IdentityResidual};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CurvatureKind {
    Chern,
    Bismut,
    LeviCivita,
    General(ConnectionParams),
    /// Closed-form or pattern tensor not produced by the structure equations.
    Model,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor {
    n: usize,
    pub kind: CurvatureKind,
    pub symmetrized: bool,
    r: Vec<Complex64>,
}

impl CurvatureTensor {
    pub fn zeros(n: usize, kind: CurvatureKind) -> Self {
        CurvatureTensor {
            n,
            kind,
            symmetrized: false,
            r: vec![Complex64::default(); n * n * n * n],
        }
    }

    pub fn from_fn(n: usize, kind: CurvatureKind, mut f: impl FnMut(usize, usize, usize, usize) -> Complex64) -> Self {
        let mut out = Self::zeros(n, kind);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = f(i, j, k, l);
                        out.set(i, j, k, l, v);
                    }
                }
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    /// R_{i j̄ k l̄}.
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        self.r[self.idx(i, j, k, l)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: Complex64) {
        let a = self.idx(i, j, k, l);
        self.r[a] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.r.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Max-abs component difference; `f64::INFINITY` on dimension mismatch.
    pub fn max_diff(&self, other: &CurvatureTensor) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        self.r.iter().zip(&other.r).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// max |R_{i j̄ k l̄} − conj(R_{j ī l k̄})|.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        worst = worst.max((self.get(i, j, k, l) - self.get(j, i, l, k).conj()).norm());
                    }
                }
            }
        }
        worst
    }

    /// Components under the frame e'_i = Σ_a U_ia e_a.
    pub fn change_frame(&self, u: &DMatrix<Complex64>) -> CurvatureTensor {
        let n = self.n;
        // contract one index at a time: positions 0 and 2 with U, 1 and 3 with conj(U)
        let mut cur = self.r.clone();
        for pos in 0..4 {
            let mut next = vec![Complex64::default(); cur.len()];
            for (flat, slot) in next.iter_mut().enumerate() {
                let mut idx = [0usize; 4];
                let mut rem = flat;
                for p in (0..4).rev() {
                    idx[p] = rem % n;
                    rem /= n;
                }
                let target = idx[pos];
                let mut acc = Complex64::default();
                for a in 0..n {
                    idx[pos] = a;
                    let src = ((idx[0] * n + idx[1]) * n + idx[2]) * n + idx[3];
                    let w = if pos % 2 == 0 { u[(target, a)] } else { u[(target, a)].conj() };
                    acc += w * cur[src];
                }
                *slot = acc;
            }
            cur = next;
        }
        CurvatureTensor {
            n,
            kind: self.kind,
            symmetrized: self.symmetrized,
            r: cur,
        }
    }

    pub(crate) fn combine(&self, a: f64, other: &CurvatureTensor, b: f64) -> CurvatureTensor {
        CurvatureTensor {
            n: self.n,
            kind: self.kind,
            symmetrized: self.symmetrized && other.symmetrized,
            r: self.r.iter().zip(&other.r).map(|(x, y)| x * a + y * b).collect(),
        }
    }

    /// Reads R_{i j̄ k l̄} as the coefficient of φ_i∧φ̄_j in Θ_kl.
    pub fn from_curvature_matrix(theta: &FormMatrix, kind: CurvatureKind) -> Self {
        let n = theta.n();
        Self::from_fn(n, kind, |i, j, k, l| {
            theta.get(k, l).coefficient(&[Covector::Holo(i), Covector::Anti(j)])
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Chern,
    Bismut,
}

/// Θ = dθ − θ∧θ for the Chern or Bismut connection (full matrix, all bidegrees).
pub fn curvature_matrix(sc: &StructureConstants, which: Which) -> Result<FormMatrix> {
    require_valid(sc, DEFAULT_TOL)?;
    let theta = match which {
        Which::Chern => chern_theta(sc),
        Which::Bismut => bismut_theta(sc),
    };
    let d = ExteriorDerivative::new(sc);
    Ok(theta.differential(&d).sub(&theta.wedge(&theta)))
}

/// Full Bismut curvature matrix including its (2,0) and (0,2) parts.
pub fn bismut_curvature_matrix(sc: &StructureConstants) -> Result<FormMatrix> {
    curvature_matrix(sc, Which::Bismut)
}

/// R^c or R^b from the structure equations, (1,1)-part.
pub fn curvature_from_structure(sc: &StructureConstants, which: Which) -> Result<CurvatureTensor> {
    let theta = curvature_matrix(sc, which)?;
    let kind = match which {
        Which::Chern => CurvatureKind::Chern,
        Which::Bismut => CurvatureKind::Bismut,
    };
    Ok(CurvatureTensor::from_curvature_matrix(&theta.bidegree_part(1, 1), kind))
}

/// Levi-Civita curvature blocks.
#[derive(Clone, Debug)]
pub struct LeviCivitaCurvature {
    /// (1,1)-components R_{i j̄ k l̄} of Θ₁.
    pub tensor: CurvatureTensor,
    /// Θ₁ = dθ₁ − θ₁∧θ₁ − β̄∧β, all bidegrees.
    pub theta1: FormMatrix,
    /// Θ₂ = dβ − β∧θ₁ − θ̄₁∧β.
    pub theta2: FormMatrix,
}

pub fn levicivita_curvature(sc: &StructureConstants) -> Result<LeviCivitaCurvature> {
    require_valid(sc, DEFAULT_TOL)?;
    let conn = general_connection(sc, ConnectionParams::levi_civita());
    let d = ExteriorDerivative::new(sc);
    let theta1 = &conn.theta;
    let beta = conn.beta.as_ref().expect("s = 1 carries β");
    let big1 = theta1
        .differential(&d)
        .sub(&theta1.wedge(theta1))
        .sub(&beta.conj().wedge(beta));
    let big2 = beta
        .differential(&d)
        .sub(&beta.wedge(theta1))
        .sub(&theta1.conj().wedge(beta));
    Ok(LeviCivitaCurvature {
        tensor: CurvatureTensor::from_curvature_matrix(&big1.bidegree_part(1, 1), CurvatureKind::LeviCivita),
        theta1: big1,
        theta2: big2,
    })
}

/// Θ₁^D = dθ^D − θ^D∧θ^D − s²β̄∧β, with the (1,1)-part extracted.
pub fn curvature_d(sc: &StructureConstants, params: ConnectionParams) -> Result<CurvatureTensor> {
    require_valid(sc, DEFAULT_TOL)?;
    Ok(curvature_d_unchecked(sc, params, &ExteriorDerivative::new(sc)))
}

pub(crate) fn curvature_d_unchecked(sc: &StructureConstants, params: ConnectionParams, d: &ExteriorDerivative) -> CurvatureTensor {
    let conn = general_connection(sc, params);
    let theta = &conn.theta;
    let sbeta = conn.beta.as_ref().expect("general connection carries sβ");
    // (sβ̄)∧(sβ) = s² β̄∧β
    let big = theta
        .differential(d)
        .sub(&theta.wedge(theta))
        .sub(&sbeta.conj().wedge(sbeta));
    CurvatureTensor::from_curvature_matrix(&big.bidegree_part(1, 1), CurvatureKind::General(params))
}

/// R^D as an exact polynomial A + tB + t²C + s²E in the connection parameters.
///
/// Each coefficient is the (1,1)-part of a structure-equation term:
/// A from dθ − θ∧θ, B from dγ − θ∧γ − γ∧θ, C from −γ∧γ and E from −β̄∧β.
#[derive(Clone, Debug)]
pub struct CurvatureDFamily {
    a: CurvatureTensor,
    b: CurvatureTensor,
    c: CurvatureTensor,
    e: CurvatureTensor,
}

impl CurvatureDFamily {
    pub fn new(sc: &StructureConstants) -> Result<Self> {
        require_valid(sc, DEFAULT_TOL)?;
        let d = ExteriorDerivative::new(sc);
        let theta = chern_theta(sc);
        let t = chern_torsion(sc);
        let g = crate::connections::gamma(&t);
        let beta = crate::connections::beta(&t);
        let read = |m: FormMatrix| CurvatureTensor::from_curvature_matrix(&m.bidegree_part(1, 1), CurvatureKind::Model);
        Ok(CurvatureDFamily {
            a: read(theta.differential(&d).sub(&theta.wedge(&theta))),
            b: read(g.differential(&d).sub(&theta.wedge(&g)).sub(&g.wedge(&theta))),
            c: read(g.wedge(&g).scale(-1.0)),
            e: read(beta.conj().wedge(&beta).scale(-1.0)),
        })
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    pub fn at(&self, params: ConnectionParams) -> CurvatureTensor {
        let t = params.t();
        let mut out = self
            .a
            .combine(1.0, &self.b, t)
            .combine(1.0, &self.c, t * t)
            .combine(1.0, &self.e, params.s() * params.s());
        out.kind = CurvatureKind::General(params);
        out
    }
}

/// Abbreviations w, v^j_i, v^l_i, v^j_k, v^l_k at a fixed (i, j, k, l), and v̂.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VwTerms {
    pub w: Complex64,
    pub v_ji: Complex64,
    pub v_li: Complex64,
    pub v_jk: Complex64,
    pub v_lk: Complex64,
    pub v_hat: Complex64,
}

pub fn vw_terms(t: &TorsionTensor, i: usize, j: usize, k: usize, l: usize) -> VwTerms {
    let n = t.n();
    let mut out = VwTerms {
        w: Complex64::default(),
        v_ji: Complex64::default(),
        v_li: Complex64::default(),
        v_jk: Complex64::default(),
        v_lk: Complex64::default(),
        v_hat: Complex64::default(),
    };
    for r in 0..n {
        out.w += t.get(r, i, k) * t.get(r, j, l).conj();
        out.v_ji += t.get(j, i, r) * t.get(k, l, r).conj();
        out.v_li += t.get(l, i, r) * t.get(k, j, r).conj();
        out.v_jk += t.get(j, k, r) * t.get(i, l, r).conj();
        out.v_lk += t.get(l, k, r) * t.get(i, j, r).conj();
    }
    out.v_hat = 0.25 * (out.v_ji + out.v_jk + out.v_li + out.v_lk);
    out
}

/// Covariant derivatives of the Chern torsion along e_l and ē_l.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionDerivatives {
    n: usize,
    pub which: Which,
    // [j][i][k][l]
    holo: Vec<Complex64>,
    anti: Vec<Complex64>,
}

impl TorsionDerivatives {
    pub fn n(&self) -> usize {
        self.n
    }

    fn idx(&self, j: usize, i: usize, k: usize, l: usize) -> usize {
        ((j * self.n + i) * self.n + k) * self.n + l
    }

    /// T^j_{ik,l} (Chern) or T^j_{ik;l} (Bismut).
    pub fn holo(&self, j: usize, i: usize, k: usize, l: usize) -> Complex64 {
        self.holo[self.idx(j, i, k, l)]
    }

    /// T^j_{ik,l̄} (Chern) or T^j_{ik;l̄} (Bismut).
    pub fn anti(&self, j: usize, i: usize, k: usize, l: usize) -> Complex64 {
        self.anti[self.idx(j, i, k, l)]
    }

    pub fn max_abs(&self) -> f64 {
        self.holo.iter().chain(&self.anti).map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn zeros(n: usize, which: Which) -> Self {
        TorsionDerivatives {
            n,
            which,
            holo: vec![Complex64::default(); n * n * n * n],
            anti: vec![Complex64::default(); n * n * n * n],
        }
    }
}

/// For left-invariant data the frame derivatives vanish and
/// T^j_{ik,X} = −Σ_r θ_ir(X) T^j_{rk} − Σ_r θ_kr(X) T^j_{ir} + Σ_r θ_rj(X) T^r_{ik}.
pub fn torsion_cov_derivatives(sc: &StructureConstants, which: Which) -> Result<TorsionDerivatives> {
    require_valid(sc, DEFAULT_TOL)?;
    let theta = match which {
        Which::Chern => chern_theta(sc),
        Which::Bismut => bismut_theta(sc),
    };
    Ok(derivatives_from_connection(&chern_torsion(sc), &theta, which))
}

pub(crate) fn derivatives_from_connection(t: &TorsionTensor, theta: &FormMatrix, which: Which) -> TorsionDerivatives {
    let n = t.n();
    let mut out = TorsionDerivatives::zeros(n, which);
    for (is_anti, dir) in [(false, Covector::Holo as fn(usize) -> Covector), (true, Covector::Anti as fn(usize) -> Covector)] {
        for l in 0..n {
            let x = dir(l);
            let th: Vec<Complex64> = (0..n * n).map(|ab| theta.evaluate(ab / n, ab % n, x)).collect();
            let th = |a: usize, b: usize| th[a * n + b];
            for j in 0..n {
                for i in 0..n {
                    for k in 0..n {
                        let mut acc = Complex64::default();
                        for r in 0..n {
                            acc += -th(i, r) * t.get(j, r, k) - th(k, r) * t.get(j, i, r) + th(r, j) * t.get(r, i, k);
                        }
                        let a = out.idx(j, i, k, l);
                        if is_anti {
                            out.anti[a] = acc;
                        } else {
                            out.holo[a] = acc;
                        }
                    }
                }
            }
        }
    }
    out
}

/// R̂_{i j̄ k l̄} = ¼(R_{i j̄ k l̄} + R_{k j̄ i l̄} + R_{i l̄ k j̄} + R_{k l̄ i j̄}).
pub fn symmetrize(rt: &CurvatureTensor) -> CurvatureTensor {
    let mut out = CurvatureTensor::from_fn(rt.n(), rt.kind, |i, j, k, l| {
        0.25 * (rt.get(i, j, k, l) + rt.get(k, j, i, l) + rt.get(i, l, k, j) + rt.get(k, l, i, j))
    });
    out.symmetrized = true;
    out
}

/// True iff every semicolon derivative of the Chern torsion vanishes to `tol`.
pub fn check_btp(sc: &StructureConstants, tol: f64) -> Result<bool> {
    Ok(torsion_cov_derivatives(sc, Which::Bismut)?.max_abs() <= tol)
}

pub fn check_flat(rt: &CurvatureTensor, tol: f64) -> bool {
    rt.max_abs() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_hermitian::{catalog, random_two_step};

    fn cx(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn abelian_is_flat_everywhere() {
        let sc = catalog::abelian(3);
        assert_eq!(curvature_from_structure(&sc, Which::Chern).unwrap().max_abs(), 0.0);
        assert_eq!(curvature_from_structure(&sc, Which::Bismut).unwrap().max_abs(), 0.0);
        assert_eq!(levicivita_curvature(&sc).unwrap().tensor.max_abs(), 0.0);
        assert_eq!(torsion_cov_derivatives(&sc, Which::Chern).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn iwasawa_chern_flat_bismut_not() {
        let sc = catalog::iwasawa();
        let rc = curvature_from_structure(&sc, Which::Chern).unwrap();
        assert!(check_flat(&rc, 1e-12));
        let rb = curvature_from_structure(&sc, Which::Bismut).unwrap();
        assert_eq!(rb.get(1, 1, 0, 0), cx(1.0));
        assert!(!check_flat(&rb, 1e-12));
    }

    #[test]
    fn iwasawa_bismut_matrix_entry() {
        // Θ^b_11 = −θ^b_13 ∧ θ^b_31 = φ₂∧φ̄₂
        let m = bismut_curvature_matrix(&catalog::iwasawa()).unwrap();
        let expected = crate::exterior::Form::monomial(3, &[Covector::Holo(1), Covector::Anti(1)], cx(1.0));
        assert_eq!(*m.get(0, 0), expected);
    }

    #[test]
    fn special_points_of_curvature_d() {
        for sc in [catalog::iwasawa(), catalog::kodaira_thurston(), random_two_step(4, 2, 9).unwrap()] {
            let rc = curvature_from_structure(&sc, Which::Chern).unwrap();
            let rb = curvature_from_structure(&sc, Which::Bismut).unwrap();
            let lc = levicivita_curvature(&sc).unwrap().tensor;
            assert!(curvature_d(&sc, ConnectionParams::chern()).unwrap().max_diff(&rc) <= 1e-12);
            assert!(curvature_d(&sc, ConnectionParams::bismut()).unwrap().max_diff(&rb) <= 1e-12);
            assert!(curvature_d(&sc, ConnectionParams::levi_civita()).unwrap().max_diff(&lc) <= 1e-12);
        }
    }

    #[test]
    fn family_matches_direct_route() {
        let sc = random_two_step(4, 2, 13).unwrap();
        let fam = CurvatureDFamily::new(&sc).unwrap();
        for (_, p) in ConnectionParams::special_points() {
            assert!(fam.at(p).max_diff(&curvature_d(&sc, p).unwrap()) <= 1e-12);
        }
        let p = ConnectionParams::new(-2.3, 0.4).unwrap();
        assert!(fam.at(p).max_diff(&curvature_d(&sc, p).unwrap()) <= 1e-12);
    }

    #[test]
    fn kahler_instances_have_a_single_curvature() {
        for sc in [catalog::hyperbolic(), catalog::hyperbolic_product()] {
            let rc = curvature_from_structure(&sc, Which::Chern).unwrap();
            assert!(rc.max_abs() > 0.1);
            assert!(curvature_from_structure(&sc, Which::Bismut).unwrap().max_diff(&rc) <= 1e-12);
            assert!(levicivita_curvature(&sc).unwrap().tensor.max_diff(&rc) <= 1e-12);
            for (_, p) in ConnectionParams::special_points() {
                assert!(curvature_d(&sc, p).unwrap().max_diff(&rc) <= 1e-12);
            }
        }
    }

    #[test]
    fn vw_examples() {
        let zero = vw_terms(&TorsionTensor::zeros(3), 0, 1, 2, 0);
        assert_eq!(zero.w, cx(0.0));
        assert_eq!(zero.v_hat, cx(0.0));
        let t = chern_torsion(&catalog::iwasawa());
        let v = vw_terms(&t, 0, 0, 2, 2);
        assert_eq!(v.v_li, cx(1.0));
        assert_eq!(v.v_hat, cx(0.25));
    }

    #[test]
    fn symmetrize_examples() {
        let rb = curvature_from_structure(&catalog::iwasawa(), Which::Bismut).unwrap();
        let s = symmetrize(&rb);
        let expect = 0.25 * (rb.get(0, 0, 2, 2) + rb.get(2, 0, 0, 2) + rb.get(0, 2, 2, 0) + rb.get(2, 2, 0, 0));
        assert_eq!(s.get(0, 0, 2, 2), expect);
        assert!(symmetrize(&s).max_diff(&s) <= 1e-15);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        assert_eq!(s.get(i, j, k, l), s.get(k, j, i, l));
                        assert_eq!(s.get(i, j, k, l), s.get(i, l, k, j));
                    }
                }
            }
        }
    }

    #[test]
    fn torsion_derivatives_stay_antisymmetric() {
        let sc = random_two_step(4, 2, 5).unwrap();
        for which in [Which::Chern, Which::Bismut] {
            let td = torsion_cov_derivatives(&sc, which).unwrap();
            for j in 0..4 {
                for i in 0..4 {
                    for k in 0..4 {
                        for l in 0..4 {
                            assert!((td.holo(j, i, k, l) + td.holo(j, k, i, l)).norm() < 1e-14);
                            assert!((td.anti(j, i, k, l) + td.anti(j, k, i, l)).norm() < 1e-14);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn btp_fixtures() {
        assert!(check_btp(&catalog::abelian(2), 1e-12).unwrap());
        assert!(check_btp(&catalog::hopf_surface(), 1e-12).unwrap());
        assert!(check_btp(&catalog::sl2c(1.0), 1e-12).unwrap());
        assert_eq!(check_btp(&catalog::iwasawa(), 1e-12).unwrap(), IWASAWA_IS_BTP);
        assert_eq!(check_btp(&catalog::kodaira_thurston(), 1e-12).unwrap(), KODAIRA_THURSTON_IS_BTP);
    }

    const IWASAWA_IS_BTP: bool = false;
    const KODAIRA_THURSTON_IS_BTP: bool = true;

    #[test]
    fn hermitian_symmetry_of_every_kind() {
        let sc = random_two_step(4, 2, 21).unwrap();
        let p = ConnectionParams::new(0.7, -1.3).unwrap();
        for r in [
            curvature_from_structure(&sc, Which::Chern).unwrap(),
            curvature_from_structure(&sc, Which::Bismut).unwrap(),
            levicivita_curvature(&sc).unwrap().tensor,
            curvature_d(&sc, p).unwrap(),
        ] {
            assert!(r.hermitian_defect() <= 1e-10);
        }
    }

    #[test]
    fn degenerate_dimension_one() {
        let sc = catalog::abelian(1);
        assert_eq!(chern_torsion(&sc).max_abs(), 0.0);
        assert_eq!(curvature_d(&sc, ConnectionParams::bismut()).unwrap().max_abs(), 0.0);
    }
}
