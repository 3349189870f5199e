//! Connection matrices of the canonical metric connections D^r_s.
//!
//! Row convention: ∇e_i = Σ_j θ_ij e_j, so the coframe moves by the
//! negative transpose, dφ = −ᵗθ ∧ φ + τ. The self-check θ^b = θ + γ pins
//! this down against the independently written Bismut formula.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exterior::{Covector, ExteriorDerivative, Form};
use crate::lie_hermitian::{chern_torsion, require_valid, StructureConstants, TorsionTensor, DEFAULT_TOL};

/// A point (r, s) of the admissible domain Ω = {s ≠ 1} ∪ {(0, 1)} with t = (1 − r + rs)/2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConnectionParams {
    r: f64,
    s: f64,
    t: f64,
}

impl ConnectionParams {
    pub fn new(r: f64, s: f64) -> Result<Self> {
        if !r.is_finite() || !s.is_finite() {
            return Err(Error::InvalidParameter(format!("non-finite (r, s) = ({r}, {s})")));
        }
        if s == 1.0 && r != 0.0 {
            return Err(Error::OutsideDomain { r, s });
        }
        Ok(ConnectionParams {
            r,
            s,
            t: 0.5 * (1.0 - r + r * s),
        })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// t² + s²/4; equals 1 exactly on the Chen–Nie curve.
    pub fn chen_nie_value(&self) -> f64 {
        self.t * self.t + self.s * self.s / 4.0
    }

    pub fn chern() -> Self {
        Self::named(1.0, 0.0)
    }

    pub fn bismut() -> Self {
        Self::named(-1.0, 0.0)
    }

    pub fn lichnerowicz() -> Self {
        Self::named(0.0, 0.0)
    }

    pub fn levi_civita() -> Self {
        Self::named(0.0, 1.0)
    }

    pub fn anti_levi_civita() -> Self {
        Self::named(0.0, -1.0)
    }

    pub fn anti_bismut() -> Self {
        Self::named(3.0, 0.0)
    }

    /// ∇⁺ = D^{-1}_2.
    pub fn plus() -> Self {
        Self::named(-1.0, 2.0)
    }

    /// ∇⁻ = D^{1/3}_{-2}.
    pub fn minus() -> Self {
        Self::named(1.0 / 3.0, -2.0)
    }

    /// Minimal Gauduchon connection D^{-1/3}.
    pub fn minimal() -> Self {
        Self::named(-1.0 / 3.0, 0.0)
    }

    fn named(r: f64, s: f64) -> Self {
        Self::new(r, s).expect("named points lie in the domain")
    }

    /// Every named connection, with its label.
    pub fn special_points() -> Vec<(&'static str, ConnectionParams)> {
        vec![
            ("chern", Self::chern()),
            ("bismut", Self::bismut()),
            ("lichnerowicz", Self::lichnerowicz()),
            ("levi_civita", Self::levi_civita()),
            ("anti_levi_civita", Self::anti_levi_civita()),
            ("anti_bismut", Self::anti_bismut()),
            ("plus", Self::plus()),
            ("minus", Self::minus()),
            ("minimal", Self::minimal()),
        ]
    }
}

pub fn connection_params(r: f64, s: f64) -> Result<ConnectionParams> {
    ConnectionParams::new(r, s)
}

/// Square matrix of forms.
#[derive(Clone, Debug, PartialEq)]
pub struct FormMatrix {
    n: usize,
    entries: Vec<Form>,
}

impl FormMatrix {
    pub fn zeros(n: usize) -> Self {
        FormMatrix {
            n,
            entries: vec![Form::zero(n); n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Form) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        FormMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Form {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: Form) {
        self.entries[i * self.n + j] = f;
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(Form::max_abs).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &FormMatrix) -> FormMatrix {
        FormMatrix::from_fn(self.n, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &FormMatrix) -> FormMatrix {
        FormMatrix::from_fn(self.n, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn scale(&self, c: f64) -> FormMatrix {
        FormMatrix::from_fn(self.n, |i, j| self.get(i, j).scale_re(c))
    }

    /// Entry-wise complex conjugate (not the adjoint).
    pub fn conj(&self) -> FormMatrix {
        FormMatrix::from_fn(self.n, |i, j| self.get(i, j).conj())
    }

    /// (A ∧ B)_ij = Σ_r A_ir ∧ B_rj.
    pub fn wedge(&self, other: &FormMatrix) -> FormMatrix {
        let n = self.n;
        FormMatrix::from_fn(n, |i, j| {
            let mut acc = Form::zero(n);
            for r in 0..n {
                acc += &self.get(i, r).wedge_unchecked(other.get(r, j));
            }
            acc
        })
    }

    pub fn differential(&self, d: &ExteriorDerivative) -> FormMatrix {
        FormMatrix::from_fn(self.n, |i, j| d.apply(self.get(i, j)).expect("same dimension"))
    }

    pub fn bidegree_part(&self, p: usize, q: usize) -> FormMatrix {
        FormMatrix::from_fn(self.n, |i, j| self.get(i, j).bidegree_part(p, q))
    }

    /// θ_ij(e_l) for holomorphic `Covector::Holo(l)` or θ_ij(ē_l) for `Covector::Anti(l)`.
    pub(crate) fn evaluate(&self, i: usize, j: usize, x: Covector) -> Complex64 {
        self.get(i, j).coefficient(&[x])
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ConnectionKind {
    Chern,
    Bismut,
    LeviCivitaBlock,
    General(ConnectionParams),
}

/// Connection matrix under the frame ᵗ(e, ē): `theta` is the (1,0)→(1,0)
/// block, `beta` the conjugate-linear block (s·β), present for s-dependent connections.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionMatrix {
    pub kind: ConnectionKind,
    pub theta: FormMatrix,
    pub beta: Option<FormMatrix>,
}

impl ConnectionMatrix {
    pub fn n(&self) -> usize {
        self.theta.n()
    }
}

fn one_form(n: usize, holo: impl Fn(usize) -> Complex64, anti: impl Fn(usize) -> Complex64) -> Form {
    let mut f = Form::zero(n);
    for k in 0..n {
        let a = holo(k);
        if a.norm() > 0.0 {
            f += &Form::monomial(n, &[Covector::Holo(k)], a);
        }
        let b = anti(k);
        if b.norm() > 0.0 {
            f += &Form::monomial(n, &[Covector::Anti(k)], b);
        }
    }
    f
}

/// θ_ij = Σ_k (D^j_{ik} φ_k − conj(D^i_{jk}) φ̄_k), without validation.
pub(crate) fn chern_theta(sc: &StructureConstants) -> FormMatrix {
    let n = sc.n();
    FormMatrix::from_fn(n, |i, j| one_form(n, |k| sc.d(j, i, k), |k| -sc.d(i, j, k).conj()))
}

/// θ^b_ij = Σ_k ((−C^j_{ik} + D^j_{ki}) φ_k + (conj C^i_{jk} − conj D^i_{kj}) φ̄_k), without validation.
pub(crate) fn bismut_theta(sc: &StructureConstants) -> FormMatrix {
    let n = sc.n();
    FormMatrix::from_fn(n, |i, j| {
        one_form(
            n,
            |k| -sc.c(j, i, k) + sc.d(j, k, i),
            |k| sc.c(i, j, k).conj() - sc.d(i, k, j).conj(),
        )
    })
}

pub fn chern_connection_form(sc: &StructureConstants) -> Result<ConnectionMatrix> {
    require_valid(sc, DEFAULT_TOL)?;
    Ok(ConnectionMatrix {
        kind: ConnectionKind::Chern,
        theta: chern_theta(sc),
        beta: None,
    })
}

pub fn bismut_connection_form(sc: &StructureConstants) -> Result<ConnectionMatrix> {
    require_valid(sc, DEFAULT_TOL)?;
    Ok(ConnectionMatrix {
        kind: ConnectionKind::Bismut,
        theta: bismut_theta(sc),
        beta: None,
    })
}

/// γ = ∇^b − ∇^c: γ_ij = Σ_k (T^j_{ik} φ_k − conj(T^i_{jk}) φ̄_k).
pub fn gamma(t: &TorsionTensor) -> FormMatrix {
    let n = t.n();
    FormMatrix::from_fn(n, |i, j| one_form(n, |k| t.get(j, i, k), |k| -t.get(i, j, k).conj()))
}

/// β_ij = ½ Σ_k conj(T^k_{ij}) φ_k.
pub fn beta(t: &TorsionTensor) -> FormMatrix {
    let n = t.n();
    FormMatrix::from_fn(n, |i, j| one_form(n, |k| 0.5 * t.get(k, i, j).conj(), |_| Complex64::default()))
}

/// θ^D = θ + tγ with conjugate-linear block sβ.
pub fn connection_form_d(sc: &StructureConstants, params: ConnectionParams) -> Result<ConnectionMatrix> {
    require_valid(sc, DEFAULT_TOL)?;
    Ok(general_connection(sc, params))
}

pub(crate) fn general_connection(sc: &StructureConstants, params: ConnectionParams) -> ConnectionMatrix {
    let t = chern_torsion(sc);
    let theta = chern_theta(sc).add(&gamma(&t).scale(params.t()));
    ConnectionMatrix {
        kind: ConnectionKind::General(params),
        theta,
        beta: Some(beta(&t).scale(params.s())),
    }
}

/// Levi-Civita blocks: θ₁ = θ + ½γ and β.
pub fn levi_civita_connection_form(sc: &StructureConstants) -> Result<ConnectionMatrix> {
    require_valid(sc, DEFAULT_TOL)?;
    let mut m = general_connection(sc, ConnectionParams::levi_civita());
    m.kind = ConnectionKind::LeviCivitaBlock;
    Ok(m)
}
