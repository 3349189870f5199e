//! Lie-Hermitian structure constants under a unitary frame.
//!
//! For a unitary frame `e` of `g^{1,0}`,
//!
//! ```text
//! [e_i, e_j]  = Σ_k C^k_{ij} e_k
//! [e_i, ē_j] = Σ_k ( conj(D^i_{kj}) e_k − D^j_{ki} ē_k )
//! ```
//!
//! The metric is the one making the frame unitary; it is never stored.

pub mod catalog;
pub mod file;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::error::{Error, Result};
use crate::exterior::{kahler_form, Covector, ExteriorDerivative, Form, MAX_DIM};

pub use catalog::catalog;

/// Default tolerance for every validation-style check.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    n: usize,
    // c[k][i][j] = C^k_{ij}
    c: Vec<Complex64>,
    // d[j][i][k] = D^j_{ik}
    d: Vec<Complex64>,
}

impl StructureConstants {
    pub fn zeros(n: usize) -> Self {
        assert!(n <= MAX_DIM, "dimension {n} exceeds {MAX_DIM}");
        StructureConstants {
            n,
            c: vec![Complex64::default(); n * n * n],
            d: vec![Complex64::default(); n * n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.n + b) * self.n + c
    }

    /// C^k_{ij}.
    #[inline]
    pub fn c(&self, k: usize, i: usize, j: usize) -> Complex64 {
        self.c[self.idx(k, i, j)]
    }

    /// D^j_{ik}.
    #[inline]
    pub fn d(&self, j: usize, i: usize, k: usize) -> Complex64 {
        self.d[self.idx(j, i, k)]
    }

    /// Sets C^k_{ij} = v and C^k_{ji} = −v.
    ///
    /// Panics if `i == j` and `v ≠ 0`, which no antisymmetric array can hold.
    pub fn set_c(&mut self, k: usize, i: usize, j: usize, v: Complex64) {
        assert!(i != j || v.norm() == 0.0, "C^k_(ii) must vanish");
        let a = self.idx(k, i, j);
        let b = self.idx(k, j, i);
        self.c[a] = v;
        self.c[b] = -v;
    }

    /// Sets D^j_{ik} = v.
    pub fn set_d(&mut self, j: usize, i: usize, k: usize, v: Complex64) {
        let a = self.idx(j, i, k);
        self.d[a] = v;
    }

    pub fn is_abelian(&self, tol: f64) -> bool {
        self.c.iter().chain(self.d.iter()).all(|x| x.norm() <= tol)
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().chain(self.d.iter()).map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Component-wise combination `a·self + b·other`; used for linearity checks.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(StructureConstants {
            n: self.n,
            c: self.c.iter().zip(&other.c).map(|(x, y)| a * x + b * y).collect(),
            d: self.d.iter().zip(&other.d).map(|(x, y)| a * x + b * y).collect(),
        })
    }

    pub(crate) fn raw_c(&self) -> &[Complex64] {
        &self.c
    }

    pub(crate) fn raw_d(&self) -> &[Complex64] {
        &self.d
    }
}

/// Chern torsion components T^j_{ik}, antisymmetric in (i, k).
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionTensor {
    n: usize,
    // t[j][i][k] = T^j_{ik}
    t: Vec<Complex64>,
}

impl TorsionTensor {
    pub fn zeros(n: usize) -> Self {
        TorsionTensor {
            n,
            t: vec![Complex64::default(); n * n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// T^j_{ik}.
    #[inline]
    pub fn get(&self, j: usize, i: usize, k: usize) -> Complex64 {
        self.t[(j * self.n + i) * self.n + k]
    }

    /// Sets T^j_{ik} = v and T^j_{ki} = −v.
    pub fn set(&mut self, j: usize, i: usize, k: usize, v: Complex64) {
        assert!(i != k || v.norm() == 0.0, "T^j_(ii) must vanish");
        let n = self.n;
        self.t[(j * n + i) * n + k] = v;
        self.t[(j * n + k) * n + i] = -v;
    }

    pub fn norm_sqr(&self) -> f64 {
        self.t.iter().map(|x| x.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.t.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Σ_k T^k_{ki}, the torsion trace.
    pub fn trace(&self) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|k| self.get(k, k, i)).sum())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub antisymmetry_ok: bool,
    /// Max-abs residual of the three Jacobi identities: CC, CD+DD, and the mixed C·conj(D)+D·conj(D).
    pub jacobi_residuals: [f64; 3],
    /// Index tuple (i, j, k, ℓ) achieving the largest residual, 0-based.
    pub worst_tuple: Option<(usize, [usize; 4])>,
    pub tol: f64,
    pub ok: bool,
}

impl ValidationReport {
    pub fn max_residual(&self) -> f64 {
        self.jacobi_residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Evaluates the three Jacobi identities on every index tuple.
pub fn validate(sc: &StructureConstants, tol: f64) -> ValidationReport {
    let n = sc.n();
    let c = |k, i, j| sc.c(k, i, j);
    let d = |j, i, k| sc.d(j, i, k);
    let mut antisymmetry_ok = true;
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if c(k, i, j) != -c(k, j, i) {
                    antisymmetry_ok = false;
                }
            }
        }
    }
    let mut res = [0.0f64; 3];
    let mut worst: Option<(usize, [usize; 4])> = None;
    let mut worst_val = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut s = [Complex64::default(); 3];
                    for r in 0..n {
                        s[0] += c(r, i, j) * c(l, r, k) + c(r, j, k) * c(l, r, i) + c(r, k, i) * c(l, r, j);
                        s[1] += c(r, i, k) * d(l, j, r) + d(r, j, i) * d(l, r, k) - d(r, j, k) * d(l, r, i);
                        s[2] += c(r, i, k) * d(r, j, l).conj() - c(j, r, k) * d(i, r, l).conj()
                            + c(j, r, i) * d(k, r, l).conj()
                            - d(l, r, i) * d(k, j, r).conj()
                            + d(l, r, k) * d(i, j, r).conj();
                    }
                    for (m, v) in s.iter().enumerate() {
                        let a = v.norm();
                        res[m] = res[m].max(a);
                        if a > worst_val {
                            worst_val = a;
                            worst = Some((m, [i, j, k, l]));
                        }
                    }
                }
            }
        }
    }
    let ok = antisymmetry_ok && res.iter().all(|&r| r <= tol);
    ValidationReport {
        antisymmetry_ok,
        jacobi_residuals: res,
        worst_tuple: worst,
        tol,
        ok,
    }
}

/// Fails with [`Error::InvalidStructure`] unless `validate` passes at `tol`.
pub fn require_valid(sc: &StructureConstants, tol: f64) -> Result<()> {
    let report = validate(sc, tol);
    if report.ok {
        Ok(())
    } else {
        Err(Error::InvalidStructure {
            residual: report.max_residual(),
        })
    }
}

/// T^j_{ik} = −C^j_{ik} − D^j_{ik} + D^j_{ki}.
pub fn chern_torsion(sc: &StructureConstants) -> TorsionTensor {
    let n = sc.n();
    let mut t = TorsionTensor::zeros(n);
    for j in 0..n {
        for i in 0..n {
            for k in 0..n {
                t.t[(j * n + i) * n + k] = -sc.c(j, i, k) - sc.d(j, i, k) + sc.d(j, k, i);
            }
        }
    }
    t
}

/// Triangular pattern of a nilpotent complex structure:
/// C^j_{ik} = 0 unless j > i and j > k; D^j_{ik} = 0 unless i > j and i > k.
pub fn check_nilpotent_j(sc: &StructureConstants) -> bool {
    triangular(sc, |j, i, k| j > i && j > k, |j, i, k| i > j && i > k)
}

/// Salamon's pattern: C^j_{ik} = 0 unless j > i or j > k; D^j_{ik} = 0 unless i > j.
pub fn check_salamon(sc: &StructureConstants) -> bool {
    triangular(sc, |j, i, k| j > i || j > k, |j, i, _| i > j)
}

fn triangular(
    sc: &StructureConstants,
    c_allowed: impl Fn(usize, usize, usize) -> bool,
    d_allowed: impl Fn(usize, usize, usize) -> bool,
) -> bool {
    let n = sc.n();
    for j in 0..n {
        for i in 0..n {
            for k in 0..n {
                if sc.c(j, i, k).norm() != 0.0 && !c_allowed(j, i, k) {
                    return false;
                }
                if sc.d(j, i, k).norm() != 0.0 && !d_allowed(j, i, k) {
                    return false;
                }
            }
        }
    }
    true
}

/// Kähler ⟺ the Chern torsion vanishes.
pub fn check_kahler(sc: &StructureConstants, tol: f64) -> bool {
    chern_torsion(sc).max_abs() <= tol
}

/// Solves ∂(ω^{n−1}) = −η ∧ ω^{n−1} for the left-invariant (1,0)-form η,
/// returned as its coefficients η_i. Fails if no η satisfies the equation to `tol`.
pub fn gauduchon_form(sc: &StructureConstants, tol: f64) -> Result<Vec<Complex64>> {
    let n = sc.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    let omega = kahler_form(n);
    let mut power = Form::scalar(n, Complex64::new(1.0, 0.0));
    for _ in 0..n - 1 {
        power = power.wedge_unchecked(&omega);
    }
    let d = ExteriorDerivative::new(sc);
    let dpow = d.apply(&power)?;
    let rhs = -&dpow.bidegree_part(n, n - 1);
    let columns: Vec<Form> = (0..n).map(|i| Form::holo(n, i).wedge_unchecked(&power)).collect();

    let mut monos: Vec<_> = columns.iter().flat_map(|f| f.terms().map(|(m, _)| m)).collect();
    monos.extend(rhs.terms().map(|(m, _)| m));
    monos.sort();
    monos.dedup();

    let lookup = |f: &Form, m| {
        f.terms()
            .find(|(mm, _)| *mm == m)
            .map(|(_, c)| c)
            .unwrap_or_default()
    };
    let a = DMatrix::from_fn(monos.len(), n, |r, c| lookup(&columns[c], monos[r]));
    let b = DMatrix::from_fn(monos.len(), 1, |r, _| lookup(&rhs, monos[r]));
    let ah = a.adjoint();
    let normal = &ah * &a;
    let eta = normal
        .lu()
        .solve(&(&ah * &b))
        .ok_or(Error::InconsistentEquation { residual: f64::INFINITY })?;
    let residual = (&a * &eta - &b).iter().map(|x| x.norm()).fold(0.0, f64::max);
    if residual > tol {
        return Err(Error::InconsistentEquation { residual });
    }
    Ok(eta.iter().copied().collect())
}

/// Balanced ⟺ the Gauduchon torsion 1-form η vanishes.
pub fn check_balanced(sc: &StructureConstants, tol: f64) -> Result<bool> {
    require_valid(sc, tol)?;
    let eta = gauduchon_form(sc, tol)?;
    Ok(eta.iter().all(|x| x.norm() <= tol))
}

/// Random instance with nilpotent J: φ_1..φ_m are closed and, for i > m,
/// dφ_i is a random combination of φ_a∧φ_b and φ_a∧φ̄_b with a, b ≤ m.
pub fn random_two_step(n: usize, m: usize, seed: u64) -> Result<StructureConstants> {
    if m < 1 || m >= n || n > MAX_DIM {
        return Err(Error::InvalidParameter(format!(
            "random_two_step needs 1 <= m < n <= {MAX_DIM}, got n = {n}, m = {m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unif = Uniform::new_inclusive(-1.0, 1.0).expect("valid range");
    let mut sample = || Complex64::new(unif.sample(&mut rng), unif.sample(&mut rng));
    let mut sc = StructureConstants::zeros(n);
    for i in m..n {
        for a in 0..m {
            for b in (a + 1)..m {
                sc.set_c(i, a, b, sample());
            }
        }
        for j in 0..m {
            for k in 0..m {
                sc.set_d(j, i, k, sample());
            }
        }
    }
    Ok(sc)
}

/// Haar-random unitary matrix from the QR decomposition of a complex Gaussian matrix.
pub fn random_unitary(n: usize, seed: u64) -> DMatrix<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im)
    });
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Max-abs entry of U U* − I.
pub fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let n = u.nrows();
    let prod = u * u.adjoint();
    let id = DMatrix::<Complex64>::identity(n, n);
    (prod - id).iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Structure constants under the frame e'_i = Σ_j U_ij e_j.
///
/// Both C and D transform as X'^k_{ij} = Σ conj(U_kc) U_ia U_jb X^c_{ab}.
pub fn change_frame(sc: &StructureConstants, u: &DMatrix<Complex64>, tol: f64) -> Result<StructureConstants> {
    let n = sc.n();
    if u.nrows() != n || u.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: u.nrows(),
        });
    }
    let deviation = unitarity_defect(u);
    if deviation > tol {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(StructureConstants {
        n,
        c: antisymmetrize(n, transform_tensor(n, sc.raw_c(), u)),
        d: transform_tensor(n, sc.raw_d(), u),
    })
}

// rounding in the contraction breaks C^k_ij = −C^k_ji at the ulp level
fn antisymmetrize(n: usize, mut c: Vec<Complex64>) -> Vec<Complex64> {
    let idx = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    for k in 0..n {
        for i in 0..n {
            c[idx(k, i, i)] = Complex64::default();
            for j in (i + 1)..n {
                let v = 0.5 * (c[idx(k, i, j)] - c[idx(k, j, i)]);
                c[idx(k, i, j)] = v;
                c[idx(k, j, i)] = -v;
            }
        }
    }
    c
}

pub(crate) fn transform_tensor(n: usize, x: &[Complex64], u: &DMatrix<Complex64>) -> Vec<Complex64> {
    let idx = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    // contract the upper index with conj(U), then the two lower ones with U
    let mut s1 = vec![Complex64::default(); n * n * n];
    for k in 0..n {
        for a in 0..n {
            for b in 0..n {
                s1[idx(k, a, b)] = (0..n).map(|c| u[(k, c)].conj() * x[idx(c, a, b)]).sum();
            }
        }
    }
    let mut s2 = vec![Complex64::default(); n * n * n];
    for k in 0..n {
        for i in 0..n {
            for b in 0..n {
                s2[idx(k, i, b)] = (0..n).map(|a| u[(i, a)] * s1[idx(k, a, b)]).sum();
            }
        }
    }
    let mut out = vec![Complex64::default(); n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                out[idx(k, i, j)] = (0..n).map(|b| u[(j, b)] * s2[idx(k, i, b)]).sum();
            }
        }
    }
    out
}

/// max_i |d(dφ_i)| and max_i |d(dφ̄_i)| coefficients.
pub fn d_squared_defect(sc: &StructureConstants) -> f64 {
    let n = sc.n();
    let d = ExteriorDerivative::new(sc);
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for x in [Covector::Holo(i), Covector::Anti(i)] {
            let dd = d.apply(d.of_covector(x)).expect("same dimension");
            worst = worst.max(dd.max_abs());
        }
    }
    worst
}
