//! Constant-coefficient exterior algebra over a left-invariant unitary coframe.
//!
//! The 2n basis covectors are totally ordered as
//!
//! ```text
//! φ₁ < φ₂ < … < φₙ < φ̄₁ < φ̄₂ < … < φ̄ₙ
//! ```
//!
//! and every monomial is stored in this order as a bitmask: bit `a` for
//! `a < n` is `φ_{a+1}`, bit `n + a` is `φ̄_{a+1}`. Every extraction routine
//! in the crate (curvature components, torsion derivatives) reads
//! coefficients through [`Form::coefficient`], which applies this order, so
//! the convention lives here and nowhere else.
//!
//! Indices in the Rust API are 0-based.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lie_hermitian::StructureConstants;

/// Coefficients with modulus below this are dropped after every operation.
pub const PRUNE_TOL: f64 = 1e-14;

/// Largest frame dimension representable by the 64-bit monomial mask.
pub const MAX_DIM: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Covector {
    /// φ_i, a (1,0)-form.
    Holo(usize),
    /// φ̄_i, a (0,1)-form.
    Anti(usize),
}

impl Covector {
    fn slot(self, n: usize) -> usize {
        match self {
            Covector::Holo(i) => i,
            Covector::Anti(i) => n + i,
        }
    }

    fn from_slot(slot: usize, n: usize) -> Self {
        if slot < n {
            Covector::Holo(slot)
        } else {
            Covector::Anti(slot - n)
        }
    }

    fn index(self) -> usize {
        match self {
            Covector::Holo(i) | Covector::Anti(i) => i,
        }
    }
}

/// A sorted wedge monomial, stored as a set of basis slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    /// (p, q): number of holomorphic and antiholomorphic factors.
    pub fn bidegree(self, n: usize) -> (usize, usize) {
        let holo_mask = low_bits(n);
        (
            (self.0 & holo_mask).count_ones() as usize,
            (self.0 & !holo_mask).count_ones() as usize,
        )
    }

    pub fn factors(self, n: usize) -> Vec<Covector> {
        slots(self.0).map(|s| Covector::from_slot(s, n)).collect()
    }

    fn conj(self, n: usize) -> Monomial {
        let holo = self.0 & low_bits(n);
        let anti = self.0 >> n;
        Monomial((holo << n) | anti)
    }
}

fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn slots(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let s = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(s)
        }
    })
}

/// Sign of moving the sorted monomial `b` past `a`, i.e. `a ∧ b = sign · (a ∪ b)`.
/// Returns `None` if the two monomials share a factor.
fn merge_sign(a: u64, b: u64) -> Option<f64> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    for s in slots(b) {
        swaps += (a >> s >> 1).count_ones();
    }
    Some(if swaps.is_multiple_of(2) { 1.0 } else { -1.0 })
}

/// Left-invariant exterior form with constant complex coefficients.
#[derive(Clone, PartialEq)]
pub struct Form {
    n: usize,
    terms: BTreeMap<Monomial, Complex64>,
}

impl Form {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_DIM, "frame dimension {n} exceeds {MAX_DIM}");
        Form {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(n: usize, c: Complex64) -> Self {
        let mut f = Form::zero(n);
        f.insert(Monomial::ONE, c);
        f
    }

    pub fn holo(n: usize, i: usize) -> Self {
        Form::monomial(n, &[Covector::Holo(i)], Complex64::new(1.0, 0.0))
    }

    pub fn anti(n: usize, i: usize) -> Self {
        Form::monomial(n, &[Covector::Anti(i)], Complex64::new(1.0, 0.0))
    }

    /// Builds `coeff · x₁ ∧ … ∧ x_p` from factors in any order; the
    /// coefficient is sign-normalized to the sorted monomial. Repeated
    /// factors give the zero form.
    pub fn monomial(n: usize, factors: &[Covector], coeff: Complex64) -> Self {
        let mut f = Form::zero(n);
        if let Some((mono, sign)) = normalize(n, factors) {
            f.insert(mono, coeff * sign);
        }
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, Complex64)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the monomial built from `factors` (any order, sign-normalized).
    pub fn coefficient(&self, factors: &[Covector]) -> Complex64 {
        match normalize(self.n, factors) {
            Some((mono, sign)) => self.terms.get(&mono).copied().unwrap_or_default() * sign,
            None => Complex64::default(),
        }
    }

    /// Largest coefficient modulus, 0 for the zero form.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Degree if every term has the same degree; `None` for the zero form or mixed degree.
    pub fn degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(|m| m.degree());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn bidegree_part(&self, p: usize, q: usize) -> Form {
        let n = self.n;
        Form {
            n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.bidegree(n) == (p, q))
                .map(|(m, c)| (*m, *c))
                .collect(),
        }
    }

    /// Part of the form of total degree `deg`.
    pub fn degree_part(&self, deg: usize) -> Form {
        Form {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == deg)
                .map(|(m, c)| (*m, *c))
                .collect(),
        }
    }

    /// Complex conjugate: φ ↔ φ̄ on every factor, coefficients conjugated.
    pub fn conj(&self) -> Form {
        let n = self.n;
        let mut out = Form::zero(n);
        for (m, c) in &self.terms {
            let factors: Vec<Covector> = m
                .factors(n)
                .into_iter()
                .map(|x| match x {
                    Covector::Holo(i) => Covector::Anti(i),
                    Covector::Anti(i) => Covector::Holo(i),
                })
                .collect();
            let (mono, sign) = normalize(n, &factors).expect("conjugation preserves distinct factors");
            debug_assert_eq!(mono, m.conj(n));
            out.insert(mono, c.conj() * sign);
        }
        out
    }

    pub fn wedge(&self, other: &Form) -> Result<Form> {
        self.check_dim(other)?;
        Ok(self.wedge_unchecked(other))
    }

    pub(crate) fn wedge_unchecked(&self, other: &Form) -> Form {
        let mut out = Form::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(sign) = merge_sign(ma.0, mb.0) {
                    out.accumulate(Monomial(ma.0 | mb.0), ca * cb * sign);
                }
            }
        }
        out.prune();
        out
    }

    pub fn try_add(&self, other: &Form) -> Result<Form> {
        self.check_dim(other)?;
        Ok(self + other)
    }

    pub fn scale(&self, c: Complex64) -> Form {
        let mut out = Form::zero(self.n);
        for (m, v) in &self.terms {
            out.insert(*m, v * c);
        }
        out
    }

    pub fn scale_re(&self, c: f64) -> Form {
        self.scale(Complex64::new(c, 0.0))
    }

    fn check_dim(&self, other: &Form) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    fn insert(&mut self, m: Monomial, c: Complex64) {
        if c.norm() > PRUNE_TOL {
            self.terms.insert(m, c);
        } else {
            self.terms.remove(&m);
        }
    }

    fn accumulate(&mut self, m: Monomial, c: Complex64) {
        *self.terms.entry(m).or_default() += c;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() > PRUNE_TOL);
    }

    pub(crate) fn add_assign_scaled(&mut self, other: &Form, c: Complex64) {
        assert_eq!(self.n, other.n, "form dimension mismatch");
        for (m, v) in &other.terms {
            self.accumulate(*m, v * c);
        }
        self.prune();
    }
}

/// Sorts `factors` into the fixed covector order. Returns the monomial and
/// the permutation sign, or `None` if a factor repeats.
fn normalize(n: usize, factors: &[Covector]) -> Option<(Monomial, f64)> {
    let mut mask = 0u64;
    let mut sign = 1.0;
    for &x in factors {
        assert!(x.index() < n, "covector index {} out of range for n = {n}", x.index());
        let bit = 1u64 << x.slot(n);
        if mask & bit != 0 {
            return None;
        }
        // x is appended on the right; moving it left past every larger slot flips the sign.
        if (mask >> x.slot(n) >> 1).count_ones() % 2 == 1 {
            sign = -sign;
        }
        mask |= bit;
    }
    Some((Monomial(mask), sign))
}

impl std::ops::Add for &Form {
    type Output = Form;

    fn add(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, Complex64::new(1.0, 0.0));
        out
    }
}

impl std::ops::Sub for &Form {
    type Output = Form;

    fn sub(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, Complex64::new(-1.0, 0.0));
        out
    }
}

impl std::ops::Neg for &Form {
    type Output = Form;

    fn neg(self) -> Form {
        self.scale_re(-1.0)
    }
}

impl std::ops::AddAssign<&Form> for Form {
    fn add_assign(&mut self, rhs: &Form) {
        self.add_assign_scaled(rhs, Complex64::new(1.0, 0.0));
    }
}

impl std::ops::SubAssign<&Form> for Form {
    fn sub_assign(&mut self, rhs: &Form) {
        self.add_assign_scaled(rhs, Complex64::new(-1.0, 0.0));
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form(n={}; {})", self.n, self)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}{:+}i)", c.re, c.im)?;
            for x in m.factors(self.n) {
                match x {
                    Covector::Holo(i) => write!(f, "·φ{}", i + 1)?,
                    Covector::Anti(i) => write!(f, "·φ̄{}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

/// The exterior derivative induced by a set of structure constants.
///
/// On the coframe,
/// `dφ_i = −Σ_{j,k} (½ C^i_{jk} φ_j∧φ_k + conj(D^j_{ik}) φ_j∧φ̄_k)`,
/// `dφ̄_i = conj(dφ_i)`, extended to higher degree by the graded Leibniz rule.
#[derive(Clone, Debug)]
pub struct ExteriorDerivative {
    n: usize,
    basis: Vec<Form>,
}

impl ExteriorDerivative {
    pub fn new(sc: &StructureConstants) -> Self {
        let n = sc.n();
        let mut holo = Vec::with_capacity(n);
        for i in 0..n {
            let mut d = Form::zero(n);
            for j in 0..n {
                for k in 0..n {
                    let c = sc.c(i, j, k);
                    if c.norm() > 0.0 {
                        let m = Form::monomial(n, &[Covector::Holo(j), Covector::Holo(k)], -0.5 * c);
                        d += &m;
                    }
                    let dd = sc.d(j, i, k);
                    if dd.norm() > 0.0 {
                        let m = Form::monomial(n, &[Covector::Holo(j), Covector::Anti(k)], -dd.conj());
                        d += &m;
                    }
                }
            }
            holo.push(d);
        }
        let anti: Vec<Form> = holo.iter().map(Form::conj).collect();
        let mut basis = holo;
        basis.extend(anti);
        ExteriorDerivative { n, basis }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// d of a single basis covector.
    pub fn of_covector(&self, x: Covector) -> &Form {
        &self.basis[x.slot(self.n)]
    }

    pub fn apply(&self, f: &Form) -> Result<Form> {
        if f.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: f.n,
            });
        }
        let one = Complex64::new(1.0, 0.0);
        let mut out = Form::zero(self.n);
        for (m, c) in &f.terms {
            // d(x₁∧…∧x_p) = Σ_m (−1)^m x₁∧…∧dx_{m+1}∧…∧x_p
            for (pos, s) in slots(m.0).enumerate() {
                let left = m.0 & ((1u64 << s) - 1);
                let right = m.0 & !((1u64 << s) | ((1u64 << s) - 1));
                let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                let lf = Form::from_mask(self.n, left, one);
                let rf = Form::from_mask(self.n, right, one);
                let term = lf.wedge_unchecked(&self.basis[s]).wedge_unchecked(&rf);
                out.add_assign_scaled(&term, c * sign);
            }
        }
        Ok(out)
    }
}

impl Form {
    fn from_mask(n: usize, mask: u64, c: Complex64) -> Form {
        let mut f = Form::zero(n);
        f.insert(Monomial(mask), c);
        f
    }
}

/// Convenience wrapper around [`ExteriorDerivative`].
pub fn differential(f: &Form, sc: &StructureConstants) -> Result<Form> {
    ExteriorDerivative::new(sc).apply(f)
}

/// Wedge product of two forms.
pub fn wedge(a: &Form, b: &Form) -> Result<Form> {
    a.wedge(b)
}

pub fn bidegree_part(f: &Form, p: usize, q: usize) -> Form {
    f.bidegree_part(p, q)
}

/// Kähler form ω = √−1 Σ_k φ_k ∧ φ̄_k of the metric making the frame unitary.
pub fn kahler_form(n: usize) -> Form {
    let mut w = Form::zero(n);
    for k in 0..n {
        w += &Form::monomial(n, &[Covector::Holo(k), Covector::Anti(k)], Complex64::new(0.0, 1.0));
    }
    w
}
