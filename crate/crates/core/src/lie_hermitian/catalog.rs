//! Named Lie-Hermitian structures.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::StructureConstants;
use crate::error::{Error, Result};

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Names accepted by [`catalog`].
pub const NAMES: &[&str] = &[
    "abelian",
    "kodaira_thurston",
    "iwasawa",
    "hopf_surface",
    "sl2c",
    "hyperbolic",
    "hyperbolic_product",
];

/// Looks up a catalog entry. `n` is only used by `abelian` (default 3).
pub fn catalog(name: &str, n: Option<usize>) -> Result<StructureConstants> {
    match name {
        "abelian" => Ok(abelian(n.unwrap_or(3))),
        "kodaira_thurston" => Ok(kodaira_thurston()),
        "iwasawa" => Ok(iwasawa()),
        "hopf_surface" => Ok(hopf_surface()),
        "sl2c" => Ok(sl2c(1.0)),
        "hyperbolic" => Ok(hyperbolic()),
        "hyperbolic_product" => Ok(hyperbolic_product()),
        other => Err(Error::UnknownCatalog(other.to_string())),
    }
}

pub fn abelian(n: usize) -> StructureConstants {
    StructureConstants::zeros(n)
}

/// dφ₁ = 0, dφ₂ = φ₁∧φ̄₁.
pub fn kodaira_thurston() -> StructureConstants {
    let mut sc = StructureConstants::zeros(2);
    sc.set_d(0, 1, 0, re(-1.0));
    sc
}

/// Complex Heisenberg group: dφ₃ = −φ₁∧φ₂.
pub fn iwasawa() -> StructureConstants {
    let mut sc = StructureConstants::zeros(3);
    sc.set_c(2, 0, 1, re(1.0));
    sc
}

/// u(2) = ℝ ⊕ su(2) with the complex structure of the standard Hopf
/// surface S¹ × S³, scaled so that the torsion has unit modulus.
///
/// [e₁, e₂] = −e₁, [e₁, ē₁] = ē₂ − e₂, [e₁, ē₂] = e₁.
pub fn hopf_surface() -> StructureConstants {
    let mut sc = StructureConstants::zeros(2);
    sc.set_c(0, 0, 1, re(-1.0));
    sc.set_d(0, 1, 0, re(-1.0));
    sc.set_d(0, 0, 1, re(1.0));
    sc
}

/// so(3, ℂ) ≅ sl(2, ℂ) with [e_i, e_j] = −λ ε_{ijk} e_k, so that
/// T¹₂₃ = T²₃₁ = T³₁₂ = λ and D = 0 (a complex Lie group, Chern flat).
pub fn sl2c(lambda: f64) -> StructureConstants {
    let mut sc = StructureConstants::zeros(3);
    sc.set_c(0, 1, 2, re(-lambda));
    sc.set_c(1, 2, 0, re(-lambda));
    sc.set_c(2, 0, 1, re(-lambda));
    sc
}

/// The affine group of the line as the complex hyperbolic line: dφ₁ = −φ₁∧φ̄₁.
/// Kähler (n = 1) with non-zero constant curvature.
pub fn hyperbolic() -> StructureConstants {
    let mut sc = StructureConstants::zeros(1);
    sc.set_d(0, 0, 0, re(1.0));
    sc
}

/// Hyperbolic line times a flat line, n = 2. Kähler, not flat.
pub fn hyperbolic_product() -> StructureConstants {
    let mut sc = StructureConstants::zeros(2);
    sc.set_d(0, 0, 0, re(1.0));
    sc
}

/// Dense (C, D) with entries from {±1, ±i}; almost never a Lie algebra.
pub fn random_dense_units(n: usize, seed: u64) -> StructureConstants {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let units = [re(1.0), re(-1.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)];
    let mut sc = StructureConstants::zeros(n);
    for k in 0..n {
        for i in 0..n {
            for j in (i + 1)..n {
                sc.set_c(k, i, j, units[rng.random_range(0..4)]);
            }
        }
    }
    for j in 0..n {
        for i in 0..n {
            for k in 0..n {
                sc.set_d(j, i, k, units[rng.random_range(0..4)]);
            }
        }
    }
    sc
}
