//! JSON algebra files.
//!
//! ```json
//! {
//!   "n": 3,
//!   "C": [ { "upper": 3, "lower_i": 1, "lower_j": 2, "re": 1.0, "im": 0.0 } ],
//!   "D": [ { "upper": 1, "lower_i": 2, "lower_k": 1, "re": { "num": -1, "den": 1 }, "im": 0.0 } ]
//! }
//! ```
//!
//! Indices are 1-based. `C` records are completed antisymmetrically; listing
//! both orientations is allowed only if they agree. Values are either plain
//! numbers or exact rationals `{num, den}`, converted to `f64` on load.
//! Files written by [`save`] reload to bit-identical constants and re-save to
//! identical bytes.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::StructureConstants;
use crate::error::{Error, Result};
use crate::exterior::MAX_DIM;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FileScalar {
    Float(f64),
    Rational { num: i64, den: i64 },
}

impl FileScalar {
    fn value(self) -> Result<f64> {
        match self {
            FileScalar::Float(x) if x.is_finite() => Ok(x),
            FileScalar::Float(x) => Err(Error::Parse(format!("non-finite value {x}"))),
            FileScalar::Rational { den: 0, .. } => Err(Error::Parse("rational with zero denominator".into())),
            FileScalar::Rational { num, den } => Ok(num as f64 / den as f64),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CRecord {
    pub upper: usize,
    pub lower_i: usize,
    pub lower_j: usize,
    pub re: FileScalar,
    pub im: FileScalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DRecord {
    pub upper: usize,
    pub lower_i: usize,
    pub lower_k: usize,
    pub re: FileScalar,
    pub im: FileScalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    #[serde(rename = "C", default)]
    pub c: Vec<CRecord>,
    #[serde(rename = "D", default)]
    pub d: Vec<DRecord>,
}

impl AlgebraFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("algebra files always serialize");
        s.push('\n');
        s
    }

    pub fn to_structure(&self) -> Result<StructureConstants> {
        let n = self.n;
        if n == 0 || n > MAX_DIM {
            return Err(Error::Parse(format!("n must be in 1..={MAX_DIM}, got {n}")));
        }
        let check = |idx: usize, what: &str| {
            if idx == 0 || idx > n {
                Err(Error::Parse(format!("{what} index {idx} out of range 1..={n}")))
            } else {
                Ok(idx - 1)
            }
        };
        let mut sc = StructureConstants::zeros(n);
        let mut seen = vec![false; n * n * n];
        for rec in &self.c {
            let k = check(rec.upper, "C upper")?;
            let i = check(rec.lower_i, "C lower_i")?;
            let j = check(rec.lower_j, "C lower_j")?;
            let v = Complex64::new(rec.re.value()?, rec.im.value()?);
            if i == j {
                if v.norm() != 0.0 {
                    return Err(Error::Parse(format!(
                        "C^{}_({},{}) must vanish by antisymmetry",
                        rec.upper, rec.lower_i, rec.lower_j
                    )));
                }
                continue;
            }
            let slot = (k * n + i.min(j)) * n + i.max(j);
            if seen[slot] && sc.c(k, i, j) != v {
                return Err(Error::Parse(format!(
                    "conflicting entries for C^{}_({},{})",
                    rec.upper, rec.lower_i, rec.lower_j
                )));
            }
            seen[slot] = true;
            sc.set_c(k, i, j, v);
        }
        let mut seen = vec![false; n * n * n];
        for rec in &self.d {
            let j = check(rec.upper, "D upper")?;
            let i = check(rec.lower_i, "D lower_i")?;
            let k = check(rec.lower_k, "D lower_k")?;
            let slot = (j * n + i) * n + k;
            if seen[slot] {
                return Err(Error::Parse(format!(
                    "duplicate entry for D^{}_({},{})",
                    rec.upper, rec.lower_i, rec.lower_k
                )));
            }
            seen[slot] = true;
            sc.set_d(j, i, k, Complex64::new(rec.re.value()?, rec.im.value()?));
        }
        Ok(sc)
    }

    /// Canonical file: C with lower_i < lower_j, both arrays in index order, zeros omitted.
    pub fn from_structure(sc: &StructureConstants, name: Option<String>) -> Self {
        let n = sc.n();
        let mut c = Vec::new();
        let mut d = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for e in 0..n {
                    let v = sc.c(a, b, e);
                    if b < e && nonzero_bits(v) {
                        c.push(CRecord {
                            upper: a + 1,
                            lower_i: b + 1,
                            lower_j: e + 1,
                            re: FileScalar::Float(v.re),
                            im: FileScalar::Float(v.im),
                        });
                    }
                    let v = sc.d(a, b, e);
                    if nonzero_bits(v) {
                        d.push(DRecord {
                            upper: a + 1,
                            lower_i: b + 1,
                            lower_k: e + 1,
                            re: FileScalar::Float(v.re),
                            im: FileScalar::Float(v.im),
                        });
                    }
                }
            }
        }
        AlgebraFile { name, n, c, d }
    }
}

// keeps −0.0 so that save/load is bit-exact
fn nonzero_bits(v: Complex64) -> bool {
    v.re.to_bits() != 0 || v.im.to_bits() != 0
}

pub fn parse(text: &str) -> Result<StructureConstants> {
    AlgebraFile::parse(text)?.to_structure()
}

pub fn to_text(sc: &StructureConstants, name: Option<&str>) -> String {
    AlgebraFile::from_structure(sc, name.map(str::to_string)).to_text()
}

pub fn load(path: &Path) -> Result<StructureConstants> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse(&text)
}

pub fn save(sc: &StructureConstants, name: Option<&str>, path: &Path) -> Result<()> {
    std::fs::write(path, to_text(sc, name)).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}
