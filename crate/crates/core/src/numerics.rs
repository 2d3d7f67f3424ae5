//! Dense complex vectors and matrices at array sizes (tens to a few hundred
//! elements), the Gaussian Q-function and dBm/mW conversion.

use std::f64::consts::SQRT_2;
use std::ops::Index;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use num_complex::Complex64 as Complex;

/// Column vector of complex amplitudes. Never empty.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector(Vec<Complex64>);

impl ComplexVector {
    pub fn new(elements: Vec<Complex64>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Domain(
                "complex vector must have at least one element".into(),
            ));
        }
        Ok(ComplexVector(elements))
    }

    /// Builds a vector of length `n` from `f(i)`.
    ///
    /// Panics if `n == 0`.
    pub fn from_fn(n: usize, f: impl FnMut(usize) -> Complex64) -> Self {
        assert!(n > 0, "complex vector must have at least one element");
        ComplexVector((0..n).map(f).collect())
    }

    pub fn filled(n: usize, value: Complex64) -> Self {
        Self::from_fn(n, |_| value)
    }

    pub fn zeros(n: usize) -> Self {
        Self::filled(n, Complex64::new(0.0, 0.0))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `self^H · other`.
    pub fn inner(&self, other: &ComplexVector) -> Result<Complex64> {
        self.check_len(other.len())?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum())
    }

    /// `self^T · other`, i.e. `self` read as a row vector with no conjugation.
    pub fn dot(&self, other: &ComplexVector) -> Result<Complex64> {
        self.check_len(other.len())?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }

    pub fn conj(&self) -> ComplexVector {
        ComplexVector(self.0.iter().map(Complex64::conj).collect())
    }

    pub fn scale(&self, k: Complex64) -> ComplexVector {
        ComplexVector(self.0.iter().map(|v| v * k).collect())
    }

    pub fn scale_real(&self, k: f64) -> ComplexVector {
        ComplexVector(self.0.iter().map(|v| v * k).collect())
    }

    pub fn add(&self, other: &ComplexVector) -> Result<ComplexVector> {
        self.check_len(other.len())?;
        Ok(ComplexVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                got,
            });
        }
        Ok(())
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Domain("matrix dimensions must be positive".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::Dimension {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(ComplexMatrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        ComplexMatrix { rows, cols, entries }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| {
            if r == c {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn diagonal(diag: &ComplexVector) -> Self {
        let n = diag.len();
        Self::from_fn(
            n,
            n,
            |r, c| {
                if r == c {
                    diag[r]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            },
        )
    }

    /// `u · v^H`.
    pub fn outer(u: &ComplexVector, v: &ComplexVector) -> Self {
        Self::from_fn(u.len(), v.len(), |r, c| u[r] * v[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> ComplexVector {
        ComplexVector(self.entries[r * self.cols..(r + 1) * self.cols].to_vec())
    }

    pub fn hermitian(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn scale_real(&self, k: f64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|v| v * k).collect(),
        }
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension {
                expected: self.entries.len(),
                got: other.entries.len(),
            });
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// `self · v`.
    pub fn mul_vec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if v.len() != self.cols {
            return Err(Error::Dimension {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok(ComplexVector::from_fn(self.rows, |r| {
            self.entries[r * self.cols..(r + 1) * self.cols]
                .iter()
                .zip(v.iter())
                .map(|(a, b)| a * b)
                .sum()
        }))
    }

    /// `row^T · self`, with `row` holding the entries of a row vector as-is.
    pub fn row_mul(&self, row: &ComplexVector) -> Result<ComplexVector> {
        if row.len() != self.rows {
            return Err(Error::Dimension {
                expected: self.rows,
                got: row.len(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.cols];
        for (r, w) in row.iter().enumerate() {
            for (o, a) in out
                .iter_mut()
                .zip(&self.entries[r * self.cols..(r + 1) * self.cols])
            {
                *o += w * a;
            }
        }
        Ok(ComplexVector(out))
    }

    pub fn mul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows * other.cols];
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                for c in 0..other.cols {
                    out[r * other.cols + c] += a * other.get(k, c);
                }
            }
        }
        ComplexMatrix::new(self.rows, other.cols, out)
    }
}

/// A power given in both dBm and linear milliwatts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLevel {
    dbm: f64,
    mw: f64,
}

impl PowerLevel {
    pub fn from_dbm(dbm: f64) -> Result<Self> {
        Ok(PowerLevel {
            dbm,
            mw: dbm_to_mw(dbm)?,
        })
    }

    pub fn from_mw(mw: f64) -> Result<Self> {
        Ok(PowerLevel {
            dbm: mw_to_dbm(mw)?,
            mw,
        })
    }

    pub fn dbm(&self) -> f64 {
        self.dbm
    }

    pub fn mw(&self) -> f64 {
        self.mw
    }
}

pub fn dbm_to_mw(dbm: f64) -> Result<f64> {
    if !dbm.is_finite() {
        return Err(Error::Domain(format!("power {dbm} dBm is not finite")));
    }
    Ok(10f64.powf(dbm / 10.0))
}

pub fn mw_to_dbm(mw: f64) -> Result<f64> {
    if !(mw.is_finite() && mw > 0.0) {
        return Err(Error::Domain(format!(
            "power {mw} mW must be positive and finite"
        )));
    }
    Ok(10.0 * mw.log10())
}

/// Linear ratio to decibels; zero maps to negative infinity.
pub fn to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}

/// Tail probability of the standard normal distribution, `P(X > u)`.
pub fn q_function(u: f64) -> Result<f64> {
    if !u.is_finite() {
        return Err(Error::Domain(format!("q_function argument {u} is not finite")));
    }
    Ok(0.5 * libm::erfc(u / SQRT_2))
}

#[cfg(test)]
pub(crate) mod oracle {
    //! Quadrature of the Gaussian density, independent of `erfc`.

    fn density(t: f64) -> f64 {
        (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt()
    }

    fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }

    #[allow(clippy::too_many_arguments)]
    fn adaptive(a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = density(lm);
        let frm = density(rm);
        let left = simpson(a, m, fa, flm, fm);
        let right = simpson(m, b, fm, frm, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        adaptive(a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + adaptive(m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }

    /// `∫_u^∞ φ(t) dt`, truncated at `t = 40` where the density is below 1e-340.
    pub fn q_integral(u: f64) -> f64 {
        let (a, b) = (u, 40.0);
        // Split at the mode so the adaptive rule never straddles the peak blindly.
        let mut total = 0.0;
        let mut edges = vec![a];
        for e in [-4.0, 0.0, 4.0, 10.0] {
            if e > a {
                edges.push(e);
            }
        }
        edges.push(b);
        for w in edges.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let (flo, fhi, fm) = (density(lo), density(hi), density(0.5 * (lo + hi)));
            let whole = simpson(lo, hi, flo, fm, fhi);
            total += adaptive(lo, hi, flo, fm, fhi, whole, 1e-15, 50);
        }
        total
    }
}
