//! Dense complex matrices sized for small Hilbert spaces.
//!
//! Storage is row-major. Composite indices decompose big-endian over the
//! subsystem dimensions: subsystem 0 is the leftmost (most significant)
//! tensor factor.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Entrywise tolerance on `max |H - H^dagger|`.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Smallest eigenvalue accepted as numerical noise around zero.
pub const PSD_TOL: f64 = 1e-9;

/// Eigenvalues below this are treated as exact zeros when taking logarithms.
pub const LOG_EPS: f64 = 1e-12;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Builds a square matrix from real row slices (test and fixture helper).
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| C64::new(x, 0.0)))
            .collect();
        Self::new(n, cols, data)
    }

    /// `|v><v|`
    pub fn outer(v: &[C64]) -> Self {
        Self::from_fn(v.len(), v.len(), |r, c| v[r] * v[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Entrywise `max |H - H^dagger|`; infinite for non-square input.
    pub fn hermiticity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// `(H + H^dagger) / 2`
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| {
            (self[(r, c)] + self[(c, r)].conj()) * 0.5
        })
    }

    /// `A B A^dagger`
    pub fn conjugate_by(&self, a: &Self) -> Self {
        &(a * self) * &a.adjoint()
    }

    /// Max-modulus entry of the commutator `[A, B]`.
    pub fn commutator_norm(&self, other: &Self) -> f64 {
        let ab = self * other;
        let ba = other * self;
        ab.max_abs_diff(&ba)
    }

    /// Deviation of `U^dagger U` from the identity, entrywise.
    pub fn unitarity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.rows))
    }

    /// `<v| M |v>`
    pub fn expectation(&self, v: &[C64]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..self.rows {
            let mut row = C64::new(0.0, 0.0);
            for c in 0..self.cols {
                row += self[(r, c)] * v[c];
            }
            acc += v[r].conj() * row;
        }
        acc
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<C64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    ComplexMatrix::from_fn(rows, cols, |r, c| {
        a[(r / b.rows, c / b.cols)] * b[(r % b.rows, c % b.cols)]
    })
}

/// Kronecker product of vectors.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `U diag(f(λ)) U^dagger`
    pub fn map_spectrum(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let u = &self.eigenvectors;
        let fl: Vec<C64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n).map(|k| u[(r, k)] * fl[k] * u[(c, k)].conj()).sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| C64::new(l, 0.0))
    }
}

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    if !h.is_square() {
        return Err(Error::NotSquare {
            rows: h.rows,
            cols: h.cols,
        });
    }
    let deviation = h.hermiticity_error();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// Hermitian eigendecomposition. The input is symmetrized before solving.
pub fn eigh(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    check_hermitian(h)?;
    let h = h.hermitian_part();
    Ok(match h.rows {
        1 => EigenDecomposition {
            eigenvalues: vec![h[(0, 0)].re],
            eigenvectors: ComplexMatrix::identity(1),
        },
        2 => eigh_2x2(h[(0, 0)].re, h[(0, 1)], h[(1, 1)].re),
        _ => {
            let eig = nalgebra::SymmetricEigen::new(h.to_nalgebra());
            let mut order: Vec<usize> = (0..h.rows).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
            let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
            let vecs = ComplexMatrix::from_nalgebra(&eig.eigenvectors);
            let eigenvectors = ComplexMatrix::from_fn(h.rows, h.rows, |r, c| vecs[(r, order[c])]);
            EigenDecomposition {
                eigenvalues,
                eigenvectors,
            }
        }
    })
}

/// Ascending eigenvalues only.
pub fn eigvalsh(h: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(h)?;
    Ok(eigvalsh_unchecked(h))
}

/// Eigenvalues of a matrix already known to be Hermitian up to roundoff.
pub(crate) fn eigvalsh_unchecked(h: &ComplexMatrix) -> Vec<f64> {
    match h.rows {
        1 => vec![h[(0, 0)].re],
        2 => {
            let (lo, hi) = eigvals_2x2(
                h[(0, 0)].re,
                (h[(0, 1)] + h[(1, 0)].conj()) * 0.5,
                h[(1, 1)].re,
            );
            vec![lo, hi]
        }
        _ => {
            let mut vals: Vec<f64> = h
                .hermitian_part()
                .to_nalgebra()
                .symmetric_eigenvalues()
                .iter()
                .copied()
                .collect();
            vals.sort_by(f64::total_cmp);
            vals
        }
    }
}

fn eigvals_2x2(a: f64, b: C64, c: f64) -> (f64, f64) {
    if b.re == 0.0 && b.im == 0.0 {
        return (a.min(c), a.max(c));
    }
    let mean = 0.5 * (a + c);
    let half_gap = 0.5 * (a - c);
    let r = half_gap.hypot(b.norm());
    (mean - r, mean + r)
}

// [[a, b], [b*, c]]
fn eigh_2x2(a: f64, b: C64, c: f64) -> EigenDecomposition {
    let (lo, hi) = eigvals_2x2(a, b, c);
    if b.norm() == 0.0 {
        let (vlo, vhi) = if a <= c { (0, 1) } else { (1, 0) };
        let eigenvectors = ComplexMatrix::from_fn(2, 2, |r, col| {
            let which = if col == 0 { vlo } else { vhi };
            C64::new(if r == which { 1.0 } else { 0.0 }, 0.0)
        });
        return EigenDecomposition {
            eigenvalues: vec![lo, hi],
            eigenvectors,
        };
    }
    let vector = |l: f64| -> [C64; 2] {
        let v1 = [b, C64::new(l - a, 0.0)];
        let v2 = [C64::new(l - c, 0.0), b.conj()];
        let n1 = (v1[0].norm_sqr() + v1[1].norm_sqr()).sqrt();
        let n2 = (v2[0].norm_sqr() + v2[1].norm_sqr()).sqrt();
        if n1 >= n2 {
            [v1[0] / n1, v1[1] / n1]
        } else {
            [v2[0] / n2, v2[1] / n2]
        }
    };
    let u = vector(lo);
    let w = vector(hi);
    EigenDecomposition {
        eigenvalues: vec![lo, hi],
        eigenvectors: ComplexMatrix {
            rows: 2,
            cols: 2,
            data: vec![u[0], w[0], u[1], w[1]],
        },
    }
}

fn check_dims(dim: usize, dims: &[usize]) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dimensions {dims:?} must be a nonempty list of positive integers"
        )));
    }
    let total: usize = dims.iter().product();
    if total != dim {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dimensions {dims:?} multiply to {total}, matrix is {dim}x{dim}"
        )));
    }
    Ok(())
}

/// Traces out every subsystem not listed in `keep`. Kept subsystems retain
/// their original relative order.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    check_dims(m.rows, dims)?;
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() {
        return Err(Error::DimensionMismatch(
            "partial trace needs at least one kept subsystem".into(),
        ));
    }
    if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::DimensionMismatch(format!(
            "subsystem index {bad} out of range for {} subsystems",
            dims.len()
        )));
    }

    let n = m.rows;
    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
    // Split every composite index into (kept part, traced part).
    let mut kept_idx = vec![0usize; n];
    let mut traced_idx = vec![0usize; n];
    for (full, (ki, ti)) in kept_idx.iter_mut().zip(traced_idx.iter_mut()).enumerate() {
        let mut rem = full;
        let mut kstride = 1;
        let mut tstride = 1;
        for s in (0..dims.len()).rev() {
            let digit = rem % dims[s];
            rem /= dims[s];
            if keep.binary_search(&s).is_ok() {
                *ki += digit * kstride;
                kstride *= dims[s];
            } else {
                *ti += digit * tstride;
                tstride *= dims[s];
            }
        }
    }

    let mut out = ComplexMatrix::zeros(kept_dim, kept_dim);
    for r in 0..n {
        for c in 0..n {
            if traced_idx[r] == traced_idx[c] {
                out[(kept_idx[r], kept_idx[c])] += m[(r, c)];
            }
        }
    }
    Ok(out)
}

/// Base-2 logarithm of a positive-semidefinite matrix, restricted to its
/// support: eigenvalues below `eps` contribute 0 instead of `-inf`.
pub fn log2_psd(s: &ComplexMatrix, eps: f64) -> Result<ComplexMatrix> {
    let eig = eigh(s)?;
    log2_from_eigen(&eig, eps)
}

pub(crate) fn log2_from_eigen(eig: &EigenDecomposition, eps: f64) -> Result<ComplexMatrix> {
    if let Some(&min) = eig.eigenvalues.first() {
        if min < -PSD_TOL {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
    }
    Ok(eig.map_spectrum(|l| {
        if l < eps {
            C64::new(0.0, 0.0)
        } else {
            C64::new(l.log2(), 0.0)
        }
    }))
}

/// `exp(i H)` for Hermitian `H`, via the spectral decomposition.
pub fn expi_hermitian(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eigh(h)?;
    Ok(eig.map_spectrum(|l| C64::new(l.cos(), l.sin())))
}
