//! Dense complex linear algebra for bipartite operators.
//!
//! Everything operates on [`CMatrix`] values (dense `Complex<f64>` entries)
//! and is a pure function of its inputs. The bipartite structure of a
//! d1*d2-dimensional space is carried explicitly by [`BipartiteShape`] so the
//! index bookkeeping for realignment, partial transposition, and partial
//! traces lives in one place. Composite indices are row-major throughout:
//! the basis vector `|i> ⊗ |k>` of the joint space sits at position
//! `i*d2 + k`.

use std::fmt;

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

/// Complex double-precision scalar.
pub type C64 = Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = DVector<C64>;

/// Per-entry absolute tolerance for Hermiticity checks.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Singular values below this fraction of the largest one count as zero.
pub const SV_RELATIVE_TOL: f64 = 1e-12;

const SVD_MAX_ITER: usize = 10_000;

#[inline]
pub(crate) fn cr(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Dimensions (d1, d2) of the two tensor factors of a bipartite space.
///
/// Both factors must be at least two-dimensional. The analytic threshold
/// formulas additionally assume d1 <= d2; [`BipartiteShape::ordered`] gives
/// the swapped shape when an unordered one is in hand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BipartiteShape {
    d1: usize,
    d2: usize,
}

impl BipartiteShape {
    pub fn new(d1: usize, d2: usize) -> Result<Self> {
        if d1 < 2 || d2 < 2 {
            return Err(Error::InvalidParameter {
                name: "shape",
                message: format!("factor dimensions must be at least 2, got ({d1}, {d2})"),
            });
        }
        Ok(Self { d1, d2 })
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    /// Dimension d1*d2 of the joint space.
    pub fn total(&self) -> usize {
        self.d1 * self.d2
    }

    /// Whether d1 <= d2, the ordering the threshold formulas assume.
    pub fn is_ordered(&self) -> bool {
        self.d1 <= self.d2
    }

    /// The shape with the two factors exchanged.
    pub fn swapped(self) -> Self {
        Self {
            d1: self.d2,
            d2: self.d1,
        }
    }

    /// This shape if d1 <= d2, otherwise the swapped one.
    pub fn ordered(self) -> Self {
        if self.is_ordered() {
            self
        } else {
            self.swapped()
        }
    }

    pub(crate) fn require_ordered(&self) -> Result<()> {
        if self.is_ordered() {
            Ok(())
        } else {
            Err(Error::UnorderedShape {
                d1: self.d1,
                d2: self.d2,
            })
        }
    }

    pub(crate) fn require_joint(&self, m: &CMatrix, context: &'static str) -> Result<()> {
        let n = self.total();
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::DimensionMismatch {
                context,
                expected: format!("{n}x{n}"),
                got: format!("{}x{}", m.nrows(), m.ncols()),
            });
        }
        Ok(())
    }
}

impl fmt::Display for BipartiteShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.d1, self.d2)
    }
}

/// Selects one tensor factor for partial operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    First,
    Second,
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Row-major vectorization: `vectorize(a)[i*cols + j] = a[(i, j)]`.
///
/// With this convention the Euclidean inner product of vectorizations equals
/// the Hilbert-Schmidt inner product, `<vec A, vec B> = Tr(A^H B)`.
pub fn vectorize(a: &CMatrix) -> CVector {
    let cols = a.ncols();
    CVector::from_fn(a.nrows() * cols, |k, _| a[(k / cols, k % cols)])
}

/// Realignment of a bipartite operator.
///
/// The (d1*d2)x(d1*d2) input is rearranged into the d1^2 x d2^2 matrix with
/// entries `R[(i*d1 + j, k*d2 + l)] = rho[(i*d2 + k, j*d2 + l)]`. This is a
/// pure permutation of entries (it preserves the Frobenius norm), and on
/// product operators it acts as `R(A ⊗ B) = vec(A) vec(B)^T` in terms of the
/// row-major [`vectorize`].
pub fn realign(rho: &CMatrix, shape: BipartiteShape) -> Result<CMatrix> {
    shape.require_joint(rho, "realign")?;
    let (d1, d2) = (shape.d1(), shape.d2());
    Ok(CMatrix::from_fn(d1 * d1, d2 * d2, |r, c| {
        let (i, j) = (r / d1, r % d1);
        let (k, l) = (c / d2, c % d2);
        rho[(i * d2 + k, j * d2 + l)]
    }))
}

/// Transposes one tensor factor of a bipartite operator.
pub fn partial_transpose(rho: &CMatrix, shape: BipartiteShape, factor: Factor) -> Result<CMatrix> {
    shape.require_joint(rho, "partial_transpose")?;
    let d2 = shape.d2();
    let n = shape.total();
    Ok(CMatrix::from_fn(n, n, |r, c| {
        let (i, k) = (r / d2, r % d2);
        let (j, l) = (c / d2, c % d2);
        match factor {
            Factor::First => rho[(j * d2 + k, i * d2 + l)],
            Factor::Second => rho[(i * d2 + l, j * d2 + k)],
        }
    }))
}

/// Traces out one tensor factor, keeping the other.
///
/// `keep` names the factor that survives: `Factor::First` returns the d1 x d1
/// reduction, `Factor::Second` the d2 x d2 one. The trace of the input is
/// preserved.
pub fn partial_trace(rho: &CMatrix, shape: BipartiteShape, keep: Factor) -> Result<CMatrix> {
    shape.require_joint(rho, "partial_trace")?;
    let (d1, d2) = (shape.d1(), shape.d2());
    let out = match keep {
        Factor::First => CMatrix::from_fn(d1, d1, |i, j| {
            (0..d2).map(|k| rho[(i * d2 + k, j * d2 + k)]).sum()
        }),
        Factor::Second => CMatrix::from_fn(d2, d2, |k, l| {
            (0..d1).map(|i| rho[(i * d2 + k, i * d2 + l)]).sum()
        }),
    };
    Ok(out)
}

/// Singular values in descending order.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    let svd = a
        .clone()
        .try_svd(false, false, f64::EPSILON, SVD_MAX_ITER)
        .ok_or_else(|| {
            Error::Numerical(format!(
                "SVD did not converge for a {}x{} matrix",
                a.nrows(),
                a.ncols()
            ))
        })?;
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    Ok(sv)
}

/// Trace norm (sum of singular values).
pub fn trace_norm(a: &CMatrix) -> Result<f64> {
    Ok(singular_values(a)?.iter().sum())
}

/// Number of singular values above `SV_RELATIVE_TOL` times the largest.
pub fn numerical_rank(singular_values: &[f64]) -> usize {
    match singular_values.first() {
        Some(&top) if top > 0.0 => singular_values
            .iter()
            .filter(|&&s| s > top * SV_RELATIVE_TOL)
            .count(),
        _ => 0,
    }
}

/// Largest entrywise deviation of `a` from its own adjoint.
///
/// Returns infinity for non-square input.
pub fn hermiticity_residual(a: &CMatrix) -> f64 {
    if a.nrows() != a.ncols() {
        return f64::INFINITY;
    }
    let adj = a.adjoint();
    (a - adj).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Rejects input whose Hermiticity residual exceeds [`HERMITICITY_TOL`].
pub fn hermitian_spectrum(a: &CMatrix) -> Result<Vec<f64>> {
    let residual = hermiticity_residual(a);
    if residual > HERMITICITY_TOL || residual.is_nan() {
        return Err(Error::NotHermitian { residual });
    }
    let eig = a
        .clone()
        .try_symmetric_eigen(f64::EPSILON, SVD_MAX_ITER)
        .ok_or_else(|| {
            Error::Numerical(format!(
                "eigendecomposition did not converge for a {}x{} matrix",
                a.nrows(),
                a.ncols()
            ))
        })?;
    let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Errors unless every entry of `a` is finite.
pub fn ensure_finite(a: &CMatrix) -> Result<()> {
    if a.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Numerical(
            "matrix contains non-finite entries".to_string(),
        ))
    }
}
