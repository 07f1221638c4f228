//! Orthonormal Hermitian operator bases and correlation matrices of
//! bipartite states.
//!
//! A canonical basis here is any Hermitian operator basis that is orthonormal
//! under the Hilbert-Schmidt inner product and whose zeroth element is
//! I/sqrt(d); the remaining d^2 - 1 elements are then traceless. The
//! correlation matrix collects C[a, b] = Tr(rho (G_a ⊗ G_b)) over such bases
//! for the two factors. Its singular values do not depend on which canonical
//! basis is chosen, which the rotated variant exists to exercise.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{cr, realign, vectorize, BipartiteShape, CMatrix, C64};
use crate::states::DensityMatrix;

/// Hermitian operator basis, orthonormal with identity-proportional zeroth
/// element.
#[derive(Debug, Clone)]
pub struct OperatorBasis {
    dim: usize,
    tag: String,
    elements: Vec<CMatrix>,
}

impl OperatorBasis {
    /// Generalized Gell-Mann basis of dimension d, ordered as the identity
    /// element, the symmetric pair elements (i < j, lexicographic), the
    /// antisymmetric pair elements (same order), and the d - 1 diagonal
    /// elements. For d = 2 this is the Pauli basis scaled by 1/sqrt(2).
    pub fn gell_mann(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter {
                name: "dim",
                message: format!("basis dimension must be at least 2, got {dim}"),
            });
        }
        let d = dim;
        let mut elements = Vec::with_capacity(d * d);
        elements.push(CMatrix::identity(d, d).scale(1.0 / (d as f64).sqrt()));

        let s = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..d {
            for j in (i + 1)..d {
                let mut m = CMatrix::zeros(d, d);
                m[(i, j)] = cr(s);
                m[(j, i)] = cr(s);
                elements.push(m);
            }
        }
        for i in 0..d {
            for j in (i + 1)..d {
                let mut m = CMatrix::zeros(d, d);
                m[(i, j)] = C64::new(0.0, -s);
                m[(j, i)] = C64::new(0.0, s);
                elements.push(m);
            }
        }
        for l in 1..d {
            let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
            let mut m = CMatrix::zeros(d, d);
            for k in 0..l {
                m[(k, k)] = cr(norm);
            }
            m[(l, l)] = cr(-(l as f64) * norm);
            elements.push(m);
        }

        Ok(Self {
            dim,
            tag: format!("gell-mann({dim})"),
            elements,
        })
    }

    /// Gell-Mann basis with its traceless sector mixed by a random orthogonal
    /// matrix. The result is again canonical (Hermitian, orthonormal,
    /// identity-proportional zeroth element), so criterion values must not
    /// change under this substitution.
    pub fn rotated_canonical(dim: usize, rng: &mut impl Rng) -> Result<Self> {
        let base = Self::gell_mann(dim)?;
        let n = dim * dim - 1;
        let gauss = nalgebra::DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
        let q = gauss.qr().q();

        let d = dim;
        let mut elements = Vec::with_capacity(d * d);
        elements.push(base.elements[0].clone());
        for a in 0..n {
            let mut m = CMatrix::zeros(d, d);
            for b in 0..n {
                m += base.elements[1 + b].clone().scale(q[(b, a)]);
            }
            elements.push(m);
        }

        Ok(Self {
            dim,
            tag: format!("rotated-canonical({dim})"),
            elements,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    /// Largest deviation of the Gram matrix Tr(G_a^H G_b) from the identity.
    pub fn orthonormality_residual(&self) -> f64 {
        let frame = self.vector_frame();
        let gram = frame.adjoint() * &frame;
        let n = self.dim * self.dim;
        (gram - CMatrix::identity(n, n))
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// d^2 x d^2 matrix whose a-th column is the vectorized a-th element.
    pub(crate) fn vector_frame(&self) -> CMatrix {
        let n = self.dim * self.dim;
        let mut frame = CMatrix::zeros(n, n);
        for (a, g) in self.elements.iter().enumerate() {
            frame.set_column(a, &vectorize(g));
        }
        frame
    }
}

/// Correlation matrix C[a, b] = Tr(rho (G_a ⊗ G_b)) of a bipartite state.
///
/// The identity-row/column scaling factors are held separately and applied
/// when the entries are materialized, so repeated scalings compose exactly.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    shape: BipartiteShape,
    base: CMatrix,
    x: f64,
    y: f64,
    basis_tag: String,
}

impl CorrelationMatrix {
    pub fn shape(&self) -> BipartiteShape {
        self.shape
    }

    /// Scaling applied to the row of the identity-proportional first-factor
    /// element.
    pub fn x(&self) -> f64 {
        self.x
    }

    /// Scaling applied to the column of the identity-proportional
    /// second-factor element.
    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn basis_tag(&self) -> &str {
        &self.basis_tag
    }

    /// The d1^2 x d2^2 entries with the pending scalings applied: row 0 is
    /// multiplied by x, column 0 by y, the corner by both.
    pub fn entries(&self) -> CMatrix {
        let mut m = self.base.clone();
        let xs = cr(self.x);
        let ys = cr(self.y);
        for j in 0..m.ncols() {
            m[(0, j)] *= xs;
        }
        for i in 0..m.nrows() {
            m[(i, 0)] *= ys;
        }
        m
    }

    /// Largest absolute imaginary part across entries. Small for Hermitian
    /// states and Hermitian basis elements, up to rounding.
    pub fn max_imaginary_part(&self) -> f64 {
        self.base.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }
}

/// Correlation matrix of `rho` in the given bases.
///
/// Computed through the realignment: Tr(rho (G_a ⊗ G_b)) equals
/// vec(G_a^T)^T R(rho) vec(G_b^T), and for Hermitian elements
/// vec(G^T) = conj(vec(G)), so C = U^H R(rho) conj(V) with U, V the
/// vectorized basis frames. This gives the same values as the defining
/// trace in far fewer operations.
pub fn correlation_matrix(
    rho: &DensityMatrix,
    basis1: &OperatorBasis,
    basis2: &OperatorBasis,
) -> Result<CorrelationMatrix> {
    let shape = rho.shape();
    if basis1.dim() != shape.d1() || basis2.dim() != shape.d2() {
        return Err(Error::DimensionMismatch {
            context: "correlation_matrix",
            expected: format!("bases of dimensions {} and {}", shape.d1(), shape.d2()),
            got: format!("{} and {}", basis1.dim(), basis2.dim()),
        });
    }
    let r = realign(rho.matrix(), shape)?;
    let u = basis1.vector_frame();
    let v = basis2.vector_frame();
    let base = u.adjoint() * r * v.conjugate();
    Ok(CorrelationMatrix {
        shape,
        base,
        x: 1.0,
        y: 1.0,
        basis_tag: format!("{}|{}", basis1.tag(), basis2.tag()),
    })
}

/// Applies the identity-row/column scaling (x, y) on top of any scaling
/// already pending on `c`. Factors must be nonnegative.
pub fn scale_correlation(c: &CorrelationMatrix, x: f64, y: f64) -> Result<CorrelationMatrix> {
    if x < 0.0 || y < 0.0 || x.is_nan() || y.is_nan() {
        return Err(Error::InvalidParameter {
            name: "scaling",
            message: format!("scale factors must be nonnegative, got ({x}, {y})"),
        });
    }
    let mut scaled = c.clone();
    scaled.x *= x;
    scaled.y *= y;
    Ok(scaled)
}

/// Separability bound for one factor: N(x, d) = sqrt((d - 1 + x^2) / d).
pub fn norm_bound_factor(x: f64, d: usize) -> f64 {
    let df = d as f64;
    ((df - 1.0 + x * x) / df).sqrt()
}

/// Separability bound N(x, d1) * N(y, d2) on the trace norm of the scaled
/// correlation matrix of any separable state.
pub fn norm_bound(x: f64, y: f64, shape: BipartiteShape) -> f64 {
    norm_bound_factor(x, shape.d1()) * norm_bound_factor(y, shape.d2())
}
