//! Bipartite density matrices and the state families used for threshold
//! studies, plus seeded random-state generators for verification runs.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{
    cr, ensure_finite, hermitian_spectrum, hermiticity_residual, kron, partial_trace,
    BipartiteShape, CMatrix, CVector, Factor, C64, HERMITICITY_TOL,
};

/// Absolute tolerance on |Tr(rho) - 1| at construction.
pub const TRACE_TOL: f64 = 1e-10;
/// A state is accepted as positive semidefinite when its smallest eigenvalue
/// is at least `-PSD_TOL`.
pub const PSD_TOL: f64 = 1e-12;

/// A validated bipartite density matrix.
///
/// Construction checks finiteness, Hermiticity, unit trace, and positive
/// semidefiniteness, so downstream code can rely on those properties.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: CMatrix,
    shape: BipartiteShape,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix, shape: BipartiteShape) -> Result<Self> {
        shape.require_joint(&matrix, "DensityMatrix::new")?;
        ensure_finite(&matrix)?;
        let residual = hermiticity_residual(&matrix);
        if residual > HERMITICITY_TOL || residual.is_nan() {
            return Err(Error::NotHermitian { residual });
        }
        let trace = matrix.trace();
        if (trace - cr(1.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidParameter {
                name: "matrix",
                message: format!("trace must be 1, got {} + {}i", trace.re, trace.im),
            });
        }
        let eigenvalues = hermitian_spectrum(&matrix)?;
        let min_eigenvalue = eigenvalues[0];
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue });
        }
        Ok(Self { matrix, shape })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn shape(&self) -> BipartiteShape {
        self.shape
    }

    /// Reduced state on the kept factor.
    pub fn marginal(&self, keep: Factor) -> CMatrix {
        partial_trace(&self.matrix, self.shape, keep)
            .expect("validated state has consistent dimensions")
    }
}

/// Tr(rho^2) of a Hermitian matrix, via the squared Frobenius norm.
pub fn purity(rho: &CMatrix) -> f64 {
    rho.norm().powi(2)
}

/// Mixing parameters of the generalized isotropic family.
#[derive(Debug, Clone, Copy)]
pub struct IsotropicParams {
    pub shape: BipartiteShape,
    pub p: f64,
}

/// Mixing parameters of the Werner-like family.
#[derive(Debug, Clone, Copy)]
pub struct WernerParams {
    pub shape: BipartiteShape,
    pub q: f64,
}

/// Unit vector (1/sqrt(d1)) * sum_i |e_i> ⊗ |f_i>, where |f_i> are the first
/// d1 computational basis vectors of the second factor.
///
/// Requires d1 <= d2 so the embedding exists.
pub fn max_entangled_vector(shape: BipartiteShape) -> Result<CVector> {
    shape.require_ordered()?;
    let (d1, d2) = (shape.d1(), shape.d2());
    let amp = cr(1.0 / (d1 as f64).sqrt());
    let mut psi = CVector::zeros(shape.total());
    for i in 0..d1 {
        psi[i * d2 + i] = amp;
    }
    Ok(psi)
}

/// Generalized isotropic state: (1-p)/(d1 d2) * I + p |psi><psi| with |psi>
/// the embedded maximally entangled vector.
///
/// Requires d1 <= d2 and p in [0, 1].
pub fn isotropic(params: IsotropicParams) -> Result<DensityMatrix> {
    let IsotropicParams { shape, p } = params;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter {
            name: "p",
            message: format!("mixing parameter must lie in [0, 1], got {p}"),
        });
    }
    let psi = max_entangled_vector(shape)?;
    let n = shape.total();
    let mut rho = CMatrix::identity(n, n).scale((1.0 - p) / n as f64);
    rho += (&psi * psi.adjoint()).scale(p);
    DensityMatrix::new(rho, shape)
}

/// Werner-like mixture: (1-q)/(d1 d2) * I + (q/d1) * sum_ij |e_i><e_j| ⊗ |f_j><f_i|.
///
/// The second term is the swap operator on the d1-dimensional block embedded
/// in the second factor. No closed validity range for q is assumed;
/// positivity is checked numerically and a violation is reported with the
/// offending eigenvalue.
pub fn werner_like(params: WernerParams) -> Result<DensityMatrix> {
    let WernerParams { shape, q } = params;
    shape.require_ordered()?;
    let (d1, d2) = (shape.d1(), shape.d2());
    let n = shape.total();
    let mut rho = CMatrix::identity(n, n).scale((1.0 - q) / n as f64);
    let w = cr(q / d1 as f64);
    for i in 0..d1 {
        for j in 0..d1 {
            rho[(i * d2 + j, j * d2 + i)] += w;
        }
    }
    DensityMatrix::new(rho, shape)
}

/// Reduced states (Tr_2 rho_p, Tr_1 rho_p) of the isotropic family.
///
/// The first marginal is maximally mixed. The second equals
/// (1-p)/d2 * I + (p/d1) * sum_{i<d1} |f_i><f_i|; note the identity part is
/// weighted by 1/d2, which is what unit trace forces.
pub fn isotropic_marginals(params: IsotropicParams) -> Result<(CMatrix, CMatrix)> {
    let rho = isotropic(params)?;
    Ok((rho.marginal(Factor::First), rho.marginal(Factor::Second)))
}

/// Haar-like random unit vector with complex Gaussian entries.
pub fn random_pure_state(dim: usize, rng: &mut impl Rng) -> CVector {
    let mut v = CVector::from_fn(dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let norm = v.norm();
    v /= cr(norm);
    v
}

/// Random full-rank density matrix G G^H / Tr(G G^H) with Gaussian G.
pub fn random_density_matrix(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let gram = &g * g.adjoint();
    let trace = gram.trace().re;
    gram.scale(1.0 / trace)
}

/// Random bipartite state with no special structure.
pub fn random_bipartite_density(shape: BipartiteShape, rng: &mut impl Rng) -> Result<DensityMatrix> {
    DensityMatrix::new(random_density_matrix(shape.total(), rng), shape)
}

/// Random product state rho_A ⊗ rho_B with full-rank factors.
pub fn random_product_density(shape: BipartiteShape, rng: &mut impl Rng) -> Result<DensityMatrix> {
    let a = random_density_matrix(shape.d1(), rng);
    let b = random_density_matrix(shape.d2(), rng);
    DensityMatrix::new(kron(&a, &b), shape)
}

/// Random separable state: a mixture of at most `max_terms` pure product
/// states with random weights.
pub fn random_separable_density(
    shape: BipartiteShape,
    max_terms: usize,
    rng: &mut impl Rng,
) -> Result<DensityMatrix> {
    if max_terms == 0 {
        return Err(Error::InvalidParameter {
            name: "max_terms",
            message: "need at least one product term".to_string(),
        });
    }
    let terms = rng.gen_range(1..=max_terms);
    let mut weights: Vec<f64> = (0..terms)
        .map(|_| -(1.0 - rng.gen::<f64>()).ln())
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let n = shape.total();
    let mut rho = CMatrix::zeros(n, n);
    for &w in &weights {
        let a = random_pure_state(shape.d1(), rng);
        let b = random_pure_state(shape.d2(), rng);
        let prod = kron(&(&a * a.adjoint()), &(&b * b.adjoint()));
        rho += prod.scale(w);
    }
    DensityMatrix::new(rho, shape)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::partial_transpose;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn max_entry_diff(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn max_entangled_vector_in_matching_dimensions() {
        let shape = BipartiteShape::new(2, 2).unwrap();
        let psi = max_entangled_vector(shape).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(max_entry_diff(
            &CMatrix::from_column_slice(4, 1, psi.as_slice()),
            &CMatrix::from_column_slice(4, 1, &[cr(s), cr(0.0), cr(0.0), cr(s)]),
        ) < 1e-15);
    }

    #[test]
    fn max_entangled_vector_embeds_into_the_larger_factor() {
        let shape = BipartiteShape::new(2, 3).unwrap();
        let psi = max_entangled_vector(shape).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expect = [cr(s), cr(0.0), cr(0.0), cr(0.0), cr(s), cr(0.0)];
        for (got, want) in psi.iter().zip(expect.iter()) {
            assert!((got - want).norm() < 1e-15);
        }
        assert!(max_entangled_vector(shape.swapped()).is_err());
    }

    #[test]
    fn isotropic_endpoints() {
        let shape = BipartiteShape::new(3, 3).unwrap();
        let rho0 = isotropic(IsotropicParams { shape, p: 0.0 }).unwrap();
        assert!(max_entry_diff(rho0.matrix(), &CMatrix::identity(9, 9).scale(1.0 / 9.0)) < 1e-15);

        let rho1 = isotropic(IsotropicParams { shape, p: 1.0 }).unwrap();
        let ev = hermitian_spectrum(rho1.matrix()).unwrap();
        assert_abs_diff_eq!(ev[8], 1.0, epsilon = 1e-12);
        assert!(ev[7].abs() < 1e-12);
    }

    #[test]
    fn isotropic_rejects_p_outside_unit_interval() {
        let shape = BipartiteShape::new(2, 2).unwrap();
        assert!(isotropic(IsotropicParams { shape, p: -0.1 }).is_err());
        assert!(isotropic(IsotropicParams { shape, p: 1.1 }).is_err());
    }

    #[test]
    fn isotropic_partial_transpose_hits_zero_at_the_boundary() {
        let shape = BipartiteShape::new(3, 3).unwrap();
        let rho = isotropic(IsotropicParams { shape, p: 0.25 }).unwrap();
        let pt = partial_transpose(rho.matrix(), shape, Factor::Second).unwrap();
        let min = hermitian_spectrum(&pt).unwrap()[0];
        assert!(min.abs() < 1e-12);
    }

    #[test]
    fn werner_like_is_hermitian_and_normalized() {
        let shape = BipartiteShape::new(2, 2).unwrap();
        for q in [-0.3, 0.0, 0.2, 1.0 / 3.0] {
            let rho = werner_like(WernerParams { shape, q }).unwrap();
            assert!(hermiticity_residual(rho.matrix()) < 1e-14);
            assert!((rho.matrix().trace() - cr(1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn werner_like_reports_positivity_violations() {
        let shape = BipartiteShape::new(2, 2).unwrap();
        match werner_like(WernerParams { shape, q: 0.9 }) {
            Err(Error::NotPositiveSemidefinite { min_eigenvalue }) => {
                // exact value: (1-q)/4 - q/2 = -0.425
                assert_abs_diff_eq!(min_eigenvalue, -0.425, epsilon = 1e-10);
            }
            other => panic!("expected positivity failure, got {other:?}"),
        }
    }

    #[test]
    fn isotropic_marginals_match_closed_forms() {
        let shape = BipartiteShape::new(2, 3).unwrap();
        let p = 0.2;
        let (m1, m2) = isotropic_marginals(IsotropicParams { shape, p }).unwrap();

        assert!(max_entry_diff(&m1, &CMatrix::identity(2, 2).scale(0.5)) < 1e-12);

        let mut expect = CMatrix::identity(3, 3).scale((1.0 - p) / 3.0);
        for i in 0..2 {
            expect[(i, i)] += cr(p / 2.0);
        }
        assert!(max_entry_diff(&m2, &expect) < 1e-12);
        assert!((m2.trace() - cr(1.0)).norm() < 1e-12);

        let (u1, u2) = isotropic_marginals(IsotropicParams { shape, p: 0.0 }).unwrap();
        assert!(max_entry_diff(&u1, &CMatrix::identity(2, 2).scale(0.5)) < 1e-15);
        assert!(max_entry_diff(&u2, &CMatrix::identity(3, 3).scale(1.0 / 3.0)) < 1e-15);
    }

    #[test]
    fn density_matrix_validation_rejects_bad_input() {
        let shape = BipartiteShape::new(2, 2).unwrap();
        // wrong trace
        assert!(DensityMatrix::new(CMatrix::identity(4, 4), shape).is_err());
        // not PSD
        let mut m = CMatrix::identity(4, 4).scale(0.5);
        m[(2, 2)] = cr(-0.25);
        m[(3, 3)] = cr(0.25);
        assert!(matches!(
            DensityMatrix::new(m, shape),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
        // not Hermitian
        let mut m = CMatrix::identity(4, 4).scale(0.25);
        m[(0, 1)] = cr(0.3);
        assert!(matches!(
            DensityMatrix::new(m, shape),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn random_generators_produce_valid_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let shape = BipartiteShape::new(3, 4).unwrap();
        for _ in 0..10 {
            let psi = random_pure_state(5, &mut rng);
            assert_abs_diff_eq!(psi.norm(), 1.0, epsilon = 1e-12);
            random_bipartite_density(shape, &mut rng).unwrap();
            random_product_density(shape, &mut rng).unwrap();
            random_separable_density(shape, 20, &mut rng).unwrap();
        }
    }

    #[test]
    fn purity_of_known_states() {
        let id = CMatrix::identity(4, 4).scale(0.25);
        assert_abs_diff_eq!(purity(&id), 0.25, epsilon = 1e-14);
        let shape = BipartiteShape::new(2, 2).unwrap();
        let pure = isotropic(IsotropicParams { shape, p: 1.0 }).unwrap();
        assert_abs_diff_eq!(purity(pure.matrix()), 1.0, epsilon = 1e-12);
    }
}
