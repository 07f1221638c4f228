//! Separability tests on bipartite states and numerical detection
//! thresholds along one-parameter state families.
//!
//! Each test produces a [`CriterionReport`] with the two sides of its
//! inequality and a detection verdict. A state is reported as detected
//! (necessarily entangled) only when the left side exceeds the right by more
//! than [`DETECTION_TOL`]; margins inside the tolerance band count as
//! boundary cases and are not detections.

use crate::bases::{correlation_matrix, norm_bound, scale_correlation, OperatorBasis};
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_spectrum, kron, partial_trace, partial_transpose, realign, trace_norm,
    BipartiteShape, Factor,
};
use crate::states::{purity, DensityMatrix};

/// Margin above which a criterion value counts as a detection.
pub const DETECTION_TOL: f64 = 1e-9;
/// Absolute width to which threshold bisection shrinks its bracket.
pub const BISECTION_TOL: f64 = 1e-10;

/// Nonnegative scaling pair (x, y) selecting one member of the criterion
/// family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionParams {
    x: f64,
    y: f64,
}

impl CriterionParams {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x >= 0.0 && x.is_finite()) || !(y >= 0.0 && y.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "params",
                message: format!("criterion parameters must be finite and nonnegative, got ({x}, {y})"),
            });
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }
}

/// Criterion-family members with standard names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedCriterion {
    /// de Vicente point (0, 0).
    DeVicente,
    /// Plain realignment point (1, 1).
    Ccnr,
    /// The point (sqrt(2/d1), sqrt(2/d2)).
    Fei,
    /// The point (sqrt(d1 + 1), sqrt(d2 + 1)).
    Esic,
}

impl NamedCriterion {
    pub const ALL: [NamedCriterion; 4] = [
        NamedCriterion::DeVicente,
        NamedCriterion::Ccnr,
        NamedCriterion::Fei,
        NamedCriterion::Esic,
    ];

    pub fn label(self) -> &'static str {
        match self {
            NamedCriterion::DeVicente => "dV",
            NamedCriterion::Ccnr => "CCNR",
            NamedCriterion::Fei => "Fei",
            NamedCriterion::Esic => "ESIC",
        }
    }

    /// The (x, y) point this criterion occupies for the given shape.
    pub fn params(self, shape: BipartiteShape) -> CriterionParams {
        let (d1, d2) = (shape.d1() as f64, shape.d2() as f64);
        let (x, y) = match self {
            NamedCriterion::DeVicente => (0.0, 0.0),
            NamedCriterion::Ccnr => (1.0, 1.0),
            NamedCriterion::Fei => ((2.0 / d1).sqrt(), (2.0 / d2).sqrt()),
            NamedCriterion::Esic => ((d1 + 1.0).sqrt(), (d2 + 1.0).sqrt()),
        };
        CriterionParams { x, y }
    }
}

/// Outcome of one criterion evaluation.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    /// Which test produced this report.
    pub criterion_id: String,
    /// Left side of the inequality (the entanglement witness value).
    pub lhs: f64,
    /// Right side (the separability bound).
    pub rhs: f64,
    /// lhs - rhs.
    pub margin: f64,
    /// Whether the margin exceeds [`DETECTION_TOL`].
    pub detected: bool,
}

impl CriterionReport {
    fn new(criterion_id: String, lhs: f64, rhs: f64) -> Self {
        let margin = lhs - rhs;
        Self {
            criterion_id,
            lhs,
            rhs,
            margin,
            detected: margin > DETECTION_TOL,
        }
    }

    /// Whether the margin sits inside the tolerance band around zero.
    pub fn is_boundary(&self) -> bool {
        self.margin.abs() <= DETECTION_TOL
    }
}

/// Evaluates the (x, y) scaled-correlation test: the trace norm of the
/// scaled correlation matrix against the separability bound N(x, d1) N(y, d2).
pub fn xy_criterion(rho: &DensityMatrix, params: &CriterionParams) -> Result<CriterionReport> {
    let shape = rho.shape();
    let b1 = OperatorBasis::gell_mann(shape.d1())?;
    let b2 = OperatorBasis::gell_mann(shape.d2())?;
    let c = correlation_matrix(rho, &b1, &b2)?;
    let scaled = scale_correlation(&c, params.x(), params.y())?;
    let lhs = trace_norm(&scaled.entries())?;
    let rhs = norm_bound(params.x(), params.y(), shape);
    Ok(CriterionReport::new(
        format!("XY(x={}, y={})", params.x(), params.y()),
        lhs,
        rhs,
    ))
}

/// Evaluates a named member of the criterion family.
pub fn named_criterion(rho: &DensityMatrix, which: NamedCriterion) -> Result<CriterionReport> {
    let report = xy_criterion(rho, &which.params(rho.shape()))?;
    Ok(CriterionReport {
        criterion_id: which.label().to_string(),
        ..report
    })
}

/// Enhanced realignment test: compares the trace norm of the realigned
/// difference rho - rho_A ⊗ rho_B against
/// sqrt(1 - Tr rho_A^2) sqrt(1 - Tr rho_B^2).
pub fn enhanced_realignment(rho: &DensityMatrix) -> Result<CriterionReport> {
    let shape = rho.shape();
    let rho_a = partial_trace(rho.matrix(), shape, Factor::First)?;
    let rho_b = partial_trace(rho.matrix(), shape, Factor::Second)?;
    let centered = rho.matrix() - kron(&rho_a, &rho_b);
    let lhs = trace_norm(&realign(&centered, shape)?)?;
    let rhs = (1.0 - purity(&rho_a)).max(0.0).sqrt() * (1.0 - purity(&rho_b)).max(0.0).sqrt();
    Ok(CriterionReport::new("ER".to_string(), lhs, rhs))
}

/// Positivity of the partial transpose. The report's left side is the
/// negated smallest eigenvalue, so detection means the partial transpose
/// fails to be positive semidefinite.
pub fn ppt_test(rho: &DensityMatrix) -> Result<CriterionReport> {
    let pt = partial_transpose(rho.matrix(), rho.shape(), Factor::Second)?;
    let min_eigenvalue = hermitian_spectrum(&pt)?[0];
    Ok(CriterionReport::new("PPT".to_string(), -min_eigenvalue, 0.0))
}

/// A criterion choice that can be evaluated uniformly.
#[derive(Debug, Clone)]
pub enum Criterion {
    Xy(CriterionParams),
    Named(NamedCriterion),
    EnhancedRealignment,
    Ppt,
}

impl Criterion {
    pub fn evaluate(&self, rho: &DensityMatrix) -> Result<CriterionReport> {
        match self {
            Criterion::Xy(params) => xy_criterion(rho, params),
            Criterion::Named(which) => named_criterion(rho, *which),
            Criterion::EnhancedRealignment => enhanced_realignment(rho),
            Criterion::Ppt => ppt_test(rho),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Criterion::Xy(params) => format!("XY(x={}, y={})", params.x(), params.y()),
            Criterion::Named(which) => which.label().to_string(),
            Criterion::EnhancedRealignment => "ER".to_string(),
            Criterion::Ppt => "PPT".to_string(),
        }
    }
}

/// Numerically locates the detection threshold of `criterion` along a state
/// family parameterized over `bracket`, by bisection on the margin.
///
/// The family must be undetected at the bracket start and detected at the
/// end; otherwise the missing sign change is reported as an error naming
/// which end failed. The returned parameter is accurate to
/// [`BISECTION_TOL`].
pub fn detection_threshold_numeric<F>(
    family: F,
    criterion: &Criterion,
    bracket: (f64, f64),
) -> Result<f64>
where
    F: Fn(f64) -> Result<DensityMatrix>,
{
    let (start, end) = bracket;
    if start >= end || start.is_nan() || end.is_nan() {
        return Err(Error::InvalidParameter {
            name: "bracket",
            message: format!("need start < end, got ({start}, {end})"),
        });
    }
    let margin_at = |p: f64| -> Result<f64> { Ok(criterion.evaluate(&family(p)?)?.margin) };

    let margin_start = margin_at(start)?;
    if margin_start > 0.0 {
        return Err(Error::NoSignChange {
            criterion: criterion.label(),
            lo: start,
            hi: end,
            diagnosis: "criterion always detects on the bracket".to_string(),
        });
    }
    let margin_end = margin_at(end)?;
    if margin_end < 0.0 {
        return Err(Error::NoSignChange {
            criterion: criterion.label(),
            lo: start,
            hi: end,
            diagnosis: "criterion never detects on the bracket".to_string(),
        });
    }

    let (mut lo, mut hi) = (start, end);
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if margin_at(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
