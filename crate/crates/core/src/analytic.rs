//! Closed-form detection thresholds of the scaled-correlation criteria on
//! the embedded isotropic family, with the reduced coordinates, quadratic
//! root structure, and minimizing curve that organize them.
//!
//! Every function here assumes an ordered shape (d1 <= d2) and is a pure
//! closed-form evaluation; the numerical counterparts in [`crate::criteria`]
//! exist to cross-validate these formulas, not to replace them.

use crate::bases::norm_bound;
use crate::criteria::{CriterionParams, NamedCriterion};
use crate::error::{Error, Result};
use crate::linalg::BipartiteShape;

/// |a| below this counts as the degenerate (linear) quadratic case.
pub const LINEAR_A_TOL: f64 = 1e-12;
/// Agreement required between a printed closed form and the quadratic route.
const CROSS_CHECK_TOL: f64 = 1e-10;

fn dims(shape: BipartiteShape) -> (f64, f64) {
    (shape.d1() as f64, shape.d2() as f64)
}

fn gamma(shape: BipartiteShape) -> f64 {
    let (d1, d2) = dims(shape);
    (d2 - d1) / (d2 * (d1 - 1.0) * (d1 + 1.0) * (d1 + 1.0))
}

fn big_gamma(shape: BipartiteShape) -> f64 {
    let (d1, d2) = dims(shape);
    d1 / (d1 * d1 - 1.0) * ((d1 - 1.0) * (d2 - 1.0)).sqrt() / (d1 * d2).sqrt()
}

/// Dimension-reduced coordinates of a criterion point (x, y).
///
/// `x_tilde = x^2/(d1-1)` and `y_tilde = y^2/(d2-1)` absorb the factor
/// dimensions; `gamma` measures the dimension mismatch (zero when d1 = d2)
/// and `big_gamma` is the threshold scale, which is also the threshold of
/// the (0, 0) criterion.
#[derive(Debug, Clone, Copy)]
pub struct ReducedCoords {
    pub x_tilde: f64,
    pub y_tilde: f64,
    pub gamma: f64,
    pub big_gamma: f64,
}

impl ReducedCoords {
    pub fn new(shape: BipartiteShape, params: &CriterionParams) -> Result<Self> {
        shape.require_ordered()?;
        let (d1, d2) = dims(shape);
        Ok(Self {
            x_tilde: params.x() * params.x() / (d1 - 1.0),
            y_tilde: params.y() * params.y() / (d2 - 1.0),
            gamma: gamma(shape),
            big_gamma: big_gamma(shape),
        })
    }
}

/// Coefficients and roots of the threshold quadratic a p^2 + b p + c = 0.
///
/// Squaring the detection condition for the isotropic family at a fixed
/// criterion point yields this quadratic in the mixing parameter; the
/// threshold is always `p_minus`. When `|a| <= 1e-12` the equation is
/// treated as linear, `p_minus = -c/b`, and `p_plus` is absent. `p_zero`
/// is the mixing parameter at which the linear part of the trace norm alone
/// reaches the bound; the roots straddle it (p_minus <= p_zero, and
/// p_zero <= p_plus when a > 0). The `discriminant` equals b^2 - 4ac but is
/// evaluated in a factored form that is exactly nonnegative.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticCase {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub discriminant: f64,
    pub p_minus: f64,
    pub p_plus: Option<f64>,
    pub p_zero: f64,
}

/// Builds the threshold quadratic for a criterion point.
pub fn quadratic_case(shape: BipartiteShape, params: &CriterionParams) -> Result<QuadraticCase> {
    shape.require_ordered()?;
    let (d1, d2) = dims(shape);
    let (x, y) = (params.x(), params.y());
    let n = norm_bound(x, y, shape);

    let a = (d1 * d1 - 1.0).powi(2) / (d1 * d1) - x * x * (d2 - d1) / (d1 * d1 * d2);
    let b = -2.0 * (d1 * d1 - 1.0) / d1 * n;
    let c = n * n - x * x * y * y / (d1 * d2);
    // b^2 - 4ac rewritten as a sum of nonnegative terms. The direct form
    // leaves rounding residue that splits exact double roots (x = 0, or
    // y = 0 at equal dimensions) by ~sqrt(eps); the factored form keeps the
    // discriminant exactly zero there and accurate everywhere.
    let discriminant = 4.0 * x * x / (d1 * d1 * d2)
        * ((d1 * d1 - 1.0).powi(2) * y * y / d1
            + (d2 - d1) * ((d1 - 1.0) * (d2 - 1.0) + (d1 - 1.0) * y * y + (d2 - 1.0) * x * x)
                / (d1 * d2));
    let sq = discriminant.sqrt();
    let p_zero = d1 / (d1 * d1 - 1.0) * n;

    // b is strictly negative, so -b + sq never cancels; the product form
    // 2c/(-b + sq) equals (-b - sq)/(2a) but stays accurate when sq ~ -b.
    let (p_minus, p_plus) = if a.abs() <= LINEAR_A_TOL {
        (-c / b, None)
    } else {
        (2.0 * c / (-b + sq), Some((-b + sq) / (2.0 * a)))
    };

    Ok(QuadraticCase {
        a,
        b,
        c,
        discriminant,
        p_minus,
        p_plus,
        p_zero,
    })
}

/// Detection threshold of the (x, y) criterion on the isotropic family: the
/// state is detected exactly when its mixing parameter exceeds this value.
///
/// Evaluated through the quadratic route, which has no poles; at x = 0 the
/// quadratic degenerates to a perfect square and the threshold is `p_zero`
/// directly.
pub fn p_xy_threshold(shape: BipartiteShape, params: &CriterionParams) -> Result<f64> {
    let q = quadratic_case(shape, params)?;
    if params.x() == 0.0 {
        return Ok(q.p_zero);
    }
    Ok(q.p_minus)
}

/// The same threshold written in reduced coordinates:
///
/// ```text
/// p = big_gamma * (sqrt((1 + x~)(1 + y~)) - sqrt(x~ ((1+g) y~ + g x~ + g)))
///     / (1 - g x~)
/// ```
///
/// The denominator vanishes at x^2 = d2 (d1^2-1)^2 / (d2-d1), where the
/// singularity is removable; this form errors there rather than divide by
/// zero. Use [`p_xy_threshold`] for evaluation, this for cross-checks.
pub fn p_xy_closed_form(shape: BipartiteShape, params: &CriterionParams) -> Result<f64> {
    let rc = ReducedCoords::new(shape, params)?;
    let denom = 1.0 - rc.gamma * rc.x_tilde;
    if denom.abs() < 1e-12 {
        return Err(Error::Numerical(format!(
            "closed form evaluated at its removable singularity (x = {})",
            params.x()
        )));
    }
    let num = ((1.0 + rc.x_tilde) * (1.0 + rc.y_tilde)).sqrt()
        - (rc.x_tilde * ((1.0 + rc.gamma) * rc.y_tilde + rc.gamma * rc.x_tilde + rc.gamma)).sqrt();
    Ok(rc.big_gamma * num / denom)
}

/// Detection thresholds of the named criteria on the isotropic family,
/// together with the family-wide minimum and the positivity boundary.
#[derive(Debug, Clone, Copy)]
pub struct ThresholdSet {
    /// Partial-transposition boundary 1/(d2 + 1).
    pub p_ppt: f64,
    /// Threshold of the (0, 0) criterion.
    pub p_dv: f64,
    /// Threshold of the (1, 1) criterion (plain realignment).
    pub p_ccnr: f64,
    /// Threshold at (sqrt(2/d1), sqrt(2/d2)); no printed closed form, so it
    /// is evaluated through the quadratic route.
    pub p_fei: f64,
    /// Threshold at (sqrt(d1+1), sqrt(d2+1)).
    pub p_esic: f64,
    /// Threshold of the enhanced (marginal-subtracted) realignment test.
    pub p_er: f64,
    /// Infimum of the threshold over all (x, y); attained on the minimizing
    /// hyperbola.
    pub p_min: f64,
}

/// Computes the named thresholds from their printed closed forms, each
/// cross-checked against the quadratic route where a criterion point exists.
/// Disagreement beyond 1e-10 is reported as an internal error.
pub fn named_thresholds(shape: BipartiteShape) -> Result<ThresholdSet> {
    shape.require_ordered()?;
    let (d1, d2) = dims(shape);

    let p_ppt = 1.0 / (d2 + 1.0);
    let p_dv = big_gamma(shape);
    let p_ccnr = ((d1 * d1 - 1.0) * d2 - (d1.powi(3) * d2 - 3.0 * d1 * d2 + d2 * d2 + 1.0).sqrt())
        / (d2 * d1.powi(3) - 2.0 * d1 * d2 + 1.0);
    let p_esic = (2.0 * (d1 - 1.0) * d2
        - ((d1.powi(3) * d2 * d2 - 2.0 * d1 * d2 * d2 + 3.0 * d2 * d2
            + (d1.powi(3) - 5.0 * d1) * d2
            + d1
            + 1.0)
            / (d1 + 1.0))
            .sqrt())
        / (d1 * d1 * d2 - d1 * d2 - d2 + 1.0);
    let p_fei = p_xy_threshold(shape, &NamedCriterion::Fei.params(shape))?;
    let p_er = ((d2 - 1.0) / (d2 * (d1 * d1 + d1 - 1.0) - 1.0)).sqrt();
    let p_min = big_gamma(shape) / (1.0 + gamma(shape)).sqrt();

    for (name, closed, point) in [
        ("dV", p_dv, NamedCriterion::DeVicente),
        ("CCNR", p_ccnr, NamedCriterion::Ccnr),
        ("ESIC", p_esic, NamedCriterion::Esic),
    ] {
        let via_quadratic = p_xy_threshold(shape, &point.params(shape))?;
        if (closed - via_quadratic).abs() > CROSS_CHECK_TOL {
            return Err(Error::InternalConsistency(format!(
                "{name} threshold: closed form {closed:.15e} vs quadratic {via_quadratic:.15e} at {shape}"
            )));
        }
    }

    let set = ThresholdSet {
        p_ppt,
        p_dv,
        p_ccnr,
        p_fei,
        p_esic,
        p_er,
        p_min,
    };
    set.validate(shape)?;
    Ok(set)
}

impl ThresholdSet {
    fn validate(&self, shape: BipartiteShape) -> Result<()> {
        let named_min = self
            .p_dv
            .min(self.p_ccnr)
            .min(self.p_fei)
            .min(self.p_esic);
        if self.p_ppt > self.p_min + 1e-12 || self.p_min > named_min + 1e-12 {
            return Err(Error::InternalConsistency(format!(
                "threshold ordering violated at {shape}: ppt {:.15e}, min {:.15e}, best named {named_min:.15e}",
                self.p_ppt, self.p_min
            )));
        }
        Ok(())
    }
}

/// The curve in the (x, y) plane on which the threshold attains its infimum:
/// `x^2/(d1-1) - (1+gamma) y^2/(d2-1) = gamma`.
#[derive(Debug, Clone, Copy)]
pub struct Hyperbola {
    shape: BipartiteShape,
    gamma: f64,
}

impl Hyperbola {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Signed defining-equation residual; zero exactly on the curve.
    pub fn residual(&self, params: &CriterionParams) -> f64 {
        let (d1, d2) = dims(self.shape);
        let x_tilde = params.x() * params.x() / (d1 - 1.0);
        let y_tilde = params.y() * params.y() / (d2 - 1.0);
        x_tilde - (1.0 + self.gamma) * y_tilde - self.gamma
    }

    /// Smallest x on the curve (where it meets y = 0).
    pub fn x_min(&self) -> f64 {
        let (d1, _) = dims(self.shape);
        (self.gamma * (d1 - 1.0)).sqrt()
    }

    /// The nonnegative y with (x, y) on the curve, if it exists.
    pub fn y_at(&self, x: f64) -> Option<f64> {
        let (d1, d2) = dims(self.shape);
        let x_tilde = x * x / (d1 - 1.0);
        let y_tilde = (x_tilde - self.gamma) / (1.0 + self.gamma);
        if y_tilde < 0.0 {
            None
        } else {
            Some((y_tilde * (d2 - 1.0)).sqrt())
        }
    }
}

/// The minimizing curve together with the threshold value attained on it,
/// `p_min = big_gamma / sqrt(1 + gamma)`.
pub fn hyperbola_and_min(shape: BipartiteShape) -> Result<(Hyperbola, f64)> {
    shape.require_ordered()?;
    let g = gamma(shape);
    Ok((
        Hyperbola { shape, gamma: g },
        big_gamma(shape) / (1.0 + g).sqrt(),
    ))
}

/// Residual of the threshold's stationarity condition in x at fixed y:
/// `(1 + gamma) y~ - (x~ - gamma)`. Zero exactly on the minimizing curve.
pub fn stationarity_residual(shape: BipartiteShape, params: &CriterionParams) -> Result<f64> {
    let rc = ReducedCoords::new(shape, params)?;
    Ok((1.0 + rc.gamma) * rc.y_tilde - (rc.x_tilde - rc.gamma))
}

/// Closed form of the scaled-correlation trace norm of the isotropic state
/// with mixing parameter p:
///
/// ```text
/// (d1^2 - 1) p / d1 + x / sqrt(d1 d2) * sqrt(y^2 + p^2 (d2 - d1)/d1)
/// ```
pub fn isotropic_scaled_norm(shape: BipartiteShape, params: &CriterionParams, p: f64) -> Result<f64> {
    shape.require_ordered()?;
    let (d1, d2) = dims(shape);
    let (x, y) = (params.x(), params.y());
    Ok((d1 * d1 - 1.0) * p / d1
        + x / (d1 * d2).sqrt() * (y * y + p * p * (d2 - d1) / d1).sqrt())
}

/// Eigenvalues (ascending) of C C^H for the scaled correlation matrix C of
/// the isotropic state: d1^2 - 1 copies of p^2/d1^2 plus the single
/// x-dependent eigenvalue x^2/(d1 d2) (y^2 + p^2 (d2 - d1)/d1). The list has
/// exactly d1^2 entries, matching the Gram matrix of the wide (d1 <= d2)
/// correlation matrix.
pub fn isotropic_scaled_spectrum(
    shape: BipartiteShape,
    params: &CriterionParams,
    p: f64,
) -> Result<Vec<f64>> {
    shape.require_ordered()?;
    let (d1, d2) = dims(shape);
    let (x, y) = (params.x(), params.y());
    let bulk = p * p / (d1 * d1);
    let lone = x * x / (d1 * d2) * (y * y + p * p * (d2 - d1) / d1);
    let mut ev = vec![bulk; shape.d1() * shape.d1() - 1];
    ev.push(lone);
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Real quadratic c2 t^2 + c1 t + c0.
#[derive(Debug, Clone, Copy)]
pub struct Quadratic {
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl Quadratic {
    pub fn eval(&self, t: f64) -> f64 {
        (self.c2 * t + self.c1) * t + self.c0
    }

    /// Smaller real root, when the roots are real and c2 != 0.
    pub fn lowest_root(&self) -> Option<f64> {
        let disc = self.c1 * self.c1 - 4.0 * self.c2 * self.c0;
        if disc < 0.0 || self.c2 == 0.0 {
            return None;
        }
        Some((-self.c1 - disc.sqrt()) / (2.0 * self.c2))
    }
}

/// The pair of quadratics in p whose lowest roots are the plain-realignment
/// and ESIC thresholds, and the x value at which they cross.
///
/// Only defined for strictly unequal dimensions; at d1 = d2 both criteria
/// share the threshold 1/(d+1) and the comparison is empty. Below the
/// crossing the realignment quadratic is the smaller one, above it the ESIC
/// quadratic is, which is the dominance statement the tests pin down. The
/// crossing coincides numerically with the enhanced-realignment threshold.
#[derive(Debug, Clone, Copy)]
pub struct ThresholdPolynomials {
    pub ccnr: Quadratic,
    pub esic: Quadratic,
    pub crossing: f64,
}

pub fn threshold_polynomials(shape: BipartiteShape) -> Result<ThresholdPolynomials> {
    shape.require_ordered()?;
    if shape.d1() == shape.d2() {
        return Err(Error::InvalidParameter {
            name: "shape",
            message: format!("threshold polynomials need d2 > d1, got {shape}"),
        });
    }
    let (d1, d2) = dims(shape);
    let ccnr = Quadratic {
        c2: 2.0 * (d1.powi(3) * d2 - 2.0 * d1 * d2 + 1.0),
        c1: -4.0 * d2 * (d1 * d1 - 1.0),
        c0: 2.0 * (d1 * d2 - 1.0),
    };
    let esic = Quadratic {
        c2: d1.powi(3) * d2 - 2.0 * d1 * d2 + d1 - d2 + 1.0,
        c1: -4.0 * d2 * (d1 * d1 - 1.0),
        c0: 3.0 * d1 * d2 - d1 - d2 - 1.0,
    };
    let crossing = ((d2 - 1.0) / ((d1 + 1.0) * d1 * d2 - (d2 + 1.0))).sqrt();
    Ok(ThresholdPolynomials {
        ccnr,
        esic,
        crossing,
    })
}
