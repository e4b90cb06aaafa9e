//! The confocal family `Q_lambda: sum x_i^2 / (a_i - lambda) = 1` and its
//! dual pencil `Phi_lambda(u) = sum (a_i - lambda) u_i^2 - u_0^2`.
//!
//! A hyperplane `u_0 + sum u_i x_i = 0` is tangent to `Q_lambda` exactly when
//! `Phi_lambda(u) = 0`. Since `Phi_lambda` is affine in `lambda`, every
//! hyperplane with a nonzero normal touches exactly one member of the family.

use crate::poly;
use crate::projective::{dot, DualHyperplane, HomPoint};
use crate::{Error, Result};

/// Relative gap below which a parameter is taken to sit on a semi-axis.
const AXIS_EPS: f64 = 1e-12;

/// A non-degenerate confocal family given by its squared semi-axes
/// `a_1 > a_2 > ... > a_d > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfocalFamily {
    semi_axes: Vec<f64>,
}

/// A member `lambda` of a confocal family, away from every semi-axis.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct QuadricParam(f64);

impl QuadricParam {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// One root of the confocal-coordinate equation of a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfocalRoot {
    pub value: f64,
    /// The root coincides with a semi-axis (degenerate family member).
    pub degenerate: bool,
    /// The root coincides with a neighbouring root.
    pub multiple: bool,
}

impl ConfocalFamily {
    pub fn new(semi_axes: Vec<f64>) -> Result<Self> {
        if semi_axes.len() < 2 {
            return Err(Error::InvalidFamily(format!(
                "need at least two semi-axes, got {}",
                semi_axes.len()
            )));
        }
        if semi_axes.iter().any(|a| !a.is_finite() || *a <= 0.0) {
            return Err(Error::InvalidFamily("semi-axes must be positive".into()));
        }
        if semi_axes.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidFamily(
                "semi-axes must be strictly decreasing".into(),
            ));
        }
        Ok(ConfocalFamily { semi_axes })
    }

    pub fn semi_axes(&self) -> &[f64] {
        &self.semi_axes
    }

    pub fn dim(&self) -> usize {
        self.semi_axes.len()
    }

    fn colliding_axis(&self, lambda: f64, rel: f64) -> Option<f64> {
        self.semi_axes
            .iter()
            .copied()
            .find(|a| (lambda - a).abs() <= rel * a.abs().max(1.0))
    }

    pub fn param(&self, lambda: f64) -> Result<QuadricParam> {
        if !lambda.is_finite() {
            return Err(Error::NonFinite);
        }
        match self.colliding_axis(lambda, AXIS_EPS) {
            Some(axis) => Err(Error::DegenerateParameter { lambda, axis }),
            None => Ok(QuadricParam(lambda)),
        }
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got,
            });
        }
        Ok(())
    }

    /// `sum x_i^2 / (a_i - lambda) - 1` for an affine point.
    pub fn quadric_value_affine(&self, lambda: QuadricParam, x: &[f64]) -> f64 {
        self.semi_axes
            .iter()
            .zip(x)
            .map(|(a, xi)| xi * xi / (a - lambda.0))
            .sum::<f64>()
            - 1.0
    }

    pub fn quadric_value(&self, lambda: QuadricParam, x: &HomPoint) -> Result<f64> {
        self.check_dim(x.dim())?;
        let affine = x.affine()?;
        Ok(self.quadric_value_affine(lambda, &affine))
    }

    /// Outward normal `x_i / (a_i - lambda)` of `Q_lambda` at `x`.
    pub fn normal(&self, lambda: QuadricParam, x: &[f64]) -> Vec<f64> {
        self.semi_axes
            .iter()
            .zip(x)
            .map(|(a, xi)| xi / (a - lambda.0))
            .collect()
    }

    /// Tangent hyperplane `(-1, x_1/(a_1 - lambda), ..., x_d/(a_d - lambda))`
    /// of `Q_lambda` at the affine point `x`.
    pub fn tangent_plane(&self, lambda: QuadricParam, x: &[f64]) -> Result<DualHyperplane> {
        self.check_dim(x.len())?;
        let mut u = Vec::with_capacity(x.len() + 1);
        u.push(-1.0);
        u.extend(self.normal(lambda, x));
        DualHyperplane::new(u)
    }

    /// `Phi_lambda` on raw coordinates.
    pub fn tangency_form_raw(&self, lambda: f64, u: &[f64]) -> f64 {
        self.polar_form_raw(lambda, u, u)
    }

    /// The symmetric bilinear form `B_lambda` polarising `Phi_lambda`.
    pub fn polar_form_raw(&self, lambda: f64, u: &[f64], w: &[f64]) -> f64 {
        self.semi_axes
            .iter()
            .zip(&u[1..])
            .zip(&w[1..])
            .map(|((a, ui), wi)| (a - lambda) * ui * wi)
            .sum::<f64>()
            - u[0] * w[0]
    }

    /// `Phi_lambda(u)` on the canonical representative of `u`.
    pub fn tangency_form(&self, lambda: QuadricParam, u: &DualHyperplane) -> Result<f64> {
        self.check_dim(u.dim())?;
        if u.is_at_infinity() {
            return Err(Error::HyperplaneAtInfinity);
        }
        Ok(self.tangency_form_raw(lambda.0, u.coords()))
    }

    /// The unique member of the family touched by `u`:
    /// `lambda = (sum a_i u_i^2 - u_0^2) / sum u_i^2`.
    pub fn hyperplane_caustic(&self, u: &DualHyperplane, tol_rank: f64) -> Result<QuadricParam> {
        self.check_dim(u.dim())?;
        if u.is_at_infinity() {
            return Err(Error::HyperplaneAtInfinity);
        }
        let spatial = u.spatial();
        let weighted: f64 = self
            .semi_axes
            .iter()
            .zip(spatial)
            .map(|(a, ui)| a * ui * ui)
            .sum();
        let lambda = (weighted - u.offset() * u.offset()) / dot(spatial, spatial);
        match self.colliding_axis(lambda, tol_rank) {
            Some(axis) => Err(Error::DegenerateTangency { lambda, axis }),
            None => Ok(QuadricParam(lambda)),
        }
    }

    /// The pole of `u` with respect to the member it touches:
    /// `x_i = -(a_i - lambda) u_i / u_0`.
    pub fn touching_point(&self, u: &DualHyperplane, tol_rank: f64) -> Result<HomPoint> {
        let lambda = self.hyperplane_caustic(u, tol_rank)?;
        if u.offset().abs() <= tol_rank * crate::projective::norm(u.spatial()) {
            return Err(Error::PointAtInfinity);
        }
        let u0 = u.offset();
        let x: Vec<f64> = self
            .semi_axes
            .iter()
            .zip(u.spatial())
            .map(|(a, ui)| -(a - lambda.0) * ui / u0)
            .collect();
        HomPoint::from_affine(&x)
    }

    /// Coefficients (ascending) of
    /// `prod (a_i - lambda) - sum x_i^2 prod_{j != i} (a_j - lambda)`,
    /// whose roots are the parameters of the family members through `x`.
    pub fn confocal_polynomial(&self, x: &[f64]) -> Vec<f64> {
        let mut p = poly::product_of_shifts(&self.semi_axes);
        for (i, xi) in x.iter().enumerate() {
            let others = self
                .semi_axes
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, a)| a);
            let partial = poly::product_of_shifts(others);
            poly::add_scaled(&mut p, -xi * xi, &partial);
        }
        p
    }

    /// Parameters of the family members passing through `x`, in increasing
    /// order. Generic points get exactly `d` roots, one below `a_d` and one
    /// in each gap `(a_{i+1}, a_i)`.
    pub fn point_confocal_params(&self, x: &HomPoint, tol_rank: f64) -> Result<Vec<ConfocalRoot>> {
        self.check_dim(x.dim())?;
        let affine = x.affine()?;
        let p = self.confocal_polynomial(&affine);
        let roots: Vec<f64> = match self.dim() {
            2 => poly::quadratic_roots(p[0], p[1], p[2], 1e-14)
                .map(|r| r.to_vec())
                .unwrap_or_default(),
            3 => poly::cubic_roots(p[0], p[1], p[2], p[3]),
            d => return Err(Error::UnsupportedDimension(d)),
        };
        let mut out: Vec<ConfocalRoot> = roots
            .iter()
            .map(|&value| ConfocalRoot {
                value,
                degenerate: self.colliding_axis(value, tol_rank).is_some(),
                multiple: false,
            })
            .collect();
        for i in 1..out.len() {
            let (a, b) = (out[i - 1].value, out[i].value);
            if (a - b).abs() <= 1e-7 * a.abs().max(1.0) {
                out[i - 1].multiple = true;
                out[i].multiple = true;
            }
        }
        Ok(out)
    }
}
