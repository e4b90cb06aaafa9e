//! Homogeneous projective primitives.
//!
//! Points and hyperplanes are stored as canonical representatives: unit
//! Euclidean norm with the first nonzero coordinate positive. Equality and
//! every residual in this module are therefore independent of the scale of
//! the inputs.

use nalgebra::DMatrix;

use crate::{Error, Result};

/// Coordinates below this (relative to a unit vector) count as zero when
/// fixing the sign of a canonical representative.
const SIGN_EPS: f64 = 1e-14;

/// `x_0` below this marks a point at infinity (or a hyperplane through the
/// origin, for dual coordinates).
const FINITE_EPS: f64 = 1e-12;

fn canonicalize(mut coords: Vec<f64>) -> Result<Vec<f64>> {
    if coords.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite);
    }
    let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    coords.iter_mut().for_each(|c| *c /= norm);
    if let Some(first) = coords.iter().find(|c| c.abs() > SIGN_EPS) {
        if *first < 0.0 {
            coords.iter_mut().for_each(|c| *c = -*c);
        }
    }
    Ok(coords)
}

/// Sign-insensitive distance between two unit vectors.
pub(crate) fn projective_distance(a: &[f64], b: &[f64]) -> f64 {
    let (mut minus, mut plus) = (0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        minus += (x - y) * (x - y);
        plus += (x + y) * (x + y);
    }
    minus.min(plus).sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn axpy(alpha: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(xi, yi)| alpha * xi + yi).collect()
}

/// A point `(x_0 : x_1 : ... : x_d)` of projective d-space.
#[derive(Debug, Clone, PartialEq)]
pub struct HomPoint {
    coords: Vec<f64>,
}

impl HomPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::TooFewElements {
                needed: 2,
                got: coords.len(),
            });
        }
        Ok(HomPoint {
            coords: canonicalize(coords)?,
        })
    }

    /// The point `(1 : x_1 : ... : x_d)`.
    pub fn from_affine(x: &[f64]) -> Result<Self> {
        let mut coords = Vec::with_capacity(x.len() + 1);
        coords.push(1.0);
        coords.extend_from_slice(x);
        HomPoint::new(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Ambient dimension d.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn is_finite(&self) -> bool {
        self.coords[0].abs() > FINITE_EPS
    }

    pub fn to_affine(&self) -> Option<Vec<f64>> {
        if !self.is_finite() {
            return None;
        }
        let w = self.coords[0];
        Some(self.coords[1..].iter().map(|c| c / w).collect())
    }

    pub(crate) fn affine(&self) -> Result<Vec<f64>> {
        self.to_affine().ok_or(Error::PointAtInfinity)
    }

    /// Sign-insensitive distance between canonical representatives.
    pub fn distance(&self, other: &HomPoint) -> f64 {
        projective_distance(&self.coords, &other.coords)
    }

    pub fn approx_eq(&self, other: &HomPoint, tol: f64) -> bool {
        self.coords.len() == other.coords.len() && self.distance(other) <= tol
    }
}

/// A hyperplane `u_0 x_0 + u_1 x_1 + ... + u_d x_d = 0` in dual coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct DualHyperplane {
    coords: Vec<f64>,
}

impl DualHyperplane {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::TooFewElements {
                needed: 2,
                got: coords.len(),
            });
        }
        Ok(DualHyperplane {
            coords: canonicalize(coords)?,
        })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// `u_0`, the coefficient of the homogenising coordinate.
    pub fn offset(&self) -> f64 {
        self.coords[0]
    }

    /// `(u_1, ..., u_d)`, the normal direction of the hyperplane.
    pub fn spatial(&self) -> &[f64] {
        &self.coords[1..]
    }

    pub fn is_at_infinity(&self) -> bool {
        norm(self.spatial()) <= FINITE_EPS
    }

    /// Incidence value `u . x` on canonical representatives.
    pub fn incidence(&self, point: &HomPoint) -> f64 {
        dot(&self.coords, point.coords())
    }

    pub fn distance(&self, other: &DualHyperplane) -> f64 {
        projective_distance(&self.coords, &other.coords)
    }

    pub fn approx_eq(&self, other: &DualHyperplane, tol: f64) -> bool {
        self.coords.len() == other.coords.len() && self.distance(other) <= tol
    }
}

/// How far apart two lines are: the sign-insensitive chord between their
/// unit directions and the distance of the other base point from this line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineDeviation {
    pub angle: f64,
    pub offset: f64,
}

impl LineDeviation {
    pub fn max(&self) -> f64 {
        self.angle.max(self.offset)
    }
}

/// A finite line, stored as an affine base point and a unit direction.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjLine {
    base: Vec<f64>,
    direction: Vec<f64>,
}

impl ProjLine {
    pub fn new(base: &[f64], direction: &[f64]) -> Result<Self> {
        if base.len() != direction.len() {
            return Err(Error::DimensionMismatch {
                expected: base.len(),
                got: direction.len(),
            });
        }
        if base.len() < 2 {
            return Err(Error::TooFewElements {
                needed: 2,
                got: base.len(),
            });
        }
        if base.iter().chain(direction).any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n = norm(direction);
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(ProjLine {
            base: base.to_vec(),
            direction: direction.iter().map(|c| c / n).collect(),
        })
    }

    pub fn through(p: &[f64], q: &[f64]) -> Result<Self> {
        ProjLine::new(p, &sub(q, p))
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn base_point(&self) -> HomPoint {
        HomPoint::from_affine(&self.base).expect("finite base")
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn point_at(&self, t: f64) -> Vec<f64> {
        axpy(t, &self.direction, &self.base)
    }

    pub fn reversed(&self) -> ProjLine {
        ProjLine {
            base: self.base.clone(),
            direction: self.direction.iter().map(|c| -c).collect(),
        }
    }

    /// The same line with its base moved to `point` (assumed on the line).
    pub fn rebased(&self, point: &[f64]) -> ProjLine {
        ProjLine {
            base: point.to_vec(),
            direction: self.direction.clone(),
        }
    }

    /// Plücker moments `p_i v_j - p_j v_i` for `i < j`.
    pub fn moments(&self) -> Vec<f64> {
        let d = self.dim();
        let mut out = Vec::with_capacity(d * (d - 1) / 2);
        for i in 0..d {
            for j in i + 1..d {
                out.push(self.base[i] * self.direction[j] - self.base[j] * self.direction[i]);
            }
        }
        out
    }

    pub fn distance_to_point(&self, x: &[f64]) -> f64 {
        let w = sub(x, &self.base);
        let along = dot(&w, &self.direction);
        let perp = axpy(-along, &self.direction, &w);
        norm(&perp)
    }

    pub fn deviation(&self, other: &ProjLine) -> LineDeviation {
        LineDeviation {
            angle: projective_distance(&self.direction, &other.direction),
            offset: self.distance_to_point(&other.base),
        }
    }

    pub fn approx_eq(&self, other: &ProjLine, tol: f64) -> bool {
        self.dim() == other.dim() && self.deviation(other).max() <= tol
    }
}

fn rank2_residual(rows: &[&[f64]]) -> Result<f64> {
    if rows.len() < 3 {
        return Err(Error::TooFewElements {
            needed: 3,
            got: rows.len(),
        });
    }
    let cols = rows[0].len();
    if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch {
            expected: cols,
            got: bad.len(),
        });
    }
    if cols < 3 {
        // two homogeneous coordinates: everything lies on the one line
        return Ok(0.0);
    }
    let m = DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    if sv[0] == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(sv[2] / sv[0])
}

/// `sigma_3 / sigma_1` of the stacked canonical point coordinates; zero iff
/// the points are collinear.
pub fn collinearity_residual(points: &[HomPoint]) -> Result<f64> {
    let rows: Vec<&[f64]> = points.iter().map(|p| p.coords()).collect();
    rank2_residual(&rows)
}

/// `sigma_3 / sigma_1` of the stacked canonical dual coordinates; zero iff
/// the hyperplanes belong to one pencil.
pub fn pencil_residual(planes: &[DualHyperplane]) -> Result<f64> {
    let rows: Vec<&[f64]> = planes.iter().map(|p| p.coords()).collect();
    rank2_residual(&rows)
}

/// Cross-ratio `((a-c)(b-d)) / ((a-d)(b-c))` of four homogeneous parameters
/// `(mu : nu)` on a projective line. Returns `f64::INFINITY` when the
/// denominator vanishes.
pub fn cross_ratio_params(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> f64 {
    let det = |x: [f64; 2], y: [f64; 2]| x[0] * y[1] - x[1] * y[0];
    let num = det(a, c) * det(b, d);
    let den = det(a, d) * det(b, c);
    if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

/// Least-squares coefficients `(mu, nu)` with `v ~ mu * e1 + nu * e2`.
fn decompose(e1: &[f64], e2: &[f64], v: &[f64]) -> Result<[f64; 2]> {
    let g11 = dot(e1, e1);
    let g12 = dot(e1, e2);
    let g22 = dot(e2, e2);
    let det = g11 * g22 - g12 * g12;
    if det <= 1e-24 * g11 * g22 {
        return Err(Error::Coincident);
    }
    let r1 = dot(e1, v);
    let r2 = dot(e2, v);
    Ok([(g22 * r1 - g12 * r2) / det, (g11 * r2 - g12 * r1) / det])
}

fn cross_ratio_rows(rows: [&[f64]; 4], tol_rank: f64) -> Result<f64> {
    let params = [
        [1.0, 0.0],
        [0.0, 1.0],
        decompose(rows[0], rows[1], rows[2])?,
        decompose(rows[0], rows[1], rows[3])?,
    ];
    for i in 0..4 {
        for j in i + 1..4 {
            let (p, q) = (params[i], params[j]);
            let scale = (p[0].hypot(p[1])) * (q[0].hypot(q[1]));
            if (p[0] * q[1] - p[1] * q[0]).abs() <= tol_rank * scale {
                return Err(Error::Coincident);
            }
        }
    }
    Ok(cross_ratio_params(
        params[0], params[1], params[2], params[3],
    ))
}

/// Cross-ratio `CR(h1, h2; h3, h4)` of four hyperplanes of one pencil.
///
/// Coincident arguments are rejected, so the result is always finite.
pub fn cross_ratio_pencil(
    h1: &DualHyperplane,
    h2: &DualHyperplane,
    h3: &DualHyperplane,
    h4: &DualHyperplane,
    tol_rank: f64,
) -> Result<f64> {
    let residual = pencil_residual(&[h1.clone(), h2.clone(), h3.clone(), h4.clone()])?;
    if residual >= tol_rank {
        return Err(Error::NotInPencil { residual });
    }
    cross_ratio_rows(
        [h1.coords(), h2.coords(), h3.coords(), h4.coords()],
        tol_rank,
    )
}

/// Cross-ratio `CR(p1, p2; p3, p4)` of four collinear points.
pub fn cross_ratio_collinear(
    p1: &HomPoint,
    p2: &HomPoint,
    p3: &HomPoint,
    p4: &HomPoint,
    tol_rank: f64,
) -> Result<f64> {
    let residual = collinearity_residual(&[p1.clone(), p2.clone(), p3.clone(), p4.clone()])?;
    if residual >= tol_rank {
        return Err(Error::NotCollinear { residual });
    }
    cross_ratio_rows(
        [p1.coords(), p2.coords(), p3.coords(), p4.coords()],
        tol_rank,
    )
}
