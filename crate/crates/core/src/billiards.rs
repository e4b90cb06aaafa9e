//! Billiard reflection off members of a confocal family.

use crate::confocal::{ConfocalFamily, QuadricParam};
use crate::poly;
use crate::projective::{axpy, dot, norm, DualHyperplane, HomPoint, ProjLine};
use crate::{Error, Result, Tolerances};

/// The two points where a line meets a quadric, ordered by line parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct LineHits {
    /// Line parameters (arc length from the base point).
    pub t: [f64; 2],
    pub points: [HomPoint; 2],
    /// The roots coincide within tolerance: the line touches the quadric.
    pub tangent: bool,
}

/// One bounce: the incoming line, the reflected line and the tangent
/// hyperplane at the reflection point. Both lines are based at the point.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionEvent {
    pub point: HomPoint,
    pub incoming: ProjLine,
    pub outgoing: ProjLine,
    pub tangent_plane: DualHyperplane,
    pub lambda: QuadricParam,
}

impl ReflectionEvent {
    pub fn point_affine(&self) -> &[f64] {
        self.outgoing.base()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CausticParam {
    pub value: f64,
    pub multiple: bool,
}

/// The `d - 1` family members a line touches, sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct CausticSet {
    pub params: Vec<CausticParam>,
}

impl CausticSet {
    pub fn values(&self) -> Vec<f64> {
        self.params.iter().map(|p| p.value).collect()
    }

    /// Largest relative difference `|l - l'| / max(1, |l|)` between matching
    /// parameters; infinite when the sets have different sizes.
    pub fn relative_drift(&self, other: &CausticSet) -> f64 {
        if self.params.len() != other.params.len() {
            return f64::INFINITY;
        }
        self.params
            .iter()
            .zip(&other.params)
            .map(|(a, b)| (a.value - b.value).abs() / a.value.abs().max(1.0))
            .fold(0.0, f64::max)
    }
}

/// Coefficients `(A, B, C)` of `A t^2 + 2 B t + C` whose roots are the line
/// parameters of the intersection points.
fn line_quadric_coeffs(family: &ConfocalFamily, lambda: f64, line: &ProjLine) -> (f64, f64, f64) {
    let (mut a, mut b, mut c) = (0.0, 0.0, -1.0);
    for ((ai, p), v) in family
        .semi_axes()
        .iter()
        .zip(line.base())
        .zip(line.direction())
    {
        let q = 1.0 / (ai - lambda);
        a += v * v * q;
        b += p * v * q;
        c += p * p * q;
    }
    (a, b, c)
}

/// `B^2 - A C`: zero iff the line is tangent to `Q_lambda`.
pub fn tangency_discriminant(family: &ConfocalFamily, lambda: f64, line: &ProjLine) -> f64 {
    let (a, b, c) = line_quadric_coeffs(family, lambda, line);
    b * b - a * c
}

pub fn intersect(
    family: &ConfocalFamily,
    lambda: QuadricParam,
    line: &ProjLine,
    tol: &Tolerances,
) -> Result<LineHits> {
    if line.dim() != family.dim() {
        return Err(Error::DimensionMismatch {
            expected: family.dim(),
            got: line.dim(),
        });
    }
    let lam = lambda.value();
    let (a, b, c) = line_quadric_coeffs(family, lam, line);
    let scale = b * b + (a * c).abs();
    if a.abs() <= tol.tol_rank * (a.abs() + b.abs() + c.abs()).max(f64::MIN_POSITIVE) {
        // direction asymptotic to the quadric (or the line lies on it)
        return Err(Error::NoIntersection { lambda: lam });
    }
    let disc = b * b - a * c;
    let tangent = disc.abs() <= tol.tol_rank * scale;
    if disc < 0.0 && !tangent {
        return Err(Error::NoIntersection { lambda: lam });
    }
    let s = disc.max(0.0).sqrt();
    // stable pair: q = -(B + sign(B) s), roots q / A and C / q
    let q = -(b + b.signum() * s);
    let (r1, r2) = if q == 0.0 { (0.0, 0.0) } else { (q / a, c / q) };
    let t = if r1 <= r2 { [r1, r2] } else { [r2, r1] };
    let points = [
        HomPoint::from_affine(&line.point_at(t[0]))?,
        HomPoint::from_affine(&line.point_at(t[1]))?,
    ];
    Ok(LineHits { t, points, tangent })
}

/// Reflect `line` off `Q_lambda` at `point`:
/// `v' = v - 2 (v . n) / (n . n) n` with `n_i = x_i / (a_i - lambda)`.
pub fn reflect(
    family: &ConfocalFamily,
    lambda: QuadricParam,
    line: &ProjLine,
    point: &HomPoint,
    tol: &Tolerances,
) -> Result<ReflectionEvent> {
    if line.dim() != family.dim() {
        return Err(Error::DimensionMismatch {
            expected: family.dim(),
            got: line.dim(),
        });
    }
    let x = point.affine()?;
    let residual = family.quadric_value_affine(lambda, &x);
    if residual.abs() > tol.tol_rank {
        return Err(Error::OffQuadric {
            lambda: lambda.value(),
            residual,
        });
    }
    let distance = line.distance_to_point(&x);
    if distance > tol.tol_rank * norm(&x).max(1.0) {
        return Err(Error::OffLine { distance });
    }
    let v = line.direction();
    let n = family.normal(lambda, &x);
    let vn = dot(v, &n);
    let nn = dot(&n, &n);
    if vn.abs() <= tol.tol_rank * nn.sqrt() {
        return Err(Error::TangentialIncidence {
            lambda: lambda.value(),
        });
    }
    let reflected = axpy(-2.0 * vn / nn, &n, v);
    Ok(ReflectionEvent {
        point: point.clone(),
        incoming: line.rebased(&x),
        outgoing: ProjLine::new(&x, &reflected)?,
        tangent_plane: family.tangent_plane(lambda, &x)?,
        lambda,
    })
}

/// The next bounce along the direction of `line`: the intersection with the
/// smallest parameter `t > tol_forward`.
pub fn forward_hit(
    family: &ConfocalFamily,
    lambda: QuadricParam,
    line: &ProjLine,
    tol: &Tolerances,
) -> Result<(f64, HomPoint)> {
    let hits = intersect(family, lambda, line, tol)?;
    if hits.tangent {
        return Err(Error::TangentialIncidence {
            lambda: lambda.value(),
        });
    }
    let [p0, p1] = hits.points;
    if hits.t[0] > tol.tol_forward {
        Ok((hits.t[0], p0))
    } else if hits.t[1] > tol.tol_forward {
        Ok((hits.t[1], p1))
    } else {
        Err(Error::NoIntersection {
            lambda: lambda.value(),
        })
    }
}

/// Coefficients (ascending) of `G(lambda) = (B^2 - A C) prod (a_i - lambda)`,
/// a polynomial of degree `d - 1`:
/// `G = sum_i v_i^2 D_i - sum_{i<j} M_ij^2 D_ij`, where `D_i` (`D_ij`) is the
/// product of `(a_k - lambda)` over `k != i` (`k != i, j`) and `M_ij` are the
/// Plücker moments of the line.
pub fn caustic_polynomial(family: &ConfocalFamily, line: &ProjLine) -> Vec<f64> {
    let a = family.semi_axes();
    let d = a.len();
    let (p, v) = (line.base(), line.direction());
    let mut g = vec![0.0; d];
    for i in 0..d {
        let di = poly::product_of_shifts((0..d).filter(|&k| k != i).map(|k| &a[k]));
        poly::add_scaled(&mut g, v[i] * v[i], &di);
        for j in i + 1..d {
            let dij = poly::product_of_shifts((0..d).filter(|&k| k != i && k != j).map(|k| &a[k]));
            let m = p[i] * v[j] - p[j] * v[i];
            poly::add_scaled(&mut g, -m * m, &dij);
        }
    }
    g.truncate(d);
    g
}

/// Chasles: the `d - 1` family members touched by a line.
pub fn line_caustics(family: &ConfocalFamily, line: &ProjLine) -> Result<CausticSet> {
    if line.dim() != family.dim() {
        return Err(Error::DimensionMismatch {
            expected: family.dim(),
            got: line.dim(),
        });
    }
    let g = caustic_polynomial(family, line);
    let params = match family.dim() {
        2 => vec![CausticParam {
            value: -g[0] / g[1],
            multiple: false,
        }],
        3 => {
            let disc = g[1] * g[1] - 4.0 * g[2] * g[0];
            let roots = poly::quadratic_roots(g[0], g[1], g[2], 1e-12)
                .ok_or(Error::ComplexCaustics { discriminant: disc })?;
            let multiple = (roots[1] - roots[0]).abs() <= 1e-7 * roots[0].abs().max(1.0);
            roots
                .iter()
                .map(|&value| CausticParam { value, multiple })
                .collect()
        }
        d => return Err(Error::UnsupportedDimension(d)),
    };
    Ok(CausticSet { params })
}

/// `steps` bounces inside `Q_lambda`, starting from `start`.
pub fn trajectory(
    family: &ConfocalFamily,
    lambda: QuadricParam,
    start: &ProjLine,
    steps: usize,
    tol: &Tolerances,
) -> Result<Vec<ReflectionEvent>> {
    let mut events = Vec::with_capacity(steps);
    let mut current = start.clone();
    for _ in 0..steps {
        let (_, point) = forward_hit(family, lambda, &current, tol)?;
        let event = reflect(family, lambda, &current, &point, tol)?;
        current = event.outgoing.clone();
        events.push(event);
    }
    Ok(events)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family() -> ConfocalFamily {
        ConfocalFamily::new(vec![4.0, 1.0]).unwrap()
    }

    fn lam(v: f64) -> QuadricParam {
        family().param(v).unwrap()
    }

    fn line(p: &[f64], v: &[f64]) -> ProjLine {
        ProjLine::new(p, v).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn major_axis_chord() {
        let h = intersect(&family(), lam(0.0), &line(&[0.0, 0.0], &[1.0, 0.0]), &tol()).unwrap();
        assert!(!h.tangent);
        assert!(close(
            &h.points[0].to_affine().unwrap(),
            &[-2.0, 0.0],
            1e-15
        ));
        assert!(close(&h.points[1].to_affine().unwrap(), &[2.0, 0.0], 1e-15));
    }

    #[test]
    fn diagonal_chord() {
        // 5t^2 - 2t - 3 = 0 for the unnormalised direction (1, 1)
        let l = line(&[-1.0, 0.0], &[1.0, 1.0]);
        let h = intersect(&family(), lam(0.0), &l, &tol()).unwrap();
        assert!(close(
            &h.points[0].to_affine().unwrap(),
            &[-1.6, -0.6],
            1e-14
        ));
        assert!(close(&h.points[1].to_affine().unwrap(), &[0.0, 1.0], 1e-14));
        let s2 = 2f64.sqrt();
        assert!((h.t[0] + 0.6 * s2).abs() < 1e-14 && (h.t[1] - s2).abs() < 1e-14);
    }

    #[test]
    fn outside_line_misses() {
        let r = intersect(&family(), lam(0.0), &line(&[3.0, 0.0], &[0.0, 1.0]), &tol());
        assert_eq!(r, Err(Error::NoIntersection { lambda: 0.0 }));
    }

    #[test]
    fn tangent_line_reported() {
        let h = intersect(&family(), lam(0.0), &line(&[2.0, 0.0], &[0.0, 1.0]), &tol()).unwrap();
        assert!(h.tangent);
    }

    #[test]
    fn reflections() {
        let f = family();
        let s = 0.5f64.sqrt();
        let at = |x: &[f64]| HomPoint::from_affine(x).unwrap();

        let e = reflect(
            &f,
            lam(0.0),
            &line(&[0.0, 0.0], &[1.0, 0.0]),
            &at(&[2.0, 0.0]),
            &tol(),
        )
        .unwrap();
        assert!(close(e.outgoing.direction(), &[-1.0, 0.0], 1e-15));

        let e = reflect(
            &f,
            lam(0.0),
            &line(&[-1.0, 0.0], &[1.0, 1.0]),
            &at(&[0.0, 1.0]),
            &tol(),
        )
        .unwrap();
        assert!(close(e.outgoing.direction(), &[s, -s], 1e-15));

        let e = reflect(
            &f,
            lam(0.0),
            &line(&[0.0, 1.0], &[1.0, -1.0]),
            &at(&[1.6, -0.6]),
            &tol(),
        )
        .unwrap();
        let n = 338f64.sqrt();
        assert!(close(e.outgoing.direction(), &[-7.0 / n, 17.0 / n], 1e-14));
        let want = DualHyperplane::new(vec![-1.0, 0.4, -0.6]).unwrap();
        assert!(e.tangent_plane.approx_eq(&want, 1e-15));
    }

    #[test]
    fn reflection_preconditions() {
        let f = family();
        let at = |x: &[f64]| HomPoint::from_affine(x).unwrap();
        let r = reflect(
            &f,
            lam(0.0),
            &line(&[2.0, -1.0], &[0.0, 1.0]),
            &at(&[2.0, 0.0]),
            &tol(),
        );
        assert!(matches!(r, Err(Error::TangentialIncidence { .. })));
        let r = reflect(
            &f,
            lam(0.0),
            &line(&[0.0, 0.0], &[1.0, 0.0]),
            &at(&[1.0, 0.0]),
            &tol(),
        );
        assert!(matches!(r, Err(Error::OffQuadric { .. })));
    }

    #[test]
    fn caustic_examples() {
        let f = family();
        let c = |p: &[f64], v: &[f64]| line_caustics(&f, &line(p, v)).unwrap().values();
        assert!(c(&[2.0, 0.0], &[0.0, 1.0])[0].abs() < 1e-15);
        assert!((c(&[0.0, 0.0], &[1.0, 0.0])[0] - 1.0).abs() < 1e-15);
        assert!((c(&[-1.0, 0.0], &[1.0, 1.0])[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn trajectory_examples() {
        let f = family();
        let s = line(&[0.0, 1.0], &[1.0, -1.0]);
        let ev = trajectory(&f, lam(0.0), &s, 1, &tol()).unwrap();
        assert!(close(ev[0].point_affine(), &[1.6, -0.6], 1e-14));
        let n = 338f64.sqrt();
        assert!(close(
            ev[0].outgoing.direction(),
            &[-7.0 / n, 17.0 / n],
            1e-14
        ));

        let ev = trajectory(&f, lam(0.0), &line(&[0.0, 0.0], &[1.0, 0.0]), 2, &tol()).unwrap();
        assert!(close(ev[0].point_affine(), &[2.0, 0.0], 1e-15));
        assert!(close(ev[1].point_affine(), &[-2.0, 0.0], 1e-15));

        let ev = trajectory(&f, lam(0.0), &s, 100, &tol()).unwrap();
        for e in &ev {
            let c = line_caustics(&f, &e.outgoing).unwrap().values()[0];
            assert!((c - 2.0).abs() < 1e-8 * 2.0, "{c}");
        }
    }
}
