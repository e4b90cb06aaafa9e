//! Double reflection configurations and double reflection nets.
//!
//! A net assigns a line to every vertex of a finite window of `Z^m`. Lines
//! at the two ends of an edge in direction `e_k` meet on the quadric
//! `Q_{lambda_k}` and are mirror images there; along every axis the lines
//! form a billiard trajectory, and the four tangent hyperplanes around each
//! elementary quadrilateral lie in one pencil.
//!
//! Construction fills the window in lexicographic order. Axis vertices are
//! produced by forward billiard bounces; every other vertex is the fourth
//! line of a double reflection configuration on one of its lower faces. The
//! face is picked by a [`FillOrder`], and for vertices with three or more
//! nonzero coordinates every alternative face is re-derived and compared.

use crate::billiards::{forward_hit, intersect, line_caustics, reflect, ReflectionEvent};
use crate::confocal::{ConfocalFamily, QuadricParam};
use crate::projective::{
    axpy, dot, pencil_residual, projective_distance, DualHyperplane, HomPoint, LineDeviation,
    ProjLine,
};
use crate::{Error, Result, Tolerances};

/// The four lines, points and tangent hyperplanes of a double reflection
/// configuration on `Q_alpha` and `Q_beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct DRConfig {
    pub ell: ProjLine,
    pub ell1: ProjLine,
    pub ell2: ProjLine,
    pub ell12: ProjLine,
    pub alpha: QuadricParam,
    pub beta: QuadricParam,
    pub t_a: DualHyperplane,
    pub t_b: DualHyperplane,
    pub t_b1: DualHyperplane,
    pub t_a1: DualHyperplane,
    pub a: HomPoint,
    pub b: HomPoint,
    pub b1: HomPoint,
    pub a1: HomPoint,
    pub pencil_residual: f64,
    /// Disagreement between the fourth line reached through `B1` and through
    /// `A1`.
    pub closure: LineDeviation,
}

impl DRConfig {
    pub fn planes(&self) -> [DualHyperplane; 4] {
        [
            self.t_a.clone(),
            self.t_b.clone(),
            self.t_b1.clone(),
            self.t_a1.clone(),
        ]
    }
}

/// Among the points of `line ∩ Q_lambda`, the one whose tangent hyperplane
/// keeps `fixed` in a pencil. Ties go to the smaller line parameter.
fn pencil_branch(
    family: &ConfocalFamily,
    lambda: QuadricParam,
    line: &ProjLine,
    fixed: &[DualHyperplane; 2],
    tol: &Tolerances,
) -> Result<HomPoint> {
    let hits = intersect(family, lambda, line, tol)?;
    let candidates: &[HomPoint] = if hits.tangent {
        &hits.points[..1]
    } else {
        &hits.points
    };
    let mut residuals = Vec::with_capacity(2);
    let mut best: Option<(f64, &HomPoint)> = None;
    for point in candidates {
        let plane = family.tangent_plane(lambda, &point.affine()?)?;
        let r = pencil_residual(&[fixed[0].clone(), fixed[1].clone(), plane])?;
        residuals.push(r);
        if r < tol.tol_rank && best.is_none_or(|(b, _)| r < b) {
            best = Some((r, point));
        }
    }
    best.map(|(_, p)| p.clone())
        .ok_or(Error::BranchFailure { residuals })
}

/// Complete the configuration spanned by `ell`, the point `a` of `ell` on
/// `Q_alpha` and the point `b` of `ell` on `Q_beta`.
///
/// The fourth line is built twice, through `B1 ∈ ell1 ∩ Q_beta` and through
/// `A1 ∈ ell2 ∩ Q_alpha`, and the two results must agree.
pub fn double_reflection(
    family: &ConfocalFamily,
    alpha: QuadricParam,
    beta: QuadricParam,
    ell: &ProjLine,
    a: &HomPoint,
    b: &HomPoint,
    tol: &Tolerances,
) -> Result<DRConfig> {
    if alpha == beta {
        return Err(Error::RepeatedQuadrics);
    }
    let at_a = reflect(family, alpha, ell, a, tol)?;
    let at_b = reflect(family, beta, ell, b, tol)?;
    let ell1 = at_a.outgoing;
    let ell2 = at_b.outgoing;
    let fixed = [at_a.tangent_plane.clone(), at_b.tangent_plane.clone()];

    let b1 = pencil_branch(family, beta, &ell1, &fixed, tol)?;
    let a1 = pencil_branch(family, alpha, &ell2, &fixed, tol)?;
    let at_b1 = reflect(family, beta, &ell1, &b1, tol)?;
    let at_a1 = reflect(family, alpha, &ell2, &a1, tol)?;

    let closure = at_b1.outgoing.deviation(&at_a1.outgoing);
    if closure.max() > tol.tol_closure {
        return Err(Error::ClosureMismatch {
            angle: closure.angle,
            offset: closure.offset,
        });
    }
    let planes = [
        at_a.tangent_plane.clone(),
        at_b.tangent_plane.clone(),
        at_b1.tangent_plane.clone(),
        at_a1.tangent_plane.clone(),
    ];
    let residual = pencil_residual(&planes)?;
    if residual >= tol.tol_rank {
        return Err(Error::NotInPencil { residual });
    }
    let [t_a, t_b, t_b1, t_a1] = planes;
    Ok(DRConfig {
        ell: ell.clone(),
        ell1,
        ell2,
        ell12: at_b1.outgoing,
        alpha,
        beta,
        t_a,
        t_b,
        t_b1,
        t_a1,
        a: a.clone(),
        b: b.clone(),
        b1,
        a1,
        pencil_residual: residual,
        closure,
    })
}

/// A finite box `[0, N_1] x ... x [0, N_m]` of `Z^m`, indexed in
/// lexicographic order (first coordinate most significant).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    extents: Vec<usize>,
    strides: Vec<usize>,
}

impl Window {
    pub fn new(extents: &[usize]) -> Self {
        let mut strides = vec![1; extents.len()];
        for k in (0..extents.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * (extents[k + 1] + 1);
        }
        Window {
            extents: extents.to_vec(),
            strides,
        }
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn m(&self) -> usize {
        self.extents.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.extents.iter().map(|n| n + 1).product()
    }

    pub fn contains(&self, v: &[usize]) -> bool {
        v.len() == self.m() && v.iter().zip(&self.extents).all(|(a, n)| a <= n)
    }

    pub fn index(&self, v: &[usize]) -> Option<usize> {
        self.contains(v)
            .then(|| v.iter().zip(&self.strides).map(|(a, s)| a * s).sum())
    }

    pub fn vertex(&self, index: usize) -> Vec<usize> {
        let mut rest = index;
        self.strides
            .iter()
            .map(|s| {
                let c = rest / s;
                rest %= s;
                c
            })
            .collect()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.vertex_count()).map(|i| self.vertex(i))
    }

    /// Number of edges `(n, n + e_k)` inside the window.
    pub fn edge_count(&self) -> usize {
        (0..self.m())
            .map(|k| {
                self.extents
                    .iter()
                    .enumerate()
                    .map(|(j, n)| if j == k { *n } else { n + 1 })
                    .product::<usize>()
            })
            .sum()
    }
}

fn shifted(v: &[usize], k: usize, delta: isize) -> Vec<usize> {
    let mut out = v.to_vec();
    out[k] = (out[k] as isize + delta) as usize;
    out
}

/// Face preference when a vertex can be reached from several lower faces:
/// directions listed first are preferred.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FillOrder(Vec<usize>);

impl FillOrder {
    /// Directions in natural order.
    pub fn natural(m: usize) -> Self {
        FillOrder((0..m).collect())
    }

    pub fn new(priority: Vec<usize>) -> Result<Self> {
        let mut sorted = priority.clone();
        sorted.sort_unstable();
        if sorted != (0..priority.len()).collect::<Vec<_>>() {
            return Err(Error::config(
                "fill order",
                "must be a permutation of the directions",
            ));
        }
        Ok(FillOrder(priority))
    }

    fn rank(&self, k: usize) -> usize {
        self.0.iter().position(|&d| d == k).unwrap_or(usize::MAX)
    }
}

/// A double reflection net over a finite window.
#[derive(Debug, Clone, PartialEq)]
pub struct DRNet {
    lambdas: Vec<QuadricParam>,
    window: Window,
    lines: Vec<ProjLine>,
    /// `edge_points[v][k]`: where `phi(v)` and `phi(v + e_k)` meet.
    edge_points: Vec<Vec<Option<Vec<f64>>>>,
}

impl DRNet {
    pub fn m(&self) -> usize {
        self.window.m()
    }

    pub fn lambdas(&self) -> &[QuadricParam] {
        &self.lambdas
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn lines(&self) -> &[ProjLine] {
        &self.lines
    }

    pub fn line(&self, v: &[usize]) -> Option<&ProjLine> {
        self.window.index(v).map(|i| &self.lines[i])
    }

    /// Reflection point of the edge `(v, v + e_k)`.
    pub fn edge_point(&self, v: &[usize], k: usize) -> Option<&[f64]> {
        let i = self.window.index(v)?;
        self.edge_points.get(i)?.get(k)?.as_deref()
    }

    /// Replace one line without touching anything else. Meant for
    /// perturbation studies; the result generally fails [`verify_net`].
    pub fn set_line(&mut self, v: &[usize], line: ProjLine) -> Result<()> {
        let i = self
            .window
            .index(v)
            .ok_or_else(|| Error::config("vertex", format!("{v:?} is outside the window")))?;
        self.lines[i] = line;
        Ok(())
    }

    /// Rebuild a net from its lines alone, recovering every reflection point
    /// from the lines at the two ends of its edge. The lines are not checked
    /// here; edges whose lines miss their quadric get no point, and
    /// [`verify_net`] reports every mismatch.
    pub fn from_lines(
        family: &ConfocalFamily,
        lambdas: Vec<QuadricParam>,
        extents: &[usize],
        lines: Vec<ProjLine>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let window = Window::new(extents);
        if lambdas.len() != window.m() {
            return Err(Error::DimensionMismatch {
                expected: window.m(),
                got: lambdas.len(),
            });
        }
        if lines.len() != window.vertex_count() {
            return Err(Error::DimensionMismatch {
                expected: window.vertex_count(),
                got: lines.len(),
            });
        }
        let mut edge_points = vec![vec![None; window.m()]; lines.len()];
        for (i, v) in window.vertices().enumerate() {
            for k in 0..window.m() {
                if v[k] == window.extents[k] {
                    continue;
                }
                let j = window.index(&shifted(&v, k, 1)).expect("inside");
                edge_points[i][k] = meeting_point(family, lambdas[k], &lines[i], &lines[j], tol)
                    .ok()
                    .map(|(x, _)| x);
            }
        }
        Ok(DRNet {
            lambdas,
            window,
            lines,
            edge_points,
        })
    }
}

/// Mismatch between `to` and the reflection of `from` off `Q_lambda` at `x`:
/// the larger of the distance from `x` to `to` and the sign-insensitive
/// direction gap.
fn reflection_mismatch(
    family: &ConfocalFamily,
    lambda: QuadricParam,
    from: &ProjLine,
    to: &ProjLine,
    x: &[f64],
) -> f64 {
    let v = from.direction();
    let n = family.normal(lambda, x);
    let nn = dot(&n, &n);
    if nn == 0.0 {
        return f64::INFINITY;
    }
    let reflected = axpy(-2.0 * dot(v, &n) / nn, &n, v);
    let len = dot(&reflected, &reflected).sqrt();
    let reflected: Vec<f64> = reflected.iter().map(|c| c / len).collect();
    to.distance_to_point(x)
        .max(projective_distance(&reflected, to.direction()))
}

/// The point of `from ∩ Q_lambda` where `from` reflects into `to`, with its
/// mismatch. Ties go to the smaller line parameter.
fn meeting_point(
    family: &ConfocalFamily,
    lambda: QuadricParam,
    from: &ProjLine,
    to: &ProjLine,
    tol: &Tolerances,
) -> Result<(Vec<f64>, f64)> {
    let hits = intersect(family, lambda, from, tol)?;
    let mut best: Option<(Vec<f64>, f64)> = None;
    for t in hits.t {
        let x = from.point_at(t);
        let r = reflection_mismatch(family, lambda, from, to, &x);
        if best.as_ref().is_none_or(|(_, b)| r < *b) {
            best = Some((x, r));
        }
    }
    Ok(best.expect("two candidates"))
}

struct Builder<'a> {
    family: &'a ConfocalFamily,
    lambdas: &'a [QuadricParam],
    window: Window,
    order: FillOrder,
    tol: &'a Tolerances,
    lines: Vec<Option<ProjLine>>,
    points: Vec<Vec<Option<Vec<f64>>>>,
}

impl Builder<'_> {
    fn line(&self, v: &[usize]) -> &ProjLine {
        self.lines[self.window.index(v).expect("inside")]
            .as_ref()
            .expect("filled in lexicographic order")
    }

    fn point(&self, v: &[usize], k: usize) -> HomPoint {
        let x = self.points[self.window.index(v).expect("inside")][k]
            .as_ref()
            .expect("edge resolved when its head was filled");
        HomPoint::from_affine(x).expect("finite")
    }

    fn set_point(&mut self, v: &[usize], k: usize, x: &[f64]) {
        let i = self.window.index(v).expect("inside");
        self.points[i][k] = Some(x.to_vec());
    }

    fn face(&self, n: &[usize], i: usize, j: usize) -> Result<DRConfig> {
        let base = shifted(&shifted(n, i, -1), j, -1);
        double_reflection(
            self.family,
            self.lambdas[i],
            self.lambdas[j],
            self.line(&base),
            &self.point(&base, i),
            &self.point(&base, j),
            self.tol,
        )
    }

    fn fill_vertex(&mut self, n: &[usize], origin_points: Option<&[HomPoint]>) -> Result<()> {
        let mut nz: Vec<usize> = (0..n.len()).filter(|&k| n[k] > 0).collect();
        nz.sort_by_key(|&k| self.order.rank(k));
        let index = self.window.index(n).expect("inside");

        if let [k] = nz[..] {
            let prev = shifted(n, k, -1);
            let line = self.line(&prev).clone();
            let point = match origin_points {
                Some(points) if prev.iter().all(|&c| c == 0) => points[k].clone(),
                _ => {
                    forward_hit(self.family, self.lambdas[k], &line, self.tol)
                        .map_err(|e| e.at_vertex(&prev))?
                        .1
                }
            };
            let event: ReflectionEvent =
                reflect(self.family, self.lambdas[k], &line, &point, self.tol)
                    .map_err(|e| e.at_vertex(&prev))?;
            self.set_point(&prev, k, event.point_affine());
            self.lines[index] = Some(event.outgoing);
            return Ok(());
        }

        let (i, j) = (nz[0], nz[1]);
        let cfg = self.face(n, i, j).map_err(|e| e.at_vertex(n))?;
        let b1 = cfg.b1.affine()?;
        let a1 = cfg.a1.affine()?;
        self.set_point(&shifted(n, j, -1), j, &b1);
        self.set_point(&shifted(n, i, -1), i, &a1);
        self.lines[index] = Some(cfg.ell12.clone());

        // incoming edges from directions outside the chosen face
        for &k in &nz[2..] {
            let prev = shifted(n, k, -1);
            let (x, residual) = meeting_point(
                self.family,
                self.lambdas[k],
                self.line(&prev),
                &cfg.ell12,
                self.tol,
            )
            .map_err(|e| e.at_vertex(n))?;
            if residual > self.tol.tol_closure {
                return Err(Error::ClosureMismatch {
                    angle: residual,
                    offset: residual,
                }
                .at_vertex(n));
            }
            self.set_point(&prev, k, &x);
        }

        // every other lower face must produce the same line
        for a in 0..nz.len() {
            for b in a + 1..nz.len() {
                if (a, b) == (0, 1) {
                    continue;
                }
                let alt = self.face(n, nz[a], nz[b]).map_err(|e| e.at_vertex(n))?;
                let dev = cfg.ell12.deviation(&alt.ell12);
                if dev.max() > self.tol.tol_closure {
                    return Err(Error::ClosureMismatch {
                        angle: dev.angle,
                        offset: dev.offset,
                    }
                    .at_vertex(n));
                }
            }
        }
        Ok(())
    }
}

fn check_lambdas(family: &ConfocalFamily, lambdas: &[QuadricParam], m: usize) -> Result<()> {
    if lambdas.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: lambdas.len(),
        });
    }
    for (i, a) in lambdas.iter().enumerate() {
        family.param(a.value())?;
        if lambdas[..i].contains(a) {
            return Err(Error::RepeatedQuadrics);
        }
    }
    Ok(())
}

pub(crate) fn build_net_seeded(
    family: &ConfocalFamily,
    lambdas: &[QuadricParam],
    initial: &ProjLine,
    extents: &[usize],
    order: &FillOrder,
    origin_points: Option<&[HomPoint]>,
    tol: &Tolerances,
) -> Result<DRNet> {
    let window = Window::new(extents);
    check_lambdas(family, lambdas, window.m())?;
    if order.0.len() != window.m() {
        return Err(Error::config(
            "fill order",
            "length must equal the lattice dimension",
        ));
    }
    if initial.dim() != family.dim() {
        return Err(Error::DimensionMismatch {
            expected: family.dim(),
            got: initial.dim(),
        });
    }
    let origin = vec![0; window.m()];
    for &lambda in lambdas {
        let hits = intersect(family, lambda, initial, tol).map_err(|e| e.at_vertex(&origin))?;
        if hits.tangent {
            return Err(Error::TangentialIncidence {
                lambda: lambda.value(),
            }
            .at_vertex(&origin));
        }
    }

    let count = window.vertex_count();
    let mut builder = Builder {
        family,
        lambdas,
        window: window.clone(),
        order: order.clone(),
        tol,
        lines: vec![None; count],
        points: vec![vec![None; window.m()]; count],
    };
    builder.lines[0] = Some(initial.clone());
    for index in 1..count {
        let n = window.vertex(index);
        builder.fill_vertex(&n, origin_points)?;
    }
    Ok(DRNet {
        lambdas: lambdas.to_vec(),
        window,
        lines: builder
            .lines
            .into_iter()
            .map(|l| l.expect("filled"))
            .collect(),
        edge_points: builder.points,
    })
}

/// Build the net with `phi(0) = initial` on the window `[0, N_1] x ... x [0, N_m]`.
pub fn build_net(
    family: &ConfocalFamily,
    lambdas: &[QuadricParam],
    initial: &ProjLine,
    extents: &[usize],
    tol: &Tolerances,
) -> Result<DRNet> {
    build_net_ordered(
        family,
        lambdas,
        initial,
        extents,
        &FillOrder::natural(extents.len()),
        tol,
    )
}

pub fn build_net_ordered(
    family: &ConfocalFamily,
    lambdas: &[QuadricParam],
    initial: &ProjLine,
    extents: &[usize],
    order: &FillOrder,
    tol: &Tolerances,
) -> Result<DRNet> {
    build_net_seeded(family, lambdas, initial, extents, order, None, tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeCheck {
    pub vertex: Vec<usize>,
    pub direction: usize,
    pub residual: f64,
    pub point: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadCheck {
    pub vertex: Vec<usize>,
    pub directions: (usize, usize),
    pub pencil_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxisCheck {
    pub start: Vec<usize>,
    pub direction: usize,
    pub caustic_drift: f64,
}

/// Residuals of every net axiom over the window.
#[derive(Debug, Clone, PartialEq)]
pub struct NetReport {
    pub edges: Vec<EdgeCheck>,
    pub quads: Vec<QuadCheck>,
    pub axes: Vec<AxisCheck>,
    /// `(vertex, direction)` where the trajectory turns back on itself.
    pub backtracks: Vec<(Vec<usize>, usize)>,
    pub tolerances: Tolerances,
}

impl NetReport {
    pub fn failing_edges(&self) -> impl Iterator<Item = &EdgeCheck> {
        self.edges
            .iter()
            .filter(|e| e.residual.is_nan() || e.residual > self.tolerances.tol_closure)
    }

    pub fn failing_quads(&self) -> impl Iterator<Item = &QuadCheck> {
        self.quads
            .iter()
            .filter(|q| q.pencil_residual.is_nan() || q.pencil_residual >= self.tolerances.tol_rank)
    }

    pub fn failing_axes(&self) -> impl Iterator<Item = &AxisCheck> {
        self.axes
            .iter()
            .filter(|a| a.caustic_drift.is_nan() || a.caustic_drift >= self.tolerances.tol_caustic)
    }

    pub fn max_edge_residual(&self) -> f64 {
        self.edges.iter().map(|e| e.residual).fold(0.0, f64::max)
    }

    pub fn max_pencil_residual(&self) -> f64 {
        self.quads
            .iter()
            .map(|q| q.pencil_residual)
            .fold(0.0, f64::max)
    }

    pub fn max_caustic_drift(&self) -> f64 {
        self.axes
            .iter()
            .map(|a| a.caustic_drift)
            .fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.failing_edges().next().is_none()
            && self.failing_quads().next().is_none()
            && self.failing_axes().next().is_none()
            && self.backtracks.is_empty()
    }
}

/// Check every axiom of the net from its lines alone.
pub fn verify_net(family: &ConfocalFamily, net: &DRNet, tol: &Tolerances) -> NetReport {
    let window = net.window();
    let m = window.m();
    let mut edges = Vec::new();
    let mut planes: Vec<Vec<Option<DualHyperplane>>> = vec![vec![None; m]; window.vertex_count()];

    for (i, v) in window.vertices().enumerate() {
        for k in 0..m {
            if v[k] == window.extents()[k] {
                continue;
            }
            let next = net.line(&shifted(&v, k, 1)).expect("inside");
            let lambda = net.lambdas()[k];
            let check = match meeting_point(family, lambda, &net.lines[i], next, tol) {
                Ok((x, residual)) => {
                    planes[i][k] = family.tangent_plane(lambda, &x).ok();
                    EdgeCheck {
                        vertex: v.clone(),
                        direction: k,
                        residual,
                        point: Some(x),
                    }
                }
                Err(_) => EdgeCheck {
                    vertex: v.clone(),
                    direction: k,
                    residual: f64::INFINITY,
                    point: None,
                },
            };
            edges.push(check);
        }
    }

    let mut quads = Vec::new();
    for (idx, v) in window.vertices().enumerate() {
        for i in 0..m {
            for j in i + 1..m {
                if v[i] == window.extents()[i] || v[j] == window.extents()[j] {
                    continue;
                }
                let vi = window.index(&shifted(&v, i, 1)).expect("inside");
                let vj = window.index(&shifted(&v, j, 1)).expect("inside");
                let four = [
                    planes[idx][i].clone(),
                    planes[idx][j].clone(),
                    planes[vi][j].clone(),
                    planes[vj][i].clone(),
                ];
                let pencil = if four.iter().all(Option::is_some) {
                    let four: Vec<DualHyperplane> = four.into_iter().map(Option::unwrap).collect();
                    pencil_residual(&four).unwrap_or(f64::INFINITY)
                } else {
                    f64::INFINITY
                };
                quads.push(QuadCheck {
                    vertex: v.clone(),
                    directions: (i, j),
                    pencil_residual: pencil,
                });
            }
        }
    }

    let mut axes = Vec::new();
    for k in 0..m {
        for v in window.vertices().filter(|v| v[k] == 0) {
            if window.extents()[k] == 0 {
                continue;
            }
            let reference = line_caustics(family, net.line(&v).expect("inside"));
            let mut drift: f64 = 0.0;
            for t in 1..=window.extents()[k] {
                let w = shifted(&v, k, t as isize);
                let here = line_caustics(family, net.line(&w).expect("inside"));
                drift = match (&reference, here) {
                    (Ok(a), Ok(b)) => drift.max(a.relative_drift(&b)),
                    _ => f64::INFINITY,
                };
            }
            axes.push(AxisCheck {
                start: v,
                direction: k,
                caustic_drift: drift,
            });
        }
    }

    let mut backtracks = Vec::new();
    for v in window.vertices() {
        for k in 0..m {
            if v[k] == 0 || v[k] == window.extents()[k] {
                continue;
            }
            let cur = net.line(&v).expect("inside");
            let prev = net.line(&shifted(&v, k, -1)).expect("inside");
            let next = net.line(&shifted(&v, k, 1)).expect("inside");
            let lambda = net.lambdas()[k];
            let Ok(hits) = intersect(family, lambda, cur, tol) else {
                continue;
            };
            if hits.tangent {
                continue;
            }
            let ok = |to: &ProjLine, t: f64| {
                reflection_mismatch(family, lambda, cur, to, &cur.point_at(t)) <= tol.tol_closure
            };
            let (in0, in1) = (ok(prev, hits.t[0]), ok(prev, hits.t[1]));
            let (out0, out1) = (ok(next, hits.t[0]), ok(next, hits.t[1]));
            let in_any = in0 || in1;
            let out_any = out0 || out1;
            if in_any && out_any && !((in0 && out1) || (in1 && out0)) {
                backtracks.push((v.clone(), k));
            }
        }
    }

    NetReport {
        edges,
        quads,
        axes,
        backtracks,
        tolerances: *tol,
    }
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

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn reference_line() -> ProjLine {
        ProjLine::new(&[0.0, 1.0], &[1.0, -1.0]).unwrap()
    }

    #[test]
    fn window_indexing() {
        let w = Window::new(&[2, 3]);
        assert_eq!(w.vertex_count(), 12);
        assert_eq!(w.index(&[1, 2]), Some(6));
        assert_eq!(w.vertex(6), vec![1, 2]);
        assert_eq!(w.index(&[3, 0]), None);
        assert_eq!(w.edge_count(), 2 * 4 + 3 * 3);
        let lex: Vec<_> = w.vertices().take(5).collect();
        assert_eq!(
            lex,
            vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 0]]
        );
    }

    #[test]
    fn reference_configuration_closes() {
        let f = family();
        let l = reference_line();
        let (_, a) = forward_hit(&f, lam(0.0), &l, &tol()).unwrap();
        let (_, b) = forward_hit(&f, lam(-3.0), &l, &tol()).unwrap();
        let a_aff = a.to_affine().unwrap();
        assert!((a_aff[0] - 1.6).abs() < 1e-14 && (a_aff[1] + 0.6).abs() < 1e-14);
        let cfg = double_reflection(&f, lam(0.0), lam(-3.0), &l, &a, &b, &tol()).unwrap();
        assert!(cfg.pencil_residual < 1e-10);
        assert!(cfg.closure.max() < 1e-9);
        // opposite tangent planes touch the same quadric
        for (p, q) in [
            (&cfg.t_a, 0.0),
            (&cfg.t_a1, 0.0),
            (&cfg.t_b, -3.0),
            (&cfg.t_b1, -3.0),
        ] {
            assert!(f.tangency_form(lam(q), p).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn tangent_line_rejected() {
        let f = family();
        let l = ProjLine::new(&[2.0, 0.0], &[0.0, 1.0]).unwrap();
        let a = HomPoint::from_affine(&[2.0, 0.0]).unwrap();
        let b = forward_hit(&f, lam(-3.0), &l, &tol()).unwrap().1;
        let r = double_reflection(&f, lam(0.0), lam(-3.0), &l, &a, &b, &tol());
        assert!(matches!(r, Err(Error::TangentialIncidence { .. })), "{r:?}");
    }

    #[test]
    fn distant_line_misses_both_quadrics() {
        let f = family();
        let l = ProjLine::new(&[10.0, 0.0], &[0.0, 1.0]).unwrap();
        for q in [0.0, -3.0] {
            assert!(matches!(
                intersect(&f, lam(q), &l, &tol()),
                Err(Error::NoIntersection { .. })
            ));
        }
        let r = build_net(&f, &[lam(0.0), lam(-3.0)], &l, &[1, 1], &tol());
        match r {
            Err(Error::Construction { vertex, source }) => {
                assert_eq!(vertex, vec![0, 0]);
                assert!(matches!(*source, Error::NoIntersection { .. }));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn one_dimensional_net_is_a_trajectory() {
        let f = family();
        let l = ProjLine::new(&[0.0, 0.0], &[1.0, 0.0]).unwrap();
        let net = build_net(&f, &[lam(0.0)], &l, &[5], &tol()).unwrap();
        for t in 0..5 {
            let x = net.edge_point(&[t], 0).unwrap();
            let want = if t % 2 == 0 { 2.0 } else { -2.0 };
            assert!((x[0] - want).abs() < 1e-14 && x[1].abs() < 1e-14, "{x:?}");
        }
        let report = verify_net(&f, &net, &tol());
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn reference_net_verifies() {
        let f = family();
        let net = build_net(
            &f,
            &[lam(0.0), lam(-3.0)],
            &reference_line(),
            &[3, 3],
            &tol(),
        )
        .unwrap();
        assert_eq!(net.lines().len(), 16);
        let report = verify_net(&f, &net, &tol());
        assert_eq!(report.quads.len(), 9);
        assert_eq!(report.edges.len(), 24);
        assert!(report.passed(), "{report:?}");
        assert!(report.max_edge_residual() < 1e-8);
        assert!(report.max_pencil_residual() < 1e-8);
        assert!(report.max_caustic_drift() < 1e-8);
    }

    #[test]
    fn repeated_quadrics_rejected() {
        let f = family();
        let r = build_net(
            &f,
            &[lam(0.0), lam(0.0)],
            &reference_line(),
            &[2, 2],
            &tol(),
        );
        assert_eq!(r, Err(Error::RepeatedQuadrics));
    }

    #[test]
    fn perturbed_line_is_located() {
        let f = family();
        let mut net = build_net(
            &f,
            &[lam(0.0), lam(-3.0)],
            &reference_line(),
            &[3, 3],
            &tol(),
        )
        .unwrap();
        let old = net.line(&[1, 1]).unwrap().clone();
        let d = old.direction();
        let bumped = ProjLine::new(old.base(), &[d[0] + 1e-3, d[1]]).unwrap();
        net.set_line(&[1, 1], bumped).unwrap();
        let report = verify_net(&f, &net, &tol());
        assert!(!report.passed());
        let bad: Vec<_> = report.failing_quads().map(|q| q.vertex.clone()).collect();
        assert!(!bad.is_empty());
        // every failing quadrilateral has the perturbed vertex as a corner
        for v in &bad {
            assert!(
                v[0] <= 1 && v[1] <= 1 && v[0] + 1 >= 1 && v[1] + 1 >= 1,
                "{v:?}"
            );
        }
    }

    #[test]
    fn empty_window_passes_trivially() {
        let f = family();
        let net = build_net(
            &f,
            &[lam(0.0), lam(-3.0)],
            &reference_line(),
            &[0, 0],
            &tol(),
        )
        .unwrap();
        let report = verify_net(&f, &net, &tol());
        assert!(report.edges.is_empty() && report.quads.is_empty());
        assert!(report.passed());
    }

    #[test]
    fn from_lines_recovers_edge_points() {
        let f = family();
        let net = build_net(
            &f,
            &[lam(0.0), lam(-3.0)],
            &reference_line(),
            &[2, 2],
            &tol(),
        )
        .unwrap();
        let rebuilt = DRNet::from_lines(
            &f,
            net.lambdas().to_vec(),
            &[2, 2],
            net.lines().to_vec(),
            &tol(),
        )
        .unwrap();
        for v in net.window().vertices() {
            for k in 0..2 {
                match (net.edge_point(&v, k), rebuilt.edge_point(&v, k)) {
                    (Some(a), Some(b)) => {
                        assert!(a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12));
                    }
                    (None, None) => {}
                    other => panic!("{other:?}"),
                }
            }
        }
    }
}
