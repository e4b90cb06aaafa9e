use std::collections::BTreeMap;

use super::{contains, MidVertex};
use crate::confocal::{ConfocalFamily, QuadricParam};
use crate::drnet::{verify_net, DRNet, Window};
use crate::projective::{DualHyperplane, HomPoint};
use crate::{Error, Result, Tolerances};

/// The hyperplane map `H` and the point map `P` on the midpoints of a
/// window. `H(v)` is the tangent hyperplane at the reflection point of the
/// edge behind `v`, and `P(v)` is its touching point.
#[derive(Debug, Clone, PartialEq)]
pub struct HPMaps {
    lambdas: Vec<QuadricParam>,
    window: Window,
    h: BTreeMap<MidVertex, DualHyperplane>,
    p: BTreeMap<MidVertex, HomPoint>,
}

impl HPMaps {
    pub fn m(&self) -> usize {
        self.window.m()
    }

    pub fn lambdas(&self) -> &[QuadricParam] {
        &self.lambdas
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    /// Family member touched by `H(v)`.
    pub fn lambda(&self, v: &MidVertex) -> QuadricParam {
        self.lambdas[v.direction()]
    }

    pub fn h(&self, v: &MidVertex) -> Option<&DualHyperplane> {
        self.h.get(v)
    }

    pub fn p(&self, v: &MidVertex) -> Option<&HomPoint> {
        self.p.get(v)
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    /// Vertices in sorted order.
    pub fn vertices(&self) -> impl Iterator<Item = &MidVertex> {
        self.h.keys()
    }

    /// A copy with `P(v)` replaced. Meant for perturbation studies.
    pub fn with_point(&self, v: &MidVertex, point: HomPoint) -> HPMaps {
        let mut out = self.clone();
        out.p.insert(v.clone(), point);
        out
    }

    /// A copy with `H(v)` replaced. Meant for perturbation studies.
    pub fn with_plane(&self, v: &MidVertex, plane: DualHyperplane) -> HPMaps {
        let mut out = self.clone();
        out.h.insert(v.clone(), plane);
        out
    }

    pub(crate) fn require_h(&self, v: &MidVertex) -> Result<&DualHyperplane> {
        self.h(v)
            .ok_or_else(|| Error::IncompleteCell(v.dcoords().to_vec()))
    }

    pub(crate) fn require_p(&self, v: &MidVertex) -> Result<&HomPoint> {
        self.p(v)
            .ok_or_else(|| Error::IncompleteCell(v.dcoords().to_vec()))
    }
}

/// `H` and `P` of a verified net.
pub fn extract_maps(family: &ConfocalFamily, net: &DRNet, tol: &Tolerances) -> Result<HPMaps> {
    let report = verify_net(family, net, tol);
    if !report.passed() {
        return Err(Error::InvalidNet(format!(
            "net fails verification: max edge residual {:.3e}, max pencil residual {:.3e}, max caustic drift {:.3e}, {} backtracks",
            report.max_edge_residual(),
            report.max_pencil_residual(),
            report.max_caustic_drift(),
            report.backtracks.len()
        )));
    }
    let window = net.window().clone();
    let mut h = BTreeMap::new();
    let mut p = BTreeMap::new();
    for n in window.vertices() {
        let n0: Vec<i64> = n.iter().map(|&c| c as i64).collect();
        for k in 0..window.m() {
            let v = MidVertex::edge(&n0, k);
            if !contains(&window, &v) {
                continue;
            }
            let x = net.edge_point(&n, k).ok_or_else(|| {
                Error::InvalidNet(format!("edge {n:?} +e{} has no reflection point", k + 1))
            })?;
            let plane = family.tangent_plane(net.lambdas()[k], x)?;
            let point = family.touching_point(&plane, tol.tol_rank)?;
            h.insert(v.clone(), plane);
            p.insert(v, point);
        }
    }
    Ok(HPMaps {
        lambdas: net.lambdas().to_vec(),
        window,
        h,
        p,
    })
}

/// The other tangent hyperplanes to `Q*_alpha` and `Q*_beta` in the pencil
/// spanned by `h_a` (tangent to `Q*_alpha`) and `h_b` (tangent to
/// `Q*_beta`):
/// `h_a' = h_a + s h_b` with `s = -2 B_alpha(h_a, h_b) / Phi_alpha(h_b)` and
/// `h_b' = h_b + t h_a` with `t = -2 B_beta(h_a, h_b) / Phi_beta(h_a)`.
pub fn complete_square(
    family: &ConfocalFamily,
    alpha: QuadricParam,
    h_a: &DualHyperplane,
    beta: QuadricParam,
    h_b: &DualHyperplane,
    tol: &Tolerances,
) -> Result<(DualHyperplane, DualHyperplane)> {
    let (ua, ub) = (h_a.coords(), h_b.coords());
    for (lambda, u) in [(alpha, h_a), (beta, h_b)] {
        let residual = family.tangency_form(lambda, u)?;
        if residual.abs() > tol.tol_incidence {
            return Err(Error::NotTangent {
                lambda: lambda.value(),
                residual,
            });
        }
    }
    if h_a.distance(h_b) <= tol.tol_rank {
        return Err(Error::DegeneratePencil(
            "the two hyperplanes coincide".into(),
        ));
    }
    let phi_a_b = family.tangency_form_raw(alpha.value(), ub);
    let phi_b_a = family.tangency_form_raw(beta.value(), ua);
    if phi_a_b.abs() <= tol.tol_incidence || phi_b_a.abs() <= tol.tol_incidence {
        return Err(Error::DegeneratePencil(
            "a spanning hyperplane is tangent to both quadrics".into(),
        ));
    }
    let s = -2.0 * family.polar_form_raw(alpha.value(), ua, ub) / phi_a_b;
    let t = -2.0 * family.polar_form_raw(beta.value(), ua, ub) / phi_b_a;
    let ha1: Vec<f64> = ua.iter().zip(ub).map(|(a, b)| a + s * b).collect();
    let hb1: Vec<f64> = ub.iter().zip(ua).map(|(b, a)| b + t * a).collect();
    Ok((DualHyperplane::new(ha1)?, DualHyperplane::new(hb1)?))
}
