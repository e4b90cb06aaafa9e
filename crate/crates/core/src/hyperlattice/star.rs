use super::{extract_maps, HPMaps};
use crate::confocal::{ConfocalFamily, QuadricParam};
use crate::drnet::{build_net_seeded, FillOrder};
use crate::projective::{collinearity_residual, DualHyperplane, HomPoint, ProjLine};
use crate::{Error, Result, Tolerances};

/// The twelve planes of a six-pointed star, grown from three planes tangent
/// to three different quadrics whose touching points are collinear.
///
/// The line through the touching points becomes `phi(0)` of a `1 x 1 x 1`
/// net whose three edges leaving the origin reflect at those points.
pub fn star_from_seed(
    family: &ConfocalFamily,
    lambdas: [QuadricParam; 3],
    planes: [&DualHyperplane; 3],
    tol: &Tolerances,
) -> Result<HPMaps> {
    for i in 0..3 {
        if lambdas[..i].contains(&lambdas[i]) {
            return Err(Error::RepeatedQuadrics);
        }
        let residual = family.tangency_form(lambdas[i], planes[i])?;
        if residual.abs() > tol.tol_incidence {
            return Err(Error::NotTangent {
                lambda: lambdas[i].value(),
                residual,
            });
        }
    }
    let points = planes
        .iter()
        .map(|u| family.touching_point(u, tol.tol_rank))
        .collect::<Result<Vec<HomPoint>>>()?;
    let residual = collinearity_residual(&points)?;
    if residual >= tol.tol_rank {
        return Err(Error::NotCollinear { residual });
    }
    let affine = points
        .iter()
        .map(HomPoint::affine)
        .collect::<Result<Vec<_>>>()?;
    // span the line by the two touching points furthest apart
    let mut best = (0, 1, -1.0);
    for i in 0..3 {
        for j in i + 1..3 {
            let gap: f64 = affine[i]
                .iter()
                .zip(&affine[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            if gap > best.2 {
                best = (i, j, gap);
            }
        }
    }
    let line = ProjLine::through(&affine[best.0], &affine[best.1])
        .map_err(|_| Error::DegeneratePencil("the touching points coincide".into()))?;
    let net = build_net_seeded(
        family,
        &lambdas,
        &line,
        &[1, 1, 1],
        &FillOrder::natural(3),
        Some(&points),
        tol,
    )?;
    extract_maps(family, &net, tol)
}
