use std::collections::BTreeSet;

use super::{CellKind, HPMaps, HoneycombCell, Lattice, MidVertex};
use crate::confocal::ConfocalFamily;
use crate::projective::{
    collinearity_residual, cross_ratio_collinear, cross_ratio_pencil, pencil_residual,
};
use crate::{Error, Result, Tolerances};

/// Residuals of one cross polytope.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossPolytopeReport {
    pub anchor: Vec<i64>,
    pub collinearity: f64,
    /// Per direction, the larger `|Q_lambda|` residual of the opposite pair.
    pub same_quadric: Vec<f64>,
    /// For `m = 2`: `CR(P(-e1), P(+e1); P(-e2), P(+e2))`. Recorded only.
    pub cross_ratio: Option<f64>,
    pub passed: bool,
}

/// Residuals of one square face `A, B1, A1, B` (cyclic).
#[derive(Debug, Clone, PartialEq)]
pub struct SquareFaceReport {
    pub vertices: [MidVertex; 4],
    pub pencil_residual: f64,
    /// `CR(A, A1; B1, B)`: opposite vertices as conjugate pairs. Only
    /// computed when the four planes form a pencil.
    pub cross_ratio: Option<f64>,
    /// `|Phi_lambda(H(v))|` for each vertex, with `lambda` its label.
    pub tangency: [f64; 4],
    pub in_pencil: bool,
    pub harmonic: bool,
    pub tangent: bool,
}

impl SquareFaceReport {
    pub fn harmonic_deviation(&self) -> f64 {
        self.cross_ratio
            .map_or(f64::INFINITY, |cr| (cr + 1.0).abs())
    }

    pub fn passed(&self) -> bool {
        self.in_pencil && self.harmonic && self.tangent
    }
}

/// Residuals of one triangle of a cuboctahedron.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleReport {
    pub vertices: [MidVertex; 3],
    pub collinearity: f64,
    pub tangency: [f64; 3],
    pub distinct_labels: bool,
    pub passed: bool,
}

/// The six-pointed star checks on one cuboctahedron.
#[derive(Debug, Clone, PartialEq)]
pub struct CuboctahedronReport {
    pub anchor: Vec<i64>,
    pub triangles: Vec<TriangleReport>,
    pub squares: Vec<SquareFaceReport>,
    /// Every vertex lies on exactly two triangles and two squares.
    pub membership: bool,
}

impl CuboctahedronReport {
    pub fn triangles_passed(&self) -> usize {
        self.triangles.iter().filter(|t| t.passed).count()
    }

    /// Squares whose four planes form a tangent pencil.
    pub fn pencils_passed(&self) -> usize {
        self.squares
            .iter()
            .filter(|s| s.in_pencil && s.tangent)
            .count()
    }

    pub fn harmonic_passed(&self) -> usize {
        self.squares.iter().filter(|s| s.harmonic).count()
    }

    /// Triplets, quadruplet pencils and incidence combinatorics.
    pub fn star_passed(&self) -> bool {
        self.membership
            && self.triangles_passed() == self.triangles.len()
            && self.pencils_passed() == self.squares.len()
    }

    /// The star checks and harmonicity of every square face.
    pub fn passed(&self) -> bool {
        self.star_passed() && self.squares.iter().all(SquareFaceReport::passed)
    }
}

fn tangency(family: &ConfocalFamily, maps: &HPMaps, v: &MidVertex) -> Result<f64> {
    Ok(family
        .tangency_form(maps.lambda(v), maps.require_h(v)?)?
        .abs())
}

pub fn verify_cross_polytope(
    family: &ConfocalFamily,
    maps: &HPMaps,
    cell: &HoneycombCell,
    tol: &Tolerances,
) -> Result<CrossPolytopeReport> {
    if cell.kind != CellKind::CrossPolytope {
        return Err(Error::WrongCellKind);
    }
    let m = cell.m();
    if cell.partial || cell.vertices.len() != 2 * m {
        return Err(Error::IncompleteCell(cell.anchor.clone()));
    }
    let points = cell
        .vertices
        .iter()
        .map(|v| maps.require_p(v).cloned())
        .collect::<Result<Vec<_>>>()?;
    let collinearity = collinearity_residual(&points)?;
    let mut same_quadric = Vec::with_capacity(m);
    for k in 0..m {
        let lambda = maps.lambdas()[k];
        let r0 = family.quadric_value(lambda, &points[2 * k])?.abs();
        let r1 = family.quadric_value(lambda, &points[2 * k + 1])?.abs();
        same_quadric.push(r0.max(r1));
    }
    let cross_ratio = if m == 2 {
        cross_ratio_collinear(&points[0], &points[1], &points[2], &points[3], tol.tol_rank).ok()
    } else {
        None
    };
    let passed = collinearity < tol.tol_rank && same_quadric.iter().all(|&r| r < tol.tol_incidence);
    Ok(CrossPolytopeReport {
        anchor: cell.anchor.clone(),
        collinearity,
        same_quadric,
        cross_ratio,
        passed,
    })
}

/// Pencil, harmonicity and tangency checks on a square face given in
/// cyclic order, opposite vertices at positions 0, 2 and 1, 3.
pub fn verify_square_face(
    family: &ConfocalFamily,
    maps: &HPMaps,
    face: [&MidVertex; 4],
    tol: &Tolerances,
) -> Result<SquareFaceReport> {
    if face[0].direction() != face[2].direction() || face[1].direction() != face[3].direction() {
        return Err(Error::InvalidNet(
            "opposite vertices of a square face must share a direction".into(),
        ));
    }
    let planes = face
        .iter()
        .map(|v| maps.require_h(v).cloned())
        .collect::<Result<Vec<_>>>()?;
    let residual = pencil_residual(&planes)?;
    let in_pencil = residual < tol.tol_rank;
    let cross_ratio = if in_pencil {
        cross_ratio_pencil(&planes[0], &planes[2], &planes[1], &planes[3], tol.tol_rank).ok()
    } else {
        None
    };
    let harmonic = cross_ratio.is_some_and(|cr| (cr + 1.0).abs() < tol.tol_cr);
    let mut tangency_res = [0.0; 4];
    for (r, v) in tangency_res.iter_mut().zip(face) {
        *r = tangency(family, maps, v)?;
    }
    Ok(SquareFaceReport {
        vertices: face.map(Clone::clone),
        pencil_residual: residual,
        cross_ratio,
        tangency: tangency_res,
        in_pencil,
        harmonic,
        tangent: tangency_res.iter().all(|&r| r < tol.tol_incidence),
    })
}

pub fn verify_cuboctahedron(
    family: &ConfocalFamily,
    maps: &HPMaps,
    cell: &HoneycombCell,
    tol: &Tolerances,
) -> Result<CuboctahedronReport> {
    if cell.kind != CellKind::RectifiedCube || cell.m() != 3 {
        return Err(Error::WrongCellKind);
    }
    if cell.vertices.len() != 12 {
        return Err(Error::IncompleteCell(cell.anchor.clone()));
    }
    let mut triangles = Vec::with_capacity(cell.triangle_faces.len());
    for k in 0..cell.triangle_faces.len() {
        let tri = cell.triangle(k);
        let points = tri
            .iter()
            .map(|v| maps.require_p(v).cloned())
            .collect::<Result<Vec<_>>>()?;
        let collinearity = collinearity_residual(&points)?;
        let mut tangency_res = [0.0; 3];
        for (r, v) in tangency_res.iter_mut().zip(tri) {
            *r = tangency(family, maps, v)?;
        }
        let labels: BTreeSet<u64> = tri
            .iter()
            .map(|v| maps.lambda(v).value().to_bits())
            .collect();
        let distinct_labels = labels.len() == 3;
        triangles.push(TriangleReport {
            vertices: tri.map(Clone::clone),
            collinearity,
            tangency: tangency_res,
            distinct_labels,
            passed: collinearity < tol.tol_rank
                && distinct_labels
                && tangency_res.iter().all(|&r| r < tol.tol_incidence),
        });
    }
    let squares = (0..cell.square_faces.len())
        .map(|k| verify_square_face(family, maps, cell.square(k), tol))
        .collect::<Result<Vec<_>>>()?;

    let mut tri_count = vec![0; cell.vertices.len()];
    let mut sq_count = vec![0; cell.vertices.len()];
    cell.triangle_faces
        .iter()
        .flatten()
        .for_each(|&i| tri_count[i] += 1);
    cell.square_faces
        .iter()
        .flatten()
        .for_each(|&i| sq_count[i] += 1);
    let membership = cell.triangle_faces.len() == 8
        && cell.square_faces.len() == 6
        && tri_count.iter().chain(&sq_count).all(|&c| c == 2);

    Ok(CuboctahedronReport {
        anchor: cell.anchor.clone(),
        triangles,
        squares,
        membership,
    })
}

/// Every cell check over a lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeReport {
    pub cross_polytopes: Vec<CrossPolytopeReport>,
    /// Each square face once (every elementary quadrilateral of the net).
    pub squares: Vec<SquareFaceReport>,
    /// `m = 3` only.
    pub cuboctahedra: Vec<CuboctahedronReport>,
}

impl LatticeReport {
    pub fn passed(&self) -> bool {
        self.cross_polytopes.iter().all(|c| c.passed)
            && self.squares.iter().all(SquareFaceReport::passed)
            && self.cuboctahedra.iter().all(CuboctahedronReport::passed)
    }
}

pub fn verify_lattice(
    family: &ConfocalFamily,
    maps: &HPMaps,
    lattice: &Lattice,
    tol: &Tolerances,
) -> Result<LatticeReport> {
    let mut cross_polytopes = Vec::new();
    let mut squares = Vec::new();
    let mut cuboctahedra = Vec::new();
    let mut seen = BTreeSet::new();
    for cell in &lattice.cells {
        match cell.kind {
            CellKind::CrossPolytope => {
                cross_polytopes.push(verify_cross_polytope(family, maps, cell, tol)?);
            }
            CellKind::RectifiedCube => {
                for k in 0..cell.square_faces.len() {
                    let face = cell.square(k);
                    if seen.insert(face.map(Clone::clone)) {
                        squares.push(verify_square_face(family, maps, face, tol)?);
                    }
                }
                if cell.m() == 3 {
                    cuboctahedra.push(verify_cuboctahedron(family, maps, cell, tol)?);
                }
            }
        }
    }
    Ok(LatticeReport {
        cross_polytopes,
        squares,
        cuboctahedra,
    })
}
