//! JSON documents for nets and lattices.
//!
//! Every float is written with 17 significant digits, so parsing an export
//! reproduces each number bit for bit. Directions are 1-based in documents.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::confocal::ConfocalFamily;
use crate::drnet::DRNet;
use crate::hyperlattice::{
    verify_cross_polytope, verify_cuboctahedron, verify_square_face, CellKind, HPMaps,
    HoneycombCell, Lattice, MidVertex, SquareFaceReport,
};
use crate::projective::ProjLine;
use crate::{Error, Result, Tolerances};

/// Pretty printer that writes floats as `d.dddddddddddddddde±x`.
struct FullPrecision<'a>(PrettyFormatter<'a>);

impl Formatter for FullPrecision<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> std::io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> std::io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut out, FullPrecision(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Io(e.to_string()))?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(value)?).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexRecord {
    pub id: usize,
    pub dcoords: Vec<i64>,
    pub direction: usize,
    pub hyperplane: Vec<f64>,
    pub touching_point: Vec<f64>,
    pub caustic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquareFaceRecord {
    pub vertices: Vec<usize>,
    pub pencil_residual: f64,
    pub cross_ratio: Option<f64>,
    pub max_tangency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangleFaceRecord {
    pub vertices: Vec<usize>,
    pub collinearity: f64,
    pub max_tangency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellRecord {
    pub kind: String,
    pub anchor: Vec<i64>,
    pub partial: bool,
    pub vertices: Vec<usize>,
    /// Cross polytopes: rank residual of the touching points.
    pub collinearity: Option<f64>,
    /// Cross polytopes: largest `|Q_lambda|` residual of the opposite pairs.
    pub same_quadric: Option<f64>,
    /// Planar cross polytopes: cross-ratio of the opposite pairs.
    pub cross_ratio: Option<f64>,
    pub square_faces: Vec<SquareFaceRecord>,
    pub triangle_faces: Vec<TriangleFaceRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDocument {
    pub semi_axes: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub window: Vec<usize>,
    pub vertices: Vec<VertexRecord>,
    pub cells: Vec<CellRecord>,
}

fn square_record(r: &SquareFaceReport, ids: &[usize]) -> SquareFaceRecord {
    SquareFaceRecord {
        vertices: ids.to_vec(),
        pencil_residual: r.pencil_residual,
        cross_ratio: r.cross_ratio,
        max_tangency: r.tangency.iter().copied().fold(0.0, f64::max),
    }
}

fn cell_record(
    family: &ConfocalFamily,
    maps: &HPMaps,
    cell: &HoneycombCell,
    ids: &BTreeMap<&MidVertex, usize>,
    tol: &Tolerances,
) -> Result<CellRecord> {
    let vertex_ids: Vec<usize> = cell
        .vertices
        .iter()
        .map(|v| {
            ids.get(v)
                .copied()
                .ok_or_else(|| Error::IncompleteCell(v.dcoords().to_vec()))
        })
        .collect::<Result<_>>()?;
    let mut record = CellRecord {
        kind: cell.kind.name().to_string(),
        anchor: cell.anchor.clone(),
        partial: cell.partial,
        vertices: vertex_ids.clone(),
        collinearity: None,
        same_quadric: None,
        cross_ratio: None,
        square_faces: Vec::new(),
        triangle_faces: Vec::new(),
    };
    let face_ids = |f: &[usize]| f.iter().map(|&i| vertex_ids[i]).collect::<Vec<_>>();
    match cell.kind {
        CellKind::CrossPolytope if !cell.partial => {
            let r = verify_cross_polytope(family, maps, cell, tol)?;
            record.collinearity = Some(r.collinearity);
            record.same_quadric = Some(r.same_quadric.iter().copied().fold(0.0, f64::max));
            record.cross_ratio = r.cross_ratio;
        }
        CellKind::CrossPolytope => {}
        CellKind::RectifiedCube if cell.m() == 3 => {
            let r = verify_cuboctahedron(family, maps, cell, tol)?;
            for (face, sq) in cell.square_faces.iter().zip(&r.squares) {
                record.square_faces.push(square_record(sq, &face_ids(face)));
            }
            for (face, tri) in cell.triangle_faces.iter().zip(&r.triangles) {
                record.triangle_faces.push(TriangleFaceRecord {
                    vertices: face_ids(face),
                    collinearity: tri.collinearity,
                    max_tangency: tri.tangency.iter().copied().fold(0.0, f64::max),
                });
            }
        }
        CellKind::RectifiedCube => {
            for (k, face) in cell.square_faces.iter().enumerate() {
                let sq = verify_square_face(family, maps, cell.square(k), tol)?;
                record
                    .square_faces
                    .push(square_record(&sq, &face_ids(face)));
            }
        }
    }
    Ok(record)
}

/// Vertices, cells and per-cell residuals. Partial boundary cells are
/// appended only when `include_partial` is set; they carry no residuals.
pub fn lattice_document(
    family: &ConfocalFamily,
    maps: &HPMaps,
    lattice: &Lattice,
    include_partial: bool,
    tol: &Tolerances,
) -> Result<LatticeDocument> {
    let mut vertices = Vec::with_capacity(maps.len());
    for (id, v) in maps.vertices().enumerate() {
        let point = maps.p(v).expect("every vertex has a point");
        vertices.push(VertexRecord {
            id,
            dcoords: v.dcoords().to_vec(),
            direction: v.direction() + 1,
            hyperplane: maps
                .h(v)
                .expect("every vertex has a plane")
                .coords()
                .to_vec(),
            touching_point: point.affine()?,
            caustic: maps.lambda(v).value(),
        });
    }
    let ids: BTreeMap<&MidVertex, usize> = maps.vertices().zip(0..).collect();
    let mut cells = Vec::new();
    for cell in &lattice.cells {
        cells.push(cell_record(family, maps, cell, &ids, tol)?);
    }
    if include_partial {
        for cell in lattice.boundary_cross_polytopes() {
            cells.push(cell_record(family, maps, &cell, &ids, tol)?);
        }
    }
    Ok(LatticeDocument {
        semi_axes: family.semi_axes().to_vec(),
        lambdas: maps.lambdas().iter().map(|l| l.value()).collect(),
        window: maps.window().extents().to_vec(),
        vertices,
        cells,
    })
}

pub fn export_lattice(
    family: &ConfocalFamily,
    maps: &HPMaps,
    lattice: &Lattice,
    include_partial: bool,
    tol: &Tolerances,
    path: &Path,
) -> Result<LatticeDocument> {
    let doc = lattice_document(family, maps, lattice, include_partial, tol)?;
    write_json(&doc, path)?;
    Ok(doc)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineRecord {
    pub vertex: Vec<usize>,
    pub base: Vec<f64>,
    pub dir: Vec<f64>,
}

/// The lines of a net; reflection points are recovered on load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetDocument {
    pub semi_axes: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub window: Vec<usize>,
    pub lines: Vec<LineRecord>,
}

impl NetDocument {
    pub fn from_net(family: &ConfocalFamily, net: &DRNet) -> Self {
        NetDocument {
            semi_axes: family.semi_axes().to_vec(),
            lambdas: net.lambdas().iter().map(|l| l.value()).collect(),
            window: net.window().extents().to_vec(),
            lines: net
                .window()
                .vertices()
                .zip(net.lines())
                .map(|(vertex, line)| LineRecord {
                    vertex,
                    base: line.base().to_vec(),
                    dir: line.direction().to_vec(),
                })
                .collect(),
        }
    }

    pub fn to_net(&self, tol: &Tolerances) -> Result<(ConfocalFamily, DRNet)> {
        let family = ConfocalFamily::new(self.semi_axes.clone())?;
        let lambdas = self
            .lambdas
            .iter()
            .map(|&l| family.param(l))
            .collect::<Result<Vec<_>>>()?;
        let window = crate::drnet::Window::new(&self.window);
        if self.lines.len() != window.vertex_count() {
            return Err(Error::InvalidNet(format!(
                "expected {} lines, got {}",
                window.vertex_count(),
                self.lines.len()
            )));
        }
        let mut lines = Vec::with_capacity(self.lines.len());
        for (expected, record) in window.vertices().zip(&self.lines) {
            if record.vertex != expected {
                return Err(Error::InvalidNet(format!(
                    "lines must be listed in lexicographic order: expected {expected:?}, got {:?}",
                    record.vertex
                )));
            }
            lines.push(ProjLine::new(&record.base, &record.dir)?);
        }
        let net = DRNet::from_lines(&family, lambdas, &self.window, lines, tol)?;
        Ok((family, net))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        let s = to_json(&vec![0.1f64, 1.0 / 3.0, -2.5e-300, 7.0]).unwrap();
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        assert!(s.contains("3.3333333333333331e-1"), "{s}");
        assert!(s.contains("7.0000000000000000e0"), "{s}");
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![0.1, 1.0 / 3.0, -2.5e-300, 7.0]);
    }

    #[test]
    fn integers_and_nulls_are_untouched() {
        let s = to_json(&(3usize, Option::<f64>::None, f64::NAN)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v, serde_json::json!([3, null, null]));
    }
}
