//! SVG drawing of the planar midpoint tiling.
//!
//! Rectified squares are drawn white and complete cross polytopes gray.
//! Cells and vertices carry their residuals in `<title>` elements, which
//! viewers show on hover. Output is a deterministic function of its input.

use std::fmt::Write as _;
use std::path::Path;

use crate::confocal::ConfocalFamily;
use crate::hyperlattice::{
    verify_cross_polytope, verify_square_face, CellKind, HPMaps, HoneycombCell, Lattice,
};
use crate::{Error, Result, Tolerances};

/// Pixels per doubled lattice unit.
const UNIT: i64 = 40;
const MARGIN: i64 = 30;

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".to_string(), |v| format!("{v:.6e}"))
}

fn polygon(out: &mut String, cell: &HoneycombCell, height: i64, fill: &str, title: &str) {
    // cyclic order around the centre
    let order: Vec<usize> = match cell.kind {
        CellKind::RectifiedCube => cell.square_faces[0].to_vec(),
        CellKind::CrossPolytope => vec![0, 2, 1, 3],
    };
    let points: Vec<String> = order
        .iter()
        .map(|&i| {
            let d = cell.vertices[i].dcoords();
            format!("{},{}", MARGIN + d[0] * UNIT, height - MARGIN - d[1] * UNIT)
        })
        .collect();
    let _ = writeln!(
        out,
        "  <polygon points=\"{}\" fill=\"{fill}\" stroke=\"black\" stroke-width=\"1\"><title>{title}</title></polygon>",
        points.join(" ")
    );
}

/// The tiling as an SVG 1.1 document. Only `m = 2` can be drawn.
pub fn render_tiling_svg(
    family: &ConfocalFamily,
    maps: &HPMaps,
    lattice: &Lattice,
    tol: &Tolerances,
) -> Result<String> {
    let m = lattice.m();
    if m != 2 {
        return Err(Error::config(
            "window",
            format!("the tiling can only be drawn for m = 2, got m = {m}"),
        ));
    }
    let ext = lattice.window.extents();
    let width = 2 * MARGIN + 2 * ext[0] as i64 * UNIT;
    let height = 2 * MARGIN + 2 * ext[1] as i64 * UNIT;

    let mut out = String::new();
    let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(
        out,
        "  <rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"#f4f4f4\"/>"
    );

    for cell in lattice.cells_of(CellKind::RectifiedCube) {
        let r = verify_square_face(family, maps, cell.square(0), tol)?;
        let title = format!(
            "rectified square {:?}: pencil residual {:.3e}, cross-ratio {}",
            cell.anchor,
            r.pencil_residual,
            fmt_opt(r.cross_ratio)
        );
        polygon(&mut out, cell, height, "white", &title);
    }
    for cell in lattice.cells_of(CellKind::CrossPolytope) {
        let r = verify_cross_polytope(family, maps, cell, tol)?;
        let title = format!(
            "cross polytope {:?}: collinearity residual {:.3e}, cross-ratio {}",
            cell.anchor,
            r.collinearity,
            fmt_opt(r.cross_ratio)
        );
        polygon(&mut out, cell, height, "#b0b0b0", &title);
    }
    for v in &lattice.vertices {
        let d = v.dcoords();
        let (cx, cy) = (MARGIN + d[0] * UNIT, height - MARGIN - d[1] * UNIT);
        let h = maps.h(v).ok_or_else(|| Error::IncompleteCell(d.to_vec()))?;
        let tangency = family.tangency_form(maps.lambda(v), h)?.abs();
        let point = maps
            .p(v)
            .and_then(|p| p.to_affine())
            .map(|x| {
                x.iter()
                    .map(|c| format!("{c:.6e}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "  <circle cx=\"{cx}\" cy=\"{cy}\" r=\"4\" fill=\"black\"><title>vertex {d:?}, direction {}, lambda {:.6e}, touching point ({point}), tangency residual {tangency:.3e}</title></circle>",
            v.direction() + 1,
            maps.lambda(v).value(),
        );
    }
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

pub fn write_tiling_svg(
    family: &ConfocalFamily,
    maps: &HPMaps,
    lattice: &Lattice,
    tol: &Tolerances,
    path: &Path,
) -> Result<()> {
    let svg = render_tiling_svg(family, maps, lattice, tol)?;
    std::fs::write(path, svg).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
