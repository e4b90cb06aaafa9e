//! The midpoint lattice `M^m`, its honeycomb, and the hyperplane and point
//! maps of a double reflection net.
//!
//! Vertices of `M^m` are midpoints of edges of `Z^m`. They are stored in
//! doubled coordinates, so exactly one entry is odd and identity is exact.
//! The honeycomb has two kinds of cells: rectified cubes (edge midpoints of
//! one unit cube) and cross polytopes (midpoints of the edges sharing one
//! lattice point).

mod maps;
mod star;
mod verify;

pub use maps::{complete_square, extract_maps, HPMaps};
pub use star::star_from_seed;
pub use verify::{
    verify_cross_polytope, verify_cuboctahedron, verify_lattice, verify_square_face,
    CrossPolytopeReport, CuboctahedronReport, LatticeReport, SquareFaceReport, TriangleReport,
};

use crate::drnet::Window;
use crate::{Error, Result};

/// The midpoint of the lattice edge `(n0, n0 + e_direction)`, with
/// `dcoords = 2 n0 + e_direction`. Directions are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MidVertex {
    dcoords: Vec<i64>,
    direction: usize,
}

impl MidVertex {
    pub fn new(dcoords: Vec<i64>) -> Result<Self> {
        let odd: Vec<usize> = (0..dcoords.len())
            .filter(|&k| dcoords[k].rem_euclid(2) == 1)
            .collect();
        match odd[..] {
            [direction] => Ok(MidVertex { dcoords, direction }),
            _ => Err(Error::InvalidMidVertex(dcoords)),
        }
    }

    /// Midpoint of the edge leaving `n0` in `direction`.
    pub fn edge(n0: &[i64], direction: usize) -> Self {
        let mut dcoords: Vec<i64> = n0.iter().map(|c| 2 * c).collect();
        dcoords[direction] += 1;
        MidVertex { dcoords, direction }
    }

    pub fn dcoords(&self) -> &[i64] {
        &self.dcoords
    }

    pub fn direction(&self) -> usize {
        self.direction
    }

    pub fn m(&self) -> usize {
        self.dcoords.len()
    }

    /// The lower endpoint `n0` of the edge.
    pub fn base(&self) -> Vec<i64> {
        self.dcoords.iter().map(|c| c.div_euclid(2)).collect()
    }

    /// `n0` as a window vertex, if it has no negative entry.
    pub(crate) fn window_base(&self) -> Option<Vec<usize>> {
        self.base()
            .iter()
            .map(|&c| usize::try_from(c).ok())
            .collect()
    }

    fn shifted(&self, k: usize, delta: i64) -> Result<Self> {
        let mut d = self.dcoords.clone();
        d[k] += delta;
        MidVertex::new(d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CellKind {
    CrossPolytope,
    RectifiedCube,
}

impl CellKind {
    pub fn name(self) -> &'static str {
        match self {
            CellKind::CrossPolytope => "cross_polytope",
            CellKind::RectifiedCube => "rectified_cube",
        }
    }
}

/// One cell of the honeycomb.
///
/// `anchor` is the doubled centre of a cross polytope and the doubled
/// minimal corner of a rectified cube. Cross polytope vertices come in
/// pairs `[anchor - e_k, anchor + e_k]`. Square faces list their vertices
/// cyclically as `A(b, i), B1(b + e_i, j), A1(b + e_j, i), B(b, j)`, so that
/// positions 0, 2 and 1, 3 are the opposite pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoneycombCell {
    pub kind: CellKind,
    pub anchor: Vec<i64>,
    pub vertices: Vec<MidVertex>,
    pub square_faces: Vec<[usize; 4]>,
    pub triangle_faces: Vec<[usize; 3]>,
    /// Some vertices fall outside the window; only cross polytopes on the
    /// window boundary are partial.
    pub partial: bool,
}

impl HoneycombCell {
    pub fn m(&self) -> usize {
        self.anchor.len()
    }

    pub fn square(&self, k: usize) -> [&MidVertex; 4] {
        self.square_faces[k].map(|i| &self.vertices[i])
    }

    pub fn triangle(&self, k: usize) -> [&MidVertex; 3] {
        self.triangle_faces[k].map(|i| &self.vertices[i])
    }

    /// Cross polytope around the lattice point `n`, keeping only the vertices
    /// that satisfy `keep`.
    fn cross_polytope(n: &[i64], keep: impl Fn(&MidVertex) -> bool) -> Self {
        let anchor: Vec<i64> = n.iter().map(|c| 2 * c).collect();
        let mut vertices = Vec::with_capacity(2 * n.len());
        for k in 0..n.len() {
            for delta in [-1, 1] {
                let mut d = anchor.clone();
                d[k] += delta;
                let v = MidVertex {
                    dcoords: d,
                    direction: k,
                };
                if keep(&v) {
                    vertices.push(v);
                }
            }
        }
        let partial = vertices.len() < 2 * n.len();
        HoneycombCell {
            kind: CellKind::CrossPolytope,
            anchor,
            vertices,
            square_faces: Vec::new(),
            triangle_faces: Vec::new(),
            partial,
        }
    }

    /// Rectified cube with minimal corner `n`.
    fn rectified_cube(n: &[i64]) -> Result<Self> {
        let m = n.len();
        let anchor: Vec<i64> = n.iter().map(|c| 2 * c).collect();
        let corner = |bits: usize| -> Vec<i64> {
            (0..m)
                .map(|k| n[k] + ((bits >> (m - 1 - k)) & 1) as i64)
                .collect()
        };
        let mut vertices = Vec::with_capacity(m << (m - 1));
        for bits in 0..1usize << m {
            let c = corner(bits);
            for k in 0..m {
                if c[k] == n[k] {
                    vertices.push(MidVertex::edge(&c, k));
                }
            }
        }
        vertices.sort();
        let pos = |v: &MidVertex| vertices.binary_search(v).expect("vertex of the cell");

        let mut square_faces = Vec::new();
        for k in (0..m).filter(|_| m == 3) {
            let (i, j) = match k {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            for s in 0..2 {
                let mut b = n.to_vec();
                b[k] += s;
                square_faces.push(square_around(&b, i, j).map(|v| pos(&v)));
            }
        }
        if m == 2 {
            square_faces.push(square_around(n, 0, 1).map(|v| pos(&v)));
        }

        let mut triangle_faces = Vec::new();
        if m == 3 {
            for bits in 0..8 {
                let c = corner(bits);
                let tri: Vec<usize> = (0..3)
                    .map(|k| {
                        let v = MidVertex::edge(&c, k);
                        if c[k] == n[k] {
                            pos(&v)
                        } else {
                            pos(&v.shifted(k, -2).expect("valid"))
                        }
                    })
                    .collect();
                triangle_faces.push([tri[0], tri[1], tri[2]]);
            }
        }
        Ok(HoneycombCell {
            kind: CellKind::RectifiedCube,
            anchor,
            vertices,
            square_faces,
            triangle_faces,
            partial: false,
        })
    }
}

/// The four edge midpoints of the unit square at `b` spanned by `e_i`,
/// `e_j`, in the cyclic order `A(b, i), B1(b + e_i, j), A1(b + e_j, i),
/// B(b, j)`.
pub(crate) fn square_around(b: &[i64], i: usize, j: usize) -> [MidVertex; 4] {
    let mut bi = b.to_vec();
    bi[i] += 1;
    let mut bj = b.to_vec();
    bj[j] += 1;
    [
        MidVertex::edge(b, i),
        MidVertex::edge(&bi, j),
        MidVertex::edge(&bj, i),
        MidVertex::edge(b, j),
    ]
}

/// The vertices and complete cells of `M^m` inside a window.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub window: Window,
    pub vertices: Vec<MidVertex>,
    pub cells: Vec<HoneycombCell>,
}

impl Lattice {
    pub fn m(&self) -> usize {
        self.window.m()
    }

    pub fn cells_of(&self, kind: CellKind) -> impl Iterator<Item = &HoneycombCell> {
        self.cells.iter().filter(move |c| c.kind == kind)
    }

    /// Cross polytopes around window vertices on the boundary, restricted to
    /// the vertices inside the window.
    pub fn boundary_cross_polytopes(&self) -> Vec<HoneycombCell> {
        let inside = |v: &MidVertex| contains(&self.window, v);
        self.window
            .vertices()
            .filter(|n| !is_interior(&self.window, n))
            .map(|n| {
                let n: Vec<i64> = n.iter().map(|&c| c as i64).collect();
                HoneycombCell::cross_polytope(&n, inside)
            })
            .filter(|c| !c.vertices.is_empty())
            .collect()
    }
}

fn is_interior(window: &Window, n: &[usize]) -> bool {
    n.iter()
        .zip(window.extents())
        .all(|(&c, &e)| c > 0 && c < e)
}

/// Whether the edge behind `v` lies inside the window.
pub(crate) fn contains(window: &Window, v: &MidVertex) -> bool {
    v.m() == window.m()
        && v.window_base()
            .is_some_and(|b| window.contains(&b) && b[v.direction] < window.extents()[v.direction])
}

/// All midpoints and complete cells of `M^m` inside the window, for
/// `m` in `{2, 3}`. Rectified cubes come first, then cross polytopes, each
/// sorted by anchor.
pub fn enumerate_lattice(window: &Window) -> Result<Lattice> {
    let m = window.m();
    if !(2..=3).contains(&m) {
        return Err(Error::UnsupportedLatticeDimension(m));
    }
    let mut vertices = Vec::new();
    for n in window.vertices() {
        let n: Vec<i64> = n.iter().map(|&c| c as i64).collect();
        for k in 0..m {
            if (n[k] as usize) < window.extents()[k] {
                vertices.push(MidVertex::edge(&n, k));
            }
        }
    }
    vertices.sort();

    let mut cells = Vec::new();
    for n in window.vertices() {
        if n.iter().zip(window.extents()).all(|(c, e)| c < e) {
            let n: Vec<i64> = n.iter().map(|&c| c as i64).collect();
            cells.push(HoneycombCell::rectified_cube(&n)?);
        }
    }
    for n in window.vertices().filter(|n| is_interior(window, n)) {
        let n: Vec<i64> = n.iter().map(|&c| c as i64).collect();
        cells.push(HoneycombCell::cross_polytope(&n, |_| true));
    }
    Ok(Lattice {
        window: window.clone(),
        vertices,
        cells,
    })
}
