//! End-to-end verification of a scene and its summary table.

use std::fmt;

use super::config::SceneConfig;
use crate::confocal::ConfocalFamily;
use crate::drnet::{build_net, verify_net, DRNet, NetReport};
use crate::hyperlattice::{
    enumerate_lattice, extract_maps, verify_lattice, HPMaps, Lattice, LatticeReport,
};
use crate::{Result, Tolerances};

/// One line of the summary table.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub check: &'static str,
    pub count: usize,
    pub passed: usize,
    pub worst: f64,
    /// `None` for recorded-only quantities.
    pub tolerance: Option<f64>,
}

impl Row {
    fn new<T>(
        check: &'static str,
        items: &[T],
        value: impl Fn(&T) -> f64,
        ok: impl Fn(&T) -> bool,
        tolerance: Option<f64>,
    ) -> Row {
        Row {
            check,
            count: items.len(),
            passed: items.iter().filter(|t| ok(t)).count(),
            worst: items
                .iter()
                .map(value)
                .fold(0.0, |a, b| if b > a || b.is_nan() { b } else { a }),
            tolerance,
        }
    }

    pub fn ok(&self) -> bool {
        self.tolerance.is_none() || self.passed == self.count
    }
}

/// Everything computed for one scene.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub net: NetReport,
    pub lattice: Option<LatticeReport>,
    pub rows: Vec<Row>,
    pub tolerances: Tolerances,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(Row::ok)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

fn rows(net: &NetReport, lattice: Option<&LatticeReport>, tol: &Tolerances) -> Vec<Row> {
    let mut rows = vec![
        Row::new(
            "net edges: reflection",
            &net.edges,
            |e| e.residual,
            |e| e.residual <= tol.tol_closure,
            Some(tol.tol_closure),
        ),
        Row::new(
            "net quadrilaterals: pencil",
            &net.quads,
            |q| q.pencil_residual,
            |q| q.pencil_residual < tol.tol_rank,
            Some(tol.tol_rank),
        ),
        Row::new(
            "net axes: caustic drift",
            &net.axes,
            |a| a.caustic_drift,
            |a| a.caustic_drift < tol.tol_caustic,
            Some(tol.tol_caustic),
        ),
        Row {
            check: "net axes: backtracking",
            count: net.backtracks.len(),
            passed: 0,
            worst: net.backtracks.len() as f64,
            tolerance: Some(0.0),
        },
    ];
    let Some(l) = lattice else {
        return rows;
    };
    let cp = &l.cross_polytopes;
    rows.push(Row::new(
        "cross polytopes: collinear",
        cp,
        |c| c.collinearity,
        |c| c.collinearity < tol.tol_rank,
        Some(tol.tol_rank),
    ));
    rows.push(Row::new(
        "cross polytopes: same quadric",
        cp,
        |c| c.same_quadric.iter().copied().fold(0.0, f64::max),
        |c| c.same_quadric.iter().all(|&r| r < tol.tol_incidence),
        Some(tol.tol_incidence),
    ));
    let planar: Vec<f64> = cp.iter().filter_map(|c| c.cross_ratio).collect();
    if !planar.is_empty() {
        rows.push(Row::new(
            "cross polytopes: |CR + 1| (recorded)",
            &planar,
            |cr| (cr + 1.0).abs(),
            |_| true,
            None,
        ));
    }
    let sq = &l.squares;
    rows.push(Row::new(
        "square faces: pencil",
        sq,
        |s| s.pencil_residual,
        |s| s.in_pencil,
        Some(tol.tol_rank),
    ));
    rows.push(Row::new(
        "square faces: tangency",
        sq,
        |s| s.tangency.iter().copied().fold(0.0, f64::max),
        |s| s.tangent,
        Some(tol.tol_incidence),
    ));
    rows.push(Row::new(
        "square faces: harmonic |CR + 1|",
        sq,
        |s| s.harmonic_deviation(),
        |s| s.harmonic,
        Some(tol.tol_cr),
    ));
    if !l.cuboctahedra.is_empty() {
        let triangles: Vec<_> = l
            .cuboctahedra
            .iter()
            .flat_map(|c| c.triangles.iter())
            .collect();
        rows.push(Row::new(
            "star triplets: collinear",
            &triangles,
            |t| t.collinearity,
            |t| t.passed,
            Some(tol.tol_rank),
        ));
        rows.push(Row::new(
            "star cells: combinatorics",
            &l.cuboctahedra,
            |c| if c.membership { 0.0 } else { 1.0 },
            |c| c.membership,
            Some(0.0),
        ));
    }
    rows
}

/// The net, its maps and lattice, and the full report for a scene.
pub struct Verification {
    pub net: DRNet,
    /// Present when the net itself verifies.
    pub maps: Option<HPMaps>,
    pub lattice: Option<Lattice>,
    pub report: VerificationReport,
}

/// Build the net of a scene and run every check on it. Construction
/// failures are returned as errors carrying the lattice vertex.
pub fn run_verification(config: &SceneConfig) -> Result<Verification> {
    let tol = &config.tolerances;
    let net = build_net(
        &config.family,
        &config.lambdas,
        &config.initial_line,
        &config.window,
        tol,
    )?;
    verify_built_net(&config.family, net, tol)
}

/// Run every check on an existing net.
pub fn verify_built_net(
    family: &ConfocalFamily,
    net: DRNet,
    tol: &Tolerances,
) -> Result<Verification> {
    let net_report = verify_net(family, &net, tol);
    let (maps, lattice, lattice_report) = if net_report.passed() {
        let maps = extract_maps(family, &net, tol)?;
        if (2..=3).contains(&net.m()) {
            let lattice = enumerate_lattice(net.window())?;
            let report = verify_lattice(family, &maps, &lattice, tol)?;
            (Some(maps), Some(lattice), Some(report))
        } else {
            (Some(maps), None, None)
        }
    } else {
        (None, None, None)
    };
    let rows = rows(&net_report, lattice_report.as_ref(), tol);
    let report = VerificationReport {
        net: net_report,
        lattice: lattice_report,
        rows,
        tolerances: *tol,
    };
    Ok(Verification {
        net,
        maps,
        lattice,
        report,
    })
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<36} {:>6} {:>6} {:>12} {:>10}  status",
            "check", "count", "pass", "worst", "tolerance"
        )?;
        for r in &self.rows {
            let tol = r
                .tolerance
                .map_or("recorded".to_string(), |t| format!("{t:.0e}"));
            let status = match (r.tolerance, r.ok()) {
                (None, _) => "-",
                (_, true) => "ok",
                (_, false) => "FAIL",
            };
            writeln!(
                f,
                "{:<36} {:>6} {:>6} {:>12.3e} {:>10}  {status}",
                r.check, r.count, r.passed, r.worst, tol
            )?;
        }
        write!(
            f,
            "overall: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}
