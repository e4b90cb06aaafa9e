//! Command line front end: caustics, trajectories, nets, lattices and stars.
//!
//! Exit status: 0 pass, 1 verification failure, 2 configuration or I/O
//! error, 3 construction failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use confocal_nets::billiards::{line_caustics, trajectory};
use confocal_nets::drnet::build_net;
use confocal_nets::hyperlattice::{
    enumerate_lattice, extract_maps, star_from_seed, verify_cuboctahedron, CellKind, MidVertex,
};
use confocal_nets::io::config::OutputSpec;
use confocal_nets::io::export::{read_json, to_json, write_json, NetDocument};
use confocal_nets::io::{
    lattice_document, load_config, render_tiling_svg, run_verification, verify_built_net,
    SceneConfig,
};
use confocal_nets::scene::{random_scene, rng};
use confocal_nets::{Error, Tolerances};

#[derive(Parser)]
#[command(
    name = "confocal-nets",
    version,
    about = "Billiards in confocal quadrics, double reflection nets and their hyperplane lattices"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Scene document (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; overrides the paths in the scene document.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Rank threshold for collinearity and pencil tests.
    #[arg(long, global = true)]
    tol_rank: Option<f64>,
    /// Allowed |CR + 1| for harmonic quadruples.
    #[arg(long, global = true)]
    tol_cr: Option<f64>,
    /// Use a random admissible scene instead of --config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Semi-axes of the random scene.
    #[arg(long, global = true, value_delimiter = ',', default_value = "4,1")]
    semi_axes: Vec<f64>,
    /// Window of the random scene; its length is the lattice dimension.
    #[arg(long, global = true, value_delimiter = ',', default_value = "3,3")]
    window: Vec<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Caustic parameters of the initial line.
    Caustics,
    /// Bounce the initial line inside one quadric of the scene.
    Trajectory {
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// 1-based index into the scene's lambdas.
        #[arg(long, default_value_t = 1)]
        quadric: usize,
    },
    /// Double reflection nets.
    #[command(subcommand)]
    Net(NetCommand),
    /// The midpoint lattice and its hyperplane map.
    #[command(subcommand)]
    Lattice(LatticeCommand),
    /// Six-pointed star configurations.
    #[command(subcommand)]
    Star(StarCommand),
}

#[derive(Subcommand)]
enum NetCommand {
    /// Build the net and write its lines.
    Build,
    /// Build (or load) a net and run every check.
    Verify {
        /// Verify a saved net instead of building one.
        #[arg(long)]
        net: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum LatticeCommand {
    /// Write vertices, cells and residuals as JSON.
    Export {
        /// Also write the partial cross polytopes on the window boundary.
        #[arg(long)]
        include_partial: bool,
    },
    /// Draw the planar tiling as SVG.
    Render,
}

#[derive(Subcommand)]
enum StarCommand {
    /// Check every cuboctahedron and regrow it from its three seed planes.
    Verify,
}

enum Failure {
    Verification,
    Error(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config { .. } | Error::Parse(_) | Error::Io(_) => 2,
        _ => 3,
    }
}

fn scene(global: &Global) -> Result<SceneConfig, Error> {
    let mut config = match (&global.config, global.seed) {
        (Some(path), _) => load_config(path)?,
        (None, Some(seed)) => {
            let s = random_scene(&mut rng(seed), &global.semi_axes, global.window.len())
                .map_err(|e| Error::config("semi_axes", e.to_string()))?;
            SceneConfig {
                family: s.family,
                lambdas: s.lambdas,
                initial_line: s.initial,
                window: global.window.clone(),
                tolerances: Tolerances::default(),
                output: OutputSpec::default(),
            }
        }
        (None, None) => return Err(Error::config("config", "pass --config PATH or --seed N")),
    };
    for (name, value, slot) in [
        (
            "--tol-rank",
            global.tol_rank,
            &mut config.tolerances.tol_rank,
        ),
        ("--tol-cr", global.tol_cr, &mut config.tolerances.tol_cr),
    ] {
        if let Some(v) = value {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(name, "must be positive and finite"));
            }
            *slot = v;
        }
    }
    Ok(config)
}

fn emit(text: &str, path: Option<&Path>) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    if let Command::Net(NetCommand::Verify { net: Some(path) }) = &cli.command {
        let doc: NetDocument = read_json(path)?;
        let mut tol = Tolerances::default();
        tol.tol_rank = g.tol_rank.unwrap_or(tol.tol_rank);
        tol.tol_cr = g.tol_cr.unwrap_or(tol.tol_cr);
        let (family, net) = doc.to_net(&tol)?;
        let v = verify_built_net(&family, net, &tol)?;
        println!("{}", v.report);
        return if v.report.passed() {
            Ok(())
        } else {
            Err(Failure::Verification)
        };
    }

    let config = scene(g)?;
    let tol = config.tolerances;
    match cli.command {
        Command::Caustics => {
            let set = line_caustics(&config.family, &config.initial_line)?;
            for p in &set.params {
                println!(
                    "{:.17e}{}",
                    p.value,
                    if p.multiple { " (multiple)" } else { "" }
                );
            }
        }
        Command::Trajectory { steps, quadric } => {
            let lambda = *config
                .lambdas
                .get(quadric.wrapping_sub(1))
                .ok_or_else(|| Error::config("--quadric", "index out of range"))?;
            let start = line_caustics(&config.family, &config.initial_line)?;
            let events = trajectory(&config.family, lambda, &config.initial_line, steps, &tol)?;
            let mut drift: f64 = 0.0;
            let mut rows = Vec::with_capacity(events.len());
            for e in &events {
                drift =
                    drift.max(start.relative_drift(&line_caustics(&config.family, &e.outgoing)?));
                rows.push(e.point_affine().to_vec());
            }
            match g.out.as_deref() {
                Some(p) => write_json(&rows, p)?,
                None => {
                    for x in &rows {
                        let s: Vec<String> = x.iter().map(|c| format!("{c:.12e}")).collect();
                        println!("{}", s.join(" "));
                    }
                }
            }
            eprintln!("caustic drift over {steps} bounces: {drift:.3e}");
            if drift.is_nan() || drift >= tol.tol_caustic {
                return Err(Failure::Verification);
            }
        }
        Command::Net(NetCommand::Build) => {
            let net = build_net(
                &config.family,
                &config.lambdas,
                &config.initial_line,
                &config.window,
                &tol,
            )?;
            let text = to_json(&NetDocument::from_net(&config.family, &net))?;
            emit(&text, g.out.as_deref().or(config.output.json.as_deref()))?;
        }
        Command::Net(NetCommand::Verify { .. }) => {
            let v = run_verification(&config)?;
            println!("{}", v.report);
            if !v.report.passed() {
                return Err(Failure::Verification);
            }
        }
        Command::Lattice(cmd) => {
            let net = build_net(
                &config.family,
                &config.lambdas,
                &config.initial_line,
                &config.window,
                &tol,
            )?;
            let maps = extract_maps(&config.family, &net, &tol)?;
            let lattice = enumerate_lattice(net.window())?;
            match cmd {
                LatticeCommand::Export { include_partial } => {
                    let doc =
                        lattice_document(&config.family, &maps, &lattice, include_partial, &tol)?;
                    emit(
                        &to_json(&doc)?,
                        g.out.as_deref().or(config.output.json.as_deref()),
                    )?;
                }
                LatticeCommand::Render => {
                    let svg = render_tiling_svg(&config.family, &maps, &lattice, &tol)?;
                    emit(&svg, g.out.as_deref().or(config.output.svg.as_deref()))?;
                }
            }
        }
        Command::Star(StarCommand::Verify) => {
            if config.lambdas.len() != 3 {
                return Err(
                    Error::config("lambdas", "star verification needs three quadrics").into(),
                );
            }
            let net = build_net(
                &config.family,
                &config.lambdas,
                &config.initial_line,
                &config.window,
                &tol,
            )?;
            let maps = extract_maps(&config.family, &net, &tol)?;
            let lattice = enumerate_lattice(net.window())?;
            let lambdas = [config.lambdas[0], config.lambdas[1], config.lambdas[2]];
            let mut all = true;
            for cell in lattice.cells_of(CellKind::RectifiedCube) {
                let r = verify_cuboctahedron(&config.family, &maps, cell, &tol)?;
                let base: Vec<i64> = cell.anchor.iter().map(|c| c / 2).collect();
                let seeds: Vec<MidVertex> = (0..3).map(|k| MidVertex::edge(&base, k)).collect();
                let planes = [0, 1, 2].map(|k| maps.h(&seeds[k]).expect("inside the window"));
                let star = star_from_seed(&config.family, lambdas, planes, &tol)?;
                let mut regrowth: f64 = 0.0;
                for v in star.vertices() {
                    let d: Vec<i64> = v
                        .dcoords()
                        .iter()
                        .zip(&cell.anchor)
                        .map(|(a, b)| a + b)
                        .collect();
                    let original = maps.h(&MidVertex::new(d)?).expect("inside the window");
                    regrowth = regrowth.max(original.distance(star.h(v).expect("present")));
                }
                let ok = r.star_passed() && regrowth < tol.tol_closure;
                all &= ok;
                println!(
                    "cell {:?}: triplets {}/{}, pencils {}/{}, harmonic {}/{}, regrowth {:.3e}  {}",
                    cell.anchor,
                    r.triangles_passed(),
                    r.triangles.len(),
                    r.pencils_passed(),
                    r.squares.len(),
                    r.harmonic_passed(),
                    r.squares.len(),
                    regrowth,
                    if ok { "ok" } else { "FAIL" }
                );
            }
            if !all {
                return Err(Failure::Verification);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
