//! Scene files, JSON export, SVG rendering and verification reports.

pub mod config;
pub mod export;
pub mod report;
pub mod svg;

pub use config::{load_config, parse_config, parse_document, SceneConfig, SceneDocument};
pub use export::{export_lattice, lattice_document, LatticeDocument, NetDocument};
pub use report::{run_verification, verify_built_net, Verification, VerificationReport};
pub use svg::{render_tiling_svg, write_tiling_svg};
