//! Scene configuration documents (JSON).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::confocal::{ConfocalFamily, QuadricParam};
use crate::projective::ProjLine;
use crate::{Error, Result, Tolerances};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineSpec {
    pub base: Vec<f64>,
    pub dir: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    pub tol_rank: Option<f64>,
    pub tol_cr: Option<f64>,
    pub tol_caustic: Option<f64>,
    pub tol_forward: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub json: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

/// The document as written on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneDocument {
    pub semi_axes: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub initial_line: LineSpec,
    pub window: Vec<usize>,
    #[serde(default)]
    pub tolerances: ToleranceSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

/// A validated scene.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneConfig {
    pub family: ConfocalFamily,
    pub lambdas: Vec<QuadricParam>,
    pub initial_line: ProjLine,
    pub window: Vec<usize>,
    pub tolerances: Tolerances,
    pub output: OutputSpec,
}

fn positive(field: &str, value: Option<f64>, default: f64) -> Result<f64> {
    match value {
        None => Ok(default),
        Some(v) if v.is_finite() && v > 0.0 => Ok(v),
        Some(v) => Err(Error::config(
            field,
            format!("must be positive and finite, got {v}"),
        )),
    }
}

fn finite(field: &str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::config(field, "entries must be finite"))
    }
}

impl SceneDocument {
    pub fn validate(&self) -> Result<SceneConfig> {
        finite("semi_axes", &self.semi_axes)?;
        let family = ConfocalFamily::new(self.semi_axes.clone()).map_err(|e| {
            Error::config(
                "semi_axes",
                match e {
                    Error::InvalidFamily(reason) => reason,
                    other => other.to_string(),
                },
            )
        })?;
        let d = family.dim();

        finite("lambdas", &self.lambdas)?;
        if self.lambdas.is_empty() {
            return Err(Error::config(
                "lambdas",
                "at least one parameter is required",
            ));
        }
        for (i, a) in self.lambdas.iter().enumerate() {
            if self.lambdas[..i].contains(a) {
                return Err(Error::config(
                    "lambdas",
                    "lambdas must be pairwise distinct",
                ));
            }
        }
        let lambdas = self
            .lambdas
            .iter()
            .map(|&l| {
                family
                    .param(l)
                    .map_err(|e| Error::config("lambdas", e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;

        if self.window.len() != self.lambdas.len() {
            return Err(Error::config(
                "window",
                format!(
                    "needs one extent per quadric parameter ({} lambdas, {} extents)",
                    self.lambdas.len(),
                    self.window.len()
                ),
            ));
        }

        let line = &self.initial_line;
        finite("initial_line.base", &line.base)?;
        finite("initial_line.dir", &line.dir)?;
        for (field, v) in [
            ("initial_line.base", &line.base),
            ("initial_line.dir", &line.dir),
        ] {
            if v.len() != d {
                return Err(Error::config(
                    field,
                    format!("expected {d} coordinates, got {}", v.len()),
                ));
            }
        }
        if line.dir.iter().all(|&c| c == 0.0) {
            return Err(Error::config(
                "initial_line.dir",
                "direction must be nonzero",
            ));
        }
        let initial_line = ProjLine::new(&line.base, &line.dir)
            .map_err(|e| Error::config("initial_line", e.to_string()))?;

        let defaults = Tolerances::default();
        let t = &self.tolerances;
        let tolerances = Tolerances {
            tol_rank: positive("tolerances.tol_rank", t.tol_rank, defaults.tol_rank)?,
            tol_cr: positive("tolerances.tol_cr", t.tol_cr, defaults.tol_cr)?,
            tol_caustic: positive(
                "tolerances.tol_caustic",
                t.tol_caustic,
                defaults.tol_caustic,
            )?,
            tol_forward: positive(
                "tolerances.tol_forward",
                t.tol_forward,
                defaults.tol_forward,
            )?,
            ..defaults
        };

        Ok(SceneConfig {
            family,
            lambdas,
            initial_line,
            window: self.window.clone(),
            tolerances,
            output: self.output.clone(),
        })
    }
}

pub fn parse_document(text: &str) -> Result<SceneDocument> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Parse and validate a scene, applying default tolerances.
pub fn parse_config(text: &str) -> Result<SceneConfig> {
    parse_document(text)?.validate()
}

pub fn load_config(path: &Path) -> Result<SceneConfig> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "semi_axes": [4, 1],
        "lambdas": [0, -3],
        "initial_line": {"base": [0, 1], "dir": [1, -1]},
        "window": [3, 3]
    }"#;

    #[test]
    fn minimal_document_gets_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.family.semi_axes(), &[4.0, 1.0]);
        assert_eq!(cfg.window, vec![3, 3]);
        let t = cfg.tolerances;
        assert_eq!(
            (t.tol_rank, t.tol_cr, t.tol_caustic, t.tol_forward),
            (1e-9, 1e-7, 1e-8, 1e-9)
        );
        assert_eq!(cfg.output, OutputSpec::default());
    }

    #[test]
    fn repeated_lambdas() {
        let text = MINIMAL.replace("[0, -3]", "[0, 0]");
        let err = parse_config(&text).unwrap_err();
        assert!(
            err.to_string()
                .contains("lambdas must be pairwise distinct"),
            "{err}"
        );
    }

    #[test]
    fn unknown_key_is_named() {
        let text = MINIMAL.replace("\"window\"", "\"speed\": 2, \"window\"");
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("speed"), "{err}");
    }

    #[test]
    fn invariant_violations_name_the_field() {
        let cases = [
            (MINIMAL.replace("[4, 1]", "[1, 4]"), "semi_axes"),
            (MINIMAL.replace("[0, -3]", "[1, -3]"), "lambdas"),
            (MINIMAL.replace("[1, -1]", "[0, 0]"), "initial_line.dir"),
            (MINIMAL.replace("[0, 1]", "[0, 1, 2]"), "initial_line.base"),
            (MINIMAL.replace("[3, 3]", "[3]"), "window"),
        ];
        for (text, field) in cases {
            match parse_config(&text) {
                Err(Error::Config { field: f, .. }) => assert_eq!(f, field),
                other => panic!("{field}: {other:?}"),
            }
        }
    }

    #[test]
    fn tolerance_overrides() {
        let text = MINIMAL.replace(
            "\"window\"",
            "\"tolerances\": {\"tol_rank\": 1e-8}, \"window\"",
        );
        let cfg = parse_config(&text).unwrap();
        assert_eq!(cfg.tolerances.tol_rank, 1e-8);
        assert_eq!(cfg.tolerances.tol_cr, 1e-7);
        let bad = MINIMAL.replace("\"window\"", "\"tolerances\": {\"tol_cr\": -1}, \"window\"");
        assert!(matches!(parse_config(&bad), Err(Error::Config { .. })));
    }
}
