//! Seeded random scenes: confocal families with an initial line and quadric
//! parameters for which every reflection in a net is real.
//!
//! All lines of a double reflection net share the caustic parameters of the
//! initial line, and a line meets the ellipsoid `Q_lambda` exactly when
//! `lambda` lies below its smallest caustic. Parameters are therefore drawn
//! below `min(caustics, a_d)` with a safety margin, pairwise well separated.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::billiards::{intersect, line_caustics};
use crate::confocal::{ConfocalFamily, QuadricParam};
use crate::projective::ProjLine;
use crate::{Error, Result, Tolerances};

/// A family, an initial line and `m` quadric parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub family: ConfocalFamily,
    pub lambdas: Vec<QuadricParam>,
    pub initial: ProjLine,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_unit<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (0.2..=1.0).contains(&n) {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// A line through a random point of the ellipsoid `Q_lambda` shrunk by
/// `shrink`, in a random direction.
pub fn random_chord<R: Rng>(
    rng: &mut R,
    family: &ConfocalFamily,
    lambda: QuadricParam,
    shrink: f64,
) -> Result<ProjLine> {
    let d = family.dim();
    let dir = random_unit(rng, d);
    let r = shrink * rng.random_range(0.0f64..1.0).powf(1.0 / d as f64);
    let x: Vec<f64> = random_unit(rng, d)
        .iter()
        .zip(family.semi_axes())
        .map(|(u, a)| r * u * (a - lambda.value()).sqrt())
        .collect();
    ProjLine::new(&x, &dir)
}

/// A random admissible scene with `m` quadrics.
pub fn random_scene<R: Rng>(rng: &mut R, semi_axes: &[f64], m: usize) -> Result<Scene> {
    let family = ConfocalFamily::new(semi_axes.to_vec())?;
    let smallest = *semi_axes.last().expect("validated");
    let outer = family.param(0.0)?;
    for _ in 0..1000 {
        let initial = random_chord(rng, &family, outer, 0.6)?;
        let Ok(caustics) = line_caustics(&family, &initial) else {
            continue;
        };
        let lowest = caustics.values().into_iter().fold(f64::INFINITY, f64::min);
        let top = lowest.min(smallest) - 0.1 * smallest;
        let gap = 0.5 * smallest;
        let mut values: Vec<f64> = (0..m)
            .map(|j| top - gap * (j as f64 + rng.random_range(0.0..0.8)))
            .collect();
        values.shuffle(rng);
        let lambdas = values
            .iter()
            .map(|&v| family.param(v))
            .collect::<Result<Vec<_>>>()?;
        // base the line inside the innermost ellipsoid so that every first
        // bounce lies ahead of it
        let inner = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let hits = intersect(
            &family,
            family.param(inner)?,
            &initial,
            &Tolerances::default(),
        )?;
        let initial = initial.rebased(&initial.point_at(0.5 * (hits.t[0] + hits.t[1])));
        return Ok(Scene {
            family,
            lambdas,
            initial,
        });
    }
    Err(Error::InvalidFamily("no admissible line found".into()))
}
