//! Dense real polynomials in ascending coefficient order, and closed-form
//! real roots for degree up to three.

use std::f64::consts::PI;

pub(crate) fn eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| k as f64 * c)
        .collect()
}

/// Multiply by `(a - x)`.
pub(crate) fn mul_shift(coeffs: &[f64], a: f64) -> Vec<f64> {
    let mut out = vec![0.0; coeffs.len() + 1];
    for (k, c) in coeffs.iter().enumerate() {
        out[k] += a * c;
        out[k + 1] -= c;
    }
    out
}

/// `prod_k (a_k - x)`.
pub(crate) fn product_of_shifts<'a>(roots: impl IntoIterator<Item = &'a f64>) -> Vec<f64> {
    roots.into_iter().fold(vec![1.0], |p, a| mul_shift(&p, *a))
}

pub(crate) fn add_scaled(acc: &mut Vec<f64>, alpha: f64, p: &[f64]) {
    if acc.len() < p.len() {
        acc.resize(p.len(), 0.0);
    }
    for (a, c) in acc.iter_mut().zip(p) {
        *a += alpha * c;
    }
}

/// Real roots of `c0 + c1 x + c2 x^2`, sorted. A slightly negative
/// discriminant (relative `clamp`) is treated as a double root.
pub(crate) fn quadratic_roots(c0: f64, c1: f64, c2: f64, clamp: f64) -> Option<[f64; 2]> {
    if c2 == 0.0 {
        return None;
    }
    let disc = c1 * c1 - 4.0 * c2 * c0;
    let scale = c1 * c1 + (4.0 * c2 * c0).abs();
    let disc = if disc < 0.0 {
        if disc >= -clamp * scale {
            0.0
        } else {
            return None;
        }
    } else {
        disc
    };
    let s = disc.sqrt();
    let q = -0.5 * (c1 + c1.signum() * s);
    let (r1, r2) = if q == 0.0 {
        (0.0, 0.0)
    } else {
        (q / c2, c0 / q)
    };
    Some(if r1 <= r2 { [r1, r2] } else { [r2, r1] })
}

fn newton_polish(coeffs: &[f64], mut x: f64) -> f64 {
    let d = derivative(coeffs);
    for _ in 0..3 {
        let fx = eval(coeffs, x);
        let dx = eval(&d, x);
        if dx == 0.0 || !fx.is_finite() {
            break;
        }
        let step = fx / dx;
        let next = x - step;
        if !next.is_finite() || eval(coeffs, next).abs() > fx.abs() {
            break;
        }
        x = next;
    }
    x
}

/// Real roots of `c0 + c1 x + c2 x^2 + c3 x^3` (with `c3 != 0`), sorted,
/// each polished with a few Newton steps.
pub(crate) fn cubic_roots(c0: f64, c1: f64, c2: f64, c3: f64) -> Vec<f64> {
    let (b, c, d) = (c2 / c3, c1 / c3, c0 / c3);
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let shift = -b / 3.0;
    let disc = q * q / 4.0 + p * p * p / 27.0;
    let mut roots = if p < 0.0 && disc <= 0.0 {
        let r = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * r)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        (0..3)
            .map(|k| r * (phi - 2.0 * PI * k as f64 / 3.0).cos() + shift)
            .collect::<Vec<_>>()
    } else {
        let s = disc.max(0.0).sqrt();
        let t = (-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt();
        vec![t + shift]
    };
    let coeffs = [c0, c1, c2, c3];
    for r in roots.iter_mut() {
        *r = newton_polish(&coeffs, *r);
    }
    roots.sort_by(f64::total_cmp);
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_basic() {
        // (x - 1)(x + 3) = x^2 + 2x - 3
        let r = quadratic_roots(-3.0, 2.0, 1.0, 0.0).unwrap();
        assert_eq!(r, [-3.0, 1.0]);
        assert!(quadratic_roots(1.0, 0.0, 1.0, 1e-12).is_none());
        let r = quadratic_roots(1.0, -2.0, 1.0, 0.0).unwrap();
        assert_eq!(r, [1.0, 1.0]);
    }

    #[test]
    fn cubic_three_real() {
        // (x - 1)(x - 4)(x - 9)
        let p = product_of_shifts(&[1.0, 4.0, 9.0]);
        let r = cubic_roots(p[0], p[1], p[2], p[3]);
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([1.0, 4.0, 9.0]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn cubic_one_real() {
        // (x - 2)(x^2 + 1) = x^3 - 2x^2 + x - 2
        let r = cubic_roots(-2.0, 1.0, -2.0, 1.0);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 2.0).abs() < 1e-13);
    }

    #[test]
    fn shift_products() {
        let p = product_of_shifts(&[4.0, 1.0]);
        assert_eq!(p, vec![4.0, -5.0, 1.0]);
        assert_eq!(eval(&p, 4.0), 0.0);
    }
}
