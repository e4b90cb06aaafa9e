//! Double reflection nets built from random admissible scenes.

use confocal_nets::billiards::{forward_hit, line_caustics};
use confocal_nets::drnet::{
    build_net, build_net_ordered, double_reflection, verify_net, DRNet, FillOrder,
};
use confocal_nets::projective::ProjLine;
use confocal_nets::scene::{random_scene, rng};
use confocal_nets::Tolerances;

fn line_gap(a: &DRNet, b: &DRNet) -> f64 {
    a.lines()
        .iter()
        .zip(b.lines())
        .map(|(x, y)| x.deviation(y).max())
        .fold(0.0, f64::max)
}

#[test]
fn random_nets_verify() {
    let tol = Tolerances::default();
    let mut r = rng(11);
    for (axes, m, extents) in [
        (vec![4.0, 1.0], 2, vec![3, 3]),
        (vec![9.0, 4.0, 1.0], 2, vec![3, 2]),
        (vec![9.0, 4.0, 1.0], 3, vec![2, 2, 2]),
    ] {
        for _ in 0..5 {
            let s = random_scene(&mut r, &axes, m).unwrap();
            let net = build_net(&s.family, &s.lambdas, &s.initial, &extents, &tol).unwrap();
            let report = verify_net(&s.family, &net, &tol);
            assert!(report.passed(), "{axes:?} m={m}: {report:?}");
            assert_eq!(report.edges.len(), net.window().edge_count());
        }
    }
}

#[test]
fn every_line_keeps_the_initial_caustics() {
    let tol = Tolerances::default();
    let s = random_scene(&mut rng(5), &[9.0, 4.0, 1.0], 3).unwrap();
    let net = build_net(&s.family, &s.lambdas, &s.initial, &[2, 2, 2], &tol).unwrap();
    let c0 = line_caustics(&s.family, &s.initial).unwrap();
    for line in net.lines() {
        let c = line_caustics(&s.family, line).unwrap();
        assert!(c0.relative_drift(&c) < 1e-8);
    }
}

#[test]
fn fill_orders_agree_in_three_directions() {
    let tol = Tolerances::default();
    let s = random_scene(&mut rng(3), &[9.0, 4.0, 1.0], 3).unwrap();
    let natural = build_net(&s.family, &s.lambdas, &s.initial, &[3, 3, 3], &tol).unwrap();
    for priority in [vec![2, 1, 0], vec![1, 2, 0], vec![2, 0, 1]] {
        let order = FillOrder::new(priority.clone()).unwrap();
        let other =
            build_net_ordered(&s.family, &s.lambdas, &s.initial, &[3, 3, 3], &order, &tol).unwrap();
        let gap = line_gap(&natural, &other);
        assert!(gap < 1e-8, "{priority:?}: {gap}");
    }
}

#[test]
fn the_quad_at_the_origin_is_a_double_reflection() {
    let tol = Tolerances::default();
    let s = random_scene(&mut rng(9), &[4.0, 1.0], 2).unwrap();
    let net = build_net(&s.family, &s.lambdas, &s.initial, &[1, 1], &tol).unwrap();
    let (_, a) = forward_hit(&s.family, s.lambdas[0], &s.initial, &tol).unwrap();
    let (_, b) = forward_hit(&s.family, s.lambdas[1], &s.initial, &tol).unwrap();
    let cfg = double_reflection(
        &s.family,
        s.lambdas[0],
        s.lambdas[1],
        &s.initial,
        &a,
        &b,
        &tol,
    )
    .unwrap();
    assert!(cfg.ell1.approx_eq(net.line(&[1, 0]).unwrap(), 1e-9));
    assert!(cfg.ell2.approx_eq(net.line(&[0, 1]).unwrap(), 1e-9));
    assert!(cfg.ell12.approx_eq(net.line(&[1, 1]).unwrap(), 1e-8));
}

#[test]
fn a_moved_line_is_reported_where_it_sits() {
    let tol = Tolerances::default();
    let s = random_scene(&mut rng(21), &[4.0, 1.0], 2).unwrap();
    let mut net = build_net(&s.family, &s.lambdas, &s.initial, &[3, 3], &tol).unwrap();
    let old = net.line(&[2, 1]).unwrap().clone();
    let dir: Vec<f64> = old
        .direction()
        .iter()
        .zip([1e-4, -1e-4])
        .map(|(a, b)| a + b)
        .collect();
    net.set_line(&[2, 1], ProjLine::new(old.base(), &dir).unwrap())
        .unwrap();
    let report = verify_net(&s.family, &net, &tol);
    assert!(!report.passed());
    for e in report.failing_edges() {
        let touches = e.vertex == [2, 1]
            || (e.vertex[e.direction] + 1 == [2, 1][e.direction]
                && e.vertex
                    .iter()
                    .enumerate()
                    .all(|(k, &c)| k == e.direction || c == [2, 1][k]));
        assert!(touches, "{e:?}");
    }
}

#[test]
fn single_direction_is_a_billiard_trajectory() {
    let tol = Tolerances::default();
    let s = random_scene(&mut rng(2), &[9.0, 4.0, 1.0], 1).unwrap();
    let net = build_net(&s.family, &s.lambdas, &s.initial, &[12], &tol).unwrap();
    let report = verify_net(&s.family, &net, &tol);
    assert!(report.passed());
    assert!(report.quads.is_empty());
    assert_eq!(report.edges.len(), 12);
}
