//! Hyperplane and point maps on the midpoint lattice.

use confocal_nets::drnet::{build_net, DRNet, Window};
use confocal_nets::hyperlattice::{
    complete_square, enumerate_lattice, extract_maps, star_from_seed, verify_cross_polytope,
    verify_cuboctahedron, verify_lattice, verify_square_face, CellKind, HPMaps, MidVertex,
};
use confocal_nets::projective::cross_ratio_pencil;
use confocal_nets::scene::{random_scene, rng, Scene};
use confocal_nets::Tolerances;

fn random_maps(seed: u64, axes: &[f64], extents: &[usize]) -> (Scene, DRNet, HPMaps) {
    let tol = Tolerances::default();
    let s = random_scene(&mut rng(seed), axes, extents.len()).unwrap();
    let net = build_net(&s.family, &s.lambdas, &s.initial, extents, &tol).unwrap();
    let maps = extract_maps(&s.family, &net, &tol).unwrap();
    (s, net, maps)
}

#[test]
fn cross_polytope_points_sit_on_the_shared_line() {
    let tol = Tolerances::default();
    for (seed, axes, extents) in [
        (1, vec![4.0, 1.0], vec![3, 3]),
        (2, vec![9.0, 4.0, 1.0], vec![2, 3]),
        (3, vec![9.0, 4.0, 1.0], vec![2, 2, 2]),
    ] {
        let (s, net, maps) = random_maps(seed, &axes, &extents);
        let lattice = enumerate_lattice(net.window()).unwrap();
        let mut count = 0;
        for cell in lattice.cells_of(CellKind::CrossPolytope) {
            let report = verify_cross_polytope(&s.family, &maps, cell, &tol).unwrap();
            assert!(report.passed, "{report:?}");
            // every vertex point lies on phi(anchor) and on its own quadric
            let anchor: Vec<usize> = cell.anchor.iter().map(|&c| c as usize / 2).collect();
            let line = net.line(&anchor).unwrap();
            for v in &cell.vertices {
                let x = maps.p(v).unwrap().to_affine().unwrap();
                assert!(line.distance_to_point(&x) < 1e-9);
                assert!(s.family.quadric_value_affine(maps.lambda(v), &x).abs() < 1e-10);
            }
            count += 1;
        }
        let interior: usize = extents.iter().map(|n| n - 1).product();
        assert_eq!(count, interior);
    }
}

#[test]
fn square_faces_are_tangent_pencils() {
    let tol = Tolerances::default();
    for (seed, axes, extents) in [
        (4, vec![4.0, 1.0], vec![3, 3]),
        (5, vec![9.0, 4.0, 1.0], vec![2, 2, 2]),
    ] {
        let (s, net, maps) = random_maps(seed, &axes, &extents);
        let lattice = enumerate_lattice(net.window()).unwrap();
        let report = verify_lattice(&s.family, &maps, &lattice, &tol).unwrap();
        let m = extents.len();
        let mut quads = 0;
        for i in 0..m {
            for j in i + 1..m {
                quads += (0..m)
                    .map(|k| {
                        if k == i || k == j {
                            extents[k]
                        } else {
                            extents[k] + 1
                        }
                    })
                    .product::<usize>();
            }
        }
        assert_eq!(report.squares.len(), quads);
        for sq in &report.squares {
            assert!(sq.in_pencil && sq.tangent, "{sq:?}");
        }
    }
}

/// `A, A1` and `B, B1` are the two tangent pairs of the pencil. Both pairs
/// are the zero sets of the tangency forms restricted to it, and those forms
/// differ by a multiple of a definite form, so the pairs never separate one
/// another: `CR(A, A1; B, B1) > 0`.
#[test]
fn opposite_pairs_never_separate() {
    let tol = Tolerances::default();
    for seed in 0..6 {
        let (s, net, maps) = random_maps(seed, &[4.0, 1.0], &[2, 2]);
        let lattice = enumerate_lattice(net.window()).unwrap();
        for cell in lattice.cells_of(CellKind::RectifiedCube) {
            let f = cell.square(0);
            let cr = cross_ratio_pencil(
                maps.h(f[0]).unwrap(),
                maps.h(f[2]).unwrap(),
                maps.h(f[1]).unwrap(),
                maps.h(f[3]).unwrap(),
                tol.tol_rank,
            )
            .unwrap();
            assert!(cr > 0.0, "{cr}");
            let r = verify_square_face(&s.family, &maps, f, &tol).unwrap();
            assert!(!r.harmonic);
        }
    }
}

#[test]
fn gray_cross_ratios_vary() {
    let tol = Tolerances::default();
    let mut worst: f64 = 0.0;
    for seed in 0..4 {
        let (s, net, maps) = random_maps(seed, &[4.0, 1.0], &[3, 3]);
        let lattice = enumerate_lattice(net.window()).unwrap();
        for cell in lattice.cells_of(CellKind::CrossPolytope) {
            let r = verify_cross_polytope(&s.family, &maps, cell, &tol).unwrap();
            worst = worst.max((r.cross_ratio.unwrap() + 1.0).abs());
        }
    }
    assert!(worst > 1e-3, "{worst}");
}

#[test]
fn completing_net_faces_reproduces_the_stored_planes() {
    let tol = Tolerances::default();
    let (s, net, maps) = random_maps(6, &[9.0, 4.0, 1.0], &[2, 2, 2]);
    let lattice = enumerate_lattice(net.window()).unwrap();
    let mut faces = 0;
    for cell in lattice.cells_of(CellKind::RectifiedCube) {
        for k in 0..cell.square_faces.len() {
            let [a, b1, a1, b] = cell.square(k);
            let (ha1, hb1) = complete_square(
                &s.family,
                maps.lambda(a),
                maps.h(a).unwrap(),
                maps.lambda(b),
                maps.h(b).unwrap(),
                &tol,
            )
            .unwrap();
            assert!(ha1.distance(maps.h(a1).unwrap()) < 1e-8);
            assert!(hb1.distance(maps.h(b1).unwrap()) < 1e-8);
            faces += 1;
        }
    }
    assert_eq!(faces, 8 * 6);
}

#[test]
fn stars_regrow_from_three_planes() {
    let tol = Tolerances::default();
    for seed in 0..5 {
        let (s, _, maps) = random_maps(seed, &[9.0, 4.0, 1.0], &[1, 1, 1]);
        let seeds: Vec<MidVertex> = (0..3).map(|k| MidVertex::edge(&[0, 0, 0], k)).collect();
        let lambdas = [0, 1, 2].map(|k| s.lambdas[k]);
        let planes = [0, 1, 2].map(|k| maps.h(&seeds[k]).unwrap());
        let star = star_from_seed(&s.family, lambdas, planes, &tol).unwrap();
        for v in maps.vertices() {
            assert!(maps.h(v).unwrap().distance(star.h(v).unwrap()) < 1e-8);
        }
        let lattice = enumerate_lattice(&Window::new(&[1, 1, 1])).unwrap();
        let cell = lattice.cells_of(CellKind::RectifiedCube).next().unwrap();
        let report = verify_cuboctahedron(&s.family, &star, cell, &tol).unwrap();
        assert!(report.star_passed(), "{report:?}");
    }
}
