use std::time::Instant;

use orlicz_lab::cech::*;
use orlicz_lab::forms::{ChartedDomain, Grid};
use orlicz_lab::orlicz::YoungFunction;
use orlicz_lab::simplicial::euler_characteristic;

fn torus_cover(n: usize) -> CoverNerve {
    let d = ChartedDomain::flat_torus(2, n).unwrap();
    let spec = CoverSpec::uniform(&d.grid, 4, 0.25);
    CoverNerve::build(&d, &spec).unwrap()
}

#[test]
fn torus_nerve_shape() {
    let c = torus_cover(128);
    let counts: Vec<usize> = (0..=c.nerve.dim()).map(|l| c.nerve.count(l)).collect();
    assert_eq!(counts, vec![16, 64, 64, 16]);
    assert_eq!(euler_characteristic(&c.nerve), 0);
    assert!(c.partition_defect() < 1e-12);
}

#[test]
fn bicomplex_identities() {
    let c = torus_cover(128);
    let phi = YoungFunction::power(2.0).unwrap();
    let t = Instant::now();
    let r = bicomplex_identity_report(&c, &phi, &BicomplexOptions::default(), 7).unwrap();
    eprintln!("{r:#?}\n{:?}", t.elapsed());
    assert!(r.passes(1e-8, 1e-2));
}

#[test]
fn zigzag_on_torus() {
    let c = torus_cover(128);
    let phi = YoungFunction::power(2.0).unwrap();
    let t = Instant::now();
    let r = zigzag_report(&c, &phi, &BicomplexOptions::default()).unwrap();
    eprintln!("pair {:?}\nper {:?}\nnorm {:?} det {} rowdet {}\ncoord {:?}\nclosed {} cob {} rt {}\n{:?}",
        r.pairing_matrix, r.period_matrix, r.normalized_period_matrix, r.normalized_det, r.row_normalized_det,
        r.coordinate_pairings, r.max_form_closedness, r.max_cochain_coboundary, r.max_roundtrip_residual, t.elapsed());
    assert!(r.passes(1e-2));
}

#[test]
fn interval_covers() {
    let grid = Grid::cube(1, 0.0, 1.0, 64, false).unwrap();
    let d = ChartedDomain::euclidean_box(grid);
    let spec = CoverSpec {
        boxes: vec![BoxSpec { lo: vec![-0.1], hi: vec![0.6] }, BoxSpec { lo: vec![0.4], hi: vec![1.1] }],
        halo: 2,
        margin: 3,
        per_axis: None,
    };
    let c = CoverNerve::build(&d, &spec).unwrap();
    assert_eq!((c.nerve.count(0), c.nerve.dim()), (2, 1));
    let spec = CoverSpec {
        boxes: vec![BoxSpec { lo: vec![0.0], hi: vec![0.6] }, BoxSpec { lo: vec![0.6], hi: vec![1.0] }],
        ..spec
    };
    let c = CoverNerve::build(&d, &spec);
    // abutting sets leave the seam uncovered by the shrunk bumps
    assert!(c.is_err());
}
