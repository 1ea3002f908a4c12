use criterion::{black_box, criterion_group, criterion_main, Criterion};

use polyangle::cones::{AngleOpts, PolyCone};
use polyangle::crofton::{crofton_estimate, FlatMeasure};
use polyangle::curvmeas::{intrinsic_volumes, EvalOpts};
use polyangle::exterior::{plucker, Frame};
use polyangle::grassrank::{haar_frame, restriction_rank};
use polyangle::mc;
use polyangle::polytope::Polytope;
use polyangle::repcomb::{lr_coefficient, Partition};

fn bench_exterior(c: &mut Criterion) {
    let mut rng = mc::substream(1, 0);
    let frames: Vec<Frame> = (0..64).map(|_| haar_frame(6, 3, &mut rng)).collect();
    c.bench_function("plucker_6_3", |b| {
        let mut i = 0;
        b.iter(|| {
            i = (i + 1) % frames.len();
            black_box(plucker(&frames[i]).unwrap())
        })
    });
}

fn bench_angles(c: &mut Criterion) {
    let s = 3.0f64.sqrt();
    let cone = PolyCone::from_rays(
        3,
        vec![
            vec![1.0 / s, 1.0 / s, 1.0 / s],
            vec![1.0 / s, -1.0 / s, 1.0 / s],
            vec![-1.0 / s, 1.0 / s, 1.0 / s],
            vec![-1.0 / s, -1.0 / s, 1.0 / s],
        ],
    )
    .unwrap();
    c.bench_function("external_angle_girard", |b| {
        b.iter(|| black_box(cone.external_angle(AngleOpts::default())))
    });
    let orthant = PolyCone::from_rays(
        5,
        (0..5)
            .map(|i| {
                let mut v = vec![0.0; 5];
                v[i] = 1.0;
                v
            })
            .collect(),
    )
    .unwrap();
    c.bench_function("external_angle_mc_5d_20k", |b| {
        b.iter(|| black_box(orthant.external_angle(AngleOpts { samples: 20_000, seed: 3 })))
    });
}

fn bench_polytope(c: &mut Criterion) {
    c.bench_function("face_lattice_cube3", |b| {
        b.iter(|| black_box(Polytope::unit_cube(3).unwrap()))
    });
    let cube = Polytope::unit_cube(3).unwrap();
    c.bench_function("intrinsic_volumes_cube3", |b| {
        b.iter(|| black_box(intrinsic_volumes(&cube, EvalOpts::default()).unwrap()))
    });
}

fn bench_rank(c: &mut Criterion) {
    c.bench_function("restriction_rank_4_2", |b| {
        b.iter(|| black_box(restriction_rank(4, 2, 200, 7).unwrap()))
    });
}

fn bench_lr(c: &mut Criterion) {
    let lam = Partition::new(vec![3, 2, 1]).unwrap();
    let mu = Partition::new(vec![3, 2, 1]).unwrap();
    let nu = Partition::new(vec![4, 4, 2, 1, 1]).unwrap();
    c.bench_function("lr_332211", |b| {
        b.iter(|| black_box(lr_coefficient(&lam, &mu, &nu)))
    });
}

fn bench_crofton(c: &mut Criterion) {
    let sq = Polytope::unit_cube(2).unwrap();
    let meas = FlatMeasure::for_body(&sq, 1).unwrap().calibrate(100_000, 5).unwrap();
    c.bench_function("crofton_square_50k_lines", |b| {
        b.iter(|| black_box(crofton_estimate(&sq, 1, &meas, 50_000, 9).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_exterior,
    bench_angles,
    bench_polytope,
    bench_rank,
    bench_lr,
    bench_crofton
);
criterion_main!(benches);
