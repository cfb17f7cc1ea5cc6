use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use simpcube::adjoint::Geometric;
use simpcube::corpus::{cub_object, simp_map, simp_object};
use simpcube::exec::Exec;
use simpcube::homotopy::boxes::boxes_as_generators;
use simpcube::homotopy::{box_height_bound, generate_open_boxes, is_fibration_bounded, path_object};
use simpcube::search::DEFAULT_SOLVER_BUDGET;
use simpcube::site::Site;
use simpcube::subobject::DEFAULT_SUBOBJECT_CAP;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn fibration(c: &mut Criterion) {
    let w = Arc::new(Site::default_window().unwrap());
    let geo = Geometric::new(&w, DEFAULT_SOLVER_BUDGET).unwrap();
    let boxes = boxes_as_generators(generate_open_boxes(&w, box_height_bound(&w), DEFAULT_SUBOBJECT_CAP).unwrap());
    let f = simp_map(geo.simp(), "boundary1->pt").unwrap();
    let (rx, ry) = (geo.i_lower_star(f.src()).unwrap(), geo.i_lower_star(f.dst()).unwrap());
    let g = geo.i_lower_star_map(&f, &rx, &ry).unwrap();
    let mut group = c.benchmark_group("fibration-cub-boxes");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| is_fibration_bounded(&g, &boxes, DEFAULT_SOLVER_BUDGET, exec).unwrap())
        });
    }
    group.finish();
}

fn path_objects(c: &mut Criterion) {
    let w = Arc::new(Site::default_window().unwrap());
    let mut group = c.benchmark_group("path-object");
    group.sample_size(10);
    for obj in ["y[2]", "least-cover"] {
        let y = cub_object(&w, obj).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, obj), &y, |b, y| {
                b.iter(|| path_object(y, DEFAULT_SOLVER_BUDGET, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn right_kan(c: &mut Criterion) {
    let w = Arc::new(Site::default_window().unwrap());
    let mut group = c.benchmark_group("i-lower-star");
    group.sample_size(10);
    for (name, exec) in MODES {
        let geo = Geometric::new(&w, DEFAULT_SOLVER_BUDGET).unwrap().with_exec(exec);
        let x = simp_object(geo.simp(), "nerve-I2").unwrap();
        group.bench_function(BenchmarkId::new(name, "nerve-I2"), |b| b.iter(|| geo.i_lower_star(&x).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, fibration, path_objects, right_kan);
criterion_main!(benches);
