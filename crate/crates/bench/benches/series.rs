use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use num_rational::Rational64;

use kepler_core::asymptotics::{asympt_1f1, rank1_kempf_coeffs};
use kepler_core::hyper_series::{hyper_pfq, SeriesControl};
use kepler_core::jack_poly::{pieri_coefficients, DiagonalPoint, JackEngine, PointDomain};
use kepler_core::kepler_kernels::{closed_form_kernel, kernel_diag, KernelSpec};
use kepler_core::{JordanType, Partition};

fn jack_tables(c: &mut Criterion) {
    let mut g = c.benchmark_group("jack_table");
    for (x, deg) in [(vec![0.7, 0.3], 200), (vec![0.7, 0.4, 0.2], 40), (vec![0.9, 0.6, 0.4, 0.1], 20)] {
        g.bench_with_input(BenchmarkId::new(format!("{}vars", x.len()), deg), &(x, deg), |b, (x, deg)| {
            b.iter(|| {
                let mut t = JackEngine::global().table(x, 0.5).unwrap();
                t.extend_to(*deg).unwrap();
                black_box(t.degree())
            })
        });
    }
    g.finish();
}

fn hypergeometric(c: &mut Criterion) {
    let jt = JordanType::from_name("sym:2").unwrap();
    let t = DiagonalPoint::new(vec![20.0, 12.0], PointDomain::Free).unwrap();
    let ctl = SeriesControl::with_max_degree(2000);
    c.bench_function("1f1_sym2_series_s20", |b| {
        b.iter(|| black_box(hyper_pfq(&[1.8], &[3.4], &t, &jt, &ctl).unwrap().value))
    });
    c.bench_function("1f1_sym2_asymptotic_order2", |b| {
        b.iter(|| black_box(asympt_1f1(1.8, 3.4, &t, &jt, 2).unwrap().value))
    });
    let y = DiagonalPoint::new(vec![0.5, 0.4], PointDomain::Free).unwrap();
    c.bench_function("2f1_sym2_nu80", |b| {
        b.iter(|| black_box(hyper_pfq(&[1.9, 80.0], &[3.1], &y, &jt, &ctl).unwrap().value))
    });
}

fn kernels(c: &mut Criterion) {
    let ctl = SeriesControl::default();
    let spin = JordanType::from_name("spin:5").unwrap();
    let bounded = KernelSpec::bounded(&spin, 1, 10.0).unwrap();
    let t1 = DiagonalPoint::new(vec![0.3], PointDomain::Bounded).unwrap();
    c.bench_function("kernel_bounded_spin5_direct", |b| b.iter(|| black_box(kernel_diag(&bounded, &t1, &ctl).unwrap().value)));
    let full = JordanType::from_name("full:2,2").unwrap();
    let flat = KernelSpec::flat(&full, 2, 1.0, 2.5).unwrap();
    let t2 = DiagonalPoint::new(vec![0.4, 0.2], PointDomain::Cone).unwrap();
    c.bench_function("kernel_flat_full22_direct", |b| b.iter(|| black_box(kernel_diag(&flat, &t2, &ctl).unwrap().value)));
    c.bench_function("kernel_flat_full22_closed_form", |b| {
        b.iter(|| black_box(closed_form_kernel(&flat, &t2, &ctl).unwrap().value))
    });
}

fn coefficients(c: &mut Criterion) {
    let jt = JordanType::from_name("full:3,3").unwrap();
    let mu = Partition::new(vec![3, 2, 1]).unwrap();
    c.bench_function("pieri_full33_321", |b| b.iter(|| black_box(pieri_coefficients(&mu, &jt).unwrap().len())));
    let spin = JordanType::from_name("spin:10").unwrap();
    c.bench_function("kempf_coeffs_spin10_lambda3_2", |b| {
        b.iter(|| black_box(rank1_kempf_coeffs(&spin, Rational64::new(3, 2)).unwrap().len()))
    });
}

criterion_group!(benches, jack_tables, hypergeometric, kernels, coefficients);
criterion_main!(benches);
