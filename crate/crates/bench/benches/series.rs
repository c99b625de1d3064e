use criterion::{black_box, criterion_group, criterion_main, Criterion};
use qtheta_core::branching::branch;
use qtheta_core::identities::run_identity;
use qtheta_core::numerators::numerator;
use qtheta_core::rat::{int, rat};
use qtheta_core::theta::{eta_product, ThetaSpec};
use qtheta_core::ModuleLabel;

fn series(c: &mut Criterion) {
    c.bench_function("eta_quotient_order_24", |b| {
        b.iter(|| eta_product(black_box(&[(rat(1, 2), 1), (int(2), 1), (int(1), -2)]), int(24)).unwrap())
    });
    c.bench_function("theta_3_4_order_40", |b| {
        b.iter(|| ThetaSpec::jm(black_box(int(3)), 4).expand(int(40)).unwrap())
    });
    c.bench_function("numerator_3_half_order_4", |b| {
        b.iter(|| numerator(black_box(3), rat(1, 2)).unwrap().eval(int(4)).unwrap())
    });
    c.bench_function("branch_2_1_x_2_0_order_6", |b| {
        let (l, r) = (ModuleLabel::new(2, 1).unwrap(), ModuleLabel::new(2, 0).unwrap());
        b.iter(|| branch(black_box(l), r, int(6)).unwrap())
    });
    c.bench_function("verify_ueqv_m4_half", |b| {
        b.iter(|| run_identity(black_box("S5.UeqV.m4.half"), None, false).unwrap())
    });
}

criterion_group!(benches, series);
criterion_main!(benches);
