use criterion::{criterion_group, criterion_main, Criterion};
use dgres_bench::family_ideal;
use dgres_core::combin::{build_family, FamilySpec};
use dgres_core::dg::dg_check;
use dgres_core::diam4::build_cone_resolution;
use dgres_core::morse::lyubeznik_resolution;
use dgres_core::taylor::{graded_betti, taylor_dg, taylor_resolution};

const FAMILIES: [&str; 3] = ["L(1,1,1)", "C6", "T4(2;1,1)"];

fn resolutions(c: &mut Criterion) {
    for name in FAMILIES {
        let ideal = family_ideal(name);
        c.bench_function(&format!("taylor {name}"), |b| b.iter(|| taylor_resolution(&ideal, None).unwrap()));
        c.bench_function(&format!("lyubeznik {name}"), |b| b.iter(|| lyubeznik_resolution(&ideal, None).unwrap()));
        c.bench_function(&format!("betti {name}"), |b| b.iter(|| graded_betti(&ideal).unwrap()));
    }
}

fn structures(c: &mut Criterion) {
    let tree = build_family(&"T4(2;1,1)".parse::<FamilySpec>().unwrap()).unwrap();
    c.bench_function("cone T4(2;1,1)", |b| b.iter(|| build_cone_resolution(&tree).unwrap()));
    let taylor = taylor_dg(&family_ideal("L(1,1,1)"), None).unwrap();
    c.bench_function("dg_check taylor L(1,1,1)", |b| b.iter(|| dg_check(&taylor)));
}

criterion_group!(benches, resolutions, structures);
criterion_main!(benches);
