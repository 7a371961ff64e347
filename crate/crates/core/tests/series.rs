//! Series evaluation against frozen high-precision values and the
//! structural identities of the laws.
//!
//! Reference values were computed with 40-digit arithmetic by summing 400
//! terms of each printed series independently of this crate.

use crt_core::series::*;
use proptest::prelude::*;

fn spec(mode: SeriesMode) -> SeriesSpec {
    SeriesSpec {
        mode,
        ..SeriesSpec::default()
    }
}

fn auto() -> SeriesSpec {
    SeriesSpec::default()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn frozen_height_tail() {
    let refs = [
        (0.5, 0.999_999_999_999_995_993_49),
        (1.0, 0.996_380_738_665_994_302_14),
        (2.0, 0.256_425_921_623_144_055_4),
        (4.0, 6.977_180_832_594_065_099_9e-6),
    ];
    for (y, v) in refs {
        for mode in [SeriesMode::Direct, SeriesMode::ThetaDual, SeriesMode::Auto] {
            let e = marginal_height_sf(y, &spec(mode)).unwrap();
            assert!(
                close(e.value, v, 1e-13),
                "{mode:?} y={y}: {} vs {v}",
                e.value
            );
        }
    }
}

#[test]
fn frozen_diameter_tail() {
    let refs = [
        (1.0, 0.999_999_999_985_109_024_51),
        (2.0, 0.841_077_087_202_026_987_95),
        (3.54, 0.003_471_978_831_070_337_133_7),
        (5.0, 6.119_028_066_905_527_298_8e-8),
    ];
    for (y, v) in refs {
        for mode in [SeriesMode::Direct, SeriesMode::ThetaDual, SeriesMode::Auto] {
            let e = marginal_diam_sf(y, &spec(mode)).unwrap();
            assert!(
                close(e.value, v, 1e-12),
                "{mode:?} y={y}: {} vs {v}",
                e.value
            );
        }
    }
}

#[test]
fn frozen_densities() {
    let fd = [
        (1.0, 1.038_479_422_480_761_731_1e-9),
        (2.0, 0.808_295_754_734_818_702_5),
        (3.0, 0.235_610_405_865_795_707_57),
        (4.0, 0.001_294_604_749_706_127_318_1),
    ];
    for (y, v) in fd {
        for mode in [SeriesMode::Direct, SeriesMode::ThetaDual] {
            let e = density_diam(y, &spec(mode)).unwrap();
            assert!(
                close(e.value, v, 1e-11),
                "{mode:?} y={y}: {} vs {v}",
                e.value
            );
        }
    }
    let fdelta = [
        (1.0, 3.792_300_188_008_208_278_1e-25),
        (2.0, 0.003_330_180_435_455_824_837),
        (3.0, 0.722_675_578_694_182_761_02),
        (5.0, 0.014_534_043_167_699_292_606),
    ];
    for (y, v) in fdelta {
        for mode in [SeriesMode::Direct, SeriesMode::ThetaDual] {
            let e = density_szekeres(y, &spec(mode)).unwrap();
            assert!(
                close(e.value, v, 1e-11),
                "{mode:?} y={y}: {} vs {v}",
                e.value
            );
        }
    }
}

#[test]
fn frozen_joint_tail() {
    let refs = [
        (2.0, 1.5, 0.691_647_092_196_715_584_63),
        (3.0, 2.0, 0.043_550_536_426_865_855_916),
        (1.0, 0.8, 0.999_972_565_439_196_736_34),
        (4.0, 2.5, 0.000_156_143_085_443_268_462_01),
        (1.5, 1.2, 0.956_992_596_488_043_812_3),
    ];
    for (y, z, v) in refs {
        let a = JointArgs::new(y, z).unwrap();
        for mode in [SeriesMode::Direct, SeriesMode::ThetaDual, SeriesMode::Auto] {
            let e = joint_survival(&a, &spec(mode)).unwrap();
            assert!(
                close(e.value, v, 1e-12),
                "{mode:?} ({y},{z}): {} vs {v}",
                e.value
            );
        }
    }
}

#[test]
fn joint_collapse_examples() {
    let s = joint_survival(&JointArgs::new(2.0, 4.0).unwrap(), &auto())
        .unwrap()
        .value;
    assert!(close(
        s,
        marginal_height_sf(4.0, &auto()).unwrap().value,
        1e-12
    ));
    let s = joint_survival(&JointArgs::new(3.0, 1.0).unwrap(), &auto())
        .unwrap()
        .value;
    assert!(close(
        s,
        marginal_diam_sf(3.0, &auto()).unwrap().value,
        1e-12
    ));
}

#[test]
fn joint_inclusion_exclusion_example() {
    let a = JointArgs::new(2.0, 1.5).unwrap();
    let s = joint_survival(&a, &spec(SeriesMode::Direct)).unwrap().value;
    let f = joint_cdf(&a, &spec(SeriesMode::ThetaDual)).unwrap().value;
    let fd = marginal_diam_cdf(2.0, &auto()).unwrap().value;
    let fg = marginal_height_cdf(1.5, &auto()).unwrap().value;
    assert!(close(s, 1.0 - fd - fg + f, 1e-12));
}

#[test]
fn union_series_boundary_reductions() {
    let u = joint_union_cdf(
        &JointArgs::new(1.0, 1.0).unwrap(),
        &spec(SeriesMode::ThetaDual),
    )
    .unwrap();
    assert!(close(
        u.value,
        marginal_height_cdf(1.0, &auto()).unwrap().value,
        1e-12
    ));
    let u = joint_union_cdf(
        &JointArgs::new(1.0, 0.5).unwrap(),
        &spec(SeriesMode::ThetaDual),
    )
    .unwrap();
    assert!(close(
        u.value,
        marginal_diam_cdf(1.0, &auto()).unwrap().value,
        1e-12
    ));
    // At (6, 6) the union event is {Γ ≤ 6} and S + U = 1.
    let a = JointArgs::new(6.0, 6.0).unwrap();
    let s = joint_survival(&a, &spec(SeriesMode::Direct)).unwrap().value;
    let u = joint_union_cdf(&a, &spec(SeriesMode::ThetaDual))
        .unwrap()
        .value;
    assert!(close(s + u, 1.0, 1e-12));
}

#[test]
fn duality_examples() {
    for y in [0.5, 1.0, 2.0, 4.0] {
        let s = marginal_height_sf(y, &spec(SeriesMode::Direct))
            .unwrap()
            .value;
        let c = marginal_height_cdf(y, &spec(SeriesMode::ThetaDual))
            .unwrap()
            .value;
        assert!(close(s + c, 1.0, 1e-12), "Γ at {y}");
    }
    for y in [1.0, 2.0, 3.54, 5.0] {
        let s = marginal_diam_sf(y, &spec(SeriesMode::Direct))
            .unwrap()
            .value;
        let c = marginal_diam_cdf(y, &spec(SeriesMode::ThetaDual))
            .unwrap()
            .value;
        assert!(close(s + c, 1.0, 1e-12), "D at {y}");
    }
    let s = marginal_height_sf(1.77, &spec(SeriesMode::Direct))
        .unwrap()
        .value;
    let c = marginal_height_cdf(1.77, &auto()).unwrap().value;
    assert!(close(s + c, 1.0, 1e-12));
}

#[test]
fn cdfs_are_monotone_on_grid() {
    let mut last = (0.0, 0.0);
    for i in 1..=30 {
        let y = 0.2 * i as f64;
        let g = marginal_height_cdf(y, &auto()).unwrap().value;
        let d = marginal_diam_cdf(y, &auto()).unwrap().value;
        assert!(g >= last.0 && d >= last.1);
        last = (g, d);
    }
}

#[test]
fn lower_boundary_reductions() {
    // On z = y/2 the theta series reduces to the diameter cdf, while the
    // true joint cdf is P(Γ ≤ y/2) because D ≤ 2Γ.
    for y in [1.0, 2.0, 4.0] {
        let a = JointArgs::new(y, y / 2.0).unwrap();
        let u = joint_union_cdf(&a, &auto()).unwrap().value;
        assert!(close(
            u,
            marginal_diam_cdf(y, &auto()).unwrap().value,
            1e-12
        ));
        let f = joint_cdf(&a, &auto()).unwrap().value;
        assert!(close(
            f,
            marginal_height_cdf(y / 2.0, &auto()).unwrap().value,
            1e-12
        ));
    }
}

#[test]
fn theta_coefficients() {
    for n in 1..6 {
        let c = ThetaCoeff::new(n, 1.7);
        assert_eq!(c.b, 2.0 * c.a);
        let expect = 4.0 * (std::f64::consts::PI * n as f64 / 1.7).powi(2);
        assert!(close(c.a, expect, 1e-12 * expect));
    }
}

#[test]
fn jacobi_examples() {
    let c = jacobi_check(std::f64::consts::PI, 0.0, 0.0, 20).unwrap();
    assert!(c.abs_diff() <= 1e-15);
    for (t, x, y) in [(1.0, 0.3, 0.0), (4.0, 0.0, 0.25)] {
        let c = jacobi_check(t, x, y, 20).unwrap();
        assert!(c.abs_diff() <= 1e-12 && c.abs_diff() <= c.bound);
    }
    assert!(jacobi_check(0.0, 0.0, 0.0, 10).is_err());
}

#[test]
fn errors() {
    assert!(marginal_height_sf(0.0, &auto()).is_err());
    assert!(marginal_diam_cdf(-1.0, &auto()).is_err());
    assert!(JointArgs::new(0.0, 1.0).is_err());
    assert!(JointArgs::new(1.0, -0.1).is_err());
    assert!(SeriesSpec::new(SeriesMode::Auto, 0.0, 10).is_err());
    assert!(SeriesSpec::new(SeriesMode::Auto, 1e-13, 0).is_err());
    let tight = SeriesSpec::new(SeriesMode::Direct, 1e-13, 2).unwrap();
    assert!(matches!(
        marginal_height_sf(0.2, &tight),
        Err(crt_core::Error::NonConvergence { .. })
    ));
}

/// Compensated brute-force sum of `n_max` terms.
fn kahan(n0: u64, n_max: u64, term: impl Fn(f64) -> f64) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for n in n0..n0 + n_max {
        let t = term(n as f64);
        let y = t - c;
        let u = s + y;
        c = (u - s) - y;
        s = u;
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn truncation_bound_is_certified(y in 0.3f64..8.0, coarse in 1e-9f64..1e-4) {
        let spec = SeriesSpec::new(SeriesMode::Direct, coarse, 10_000).unwrap();
        let e = marginal_height_sf(y, &spec).unwrap();
        let brute = kahan(1, 50_000, |n| 2.0 * (2.0 * n * n * y * y - 1.0) * (-n * n * y * y).exp());
        prop_assert!((e.value - brute).abs() <= e.trunc_bound, "{} vs {brute}, bound {}", e.value, e.trunc_bound);

        let e = marginal_diam_sf(y, &spec).unwrap();
        let brute = kahan(2, 50_000, |n| {
            (n * n - 1.0) * (n.powi(4) * y.powi(4) / 6.0 - 2.0 * n * n * y * y + 2.0) * (-n * n * y * y / 4.0).exp()
        });
        prop_assert!((e.value - brute).abs() <= e.trunc_bound, "{} vs {brute}, bound {}", e.value, e.trunc_bound);

        let dual = spec.with_mode(SeriesMode::ThetaDual);
        let e = marginal_height_cdf(y, &dual).unwrap();
        let c = std::f64::consts::PI.powi(2) / (y * y);
        let brute = 4.0 * std::f64::consts::PI.powf(2.5) / y.powi(3) * kahan(1, 50_000, |n| n * n * (-n * n * c).exp());
        prop_assert!((e.value - brute).abs() <= e.trunc_bound, "{} vs {brute}, bound {}", e.value, e.trunc_bound);
    }

    #[test]
    fn joint_tail_collapses(y in 0.3f64..6.0, t in 0.0f64..1.0) {
        let above = joint_survival(&JointArgs::new(y, y * (1.0 + t)).unwrap(), &auto()).unwrap().value;
        prop_assert!(close(above, marginal_height_sf(y * (1.0 + t), &auto()).unwrap().value, 1e-12));
        let below = joint_survival(&JointArgs::new(y, y * t / 2.0).unwrap(), &auto()).unwrap().value;
        prop_assert!(close(below, marginal_diam_sf(y, &auto()).unwrap().value, 1e-12));
    }

    #[test]
    fn joint_tail_is_monotone(y in 0.5f64..6.0, z in 0.1f64..6.0, dy in 0.0f64..0.5, dz in 0.0f64..0.5) {
        let s = |y: f64, z: f64| joint_survival(&JointArgs::new(y, z).unwrap(), &auto()).unwrap().value;
        let f = |y: f64, z: f64| joint_cdf(&JointArgs::new(y, z).unwrap(), &auto()).unwrap().value;
        let base = s(y, z);
        prop_assert!(s(y + dy, z) <= base + 1e-12);
        prop_assert!(s(y, z + dz) <= base + 1e-12);
        let fb = f(y, z);
        prop_assert!(f(y + dy, z) >= fb - 1e-12);
        prop_assert!(f(y, z + dz) >= fb - 1e-12);
    }

    #[test]
    fn values_stay_in_range(y in 0.01f64..20.0) {
        for e in [
            marginal_height_sf(y, &auto()).unwrap(),
            marginal_height_cdf(y, &auto()).unwrap(),
            marginal_diam_sf(y, &auto()).unwrap(),
            marginal_diam_cdf(y, &auto()).unwrap(),
        ] {
            prop_assert!(e.value >= -e.trunc_bound && e.value <= 1.0 + e.trunc_bound);
        }
        for e in [density_diam(y, &auto()).unwrap(), density_szekeres(y, &auto()).unwrap(), density_height(y, &auto()).unwrap()] {
            prop_assert!(e.value >= -e.trunc_bound);
        }
    }

    #[test]
    fn law_ordering(y in 0.2f64..8.0) {
        // Γ ≤ D ≤ 2Γ
        let sd = marginal_diam_sf(y, &auto()).unwrap().value;
        prop_assert!(sd + 1e-12 >= marginal_height_sf(y, &auto()).unwrap().value);
        prop_assert!(sd <= marginal_height_sf(y / 2.0, &auto()).unwrap().value + 1e-12);
    }
}
