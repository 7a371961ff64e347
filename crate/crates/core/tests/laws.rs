//! Distribution-level checks of the three laws.

use std::f64::consts::{PI, SQRT_2};

use crt_core::laws::*;
use crt_core::montecarlo::ks::ks_statistic;
use crt_core::series::SeriesSpec;
use proptest::prelude::*;

const KINDS: [LawKind; 3] = [
    LawKind::HeightGamma,
    LawKind::DiameterD,
    LawKind::SzekeresDelta,
];

fn law(kind: LawKind) -> DistLaw {
    DistLaw::new(kind, SeriesSpec::default()).unwrap()
}

#[test]
fn duality_through_the_law() {
    let g = law(LawKind::HeightGamma);
    for y in [0.5, 1.0, 2.0] {
        assert!((g.cdf(y).unwrap() + g.sf(y).unwrap() - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn quantile_round_trip_all_laws() {
    for kind in KINDS {
        let l = law(kind);
        for p in [0.01, 0.1, 0.5, 0.9, 0.99] {
            let x = l.quantile(&QuantileQuery::new(p).unwrap()).unwrap();
            assert!((l.cdf(x).unwrap() - p).abs() <= 1e-8, "{kind:?} p={p}");
        }
    }
}

#[test]
fn quantile_is_increasing() {
    let l = law(LawKind::DiameterD);
    let mut rng_state = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = || {
        rng_state ^= rng_state << 13;
        rng_state ^= rng_state >> 7;
        rng_state ^= rng_state << 17;
        (rng_state >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..20 {
        let (a, b) = (
            next().clamp(1e-6, 1.0 - 1e-6),
            next().clamp(1e-6, 1.0 - 1e-6),
        );
        let (p1, p2) = (a.min(b), a.max(b));
        if p2 - p1 < 1e-9 {
            continue;
        }
        let x1 = l.quantile(&QuantileQuery::new(p1).unwrap()).unwrap();
        let x2 = l.quantile(&QuantileQuery::new(p2).unwrap()).unwrap();
        assert!(x1 < x2);
    }
}

#[test]
fn moments() {
    let g = law(LawKind::HeightGamma);
    let d = law(LawKind::DiameterD);
    let s = law(LawKind::SzekeresDelta);
    // E[Γ] = √π, E[Γ²] = π²/3, E[D] = 4√π/3 (40-digit quadrature)
    let (gp, gs) = g.moment_routes(1).unwrap();
    assert!((gp.value - gs.value).abs() <= 1e-8);
    assert!((gs.value - PI.sqrt()).abs() <= 1e-9);
    assert!((g.moment(2).unwrap().value - 3.289_868_133_696_452_9).abs() <= 1e-8);
    let ed = d.moment(1).unwrap();
    assert!((ed.value - 2.363_271_801_207_354_7).abs() <= 1e-8);
    assert!((s.moment(1).unwrap().value - SQRT_2 * ed.value).abs() <= 1e-8);
    assert!(ed.value >= gs.value && ed.value <= 2.0 * gs.value);
    for m in [gp, gs, ed] {
        assert!(m.abs_err >= 0.0 && m.value >= 0.0);
    }
}

#[test]
fn pdf_is_derivative_of_cdf() {
    let h = 1e-4;
    for kind in KINDS {
        let l = law(kind);
        for x in [1.0, 1.5, 2.5, 4.0] {
            let fd = (l.cdf(x + h).unwrap() - l.cdf(x - h).unwrap()) / (2.0 * h);
            assert!((fd - l.pdf(x).unwrap()).abs() <= 1e-7, "{kind:?} at {x}");
        }
    }
}

#[test]
fn samples_follow_the_law() {
    for kind in [LawKind::HeightGamma, LawKind::DiameterD] {
        let l = law(kind);
        let mut xs = l.sample(100_000, 11).unwrap();
        assert!(xs.iter().all(|&x| x > 0.0));
        let ks = ks_statistic(&mut xs, |x| l.cdf(x)).unwrap();
        assert!(ks <= 0.0064, "{kind:?}: KS {ks}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cdf_monotone_and_complementary(x in 0.0f64..10.0, dx in 0.0f64..1.0) {
        for kind in KINDS {
            let l = law(kind);
            let (c, s) = (l.cdf(x).unwrap(), l.sf(x).unwrap());
            prop_assert!((0.0..=1.0).contains(&c));
            prop_assert!((c + s - 1.0).abs() <= 2e-13);
            prop_assert!(l.cdf(x + dx).unwrap() >= c);
        }
    }

    #[test]
    fn height_and_diameter_ordering(y in 0.2f64..8.0) {
        let (g, d) = (law(LawKind::HeightGamma), law(LawKind::DiameterD));
        prop_assert!(d.sf(y).unwrap() + 1e-12 >= g.sf(y).unwrap());
        prop_assert!(d.sf(y).unwrap() <= g.sf(y / 2.0).unwrap() + 1e-12);
    }
}

#[test]
fn serde_round_trip() {
    let spec = SeriesSpec::default();
    let text = serde_json::to_string(&spec).unwrap();
    assert!(text.contains("\"auto\""), "{text}");
    assert_eq!(serde_json::from_str::<SeriesSpec>(&text).unwrap(), spec);
    for kind in [
        LawKind::HeightGamma,
        LawKind::DiameterD,
        LawKind::SzekeresDelta,
    ] {
        let text = serde_json::to_string(&kind).unwrap();
        assert_eq!(serde_json::from_str::<LawKind>(&text).unwrap(), kind);
    }
    assert_eq!(
        serde_json::to_string(&LawKind::HeightGamma).unwrap(),
        "\"height_gamma\""
    );
}
