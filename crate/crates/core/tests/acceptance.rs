//! Acceptance suite: one test per release criterion, each printing a
//! pass/fail line (visible with `--nocapture`) and asserting its stated
//! tolerance and runtime budget.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;

use asep_core::algebra::{self, z_transfer, z_transfer_raw};
use asep_core::models::{self, ModelId};
use asep_core::pathcore::{format_word, j_factorize, parse_word};
use asep_core::symbolic::{abar, bbar, Polynomial, Rational, Var};
use asep_core::transforms::{gamma, r1_to_r4, wrapped_jump_dyck_word};
use asep_core::verify;

fn report(criterion: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!("PASS {criterion} in {elapsed:?} (budget {budget:?})");
    assert!(
        elapsed <= budget,
        "{criterion} exceeded its runtime budget: {elapsed:?} > {budget:?}"
    );
}

fn z2_canonical() -> Polynomial {
    abar()
        .add(&bbar())
        .add(&abar().mul(&bbar()))
        .add(&abar().pow(2))
        .add(&bbar().pow(2))
}

#[test]
fn criterion_1_z2_reproduction() {
    let started = Instant::now();
    let want = z2_canonical();

    assert_eq!(z_transfer(1, 2).unwrap(), want);
    assert_eq!(z_transfer(3, 2).unwrap(), want);
    assert_eq!(z_transfer(4, 2).unwrap(), want);
    assert_eq!(
        models::total_weight(ModelId::R2_2, 2)
            .unwrap()
            .canonicalize()
            .unwrap(),
        want
    );

    // The free-excursion form before canonicalisation.
    let c = Polynomial::var(Var::C);
    let d = Polynomial::var(Var::D);
    let raw2 = Polynomial::constant(5)
        .add(&c.scale(4))
        .add(&d.scale(4))
        .add(&c.mul(&d))
        .add(&c.pow(2))
        .add(&d.pow(2));
    assert_eq!(z_transfer_raw(2, 2).unwrap(), raw2);

    // The crossing-weighted form before the square reduction.
    let ab = abar().mul(&bbar());
    let k2 = Polynomial::var(Var::Kappa).pow(2);
    let raw3 = k2
        .clone()
        .add(&ab.mul(&k2).scale(2))
        .add(&ab.pow(2))
        .add(&Polynomial::var(Var::Kappa).pow(4));
    assert_eq!(z_transfer_raw(3, 2).unwrap(), raw3);

    report("criterion 1: Z_2 reproduction along all routes", started, Duration::from_secs(1));
}

#[test]
fn criterion_2_four_expression_equality() {
    let started = Instant::now();
    for l in 1..=6 {
        let z4 = models::total_weight(ModelId::R4, l).unwrap();
        let z1 = models::total_weight(ModelId::R1, l).unwrap();
        let z2 = models::total_weight(ModelId::R2_2, l)
            .unwrap()
            .canonicalize()
            .unwrap();
        let z3 = models::total_weight(ModelId::R3, l)
            .unwrap()
            .canonicalize()
            .unwrap();
        let t1 = z_transfer(1, l).unwrap();
        let t3 = z_transfer(3, l).unwrap();
        assert_eq!(z1, z4, "jump route at L={l}");
        assert_eq!(z2, z4, "free route at L={l}");
        assert_eq!(z3, z4, "crossing route at L={l}");
        assert_eq!(t1, z4, "transfer route 1 at L={l}");
        assert_eq!(t3, z4, "transfer route 3 at L={l}");
    }
    report("criterion 2: four expressions agree for L=1..6", started, Duration::from_secs(60));
}

#[test]
fn criterion_3_golden_bijection_example() {
    let started = Instant::now();
    let source = parse_word("7: j1 d d d j3 d d d j1 d d d d d j1 d j3 d j1 d d d").unwrap();
    assert_eq!(source.len(), 22);
    let element = models::r1_element(source.clone()).unwrap();

    // Image of the wrapped root factor as one descent word.
    let tree = j_factorize(&source).unwrap();
    let wrapped = wrapped_jump_dyck_word(&tree.root);
    assert_eq!(
        format_word(&wrapped),
        "2: d u u u u d u d d u u d d u d d d u d u u d u d d"
    );

    // Intermediate unit-base form.
    let rebased = gamma(&element).unwrap();
    assert_eq!(
        format_word(&rebased.path),
        "1: u u d d u j3 d d d u d d u d u d j3 d u d d d d"
    );
    assert_eq!(rebased.mark, Some(14));

    // Full pipeline image: the marked one-transit path.
    let image = r1_to_r4(&element).unwrap();
    assert_eq!(
        format_word(&image.path),
        "1: u u d d u u u d d u d d u d u d u u d u d d"
    );
    assert_eq!(image.mark, Some(14));
    let want_weight = abar().pow(3).mul(&bbar().pow(2));
    assert_eq!(image.weight(), want_weight);
    assert_eq!(element.weight(), want_weight);

    report("criterion 3: golden 22-step bijection example", started, Duration::from_secs(1));
}

#[test]
fn criterion_4_involution_suites() {
    let started = Instant::now();
    let checks = verify::run_suite("involutions", 3).unwrap();
    assert_eq!(checks.len(), 9, "three involutions at three sizes");
    for c in &checks {
        assert!(c.pass, "{}: {}", c.name, c.detail);
    }
    report("criterion 4: involution suites exhaustive for L<=3", started, Duration::from_secs(60));
}

#[test]
fn criterion_5_bijection_suites() {
    let started = Instant::now();
    let checks = verify::run_suite("bijections", 4).unwrap();
    assert_eq!(checks.len(), 12, "three bijections at four sizes");
    for c in &checks {
        assert!(c.pass, "{}: {}", c.name, c.detail);
    }
    report("criterion 5: bijection suites for L<=4", started, Duration::from_secs(60));
}

#[test]
fn criterion_6_stationary_ground_truth() {
    let started = Instant::now();
    let checks = verify::run_suite("stationary", 5).unwrap();
    assert_eq!(checks.len(), 15, "five sizes, three parameter pairs");
    for c in &checks {
        assert!(c.pass, "{}: {}", c.name, c.detail);
    }
    report(
        "criterion 6: stationary state matches the product ansatz for L<=5",
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_7_numeric_series_convergence() {
    let started = Instant::now();
    let c = Rational::new(1, 2);
    let d = Rational::new(1, 3);
    let tol: Rational = "1/1000000000".parse().unwrap();
    let got = algebra::z_numeric_rep2(2, &c, &d, &tol).unwrap();
    let want = Rational::new(319, 36);
    let err = got.sub(&want).abs();
    assert!(err.0 < tol.0, "series value {got} misses {want} by {err}");
    report("criterion 7: boundary series converges to 319/36", started, Duration::from_secs(5));
}

#[test]
fn criterion_8_counting_sanity() {
    let started = Instant::now();
    let mut at_one = BTreeMap::new();
    at_one.insert(Var::Abar, Rational::one());
    at_one.insert(Var::Bbar, Rational::one());
    for l in 1..=8 {
        let count = BigInt::from(models::enumerate(ModelId::R4, l).unwrap().len());
        assert_eq!(count, verify::catalan(l + 1), "closed form at L={l}");
        assert_eq!(count, verify::marked_transit_count(l), "dynamic program at L={l}");
        let z_at_one = z_transfer(3, l).unwrap().eval(&at_one).unwrap();
        assert_eq!(
            z_at_one,
            Rational(num_rational::BigRational::from(count.clone())),
            "normalisation at the unit point at L={l}"
        );
    }
    report("criterion 8: marked path counts for L<=8", started, Duration::from_secs(120));
}
