//! Cross-module invariants checked exhaustively over whole enumerations.

use asep_core::models::{self, enumerate, ModelId};
use asep_core::pathcore::{
    b_factorize, d_factorize, five_case_factorize, j_factorize, JFactor, StepLabel,
};
use asep_core::symbolic::Polynomial;
use asep_core::transforms::{build_omega2, phi2_12, wrapped_jump_dyck_word};

#[test]
fn return_factorization_reconcatenates() {
    for l in 0..=4 {
        for w in enumerate(ModelId::R4, l).unwrap() {
            let f = d_factorize(&w.path, w.mark.unwrap()).unwrap();
            assert_eq!(f.reconcatenate(), w.path.rises());
        }
    }
}

#[test]
fn jump_factorization_reconcatenates_with_even_factors() {
    fn all_even(j: &JFactor) -> bool {
        j.step_count().is_multiple_of(2) && j.children().iter().all(all_even)
    }
    for l in 0..=4 {
        for w in enumerate(ModelId::R1, l).unwrap() {
            let f = j_factorize(&w.path).unwrap();
            assert_eq!(f.reconcatenate(), w.path.rises());
            assert!(all_even(&f.root));
        }
    }
}

#[test]
fn bridge_factorization_reconcatenates() {
    for l in 0..=4 {
        for w in enumerate(ModelId::R2_2, l).unwrap() {
            let f = b_factorize(&w.path).unwrap();
            assert_eq!(f.reconcatenate(), w.path.rises());
        }
    }
}

#[test]
fn wrapped_empty_factor_image_is_one_down_step() {
    let img = wrapped_jump_dyck_word(&JFactor::Empty);
    assert_eq!(img.rises(), &[-1]);
    assert_eq!(img.start_height(), 2);
}

/// The five case conditions, written independently of the factorizer.
fn independent_case(w: &asep_core::pathcore::LabeledPath) -> u8 {
    let pair = w
        .step_labels
        .iter()
        .position(|&l| l == StepLabel::AlphaBetaPos || l == StepLabel::AlphaBetaNeg);
    let mut seen_beta = false;
    let mut alpha_after_beta = None;
    for (i, &l) in w.step_labels.iter().enumerate() {
        if l == StepLabel::Beta {
            seen_beta = true;
        }
        if l == StepLabel::Alpha && seen_beta && alpha_after_beta.is_none() {
            alpha_after_beta = Some(i);
        }
    }
    match (pair, alpha_after_beta) {
        (None, None) => 5,
        (p, Some(a)) if p.is_none() || a < p.unwrap() => 1,
        (Some(p), _) => {
            if w.step_labels[p] == StepLabel::AlphaBetaPos {
                4
            } else if w.path.rises()[p - 1] == -1 {
                2
            } else {
                3
            }
        }
        _ => unreachable!(),
    }
}

#[test]
fn five_cases_are_exclusive_and_exhaustive() {
    for l in 0..=3 {
        let mut seen = [0usize; 6];
        for w in enumerate(ModelId::R3_2, l).unwrap() {
            let case = five_case_factorize(&w).unwrap();
            assert_eq!(case.case_id, independent_case(&w), "on {}", w.path);
            seen[case.case_id as usize] += 1;
        }
        if l >= 2 {
            assert!(seen[1..=5].iter().all(|&n| n > 0), "all cases occur at L={l}");
        }
    }
}

#[test]
fn mark_expansion_preserves_total_weight() {
    use asep_core::symbolic::Var;
    let c_sub = Polynomial::var(Var::Abar).sub(&Polynomial::one());
    let d_sub = Polynomial::var(Var::Bbar).sub(&Polynomial::one());
    for l in 0..=2 {
        for w in enumerate(ModelId::R2_4, l).unwrap() {
            let mut sum = Polynomial::zero();
            for e in models::expand_cd(&w).unwrap() {
                sum = sum.add(&e.weight());
            }
            let mut want = Polynomial::one();
            for &label in w.vertex_labels.values() {
                want = want.mul(match label {
                    asep_core::pathcore::VertexLabel::CMark => &c_sub,
                    _ => &d_sub,
                });
            }
            assert_eq!(sum, want);
        }
    }
}

#[test]
fn height_shift_involution_closed_under_window_choices() {
    for l in 1..=3 {
        for window in l..=l + 2 {
            let omega = build_omega2(l, window).unwrap();
            let mut fixed_total = Polynomial::zero();
            for e in &omega.elements {
                let img = phi2_12(e).unwrap();
                if img == *e {
                    fixed_total = fixed_total.add(&e.weight());
                } else {
                    assert!(omega.contains(&img), "window {window} not closed at L={l}");
                    assert_eq!(phi2_12(&img).unwrap(), *e);
                    assert_eq!(img.sign(), -e.sign());
                }
            }
            assert_eq!(omega.total(), fixed_total);
        }
    }
}

#[test]
fn product_weights_sum_to_normalisation_up_to_five_sites() {
    use asep_core::algebra::{matrix_product_weight, z_transfer, ChainSpec};
    use asep_core::symbolic::Rational;
    for l in 1..=5 {
        let spec = ChainSpec::new(l, Rational::one(), Rational::one()).unwrap();
        let mut sum = Polynomial::zero();
        for s in 0..spec.states() {
            sum = sum.add(&matrix_product_weight(&spec, &spec.occupancy(s)).unwrap());
        }
        assert_eq!(sum, z_transfer(3, l).unwrap());
    }
}
