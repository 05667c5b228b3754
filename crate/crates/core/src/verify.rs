//! Named verification suites over the whole crate.
//!
//! Each suite runs a list of exact checks and reports one line per check;
//! the command line tool forwards these as its `verify` subcommand.  The
//! counting checks use oracles that are independent of the enumerators they
//! test: a closed-form binomial for the Catalan numbers and a direct dynamic
//! program for marked one-transit paths.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{
    self, check_dehp, mpa_state_vector, stationary_exact, z_transfer, z_transfer_raw_with_heights,
    ChainSpec,
};
use crate::models::{self, ModelId};
use crate::pathcore::VertexLabel;
use crate::symbolic::{Polynomial, Rational};
use crate::transforms::{
    build_omega2, gamma_23, gamma_23_inverse, gamma_34, gamma_34_inverse, phi2_12, phi2_56, phi3,
    phi3_fixed_to_transit, r1_to_r4, r4_to_r1, stage4_fixed_to_transit, stage4_multiset,
};

/// Outcome of one verification check.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn ok(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass: true, detail: detail.into() }
    }

    fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass: false, detail: detail.into() }
    }

    fn assert(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: detail.into() }
    }
}

pub const SUITES: [&str; 6] = [
    "involutions",
    "bijections",
    "transfer",
    "dehp",
    "stationary",
    "all",
];

/// Runs a named suite with system sizes capped at `max_l`.
///
/// Each check keeps its own stated size (3, 4, 6 or 8) when `max_l` allows
/// it, so `max_l >= 8` runs everything at full size.
pub fn run_suite(name: &str, max_l: usize) -> Result<Vec<Check>, String> {
    match name {
        "involutions" => Ok(involution_checks(max_l)),
        "bijections" => Ok(bijection_checks(max_l)),
        "transfer" => Ok(transfer_checks(max_l)),
        "dehp" => Ok(dehp_checks()),
        "stationary" => Ok(stationary_checks(max_l)),
        "all" => {
            let mut all = involution_checks(max_l);
            all.extend(bijection_checks(max_l));
            all.extend(transfer_checks(max_l));
            all.extend(dehp_checks());
            all.extend(stationary_checks(max_l));
            Ok(all)
        }
        other => Err(format!("unknown suite {other:?}; choose one of {SUITES:?}")),
    }
}

/// Closed-form Catalan number `C(2n, n) / (n + 1)`.
pub fn catalan(n: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..n {
        num *= BigInt::from(2 * n - i);
        den *= BigInt::from(i + 1);
    }
    num / den / BigInt::from(n + 1)
}

/// Counts marked one-transit paths of length `2L` by dynamic programming:
/// unit-step walks from height one to height one staying positive, with
/// exactly one mark placed on a height-one vertex as the walk passes it.
pub fn marked_transit_count(l: usize) -> BigInt {
    let steps = 2 * l;
    let top = steps + 2;
    // state[h][marked]
    let mut state = vec![[BigInt::zero(), BigInt::zero()]; top];
    state[1][0] = BigInt::one();
    state[1][1] = BigInt::one(); // mark on the first vertex
    for _ in 0..steps {
        let mut next = vec![[BigInt::zero(), BigInt::zero()]; top];
        for h in 1..top {
            for m in 0..2 {
                if state[h][m].is_zero() {
                    continue;
                }
                for nh in [h - 1, h + 1] {
                    if nh < 1 || nh >= top {
                        continue;
                    }
                    next[nh][m] += &state[h][m];
                    if nh == 1 && m == 0 {
                        // place the mark on arrival
                        next[1][1] += &state[h][0];
                    }
                }
            }
        }
        state = next;
    }
    state[1][1].clone()
}

fn poly_sum(elements: &[crate::pathcore::LabeledPath]) -> Polynomial {
    let mut t = Polynomial::zero();
    for e in elements {
        t = t.add(&e.weight());
    }
    t
}

fn sorted(mut v: Vec<crate::pathcore::LabeledPath>) -> Vec<crate::pathcore::LabeledPath> {
    v.sort();
    v
}

fn involution_checks(max_l: usize) -> Vec<Check> {
    let mut out = Vec::new();
    let l_max = max_l.min(3);

    for l in 1..=l_max {
        // Height-shift involution on the truncated window.
        let name = format!("involutions/height-shift L={l}");
        let window = l + 2;
        let result = (|| -> Result<Check, String> {
            let omega = build_omega2(l, window).map_err(|e| e.to_string())?;
            let mut fixed = Vec::new();
            for e in &omega.elements {
                let img = phi2_12(e).map_err(|e| e.to_string())?;
                if img == *e {
                    fixed.push(e.clone());
                } else {
                    if img.sign() != -e.sign() {
                        return Err(format!("sign not reversed on {}", e.path));
                    }
                    if img.weight().neg() != e.weight() {
                        return Err(format!("weight magnitude changed on {}", e.path));
                    }
                    if !omega.contains(&img) {
                        return Err(format!("image escapes the window from {}", e.path));
                    }
                    let back = phi2_12(&img).map_err(|e| e.to_string())?;
                    if back != *e {
                        return Err(format!("not involutive on {}", e.path));
                    }
                }
            }
            let want_fixed = sorted(models::enumerate(ModelId::R2_2, l).map_err(|e| e.to_string())?);
            if sorted(fixed.clone()) != want_fixed {
                return Err("fixed points differ from the finite family".into());
            }
            if omega.total() != poly_sum(&fixed) {
                return Err("signed total does not cancel to the fixed points".into());
            }
            Ok(Check::ok(
                name.clone(),
                format!(
                    "{} elements, {} fixed, cancellation total {}",
                    omega.len(),
                    fixed.len(),
                    omega.total()
                ),
            ))
        })();
        out.push(result.unwrap_or_else(|e| Check::fail(name, e)));

        // Rightmost-sign-flip involution on the expanded pipeline output.
        let name = format!("involutions/sign-flip L={l}");
        let result = (|| -> Result<Check, String> {
            let omega = stage4_multiset(l).map_err(|e| e.to_string())?;
            let direct = models::enumerate(ModelId::R2_5, l).map_err(|e| e.to_string())?;
            if sorted(omega.elements.clone()) != sorted(direct) {
                return Err("pipeline multiset differs from direct enumeration".into());
            }
            let mut fixed = Vec::new();
            for e in &omega.elements {
                let img = phi2_56(e).map_err(|e| e.to_string())?;
                let has_signs = e
                    .vertex_labels
                    .values()
                    .any(|&v| v == VertexLabel::Plus1 || v == VertexLabel::Minus1);
                if has_signs {
                    if img == *e || img.sign() != -e.sign() {
                        return Err(format!("bad flip on {}", e.path));
                    }
                    if phi2_56(&img).map_err(|e| e.to_string())? != *e {
                        return Err(format!("not involutive on {}", e.path));
                    }
                    if !omega.contains(&img) {
                        return Err(format!("image escapes the multiset from {}", e.path));
                    }
                } else {
                    if img != *e {
                        return Err(format!("fixed point moved: {}", e.path));
                    }
                    fixed.push(stage4_fixed_to_transit(e).map_err(|e| e.to_string())?);
                }
            }
            let want = sorted(models::enumerate(ModelId::R4, l).map_err(|e| e.to_string())?);
            if sorted(fixed.clone()) != want {
                return Err("fixed points are not the one-transit family".into());
            }
            let z = models::total_weight(ModelId::R4, l).map_err(|e| e.to_string())?;
            if omega.total() != z {
                return Err("signed total does not cancel to the normalisation".into());
            }
            Ok(Check::ok(
                name.clone(),
                format!(
                    "{} elements, {} fixed, cancellation total {}",
                    omega.len(),
                    fixed.len(),
                    z
                ),
            ))
        })();
        out.push(result.unwrap_or_else(|e| Check::fail(name, e)));

        // Bad-step involution on the expanded crossing-weighted family.
        let name = format!("involutions/bad-step L={l}");
        let result = (|| -> Result<Check, String> {
            let omega = models::enumerate(ModelId::R3_2, l).map_err(|e| e.to_string())?;
            let mut fixed = Vec::new();
            for e in &omega {
                let case = crate::pathcore::five_case_factorize(e).map_err(|e| e.to_string())?;
                let img = phi3(e).map_err(|e| e.to_string())?;
                if case.case_id == 5 {
                    if img != *e {
                        return Err(format!("fixed point moved: {}", e.path));
                    }
                    fixed.push(phi3_fixed_to_transit(e).map_err(|e| e.to_string())?);
                } else {
                    if img == *e || img.sign() != -e.sign() {
                        return Err(format!("bad move on {}", e.path));
                    }
                    if phi3(&img).map_err(|e| e.to_string())? != *e {
                        return Err(format!("not involutive on {}", e.path));
                    }
                    if !omega.contains(&img) {
                        return Err(format!("image escapes the family from {}", e.path));
                    }
                }
            }
            let want = sorted(models::enumerate(ModelId::R4, l).map_err(|e| e.to_string())?);
            if sorted(fixed.clone()) != want {
                return Err("fixed points are not the one-transit family".into());
            }
            let total = poly_sum(&omega).canonicalize().map_err(|e| e.to_string())?;
            let z = models::total_weight(ModelId::R4, l).map_err(|e| e.to_string())?;
            if total != z {
                return Err("signed total does not cancel to the normalisation".into());
            }
            Ok(Check::ok(
                name.clone(),
                format!(
                    "{} elements, {} fixed, cancellation total {}",
                    omega.len(),
                    fixed.len(),
                    total
                ),
            ))
        })();
        out.push(result.unwrap_or_else(|e| Check::fail(name, e)));
    }
    out
}

fn bijection_checks(max_l: usize) -> Vec<Check> {
    let mut out = Vec::new();
    let l_max = max_l.min(4);
    for l in 1..=l_max {
        let name = format!("bijections/jump-to-transit L={l}");
        let result = (|| -> Result<Check, String> {
            let sources = models::enumerate(ModelId::R1, l).map_err(|e| e.to_string())?;
            let mut images = Vec::with_capacity(sources.len());
            for w in &sources {
                let img = r1_to_r4(w).map_err(|e| e.to_string())?;
                if img.weight() != models::weight(ModelId::R1, w).map_err(|e| e.to_string())? {
                    return Err(format!("weight not preserved from {}", w.path));
                }
                if &r4_to_r1(&img).map_err(|e| e.to_string())? != w {
                    return Err(format!("round trip failed from {}", w.path));
                }
                images.push(img);
            }
            let want = sorted(models::enumerate(ModelId::R4, l).map_err(|e| e.to_string())?);
            if sorted(images) != want {
                return Err("image multiset differs from the one-transit family".into());
            }
            Ok(Check::ok(name.clone(), format!("{} paths", sources.len())))
        })();
        out.push(result.unwrap_or_else(|e| Check::fail(name, e)));

        let name = format!("bijections/zero-contact-removal L={l}");
        let result = (|| -> Result<Check, String> {
            let sources = models::enumerate(ModelId::R2_2, l).map_err(|e| e.to_string())?;
            let mut images = Vec::with_capacity(sources.len());
            for w in &sources {
                let img = gamma_23(w).map_err(|e| e.to_string())?;
                if img.weight() != w.weight() {
                    return Err(format!("weight not preserved from {}", w.path));
                }
                if &gamma_23_inverse(&img).map_err(|e| e.to_string())? != w {
                    return Err(format!("round trip failed from {}", w.path));
                }
                images.push(img);
            }
            let want = sorted(models::enumerate(ModelId::R2_3, l).map_err(|e| e.to_string())?);
            if sorted(images) != want {
                return Err("image multiset differs from the divided family".into());
            }
            Ok(Check::ok(name.clone(), format!("{} paths", sources.len())))
        })();
        out.push(result.unwrap_or_else(|e| Check::fail(name, e)));

        let name = format!("bijections/boundary-rotation L={l}");
        let result = (|| -> Result<Check, String> {
            let sources = models::enumerate(ModelId::R2_3, l).map_err(|e| e.to_string())?;
            let mut images = Vec::with_capacity(sources.len());
            for w in &sources {
                let img = gamma_34(w).map_err(|e| e.to_string())?;
                if img.weight() != w.weight() {
                    return Err(format!("weight not preserved from {}", w.path));
                }
                if &gamma_34_inverse(&img).map_err(|e| e.to_string())? != w {
                    return Err(format!("round trip failed from {}", w.path));
                }
                images.push(img);
            }
            let want = sorted(models::enumerate(ModelId::R2_4, l).map_err(|e| e.to_string())?);
            if sorted(images) != want {
                return Err("image multiset differs from the marked family".into());
            }
            Ok(Check::ok(name.clone(), format!("{} paths", sources.len())))
        })();
        out.push(result.unwrap_or_else(|e| Check::fail(name, e)));
    }
    out
}

fn transfer_checks(max_l: usize) -> Vec<Check> {
    let mut out = Vec::new();

    for l in 1..=max_l.min(6) {
        let name = format!("transfer/four-expressions L={l}");
        let result = (|| -> Result<Check, String> {
            let z4 = models::total_weight(ModelId::R4, l).map_err(|e| e.to_string())?;
            let z1 = models::total_weight(ModelId::R1, l).map_err(|e| e.to_string())?;
            let z2 = models::total_weight(ModelId::R2_2, l)
                .map_err(|e| e.to_string())?
                .canonicalize()
                .map_err(|e| e.to_string())?;
            let z3 = models::total_weight(ModelId::R3, l)
                .map_err(|e| e.to_string())?
                .canonicalize()
                .map_err(|e| e.to_string())?;
            let t1 = z_transfer(1, l).map_err(|e| e.to_string())?;
            let t3 = z_transfer(3, l).map_err(|e| e.to_string())?;
            for (route, z) in [("jump", &z1), ("free", &z2), ("crossing", &z3), ("transfer-1", &t1), ("transfer-3", &t3)]
            {
                if z != &z4 {
                    return Err(format!("route {route} disagrees: {z} vs {z4}"));
                }
            }
            Ok(Check::ok(name.clone(), format!("Z_{l} = {z4}")))
        })();
        out.push(result.unwrap_or_else(|e| Check::fail(name, e)));
    }

    for l in 1..=max_l.min(4) {
        let name = format!("transfer/truncation-stability L={l}");
        let result = (|| -> Result<Check, String> {
            for rep_id in [1u8, 3] {
                let tight =
                    z_transfer_raw_with_heights(rep_id, l, 2 * l + 2).map_err(|e| e.to_string())?;
                let loose =
                    z_transfer_raw_with_heights(rep_id, l, 2 * l + 6).map_err(|e| e.to_string())?;
                if tight != loose {
                    return Err(format!("representation {rep_id} changes under wider truncation"));
                }
            }
            Ok(Check::ok(name.clone(), "heights 2L+2 and 2L+6 agree"))
        })();
        out.push(result.unwrap_or_else(|e| Check::fail(name, e)));
    }

    for l in 1..=max_l.min(8) {
        let name = format!("transfer/positivity-and-counts L={l}");
        let result = (|| -> Result<Check, String> {
            let z = models::total_weight(ModelId::R4, l).map_err(|e| e.to_string())?;
            if !z.coefficients_nonnegative() {
                return Err("normalisation has a negative coefficient".into());
            }
            let count = BigInt::from(models::enumerate(ModelId::R4, l).map_err(|e| e.to_string())?.len());
            let cat = catalan(l + 1);
            let dp = marked_transit_count(l);
            let mut at_one = std::collections::BTreeMap::new();
            at_one.insert(crate::symbolic::Var::Abar, Rational::one());
            at_one.insert(crate::symbolic::Var::Bbar, Rational::one());
            let z_at_one = z.eval(&at_one).map_err(|e| e.to_string())?;
            if count != cat || count != dp || z_at_one.numerator() != &count {
                return Err(format!(
                    "counts disagree: enumerated {count}, closed form {cat}, dynamic program {dp}, Z(1,1) {z_at_one}"
                ));
            }
            Ok(Check::ok(name.clone(), format!("{count} marked paths")))
        })();
        out.push(result.unwrap_or_else(|e| Check::fail(name, e)));
    }
    out
}

fn dehp_checks() -> Vec<Check> {
    (1u8..=3)
        .map(|rep_id| {
            let report = check_dehp(rep_id, 6);
            Check::assert(
                format!("dehp/representation-{rep_id}"),
                report.all_ok(),
                if report.all_ok() {
                    "product and eigenvector relations hold on the interior".to_string()
                } else {
                    report.violations.join("; ")
                },
            )
        })
        .collect()
}

fn stationary_checks(max_l: usize) -> Vec<Check> {
    let mut out = Vec::new();
    let pairs = [
        (Rational::one(), Rational::one()),
        (Rational::new(1, 2), Rational::new(1, 3)),
        (Rational::new(3, 4), Rational::one()),
    ];
    for l in 1..=max_l.min(5) {
        for (alpha, beta) in &pairs {
            let name = format!("stationary/product-ansatz L={l} alpha={alpha} beta={beta}");
            let result = (|| -> Result<Check, String> {
                let spec = ChainSpec::new(l, alpha.clone(), beta.clone())
                    .map_err(|e| e.to_string())?;
                let exact = stationary_exact(&spec).map_err(|e| e.to_string())?;
                let (mpa, total) = mpa_state_vector(&spec).map_err(|e| e.to_string())?;
                if exact != mpa {
                    return Err("matrix-product vector differs from the exact fixed point".into());
                }
                let mut assignment = std::collections::BTreeMap::new();
                assignment.insert(crate::symbolic::Var::Abar, alpha.recip());
                assignment.insert(crate::symbolic::Var::Bbar, beta.recip());
                let z = algebra::z_transfer(3, l)
                    .map_err(|e| e.to_string())?
                    .eval(&assignment)
                    .map_err(|e| e.to_string())?;
                if z != total {
                    return Err(format!("total weight {total} differs from Z_{l} = {z}"));
                }
                Ok(Check::ok(name.clone(), format!("{} states", spec.states())))
            })();
            out.push(result.unwrap_or_else(|e| Check::fail(name, e)));
        }
    }
    out
}
