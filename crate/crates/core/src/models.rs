//! Path model predicates, exhaustive enumerators and weight rules.
//!
//! Four families of weighted paths of length `2L` carry the normalisation
//! polynomial `Z_L`:
//!
//! * `R1` — jump paths: even steps fall by one, odd steps fall by one or jump
//!   up an odd amount; start at an odd height `2k+1` with boundary weight
//!   `abar^k`, end at height one, jumps leaving height one weigh `bbar`.
//! * `R2` — free unit-step excursions between odd heights with boundary
//!   weight `kappa^2 c^k d^k'`; only the fixed-point subset `R2^2` (at least
//!   one height-one vertex, plain `c^k d^k'` boundary) is finite.
//! * `R3` — unit-step excursions from height one to height one that may touch
//!   height zero; crossings of the 1-2 edge weigh `kappa`, steps below height
//!   one weigh `bbar` down and `abar` up.
//! * `R4` — one-transit paths: unit-step excursions strictly above height
//!   zero with one marked height-one vertex; returns to height one weigh
//!   `abar` up to the mark and `bbar` after it.
//!
//! The intermediate forms `R1^1`, `R2^3`, `R2^4`, `R2^5`, `R3'` and `R3^2`
//! are way stations of the bijection pipelines in [`crate::transforms`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::pathcore::{d_factorize, LabeledPath, Path, PathError, StepLabel, VertexLabel};
use crate::symbolic::{Monomial, Polynomial, Var};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("model {0} is an infinite set; use the truncated signed sets instead")]
    UnboundedModel(ModelId),
    #[error("invalid path for model {model}: {reason}")]
    InvalidPath { model: ModelId, reason: String },
    #[error("odd crossing count between heights one and two: {0}")]
    OddKappa(usize),
    #[error("mark on the wrong side of the divider at vertex {0}")]
    MarkSideViolation(usize),
    #[error(transparent)]
    Path(#[from] PathError),
}

/// Identifier of a path model or pipeline stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelId {
    R1,
    R1_1,
    R2,
    R2_1,
    R2_2,
    R2_3,
    R2_4,
    R2_5,
    R3,
    R3Prime,
    R3_2,
    R4,
}

impl ModelId {
    pub const ALL: [ModelId; 12] = [
        ModelId::R1,
        ModelId::R1_1,
        ModelId::R2,
        ModelId::R2_1,
        ModelId::R2_2,
        ModelId::R2_3,
        ModelId::R2_4,
        ModelId::R2_5,
        ModelId::R3,
        ModelId::R3Prime,
        ModelId::R3_2,
        ModelId::R4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelId::R1 => "r1",
            ModelId::R1_1 => "r1_1",
            ModelId::R2 => "r2",
            ModelId::R2_1 => "r2_1",
            ModelId::R2_2 => "r2_2",
            ModelId::R2_3 => "r2_3",
            ModelId::R2_4 => "r2_4",
            ModelId::R2_5 => "r2_5",
            ModelId::R3 => "r3",
            ModelId::R3Prime => "r3_prime",
            ModelId::R3_2 => "r3_2",
            ModelId::R4 => "r4",
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModelId::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown model id {s:?}"))
    }
}

fn invalid(model: ModelId, reason: impl Into<String>) -> ModelError {
    ModelError::InvalidPath { model, reason: reason.into() }
}

/// `c^k * d^l` as a polynomial.
pub(crate) fn cd_monomial(k: u32, l: u32) -> Polynomial {
    let mut e = [0u32; crate::symbolic::NVARS];
    e[Var::C.index()] = k;
    e[Var::D.index()] = l;
    Polynomial::monomial(BigInt::from(1), Monomial(e))
}

fn abar_power(k: u32) -> Polynomial {
    Polynomial::ab_monomial(1, k, 0)
}

fn no_decorations(w: &LabeledPath) -> bool {
    w.vertex_labels.is_empty() && w.mark.is_none() && w.divider.is_none()
}

fn all_unit_steps(w: &LabeledPath) -> bool {
    w.step_labels.iter().all(|&l| l == StepLabel::Unit)
}

/// True iff the path decorated as `w` belongs to model `m`.
pub fn is_valid(m: ModelId, w: &LabeledPath) -> bool {
    check_valid(m, w).is_ok()
}

/// Like [`is_valid`] but explains the first violation found.
pub fn check_valid(m: ModelId, w: &LabeledPath) -> Result<(), ModelError> {
    let p = &w.path;
    let heights = p.heights();
    let fail = |reason: String| Err(invalid(m, reason));
    match m {
        ModelId::R1 => {
            if p.start_height() % 2 != 1 {
                return fail("start height must be odd".into());
            }
            if p.end_height() != 1 {
                return fail("must end at height one".into());
            }
            if p.min_height() < 1 {
                return fail("height-zero vertex".into());
            }
            for (i, &r) in p.rises().iter().enumerate() {
                let step = i + 1;
                if step % 2 == 0 && r != -1 {
                    return fail(format!("even step {step} must be a down step"));
                }
                let expect = if r >= 1 && heights[i] == 1 {
                    StepLabel::BetaJump
                } else {
                    StepLabel::Unit
                };
                if w.step_labels[i] != expect {
                    return fail(format!("step {step} must be labeled {}", expect.name()));
                }
            }
            let k = ((p.start_height() - 1) / 2) as u32;
            if w.boundary_weight != abar_power(k) {
                return fail(format!("boundary weight must be abar^{k}"));
            }
            if !no_decorations(w) {
                return fail("no decorations allowed".into());
            }
            Ok(())
        }
        ModelId::R1_1 => crate::transforms::parse_unit_base_form(w)
            .map(|_| ())
            .map_err(|e| invalid(m, e.to_string())),
        ModelId::R2 | ModelId::R2_1 | ModelId::R2_2 => {
            if !p.is_plus_minus_one() {
                return fail("unit steps only".into());
            }
            if p.start_height() % 2 != 1 || p.end_height() % 2 != 1 {
                return fail("start and end heights must be odd".into());
            }
            if !all_unit_steps(w) || !no_decorations(w) {
                return fail("steps are unweighted and no decorations allowed".into());
            }
            let k = ((p.start_height() - 1) / 2) as u32;
            let kp = ((p.end_height() - 1) / 2) as u32;
            match m {
                ModelId::R2 => {
                    let want = Polynomial::var(Var::Kappa).pow(2).mul(&cd_monomial(k, kp));
                    if w.boundary_weight != want {
                        return fail("boundary weight must be kappa^2 c^k d^k'".into());
                    }
                }
                ModelId::R2_1 => {
                    let plain = cd_monomial(k, kp);
                    let carry = cd_monomial(k + 1, kp + 1).neg();
                    if w.boundary_weight != plain && w.boundary_weight != carry {
                        return fail(
                            "boundary weight must be c^k d^k' or -c^(k+1) d^(k'+1)".into(),
                        );
                    }
                }
                _ => {
                    if w.boundary_weight != cd_monomial(k, kp) {
                        return fail("boundary weight must be c^k d^k'".into());
                    }
                    if !heights.contains(&1) {
                        return fail("needs at least one height-one vertex".into());
                    }
                }
            }
            Ok(())
        }
        ModelId::R2_3 => {
            if !p.is_plus_minus_one() || p.start_height() % 2 != 1 || p.end_height() % 2 != 1 {
                return fail("odd-to-odd unit-step path required".into());
            }
            if p.min_height() < 1 {
                return fail("height-zero vertex".into());
            }
            let Some(div) = w.divider else {
                return fail("divider required".into());
            };
            if heights.get(div) != Some(&1) {
                return fail("divider must sit on a height-one vertex".into());
            }
            if !all_unit_steps(w) || !w.vertex_labels.is_empty() || w.mark.is_some() {
                return fail("only the divider decoration is allowed".into());
            }
            let k = ((p.start_height() - 1) / 2) as u32;
            let l = ((p.end_height() - 1) / 2) as u32;
            if w.boundary_weight != cd_monomial(k, l) {
                return fail("boundary weight must be c^k d^l".into());
            }
            Ok(())
        }
        ModelId::R2_4 | ModelId::R2_5 => {
            if !p.is_plus_minus_one() || p.start_height() != 1 || p.end_height() != 1 {
                return fail("unit excursion from height one required".into());
            }
            if p.min_height() < 1 {
                return fail("height-zero vertex".into());
            }
            let Some(div) = w.divider else {
                return fail("divider required".into());
            };
            if heights.get(div) != Some(&1) {
                return fail("divider must sit on a height-one vertex".into());
            }
            if !all_unit_steps(w) || w.mark.is_some() || !w.boundary_weight.is_one() {
                return fail("only vertex labels and the divider are allowed".into());
            }
            for (&v, &label) in &w.vertex_labels {
                if heights.get(v) != Some(&1) || v == div {
                    return fail(format!("label at non-height-one or divider vertex {v}"));
                }
                let ok = match m {
                    ModelId::R2_4 => {
                        (label == VertexLabel::CMark && v < div)
                            || (label == VertexLabel::DMark && v > div)
                    }
                    _ => match label {
                        VertexLabel::Plus1 | VertexLabel::Minus1 => true,
                        VertexLabel::Alpha => v < div,
                        VertexLabel::Beta => v > div,
                        _ => false,
                    },
                };
                if !ok {
                    return fail(format!("label {} misplaced at vertex {v}", label.name()));
                }
            }
            if m == ModelId::R2_5 {
                // Every non-divider height-one vertex must carry a label.
                for (v, &h) in heights.iter().enumerate() {
                    if h == 1 && v != div && !w.vertex_labels.contains_key(&v) {
                        return fail(format!("unlabeled height-one vertex {v}"));
                    }
                }
            }
            Ok(())
        }
        ModelId::R3 => {
            if !p.is_plus_minus_one() || p.start_height() != 1 || p.end_height() != 1 {
                return fail("unit excursion from height one required".into());
            }
            if !all_unit_steps(w) || !no_decorations(w) || !w.boundary_weight.is_one() {
                return fail("raw crossing-weighted paths carry no labels".into());
            }
            Ok(())
        }
        ModelId::R3Prime | ModelId::R3_2 => {
            if !p.is_plus_minus_one() || p.start_height() != 1 || p.end_height() != 1 {
                return fail("unit excursion from height one required".into());
            }
            if !no_decorations(w) || !w.boundary_weight.is_one() {
                return fail("no decorations allowed".into());
            }
            for (i, &label) in w.step_labels.iter().enumerate() {
                let (from, to) = (heights[i], heights[i + 1]);
                let ok = if from == 2 && to == 1 {
                    match m {
                        ModelId::R3Prime => label == StepLabel::Kappa2,
                        _ => matches!(
                            label,
                            StepLabel::Alpha | StepLabel::Beta | StepLabel::AlphaBetaNeg
                        ),
                    }
                } else if from == 0 && to == 1 {
                    label == StepLabel::AlphaBetaPos
                } else {
                    label == StepLabel::Unit
                };
                if !ok {
                    return fail(format!("label {} misplaced at step {}", label.name(), i + 1));
                }
            }
            Ok(())
        }
        ModelId::R4 => {
            let Some(mark) = w.mark else {
                return fail("mark required".into());
            };
            d_factorize(p, mark).map_err(|e| invalid(m, e.to_string()))?;
            if !w.vertex_labels.is_empty() || w.divider.is_some() || !w.boundary_weight.is_one() {
                return fail("only the mark decoration is allowed".into());
            }
            for (i, &label) in w.step_labels.iter().enumerate() {
                let step = i + 1;
                let expect = if heights[i] == 2 && heights[i + 1] == 1 {
                    if step <= mark {
                        StepLabel::Alpha
                    } else {
                        StepLabel::Beta
                    }
                } else {
                    StepLabel::Unit
                };
                if label != expect {
                    return fail(format!("step {step} must be labeled {}", expect.name()));
                }
            }
            Ok(())
        }
    }
}

/// Builds the canonical labeling of a jump path from its geometry.
pub fn r1_element(path: Path) -> Result<LabeledPath, ModelError> {
    let heights = path.heights();
    let beta_jumps: Vec<usize> = path
        .rises()
        .iter()
        .enumerate()
        .filter(|&(i, &r)| r >= 1 && heights[i] == 1)
        .map(|(i, _)| i)
        .collect();
    let k = ((path.start_height() - 1) / 2).max(0) as u32;
    let mut w = LabeledPath::plain(path);
    for i in beta_jumps {
        w.step_labels[i] = StepLabel::BetaJump;
    }
    w.boundary_weight = abar_power(k);
    check_valid(ModelId::R1, &w)?;
    Ok(w)
}

/// Builds a one-transit element: mark plus side-dependent return labels.
pub fn r4_element(path: Path, mark: usize) -> Result<LabeledPath, ModelError> {
    d_factorize(&path, mark).map_err(|e| invalid(ModelId::R4, e.to_string()))?;
    let heights = path.heights();
    let mut w = LabeledPath::plain(path);
    for i in 0..w.len() {
        if heights[i] == 2 && heights[i + 1] == 1 {
            w.step_labels[i] = if i < mark {
                StepLabel::Alpha
            } else {
                StepLabel::Beta
            };
        }
    }
    w.mark = Some(mark);
    Ok(w)
}

/// Builds a fixed-point stage element with boundary weight `c^k d^k'`.
pub fn r2_2_element(path: Path) -> Result<LabeledPath, ModelError> {
    let k = ((path.start_height() - 1) / 2) as u32;
    let kp = ((path.end_height() - 1) / 2) as u32;
    let mut w = LabeledPath::plain(path);
    w.boundary_weight = cd_monomial(k, kp);
    check_valid(ModelId::R2_2, &w)?;
    Ok(w)
}

/// Builds a divided no-zero-contact element with boundary weight `c^k d^l`.
pub fn r2_3_element(path: Path, divider: usize) -> Result<LabeledPath, ModelError> {
    let k = ((path.start_height() - 1) / 2) as u32;
    let l = ((path.end_height() - 1) / 2) as u32;
    let mut w = LabeledPath::plain(path);
    w.divider = Some(divider);
    w.boundary_weight = cd_monomial(k, l);
    check_valid(ModelId::R2_3, &w)?;
    Ok(w)
}

/// Builds a marked unit-base element from mark vertex sets.
pub fn r2_4_element(
    path: Path,
    divider: usize,
    c_marks: &[usize],
    d_marks: &[usize],
) -> Result<LabeledPath, ModelError> {
    let mut w = LabeledPath::plain(path);
    w.divider = Some(divider);
    for &v in c_marks {
        w.vertex_labels.insert(v, VertexLabel::CMark);
    }
    for &v in d_marks {
        w.vertex_labels.insert(v, VertexLabel::DMark);
    }
    check_valid(ModelId::R2_4, &w)?;
    Ok(w)
}

/// Builds a raw crossing-weighted element.
pub fn r3_element(path: Path) -> Result<LabeledPath, ModelError> {
    let w = LabeledPath::plain(path);
    check_valid(ModelId::R3, &w)?;
    Ok(w)
}

/// Model weight of a valid element.
///
/// For every model except raw `R3` this is the label product of the element;
/// `R3` weights are read off the geometry: `kappa` per crossing of the 1-2
/// edge, `bbar` per drop below height one, `abar` per climb back.
pub fn weight(m: ModelId, w: &LabeledPath) -> Result<Polynomial, ModelError> {
    check_valid(m, w)?;
    if m != ModelId::R3 {
        return Ok(w.weight());
    }
    let heights = w.path.heights();
    let mut kappa_crossings = 0u32;
    let mut drops = 0u32;
    let mut climbs = 0u32;
    for i in 0..w.len() {
        match (heights[i], heights[i + 1]) {
            (1, 2) | (2, 1) => kappa_crossings += 1,
            (1, 0) => drops += 1,
            (0, 1) => climbs += 1,
            _ => {}
        }
    }
    let mut e = [0u32; crate::symbolic::NVARS];
    e[Var::Abar.index()] = climbs;
    e[Var::Bbar.index()] = drops;
    e[Var::Kappa.index()] = kappa_crossings;
    Ok(Polynomial::monomial(BigInt::from(1), Monomial(e)))
}

/// Exhaustively enumerates the length-`2L` elements of a finite model.
///
/// `R2` and `R2^1` are infinite and refused; their truncated signed windows
/// live in [`crate::transforms::build_omega2`].
///
/// ```
/// use asep_core::models::{enumerate, ModelId};
///
/// // One-transit paths are counted by the shifted Catalan numbers.
/// assert_eq!(enumerate(ModelId::R4, 3).unwrap().len(), 14);
/// ```
pub fn enumerate(m: ModelId, l: usize) -> Result<Vec<LabeledPath>, ModelError> {
    match m {
        ModelId::R2 | ModelId::R2_1 => Err(ModelError::UnboundedModel(m)),
        ModelId::R1 => Ok(enumerate_r1(l)),
        ModelId::R1_1 => Ok(enumerate_r1(l)
            .iter()
            .map(|p| crate::transforms::gamma(p).expect("enumerated element maps"))
            .collect()),
        ModelId::R2_2 => Ok(enumerate_r2_2(l)),
        ModelId::R2_3 => Ok(enumerate_r2_3(l)),
        ModelId::R2_4 => Ok(enumerate_r2_4(l)),
        ModelId::R2_5 => Ok(enumerate_r2_5(l)),
        ModelId::R3 => Ok(unit_excursions(l, 0)
            .into_iter()
            .map(|p| r3_element(p).expect("enumerated excursion is valid"))
            .collect()),
        ModelId::R3Prime => Ok(enumerate(ModelId::R3, l)?
            .iter()
            .map(|w| expand_r3(w).expect("valid raw element").0)
            .collect()),
        ModelId::R3_2 => Ok(enumerate(ModelId::R3, l)?
            .iter()
            .flat_map(|w| expand_r3(w).expect("valid raw element").1)
            .collect()),
        ModelId::R4 => Ok(enumerate_r4(l)),
    }
}

/// Total model weight over the enumeration.
pub fn total_weight(m: ModelId, l: usize) -> Result<Polynomial, ModelError> {
    let mut total = Polynomial::zero();
    for w in enumerate(m, l)? {
        total = total.add(&weight(m, &w)?);
    }
    Ok(total)
}

fn enumerate_r1(l: usize) -> Vec<LabeledPath> {
    let steps = 2 * l;
    let mut out = Vec::new();
    for k in 0..=l {
        let start = 2 * k as i64 + 1;
        let mut rises = Vec::with_capacity(steps);
        dfs_r1(start, start, steps, &mut rises, &mut out);
    }
    out
}

fn dfs_r1(start: i64, h: i64, total: usize, rises: &mut Vec<i64>, out: &mut Vec<LabeledPath>) {
    let i = rises.len();
    if i == total {
        if h == 1 {
            let p = Path::new(start, rises.clone()).expect("search stays above zero");
            out.push(r1_element(p).expect("searched path is valid"));
        }
        return;
    }
    let step = i + 1;
    let remaining = (total - step) as i64;
    let try_rise = |r: i64, rises: &mut Vec<i64>, out: &mut Vec<LabeledPath>| {
        let nh = h + r;
        // Stay above zero; keep height one reachable by unit drops.
        if nh >= 1 && nh - remaining <= 1 {
            rises.push(r);
            dfs_r1(start, nh, total, rises, out);
            rises.pop();
        }
    };
    if step.is_multiple_of(2) {
        try_rise(-1, rises, out);
    } else {
        try_rise(-1, rises, out);
        let mut r = 1;
        while h + r - remaining <= 1 {
            try_rise(r, rises, out);
            r += 2;
        }
    }
}

/// All unit-step paths of length `2L` from `start` staying at or above
/// `floor`.
fn unit_paths_from(start: i64, l: usize, floor: i64) -> Vec<Path> {
    fn dfs(h: i64, total: usize, floor: i64, rises: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if rises.len() == total {
            out.push(rises.clone());
            return;
        }
        for r in [1, -1] {
            if h + r >= floor {
                rises.push(r);
                dfs(h + r, total, floor, rises, out);
                rises.pop();
            }
        }
    }
    let mut collected = Vec::new();
    dfs(start, 2 * l, floor, &mut Vec::with_capacity(2 * l), &mut collected);
    collected
        .into_iter()
        .map(|rs| Path::new(start, rs).expect("search respects the floor"))
        .collect()
}

/// Unit-step excursions from height one back to height one above `floor`.
fn unit_excursions(l: usize, floor: i64) -> Vec<Path> {
    unit_paths_from(1, l, floor)
        .into_iter()
        .filter(|p| p.end_height() == 1)
        .collect()
}

fn enumerate_r2_2(l: usize) -> Vec<LabeledPath> {
    let mut out = Vec::new();
    // A start above 2L+1 cannot reach height one in 2L steps.
    for k in 0..=l {
        let start = 2 * k as i64 + 1;
        for p in unit_paths_from(start, l, 0) {
            if p.heights().contains(&1) {
                out.push(r2_2_element(p).expect("searched path is valid"));
            }
        }
    }
    out
}

fn enumerate_r2_3(l: usize) -> Vec<LabeledPath> {
    let mut out = Vec::new();
    for k in 0..=l {
        let start = 2 * k as i64 + 1;
        for p in unit_paths_from(start, l, 1) {
            for v in p.vertices_at_height(1) {
                out.push(r2_3_element(p.clone(), v).expect("divider on height-one vertex"));
            }
        }
    }
    out
}

fn enumerate_r2_4(l: usize) -> Vec<LabeledPath> {
    let mut out = Vec::new();
    for p in unit_excursions(l, 1) {
        let ones = p.vertices_at_height(1);
        for (di, &div) in ones.iter().enumerate() {
            let left = &ones[..di];
            let right = &ones[di + 1..];
            for cmask in 0..(1u32 << left.len()) {
                let c_marks: Vec<usize> = left
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| cmask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                for dmask in 0..(1u32 << right.len()) {
                    let d_marks: Vec<usize> = right
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| dmask >> i & 1 == 1)
                        .map(|(_, &v)| v)
                        .collect();
                    out.push(
                        r2_4_element(p.clone(), div, &c_marks, &d_marks)
                            .expect("marks chosen from the correct sides"),
                    );
                }
            }
        }
    }
    out
}

fn enumerate_r2_5(l: usize) -> Vec<LabeledPath> {
    let mut out = Vec::new();
    for p in unit_excursions(l, 1) {
        let ones = p.vertices_at_height(1);
        for (di, &div) in ones.iter().enumerate() {
            let sides: Vec<(usize, bool)> = ones
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != di)
                .map(|(i, &v)| (v, i < di))
                .collect();
            let mut choice = vec![0u8; sides.len()];
            loop {
                let mut w = LabeledPath::plain(p.clone());
                w.divider = Some(div);
                for (ci, &(v, is_left)) in choice.iter().zip(&sides) {
                    let label = match ci {
                        0 => VertexLabel::Plus1,
                        1 => VertexLabel::Minus1,
                        _ => {
                            if is_left {
                                VertexLabel::Alpha
                            } else {
                                VertexLabel::Beta
                            }
                        }
                    };
                    w.vertex_labels.insert(v, label);
                }
                out.push(w);
                if !advance_mixed_radix(&mut choice, 3) {
                    break;
                }
            }
        }
    }
    out
}

/// Advances a little-endian fixed-radix counter; false when it wraps to zero.
fn advance_mixed_radix(digits: &mut [u8], radix: u8) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

fn enumerate_r4(l: usize) -> Vec<LabeledPath> {
    let mut out = Vec::new();
    for p in unit_excursions(l, 1) {
        for v in p.vertices_at_height(1) {
            out.push(r4_element(p.clone(), v).expect("mark on height-one vertex"));
        }
    }
    out
}

/// Reweights a raw crossing-weighted path and expands its square weights.
///
/// The first component carries one `kappa^2` label per return from height two
/// to height one and one positive pair label per climb from height zero, with
/// total weight unchanged.  The second component replaces each `kappa^2`
/// label independently by `abar`, `bbar` or `-abar*bbar`, giving `3^k` signed
/// paths whose weights sum to the reweighted one under the square's canonical
/// value.
pub fn expand_r3(w: &LabeledPath) -> Result<(LabeledPath, Vec<LabeledPath>), ModelError> {
    check_valid(ModelId::R3, w)?;
    let heights = w.path.heights();
    let mut up_crossings = 0usize;
    let mut down_crossings = 0usize;
    let mut reweighted = LabeledPath::plain(w.path.clone());
    let mut kappa_steps = Vec::new();
    for i in 0..w.len() {
        match (heights[i], heights[i + 1]) {
            (1, 2) => up_crossings += 1,
            (2, 1) => {
                down_crossings += 1;
                reweighted.step_labels[i] = StepLabel::Kappa2;
                kappa_steps.push(i);
            }
            (0, 1) => reweighted.step_labels[i] = StepLabel::AlphaBetaPos,
            _ => {}
        }
    }
    if up_crossings != down_crossings {
        return Err(ModelError::OddKappa(up_crossings + down_crossings));
    }

    let mut expanded = Vec::with_capacity(3usize.pow(kappa_steps.len() as u32));
    let mut choice = vec![0u8; kappa_steps.len()];
    loop {
        let mut e = reweighted.clone();
        for (&step, &ci) in kappa_steps.iter().zip(&choice) {
            e.step_labels[step] = match ci {
                0 => StepLabel::Alpha,
                1 => StepLabel::Beta,
                _ => StepLabel::AlphaBetaNeg,
            };
        }
        expanded.push(e);
        if !advance_mixed_radix(&mut choice, 3) {
            break;
        }
    }
    Ok((reweighted, expanded))
}

/// Expands the `c` and `d` marks of a marked unit-base element into signed
/// vertex labels: each mark becomes `-1` or its barred weight, and every
/// unmarked non-divider height-one vertex receives `+1`.
pub fn expand_cd(w: &LabeledPath) -> Result<Vec<LabeledPath>, ModelError> {
    check_valid(ModelId::R2_4, w).map_err(|e| match e {
        ModelError::InvalidPath { reason, .. } if reason.contains("misplaced") => {
            let v = w
                .vertex_labels
                .iter()
                .find(|(_, &l)| l == VertexLabel::CMark || l == VertexLabel::DMark)
                .map(|(&v, _)| v)
                .unwrap_or(0);
            ModelError::MarkSideViolation(v)
        }
        other => other,
    })?;
    let div = w.divider.expect("validated above");
    let heights = w.path.heights();
    let marks: Vec<(usize, VertexLabel)> = w.vertex_labels.iter().map(|(&v, &l)| (v, l)).collect();

    let mut base = LabeledPath::plain(w.path.clone());
    base.divider = Some(div);
    for (v, &h) in heights.iter().enumerate() {
        if h == 1 && v != div && !w.vertex_labels.contains_key(&v) {
            base.vertex_labels.insert(v, VertexLabel::Plus1);
        }
    }

    let mut out = Vec::with_capacity(1 << marks.len());
    for mask in 0..(1u32 << marks.len()) {
        let mut e = base.clone();
        for (i, &(v, kind)) in marks.iter().enumerate() {
            let label = if mask >> i & 1 == 1 {
                VertexLabel::Minus1
            } else if kind == VertexLabel::CMark {
                VertexLabel::Alpha
            } else {
                VertexLabel::Beta
            };
            e.vertex_labels.insert(v, label);
        }
        out.push(e);
    }
    Ok(out)
}
