//! Weight-preserving bijections and sign-reversing involutions.
//!
//! Two pipelines and three involutions connect the path families to the
//! one-transit paths:
//!
//! * [`gamma`] rebases a jump path at height one by rotating its top-level
//!   factor openers into up steps, marking the vertex that separates the
//!   `abar`-weighted closers from the `bbar`-weighted tail factor, and
//!   [`gamma_prime`] turns each jump factor into an elevated Dyck factor.
//!   Their composition [`r1_to_r4`] and its inverse [`r4_to_r1`] form the
//!   first bijection.
//! * [`build_omega2`] materialises a truncated window of the signed set that
//!   the involution [`phi2_12`] acts on: negatives rise two units, positives
//!   without a height-one contact sink two units, and the fixed points are
//!   exactly the finite `R2^2` family.  [`gamma_23`] then removes zero
//!   contacts in exchange for a dividing line, [`gamma_34`] rotates the
//!   boundary descent and ascent down to height one in exchange for `c` and
//!   `d` marks, and after the mark expansion the involution [`phi2_56`] flips
//!   the rightmost signed vertex, leaving the one-transit paths fixed.
//! * [`phi3`] acts on the expanded crossing-weighted paths by relocating or
//!   flipping the steps around the leftmost bad step; its fixed points are
//!   again the one-transit paths.

use thiserror::Error;

use crate::models::{self, ModelError, ModelId};
use crate::pathcore::{
    b_factorize, d_factorize, five_case_factorize, j_factorize, parse_jump_word, JFactor,
    LabeledPath, Path, PathError, StepLabel, VertexLabel,
};
use crate::symbolic::Polynomial;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("not a jump path: {0}")]
    NotR1(String),
    #[error("not a unit-base factored path: {0}")]
    NotR1_1(String),
    #[error("not a fixed-point stage path: {0}")]
    NotR2_2(String),
    #[error("not a divided path: {0}")]
    NotR2_3(String),
    #[error("not a marked unit-base path: {0}")]
    NotR2_4(String),
    #[error("not an expanded crossing-weighted path: {0}")]
    NotR3_2(String),
    #[error("not in the image of the bijection: {0}")]
    NotInImage(String),
    #[error("not an element of the signed set: {0}")]
    NotInOmega(String),
    #[error("element escapes the truncation window: {0}")]
    OutsideTruncation(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Path(#[from] PathError),
}

/// A finite multiset of signed weighted paths.
#[derive(Clone, Debug)]
pub struct SignedSet {
    pub elements: Vec<LabeledPath>,
    pub provenance: ModelId,
}

impl SignedSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Exact signed total of all element weights.
    pub fn total(&self) -> Polynomial {
        let mut t = Polynomial::zero();
        for e in &self.elements {
            t = t.add(&e.weight());
        }
        t
    }

    pub fn positives(&self) -> impl Iterator<Item = &LabeledPath> {
        self.elements.iter().filter(|e| e.sign() > 0)
    }

    pub fn negatives(&self) -> impl Iterator<Item = &LabeledPath> {
        self.elements.iter().filter(|e| e.sign() < 0)
    }

    /// Multiset membership.
    pub fn contains(&self, w: &LabeledPath) -> bool {
        self.elements.contains(w)
    }
}

/// Builder that accumulates rises and labels step by step.
#[derive(Default)]
struct StepBuilder {
    rises: Vec<i64>,
    labels: Vec<StepLabel>,
}

impl StepBuilder {
    fn push(&mut self, rise: i64, label: StepLabel) {
        self.rises.push(rise);
        self.labels.push(label);
    }

    fn extend_plain(&mut self, rises: &[i64]) {
        for &r in rises {
            self.push(r, StepLabel::Unit);
        }
    }

    /// Current vertex index.
    fn vertex(&self) -> usize {
        self.rises.len()
    }

    fn into_labeled(self, start_height: i64) -> Result<LabeledPath, PathError> {
        let path = Path::new(start_height, self.rises)?;
        let mut w = LabeledPath::plain(path);
        w.step_labels = self.labels;
        Ok(w)
    }
}

/// The unit-base factored form produced by [`gamma`]: `k` wrapped factors
/// with `abar`-weighted closers, the marked vertex, the tail factor carrying
/// the `bbar` jump weights, and one terminating down step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitBaseParts {
    pub left_children: Vec<JFactor>,
    pub tail_child: JFactor,
    pub mark: usize,
}

/// Parses and validates the unit-base factored form.
pub fn parse_unit_base_form(w: &LabeledPath) -> Result<UnitBaseParts, TransformError> {
    let bad = |msg: &str| TransformError::NotR1_1(format!("{msg}: {}", w.path));
    if !w.vertex_labels.is_empty() || w.divider.is_some() || !w.boundary_weight.is_one() {
        return Err(bad("only the mark decoration is allowed"));
    }
    let Some(mark) = w.mark else {
        return Err(bad("mark required"));
    };
    let p = &w.path;
    let n = p.len();
    if p.start_height() != 1 || n == 0 {
        return Err(bad("must start at height one and end with a terminator"));
    }
    let heights = p.heights();
    if heights[n] != 0 || heights[n - 1] != 1 || p.rises()[n - 1] != -1 {
        return Err(bad("must finish with a down step from height one to zero"));
    }
    if heights[..n].iter().any(|&h| h < 1) {
        return Err(bad("interior vertices must stay above height zero"));
    }
    if mark >= n || heights[mark] != 1 {
        return Err(bad("mark must sit on a height-one vertex before the terminator"));
    }
    if w.step_labels[n - 1] != StepLabel::Unit {
        return Err(bad("terminator carries no weight"));
    }

    // Left of the mark: factors `u <child> d` with unweighted interiors and
    // abar-weighted closers.
    let mut left_children = Vec::new();
    let mut pos = 0usize;
    while pos < mark {
        if p.rises()[pos] != 1 || w.step_labels[pos] != StepLabel::Unit {
            return Err(bad("factor opener must be an unweighted up step"));
        }
        let close = (pos + 1..=mark)
            .find(|&v| heights[v] == 1)
            .ok_or_else(|| bad("factor does not return to height one before the mark"))?;
        if w.step_labels[close - 1] != StepLabel::Alpha {
            return Err(bad("factor closer must carry the abar weight"));
        }
        let interior = &p.rises()[pos + 1..close - 1];
        if w.step_labels[pos + 1..close - 1]
            .iter()
            .any(|&l| l != StepLabel::Unit)
        {
            return Err(bad("factor interiors are unweighted"));
        }
        let child = parse_jump_word(interior).map_err(|e| bad(&e.to_string()))?;
        left_children.push(child);
        pos = close;
    }

    // Right of the mark: one jump factor whose height-one jumps carry the
    // bbar weight, then the terminator.
    let tail = &p.rises()[mark..n - 1];
    for (off, &r) in tail.iter().enumerate() {
        let i = mark + off;
        let expect = if r >= 1 && heights[i] == 1 {
            StepLabel::BetaJump
        } else {
            StepLabel::Unit
        };
        if w.step_labels[i] != expect {
            return Err(bad(&format!("step {} must be labeled {}", i + 1, expect.name())));
        }
    }
    let tail_child = parse_jump_word(tail).map_err(|e| bad(&e.to_string()))?;
    Ok(UnitBaseParts { left_children, tail_child, mark })
}

/// Builds the canonical labeling of a unit-base factored path from its
/// geometry and mark: `abar` on each factor closer left of the mark, `bbar`
/// on each jump leaving height one right of it.
pub fn unit_base_element(path: Path, mark: usize) -> Result<LabeledPath, TransformError> {
    let n = path.len();
    let heights = path.heights();
    let mut w = LabeledPath::plain(path);
    w.mark = Some(mark);
    let mut pos = 0usize;
    while pos < mark {
        let close = (pos + 1..=mark).find(|&v| heights[v] == 1).ok_or_else(|| {
            TransformError::NotR1_1("factor does not return to height one".into())
        })?;
        w.step_labels[close - 1] = StepLabel::Alpha;
        pos = close;
    }
    for i in mark..n.saturating_sub(1) {
        if w.path.rises()[i] >= 1 && heights[i] == 1 {
            w.step_labels[i] = StepLabel::BetaJump;
        }
    }
    parse_unit_base_form(&w)?;
    Ok(w)
}

/// Rebases a jump path at height one.
///
/// Wrapping the path in one extra descent on each side splits it into `k+1`
/// top-level jump factors, where `2k+1` is the start height.  The first `k`
/// factor openers turn into up steps, each closer keeps a down step now
/// carrying one `abar` from the boundary weight, the separating vertex is
/// marked, and the final factor follows it unchanged with its `bbar` jump
/// weights, closed by an unweighted terminator.
pub fn gamma(w: &LabeledPath) -> Result<LabeledPath, TransformError> {
    models::check_valid(ModelId::R1, w)
        .map_err(|e| TransformError::NotR1(e.to_string()))?;
    let f = j_factorize(&w.path)?;
    let groups = f.groups();
    let k = groups.len() - 1;

    let mut b = StepBuilder::default();
    for child in &groups[..k] {
        b.push(1, StepLabel::Unit);
        b.extend_plain(&child.word_rises());
        b.push(-1, StepLabel::Alpha);
    }
    let mark = b.vertex();
    let tail = groups[k].word_rises();
    let tail_start = b.vertex();
    b.extend_plain(&tail);
    b.push(-1, StepLabel::Unit);

    let mut out = b.into_labeled(1)?;
    // The tail keeps its jump weights: label its height-one jumps.
    let heights = out.path.heights();
    for i in tail_start..tail_start + tail.len() {
        if out.path.rises()[i] >= 1 && heights[i] == 1 {
            out.step_labels[i] = StepLabel::BetaJump;
        }
    }
    out.mark = Some(mark);
    debug_assert!(parse_unit_base_form(&out).is_ok());
    Ok(out)
}

/// Inverse of [`gamma`]: rebuilds the jump path from the factored form.
pub fn gamma_inverse(w: &LabeledPath) -> Result<LabeledPath, TransformError> {
    let parts = parse_unit_base_form(w)?;
    let k = parts.left_children.len();
    let mut rises = Vec::new();
    for (j, child) in parts
        .left_children
        .iter()
        .chain(std::iter::once(&parts.tail_child))
        .enumerate()
    {
        if j > 0 {
            rises.push(-1);
            rises.push(-1);
        }
        rises.extend(child.word_rises());
    }
    let path = Path::new(2 * k as i64 + 1, rises)?;
    models::r1_element(path).map_err(TransformError::from)
}

/// Rises and labels of the elevated Dyck image of a jump factor.
///
/// A factor with jump index `k` becomes `k+1` up steps followed by one down
/// step and the image of each child.  Along the height-one spine (the last
/// child chain of the tail factor) the `bbar` weight of the jump lands on the
/// down step that returns to height one.
fn jump_to_dyck(j: &JFactor, at_unit_base: bool, out: &mut StepBuilder) {
    let JFactor::Jump { k, children } = j else {
        return;
    };
    for _ in 0..=*k {
        out.push(1, StepLabel::Unit);
    }
    for (idx, child) in children.iter().enumerate() {
        let last = idx == *k;
        let label = if last && at_unit_base {
            StepLabel::Beta
        } else {
            StepLabel::Unit
        };
        out.push(-1, label);
        jump_to_dyck(child, at_unit_base && last, out);
    }
}

/// Public word form of the Dyck image of one wrapped jump factor: the
/// opening down step followed by the image of the factor.
pub fn wrapped_jump_dyck_word(j: &JFactor) -> Path {
    let mut b = StepBuilder::default();
    b.push(-1, StepLabel::Unit);
    jump_to_dyck(j, false, &mut b);
    Path::new(2, b.rises).expect("image of a jump factor is a descent to height one")
}

/// Turns a unit-base factored path into a one-transit path.
///
/// Every jump factor becomes an elevated Dyck factor, the mark stays put, and
/// the terminator disappears.
pub fn gamma_prime(w: &LabeledPath) -> Result<LabeledPath, TransformError> {
    let parts = parse_unit_base_form(w)?;
    let mut b = StepBuilder::default();
    for child in &parts.left_children {
        b.push(1, StepLabel::Unit);
        jump_to_dyck(child, false, &mut b);
        b.push(-1, StepLabel::Alpha);
    }
    let mark = b.vertex();
    jump_to_dyck(&parts.tail_child, true, &mut b);
    let mut out = b.into_labeled(1)?;
    out.mark = Some(mark);
    debug_assert!(models::is_valid(ModelId::R4, &out));
    Ok(out)
}

/// Inverse of the Dyck image: recovers the jump factor from an elevated Dyck
/// word.
fn dyck_to_jump(word: &[i64]) -> Result<JFactor, TransformError> {
    if word.is_empty() {
        return Ok(JFactor::Empty);
    }
    let run = word.iter().take_while(|&&r| r == 1).count();
    if run == 0 {
        return Err(TransformError::NotInImage(
            "Dyck factor must open with an up step".into(),
        ));
    }
    let mut pos = run;
    let mut children = Vec::with_capacity(run);
    let mut base = run as i64;
    for _ in 0..run {
        if pos >= word.len() || word[pos] != -1 {
            return Err(TransformError::NotInImage(
                "expected a down step between child factors".into(),
            ));
        }
        pos += 1;
        base -= 1;
        // Child: maximal segment staying at or above the new base.
        let seg_start = pos;
        let mut h = base;
        while pos < word.len() {
            let nh = h + word[pos];
            if nh < base {
                break;
            }
            h = nh;
            pos += 1;
        }
        if h != base {
            return Err(TransformError::NotInImage(
                "child factor does not return to its base height".into(),
            ));
        }
        children.push(dyck_to_jump(&word[seg_start..pos])?);
    }
    if pos != word.len() {
        return Err(TransformError::NotInImage("trailing steps after the last child".into()));
    }
    Ok(JFactor::Jump { k: run - 1, children })
}

/// Inverse of [`gamma_prime`].
pub fn gamma_prime_inverse(w: &LabeledPath) -> Result<LabeledPath, TransformError> {
    models::check_valid(ModelId::R4, w).map_err(|e| TransformError::NotInImage(e.to_string()))?;
    let mark = w.mark.expect("validated");
    let f = d_factorize(&w.path, mark)?;
    let mut left_children = Vec::with_capacity(f.alpha_factors.len());
    for interior in &f.alpha_factors {
        left_children.push(dyck_to_jump(interior)?);
    }
    let tail_child = dyck_to_jump(&w.path.rises()[mark..])?;

    let mut b = StepBuilder::default();
    for child in &left_children {
        b.push(1, StepLabel::Unit);
        b.extend_plain(&child.word_rises());
        b.push(-1, StepLabel::Alpha);
    }
    let mark_out = b.vertex();
    let tail = tail_child.word_rises();
    let tail_start = b.vertex();
    b.extend_plain(&tail);
    b.push(-1, StepLabel::Unit);
    let mut out = b.into_labeled(1)?;
    let heights = out.path.heights();
    for i in tail_start..tail_start + tail.len() {
        if out.path.rises()[i] >= 1 && heights[i] == 1 {
            out.step_labels[i] = StepLabel::BetaJump;
        }
    }
    out.mark = Some(mark_out);
    Ok(out)
}

/// The full first bijection: jump paths to one-transit paths.
///
/// ```
/// use asep_core::models::r1_element;
/// use asep_core::pathcore::parse_word;
/// use asep_core::transforms::{r1_to_r4, r4_to_r1};
///
/// let w = r1_element(parse_word("3: d d j3 d d d").unwrap()).unwrap();
/// let img = r1_to_r4(&w).unwrap();
/// assert_eq!(img.weight(), w.weight());
/// assert_eq!(r4_to_r1(&img).unwrap(), w);
/// ```
pub fn r1_to_r4(w: &LabeledPath) -> Result<LabeledPath, TransformError> {
    gamma_prime(&gamma(w)?)
}

/// Inverse of [`r1_to_r4`].
pub fn r4_to_r1(w: &LabeledPath) -> Result<LabeledPath, TransformError> {
    gamma_inverse(&gamma_prime_inverse(w)?)
}

/// Builds the truncated signed window that [`phi2_12`] acts on.
///
/// For every free excursion of length `2L` the window holds the plain-weight
/// element when its start height is at most `2K+1` and the negative
/// carry-weight element when its start height is at most `2K-1`.  The window
/// is closed under the involution: rising by two maps the negative boundary
/// onto the positive one and sinking by two does the reverse.
pub fn build_omega2(l: usize, k_window: usize) -> Result<SignedSet, TransformError> {
    if k_window < l {
        return Err(TransformError::OutsideTruncation(format!(
            "window {k_window} too small for length {l}: fixed points would be cut off"
        )));
    }
    let mut elements = Vec::new();
    for k in 0..=k_window {
        let start = 2 * k as i64 + 1;
        for path in all_unit_paths(start, l) {
            let kp = ((path.end_height() - 1) / 2) as u32;
            let mut pos = LabeledPath::plain(path.clone());
            pos.boundary_weight = models::cd_monomial(k as u32, kp);
            elements.push(pos);
            if k < k_window {
                let mut neg = LabeledPath::plain(path);
                neg.boundary_weight = models::cd_monomial(k as u32 + 1, kp + 1).neg();
                elements.push(neg);
            }
        }
    }
    Ok(SignedSet { elements, provenance: ModelId::R2_1 })
}

fn all_unit_paths(start: i64, l: usize) -> Vec<Path> {
    fn dfs(h: i64, left: usize, rises: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if left == 0 {
            out.push(rises.clone());
            return;
        }
        for r in [1i64, -1] {
            if h + r >= 0 {
                rises.push(r);
                dfs(h + r, left - 1, rises, out);
                rises.pop();
            }
        }
    }
    let mut collected = Vec::new();
    dfs(start, 2 * l, &mut Vec::new(), &mut collected);
    collected
        .into_iter()
        .map(|rs| Path::new(start, rs).expect("search stays non-negative"))
        .collect()
}

/// The height-shift involution on the signed window.
///
/// Negative elements rise two units and turn positive; positive elements
/// with no height-one vertex sink two units and turn negative; positive
/// elements touching height one are fixed.
pub fn phi2_12(w: &LabeledPath) -> Result<LabeledPath, TransformError> {
    models::check_valid(ModelId::R2_1, w)
        .map_err(|e| TransformError::NotInOmega(e.to_string()))?;
    let k = ((w.path.start_height() - 1) / 2) as u32;
    let kp = ((w.path.end_height() - 1) / 2) as u32;
    if w.sign() < 0 {
        // Rise two units; the carried factors become the plain boundary.
        let path = Path::new(w.path.start_height() + 2, w.path.rises().to_vec())?;
        let mut out = LabeledPath::plain(path);
        out.boundary_weight = models::cd_monomial(k + 1, kp + 1);
        Ok(out)
    } else if !w.path.heights().contains(&1) {
        // Sink two units; heights stay non-negative since nothing touched one.
        let path = Path::new(w.path.start_height() - 2, w.path.rises().to_vec())?;
        let mut out = LabeledPath::plain(path);
        out.boundary_weight = models::cd_monomial(k, kp).neg();
        Ok(out)
    } else {
        Ok(w.clone())
    }
}

/// Eliminates zero contacts from the bridge in exchange for a dividing line.
///
/// If the bridge never reaches height zero the divider marks its first
/// vertex.  Otherwise the rightmost climb out of height zero moves to the
/// front of the bridge and the divider marks the seam.
pub fn gamma_23(w: &LabeledPath) -> Result<LabeledPath, TransformError> {
    models::check_valid(ModelId::R2_2, w).map_err(|e| TransformError::NotR2_2(e.to_string()))?;
    let f = b_factorize(&w.path)?;
    let heights = w.path.heights();
    let zero_climb = (f.b_start + 1..=f.b_end)
        .rev()
        .find(|&s| heights[s - 1] == 0);
    let (new_rises, divider) = match zero_climb {
        None => (w.path.rises().to_vec(), f.b_start),
        Some(s) => {
            let mut rises = w.path.rises()[..f.b_start].to_vec();
            rises.push(1);
            rises.extend_from_slice(&w.path.rises()[f.b_start..s - 1]);
            rises.extend_from_slice(&w.path.rises()[s..]);
            (rises, f.b_start + 1 + (s - 1 - f.b_start))
        }
    };
    let path = Path::new(w.path.start_height(), new_rises)?;
    models::r2_3_element(path, divider).map_err(TransformError::from)
}

/// Inverse of [`gamma_23`]: the divider shows where the climb goes back.
pub fn gamma_23_inverse(w: &LabeledPath) -> Result<LabeledPath, TransformError> {
    models::check_valid(ModelId::R2_3, w).map_err(|e| TransformError::NotR2_3(e.to_string()))?;
    let div = w.divider.expect("validated");
    let ones = w.path.vertices_at_height(1);
    let (&lv, &rv) = (ones.first().unwrap(), ones.last().unwrap());
    if div < lv || div > rv {
        return Err(TransformError::NotInImage(
            "divider outside the bridge span".into(),
        ));
    }
    if div == lv {
        let path = Path::new(w.path.start_height(), w.path.rises().to_vec())?;
        return models::r2_2_element(path).map_err(TransformError::from);
    }
    // The bridge opens with the relocated climb.
    if w.path.rises()[lv] != 1 {
        return Err(TransformError::NotInImage(
            "divided bridge must open with an up step".into(),
        ));
    }
    let mut rises = w.path.rises()[..lv].to_vec();
    rises.extend_from_slice(&w.path.rises()[lv + 1..div]);
    rises.push(1);
    rises.extend_from_slice(&w.path.rises()[div..]);
    let path = Path::new(w.path.start_height(), rises)?;
    models::r2_2_element(path).map_err(TransformError::from)
}

/// Rotates the boundary descent and ascent down to height one.
///
/// Consecutive pairs of descent factors interleave around a `c`-marked
/// height-one vertex, and dually for the ascent with `d` marks; the boundary
/// weight moves onto the marks.
pub fn gamma_34(w: &LabeledPath) -> Result<LabeledPath, TransformError> {
    models::check_valid(ModelId::R2_3, w).map_err(|e| TransformError::NotR2_3(e.to_string()))?;
    let div = w.divider.expect("validated");
    let f = b_factorize(&w.path)?;
    let k = f.prefix.len() / 2;
    let l = f.suffix.len() / 2;

    let mut b = StepBuilder::default();
    let mut c_marks = Vec::with_capacity(k);
    let mut d_marks = Vec::with_capacity(l);
    for n in 0..k {
        b.extend_plain(&f.prefix[2 * n]);
        c_marks.push(b.vertex());
        b.push(1, StepLabel::Unit);
        b.extend_plain(&f.prefix[2 * n + 1]);
        b.push(-1, StepLabel::Unit);
    }
    // Bridge, split at the divider.
    b.extend_plain(&w.path.rises()[f.b_start..div]);
    let divider = b.vertex();
    b.extend_plain(&w.path.rises()[div..f.b_end]);
    for m in 0..l {
        b.push(1, StepLabel::Unit);
        b.extend_plain(&f.suffix[2 * m]);
        b.push(-1, StepLabel::Unit);
        d_marks.push(b.vertex());
        b.extend_plain(&f.suffix[2 * m + 1]);
    }
    let out = b.into_labeled(1)?;
    models::r2_4_element(out.path, divider, &c_marks, &d_marks).map_err(TransformError::from)
}

/// Inverse of [`gamma_34`]: the marks pin where the rotation lifts back.
pub fn gamma_34_inverse(w: &LabeledPath) -> Result<LabeledPath, TransformError> {
    models::check_valid(ModelId::R2_4, w).map_err(|e| TransformError::NotR2_4(e.to_string()))?;
    let div = w.divider.expect("validated");
    let heights = w.path.heights();
    let rises = w.path.rises();
    let c_marks: Vec<usize> = w
        .vertex_labels
        .iter()
        .filter(|(_, &l)| l == VertexLabel::CMark)
        .map(|(&v, _)| v)
        .collect();
    let d_marks: Vec<usize> = w
        .vertex_labels
        .iter()
        .filter(|(_, &l)| l == VertexLabel::DMark)
        .map(|(&v, _)| v)
        .collect();
    let k = c_marks.len();
    let l = d_marks.len();

    // Left side: segments A_i before each mark, elevated interiors U_i after.
    let mut a_segs = Vec::with_capacity(k);
    let mut u_segs = Vec::with_capacity(k);
    let mut pos = 0usize;
    for &m in &c_marks {
        a_segs.push(rises[pos..m].to_vec());
        let close = (m + 1..=div)
            .find(|&v| heights[v] == 1)
            .ok_or_else(|| TransformError::NotR2_4("mark factor never closes".into()))?;
        u_segs.push(rises[m + 1..close - 1].to_vec());
        pos = close;
    }
    let b_left = rises[pos..div].to_vec();

    // Right side: closing steps end on the marked vertices.
    let mut w_segs = Vec::with_capacity(l);
    let mut c_segs = Vec::with_capacity(l);
    let mut b_right = Vec::new();
    let mut prev = div;
    for (i, &m) in d_marks.iter().enumerate() {
        let open = (prev..m)
            .rev()
            .find(|&v| heights[v] == 1)
            .ok_or_else(|| TransformError::NotR2_4("mark factor never opens".into()))?;
        let before = rises[prev..open].to_vec();
        if i == 0 {
            b_right = before;
        } else {
            c_segs.push(before);
        }
        w_segs.push(rises[open + 1..m - 1].to_vec());
        prev = m;
    }
    if l == 0 {
        b_right = rises[div..].to_vec();
    } else {
        c_segs.push(rises[prev..].to_vec());
    }

    // Reassemble at the original heights.
    let mut out = Vec::new();
    for i in 0..k {
        out.extend_from_slice(&a_segs[i]);
        out.push(-1);
        out.extend_from_slice(&u_segs[i]);
        out.push(-1);
    }
    let divider_out = out.len() + b_left.len();
    out.extend_from_slice(&b_left);
    out.extend_from_slice(&b_right);
    for m in 0..l {
        out.push(1);
        out.extend_from_slice(&w_segs[m]);
        out.push(1);
        out.extend_from_slice(&c_segs[m]);
    }
    let path = Path::new(2 * k as i64 + 1, out)?;
    models::r2_3_element(path, divider_out).map_err(TransformError::from)
}

/// The sign-flip involution on fully labeled unit-base paths: the rightmost
/// `+1`/`-1` vertex changes sign; label-complete paths are fixed.
pub fn phi2_56(w: &LabeledPath) -> Result<LabeledPath, TransformError> {
    models::check_valid(ModelId::R2_5, w).map_err(|e| TransformError::NotInOmega(e.to_string()))?;
    let signed = w
        .vertex_labels
        .iter()
        .rev()
        .find(|(_, &l)| l == VertexLabel::Plus1 || l == VertexLabel::Minus1)
        .map(|(&v, &l)| (v, l));
    match signed {
        None => Ok(w.clone()),
        Some((v, l)) => {
            let mut out = w.clone();
            let flipped = if l == VertexLabel::Plus1 {
                VertexLabel::Minus1
            } else {
                VertexLabel::Plus1
            };
            out.vertex_labels.insert(v, flipped);
            Ok(out)
        }
    }
}

/// The expanded multiset that [`phi2_56`] is total on: images of the whole
/// pipeline over the fixed-point stage, with marks expanded into signs.
pub fn stage4_multiset(l: usize) -> Result<SignedSet, TransformError> {
    let mut elements = Vec::new();
    for w in models::enumerate(ModelId::R2_2, l)? {
        let staged = gamma_34(&gamma_23(&w)?)?;
        elements.extend(models::expand_cd(&staged)?);
    }
    Ok(SignedSet { elements, provenance: ModelId::R2_5 })
}

/// Converts a fixed point of [`phi2_56`] into the one-transit path it
/// represents: the divider becomes the mark.
pub fn stage4_fixed_to_transit(w: &LabeledPath) -> Result<LabeledPath, TransformError> {
    models::check_valid(ModelId::R2_5, w).map_err(|e| TransformError::NotInOmega(e.to_string()))?;
    if w.vertex_labels
        .values()
        .any(|&l| l == VertexLabel::Plus1 || l == VertexLabel::Minus1)
    {
        return Err(TransformError::NotInImage("not a fixed point: signed vertices remain".into()));
    }
    let div = w.divider.expect("validated");
    models::r4_element(w.path.clone(), div).map_err(TransformError::from)
}

/// Embeds a one-transit path as the label-complete fixed point of the final
/// involution.
pub fn transit_to_stage4_fixed(w: &LabeledPath) -> Result<LabeledPath, TransformError> {
    models::check_valid(ModelId::R4, w).map_err(|e| TransformError::NotInImage(e.to_string()))?;
    let mark = w.mark.expect("validated");
    let mut out = LabeledPath::plain(w.path.clone());
    out.divider = Some(mark);
    for v in w.path.vertices_at_height(1) {
        if v < mark {
            out.vertex_labels.insert(v, VertexLabel::Alpha);
        } else if v > mark {
            out.vertex_labels.insert(v, VertexLabel::Beta);
        }
    }
    Ok(out)
}

/// The bad-step involution on expanded crossing-weighted paths.
///
/// The five factorisation cases pair up two by two: an `alpha` step caught
/// right of a `beta` step trades places with it through the unweighted factor
/// between them and fuses into a negative pair weight, and a pair-weighted
/// step next to its partner swaps orientation and sign; paths with no bad
/// step are fixed.
pub fn phi3(w: &LabeledPath) -> Result<LabeledPath, TransformError> {
    models::check_valid(ModelId::R3_2, w).map_err(|e| TransformError::NotR3_2(e.to_string()))?;
    let case = five_case_factorize(w)?;
    let rises = w.path.rises();
    let labels = &w.step_labels;
    let (new_rises, new_labels): (Vec<i64>, Vec<StepLabel>) = match case.case_id {
        1 => {
            // Remove the beta closer, slide the window left, drop a negative
            // pair-weighted down step in behind the bad step.
            let x = case.bad_step.unwrap();
            let y = case.partner_step.unwrap();
            let mut r = Vec::with_capacity(rises.len());
            let mut s = Vec::with_capacity(rises.len());
            r.extend_from_slice(&rises[..y - 1]);
            s.extend_from_slice(&labels[..y - 1]);
            r.extend_from_slice(&rises[y..x]);
            s.extend_from_slice(&labels[y..x]);
            *s.last_mut().unwrap() = StepLabel::Unit;
            r.push(-1);
            s.push(StepLabel::AlphaBetaNeg);
            r.extend_from_slice(&rises[x..]);
            s.extend_from_slice(&labels[x..]);
            (r, s)
        }
        2 => {
            // Pull the unweighted closer back out in front of the factor
            // opener as a beta step; the pair weight splits again.
            let x = case.bad_step.unwrap();
            let z = case.partner_step.unwrap();
            let mut r = Vec::with_capacity(rises.len());
            let mut s = Vec::with_capacity(rises.len());
            r.extend_from_slice(&rises[..z - 1]);
            s.extend_from_slice(&labels[..z - 1]);
            r.push(-1);
            s.push(StepLabel::Beta);
            r.extend_from_slice(&rises[z - 1..x - 2]);
            s.extend_from_slice(&labels[z - 1..x - 2]);
            r.extend_from_slice(&rises[x - 1..]);
            s.extend_from_slice(&labels[x - 1..]);
            let moved_bad = r.len() - (rises.len() - x) - 1;
            s[moved_bad] = StepLabel::Alpha;
            (r, s)
        }
        3 | 4 => {
            let x = case.bad_step.unwrap();
            let mut r = rises.to_vec();
            let mut s = labels.to_vec();
            r.swap(x - 2, x - 1);
            s[x - 2] = StepLabel::Unit;
            s[x - 1] = if case.case_id == 3 {
                StepLabel::AlphaBetaPos
            } else {
                StepLabel::AlphaBetaNeg
            };
            (r, s)
        }
        _ => return Ok(w.clone()),
    };
    let path = Path::new(1, new_rises)?;
    let mut out = LabeledPath::plain(path);
    out.step_labels = new_labels;
    models::check_valid(ModelId::R3_2, &out)
        .map_err(|e| TransformError::NotR3_2(format!("image invalid: {e}")))?;
    Ok(out)
}

/// Converts a fixed point of [`phi3`] into the one-transit path it equals:
/// the mark lands on the height-one vertex separating the `abar` returns
/// from the `bbar` returns.
pub fn phi3_fixed_to_transit(w: &LabeledPath) -> Result<LabeledPath, TransformError> {
    models::check_valid(ModelId::R3_2, w).map_err(|e| TransformError::NotR3_2(e.to_string()))?;
    let case = five_case_factorize(w)?;
    if case.case_id != 5 {
        return Err(TransformError::NotInImage("not a fixed point: bad step present".into()));
    }
    let heights = w.path.heights();
    let first_beta = w.step_labels.iter().position(|&l| l == StepLabel::Beta);
    let mark = match first_beta {
        None => w.len(),
        Some(x) => (0..=x)
            .rev()
            .find(|&v| heights[v] == 1)
            .expect("path starts at height one"),
    };
    let out = models::r4_element(w.path.clone(), mark)?;
    if out.step_labels != w.step_labels {
        return Err(TransformError::NotInImage(
            "fixed-point labels disagree with the one-transit convention".into(),
        ));
    }
    Ok(out)
}
