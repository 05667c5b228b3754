//! Lattice path data model and structural factorisations.
//!
//! A [`Path`] is a start height plus a sequence of integer rises; every model
//! in [`crate::models`] is a view over it.  Heights are never stored, always
//! derived, and live on the non-negative integers.  Steps are indexed from 1
//! and vertices from 0, so step `i` joins vertex `i-1` to vertex `i`.
//!
//! A [`LabeledPath`] decorates a path with per-step weight labels, per-vertex
//! labels, an optional marked vertex and an optional dividing line.  Signs are
//! always derived from the labels and boundary weight, never stored.
//!
//! The factorisations at the bottom of the module are the structural
//! decompositions the bijections and involutions are built on:
//!
//! * [`d_factorize`] — a one-transit path into elevated Dyck factors at its
//!   returns to height one, split at the marked vertex;
//! * [`j_factorize`] — a jump path into the nested `J_k` factor tree;
//! * [`b_factorize`] — an odd-to-odd excursion into prefix descent factors,
//!   the bridge `B` between the extreme height-one vertices, and suffix
//!   ascent factors;
//! * [`five_case_factorize`] — the bad-step case split of an expanded
//!   crossing-weighted path.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::symbolic::Polynomial;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("syntax error in path word: {0}")]
    SyntaxError(String),
    #[error("height violation: vertex {vertex} would have height {height}")]
    HeightViolation { vertex: usize, height: i64 },
    #[error("bad rise {rise} at step {step}: rises are -1 or odd and >= 1")]
    BadRise { step: usize, rise: i64 },
    #[error("not a one-transit path: {0}")]
    NotOneTransit(String),
    #[error("parity violation: even step {0} is not a down step")]
    ParityViolation(usize),
    #[error("dangling jump factor at step {0}: factor not closed by a down step")]
    DanglingFactor(usize),
    #[error("no height-one vertex")]
    NoHeightOneVertex,
    #[error("malformed weights: {0}")]
    MalformedWeights(String),
    #[error("bad mark or divider: {0}")]
    BadDecoration(String),
}

/// A lattice path on the upper half grid: a start height and a sequence of
/// rises, each `-1` or odd and `>= 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    start_height: i64,
    rises: Vec<i64>,
}

impl Path {
    pub fn new(start_height: i64, rises: Vec<i64>) -> Result<Self, PathError> {
        if start_height < 0 {
            return Err(PathError::HeightViolation { vertex: 0, height: start_height });
        }
        let mut h = start_height;
        for (i, &r) in rises.iter().enumerate() {
            if r != -1 && (r < 1 || r % 2 == 0) {
                return Err(PathError::BadRise { step: i + 1, rise: r });
            }
            h += r;
            if h < 0 {
                return Err(PathError::HeightViolation { vertex: i + 1, height: h });
            }
        }
        Ok(Path { start_height, rises })
    }

    pub fn empty(start_height: i64) -> Self {
        Path::new(start_height, Vec::new()).expect("non-negative start height")
    }

    pub fn start_height(&self) -> i64 {
        self.start_height
    }

    pub fn rises(&self) -> &[i64] {
        &self.rises
    }

    pub fn len(&self) -> usize {
        self.rises.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rises.is_empty()
    }

    /// Vertex heights; length `len() + 1`, first entry the start height.
    pub fn heights(&self) -> Vec<i64> {
        let mut hs = Vec::with_capacity(self.rises.len() + 1);
        let mut h = self.start_height;
        hs.push(h);
        for &r in &self.rises {
            h += r;
            hs.push(h);
        }
        hs
    }

    pub fn end_height(&self) -> i64 {
        self.start_height + self.rises.iter().sum::<i64>()
    }

    pub fn min_height(&self) -> i64 {
        self.heights().into_iter().min().unwrap()
    }

    /// All rises in `{-1, +1}`.
    pub fn is_plus_minus_one(&self) -> bool {
        self.rises.iter().all(|&r| r == 1 || r == -1)
    }

    /// Vertex indices at the given height.
    pub fn vertices_at_height(&self, h: i64) -> Vec<usize> {
        self.heights()
            .into_iter()
            .enumerate()
            .filter(|&(_, height)| height == h)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Parses the word grammar `<height> ":" (u | d | j<odd>)*`.
///
/// `u` is a unit up step, `d` a unit down step and `j<r>` an odd jump of rise
/// `r` (so `j1` is an alias for `u`).
///
/// ```
/// use asep_core::pathcore::parse_word;
///
/// let p = parse_word("3: d d j3 d d").unwrap();
/// assert_eq!(p.heights(), vec![3, 2, 1, 4, 3, 2]);
/// ```
pub fn parse_word(text: &str) -> Result<Path, PathError> {
    let (head, tail) = text
        .split_once(':')
        .ok_or_else(|| PathError::SyntaxError(format!("missing ':' in {text:?}")))?;
    let start_height: i64 = head
        .trim()
        .parse()
        .map_err(|_| PathError::SyntaxError(format!("bad start height {head:?}")))?;
    let mut rises = Vec::new();
    for tok in tail.split_whitespace() {
        let rise = match tok {
            "u" => 1,
            "d" => -1,
            _ => {
                let r: i64 = tok
                    .strip_prefix('j')
                    .and_then(|n| n.parse().ok())
                    .ok_or_else(|| PathError::SyntaxError(format!("bad step token {tok:?}")))?;
                if r < 1 || r % 2 == 0 {
                    return Err(PathError::SyntaxError(format!("bad jump height in {tok:?}")));
                }
                r
            }
        };
        rises.push(rise);
    }
    Path::new(start_height, rises)
}

/// Canonical text form; inverse of [`parse_word`] on its own output.
pub fn format_word(p: &Path) -> String {
    p.to_string()
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.start_height)?;
        for &r in &self.rises {
            match r {
                1 => write!(f, " u")?,
                -1 => write!(f, " d")?,
                _ => write!(f, " j{}", r)?,
            }
        }
        Ok(())
    }
}

/// Weight tag attached to a step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StepLabel {
    Unit,
    Alpha,
    Beta,
    AlphaBetaPos,
    AlphaBetaNeg,
    Kappa2,
    /// A `bbar`-weighted jump step leaving height one.
    BetaJump,
}

impl StepLabel {
    pub fn weight(self) -> Polynomial {
        use crate::symbolic::Var;
        let ab = || Polynomial::var(Var::Abar).mul(&Polynomial::var(Var::Bbar));
        match self {
            StepLabel::Unit => Polynomial::one(),
            StepLabel::Alpha => Polynomial::var(Var::Abar),
            StepLabel::Beta | StepLabel::BetaJump => Polynomial::var(Var::Bbar),
            StepLabel::AlphaBetaPos => ab(),
            StepLabel::AlphaBetaNeg => ab().neg(),
            StepLabel::Kappa2 => Polynomial::var(Var::Kappa).pow(2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StepLabel::Unit => "unit",
            StepLabel::Alpha => "alpha",
            StepLabel::Beta => "beta",
            StepLabel::AlphaBetaPos => "alphabeta_pos",
            StepLabel::AlphaBetaNeg => "alphabeta_neg",
            StepLabel::Kappa2 => "kappa2",
            StepLabel::BetaJump => "beta_jump",
        }
    }
}

/// Weight tag attached to a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexLabel {
    Plus1,
    Minus1,
    Alpha,
    Beta,
    CMark,
    DMark,
}

impl VertexLabel {
    pub fn weight(self) -> Polynomial {
        use crate::symbolic::Var;
        match self {
            VertexLabel::Plus1 => Polynomial::one(),
            VertexLabel::Minus1 => Polynomial::constant(-1),
            VertexLabel::Alpha => Polynomial::var(Var::Abar),
            VertexLabel::Beta => Polynomial::var(Var::Bbar),
            VertexLabel::CMark => Polynomial::var(Var::C),
            VertexLabel::DMark => Polynomial::var(Var::D),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            VertexLabel::Plus1 => "plus1",
            VertexLabel::Minus1 => "minus1",
            VertexLabel::Alpha => "alpha",
            VertexLabel::Beta => "beta",
            VertexLabel::CMark => "c_mark",
            VertexLabel::DMark => "d_mark",
        }
    }
}

/// A path decorated with weight labels, an optional marked vertex, an
/// optional dividing line and a boundary weight.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabeledPath {
    pub path: Path,
    /// One label per step.
    pub step_labels: Vec<StepLabel>,
    /// Sparse vertex labels.
    pub vertex_labels: BTreeMap<usize, VertexLabel>,
    /// The dotted vertex.
    pub mark: Option<usize>,
    /// The dividing line, stored as the vertex it passes through.
    pub divider: Option<usize>,
    /// Weight of the initial/final vertices.
    pub boundary_weight: Polynomial,
}

impl LabeledPath {
    /// A bare path: unit step labels, no decorations, boundary weight one.
    pub fn plain(path: Path) -> Self {
        let n = path.len();
        LabeledPath {
            path,
            step_labels: vec![StepLabel::Unit; n],
            vertex_labels: BTreeMap::new(),
            mark: None,
            divider: None,
            boundary_weight: Polynomial::one(),
        }
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }

    /// Boundary weight times all step and vertex label weights.
    pub fn weight(&self) -> Polynomial {
        let mut w = self.boundary_weight.clone();
        for &l in &self.step_labels {
            if l != StepLabel::Unit {
                w = w.mul(&l.weight());
            }
        }
        for &l in self.vertex_labels.values() {
            if l != VertexLabel::Plus1 {
                w = w.mul(&l.weight());
            }
        }
        w
    }

    /// Sign of the (single signed monomial) weight.
    ///
    /// Panics if the weight is not a non-zero monomial; elements of signed
    /// sets always are.
    pub fn sign(&self) -> i8 {
        self.weight()
            .monomial_sign()
            .expect("signed-set element weight must be a single signed monomial")
    }

    /// JSON wire form used by the command line tools.
    pub fn to_json(&self) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert("start_height".into(), json!(self.path.start_height()));
        obj.insert("rises".into(), json!(self.path.rises()));
        obj.insert(
            "step_labels".into(),
            json!(self.step_labels.iter().map(|l| l.name()).collect::<Vec<_>>()),
        );
        let vl: BTreeMap<String, &str> = self
            .vertex_labels
            .iter()
            .map(|(v, l)| (v.to_string(), l.name()))
            .collect();
        obj.insert("vertex_labels".into(), json!(vl));
        if let Some(m) = self.mark {
            obj.insert("mark".into(), json!(m));
        }
        if let Some(d) = self.divider {
            obj.insert("divider".into(), json!(d));
        }
        obj.insert("boundary_weight".into(), json!(self.boundary_weight.to_string()));
        Value::Object(obj)
    }
}

/// Elevated Dyck factors of a one-transit path, split at the marked vertex.
///
/// Each factor is stored as the rise sequence of its interior, i.e. the part
/// strictly between the opening up step and the closing down step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DFactorization {
    /// Factors whose closing down step lies at or before the mark.
    pub alpha_factors: Vec<Vec<i64>>,
    /// Factors entirely to the right of the mark.
    pub beta_factors: Vec<Vec<i64>>,
}

impl DFactorization {
    /// Reassembles the factored path's rises: `u D d` per factor.
    pub fn reconcatenate(&self) -> Vec<i64> {
        let mut rises = Vec::new();
        for interior in self.alpha_factors.iter().chain(&self.beta_factors) {
            rises.push(1);
            rises.extend_from_slice(interior);
            rises.push(-1);
        }
        rises
    }
}

/// Factorises a one-transit path at its returns to height one.
///
/// The path must use unit steps, run from height one to height one without
/// dipping below height one, and the mark must sit on a height-one vertex.
pub fn d_factorize(p: &Path, mark: usize) -> Result<DFactorization, PathError> {
    if !p.is_plus_minus_one() || p.start_height() != 1 || p.end_height() != 1 || p.min_height() < 1
    {
        return Err(PathError::NotOneTransit(format!("{p}")));
    }
    let heights = p.heights();
    if mark >= heights.len() || heights[mark] != 1 {
        return Err(PathError::BadDecoration(format!(
            "mark {mark} is not a height-one vertex of {p}"
        )));
    }
    let mut alpha_factors = Vec::new();
    let mut beta_factors = Vec::new();
    let mut open = 0usize; // vertex opening the current factor
    for v in 1..heights.len() {
        if heights[v] == 1 {
            let interior = p.rises()[open + 1..v - 1].to_vec();
            if v <= mark {
                alpha_factors.push(interior);
            } else {
                beta_factors.push(interior);
            }
            open = v;
        }
    }
    Ok(DFactorization { alpha_factors, beta_factors })
}

/// A factor of the recursive jump factorisation.
///
/// A non-empty `J_k` opens with a jump of rise `2k+1` and contains exactly
/// `k+1` children, each wrapped `d <child> d` except the last, which is closed
/// by the enclosing context.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum JFactor {
    Empty,
    Jump { k: usize, children: Vec<JFactor> },
}

impl JFactor {
    pub fn is_empty(&self) -> bool {
        matches!(self, JFactor::Empty)
    }

    pub fn k(&self) -> Option<usize> {
        match self {
            JFactor::Empty => None,
            JFactor::Jump { k, .. } => Some(*k),
        }
    }

    pub fn children(&self) -> &[JFactor] {
        match self {
            JFactor::Empty => &[],
            JFactor::Jump { children, .. } => children,
        }
    }

    /// Recursion level: 0 for the empty factor, one more than the deepest
    /// child otherwise.
    pub fn level(&self) -> usize {
        match self {
            JFactor::Empty => 0,
            JFactor::Jump { children, .. } => {
                1 + children.iter().map(JFactor::level).max().unwrap_or(0)
            }
        }
    }

    /// Number of tree nodes on the longest root-to-leaf chain.
    pub fn depth(&self) -> usize {
        match self {
            JFactor::Empty => 1,
            JFactor::Jump { children, .. } => {
                1 + children.iter().map(JFactor::depth).max().unwrap_or(0)
            }
        }
    }

    /// Rises of the factor's own word: the jump, then `d <child> d` per child
    /// with the final closing down step omitted.
    pub fn word_rises(&self) -> Vec<i64> {
        match self {
            JFactor::Empty => Vec::new(),
            JFactor::Jump { k, children } => {
                let mut rises = vec![2 * (*k as i64) + 1];
                for (j, child) in children.iter().enumerate() {
                    rises.push(-1);
                    rises.extend(child.word_rises());
                    if j + 1 < children.len() {
                        rises.push(-1);
                    }
                }
                rises
            }
        }
    }

    pub fn step_count(&self) -> usize {
        self.word_rises().len()
    }
}

/// The jump factor tree of a path, rooted at the synthetic factor formed by
/// descending from the start height.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JFactorization {
    /// Root factor `J_k` with `k = (start_height - 1) / 2`; its children are
    /// the top-level groups of the path.
    pub root: JFactor,
}

impl JFactorization {
    pub fn groups(&self) -> &[JFactor] {
        self.root.children()
    }

    /// Rebuilds the original path's rises from the tree.
    ///
    /// The root word is `jump(2k+1) d <path>`, so the path is everything after
    /// the first two entries.
    pub fn reconcatenate(&self) -> Vec<i64> {
        let w = self.root.word_rises();
        w[2..].to_vec()
    }
}

/// Computes the recursive jump factorisation of a jump path.
///
/// The path must start at an odd height, end at height one, keep every even
/// step a down step and every odd step a down step or an odd jump up, and
/// stay above height zero.
pub fn j_factorize(p: &Path) -> Result<JFactorization, PathError> {
    if p.start_height() % 2 != 1 || p.end_height() != 1 || p.min_height() < 1 {
        return Err(PathError::DanglingFactor(0));
    }
    for (i, &r) in p.rises().iter().enumerate() {
        let step = i + 1;
        if step % 2 == 0 && r != -1 {
            return Err(PathError::ParityViolation(step));
        }
    }
    let k = ((p.start_height() - 1) / 2) as usize;
    // Wrapped word: d u_{2k+1} d <path> d, starting at height 2.  The root
    // factor spans everything between the outer down steps.
    let mut rises = vec![2 * k as i64 + 1, -1];
    rises.extend_from_slice(p.rises());
    let mut pos = 0usize;
    let root = parse_jump_factor(&rises, &mut pos)?;
    if pos != rises.len() {
        return Err(PathError::DanglingFactor(pos));
    }
    Ok(JFactorization { root })
}

/// Parses a complete (possibly empty) `J` factor word.
pub(crate) fn parse_jump_word(rises: &[i64]) -> Result<JFactor, PathError> {
    let mut pos = 0usize;
    let f = parse_jump_factor(rises, &mut pos)?;
    if pos != rises.len() {
        return Err(PathError::DanglingFactor(pos + 1));
    }
    Ok(f)
}

/// Parses one `J` factor starting at `pos`; consumes nothing when the factor
/// is empty (the next step already belongs to the enclosing context).
fn parse_jump_factor(rises: &[i64], pos: &mut usize) -> Result<JFactor, PathError> {
    if *pos >= rises.len() || rises[*pos] == -1 {
        return Ok(JFactor::Empty);
    }
    let jump = rises[*pos];
    debug_assert!(jump >= 1 && jump % 2 == 1);
    let k = ((jump - 1) / 2) as usize;
    *pos += 1;
    let mut children = Vec::with_capacity(k + 1);
    for j in 0..=k {
        if *pos >= rises.len() || rises[*pos] != -1 {
            return Err(PathError::DanglingFactor(*pos + 1));
        }
        *pos += 1; // opening down step
        children.push(parse_jump_factor(rises, pos)?);
        if j < k {
            if *pos >= rises.len() || rises[*pos] != -1 {
                return Err(PathError::DanglingFactor(*pos + 1));
            }
            *pos += 1; // closing down step
        }
    }
    Ok(JFactor::Jump { k, children })
}

/// The bridge factorisation of an odd-to-odd excursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BFactorization {
    /// Elevated Dyck factors of the descent prefix, outermost first; each is
    /// followed by one down step.
    pub prefix: Vec<Vec<i64>>,
    /// Rises of the bridge between the extreme height-one vertices.
    pub b: Vec<i64>,
    /// Vertex index where the bridge starts (the leftmost height-one vertex).
    pub b_start: usize,
    /// Vertex index where the bridge ends (the rightmost height-one vertex).
    pub b_end: usize,
    /// Elevated Dyck factors of the ascent suffix, innermost first; each is
    /// preceded by one up step.
    pub suffix: Vec<Vec<i64>>,
}

impl BFactorization {
    pub fn reconcatenate(&self) -> Vec<i64> {
        let mut rises = Vec::new();
        for d in &self.prefix {
            rises.extend_from_slice(d);
            rises.push(-1);
        }
        rises.extend_from_slice(&self.b);
        for d in &self.suffix {
            rises.push(1);
            rises.extend_from_slice(d);
        }
        rises
    }
}

/// Factorises a unit-step path from odd height to odd height around the span
/// between its leftmost and rightmost height-one vertices.
pub fn b_factorize(p: &Path) -> Result<BFactorization, PathError> {
    if !p.is_plus_minus_one() || p.start_height() % 2 != 1 || p.end_height() % 2 != 1 {
        return Err(PathError::MalformedWeights(format!(
            "not an odd-to-odd unit-step path: {p}"
        )));
    }
    let heights = p.heights();
    let ones = p.vertices_at_height(1);
    let (&lv, &rv) = match (ones.first(), ones.last()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(PathError::NoHeightOneVertex),
    };

    // Descent prefix: repeatedly cut at the first step below the current
    // base height.
    let mut prefix = Vec::new();
    let mut pos = 0usize;
    let mut base = p.start_height();
    while base > 1 {
        let t = (pos + 1..=lv)
            .find(|&v| heights[v] < base)
            .expect("prefix must cross each level once");
        prefix.push(p.rises()[pos..t - 1].to_vec());
        pos = t;
        base -= 1;
    }
    debug_assert_eq!(pos, lv);

    let b = p.rises()[lv..rv].to_vec();

    // Ascent suffix: repeatedly cut at the last upward crossing into the
    // current base height, working right to left.
    let mut suffix_rev = Vec::new();
    let mut end = p.len();
    let mut top = p.end_height();
    while top > 1 {
        let t = (rv + 1..=end)
            .rev()
            .find(|&s| heights[s - 1] == top - 1 && heights[s] == top)
            .expect("suffix must cross each level once");
        suffix_rev.push(p.rises()[t..end].to_vec());
        end = t - 1;
        top -= 1;
    }
    debug_assert_eq!(end, rv);
    suffix_rev.reverse();

    Ok(BFactorization { prefix, b, b_start: lv, b_end: rv, suffix: suffix_rev })
}

/// Outcome of the bad-step case analysis on an expanded crossing-weighted
/// path.  Exactly one case applies to any valid input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiveCase {
    /// 1: alpha-bad step after a beta step; 2: negative pair weight preceded
    /// by a down step; 3: negative pair weight preceded by an up step; 4:
    /// positive pair weight on an up step from height zero; 5: no bad step.
    pub case_id: u8,
    /// 1-based index of the leftmost bad step, cases 1-4.
    pub bad_step: Option<usize>,
    /// The step the involution relocates or swaps with: the rightmost
    /// beta-weighted down step left of the bad step (case 1), the up step
    /// opening the unweighted factor before the bad step (case 2), or the
    /// step immediately before the bad step (cases 3 and 4).
    pub partner_step: Option<usize>,
    /// Step span `(first, last)` of the unweighted elevated factor between
    /// partner and bad step, cases 1 and 2; empty when `first > last`.
    pub m_span: Option<(usize, usize)>,
    /// First step of the trailing factor, cases 1-4.
    pub l_start: Option<usize>,
    /// Vertex separating the pure-alpha prefix from the beta block.
    pub ab_boundary_vertex: usize,
}

/// Validates the label structure of an expanded crossing-weighted path and
/// locates its leftmost bad step.
///
/// Weighted steps are: `alpha`, `beta` or negative pair labels on down steps
/// from height two to one, and positive pair labels on up steps from height
/// zero to one.  A bad step is the leftmost `±alpha*beta` step, or the
/// leftmost `alpha` step to the right of some `beta` step, whichever comes
/// first.
pub fn five_case_factorize(w: &LabeledPath) -> Result<FiveCase, PathError> {
    let p = &w.path;
    if !p.is_plus_minus_one() || p.start_height() != 1 || p.end_height() != 1 {
        return Err(PathError::MalformedWeights(format!("not a unit excursion: {p}")));
    }
    let heights = p.heights();
    for (i, &label) in w.step_labels.iter().enumerate() {
        let (from, to) = (heights[i], heights[i + 1]);
        let expect_label = if from == 2 && to == 1 {
            matches!(
                label,
                StepLabel::Alpha | StepLabel::Beta | StepLabel::AlphaBetaNeg
            )
        } else if from == 0 && to == 1 {
            label == StepLabel::AlphaBetaPos
        } else {
            label == StepLabel::Unit
        };
        if !expect_label {
            return Err(PathError::MalformedWeights(format!(
                "label {} on step {} ({} -> {})",
                label.name(),
                i + 1,
                from,
                to
            )));
        }
    }

    let pair_bad = w
        .step_labels
        .iter()
        .position(|&l| l == StepLabel::AlphaBetaPos || l == StepLabel::AlphaBetaNeg)
        .map(|i| i + 1);
    let mut seen_beta = false;
    let mut alpha_bad = None;
    for (i, &l) in w.step_labels.iter().enumerate() {
        match l {
            StepLabel::Beta => seen_beta = true,
            StepLabel::Alpha if seen_beta => {
                alpha_bad = Some(i + 1);
                break;
            }
            _ => {}
        }
    }

    let bad = match (pair_bad, alpha_bad) {
        (None, None) => None,
        (Some(x), None) => Some(x),
        (None, Some(x)) => Some(x),
        (Some(x), Some(y)) => Some(x.min(y)),
    };

    let boundary_limit = bad.map(|x| x - 1).unwrap_or(w.len());
    let first_beta = w.step_labels[..boundary_limit]
        .iter()
        .position(|&l| l == StepLabel::Beta)
        .map(|i| i + 1);
    let last_alpha_before_beta = match first_beta {
        Some(fb) => w.step_labels[..fb - 1]
            .iter()
            .rposition(|&l| l == StepLabel::Alpha)
            .map(|i| i + 1),
        None => w.step_labels[..boundary_limit]
            .iter()
            .rposition(|&l| l == StepLabel::Alpha)
            .map(|i| i + 1),
    };
    let ab_boundary_vertex = last_alpha_before_beta.unwrap_or(0);

    let Some(x) = bad else {
        return Ok(FiveCase {
            case_id: 5,
            bad_step: None,
            partner_step: None,
            m_span: None,
            l_start: None,
            ab_boundary_vertex,
        });
    };

    let label = w.step_labels[x - 1];
    let case = match label {
        StepLabel::Alpha => {
            // Rightmost beta down step before the bad alpha step.
            let y = w.step_labels[..x - 1]
                .iter()
                .rposition(|&l| l == StepLabel::Beta)
                .map(|i| i + 1)
                .expect("alpha-bad step requires an earlier beta step");
            FiveCase {
                case_id: 1,
                bad_step: Some(x),
                partner_step: Some(y),
                m_span: Some((y + 2, x - 1)),
                l_start: Some(x + 1),
                ab_boundary_vertex,
            }
        }
        StepLabel::AlphaBetaNeg => {
            if p.rises()[x - 2] == -1 {
                // Preceded by a down step: locate the up step that opens the
                // elevated factor closed by that down step.
                let z = (1..x - 1)
                    .rev()
                    .find(|&s| heights[s - 1] == 2)
                    .expect("path starts at height one, below the factor");
                FiveCase {
                    case_id: 2,
                    bad_step: Some(x),
                    partner_step: Some(z),
                    m_span: Some((z + 1, x - 2)),
                    l_start: Some(x + 1),
                    ab_boundary_vertex,
                }
            } else {
                FiveCase {
                    case_id: 3,
                    bad_step: Some(x),
                    partner_step: Some(x - 1),
                    m_span: None,
                    l_start: Some(x + 1),
                    ab_boundary_vertex,
                }
            }
        }
        StepLabel::AlphaBetaPos => FiveCase {
            case_id: 4,
            bad_step: Some(x),
            partner_step: Some(x - 1),
            m_span: None,
            l_start: Some(x + 1),
            ab_boundary_vertex,
        },
        _ => unreachable!("bad step carries a weighted label"),
    };
    Ok(case)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(word: &str) -> Path {
        parse_word(word).unwrap()
    }

    #[test]
    fn heights_direct_sum() {
        assert_eq!(path("1: u d").heights(), vec![1, 2, 1]);
    }

    #[test]
    fn height_violation_at_construction() {
        assert_eq!(
            Path::new(0, vec![-1]),
            Err(PathError::HeightViolation { vertex: 1, height: -1 })
        );
        assert!(matches!(parse_word("0: d"), Err(PathError::HeightViolation { .. })));
    }

    #[test]
    fn bad_rise_rejected() {
        assert_eq!(
            Path::new(1, vec![2]),
            Err(PathError::BadRise { step: 1, rise: 2 })
        );
    }

    #[test]
    fn word_round_trip() {
        let w = "7: u d d d j3 d d d u d d d d d u d j3 d u d d d";
        let p = path(w);
        assert_eq!(format_word(&p), w);
        // j1 is an alias for u.
        let q = path("7: j1 d d d j3 d d d j1 d d d d d j1 d j3 d j1 d d d");
        assert_eq!(p, q);
    }

    /// The 22-step jump path used as the running example throughout.
    pub(crate) fn example_jump_path() -> Path {
        path("7: u d d d j3 d d d u d d d d d u d j3 d u d d d")
    }

    #[test]
    fn example_path_ends_at_height_one() {
        let p = example_jump_path();
        assert_eq!(p.len(), 22);
        assert_eq!(p.heights().last(), Some(&1));
        assert_eq!(p.min_height(), 1);
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse_word("1 u d"), Err(PathError::SyntaxError(_))));
        assert!(matches!(parse_word("x: u"), Err(PathError::SyntaxError(_))));
        assert!(matches!(parse_word("1: j2"), Err(PathError::SyntaxError(_))));
        assert!(matches!(parse_word("1: v"), Err(PathError::SyntaxError(_))));
    }

    #[test]
    fn d_factorize_trivial() {
        let f = d_factorize(&path("1: u d"), 0).unwrap();
        assert!(f.alpha_factors.is_empty());
        assert_eq!(f.beta_factors, vec![Vec::<i64>::new()]);
    }

    #[test]
    fn d_factorize_mark_at_end() {
        let p = path("1: u u d d u d");
        let f = d_factorize(&p, 6).unwrap();
        assert_eq!(f.alpha_factors, vec![vec![1, -1], vec![]]);
        assert!(f.beta_factors.is_empty());
        assert_eq!(f.reconcatenate(), p.rises());
    }

    #[test]
    fn d_factorize_rejects_transit_violations() {
        assert!(matches!(
            d_factorize(&path("1: d u u d"), 0),
            Err(PathError::NotOneTransit(_))
        ));
        assert!(matches!(
            d_factorize(&path("1: u d"), 1),
            Err(PathError::BadDecoration(_))
        ));
    }

    #[test]
    fn j_factorize_empty_path() {
        let f = j_factorize(&Path::empty(1)).unwrap();
        assert_eq!(f.groups(), &[JFactor::Empty]);
        assert_eq!(f.root.k(), Some(0));
    }

    #[test]
    fn j_factorize_single_jump() {
        let f = j_factorize(&path("1: u d")).unwrap();
        assert_eq!(f.groups().len(), 1);
        let g = &f.groups()[0];
        assert_eq!(g.k(), Some(0));
        assert_eq!(g.children(), &[JFactor::Empty]);
        assert_eq!(g.depth(), 2);
        assert_eq!(g.level(), 1);
        assert_eq!(f.reconcatenate(), path("1: u d").rises());
    }

    #[test]
    fn j_factorize_example_tree() {
        let f = j_factorize(&example_jump_path()).unwrap();
        let root = &f.root;
        assert_eq!(root.k(), Some(3));
        let ch = root.children();
        assert_eq!(ch.len(), 4);
        // First group: a k=0 factor over an empty child.
        assert_eq!(ch[0], JFactor::Jump { k: 0, children: vec![JFactor::Empty] });
        // Second group: a k=1 factor over [empty, k=0 factor].
        assert_eq!(
            ch[1],
            JFactor::Jump {
                k: 1,
                children: vec![
                    JFactor::Empty,
                    JFactor::Jump { k: 0, children: vec![JFactor::Empty] }
                ]
            }
        );
        assert_eq!(ch[2], JFactor::Empty);
        // Fourth group: k=0 over a k=1 subtree.
        assert_eq!(
            ch[3],
            JFactor::Jump {
                k: 0,
                children: vec![JFactor::Jump {
                    k: 1,
                    children: vec![
                        JFactor::Jump { k: 0, children: vec![JFactor::Empty] },
                        JFactor::Empty
                    ]
                }]
            }
        );
        assert_eq!(f.reconcatenate(), example_jump_path().rises());
    }

    #[test]
    fn j_factor_words_have_even_length() {
        for word in ["1: u d", "3: d d", "5: d d d d", "1: j3 d d d u d"] {
            let f = j_factorize(&path(word)).unwrap();
            fn check(j: &JFactor) {
                assert_eq!(j.step_count() % 2, 0);
                for c in j.children() {
                    check(c);
                }
            }
            check(&f.root);
            assert_eq!(f.reconcatenate(), path(word).rises());
        }
    }

    #[test]
    fn j_factorize_rejects_bad_parity() {
        // Even step that is an up step.
        assert!(matches!(
            j_factorize(&path("3: d u u d d d")),
            Err(PathError::ParityViolation(2))
        ));
    }

    #[test]
    fn b_factorize_whole_path_is_bridge() {
        let f = b_factorize(&path("1: u u d d")).unwrap();
        assert!(f.prefix.is_empty());
        assert_eq!(f.b, vec![1, 1, -1, -1]);
        assert!(f.suffix.is_empty());
        assert_eq!((f.b_start, f.b_end), (0, 4));
    }

    #[test]
    fn b_factorize_descent_prefix() {
        let p = path("3: d d d u");
        let f = b_factorize(&p).unwrap();
        assert_eq!(f.prefix, vec![Vec::<i64>::new(), Vec::<i64>::new()]);
        assert_eq!(f.b, vec![-1, 1]);
        assert_eq!((f.b_start, f.b_end), (2, 4));
        assert!(f.suffix.is_empty());
        assert_eq!(f.reconcatenate(), p.rises());
    }

    #[test]
    fn b_factorize_bridge_span_scan() {
        // Bridge between the extreme height-one vertices.
        let p = path("3: d d u d");
        let f = b_factorize(&p).unwrap();
        assert_eq!((f.b_start, f.b_end), (2, 4));
        assert_eq!(f.b, vec![1, -1]);
        assert_eq!(f.reconcatenate(), p.rises());

        // A path whose only height-one vertex is its last.
        let q = path("3: d u d d");
        let g = b_factorize(&q).unwrap();
        assert_eq!((g.b_start, g.b_end), (4, 4));
        assert!(g.b.is_empty());
        assert_eq!(g.prefix.len(), 2);
        assert_eq!(g.reconcatenate(), q.rises());
    }

    #[test]
    fn b_factorize_requires_height_one() {
        assert_eq!(b_factorize(&path("3: u d d u")), Err(PathError::NoHeightOneVertex));
    }

    fn labeled(word: &str, labels: &[(usize, StepLabel)]) -> LabeledPath {
        let mut w = LabeledPath::plain(path(word));
        for &(step, l) in labels {
            w.step_labels[step - 1] = l;
        }
        w
    }

    #[test]
    fn five_cases_examples() {
        // All alpha labels left of all beta labels, no pair labels.
        let w = labeled(
            "1: u d u d",
            &[(2, StepLabel::Alpha), (4, StepLabel::Beta)],
        );
        assert_eq!(five_case_factorize(&w).unwrap().case_id, 5);

        // Alpha after beta.
        let w = labeled(
            "1: u d u d",
            &[(2, StepLabel::Beta), (4, StepLabel::Alpha)],
        );
        let c = five_case_factorize(&w).unwrap();
        assert_eq!(c.case_id, 1);
        assert_eq!(c.bad_step, Some(4));
        assert_eq!(c.partner_step, Some(2));

        // Positive pair weight on an up step from height zero.
        let w = labeled(
            "1: d u u d",
            &[(2, StepLabel::AlphaBetaPos), (4, StepLabel::Beta)],
        );
        let c = five_case_factorize(&w).unwrap();
        assert_eq!(c.case_id, 4);
        assert_eq!(c.bad_step, Some(2));

        // Negative pair weight preceded by an up step.
        let w = labeled("1: u d u d", &[(2, StepLabel::AlphaBetaNeg), (4, StepLabel::Beta)]);
        let c = five_case_factorize(&w).unwrap();
        assert_eq!(c.case_id, 3);

        // Negative pair weight preceded by a down step.
        let w = labeled(
            "1: u u d d u d",
            &[(4, StepLabel::AlphaBetaNeg), (6, StepLabel::Beta)],
        );
        let c = five_case_factorize(&w).unwrap();
        assert_eq!(c.case_id, 2);
        assert_eq!(c.partner_step, Some(2));
        assert_eq!(c.m_span, Some((3, 2)));
    }

    #[test]
    fn five_case_rejects_misplaced_labels() {
        // Negative pair label somewhere other than a two-to-one down step.
        let w = labeled("1: u u d d", &[(1, StepLabel::AlphaBetaNeg)]);
        assert!(matches!(
            five_case_factorize(&w),
            Err(PathError::MalformedWeights(_))
        ));
    }
}
