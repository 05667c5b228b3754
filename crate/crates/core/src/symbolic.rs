//! Exact arithmetic for path weights.
//!
//! All weights live in the polynomial ring `Z[abar, bbar, kappa, c, d]` where
//! the five variables are tied together by
//!
//! ```text
//! c = abar - 1,   d = bbar - 1,   kappa^2 = abar + bbar - abar*bbar = 1 - c*d.
//! ```
//!
//! `abar` and `bbar` form the canonical basis; `kappa`, `c` and `d` are
//! staging variables that [`Polynomial::canonicalize`] eliminates.  `kappa`
//! only ever has a meaning through its square, so canonicalisation rejects
//! polynomials carrying an odd power of it.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Number of formal variables.
pub const NVARS: usize = 5;

/// A weight variable, in the fixed canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// `abar = 1/alpha`
    Abar,
    /// `bbar = 1/beta`
    Bbar,
    /// `kappa`, with `kappa^2 = abar + bbar - abar*bbar`
    Kappa,
    /// `c = abar - 1`
    C,
    /// `d = bbar - 1`
    D,
}

impl Var {
    /// All variables in canonical order.
    pub const ALL: [Var; NVARS] = [Var::Abar, Var::Bbar, Var::Kappa, Var::C, Var::D];

    pub fn index(self) -> usize {
        match self {
            Var::Abar => 0,
            Var::Bbar => 1,
            Var::Kappa => 2,
            Var::C => 3,
            Var::D => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::Abar => "abar",
            Var::Bbar => "bbar",
            Var::Kappa => "kappa",
            Var::C => "c",
            Var::D => "d",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymbolicError {
    /// A monomial carries an odd power of `kappa`; only `kappa^2` has a
    /// canonical value.
    #[error("odd kappa degree: monomial {0} cannot be canonicalized")]
    OddKappaDegree(String),
    /// An evaluation was missing an assignment for a variable that occurs.
    #[error("missing variable in assignment: {0}")]
    MissingVariable(Var),
    /// A malformed rational literal.
    #[error("bad rational literal: {0}")]
    BadRational(String),
}

/// Exponent vector of a single monomial, indexed per [`Var::ALL`].
///
/// Ordered lexicographically as words in the variable alphabet, so that e.g.
/// `1 < abar < abar^2 < abar*bbar < bbar`.  This is the term order used both
/// for storage and for the deterministic text form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub [u32; NVARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NVARS]);

    pub fn var(v: Var) -> Self {
        let mut e = [0; NVARS];
        e[v.index()] = 1;
        Monomial(e)
    }

    pub fn degree(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = [0; NVARS];
        for i in 0..NVARS {
            e[i] = self.0[i] + other.0[i];
        }
        Monomial(e)
    }

    fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        for i in 0..NVARS {
            if self.0[i] == other.0[i] {
                continue;
            }
            // The word with fewer copies of variable i either ends here
            // (making it a prefix, hence smaller) or continues with a later,
            // larger variable (making it larger).
            let (shorter, longer_is_self) = if self.0[i] < other.0[i] {
                (&self.0, false)
            } else {
                (&other.0, true)
            };
            let shorter_continues = shorter[i + 1..].iter().any(|&e| e > 0);
            let shorter_is_larger = shorter_continues;
            return match (shorter_is_larger, longer_is_self) {
                (false, false) => Ordering::Less,
                (false, true) => Ordering::Greater,
                (true, false) => Ordering::Greater,
                (true, true) => Ordering::Less,
            };
        }
        std::cmp::Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in Var::ALL {
            let e = self.degree(v);
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", v)?;
            } else {
                write!(f, "{}^{}", v, e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// An exact multivariate polynomial over the integers.
///
/// Stored as a map from exponent vector to non-zero coefficient; equality is
/// structural equality of the term map.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Polynomial::monomial(BigInt::from(c), Monomial::ONE)
    }

    pub fn var(v: Var) -> Self {
        Polynomial::monomial(BigInt::one(), Monomial::var(v))
    }

    pub fn monomial(coeff: BigInt, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(m, coeff);
        }
        Polynomial { terms }
    }

    /// `coeff * abar^a * bbar^b` — the shape of most path weights.
    pub fn ab_monomial(coeff: i64, a: u32, b: u32) -> Self {
        let mut e = [0; NVARS];
        e[0] = a;
        e[1] = b;
        Polynomial::monomial(BigInt::from(coeff), Monomial(e))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::ONE)
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    /// The single term of a monomial-valued polynomial, if it is one.
    pub fn single_term(&self) -> Option<(&Monomial, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Sign of a non-zero single-term polynomial: `+1` or `-1`.
    pub fn monomial_sign(&self) -> Option<i8> {
        self.single_term()
            .map(|(_, c)| if c.is_negative() { -1 } else { 1 })
    }

    /// Total degree in one variable.
    pub fn degree(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.degree(v)).max().unwrap_or(0)
    }

    pub fn uses_only(&self, allowed: &[Var]) -> bool {
        self.terms.keys().all(|m| {
            Var::ALL
                .iter()
                .all(|&v| m.degree(v) == 0 || allowed.contains(&v))
        })
    }

    pub fn coefficients_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    fn insert_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, k: i64) -> Polynomial {
        let k = BigInt::from(k);
        if k.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, c * &k)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut out = Polynomial::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Rewrites `c`, `d` and even powers of `kappa` into the `{abar, bbar}`
    /// basis, leaving at most a single stray factor of `kappa` per monomial.
    pub fn semi_canonicalize(&self) -> Polynomial {
        let c_sub = Polynomial::var(Var::Abar).sub(&Polynomial::one());
        let d_sub = Polynomial::var(Var::Bbar).sub(&Polynomial::one());
        let kappa_sq = Polynomial::var(Var::Abar)
            .add(&Polynomial::var(Var::Bbar))
            .sub(&Polynomial::var(Var::Abar).mul(&Polynomial::var(Var::Bbar)));

        let mut out = Polynomial::zero();
        for (m, coeff) in &self.terms {
            let ka = m.degree(Var::Kappa);
            let mut base = [0u32; NVARS];
            base[0] = m.degree(Var::Abar);
            base[1] = m.degree(Var::Bbar);
            base[2] = ka % 2;
            let mut term = Polynomial::monomial(coeff.clone(), Monomial(base));
            term = term.mul(&kappa_sq.pow(ka / 2));
            term = term.mul(&c_sub.pow(m.degree(Var::C)));
            term = term.mul(&d_sub.pow(m.degree(Var::D)));
            out = out.add(&term);
        }
        out
    }

    /// Full reduction to the canonical `{abar, bbar}` basis.
    ///
    /// Fails with [`SymbolicError::OddKappaDegree`] if some monomial carries
    /// an odd power of `kappa`: such a weight is malformed, since `kappa`
    /// only enters squared.
    ///
    /// ```
    /// use asep_core::symbolic::{Polynomial, Var};
    ///
    /// let kappa_sq = Polynomial::var(Var::Kappa).pow(2);
    /// assert_eq!(
    ///     kappa_sq.canonicalize().unwrap().to_string(),
    ///     "1*abar - 1*abar*bbar + 1*bbar",
    /// );
    /// ```
    pub fn canonicalize(&self) -> Result<Polynomial, SymbolicError> {
        for m in self.terms.keys() {
            if m.degree(Var::Kappa) % 2 == 1 {
                return Err(SymbolicError::OddKappaDegree(m.to_string()));
            }
        }
        Ok(self.semi_canonicalize())
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, assignment: &BTreeMap<Var, Rational>) -> Result<Rational, SymbolicError> {
        let mut total = BigRational::zero();
        for (m, coeff) in &self.terms {
            let mut val = BigRational::from(coeff.clone());
            for v in Var::ALL {
                let e = m.degree(v);
                if e == 0 {
                    continue;
                }
                let x = assignment
                    .get(&v)
                    .ok_or(SymbolicError::MissingVariable(v))?;
                for _ in 0..e {
                    val *= &x.0;
                }
            }
            total += val;
        }
        Ok(Rational(total))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_constant() {
                write!(f, "{}", mag)?;
            } else {
                write!(f, "{}*{}", mag, m)?;
            }
        }
        Ok(())
    }
}

/// An exact rational number, always reduced, denominator positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Rational {
        assert!(!self.is_zero(), "division by zero");
        Rational(self.0.recip())
    }

    pub fn add(&self, other: &Rational) -> Rational {
        Rational(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Rational) -> Rational {
        Rational(&self.0 - &other.0)
    }

    pub fn mul(&self, other: &Rational) -> Rational {
        Rational(&self.0 * &other.0)
    }
}

impl FromStr for Rational {
    type Err = SymbolicError;

    /// Parses `p`, `-p` or `p/q`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SymbolicError::BadRational(s.to_string());
        let mut parts = s.splitn(2, '/');
        let num: BigInt = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        let den: BigInt = match parts.next() {
            Some(d) => d.trim().parse().map_err(|_| bad())?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Shorthand used throughout: the `abar` variable as a polynomial.
pub fn abar() -> Polynomial {
    Polynomial::var(Var::Abar)
}

/// The `bbar` variable as a polynomial.
pub fn bbar() -> Polynomial {
    Polynomial::var(Var::Bbar)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kappa() -> Polynomial {
        Polynomial::var(Var::Kappa)
    }

    fn c() -> Polynomial {
        Polynomial::var(Var::C)
    }

    fn d() -> Polynomial {
        Polynomial::var(Var::D)
    }

    #[test]
    fn additive_inverse() {
        let p = abar().add(&bbar());
        let q = bbar().neg();
        assert_eq!(p.add(&q), abar());
    }

    #[test]
    fn distributes_over_staging_vars() {
        let lhs = Polynomial::one().add(&c()).mul(&Polynomial::one().add(&d()));
        let rhs = Polynomial::one()
            .add(&c())
            .add(&d())
            .add(&c().mul(&d()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn annihilator() {
        assert_eq!(abar().mul(&Polynomial::zero()), Polynomial::zero());
        assert!(abar().mul(&Polynomial::zero()).is_zero());
    }

    #[test]
    fn kappa_squared_canonical_value() {
        let got = kappa().pow(2).canonicalize().unwrap();
        let want = abar().add(&bbar()).sub(&abar().mul(&bbar()));
        assert_eq!(got, want);
    }

    fn z2_canonical() -> Polynomial {
        abar()
            .add(&bbar())
            .add(&abar().mul(&bbar()))
            .add(&abar().pow(2))
            .add(&bbar().pow(2))
    }

    #[test]
    fn cd_form_of_z2_canonicalizes() {
        // 5 + 4c + 4d + cd + c^2 + d^2
        let p = Polynomial::constant(5)
            .add(&c().scale(4))
            .add(&d().scale(4))
            .add(&c().mul(&d()))
            .add(&c().pow(2))
            .add(&d().pow(2));
        assert_eq!(p.canonicalize().unwrap(), z2_canonical());
    }

    #[test]
    fn kappa_form_of_z2_canonicalizes() {
        // kappa^2 + 2 abar bbar kappa^2 + abar^2 bbar^2 + kappa^4
        let ab = abar().mul(&bbar());
        let p = kappa()
            .pow(2)
            .add(&ab.mul(&kappa().pow(2)).scale(2))
            .add(&ab.pow(2))
            .add(&kappa().pow(4));
        assert_eq!(p.canonicalize().unwrap(), z2_canonical());
    }

    #[test]
    fn odd_kappa_rejected() {
        let p = kappa().mul(&abar());
        assert!(matches!(
            p.canonicalize(),
            Err(SymbolicError::OddKappaDegree(_))
        ));
    }

    #[test]
    fn eval_z2_at_unit_point() {
        let mut a = BTreeMap::new();
        a.insert(Var::Abar, Rational::one());
        a.insert(Var::Bbar, Rational::one());
        assert_eq!(z2_canonical().eval(&a).unwrap(), Rational::from_int(5));
    }

    #[test]
    fn eval_identity_and_missing_var() {
        let mut a = BTreeMap::new();
        a.insert(Var::C, Rational::new(1, 2));
        assert_eq!(c().eval(&a).unwrap(), Rational::new(1, 2));
        assert_eq!(
            d().eval(&a),
            Err(SymbolicError::MissingVariable(Var::D))
        );
    }

    #[test]
    fn eval_cd_form_of_z2() {
        // Term-by-term rational arithmetic on 5 + 4c + 4d + cd + c^2 + d^2 at
        // c = 1/2, d = 1/3 gives 319/36.
        let p = Polynomial::constant(5)
            .add(&c().scale(4))
            .add(&d().scale(4))
            .add(&c().mul(&d()))
            .add(&c().pow(2))
            .add(&d().pow(2));
        let mut a = BTreeMap::new();
        a.insert(Var::C, Rational::new(1, 2));
        a.insert(Var::D, Rational::new(1, 3));
        assert_eq!(p.eval(&a).unwrap(), Rational::new(319, 36));
    }

    #[test]
    fn display_ordering() {
        let p = Polynomial::one()
            .add(&abar())
            .add(&abar().pow(2))
            .add(&abar().mul(&bbar()))
            .add(&bbar())
            .add(&bbar().pow(2));
        assert_eq!(
            p.to_string(),
            "1 + 1*abar + 1*abar^2 + 1*abar*bbar + 1*bbar + 1*bbar^2"
        );
    }

    #[test]
    fn display_signs() {
        let p = abar().neg().add(&Polynomial::constant(2));
        assert_eq!(p.to_string(), "2 - 1*abar");
    }

    #[test]
    fn rational_parse_and_display() {
        let r: Rational = "3/6".parse().unwrap();
        assert_eq!(r, Rational::new(1, 2));
        assert_eq!(r.to_string(), "1/2");
        let n: Rational = "-4".parse().unwrap();
        assert_eq!(n.to_string(), "-4");
        assert!("1/0".parse::<Rational>().is_err());
    }
}
