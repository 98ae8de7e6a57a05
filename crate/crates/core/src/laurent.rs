//! Exact integer Laurent polynomials and the Alexander polynomials of torus
//! knots and their cables.
//!
//! Every Alexander polynomial produced here is normalized: lowest exponent 0
//! and a positive constant term. Exponents are machine integers; the torus and
//! cable constructors refuse parameters whose exponents would exceed
//! [`MAX_EXPONENT`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Guard on `p·q·m`-sized exponents.
pub const MAX_EXPONENT: i64 = 1 << 31;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("parameters ({p}, {q}) are not coprime")]
    NotCoprime { p: i64, q: i64 },
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("exponent bound exceeded: {0} > 2^31")]
    ExponentOverflow(i64),
    #[error("internal error: inexact polynomial division")]
    InexactDivision,
    #[error("not of L-space form: {0}")]
    NotLSpaceForm(String),
    #[error("cannot parse polynomial at offset {offset}: {msg}")]
    Parse { offset: usize, msg: String },
}

/// Integer Laurent polynomial in one variable `t`. No stored coefficient is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c.into());
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    /// `t^e - 1`
    fn t_pow_minus_one(e: i64) -> Self {
        Self::from_terms([(e, 1), (0, -1)])
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Substitutes `t -> t^p`.
    pub fn substitute_power(&self, p: i64) -> Self {
        assert!(p >= 1, "substitution power must be positive");
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e * p, c.clone())).collect(),
        }
    }

    /// Multiplies by `±t^k` so that the lowest exponent is 0 and the constant
    /// term is positive. Idempotent.
    pub fn normalized(&self) -> Self {
        let Some((&low, c)) = self.coeffs.iter().next() else {
            return Self::zero();
        };
        let shifted = self.shift(-low);
        if c.is_negative() {
            -shifted
        } else {
            shifted
        }
    }

    pub fn is_normalized(&self) -> bool {
        *self == self.normalized()
    }

    /// Exact division `self / divisor`; fails if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, LaurentError> {
        let (Some(dlow), Some(dhigh)) = (divisor.min_exponent(), divisor.max_exponent()) else {
            return Err(LaurentError::InexactDivision);
        };
        let lead = divisor.coeff(dhigh);
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(rhigh) = rem.max_exponent() {
            let rlow = rem.min_exponent().unwrap();
            if rhigh - rlow < dhigh - dlow {
                return Err(LaurentError::InexactDivision);
            }
            let rc = rem.coeff(rhigh);
            let (q, r) = rc.div_rem(&lead);
            if !r.is_zero() {
                return Err(LaurentError::InexactDivision);
            }
            let e = rhigh - dhigh;
            for (de, dc) in divisor.terms() {
                rem.add_term(de + e, -(dc * &q));
            }
            quot.add_term(e, q);
        }
        Ok(quot)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl fmt::Display for LaurentPoly {
    /// Ascending exponents with explicit signs, e.g. `1 - t + t^3 - 2*t^5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{e}")?,
                (_, false) => write!(f, "{mag}*t^{e}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = LaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PolyParser { src: s.as_bytes(), pos: 0 }.parse()
    }
}

struct PolyParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl PolyParser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, LaurentError> {
        Err(LaurentError::Parse { offset: self.pos, msg: msg.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<&str> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn parse(mut self) -> Result<LaurentPoly, LaurentError> {
        let mut out = LaurentPoly::zero();
        self.skip_ws();
        if self.peek() == Some(b'0') && self.src[self.pos..].iter().all(|b| *b == b'0' || b.is_ascii_whitespace()) {
            return Ok(out);
        }
        let mut first = true;
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                if first {
                    return self.err("empty polynomial");
                }
                break;
            }
            let mut negative = false;
            match self.peek() {
                Some(b'+') if !first => self.pos += 1,
                Some(b'-') => {
                    negative = true;
                    self.pos += 1;
                }
                _ if first => {}
                _ => return self.err("expected '+' or '-'"),
            }
            self.skip_ws();
            let (e, c) = self.term()?;
            out.add_term(e, if negative { -c } else { c });
            first = false;
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(i64, BigInt), LaurentError> {
        let coeff = match self.digits() {
            Some(d) => {
                let c: BigInt = d.parse().unwrap();
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                } else {
                    return Ok((0, c));
                }
                c
            }
            None => BigInt::one(),
        };
        if self.peek() != Some(b't') {
            return self.err("expected 't'");
        }
        self.pos += 1;
        if self.peek() != Some(b'^') {
            return Ok((1, coeff));
        }
        self.pos += 1;
        let neg = self.peek() == Some(b'-');
        if neg {
            self.pos += 1;
        }
        let Some(d) = self.digits() else {
            return self.err("expected exponent");
        };
        let Ok(e) = d.parse::<i64>() else {
            return self.err("exponent too large");
        };
        Ok((if neg { -e } else { e }, coeff))
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

fn check_exponent(e: i64) -> Result<(), LaurentError> {
    if e > MAX_EXPONENT {
        Err(LaurentError::ExponentOverflow(e))
    } else {
        Ok(())
    }
}

/// Alexander polynomial of the `(p, q)` torus knot,
/// `(t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1))`, normalized.
pub fn torus_alexander(p: i64, q: i64) -> Result<LaurentPoly, LaurentError> {
    if p < 1 || q < 1 {
        return Err(LaurentError::OutOfRange(format!("torus parameters must be positive, got ({p}, {q})")));
    }
    if gcd(p, q) != 1 {
        return Err(LaurentError::NotCoprime { p, q });
    }
    let pq = p.checked_mul(q).ok_or(LaurentError::ExponentOverflow(i64::MAX))?;
    check_exponent(pq)?;
    if p == 1 || q == 1 {
        return Ok(LaurentPoly::one());
    }
    let num = &LaurentPoly::t_pow_minus_one(pq) * &LaurentPoly::t_pow_minus_one(1);
    let den = &LaurentPoly::t_pow_minus_one(p) * &LaurentPoly::t_pow_minus_one(q);
    Ok(num.div_exact(&den)?.normalized())
}

/// Alexander polynomial of the `(p, q)` cable of a knot with Alexander
/// polynomial `delta`: `delta(t^p) · Δ_{T(p,q)}(t)`, normalized.
///
/// `p` is the longitudinal winding; `q` may be negative (the torus factor
/// only depends on `|q|`).
pub fn cable_alexander(delta: &LaurentPoly, p: i64, q: i64) -> Result<LaurentPoly, LaurentError> {
    if p < 1 {
        return Err(LaurentError::OutOfRange(format!("cable winding p must be positive, got {p}")));
    }
    if gcd(p, q.abs()) != 1 {
        return Err(LaurentError::NotCoprime { p, q });
    }
    if let Some(e) = delta.max_exponent() {
        check_exponent(e.saturating_mul(p))?;
    }
    let torus = if p == 1 || q.abs() <= 1 {
        LaurentPoly::one()
    } else {
        torus_alexander(p, q.abs())?
    };
    Ok((&delta.substitute_power(p) * &torus).normalized())
}

/// Sign of the cabling parameter `m·p(p-1) ± 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum CableSign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl CableSign {
    pub fn offset(self) -> i64 {
        match self {
            CableSign::Plus => 1,
            CableSign::Minus => -1,
        }
    }
}

impl fmt::Display for CableSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CableSign::Plus => "+",
            CableSign::Minus => "-",
        })
    }
}

/// Checks the parameter domain of the `(m, mp(p-1) ± 1)` cable of `T(p, p+1)`.
///
/// The minus family is refused at `p = 2, m = 1`, where the cabling
/// parameter degenerates to 1.
pub fn check_cable_family(p: i64, m: i64, sign: CableSign) -> Result<i64, LaurentError> {
    if p < 2 || m < 1 {
        return Err(LaurentError::OutOfRange(format!("need p >= 2 and m >= 1, got p = {p}, m = {m}")));
    }
    let base = m
        .checked_mul(p)
        .and_then(|x| x.checked_mul(p - 1))
        .ok_or(LaurentError::ExponentOverflow(i64::MAX))?;
    check_exponent(base.saturating_mul(m).saturating_mul(p + 1))?;
    let l = base + sign.offset();
    if sign == CableSign::Minus && l <= 1 {
        return Err(LaurentError::OutOfRange(format!(
            "minus family needs m·p(p-1) - 1 >= 2, got {l} (p = {p}, m = {m})"
        )));
    }
    Ok(l)
}

/// Closed form for the Alexander polynomial of the `(m, mp(p-1) ± 1)` cable of
/// `T(p, p+1)`, evaluated term by term from its nested geometric sums.
pub fn cable_closed_form(p: i64, m: i64, sign: CableSign) -> Result<LaurentPoly, LaurentError> {
    check_cable_family(p, m, sign)?;
    let base = m * p * (p - 1);
    // inner(j) = sum_{k<=j} t^{km} + sum_{k>j}^{p-1} t^{km + shift}
    let inner_shift = match sign {
        CableSign::Plus => -1,
        CableSign::Minus => 1,
    };
    let mut middle = LaurentPoly::zero();
    for j in 0..=p - 2 {
        for k in 0..=j {
            middle.add_term(j * m * p + k * m, BigInt::one());
        }
        for k in j + 1..=p - 1 {
            middle.add_term(j * m * p + k * m + inner_shift, BigInt::one());
        }
    }
    let stride = m * p * p - m * p + sign.offset();
    let outer = LaurentPoly::from_terms((0..m).map(|i| (i * stride, 1)));
    let product = &outer * &middle;
    let poly = match sign {
        CableSign::Plus => {
            let head = LaurentPoly::from_terms((0..=base).map(|i| (i * m, 1)));
            &head - &product.shift(1)
        }
        CableSign::Minus => {
            let head = LaurentPoly::from_terms((0..=base - 2).map(|i| (i * m, 1)));
            &product - &head.shift(1)
        }
    };
    Ok(poly.normalized())
}

/// First half of the exponent gap sequence of an L-space Alexander polynomial,
/// together with the genus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GapSequence {
    pub gaps: Vec<i64>,
    pub genus: i64,
}

impl GapSequence {
    /// The full symmetrized gap list `n_i - n_{i-1}`, `i = 1..M`.
    pub fn full(&self) -> Vec<i64> {
        self.gaps.iter().chain(self.gaps.iter().rev()).copied().collect()
    }

    /// Reconstructs `sum (-1)^i t^{n_i}` from the gaps.
    pub fn to_polynomial(&self) -> LaurentPoly {
        let mut exp = 0;
        let mut terms = vec![(0, 1)];
        for (k, g) in self.full().into_iter().enumerate() {
            exp += g;
            terms.push((exp, if k % 2 == 0 { -1 } else { 1 }));
        }
        LaurentPoly::from_terms(terms)
    }
}

/// Reads the staircase gap sequence off an Alexander polynomial of the form
/// `sum_{i=0}^{M} (-1)^i t^{n_i}` with `n_i + n_{M-i} = 2g`.
pub fn lspace_gaps(delta: &LaurentPoly) -> Result<GapSequence, LaurentError> {
    let delta = delta.normalized();
    if delta.is_zero() {
        return Err(LaurentError::NotLSpaceForm("zero polynomial".into()));
    }
    let mut exps = Vec::with_capacity(delta.term_count());
    for (k, (e, c)) in delta.terms().enumerate() {
        let expected = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        if *c != expected {
            return Err(LaurentError::NotLSpaceForm(format!(
                "coefficient {c} of t^{e} breaks the alternating ±1 pattern"
            )));
        }
        exps.push(e);
    }
    if exps.len() % 2 == 0 {
        return Err(LaurentError::NotLSpaceForm(format!("even number of terms ({})", exps.len())));
    }
    let big_m = exps.len() - 1;
    let top = exps[big_m];
    for i in 0..=big_m {
        if exps[i] + exps[big_m - i] != top {
            return Err(LaurentError::NotLSpaceForm(format!("exponents not symmetric at index {i}")));
        }
    }
    let gaps = (1..=big_m / 2).map(|i| exps[i] - exps[i - 1]).collect();
    Ok(GapSequence { gaps, genus: top / 2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn torus_examples() {
        assert_eq!(torus_alexander(3, 4).unwrap(), poly("1 - t + t^3 - t^5 + t^6"));
        assert_eq!(torus_alexander(2, 3).unwrap(), poly("1 - t + t^2"));
        assert_eq!(torus_alexander(1, 7).unwrap(), LaurentPoly::one());
        assert!(matches!(torus_alexander(2, 4), Err(LaurentError::NotCoprime { .. })));
    }

    #[test]
    fn cable_examples() {
        let t23 = torus_alexander(2, 3).unwrap();
        assert_eq!(cable_alexander(&t23, 2, 3).unwrap(), torus_alexander(3, 4).unwrap());
        assert_eq!(cable_alexander(&t23, 1, 1).unwrap(), t23);
        assert_eq!(cable_alexander(&LaurentPoly::one(), 3, 5).unwrap(), torus_alexander(3, 5).unwrap());
        assert!(cable_alexander(&t23, 2, 4).is_err());
    }

    #[test]
    fn closed_form_small_cases() {
        assert_eq!(cable_closed_form(2, 1, CableSign::Plus).unwrap(), poly("1 - t + t^2"));
        let t34 = torus_alexander(3, 4).unwrap();
        assert_eq!(cable_closed_form(3, 2, CableSign::Plus).unwrap(), cable_alexander(&t34, 2, 13).unwrap());
        assert_eq!(cable_closed_form(3, 2, CableSign::Minus).unwrap(), cable_alexander(&t34, 2, 11).unwrap());
        assert!(cable_closed_form(2, 1, CableSign::Minus).is_err());
        assert!(cable_closed_form(1, 1, CableSign::Plus).is_err());
    }

    #[test]
    fn gaps() {
        let g = lspace_gaps(&torus_alexander(3, 4).unwrap()).unwrap();
        assert_eq!(g, GapSequence { gaps: vec![1, 2], genus: 3 });
        assert_eq!(g.full(), vec![1, 2, 2, 1]);
        assert_eq!(g.to_polynomial(), torus_alexander(3, 4).unwrap());
        assert_eq!(lspace_gaps(&LaurentPoly::one()).unwrap(), GapSequence { gaps: vec![], genus: 0 });
        assert!(lspace_gaps(&poly("1 + t")).is_err());
        assert!(lspace_gaps(&poly("1 - 2*t + t^2")).is_err());
        assert!(lspace_gaps(&poly("1 - t + t^3")).is_err());
    }

    #[test]
    fn render_and_parse() {
        for s in ["1 - t + t^3 - t^5 + t^6", "0", "-t^-2 + 3 + 2*t", "5", "-1 + 12*t^40"] {
            let p = poly(s);
            assert_eq!(p.to_string(), s);
        }
        assert!("1 +".parse::<LaurentPoly>().is_err());
        assert!("1 t".parse::<LaurentPoly>().is_err());
    }

    #[test]
    fn normalization() {
        let p = poly("-t^3 + t^4 - t^6");
        assert_eq!(p.normalized(), poly("1 - t + t^3"));
        assert_eq!(p.normalized().normalized(), p.normalized());
    }
}
