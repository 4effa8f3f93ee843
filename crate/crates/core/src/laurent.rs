//! Multivariate Laurent polynomials over an integer ring.
//!
//! A [`LaurentPoly`] lives in `Z[a1^±, ..., am^±]`. Terms are kept in a
//! `BTreeMap` keyed by [`Monomial`], whose ordering is deglex with
//! `a1 > a2 > ... > am`; zero coefficients are never stored.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::Zero;
use thiserror::Error;

use crate::scalar::Coeff;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableMismatch { left: usize, right: usize },
    #[error("zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("negative exponent in an ordinary polynomial")]
    NegativeExponent,
    #[error("not divisible by the binomial")]
    NotDivisible,
    #[error("binomial shift must not be the identity monomial")]
    IdentityShift,
    #[error("evaluation undefined (negative power of a zero coordinate)")]
    Undefined,
    #[error("inputs to discrimination are not pairwise distinct")]
    NotDistinct,
    #[error("search budget exceeded (box bound {bound})")]
    SearchBudgetExceeded { bound: i64 },
    #[error("parse error: {0}")]
    Parse(String),
}

/// An exponent vector `a^e = a1^e1 ... am^em`; exponents may be negative.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<i64>);

impl Monomial {
    pub fn new(exponents: Vec<i64>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|e| -e).collect())
    }

    pub fn scale(&self, k: i64) -> Monomial {
        Monomial(self.0.iter().map(|e| e * k).collect())
    }

    pub(crate) fn fmt_factors(&self, name: &dyn Fn(usize) -> String) -> String {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| {
                if e == 1 {
                    name(i)
                } else {
                    format!("{}^{}", name(i), e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Largest `k` with `q` in `Δ^k`, where `Δ` is the augmentation ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DeltaDegree {
    Finite(usize),
    Infinite,
}

impl DeltaDegree {
    pub fn at_least(self, k: usize) -> bool {
        match self {
            DeltaDegree::Finite(d) => d >= k,
            DeltaDegree::Infinite => true,
        }
    }
}

/// `numerator / a^denominator` with `gcd(numerator, a^denominator) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalFraction<C> {
    pub numerator: LaurentPoly<C>,
    pub denominator: Vec<i64>,
}

impl<C: Coeff> CanonicalFraction<C> {
    pub fn reconstitute(&self) -> LaurentPoly<C> {
        self.numerator
            .mul_monomial(&Monomial(self.denominator.clone()).inv())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentPoly<C> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn term(m: Monomial, c: C) -> Self {
        let mut p = Self::zero(m.nvars());
        p.add_term(m, c);
        p
    }

    pub fn monomial(exponents: Vec<i64>) -> Self {
        Self::term(Monomial(exponents), C::one())
    }

    /// The variable `a_{i+1}` (zero-based index `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i), C::one())
    }

    /// `a^sigma - 1`.
    pub fn binomial(sigma: &Monomial) -> Self {
        Self::term(sigma.clone(), C::one()) - Self::one(sigma.nvars())
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<i64>, C)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map_or(false, |(m, c)| m.is_one() && c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending deglex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(Monomial::is_polynomial)
    }

    /// `±a^e`, i.e. a unit of the Laurent ring.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().all(|c| c.abs().is_one())
    }

    pub fn coefficient_sum(&self) -> C {
        self.terms.values().cloned().fold(C::zero(), |a, b| a + b)
    }

    fn check_vars(&self, other: &Self) -> Result<(), LaurentError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(LaurentError::VariableMismatch {
                left: self.nvars,
                right: other.nvars,
            })
        }
    }

    pub fn arith(&self, op: PolyOp, other: &Self) -> Result<Self, LaurentError> {
        self.check_vars(other)?;
        Ok(match op {
            PolyOp::Add => self.add_unchecked(other, false),
            PolyOp::Sub => self.add_unchecked(other, true),
            PolyOp::Mul => self.mul_unchecked(other),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.arith(PolyOp::Add, other)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LaurentError> {
        self.arith(PolyOp::Sub, other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LaurentError> {
        self.arith(PolyOp::Mul, other)
    }

    fn add_unchecked(&self, other: &Self, negate: bool) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            let c = if negate { -c.clone() } else { c.clone() };
            out.add_term(m.clone(), c);
        }
        out
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.clone() * k.clone()))
                .collect(),
        }
    }

    /// Multiplication by the monomial `a^shift`.
    pub fn mul_monomial(&self, shift: &Monomial) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(shift), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Substitutes `a_i -> a^{columns[i]}`: the ring map induced by a change
    /// of basis of the exponent lattice.
    pub fn substitute_lattice(&self, columns: &[Vec<i64>]) -> Self {
        assert_eq!(columns.len(), self.nvars);
        let target = columns.first().map_or(self.nvars, Vec::len);
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0i64; target];
            for (k, col) in m.0.iter().zip(columns) {
                for (slot, x) in e.iter_mut().zip(col) {
                    *slot += k * x;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Maximal term under deglex; requires an ordinary nonzero polynomial.
    pub fn deglex_leading_term(&self) -> Result<(Monomial, C), LaurentError> {
        if self.is_zero() {
            return Err(LaurentError::ZeroPolynomial);
        }
        if !self.is_polynomial() {
            return Err(LaurentError::NegativeExponent);
        }
        let (m, c) = self.terms.iter().next_back().expect("nonzero");
        Ok((m.clone(), c.clone()))
    }

    pub fn canonical_fraction(&self) -> CanonicalFraction<C> {
        let mut beta = vec![0i64; self.nvars];
        for m in self.terms.keys() {
            for (b, &e) in beta.iter_mut().zip(&m.0) {
                *b = (*b).max(-e);
            }
        }
        CanonicalFraction {
            numerator: self.mul_monomial(&Monomial(beta.clone())),
            denominator: beta,
        }
    }

    /// Exact division by `a^sigma - 1`.
    ///
    /// Terms are grouped into cosets of `Z·sigma`; each exponent `e` is
    /// written `r + t·sigma` with `0 <= r·sigma < sigma·sigma`. Divisibility
    /// holds iff every coset has coefficient sum zero, and the quotient along
    /// a coset is the negated prefix sum of its coefficients.
    pub fn binomial_divide(&self, sigma: &Monomial) -> Result<Self, LaurentError> {
        if sigma.nvars() != self.nvars {
            return Err(LaurentError::VariableMismatch {
                left: self.nvars,
                right: sigma.nvars(),
            });
        }
        if sigma.is_one() {
            return Err(LaurentError::IdentityShift);
        }
        let s = &sigma.0;
        let norm: i128 = s.iter().map(|&x| (x as i128) * (x as i128)).sum();
        let mut cosets: BTreeMap<Vec<i64>, BTreeMap<i64, C>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let dot: i128 = m.0.iter().zip(s).map(|(&e, &x)| e as i128 * x as i128).sum();
            let t = dot.div_euclid(norm) as i64;
            let r: Vec<i64> = m.0.iter().zip(s).map(|(&e, &x)| e - t * x).collect();
            cosets.entry(r).or_default().insert(t, c.clone());
        }
        let mut quotient = Self::zero(self.nvars);
        for (r, line) in cosets {
            let sum = line.values().cloned().fold(C::zero(), |a, b| a + b);
            if !sum.is_zero() {
                return Err(LaurentError::NotDivisible);
            }
            let (&tmin, _) = line.iter().next().expect("nonempty coset");
            let (&tmax, _) = line.iter().next_back().expect("nonempty coset");
            let mut running = C::zero();
            for t in tmin..tmax {
                if let Some(c) = line.get(&t) {
                    running = running - c.clone();
                }
                if !running.is_zero() {
                    let e: Vec<i64> = r.iter().zip(s).map(|(&ri, &x)| ri + t * x).collect();
                    quotient.add_term(Monomial(e), running.clone());
                }
            }
        }
        Ok(quotient)
    }

    /// Integer value at `alpha`; requires an ordinary polynomial.
    pub fn evaluate_polynomial(&self, alpha: &[i64]) -> Result<C, LaurentError> {
        assert_eq!(alpha.len(), self.nvars);
        let mut total = C::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (&e, &x) in m.0.iter().zip(alpha) {
                if e < 0 {
                    return Err(LaurentError::NegativeExponent);
                }
                v = v * num_traits::pow(C::from_i64_exact(x), e as usize);
            }
            total = total + v;
        }
        Ok(total)
    }

    /// Exact rational value at `alpha`.
    pub fn evaluate(&self, alpha: &[i64]) -> Result<Ratio<C>, LaurentError> {
        assert_eq!(alpha.len(), self.nvars);
        let mut total = Ratio::zero();
        for (m, c) in &self.terms {
            let mut num = c.clone();
            let mut den = C::one();
            for (&e, &x) in m.0.iter().zip(alpha) {
                let base = C::from_i64_exact(x);
                if e >= 0 {
                    num = num * num_traits::pow(base, e as usize);
                } else if x == 0 {
                    return Err(LaurentError::Undefined);
                } else {
                    den = den * num_traits::pow(base, (-e) as usize);
                }
            }
            total = total + Ratio::new(num, den);
        }
        Ok(total)
    }

    /// Rewrites `q · a^β` (denominators cleared) in the variables
    /// `y_i = a_i - 1`.
    pub fn to_y_variables(&self) -> Self {
        self.y_expansion(u64::MAX)
    }

    /// The y-form with every term of total degree above `max_deg` dropped.
    pub fn to_y_variables_upto(&self, max_deg: u64) -> Self {
        self.y_expansion(max_deg)
    }

    fn y_expansion(&self, max_deg: u64) -> Self {
        let numerator = self.canonical_fraction().numerator;
        let mut out = Self::zero(self.nvars);
        for (m, c) in &numerator.terms {
            // (1 + y_i)^{e_i} expanded per variable, then multiplied out.
            let mut partial: Vec<(Vec<i64>, u64, C)> = vec![(vec![0; self.nvars], 0, c.clone())];
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let binoms = binomial_row::<C>(e as u64, max_deg);
                let mut next = Vec::with_capacity(partial.len() * binoms.len());
                for (exps, deg, coef) in &partial {
                    for (k, b) in binoms.iter().enumerate() {
                        let total = deg + k as u64;
                        if total > max_deg {
                            break;
                        }
                        let mut ex = exps.clone();
                        ex[i] = k as i64;
                        next.push((ex, total, coef.clone() * b.clone()));
                    }
                }
                partial = next;
            }
            for (ex, _, coef) in partial {
                out.add_term(Monomial(ex), coef);
            }
        }
        out
    }

    /// Homogeneous degree-`d` part of the y-form, keyed by y-exponents.
    pub fn y_homogeneous_part(&self, d: i64) -> Self {
        if d < 0 {
            return Self::zero(self.nvars);
        }
        let y = self.to_y_variables_upto(d as u64);
        LaurentPoly {
            nvars: self.nvars,
            terms: y.terms.into_iter().filter(|(m, _)| m.degree() == d).collect(),
        }
    }

    /// `q ∈ Δ^k`, expanding only the y-terms of degree below `k`.
    pub fn in_delta_power(&self, k: usize) -> bool {
        k == 0 || self.is_zero() || self.to_y_variables_upto(k as u64 - 1).is_zero()
    }

    pub fn delta_degree(&self) -> DeltaDegree {
        if self.is_zero() {
            return DeltaDegree::Infinite;
        }
        let y = self.to_y_variables();
        let min = y.terms.keys().map(Monomial::degree).min().expect("nonzero");
        DeltaDegree::Finite(min as usize)
    }

    pub fn fmt_with(&self, name: &dyn Fn(usize) -> String) -> String {
        let frac = self.canonical_fraction();
        if frac.numerator.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (m, c)) in frac.numerator.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mag = c.abs();
            let factors = m.fmt_factors(name);
            if factors.is_empty() {
                s.push_str(&mag.to_string());
            } else if mag.is_one() {
                s.push_str(&factors);
            } else {
                s.push_str(&format!("{}*{}", mag, factors));
            }
        }
        let den = Monomial(frac.denominator);
        if !den.is_one() {
            s.push_str(" / ");
            s.push_str(&den.fmt_factors(name));
        }
        s
    }

    /// Parses the text grammar with variables `a1..am`.
    pub fn parse(text: &str, nvars: usize) -> Result<Self, LaurentError> {
        parse_with_prefix(text, nvars, "a")
    }
}

/// `C(e, 0), ..., C(e, e)`.
/// `C(e, 0), ..., C(e, min(e, upto))`.
fn binomial_row<C: Coeff>(e: u64, upto: u64) -> Vec<C> {
    let last = e.min(upto);
    let mut row = Vec::with_capacity(last as usize + 1);
    let mut cur = C::one();
    row.push(cur.clone());
    for k in 1..=last {
        cur = cur * C::from_u64(e - k + 1).expect("fits") / C::from_u64(k).expect("fits");
        row.push(cur.clone());
    }
    row
}

/// Finds `alpha` with every coordinate nonzero on which the given pairwise
/// distinct polynomials take pairwise distinct values.
///
/// Candidates come from boxes `{1..B}^m` with `B` doubling up to `max_box`;
/// inside each box vectors are visited in lexicographic order and points
/// from smaller boxes are skipped.
pub fn discriminate<C: Coeff>(
    polys: &[LaurentPoly<C>],
    max_box: i64,
) -> Result<Vec<i64>, LaurentError> {
    let nvars = match polys.first() {
        Some(p) => p.nvars(),
        None => return Err(LaurentError::NotDistinct),
    };
    for p in polys {
        if p.nvars() != nvars {
            return Err(LaurentError::VariableMismatch {
                left: nvars,
                right: p.nvars(),
            });
        }
    }
    let distinct: BTreeSet<_> = polys.iter().map(|p| p.terms.iter().collect::<Vec<_>>()).collect();
    if distinct.len() != polys.len() {
        return Err(LaurentError::NotDistinct);
    }
    if nvars == 0 {
        return if polys.len() <= 1 {
            Ok(vec![])
        } else {
            Err(LaurentError::SearchBudgetExceeded { bound: 0 })
        };
    }
    let mut prev = 0i64;
    let mut bound = 1i64;
    while bound <= max_box {
        let mut alpha = vec![1i64; nvars];
        loop {
            if alpha.iter().any(|&x| x > prev) && separates(polys, &alpha) {
                return Ok(alpha);
            }
            if !next_in_box(&mut alpha, bound) {
                break;
            }
        }
        prev = bound;
        bound *= 2;
    }
    Err(LaurentError::SearchBudgetExceeded { bound: max_box })
}

/// Lexicographic successor in `{1..bound}^m`.
fn next_in_box(alpha: &mut [i64], bound: i64) -> bool {
    for i in (0..alpha.len()).rev() {
        if alpha[i] < bound {
            alpha[i] += 1;
            for x in &mut alpha[i + 1..] {
                *x = 1;
            }
            return true;
        }
    }
    false
}

/// Whether `alpha` maps the polynomials to pairwise distinct, defined values.
pub fn separates<C: Coeff>(polys: &[LaurentPoly<C>], alpha: &[i64]) -> bool {
    let mut seen = BTreeSet::new();
    for p in polys {
        match p.evaluate(alpha) {
            Ok(v) => {
                if !seen.insert(v) {
                    return false;
                }
            }
            Err(_) => return false,
        }
    }
    true
}

pub(crate) fn parse_with_prefix<C: Coeff>(
    text: &str,
    nvars: usize,
    prefix: &str,
) -> Result<LaurentPoly<C>, LaurentError> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
        nvars,
        prefix: prefix.as_bytes(),
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    nvars: usize,
    prefix: &'a [u8],
}

impl<'a> Parser<'a> {
    fn err(&self, what: &str) -> LaurentError {
        LaurentError::Parse(format!("{} at byte {}", what, self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<&'a str, LaurentError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).expect("ascii"))
    }

    fn signed_int(&mut self) -> Result<i64, LaurentError> {
        let neg = self.eat(b'-');
        let d = self.digits()?;
        let v: i64 = d.parse().map_err(|_| self.err("exponent out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn expr<C: Coeff>(&mut self) -> Result<LaurentPoly<C>, LaurentError> {
        let mut out = LaurentPoly::zero(self.nvars);
        let mut neg = self.eat(b'-');
        loop {
            let (m, c) = self.term::<C>()?;
            out.add_term(m, if neg { -c } else { c });
            if self.eat(b'+') {
                neg = false;
            } else if self.eat(b'-') {
                neg = true;
            } else {
                break;
            }
        }
        if self.eat(b'/') {
            let (den, c) = self.term::<C>()?;
            if !c.is_one() {
                return Err(self.err("denominator must be a monomial"));
            }
            out = out.mul_monomial(&den.inv());
        }
        Ok(out)
    }

    fn term<C: Coeff>(&mut self) -> Result<(Monomial, C), LaurentError> {
        let mut coeff = C::one();
        let mut exps = vec![0i64; self.nvars];
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_digit() => {
                    let d = self.digits()?;
                    let v: C = d.parse().map_err(|_| self.err("coefficient out of range"))?;
                    coeff = coeff * v;
                }
                Some(_) if self.s[self.pos..].starts_with(self.prefix) => {
                    self.pos += self.prefix.len();
                    // a lone variable may drop its index
                    let idx: usize = if self.nvars == 1 && !self.s.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
                        1
                    } else {
                        self.digits()?
                            .parse()
                            .map_err(|_| self.err("bad variable index"))?
                    };
                    if idx == 0 || idx > self.nvars {
                        return Err(self.err("variable index out of range"));
                    }
                    let e = if self.eat(b'^') { self.signed_int()? } else { 1 };
                    exps[idx - 1] += e;
                }
                _ => return Err(self.err("expected coefficient or variable")),
            }
            if !self.eat(b'*') {
                break;
            }
        }
        Ok((Monomial(exps), coeff))
    }
}

impl<C: Coeff> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&|i| format!("a{}", i + 1)))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $op:expr) => {
        impl<'a, C: Coeff> $tr<&'a LaurentPoly<C>> for &'a LaurentPoly<C> {
            type Output = LaurentPoly<C>;
            fn $method(self, rhs: &'a LaurentPoly<C>) -> LaurentPoly<C> {
                self.arith($op, rhs).expect("operands share the variable count")
            }
        }
        impl<C: Coeff> $tr for LaurentPoly<C> {
            type Output = LaurentPoly<C>;
            fn $method(self, rhs: LaurentPoly<C>) -> LaurentPoly<C> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, PolyOp::Add);
forward_binop!(Sub, sub, PolyOp::Sub);
forward_binop!(Mul, mul, PolyOp::Mul);

impl<C: Coeff> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        self.scale(&-C::one())
    }
}

impl<C: Coeff> Neg for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type P = LaurentPoly<BigInt>;

    fn p(s: &str, m: usize) -> P {
        P::parse(s, m).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(p("a1 - 1", 1) * p("a1 + 1", 1), p("a1^2 - 1", 1));
        let q = p("3*a1^2*a2^-1 - 5", 2);
        assert_eq!(&q + &P::zero(2), q);
        assert!((p("a1^-1", 1) * p("a1", 1)).is_one());
        assert_eq!(
            p("a1", 1).arith(PolyOp::Add, &p("a1", 2)),
            Err(LaurentError::VariableMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn leading_terms() {
        let (m, c) = p("a1^2 + a1*a2", 2).deglex_leading_term().unwrap();
        assert_eq!((m.exponents(), c), (&[2, 0][..], BigInt::from(1)));
        let (m, c) = p("5", 2).deglex_leading_term().unwrap();
        assert_eq!((m.exponents(), c), (&[0, 0][..], BigInt::from(5)));
        let (m, _) = p("a2^3 + 7*a1", 2).deglex_leading_term().unwrap();
        assert_eq!(m.exponents(), &[0, 3]);
        assert_eq!(P::zero(2).deglex_leading_term(), Err(LaurentError::ZeroPolynomial));
        assert_eq!(p("a1^-1", 1).deglex_leading_term(), Err(LaurentError::NegativeExponent));
    }

    #[test]
    fn canonical_fractions() {
        let f = p("a1^-2 + 1", 1).canonical_fraction();
        assert_eq!(f.numerator, p("1 + a1^2", 1));
        assert_eq!(f.denominator, vec![2]);
        let f = p("a1 + a2", 2).canonical_fraction();
        assert_eq!(f.denominator, vec![0, 0]);
        let f = P::zero(3).canonical_fraction();
        assert!(f.numerator.is_zero());
        assert_eq!(f.denominator, vec![0, 0, 0]);
        let q = p("a1^-3*a2 + 4*a2^-1 - a1", 2);
        assert_eq!(q.canonical_fraction().reconstitute(), q);
    }

    #[test]
    fn binomial_division_examples() {
        let w = p("a1^6 - 1", 1).binomial_divide(&Monomial::new(vec![2])).unwrap();
        assert_eq!(w, p("a1^4 + a1^2 + 1", 1));
        let w = p("a1 - 1", 1).binomial_divide(&Monomial::new(vec![1])).unwrap();
        assert!(w.is_one());
        assert_eq!(
            p("a2 - 1", 2).binomial_divide(&Monomial::new(vec![1, 0])),
            Err(LaurentError::NotDivisible)
        );
        assert_eq!(
            p("a1", 1).binomial_divide(&Monomial::one(1)),
            Err(LaurentError::IdentityShift)
        );
        // negative exponents and a diagonal shift
        let sigma = Monomial::new(vec![1, -2]);
        let w0 = p("3*a1^-2*a2 + a1 - 7", 2);
        let q = &P::binomial(&sigma) * &w0;
        assert_eq!(q.binomial_divide(&sigma).unwrap(), w0);
    }

    #[test]
    fn binomial_division_iff_divisibility() {
        for k in 1..=30i64 {
            for l in 1..=30i64 {
                let q = P::binomial(&Monomial::new(vec![k]));
                let r = q.binomial_divide(&Monomial::new(vec![l]));
                assert_eq!(r.is_ok(), k % l == 0, "k={k} l={l}");
            }
        }
    }

    #[test]
    fn evaluation_examples() {
        let q = p("a1 - 1", 2) * p("a2 - 1", 2);
        assert_eq!(q.evaluate(&[2, 3]).unwrap(), Ratio::from_integer(BigInt::from(2)));
        assert_eq!(q.evaluate(&[1, 1]).unwrap(), Ratio::zero());
        assert_eq!(p("a1^-1", 1).evaluate(&[0]), Err(LaurentError::Undefined));
        assert_eq!(
            p("a1^-2 + 1", 1).evaluate(&[2]).unwrap(),
            Ratio::new(BigInt::from(5), BigInt::from(4))
        );
    }

    #[test]
    fn delta_degree_examples() {
        assert_eq!(p("a1 - 1", 1).delta_degree(), DeltaDegree::Finite(1));
        let q = p("a1 - 1", 2).pow(2) * p("a2 - 1", 2);
        assert_eq!(q.delta_degree(), DeltaDegree::Finite(3));
        assert_eq!(p("a1", 1).delta_degree(), DeltaDegree::Finite(0));
        assert_eq!(P::zero(1).delta_degree(), DeltaDegree::Infinite);
        // a monomial unit does not change the filtration level
        let u = p("a1^-3*a2^2", 2);
        assert_eq!((&u * &q).delta_degree(), DeltaDegree::Finite(3));
    }

    #[test]
    fn discrimination_examples() {
        let polys = vec![p("a1", 1), p("a1^2", 1)];
        assert_eq!(discriminate(&polys, 64).unwrap(), vec![2]);
        assert!(separates(&polys, &[2]));
        let polys = vec![P::zero(1), p("a1 - 1", 1)];
        assert_eq!(discriminate(&polys, 64).unwrap(), vec![2]);
        let polys = vec![p("a1", 2), p("a2", 2)];
        assert_eq!(discriminate(&polys, 64).unwrap(), vec![1, 2]);
        assert_eq!(
            discriminate(&[p("a1", 1), p("a1", 1)], 64),
            Err(LaurentError::NotDistinct)
        );
    }

    #[test]
    fn text_format() {
        let q = p("3*a1^2*a2^-1 - 5", 2);
        assert_eq!(q.to_string(), "3*a1^2 - 5*a2 / a2");
        assert_eq!(p(&q.to_string(), 2), q);
        for s in ["0", "1", "-a1", "a1^2 + 1 / a1^2", "-2*a1*a3^4 + a2 - 7", "a2^3 + a1 / a1^3*a2^2"] {
            let m = 3;
            assert_eq!(p(s, m).to_string(), s);
        }
        assert!(P::parse("a4", 3).is_err());
        assert!(P::parse("a1 +", 3).is_err());
        assert!(P::parse("a1 / 2*a1", 3).is_err());
    }

    #[test]
    fn fixed_width_coefficients_agree() {
        let q64 = LaurentPoly::<i64>::parse("a1^6 - 1", 1).unwrap();
        let w = q64.binomial_divide(&Monomial::new(vec![3])).unwrap();
        assert_eq!(w.to_string(), "a1^3 + 1");
    }

    fn arb_poly(m: usize) -> impl Strategy<Value = P> {
        prop::collection::vec((prop::collection::vec(-3i64..=3, m), -9i64..=9), 0..5)
            .prop_map(move |ts| P::from_terms(m, ts.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
    }

    fn arb_ordinary(m: usize) -> impl Strategy<Value = P> {
        prop::collection::vec((prop::collection::vec(0i64..=3, m), -9i64..=9), 1..5)
            .prop_map(move |ts| P::from_terms(m, ts.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(2), b in arb_poly(2), c in arb_poly(2)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn division_roundtrip(w in arb_poly(2), s in prop::collection::vec(-3i64..=3, 2)) {
            prop_assume!(s.iter().any(|&x| x != 0));
            let sigma = Monomial::new(s);
            let q = &P::binomial(&sigma) * &w;
            prop_assert_eq!(q.binomial_divide(&sigma).unwrap(), w);
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in arb_poly(2), b in arb_poly(2),
                                        x in prop::sample::select(vec![-3i64, -1, 1, 2, 5]),
                                        y in prop::sample::select(vec![-2i64, 1, 3, 4])) {
            let at = [x, y];
            prop_assert_eq!((&a * &b).evaluate(&at).unwrap(), a.evaluate(&at).unwrap() * b.evaluate(&at).unwrap());
            prop_assert_eq!((&a - &b).evaluate(&at).unwrap(), a.evaluate(&at).unwrap() - b.evaluate(&at).unwrap());
        }

        #[test]
        fn delta_degree_is_additive(a in arb_ordinary(2), b in arb_ordinary(2)) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let (DeltaDegree::Finite(x), DeltaDegree::Finite(y)) = (a.delta_degree(), b.delta_degree()) else {
                unreachable!()
            };
            prop_assert_eq!((&a * &b).delta_degree(), DeltaDegree::Finite(x + y));
        }

        #[test]
        fn truncated_membership_matches_full_degree(a in arb_poly(2), k in 0usize..5) {
            let d = a.clone() * (p("a1 - 1", 2) * p("a2 - 1", 2));
            prop_assert_eq!(d.in_delta_power(k), d.delta_degree().at_least(k));
            prop_assert_eq!(a.in_delta_power(k), a.delta_degree().at_least(k));
        }

        #[test]
        fn monomials_do_not_move_the_filtration(a in arb_poly(3), e in prop::collection::vec(-4i64..=4, 3)) {
            let shifted = a.mul_monomial(&Monomial::new(e));
            prop_assert_eq!(shifted.delta_degree(), a.delta_degree());
        }

        #[test]
        fn discrimination_is_verified(ps in prop::collection::btree_set(prop::collection::vec(-4i64..=4, 3), 1..5)) {
            let polys: Vec<P> = ps.into_iter()
                .map(|v| P::from_terms(1, v.chunks(1).enumerate().map(|(i, c)| (vec![i as i64 - 1], BigInt::from(c[0])))))
                .collect();
            let alpha = discriminate(&polys, 256).unwrap();
            prop_assert!(alpha.iter().all(|&x| x != 0));
            prop_assert!(separates(&polys, &alpha));
        }

        #[test]
        fn text_roundtrip(a in arb_poly(3)) {
            prop_assert_eq!(P::parse(&a.to_string(), 3).unwrap(), a);
        }
    }

    #[test]
    fn not_divisible_has_no_small_quotient() {
        // exhaustive: no W with coefficients in [-2,2] on a small support
        // solves (a1^2 - 1) W = a1 - 1 when a1 - 1 is rejected
        let q = p("a1 - 1", 1);
        let sigma = Monomial::new(vec![2]);
        assert_eq!(q.binomial_divide(&sigma), Err(LaurentError::NotDivisible));
        let target = q.clone();
        let b = P::binomial(&sigma);
        for c0 in -2..=2 {
            for c1 in -2..=2 {
                for c2 in -2..=2 {
                    let w = P::from_terms(1, [(vec![-1], c0), (vec![0], c1), (vec![1], c2)].map(|(e, c)| (e, BigInt::from(c))));
                    assert_ne!(&b * &w, target);
                }
            }
        }
    }
}
