//! The wreath product `G = Z^n wr Z^m` in normal form.
//!
//! An element is `a^γ · b^P = a1^γ1 ... am^γm · b1^P1 ... bn^Pn` with
//! `γ ∈ Z^m` and `P ∈ (ZA)^n`. Conjugation follows `x^y = y^-1 x y` and
//! commutators `[x, y] = x^-1 y^-1 x y`, so `[u, a] = u^(a-1)` for `u ∈ N`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::{LaurentError, LaurentPoly, Monomial};
use crate::scalar::Coeff;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WreathError {
    #[error("ranks must be positive (got m={m}, n={n})")]
    DegenerateContext { m: usize, n: usize },
    #[error("elements live in different groups")]
    ContextMismatch,
    #[error("element is not in the base group N")]
    NotInBaseGroup,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// Ranks of `A = Z^m` (top) and `B = Z^n` (bottom).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupContext {
    m: usize,
    n: usize,
}

impl GroupContext {
    pub fn new(m: usize, n: usize) -> Result<Self, WreathError> {
        if m == 0 || n == 0 {
            return Err(WreathError::DegenerateContext { m, n });
        }
        Ok(GroupContext { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Names of the distinguished basis `(a1, ..., am, b1, ..., bn)`.
    pub fn basis_names(&self) -> Vec<String> {
        (1..=self.m)
            .map(|i| format!("a{i}"))
            .chain((1..=self.n).map(|j| format!("b{j}")))
            .collect()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WreathElement<C> {
    top: Vec<i64>,
    bottom: Vec<LaurentPoly<C>>,
}

impl<C: Coeff> WreathElement<C> {
    pub fn identity(ctx: GroupContext) -> Self {
        WreathElement {
            top: vec![0; ctx.m],
            bottom: vec![LaurentPoly::zero(ctx.m); ctx.n],
        }
    }

    /// The generator `a_{i+1}`.
    pub fn a(ctx: GroupContext, i: usize) -> Self {
        let mut g = Self::identity(ctx);
        g.top[i] = 1;
        g
    }

    /// The generator `b_{j+1}`.
    pub fn b(ctx: GroupContext, j: usize) -> Self {
        let mut g = Self::identity(ctx);
        g.bottom[j] = LaurentPoly::one(ctx.m);
        g
    }

    /// `a^γ` in the top group.
    pub fn from_top(ctx: GroupContext, top: Vec<i64>) -> Result<Self, WreathError> {
        Self::from_parts(ctx, top, vec![LaurentPoly::zero(ctx.m); ctx.n])
    }

    /// `b^P` in the base group.
    pub fn from_bottom(ctx: GroupContext, bottom: Vec<LaurentPoly<C>>) -> Result<Self, WreathError> {
        Self::from_parts(ctx, vec![0; ctx.m], bottom)
    }

    pub fn from_parts(
        ctx: GroupContext,
        top: Vec<i64>,
        bottom: Vec<LaurentPoly<C>>,
    ) -> Result<Self, WreathError> {
        if top.len() != ctx.m
            || bottom.len() != ctx.n
            || bottom.iter().any(|p| p.nvars() != ctx.m)
        {
            return Err(WreathError::ContextMismatch);
        }
        Ok(WreathElement { top, bottom })
    }

    pub fn context(&self) -> GroupContext {
        GroupContext {
            m: self.top.len(),
            n: self.bottom.len(),
        }
    }

    pub fn top(&self) -> &[i64] {
        &self.top
    }

    pub fn bottom(&self) -> &[LaurentPoly<C>] {
        &self.bottom
    }

    pub fn top_monomial(&self) -> Monomial {
        Monomial::new(self.top.clone())
    }

    /// The `A`-factor `a^γ` of the normal form.
    pub fn top_part(&self) -> Self {
        Self::from_top(self.context(), self.top.clone()).expect("same context")
    }

    /// The `N`-factor `b^P` of the normal form.
    pub fn bottom_part(&self) -> Self {
        Self::from_bottom(self.context(), self.bottom.clone()).expect("same context")
    }

    pub fn is_identity(&self) -> bool {
        self.in_base_group() && self.in_top_group()
    }

    /// `g ∈ N`.
    pub fn in_base_group(&self) -> bool {
        self.top.iter().all(|&e| e == 0)
    }

    /// `g ∈ A`.
    pub fn in_top_group(&self) -> bool {
        self.bottom.iter().all(LaurentPoly::is_zero)
    }

    fn check(&self, other: &Self) -> Result<(), WreathError> {
        if self.context() == other.context() {
            Ok(())
        } else {
            Err(WreathError::ContextMismatch)
        }
    }

    /// `(γ, P) · (β, Q) = (γ + β, P·a^β + Q)`.
    pub fn mul(&self, other: &Self) -> Result<Self, WreathError> {
        self.check(other)?;
        let shift = other.top_monomial();
        Ok(WreathElement {
            top: self.top.iter().zip(&other.top).map(|(x, y)| x + y).collect(),
            bottom: self
                .bottom
                .iter()
                .zip(&other.bottom)
                .map(|(p, q)| &p.mul_monomial(&shift) + q)
                .collect(),
        })
    }

    /// `(γ, P)^-1 = (-γ, -P·a^-γ)`.
    pub fn inv(&self) -> Self {
        let shift = self.top_monomial().inv();
        WreathElement {
            top: self.top.iter().map(|e| -e).collect(),
            bottom: self.bottom.iter().map(|p| -p.mul_monomial(&shift)).collect(),
        }
    }

    /// `h^-1 g h`.
    pub fn conj(&self, h: &Self) -> Result<Self, WreathError> {
        h.inv().mul(self)?.mul(h)
    }

    /// `g^-1 h^-1 g h`.
    pub fn comm(&self, h: &Self) -> Result<Self, WreathError> {
        self.inv().mul(&h.inv())?.mul(self)?.mul(h)
    }

    /// Left-normed `[g, h1, h2, ...]`.
    pub fn comm_chain(&self, rest: &[Self]) -> Result<Self, WreathError> {
        rest.iter().try_fold(self.clone(), |acc, h| acc.comm(h))
    }

    /// `u^q` for `u ∈ N` under the `ZA`-module structure.
    pub fn module_act(&self, q: &LaurentPoly<C>) -> Result<Self, WreathError> {
        if !self.in_base_group() {
            return Err(WreathError::NotInBaseGroup);
        }
        let bottom = self
            .bottom
            .iter()
            .map(|p| p.try_mul(q))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(WreathElement {
            top: self.top.clone(),
            bottom,
        })
    }

    /// Repeated multiplication; the reference for every faster power routine.
    pub fn mul_chain(&self, k: i64) -> Self {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut acc = Self::identity(self.context());
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base).expect("same context");
        }
        acc
    }

    pub fn to_record(&self) -> ElementRecord {
        ElementRecord {
            top: self.top.clone(),
            bottom: self.bottom.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn from_record(ctx: GroupContext, rec: &ElementRecord) -> Result<Self, WreathError> {
        let bottom = rec
            .bottom
            .iter()
            .map(|s| LaurentPoly::parse(s, ctx.m))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_parts(ctx, rec.top.clone(), bottom)
    }

    /// Parses `a1^2 a2^-3 | <P1> ; <P2> ; ...`. The top part may be `1` or
    /// empty; the bottom part may be omitted for elements of `A`.
    pub fn parse(ctx: GroupContext, text: &str) -> Result<Self, WreathError> {
        let (top_s, bottom_s) = match text.split_once('|') {
            Some((t, b)) => (t, Some(b)),
            None => (text, None),
        };
        let mut top = vec![0i64; ctx.m];
        for tok in top_s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (var, exp) = match tok.split_once('^') {
                Some((v, e)) => (v, e.parse::<i64>().map_err(|_| bad(tok))?),
                None => (tok, 1),
            };
            let idx: usize = var
                .strip_prefix('a')
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| bad(tok))?;
            if idx == 0 || idx > ctx.m {
                return Err(bad(tok));
            }
            top[idx - 1] += exp;
        }
        let bottom = match bottom_s {
            None => vec![LaurentPoly::zero(ctx.m); ctx.n],
            Some(b) => {
                let parts: Vec<&str> = b.split(';').collect();
                if parts.len() != ctx.n {
                    return Err(WreathError::Parse(format!(
                        "expected {} bottom coordinates, found {}",
                        ctx.n,
                        parts.len()
                    )));
                }
                parts
                    .iter()
                    .map(|s| LaurentPoly::parse(s, ctx.m))
                    .collect::<Result<Vec<_>, _>>()?
            }
        };
        Self::from_parts(ctx, top, bottom)
    }
}

fn bad(tok: &str) -> WreathError {
    WreathError::Parse(format!("bad top factor `{tok}`"))
}

impl<C: Coeff> fmt::Display for WreathElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let top = Monomial::new(self.top.clone()).fmt_factors(&|i| format!("a{}", i + 1));
        if top.is_empty() {
            f.write_str("1")?;
        } else {
            f.write_str(&top.replace('*', " "))?;
        }
        f.write_str(" | ")?;
        let parts: Vec<String> = self.bottom.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" ; "))
    }
}

impl<'a, C: Coeff> Mul<&'a WreathElement<C>> for &'a WreathElement<C> {
    type Output = WreathElement<C>;
    fn mul(self, rhs: &'a WreathElement<C>) -> WreathElement<C> {
        WreathElement::mul(self, rhs).expect("operands share a context")
    }
}

/// Machine-readable element: `{ "top": [...], "bottom": ["<poly>", ...] }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRecord {
    pub top: Vec<i64>,
    pub bottom: Vec<String>,
}

/// An element as `(γ, f)` with `f: Z^m -> Z^n` finitely supported.
///
/// `b_j^(c·a^α)` is the function with value `c·e_j` at `α`. The top group
/// acts by `f^a(x) = f(x·a^-1)`, which moves the support by `+a`; with this
/// orientation the map to normal forms is an isomorphism.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FnRepElement<C> {
    pub top: Vec<i64>,
    pub support: BTreeMap<Vec<i64>, Vec<C>>,
}

impl<C: Coeff> FnRepElement<C> {
    pub fn identity(ctx: GroupContext) -> Self {
        FnRepElement {
            top: vec![0; ctx.m],
            support: BTreeMap::new(),
        }
    }

    fn accumulate(support: &mut BTreeMap<Vec<i64>, Vec<C>>, at: Vec<i64>, value: &[C]) {
        let slot = support
            .entry(at.clone())
            .or_insert_with(|| vec![C::zero(); value.len()]);
        for (s, v) in slot.iter_mut().zip(value) {
            *s = s.clone() + v.clone();
        }
        if slot.iter().all(num_traits::Zero::is_zero) {
            support.remove(&at);
        }
    }

    /// `(γ1, f1)(γ2, f2) = (γ1 + γ2, f1^γ2 + f2)`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut support = BTreeMap::new();
        for (x, v) in &self.support {
            let moved: Vec<i64> = x.iter().zip(&other.top).map(|(a, b)| a + b).collect();
            Self::accumulate(&mut support, moved, v);
        }
        for (x, v) in &other.support {
            Self::accumulate(&mut support, x.clone(), v);
        }
        FnRepElement {
            top: self.top.iter().zip(&other.top).map(|(a, b)| a + b).collect(),
            support,
        }
    }
}

pub fn to_fnrep<C: Coeff>(g: &WreathElement<C>) -> FnRepElement<C> {
    let n = g.bottom.len();
    let mut support: BTreeMap<Vec<i64>, Vec<C>> = BTreeMap::new();
    for (j, p) in g.bottom.iter().enumerate() {
        for (m, c) in p.terms() {
            let slot = support
                .entry(m.exponents().to_vec())
                .or_insert_with(|| vec![C::zero(); n]);
            slot[j] = c.clone();
        }
    }
    FnRepElement {
        top: g.top.clone(),
        support,
    }
}

pub fn from_fnrep<C: Coeff>(ctx: GroupContext, f: &FnRepElement<C>) -> Result<WreathElement<C>, WreathError> {
    let mut bottom = vec![LaurentPoly::zero(ctx.m); ctx.n];
    for (x, v) in &f.support {
        if x.len() != ctx.m || v.len() != ctx.n {
            return Err(WreathError::ContextMismatch);
        }
        for (p, c) in bottom.iter_mut().zip(v) {
            p.add_term(Monomial::new(x.clone()), c.clone());
        }
    }
    WreathElement::from_parts(ctx, f.top.clone(), bottom)
}
