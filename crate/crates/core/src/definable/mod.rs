//! Decision procedures for the definable predicates on `G`, each paired
//! with an explicit witness where the predicate is existential.

pub mod basis;

use thiserror::Error;

use crate::laurent::{discriminate, LaurentError, LaurentPoly, Monomial};
use crate::lcs::in_lcs;
use crate::scalar::Coeff;
use crate::wreath::{WreathElement, WreathError};

pub use basis::{is_basis, is_top_basis};

/// Box bound used by refutation searches.
pub const DEFAULT_SEARCH_BUDGET: i64 = 1 << 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DefinableError {
    #[error("the identity has no centralizer class")]
    IdentityElement,
    #[error("bad parameter: {0}")]
    BadParameter(&'static str),
    #[error("element is not in the base group N")]
    NotInBaseGroup,
    #[error("element is not in the commutant G_2")]
    NotInCommutant,
    #[error("no refuting point within box bound {bound}")]
    SearchBudgetExceeded { bound: i64 },
    #[error("internal check failed: {0}")]
    Inconsistent(&'static str),
    #[error(transparent)]
    Wreath(#[from] WreathError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

type Result<T> = std::result::Result<T, DefinableError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CentralizerClass {
    /// `C_G(g) = N`.
    BaseGroup,
    /// `C_G(g) = A`.
    TopGroup,
    Neither,
}

pub fn in_n<C: Coeff>(g: &WreathElement<C>) -> bool {
    g.in_base_group()
}

pub fn centralizer_class<C: Coeff>(g: &WreathElement<C>) -> Result<CentralizerClass> {
    if g.is_identity() {
        Err(DefinableError::IdentityElement)
    } else if g.in_base_group() {
        Ok(CentralizerClass::BaseGroup)
    } else if g.in_top_group() {
        Ok(CentralizerClass::TopGroup)
    } else {
        Ok(CentralizerClass::Neither)
    }
}

fn require_top_nontrivial<C: Coeff>(a: &WreathElement<C>) -> Result<()> {
    if !a.in_top_group() || a.is_identity() {
        Err(DefinableError::BadParameter("expected a nontrivial element of A"))
    } else {
        Ok(())
    }
}

fn require_base<C: Coeff>(u: &WreathElement<C>) -> Result<()> {
    if u.in_base_group() {
        Ok(())
    } else {
        Err(DefinableError::NotInBaseGroup)
    }
}

/// `a^σ - 1 = (a^τ - 1) · W`, or `None`.
fn binomial_quotient<C: Coeff>(sigma: &Monomial, tau: &Monomial) -> Result<Option<LaurentPoly<C>>> {
    match LaurentPoly::<C>::binomial(sigma).binomial_divide(tau) {
        Ok(w) => Ok(Some(w)),
        Err(LaurentError::NotDivisible) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// `b_1^q`.
fn b1_power<C: Coeff>(like: &WreathElement<C>, q: LaurentPoly<C>) -> WreathElement<C> {
    let ctx = like.context();
    let mut bottom = vec![LaurentPoly::zero(ctx.m()); ctx.n()];
    bottom[0] = q;
    WreathElement::from_bottom(ctx, bottom).expect("shapes match")
}

/// The integer `t` with `top = t · base`, if any.
pub fn integer_ratio(top: &[i64], base: &[i64]) -> Option<i64> {
    let (i, &b) = base.iter().enumerate().find(|(_, &b)| b != 0)?;
    if top[i] % b != 0 {
        return None;
    }
    let t = top[i] / b;
    top.iter()
        .zip(base)
        .all(|(&x, &y)| x == t * y)
        .then_some(t)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycVerdict<C> {
    pub member: bool,
    /// `t` with `g = a^t`, from the direct route.
    pub exponent: Option<i64>,
    /// `z ∈ N` with `[b_1, g] = [z, a]`.
    pub witness: Option<WreathElement<C>>,
}

/// Route (i): `g ∈ A` and `g.top` is an integer multiple of `a.top`.
pub fn cyc_direct<C: Coeff>(a: &WreathElement<C>, g: &WreathElement<C>) -> Result<Option<i64>> {
    require_top_nontrivial(a)?;
    if g.context() != a.context() {
        return Err(WreathError::ContextMismatch.into());
    }
    if !g.in_top_group() {
        return Ok(None);
    }
    Ok(integer_ratio(g.top(), a.top()))
}

/// Route (ii): `[g, a] = 1` and `[b_1, g] = [z, a]` for some `z ∈ N`.
/// The witness equation is re-checked by group multiplication.
pub fn cyc_witness<C: Coeff>(
    a: &WreathElement<C>,
    g: &WreathElement<C>,
) -> Result<Option<WreathElement<C>>> {
    require_top_nontrivial(a)?;
    if !g.comm(a)?.is_identity() {
        return Ok(None);
    }
    // the centralizer of a nontrivial element of A is A
    if !g.in_top_group() {
        return Err(DefinableError::Inconsistent("centralizer of a ∈ A left A"));
    }
    let Some(q) = binomial_quotient::<C>(&g.top_monomial(), &a.top_monomial())? else {
        return Ok(None);
    };
    let z = b1_power(a, q);
    let b1 = WreathElement::b(a.context(), 0);
    if b1.comm(g)? != z.comm(a)? {
        return Err(DefinableError::Inconsistent("cyclic membership witness"));
    }
    Ok(Some(z))
}

/// Route (iii) at one `u ∈ N`: `[g, a] = 1` and `[u, g] = [z, a]` is
/// solvable in `N`. Membership requires this for every `u`.
pub fn cyc_solvable_for<C: Coeff>(
    a: &WreathElement<C>,
    g: &WreathElement<C>,
    u: &WreathElement<C>,
) -> Result<Option<WreathElement<C>>> {
    require_top_nontrivial(a)?;
    require_base(u)?;
    if !g.comm(a)?.is_identity() || !g.in_top_group() {
        return Ok(None);
    }
    let g_minus_one = LaurentPoly::<C>::binomial(&g.top_monomial());
    let mut z = Vec::with_capacity(u.bottom().len());
    for p in u.bottom() {
        match p.try_mul(&g_minus_one)?.binomial_divide(&a.top_monomial()) {
            Ok(w) => z.push(w),
            Err(LaurentError::NotDivisible) => return Ok(None),
            Err(e) => return Err(e.into()),
        }
    }
    let z = WreathElement::from_bottom(u.context(), z)?;
    if u.comm(g)? != z.comm(a)? {
        return Err(DefinableError::Inconsistent("route (iii) witness"));
    }
    Ok(Some(z))
}

/// Decides `g ∈ ⟨a⟩` by routes (i) and (ii) and requires them to agree.
pub fn cyc_member<C: Coeff>(a: &WreathElement<C>, g: &WreathElement<C>) -> Result<CycVerdict<C>> {
    let exponent = cyc_direct(a, g)?;
    let witness = cyc_witness(a, g)?;
    if exponent.is_some() != witness.is_some() {
        return Err(DefinableError::Inconsistent("cyclic membership routes disagree"));
    }
    Ok(CycVerdict {
        member: exponent.is_some(),
        exponent,
        witness,
    })
}

/// Solves `[b_1, a^k] = [z, a^ℓ]` for `z ∈ N`. Solvable exactly when
/// `ℓ | k`, since the equation reads `b_1^(a^k - 1) = z^(a^ℓ - 1)`.
pub fn div_witness<C: Coeff>(
    a: &WreathElement<C>,
    k: i64,
    l: i64,
) -> Result<Option<WreathElement<C>>> {
    require_top_nontrivial(a)?;
    if l == 0 {
        return Err(DefinableError::BadParameter("ℓ must be nonzero"));
    }
    let base = a.top_monomial();
    let Some(q) = binomial_quotient::<C>(&base.scale(k), &base.scale(l))? else {
        return Ok(None);
    };
    let z = b1_power(a, q);
    let b1 = WreathElement::b(a.context(), 0);
    let ak = WreathElement::from_top(a.context(), base.scale(k).exponents().to_vec())?;
    let al = WreathElement::from_top(a.context(), base.scale(l).exponents().to_vec())?;
    if b1.comm(&ak)? != z.comm(&al)? {
        return Err(DefinableError::Inconsistent("divisibility witness"));
    }
    Ok(Some(z))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpMix<C> {
    pub power: WreathElement<C>,
    /// `w` with `(au)^k = a^k w`.
    pub w: WreathElement<C>,
}

/// `(au)^k = a^k · u^((a^k - 1)/(a - 1))`, with `w` checked to solve
/// `[u, a^k] = [w, a]`.
pub fn exp_mix<C: Coeff>(a: &WreathElement<C>, u: &WreathElement<C>, k: i64) -> Result<ExpMix<C>> {
    require_top_nontrivial(a)?;
    require_base(u)?;
    let base = a.top_monomial();
    let geometric = binomial_quotient::<C>(&base.scale(k), &base)?
        .ok_or(DefinableError::Inconsistent("a - 1 divides a^k - 1"))?;
    let w = u.module_act(&geometric)?;
    let ak = WreathElement::from_top(a.context(), base.scale(k).exponents().to_vec())?;
    if u.comm(&ak)? != w.comm(a)? {
        return Err(DefinableError::Inconsistent("exp_mix witness equation"));
    }
    Ok(ExpMix {
        power: ak.mul(&w)?,
        w,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpN<C> {
    /// `u^k`.
    pub power: WreathElement<C>,
    /// `v` with `(au)^k = a^k u^k [v, a]`.
    pub v: WreathElement<C>,
}

/// `u^k` together with the witness `v = u^(((a^k-1)/(a-1) - k)/(a-1))`.
pub fn exp_n<C: Coeff>(a: &WreathElement<C>, u: &WreathElement<C>, k: i64) -> Result<ExpN<C>> {
    require_top_nontrivial(a)?;
    require_base(u)?;
    let base = a.top_monomial();
    let m = base.nvars();
    let geometric = binomial_quotient::<C>(&base.scale(k), &base)?
        .ok_or(DefinableError::Inconsistent("a - 1 divides a^k - 1"))?;
    let shifted = geometric.try_sub(&LaurentPoly::constant(m, C::from_i64_exact(k)))?;
    let q = shifted
        .binomial_divide(&base)
        .map_err(|_| DefinableError::Inconsistent("a - 1 divides the shifted geometric sum"))?;
    let power = u.module_act(&LaurentPoly::constant(m, C::from_i64_exact(k)))?;
    let v = u.module_act(&q)?;
    if !exp_n_holds(a, u, k, &power, &v)? {
        return Err(DefinableError::Inconsistent("exp_N witness identity"));
    }
    Ok(ExpN { power, v })
}

/// Checks `(au)^k = a^k · x · [v, a]` by group multiplication.
pub fn exp_n_holds<C: Coeff>(
    a: &WreathElement<C>,
    u: &WreathElement<C>,
    k: i64,
    x: &WreathElement<C>,
    v: &WreathElement<C>,
) -> Result<bool> {
    let lhs = exp_mix(a, u, k)?.power;
    let ak = WreathElement::from_top(a.context(), a.top_monomial().scale(k).exponents().to_vec())?;
    let rhs = ak.mul(x)?.mul(&v.comm(a)?)?;
    Ok(lhs == rhs)
}

/// Whether some `v ∈ N` satisfies `(au)^k = a^k · x · [v, a]`, i.e. whether
/// `a - 1` divides every coordinate of `(au)^k`'s base part minus `x`.
pub fn exp_n_witness_exists<C: Coeff>(
    a: &WreathElement<C>,
    u: &WreathElement<C>,
    k: i64,
    x: &WreathElement<C>,
) -> Result<bool> {
    require_base(x)?;
    let w = exp_mix(a, u, k)?.w;
    for (p, q) in w.bottom().iter().zip(x.bottom()) {
        match p.try_sub(q)?.binomial_divide(&a.top_monomial()) {
            Ok(_) => {}
            Err(LaurentError::NotDivisible) => return Ok(false),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(true)
}

/// `g^k` for any `g`, via `exp_mix` when `g ∉ N`.
pub fn exp_g<C: Coeff>(g: &WreathElement<C>, k: i64) -> Result<WreathElement<C>> {
    let u = g.bottom_part();
    if g.in_base_group() {
        let m = g.context().m();
        return Ok(u.module_act(&LaurentPoly::constant(m, C::from_i64_exact(k)))?);
    }
    Ok(exp_mix(&g.top_part(), &u, k)?.power)
}

/// `g^q = h` for `g, h ∈ N`.
pub fn act_decide<C: Coeff>(g: &WreathElement<C>, h: &WreathElement<C>, q: &LaurentPoly<C>) -> Result<bool> {
    require_base(g)?;
    require_base(h)?;
    Ok(g.module_act(q)? == *h)
}

/// `g^s h^-1 ∈ N^(I_α)` where `I_α` is generated by `a_i - α_i`.
pub fn congruent_mod_ialpha<C: Coeff>(
    g: &WreathElement<C>,
    h: &WreathElement<C>,
    s: &C,
    alpha: &[i64],
) -> Result<bool> {
    require_base(g)?;
    require_base(h)?;
    if alpha.iter().any(|&x| x == 0) {
        // a_i is a unit congruent to 0: the ideal is everything
        return Ok(true);
    }
    for (p, q) in g.bottom().iter().zip(h.bottom()) {
        let diff = p.scale(s).try_sub(q)?;
        if !diff.canonical_fraction().numerator.evaluate_polynomial(alpha)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For `q = P / a^β`, `g^q = h` iff `g^P = h^(a^β)`; returns `(P, h^(a^β))`.
fn clear_denominator<C: Coeff>(
    h: &WreathElement<C>,
    q: &LaurentPoly<C>,
) -> Result<(LaurentPoly<C>, WreathElement<C>)> {
    let frac = q.canonical_fraction();
    let shift = LaurentPoly::monomial(frac.denominator.clone());
    Ok((frac.numerator, h.module_act(&shift)?))
}

/// The congruence of `g^q = h` at `α`: `g^(P(α)) ≡ h^(a^β) mod N^(I_α)`.
pub fn act_congruent_at<C: Coeff>(
    g: &WreathElement<C>,
    h: &WreathElement<C>,
    q: &LaurentPoly<C>,
    alpha: &[i64],
) -> Result<bool> {
    require_base(h)?;
    if alpha.iter().any(|&x| x == 0) {
        return congruent_mod_ialpha(g, h, &C::zero(), alpha);
    }
    let (p, h2) = clear_denominator(h, q)?;
    congruent_mod_ialpha(g, &h2, &p.evaluate_polynomial(alpha)?, alpha)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refutation {
    Confirmed,
    /// A point at which the congruence fails.
    Refuted(Vec<i64>),
}

pub fn act_refute<C: Coeff>(
    g: &WreathElement<C>,
    h: &WreathElement<C>,
    q: &LaurentPoly<C>,
    budget: i64,
) -> Result<Refutation> {
    if act_decide(g, h, q)? {
        return Ok(Refutation::Confirmed);
    }
    let (p, h2) = clear_denominator(h, q)?;
    let target = g.module_act(&p)?.mul(&h2.inv())?;
    let m = g.context().m();
    let d = target
        .bottom()
        .iter()
        .find(|x| !x.is_zero())
        .ok_or(DefinableError::Inconsistent("nonzero difference"))?;
    let alpha = discriminate(&[LaurentPoly::zero(m), d.clone()], budget).map_err(|e| match e {
        LaurentError::SearchBudgetExceeded { bound } => DefinableError::SearchBudgetExceeded { bound },
        other => other.into(),
    })?;
    if act_congruent_at(g, h, q, &alpha)? {
        return Err(DefinableError::Inconsistent("refuting point re-verification"));
    }
    Ok(Refutation::Refuted(alpha))
}

/// `x y^-1 ∈ G_4` for `x, y ∈ G_2`.
pub fn congruent_mod_g4<C: Coeff>(x: &WreathElement<C>, y: &WreathElement<C>) -> Result<bool> {
    if !in_lcs(x, 2) || !in_lcs(y, 2) {
        return Err(DefinableError::NotInCommutant);
    }
    Ok(in_lcs(&x.mul(&y.inv())?, 4))
}

/// `[u, a, d^k] ≡ [u, a^ℓ, d] mod G_4`, which holds iff `k = ℓ` when `u ≠ 1`.
pub fn le6_congruence<C: Coeff>(
    u: &WreathElement<C>,
    a: &WreathElement<C>,
    d: &WreathElement<C>,
    k: i64,
    l: i64,
) -> Result<bool> {
    require_top_nontrivial(a)?;
    require_top_nontrivial(d)?;
    require_base(u)?;
    let lhs = u.comm_chain(&[a.clone(), exp_g(d, k)?])?;
    let rhs = u.comm_chain(&[exp_g(a, l)?, d.clone()])?;
    congruent_mod_g4(&lhs, &rhs)
}

/// `a^k ↦ d^k`, certified by the mod-`G_4` criterion with `u = b_1`.
pub fn iso_transfer<C: Coeff>(a: &WreathElement<C>, d: &WreathElement<C>, k: i64) -> Result<WreathElement<C>> {
    require_top_nontrivial(a)?;
    require_top_nontrivial(d)?;
    let b1 = WreathElement::b(a.context(), 0);
    if !le6_congruence(&b1, a, d, k, k)? {
        return Err(DefinableError::Inconsistent("isomorphism transfer"));
    }
    exp_g(d, k)
}

/// `{(a^k, d^(2^k)) : 0 <= k <= kmax}`; the exponent `2^k` is formed in
/// `Z_a` and carried over by [`iso_transfer`].
pub fn power_of_two_pairs<C: Coeff>(
    a: &WreathElement<C>,
    d: &WreathElement<C>,
    kmax: u32,
) -> Result<Vec<(WreathElement<C>, WreathElement<C>)>> {
    let mut out = Vec::new();
    let mut two_k: i64 = 1;
    for k in 0..=kmax {
        out.push((exp_g(a, k as i64)?, iso_transfer(a, d, two_k)?));
        two_k = two_k
            .checked_mul(2)
            .ok_or(DefinableError::BadParameter("exponent overflow"))?;
    }
    Ok(out)
}

/// `Π d_i^(γ_i)` for `d_i ∈ A`.
pub fn prod_a<C: Coeff>(ds: &[WreathElement<C>], gammas: &[i64]) -> Result<WreathElement<C>> {
    if ds.len() != gammas.len() {
        return Err(DefinableError::BadParameter("length mismatch"));
    }
    let ctx = ds
        .first()
        .map(WreathElement::context)
        .ok_or(DefinableError::BadParameter("empty product"))?;
    let mut top = vec![0i64; ctx.m()];
    for (d, &g) in ds.iter().zip(gammas) {
        if !d.in_top_group() {
            return Err(DefinableError::BadParameter("factor outside A"));
        }
        for (t, x) in top.iter_mut().zip(d.top()) {
            *t += g * x;
        }
    }
    Ok(WreathElement::from_top(ctx, top)?)
}
