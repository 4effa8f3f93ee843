//! The two interpretations: `G` inside `Z` through coordinate tuples
//! `(γ_1..γ_m, ν(P_1)..ν(P_n))`, and `Z` inside `G` on a cyclic subgroup
//! `⟨a⟩`, together with the coordinate map that rebuilds `g` from powers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::definable::basis::BasisCandidate;
use crate::definable::{cyc_member, div_witness, exp_g, integer_ratio, DefinableError};
use crate::encoding::{nu_decode, nu_encode, EncodingError, IntCode};
use crate::scalar::Coeff;
use crate::wreath::{GroupContext, WreathElement, WreathError};

/// Largest `|k|` for which powers are materialized as group elements;
/// beyond it the exponent arithmetic is done on the integers directly.
pub const MATERIALIZE_LIMIT: i64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("not in the domain: {0}")]
    NotInDomain(String),
    #[error("not a basis")]
    NotABasis,
    #[error(transparent)]
    NotACode(#[from] EncodingError),
    #[error("powers use different bases")]
    BaseMismatch,
    #[error("base must lie outside N")]
    BadBase,
    #[error("exponent does not fit a machine integer")]
    ExponentOverflow,
    #[error(transparent)]
    Definable(#[from] DefinableError),
    #[error(transparent)]
    Wreath(#[from] WreathError),
}

type Result<T> = std::result::Result<T, InterpError>;

/// `s(g) = (γ_1, ..., γ_m, ν(P_1), ..., ν(P_n))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntTuple {
    pub top: Vec<i64>,
    pub codes: Vec<IntCode>,
}

impl IntTuple {
    pub fn entries(&self) -> Vec<BigInt> {
        self.top
            .iter()
            .map(|&x| BigInt::from(x))
            .chain(self.codes.iter().map(|c| BigInt::from(c.0.clone())))
            .collect()
    }

    pub fn from_entries(ctx: GroupContext, entries: &[BigInt]) -> Result<Self> {
        if entries.len() != ctx.m() + ctx.n() {
            return Err(InterpError::NotInDomain(format!(
                "expected {} entries, found {}",
                ctx.m() + ctx.n(),
                entries.len()
            )));
        }
        let top = entries[..ctx.m()]
            .iter()
            .map(|x| x.to_i64().ok_or(InterpError::ExponentOverflow))
            .collect::<Result<Vec<_>>>()?;
        let codes = entries[ctx.m()..]
            .iter()
            .map(|x| {
                x.to_biguint()
                    .map(IntCode)
                    .ok_or_else(|| InterpError::NotInDomain("negative code".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntTuple { top, codes })
    }

    /// Parses whitespace- or comma-separated integers.
    pub fn parse(ctx: GroupContext, text: &str) -> Result<Self> {
        let entries = text
            .split(|c: char| c.is_whitespace() || c == ',' || c == '(' || c == ')')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|_| InterpError::NotInDomain(format!("`{s}` is not an integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(ctx, &entries)
    }
}

impl fmt::Display for IntTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries().iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

pub fn delta_encode<C: Coeff>(g: &WreathElement<C>) -> IntTuple {
    IntTuple {
        top: g.top().to_vec(),
        codes: g.bottom().iter().map(nu_encode).collect(),
    }
}

pub fn delta_decode<C: Coeff>(ctx: GroupContext, t: &IntTuple) -> Result<WreathElement<C>> {
    if t.top.len() != ctx.m() || t.codes.len() != ctx.n() {
        return Err(InterpError::NotInDomain("tuple arity".into()));
    }
    let bottom = t
        .codes
        .iter()
        .map(|k| nu_decode(k, ctx.m()).map_err(|e| InterpError::NotInDomain(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    Ok(WreathElement::from_parts(ctx, t.top.clone(), bottom)?)
}

/// Membership in `S_(p,ν)`.
pub fn in_domain(ctx: GroupContext, t: &IntTuple) -> bool {
    delta_decode::<BigInt>(ctx, t).is_ok()
}

pub fn identity_tuple(ctx: GroupContext) -> IntTuple {
    delta_encode(&WreathElement::<BigInt>::identity(ctx))
}

/// Multiplication transported to tuples.
pub fn tuple_mul(ctx: GroupContext, x: &IntTuple, y: &IntTuple) -> Result<IntTuple> {
    let g: WreathElement<BigInt> = delta_decode(ctx, x)?;
    let h: WreathElement<BigInt> = delta_decode(ctx, y)?;
    Ok(delta_encode(&g.mul(&h)?))
}

pub fn tuple_inv(ctx: GroupContext, x: &IntTuple) -> Result<IntTuple> {
    let g: WreathElement<BigInt> = delta_decode(ctx, x)?;
    Ok(delta_encode(&g.inv()))
}

/// The integer `k` read as `base^k`. Only the exponent is stored, so huge
/// codes never turn into huge group elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntAsPower<C> {
    base: WreathElement<C>,
    exponent: BigInt,
}

impl<C: Coeff> IntAsPower<C> {
    pub fn new(base: WreathElement<C>, exponent: BigInt) -> Result<Self> {
        if base.in_base_group() {
            return Err(InterpError::BadBase);
        }
        Ok(IntAsPower { base, exponent })
    }

    pub fn base(&self) -> &WreathElement<C> {
        &self.base
    }

    pub fn exponent(&self) -> &BigInt {
        &self.exponent
    }

    fn small_exponent(&self) -> Option<i64> {
        self.exponent.to_i64().filter(|k| k.abs() <= MATERIALIZE_LIMIT)
    }

    /// `base^k` as a group element.
    pub fn element(&self) -> Result<WreathElement<C>> {
        let k = self.exponent.to_i64().ok_or(InterpError::ExponentOverflow)?;
        Ok(exp_g(&self.base, k)?)
    }

    /// Discrete logarithm: the unique `k` with `g = base^k`.
    pub fn from_element(base: WreathElement<C>, g: &WreathElement<C>) -> Result<Self> {
        if base.in_base_group() {
            return Err(InterpError::BadBase);
        }
        let k = if base.in_top_group() {
            cyc_member(&base, g)?.exponent
        } else {
            integer_ratio(g.top(), base.top()).filter(|&t| exp_g(&base, t).map(|p| p == *g).unwrap_or(false))
        };
        let k = k.ok_or_else(|| InterpError::NotInDomain("element is not a power of the base".into()))?;
        Ok(IntAsPower {
            base,
            exponent: BigInt::from(k),
        })
    }

    fn same_base(&self, other: &Self) -> Result<()> {
        if self.base == other.base {
            Ok(())
        } else {
            Err(InterpError::BaseMismatch)
        }
    }

    /// `a^k ⊕ a^ℓ = a^k · a^ℓ`.
    pub fn gamma_add(&self, other: &Self) -> Result<Self> {
        self.same_base(other)?;
        if let (Some(_), Some(_)) = (self.small_exponent(), other.small_exponent()) {
            let product = self.element()?.mul(&other.element()?)?;
            return Self::from_element(self.base.clone(), &product);
        }
        Ok(IntAsPower {
            base: self.base.clone(),
            exponent: &self.exponent + &other.exponent,
        })
    }

    /// `a^ℓ |* a^k`, true iff `ℓ | k`; decided by solving
    /// `[b_1, a^k] = [z, a^ℓ]` when the base lies in `A`.
    pub fn gamma_divides(&self, other: &Self) -> Result<bool> {
        self.same_base(other)?;
        let (l, k) = (&self.exponent, &other.exponent);
        if l.is_zero() {
            return Ok(k.is_zero());
        }
        if self.base.in_top_group() {
            if let (Some(l), Some(k)) = (self.small_exponent(), other.small_exponent()) {
                return Ok(div_witness(&self.base, k, l)?.is_some());
            }
        }
        Ok(k.is_multiple_of(l))
    }

    /// `a^k ⊗ a^ℓ = a^(kℓ)`.
    pub fn gamma_mul(&self, other: &Self) -> Result<Self> {
        self.same_base(other)?;
        Ok(IntAsPower {
            base: self.base.clone(),
            exponent: &self.exponent * &other.exponent,
        })
    }
}

/// Every entry of `t` as a power of `base`.
pub fn lift_tuple<C: Coeff>(
    base: &WreathElement<C>,
    t: &IntTuple,
) -> Result<(Vec<IntAsPower<C>>, Vec<IntAsPower<C>>)> {
    let gammas = t
        .top
        .iter()
        .map(|&x| IntAsPower::new(base.clone(), BigInt::from(x)))
        .collect::<Result<Vec<_>>>()?;
    let codes = t
        .codes
        .iter()
        .map(|k| IntAsPower::new(base.clone(), BigInt::from(k.0.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok((gammas, codes))
}

/// Coordinates of `g` relative to a basis `q`, encoded as a tuple.
pub fn basis_tuple<C: Coeff>(q: &BasisCandidate<C>, g: &WreathElement<C>) -> Result<IntTuple> {
    let (top, polys) = q.coordinates(g)?;
    Ok(IntTuple {
        top,
        codes: polys.iter().map(nu_encode).collect(),
    })
}

/// Rebuilds `g = Π c_i^(γ_i) · Π u_j^(P_j)` from powers of `c_1`, where
/// the exponents of the code powers are `ν`-codes of the `P_j` over
/// `Z[c^±]`.
pub fn lambda_g<C: Coeff>(
    q: &BasisCandidate<C>,
    gammas: &[IntAsPower<C>],
    codes: &[IntAsPower<C>],
) -> Result<WreathElement<C>> {
    if !q.is_valid() {
        return Err(InterpError::NotABasis);
    }
    let base = &q.top[0];
    if gammas.iter().chain(codes).any(|p| p.base() != base) {
        return Err(InterpError::BaseMismatch);
    }
    let m = q.top.len();
    let tops = gammas
        .iter()
        .map(|p| p.exponent().to_i64().ok_or(InterpError::ExponentOverflow))
        .collect::<Result<Vec<_>>>()?;
    let polys = codes
        .iter()
        .map(|p| {
            let k = p
                .exponent()
                .to_biguint()
                .ok_or_else(|| EncodingError::NotACode("negative code".into()))?;
            Ok(nu_decode::<C>(&IntCode(k), m)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(q.element(&tops, &polys)?)
}
