//! Lower central series of `G`: `G_i = N^(Δ^(i-1))` for `i >= 2`, with
//! `G_i / G_(i+1)` free abelian on the basic commutators
//! `[b_k, a_j1, ..., a_j(i-1)]`, `j1 <= ... <= j(i-1)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::scalar::Coeff;
use crate::wreath::{GroupContext, WreathElement};

pub const DEFAULT_MAX_LEVEL: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LcsError {
    #[error("level {level} outside 2..={cap}")]
    LevelOutOfRange { level: usize, cap: usize },
    #[error("element is not in G_{level}")]
    NotInLevel { level: usize },
}

/// `[b_k, a_j1, ..., a_j(i-1)]` with one-based, non-decreasing indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasicCommutator {
    pub k: usize,
    pub js: Vec<usize>,
}

impl fmt::Display for BasicCommutator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[b{}", self.k)?;
        for j in &self.js {
            write!(f, ",a{j}")?;
        }
        f.write_str("]")
    }
}

impl BasicCommutator {
    pub fn level(&self) -> usize {
        self.js.len() + 1
    }

    /// The commutator as a group element, built from group commutators.
    pub fn element<C: Coeff>(&self, ctx: GroupContext) -> WreathElement<C> {
        let rest: Vec<_> = self.js.iter().map(|&j| WreathElement::a(ctx, j - 1)).collect();
        WreathElement::b(ctx, self.k - 1)
            .comm_chain(&rest)
            .expect("generators share the context")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcsCoordinates {
    pub level: usize,
    /// Nonzero coefficients only.
    pub coords: BTreeMap<BasicCommutator, BigInt>,
}

pub fn in_lcs<C: Coeff>(g: &WreathElement<C>, i: usize) -> bool {
    if i <= 1 {
        return true;
    }
    g.in_base_group()
        && g
            .bottom()
            .iter()
            .all(|p| p.in_delta_power(i - 1))
}

fn check_level(i: usize, cap: usize) -> Result<(), LcsError> {
    if i < 2 || i > cap {
        Err(LcsError::LevelOutOfRange { level: i, cap })
    } else {
        Ok(())
    }
}

/// Image of `g` in `G_i / G_(i+1)`.
pub fn lcs_coords<C: Coeff>(g: &WreathElement<C>, i: usize) -> Result<LcsCoordinates, LcsError> {
    lcs_coords_capped(g, i, DEFAULT_MAX_LEVEL)
}

pub fn lcs_coords_capped<C: Coeff>(
    g: &WreathElement<C>,
    i: usize,
    cap: usize,
) -> Result<LcsCoordinates, LcsError> {
    check_level(i, cap)?;
    if !in_lcs(g, i) {
        return Err(LcsError::NotInLevel { level: i });
    }
    let mut coords = BTreeMap::new();
    for (k, p) in g.bottom().iter().enumerate() {
        for (mono, c) in p.y_homogeneous_part(i as i64 - 1).terms() {
            let js = mono
                .exponents()
                .iter()
                .enumerate()
                .flat_map(|(j, &e)| std::iter::repeat(j + 1).take(e as usize))
                .collect();
            coords.insert(BasicCommutator { k: k + 1, js }, c.to_bigint());
        }
    }
    Ok(LcsCoordinates { level: i, coords })
}

/// `n · C(m + i - 2, i - 1)`.
pub fn lcs_rank(ctx: GroupContext, i: usize) -> Result<BigInt, LcsError> {
    check_level(i, usize::MAX)?;
    let multisets = num_integer::binomial(BigInt::from(ctx.m() + i - 2), BigInt::from(i - 1));
    Ok(multisets * ctx.n())
}

/// All basic commutators of level `i`, in lexicographic order.
pub fn basic_commutators(ctx: GroupContext, i: usize) -> Vec<BasicCommutator> {
    fn extend(m: usize, len: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for j in start..=m {
            cur.push(j);
            extend(m, len, j, cur, out);
            cur.pop();
        }
    }
    let mut multisets = Vec::new();
    extend(ctx.m(), i.saturating_sub(1), 1, &mut Vec::new(), &mut multisets);
    (1..=ctx.n())
        .flat_map(|k| multisets.iter().map(move |js| BasicCommutator { k, js: js.clone() }))
        .collect()
}
