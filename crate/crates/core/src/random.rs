//! Seeded generators for polynomials and group elements.

use rand::Rng;

use crate::condensed::{shift, GsElement, SubsetOfZ};
use crate::laurent::{LaurentPoly, Monomial};
use crate::scalar::Coeff;
use crate::wreath::{GroupContext, WreathElement};

#[derive(Clone, Debug)]
pub struct PolyShape {
    /// Upper bound on the number of terms drawn (cancellation may leave fewer).
    pub max_terms: usize,
    /// Exponents are drawn from `[-max_exp, max_exp]` (or `[0, max_exp]`).
    pub max_exp: i64,
    pub max_coeff: i64,
    pub laurent: bool,
}

impl Default for PolyShape {
    fn default() -> Self {
        PolyShape {
            max_terms: 3,
            max_exp: 4,
            max_coeff: 9,
            laurent: true,
        }
    }
}

impl PolyShape {
    /// Small enough that `ν` codes stay cheap: at most about a dozen entries
    /// in the flattened term list.
    pub fn for_codes(m: usize) -> Self {
        PolyShape {
            max_terms: (12 / (m + 1)).max(1),
            max_exp: 5,
            max_coeff: 9,
            laurent: true,
        }
    }

    pub fn polynomial(max_terms: usize, max_exp: i64) -> Self {
        PolyShape {
            max_terms,
            max_exp,
            max_coeff: 9,
            laurent: false,
        }
    }
}

pub fn random_poly<C: Coeff, R: Rng + ?Sized>(rng: &mut R, m: usize, shape: &PolyShape) -> LaurentPoly<C> {
    let count = rng.gen_range(0..=shape.max_terms);
    let lo = if shape.laurent { -shape.max_exp } else { 0 };
    let mut p = LaurentPoly::zero(m);
    for _ in 0..count {
        let e: Vec<i64> = (0..m).map(|_| rng.gen_range(lo..=shape.max_exp)).collect();
        let mut c = rng.gen_range(1..=shape.max_coeff.max(1));
        if rng.gen_bool(0.5) {
            c = -c;
        }
        p.add_term(Monomial::new(e), C::from_i64_exact(c));
    }
    p
}

/// Like [`random_poly`] but never zero.
pub fn random_nonzero_poly<C: Coeff, R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    shape: &PolyShape,
) -> LaurentPoly<C> {
    loop {
        let p = random_poly(rng, m, shape);
        if !p.is_zero() {
            return p;
        }
    }
}

#[derive(Clone, Debug)]
pub struct ElementShape {
    pub max_top: i64,
    pub poly: PolyShape,
}

impl Default for ElementShape {
    fn default() -> Self {
        ElementShape {
            max_top: 3,
            poly: PolyShape::default(),
        }
    }
}

impl ElementShape {
    pub fn for_codes(m: usize) -> Self {
        ElementShape {
            max_top: 5,
            poly: PolyShape::for_codes(m),
        }
    }
}

pub fn random_top<R: Rng + ?Sized>(rng: &mut R, m: usize, bound: i64) -> Vec<i64> {
    (0..m).map(|_| rng.gen_range(-bound..=bound)).collect()
}

pub fn random_element<C: Coeff, R: Rng + ?Sized>(
    rng: &mut R,
    ctx: GroupContext,
    shape: &ElementShape,
) -> WreathElement<C> {
    let top = random_top(rng, ctx.m(), shape.max_top);
    let bottom = (0..ctx.n()).map(|_| random_poly(rng, ctx.m(), &shape.poly)).collect();
    WreathElement::from_parts(ctx, top, bottom).expect("shapes match the context")
}

pub fn random_base_element<C: Coeff, R: Rng + ?Sized>(
    rng: &mut R,
    ctx: GroupContext,
    shape: &PolyShape,
) -> WreathElement<C> {
    let bottom = (0..ctx.n()).map(|_| random_poly(rng, ctx.m(), shape)).collect();
    WreathElement::from_bottom(ctx, bottom).expect("shapes match the context")
}

/// A nonzero vector, so `a^γ ≠ 1`.
pub fn random_nonzero_top<R: Rng + ?Sized>(rng: &mut R, m: usize, bound: i64) -> Vec<i64> {
    loop {
        let v = random_top(rng, m, bound);
        if v.iter().any(|&x| x != 0) {
            return v;
        }
    }
}

/// A `G_S` element with small exponents and coefficients.
pub fn random_gs_element<C: Coeff, R: Rng + ?Sized>(rng: &mut R) -> GsElement<C> {
    let shape = PolyShape::default();
    GsElement::new(
        rng.gen_range(-3..=3),
        random_poly(rng, 1, &shape),
        random_poly(rng, 1, &shape),
        rng.gen_bool(0.5),
    )
    .expect("one variable")
}

/// A set from one of the five constructors.
pub fn random_subset<R: Rng + ?Sized>(rng: &mut R) -> SubsetOfZ {
    let base = match rng.gen_range(0..3) {
        0 => SubsetOfZ::finite((0..rng.gen_range(0..5)).map(|_| rng.gen_range(-6..=6))),
        1 => {
            let period = rng.gen_range(1..=4u64);
            SubsetOfZ::Periodic {
                period,
                residues: (0..rng.gen_range(1..=period)).map(|_| rng.gen_range(0..period)).collect(),
            }
        }
        _ => SubsetOfZ::Universal,
    };
    match rng.gen_range(0..3) {
        0 => base,
        1 => base.complement(),
        _ => shift(&base, rng.gen_range(-8..=8)),
    }
}
