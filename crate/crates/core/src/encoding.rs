//! Numbering of integer tuples and of Laurent polynomials.
//!
//! * `pair` is the Cantor pairing `(x+y)(x+y+1)/2 + y`.
//! * Tuples are zigzagged entrywise, folded with `pair` from the right and
//!   tagged with their length: `(v1,...,vL) ↦ pair(L-1, pair(z1, pair(z2, ... zL)))`.
//! * `ν(q) = pair(τ(u_q), τ(β))` where `q = P / a^β` is the canonical
//!   fraction and `u_q` lists `(coefficient, exponents)` of `P` in descending
//!   deglex order. The zero polynomial is the single pseudo-term `(0, 0⃗)`.
//!
//! Codes grow doubly exponentially in the tuple length, since each fold
//! roughly squares the accumulator.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Roots;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::{LaurentPoly, Monomial};
use crate::scalar::Coeff;

/// Default cap on decoded tuple lengths.
pub const DEFAULT_MAX_TUPLE_LEN: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodingError {
    #[error("cannot encode the empty tuple")]
    EmptyTuple,
    #[error("decoded tuple length {len} exceeds the limit {limit}")]
    TooLong { len: BigUint, limit: usize },
    #[error("not a code: {0}")]
    NotACode(String),
    #[error("coefficient does not fit the target type")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
}

/// A natural number in the image of `ν`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct IntCode(pub BigUint);

impl fmt::Display for IntCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for IntCode {
    type Err = EncodingError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .parse::<BigUint>()
            .map(IntCode)
            .map_err(|_| EncodingError::Parse(format!("`{s}` is not a natural number")))
    }
}

impl From<IntCode> for String {
    fn from(c: IntCode) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for IntCode {
    type Error = EncodingError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

pub fn pair(x: &BigUint, y: &BigUint) -> BigUint {
    let s = x + y;
    let tri = (&s * (&s + 1u32)) >> 1;
    tri + y
}

pub fn unpair(z: &BigUint) -> (BigUint, BigUint) {
    // largest w with w(w+1)/2 <= z
    let mut w: BigUint = Roots::sqrt(&((z << 3) + 1u32));
    w = (w - 1u32) >> 1;
    let tri = (&w * (&w + 1u32)) >> 1;
    let y = z - tri;
    let x = w - &y;
    (x, y)
}

pub fn zigzag(v: &BigInt) -> BigUint {
    match v.sign() {
        Sign::Minus => (v.magnitude() << 1) - 1u32,
        _ => v.magnitude() << 1,
    }
}

pub fn unzigzag(z: &BigUint) -> BigInt {
    if z.bit(0) {
        -BigInt::from((z + 1u32) >> 1)
    } else {
        BigInt::from(z >> 1)
    }
}

pub fn tuple_encode(v: &[BigInt]) -> Result<BigUint, EncodingError> {
    let (last, rest) = v.split_last().ok_or(EncodingError::EmptyTuple)?;
    let acc = rest
        .iter()
        .rev()
        .fold(zigzag(last), |acc, x| pair(&zigzag(x), &acc));
    Ok(pair(&BigUint::from(v.len() - 1), &acc))
}

/// Inverse of [`tuple_encode`], refusing lengths above `max_len`.
pub fn tuple_decode_bounded(k: &BigUint, max_len: usize) -> Result<Vec<BigInt>, EncodingError> {
    let (len_minus_one, mut acc) = unpair(k);
    let len = match len_minus_one.to_usize() {
        Some(l) if l < max_len => l + 1,
        _ => {
            return Err(EncodingError::TooLong {
                len: len_minus_one + 1u32,
                limit: max_len,
            })
        }
    };
    let mut out = Vec::with_capacity(len);
    for _ in 1..len {
        let (x, rest) = unpair(&acc);
        out.push(unzigzag(&x));
        acc = rest;
    }
    out.push(unzigzag(&acc));
    Ok(out)
}

pub fn tuple_decode(k: &BigUint) -> Result<Vec<BigInt>, EncodingError> {
    tuple_decode_bounded(k, DEFAULT_MAX_TUPLE_LEN)
}

/// The flattened term list `u_q` and denominator exponents `v_q = β`.
pub fn nu_components<C: Coeff>(q: &LaurentPoly<C>) -> (Vec<BigInt>, Vec<BigInt>) {
    let m = q.nvars();
    let frac = q.canonical_fraction();
    let mut u = Vec::new();
    if frac.numerator.is_zero() {
        u.extend(std::iter::repeat(BigInt::zero()).take(m + 1));
    }
    for (mono, c) in frac.numerator.terms().rev() {
        u.push(c.to_bigint());
        u.extend(mono.exponents().iter().map(|&e| BigInt::from(e)));
    }
    let v = frac.denominator.iter().map(|&b| BigInt::from(b)).collect();
    (u, v)
}

pub fn nu_encode<C: Coeff>(q: &LaurentPoly<C>) -> IntCode {
    let (u, v) = nu_components(q);
    let ku = tuple_encode(&u).expect("u is nonempty");
    let kv = tuple_encode(&v).expect("m >= 1");
    IntCode(pair(&ku, &kv))
}

fn not_code(why: &str) -> EncodingError {
    EncodingError::NotACode(why.to_string())
}

fn small_nonneg(v: &BigInt) -> Result<i64, EncodingError> {
    if v.is_negative() {
        return Err(not_code("negative exponent"));
    }
    v.to_i64().ok_or_else(|| not_code("exponent out of range"))
}

/// Inverse of [`nu_encode`] on its image; every other natural is rejected.
/// Always terminates: a valid term list of length `L` forces the code to
/// have at least `L - m - 2` bits, so longer claimed lengths are refused
/// before unfolding.
pub fn nu_decode<C: Coeff>(k: &IntCode, m: usize) -> Result<LaurentPoly<C>, EncodingError> {
    let (ku, kv) = unpair(&k.0);
    let v = match tuple_decode_bounded(&kv, m + 1) {
        Ok(v) if v.len() == m => v,
        _ => return Err(not_code("denominator tuple has the wrong length")),
    };
    let beta = v.iter().map(small_nonneg).collect::<Result<Vec<_>, _>>()?;
    let max_len = usize::try_from(ku.bits()).unwrap_or(usize::MAX).saturating_add(m + 3);
    let u = tuple_decode_bounded(&ku, max_len).map_err(|_| not_code("term list too long"))?;
    if u.len() % (m + 1) != 0 {
        return Err(not_code("term list arity"));
    }
    let mut terms: Vec<(Monomial, C)> = Vec::with_capacity(u.len() / (m + 1));
    for chunk in u.chunks(m + 1) {
        let exps = chunk[1..].iter().map(small_nonneg).collect::<Result<Vec<_>, _>>()?;
        let c = C::from_bigint(&chunk[0]).ok_or(EncodingError::Overflow)?;
        terms.push((Monomial::new(exps), c));
    }
    if terms.len() == 1 && terms[0].1.is_zero() {
        return if terms[0].0.is_one() && beta.iter().all(|&b| b == 0) {
            Ok(LaurentPoly::zero(m))
        } else {
            Err(not_code("malformed zero pseudo-term"))
        };
    }
    if terms.iter().any(|(_, c)| c.is_zero()) {
        return Err(not_code("zero coefficient"));
    }
    if terms.windows(2).any(|w| w[0].0 <= w[1].0) {
        return Err(not_code("terms not in strictly descending deglex order"));
    }
    for (i, &b) in beta.iter().enumerate() {
        if b > 0 && terms.iter().all(|(mono, _)| mono.exponents()[i] > 0) {
            return Err(not_code("denominator is not minimal"));
        }
    }
    let shift = Monomial::new(beta.iter().map(|b| -b).collect());
    Ok(LaurentPoly::from_terms(
        m,
        terms
            .into_iter()
            .map(|(mono, c)| (mono.mul(&shift).exponents().to_vec(), c)),
    ))
}

/// Whether `k` lies in `ν(ZA)` for `m` variables.
pub fn is_code(k: &IntCode, m: usize) -> bool {
    nu_decode::<BigInt>(k, m).is_ok()
}

/// `ν(0)`.
pub fn zero_code(m: usize) -> IntCode {
    nu_encode(&LaurentPoly::<BigInt>::zero(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_poly, PolyShape};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    type P = LaurentPoly<BigInt>;

    fn n(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pair(&n(0), &n(0)), n(0));
        assert_eq!(pair(&n(1), &n(0)), n(1));
        assert_eq!(pair(&n(0), &n(1)), n(2));
        for x in 0..=100 {
            for y in 0..=100 {
                assert_eq!(unpair(&pair(&n(x), &n(y))), (n(x), n(y)));
            }
        }
        // the first codes enumerate the diagonals in order
        for z in 0..500u64 {
            let (x, y) = unpair(&n(z));
            assert_eq!(pair(&x, &y), n(z));
        }
    }

    #[test]
    fn zigzag_is_bijective() {
        let expect = [0i64, -1, 1, -2, 2, -3];
        for (z, v) in expect.iter().enumerate() {
            assert_eq!(unzigzag(&n(z as u64)), BigInt::from(*v));
            assert_eq!(zigzag(&BigInt::from(*v)), n(z as u64));
        }
    }

    #[test]
    fn tuple_examples() {
        assert_eq!(tuple_encode(&ints(&[0])).unwrap(), n(0));
        assert_eq!(tuple_encode(&[]), Err(EncodingError::EmptyTuple));
        // (1, -1): zig = (2, 1); pair(2, 1) = 7; pair(1, 7) = 43
        assert_eq!(tuple_encode(&ints(&[1, -1])).unwrap(), n(43));
        assert_eq!(tuple_decode(&n(43)).unwrap(), ints(&[1, -1]));
        assert!(matches!(
            tuple_decode_bounded(&n(1_000_000), 4),
            Err(EncodingError::TooLong { .. })
        ));
    }

    #[test]
    fn tuple_codes_injective() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut seen = HashSet::new();
        let mut codes = HashSet::new();
        while seen.len() < 10_000 {
            use rand::Rng;
            let len = rng.gen_range(1..=6);
            let v: Vec<i64> = (0..len).map(|_| rng.gen_range(-20..=20)).collect();
            if seen.insert(v.clone()) {
                let k = tuple_encode(&ints(&v)).unwrap();
                assert_eq!(tuple_decode(&k).unwrap(), ints(&v));
                assert!(codes.insert(k));
            }
        }
    }

    #[test]
    fn nu_examples() {
        let zero = P::zero(2);
        assert_eq!(nu_decode::<BigInt>(&nu_encode(&zero), 2).unwrap(), zero);
        let q = P::parse("3*a1^2*a2^-1 - 5", 2).unwrap();
        let (u, v) = nu_components(&q);
        assert_eq!(u, ints(&[3, 2, 0, -5, 0, 1]));
        assert_eq!(v, ints(&[0, 1]));
        assert_eq!(nu_decode::<BigInt>(&nu_encode(&q), 2).unwrap(), q);
        // the same code is generally not valid for a different arity
        assert!(nu_decode::<BigInt>(&nu_encode(&q), 1).is_err());
    }

    #[test]
    fn nu_rejects_non_canonical_lists() {
        let enc = |u: &[i64], v: &[i64]| {
            IntCode(pair(
                &tuple_encode(&ints(u)).unwrap(),
                &tuple_encode(&ints(v)).unwrap(),
            ))
        };
        let ok = |u: &[i64], v: &[i64]| nu_decode::<BigInt>(&enc(u, v), 1).is_ok();
        assert!(ok(&[1, 2, 1, 0], &[0]));
        assert!(!ok(&[1, 0, 1, 2], &[0]), "ascending order");
        assert!(!ok(&[1, 2, 1, 2], &[0]), "repeated monomial");
        assert!(!ok(&[1, 2, 0, 0], &[0]), "zero coefficient");
        assert!(!ok(&[1, 2, 1, 1], &[1]), "non-minimal denominator");
        assert!(!ok(&[1, 2, 1], &[0]), "arity");
        assert!(!ok(&[1, -1], &[0]), "negative exponent");
        assert!(!ok(&[0, 0], &[1]), "zero with denominator");
        assert!(!ok(&[1, 0], &[0, 0]), "wrong denominator length");
        assert!(ok(&[0, 0], &[0]));
    }

    #[test]
    fn exhaustive_small_codes() {
        for m in 1..=3 {
            let mut members = 0;
            for k in 0..=10_000u64 {
                let code = IntCode(n(k));
                if let Ok(q) = nu_decode::<BigInt>(&code, m) {
                    assert_eq!(nu_encode(&q), code);
                    members += 1;
                }
            }
            assert!(members > 0);
        }
    }

    #[test]
    fn huge_claimed_lengths_terminate() {
        // u claims 10^6 entries of zero: code pair(10^6 - 1, 0)
        let ku = pair(&n(999_999), &n(0));
        let k = IntCode(pair(&ku, &n(0)));
        assert!(nu_decode::<BigInt>(&k, 1).is_err());
    }

    #[test]
    fn random_polynomials_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut codes = HashSet::new();
        let mut polys = HashSet::new();
        for i in 0..3000 {
            let m = 1 + i % 3;
            let shape = PolyShape::for_codes(m);
            let q: P = random_poly(&mut rng, m, &shape);
            let k = nu_encode(&q);
            assert_eq!(nu_decode::<BigInt>(&k, m).unwrap(), q);
            if m == 2 && polys.insert(q.clone()) {
                assert!(codes.insert(k));
            }
        }
    }

    proptest! {
        #[test]
        fn tuple_roundtrip(v in prop::collection::vec(-1000i64..1000, 1..7)) {
            let k = tuple_encode(&ints(&v)).unwrap();
            prop_assert_eq!(tuple_decode(&k).unwrap(), ints(&v));
        }

        #[test]
        fn decode_is_partial_inverse(k in 0u64..5_000_000, m in 1usize..4) {
            let code = IntCode(n(k));
            if let Ok(q) = nu_decode::<BigInt>(&code, m) {
                prop_assert_eq!(nu_encode(&q), code);
            }
        }
    }
}
