//! The central extensions `G_S` of `Z^2 wr Z` by `Z_2`, subsets of `Z`
//! under the shift action, and comparison of marked groups on balls.
//!
//! Elements are kept in the normal form `t^τ a^P b^Q c^ε` where
//! `a^P = Π a_i^(P_i)`, `a_i = a^(t^i)`, and likewise for `b`. The only
//! nontrivial commutators are `[a_i, b_j] = c` for `j - i ∈ S`, so moving
//! `b^Q` left past `a^P` costs `c^β(Q,P)` with
//! `β(Q,P) = Σ_(j-i ∈ S) P_i Q_j mod 2`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::laurent::{parse_with_prefix, LaurentPoly, Monomial};
use crate::scalar::Coeff;
use crate::wreath::{GroupContext, WreathElement};

/// Largest ball radius accepted by default; a radius-`r` ball has
/// `(6^(r+1) - 1) / 5` words.
pub const DEFAULT_RADIUS_CAP: usize = 6;

/// Largest `|n|` tried when looking for a shift that agrees on a window.
pub const DEFAULT_SHIFT_BUDGET: i64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CondensedError {
    #[error("radius {radius} above cap {cap}")]
    RadiusTooLarge { radius: usize, cap: usize },
    #[error("bad set spec: {0}")]
    BadSet(String),
    #[error("bad word: {0}")]
    BadWord(String),
    #[error("bad element: {0}")]
    BadElement(String),
}

type Result<T> = std::result::Result<T, CondensedError>;

/// A subset of `Z` given by a total, deterministic membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubsetOfZ {
    Finite(BTreeSet<i64>),
    /// `{i : i mod period ∈ residues}`.
    Periodic { period: u64, residues: BTreeSet<u64> },
    Complement(Box<SubsetOfZ>),
    /// `n∘S = {s - n : s ∈ S}`.
    Shift(i64, Box<SubsetOfZ>),
    /// Bit `|i|` of the concatenation of all nonempty binary words, shortest
    /// first and lexicographic within a length. Every finite pattern shows
    /// up on the positive side, so the shift orbit is dense.
    Universal,
}

/// Bit `p` of `0 1 00 01 10 11 000 ...`. Logarithmic in `p`.
fn universal_bit(p: u64) -> bool {
    let mut p = p as u128;
    let mut len = 1u32;
    loop {
        let block = (len as u128) << len;
        if p < block {
            break;
        }
        p -= block;
        len += 1;
    }
    let word = p / len as u128;
    let pos = (p % len as u128) as u32;
    (word >> (len - 1 - pos)) & 1 == 1
}

impl SubsetOfZ {
    pub fn empty() -> Self {
        SubsetOfZ::Finite(BTreeSet::new())
    }

    pub fn finite(items: impl IntoIterator<Item = i64>) -> Self {
        SubsetOfZ::Finite(items.into_iter().collect())
    }

    /// Multiples of `period`.
    pub fn multiples(period: u64) -> Self {
        assert!(period > 0, "period must be positive");
        SubsetOfZ::Periodic {
            period,
            residues: BTreeSet::from([0]),
        }
    }

    pub fn complement(self) -> Self {
        match self {
            SubsetOfZ::Complement(inner) => *inner,
            other => SubsetOfZ::Complement(Box::new(other)),
        }
    }

    pub fn contains(&self, i: i64) -> bool {
        match self {
            SubsetOfZ::Finite(s) => s.contains(&i),
            SubsetOfZ::Periodic { period, residues } => {
                residues.contains(&(i.rem_euclid(*period as i64) as u64))
            }
            SubsetOfZ::Complement(inner) => !inner.contains(i),
            SubsetOfZ::Shift(n, inner) => inner.contains(i.saturating_add(*n)),
            SubsetOfZ::Universal => universal_bit(i.unsigned_abs()),
        }
    }

    /// Members in `[-w, w]`, ascending.
    pub fn window(&self, w: i64) -> Vec<i64> {
        (-w..=w).filter(|&i| self.contains(i)).collect()
    }

    pub fn agrees_on(&self, other: &SubsetOfZ, w: i64) -> bool {
        (-w..=w).all(|i| self.contains(i) == other.contains(i))
    }

    /// Parses `finite:{0,3}`, `periodic:2`, `periodic:3:{0,1}`, `universal`,
    /// `shift:<n>:<spec>` and `complement:<spec>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let bad = |why: &str| CondensedError::BadSet(format!("{why} in `{spec}`"));
        let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
        match head {
            "universal" if rest.is_empty() => Ok(SubsetOfZ::Universal),
            "finite" => Ok(SubsetOfZ::Finite(parse_int_set(rest).ok_or_else(|| bad("bad list"))?)),
            "periodic" => {
                let (p, residues) = rest.split_once(':').unwrap_or((rest, "{0}"));
                let period: u64 = p.trim().parse().map_err(|_| bad("bad period"))?;
                if period == 0 {
                    return Err(bad("zero period"));
                }
                let residues = parse_int_set(residues)
                    .ok_or_else(|| bad("bad residues"))?
                    .into_iter()
                    .map(|r| r.rem_euclid(period as i64) as u64)
                    .collect();
                Ok(SubsetOfZ::Periodic { period, residues })
            }
            "shift" => {
                let (n, inner) = rest.split_once(':').ok_or_else(|| bad("missing set"))?;
                let n: i64 = n.trim().parse().map_err(|_| bad("bad shift"))?;
                Ok(shift(&SubsetOfZ::parse(inner)?, n))
            }
            "complement" => Ok(SubsetOfZ::parse(rest)?.complement()),
            _ => Err(bad("unknown constructor")),
        }
    }
}

fn parse_int_set(text: &str) -> Option<BTreeSet<i64>> {
    let inner = text.trim();
    let inner = inner.strip_prefix('{').and_then(|s| s.strip_suffix('}')).unwrap_or(inner);
    inner
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().ok())
        .collect()
}

fn fmt_int_set<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

impl fmt::Display for SubsetOfZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubsetOfZ::Finite(s) => write!(f, "finite:{}", fmt_int_set(s)),
            SubsetOfZ::Periodic { period, residues } => {
                if residues.len() == 1 && residues.contains(&0) {
                    write!(f, "periodic:{period}")
                } else {
                    write!(f, "periodic:{period}:{}", fmt_int_set(residues))
                }
            }
            SubsetOfZ::Complement(inner) => write!(f, "complement:{inner}"),
            SubsetOfZ::Shift(n, inner) => write!(f, "shift:{n}:{inner}"),
            SubsetOfZ::Universal => f.write_str("universal"),
        }
    }
}

/// `n∘S`. Nested shifts are merged, so `shift(shift(S, n), -n) == S`.
pub fn shift(s: &SubsetOfZ, n: i64) -> SubsetOfZ {
    let (base, total) = match s {
        SubsetOfZ::Shift(m, inner) => ((**inner).clone(), m + n),
        other => (other.clone(), n),
    };
    if total == 0 {
        base
    } else {
        SubsetOfZ::Shift(total, Box::new(base))
    }
}

/// `t^τ a^P b^Q c^ε` with `P, Q ∈ Z[t^±]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GsElement<C> {
    t_exp: i64,
    a_poly: LaurentPoly<C>,
    b_poly: LaurentPoly<C>,
    center: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GsRecord {
    pub t: i64,
    pub a: String,
    pub b: String,
    pub c: u8,
}

fn t_name(_: usize) -> String {
    "t".to_string()
}

impl<C: Coeff> GsElement<C> {
    pub fn new(t_exp: i64, a_poly: LaurentPoly<C>, b_poly: LaurentPoly<C>, center: bool) -> Result<Self> {
        if a_poly.nvars() != 1 || b_poly.nvars() != 1 {
            return Err(CondensedError::BadElement("polynomials must be in the single variable t".into()));
        }
        Ok(GsElement {
            t_exp,
            a_poly,
            b_poly,
            center,
        })
    }

    pub fn identity() -> Self {
        GsElement {
            t_exp: 0,
            a_poly: LaurentPoly::zero(1),
            b_poly: LaurentPoly::zero(1),
            center: false,
        }
    }

    /// `a_i = a^(t^i)`.
    pub fn a_i(i: i64) -> Self {
        GsElement {
            a_poly: LaurentPoly::monomial(vec![i]),
            ..Self::identity()
        }
    }

    /// `b_j = b^(t^j)`.
    pub fn b_j(j: i64) -> Self {
        GsElement {
            b_poly: LaurentPoly::monomial(vec![j]),
            ..Self::identity()
        }
    }

    pub fn a() -> Self {
        Self::a_i(0)
    }

    pub fn b() -> Self {
        Self::b_j(0)
    }

    pub fn t() -> Self {
        GsElement {
            t_exp: 1,
            ..Self::identity()
        }
    }

    pub fn c() -> Self {
        GsElement {
            center: true,
            ..Self::identity()
        }
    }

    pub fn t_exp(&self) -> i64 {
        self.t_exp
    }

    pub fn a_poly(&self) -> &LaurentPoly<C> {
        &self.a_poly
    }

    pub fn b_poly(&self) -> &LaurentPoly<C> {
        &self.b_poly
    }

    pub fn center_bit(&self) -> bool {
        self.center
    }

    pub fn is_identity(&self) -> bool {
        self.t_exp == 0 && self.a_poly.is_zero() && self.b_poly.is_zero() && !self.center
    }

    /// Image in `G_S / ⟨c⟩ ≅ Z^2 wr Z`, as an element with `m = 1, n = 2`.
    pub fn to_wreath(&self) -> WreathElement<C> {
        let ctx = GroupContext::new(1, 2).expect("valid ranks");
        WreathElement::from_parts(ctx, vec![self.t_exp], vec![self.a_poly.clone(), self.b_poly.clone()])
            .expect("shapes match")
    }

    pub fn to_record(&self) -> GsRecord {
        GsRecord {
            t: self.t_exp,
            a: self.a_poly.fmt_with(&t_name),
            b: self.b_poly.fmt_with(&t_name),
            c: self.center as u8,
        }
    }

    pub fn from_record(rec: &GsRecord) -> Result<Self> {
        let poly = |s: &str| {
            parse_with_prefix::<C>(s, 1, "t").map_err(|e| CondensedError::BadElement(e.to_string()))
        };
        let center = match rec.c {
            0 => false,
            1 => true,
            _ => return Err(CondensedError::BadElement("center bit must be 0 or 1".into())),
        };
        Self::new(rec.t, poly(&rec.a)?, poly(&rec.b)?, center)
    }

    /// Parses `t^τ | P ; Q | ε`, the format written by `Display`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || CondensedError::BadElement(format!("expected `t^k | P ; Q | e`, found `{text}`"));
        let parts: Vec<&str> = text.split('|').map(str::trim).collect();
        let [top, polys, center] = parts[..] else {
            return Err(bad());
        };
        let t = match top {
            "1" => 0,
            "t" => 1,
            s => s.strip_prefix("t^").and_then(|e| e.trim().parse().ok()).ok_or_else(bad)?,
        };
        let (a, b) = polys.split_once(';').ok_or_else(bad)?;
        let c = center.parse().map_err(|_| bad())?;
        Self::from_record(&GsRecord {
            t,
            a: a.trim().to_string(),
            b: b.trim().to_string(),
            c,
        })
    }
}

impl<C: Coeff> fmt::Display for GsElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.t_exp {
            0 => f.write_str("1")?,
            1 => f.write_str("t")?,
            k => write!(f, "t^{k}")?,
        }
        write!(
            f,
            " | {} ; {} | {}",
            self.a_poly.fmt_with(&t_name),
            self.b_poly.fmt_with(&t_name),
            self.center as u8
        )
    }
}

fn odd_support<C: Coeff>(p: &LaurentPoly<C>) -> Vec<i64> {
    p.terms()
        .filter(|(_, c)| c.is_odd())
        .map(|(m, _)| m.exponents()[0])
        .collect()
}

/// `β(Q, P) = Σ_(j-i ∈ S) P_i Q_j mod 2`.
pub fn beta<C: Coeff>(q: &LaurentPoly<C>, p: &LaurentPoly<C>, s: &SubsetOfZ) -> bool {
    let ps = odd_support(p);
    let mut parity = false;
    for j in odd_support(q) {
        for &i in &ps {
            if s.contains(j - i) {
                parity = !parity;
            }
        }
    }
    parity
}

pub fn gs_mul<C: Coeff>(x: &GsElement<C>, y: &GsElement<C>, s: &SubsetOfZ) -> GsElement<C> {
    let shift = Monomial::new(vec![y.t_exp]);
    let a1 = x.a_poly.mul_monomial(&shift);
    let b1 = x.b_poly.mul_monomial(&shift);
    let center = x.center ^ y.center ^ beta(&b1, &y.a_poly, s);
    GsElement {
        t_exp: x.t_exp + y.t_exp,
        a_poly: &a1 + &y.a_poly,
        b_poly: &b1 + &y.b_poly,
        center,
    }
}

pub fn gs_inv<C: Coeff>(x: &GsElement<C>, s: &SubsetOfZ) -> GsElement<C> {
    let back = Monomial::new(vec![-x.t_exp]);
    let a = x.a_poly.mul_monomial(&back);
    let b = x.b_poly.mul_monomial(&back);
    // x · x⁻¹ picks up β(b, a) from reordering; cancel it
    let center = x.center ^ beta(&b, &a, s);
    GsElement {
        t_exp: -x.t_exp,
        a_poly: -a,
        b_poly: -b,
        center,
    }
}

pub fn gs_pow<C: Coeff>(x: &GsElement<C>, k: i64, s: &SubsetOfZ) -> GsElement<C> {
    let base = if k < 0 { gs_inv(x, s) } else { x.clone() };
    let mut acc = GsElement::identity();
    let mut sq = base;
    let mut e = k.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc = gs_mul(&acc, &sq, s);
        }
        sq = gs_mul(&sq, &sq, s);
        e >>= 1;
    }
    acc
}

/// `[x, y] = x⁻¹ y⁻¹ x y`.
pub fn gs_comm<C: Coeff>(x: &GsElement<C>, y: &GsElement<C>, s: &SubsetOfZ) -> GsElement<C> {
    let left = gs_mul(&gs_inv(x, s), &gs_inv(y, s), s);
    gs_mul(&gs_mul(&left, x, s), y, s)
}

/// `x^y = y⁻¹ x y`.
pub fn gs_conj<C: Coeff>(x: &GsElement<C>, y: &GsElement<C>, s: &SubsetOfZ) -> GsElement<C> {
    gs_mul(&gs_mul(&gs_inv(y, s), x, s), y, s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    A,
    B,
    T,
    C,
}

/// A word as letter powers, e.g. `A b^3 t^-2 c`; upper case `A`, `B`, `T`
/// are inverses and `1` is the empty word.
pub type Word = Vec<(Letter, i64)>;

pub fn parse_word(text: &str) -> Result<Word> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut word = Vec::new();
    let bad = |pos: usize| CondensedError::BadWord(format!("unexpected input at byte {pos} of `{text}`"));
    while pos < bytes.len() {
        let ch = bytes[pos];
        pos += 1;
        let (letter, sign) = match ch {
            b' ' | b'\t' | b'*' | b'.' | b'1' => continue,
            b'a' => (Letter::A, 1),
            b'A' => (Letter::A, -1),
            b'b' => (Letter::B, 1),
            b'B' => (Letter::B, -1),
            b't' => (Letter::T, 1),
            b'T' => (Letter::T, -1),
            b'c' | b'C' => (Letter::C, 1),
            _ => return Err(bad(pos - 1)),
        };
        let mut exp = 1i64;
        if bytes.get(pos) == Some(&b'^') {
            pos += 1;
            let start = pos;
            if bytes.get(pos) == Some(&b'-') {
                pos += 1;
            }
            while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
                pos += 1;
            }
            exp = text[start..pos].parse().map_err(|_| bad(start))?;
        }
        word.push((letter, sign * exp));
    }
    Ok(word)
}

pub fn fmt_word(word: &[(Letter, i64)]) -> String {
    if word.is_empty() {
        return "1".to_string();
    }
    let parts: Vec<String> = word
        .iter()
        .map(|&(l, e)| {
            let ch = match l {
                Letter::A => 'a',
                Letter::B => 'b',
                Letter::T => 't',
                Letter::C => 'c',
            };
            if e == 1 {
                ch.to_string()
            } else {
                format!("{ch}^{e}")
            }
        })
        .collect();
    parts.join(" ")
}

fn letter_power<C: Coeff>(letter: Letter, e: i64) -> GsElement<C> {
    let k = C::from_i64_exact(e);
    let lone = |k: C| LaurentPoly::constant(1, k);
    match letter {
        Letter::A => GsElement {
            a_poly: lone(k),
            ..GsElement::identity()
        },
        Letter::B => GsElement {
            b_poly: lone(k),
            ..GsElement::identity()
        },
        Letter::T => GsElement {
            t_exp: e,
            ..GsElement::identity()
        },
        Letter::C => GsElement {
            center: e.rem_euclid(2) == 1,
            ..GsElement::identity()
        },
    }
}

/// Left-to-right product; solves the word problem of `G_S`.
pub fn gs_eval_word<C: Coeff>(word: &[(Letter, i64)], s: &SubsetOfZ) -> GsElement<C> {
    word.iter()
        .fold(GsElement::identity(), |acc, &(l, e)| gs_mul(&acc, &letter_power(l, e), s))
}

/// The word `[a, b^(t^i)] = a⁻¹ t⁻ⁱ b⁻¹ tⁱ a t⁻ⁱ b tⁱ`.
pub fn comm_word(i: i64) -> Word {
    let mut w = vec![(Letter::A, -1)];
    let conj_b = |e: i64| {
        let mut v = Vec::new();
        if i != 0 {
            v.push((Letter::T, -i));
        }
        v.push((Letter::B, e));
        if i != 0 {
            v.push((Letter::T, i));
        }
        v
    };
    w.extend(conj_b(-1));
    w.push((Letter::A, 1));
    w.extend(conj_b(1));
    w
}

/// `{i ∈ [-r, r] : [a, b^(t^i)] = 1 in G_S}`.
pub fn center_fingerprint(s: &SubsetOfZ, r: i64) -> Vec<i64> {
    (-r..=r)
        .filter(|&i| gs_eval_word::<BigInt>(&comm_word(i), s).is_identity())
        .collect()
}

/// The marked generating triple `(a, b_n, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Marking<C> {
    pub a: GsElement<C>,
    pub b: GsElement<C>,
    pub t: GsElement<C>,
}

impl<C: Coeff> Marking<C> {
    pub fn standard() -> Self {
        Self::shifted(0)
    }

    pub fn shifted(n: i64) -> Self {
        Marking {
            a: GsElement::a(),
            b: GsElement::b_j(n),
            t: GsElement::t(),
        }
    }
}

/// Which words of length at most `radius` name the same element, reduced to
/// a digest of the first-occurrence labels in shortlex order over
/// `a, A, b, B, t, T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallFingerprint {
    pub radius: usize,
    pub words: usize,
    pub classes: usize,
    pub digest: String,
}

pub fn ball_fingerprint(s: &SubsetOfZ, r: usize) -> Result<BallFingerprint> {
    ball_fingerprint_marked::<BigInt>(s, &Marking::standard(), r, DEFAULT_RADIUS_CAP)
}

pub fn ball_fingerprint_marked<C: Coeff>(
    s: &SubsetOfZ,
    marking: &Marking<C>,
    r: usize,
    cap: usize,
) -> Result<BallFingerprint> {
    if r > cap {
        return Err(CondensedError::RadiusTooLarge { radius: r, cap });
    }
    let gens = [
        marking.a.clone(),
        gs_inv(&marking.a, s),
        marking.b.clone(),
        gs_inv(&marking.b, s),
        marking.t.clone(),
        gs_inv(&marking.t, s),
    ];
    let mut first: HashMap<GsElement<C>, u32> = HashMap::new();
    let mut hasher = Sha256::new();
    hasher.update((r as u64).to_le_bytes());
    let mut label = |g: &GsElement<C>, index: u32, hasher: &mut Sha256| {
        let l = *first.entry(g.clone()).or_insert(index);
        hasher.update(l.to_le_bytes());
    };
    let mut level = vec![GsElement::identity()];
    let mut index = 0u32;
    label(&level[0], index, &mut hasher);
    for _ in 0..r {
        let mut next = Vec::with_capacity(level.len() * gens.len());
        for w in &level {
            for g in &gens {
                index += 1;
                let x = gs_mul(w, g, s);
                label(&x, index, &mut hasher);
                next.push(x);
            }
        }
        level = next;
    }
    let classes = first.len();
    Ok(BallFingerprint {
        radius: r,
        words: index as usize + 1,
        classes,
        digest: format!("{:x}", hasher.finalize()),
    })
}

/// `(G_S, (a, b_n, t))` and `(G_(n∘S), (a, b_0, t))` have the same
/// radius-`r` ball.
pub fn iso_check(s: &SubsetOfZ, n: i64, r: usize) -> Result<bool> {
    let left = ball_fingerprint_marked::<BigInt>(s, &Marking::shifted(n), r, DEFAULT_RADIUS_CAP)?;
    let right = ball_fingerprint_marked::<BigInt>(&shift(s, n), &Marking::standard(), r, DEFAULT_RADIUS_CAP)?;
    Ok(left == right)
}

/// Some `i ∈ [-w, w]` in `S △ T`, searched outward from 0; `None` when the
/// sets agree on the window. Then `[a, b^(t^i)]` is trivial in exactly one
/// of `G_S`, `G_T`.
pub fn injectivity_witness(s: &SubsetOfZ, t: &SubsetOfZ, w: i64) -> Option<i64> {
    std::iter::once(0)
        .chain((1..=w).flat_map(|k| [-k, k]))
        .find(|&i| s.contains(i) != t.contains(i))
}

/// Re-checks a separation index through the word problem of both groups.
pub fn verify_separation(s: &SubsetOfZ, t: &SubsetOfZ, i: i64) -> bool {
    let w = comm_word(i);
    gs_eval_word::<BigInt>(&w, s).is_identity() != gs_eval_word::<BigInt>(&w, t).is_identity()
}

/// Smallest `|n|`, positive first, with `n∘S = S` on `[-w, w]`.
pub fn find_agreeing_shift(s: &SubsetOfZ, w: i64, max_shift: i64) -> Option<i64> {
    let pattern: Vec<bool> = (-w..=w).map(|i| s.contains(i)).collect();
    let agrees = |n: i64| (-w..=w).zip(&pattern).all(|(i, &p)| s.contains(i + n) == p);
    (1..=max_shift).flat_map(|n| [n, -n]).find(|&n| agrees(n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemoRow {
    pub radius: usize,
    /// Half-width of the agreement window, `2r`.
    pub window: i64,
    pub shift: Option<i64>,
    pub separation: Option<i64>,
    pub fingerprints_equal: bool,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CondensationReport {
    pub set: String,
    pub rows: Vec<DemoRow>,
}

impl CondensationReport {
    pub fn all_verified(&self) -> bool {
        self.rows.iter().all(|r| r.verified)
    }
}

/// For each `r <= r_max`, a shift `n ≠ 0` with `n∘S` equal to `S` on
/// `[-2r, 2r]`, hence indistinguishable from `G_S` on radius-`r` balls,
/// yet a different set. Rows with `shift: None` mean the search failed,
/// which is what happens for finite sets.
pub fn condensation_demo(s: &SubsetOfZ, r_max: usize, max_shift: i64) -> Result<CondensationReport> {
    if r_max > DEFAULT_RADIUS_CAP {
        return Err(CondensedError::RadiusTooLarge {
            radius: r_max,
            cap: DEFAULT_RADIUS_CAP,
        });
    }
    let mut rows = Vec::new();
    for r in 1..=r_max {
        let window = 2 * r as i64;
        let mut row = DemoRow {
            radius: r,
            window,
            shift: None,
            separation: None,
            fingerprints_equal: false,
            verified: false,
        };
        if let Some(n) = find_agreeing_shift(s, window, max_shift) {
            let moved = shift(s, n);
            row.shift = Some(n);
            row.fingerprints_equal = ball_fingerprint(s, r)? == ball_fingerprint(&moved, r)?;
            let mut w = 2 * window + 2;
            while row.separation.is_none() && w <= 4 * max_shift {
                row.separation = injectivity_witness(s, &moved, w);
                w *= 2;
            }
            row.verified = row.fingerprints_equal
                && row.separation.is_some_and(|i| i.abs() > window && verify_separation(s, &moved, i));
        }
        rows.push(row);
    }
    Ok(CondensationReport {
        set: s.to_string(),
        rows,
    })
}

/// Relators of the presentation in generators `(a, b_n, t)` for
/// `|i| <= bound`, evaluated in `G_S`; returns the names of those that do
/// not vanish.
pub fn presentation_violations(s: &SubsetOfZ, n: i64, bound: i64) -> Vec<String> {
    type E = GsElement<BigInt>;
    let mk = Marking::<BigInt>::shifted(n);
    let (a, b, t) = (&mk.a, &mk.b, &mk.t);
    let moved = shift(s, n);
    let conj_t = |x: &E, i: i64| gs_conj(x, &gs_pow(t, i, s), s);
    let k = |i: i64| gs_comm(a, &conj_t(b, i), s);
    let mut bad = Vec::new();
    let mut check = |name: String, x: E| {
        if !x.is_identity() {
            bad.push(name);
        }
    };
    let in_moved: Vec<i64> = (-bound..=bound).filter(|&j| moved.contains(j)).collect();
    for i in -bound..=bound {
        check(format!("[a,a^t^{i}]"), gs_comm(a, &conj_t(a, i), s));
        check(format!("[b,b^t^{i}]"), gs_comm(b, &conj_t(b, i), s));
        let ki = k(i);
        check(format!("[a,k{i}]"), gs_comm(a, &ki, s));
        check(format!("[b,k{i}]"), gs_comm(b, &ki, s));
        check(format!("[t,k{i}]"), gs_comm(t, &ki, s));
        check(format!("k{i}^2"), gs_mul(&ki, &ki, s));
        if !moved.contains(i) {
            check(format!("k{i}"), ki.clone());
        }
        for &l in &in_moved {
            if moved.contains(i) {
                check(format!("k{i}^-1 k{l}"), gs_mul(&gs_inv(&ki, s), &k(l), s));
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_gs_element, random_subset};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type G = GsElement<BigInt>;

    fn set(spec: &str) -> SubsetOfZ {
        SubsetOfZ::parse(spec).unwrap()
    }

    fn word(text: &str, s: &SubsetOfZ) -> G {
        gs_eval_word(&parse_word(text).unwrap(), s)
    }

    #[test]
    fn universal_sequence_prefix() {
        // 0 1 | 00 01 10 11 | 000 ...
        let bits: String = (0..11).map(|p| if universal_bit(p) { '1' } else { '0' }).collect();
        assert_eq!(bits, "01000110110");
        let u = SubsetOfZ::Universal;
        assert!(u.contains(1) && u.contains(-1) && !u.contains(0));
        // every 5-bit pattern occurs on the positive side
        let seq: Vec<bool> = (0..400).map(universal_bit).collect();
        for pat in 0u32..32 {
            let p: Vec<bool> = (0..5).map(|k| (pat >> (4 - k)) & 1 == 1).collect();
            assert!(seq.windows(5).any(|w| w == p.as_slice()), "pattern {pat:05b}");
        }
    }

    #[test]
    fn set_specs() {
        for spec in [
            "finite:{0,3}",
            "finite:{}",
            "periodic:2",
            "periodic:3:{0,1}",
            "universal",
            "shift:-2:finite:{0}",
            "complement:periodic:2",
        ] {
            assert_eq!(set(spec).to_string(), spec);
        }
        assert_eq!(set("shift:2:finite:{0}").window(3), vec![-2]);
        assert_eq!(set("periodic:3:{0,1}").window(3), vec![-3, -2, 0, 1, 3]);
        assert_eq!(set("complement:finite:{0}").window(1), vec![-1, 1]);
        assert!(SubsetOfZ::parse("periodic:0").is_err());
        assert!(SubsetOfZ::parse("finite:{x}").is_err());
        assert!(SubsetOfZ::parse("cantor").is_err());
    }

    #[test]
    fn shift_is_an_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..30 {
            let s = random_subset(&mut rng);
            let (n, m) = (rng.gen_range(-20..=20), rng.gen_range(-20..=20));
            assert!(shift(&shift(&s, n), -n).agrees_on(&s, 40));
            assert_eq!(shift(&shift(&s, n), -n), s);
            assert!(shift(&shift(&s, n), m).agrees_on(&shift(&s, n + m), 40));
            for i in -10..=10 {
                assert_eq!(shift(&s, n).contains(i), s.contains(i + n));
            }
        }
    }

    #[test]
    fn multiplication_examples() {
        let s = set("finite:{0}");
        let (a, b, c) = (G::a(), G::b(), G::c());
        assert_eq!(gs_mul(&b, &a, &s), gs_mul(&gs_mul(&a, &b, &s), &c, &s));
        assert!(gs_comm(&a, &word("T b t", &s), &s).is_identity());
        assert!(gs_mul(&c, &c, &s).is_identity());
        assert!(word("", &s).is_identity());
        assert!(word("1", &s).is_identity());
        assert_eq!(word("A B a b", &s), c);
        assert!(word("A B a b", &SubsetOfZ::empty()).is_identity());
    }

    #[test]
    fn element_text_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let x: G = random_gs_element(&mut rng);
            assert_eq!(G::parse(&x.to_string()).unwrap(), x);
            assert_eq!(G::from_record(&x.to_record()).unwrap(), x);
        }
        assert_eq!(G::identity().to_string(), "1 | 0 ; 0 | 0");
        assert_eq!(G::parse("t^-2 | 1 + t ; 3*t^-1 | 1").unwrap().t_exp(), -2);
        assert!(G::parse("t | 1 ; 1").is_err());
    }

    #[test]
    fn words_and_inverses() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let letters = ['a', 'A', 'b', 'B', 't', 'T', 'c'];
        for _ in 0..50 {
            let s = random_subset(&mut rng);
            let len = rng.gen_range(0..=12);
            let w: String = (0..len).map(|_| letters[rng.gen_range(0..7)]).collect();
            let inv: String = w
                .chars()
                .rev()
                .map(|ch| match ch {
                    'c' => 'c',
                    ch if ch.is_lowercase() => ch.to_ascii_uppercase(),
                    ch => ch.to_ascii_lowercase(),
                })
                .collect();
            assert!(word(&format!("{w}{inv}"), &s).is_identity(), "{w}");
            let x = word(&w, &s);
            assert!(gs_mul(&x, &gs_inv(&x, &s), &s).is_identity());
            assert_eq!(gs_pow(&x, -3, &s), gs_inv(&gs_pow(&x, 3, &s), &s));
        }
        assert!(parse_word("a x").is_err());
        assert_eq!(parse_word("a^-2 T").unwrap(), vec![(Letter::A, -2), (Letter::T, -1)]);
        assert_eq!(fmt_word(&comm_word(1)), "a^-1 t^-1 b^-1 t a t^-1 b t");
    }

    #[test]
    fn commutator_detects_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for _ in 0..20 {
            let s = random_subset(&mut rng);
            for i in -6..=6 {
                let k = gs_eval_word::<BigInt>(&comm_word(i), &s);
                assert_eq!(k.center_bit(), s.contains(i));
                assert!(k.t_exp() == 0 && k.a_poly().is_zero() && k.b_poly().is_zero());
            }
        }
    }

    #[test]
    fn associativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        for _ in 0..500 {
            let s = random_subset(&mut rng);
            let (x, y, z): (G, G, G) = (
                random_gs_element(&mut rng),
                random_gs_element(&mut rng),
                random_gs_element(&mut rng),
            );
            assert_eq!(
                gs_mul(&gs_mul(&x, &y, &s), &z, &s),
                gs_mul(&x, &gs_mul(&y, &z, &s), &s)
            );
        }
    }

    #[test]
    fn center_is_c() {
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        let s = set("periodic:3:{1}");
        let c = G::c();
        assert!(!c.is_identity());
        for _ in 0..100 {
            let x: G = random_gs_element(&mut rng);
            assert!(gs_comm(&c, &x, &s).is_identity());
        }
    }

    #[test]
    fn quotient_is_the_wreath_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..100 {
            let s = random_subset(&mut rng);
            let (x, y): (G, G) = (random_gs_element(&mut rng), random_gs_element(&mut rng));
            let prod = gs_mul(&x, &y, &s).to_wreath();
            assert_eq!(prod, x.to_wreath().mul(&y.to_wreath()).unwrap());
            assert_eq!(gs_inv(&x, &s).to_wreath(), x.to_wreath().inv());
        }
    }

    #[test]
    fn presentation_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(48);
        for spec in ["finite:{0}", "periodic:2", "universal", "complement:finite:{1,-2}", "shift:3:periodic:3"] {
            let s = set(spec);
            let n = rng.gen_range(-3..=3);
            assert!(presentation_violations(&s, n, 4).is_empty(), "{spec}");
        }
    }

    #[test]
    fn center_fingerprint_examples() {
        assert_eq!(center_fingerprint(&SubsetOfZ::empty(), 3), (-3..=3).collect::<Vec<_>>());
        assert_eq!(center_fingerprint(&set("finite:{0}"), 2), vec![-2, -1, 1, 2]);
        assert_eq!(center_fingerprint(&set("periodic:2"), 2), vec![-1, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(49);
        for _ in 0..10 {
            let s = random_subset(&mut rng);
            let expect: Vec<i64> = (-5..=5).filter(|&i| !s.contains(i)).collect();
            assert_eq!(center_fingerprint(&s, 5), expect);
        }
    }

    #[test]
    fn fingerprint_examples() {
        let fp = ball_fingerprint(&set("finite:{0}"), 1).unwrap();
        assert_eq!((fp.words, fp.classes), (7, 7));
        let s = set("finite:{0}");
        assert_ne!(
            ball_fingerprint(&s, 4).unwrap(),
            ball_fingerprint(&SubsetOfZ::empty(), 4).unwrap()
        );
        // agreement on [-2r, 2r] is enough
        let r = 2;
        let far = SubsetOfZ::finite([0, 5]);
        assert_eq!(ball_fingerprint(&s, r).unwrap(), ball_fingerprint(&far, r).unwrap());
        assert!(matches!(
            ball_fingerprint(&s, 7),
            Err(CondensedError::RadiusTooLarge { radius: 7, cap: 6 })
        ));
    }

    #[test]
    fn fingerprint_locality() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        for _ in 0..6 {
            let s = random_subset(&mut rng);
            let r = rng.gen_range(1..=3usize);
            let w = 2 * r as i64;
            let flips: BTreeSet<i64> = (0..3).map(|_| rng.gen_range(w + 1..w + 10) * [1, -1][rng.gen_range(0..2)]).collect();
            let inside: BTreeSet<i64> = s.window(w).into_iter().collect();
            let outside = SubsetOfZ::Finite(inside.union(&flips).copied().collect());
            assert!(outside.agrees_on(&s, w));
            assert_eq!(ball_fingerprint(&s, r).unwrap(), ball_fingerprint(&outside, r).unwrap());
        }
    }

    #[test]
    fn iso_check_examples() {
        let s = set("finite:{0}");
        assert!(iso_check(&s, 0, 3).unwrap());
        for r in 1..=3 {
            assert!(iso_check(&s, 1, r).unwrap());
        }
        assert!(iso_check(&set("universal"), -2, 2).unwrap());
    }

    #[test]
    fn witness_examples() {
        let (s, t) = (set("finite:{0}"), SubsetOfZ::empty());
        assert_eq!(injectivity_witness(&s, &t, 1), Some(0));
        assert!(verify_separation(&s, &t, 0));
        assert_eq!(injectivity_witness(&s, &s, 10), None);
        let u = set("universal");
        let i = injectivity_witness(&u, &shift(&u, 3), 20).unwrap();
        assert!(verify_separation(&u, &shift(&u, 3), i));
    }

    #[test]
    fn demo_small() {
        let report = condensation_demo(&SubsetOfZ::Universal, 2, DEFAULT_SHIFT_BUDGET).unwrap();
        assert!(report.all_verified(), "{report:?}");
        for row in &report.rows {
            let n = row.shift.unwrap();
            assert_ne!(n, 0);
            assert!(shift(&SubsetOfZ::Universal, n).agrees_on(&SubsetOfZ::Universal, row.window));
        }
        let finite = condensation_demo(&set("finite:{0}"), 2, 1000).unwrap();
        assert!(finite.rows.iter().all(|r| r.shift.is_none()));
    }
}
