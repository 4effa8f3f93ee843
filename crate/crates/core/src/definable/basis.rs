//! Recognition of bases `(c_1..c_m, u_1..u_n)` of `G`, coordinates relative
//! to a basis, and random automorphic images of the standard basis.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use super::{exp_g, DefinableError};
use crate::laurent::{LaurentPoly, Monomial};
use crate::random::{random_nonzero_poly, random_poly, PolyShape};
use crate::scalar::Coeff;
use crate::wreath::{GroupContext, WreathElement};

type Result<T> = std::result::Result<T, DefinableError>;

/// Determinant of a square integer matrix by fraction-free elimination.
pub fn int_det(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &a[n - 1][n - 1]
    }
}

fn minor<T: Clone>(rows: &[Vec<T>], skip_row: usize, skip_col: usize) -> Vec<Vec<T>> {
    rows.iter()
        .enumerate()
        .filter(|(i, _)| *i != skip_row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != skip_col)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Inverse of a unimodular integer matrix.
pub fn unimodular_inverse(rows: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = rows.len();
    let det = int_det(rows);
    if det.abs() != BigInt::one() {
        return None;
    }
    let mut inv = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let cof = if n == 1 { BigInt::one() } else { int_det(&minor(rows, j, i)) };
            let signed = if (i + j) % 2 == 0 { cof } else { -cof };
            inv[i][j] = (signed * &det).to_i64()?;
        }
    }
    Some(inv)
}

/// Determinant over `ZA` by cofactor expansion (bottom ranks are small).
pub fn poly_det<C: Coeff>(rows: &[Vec<LaurentPoly<C>>], nvars: usize) -> LaurentPoly<C> {
    match rows.len() {
        0 => LaurentPoly::one(nvars),
        1 => rows[0][0].clone(),
        n => {
            let mut total = LaurentPoly::zero(nvars);
            for j in 0..n {
                if rows[0][j].is_zero() {
                    continue;
                }
                let term = &rows[0][j] * &poly_det(&minor(rows, 0, j), nvars);
                total = if j % 2 == 0 { &total + &term } else { &total - &term };
            }
            total
        }
    }
}

/// `adj(M)` with `M · adj(M) = det(M) · I`.
pub fn poly_adjugate<C: Coeff>(rows: &[Vec<LaurentPoly<C>>], nvars: usize) -> Vec<Vec<LaurentPoly<C>>> {
    let n = rows.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let cof = poly_det(&minor(rows, j, i), nvars);
                    if (i + j) % 2 == 0 {
                        cof
                    } else {
                        -cof
                    }
                })
                .collect()
        })
        .collect()
}

/// A candidate basis `q = (c_1, ..., c_m, u_1, ..., u_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisCandidate<C> {
    pub top: Vec<WreathElement<C>>,
    pub bottom: Vec<WreathElement<C>>,
}

impl<C: Coeff> BasisCandidate<C> {
    /// The distinguished basis `(a_1, ..., a_m, b_1, ..., b_n)`.
    pub fn standard(ctx: GroupContext) -> Self {
        BasisCandidate {
            top: (0..ctx.m()).map(|i| WreathElement::a(ctx, i)).collect(),
            bottom: (0..ctx.n()).map(|j| WreathElement::b(ctx, j)).collect(),
        }
    }

    pub fn context(&self) -> Option<GroupContext> {
        self.top.first().or(self.bottom.first()).map(WreathElement::context)
    }

    /// Columns `D e_i = top(c_i)`.
    pub fn top_columns(&self) -> Vec<Vec<i64>> {
        self.top.iter().map(|c| c.top().to_vec()).collect()
    }

    pub fn is_valid(&self) -> bool {
        is_basis(&self.top, &self.bottom)
    }

    /// `Π c_i^(γ_i) · Π u_j^(P_j(c))` with `P_j` written in the `c`-variables.
    pub fn element(&self, gammas: &[i64], polys: &[LaurentPoly<C>]) -> Result<WreathElement<C>> {
        let ctx = self.context().ok_or(DefinableError::BadParameter("empty basis"))?;
        if gammas.len() != self.top.len() || polys.len() != self.bottom.len() {
            return Err(DefinableError::BadParameter("coordinate arity"));
        }
        let columns = self.top_columns();
        let mut g = WreathElement::identity(ctx);
        for (c, &k) in self.top.iter().zip(gammas) {
            g = g.mul(&exp_g(c, k)?)?;
        }
        for (u, p) in self.bottom.iter().zip(polys) {
            g = g.mul(&u.module_act(&p.substitute_lattice(&columns))?)?;
        }
        Ok(g)
    }

    /// Inverse of [`BasisCandidate::element`]; requires a valid basis.
    pub fn coordinates(&self, g: &WreathElement<C>) -> Result<(Vec<i64>, Vec<LaurentPoly<C>>)> {
        let ctx = self.context().ok_or(DefinableError::BadParameter("empty basis"))?;
        let m = ctx.m();
        let columns = self.top_columns();
        // rows of D^-1 applied to top(g): D has the c_i tops as columns
        let d_rows: Vec<Vec<i64>> = (0..m).map(|r| columns.iter().map(|c| c[r]).collect()).collect();
        let d_inv = unimodular_inverse(&d_rows).ok_or(DefinableError::BadParameter("not a top basis"))?;
        let gammas: Vec<i64> = d_inv
            .iter()
            .map(|row| row.iter().zip(g.top()).map(|(x, y)| x * y).sum())
            .collect();
        let mut rest = g.clone();
        for (c, &k) in self.top.iter().zip(&gammas).rev() {
            rest = exp_g(c, -k)?.mul(&rest)?;
        }
        if !rest.in_base_group() {
            return Err(DefinableError::Inconsistent("top coordinates"));
        }
        // solve P · M = H over ZA, M_jk = k-th coordinate of u_j
        let matrix: Vec<Vec<LaurentPoly<C>>> = self.bottom.iter().map(|u| u.bottom().to_vec()).collect();
        let det = poly_det(&matrix, m);
        if !det.is_unit() {
            return Err(DefinableError::BadParameter("bottom matrix is not invertible"));
        }
        let (mono, c) = det.terms().next().expect("units are single terms");
        let det_inv = LaurentPoly::term(mono.inv(), c.clone());
        let adj = poly_adjugate(&matrix, m);
        let n = ctx.n();
        let inv_columns: Vec<Vec<i64>> = (0..m).map(|i| d_inv.iter().map(|row| row[i]).collect()).collect();
        let mut polys = Vec::with_capacity(n);
        for j in 0..n {
            // P_j = Σ_k H_k · adj(M)_kj / det
            let mut p = LaurentPoly::zero(m);
            for (k, h) in rest.bottom().iter().enumerate() {
                p = &p + &(h * &adj[k][j]);
            }
            polys.push((&p * &det_inv).substitute_lattice(&inv_columns));
        }
        Ok((gammas, polys))
    }
}

/// Every `c_i ∉ N`, the `c_i` commute pairwise, and their top vectors form
/// a unimodular matrix.
pub fn is_top_basis<C: Coeff>(cs: &[WreathElement<C>]) -> bool {
    let Some(ctx) = cs.first().map(WreathElement::context) else {
        return false;
    };
    if cs.len() != ctx.m() || cs.iter().any(|c| c.context() != ctx || c.in_base_group()) {
        return false;
    }
    for (i, x) in cs.iter().enumerate() {
        for y in &cs[i + 1..] {
            if !x.comm(y).map(|k| k.is_identity()).unwrap_or(false) {
                return false;
            }
        }
    }
    let rows: Vec<Vec<i64>> = cs.iter().map(|c| c.top().to_vec()).collect();
    int_det(&rows).abs().is_one()
}

/// `c̄` is a top basis, every `u_j ∈ N`, and the matrix expressing `ū` in
/// `b̄` has a unit determinant in `ZA`. The change of variables
/// `c^β ↦ a^(Dβ)` is a ring isomorphism, so the unit test may be done in
/// the `a`-variables.
pub fn is_basis<C: Coeff>(cs: &[WreathElement<C>], us: &[WreathElement<C>]) -> bool {
    if !is_top_basis(cs) {
        return false;
    }
    let ctx = cs[0].context();
    if us.len() != ctx.n() || us.iter().any(|u| u.context() != ctx || !u.in_base_group()) {
        return false;
    }
    let matrix: Vec<Vec<LaurentPoly<C>>> = us.iter().map(|u| u.bottom().to_vec()).collect();
    poly_det(&matrix, ctx.m()).is_unit()
}

/// One step of a random automorphism applied to a basis.
pub fn random_move<C: Coeff, R: Rng + ?Sized>(rng: &mut R, q: &mut BasisCandidate<C>) {
    let m = q.top.len();
    let n = q.bottom.len();
    let ctx = q.context().expect("nonempty basis");
    let small = PolyShape {
        max_terms: 2,
        max_exp: 1,
        max_coeff: 2,
        laurent: true,
    };
    match rng.gen_range(0..5) {
        0 if m >= 2 => {
            let i = rng.gen_range(0..m);
            let j = (i + rng.gen_range(1..m)) % m;
            let factor = if rng.gen_bool(0.5) { q.top[j].clone() } else { q.top[j].inv() };
            q.top[i] = q.top[i].mul(&factor).expect("same context");
        }
        0 | 1 => {
            let i = rng.gen_range(0..m);
            q.top[i] = q.top[i].inv();
        }
        2 => {
            let bottom = (0..n).map(|_| random_poly(rng, m, &small)).collect();
            let x = WreathElement::from_bottom(ctx, bottom).expect("shapes match");
            if m == 1 {
                // a -> a v extends to an automorphism when A is cyclic
                q.top[0] = q.top[0].mul(&x).expect("same context");
            } else {
                for c in &mut q.top {
                    *c = c.conj(&x).expect("same context");
                }
            }
        }
        3 if n >= 2 => {
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            let p: LaurentPoly<C> = random_nonzero_poly(rng, m, &small);
            let add = q.bottom[j].module_act(&p).expect("u_j ∈ N");
            q.bottom[i] = q.bottom[i].mul(&add).expect("same context");
        }
        _ => {
            let j = rng.gen_range(0..n);
            let e: Vec<i64> = (0..m).map(|_| rng.gen_range(-1..=1)).collect();
            let sign = if rng.gen_bool(0.5) { C::one() } else { -C::one() };
            let unit = LaurentPoly::term(Monomial::new(e), sign);
            q.bottom[j] = q.bottom[j].module_act(&unit).expect("u_j ∈ N");
        }
    }
}

/// Image of the standard basis under a product of `steps` random moves.
pub fn random_basis<C: Coeff, R: Rng + ?Sized>(rng: &mut R, ctx: GroupContext, steps: usize) -> BasisCandidate<C> {
    let mut q = BasisCandidate::standard(ctx);
    for _ in 0..steps {
        random_move(rng, &mut q);
    }
    q
}

/// Squares one entry; the result is never a basis.
pub fn corrupt<C: Coeff, R: Rng + ?Sized>(rng: &mut R, q: &BasisCandidate<C>) -> BasisCandidate<C> {
    let mut out = q.clone();
    let k = rng.gen_range(0..q.top.len() + q.bottom.len());
    if k < q.top.len() {
        out.top[k] = out.top[k].mul(&q.top[k]).expect("same context");
    } else {
        let j = k - q.top.len();
        out.bottom[j] = out.bottom[j].mul(&q.bottom[j]).expect("same context");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_element, ElementShape};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type E = WreathElement<BigInt>;
    type P = LaurentPoly<BigInt>;

    fn ctx(m: usize, n: usize) -> GroupContext {
        GroupContext::new(m, n).unwrap()
    }

    #[test]
    fn integer_determinants() {
        assert_eq!(int_det(&[vec![2, 0], vec![0, 1]]), BigInt::from(2));
        assert_eq!(int_det(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(int_det(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]), BigInt::from(-3));
        let m = vec![vec![2, 1], vec![1, 1]];
        assert_eq!(unimodular_inverse(&m).unwrap(), vec![vec![1, -1], vec![-1, 2]]);
        assert_eq!(unimodular_inverse(&[vec![2]]), None);
    }

    #[test]
    fn top_basis_examples() {
        for m in 1..=3 {
            let c = ctx(m, 1);
            let std: Vec<E> = (0..m).map(|i| E::a(c, i)).collect();
            assert!(is_top_basis(&std));
        }
        // a1 b1 commutes with nothing else in A, so this is a basis only for m = 1
        let c = ctx(1, 2);
        let ab = E::a(c, 0).mul(&E::b(c, 0)).unwrap();
        assert!(is_top_basis(&[ab]));
        let c = ctx(2, 1);
        let ab = E::a(c, 0).mul(&E::b(c, 0)).unwrap();
        assert!(!is_top_basis(&[ab, E::a(c, 1)]));
        let sq = E::a(c, 0).mul(&E::a(c, 0)).unwrap();
        assert!(!is_top_basis(&[sq, E::a(c, 1)]));
        assert!(!is_top_basis(&[E::b(c, 0), E::a(c, 1)]));
    }

    #[test]
    fn basis_examples() {
        let c = ctx(2, 3);
        let std = BasisCandidate::<BigInt>::standard(c);
        assert!(std.is_valid());
        let mut twisted = std.clone();
        twisted.bottom[0] = std.bottom[0].module_act(&P::var(2, 0)).unwrap();
        assert!(twisted.is_valid());
        let mut squared = std.clone();
        squared.bottom[0] = std.bottom[0].mul(&std.bottom[0]).unwrap();
        assert!(!squared.is_valid());
    }

    #[test]
    fn random_images_accepted_and_corruptions_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for (m, n) in [(1, 1), (1, 2), (2, 1), (2, 2), (3, 2)] {
            for _ in 0..10 {
                let q = random_basis::<BigInt, _>(&mut rng, ctx(m, n), 8);
                assert!(q.is_valid());
                assert!(!corrupt(&mut rng, &q).is_valid());
            }
        }
    }

    #[test]
    fn coordinates_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for (m, n) in [(1, 2), (2, 2), (3, 1)] {
            let c = ctx(m, n);
            let q = random_basis::<BigInt, _>(&mut rng, c, 6);
            for _ in 0..20 {
                let g: E = random_element(&mut rng, c, &ElementShape::default());
                let (gammas, polys) = q.coordinates(&g).unwrap();
                assert_eq!(q.element(&gammas, &polys).unwrap(), g);
            }
        }
    }
}
