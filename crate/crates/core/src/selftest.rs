//! The property suite behind `wreath selftest` and the acceptance run.
//! Every check draws from its own seeded stream, so a report is a pure
//! function of the seed and the sizes.

use std::fmt::Display;

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::condensed::{
    ball_fingerprint, center_fingerprint, condensation_demo, gs_comm, gs_inv, gs_mul, iso_check,
    presentation_violations, shift, GsElement, SubsetOfZ, DEFAULT_SHIFT_BUDGET,
};
use crate::definable::basis::{corrupt, is_basis, random_basis, BasisCandidate};
use crate::definable::{
    act_congruent_at, act_decide, act_refute, cyc_member, cyc_solvable_for, div_witness, exp_g, exp_mix, exp_n,
    exp_n_holds, Refutation, DEFAULT_SEARCH_BUDGET,
};
use crate::encoding::{is_code, nu_decode, nu_encode, pair, tuple_decode, tuple_encode, unpair, IntCode};
use crate::interp::{basis_tuple, delta_encode, lambda_g, lift_tuple, IntAsPower};
use crate::laurent::LaurentPoly;
use crate::lcs::{basic_commutators, in_lcs, lcs_coords, lcs_rank};
use crate::random::{
    random_base_element, random_element, random_gs_element, random_poly, random_subset,
    random_top, ElementShape, PolyShape,
};
use crate::wreath::{from_fnrep, to_fnrep, GroupContext, WreathElement};

type E = WreathElement<BigInt>;
type P = LaurentPoly<BigInt>;
type G = GsElement<BigInt>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: u64,
    pub failed: u64,
    pub first_failure: Option<String>,
}

impl CheckResult {
    pub fn ok(&self) -> bool {
        self.failed == 0 && self.passed > 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(CheckResult::ok)
    }
}

/// Sample counts for each check.
#[derive(Clone, Debug)]
pub struct Sizes {
    pub mul_pairs: usize,
    pub codec_samples: usize,
    pub codec_exhaustive: u64,
    pub exp_elements: usize,
    pub exp_max: i64,
    pub act_instances: usize,
    pub act_points: usize,
    pub act_corrupted: usize,
    pub basis_images: usize,
    pub roundtrip_per_basis: usize,
    pub roundtrip_bases: usize,
    pub gs_triples: usize,
    pub demo_radius: usize,
    pub iso_samples: usize,
}

impl Sizes {
    /// The acceptance sizes.
    pub fn full() -> Self {
        Sizes {
            mul_pairs: 100_000,
            codec_samples: 10_000,
            codec_exhaustive: 10_000,
            exp_elements: 1_000,
            exp_max: 20,
            act_instances: 1_000,
            act_points: 50,
            act_corrupted: 100,
            basis_images: 200,
            roundtrip_per_basis: 10_000,
            roundtrip_bases: 20,
            gs_triples: 100_000,
            demo_radius: 4,
            iso_samples: 20,
        }
    }

    /// A few seconds in total.
    pub fn quick() -> Self {
        Sizes {
            mul_pairs: 2_000,
            codec_samples: 500,
            codec_exhaustive: 2_000,
            exp_elements: 40,
            exp_max: 8,
            act_instances: 50,
            act_points: 10,
            act_corrupted: 20,
            basis_images: 20,
            roundtrip_per_basis: 200,
            roundtrip_bases: 3,
            gs_triples: 2_000,
            demo_radius: 2,
            iso_samples: 5,
        }
    }
}

struct Tally {
    name: String,
    passed: u64,
    failed: u64,
    first_failure: Option<String>,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally {
            name: name.to_string(),
            passed: 0,
            failed: 0,
            first_failure: None,
        }
    }

    /// Records one case; `Err` carries what went wrong.
    fn case(&mut self, outcome: Result<(), String>) {
        match outcome {
            Ok(()) => self.passed += 1,
            Err(why) => {
                self.failed += 1;
                self.first_failure.get_or_insert(why);
            }
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name,
            passed: self.passed,
            failed: self.failed,
            first_failure: self.first_failure,
        }
    }
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn err<E: Display>(e: E) -> String {
    e.to_string()
}

fn stream(seed: u64, check: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ check.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn random_ctx<R: Rng>(rng: &mut R, max: usize) -> GroupContext {
    GroupContext::new(rng.gen_range(1..=max), rng.gen_range(1..=max)).expect("positive ranks")
}

/// Normal-form multiplication against the function representation.
pub fn check_mul_oracle(seed: u64, pairs: usize) -> CheckResult {
    let mut rng = stream(seed, 1);
    let mut t = Tally::new("mul matches function representation");
    for _ in 0..pairs {
        let c = random_ctx(&mut rng, 3);
        let g: E = random_element(&mut rng, c, &ElementShape::default());
        let h: E = random_element(&mut rng, c, &ElementShape::default());
        t.case((|| {
            let direct = g.mul(&h).map_err(err)?;
            let via = from_fnrep(c, &to_fnrep(&g).mul(&to_fnrep(&h))).map_err(err)?;
            ensure(direct == via, || format!("({g}) * ({h})"))
        })());
    }
    t.finish()
}

/// Pairing, tuple and `ν` roundtrips, then every code up to a bound.
pub fn check_codec(seed: u64, samples: usize, exhaustive: u64) -> CheckResult {
    let mut rng = stream(seed, 2);
    let mut t = Tally::new("codec roundtrips and exhaustive decode");
    for _ in 0..samples {
        let x = BigUint::from(rng.gen::<u128>() >> rng.gen_range(0..128));
        let y = BigUint::from(rng.gen::<u64>() >> rng.gen_range(0..64));
        t.case(ensure(unpair(&pair(&x, &y)) == (x.clone(), y.clone()), || format!("pair({x}, {y})")));
        let v: Vec<BigInt> = (0..rng.gen_range(1..=8))
            .map(|_| BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000)))
            .collect();
        t.case((|| {
            let k = tuple_encode(&v).map_err(err)?;
            ensure(tuple_decode(&k).map_err(err)? == v, || format!("tuple {v:?}"))
        })());
        let m = rng.gen_range(1..=3);
        let p: P = random_poly(&mut rng, m, &PolyShape::for_codes(m));
        t.case((|| {
            let back: P = nu_decode(&nu_encode(&p), m).map_err(err)?;
            ensure(back == p, || format!("ν roundtrip of {p}"))
        })());
    }
    for m in 1..=3 {
        for k in 0..=exhaustive {
            let code = IntCode(BigUint::from(k));
            t.case(match nu_decode::<BigInt>(&code, m) {
                Ok(p) => ensure(nu_encode(&p) == code && is_code(&code, m), || format!("code {k}, m = {m}")),
                Err(_) => ensure(!is_code(&code, m), || format!("code {k} rejected yet claimed, m = {m}")),
            });
        }
    }
    t.finish()
}

/// Cyclic membership on the full grid, against integer divisibility.
pub fn check_cyclic_grid(seed: u64) -> CheckResult {
    let mut rng = stream(seed, 3);
    let mut t = Tally::new("cyclic membership grid");
    for m in 1..=2usize {
        let c = GroupContext::new(m, 1).expect("valid");
        let b1 = E::b(c, 0);
        for beta in 1..=4i64 {
            let mut av = vec![0; m];
            av[0] = beta;
            let a = E::from_top(c, av).expect("valid");
            let tops: Vec<Vec<i64>> = if m == 1 {
                (-6..=6).map(|x| vec![x]).collect()
            } else {
                (-6..=6).flat_map(|x| (-6..=6).map(move |y| vec![x, y])).collect()
            };
            for top in tops {
                let g = E::from_top(c, top.clone()).expect("valid");
                let expected = top[1..].iter().all(|&x| x == 0) && top[0] % beta == 0;
                let u: E = random_base_element(&mut rng, c, &PolyShape::default());
                t.case((|| {
                    let v = cyc_member(&a, &g).map_err(err)?;
                    ensure(v.member == expected, || format!("a = {a}, g = {g}"))?;
                    if let Some(z) = &v.witness {
                        ensure(b1.comm(&g).map_err(err)? == z.comm(&a).map_err(err)?, || {
                            format!("witness for {g}")
                        })?;
                    }
                    if !u.is_identity() {
                        let route3 = cyc_solvable_for(&a, &g, &u).map_err(err)?;
                        if expected {
                            ensure(route3.is_some(), || format!("route (iii) at {u}"))?;
                        }
                    }
                    Ok(())
                })());
            }
        }
    }
    t.finish()
}

/// `div_witness` succeeds exactly when `ℓ | k`.
pub fn check_divisibility_grid() -> CheckResult {
    let mut t = Tally::new("divisibility grid");
    let c = GroupContext::new(1, 1).expect("valid");
    let a = E::a(c, 0);
    let b1 = E::b(c, 0);
    let nonzero = || (-20..=20i64).filter(|&x| x != 0);
    for k in nonzero() {
        for l in nonzero() {
            t.case((|| {
                let z = div_witness(&a, k, l).map_err(err)?;
                ensure(z.is_some() == (k % l == 0), || format!("k = {k}, ℓ = {l}"))?;
                if let Some(z) = z {
                    let (ak, al) = (exp_g(&a, k).map_err(err)?, exp_g(&a, l).map_err(err)?);
                    ensure(b1.comm(&ak).map_err(err)? == z.comm(&al).map_err(err)?, || {
                        format!("witness k = {k}, ℓ = {l}")
                    })?;
                }
                Ok(())
            })());
        }
    }
    t.finish()
}

/// All three exponentiation routes against repeated multiplication.
pub fn check_exponentiation(seed: u64, elements: usize, kmax: i64) -> CheckResult {
    let mut rng = stream(seed, 5);
    let mut t = Tally::new("exponentiation");
    for _ in 0..elements {
        let c = random_ctx(&mut rng, 3);
        let g: E = random_element(&mut rng, c, &ElementShape::default());
        let bump: E = loop {
            let x = random_base_element(&mut rng, c, &PolyShape::default());
            if !x.is_identity() {
                break x;
            }
        };
        let (a, u) = (g.top_part(), g.bottom_part());
        let (ginv, uinv) = (g.inv(), u.inv());
        // k = 0, 1, ..., kmax and then -1, ..., -kmax, one multiplication a step
        for dir in [1i64, -1] {
            let mut power = E::identity(c);
            let mut u_power = E::identity(c);
            for step in 0..=kmax {
                let k = dir * step;
                if step > 0 {
                    power = power.mul(if dir > 0 { &g } else { &ginv }).expect("same context");
                    u_power = u_power.mul(if dir > 0 { &u } else { &uinv }).expect("same context");
                }
                if dir < 0 && step == 0 {
                    continue;
                }
                t.case((|| {
                    ensure(exp_g(&g, k).map_err(err)? == power, || format!("exp_G({g}, {k})"))?;
                    if a.is_identity() {
                        return Ok(());
                    }
                    let mix = exp_mix(&a, &u, k).map_err(err)?;
                    ensure(mix.power == power, || format!("exp_mix({g}, {k})"))?;
                    // the solution w of [u, a^k] = [w, a] is unique
                    let ak = exp_g(&a, k).map_err(err)?;
                    let other = mix.w.mul(&bump).map_err(err)?;
                    ensure(u.comm(&ak).map_err(err)? != other.comm(&a).map_err(err)?, || {
                        format!("second solution for ({g}, {k})")
                    })?;
                    let n = exp_n(&a, &u, k).map_err(err)?;
                    ensure(n.power == u_power, || format!("exp_N({g}, {k})"))?;
                    ensure(exp_n_holds(&a, &u, k, &n.power, &n.v).map_err(err)?, || {
                        format!("(au)^k = a^k u^k [v, a] at ({g}, {k})")
                    })
                })());
            }
        }
    }
    t.finish()
}

/// Congruences hold for `h = g^q`; corrupted `h` get a verified refutation.
pub fn check_action(seed: u64, instances: usize, points: usize, corrupted: usize) -> CheckResult {
    let mut rng = stream(seed, 6);
    let mut t = Tally::new("action congruences and refutation");
    for idx in 0..instances {
        let c = random_ctx(&mut rng, 3);
        let m = c.m();
        let g: E = random_base_element(&mut rng, c, &PolyShape::default());
        let q: P = random_poly(&mut rng, m, &PolyShape::default());
        let h = g.module_act(&q).expect("base element");
        let alphas: Vec<Vec<i64>> = (0..points).map(|_| random_top(&mut rng, m, 6)).collect();
        t.case((|| {
            ensure(act_decide(&g, &h, &q).map_err(err)?, || format!("g^q for g = {g}, q = {q}"))?;
            for alpha in &alphas {
                ensure(act_congruent_at(&g, &h, &q, alpha).map_err(err)?, || {
                    format!("congruence at {alpha:?} for g = {g}, q = {q}")
                })?;
            }
            Ok(())
        })());
        if idx < corrupted {
            let noise: E = loop {
                let x = random_base_element(&mut rng, c, &PolyShape::default());
                if !x.is_identity() {
                    break x;
                }
            };
            let bad = h.mul(&noise).expect("same context");
            t.case((|| match act_refute(&g, &bad, &q, DEFAULT_SEARCH_BUDGET).map_err(err)? {
                Refutation::Refuted(alpha) => ensure(!act_congruent_at(&g, &bad, &q, &alpha).map_err(err)?, || {
                    format!("refuting point {alpha:?} does not refute")
                }),
                Refutation::Confirmed => Err(format!("corrupted instance confirmed: g = {g}, q = {q}")),
            })());
        }
    }
    t.finish()
}

/// Automorphism images of the standard basis are bases; one corrupting
/// move destroys that.
pub fn check_bases(seed: u64, images: usize) -> CheckResult {
    let mut rng = stream(seed, 7);
    let mut t = Tally::new("basis recognition");
    for _ in 0..images {
        let c = random_ctx(&mut rng, 3);
        let steps = rng.gen_range(1..=8);
        let q: BasisCandidate<BigInt> = random_basis(&mut rng, c, steps);
        let bad = corrupt(&mut rng, &q);
        t.case(ensure(is_basis(&q.top, &q.bottom), || format!("image rejected at m = {}, n = {}", c.m(), c.n())));
        t.case(ensure(!is_basis(&bad.top, &bad.bottom), || {
            format!("corrupted image accepted at m = {}, n = {}", c.m(), c.n())
        }));
    }
    t.finish()
}

/// `g → tuple → powers of c_1 → λ → g`, then the integer side.
pub fn check_roundtrip(seed: u64, per_basis: usize, bases: usize) -> CheckResult {
    let mut rng = stream(seed, 8);
    let mut t = Tally::new("interpretation roundtrips");
    let contexts = [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1)];
    for b in 0..=bases {
        let (m, n) = contexts[b % contexts.len()];
        let c = GroupContext::new(m, n).expect("valid");
        let q: BasisCandidate<BigInt> = if b == 0 {
            BasisCandidate::standard(c)
        } else {
            random_basis(&mut rng, c, 6)
        };
        let base = q.top[0].clone();
        let shape = PolyShape::for_codes(m);
        for _ in 0..per_basis {
            let gammas = random_top(&mut rng, m, 5);
            let polys: Vec<P> = (0..n).map(|_| random_poly(&mut rng, m, &shape)).collect();
            t.case((|| {
                let g = q.element(&gammas, &polys).map_err(err)?;
                let tuple = if b == 0 { delta_encode(&g) } else { basis_tuple(&q, &g).map_err(err)? };
                let (gp, cp) = lift_tuple(&base, &tuple).map_err(err)?;
                ensure(lambda_g(&q, &gp, &cp).map_err(err)? == g, || format!("λ roundtrip of {g}"))
            })());
        }
    }
    let c = GroupContext::new(2, 1).expect("valid");
    let a = E::a(c, 0);
    for k in -100..=100i64 {
        t.case((|| {
            let x = IntAsPower::new(a.clone(), BigInt::from(k)).map_err(err)?.element().map_err(err)?;
            let back = IntAsPower::from_element(a.clone(), &x).map_err(err)?;
            ensure(*back.exponent() == BigInt::from(k), || format!("discrete log of a^{k}"))
        })());
    }
    t.finish()
}

/// Ranks, planted coordinates and torsion-freeness of the quotients.
pub fn check_lcs(seed: u64) -> CheckResult {
    let mut rng = stream(seed, 9);
    let mut t = Tally::new("lower central series");
    for m in 1..=3usize {
        for n in 1..=3usize {
            let c = GroupContext::new(m, n).expect("valid");
            for i in 2..=5usize {
                // independent count: index words of length i - 1, sorted ones kept
                let mut sorted = 0u64;
                for w in 0..(m as u64).pow(i as u32 - 1) {
                    let digits: Vec<u64> = (0..i - 1).map(|d| (w / (m as u64).pow(d as u32)) % m as u64).collect();
                    if digits.windows(2).all(|p| p[0] <= p[1]) {
                        sorted += 1;
                    }
                }
                t.case((|| {
                    let rank = lcs_rank(c, i).map_err(err)?;
                    ensure(rank == BigInt::from(sorted * n as u64), || format!("rank m={m} n={n} i={i}"))?;
                    ensure(basic_commutators(c, i).len() as u64 == sorted * n as u64, || {
                        format!("enumeration m={m} n={n} i={i}")
                    })
                })());
                let basis = basic_commutators(c, i);
                let mut g = E::identity(c);
                let mut expected = std::collections::BTreeMap::new();
                for k in &basis {
                    let e: i64 = rng.gen_range(-3..=3);
                    if e != 0 {
                        expected.insert(k.clone(), BigInt::from(e));
                    }
                    g = g.mul(&k.element::<BigInt>(c).mul_chain(e)).expect("same context");
                }
                for k in basic_commutators(c, i + 1).iter().take(2) {
                    g = g.mul(&k.element::<BigInt>(c).mul_chain(rng.gen_range(-2..=2))).expect("same context");
                }
                t.case((|| {
                    let got = lcs_coords(&g, i).map_err(err)?.coords;
                    ensure(got == expected, || format!("planted coordinates m={m} n={n} i={i}"))
                })());
            }
        }
    }
    let c = GroupContext::new(2, 2).expect("valid");
    let mut spot = 0;
    while spot < 50 {
        let g: E = random_element(&mut rng, c, &ElementShape::default());
        let i = rng.gen_range(2..=4);
        if in_lcs(&g, i) {
            continue;
        }
        spot += 1;
        let e = rng.gen_range(2..=6);
        t.case(ensure(!in_lcs(&g.mul_chain(e), i), || format!("({g})^{e} fell into G_{i}")));
    }
    t.finish()
}

fn five_sets() -> Vec<SubsetOfZ> {
    vec![
        SubsetOfZ::finite([0, 2, -3]),
        SubsetOfZ::multiples(2),
        SubsetOfZ::finite([1]).complement(),
        shift(&SubsetOfZ::multiples(3), 1),
        SubsetOfZ::Universal,
    ]
}

/// Relations, associativity, center and the quotient map of `G_S`.
pub fn check_gs(seed: u64, triples: usize) -> CheckResult {
    let mut rng = stream(seed, 10);
    let mut t = Tally::new("G_S normal form");
    let sets = five_sets();
    for s in &sets {
        for n in [0, 1, -2] {
            let bad = presentation_violations(s, n, 6);
            t.case(ensure(bad.is_empty(), || format!("{s}, n = {n}: {bad:?}")));
        }
        let expect: Vec<i64> = (-8..=8).filter(|&i| !s.contains(i)).collect();
        t.case(ensure(center_fingerprint(s, 8) == expect, || format!("center fingerprint of {s}")));
        t.case(ensure(!G::c().is_identity(), || "c is trivial".into()));
    }
    for idx in 0..triples {
        let s = &sets[idx % sets.len()];
        let (x, y, z): (G, G, G) = (
            random_gs_element(&mut rng),
            random_gs_element(&mut rng),
            random_gs_element(&mut rng),
        );
        t.case((|| {
            let left = gs_mul(&gs_mul(&x, &y, s), &z, s);
            ensure(left == gs_mul(&x, &gs_mul(&y, &z, s), s), || format!("({x})({y})({z}) in {s}"))?;
            ensure(gs_comm(&G::c(), &x, s).is_identity(), || format!("c does not commute with {x}"))?;
            if idx % 10 == 0 {
                let prod = gs_mul(&x, &y, s).to_wreath();
                ensure(prod == x.to_wreath().mul(&y.to_wreath()).map_err(err)?, || {
                    format!("quotient of ({x})({y}) in {s}")
                })?;
                ensure(gs_inv(&x, s).to_wreath() == x.to_wreath().inv(), || format!("quotient inverse of {x}"))?;
            }
            Ok(())
        })());
    }
    t.finish()
}

/// The demo on the universal set, finite sets as the negative control, and
/// the shift isomorphism on balls.
pub fn check_condensation(seed: u64, radius: usize, iso_samples: usize) -> CheckResult {
    let mut rng = stream(seed, 11);
    let mut t = Tally::new("condensation at finite resolution");
    match condensation_demo(&SubsetOfZ::Universal, radius, DEFAULT_SHIFT_BUDGET) {
        Ok(report) => {
            for row in &report.rows {
                t.case(ensure(row.verified && row.shift.is_some_and(|n| n != 0), || format!("{row:?}")));
            }
        }
        Err(e) => t.case(Err(err(e))),
    }
    match condensation_demo(&SubsetOfZ::finite([0]), radius, 10_000) {
        Ok(report) => t.case(ensure(report.rows.iter().all(|r| r.shift.is_none()), || {
            "a finite set found a neighbour".into()
        })),
        Err(e) => t.case(Err(err(e))),
    }
    for _ in 0..iso_samples {
        let s = random_subset(&mut rng);
        let n = rng.gen_range(-6..=6);
        let r = rng.gen_range(1..=radius);
        t.case(match iso_check(&s, n, r) {
            Ok(same) => ensure(same, || format!("iso_check({s}, {n}, {r})")),
            Err(e) => Err(err(e)),
        });
    }
    // the window is tight enough to tell S from T when they differ near 0
    let (s, u) = (SubsetOfZ::finite([0]), SubsetOfZ::empty());
    t.case(match (ball_fingerprint(&s, 4), ball_fingerprint(&u, 4)) {
        (Ok(x), Ok(y)) => ensure(x != y, || "radius 4 misses [a, b]".into()),
        _ => Err("fingerprint failed".into()),
    });
    t.finish()
}

pub fn run(seed: u64, sizes: &Sizes) -> SelftestReport {
    let checks = vec![
        check_mul_oracle(seed, sizes.mul_pairs),
        check_codec(seed, sizes.codec_samples, sizes.codec_exhaustive),
        check_cyclic_grid(seed),
        check_divisibility_grid(),
        check_exponentiation(seed, sizes.exp_elements, sizes.exp_max),
        check_action(seed, sizes.act_instances, sizes.act_points, sizes.act_corrupted),
        check_bases(seed, sizes.basis_images),
        check_roundtrip(seed, sizes.roundtrip_per_basis, sizes.roundtrip_bases),
        check_lcs(seed),
        check_gs(seed, sizes.gs_triples),
        check_condensation(seed, sizes.demo_radius, sizes.iso_samples),
    ];
    SelftestReport { seed, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let report = run(7, &Sizes::quick());
        for c in &report.checks {
            assert!(c.ok(), "{c:?}");
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let sizes = Sizes {
            mul_pairs: 50,
            ..Sizes::quick()
        };
        assert_eq!(check_mul_oracle(3, sizes.mul_pairs), check_mul_oracle(3, sizes.mul_pairs));
        assert_eq!(check_gs(3, 100), check_gs(3, 100));
    }

    #[test]
    fn failures_are_counted() {
        let mut t = Tally::new("x");
        t.case(Ok(()));
        t.case(Err("first".into()));
        t.case(Err("second".into()));
        let r = t.finish();
        assert_eq!((r.passed, r.failed, r.first_failure.as_deref()), (1, 2, Some("first")));
        assert!(!r.ok());
    }
}
