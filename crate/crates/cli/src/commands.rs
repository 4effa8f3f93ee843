use std::io::Read;

use num_bigint::{BigInt, BigUint};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use wreath_core::condensed::{
    ball_fingerprint_marked, condensation_demo, gs_eval_word, parse_word, Marking, SubsetOfZ, DEFAULT_RADIUS_CAP,
    DEFAULT_SHIFT_BUDGET,
};
use wreath_core::definable::basis::{is_basis, is_top_basis, BasisCandidate};
use wreath_core::definable::{
    act_decide, act_refute, cyc_member, div_witness, exp_g, iso_transfer, Refutation, DEFAULT_SEARCH_BUDGET,
};
use wreath_core::encoding::{nu_decode, nu_encode, IntCode};
use wreath_core::interp::{delta_decode, delta_encode, lambda_g, lift_tuple, tuple_mul, IntTuple};
use wreath_core::lcs::{in_lcs, lcs_coords, lcs_rank};
use wreath_core::random::{random_element, ElementShape};
use wreath_core::selftest::{self, Sizes};
use wreath_core::wreath::GroupContext;
use wreath_core::{Element, GsElem, Poly};

use crate::{Cli, CliError, Command, Report};

type Result<T> = std::result::Result<T, CliError>;

fn report(text: impl Into<String>, json: Value) -> Result<Report> {
    Ok(Report {
        text: text.into(),
        json,
    })
}

fn element_json(g: &Element) -> Value {
    json!({ "text": g.to_string(), "record": g.to_record() })
}

pub fn dispatch(cli: &Cli) -> Result<Report> {
    let ctx = || GroupContext::new(cli.m, cli.n).map_err(|e| CliError::Usage(e.to_string()));
    let elem = |s: &str| -> Result<Element> { Element::parse(ctx()?, s).map_err(CliError::domain) };
    let poly = |s: &str| Poly::parse(s, cli.m).map_err(CliError::domain);
    match &cli.command {
        Command::Mul { g, h } => {
            let p = elem(g)?.mul(&elem(h)?).map_err(CliError::domain)?;
            report(p.to_string(), json!({ "command": "mul", "result": element_json(&p) }))
        }
        Command::Inv { g } => {
            let p = elem(g)?.inv();
            report(p.to_string(), json!({ "command": "inv", "result": element_json(&p) }))
        }
        Command::Pow { g, k } => {
            let p = exp_g(&elem(g)?, *k).map_err(CliError::domain)?;
            report(p.to_string(), json!({ "command": "pow", "k": k, "result": element_json(&p) }))
        }
        Command::Encode { poly: text } => {
            let code = nu_encode(&poly(text)?);
            report(code.to_string(), json!({ "command": "encode", "code": code }))
        }
        Command::Decode { code } => {
            let k: BigUint = code
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("`{code}` is not a natural number")))?;
            let p: Poly = nu_decode(&IntCode(k), cli.m).map_err(CliError::domain)?;
            report(p.to_string(), json!({ "command": "decode", "poly": p.to_string() }))
        }
        Command::G2z { g } => {
            let t = delta_encode(&elem(g)?);
            report(t.to_string(), json!({ "command": "g2z", "tuple": t }))
        }
        Command::Z2g { entries } => {
            let text = if entries.is_empty() {
                let mut buf = String::new();
                std::io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|e| CliError::Usage(format!("reading stdin: {e}")))?;
                buf
            } else {
                entries.join(" ")
            };
            let t = IntTuple::parse(ctx()?, &text).map_err(CliError::domain)?;
            let g: Element = delta_decode(ctx()?, &t).map_err(CliError::domain)?;
            report(g.to_string(), json!({ "command": "z2g", "result": element_json(&g) }))
        }
        Command::TupleMul { x, y } => {
            let c = ctx()?;
            let x = IntTuple::parse(c, x).map_err(CliError::domain)?;
            let y = IntTuple::parse(c, y).map_err(CliError::domain)?;
            let t = tuple_mul(c, &x, &y).map_err(CliError::domain)?;
            report(t.to_string(), json!({ "command": "tuple-mul", "tuple": t }))
        }
        Command::Cyc { a, g } => {
            let v = cyc_member(&elem(a)?, &elem(g)?).map_err(CliError::domain)?;
            let mut text = format!("member: {}", v.member);
            if let (Some(k), Some(z)) = (v.exponent, &v.witness) {
                text.push_str(&format!("\nexponent: {k}\nwitness: {z}"));
            }
            report(
                text,
                json!({
                    "command": "cyc",
                    "member": v.member,
                    "exponent": v.exponent,
                    "witness": v.witness.as_ref().map(element_json),
                }),
            )
        }
        Command::Divides { k, l, base } => {
            let a = match base {
                Some(s) => elem(s)?,
                None => Element::a(ctx()?, 0),
            };
            let z = div_witness(&a, *k, *l).map_err(CliError::domain)?;
            let witness_poly = z.as_ref().map(|z| z.bottom()[0].to_string());
            let mut text = format!("divides: {}", z.is_some());
            if let Some(p) = &witness_poly {
                text.push_str(&format!("\nwitness: {p}"));
            }
            report(
                text,
                json!({
                    "command": "divides",
                    "k": k,
                    "l": l,
                    "divides": z.is_some(),
                    "witness_poly": witness_poly,
                    "witness": z.as_ref().map(element_json),
                }),
            )
        }
        Command::Act { g, h, q } => {
            let (g, h, q) = (elem(g)?, elem(h)?, poly(q)?);
            if act_decide(&g, &h, &q).map_err(CliError::domain)? {
                return report("holds: true", json!({ "command": "act", "holds": true }));
            }
            let budget = cli.budget.unwrap_or(DEFAULT_SEARCH_BUDGET);
            match act_refute(&g, &h, &q, budget).map_err(CliError::domain)? {
                Refutation::Refuted(alpha) => report(
                    format!("holds: false\nrefuted at: {alpha:?}"),
                    json!({ "command": "act", "holds": false, "refuted_at": alpha }),
                ),
                Refutation::Confirmed => Err(CliError::Domain {
                    kind: "Inconsistent".into(),
                    message: "decision and refutation disagree".into(),
                }),
            }
        }
        Command::BasisCheck { top, bottom } => {
            let cs = top.iter().map(|s| elem(s)).collect::<Result<Vec<_>>>()?;
            let us = bottom.iter().map(|s| elem(s)).collect::<Result<Vec<_>>>()?;
            let top_ok = is_top_basis(&cs);
            let ok = is_basis(&cs, &us);
            report(
                format!("top basis: {top_ok}\nbasis: {ok}"),
                json!({ "command": "basis-check", "top_basis": top_ok, "basis": ok }),
            )
        }
        Command::IsoTransfer { a, d, k } => {
            let x = iso_transfer(&elem(a)?, &elem(d)?, *k).map_err(CliError::domain)?;
            report(x.to_string(), json!({ "command": "iso-transfer", "k": k, "result": element_json(&x) }))
        }
        Command::LcsMember { g, level } => {
            let member = in_lcs(&elem(g)?, *level);
            report(
                format!("member: {member}"),
                json!({ "command": "lcs-member", "level": level, "member": member }),
            )
        }
        Command::LcsCoords { g, level } => {
            let coords = lcs_coords(&elem(g)?, *level).map_err(CliError::domain)?;
            let pairs: Vec<(String, String)> =
                coords.coords.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
            let text = if pairs.is_empty() {
                "0".to_string()
            } else {
                pairs.iter().map(|(k, v)| format!("{k}: {v}")).collect::<Vec<_>>().join("\n")
            };
            let obj: serde_json::Map<String, Value> = pairs.into_iter().map(|(k, v)| (k, Value::String(v))).collect();
            report(text, json!({ "command": "lcs-coords", "level": level, "coords": obj }))
        }
        Command::LcsRank { level } => {
            let r = lcs_rank(ctx()?, *level).map_err(CliError::domain)?;
            report(r.to_string(), json!({ "command": "lcs-rank", "level": level, "rank": r.to_string() }))
        }
        Command::GsEval { set, word } => {
            let s = SubsetOfZ::parse(set).map_err(CliError::domain)?;
            let w = parse_word(word.as_deref().unwrap_or("")).map_err(CliError::domain)?;
            let x: GsElem = gs_eval_word(&w, &s);
            report(
                x.to_string(),
                json!({
                    "command": "gs-eval",
                    "set": s.to_string(),
                    "result": { "text": x.to_string(), "record": x.to_record() },
                    "identity": x.is_identity(),
                }),
            )
        }
        Command::GsFingerprint { set } => {
            let s = SubsetOfZ::parse(set).map_err(CliError::domain)?;
            let r = cli.radius.unwrap_or(2);
            let fp = ball_fingerprint_marked::<BigInt>(&s, &Marking::standard(), r, DEFAULT_RADIUS_CAP).map_err(CliError::domain)?;
            report(
                format!("radius: {}\nwords: {}\nclasses: {}\ndigest: {}", fp.radius, fp.words, fp.classes, fp.digest),
                json!({ "command": "gs-fingerprint", "set": s.to_string(), "fingerprint": fp }),
            )
        }
        Command::GsDemo { set } => {
            let s = SubsetOfZ::parse(set).map_err(CliError::domain)?;
            let r = cli.radius.unwrap_or(3);
            let budget = cli.budget.unwrap_or(DEFAULT_SHIFT_BUDGET);
            if budget <= 0 {
                return Err(CliError::Usage("budget must be positive".into()));
            }
            let rep = condensation_demo(&s, r, budget).map_err(CliError::domain)?;
            let lines: Vec<String> = rep
                .rows
                .iter()
                .map(|row| match row.shift {
                    Some(n) => format!(
                        "r={} window=[-{w},{w}] shift={n} separation={} verified={}",
                        row.radius,
                        row.separation.map_or("none".into(), |i| i.to_string()),
                        row.verified,
                        w = row.window
                    ),
                    None => format!("r={} window=[-{w},{w}] no shift within budget", row.radius, w = row.window),
                })
                .collect();
            report(lines.join("\n"), json!({ "command": "gs-demo", "report": rep }))
        }
        Command::Roundtrip { count } => roundtrip(cli, *count),
        Command::Selftest { full } => {
            let sizes = if *full { Sizes::full() } else { Sizes::quick() };
            let rep = selftest::run(cli.seed, &sizes);
            let mut lines: Vec<String> = rep
                .checks
                .iter()
                .map(|c| format!("{} {}: {} passed, {} failed", if c.ok() { "ok  " } else { "FAIL" }, c.name, c.passed, c.failed))
                .collect();
            if !rep.ok() {
                let failed: Vec<&str> = rep.checks.iter().filter(|c| !c.ok()).map(|c| c.name.as_str()).collect();
                lines.push(format!("failing: {}", failed.join(", ")));
                return Err(CliError::Domain {
                    kind: "SelftestFailed".into(),
                    message: lines.join("\n"),
                });
            }
            report(lines.join("\n"), json!({ "command": "selftest", "report": rep }))
        }
    }
}

fn roundtrip(cli: &Cli, count: usize) -> Result<Report> {
    let ctx = GroupContext::new(cli.m, cli.n).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let q = BasisCandidate::standard(ctx);
    let base = q.top[0].clone();
    let shape = ElementShape::for_codes(cli.m);
    let mut passed = 0usize;
    for _ in 0..count {
        let g: Element = random_element(&mut rng, ctx, &shape);
        let t = delta_encode(&g);
        let back: Element = delta_decode(ctx, &t).map_err(CliError::domain)?;
        let (gammas, codes) = lift_tuple(&base, &t).map_err(CliError::domain)?;
        let rebuilt = lambda_g(&q, &gammas, &codes).map_err(CliError::domain)?;
        if back != g || rebuilt != g {
            return Err(CliError::Domain {
                kind: "RoundtripMismatch".into(),
                message: format!("{g}"),
            });
        }
        passed += 1;
    }
    report(
        format!("roundtrips: {passed} of {count}"),
        json!({ "command": "roundtrip", "count": count, "passed": passed }),
    )
}
