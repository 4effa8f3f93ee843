//! The eleven acceptance criteria, each an exact check under a time budget.
//! Runs without the libtest harness so the report always prints.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use wreath_core::selftest::{self, CheckResult, Sizes};

const SEED: u64 = 20_240_601;

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    run: fn(&Sizes) -> CheckResult,
}

fn criteria() -> Vec<Criterion> {
    let secs = Duration::from_secs;
    vec![
        Criterion {
            id: 1,
            title: "multiplication oracle",
            budget: secs(60),
            run: |s| selftest::check_mul_oracle(SEED, s.mul_pairs),
        },
        Criterion {
            id: 2,
            title: "codec exactness",
            budget: secs(10),
            run: |s| selftest::check_codec(SEED, s.codec_samples, s.codec_exhaustive),
        },
        Criterion {
            id: 3,
            title: "cyclic membership grid",
            budget: secs(30),
            run: |_| selftest::check_cyclic_grid(SEED),
        },
        Criterion {
            id: 4,
            title: "divisibility grid",
            budget: secs(10),
            run: |_| selftest::check_divisibility_grid(),
        },
        Criterion {
            id: 5,
            title: "exponentiation",
            budget: secs(60),
            run: |s| selftest::check_exponentiation(SEED, s.exp_elements, s.exp_max),
        },
        Criterion {
            id: 6,
            title: "module action both directions",
            budget: secs(60),
            run: |s| selftest::check_action(SEED, s.act_instances, s.act_points, s.act_corrupted),
        },
        Criterion {
            id: 7,
            title: "basis recognition",
            budget: secs(60),
            run: |s| selftest::check_bases(SEED, s.basis_images),
        },
        Criterion {
            id: 8,
            title: "interpretation roundtrip",
            budget: secs(60),
            run: |s| selftest::check_roundtrip(SEED, s.roundtrip_per_basis, s.roundtrip_bases),
        },
        Criterion {
            id: 9,
            title: "lower central series",
            budget: secs(30),
            run: |_| selftest::check_lcs(SEED),
        },
        Criterion {
            id: 10,
            title: "G_S suite",
            budget: secs(120),
            run: |s| selftest::check_gs(SEED, s.gs_triples),
        },
        Criterion {
            id: 11,
            title: "condensation demo",
            budget: secs(600),
            run: |s| selftest::check_condensation(SEED, s.demo_radius, s.iso_samples),
        },
    ]
}

fn main() -> ExitCode {
    // `cargo test -- <filter>` passes arguments; honor a criterion filter
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let sizes = Sizes::full();
    let mut failures = 0;
    for c in criteria() {
        if !filter.is_empty() && !filter.contains(&c.id) {
            continue;
        }
        let start = Instant::now();
        let result = (c.run)(&sizes);
        let took = start.elapsed();
        let pass = result.ok() && took <= c.budget;
        if !pass {
            failures += 1;
        }
        println!(
            "{} criterion {:>2}: {} ({} passed, {} failed, {:.2}s of {}s)",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            result.passed,
            result.failed,
            took.as_secs_f64(),
            c.budget.as_secs()
        );
        if let Some(why) = &result.first_failure {
            println!("     first failure: {why}");
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
