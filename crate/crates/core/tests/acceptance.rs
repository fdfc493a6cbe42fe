use std::process::ExitCode;
use std::time::{Duration, Instant};

use picact::census::{verify_all, ClaimResult, ClaimStatus, VerifyOptions};

struct Criterion {
    number: u32,
    title: &'static str,
    claims: &'static [&'static str],
    budget: Duration,
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

const CRITERIA: &[Criterion] = &[
    Criterion { number: 1, title: "root and line counts", claims: &["roots.counts", "lines.counts", "roots.labels"], budget: secs(5) },
    Criterion { number: 2, title: "Weyl group orders", claims: &["weyl.orders", "weyl.e7.order"], budget: secs(120) },
    Criterion { number: 3, title: "trace table of A", claims: &["dp4.a.traces", "dp4.a.subgroups", "dp4.a.subgroup-sums"], budget: secs(5) },
    Criterion { number: 4, title: "H1 of involutions", claims: &["h1.tau", "h1.geiser", "h1.bertini"], budget: secs(3) },
    Criterion { number: 5, title: "minimal quartic group", claims: &["dp4.minimal.search", "dp4.minimal.traces", "dp4.minimal.rank", "dp4.orbits", "dp4.minimal.h1"], budget: secs(30) },
    Criterion { number: 6, title: "degree 5 and 6 H1-triviality", claims: &["k2ge5.rank-one", "k2ge5.transitive"], budget: secs(60) },
    Criterion { number: 7, title: "cyclotomic constraints in W(E6)", claims: &["e6.orders", "e6.order5-profile", "e6.order9-profile"], budget: secs(120) },
    Criterion { number: 8, title: "power-map coherence", claims: &["power-map.coherence", "power-map.identities"], budget: secs(30) },
    Criterion { number: 9, title: "conic-bundle swap parity", claims: &["cb.parity"], budget: secs(10) },
    Criterion { number: 10, title: "binary dihedral bundles", claims: &["cb.binary-dihedral-3", "cb.binary-dihedral-5"], budget: secs(60) },
    Criterion { number: 11, title: "Iskovskikh bundle", claims: &["cb.iskovskikh"], budget: secs(60) },
    Criterion { number: 12, title: "cross-method invariants", claims: &["cross-method"], budget: secs(60) },
];

fn run(id: &str) -> ClaimResult {
    let mut r = verify_all(&VerifyOptions {
        heavy: false,
        filter: Some(id.to_string()),
    });
    assert_eq!(r.len(), 1, "claim {id} is registered once");
    r.remove(0)
}

fn main() -> ExitCode {
    let mut failed = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let results: Vec<ClaimResult> = c.claims.iter().map(|id| run(id)).collect();
        let elapsed = start.elapsed();
        let bad: Vec<&ClaimResult> = results.iter().filter(|r| r.status != ClaimStatus::Pass).collect();
        let slow = elapsed > c.budget;
        let ok = bad.is_empty() && !slow;
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<32} {} ({:.2?}, budget {:?})",
            c.number,
            c.title,
            if ok { "PASS" } else { "FAIL" },
            elapsed,
            c.budget
        );
        for r in bad {
            println!("    {} {}: expected {}; got {}", r.claim_id, r.status.as_str(), r.expected, r.actual);
        }
        if slow {
            println!("    over the runtime budget");
        }
    }
    println!("{} of {} criteria pass", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
