use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use picact::census::{
    census_entry, claim_ids, is_heavy_entry, verify_all, CensusEntry, ClaimStatus, VerifyOptions,
    CENSUS_IDS,
};
use picact::cohomology::{h1, h1_over_subgroups};
use picact::gaction::action_report;
use picact::picard::{del_pezzo, exceptional_classes, roots, AnyLattice, Lattice, LatticeVector};
use picact::weyl::{
    generate, group_order_orbit_stabilizer, simple_reflections, DEFAULT_ENUMERATION_CAP,
};
use serde_json::{json, Value};

const THREADS_ENV: &str = "PICACT_THREADS";

#[derive(Parser)]
#[command(name = "picact", version, about = "Finite group actions on Picard lattices of rational surfaces")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct Degree {
    /// Del Pezzo degree K^2.
    #[arg(long, value_parser = clap::value_parser!(i64).range(1..=7))]
    degree: i64,
}

#[derive(Subcommand)]
enum Command {
    /// Gram matrix and canonical class of a del Pezzo lattice.
    Lattice(Degree),
    /// Roots: x^2 = -2, x.K = 0.
    Roots(Degree),
    /// Exceptional classes: x^2 = -1, x.K = -1.
    Lines(Degree),
    /// Weyl group of the root system.
    Weyl {
        #[command(flatten)]
        degree: Degree,
        /// Enumerate all elements instead of counting by orbit-stabilizer.
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        enumeration_cap: usize,
    },
    /// Per-element traces, Euler predictions and orbits for a census group.
    Action {
        #[arg(long)]
        census: String,
        #[arg(long)]
        heavy: bool,
    },
    /// H^1(G, Pic) for a census group.
    H1 {
        #[arg(long)]
        census: String,
        /// Also check every subgroup.
        #[arg(long)]
        all_subgroups: bool,
        #[arg(long)]
        heavy: bool,
    },
    /// List, export or import census entries.
    Census {
        #[arg(long, conflicts_with_all = ["export", "import"])]
        list: bool,
        /// Census id to export as JSON.
        #[arg(long, conflicts_with = "import")]
        export: Option<String>,
        /// JSON file previously written by --export.
        #[arg(long)]
        import: Option<std::path::PathBuf>,
        #[arg(long)]
        heavy: bool,
    },
    /// Run the claim registry.
    Verify {
        #[arg(long)]
        heavy: bool,
        /// Claim id or id prefix.
        #[arg(long)]
        claim: Option<String>,
    },
}

enum Failure {
    Usage(String),
    Claims,
}

impl From<picact::Error> for Failure {
    fn from(e: picact::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Out = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: {THREADS_ENV} ignored: {e}");
        }
    }
    match run(&cli) {
        Ok(s) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Claims) => ExitCode::from(2),
    }
}

fn run(cli: &Cli) -> Out {
    let f = cli.format;
    match &cli.command {
        Command::Lattice(d) => lattice(d.degree, f),
        Command::Roots(d) => class_list(d.degree, f, true),
        Command::Lines(d) => class_list(d.degree, f, false),
        Command::Weyl {
            degree,
            enumerate,
            enumeration_cap,
        } => weyl(degree.degree, *enumerate, *enumeration_cap, f),
        Command::Action { census, heavy } => action(census, *heavy, f),
        Command::H1 {
            census,
            all_subgroups,
            heavy,
        } => cohomology(census, *all_subgroups, *heavy, f),
        Command::Census {
            list,
            export,
            import,
            heavy,
        } => census(*list, export.as_deref(), import.as_deref(), *heavy, f),
        Command::Verify { heavy, claim } => verify(*heavy, claim.clone(), f),
    }
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn csv_row(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn lattice(degree: i64, f: Format) -> Out {
    let l = del_pezzo(degree)?;
    let gram = l.gram().to_rows();
    Ok(match f {
        Format::Json => to_json(&json!({
            "schema": "1",
            "lattice": AnyLattice::from(l.clone()),
        })),
        Format::Csv => gram.iter().map(|r| csv_row(r) + "\n").collect(),
        Format::Text => {
            let mut s = format!("{} rank {}\ngram\n", l.id(), l.rank());
            for r in &gram {
                let _ = writeln!(s, "  {r:?}");
            }
            let _ = writeln!(s, "K = {:?}", l.canonical().coords());
            s
        }
    })
}

fn class_list(degree: i64, f: Format, want_roots: bool) -> Out {
    let l = del_pezzo(degree)?;
    let (classes, label): (Vec<LatticeVector>, Option<String>) = if want_roots {
        let r = roots(&l);
        (r.roots, Some(r.type_label.to_string()))
    } else {
        (exceptional_classes(&l).classes, None)
    };
    Ok(match f {
        Format::Json => {
            let mut v = json!({
                "schema": "1",
                "lattice": l.id(),
                "count": classes.len(),
                "classes": classes,
            });
            if let Some(t) = &label {
                v["type"] = json!(t);
            }
            to_json(&v)
        }
        Format::Csv => classes.iter().map(|c| csv_row(c.coords()) + "\n").collect(),
        Format::Text => {
            let mut s = match &label {
                Some(t) => format!("{} roots of type {t} on {}\n", classes.len(), l.id()),
                None => format!("{} exceptional classes on {}\n", classes.len(), l.id()),
            };
            for c in &classes {
                let _ = writeln!(s, "  {:?}", c.coords());
            }
            s
        }
    })
}

fn weyl(degree: i64, enumerate: bool, cap: usize, f: Format) -> Out {
    let l = del_pezzo(degree)?;
    let gens = simple_reflections(&l)?;
    let any = Arc::new(AnyLattice::from(l));
    let (order, dump) = if enumerate {
        let g = generate(any.clone(), gens.clone(), cap)?;
        (g.order(), Some(g.dump(true)))
    } else {
        (group_order_orbit_stabilizer(&any, &gens)?, None)
    };
    Ok(match f {
        Format::Json => match dump {
            Some(d) => to_json(&serde_json::to_value(d).expect("group dumps serialize")),
            None => to_json(&json!({
                "schema": "1",
                "lattice": any.id(),
                "order": order,
                "generators": gens.iter().map(|g| g.matrix().to_rows()).collect::<Vec<_>>(),
            })),
        },
        Format::Csv => format!("lattice,order\n{},{order}\n", any.id()),
        Format::Text => format!(
            "W on {}: order {order} ({})\n",
            any.id(),
            if enumerate { "enumerated" } else { "orbit-stabilizer" }
        ),
    })
}

fn load(id: &str, heavy: bool) -> Result<CensusEntry, Failure> {
    if !CENSUS_IDS.contains(&id) {
        return Err(Failure::Usage(format!(
            "unknown census id {id}; try `picact census --list`"
        )));
    }
    if is_heavy_entry(id) && !heavy {
        return Err(Failure::Usage(format!("{id} needs --heavy")));
    }
    eprintln!("building {id}");
    Ok(census_entry(id)?)
}

fn action(id: &str, heavy: bool, f: Format) -> Out {
    let e = load(id, heavy)?;
    let r = action_report(&e.group)?;
    Ok(match f {
        Format::Json => to_json(&serde_json::to_value(&r).expect("reports serialize")),
        Format::Csv => r.to_csv(),
        Format::Text => {
            let mut s = format!(
                "{id} on {}: order {}, invariant rank {}, orbit sizes {:?}\n",
                r.lattice, r.group_order, r.invariant_rank, r.orbit_sizes
            );
            let _ = writeln!(s, "traces on K-perp {:?}", r.trace_multiset());
            s
        }
    })
}

fn cohomology(id: &str, all: bool, heavy: bool, f: Format) -> Out {
    let e = load(id, heavy)?;
    let whole = h1(&e.group)?;
    let sub = if all {
        Some(h1_over_subgroups(&e.group)?)
    } else {
        None
    };
    Ok(match f {
        Format::Json => {
            let mut v = json!({
                "schema": "1",
                "census": id,
                "order": e.group.order(),
                "h1": whole.to_string(),
                "invariant_factors": whole.invariant_factors,
            });
            if let Some((ok, witness, count)) = &sub {
                v["all_subgroups"] = json!({
                    "trivial": ok,
                    "subgroups": count,
                    "witness_order": witness.as_ref().map(|w| w.order()),
                });
            }
            to_json(&v)
        }
        Format::Csv => {
            let mut s = String::from("census,order,h1,all_subgroups_trivial\n");
            let col = sub.as_ref().map(|t| t.0.to_string()).unwrap_or_default();
            let _ = writeln!(s, "{id},{},{whole},{col}", e.group.order());
            s
        }
        Format::Text => {
            let mut s = format!("H^1({id}) = {whole}\n");
            if let Some((ok, witness, count)) = &sub {
                match witness {
                    None if *ok => {
                        let _ = writeln!(s, "trivial on all {count} subgroups");
                    }
                    w => {
                        let _ = writeln!(
                            s,
                            "nonzero on a subgroup of order {}",
                            w.as_ref().map(|g| g.order()).unwrap_or(0)
                        );
                    }
                }
            }
            s
        }
    })
}

fn census(
    list: bool,
    export: Option<&str>,
    import: Option<&std::path::Path>,
    heavy: bool,
    f: Format,
) -> Out {
    if let Some(id) = export {
        return Ok(load(id, heavy)?.to_json() + "\n");
    }
    if let Some(path) = import {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let e = CensusEntry::from_json(&text)?;
        return Ok(match f {
            Format::Json => to_json(&json!({
                "schema": "1",
                "id": e.id,
                "lattice": e.lattice.id(),
                "order": e.group.order(),
            })),
            Format::Csv => format!("id,lattice,order\n{},{},{}\n", e.id, e.lattice.id(), e.group.order()),
            Format::Text => format!("{}: order {} on {}\n", e.id, e.group.order(), e.lattice.id()),
        });
    }
    if !list {
        return Err(Failure::Usage("census needs --list, --export ID or --import FILE".into()));
    }
    Ok(match f {
        Format::Json => to_json(&json!({
            "schema": "1",
            "census": CENSUS_IDS
                .iter()
                .map(|id| json!({"id": id, "heavy": is_heavy_entry(id)}))
                .collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("id,heavy\n");
            for id in CENSUS_IDS {
                let _ = writeln!(s, "{id},{}", is_heavy_entry(id));
            }
            s
        }
        Format::Text => CENSUS_IDS
            .iter()
            .map(|id| {
                if is_heavy_entry(id) {
                    format!("{id} (heavy)\n")
                } else {
                    format!("{id}\n")
                }
            })
            .collect(),
    })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn verify(heavy: bool, claim: Option<String>, f: Format) -> Out {
    let results = verify_all(&VerifyOptions {
        heavy,
        filter: claim.clone(),
    });
    if results.is_empty() {
        if let Some(c) = &claim {
            eprintln!("warning: no claim matches {c}; known ids: {}", claim_ids().join(", "));
        }
    }
    let mut tally: BTreeMap<&str, usize> = BTreeMap::new();
    for r in &results {
        *tally.entry(r.status.as_str()).or_insert(0) += 1;
    }
    let failed = results.iter().any(|r| r.status == ClaimStatus::Fail);
    let out = match f {
        Format::Json => to_json(&json!({
            "schema": "1",
            "results": results,
            "summary": tally,
        })),
        Format::Csv => {
            let mut s = String::from("claim_id,status,expected,actual,paper_anchor\n");
            for r in &results {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    r.claim_id,
                    r.status.as_str(),
                    csv_field(&r.expected),
                    csv_field(&r.actual),
                    csv_field(&r.paper_anchor)
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &results {
                let _ = writeln!(s, "{:<20} {}", r.status.as_str(), r.claim_id);
                let _ = writeln!(s, "    anchor:   {}", r.paper_anchor);
                if !r.expected.is_empty() {
                    let _ = writeln!(s, "    expected: {}", r.expected);
                }
                let _ = writeln!(s, "    actual:   {}", r.actual);
            }
            let _ = writeln!(s, "{tally:?}");
            s
        }
    };
    if failed {
        print!("{out}");
        return Err(Failure::Claims);
    }
    Ok(out)
}
