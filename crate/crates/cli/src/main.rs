use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use nrelcat::division::{
    canonical_iso_check, delta_rel, division, homotopy_h, nerve_homotopy_k, projection_mismatches, strict_homotopy_check,
    tau,
};
use nrelcat::enrichment::{embed, enriched_compose, grothendieck, restrict, Zigzag};
use nrelcat::fincat::Functor;
use nrelcat::msset::{colim_over_simplices, simplex_category, TruncatedMSSet};
use nrelcat::nerve::{counit, k_adjoint, nerve, unit, DEFAULT_MAX_NODES};
use nrelcat::prescat::{Budget, Tag, Verdict};
use nrelcat::relcat::{validate_nrel, NRelCategory};
use nrelcat::suite::run_all;
use nrelcat::Error;

#[derive(Parser, Debug)]
#[command(name = "nrelcat", version, about = "Finite n-relative categories and their multisimplicial nerves")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Input JSON file; repeat for commands taking several.
    #[arg(long, global = true)]
    input: Vec<PathBuf>,

    /// Truncation degree D of multisimplicial sets.
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    trunc: u64,

    /// Largest string length L in divisions and simplex categories.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    string_bound: u64,

    /// Longest path considered by the word-problem engine.
    #[arg(long, global = true, default_value_t = Budget::default().max_len)]
    budget_len: usize,

    /// Most paths held at once by the word-problem engine.
    #[arg(long, global = true, default_value_t = Budget::default().max_classes)]
    budget_classes: usize,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Relative degree n, for commands building their own instance.
    #[arg(long, global = true)]
    n: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the category laws, the structure and both axioms.
    Validate,
    /// The truncated nerve of an n-relative category.
    Nerve,
    /// The presentation of K X.
    K,
    /// Whether the counit K N C → C is an isomorphism.
    Counit,
    /// Whether the unit X → N K X is an isomorphism.
    Unit,
    /// The category of multisimplices ΔX up to the string bound.
    SimplexCat,
    /// Compare X with the colimit of standard multisimplices over ΔX.
    ColimCheck,
    /// The division δC and its projection check.
    Division,
    /// Δ_rel X up to the string bound.
    DeltaRel,
    /// Compare Δ_rel Δ[m] with the product of divisions.
    CanonicalIso {
        /// Multi-index m, comma separated, with n + 1 entries.
        #[arg(long, value_delimiter = ',', required = true)]
        index: Vec<usize>,
    },
    /// The strict homotopy from 1 to τπ_t on δp and its nerve.
    Homotopy {
        #[arg(long)]
        p: usize,
        /// `w` or `v<i>`.
        #[arg(long, default_value = "w")]
        tag: String,
        /// Also build k on the nerve at the truncation degree.
        #[arg(long)]
        nerve: bool,
    },
    /// Embed an n-relative category as an (n+1)-relative one, or restrict.
    Enrich {
        #[arg(long)]
        restrict: bool,
    },
    /// Compose two zigzags of the category given as the first input.
    Zigzag,
    /// The Grothendieck construction of zigzags between two objects.
    Grothendieck {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 2)]
        max_len: usize,
    },
    /// Run the verification battery over the bundled corpus.
    Suite {
        #[arg(long, default_value = "bundled")]
        corpus: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Status {
    Ok,
    Failed,
    Exhausted,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Failed => 1,
            Status::Exhausted => 3,
        }
    }

    fn of(ok: bool) -> Self {
        if ok {
            Status::Ok
        } else {
            Status::Failed
        }
    }

    fn of_verdict(v: Verdict) -> Self {
        match v {
            Verdict::Yes => Status::Ok,
            Verdict::No => Status::Failed,
            Verdict::Unknown => Status::Exhausted,
        }
    }
}

struct Report {
    status: Status,
    json: Value,
    human: String,
}

impl Report {
    fn new(status: Status, json: impl Serialize, human: String) -> Result<Self, Error> {
        Ok(Report {
            status,
            json: serde_json::to_value(json)?,
            human,
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli).and_then(|r| emit(&cli, &r).map(|()| r.status)) {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_resource() { 3 } else { 2 })
        }
    }
}

fn emit(cli: &Cli, r: &Report) -> Result<(), Error> {
    let mut text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&r.json)?,
        Format::Human => r.human.trim_end().to_string(),
    };
    text.push('\n');
    match &cli.output {
        Some(path) => fs::write(path, text).map_err(|e| Error::usage(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::usage(e.to_string())),
    }
}

fn read_input(cli: &Cli, i: usize) -> Result<String, Error> {
    let path = cli
        .input
        .get(i)
        .ok_or_else(|| Error::usage(format!("this command needs {} --input file(s)", i + 1)))?;
    fs::read_to_string(path).map_err(|e| Error::usage(format!("{}: {e}", path.display())))
}

fn nrel_input(cli: &Cli) -> Result<NRelCategory, Error> {
    NRelCategory::from_json(&read_input(cli, 0)?)
}

fn msset_input(cli: &Cli) -> Result<TruncatedMSSet, Error> {
    TruncatedMSSet::from_json(&read_input(cli, 0)?)
}

fn budget(cli: &Cli) -> Budget {
    Budget {
        max_len: cli.budget_len,
        max_classes: cli.budget_classes,
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn summary(c: &NRelCategory) -> String {
    let amb = c.ambient();
    let mut s = format!("n = {}, {} objects, {} arrows\n", c.n(), amb.object_count(), amb.arrow_count());
    for i in 1..=c.n() {
        s.push_str(&format!("v{i}: {} arrows\n", c.v_arrows(i).len()));
    }
    s.push_str(&format!("w: {} arrows\n", c.w_arrows().len()));
    s
}

fn msset_summary(x: &TruncatedMSSet) -> String {
    let mut s = format!("n = {}, truncated at {}\n", x.n(), x.bound());
    for flat in 0..x.index_count() {
        let m = x.multi(flat);
        s.push_str(&format!("{m:?}: {} cells\n", x.count_at(flat)));
    }
    s
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let bound = cli.trunc as usize;
    let level = cli.string_bound as usize;
    match &cli.command {
        Command::Validate => {
            let c = nrel_input(cli)?;
            let v = validate_nrel(&c, budget(cli))?;
            let relations = v.axiom_relations.as_ref().map(|r| r.verdict());
            let status = if v.is_valid() {
                Status::Ok
            } else if v.category_violations.is_empty()
                && v.structure_problems.is_empty()
                && v.axiom_generation
                && relations == Some(Verdict::Unknown)
            {
                Status::Exhausted
            } else {
                Status::Failed
            };
            let mut human = format!(
                "category laws: {}\nstructure: {}\naxiom (i): {}\naxiom (ii): {}\n",
                if v.category_violations.is_empty() { "ok" } else { "violated" },
                if v.structure_problems.is_empty() { "ok" } else { "malformed" },
                yes_no(v.axiom_generation),
                relations.map_or("not checked".into(), |r| format!("{r:?}").to_lowercase()),
            );
            for p in v.category_violations.iter().chain(&v.structure_problems).chain(&v.ungenerated) {
                human.push_str(&format!("  {p}\n"));
            }
            Report::new(status, &v, human)
        }
        Command::Nerve => {
            let c = nrel_input(cli)?;
            let nv = nerve(&c, bound, DEFAULT_MAX_NODES)?;
            Report::new(Status::Ok, nv.msset.to_json_value(), msset_summary(&nv.msset))
        }
        Command::K => {
            let x = msset_input(cli)?;
            let k = k_adjoint(&x)?;
            let p = k.presentation();
            let human = format!(
                "n = {}, {} objects, {} generators, {} relations\n",
                k.nrel.n,
                p.objects.len(),
                p.generators.len(),
                p.relations.len()
            );
            Report::new(Status::Ok, json!({ "n": k.nrel.n, "presentation": p.to_json_value() }), human)
        }
        Command::Counit => {
            let c = nrel_input(cli)?;
            let r = counit(&c, budget(cli))?;
            let human = format!(
                "K N C: {} objects, {} generators, {} relations\ncounit is an isomorphism: {}\n",
                r.k_objects,
                r.k_generators,
                r.k_relations,
                format!("{:?}", r.iso.verdict()).to_lowercase()
            );
            Report::new(Status::of_verdict(r.iso.verdict()), &r, human)
        }
        Command::Unit => {
            let x = msset_input(cli)?;
            let r = unit(&x, budget(cli))?;
            let mut human = format!("natural: {}\n", yes_no(r.natural));
            for i in &r.per_index {
                human.push_str(&format!(
                    "{:?}: {} → {} cells, injective {}, surjective {}\n",
                    i.index,
                    i.cells,
                    i.target_cells,
                    yes_no(i.injective),
                    yes_no(i.surjective)
                ));
            }
            human.push_str(&format!("unit is an isomorphism: {}\n", yes_no(r.is_iso())));
            Report::new(Status::of(r.is_iso()), &r, human)
        }
        Command::SimplexCat => {
            let x = msset_input(cli)?;
            let s = simplex_category(&x, level)?;
            let objects: Vec<Value> = s
                .objects
                .iter()
                .map(|&(flat, cell)| json!({ "index": x.multi(flat), "cell": cell }))
                .collect();
            let human = format!(
                "ΔX up to degree {level}: {} objects, {} arrows\n",
                s.category.object_count(),
                s.category.arrow_count()
            );
            Report::new(Status::Ok, json!({ "category": s.category.to_json_value(), "cells": objects }), human)
        }
        Command::ColimCheck => {
            let x = msset_input(cli)?;
            let r = colim_over_simplices(&x, level)?;
            let mut human = String::new();
            for i in &r.per_index {
                human.push_str(&format!(
                    "{:?}: {} classes, {} cells, bijective {}\n",
                    i.index,
                    i.classes,
                    i.cells,
                    yes_no(i.bijective)
                ));
            }
            Report::new(Status::of(r.is_iso()), &r, human)
        }
        Command::Division => {
            let c = nrel_input(cli)?;
            let d = division(&c, level)?;
            let bad = projection_mismatches(&d);
            let amb = d.nrel.ambient();
            let names: Vec<&str> = bad.iter().map(|&a| amb.arrow_name(a)).collect();
            let mut human = summary(&d.nrel);
            human.push_str(&format!("structure detected by π_t: {}\n", yes_no(bad.is_empty())));
            Report::new(
                Status::of(bad.is_empty()),
                json!({ "division": d.nrel.to_json_value(), "projection_mismatches": names }),
                human,
            )
        }
        Command::DeltaRel => {
            let x = msset_input(cli)?;
            let d = delta_rel(&x, level)?;
            Report::new(Status::Ok, d.nrel.to_json_value(), summary(&d.nrel))
        }
        Command::CanonicalIso { index } => {
            let n = cli.n.ok_or_else(|| Error::usage("canonical-iso needs --n"))?;
            let r = canonical_iso_check(n, index, level)?;
            let mut human = format!(
                "Δ_rel Δ{:?}: {} objects, {} arrows\nambient isomorphism: {}\n",
                r.index,
                r.objects,
                r.arrows,
                yes_no(r.ambient_iso)
            );
            for s in &r.structures {
                human.push_str(&format!(
                    "{}: {} vs {} arrows, {}\n",
                    s.structure,
                    s.delta_rel,
                    s.divisions,
                    if s.agree { "agree" } else { "differ" }
                ));
            }
            Report::new(Status::of(r.is_iso()), &r, human)
        }
        Command::Homotopy { p, tag, nerve: with_nerve } => {
            let tag: Tag = tag.parse()?;
            let n = cli.n.unwrap_or(1);
            let (c, d, t) = tau(*p, tag, n, level.max(*p))?;
            let pi = d.terminal_projection();
            let h = homotopy_h(&d, &t);
            let id = Functor::identity(d.nrel.ambient());
            let g = pi.then(&t);
            let section = t.then(&pi) == Functor::identity(c.ambient());
            let strict = strict_homotopy_check(&h, &d.nrel, &d.nrel, &id, &g)?;
            let mut out = json!({ "section": section, "strict_homotopy": strict });
            let mut ok = section && strict;
            let mut human = format!(
                "π_t τ = 1: {}\nh is a strict homotopy from 1 to τπ_t: {}\n",
                yes_no(section),
                yes_no(strict)
            );
            if *with_nerve {
                let k = nerve_homotopy_k(&h, &d.nrel, &d.nrel, &id, &g, bound)?;
                out["nerve"] = json!({
                    "natural": k.natural,
                    "starts_at_f": k.starts_at_f,
                    "ends_at_g": k.ends_at_g,
                });
                ok &= k.natural && k.starts_at_f && k.ends_at_g;
                human.push_str(&format!(
                    "k natural: {}, k0 = N(1): {}, k1 = N(τπ_t): {}\n",
                    yes_no(k.natural),
                    yes_no(k.starts_at_f),
                    yes_no(k.ends_at_g)
                ));
            }
            Report::new(Status::of(ok), out, human)
        }
        Command::Enrich { restrict: down } => {
            let c = nrel_input(cli)?;
            let out = if *down { restrict(&c)?.0 } else { embed(&c) };
            Report::new(Status::Ok, out.to_json_value(), summary(&out))
        }
        Command::Zigzag => {
            let c = nrel_input(cli)?;
            let first: Zigzag = serde_json::from_str(&read_input(cli, 1)?)?;
            let second: Zigzag = serde_json::from_str(&read_input(cli, 2)?)?;
            for z in [&first, &second] {
                if !z.is_valid(&c) {
                    return Err(Error::usage(format!("{} is not a zigzag of the input category", z.display(c.ambient()))));
                }
            }
            let z = enriched_compose(&first, &second)?;
            let human = format!("{}\n", z.display(c.ambient()));
            Report::new(Status::Ok, &z, human)
        }
        Command::Grothendieck { from, to, max_len } => {
            let c = nrel_input(cli)?;
            let find = |name: &str| {
                c.ambient()
                    .find_object(name)
                    .ok_or_else(|| Error::usage(format!("no object `{name}`")))
            };
            let g = grothendieck(&c, find(from)?, find(to)?, *max_len)?;
            let mut human = summary(&g.nrel);
            human.push_str(&format!("{} zigzag types\n", g.diagram.types.types.len()));
            Report::new(Status::Ok, g.nrel.to_json_value(), human)
        }
        Command::Suite { corpus } => {
            if corpus != "bundled" {
                return Err(Error::usage("only the bundled corpus is available"));
            }
            let reports = run_all(budget(cli));
            let status = if reports.iter().any(|r| r.failures().next().is_some() || !r.within_time()) {
                Status::Failed
            } else if reports.iter().any(|r| r.exhausted()) {
                Status::Exhausted
            } else {
                Status::Ok
            };
            let human = reports.iter().map(|r| r.line() + "\n").collect();
            Report::new(status, &reports, human)
        }
    }
}
