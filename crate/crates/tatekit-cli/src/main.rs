//! tatekit — completed (Tate) cohomology for modular group algebras from the
//! command line.
//!
//! Exit codes: 0 success, 1 input error, 2 verification failure, 3 internal
//! certificate failure.

use std::process::ExitCode;
use std::rc::Rc;
use std::thread;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use tatekit::catalog::{self, random_two_generator_module};
use tatekit::completion::{
    completed_naive, completed_resolution_constr, completed_tate_farrell, eckmann_shapiro_compare,
    pd_detect, PdVerdict, Session,
};
use tatekit::linalg::PrimeField;
use tatekit::modrep::{module_from_json, FiniteGroup, Module};
use tatekit::products::{ring_table, ring_table_json};
use tatekit::resolution::{group_algebra_radical, resolution_dump_json, FreeResolution};
use tatekit::suites::{constructions_suite, les_suite, phi_suite, products_suite, SuiteReport, CATALOG};
use tatekit::Error;

#[derive(Parser)]
#[command(name = "tatekit", version, about = "Completed cohomology and completed Ext over F_p[G]")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Per-degree dimensions of the completion from all three constructions
    Tate(TateArgs),
    /// Cohomology ring table on a degree window (dims, unit, all products)
    Ring(RingArgs),
    /// Detect finite vs infinite projective dimension
    Pd(PdArgs),
    /// Compare completed Ext over a subgroup with the induced-module answer
    Shapiro(ShapiroArgs),
    /// Run a verification suite (les | constructions | products | phi | all)
    Verify(VerifyArgs),
    /// Dump a free resolution: ranks and differentials
    Resolve(ResolveArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Tsv,
}

#[derive(Args)]
struct DegreeWindow {
    /// Degree window lo..hi (inclusive)
    #[arg(long, allow_hyphen_values = true)]
    degrees: Option<String>,
    /// Lowest degree (alternative to --degrees)
    #[arg(long, allow_hyphen_values = true)]
    from: Option<i64>,
    /// Highest degree (alternative to --degrees)
    #[arg(long, allow_hyphen_values = true)]
    to: Option<i64>,
}

impl DegreeWindow {
    fn resolve(&self, default: (i64, i64)) -> Result<(i64, i64), Failure> {
        let (lo, hi) = match (&self.degrees, self.from, self.to) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(input("--degrees conflicts with --from/--to"));
            }
            (Some(s), None, None) => {
                let (a, b) = s
                    .split_once("..")
                    .ok_or_else(|| input("--degrees expects lo..hi, e.g. -4..4"))?;
                let lo = a.trim().parse::<i64>().map_err(|_| input("bad lower degree"))?;
                let hi = b.trim().parse::<i64>().map_err(|_| input("bad upper degree"))?;
                (lo, hi)
            }
            (None, f, t) => (f.unwrap_or(default.0), t.unwrap_or(default.1)),
        };
        if lo > hi {
            return Err(input(&format!("empty degree window {}..{}", lo, hi)));
        }
        if lo < -64 || hi > 64 {
            return Err(input("degree window exceeds the supported range -64..64"));
        }
        Ok((lo, hi))
    }
}

#[derive(Args)]
struct TateArgs {
    /// Catalog group name (C2, C3, C4, C5, C6, C8, V4, D4, Q8, S3, A4)
    #[arg(long)]
    group: Option<String>,
    /// Field characteristic
    #[arg(long)]
    prime: Option<u32>,
    /// Module: trivial | regular | random2 | path to a module JSON file
    #[arg(long, default_value = "trivial")]
    module: String,
    #[command(flatten)]
    window_args: DegreeWindow,
    /// Window width for the complete-resolution construction
    #[arg(long)]
    window: Option<usize>,
    /// Seed for the random2 module
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Number of worker threads for independent degrees
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct RingArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    prime: u32,
    #[command(flatten)]
    window_args: DegreeWindow,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct PdArgs {
    /// Catalog group name (not needed when --module is a file)
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    prime: Option<u32>,
    /// Module: trivial | regular | random2 | path to a module JSON file
    #[arg(long)]
    module: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct ShapiroArgs {
    #[arg(long)]
    group: String,
    /// Subgroup: catalog name matched by order profile, or element indices "1,4"
    #[arg(long)]
    subgroup: String,
    #[arg(long)]
    prime: u32,
    #[command(flatten)]
    window_args: DegreeWindow,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// les | constructions | products | phi | all
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct ResolveArgs {
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    prime: Option<u32>,
    /// Module: trivial | regular | random2 | path to a module JSON file
    #[arg(long, default_value = "trivial")]
    module: String,
    /// Number of resolution steps to emit
    #[arg(long, default_value_t = 5)]
    length: usize,
    /// Build the minimal resolution (otherwise plain free covers)
    #[arg(long)]
    minimal: bool,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

struct Failure {
    code: u8,
    message: String,
}

fn input(msg: &str) -> Failure {
    Failure { code: 1, message: msg.to_string() }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Certificate(_) | Error::Exactness(_) | Error::DependentBasis { .. } => 3,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        match e.downcast::<Error>() {
            Ok(lib) => lib.into(),
            Err(other) => Failure { code: 1, message: format!("{:#}", other) },
        }
    }
}

fn main() -> ExitCode {
    // the runtime ignores SIGPIPE, which turns `tatekit ... | head` into a
    // panic on the first failed write; restore the default disposition so a
    // closed pipe ends the process quietly like any other filter
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.cmd {
        Cmd::Tate(a) => cmd_tate(a),
        Cmd::Ring(a) => cmd_ring(a),
        Cmd::Pd(a) => cmd_pd(a),
        Cmd::Shapiro(a) => cmd_shapiro(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Resolve(a) => cmd_resolve(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Where a module comes from: a catalog shorthand over a named group, or a
/// self-describing JSON file.  Threads rebuild modules from this description
/// so only plain data crosses the thread boundary.
#[derive(Clone)]
enum ModuleSpec {
    Named { group: String, prime: u32, which: String, seed: u64 },
    File { text: String, prime: u32 },
}

impl ModuleSpec {
    fn prime(&self) -> u32 {
        match self {
            ModuleSpec::Named { prime, .. } | ModuleSpec::File { prime, .. } => *prime,
        }
    }

    fn build(&self) -> Result<(Rc<FiniteGroup>, Module), Failure> {
        match self {
            ModuleSpec::Named { group, prime, which, seed } => {
                let g = catalog::group(group)
                    .ok_or_else(|| input(&format!("unknown catalog group {:?}", group)))?;
                let field = PrimeField::new(*prime).map_err(Failure::from)?;
                let m = match which.as_str() {
                    "trivial" => Module::trivial(g.clone(), field),
                    "regular" => Module::regular(g.clone(), field),
                    "random2" => random_two_generator_module(g.clone(), field, *seed),
                    other => {
                        return Err(input(&format!(
                            "unknown module {:?} (expected trivial, regular, random2 or a file path)",
                            other
                        )))
                    }
                };
                Ok((g, m))
            }
            ModuleSpec::File { text, .. } => {
                let m = module_from_json(text, &|name| catalog::group(name))?;
                Ok((m.group.clone(), m))
            }
        }
    }
}

fn module_spec(
    group: &Option<String>,
    prime: Option<u32>,
    module: &str,
    seed: u64,
) -> Result<ModuleSpec, Failure> {
    let looks_like_file = module.ends_with(".json") || module.contains('/');
    if looks_like_file {
        let text = std::fs::read_to_string(module)
            .with_context(|| format!("reading module file {}", module))?;
        let m = module_from_json(&text, &|name| catalog::group(name))?;
        if let Some(p) = prime {
            if p != m.field.order() {
                return Err(input(&format!(
                    "--prime {} conflicts with the module file (prime {})",
                    p,
                    m.field.order()
                )));
            }
        }
        if let Some(gname) = group {
            if gname != &m.group.name {
                return Err(input(&format!(
                    "--group {} conflicts with the module file (group {})",
                    gname, m.group.name
                )));
            }
        }
        let prime = m.field.order();
        Ok(ModuleSpec::File { text, prime })
    } else {
        let group = group
            .clone()
            .ok_or_else(|| input("--group is required unless --module is a file"))?;
        let prime = prime.ok_or_else(|| input("--prime is required unless --module is a file"))?;
        Ok(ModuleSpec::Named { group, prime, which: module.to_string(), seed })
    }
}

// ---------------------------------------------------------------------------
// tate
// ---------------------------------------------------------------------------

struct TateRow {
    n: i64,
    naive: usize,
    resolution: usize,
    tate: usize,
}

impl TateRow {
    fn agree(&self) -> bool {
        self.naive == self.resolution && self.resolution == self.tate
    }
}

fn tate_rows(spec: &ModuleSpec, degrees: &[i64], window: Option<usize>) -> Result<Vec<TateRow>, Failure> {
    let session = Session::new(spec.prime())?;
    let (g, a) = spec.build()?;
    let b = Module::trivial(g, session.field);
    let mut rows = Vec::new();
    for &n in degrees {
        let naive = completed_naive(&session, &a, &b, n)?.dim;
        let resolution = completed_resolution_constr(&session, &a, &b, n)?.dim;
        let tate = completed_tate_farrell(&session, &a, &b, n, window)?.dim;
        rows.push(TateRow { n, naive, resolution, tate });
    }
    Ok(rows)
}

fn cmd_tate(args: TateArgs) -> Result<u8, Failure> {
    let (lo, hi) = args.window_args.resolve((-3, 3))?;
    let spec = module_spec(&args.group, args.prime, &args.module, args.seed)?;
    let degrees: Vec<i64> = (lo..=hi).collect();
    let jobs = args.jobs.max(1).min(degrees.len().max(1));
    let mut rows = if jobs <= 1 {
        tate_rows(&spec, &degrees, args.window)?
    } else {
        // independent sessions per worker; assembly is ordered by degree, so
        // the output is identical for every job count
        let chunks: Vec<Vec<i64>> = (0..jobs)
            .map(|w| degrees.iter().copied().skip(w).step_by(jobs).collect())
            .collect();
        let window = args.window;
        let results: Vec<Result<Vec<TateRow>, Failure>> = thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .iter()
                .map(|chunk| {
                    let spec = spec.clone();
                    scope.spawn(move || tate_rows(&spec, chunk, window))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        let mut all = Vec::new();
        for r in results {
            all.extend(r?);
        }
        all.sort_by_key(|r| r.n);
        all
    };
    rows.sort_by_key(|r| r.n);

    let all_agree = rows.iter().all(|r| r.agree());
    let (group_label, prime) = match &spec {
        ModuleSpec::Named { group, prime, .. } => (group.clone(), *prime),
        ModuleSpec::File { prime, .. } => (spec.build()?.0.name.clone(), *prime),
    };
    match args.format {
        Format::Json => {
            let rows_json: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "n": r.n,
                        "naive": r.naive,
                        "resolution": r.resolution,
                        "tate": r.tate,
                        "agree": r.agree(),
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "group": group_label,
                "prime": prime,
                "module": args.module,
                "degrees": [lo, hi],
                "rows": rows_json,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        Format::Tsv => {
            println!("n\tnaive\tresolution\ttate\tagree");
            for r in &rows {
                println!(
                    "{}\t{}\t{}\t{}\t{}",
                    r.n,
                    r.naive,
                    r.resolution,
                    r.tate,
                    if r.agree() { "AGREE" } else { "DISAGREE" }
                );
            }
        }
        Format::Text => {
            println!(
                "completed cohomology of {} over F_{} with module {}",
                group_label, prime, args.module
            );
            println!("{:>5}  {:>6}  {:>10}  {:>5}  {}", "n", "naive", "resolution", "tate", "status");
            for r in &rows {
                println!(
                    "{:>5}  {:>6}  {:>10}  {:>5}  {}",
                    r.n,
                    r.naive,
                    r.resolution,
                    r.tate,
                    if r.agree() { "AGREE" } else { "DISAGREE" }
                );
            }
        }
    }
    Ok(if all_agree { 0 } else { 2 })
}

// ---------------------------------------------------------------------------
// ring
// ---------------------------------------------------------------------------

fn cmd_ring(args: RingArgs) -> Result<u8, Failure> {
    let (lo, hi) = args.window_args.resolve((-4, 4))?;
    let session = Session::new(args.prime)?;
    let g = catalog::group(&args.group)
        .ok_or_else(|| input(&format!("unknown catalog group {:?}", args.group)))?;
    let table = ring_table(&session, &g, lo, hi, 32)?;
    match args.format {
        Format::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(&ring_table_json(&table)).expect("serializable")
            );
        }
        Format::Tsv => {
            println!("section\ta\tb\tvalue");
            for (n, d) in &table.dims {
                println!("dim\t{}\t\t{}", n, d);
            }
            println!("unit\t{}\t\t1", table.unit.join(","));
            for e in &table.products {
                let result = if e.result.is_empty() {
                    "0".to_string()
                } else {
                    e.result
                        .iter()
                        .map(|(l, c)| format!("{}:{}", l, c))
                        .collect::<Vec<_>>()
                        .join(",")
                };
                println!("product\t{}\t{}\t{}", e.a, e.b, result);
            }
        }
        Format::Text => {
            println!("ring table for {} over F_{}, degrees {}..{}", table.group_name, table.prime, lo, hi);
            let dims: Vec<String> = table.dims.iter().map(|(n, d)| format!("{}:{}", n, d)).collect();
            println!("dims  {}", dims.join("  "));
            println!("unit  {}", table.unit.join(" + "));
            for e in &table.products {
                let result = if e.result.is_empty() {
                    "0".to_string()
                } else {
                    e.result
                        .iter()
                        .map(|(l, c)| if *c == 1 { l.clone() } else { format!("{}*{}", c, l) })
                        .collect::<Vec<_>>()
                        .join(" + ")
                };
                println!("{} * {} = {}", e.a, e.b, result);
            }
            println!("unit and associativity laws verified on the whole window");
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// pd
// ---------------------------------------------------------------------------

fn cmd_pd(args: PdArgs) -> Result<u8, Failure> {
    let spec = module_spec(&args.group, args.prime, &args.module, args.seed)?;
    let session = Session::new(spec.prime())?;
    let (g, m) = spec.build()?;
    let verdict = pd_detect(&session, &m)?;
    let finite = matches!(verdict, PdVerdict::Finite(_));
    match args.format {
        Format::Json => {
            let doc = serde_json::json!({
                "group": g.name,
                "prime": spec.prime(),
                "module": args.module,
                "dim": m.dim,
                "projective_dimension": if finite { "finite" } else { "infinite" },
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        Format::Tsv => {
            println!("group\tprime\tmodule\tdim\tverdict");
            println!(
                "{}\t{}\t{}\t{}\t{}",
                g.name,
                spec.prime(),
                args.module,
                m.dim,
                if finite { "finite" } else { "infinite" }
            );
        }
        Format::Text => {
            println!(
                "module {} over F_{}[{}] (dim {}): projective dimension is {}",
                args.module,
                spec.prime(),
                g.name,
                m.dim,
                if finite {
                    "finite (splitting witness verified)"
                } else {
                    "infinite (stable identity class is nonzero)"
                }
            );
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// shapiro
// ---------------------------------------------------------------------------

fn cmd_shapiro(args: ShapiroArgs) -> Result<u8, Failure> {
    let (lo, hi) = args.window_args.resolve((-3, 3))?;
    let session = Session::new(args.prime)?;
    let g = catalog::group(&args.group)
        .ok_or_else(|| input(&format!("unknown catalog group {:?}", args.group)))?;
    let sub = catalog::named_subgroup(g.clone(), &args.subgroup)?;
    let a_h = Module::trivial(sub.as_group.clone(), session.field);
    let b_g = Module::trivial(g.clone(), session.field);
    let mut rows = Vec::new();
    let mut all_equal = true;
    for n in lo..=hi {
        let rep = eckmann_shapiro_compare(&session, &sub, &a_h, &b_g, n)?;
        let equal = rep.dim_induced == rep.dim_subgroup && rep.iso_verified;
        all_equal &= equal;
        rows.push((n, rep.dim_induced, rep.dim_subgroup, equal));
    }
    match args.format {
        Format::Json => {
            let rows_json: Vec<serde_json::Value> = rows
                .iter()
                .map(|(n, gi, hs, eq)| {
                    serde_json::json!({"n": n, "induced": gi, "subgroup": hs, "equal": eq})
                })
                .collect();
            let doc = serde_json::json!({
                "group": g.name,
                "subgroup": sub.as_group.name,
                "index": sub.coset_reps.len(),
                "prime": args.prime,
                "degrees": [lo, hi],
                "rows": rows_json,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        Format::Tsv => {
            println!("n\tinduced\tsubgroup\tequal");
            for (n, gi, hs, eq) in &rows {
                println!("{}\t{}\t{}\t{}", n, gi, hs, if *eq { "EQUAL" } else { "DIFFER" });
            }
        }
        Format::Text => {
            println!(
                "Eckmann-Shapiro: {} >= {} (index {}), F_{}",
                g.name,
                sub.as_group.name,
                sub.coset_reps.len(),
                args.prime
            );
            println!("{:>5}  {:>14}  {:>14}  {}", "n", "Ext_G(Ind a, b)", "Ext_H(a, Res b)", "status");
            for (n, gi, hs, eq) in &rows {
                println!(
                    "{:>5}  {:>14}  {:>14}  {}",
                    n,
                    gi,
                    hs,
                    if *eq { "EQUAL" } else { "DIFFER" }
                );
            }
        }
    }
    Ok(if all_equal { 0 } else { 2 })
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn run_suite(name: &str, seed: u64) -> Result<SuiteReport, Failure> {
    match name {
        "les" => Ok(les_suite(seed, 100)?),
        "constructions" => Ok(constructions_suite(seed)?),
        "products" => Ok(products_suite(seed)?),
        "phi" => Ok(phi_suite(seed, &CATALOG)?),
        other => Err(input(&format!(
            "unknown suite {:?} (expected les, constructions, products, phi or all)",
            other
        ))),
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Failure> {
    let names: Vec<&str> = if args.suite == "all" {
        vec!["les", "constructions", "products", "phi"]
    } else {
        vec![args.suite.as_str()]
    };
    let mut reports = Vec::new();
    for name in names {
        reports.push(run_suite(name, args.seed)?);
    }
    let all_ok = reports.iter().all(|r| r.ok());
    match args.format {
        Format::Json => {
            let docs: Vec<serde_json::Value> = reports
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "suite": r.name,
                        "passed": r.passed,
                        "failed": r.failed,
                        "summary": r.summary,
                        "failures": r.failures,
                    })
                })
                .collect();
            let doc = serde_json::json!({"seed": args.seed, "reports": docs});
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        Format::Tsv => {
            println!("suite\tpassed\tfailed\tresult\tsummary");
            for r in &reports {
                println!(
                    "{}\t{}\t{}\t{}\t{}",
                    r.name,
                    r.passed,
                    r.failed,
                    if r.ok() { "PASS" } else { "FAIL" },
                    r.summary
                );
            }
            for r in &reports {
                for f in &r.failures {
                    println!("failure\t{}\t\t\t{}", r.name, f);
                }
            }
        }
        Format::Text => {
            for r in &reports {
                if r.ok() {
                    println!("{}: PASS, {}", r.name, r.summary);
                } else {
                    println!("{}: FAIL, {} ({} checks failed)", r.name, r.summary, r.failed);
                    for f in &r.failures {
                        println!("  counterexample: {}", f);
                    }
                }
            }
        }
    }
    Ok(if all_ok { 0 } else { 2 })
}

// ---------------------------------------------------------------------------
// resolve
// ---------------------------------------------------------------------------

fn cmd_resolve(args: ResolveArgs) -> Result<u8, Failure> {
    let spec = module_spec(&args.group, args.prime, &args.module, args.seed)?;
    let (g, m) = spec.build()?;
    let field = m.field;
    let radical = Rc::new(group_algebra_radical(&g, field)?);
    let mut res = FreeResolution::new(m, args.minimal, radical)?;
    res.extend_to(args.length)?;
    match args.format {
        Format::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(&resolution_dump_json(&res, args.length))
                    .expect("serializable")
            );
        }
        Format::Tsv => {
            println!("k\trank");
            for k in 0..=args.length {
                println!("{}\t{}", k, res.rank(k));
            }
        }
        Format::Text => {
            let ranks: Vec<String> = (0..=args.length).map(|k| res.rank(k).to_string()).collect();
            println!(
                "free resolution of {} over F_{}[{}], length {} ({})",
                args.module,
                spec.prime(),
                g.name,
                args.length,
                if args.minimal { "minimal" } else { "plain covers" }
            );
            println!("ranks  {}", ranks.join(" "));
            let terminated = (0..=args.length).find(|&k| res.rank(k) == 0);
            if let Some(k) = terminated {
                println!("resolution terminates at step {} (finite projective dimension)", k);
            }
        }
    }
    Ok(0)
}
