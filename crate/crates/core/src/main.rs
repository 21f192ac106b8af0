use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use divisor_lab::constructions::{match_closed_family, FamilyId, FamilyKind};
use divisor_lab::document::ResultDocument;
use divisor_lab::search::{
    predicted_maximum, probe_dkn, run_search, verify_characterization, verify_upper_bound,
    Checkpoint, ExecConfig, Objective, SearchTask, ShardSelector, Verdict,
};
use divisor_lab::zero_sum::{
    probe_mms, probe_mu_max, probe_mu_prime, search_mu, ConjectureProbe, MuPrimeTask, MuSearchTask,
};
use divisor_lab::{
    construct_anti_pencil, construct_k_anti_pencil, construct_prime_set, count_divisors_mitm,
    divisor_report, family, is_anti_pencil, is_k_anti_pencil, is_prime_set, repro, Error, IntSet,
};

const EXIT_OK: u8 = 0;
const EXIT_REFUTED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_RUNTIME: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "divisor-lab",
    version,
    about = "Subset-divisor statistics, constructions and bounded verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Print the result document as JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Write argmax/witness tables as CSV.
    #[arg(long, global = true, value_name = "PATH")]
    csv: Option<PathBuf>,

    /// Worker threads (results do not depend on this).
    #[arg(long, global = true, env = "DIVISOR_LAB_THREADS")]
    threads: Option<usize>,

    /// Wall-clock budget in seconds; on overrun a checkpoint is written.
    #[arg(long, global = true, value_name = "SECONDS")]
    budget: Option<f64>,

    /// Resume a search from a checkpoint written by an earlier run.
    #[arg(long, global = true, value_name = "CHECKPOINT")]
    resume: Option<PathBuf>,

    /// Where to write the checkpoint when the budget runs out.
    #[arg(
        long,
        global = true,
        value_name = "PATH",
        default_value = "divisor-lab.checkpoint.json"
    )]
    checkpoint: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Divisor statistics of one set, e.g. `divisors 1,5,7,11 --k 2`.
    Divisors {
        set: String,
        /// Report d_k for this k.
        #[arg(long)]
        k: Option<usize>,
        /// Print the separation census.
        #[arg(long)]
        census: bool,
        /// Count with meet-in-the-middle (no divisor list; up to 40 elements).
        #[arg(long)]
        mitm: bool,
        /// List every divisor.
        #[arg(long)]
        list: bool,
    },
    /// Build an extremal or prime set.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Exhaustive bounded searches.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Check proven bounds and characterizations within a bound.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Probe open conjectures within a bound.
    #[command(subcommand)]
    Conjecture(ConjectureCmd),
    /// Run every reproduction check and print a pass/fail table.
    Repro {
        /// Only run these criteria (by number).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Subcommand, Debug)]
enum ConstructCmd {
    AntiPencil {
        #[arg(long)]
        base: String,
        #[arg(long, default_value_t = 1)]
        scale: u64,
    },
    KAntiPencil {
        #[arg(long)]
        base: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        scale: u64,
    },
    Prime {
        #[arg(long)]
        base: String,
    },
    /// A closed-form family: triple-1-2-3, quad-1-2-3-6, quad-1-5-7-11, quad-1-11-19-29.
    Family {
        name: String,
        #[arg(long, default_value_t = 1)]
        scale: u64,
    },
}

#[derive(Args, Debug, Clone)]
struct DTaskArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long = "max")]
    max_element: u64,
    /// Search all sets instead of gcd-1 representatives.
    #[arg(long)]
    no_normalize: bool,
    /// Run only shard I of C, written `I/C`.
    #[arg(long)]
    shard: Option<String>,
}

impl DTaskArgs {
    fn task(&self) -> Result<SearchTask, Error> {
        Ok(SearchTask {
            n: self.n,
            k: self.k,
            max_element: self.max_element,
            normalize_gcd: !self.no_normalize,
            shard: self.shard.as_deref().map(parse_shard).transpose()?,
        })
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ObjectiveArg {
    Min,
    Max,
}

#[derive(Subcommand, Debug)]
enum SearchCmd {
    /// Maximum of d (or d_k) over n-sets with elements up to --max.
    Dmax(DTaskArgs),
    /// Extremum of mu (or mu_k) over zero-sum n-sets within [-bound, bound].
    Mu {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        bound: i64,
        #[arg(long, value_enum)]
        objective: ObjectiveArg,
        #[arg(long)]
        shard: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// No set exceeds the claimed maximum (default: the known value).
    UpperBound {
        #[command(flatten)]
        task: DTaskArgs,
        #[arg(long)]
        claim: Option<u64>,
    },
    /// Every maximizer lies in the predicted extremal family.
    DCharacterization(DTaskArgs),
}

#[derive(Subcommand, Debug)]
enum ConjectureCmd {
    /// Minimum of mu_k against C(n-1, k-1).
    Mms {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        bound: i64,
    },
    /// Maximum of mu_k against C(n-1, k).
    MuMax {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        bound: i64,
    },
    /// Maximum of d_k against C(n-1, k).
    Dkn {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long = "max")]
        max_element: u64,
    },
    /// Maximum of mu over sets whose subsets larger than k are all negative.
    MuPrime {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        bound: i64,
    },
}

fn parse_shard(s: &str) -> Result<ShardSelector, Error> {
    let (i, c) = s
        .split_once('/')
        .ok_or_else(|| Error::InvalidArgument(format!("shard must look like I/C, got {s:?}")))?;
    let parse = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidArgument(format!("bad shard number {x:?}")))
    };
    ShardSelector::new(parse(i)?, parse(c)?)
}

/// What a command produced: the document plus the exit status it implies.
struct Outcome {
    status: u8,
    human: String,
    inputs: serde_json::Value,
    outputs: serde_json::Value,
    csv_rows: Vec<(u64, String)>,
}

impl Outcome {
    fn new<I: Serialize, O: Serialize>(
        status: u8,
        human: String,
        inputs: &I,
        outputs: &O,
    ) -> Result<Self, Error> {
        Ok(Outcome {
            status,
            human,
            inputs: serde_json::to_value(inputs)?,
            outputs: serde_json::to_value(outputs)?,
            csv_rows: Vec::new(),
        })
    }

    fn with_rows(mut self, rows: Vec<(u64, String)>) -> Self {
        self.csv_rows = rows;
        self
    }
}

fn exec_config(cli: &Cli) -> Result<ExecConfig, Error> {
    let budget = match cli.budget {
        Some(s) if !(s >= 0.0 && s.is_finite()) => {
            return Err(Error::InvalidArgument(format!(
                "budget must be a nonnegative number, got {s}"
            )))
        }
        Some(s) => Some(Duration::from_secs_f64(s)),
        None => None,
    };
    let resume = cli.resume.as_deref().map(Checkpoint::load).transpose()?;
    Ok(ExecConfig {
        threads: cli.threads,
        budget,
        resume,
    })
}

fn join_sets<T: ToString>(sets: &[T]) -> String {
    sets.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_divisors(
    set: &str,
    k: Option<usize>,
    show_census: bool,
    mitm: bool,
    list: bool,
) -> Result<Outcome, Error> {
    let a: IntSet = set.parse()?;
    let inputs = json!({"set": a, "k": k, "census": show_census, "mitm": mitm});
    let mut h = String::new();
    h.push_str(&format!("set        {a}\ntotal      {}\n", a.total()));
    if mitm {
        let c = count_divisors_mitm(&a)?;
        h.push_str(&format!("d          {}\n", c.d));
        if let Some(k) = k {
            h.push_str(&format!("d_{k:<8} {}\n", c.d_k(k)));
        }
        let strata: Vec<String> = c.d_by_k.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        h.push_str(&format!("d_by_k     {}\n", strata.join(" ")));
        return Outcome::new(
            EXIT_OK,
            h,
            &inputs,
            &json!({"counts": c, "prime_set": c.d == 1}),
        );
    }
    let r = divisor_report(&a)?;
    let prime = is_prime_set(&a)?;
    let anti = is_anti_pencil(&a)?;
    let k_anti = k
        .filter(|&k| (1..=a.len()).contains(&k))
        .map(|k| is_k_anti_pencil(&a, k))
        .transpose()?;
    let family = match_closed_family(&a);
    h.push_str(&format!("d          {}\n", r.d));
    if let Some(k) = k {
        h.push_str(&format!("d_{k:<8} {}\n", r.d_k(k)));
    }
    let strata: Vec<String> = r.d_by_k.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    h.push_str(&format!("d_by_k     {}\n", strata.join(" ")));
    h.push_str(&format!(
        "prime set  {}\nanti-pencil {}\n",
        yes(prime),
        yes(anti)
    ));
    if let (Some(k), Some(ka)) = (k, k_anti) {
        h.push_str(&format!("{k}-anti-pencil {}\n", yes(ka)));
    }
    if let Some((f, s)) = family {
        h.push_str(&format!("family     {f} x {s}\n"));
    }
    if show_census {
        let c = r.census;
        h.push_str(&format!(
            "census     barren {} neutral {} abundant {}\n",
            c.barren, c.neutral, c.abundant
        ));
        if let Some(c) = r.strong_census {
            h.push_str(&format!(
                "strong     barren {} neutral {} abundant {}\n",
                c.barren, c.neutral, c.abundant
            ));
        }
    }
    if list {
        for m in &r.divisors {
            let sub = a.subset(*m)?;
            let parts: Vec<String> = sub.iter().map(u64::to_string).collect();
            h.push_str(&format!("  {{{}}}\n", parts.join(",")));
        }
    }
    let outputs = json!({
        "report": r,
        "prime_set": prime,
        "anti_pencil": anti,
        "k_anti_pencil": k_anti,
        "family": family.map(|(f, s)| json!({"family": f, "scale": s})),
    });
    Outcome::new(EXIT_OK, h, &inputs, &outputs)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn construct_outcome(kind: &str, inputs: serde_json::Value, a: IntSet) -> Result<Outcome, Error> {
    let r = divisor_report(&a)?;
    let strata: Vec<String> = r.d_by_k.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    let h = format!(
        "{kind}  {a}\ntotal      {}\nd          {}\nd_by_k     {}\n",
        a.total(),
        r.d,
        strata.join(" ")
    );
    let outputs = json!({
        "set": a,
        "d": r.d,
        "d_by_k": r.d_by_k,
        "anti_pencil": is_anti_pencil(&a)?,
        "prime_set": r.d == 1,
    });
    Outcome::new(EXIT_OK, h, &inputs, &outputs)
}

fn cmd_construct(c: &ConstructCmd) -> Result<Outcome, Error> {
    match c {
        ConstructCmd::AntiPencil { base, scale } => {
            let b: IntSet = base.parse()?;
            let a = construct_anti_pencil(&b)?.scale(*scale)?;
            construct_outcome(
                "anti-pencil",
                json!({"kind": "anti-pencil", "base": b, "scale": scale}),
                a,
            )
        }
        ConstructCmd::KAntiPencil { base, k, scale } => {
            let b: IntSet = base.parse()?;
            let a = construct_k_anti_pencil(&b, *k)?.scale(*scale)?;
            construct_outcome(
                "k-anti-pencil",
                json!({"kind": "k-anti-pencil", "base": b, "k": k, "scale": scale}),
                a,
            )
        }
        ConstructCmd::Prime { base } => {
            let b: IntSet = base.parse()?;
            let a = construct_prime_set(&b)?;
            construct_outcome("prime set", json!({"kind": "prime", "base": b}), a)
        }
        ConstructCmd::Family { name, scale } => {
            let kind: FamilyKind = name.parse()?;
            if kind.pattern().is_none() {
                return Err(Error::InvalidArgument(format!(
                    "{kind} is constructive; use `construct {kind} --base ...`"
                )));
            }
            let a = family(&FamilyId::closed(kind, *scale))?;
            construct_outcome(
                "family",
                json!({"kind": "family", "family": kind, "scale": scale}),
                a,
            )
        }
    }
}

fn rows_u(value: u64, sets: &[IntSet]) -> Vec<(u64, String)> {
    sets.iter().map(|s| (value, s.to_string())).collect()
}

fn cmd_search(c: &SearchCmd, cfg: &ExecConfig) -> Result<Outcome, Error> {
    match c {
        SearchCmd::Dmax(args) => {
            let task = args.task()?;
            let r = run_search(&task, cfg)?;
            let what = task.k.map_or("d".to_string(), |k| format!("d_{k}"));
            let h = format!(
                "max {what} = {} over {} sets (n = {}, elements <= {})\nargmax     {}\nchecksum   {}\n",
                r.max_value,
                r.sets_examined,
                task.n,
                task.max_element,
                join_sets(&r.argmax_sets),
                r.checksum
            );
            let rows = rows_u(r.max_value, &r.argmax_sets);
            Ok(Outcome::new(EXIT_OK, h, &task, &r)?.with_rows(rows))
        }
        SearchCmd::Mu {
            n,
            k,
            bound,
            objective,
            shard,
        } => {
            let objective = match objective {
                ObjectiveArg::Min => Objective::Min,
                ObjectiveArg::Max => Objective::Max,
            };
            let mut task = MuSearchTask::new(*n, *k, *bound, objective);
            task.shard = shard.as_deref().map(parse_shard).transpose()?;
            let r = search_mu(&task, cfg)?;
            let what = k.map_or("mu".to_string(), |k| format!("mu_{k}"));
            let obj = if objective == Objective::Min {
                "min"
            } else {
                "max"
            };
            let h = format!(
                "{obj} {what} = {} over {} zero-sum sets (n = {n}, |x| <= {bound})\nwitnesses  {}\nchecksum   {}\nnote       {}\n",
                r.best_value.map_or("none".into(), |v| v.to_string()),
                r.sets_examined,
                join_sets(&r.witnesses),
                r.checksum,
                r.caveat
            );
            let rows = r
                .witnesses
                .iter()
                .map(|w| (r.best_value.unwrap_or(0), w.to_string()))
                .collect();
            Ok(Outcome::new(EXIT_OK, h, &task, &r)?.with_rows(rows))
        }
    }
}

fn cmd_verify(c: &VerifyCmd, cfg: &ExecConfig) -> Result<Outcome, Error> {
    match c {
        VerifyCmd::UpperBound { task, claim } => {
            let task = task.task()?;
            let claim = match claim.or_else(|| predicted_maximum(task.n, task.k)) {
                Some(c) => c,
                None => {
                    return Err(Error::InvalidArgument(
                        "no known maximum for this (n, k); pass --claim".into(),
                    ))
                }
            };
            let v = verify_upper_bound(&task, claim, cfg)?;
            let h = format!(
                "claim      max <= {claim}\nobserved   {} over {} sets\nverdict    {}\n{}",
                v.record.max_value,
                v.record.sets_examined,
                if v.holds { "HOLDS" } else { "VIOLATED" },
                v.counterexample
                    .as_ref()
                    .map_or(String::new(), |c| format!("counterexample {c}\n"))
            );
            let rows = rows_u(v.record.max_value, &v.record.argmax_sets);
            let status = if v.holds { EXIT_OK } else { EXIT_REFUTED };
            Ok(
                Outcome::new(status, h, &json!({"task": task, "claim": claim}), &v)?
                    .with_rows(rows),
            )
        }
        VerifyCmd::DCharacterization(args) => {
            let task = args.task()?;
            let rep = verify_characterization(&task, cfg)?;
            let mut h = format!(
                "predicted  {}\nobserved   {} over {} sets\nargmax     {}\n",
                rep.predicted_max,
                rep.record.max_value,
                rep.record.sets_examined,
                join_sets(&rep.record.argmax_sets)
            );
            for c in &rep.classified {
                let label = match &c.classification {
                    divisor_lab::search::Classification::AntiPencil => "anti-pencil".to_string(),
                    divisor_lab::search::Classification::KAntiPencil { k } => {
                        format!("{k}-anti-pencil")
                    }
                    divisor_lab::search::Classification::Family { family, scale } => {
                        format!("{family} x {scale}")
                    }
                };
                h.push_str(&format!("  {} -> {label}\n", c.set));
            }
            for u in &rep.unexplained {
                h.push_str(&format!("  {u} -> UNEXPLAINED\n"));
            }
            if let Some((w, v)) = &rep.certified_witness {
                h.push_str(&format!("witness    {w} reaches {v}\n"));
            }
            h.push_str(&format!(
                "verdict    {}\nnote       {}\n",
                if rep.consistent() {
                    "CONSISTENT"
                } else {
                    "INCONSISTENT"
                },
                rep.note
            ));
            let rows = rows_u(rep.record.max_value, &rep.record.argmax_sets);
            let status = if rep.consistent() {
                EXIT_OK
            } else {
                EXIT_REFUTED
            };
            Ok(Outcome::new(status, h, &task, &rep)?.with_rows(rows))
        }
    }
}

fn verdict_status(v: Verdict) -> u8 {
    match v {
        Verdict::Consistent => EXIT_OK,
        Verdict::Exceeds => EXIT_REFUTED,
    }
}

fn conjecture_outcome(label: &str, p: ConjectureProbe) -> Result<Outcome, Error> {
    let r = &p.record;
    let h = format!(
        "{label}    observed {} vs target {} ({}n >= 4k)\nverdict    {:?}\nsets       {}\nwitnesses  {}\nnote       {}\n",
        r.best_value.map_or("none".into(), |v| v.to_string()),
        p.target,
        if p.in_range { "" } else { "outside conjectured range: not " },
        p.verdict,
        r.sets_examined,
        join_sets(&r.witnesses),
        r.caveat
    );
    let rows = r
        .witnesses
        .iter()
        .map(|w| (r.best_value.unwrap_or(0), w.to_string()))
        .collect();
    Ok(Outcome::new(verdict_status(p.verdict), h, &r.task, &p)?.with_rows(rows))
}

fn cmd_conjecture(c: &ConjectureCmd, cfg: &ExecConfig) -> Result<Outcome, Error> {
    match c {
        ConjectureCmd::Mms { n, k, bound } => {
            conjecture_outcome("min mu_k", probe_mms(*n, *k, *bound, cfg)?)
        }
        ConjectureCmd::MuMax { n, k, bound } => {
            conjecture_outcome("max mu_k", probe_mu_max(*n, *k, *bound, cfg)?)
        }
        ConjectureCmd::Dkn { n, k, max_element } => {
            let p = probe_dkn(*n, *k, *max_element, cfg)?;
            let h = format!(
                "max d_{k}    {} vs C({}, {k}) = {}\nverdict    {:?}\nargmax     {}\n",
                p.record.max_value,
                n - 1,
                p.binomial,
                p.verdict,
                join_sets(&p.record.argmax_sets)
            );
            let rows = rows_u(p.record.max_value, &p.record.argmax_sets);
            Ok(Outcome::new(verdict_status(p.verdict), h, &p.record.task, &p)?.with_rows(rows))
        }
        ConjectureCmd::MuPrime { n, k, bound } => {
            let task = MuPrimeTask {
                n: *n,
                k: *k,
                bound: *bound,
            };
            let p = probe_mu_prime(&task, cfg)?;
            let h = format!(
                "max mu     {} vs formula {}\nverdict    {:?}\nwitnesses  {}\nnote       {}\n",
                p.max_mu.map_or("none".into(), |v| v.to_string()),
                p.formula,
                p.verdict,
                join_sets(&p.witnesses),
                p.caveat
            );
            let rows = p
                .witnesses
                .iter()
                .map(|w| (p.max_mu.unwrap_or(0), w.to_string()))
                .collect();
            Ok(Outcome::new(verdict_status(p.verdict), h, &task, &p)?.with_rows(rows))
        }
    }
}

fn cmd_repro(only: &[u8], cfg: &ExecConfig) -> Result<Outcome, Error> {
    let mut results = Vec::new();
    let mut h = String::new();
    for c in repro::criteria() {
        if !only.is_empty() && !only.contains(&c.id) {
            continue;
        }
        let r = c.run(cfg);
        let line = format!(
            "[{}] {:>2} {:<24} {:>8.2}s  {}\n",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.elapsed_secs,
            r.detail
        );
        eprint!("{line}");
        h.push_str(&line);
        results.push(r);
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    h.push_str(&format!(
        "{} passed, {failed} failed\n",
        results.len() - failed
    ));
    let status = if failed == 0 { EXIT_OK } else { EXIT_REFUTED };
    Outcome::new(status, h, &json!({"only": only}), &results)
}

fn write_csv(path: &Path, rows: &[(u64, String)]) -> Result<(), Error> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(e.into()))?;
    w.write_record(["rank", "value", "set"])
        .map_err(|e| Error::Io(e.into()))?;
    for (i, (v, s)) in rows.iter().enumerate() {
        w.write_record([(i + 1).to_string(), v.to_string(), s.clone()])
            .map_err(|e| Error::Io(e.into()))?;
    }
    w.flush()?;
    Ok(())
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let cfg = exec_config(cli)?;
    match &cli.command {
        Command::Divisors {
            set,
            k,
            census,
            mitm,
            list,
        } => cmd_divisors(set, *k, *census, *mitm, *list),
        Command::Construct(c) => cmd_construct(c),
        Command::Search(c) => cmd_search(c, &cfg),
        Command::Verify(c) => cmd_verify(c, &cfg),
        Command::Conjecture(c) => cmd_conjecture(c, &cfg),
        Command::Repro { only } => cmd_repro(only, &cfg),
    }
}

fn error_status(e: &Error) -> u8 {
    match e {
        Error::InvalidSet(_)
        | Error::InvalidMask { .. }
        | Error::InvalidArgument(_)
        | Error::Capacity { .. } => EXIT_USAGE,
        Error::BudgetExceeded(_) => EXIT_BUDGET,
        Error::Overflow(_) | Error::Io(_) | Error::Json(_) => EXIT_RUNTIME,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(Error::BudgetExceeded(cp)) => {
            let done = cp.shards_done.len();
            let total = cp.shard_count;
            if let Err(e) = cp.save(&cli.checkpoint) {
                eprintln!("error: budget exceeded and the checkpoint could not be written: {e}");
                return ExitCode::from(EXIT_RUNTIME);
            }
            eprintln!(
                "budget exceeded after {done} of {total} shards; checkpoint written to {} (rerun with --resume {})",
                cli.checkpoint.display(),
                cli.checkpoint.display()
            );
            return ExitCode::from(EXIT_BUDGET);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(error_status(&e));
        }
    };
    if let Some(path) = &cli.csv {
        if let Err(e) = write_csv(path, &outcome.csv_rows) {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_RUNTIME);
        }
    }
    let mut out = std::io::stdout().lock();
    let written = if cli.json {
        ResultDocument::new(
            argv,
            &outcome.inputs,
            &outcome.outputs,
            start.elapsed().as_secs_f64(),
        )
        .and_then(|d| d.to_canonical_json())
        .map(|text| writeln!(out, "{text}"))
    } else {
        Ok(write!(out, "{}", outcome.human))
    };
    match written {
        Ok(Ok(())) => ExitCode::from(outcome.status),
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_RUNTIME)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_status(&e))
        }
    }
}
