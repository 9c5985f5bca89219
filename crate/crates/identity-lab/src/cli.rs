//! Argument parsing and command dispatch.
//!
//! Exit codes: 0 success, accepted or true; 3 rejected, false or none; 2 usage
//! errors; 4 size guards; 1 anything else.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use identity_lab_core::criterion::{Explanation, OrderViolation};
use identity_lab_core::families;
use identity_lab_core::oracle::{self, for_each_realization, id_of};
use identity_lab_core::{
    check, explain, generate_catalog, generate_full_catalog, member_of_catalog, Error, Identity, Mode,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::format::{
    identity_to_string, parse_coloring, parse_identity, CatalogJson, ColoringSpec, FormatError, IdentityJson,
    RealizationJson, VerdictJson,
};
use crate::report::{command_echo, inputs_digest, RunReport, TOOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NEGATIVE: i32 = 3;
pub const EXIT_SIZE_GUARD: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "identity-lab", version, about = "Finite identity structures: catalog, criterion, families and coloring oracle")]
pub struct Cli {
    /// Print a JSON run report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for parallel commands (results do not depend on it).
    #[arg(long, global = true, value_name = "K")]
    pub threads: Option<usize>,
    /// Add wall time to JSON reports.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    Trivial,
    Sk,
    Sprime,
    Sdoubleprime,
    Maxmeet,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Print a built-in identity.
    Builtin {
        #[arg(long, value_enum)]
        family: Family,
        /// Parameter of the s_k family.
        #[arg(long)]
        k: Option<usize>,
        /// Parameter of the other families.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the ranked-coloring criterion in both modes.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        /// Let the strengthened verdict decide the exit code.
        #[arg(long)]
        strengthened: bool,
        /// Write the deciding verdict here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Generate the duplication/restriction catalog.
    Catalog {
        #[arg(long)]
        max_size: usize,
        /// Duplicate all subsets instead of pairs only.
        #[arg(long)]
        full: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run the criterion on every entry (pairs catalogs only).
        #[arg(long)]
        verify: bool,
    },
    /// Test catalog membership.
    Member {
        #[arg(long = "in")]
        input: PathBuf,
        /// Catalog file; generated on the fly from --max-size otherwise.
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long)]
        ordered: bool,
    },
    /// Realization search in a coloring.
    Oracle {
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        identity: Option<PathBuf>,
        #[arg(long)]
        ordered: bool,
        /// Count every realization instead of stopping at the first.
        #[arg(long)]
        all: bool,
        /// List all realized identities up to --max-size.
        #[arg(long)]
        list: bool,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        /// Collapse the vertex layer first.
        #[arg(long)]
        normalize_vertices: bool,
    },
    /// Decide the finite arrow relation by enumerating colorings.
    Arrow {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        identity: PathBuf,
        #[arg(long)]
        colors: u32,
    },
    /// k-simplification of a full identity.
    Simplify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Order-forcing extension of a pairs identity.
    ExtendOrder {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify a criterion verdict independently.
    Explain {
        #[arg(long = "in")]
        input: PathBuf,
        /// Verdict to verify; computed afresh if absent.
        #[arg(long)]
        verdict: Option<PathBuf>,
        #[arg(long)]
        strengthened: bool,
    },
}

/// What the process should print and return.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(PathBuf, std::io::Error),
    Format(FormatError),
    Other(String),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Format(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Format(FormatError::Core(e))
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Format(FormatError::Core(Error::SizeGuard { .. })) => EXIT_SIZE_GUARD,
            _ => EXIT_FAILURE,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Other(m) => m.clone(),
            Failure::Io(p, e) => format!("{}: {e}", p.display()),
            Failure::Format(e) => e.to_string(),
        }
    }
}

type Res<T> = Result<T, Failure>;

/// Result of one command before rendering.
struct Done {
    code: i32,
    text: String,
    result: Value,
}

struct Ctx {
    inputs: Vec<(String, Vec<u8>)>,
}

impl Ctx {
    fn read(&mut self, flag: &str, path: &Path) -> Res<String> {
        let bytes = std::fs::read(path).map_err(|e| Failure::Io(path.to_path_buf(), e))?;
        let text = String::from_utf8(bytes.clone()).map_err(|_| Failure::Other(format!("{} is not UTF-8", path.display())))?;
        self.inputs.push((flag.to_string(), bytes));
        Ok(text)
    }

    fn identity(&mut self, flag: &str, path: &Path) -> Res<Identity> {
        Ok(parse_identity(&self.read(flag, path)?)?)
    }
}

fn write_file(path: &Path, text: &str) -> Res<()> {
    std::fs::write(path, format!("{text}\n")).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn identity_value(s: &Identity) -> Value {
    serde_json::to_value(IdentityJson::from_identity(s)).unwrap()
}

fn verdict_line(v: &identity_lab_core::CriterionVerdict) -> String {
    if v.accepted {
        format!("accepted (order {:?}, ranks {:?})", v.order.as_ref().unwrap(), v.h.as_ref().unwrap())
    } else {
        match &v.rejection {
            Some(identity_lab_core::criterion::Rejection::SupportCycle(c)) => {
                format!("rejected: support digraph cycle through classes {c:?}")
            }
            Some(identity_lab_core::criterion::Rejection::Separation { a, b }) => {
                format!("rejected: classes {a} and {b} are not separated")
            }
            _ => format!("rejected: no order keeps endpoint sets disjoint ({} prefixes)", v.prefixes),
        }
    }
}

fn cmd_builtin(family: Family, k: Option<usize>, n: Option<usize>, out: Option<&Path>) -> Res<Done> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| Failure::Usage(format!("this family needs --{flag}")));
    let text = match family {
        Family::Trivial => identity_to_string(&families::trivial(need(n, "n")?)?),
        Family::Sk => identity_to_string(&families::s_k(need(k, "k")?)?),
        Family::Sprime => identity_to_string(&families::s_prime_n(need(n, "n")?)?),
        Family::Sdoubleprime => identity_to_string(&families::s_doubleprime_n(need(n, "n")?)?),
        Family::Maxmeet => {
            let m = families::max_meet_identity(need(n, "n")?)?;
            serde_json::to_string(&IdentityJson::from_labeled(&m)).unwrap()
        }
    };
    if let Some(p) = out {
        write_file(p, &text)?;
    }
    let result = serde_json::from_str(&text).unwrap();
    Ok(Done { code: EXIT_OK, text, result })
}

fn cmd_check(ctx: &mut Ctx, input: &Path, strengthened: bool, witness: Option<&Path>) -> Res<Done> {
    let s = ctx.identity("in", input)?;
    let plain = check(&s, Mode::Plain)?;
    let strong = check(&s, Mode::Strengthened)?;
    let selected = if strengthened { &strong } else { &plain };
    if let Some(p) = witness {
        write_file(p, &serde_json::to_string(&VerdictJson::from_verdict(selected)).unwrap())?;
    }
    let text = format!("plain:        {}\nstrengthened: {}", verdict_line(&plain), verdict_line(&strong));
    let result = json!({
        "selected": if strengthened { "strengthened" } else { "plain" },
        "plain": VerdictJson::from_verdict(&plain),
        "strengthened": VerdictJson::from_verdict(&strong),
    });
    let code = if selected.accepted { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(Done { code, text, result })
}

fn cmd_catalog(max_size: usize, full: bool, out: Option<&Path>, verify: bool) -> Res<Done> {
    let cat = if full { generate_full_catalog(max_size)? } else { generate_catalog(max_size)? };
    if let Some(p) = out {
        write_file(p, &serde_json::to_string(&CatalogJson::from_catalog(&cat)).unwrap())?;
    }
    let mut text = format!(
        "{} entries ({} up to isomorphism); by size: {:?}",
        cat.len(),
        cat.iso_classes(),
        cat.size_histogram()
    );
    let mut result = json!({
        "max_n": cat.max_n(),
        "flavor": cat.flavor().as_str(),
        "entries": cat.len(),
        "iso_classes": cat.iso_classes(),
        "size_histogram": cat.size_histogram(),
    });
    let mut code = EXIT_OK;
    if verify {
        if full {
            return Err(Failure::Usage("--verify applies to pairs catalogs".into()));
        }
        let verdicts: Vec<(bool, bool)> = cat
            .entries()
            .par_iter()
            .map(|e| -> Res<(bool, bool)> {
                Ok((check(&e.identity, Mode::Plain)?.accepted, check(&e.identity, Mode::Strengthened)?.accepted))
            })
            .collect::<Res<Vec<_>>>()?;
        let failing: Vec<usize> = (0..verdicts.len()).filter(|&i| !(verdicts[i].0 && verdicts[i].1)).collect();
        let _ = write!(text, "\ncriterion: {} of {} entries accepted in both modes", verdicts.len() - failing.len(), verdicts.len());
        result["rejected_entries"] = json!(failing);
        if !failing.is_empty() {
            code = EXIT_NEGATIVE;
        }
    }
    Ok(Done { code, text, result })
}

fn cmd_member(ctx: &mut Ctx, input: &Path, catalog: Option<&Path>, max_size: Option<usize>, ordered: bool) -> Res<Done> {
    let s = ctx.identity("in", input)?;
    let cat = match (catalog, max_size) {
        (Some(p), _) => serde_json::from_str::<CatalogJson>(&ctx.read("catalog", p)?)
            .map_err(FormatError::from)?
            .to_catalog()?,
        (None, Some(m)) => match s.flavor() {
            identity_lab_core::Flavor::Full => generate_full_catalog(m)?,
            _ => generate_catalog(m)?,
        },
        (None, None) => return Err(Failure::Usage("member needs --catalog or --max-size".into())),
    };
    let member = member_of_catalog(&cat, &s, ordered)?;
    let mode = if ordered { "ordered" } else { "unordered" };
    Ok(Done {
        code: if member { EXIT_OK } else { EXIT_NEGATIVE },
        text: format!("{} ({mode})", if member { "member" } else { "not a member" }),
        result: json!({ "member": member, "ordered": ordered, "max_n": cat.max_n() }),
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_oracle(
    ctx: &mut Ctx,
    coloring: &Path,
    identity: Option<&Path>,
    ordered: bool,
    all: bool,
    list: bool,
    max_size: usize,
    normalize: bool,
) -> Res<Done> {
    let spec = parse_coloring(&ctx.read("coloring", coloring)?)?;
    let mut c = spec.build()?;
    if normalize {
        c = oracle::normalize_vertex_colors(&c);
    }
    if list {
        if identity.is_some() {
            return Err(Failure::Usage("--list and --identity are exclusive".into()));
        }
        let ids = id_of(&c, max_size, ordered)?;
        let mut text = format!("{} identities up to size {max_size}", ids.len());
        for s in &ids {
            let _ = write!(text, "\n{}", identity_to_string(s));
        }
        let result = json!({
            "ordered": ordered,
            "max_size": max_size,
            "count": ids.len(),
            "identities": ids.iter().map(identity_value).collect::<Vec<_>>(),
        });
        return Ok(Done { code: EXIT_OK, text, result });
    }
    let Some(path) = identity else {
        return Err(Failure::Usage("oracle needs --identity or --list".into()));
    };
    let s = ctx.identity("identity", path)?;
    if all {
        let mut first = None;
        let count = for_each_realization(&c, &s, ordered, |r| {
            if first.is_none() {
                first = Some(RealizationJson::from_realization(r));
            }
            true
        })?;
        return Ok(Done {
            code: if count > 0 { EXIT_OK } else { EXIT_NEGATIVE },
            text: format!("{count} realizations"),
            result: json!({ "count": count, "first": first }),
        });
    }
    let r = oracle::realizes(&c, &s, ordered)?;
    let text = match &r {
        Some(r) => format!("realized by {:?} with class colors {:?}", r.embedding.map(), r.pulled_colors),
        None => "no realization".to_string(),
    };
    Ok(Done {
        code: if r.is_some() { EXIT_OK } else { EXIT_NEGATIVE },
        text,
        result: json!({ "realization": r.as_ref().map(RealizationJson::from_realization) }),
    })
}

fn cmd_arrow(ctx: &mut Ctx, n: usize, identity: &Path, colors: u32) -> Res<Done> {
    let s = ctx.identity("identity", identity)?;
    let counter = oracle::arrow_counterexample(n, &s, colors)?;
    let holds = counter.is_none();
    Ok(Done {
        code: if holds { EXIT_OK } else { EXIT_NEGATIVE },
        text: if holds {
            format!("every {colors}-coloring of pairs of {n} points realizes the identity")
        } else {
            "found a coloring with no realization".into()
        },
        result: json!({
            "holds": holds,
            "counterexample": counter.map(|c| ColoringSpec::from_coloring(&c).to_value()),
        }),
    })
}

fn cmd_simplify(ctx: &mut Ctx, input: &Path, k: usize, out: Option<&Path>) -> Res<Done> {
    let s = ctx.identity("in", input)?;
    let t = families::simplify_k(&s, k)?;
    let text = identity_to_string(&t);
    if let Some(p) = out {
        write_file(p, &text)?;
    }
    Ok(Done { code: EXIT_OK, text, result: json!({ "identity": identity_value(&t) }) })
}

fn cmd_extend_order(ctx: &mut Ctx, input: &Path, out: Option<&Path>) -> Res<Done> {
    let s = ctx.identity("in", input)?;
    let ext = families::order_forcing_extension(&s)?;
    let text_id = identity_to_string(&ext.identity);
    if let Some(p) = out {
        write_file(p, &text_id)?;
    }
    let merged: Vec<[Vec<usize>; 2]> = ext.merged.iter().map(|[a, b]| [a.to_vec(), b.to_vec()]).collect();
    let mut text = text_id;
    for [a, b] in &merged {
        let _ = write!(text, "\nmerged the classes of {a:?} and {b:?}");
    }
    Ok(Done {
        code: EXIT_OK,
        text,
        result: json!({ "identity": identity_value(&ext.identity), "merged": merged }),
    })
}

fn violation_value(v: &OrderViolation) -> Value {
    match v {
        OrderViolation::EndpointOverlap { class, element } => {
            json!({ "kind": "endpoint_overlap", "class": class, "element": element })
        }
        OrderViolation::Separation { a, b } => json!({ "kind": "separation", "a": a, "b": b }),
        OrderViolation::Cycle(c) => json!({ "kind": "cycle", "cycle": c }),
    }
}

fn cmd_explain(ctx: &mut Ctx, input: &Path, verdict: Option<&Path>, strengthened: bool) -> Res<Done> {
    let s = ctx.identity("in", input)?;
    let v = match verdict {
        Some(p) => serde_json::from_str::<VerdictJson>(&ctx.read("verdict", p)?)
            .map_err(FormatError::from)?
            .to_verdict()?,
        None => check(&s, if strengthened { Mode::Strengthened } else { Mode::Plain })?,
    };
    let e = explain(&v, &s).map_err(|e| Failure::Other(format!("re-verification failed: {e}")))?;
    let code = if v.accepted { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(match e {
        Explanation::Accepted { checked } => {
            let mut text = verdict_line(&v);
            if let Some(ends) = &v.endpoints {
                for (c, (a0, a1)) in ends.iter().enumerate() {
                    let _ = write!(text, "\nclass {c}: a0 = {:?}, a1 = {:?}, h = {}", a0.to_vec(), a1.to_vec(), v.h.as_ref().unwrap()[c]);
                }
            }
            for line in &checked {
                let _ = write!(text, "\nverified {line}");
            }
            Done { code, text, result: json!({ "verified": true, "accepted": true, "checked": checked }) }
        }
        Explanation::Rejected { summary, tags } => {
            let mut text = format!("rejected: {summary}");
            if let Some(tags) = &tags {
                let _ = write!(text, "\nall {} orders violate a condition", tags.len());
                for t in tags.iter().take(20) {
                    let _ = write!(text, "\n{:?}: {:?}", t.order, t.violation);
                }
                if tags.len() > 20 {
                    let _ = write!(text, "\n... ({} more)", tags.len() - 20);
                }
            }
            let tags_value = tags.as_ref().map(|ts| {
                ts.iter().map(|t| json!({ "order": t.order, "violation": violation_value(&t.violation) })).collect::<Vec<_>>()
            });
            Done { code, text, result: json!({ "verified": true, "accepted": false, "summary": summary, "orders": tags_value }) }
        }
    })
}

fn dispatch(cli: &Cli, ctx: &mut Ctx) -> Res<Done> {
    match &cli.cmd {
        Cmd::Builtin { family, k, n, out } => cmd_builtin(*family, *k, *n, out.as_deref()),
        Cmd::Check { input, strengthened, witness } => cmd_check(ctx, input, *strengthened, witness.as_deref()),
        Cmd::Catalog { max_size, full, out, verify } => cmd_catalog(*max_size, *full, out.as_deref(), *verify),
        Cmd::Member { input, catalog, max_size, ordered } => {
            cmd_member(ctx, input, catalog.as_deref(), *max_size, *ordered)
        }
        Cmd::Oracle { coloring, identity, ordered, all, list, max_size, normalize_vertices } => cmd_oracle(
            ctx,
            coloring,
            identity.as_deref(),
            *ordered,
            *all,
            *list,
            *max_size,
            *normalize_vertices,
        ),
        Cmd::Arrow { n, identity, colors } => cmd_arrow(ctx, *n, identity, *colors),
        Cmd::Simplify { input, k, out } => cmd_simplify(ctx, input, *k, out.as_deref()),
        Cmd::ExtendOrder { input, out } => cmd_extend_order(ctx, input, out.as_deref()),
        Cmd::Explain { input, verdict, strengthened } => cmd_explain(ctx, input, verdict.as_deref(), *strengthened),
    }
}

/// Runs the tool on a full argument vector (program name first).
pub fn run(args: &[String]) -> Outcome {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let start = Instant::now();
    let mut ctx = Ctx { inputs: Vec::new() };
    let done = match cli.threads {
        Some(0) => Err(Failure::Usage("--threads must be positive".into())),
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, &mut ctx)),
            Err(e) => Err(Failure::Other(format!("cannot start thread pool: {e}"))),
        },
        None => dispatch(&cli, &mut ctx),
    };
    let done = match done {
        Ok(d) => d,
        Err(f) => {
            return Outcome { code: f.code(), stdout: String::new(), stderr: format!("error: {}\n", f.message()) };
        }
    };
    let builtin = matches!(cli.cmd, Cmd::Builtin { .. });
    let stdout = if cli.json && !builtin {
        let command = command_echo(&args[1..]);
        let report = RunReport {
            tool: TOOL.to_string(),
            inputs_digest: inputs_digest(&command, &ctx.inputs),
            command,
            exit_code: done.code,
            result: done.result,
            wall_time_ms: cli.timing.then(|| start.elapsed().as_millis() as u64),
        };
        serde_json::to_string(&report).unwrap()
    } else {
        done.text
    };
    Outcome { code: done.code, stdout: format!("{stdout}\n"), stderr: String::new() }
}
