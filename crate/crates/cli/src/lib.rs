//! The `qgw` command-line front end: expression parsing, command dispatch,
//! output formats and the on-disk cache.

pub mod cache;
pub mod config;
pub mod eval;
pub mod expr;
pub mod format;
pub mod schema;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use qgw_core::lfun::{LKind, Lfun, RMatrixVV, ThetaOrder, VectorRep};
use qgw_core::rootdata::make_root_datum;
use qgw_core::uqg::pbw::{PbwElement, PbwMonomial};
use qgw_core::verify::criteria::{run_criteria, CriterionResult};
use qgw_core::verify::{verify_selected, CheckReport, MainInstance, VerifyOptions, CHECK_NAMES};
use qgw_core::{LieType, RootDatum, ScalarError, ScalarQ, Uqg, UqgError, Weight};
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::cache::Cache;
use crate::config::Config;
use crate::eval::{expect_coord, expect_u, Ctx, EvalError, Value};
use crate::expr::ParseError;
use crate::format::*;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "QGW_CACHE";

#[derive(Debug, Parser)]
#[command(name = "qgw", version, about = "Exact computations in U_q(g) for classical g")]
pub struct Cli {
    /// Cartan type: A, B, C or D.
    #[arg(long = "type", global = true, value_name = "T")]
    pub lie_type: Option<String>,
    #[arg(long, global = true, value_name = "N")]
    pub rank: Option<usize>,
    /// TOML file with defaults for type, rank, truncations and cache path.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Cache directory; overrides QGW_CACHE and the config file.
    #[arg(long, global = true, value_name = "DIR")]
    pub cache: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Plus,
    Minus,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal form of an expression.
    Normalize {
        expr: String,
        /// Expand a U_q(g) element in the ordered PBW basis.
        #[arg(long)]
        pbw: bool,
    },
    /// Coproduct of a U_q(g) element.
    Coproduct { expr: String },
    /// Root vectors E_β, F_β in ≺-order, or the straightening of one pair.
    Rootvec {
        /// 1-based position under ≺.
        #[arg(long, value_name = "K")]
        index: Option<usize>,
        /// Positions i < j under ≺ of the pair to straighten.
        #[arg(long, value_name = "I,J", value_parser = parse_pair)]
        ls: Option<(usize, usize)>,
    },
    /// l-functionals l^±(u^i_j) in PBW form.
    Lfun {
        #[arg(long, value_name = "I,J", value_parser = parse_pair)]
        entry: Option<(usize, usize)>,
        #[arg(long, value_enum, default_value_t = KindArg::Both)]
        kind: KindArg,
    },
    /// R on V⊗V.
    Rmatrix,
    /// Image of a ⊗ f under ζ′ in U_q(g)⊗U_q(g).
    Zeta {
        /// A word (or combination of words) in the u^i_j.
        #[arg(long)]
        word: String,
        /// An element of U_q(g).
        #[arg(long)]
        pbw: String,
    },
    /// Root table, reduced word and convex order.
    Roots {
        #[arg(long, conflicts_with = "latex")]
        json: bool,
        #[arg(long)]
        latex: bool,
    },
    /// Run checks on one datum or the acceptance criteria.
    Verify {
        /// Every check for the datum; without --type/--rank, every criterion.
        #[arg(long)]
        all: bool,
        #[arg(long = "check", value_name = "NAME")]
        checks: Vec<String>,
        #[arg(long = "criterion", value_name = "N")]
        criteria: Vec<u32>,
        /// Write the reports as JSON to this file.
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
    },
    /// Print the JSON schema of an output kind.
    Schema { name: String },
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected I,J, got '{}'", s))?;
    let p = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("'{}' is not a positive integer", x.trim()));
    let (a, b) = (p(a)?, p(b)?);
    if a == 0 || b == 0 {
        return Err("indices are 1-based".into());
    }
    Ok((a, b))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{err}\n  {text}\n  {caret}^", caret = " ".repeat(err.column.saturating_sub(1)))]
    Parse { text: String, err: ParseError },
    #[error(transparent)]
    Eval(EvalError),
    #[error(transparent)]
    Core(UqgError),
    #[error("{0}")]
    Runtime(String),
}

impl From<UqgError> for CliError {
    fn from(e: UqgError) -> Self {
        CliError::Core(e)
    }
}

impl From<ScalarError> for CliError {
    fn from(e: ScalarError) -> Self {
        CliError::Core(UqgError::Scalar(e))
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Core(c) => CliError::Core(c),
            e => CliError::Eval(e),
        }
    }
}

impl CliError {
    /// 2 for bad input, 3 for a failed internal identity, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } | CliError::Eval(_) => 2,
            CliError::Core(UqgError::Integrity(_)) => 3,
            CliError::Core(UqgError::Invalid(_)) | CliError::Core(UqgError::Scalar(_)) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

/// Runs one invocation; output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{}", text);
            } else {
                let _ = write!(err, "{}", text);
            }
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "qgw: {}", e);
            e.exit_code()
        }
    }
}

struct Session {
    config: Config,
    format: Format,
    cache_dir: Option<PathBuf>,
}

impl Session {
    fn new(cli: &Cli) -> Result<Self, CliError> {
        let config = match &cli.config {
            Some(p) => Config::load(p).map_err(CliError::Usage)?,
            None => Config::default(),
        };
        let env = std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
        let cache_dir = cli.cache.clone().or(env).or_else(|| config.cache_path.clone());
        Ok(Session { config, format: cli.format, cache_dir })
    }

    fn datum_opt(&self, cli: &Cli) -> Result<Option<RootDatum>, CliError> {
        let t = cli.lie_type.clone().or_else(|| self.config.lie_type.clone());
        let n = cli.rank.or(self.config.rank);
        match (t, n) {
            (None, None) => Ok(None),
            (Some(t), Some(n)) => {
                let t: LieType = t.parse().map_err(|e| CliError::Usage(format!("{}", e)))?;
                make_root_datum(t, n).map(Some).map_err(|e| CliError::Usage(e.to_string()))
            }
            _ => Err(CliError::Usage("--type and --rank go together".into())),
        }
    }

    fn datum(&self, cli: &Cli) -> Result<RootDatum, CliError> {
        self.datum_opt(cli)?.ok_or_else(|| CliError::Usage("this command needs --type and --rank".into()))
    }

    fn cache(&self, d: &RootDatum) -> Cache {
        Cache::open(self.cache_dir.as_deref(), d)
    }

    fn options(&self, d: &RootDatum) -> VerifyOptions {
        let c = &self.config;
        let mut o = VerifyOptions::for_datum(d);
        if let Some(h) = c.pbw_height {
            o.pbw_height = h;
        }
        if let Some(h) = c.jantz_height {
            o.jantz_height = h;
        }
        if let Some(h) = c.soibel_height {
            o.soibel_height = Some(h);
        }
        if let Some(s) = c.hopf_samples {
            o.hopf_samples = s;
        }
        if let Some(s) = c.seed {
            o.seed = s;
        }
        if c.main_words.is_some() || c.main_pbw.is_some() {
            let base = o.main.unwrap_or(MainInstance { n: d.rank, d: 2, dp: 1 });
            o.main = Some(MainInstance { n: d.rank, d: c.main_words.unwrap_or(base.d), dp: c.main_pbw.unwrap_or(base.dp) });
        }
        o
    }
}

fn save(cache: &mut Cache, err_note: &mut Vec<String>) {
    if let Err(e) = cache.save() {
        err_note.push(format!("cache not written: {}", e));
    }
}

fn parse_expr(text: &str) -> Result<expr::Expr, CliError> {
    expr::parse(text).map_err(|err| CliError::Parse { text: text.to_string(), err })
}

fn emit(out: &mut dyn Write, s: &str) -> Result<(), CliError> {
    writeln!(out, "{}", s).map_err(|e| CliError::Runtime(e.to_string()))
}

fn emit_json(out: &mut dyn Write, v: &Json) -> Result<(), CliError> {
    emit(out, &serde_json::to_string_pretty(v).expect("JSON values serialize"))
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let ses = Session::new(cli)?;
    let mut notes = Vec::new();
    let code = match &cli.command {
        Command::Schema { name } => {
            let s = schema::schema(name)
                .ok_or_else(|| CliError::Usage(format!("no schema '{}' (known: {})", name, schema::NAMES.join(", "))))?;
            emit_json(out, &s)?;
            0
        }
        Command::Verify { all, checks, criteria, report } => verify(cli, &ses, *all, checks, criteria, report.as_deref(), out)?,
        cmd => {
            let d = ses.datum(cli)?;
            let mut cache = ses.cache(&d);
            let r = algebra_command(cmd, &ses, &d, &mut cache, out);
            save(&mut cache, &mut notes);
            r?;
            0
        }
    };
    for n in notes {
        eprintln!("qgw: {}", n);
    }
    Ok(code)
}

fn algebra_command(cmd: &Command, ses: &Session, d: &RootDatum, cache: &mut Cache, out: &mut dyn Write) -> Result<(), CliError> {
    let u = Arc::new(Uqg::<ScalarQ>::new(d));
    let fmt = ses.format;
    match cmd {
        Command::Normalize { expr, pbw } => {
            let e = parse_expr(expr)?;
            let v = Ctx::new(&u).eval(&e)?;
            if *pbw {
                let x = match v {
                    Value::U(x) => x,
                    Value::Scalar(c) => u.scalar(c),
                    v => return Err(CliError::Usage(format!("--pbw needs a U_q(g) element, got a {}", v.kind()))),
                };
                cache.root_vectors(&u)?;
                let p = u.to_pbw(&x)?;
                emit(out, &render_pbw(fmt, &p))?;
            } else {
                emit(out, &render_value(fmt, &v))?;
            }
        }
        Command::Coproduct { expr } => {
            let x = expect_u(&Ctx::new(&u), &parse_expr(expr)?)?;
            let t = u.coproduct(&x)?;
            emit(out, &render_value(fmt, &Value::Tensor(t)))?;
        }
        Command::Roots { json, latex } => {
            let t = u.table();
            let f = if *json {
                Format::Json
            } else if *latex {
                Format::Latex
            } else {
                fmt
            };
            match f {
                Format::Json => emit_json(out, &roots_json(t))?,
                Format::Latex => emit(out, &roots_latex(t))?,
                Format::Text => {
                    let word: Vec<String> = t.reduced_word.iter().map(|i| (i + 1).to_string()).collect();
                    emit(out, &format!("{}  reduced word {}", d.name(), word.join(" ")))?;
                    for (k, r) in t.ordered().enumerate() {
                        emit(out, &format!("{:>3}  ({},{})  {}", k + 1, r.i, r.j, r.root))?;
                    }
                }
            }
        }
        Command::Rootvec { index, ls } => rootvec(&u, cache, fmt, *index, *ls, out)?,
        Command::Lfun { entry, kind } => lfun_cmd(&u, cache, fmt, *entry, *kind, out)?,
        Command::Rmatrix => {
            let lf = lfun_of(&u, cache)?;
            match fmt {
                Format::Json => emit_json(out, &rmatrix_json(&lf.r))?,
                _ => {
                    emit(out, &format!("R on V⊗V, dim {}, Θ {}", lf.r.dim, lf.r.order.name()))?;
                    let n = lf.r.matrix.rows();
                    for a in 0..n {
                        for b in 0..n {
                            let c = &lf.r.matrix[(a, b)];
                            if !qgw_core::Zero::is_zero(c) {
                                let s = if fmt == Format::Latex { c.to_latex() } else { c.to_string() };
                                emit(out, &format!("{} {} {}", a + 1, b + 1, s))?;
                            }
                        }
                    }
                }
            }
        }
        Command::Zeta { word, pbw } => {
            let ctx = Ctx::new(&u);
            let a = expect_coord(&ctx, &parse_expr(word)?)?;
            let f = expect_u(&ctx, &parse_expr(pbw)?)?;
            let lf = lfun_of(&u, cache)?;
            let t = qgw_core::coorddouble::zeta_prime(&lf, &a, &f)?;
            emit(out, &render_value(fmt, &Value::Tensor(t)))?;
        }
        Command::Verify { .. } | Command::Schema { .. } => unreachable!("handled by dispatch"),
    }
    Ok(())
}

fn render_value(fmt: Format, v: &Value<ScalarQ>) -> String {
    match fmt {
        Format::Text => value_text(v),
        Format::Json => serde_json::to_string_pretty(&value_json(v)).expect("JSON values serialize"),
        Format::Latex => value_latex(v),
    }
}

fn render_pbw(fmt: Format, p: &PbwElement<ScalarQ>) -> String {
    match fmt {
        Format::Text => p.to_string(),
        Format::Json => serde_json::to_string_pretty(&pbw_json(p)).expect("JSON values serialize"),
        Format::Latex => pbw_latex(p),
    }
}

/// L-functionals, from the cache when it has them.
fn lfun_of(u: &Arc<Uqg<ScalarQ>>, cache: &mut Cache) -> Result<Arc<Lfun<ScalarQ>>, CliError> {
    cache.root_vectors(u)?;
    let rep = VectorRep::new(u.datum())?;
    let mut built = None;
    let (plus, minus, order) = cache.l_matrices(rep.dim(), || {
        let lf = Arc::new(Lfun::new(u.clone())?);
        built = Some(lf.clone());
        Ok(lf)
    })?;
    if let Some(lf) = built {
        return Ok(lf);
    }
    let order = match order.as_str() {
        "ascending" => ThetaOrder::Ascending,
        _ => ThetaOrder::Descending,
    };
    let r = RMatrixVV::build(u, &rep, order)?;
    Ok(Arc::new(Lfun { u: u.clone(), rep, r, plus, minus, rejected: Vec::new() }))
}

fn ls_pbw(u: &Uqg<ScalarQ>, i: usize, j: usize, minus: bool, cache: &mut Cache) -> Result<PbwElement<ScalarQ>, CliError> {
    let n = u.table().len();
    let mut p = PbwElement { terms: Default::default() };
    for (ex, c) in cache.ls_constants(u, i, j, minus)? {
        let (fexp, eexp) = if minus { (ex, vec![0; n]) } else { (vec![0; n], ex) };
        p.terms.insert(PbwMonomial { kappa: Weight::zero(u.rank()), fexp, eexp }, c);
    }
    Ok(p)
}

fn rootvec(
    u: &Uqg<ScalarQ>,
    cache: &mut Cache,
    fmt: Format,
    index: Option<usize>,
    ls: Option<(usize, usize)>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let n = u.table().len();
    let check = |k: usize| {
        if k == 0 || k > n {
            Err(CliError::Usage(format!("position {} out of range 1..={}", k, n)))
        } else {
            Ok(())
        }
    };
    if let Some((i, j)) = ls {
        check(i)?;
        check(j)?;
        if i >= j {
            return Err(CliError::Usage(format!("--ls needs i < j, got {},{}", i, j)));
        }
        cache.root_vectors(u)?;
        let e = ls_pbw(u, i - 1, j - 1, false, cache)?;
        let f = ls_pbw(u, i - 1, j - 1, true, cache)?;
        let rv = u.root_vectors()?;
        let p = u.datum().pair_rr(&rv.roots[i - 1], &rv.roots[j - 1]);
        match fmt {
            Format::Json => emit_json(out, &json!({ "i": i, "j": j, "pairing": p, "E": pbw_json(&e), "F": pbw_json(&f) }))?,
            Format::Latex => {
                emit(out, &format!("E_{{\\beta_{{{i}}}}}E_{{\\beta_{{{j}}}}} - q^{{{p}}}E_{{\\beta_{{{j}}}}}E_{{\\beta_{{{i}}}}} = {}", pbw_latex(&e)))?;
                emit(out, &format!("F_{{\\beta_{{{i}}}}}F_{{\\beta_{{{j}}}}} - q^{{{p}}}F_{{\\beta_{{{j}}}}}F_{{\\beta_{{{i}}}}} = {}", pbw_latex(&f)))?;
            }
            Format::Text => {
                emit(out, &format!("Eb{i}*Eb{j} - q^{p}*Eb{j}*Eb{i} = {}", e))?;
                emit(out, &format!("Fb{i}*Fb{j} - q^{p}*Fb{j}*Fb{i} = {}", f))?;
            }
        }
        return Ok(());
    }
    if let Some(k) = index {
        check(k)?;
    }
    let rv = cache.root_vectors(u)?;
    let t = u.table();
    let ks: Vec<usize> = match index {
        Some(k) => vec![k - 1],
        None => (0..n).collect(),
    };
    match fmt {
        Format::Json => {
            let items: Vec<Json> = ks
                .iter()
                .map(|&k| {
                    let r = &t.roots[t.sweep[k]];
                    json!({
                        "index": k + 1, "i": r.i, "j": r.j, "root": rv.roots[k].0.to_vec(),
                        "E": element_json(&rv.e[k]), "F": element_json(&rv.f[k]),
                    })
                })
                .collect();
            emit_json(out, &Json::Array(items))?;
        }
        Format::Latex => {
            for &k in &ks {
                emit(out, &format!("E_{{\\beta_{{{}}}}} = {}", k + 1, element_latex(&rv.e[k])))?;
                emit(out, &format!("F_{{\\beta_{{{}}}}} = {}", k + 1, element_latex(&rv.f[k])))?;
            }
        }
        Format::Text => {
            for &k in &ks {
                let r = &t.roots[t.sweep[k]];
                emit(out, &format!("b{} = {}  ({},{})", k + 1, rv.roots[k], r.i, r.j))?;
                emit(out, &format!("  E = {}", rv.e[k]))?;
                emit(out, &format!("  F = {}", rv.f[k]))?;
            }
        }
    }
    Ok(())
}

fn lfun_cmd(
    u: &Arc<Uqg<ScalarQ>>,
    cache: &mut Cache,
    fmt: Format,
    entry: Option<(usize, usize)>,
    kind: KindArg,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let dim = VectorRep::<ScalarQ>::new(u.datum())?.dim();
    if let Some((i, j)) = entry {
        if i > dim || j > dim {
            return Err(CliError::Usage(format!("entry ({},{}) out of range 1..={}", i, j, dim)));
        }
    }
    let lf = lfun_of(u, cache)?;
    let entries: Vec<(usize, usize)> = match entry {
        Some((i, j)) => vec![(i - 1, j - 1)],
        None => (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).collect(),
    };
    let kinds: Vec<LKind> = match kind {
        KindArg::Plus => vec![LKind::Plus],
        KindArg::Minus => vec![LKind::Minus],
        KindArg::Both => vec![LKind::Plus, LKind::Minus],
    };
    let label = |k: LKind| if k == LKind::Plus { "+" } else { "-" };
    let mut items = Vec::new();
    for &(i, j) in &entries {
        let mut obj = serde_json::Map::new();
        obj.insert("i".into(), json!(i + 1));
        obj.insert("j".into(), json!(j + 1));
        for &k in &kinds {
            let p = u.to_pbw(lf.entry(k, i, j))?;
            match fmt {
                Format::Json => {
                    obj.insert(if k == LKind::Plus { "plus" } else { "minus" }.into(), pbw_json(&p));
                }
                Format::Latex => emit(out, &format!("(l^{})^{{{}}}_{{{}}} = {}", label(k), i + 1, j + 1, pbw_latex(&p)))?,
                Format::Text => emit(out, &format!("l{}({}) = {}", label(k), format_u(i, j), p))?,
            }
        }
        items.push(Json::Object(obj));
    }
    if fmt == Format::Json {
        emit_json(out, &Json::Array(items))?;
    }
    Ok(())
}

fn format_u(i: usize, j: usize) -> String {
    format!("u{}_{}", i + 1, j + 1)
}

fn report_line(r: &CheckReport) -> String {
    let mut s = format!(
        "{} {} {} ({} ms)",
        if r.passed() { "PASS" } else { "FAIL" },
        r.datum,
        r.check_name,
        r.timing_ms
    );
    if let Some(i) = &r.instance {
        s.push_str(&format!(" [{}]", i));
    }
    if !r.passed() {
        s.push_str(&format!(": {}", r.witness));
    }
    s
}

fn write_report(path: &Path, v: &Json) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(v).expect("JSON values serialize");
    std::fs::write(path, text).map_err(|e| CliError::Runtime(format!("cannot write {}: {}", path.display(), e)))
}

fn verify(
    cli: &Cli,
    ses: &Session,
    all: bool,
    checks: &[String],
    criteria: &[u32],
    report: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    if let Some(bad) = checks.iter().find(|n| !CHECK_NAMES.contains(&n.as_str())) {
        return Err(CliError::Usage(format!("unknown check '{}' (known: {})", bad, CHECK_NAMES.join(", "))));
    }
    let datum = ses.datum_opt(cli)?;
    let grid = !criteria.is_empty() || (all && datum.is_none());
    if grid {
        if !checks.is_empty() || datum.is_some() {
            return Err(CliError::Usage("criteria run on fixed data; drop --type/--rank/--check".into()));
        }
        if let Some(bad) = criteria.iter().find(|&&c| !(1..=11).contains(&c)) {
            return Err(CliError::Usage(format!("criterion {} is not one of 1..=11", bad)));
        }
        let results = run_criteria(criteria)?;
        return finish_criteria(&results, ses.format, report, out);
    }
    let Some(d) = datum else {
        return Err(CliError::Usage("verify needs --type and --rank, or --all for every criterion".into()));
    };
    if !all && checks.is_empty() {
        return Err(CliError::Usage("choose --all or at least one --check NAME".into()));
    }
    let names: Vec<String> = if all { Vec::new() } else { checks.to_vec() };
    let reports = verify_selected::<ScalarQ>(&d, &ses.options(&d), &names)?;
    let j = reports_json(&reports);
    if let Some(p) = report {
        write_report(p, &j)?;
    }
    if ses.format == Format::Json {
        emit_json(out, &j)?;
    } else {
        for r in &reports {
            emit(out, &report_line(r))?;
        }
        let failed = reports.iter().filter(|r| !r.passed()).count();
        emit(out, &format!("{}: {} of {} checks passed", d.name(), reports.len() - failed, reports.len()))?;
    }
    Ok(if reports.iter().all(CheckReport::passed) { 0 } else { 1 })
}

fn finish_criteria(results: &[CriterionResult], fmt: Format, report: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    let j = serde_json::to_value(results).expect("criteria serialize");
    if let Some(p) = report {
        write_report(p, &j)?;
    }
    if fmt == Format::Json {
        emit_json(out, &j)?;
    } else {
        for r in results {
            emit(out, &r.summary())?;
        }
    }
    Ok(if results.iter().all(CriterionResult::passed) { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrity_errors_exit_3() {
        let e = CliError::from(UqgError::Integrity("E root vector 2 left U^+(n+)".into()));
        assert_eq!(e.exit_code(), 3);
        assert!(e.to_string().starts_with("integrity error: "));
        let e = CliError::from(EvalError::Core(UqgError::Integrity("x".into())));
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn input_errors_exit_2() {
        assert_eq!(CliError::from(UqgError::Invalid("x".into())).exit_code(), 2);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(CliError::Runtime("x".into()).exit_code(), 1);
    }

    #[test]
    fn parse_errors_point_at_the_column() {
        let e = parse_expr("E1 +").unwrap_err();
        let s = e.to_string();
        assert!(s.contains("column 5"), "{}", s);
        assert!(s.ends_with("\n  E1 +\n      ^"), "{:?}", s);
    }

    #[test]
    fn pairs() {
        assert_eq!(parse_pair("1,3"), Ok((1, 3)));
        assert!(parse_pair("0,3").is_err());
        assert!(parse_pair("13").is_err());
    }
}
