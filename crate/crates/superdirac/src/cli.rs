//! Command-line front end: argument parsing, command dispatch, JSON output,
//! exit codes and the on-disk result cache.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::analysis::{
    character_formula_check, dirac_kernel_check, even_decomposition_verify, harish_chandra_audit, index_check,
    injection_check, kostant_cohomology, kostant_module_height, verma_filtration_check, Formula, Verdict,
};
use crate::dirac::{
    anti_selfadjoint_certificate, dirac_cohomology, dirac_index, dirac_inequality_audit, dirac_square_audit,
    DiracComplex,
};
use crate::modules::{certify_unitarity, Kind, ModuleError, TruncatedModule, UnitarityCertificate};
use crate::oscillator::oscillator_character;
use crate::uea::Uea;
use crate::weights::{RootDatum, Support, Weight};

pub const SCHEMA: u64 = 1;
pub const ENGINE_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "+engine.2");

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNEXPECTED_REFUTATION: i32 = 1;
pub const EXIT_ASSERTION: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "superdirac", version, about = "Dirac operators on highest weight supermodules of type A(m|n)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Roots, Weyl vectors and the odd basis table
    RootData(JobArgs),
    /// Branching of L(Λ) to g₀̄, checked against characters
    Decompose(JobArgs),
    /// Dirac cohomology of L(Λ) by blocks
    DiracCohomology(JobArgs),
    /// Positivity of all Shapovalov blocks of L(Λ) up to the height
    CertifyUnitarity(JobArgs),
    /// Weight and k-type characters of L(Λ)
    Character(JobArgs),
    /// Dirac index against the Euler characteristic of H_D
    Index(JobArgs),
    /// Run one verification suite
    Verify(JobArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::RootData(_) => "root-data",
            Command::Decompose(_) => "decompose",
            Command::DiracCohomology(_) => "dirac-cohomology",
            Command::CertifyUnitarity(_) => "certify-unitarity",
            Command::Character(_) => "character",
            Command::Index(_) => "index",
            Command::Verify(_) => "verify",
        }
    }

    pub fn args(&self) -> &JobArgs {
        match self {
            Command::RootData(a)
            | Command::Decompose(a)
            | Command::DiracCohomology(a)
            | Command::CertifyUnitarity(a)
            | Command::Character(a)
            | Command::Index(a)
            | Command::Verify(a) => a,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Square,
    Cohomology,
    Kostant,
    Character,
    Index,
    Filtration,
    Branching,
    Unitarity,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Square => "square",
            Suite::Cohomology => "cohomology",
            Suite::Kostant => "kostant",
            Suite::Character => "character",
            Suite::Index => "index",
            Suite::Filtration => "filtration",
            Suite::Branching => "branching",
            Suite::Unitarity => "unitarity",
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct JobArgs {
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    /// defaults to m − p
    #[arg(long)]
    pub q: Option<usize>,
    /// "a1,…,am|b1,…,bn" with integer or p/q entries; defaults to 0
    #[arg(long, allow_hyphen_values = true)]
    pub weight: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub height: usize,
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    #[arg(long)]
    pub json_out: Option<PathBuf>,
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub expect_unitarizable: bool,
}

/// A validated job: datum built and weight admissible.
pub struct JobConfig {
    pub command: &'static str,
    pub suite: Option<Suite>,
    pub uea: Arc<Uea>,
    pub weight: Weight,
    pub height: usize,
    pub expect_unitarizable: bool,
}

impl JobConfig {
    pub fn datum(&self) -> &RootDatum {
        &self.uea.datum
    }

    /// Canonical description hashed into the cache key.
    pub fn canonical(&self) -> String {
        let d = self.datum();
        format!(
            "engine={};command={};suite={};m={};n={};p={};q={};weight={};height={};expect={}",
            ENGINE_VERSION,
            self.command,
            self.suite.map(|s| s.name()).unwrap_or("-"),
            d.m,
            d.n,
            d.p,
            d.q,
            self.weight,
            self.height,
            self.expect_unitarizable
        )
    }

    pub fn cache_key(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Compute(String),
}

impl From<ModuleError> for CliError {
    fn from(e: ModuleError) -> Self {
        match e {
            ModuleError::Datum(d) => CliError::Config(d.to_string()),
            other => CliError::Compute(other.to_string()),
        }
    }
}

/// Result of one command: JSON document and exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub json: Value,
    pub exit_code: i32,
}

pub fn configure(cmd: &Command) -> Result<JobConfig, CliError> {
    let a = cmd.args();
    let q = match a.q {
        Some(q) => q,
        None => a.m.checked_sub(a.p).ok_or_else(|| CliError::Config(format!("p = {} exceeds m = {}", a.p, a.m)))?,
    };
    let d = RootDatum::new(a.m, a.n, a.p, q).map_err(|e| CliError::Config(e.to_string()))?;
    let weight = match &a.weight {
        Some(s) => d.parse_weight(s).map_err(|e| CliError::Config(e.to_string()))?,
        None => d.zero(),
    };
    d.check_highest_weight(&weight).map_err(|e| CliError::Config(e.to_string()))?;
    let suite = match (cmd, a.suite) {
        (Command::Verify(_), None) => return Err(CliError::Config("verify needs --suite".into())),
        (Command::Verify(_), s) => s,
        (_, Some(_)) => return Err(CliError::Config("--suite only applies to verify".into())),
        (_, None) => None,
    };
    if a.jobs == Some(0) {
        return Err(CliError::Config("--jobs must be positive".into()));
    }
    Ok(JobConfig {
        command: cmd.name(),
        suite,
        uea: Arc::new(Uea::new(&d)),
        weight,
        height: a.height,
        expect_unitarizable: a.expect_unitarizable,
    })
}

fn envelope(cfg: &JobConfig, body: Value) -> Value {
    let d = cfg.datum();
    let mut out = json!({
        "schema": SCHEMA,
        "command": cfg.command,
        "datum": {"m": d.m, "n": d.n, "p": d.p, "q": d.q, "support": d.support},
        "weight": cfg.weight.to_string(),
        "truncation": cfg.height,
    });
    if let Some(s) = cfg.suite {
        out["suite"] = json!(s.name());
    }
    if let Value::Object(b) = body {
        for (k, v) in b {
            out[k.as_str()] = v;
        }
    }
    out
}

fn verdicts_json(vs: &[Verdict]) -> Value {
    serde_json::to_value(vs).unwrap()
}

fn all_pass(vs: &[Verdict]) -> bool {
    vs.iter().all(|v| v.pass())
}

fn status(ok: bool) -> &'static str {
    if ok { "pass" } else { "fail" }
}

fn simple(cfg: &JobConfig, h: usize) -> Result<TruncatedModule, CliError> {
    Ok(TruncatedModule::build(cfg.uea.clone(), &cfg.weight, h, Kind::Simple)?)
}

fn certification(cfg: &JobConfig) -> Result<UnitarityCertificate, CliError> {
    Ok(certify_unitarity(cfg.uea.clone(), &cfg.weight, cfg.height)?)
}

/// Compute one command without touching the cache.
pub fn execute(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let d = cfg.datum();
    let n = cfg.height;
    let (body, code) = match cfg.command {
        "root-data" => {
            let odd_systems: Vec<Value> = d
                .documented_odd_systems()
                .into_iter()
                .map(|(name, rs)| json!({"name": name, "roots": rs}))
                .collect();
            (
                json!({
                    "even_positive": d.even_pos,
                    "odd_positive": d.odd_pos,
                    "compact_positive": d.compact_pos,
                    "noncompact_positive": d.noncompact_pos,
                    "rho0": d.rho0, "rho1": d.rho1, "rho": d.rho, "rho_c": d.rho_c, "rho_n": d.rho_n,
                    "odd_basis": d.odd,
                    "odd_systems": odd_systems,
                }),
                EXIT_OK,
            )
        }
        "certify-unitarity" => unitarity_body(cfg)?,
        "decompose" => {
            let (pred, v) = even_decomposition_verify(cfg.uea.clone(), &cfg.weight, n)?;
            let ok = v.pass() || !pred.verified_unitarizable;
            (json!({"prediction": pred, "verdicts": [v]}), if ok { EXIT_OK } else { EXIT_ASSERTION })
        }
        "dirac-cohomology" => {
            let m = simple(cfg, n)?;
            let cx = DiracComplex::new(&m, n)?;
            let rep = dirac_cohomology(&cx);
            (json!({"cohomology": rep.summary_json(), "blocks": rep.blocks}), EXIT_OK)
        }
        "character" => {
            let m = simple(cfg, n)?;
            (json!({"character": m.character().to_json(), "ktypes": m.ktype_table().to_json()}), EXIT_OK)
        }
        "index" => index_body(cfg)?,
        "verify" => verify_body(cfg)?,
        other => return Err(CliError::Config(format!("unknown command {other}"))),
    };
    Ok(Outcome { json: envelope(cfg, body), exit_code: code })
}

fn unitarity_body(cfg: &JobConfig) -> Result<(Value, i32), CliError> {
    let cert = certification(cfg)?;
    let code = if !cert.certified() && cfg.expect_unitarizable { EXIT_UNEXPECTED_REFUTATION } else { EXIT_OK };
    Ok((json!({"certificate": cert}), code))
}

fn index_parts(cfg: &JobConfig) -> Result<(Value, Value, Verdict), CliError> {
    let m = simple(cfg, cfg.height)?;
    let cx = DiracComplex::new(&m, cfg.height)?;
    let rep = dirac_cohomology(&cx);
    let idx = dirac_index(&cx);
    let v = index_check(&rep, &idx);
    Ok((idx.to_json(), rep.euler().to_json(), v))
}

fn index_body(cfg: &JobConfig) -> Result<(Value, i32), CliError> {
    let (idx, euler, v) = index_parts(cfg)?;
    let code = if v.pass() { EXIT_OK } else { EXIT_ASSERTION };
    Ok((json!({"index": idx, "euler": euler, "verdicts": [v]}), code))
}

fn verify_body(cfg: &JobConfig) -> Result<(Value, i32), CliError> {
    let d = cfg.datum();
    let n = cfg.height;
    let suite = cfg.suite.expect("validated");
    if suite == Suite::Unitarity {
        return unitarity_body(cfg);
    }
    let cert = certification(cfg)?;
    let certified = cert.certified();
    let mut extra = serde_json::Map::new();
    let verdicts: Vec<Verdict> = match suite {
        Suite::Square => {
            let m = simple(cfg, n)?;
            let cx = DiracComplex::new(&m, n)?;
            let audit = dirac_square_audit(&cx);
            let violations = dirac_inequality_audit(&audit);
            let mut vs = vec![flag("SquareDirac", audit.pass, n)];
            if certified {
                let adj = cx.blocks.values().all(|b| anti_selfadjoint_certificate(b, &b.gram).anti_selfadjoint);
                vs.push(flag("SquareSemisimple", audit.semisimple(), n));
                vs.push(flag("AntiSelfadjoint", adj, n));
                vs.push(flag("DiracInequality", violations.is_empty(), n));
                vs.push(harish_chandra_audit(d, &audit, n).0);
            }
            extra.insert("constant_c".into(), json!(audit.constant_c));
            extra.insert("components".into(), json!(audit.components));
            extra.insert("violations".into(), json!(violations));
            vs
        }
        Suite::Cohomology => {
            let m = simple(cfg, n)?;
            let cx = DiracComplex::new(&m, n)?;
            let rep = dirac_cohomology(&cx);
            let mut vs = Vec::new();
            if cfg.weight.is_zero() {
                vs.push(Verdict::compare("DiracCohomologyTrivial", &rep.hd(), &oscillator_character(d, n), n));
            } else if certified {
                let (v, minus_zero) = dirac_kernel_check(cfg.uea.clone(), &rep, &cfg.weight)?;
                vs.push(v);
                vs.push(flag("OddDiracCohomologyVanishes", minus_zero, n));
            }
            extra.insert("cohomology".into(), rep.summary_json());
            vs
        }
        Suite::Kostant => {
            let cap = n + 2;
            let m = simple(cfg, kostant_module_height(d, n, cap))?;
            let cx = DiracComplex::new(&m, n)?;
            let rep = dirac_cohomology(&cx);
            let k = kostant_cohomology(&m, n, cap)?;
            extra.insert("kostant".into(), k.summary_json());
            vec![flag("KostantDifferentialSquaresToZero", k.d_squared_zero, n), injection_check(&rep, &k, d)]
        }
        Suite::Character => {
            let cap = n + 2;
            let m = simple(cfg, kostant_module_height(d, n, cap))?;
            let cx = DiracComplex::new(&m, n)?;
            let rep = dirac_cohomology(&cx);
            let k = kostant_cohomology(&m, n, cap)?;
            vec![
                character_formula_check(&m, n, Formula::Kostant, None, Some(&k))?,
                character_formula_check(&m, n, Formula::DiracIndex, Some(&rep), None)?,
            ]
        }
        Suite::Index => {
            let (idx, euler, v) = index_parts(cfg)?;
            extra.insert("index".into(), idx);
            extra.insert("euler".into(), euler);
            vec![v]
        }
        Suite::Filtration => vec![verma_filtration_check(cfg.uea.clone(), &cfg.weight, n)?],
        Suite::Branching => {
            let (pred, v) = even_decomposition_verify(cfg.uea.clone(), &cfg.weight, n)?;
            extra.insert("prediction".into(), json!(pred));
            vec![v]
        }
        Suite::Unitarity => unreachable!(),
    };
    let ok = all_pass(&verdicts);
    let mut body = json!({
        "certification": cert,
        "status": status(ok),
        "verdicts": verdicts_json(&verdicts),
    });
    for (k, v) in extra {
        body[k.as_str()] = v;
    }
    Ok((body, if ok { EXIT_OK } else { EXIT_ASSERTION }))
}

fn flag(name: &str, ok: bool, n: usize) -> Verdict {
    Verdict::flag(name, ok, n)
}

#[derive(Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Miss,
    Disabled,
}

/// Content-addressed store of command outcomes under `dir/<sha256>.json`.
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    /// An unusable directory disables the cache with a warning.
    pub fn open(dir: Option<&Path>) -> Self {
        let Some(dir) = dir else { return Cache { dir: None } };
        match fs::create_dir_all(dir) {
            Ok(()) => Cache { dir: Some(dir.to_path_buf()) },
            Err(e) => {
                eprintln!("warning: cache directory {} unusable ({e}); continuing without cache", dir.display());
                Cache { dir: None }
            }
        }
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.json")))
    }

    /// Corrupted or mismatching entries count as a miss.
    pub fn lookup(&self, key: &str) -> Option<(String, i32)> {
        let text = fs::read_to_string(self.path(key)?).ok()?;
        let v: Value = serde_json::from_str(&text).ok()?;
        if v["schema"] != json!(SCHEMA) || v["key"] != json!(key) || v["engine"] != json!(ENGINE_VERSION) {
            return None;
        }
        let out = v["output"].as_str()?;
        serde_json::from_str::<Value>(out).ok()?;
        let code = v["exit_code"].as_i64()? as i32;
        Some((out.to_string(), code))
    }

    /// Temp file in the cache directory, then rename over the final name.
    pub fn store(&mut self, key: &str, output: &str, exit_code: i32) {
        let Some(path) = self.path(key) else { return };
        let dir = self.dir.clone().unwrap();
        let entry = json!({"schema": SCHEMA, "key": key, "engine": ENGINE_VERSION, "exit_code": exit_code, "output": output});
        let res = fs::create_dir_all(&dir)
            .and_then(|_| tempfile::NamedTempFile::new_in(&dir))
            .and_then(|mut f| {
                f.write_all(serde_json::to_string(&entry).unwrap().as_bytes())?;
                f.flush()?;
                f.persist(&path).map(|_| ()).map_err(|e| e.error)
            });
        if let Err(e) = res {
            eprintln!("warning: cache write to {} failed ({e}); continuing without cache", dir.display());
            self.dir = None;
        }
    }
}

/// Output text, exit code and cache status for one parsed command.
pub fn run_command(cmd: &Command) -> Result<(String, i32, CacheStatus), CliError> {
    let cfg = configure(cmd)?;
    if cfg.datum().support == Support::Unsupported {
        eprintln!(
            "warning: m = {} > n = {}; results are computed but the theory assumes m ≤ n",
            cfg.datum().m,
            cfg.datum().n
        );
    }
    let args = cmd.args();
    let mut cache = Cache::open(args.cache_dir.as_deref());
    let key = cfg.cache_key();
    if let Some((text, code)) = cache.lookup(&key) {
        return Ok((text, code, CacheStatus::Hit));
    }
    let compute = || execute(&cfg);
    let outcome = match args.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| CliError::Config(e.to_string()))?
            .install(compute)?,
        None => compute()?,
    };
    let text = serde_json::to_string_pretty(&outcome.json).unwrap() + "\n";
    let status = if cache.dir.is_some() { CacheStatus::Miss } else { CacheStatus::Disabled };
    cache.store(&key, &text, outcome.exit_code);
    Ok((text, outcome.exit_code, status))
}

/// Parse, run, emit; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_CONFIG,
            };
        }
    };
    match run_command(&cli.command) {
        Ok((text, code, _)) => {
            match &cli.command.args().json_out {
                Some(p) => {
                    if let Err(e) = fs::write(p, &text) {
                        eprintln!("error: cannot write {}: {e}", p.display());
                        return EXIT_CONFIG;
                    }
                }
                None => print!("{text}"),
            }
            code
        }
        Err(CliError::Config(m)) => {
            eprintln!("error: {m}");
            EXIT_CONFIG
        }
        Err(CliError::Compute(m)) => {
            eprintln!("error: {m}");
            EXIT_ASSERTION
        }
    }
}
