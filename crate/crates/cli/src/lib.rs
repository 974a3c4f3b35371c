//! Pipeline orchestration behind the `kr` binary.

use krcore::branching::{branch_verify, s_csv, BranchReport};
use krcore::cache::{self, Cache, CacheError};
use krcore::cartan::AffineType;
use krcore::crystal::{extract_pseudobase, CrystalReport};
use krcore::fundamental::{build_w1_d4, build_w1_g2, BuildError, Check};
use krcore::fusion::{
    compose_r, default_route, fuse, kr1, ladder, mirrored_word, solve_r, staircase_word, FusionError, KRModule, Provenance,
    MAX_R_UNKNOWNS,
};
use krcore::polarverify::{reports_to_text, run_all, CheckReport, BOUNDED_HEADER};
use krcore::qfield::RatQ;
use serde::Serialize;
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Build,
    Verify,
    Branch,
    Crystal,
    Rmatrix,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutFormat {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub ty: AffineType,
    pub level: i64,
    pub command: Command,
    pub out: OutFormat,
    pub cache_dir: PathBuf,
    pub max_level: i64,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Resource(String),
    Cache(CacheError),
    /// the mathematics failed: a construction did not pass its own checks
    Failed(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "usage error: {s}"),
            CliError::Resource(s) => write!(f, "resource bound: {s}"),
            CliError::Cache(e) => write!(f, "{e}"),
            CliError::Failed(s) => write!(f, "verification failure: {s}"),
        }
    }
}

impl CliError {
    pub fn status(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            _ => 2,
        }
    }
}

impl From<CacheError> for CliError {
    fn from(e: CacheError) -> Self {
        CliError::Cache(e)
    }
}

impl From<FusionError> for CliError {
    fn from(e: FusionError) -> Self {
        match e {
            FusionError::Resource(s) => CliError::Resource(s),
            e => CliError::Failed(e.to_string()),
        }
    }
}

pub struct Outcome {
    pub pass: bool,
    pub output: String,
}

impl Outcome {
    pub fn status(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

/// Load W^ℓ from the cache or build and store it. W^ℓ is always the fused
/// model; W¹ is shared by every level.
pub fn module(cache: &Cache, ty: AffineType, l: i64) -> Result<KRModule, CliError> {
    if let Some(m) = cache.load(ty, l, Provenance::Fused)? {
        log::info!("{ty} W^{l}: loaded from cache ({})", cache::key(ty, l, Provenance::Fused));
        return Ok(m);
    }
    log::info!("{ty} W^{l}: building");
    let m = if l == 1 { kr1(ty)? } else { fuse(&module(cache, ty, 1)?, l, default_route(ty))? };
    let p = cache.store(&m)?;
    log::info!("{ty} W^{l}: dim {}, stored at {}", m.rep.dim(), p.display());
    Ok(m)
}

fn fundamental_checks(ty: AffineType) -> Result<Vec<Check>, BuildError> {
    Ok(match ty {
        AffineType::G2_1 => build_w1_g2()?.checks,
        AffineType::D4_3 => build_w1_d4()?.checks,
    })
}

#[derive(Serialize)]
pub struct VerifyReport {
    #[serde(rename = "type")]
    pub ty: AffineType,
    pub level: i64,
    pub header: &'static str,
    pub dim: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub fundamental: Vec<Check>,
    pub checks: Vec<CheckReport>,
    pub branch: BranchReport,
    pub pass: bool,
}

pub fn verify(m: &KRModule) -> Result<VerifyReport, CliError> {
    let ty = m.rep.ty;
    let fundamental = if m.l == 1 { fundamental_checks(ty).map_err(|e| CliError::Failed(e.to_string()))? } else { vec![] };
    let checks = run_all(m);
    let branch = branch_verify(ty, m.l, &m.rep.wt).map_err(|e| CliError::Failed(e.to_string()))?;
    let pass = fundamental.iter().all(|c| c.pass) && checks.iter().all(|c| c.pass) && branch.pass;
    Ok(VerifyReport { ty, level: m.l, header: BOUNDED_HEADER, dim: m.rep.dim(), fundamental, checks, branch, pass })
}

fn branch_text(b: &BranchReport) -> String {
    let mut s = format!(
        "branching {} l={}: computed {:?}, expected {:?}, dim {} vs {} {}\n",
        b.ty,
        b.level,
        b.computed,
        b.expected,
        b.dim,
        b.expected_dim,
        if b.pass { "PASS" } else { "FAIL" }
    );
    s.push_str(&s_csv(b.ty, b.level));
    s
}

fn verify_text(r: &VerifyReport) -> String {
    let mut s = String::new();
    for c in &r.fundamental {
        s.push_str(&format!("fundamental {:<28} {} {}\n", c.name, if c.pass { "PASS" } else { "FAIL" }, c.detail));
    }
    s.push_str(&reports_to_text(&r.checks));
    s.push_str(&branch_text(&r.branch));
    s.push_str(&format!("{} W^{} overall {}\n", r.ty, r.level, if r.pass { "PASS" } else { "FAIL" }));
    s
}

fn crystal_text(r: &CrystalReport) -> String {
    let flag = |b: bool| if b { "PASS" } else { "FAIL" };
    format!(
        "crystal: dim {} nodes {}\n  weight graded {}\n  lattice stable {}\n  f~b = b' iff e~b' = b {}\n  B = B' u -B' {}\n  orthonormal mod q {} {}\n  overall {}\n",
        r.dim,
        r.nodes,
        flag(r.weight_graded),
        flag(r.closed_under_operators),
        flag(r.edge_axiom),
        flag(r.pseudobase_split),
        flag(r.self_pairing_one),
        flag(r.orthonormal_mod_q),
        flag(r.pass)
    )
}

#[derive(Serialize)]
pub struct RFactor {
    pub shifts: (i32, i32),
    pub unknowns: usize,
    pub equations: usize,
    pub solution_dim: usize,
    pub entries: Vec<(usize, usize, RatQ)>,
}

#[derive(Serialize)]
pub struct RReport {
    #[serde(rename = "type")]
    pub ty: AffineType,
    pub level: i64,
    pub factors: Vec<RFactor>,
    /// R_ℓ along the two reduced words agrees (only for ℓ ≥ 3)
    pub yang_baxter: Option<bool>,
    pub pass: bool,
}

/// The intertwiners R(a,b) entering R_ℓ, and for ℓ ≥ 3 the comparison of
/// R_ℓ along the staircase word and its mirror.
pub fn rmatrix(w1: &KRModule, l: i64) -> Result<RReport, CliError> {
    if l < 2 {
        return Err(CliError::Usage("rmatrix needs --level 2 or more".into()));
    }
    let ty = w1.rep.ty;
    let mut shifts = ladder(w1.rep.cartan().fusion_k, l);
    let mut seen = Vec::new();
    for p in staircase_word(l as usize) {
        let ab = (shifts[p], shifts[p + 1]);
        if !seen.iter().any(|&(a, b)| a - b == ab.0 - ab.1) {
            seen.push(ab);
        }
        shifts.swap(p, p + 1);
    }
    let mut factors = Vec::new();
    for (a, b) in seen {
        log::info!("{ty}: intertwiner at shifts ({a},{b})");
        let r = solve_r(&w1.rep, a, b, MAX_R_UNKNOWNS)?;
        factors.push(RFactor {
            shifts: (a, b),
            unknowns: r.unknowns,
            equations: r.equations,
            solution_dim: r.solution_dim,
            entries: r.mat.entries().map(|(i, j, x)| (i, j, x.clone())).collect(),
        });
    }
    let yang_baxter = if l >= 3 {
        let lu = l as usize;
        log::info!("{ty}: R_{l} along the staircase word");
        let a = compose_r(&w1.rep, lu, &staircase_word(lu), MAX_R_UNKNOWNS)?;
        log::info!("{ty}: R_{l} along the mirrored word");
        let b = compose_r(&w1.rep, lu, &mirrored_word(lu), MAX_R_UNKNOWNS)?;
        Some(a == b)
    } else {
        None
    };
    let pass = factors.iter().all(|f| f.solution_dim == 1) && yang_baxter != Some(false);
    Ok(RReport { ty, level: l, factors, yang_baxter, pass })
}

fn rmatrix_text(r: &RReport) -> String {
    let mut s = String::new();
    for f in &r.factors {
        s.push_str(&format!(
            "R at shifts ({},{}): {} unknowns, {} equations, solution space dim {}, {} nonzero entries\n",
            f.shifts.0,
            f.shifts.1,
            f.unknowns,
            f.equations,
            f.solution_dim,
            f.entries.len()
        ));
    }
    if let Some(yb) = r.yang_baxter {
        s.push_str(&format!("R_{} along both reduced words: {}\n", r.level, if yb { "equal" } else { "DIFFERENT" }));
    }
    s
}

#[derive(Serialize)]
pub struct LevelReport {
    pub level: i64,
    pub dim: usize,
    pub verify: VerifyReport,
    pub crystal: CrystalReport,
}

#[derive(Serialize)]
pub struct AllReport {
    #[serde(rename = "type")]
    pub ty: AffineType,
    pub level: i64,
    pub levels: Vec<LevelReport>,
    pub pass: bool,
}

fn json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("report serializes");
    s.push('\n');
    s
}

fn no_dot(cmd: &str) -> CliError {
    CliError::Usage(format!("--out dot is only available for crystal, not {cmd}"))
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if cfg.level < 1 {
        return Err(CliError::Usage("--level must be at least 1".into()));
    }
    if cfg.level > cfg.max_level {
        return Err(CliError::Resource(format!("--level {} exceeds --max-level {}", cfg.level, cfg.max_level)));
    }
    let cache = Cache::open(&cfg.cache_dir)?;
    let (ty, l) = (cfg.ty, cfg.level);
    match cfg.command {
        Command::Build => {
            let m = module(&cache, ty, l)?;
            #[derive(Serialize)]
            struct Built {
                #[serde(rename = "type")]
                ty: AffineType,
                level: i64,
                dim: usize,
                provenance: Provenance,
                key: String,
            }
            let b = Built { ty, level: l, dim: m.rep.dim(), provenance: m.provenance, key: cache::key(ty, l, m.provenance) };
            let output = match cfg.out {
                OutFormat::Text => format!("{ty} W^{l}: dim {} (cache key {})\n", b.dim, b.key),
                OutFormat::Json => json(&b),
                OutFormat::Dot => return Err(no_dot("build")),
            };
            Ok(Outcome { pass: true, output })
        }
        Command::Verify => {
            if cfg.out == OutFormat::Dot {
                return Err(no_dot("verify"));
            }
            let r = verify(&module(&cache, ty, l)?)?;
            let output = if cfg.out == OutFormat::Json { json(&r) } else { verify_text(&r) };
            Ok(Outcome { pass: r.pass, output })
        }
        Command::Branch => {
            if cfg.out == OutFormat::Dot {
                return Err(no_dot("branch"));
            }
            let m = module(&cache, ty, l)?;
            let b = branch_verify(ty, l, &m.rep.wt).map_err(|e| CliError::Failed(e.to_string()))?;
            let output = if cfg.out == OutFormat::Json { json(&b) } else { branch_text(&b) };
            Ok(Outcome { pass: b.pass, output })
        }
        Command::Crystal => {
            let m = module(&cache, ty, l)?;
            log::info!("{ty} W^{l}: crystal");
            let p = extract_pseudobase(&m).map_err(|e| CliError::Failed(e.to_string()))?;
            let output = match cfg.out {
                OutFormat::Text => crystal_text(&p.report),
                OutFormat::Json => {
                    let mut s = p.graph.to_json();
                    s.push('\n');
                    s
                }
                OutFormat::Dot => p.graph.to_dot(),
            };
            if cfg.out != OutFormat::Text {
                log::info!("crystal checks: {}", if p.report.pass { "pass" } else { "FAIL" });
            }
            Ok(Outcome { pass: p.report.pass, output })
        }
        Command::Rmatrix => {
            if cfg.out == OutFormat::Dot {
                return Err(no_dot("rmatrix"));
            }
            let r = rmatrix(&module(&cache, ty, 1)?, l)?;
            let output = if cfg.out == OutFormat::Json { json(&r) } else { rmatrix_text(&r) };
            Ok(Outcome { pass: r.pass, output })
        }
        Command::All => {
            if cfg.out == OutFormat::Dot {
                return Err(no_dot("all"));
            }
            let mut levels = Vec::new();
            for j in 1..=l {
                let m = module(&cache, ty, j)?;
                let verify = verify(&m)?;
                log::info!("{ty} W^{j}: crystal");
                let crystal = extract_pseudobase(&m).map_err(|e| CliError::Failed(e.to_string()))?.report;
                levels.push(LevelReport { level: j, dim: m.rep.dim(), verify, crystal });
            }
            let pass = levels.iter().all(|r| r.verify.pass && r.crystal.pass);
            let report = AllReport { ty, level: l, levels, pass };
            let output = if cfg.out == OutFormat::Json {
                json(&report)
            } else {
                let mut s = String::new();
                for r in &report.levels {
                    s.push_str(&format!("== {ty} W^{} (dim {}) ==\n", r.level, r.dim));
                    s.push_str(&verify_text(&r.verify));
                    s.push_str(&crystal_text(&r.crystal));
                }
                s.push_str(&format!("all levels 1..{l}: {}\n", if pass { "PASS" } else { "FAIL" }));
                s
            };
            Ok(Outcome { pass, output })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(command: Command, level: i64, out: OutFormat) -> RunConfig {
        let dir = std::env::temp_dir().join(format!("krcli-unit-{}-{level}", std::process::id()));
        RunConfig { ty: AffineType::G2_1, level, command, out, cache_dir: dir, max_level: 3 }
    }

    #[test]
    fn error_statuses() {
        assert_eq!(CliError::Usage("x".into()).status(), 2);
        assert_eq!(CliError::Resource("x".into()).status(), 2);
        assert_eq!(CliError::Failed("x".into()).status(), 1);
        assert_eq!(CliError::from(FusionError::Resource("big".into())).status(), 2);
        assert_eq!(CliError::from(FusionError::NoIntertwiner).status(), 1);
    }

    #[test]
    fn level_bounds_are_checked_before_work() {
        assert!(matches!(run(&cfg(Command::Build, 0, OutFormat::Text)), Err(CliError::Usage(_))));
        assert!(matches!(run(&cfg(Command::Build, 4, OutFormat::Text)), Err(CliError::Resource(_))));
        assert!(matches!(run(&cfg(Command::Branch, 1, OutFormat::Dot)), Err(CliError::Usage(_))));
    }

    #[test]
    fn branch_text_ends_with_the_csv() {
        let c = cfg(Command::Branch, 1, OutFormat::Text);
        let o = run(&c).unwrap();
        assert!(o.pass && o.status() == 0);
        assert!(o.output.ends_with(&s_csv(AffineType::G2_1, 1)));
        let _ = std::fs::remove_dir_all(&c.cache_dir);
    }
}
