//! Command line front end.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::dynamics::{self, Rule, Scheduler};
use crate::equilibria::{self, Level, DEFAULT_BR_CAP};
use crate::error::{Error, Result};
use crate::families::{self, InstanceBundle};
use crate::game::{self, StrategyProfile};
use crate::hostgraph::HostKind;
use crate::io::{self, Instance};
use crate::optima::{self, DEFAULT_OPT_CAP};
use crate::weight::Weight;

/// Environment variable that redirects relative `--output` paths.
pub const OUTPUT_DIR_ENV: &str = "GNCG_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "gncg", version, about = "Generalized network creation games on weighted host graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, Args)]
pub struct Common {
    /// Edge price multiplier, e.g. `2`, `0.5` or `3/4`.
    #[arg(long, default_value = "1")]
    pub alpha: String,
    /// Size cap for exhaustive searches (at least 2).
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Report errors as JSON on stdout.
    #[arg(long)]
    pub error_json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OptMethod {
    Auto,
    Exact,
    OneTwo,
    Tree,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check an instance file and report metric violations.
    Validate {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Agent costs, social cost and stretch of the instance profile.
    Cost {
        input: PathBuf,
        #[arg(long)]
        agent: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Exact best response and improving single moves of one agent.
    BestResponse {
        input: PathBuf,
        #[arg(long)]
        agent: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Certify AE/GE/NE stability; exits with 1 when unstable.
    Certify {
        input: PathBuf,
        #[arg(long, default_value = "NE")]
        level: String,
        #[command(flatten)]
        common: Common,
    },
    /// Social optimum of the host.
    Optimum {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        method: OptMethod,
        #[command(flatten)]
        common: Common,
    },
    /// Improving-move dynamics from the instance profile (empty if absent).
    Dynamics {
        input: PathBuf,
        #[arg(long, default_value = "exact-br")]
        rule: String,
        #[arg(long, default_value = "round-robin")]
        scheduler: String,
        /// Seed for the random scheduler.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Generate a family instance with its profiles and predictions.
    Family {
        #[command(flatten)]
        family: FamilyArgs,
        /// Profile written into the instance part (default `NE`, or `G`).
        #[arg(long)]
        profile: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Sweep a family over parameter grids and report price-of-anarchy rows.
    Poa {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Debug, Args)]
pub struct FamilyArgs {
    #[arg(long)]
    pub family: String,
    /// Node count parameter; comma separated for sweeps.
    #[arg(long)]
    pub n: Option<String>,
    /// Dimension parameter; comma separated for sweeps.
    #[arg(long)]
    pub d: Option<String>,
    /// Clique size parameter; comma separated for sweeps.
    #[arg(long = "N")]
    pub big_n: Option<String>,
    /// Graph edges for `vertex-cover`, e.g. `0-1,1-2`.
    #[arg(long)]
    pub graph: Option<String>,
    /// Bought vertex cover for `vertex-cover`, e.g. `1`.
    #[arg(long)]
    pub cover: Option<String>,
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Validate { common, .. }
            | Command::Cost { common, .. }
            | Command::BestResponse { common, .. }
            | Command::Certify { common, .. }
            | Command::Optimum { common, .. }
            | Command::Dynamics { common, .. }
            | Command::Family { common, .. }
            | Command::Poa { common, .. } => common,
        }
    }
}

/// Rendered report and exit code of a successful dispatch.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub body: String,
    pub code: i32,
}

impl Report {
    fn json(v: &impl Serialize, code: i32) -> Report {
        let mut body = serde_json::to_string_pretty(v).expect("report serializes");
        body.push('\n');
        Report { body, code }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoaRow {
    pub family: String,
    pub params: String,
    pub alpha: Weight,
    pub cost_ne: Weight,
    pub cost_opt: Weight,
    pub ratio: Weight,
    pub bound: Weight,
    pub bound_satisfied: bool,
}

pub const POA_HEADER: [&str; 8] = ["family", "params", "alpha", "cost_NE", "cost_OPT", "ratio", "bound", "bound_satisfied"];

impl PoaRow {
    pub fn fields(&self) -> Vec<String> {
        vec![
            self.family.clone(),
            self.params.clone(),
            self.alpha.to_string(),
            self.cost_ne.to_string(),
            self.cost_opt.to_string(),
            self.ratio.to_string(),
            self.bound.to_string(),
            self.bound_satisfied.to_string(),
        ]
    }

    pub fn from_bundle(b: &InstanceBundle) -> Result<PoaRow> {
        let cost_ne = b.social_cost_of("NE")?;
        let cost_opt = b.social_cost_of("OPT")?;
        let ratio = cost_ne / cost_opt;
        let bound = b
            .predictions
            .get("bound")
            .map(|p| p.value)
            .ok_or_else(|| Error::Precondition(format!("family {} has no bound", b.name)))?;
        Ok(PoaRow {
            family: b.name.clone(),
            params: b.params_string(),
            alpha: b.alpha,
            cost_ne,
            cost_opt,
            ratio,
            bound,
            bound_satisfied: ratio <= bound,
        })
    }
}

/// CSV text with a header row; rows are written in the given order.
pub fn emit_csv<S: AsRef<str>>(header: &[S], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header.iter().map(|h| h.as_ref())).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn parse_alpha(s: &str) -> Result<Weight> {
    let a: Weight = s.trim().parse().map_err(|_| Error::Alpha(s.into()))?;
    if !a.is_finite() || a <= Weight::zero() {
        return Err(Error::Alpha(s.into()));
    }
    Ok(a)
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| Error::parse(format!("bad {what} value `{x}`"))))
        .collect()
}

fn cap_or(common: &Common, default: usize) -> Result<usize> {
    match common.cap {
        Some(c) if c < 2 => Err(Error::Precondition(format!("cap must be at least 2, got {c}"))),
        Some(c) => Ok(c),
        None => Ok(default),
    }
}

fn load(path: &PathBuf) -> Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    io::parse_instance(&text)
}

fn csv_unsupported(what: &str) -> Error {
    Error::Precondition(format!("csv output is not available for `{what}`"))
}

fn bundle_json(b: &InstanceBundle, profile: Option<&str>) -> Result<Value> {
    let key = profile.map(str::to_string).unwrap_or_else(|| {
        if b.profiles.contains_key("NE") {
            "NE".into()
        } else {
            b.profiles.keys().next().cloned().unwrap_or_default()
        }
    });
    let chosen = b
        .profiles
        .get(&key)
        .ok_or_else(|| Error::Precondition(format!("family {} has no profile `{key}`", b.name)))?;
    let mut v = io::instance_to_value(&b.host, Some(chosen));
    let obj = v.as_object_mut().expect("instance is an object");
    obj.insert("family".into(), json!(b.name));
    obj.insert("params".into(), json!(b.params));
    obj.insert("alpha".into(), json!(b.alpha));
    obj.insert("profile_name".into(), json!(key));
    obj.insert("profiles".into(), json!(b.profiles));
    obj.insert("predictions".into(), json!(b.predictions));
    obj.insert("designated_agent".into(), json!(b.designated_agent));
    obj.insert("groups".into(), json!(b.groups));
    Ok(v)
}

fn parse_graph(s: &str) -> Result<Vec<(usize, usize)>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|e| {
            let (a, b) = e.trim().split_once('-').ok_or_else(|| Error::parse(format!("bad edge `{e}`, expected u-v")))?;
            Ok((
                a.parse().map_err(|_| Error::parse(format!("bad edge `{e}`")))?,
                b.parse().map_err(|_| Error::parse(format!("bad edge `{e}`")))?,
            ))
        })
        .collect()
}

fn size_grid(f: &FamilyArgs) -> Result<Vec<Option<usize>>> {
    let raw = match f.family.as_str() {
        "tree-star" | "geometric-path" => f.n.as_deref(),
        "rd-one-norm" => f.d.as_deref(),
        "one-two-lb" => f.big_n.as_deref(),
        _ => None,
    };
    match raw {
        Some(s) => Ok(parse_list::<usize>(s, "size")?.into_iter().map(Some).collect()),
        None => Ok(vec![None]),
    }
}

fn build_bundle(f: &FamilyArgs, size: Option<usize>, alpha: &Weight) -> Result<InstanceBundle> {
    if f.family == "vertex-cover" {
        let edges = parse_graph(f.graph.as_deref().unwrap_or(""))?;
        let cover: Vec<usize> = match f.cover.as_deref() {
            Some(c) if !c.trim().is_empty() => parse_list(c, "cover")?,
            _ => Vec::new(),
        };
        let vertices = f
            .n
            .as_deref()
            .map(|s| s.parse().map_err(|_| Error::parse(format!("bad n `{s}`"))))
            .transpose()?
            .unwrap_or_else(|| edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(1));
        return families::vertex_cover_instance(vertices, &edges, &cover);
    }
    families::by_name(&f.family, size, alpha)
}

/// Runs one parsed command.
pub fn dispatch(cmd: &Command) -> Result<Report> {
    let common = cmd.common();
    let format = common.format;
    cap_or(common, 2)?;
    match cmd {
        Command::Validate { input, .. } => {
            let inst = load(input)?;
            let violations: Vec<Value> = inst
                .host
                .check_metric()
                .iter()
                .map(|m| json!({"u": m.u, "x": m.x, "v": m.v, "slack": m.slack}))
                .collect();
            let report = json!({
                "valid": true,
                "kind": inst.host.kind().name(),
                "n": inst.host.n(),
                "exact": inst.host.is_exact(),
                "metric": violations.is_empty(),
                "metric_violations": violations,
                "has_profile": inst.profile.is_some(),
            });
            match format {
                Format::Json => Ok(Report::json(&report, 0)),
                Format::Csv => Err(csv_unsupported("validate")),
            }
        }
        Command::Cost { input, agent, .. } => {
            let alpha = parse_alpha(&common.alpha)?;
            let inst = load(input)?;
            let s = inst.require_profile()?;
            let net = game::induced_network(&inst.host, s)?;
            let costs = game::agent_costs(&inst.host, s, &alpha)?;
            let agents: Vec<usize> = match agent {
                Some(u) if *u >= inst.host.n() => {
                    return Err(Error::Precondition(format!("agent {u} out of range")));
                }
                Some(u) => vec![*u],
                None => (0..inst.host.n()).collect(),
            };
            let social = game::social_cost(&inst.host, s, &alpha)?;
            match format {
                Format::Csv => {
                    let rows: Vec<Vec<String>> = agents
                        .iter()
                        .map(|&u| {
                            let c = &costs[u];
                            vec![u.to_string(), c.edge_cost.to_string(), c.distance_cost.to_string(), c.total.to_string()]
                        })
                        .collect();
                    Ok(Report { body: emit_csv(&["agent", "edge_cost", "distance_cost", "total"], &rows), code: 0 })
                }
                Format::Json => {
                    let per: Vec<Value> = agents
                        .iter()
                        .map(|&u| json!({"agent": u, "edge_cost": costs[u].edge_cost, "distance_cost": costs[u].distance_cost, "total": costs[u].total}))
                        .collect();
                    Ok(Report::json(
                        &json!({
                            "alpha": alpha,
                            "agents": per,
                            "social_cost": social,
                            "connected": net.is_connected(),
                            "edges": net.edge_pairs(),
                            "stretch": game::stretch(&inst.host, &net),
                        }),
                        0,
                    ))
                }
            }
        }
        Command::BestResponse { input, agent, .. } => {
            if format == Format::Csv {
                return Err(csv_unsupported("best-response"));
            }
            let alpha = parse_alpha(&common.alpha)?;
            let cap = cap_or(common, DEFAULT_BR_CAP)?;
            let inst = load(input)?;
            let s = inst.require_profile()?;
            let current = game::agent_cost(&inst.host, s, *agent, &alpha)?;
            let (br, cost) = equilibria::best_response_exact(&inst.host, s, *agent, &alpha, cap)?;
            let moves = equilibria::improving_single_moves(&inst.host, s, *agent, &alpha)?;
            Ok(Report::json(
                &json!({
                    "agent": agent,
                    "alpha": alpha,
                    "current_strategy": s.strategy(*agent),
                    "current_cost": current.total,
                    "best_response": br,
                    "best_cost": cost,
                    "improving_single_moves": moves,
                }),
                0,
            ))
        }
        Command::Certify { input, level, .. } => {
            if format == Format::Csv {
                return Err(csv_unsupported("certify"));
            }
            let alpha = parse_alpha(&common.alpha)?;
            let level: Level = level.parse()?;
            let cap = cap_or(common, DEFAULT_BR_CAP)?;
            let inst = load(input)?;
            let s = inst.require_profile()?;
            let report = equilibria::certify(&inst.host, s, &alpha, level, cap)?;
            let code = if report.stable() { 0 } else { 1 };
            Ok(Report::json(&report, code))
        }
        Command::Optimum { input, method, .. } => {
            let alpha = parse_alpha(&common.alpha)?;
            let inst = load(input)?;
            let host = &inst.host;
            let method = match method {
                OptMethod::Auto => match host.kind() {
                    HostKind::OneTwo if alpha <= Weight::one() => OptMethod::OneTwo,
                    HostKind::Tree { .. } => OptMethod::Tree,
                    _ => OptMethod::Exact,
                },
                m => *m,
            };
            let set = match method {
                OptMethod::OneTwo => optima::optimum_one_two(host, &alpha)?,
                OptMethod::Tree => optima::optimum_tree(host, Some(&alpha))?,
                _ => optima::optimum_exact(host, &alpha, cap_or(common, DEFAULT_OPT_CAP)?)?,
            };
            match format {
                Format::Json => Ok(Report::json(&set, 0)),
                Format::Csv => {
                    let rows: Vec<Vec<String>> =
                        set.edges.iter().map(|&(u, v)| vec![u.to_string(), v.to_string(), host.weight(u, v).to_string()]).collect();
                    Ok(Report { body: emit_csv(&["u", "v", "weight"], &rows), code: 0 })
                }
            }
        }
        Command::Dynamics { input, rule, scheduler, seed, max_steps, .. } => {
            if format == Format::Csv {
                return Err(csv_unsupported("dynamics"));
            }
            let alpha = parse_alpha(&common.alpha)?;
            let rule: Rule = rule.parse()?;
            let mut scheduler: Scheduler = scheduler.parse()?;
            if let (Scheduler::Random { .. }, Some(seed)) = (scheduler, seed) {
                scheduler = Scheduler::Random { seed: *seed };
            }
            let cap = cap_or(common, DEFAULT_BR_CAP)?;
            let inst = load(input)?;
            let init = inst.profile.clone().unwrap_or_else(|| StrategyProfile::empty(inst.host.n()));
            let trace = dynamics::run(&inst.host, &alpha, &init, rule, scheduler, *max_steps, cap)?;
            Ok(Report::json(&trace, 0))
        }
        Command::Family { family, profile, .. } => {
            if format == Format::Csv {
                return Err(csv_unsupported("family"));
            }
            let alpha = parse_alpha(&common.alpha)?;
            let sizes = size_grid(family)?;
            if sizes.len() != 1 {
                return Err(Error::Precondition("family takes a single size; use poa for sweeps".into()));
            }
            let bundle = build_bundle(family, sizes[0], &alpha)?;
            Ok(Report::json(&bundle_json(&bundle, profile.as_deref())?, 0))
        }
        Command::Poa { family, .. } => {
            let alphas: Vec<Weight> =
                common.alpha.split(',').map(parse_alpha).collect::<Result<_>>()?;
            let mut rows = Vec::new();
            for size in size_grid(family)? {
                for alpha in &alphas {
                    rows.push(PoaRow::from_bundle(&build_bundle(family, size, alpha)?)?);
                }
            }
            let code = if rows.iter().all(|r| r.bound_satisfied) { 0 } else { 1 };
            match format {
                Format::Json => Ok(Report::json(&rows, code)),
                Format::Csv => {
                    let fields: Vec<Vec<String>> = rows.iter().map(PoaRow::fields).collect();
                    Ok(Report { body: emit_csv(&POA_HEADER, &fields), code })
                }
            }
        }
    }
}

fn error_json(e: &Error) -> Value {
    let mut obj = BTreeMap::new();
    obj.insert("error", json!(e.to_string()));
    obj.insert("exit_code", json!(e.exit_code()));
    if let Some((u, v)) = e.index_pair() {
        obj.insert("index", json!([u, v]));
    }
    json!(obj)
}

fn output_path(p: &PathBuf) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if p.is_relative() => PathBuf::from(dir).join(p),
        _ => p.clone(),
    }
}

/// Parses `args`, runs the command and prints the report. Returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let common = cli.command.common().clone();
    let result = dispatch(&cli.command).and_then(|report| {
        match &common.output {
            Some(p) => {
                let path = output_path(p);
                if let Some(parent) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(parent)?;
                }
                std::fs::write(path, &report.body)?;
            }
            None => print!("{}", report.body),
        }
        Ok(report.code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            if common.error_json {
                println!("{}", serde_json::to_string_pretty(&error_json(&e)).expect("error serializes"));
            } else {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    }
}
