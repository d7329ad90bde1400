//! The `ufolab` command line. Every command prints one JSON report on
//! stdout. Exit codes: 0 accept, 1 reject, 2 input or usage error,
//! 3 vertex budget exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{input, Error, Result};
use crate::graphs::{budget_from_env, ends_lower_bound, is_forest, BoundedGraph, GraphSpec, NeighborOracle};
use crate::groups::{GroupOracle, Key};
use crate::mirror::{build_matching, is_coherent, is_forbidden, ForbiddenPatterns, Pattern, Verdict};
use crate::qi::{qi_check_on_ball, transfer_ufo, QiConstants, QiMap};
use crate::ufo::{
    amenable_ufo, lift_ufo, multiended_ufo, pentagon_ufo, resolve, verify_ufo, zd_ufo, BoxFolner, Ufo, UfoParams,
    UfoReport,
};

#[derive(Parser, Debug)]
#[command(name = "ufolab", version, about = "Build, verify and transfer (m,k,r)-UFOs; check mirror-shift patterns")]
struct Cli {
    /// Spaces per indentation level in the JSON report (0 = compact).
    #[arg(long, global = true, default_value_t = 2)]
    json_indent: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct BallOpts {
    /// Maximum vertices per ball (default: $UFOLAB_BUDGET_VERTICES or 5000000).
    #[arg(long)]
    budget: Option<usize>,
    /// Write the ball as a DOT graph, U/F/O colored.
    #[arg(long)]
    dot: Option<PathBuf>,
}

impl BallOpts {
    fn budget(&self) -> usize {
        self.budget.unwrap_or_else(budget_from_env)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Zd,
    Pentagon,
    Amenable,
    Multiended,
    Lift,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify a triple against (m,k,r).
    VerifyUfo {
        /// Graph spec; optional when the UFO file embeds one under "graph".
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        ufo: PathBuf,
        /// m,k,r (overrides the params stored in the UFO file).
        #[arg(long)]
        params: Option<String>,
        #[command(flatten)]
        ball: BallOpts,
    },
    /// Construct a UFO from one of the built-in families and verify it.
    MakeUfo {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        r: Option<u32>,
        /// Ball to build in (amenable, multiended) or the Schreier ball (lift).
        #[arg(long)]
        graph: Option<PathBuf>,
        /// JSON array of vertices: the Følner set (amenable) or the cut (multiended).
        #[arg(long)]
        set: Option<PathBuf>,
        /// Schreier-graph UFO to lift.
        #[arg(long)]
        ufo: Option<PathBuf>,
        #[arg(long)]
        params: Option<String>,
        /// Write the constructed UFO (with params and graph) to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
        #[command(flatten)]
        ball: BallOpts,
    },
    /// Push a UFO of one graph through a quasi-isometry into another.
    TransferUfo {
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        g2: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        ufo: PathBuf,
        /// A,B,C
        #[arg(long)]
        constants: String,
        #[arg(long)]
        params: Option<String>,
        #[arg(long)]
        emit: Option<PathBuf>,
        #[command(flatten)]
        ball: BallOpts,
    },
    /// Check the quasi-isometry inequalities of a map between two balls.
    QiCheck {
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        g2: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        constants: String,
        /// Use every n-th source vertex.
        #[arg(long, default_value_t = 1)]
        stride: usize,
        #[command(flatten)]
        ball: BallOpts,
    },
    /// Classify a pattern by the coherence and matching rules.
    MirrorCheck {
        #[arg(long)]
        pattern: PathBuf,
    },
    /// Stream the forbidden patterns of a ball, up to a pattern budget.
    MirrorEnumerate {
        #[arg(long)]
        k: usize,
        #[arg(long = "A")]
        a: usize,
        #[arg(long, default_value_t = 1)]
        rank: usize,
        /// Number of patterns to examine.
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        /// Forbidden patterns to include in the report.
        #[arg(long, default_value_t = 3)]
        show: usize,
    },
    /// Count components of B_N minus B_n that reach the sphere of radius N.
    SchreierEnds {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        n: u32,
        #[arg(long = "N")]
        big_n: u32,
        #[command(flatten)]
        ball: BallOpts,
    },
    /// Size, degree and layer statistics of a ball.
    BallStats {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        ball: BallOpts,
    },
}

/// Report and exit code of one run.
struct Outcome {
    report: Value,
    accept: bool,
}

pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let indent = cli.json_indent;
    match dispatch(cli.command) {
        Ok(o) => {
            let _ = out.write_all(render(&o.report, indent).as_bytes());
            if o.accept {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "ufolab: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Rejected(_) | Error::NotApplicable(_) => 1,
        Error::Input(_) | Error::Json(_) | Error::Io(_) => 2,
        Error::Budget(_) => 3,
    }
}

/// Serializes with `indent` spaces per level and a trailing newline.
pub fn render(v: &Value, indent: usize) -> String {
    let mut s = if indent == 0 {
        serde_json::to_string(v).expect("values serialize")
    } else {
        let pad = vec![b' '; indent];
        let mut buf = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, serde_json::ser::PrettyFormatter::with_indent(&pad));
        v.serialize(&mut ser).expect("values serialize");
        String::from_utf8(buf).expect("json is utf-8")
    };
    s.push('\n');
    s
}

fn read_json(path: &Path, what: &str) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{what}: cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{what}: {} is not valid JSON: {e}", path.display())))
}

fn graph_spec(value: &Value, what: &str) -> Result<GraphSpec> {
    serde_json::from_value(value.clone()).map_err(|e| Error::Input(format!("{what}: {e}")))
}

fn with_path(e: Error, what: &str) -> Error {
    match e {
        Error::Input(m) => Error::Input(format!("{what}: {m}")),
        other => other,
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))
}

fn provenance(command: &str, arguments: Value, inputs: Map<String, Value>, budget: Option<usize>) -> Value {
    let mut p = json!({
        "tool": "ufolab",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "arguments": arguments,
        "inputs": inputs,
    });
    if let Some(b) = budget {
        p["budget_vertices"] = json!(b);
    }
    p
}

fn path_str(p: &Option<PathBuf>) -> Value {
    p.as_ref().map_or(Value::Null, |p| Value::String(p.display().to_string()))
}

fn params_of(flag: &Option<String>, stored: Option<UfoParams>) -> Result<UfoParams> {
    match (flag, stored) {
        (Some(text), _) => UfoParams::parse(text),
        (None, Some(p)) => Ok(p),
        (None, None) => input("params: give --params m,k,r or store \"params\" in the UFO file"),
    }
}

/// Ball around the triple, of radius `max(k, r, spec radius)`.
fn ufo_ball(oracle: &NeighborOracle, spec: &GraphSpec, ufo: &Ufo, p: UfoParams, budget: usize) -> Result<BoundedGraph> {
    let seeds = if ufo.is_empty() { vec![oracle.base_vertex()] } else { ufo.support() };
    BoundedGraph::build(oracle, &seeds, p.k.max(p.r).max(spec.radius), budget)
}

fn write_dot(path: &Option<PathBuf>, bg: &BoundedGraph, ufo: Option<&Ufo>) -> Result<()> {
    let Some(path) = path else { return Ok(()) };
    let text = match ufo {
        Some(ufo) => {
            let set = resolve(bg, ufo)?;
            bg.to_dot(&[(&set.u, "lightblue"), (&set.f, "gray"), (&set.o, "orange")])
        }
        None => bg.to_dot(&[]),
    };
    write_file(path, &text)
}

/// UFO file contents: the triple, its params and a spec for its graph.
fn ufo_document(bg: &BoundedGraph, ufo: &Ufo, p: UfoParams) -> Value {
    let mut spec = GraphSpec::describe(bg);
    spec.seeds = None;
    let mut v = ufo.to_json(bg.oracle(), Some(p));
    v["graph"] = serde_json::to_value(spec).expect("spec serializes");
    v
}

fn ball_summary(bg: &BoundedGraph) -> Value {
    json!({
        "vertices": bg.len(),
        "edges": bg.edge_count(),
        "radius": bg.radius(),
        "closed": bg.is_closed(),
        "max_degree": bg.max_degree(),
    })
}

fn read_map(g: &BoundedGraph, g2: &BoundedGraph, value: &Value) -> Result<QiMap> {
    if value.get("pairs").is_some() {
        return QiMap::from_json(g, g2, value);
    }
    let Some(rows) = value.get("linear").and_then(Value::as_array) else {
        return input("map: expected {\"pairs\": [...]} or {\"linear\": [[...]], \"offset\": [...]}");
    };
    let matrix: Vec<Vec<i64>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.as_array()
                .and_then(|xs| xs.iter().map(Value::as_i64).collect::<Option<Vec<_>>>())
                .ok_or_else(|| Error::Input(format!("map.linear[{i}]: expected an integer row")))
        })
        .collect::<Result<_>>()?;
    let offset: Vec<i64> = match value.get("offset") {
        None => vec![0; matrix.len()],
        Some(v) => serde_json::from_value(v.clone()).map_err(|e| Error::Input(format!("map.offset: {e}")))?,
    };
    if offset.len() != matrix.len() {
        return input("map.offset: length differs from the number of matrix rows");
    }
    let cols = matrix.first().map_or(0, Vec::len);
    if matrix.iter().any(|r| r.len() != cols) {
        return input("map.linear: rows have different lengths");
    }
    if let Some(v) = (0..g.len() as u32).find(|&v| g.key(v).ints().is_none_or(|x| x.len() != cols)) {
        return input(format!("map.linear: vertex {} is not an integer vector of length {cols}", g.format_vertex(v)));
    }
    QiMap::from_fn(g, g2, |k| {
        let x = k.ints().expect("checked above");
        Key::Ints(matrix.iter().zip(&offset).map(|(row, b)| row.iter().zip(x).map(|(a, y)| a * y).sum::<i64>() + b).collect())
    })
}

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::VerifyUfo { graph, ufo, params, ball } => verify_cmd(graph, ufo, params, ball),
        Command::MakeUfo { family, d, m, r, graph, set, ufo, params, emit, ball } => {
            make_cmd(family, d, m, r, graph, set, ufo, params, emit, ball)
        }
        Command::TransferUfo { g, g2, map, ufo, constants, params, emit, ball } => {
            transfer_cmd(g, g2, map, ufo, constants, params, emit, ball)
        }
        Command::QiCheck { g, g2, map, constants, stride, ball } => qi_cmd(g, g2, map, constants, stride, ball),
        Command::MirrorCheck { pattern } => mirror_check_cmd(pattern),
        Command::MirrorEnumerate { k, a, rank, budget, show } => mirror_enumerate_cmd(k, a, rank, budget, show),
        Command::SchreierEnds { graph, n, big_n, ball } => ends_cmd(graph, n, big_n, ball),
        Command::BallStats { graph, ball } => stats_cmd(graph, ball),
    }
}

fn verify_cmd(graph: Option<PathBuf>, ufo_path: PathBuf, params: Option<String>, opts: BallOpts) -> Result<Outcome> {
    let ufo_json = read_json(&ufo_path, "ufo")?;
    let mut inputs = Map::new();
    let spec_json = match &graph {
        Some(path) => read_json(path, "graph")?,
        None => match ufo_json.get("graph") {
            Some(g) => g.clone(),
            None => return input("graph: give --graph or embed a \"graph\" spec in the UFO file"),
        },
    };
    let spec = graph_spec(&spec_json, "graph")?;
    let oracle = spec.oracle().map_err(|e| with_path(e, "graph"))?;
    let (ufo, stored) = Ufo::from_json(&oracle, &ufo_json).map_err(|e| with_path(e, "ufo"))?;
    let p = params_of(&params, stored)?;
    let budget = opts.budget();
    let bg = ufo_ball(&oracle, &spec, &ufo, p, budget)?;
    let report = verify_ufo(&bg, &ufo, p)?;
    write_dot(&opts.dot, &bg, Some(&ufo))?;
    inputs.insert("graph".into(), spec_json);
    inputs.insert("ufo".into(), ufo_json);
    let args = json!({ "graph": path_str(&graph), "ufo": ufo_path.display().to_string(), "params": params });
    Ok(Outcome {
        accept: report.accept,
        report: json!({
            "provenance": provenance("verify-ufo", args, inputs, Some(budget)),
            "ball": ball_summary(&bg),
            "report": report.to_json(&bg),
        }),
    })
}

fn need<T>(x: Option<T>, flag: &str, family: &str) -> Result<T> {
    x.ok_or_else(|| Error::Input(format!("--{flag} is required for --family {family}")))
}

fn read_keys(path: &Path, oracle: &NeighborOracle) -> Result<(Vec<Key>, Value)> {
    let v = read_json(path, "set")?;
    let Some(items) = v.as_array() else {
        return input("set: expected a JSON array of vertices");
    };
    let keys = items
        .iter()
        .enumerate()
        .map(|(i, x)| oracle.parse_key(x).map_err(|e| with_path(e, &format!("set[{i}]"))))
        .collect::<Result<_>>()?;
    Ok((keys, v))
}

#[allow(clippy::too_many_arguments)]
fn make_cmd(
    family: Family,
    d: Option<usize>,
    m: Option<u64>,
    r: Option<u32>,
    graph: Option<PathBuf>,
    set: Option<PathBuf>,
    ufo_path: Option<PathBuf>,
    params: Option<String>,
    emit: Option<PathBuf>,
    opts: BallOpts,
) -> Result<Outcome> {
    let budget = opts.budget();
    let mut inputs = Map::new();
    let mut extra = Map::new();
    let name = family.to_possible_value().expect("no skipped variants").get_name().to_string();
    let (bg, ufo, p, report): (BoundedGraph, Ufo, UfoParams, UfoReport) = match family {
        Family::Zd | Family::Pentagon => {
            let (ufo, p, oracle) = if family == Family::Zd {
                let d = need(d, "d", &name)?;
                let (ufo, p) = zd_ufo(d, need(m, "m", &name)?, need(r, "r", &name)?)?;
                (ufo, p, NeighborOracle::Cayley(GroupOracle::free_abelian(d)?))
            } else {
                let (ufo, p) = pentagon_ufo(need(m, "m", &name)?, need(r, "r", &name)?)?;
                (ufo, p, NeighborOracle::Pentagon)
            };
            let bg = ufo.ball(&oracle, p, budget)?;
            let report = verify_ufo(&bg, &ufo, p)?;
            (bg, ufo, p, report)
        }
        Family::Amenable | Family::Multiended => {
            let gpath = need(graph.clone(), "graph", &name)?;
            let spec_json = read_json(&gpath, "graph")?;
            let spec = graph_spec(&spec_json, "graph")?;
            let bg = spec.build(budget).map_err(|e| with_path(e, "graph"))?;
            let (keys, set_json) = read_keys(&need(set.clone(), "set", &name)?, bg.oracle())?;
            let m = need(m, "m", &name)?;
            let c = if family == Family::Amenable { amenable_ufo(&bg, &keys, m)? } else { multiended_ufo(&bg, &keys, m)? };
            let report = verify_ufo(&bg, &c.ufo, c.params)?;
            extra.insert("disconnected".into(), json!(c.disconnected));
            inputs.insert("graph".into(), spec_json);
            inputs.insert("set".into(), set_json);
            (bg, c.ufo, c.params, report)
        }
        Family::Lift => {
            let gpath = need(graph.clone(), "graph", &name)?;
            let spec_json = read_json(&gpath, "graph")?;
            let spec = graph_spec(&spec_json, "graph")?;
            let upath = need(ufo_path.clone(), "ufo", &name)?;
            let ufo_json = read_json(&upath, "ufo")?;
            let sch = spec.build(budget).map_err(|e| with_path(e, "graph"))?;
            let (ufo, stored) = Ufo::from_json(sch.oracle(), &ufo_json).map_err(|e| with_path(e, "ufo"))?;
            let p = params_of(&params, stored)?;
            let res = lift_ufo(&sch, &ufo, p, &BoxFolner::default(), budget)?;
            extra.insert("heights".into(), json!(res.heights));
            extra.insert("folner".into(), json!(res.folner));
            extra.insert("schreier_params".into(), json!(p));
            inputs.insert("graph".into(), spec_json);
            inputs.insert("ufo".into(), ufo_json);
            (res.ball, res.ufo, res.params, res.report)
        }
    };
    let doc = ufo_document(&bg, &ufo, p);
    if let Some(path) = &emit {
        write_file(path, &render(&doc, 2))?;
    }
    write_dot(&opts.dot, &bg, Some(&ufo))?;
    let args = json!({
        "family": name, "d": d, "m": m, "r": r,
        "graph": path_str(&graph), "set": path_str(&set), "ufo": path_str(&ufo_path),
        "params": params, "emit": path_str(&emit),
    });
    let mut report_json = json!({
        "provenance": provenance("make-ufo", args, inputs, Some(budget)),
        "ufo": doc,
        "ball": ball_summary(&bg),
        "report": report.to_json(&bg),
    });
    for (k, v) in extra {
        report_json[k] = v;
    }
    Ok(Outcome { accept: report.accept, report: report_json })
}

#[allow(clippy::too_many_arguments)]
fn transfer_cmd(
    g: PathBuf,
    g2: PathBuf,
    map: PathBuf,
    ufo_path: PathBuf,
    constants: String,
    params: Option<String>,
    emit: Option<PathBuf>,
    opts: BallOpts,
) -> Result<Outcome> {
    let budget = opts.budget();
    let qc = QiConstants::parse(&constants)?;
    let g_json = read_json(&g, "g")?;
    let g2_json = read_json(&g2, "g2")?;
    let ufo_json = read_json(&ufo_path, "ufo")?;
    let map_json = read_json(&map, "map")?;
    let spec = graph_spec(&g_json, "g")?;
    let oracle = spec.oracle().map_err(|e| with_path(e, "g"))?;
    let (ufo, stored) = Ufo::from_json(&oracle, &ufo_json).map_err(|e| with_path(e, "ufo"))?;
    let p = params_of(&params, stored)?;
    let src = ufo_ball(&oracle, &spec, &ufo, p, budget)?;
    let dst = graph_spec(&g2_json, "g2")?.build(budget).map_err(|e| with_path(e, "g2"))?;
    let f = read_map(&src, &dst, &map_json)?;
    let t = transfer_ufo(&src, &dst, &f, qc, &ufo, p, None)?;
    if let Some(path) = &emit {
        write_file(path, &render(&ufo_document(&dst, &t.ufo, t.params), 2))?;
    }
    write_dot(&opts.dot, &dst, Some(&t.ufo))?;
    let mut inputs = Map::new();
    inputs.insert("g".into(), g_json);
    inputs.insert("g2".into(), g2_json);
    inputs.insert("ufo".into(), ufo_json);
    inputs.insert("map".into(), map_json);
    let args = json!({
        "g": g.display().to_string(), "g2": g2.display().to_string(), "map": map.display().to_string(),
        "ufo": ufo_path.display().to_string(), "constants": constants, "params": params, "emit": path_str(&emit),
    });
    Ok(Outcome {
        accept: t.report.accept,
        report: json!({
            "provenance": provenance("transfer-ufo", args, inputs, Some(budget)),
            "source_ball": ball_summary(&src),
            "target_ball": ball_summary(&dst),
            "transfer": t.to_json(&src, &dst),
        }),
    })
}

fn qi_cmd(g: PathBuf, g2: PathBuf, map: PathBuf, constants: String, stride: usize, opts: BallOpts) -> Result<Outcome> {
    let budget = opts.budget();
    let qc = QiConstants::parse(&constants)?;
    let g_json = read_json(&g, "g")?;
    let g2_json = read_json(&g2, "g2")?;
    let map_json = read_json(&map, "map")?;
    let src = graph_spec(&g_json, "g")?.build(budget).map_err(|e| with_path(e, "g"))?;
    let dst = graph_spec(&g2_json, "g2")?.build(budget).map_err(|e| with_path(e, "g2"))?;
    let f = read_map(&src, &dst, &map_json)?;
    let check = qi_check_on_ball(&src, &dst, &f, qc, stride);
    let mut inputs = Map::new();
    inputs.insert("g".into(), g_json);
    inputs.insert("g2".into(), g2_json);
    inputs.insert("map".into(), map_json);
    let args = json!({
        "g": g.display().to_string(), "g2": g2.display().to_string(), "map": map.display().to_string(),
        "constants": constants, "stride": stride,
    });
    Ok(Outcome {
        accept: check.holds,
        report: json!({
            "provenance": provenance("qi-check", args, inputs, Some(budget)),
            "constants": qc,
            "check": check,
        }),
    })
}

fn mirror_check_cmd(path: PathBuf) -> Result<Outcome> {
    let pj = read_json(&path, "pattern")?;
    let p = Pattern::from_json(&pj).map_err(|e| with_path(e, "pattern"))?;
    let verdict = is_forbidden(&p);
    let matching = if is_coherent(&p) { Some(build_matching(&p)?.to_json(p.ball())) } else { None };
    let mut inputs = Map::new();
    inputs.insert("pattern".into(), pj);
    Ok(Outcome {
        accept: verdict == Verdict::Allowed,
        report: json!({
            "provenance": provenance("mirror-check", json!({ "pattern": path.display().to_string() }), inputs, None),
            "ball_size": p.ball().len(),
            "verdict": verdict,
            "coherent": verdict != Verdict::CoherenceViolation,
            "matching": matching,
        }),
    })
}

fn mirror_enumerate_cmd(k: usize, a: usize, rank: usize, budget: u64, show: usize) -> Result<Outcome> {
    let mut stream = ForbiddenPatterns::new(rank, k, a, budget)?;
    let (mut coherence, mut matching) = (0u64, 0u64);
    let mut examples = Vec::new();
    for (p, v) in stream.by_ref() {
        match v {
            Verdict::CoherenceViolation => coherence += 1,
            Verdict::MatchingViolation => matching += 1,
            Verdict::Allowed => unreachable!("the stream yields forbidden patterns only"),
        }
        if examples.len() < show {
            examples.push(json!({ "verdict": v, "pattern": p.to_json() }));
        }
    }
    let examined = stream.examined();
    let args = json!({ "k": k, "A": a, "rank": rank, "budget": budget, "show": show });
    Ok(Outcome {
        accept: true,
        report: json!({
            "provenance": provenance("mirror-enumerate", args, Map::new(), None),
            "ball_size": stream.ball().len(),
            "total": stream.total().map(|t| t.to_string()),
            "examined": examined,
            "exhausted": stream.is_exhausted(),
            "coherence_violations": coherence,
            "matching_violations": matching,
            "allowed": examined - coherence - matching,
            "examples": examples,
        }),
    })
}

fn ends_cmd(graph: PathBuf, n: u32, big_n: u32, opts: BallOpts) -> Result<Outcome> {
    let budget = opts.budget();
    let spec_json = read_json(&graph, "graph")?;
    let spec = graph_spec(&spec_json, "graph")?;
    let oracle = spec.oracle().map_err(|e| with_path(e, "graph"))?;
    let seed = match spec.seeds.as_deref() {
        Some([first, ..]) => oracle.parse_key(first).map_err(|e| with_path(e, "graph.seeds[0]"))?,
        _ => oracle.base_vertex(),
    };
    let ends = ends_lower_bound(&oracle, &seed, n, big_n, budget)?;
    let bg = BoundedGraph::build(&oracle, std::slice::from_ref(&seed), big_n, budget)?;
    write_dot(&opts.dot, &bg, None)?;
    let mut inputs = Map::new();
    inputs.insert("graph".into(), spec_json);
    let args = json!({ "graph": graph.display().to_string(), "n": n, "N": big_n });
    let mut ball = ball_summary(&bg);
    ball["forest"] = json!(is_forest(&bg));
    Ok(Outcome {
        accept: true,
        report: json!({
            "provenance": provenance("schreier-ends", args, inputs, Some(budget)),
            "seed": oracle.format_key(&seed),
            "ends_lower_bound": ends,
            "ball": ball,
        }),
    })
}

fn stats_cmd(graph: PathBuf, opts: BallOpts) -> Result<Outcome> {
    let budget = opts.budget();
    let spec_json = read_json(&graph, "graph")?;
    let bg = graph_spec(&spec_json, "graph")?.build(budget).map_err(|e| with_path(e, "graph"))?;
    write_dot(&opts.dot, &bg, None)?;
    let mut layers = vec![0usize; bg.radius() as usize + 1];
    for v in 0..bg.len() as u32 {
        layers[bg.depth(v) as usize] += 1;
    }
    let mut degrees = std::collections::BTreeMap::new();
    for v in 0..bg.len() as u32 {
        *degrees.entry(bg.neighbors(v).len().to_string()).or_insert(0usize) += 1;
    }
    let mut ball = ball_summary(&bg);
    ball["forest"] = json!(is_forest(&bg));
    ball["layer_sizes"] = json!(layers);
    ball["degree_histogram"] = json!(degrees);
    let mut inputs = Map::new();
    inputs.insert("graph".into(), spec_json);
    Ok(Outcome {
        accept: true,
        report: json!({
            "provenance": provenance("ball-stats", json!({ "graph": graph.display().to_string() }), inputs, Some(budget)),
            "ball": ball,
        }),
    })
}
