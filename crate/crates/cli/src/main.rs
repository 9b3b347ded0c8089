use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use graphdec::cliquewidth::{
    component_expr, cwd_expression_with, eval_cw, sd_expr, CwExpression, DEFAULT_CWD_LABEL_CAP, DEFAULT_CWD_VERTEX_CAP,
};
use graphdec::io::{self, EdgeList};
use graphdec::modular::{gdec, md_tree, DEFAULT_MODULE_CAP};
use graphdec::mso::{apply_scheme, definable_family, eval_formula, Assignment, DefinitionScheme, Formula};
use graphdec::partitive::DecompTree;
use graphdec::split::{check_canonical, eval, sd_components, split_decompose, split_decompose_undirected, split_iterative, SDGraph, DEFAULT_SPLIT_CAP};
use graphdec::tutte::{tutte_decompose_with, ComponentKind};
use graphdec::twodag::{canonical_term, factor_tree, oriented_2dag};
use graphdec::whitney::two_isomorphic_set;
use graphdec::{Error, RelStructure, Result, SimpleDigraph};
use serde_json::{json, Value};

mod oracle;

#[derive(Parser)]
#[command(name = "graphdec", version, about = "Canonical graph decompositions and their oracles")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Input file (edge list or JSON); standard input when absent.
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Maximum number of results for streaming commands.
    #[arg(long, global = true)]
    limit: Option<usize>,
    /// Report errors as JSON on standard error.
    #[arg(long, global = true)]
    error_json: bool,
    #[command(flatten)]
    caps: Caps,
}

#[derive(Args, Clone, Copy)]
struct Caps {
    /// Largest vertex count for module enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_MODULE_CAP)]
    cap_modules: usize,
    /// Largest vertex count for split enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_SPLIT_CAP)]
    cap_split: usize,
    /// Largest edge count for factor enumeration.
    #[arg(long, global = true, default_value_t = 14)]
    cap_factors: usize,
    /// Largest edge count for 2-separation enumeration.
    #[arg(long, global = true, default_value_t = 14)]
    cap_tutte: usize,
    /// Largest vertex count for the exact clique-width search.
    #[arg(long, global = true, default_value_t = DEFAULT_CWD_VERTEX_CAP)]
    cap_cwd_vertices: usize,
    /// Largest label count for the exact clique-width search.
    #[arg(long, global = true, default_value_t = DEFAULT_CWD_LABEL_CAP)]
    cap_cwd_labels: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Edgelist,
}

#[derive(Subcommand)]
enum Cmd {
    /// Modular decomposition tree and its graph form.
    Modular,
    /// Split decomposition; SD graph inputs are evaluated first.
    Split,
    /// Decomposition of a 2-connected multigraph into bonds, cycles and 3-connected parts.
    Tutte,
    /// Factor tree and canonical term of a 2-graph (needs a `source` record).
    Factors,
    /// Every graph with the cycle matroid of the input.
    Whitney,
    /// Clique-width: evaluate an expression, decide a bound, or build one.
    Cwd {
        /// Expression to evaluate instead of reading a graph.
        #[arg(long)]
        expr: Option<String>,
        /// Decide whether the width is at most k.
        #[arg(long)]
        k: Option<usize>,
        /// Build an expression from the split decomposition.
        #[arg(long)]
        construct: bool,
    },
    /// Evaluate an SD graph by eliminating its ε-edges.
    EvalSdg,
    /// Evaluate a formula, a definable family, or a definition scheme.
    Mso {
        #[arg(long)]
        formula: Option<String>,
        #[arg(long)]
        formula_file: Option<PathBuf>,
        /// Free set variable whose satisfying sets are listed.
        #[arg(long)]
        define: Option<String>,
        /// Definition scheme (JSON) to apply to the input structure.
        #[arg(long)]
        scheme: Option<PathBuf>,
        /// `x=v` for an element variable, `X=a,b` for a set variable.
        #[arg(long = "assign")]
        assign: Vec<String>,
    },
    /// Cross-check the decompositions of the input against brute-force oracles.
    OracleCheck,
}

struct Ctx {
    input: Option<PathBuf>,
    caps: Caps,
    seed: Option<u64>,
    limit: Option<usize>,
}

/// Command output in the three formats; `None` marks an unsupported format.
struct Output {
    json: Value,
    dot: Option<String>,
    edgelist: Option<String>,
    failed: bool,
}

impl Output {
    fn new(json: Value) -> Self {
        Output { json, dot: None, edgelist: None, failed: false }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable value")
}

impl Ctx {
    fn read(&self) -> Result<String> {
        match &self.input {
            Some(p) => std::fs::read_to_string(p).map_err(|e| Error::input(format!("{}: {e}", p.display()))),
            None => {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).map_err(|e| Error::input(format!("stdin: {e}")))?;
                Ok(s)
            }
        }
    }
}

fn digraph_out(g: &SimpleDigraph) -> (Option<String>, Option<String>) {
    (Some(io::digraph_dot(g)), Some(EdgeList::from_digraph(g).to_string()))
}

fn tree_dot(t: &DecompTree, label: impl Fn(usize) -> String) -> String {
    let mut s = String::from("digraph Tree {\n");
    for u in 0..t.len() {
        let _ = writeln!(s, "  n{u} [label=\"{}\"];", label(u).replace('"', "\\\""));
    }
    for u in 0..t.len() {
        for &c in &t.nodes[u].children {
            let _ = writeln!(s, "  n{u} -> n{c};");
        }
    }
    s.push_str("}\n");
    s
}

fn modular(ctx: &Ctx) -> Result<Output> {
    let g = io::read_digraph(&ctx.read()?)?;
    let tree = md_tree(&g, ctx.caps.cap_modules)?;
    let d = gdec(&g, ctx.caps.cap_modules)?;
    let mut out = Output::new(json!({
        "vertices": d.vertex_count(),
        "edges": d.edge_count(),
        "tree": to_json(&tree),
        "gdec": to_json(&d),
    }));
    out.dot = Some(io::gdec_dot(&d));
    out.edgelist = Some(EdgeList::from_digraph(&d.graph).to_string());
    Ok(out)
}

fn split_of(ctx: &Ctx, g: &SimpleDigraph) -> Result<Vec<SDGraph>> {
    let cap = ctx.caps.cap_split;
    if g.is_strongly_connected() {
        Ok(vec![match ctx.seed {
            Some(s) => split_iterative(g, cap, s)?,
            None => split_decompose(g, cap)?,
        }])
    } else if g.is_undirected() {
        split_decompose_undirected(g, cap)
    } else {
        split_decompose(g, cap).map(|h| vec![h])
    }
}

fn describe_sd(ctx: &Ctx, h: &SDGraph) -> Result<Value> {
    let comps = sd_components(h, ctx.caps.cap_split)?;
    let types: Vec<Value> = comps.iter().map(|(c, t)| json!({ "vertices": c.names(), "type": to_json(t) })).collect();
    Ok(json!({
        "sd": to_json(h),
        "components": types,
        "violations": to_json(&check_canonical(h, ctx.caps.cap_split)?),
    }))
}

fn split(ctx: &Ctx) -> Result<Output> {
    let h = io::read_sd_graph(&ctx.read()?)?;
    let evaluated = !h.eps.is_empty();
    let g = if evaluated { eval(&h) } else { h.graph.clone() };
    let mut doc = serde_json::Map::new();
    if evaluated {
        doc.insert("eval".into(), to_json(&EdgeList::from_digraph(&g)));
    }
    let parts = match split_of(ctx, &g) {
        Ok(p) => p,
        // An evaluated SD graph need not be decomposable; its evaluation is
        // still the answer.
        Err(e) if evaluated => {
            doc.insert("decomposition".into(), Value::Null);
            doc.insert("reason".into(), json!(e.to_string()));
            let mut out = Output::new(Value::Object(doc));
            (out.dot, out.edgelist) = digraph_out(&g);
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    let described: Vec<Value> = parts.iter().map(|h| describe_sd(ctx, h)).collect::<Result<_>>()?;
    let failed = described.iter().any(|d| d["violations"].as_array().is_some_and(|v| !v.is_empty()));
    doc.insert("decomposition".into(), Value::Array(described));
    let mut out = Output::new(Value::Object(doc));
    out.failed = failed;
    out.dot = Some(parts.iter().map(io::sd_dot).collect());
    out.edgelist = Some(parts.iter().map(|h| EdgeList::from_sd_graph(h).to_string()).collect::<Vec<_>>().join("\n"));
    Ok(out)
}

fn tutte(ctx: &Ctx) -> Result<Output> {
    let g = io::read_multigraph(&ctx.read()?)?;
    let d = tutte_decompose_with(&g, ctx.caps.cap_tutte, ctx.seed)?;
    let mut kinds: BTreeMap<&str, usize> = BTreeMap::new();
    for c in &d.components {
        let k = match c.kind {
            ComponentKind::Bond => "bond",
            ComponentKind::Cycle => "cycle",
            ComponentKind::ThreeConnected => "three_connected",
        };
        *kinds.entry(k).or_default() += 1;
    }
    let mut out = Output::new(json!({ "kinds": kinds, "decomposition": to_json(&d) }));
    out.dot = Some(io::tutte_dot(&d));
    let mut text = String::new();
    for (i, c) in d.components.iter().enumerate() {
        let _ = writeln!(text, "# component {i} {:?}", c.kind);
        text.push_str(&EdgeList::from_multigraph(&c.graph).to_string());
    }
    out.edgelist = Some(text);
    Ok(out)
}

fn factors(ctx: &Ctx) -> Result<Output> {
    let g = io::read_two_graph(&ctx.read()?)?;
    let (h, reversed) = oriented_2dag(&g)?;
    let ft = factor_tree(&h, ctx.caps.cap_factors)?;
    let term = canonical_term(&g, ctx.caps.cap_factors)?;
    let mut out = Output::new(json!({
        "term": term.to_string(),
        "reversed": reversed,
        "tree": to_json(&ft),
    }));
    out.dot = Some(tree_dot(&ft.tree, |u| {
        let ids: Vec<String> = ft.factors[u].graph.edges().iter().map(|e| e.id.clone()).collect();
        format!("{} {{{}}}", kind_name(&ft.kinds[u]), ids.join(","))
    }));
    out.edgelist = Some(format!("{term}\n"));
    Ok(out)
}

fn kind_name(k: &graphdec::twodag::FactorKind) -> &'static str {
    use graphdec::twodag::FactorKind::*;
    match k {
        Edge => "edge",
        Parallel => "par",
        Series => "ser",
        Prime(_) => "prime",
    }
}

fn whitney(ctx: &Ctx) -> Result<Output> {
    let g = io::read_multigraph(&ctx.read()?)?;
    let set = two_isomorphic_set(&g, ctx.limit)?;
    let mut out = Output::new(json!({ "count": set.len(), "graphs": to_json(&set) }));
    out.dot = Some(set.iter().map(io::multigraph_dot).collect());
    out.edgelist = Some(
        set.iter().enumerate().map(|(i, h)| format!("# graph {i}\n{}", EdgeList::from_multigraph(h))).collect::<Vec<_>>().join("\n"),
    );
    Ok(out)
}

fn expr_json(e: &CwExpression) -> Value {
    json!({ "expression": e.to_string(), "labels": e.labels().len() })
}

fn cwd(ctx: &Ctx, expr: Option<&str>, k: Option<usize>, construct: bool) -> Result<Output> {
    let caps = ctx.caps;
    if let Some(text) = expr {
        let e = CwExpression::parse(text)?;
        let v = eval_cw(&e)?;
        let mut out = Output::new(json!({ "labels": e.labels().len(), "graph": to_json(&v) }));
        (out.dot, out.edgelist) = digraph_out(&v.graph);
        return Ok(out);
    }
    let h = io::read_sd_graph(&ctx.read()?)?;
    if construct || !h.eps.is_empty() {
        let sd = if h.eps.is_empty() { split_decompose(&h.graph, caps.cap_split)? } else { h };
        let mut exprs = BTreeMap::new();
        for c in sd.components() {
            let g = sd.component_graph(&c);
            exprs.insert(g.names().iter().min().cloned().unwrap_or_default(), component_expr(&g, caps.cap_split)?);
        }
        let e = sd_expr(&sd, &exprs)?;
        let mut out = Output::new(expr_json(&e));
        out.edgelist = Some(format!("{e}\n"));
        return Ok(out);
    }
    let g = h.graph;
    if let Some(k) = k {
        let e = cwd_expression_with(&g, k, caps.cap_cwd_vertices, caps.cap_cwd_labels)?;
        let mut doc = json!({ "k": k, "at_most": e.is_some() });
        if let Some(e) = &e {
            doc["witness"] = expr_json(e);
        }
        let mut out = Output::new(doc);
        out.edgelist = e.map(|e| format!("{e}\n"));
        return Ok(out);
    }
    for k in 1..=g.n().max(1) {
        if k > caps.cap_cwd_labels && k < g.n() {
            return Err(Error::capacity("label set", k, caps.cap_cwd_labels));
        }
        if let Some(e) = cwd_expression_with(&g, k, caps.cap_cwd_vertices, caps.cap_cwd_labels)? {
            let mut out = Output::new(json!({ "width": k, "witness": expr_json(&e) }));
            out.edgelist = Some(format!("{e}\n"));
            return Ok(out);
        }
    }
    Ok(Output::new(json!({ "width": 0 })))
}

fn eval_sdg(ctx: &Ctx) -> Result<Output> {
    let h = io::read_sd_graph(&ctx.read()?)?;
    h.validate()?;
    let g = eval(&h);
    let mut out = Output::new(to_json(&EdgeList::from_digraph(&g)));
    (out.dot, out.edgelist) = digraph_out(&g);
    Ok(out)
}

fn structure_of(h: &SDGraph) -> Result<RelStructure> {
    let mut s = RelStructure::from_digraph(&h.graph);
    if !h.eps.is_empty() {
        s.declare("eps", 2);
        for (a, b) in &h.eps {
            let (i, j) = (s.index_of(a).unwrap(), s.index_of(b).unwrap());
            s.insert("eps", vec![i, j])?;
            s.insert("eps", vec![j, i])?;
        }
    }
    Ok(s)
}

fn assignment(s: &RelStructure, items: &[String]) -> Result<Assignment> {
    let mut a = Assignment::new();
    for item in items {
        let (var, val) = item.split_once('=').ok_or_else(|| Error::input(format!("assignment '{item}' lacks '='")))?;
        let idx = |d: &str| s.index_of(d.trim()).ok_or_else(|| Error::input(format!("unknown element {d}")));
        if var.starts_with(|c: char| c.is_ascii_uppercase()) {
            let mut m = 0u64;
            for d in val.split(',').filter(|d| !d.trim().is_empty()) {
                m |= 1 << idx(d)?;
            }
            a = a.set(var, m);
        } else {
            a = a.elem(var, idx(val)?);
        }
    }
    Ok(a)
}

fn mso(ctx: &Ctx, formula: Option<String>, define: Option<&str>, scheme: Option<&PathBuf>, assign: &[String]) -> Result<Output> {
    let h = io::read_sd_graph(&ctx.read()?)?;
    let s = structure_of(&h)?;
    let asg = assignment(&s, assign)?;
    if let Some(p) = scheme {
        let text = std::fs::read_to_string(p).map_err(|e| Error::input(format!("{}: {e}", p.display())))?;
        let d = DefinitionScheme::from_json(&text)?;
        return Ok(Output::new(match apply_scheme(&d, &s, &asg)? {
            Some(t) => json!({ "defined": true, "structure": to_json(&t) }),
            None => json!({ "defined": false }),
        }));
    }
    let f = Formula::parse(&formula.ok_or_else(|| Error::input("mso needs --formula, --formula-file or --scheme"))?)?;
    if let Some(var) = define {
        let fam = definable_family(&s, &f, var)?;
        let sets: Vec<Vec<String>> = fam.members.iter().map(|&m| fam.names(m)).collect();
        return Ok(Output::new(json!({ "variable": var, "count": sets.len(), "sets": sets })));
    }
    Ok(Output::new(json!({ "formula": f.to_string(), "value": eval_formula(&s, &f, &asg)? })))
}

fn run(cli: &Cli) -> Result<Output> {
    let ctx = Ctx { input: cli.input.clone(), caps: cli.caps, seed: cli.seed, limit: cli.limit };
    for (name, v) in [
        ("modules", ctx.caps.cap_modules),
        ("split", ctx.caps.cap_split),
        ("factors", ctx.caps.cap_factors),
        ("tutte", ctx.caps.cap_tutte),
        ("cwd-vertices", ctx.caps.cap_cwd_vertices),
        ("cwd-labels", ctx.caps.cap_cwd_labels),
    ] {
        if v == 0 {
            return Err(Error::input(format!("--cap-{name} must be positive")));
        }
    }
    match &cli.cmd {
        Cmd::Modular => modular(&ctx),
        Cmd::Split => split(&ctx),
        Cmd::Tutte => tutte(&ctx),
        Cmd::Factors => factors(&ctx),
        Cmd::Whitney => whitney(&ctx),
        Cmd::Cwd { expr, k, construct } => cwd(&ctx, expr.as_deref(), *k, *construct),
        Cmd::EvalSdg => eval_sdg(&ctx),
        Cmd::Mso { formula, formula_file, define, scheme, assign } => {
            let formula = match (formula, formula_file) {
                (Some(f), _) => Some(f.clone()),
                (None, Some(p)) => Some(std::fs::read_to_string(p).map_err(|e| Error::input(format!("{}: {e}", p.display())))?),
                (None, None) => None,
            };
            mso(&ctx, formula, define.as_deref(), scheme.as_ref(), assign)
        }
        Cmd::OracleCheck => {
            let g = io::read_digraph(&ctx.read()?)?;
            let report = oracle::check(&g, &oracle::Caps {
                modules: ctx.caps.cap_modules,
                split: ctx.caps.cap_split,
                cwd_vertices: ctx.caps.cap_cwd_vertices,
                cwd_labels: ctx.caps.cap_cwd_labels,
                seed: ctx.seed.unwrap_or(0),
            })?;
            let failed = report.iter().any(|c| !c.passed);
            let mut out = Output::new(to_json(&report));
            out.failed = failed;
            Ok(out)
        }
    }
}

fn render(cli: &Cli, out: &Output) -> Result<String> {
    let text = match cli.format {
        Format::Json => Some(serde_json::to_string_pretty(&out.json).expect("JSON value") + "\n"),
        Format::Dot => out.dot.clone(),
        Format::Edgelist => out.edgelist.clone(),
    };
    text.ok_or_else(|| Error::input("this command has no output in the requested format"))
}

fn report(e: &Error, as_json: bool) {
    if as_json {
        eprintln!("{}", json!({ "error": { "kind": e.kind(), "message": e.to_string(), "exit_code": e.exit_code() } }));
    } else {
        eprintln!("graphdec: {e}");
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = run(&cli).and_then(|out| Ok((render(&cli, &out)?, out.failed)));
    match result {
        Ok((text, failed)) => {
            match &cli.out {
                Some(p) => {
                    if let Err(e) = std::fs::write(p, &text) {
                        report(&Error::input(format!("{}: {e}", p.display())), cli.error_json);
                        return ExitCode::from(1);
                    }
                }
                None => print!("{text}"),
            }
            if failed {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            report(&e, cli.error_json);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
