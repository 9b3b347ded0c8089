//! Brute-force cross-checks run by `oracle-check`.

use graphdec::cliquewidth::{cwd_expression_with, eval_cw};
use graphdec::modular::{from_gdec, gdec, is_module, modules};
use graphdec::split::{check_canonical, eval, same_sd_graph, split_decompose, split_iterative};
use graphdec::{Result, SimpleDigraph};
use serde::Serialize;

/// Exhaustive subset enumeration stays below this many vertices.
const EXHAUSTIVE_LIMIT: usize = 14;

pub struct Caps {
    pub modules: usize,
    pub split: usize,
    pub cwd_vertices: usize,
    pub cwd_labels: usize,
    pub seed: u64,
}

#[derive(Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub skipped: bool,
    pub detail: String,
}

fn pass(name: &'static str, detail: impl Into<String>) -> Check {
    Check { name, passed: true, skipped: false, detail: detail.into() }
}

fn fail(name: &'static str, detail: impl Into<String>) -> Check {
    Check { name, passed: false, skipped: false, detail: detail.into() }
}

fn skip(name: &'static str, detail: impl Into<String>) -> Check {
    Check { name, passed: true, skipped: true, detail: detail.into() }
}

fn same_graph(a: &SimpleDigraph, b: &SimpleDigraph) -> bool {
    a.vertex_set() == b.vertex_set() && a.edge_names() == b.edge_names()
}

pub fn check(g: &SimpleDigraph, caps: &Caps) -> Result<Vec<Check>> {
    let n = g.n();
    let mut out = Vec::new();

    if n > caps.modules {
        out.push(skip("gdec_round_trip", format!("{n} vertices exceed the module cap")));
        out.push(skip("modules_vs_definition", format!("{n} vertices exceed the module cap")));
    } else {
        let back = from_gdec(&gdec(g, caps.modules)?)?;
        out.push(if same_graph(&back, g) { pass("gdec_round_trip", "") } else { fail("gdec_round_trip", "evaluation differs from input") });
        if n > EXHAUSTIVE_LIMIT {
            out.push(skip("modules_vs_definition", "too many subsets"));
        } else {
            let fam = modules(g, caps.modules)?;
            let brute: Vec<u64> = (1..1u64 << n).filter(|&m| is_module(g, m)).collect();
            let listed: Vec<u64> = fam.members.iter().copied().collect();
            out.push(if brute == listed {
                pass("modules_vs_definition", format!("{} modules", listed.len()))
            } else {
                fail("modules_vs_definition", format!("{} listed, {} by definition", listed.len(), brute.len()))
            });
        }
    }

    let decomposable = g.is_strongly_connected() || (g.is_undirected() && g.is_connected());
    if !decomposable || n > caps.split {
        let why = if decomposable { "exceeds the split cap" } else { "input is not strongly connected" };
        out.push(skip("split_eval", why));
        out.push(skip("split_canonical", why));
        out.push(skip("split_seed_independent", why));
    } else {
        let h = split_decompose(g, caps.split)?;
        out.push(if same_graph(&eval(&h), g) { pass("split_eval", "") } else { fail("split_eval", "evaluation differs from input") });
        let v = check_canonical(&h, caps.split)?;
        out.push(if v.is_empty() {
            pass("split_canonical", "")
        } else {
            fail("split_canonical", v.iter().map(|x| x.message.clone()).collect::<Vec<_>>().join("; "))
        });
        let alt = split_iterative(g, caps.split, caps.seed)?;
        out.push(if same_sd_graph(&h, &alt)? {
            pass("split_seed_independent", format!("seed {}", caps.seed))
        } else {
            fail("split_seed_independent", format!("seed {} gives another decomposition", caps.seed))
        });
    }

    if n > caps.cwd_vertices || n == 0 {
        out.push(skip("cwd_witness", format!("{n} vertices outside the exact search range")));
    } else {
        let mut found = None;
        for k in 1..=n.min(caps.cwd_labels) {
            if let Some(e) = cwd_expression_with(g, k, caps.cwd_vertices, caps.cwd_labels)? {
                found = Some((k, e));
                break;
            }
        }
        out.push(match found {
            None => skip("cwd_witness", "width exceeds the label cap"),
            Some((k, e)) => {
                let v = eval_cw(&e)?;
                if same_graph(&v.graph, g) && e.labels().len() <= k {
                    pass("cwd_witness", format!("width {k}"))
                } else {
                    fail("cwd_witness", format!("witness for width {k} does not evaluate to the input"))
                }
            }
        });
    }
    Ok(out)
}
