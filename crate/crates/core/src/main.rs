use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use dcsplit::caps::Caps;
use dcsplit::constructions::{self, Construction, WeightedFan2D};
use dcsplit::cpwl::Cpwl;
use dcsplit::decomposition::{self, DecompPoint};
use dcsplit::gluing::{polygon_gluing, Gluing};
use dcsplit::json::*;
use dcsplit::nn::{self, ReluNetwork};
use dcsplit::rat::parse_rat;
use dcsplit::{fixtures, plot, submodular, Error, Rat, Result};

const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "dcsplit", version, about = "Exact difference-of-convex decompositions of CPWL functions")]
struct Cli {
    /// cap overrides, e.g. `enum_dim=14,braid_n=4`
    #[arg(long, global = true)]
    caps: Option<String>,
    /// write the result here instead of stdout
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a complex
    Validate { complex: PathBuf },
    /// Facet weights, convexity and piece count of a function
    Weights { function: PathBuf },
    /// Decompose a function on its complex
    Decompose {
        function: PathBuf,
        /// comma-separated objective weights, one per facet
        #[arg(long)]
        objective: Option<String>,
        #[arg(long)]
        enumerate: bool,
        #[arg(long)]
        minimal: bool,
    },
    /// Check a proposed decomposition `f = g - h`
    Check { function: PathBuf, g: PathBuf, h: PathBuf },
    /// Classical constructions
    Construct {
        #[command(subcommand)]
        method: ConstructCmd,
    },
    /// Polygon gluing on a 3D fan
    Glue { function: PathBuf },
    /// Set functions and Lovász extensions
    Submod {
        #[command(subcommand)]
        op: SubmodCmd,
    },
    /// ReLU network emission
    Nn {
        #[command(subcommand)]
        op: NnCmd,
    },
    /// Static SVG of a 2D complex or function
    Plot { input: PathBuf },
    /// Print a built-in fixture as function JSON
    Fixture {
        #[command(subcommand)]
        name: FixtureCmd,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    HyperplaneExt { function: PathBuf },
    LocalMax { function: PathBuf },
    Tran2d {
        /// rays as `x,y;x,y;...`
        #[arg(long)]
        rays: String,
        /// scaled weights as `w,w,...`
        #[arg(long)]
        weights: String,
    },
    SignSplit { terms: PathBuf },
    OrderStat {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand)]
enum SubmodCmd {
    Lovasz { setfn: PathBuf },
    Tosetfn { function: PathBuf },
    Issubmodular { setfn: PathBuf },
    Decompose { setfn: PathBuf },
    Cut { graph: PathBuf },
    Greedy { setfn: PathBuf },
}

#[derive(Subcommand)]
enum NnCmd {
    /// Network for a convex function
    Build {
        function: PathBuf,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        f64: bool,
    },
    /// Network for `g - h` from the reduced decomposition
    Dc {
        function: PathBuf,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        f64: bool,
    },
    Verify {
        network: PathBuf,
        function: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    Stats { network: PathBuf },
}

#[derive(Subcommand)]
enum FixtureCmd {
    Median,
    SixFan,
    Counterexample,
    Tran,
    OrderStat {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
}

enum Output {
    Json(Value),
    Text(String),
}

/// Result plus the exit code it should produce.
struct Outcome {
    out: Output,
    code: u8,
}

impl From<Value> for Outcome {
    fn from(v: Value) -> Outcome {
        Outcome { out: Output::Json(v), code: 0 }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. } => 3,
        Error::Infeasible | Error::NotRegular => 2,
        _ => 1,
    }
}

fn load_function(p: &Path) -> Result<Cpwl> {
    function_from_json(&read_json(p)?, p.parent())
}

fn parse_list(s: &str) -> Result<Vec<Rat>> {
    s.split(',').filter(|x| !x.trim().is_empty()).map(parse_rat).collect()
}

fn parse_rays(s: &str) -> Result<Vec<[i64; 2]>> {
    s.split(';')
        .filter(|x| !x.trim().is_empty())
        .map(|r| {
            let v: Vec<i64> = r
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("bad ray {r:?}"))))
                .collect::<Result<_>>()?;
            <[i64; 2]>::try_from(v).map_err(|_| Error::Parse(format!("ray {r:?} needs two entries")))
        })
        .collect()
}

/// Minimality of `p` among the vertices, or `None` if enumeration is out of reach.
fn minimal_flag(f: &Cpwl, p: &DecompPoint) -> Result<Option<bool>> {
    match decomposition::minimal_set(f) {
        Ok(m) => Ok(Some(m.iter().any(|q| q.wg == p.wg))),
        Err(Error::CapExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn decomposition_json(f: &Cpwl, p: &DecompPoint, minimal: Option<bool>) -> Result<Value> {
    let (pg, ph) = p.pieces()?;
    let mut v = json!({
        "g": function_to_json(&p.g),
        "h": function_to_json(&p.h),
        "weights_g": weights_to_json(&p.wg),
        "flags": {
            "vertex": decomposition::is_vertex(f, p)?,
            "reduced": decomposition::is_reduced(p),
            "minimal": minimal.unwrap_or(false),
        },
        "pieces": [pg, ph],
    });
    if minimal.is_none() {
        v["minimal_checked"] = json!(false);
    }
    Ok(v)
}

fn construction_json(c: &Construction, method: &str) -> Result<Value> {
    let mut v = decomposition_json(&c.f, &c.point, minimal_flag(&c.f, &c.point)?)?;
    v["method"] = json!(method);
    Ok(v)
}

fn network_json(net: &ReluNetwork, f64_export: bool) -> Value {
    let mut v = if f64_export { network_to_json_f64(net) } else { network_to_json(net) };
    let st = net.stats();
    v["stats"] = json!({"depth": st.depth, "width": st.width, "size": st.size});
    v
}

fn run(cmd: Cmd) -> Result<Outcome> {
    Ok(match cmd {
        Cmd::Validate { complex } => {
            let c = complex_from_json_raw(&read_json(&complex)?)?;
            let rep = c.validate();
            let viol: Vec<String> = rep.violations.iter().map(|v| format!("{v:?}")).collect();
            let v = json!({"valid": rep.is_valid(), "dim": c.dim, "cells": c.cells.len(), "facets": c.facets.len(), "violations": viol});
            Outcome { out: Output::Json(v), code: if rep.is_valid() { 0 } else { 1 } }
        }
        Cmd::Weights { function } => {
            let f = load_function(&function)?;
            let s = f.supports();
            let (count, exact) = f.piece_count();
            json!({
                "weights": weights_to_json(&f.weights()),
                "convex": f.is_convex(),
                "supports": {"plus": s.plus, "minus": s.minus},
                "pieces": {"count": count, "bound": if exact { "exact" } else { "upper bound" }},
            })
            .into()
        }
        Cmd::Decompose { function, objective, enumerate, minimal } => {
            let f = load_function(&function)?;
            if enumerate || minimal {
                let pts = if minimal { decomposition::minimal_set(&f)? } else { decomposition::enumerate(&f)? };
                let mins = if minimal { pts.clone() } else { decomposition::minimal_set(&f)? };
                let list = pts
                    .iter()
                    .map(|p| decomposition_json(&f, p, Some(mins.iter().any(|q| q.wg == p.wg))))
                    .collect::<Result<Vec<_>>>()?;
                let key = if minimal { "minimal" } else { "vertices" };
                json!({ key: list, "count": pts.len() }).into()
            } else {
                let p = match objective {
                    Some(o) => decomposition::solve_reduced_with(&f, &parse_list(&o)?)?,
                    None => decomposition::solve_reduced(&f)?,
                };
                decomposition_json(&f, &p, minimal_flag(&f, &p)?)?.into()
            }
        }
        Cmd::Check { function, g, h } => {
            let f = load_function(&function)?;
            let on_f = |p: &Path| -> Result<Cpwl> {
                let x = load_function(p)?;
                if *x.complex == *f.complex {
                    Cpwl::new(f.complex.clone(), x.pieces)
                } else {
                    x.transfer(f.complex.clone())
                }
            };
            let (g, h) = (on_f(&g)?, on_f(&h)?);
            let equal = g.sub(&h)? == f;
            let convex = g.is_convex() && h.is_convex();
            let mut v = json!({"decomposes": equal, "convex": [g.is_convex(), h.is_convex()]});
            if equal && convex {
                let p = DecompPoint::from_wg(&f, g.weights())?;
                v["flags"] = json!({
                    "vertex": decomposition::is_vertex(&f, &p)?,
                    "reduced": decomposition::is_reduced(&p),
                    "certificate": decomposition::unique_vertex_certificate(&f, &g, &h)?,
                });
                v["pieces"] = json!(p.pieces()?);
            }
            Outcome { out: Output::Json(v), code: if equal && convex { 0 } else { 1 } }
        }
        Cmd::Construct { method } => match method {
            ConstructCmd::HyperplaneExt { function } => {
                construction_json(&constructions::hyperplane_extension(&load_function(&function)?)?, "hyperplane-ext")?.into()
            }
            ConstructCmd::LocalMax { function } => {
                construction_json(&constructions::local_maxima(&load_function(&function)?)?, "local-max")?.into()
            }
            ConstructCmd::Tran2d { rays, weights } => {
                let wf = WeightedFan2D::new(&parse_rays(&rays)?, &parse_list(&weights)?)?;
                let t = constructions::tran2d_minimal(&wf)?;
                let mut v = construction_json(&t.construction, "tran2d")?;
                if let Some((ray, w)) = &t.closing {
                    v["closing"] = json!({"ray": ray, "weight": rat_to_value(w)});
                }
                v.into()
            }
            ConstructCmd::SignSplit { terms } => {
                let (dim, terms) = hinge_terms_from_json(&read_json(&terms)?)?;
                construction_json(&constructions::sign_split(&terms, dim)?, "sign-split")?.into()
            }
            ConstructCmd::OrderStat { n, k } => construction_json(&constructions::order_statistic(n, k)?, "order-stat")?.into(),
        },
        Cmd::Glue { function } => {
            let f = load_function(&function)?;
            match polygon_gluing(&f.complex, &f.weights())? {
                Gluing::Feasible { placements, .. } => {
                    let pl: serde_json::Map<String, Value> =
                        placements.iter().map(|(k, x)| (k.to_string(), json!(x.iter().map(rat_to_value).collect::<Vec<_>>()))).collect();
                    json!({"feasible": true, "placements": pl}).into()
                }
                g @ Gluing::Infeasible { .. } => {
                    let Gluing::Infeasible { system, certificate } = &g else { unreachable!() };
                    let v = json!({
                        "feasible": false,
                        "equations": system.equalities.len(),
                        "certificate": {"eq": certificate.eq.iter().map(rat_to_value).collect::<Vec<_>>()},
                        "verified": g.certificate_verifies(),
                    });
                    Outcome { out: Output::Json(v), code: 2 }
                }
            }
        }
        Cmd::Submod { op } => match op {
            SubmodCmd::Lovasz { setfn } => function_to_json(&submodular::lovasz(&set_function_from_json(&read_json(&setfn)?)?)?).into(),
            SubmodCmd::Tosetfn { function } => set_function_to_json(&submodular::to_set_function(&load_function(&function)?)?).into(),
            SubmodCmd::Issubmodular { setfn } => {
                json!({"submodular": submodular::is_submodular(&set_function_from_json(&read_json(&setfn)?)?)}).into()
            }
            SubmodCmd::Decompose { setfn } => {
                let d = submodular::decompose_set_function(&set_function_from_json(&read_json(&setfn)?)?)?;
                json!({
                    "g": set_function_to_json(&d.g),
                    "h": set_function_to_json(&d.h),
                    "flags": {"vertex": d.flags.vertex, "reduced": d.flags.reduced, "irreducible": d.flags.irreducible},
                })
                .into()
            }
            SubmodCmd::Cut { graph } => set_function_to_json(&submodular::cut_function(&graph_from_json(&read_json(&graph)?)?)).into(),
            SubmodCmd::Greedy { setfn } => {
                let vs = submodular::greedy_vertices(&set_function_from_json(&read_json(&setfn)?)?)?;
                let list: Vec<Value> = vs.iter().map(|v| json!(v.iter().map(rat_to_value).collect::<Vec<_>>())).collect();
                json!({"vertices": list, "count": vs.len()}).into()
            }
        },
        Cmd::Nn { op } => match op {
            NnCmd::Build { function, r, s, f64 } => {
                let f = load_function(&function)?;
                let k = nn::components(&f).len();
                let r = r.unwrap_or(1);
                let s = s.unwrap_or_else(|| k.div_ceil(r));
                network_json(&nn::grouped_convex(&f, r, s)?, f64).into()
            }
            NnCmd::Dc { function, r, s, f64 } => {
                let f = load_function(&function)?;
                let p = decomposition::solve_reduced(&f)?;
                let k = nn::components(&p.g).len().max(nn::components(&p.h).len());
                let r = r.unwrap_or(1);
                let s = s.unwrap_or_else(|| k.div_ceil(r));
                network_json(&nn::dc_network(&p.g, &p.h, r, s)?, f64).into()
            }
            NnCmd::Verify { network, function, seed, samples } => {
                let net = network_from_json(&read_json(&network)?)?;
                let f = load_function(&function)?;
                if net.input_dim != f.dim() {
                    return Err(Error::DimMismatch { expected: f.dim(), got: net.input_dim });
                }
                let rep = nn::verify(&net, &f, samples, seed);
                let v = json!({
                    "checked": rep.checked,
                    "exact_mismatches": rep.mismatches.len(),
                    "pass": rep.pass(),
                    "max_rel_err_f64": rep.max_rel_err,
                    "float_ok": rep.float_ok,
                });
                Outcome { out: Output::Json(v), code: if rep.pass() { 0 } else { 1 } }
            }
            NnCmd::Stats { network } => {
                let st = network_from_json(&read_json(&network)?)?.stats();
                json!({"depth": st.depth, "width": st.width, "size": st.size}).into()
            }
        },
        Cmd::Plot { input } => {
            let v = read_json(&input)?;
            let svg = if v.get("pieces").is_some() {
                let f = function_from_json(&v, input.parent())?;
                plot::svg(&f.complex, Some(&f.weights()))?
            } else {
                plot::svg(&complex_from_json(&v)?, None)?
            };
            Outcome { out: Output::Text(svg), code: 0 }
        }
        Cmd::Fixture { name } => {
            let f = match name {
                FixtureCmd::Median => fixtures::median(),
                FixtureCmd::SixFan => Cpwl::zero(Arc::new(fixtures::six_fan())),
                FixtureCmd::Counterexample => fixtures::counterexample_function(),
                FixtureCmd::Tran => WeightedFan2D::new(&fixtures::TRAN_RAYS, &fixtures::tran_weights())?.function()?,
                FixtureCmd::OrderStat { n, k } => constructions::order_statistic(n, k)?.f,
            };
            function_to_json(&f).into()
        }
    })
}

fn emit(out: &Output, path: Option<&Path>) -> std::io::Result<()> {
    let text = match out {
        Output::Json(v) => serde_json::to_string_pretty(v).expect("serializable") + "\n",
        Output::Text(s) => s.clone(),
    };
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            use std::io::Write;
            match std::io::stdout().lock().write_all(text.as_bytes()) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r,
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let caps = cli.caps.clone().or_else(|| std::env::var("DCSPLIT_CAPS").ok());
    if let Some(c) = caps {
        if let Err(e) = Caps::parse(&c) {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
        std::env::set_var("DCSPLIT_CAPS", c);
    }
    match run(cli.cmd) {
        Ok(o) => match emit(&o.out, cli.output.as_deref()) {
            Ok(()) => ExitCode::from(o.code),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
