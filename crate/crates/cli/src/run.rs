use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::time::Instant;

use serde_json::{json, Value};

use cvwalk::dirichlet::{green_comparison, poincare_constant, sector_ratio, SectorConfig};
use cvwalk::evolution::{
    entropy_estimate, escape_probability, fit_cv_constant, powers, speed_estimate, step_measure, DistanceOracle,
    SparseDistribution,
};
use cvwalk::groups::f2::f2_reduce;
use cvwalk::groups::{
    c1_search, c2_check, word_distance_limited, C1Outcome, CayleyWindow, WordBall, Group, GroupSpec, ParseError,
};
use cvwalk::markov_graph::io::{AnyGraph, DecompositionFile, GraphFile, Label};
use cvwalk::markov_graph::{
    circulation_to_cycles, kernel_flow, reversible_decomposition, verify_centering, CycleDecomposition, Kernel,
    Measure,
};
use cvwalk::weight::{format_rational, Weight};
use cvwalk::with_group;

use crate::config::{
    Command, ExperimentConfig, MetricKind, DEFAULT_BUDGET, DEFAULT_MAX_SUPPORT, DEFAULT_RADIUS,
};
use crate::error::{CliError, ErrorCode};
use crate::report::{Report, Trace, VERSION};

type Output = Result<(Value, Trace), CliError>;

/// Validates `config`, dispatches to the matching operation and wraps the result.
pub fn run(config: &ExperimentConfig) -> Result<Report, CliError> {
    config.validate()?;
    let start = Instant::now();
    let (results, trace) = dispatch(config)?;
    Ok(Report {
        command: config.command.name(),
        config: config.clone(),
        results,
        trace,
        version: VERSION.into(),
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

fn dispatch(cfg: &ExperimentConfig) -> Output {
    use Command::*;
    match cfg.command {
        CenteringVerify | CenteringReversible | CenteringFromFlow => centering(cfg),
        DirichletPoincare => poincare(cfg),
        F2Reduce => f2(cfg),
        DirichletSector | GreenCompare if cfg.graph.is_some() => graph_window(cfg),
        _ => {
            let spec: GroupSpec = cfg.req(&cfg.group, "group")?.parse()?;
            with_group!(spec, g => group_command(&g, cfg))
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::new(ErrorCode::Io, format!("cannot read {}: {e}", path.display())))
}

fn load_graph(cfg: &ExperimentConfig) -> Result<AnyGraph, CliError> {
    let path = cfg.req(&cfg.graph, "graph")?;
    Ok(GraphFile::parse(&read(&path)?)?.load()?)
}

fn edge_json<V: fmt::Display>(x: &V, y: &V) -> Value {
    json!([x.to_string(), y.to_string()])
}

// ------------------------------------------------------------ centering

fn centering(cfg: &ExperimentConfig) -> Output {
    let graph = load_graph(cfg)?;
    let dec_file = match cfg.command {
        Command::CenteringVerify => Some(DecompositionFile::parse(&read(&cfg.req(&cfg.dec, "dec")?)?)?),
        _ => None,
    };
    match graph {
        AnyGraph::Exact(k, m) => {
            let dec = dec_file.map(|f| f.build_exact()).transpose()?;
            centering_with(cfg, &k, &m, dec, DecompositionFile::from_exact)
        }
        AnyGraph::Float(k, m) => {
            let dec = dec_file.map(|f| f.build_float()).transpose()?;
            centering_with(cfg, &k, &m, dec, DecompositionFile::from_float)
        }
    }
}

fn weight_json<W: Weight>(w: &W) -> Value {
    if W::EXACT {
        Value::String(w.to_string())
    } else {
        json!(w.to_f64())
    }
}

fn centering_with<W: Weight>(
    cfg: &ExperimentConfig,
    k: &Kernel<Label, W>,
    m: &Measure<Label, W>,
    dec: Option<CycleDecomposition<Label, W>>,
    to_file: fn(&CycleDecomposition<Label, W>) -> DecompositionFile,
) -> Output {
    let tol = cfg.tol();
    let dec_json = |d: &CycleDecomposition<Label, W>| serde_json::to_value(to_file(d)).unwrap_or(Value::Null);
    match cfg.command {
        Command::CenteringVerify => {
            let dec = dec.ok_or_else(|| CliError::config("missing dec"))?;
            let rep = verify_centering(k, m, &dec, tol)?;
            let mut trace = Trace::new(&["src", "dst", "residual"]);
            for ((x, y), r) in &rep.residuals {
                trace.push(vec![x.to_string().into(), y.to_string().into(), weight_json(r)]);
            }
            let results = json!({
                "valid": rep.valid,
                "max_abs_residual": rep.max_abs_residual,
                "c0": rep.c0,
                "interior_edges": rep.residuals.len(),
                "boundary_edges_skipped": rep.boundary_edges_skipped.iter().map(|(x, y)| edge_json(x, y)).collect::<Vec<_>>(),
                "unsupported_edges": rep.unsupported_edges.iter().map(|(x, y)| edge_json(x, y)).collect::<Vec<_>>(),
            });
            Ok((results, trace))
        }
        Command::CenteringReversible => {
            let dec = reversible_decomposition(k, m, tol)?;
            let check = verify_centering(k, m, &dec, tol)?;
            let results = json!({
                "decomposition": dec_json(&dec),
                "c0": dec.c0(),
                "valid": check.valid,
            });
            Ok((results, cycle_trace(&dec)))
        }
        _ => {
            let flow = kernel_flow(k, m);
            let max_len = cfg.max_len.unwrap_or(usize::MAX);
            let out = circulation_to_cycles(&flow, max_len, tol)?;
            let dec = &out.decomposition;
            let results = json!({
                "decomposition": dec_json(dec),
                "c0": dec.c0(),
                "exceeds_max_len": out.exceeds_max_len,
            });
            Ok((results, cycle_trace(dec)))
        }
    }
}

fn cycle_trace<W: Weight>(dec: &cvwalk::markov_graph::CycleDecomposition<Label, W>) -> Trace {
    let mut t = Trace::new(&["cycle", "length", "weight"]);
    for (c, w) in dec.entries() {
        let path: Vec<String> = c.vertices().iter().map(Label::to_string).collect();
        t.push(vec![path.join(" ").into(), c.len().into(), weight_json(w)]);
    }
    t
}

// ------------------------------------------------------------ dirichlet / green on graph files

fn poincare(cfg: &ExperimentConfig) -> Output {
    let k = cfg.req(&cfg.k, "k")?;
    let c = poincare_constant(k)?;
    Ok((json!({ "k": k, "constant": c }), Trace::new(&["k", "constant"])))
}

fn graph_window(cfg: &ExperimentConfig) -> Output {
    match load_graph(cfg)? {
        AnyGraph::Exact(k, m) => window_command(cfg, &k, &m, &|x: &Label| x.to_string()),
        AnyGraph::Float(k, m) => window_command(cfg, &k, &m, &|x: &Label| x.to_string()),
    }
}

fn sector_config(cfg: &ExperimentConfig) -> Result<SectorConfig, CliError> {
    Ok(SectorConfig::new(cfg.req(&cfg.trials, "trials")?, cfg.req(&cfg.seed, "seed")?))
}

fn window_command<V, W>(cfg: &ExperimentConfig, k: &Kernel<V, W>, m: &Measure<V, W>, label: &dyn Fn(&V) -> String) -> Output
where
    V: Ord + Clone + fmt::Debug,
    W: Weight,
{
    match cfg.command {
        Command::DirichletSector => {
            let est = sector_ratio(k, m, &sector_config(cfg)?)?;
            let results = serde_json::to_value(&est).map_err(|e| CliError::new(ErrorCode::Io, e.to_string()))?;
            Ok((results, Trace::new(&["trial", "ratio"])))
        }
        _ => {
            let (m_hat, estimate) = match cfg.m_hat {
                Some(v) => (v, Value::Null),
                None => {
                    let est = sector_ratio(k, m, &sector_config(cfg)?)?;
                    (est.m_hat, serde_json::to_value(&est).unwrap_or(Value::Null))
                }
            };
            let rep = green_comparison(k, m, cfg.req(&cfg.margin, "margin")?, m_hat)?;
            let mut trace = Trace::new(&["x_label", "g", "g0", "m2_g"]);
            for ((x, g), g0) in rep.points.iter().zip(&rep.g_diag).zip(&rep.g0_diag) {
                trace.push(vec![label(x).into(), json!(g), json!(g0), json!(m_hat * m_hat * g)]);
            }
            let results = json!({
                "mode": rep.mode,
                "margin": rep.margin,
                "sector_m": rep.sector_m,
                "sector_estimate": estimate,
                "points": rep.points.len(),
                "holds_i": rep.holds_i,
                "holds_ii": rep.holds_ii,
                "worst_i": rep.worst_i,
                "worst_ii": rep.worst_ii,
            });
            Ok((results, trace))
        }
    }
}

// ------------------------------------------------------------ groups and walks

fn f2(cfg: &ExperimentConfig) -> Output {
    let text = cfg.req(&cfg.arrangement, "arrangement")?;
    let mut arrangement = Vec::new();
    for (pos, item) in cvwalk::groups::split_top_level(&text)? {
        let v: usize = item.trim().parse().map_err(|_| ParseError::new(pos, format!("bad generator index '{item}'")))?;
        arrangement.push(v);
    }
    let g = f2_reduce(&arrangement)?;
    let mut trace = Trace::new(&["inverse_occurrence", "positive_occurrence"]);
    for (i, j) in &g.edges {
        trace.push(vec![json!(i), json!(j)]);
    }
    let mut results = serde_json::to_value(&g).map_err(|e| CliError::new(ErrorCode::Io, e.to_string()))?;
    results["properties_hold"] = json!(g.properties_hold());
    Ok((results, trace))
}

fn group_command<G: Group>(g: &G, cfg: &ExperimentConfig) -> Output
where
    G::Elem: 'static,
{
    let gens = g.parse_gens(&cfg.req(&cfg.gens, "gens")?)?;
    if gens.is_empty() {
        return Err(CliError::config("empty generating sequence"));
    }
    for x in &gens {
        g.validate(x)?;
    }
    let max_support = cfg.max_support.unwrap_or(DEFAULT_MAX_SUPPORT);
    match cfg.command {
        Command::GroupC1Search => {
            let n_max = cfg.req(&cfg.n_max, "n-max")?;
            let out = c1_search(g, &gens, n_max, cfg.budget.unwrap_or(DEFAULT_BUDGET))?;
            if let C1Outcome::BudgetExhausted { n, nodes } = out {
                return Err(CliError::new(
                    ErrorCode::BudgetExhausted,
                    format!("node budget exhausted at n={n} after {nodes} nodes; raise --budget"),
                ));
            }
            let mut results = serde_json::to_value(&out).map_err(|e| CliError::new(ErrorCode::Io, e.to_string()))?;
            if let Some(w) = out.witness() {
                let word: Vec<String> = w.factors(&gens).into_iter().map(|x| g.format(x)).collect();
                results["product"] = json!(word);
                results["c2_holds"] = json!(c2_check(g, &gens).holds);
            }
            Ok((results, Trace::new(&["t", "value"])))
        }
        Command::GroupC2Check => {
            let rep = c2_check(g, &gens);
            let results = json!({
                "holds": rep.holds,
                "free_sum": rep.free_sum.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "torsion_sum": rep.torsion_sum.iter().map(|(v, m)| format!("{v} mod {m}")).collect::<Vec<_>>(),
            });
            Ok((results, Trace::new(&["t", "value"])))
        }
        Command::GroupDist => {
            let x = g.parse_elem(&cfg.req(&cfg.element, "element")?)?;
            g.validate(&x)?;
            let radius = cfg.radius.unwrap_or(DEFAULT_RADIUS);
            let d = word_distance_limited(g, &gens, &x, radius, max_support).map_err(|n| {
                CliError::new(ErrorCode::SupportOverflow, format!("BFS ball exceeded {n} elements; lower --radius"))
            })?;
            let results = json!({
                "element": g.format(&x),
                "radius": radius,
                "distance": d,
                "out_of_radius": d.is_none(),
            });
            Ok((results, Trace::new(&["t", "value"])))
        }
        Command::WalkVolume => {
            let tmax = cfg.req(&cfg.tmax, "tmax")?;
            let ball = WordBall::new_limited(g, &gens, tmax, max_support).ok_or_else(|| {
                CliError::new(ErrorCode::SupportOverflow, format!("ball of radius {tmax} exceeds {max_support} elements"))
            })?;
            let mut acc = 0u64;
            let v: Vec<u64> = (0..=tmax)
                .map(|t| {
                    acc += ball.layers().get(t).map_or(0, |l| l.len() as u64);
                    acc
                })
                .collect();
            let mut trace = Trace::new(&["t", "value"]);
            for (t, n) in v.iter().enumerate() {
                trace.push(vec![json!(t), json!(n)]);
            }
            Ok((json!({ "volume": v }), trace))
        }
        Command::WalkEvolve | Command::WalkCvFit | Command::WalkEscape => walk_exact(g, &gens, cfg, max_support),
        Command::WalkSpeed => {
            let t = cfg.req(&cfg.t, "t")?;
            let oracle = match cfg.metric.unwrap_or(MetricKind::Table) {
                MetricKind::Table => {
                    let radius = cfg.radius.unwrap_or(t);
                    DistanceOracle::table_limited(g, &gens, radius, max_support).map_err(|_| {
                        CliError::new(
                            ErrorCode::SupportOverflow,
                            format!(
                                "distance table of radius {radius} exceeds {max_support} elements; lower --radius or use --metric norm"
                            ),
                        )
                    })?
                }
                MetricKind::Norm => DistanceOracle::standard(),
            };
            let est = speed_estimate(g, &gens, t, cfg.req(&cfg.paths, "paths")?, cfg.req(&cfg.seed, "seed")?, &oracle)?;
            let mut trace = Trace::new(&["t", "value"]);
            for (s, v) in &est.trace {
                trace.push(vec![json!(s), json!(v)]);
            }
            Ok((serde_json::to_value(&est).map_err(|e| CliError::new(ErrorCode::Io, e.to_string()))?, trace))
        }
        Command::WalkEntropy => {
            let est = entropy_estimate(
                g,
                &gens,
                cfg.req(&cfg.t, "t")?,
                cfg.req(&cfg.paths, "paths")?,
                cfg.req(&cfg.seed, "seed")?,
                max_support,
            )?;
            let mut trace = Trace::new(&["t", "value"]);
            for (s, v) in &est.trace {
                trace.push(vec![json!(s), json!(v)]);
            }
            Ok((serde_json::to_value(&est).map_err(|e| CliError::new(ErrorCode::Io, e.to_string()))?, trace))
        }
        Command::DirichletSector | Command::GreenCompare => {
            let window = CayleyWindow::ball(g.clone(), gens.clone(), cfg.req(&cfg.radius, "radius")?);
            let k = window.kernel()?;
            window_command(cfg, &k, &Measure::counting(), &|x: &G::Elem| g.format(x))
        }
        other => Err(CliError::config(format!("'{}' does not take a group", other.name()))),
    }
}

fn walk_exact<G: Group>(g: &G, gens: &[G::Elem], cfg: &ExperimentConfig, max_support: usize) -> Output {
    let tmax = cfg.req(&cfg.tmax, "tmax")?;
    let mu = step_measure(g, gens)?;
    let dists = powers(g, &mu, tmax, cfg.prune, Some(max_support))?;
    let id = g.identity();
    match cfg.command {
        Command::WalkEvolve => {
            let last = dists.last().expect("t = 0 present");
            let mut trace = Trace::new(&["t", "support", "p_identity"]);
            for d in &dists {
                trace.push(vec![json!(d.t()), json!(d.support_len()), json!(d.prob_f64(&id))]);
            }
            let fin: BTreeMap<String, String> =
                last.iter().map(|(x, _)| (g.format(x), format_rational(&last.prob(x)))).collect();
            let results = json!({
                "t_max": tmax,
                "approximate": last.is_approximate(),
                "support": last.support_len(),
                "distribution": fin,
            });
            Ok((results, trace))
        }
        Command::WalkCvFit => {
            let oracle = DistanceOracle::table(g, gens, tmax);
            let rep = fit_cv_constant(g, &dists, &oracle, &|_| 1.0, cfg.d_exp.unwrap_or(0.0))?;
            let mut trace = Trace::new(&["t", "x_label", "mu", "bound", "margin"]);
            for m in &rep.margins {
                trace.push(vec![json!(m.t), json!(m.x_label), json!(m.mu), json!(m.bound), json!(m.margin)]);
            }
            let results = json!({
                "c_star": rep.c_star,
                "d_exp": rep.d_exp,
                "t_max": rep.t_max,
                "points": rep.points,
                "violated": rep.violated,
                "monotone_check": rep.monotone_check,
                "approximate": rep.approximate,
                "lower_bound_metric": rep.lower_bound_metric,
            });
            Ok((results, trace))
        }
        _ => {
            let alpha = cfg.req(&cfg.alpha, "alpha")?;
            let oracle = DistanceOracle::table(g, gens, tmax);
            let mut trace = Trace::new(&["t", "value"]);
            let mut exact = Vec::new();
            for d in dists.iter().filter(|d| d.t() >= 1) {
                let p = escape_probability(g, d, &oracle, alpha)?;
                trace.push(vec![json!(d.t()), json!(p.to_f64())]);
                exact.push(format_rational(&p));
            }
            let approx = dists.iter().any(SparseDistribution::is_approximate);
            Ok((json!({ "alpha": alpha, "t_max": tmax, "exact": exact, "approximate": approx }), trace))
        }
    }
}
