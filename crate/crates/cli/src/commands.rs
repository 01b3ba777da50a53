use std::time::Instant;

use clap::ValueEnum;
use log::info;
use rcd_core::gsbm::AttachLaw;
use rcd_core::{
    auto_lambda, check_block_form, detect_communities, generate, load_edge_list, misclassification_matched,
    misclassification_pairs, spectral_cluster, ClusterAssignment, EdgeListOptions, EigenRule, Graph, GroundTruth,
    GsbmSpec, LaplacianVariant, Mode, OutlierKind, OutlierSpec, Scope, SolverConfig, SpectralConfig, SpectralSource,
};

use crate::args::{
    AxisArg, BaselineArgs, EigenArg, InstanceArgs, LaplacianArg, MetricArg, ModeArg, OutlierArg, RealArgs, SolverArgs,
    SweepArgs, SynthArgs,
};
use crate::error::CliError;
use crate::pool::{default_threads, run_ordered};
use crate::table::{num, Table};

/// Block-form tolerance used for the diagnostic columns.
const BLOCK_TOL: f64 = 1e-3;

/// Flag spelling of a value-enum argument.
fn flag_name(v: impl ValueEnum) -> String {
    v.to_possible_value().map_or_else(String::new, |p| p.get_name().to_owned())
}

#[derive(Clone, Debug)]
enum Cell {
    Num(f64),
    Int(u64),
    Flag(bool),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => num(*x),
            Cell::Int(k) => k.to_string(),
            Cell::Flag(b) => (*b as u8).to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Flag(b) => Some(*b as u8 as f64),
            _ => None,
        }
    }
}

type Row = Vec<(&'static str, Cell)>;

fn fill(table: &mut Table, rows: &[Row]) {
    if let Some(first) = rows.first() {
        table.columns(&first.iter().map(|c| c.0).collect::<Vec<_>>());
    }
    for r in rows {
        table.push(r.iter().map(|c| c.1.render()).collect());
    }
}

/// Column means of numeric and flag cells; the first column is labelled
/// `mean`, other text and integer columns are left empty.
fn mean_row(rows: &[Row]) -> Row {
    let mut out: Row = rows[0].iter().map(|(k, _)| (*k, Cell::Text(String::new()))).collect();
    out[0].1 = Cell::Text("mean".into());
    for (c, slot) in out.iter_mut().enumerate().skip(1) {
        let vals: Option<Vec<f64>> = rows.iter().map(|r| r[c].1.as_f64()).collect();
        if let Some(v) = vals {
            slot.1 = Cell::Num(v.iter().sum::<f64>() / v.len() as f64);
        }
    }
    out
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn instance_spec(inst: &InstanceArgs, p: f64) -> Result<GsbmSpec, CliError> {
    if inst.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    let kind = match (inst.m, inst.outliers) {
        (0, _) => OutlierKind::None,
        (_, OutlierArg::Mixed) => OutlierKind::Mixed { p_w: inst.p_w },
        (_, OutlierArg::Clique) => OutlierKind::DenseClique { p_w: inst.p_w },
        (_, OutlierArg::Random) => OutlierKind::RandomAttach { law: AttachLaw::Uniform { lo: 0.0, hi: 1.0 } },
    };
    let spec = GsbmSpec::two_block(inst.n1, inst.n2, p, inst.q, OutlierSpec { m: inst.m, kind });
    spec.validate().map_err(|e| usage(e.to_string()))?;
    Ok(spec)
}

fn solver_config(s: &SolverArgs, lambda: f64, seed: u64) -> Result<SolverConfig<f64>, CliError> {
    let cfg = SolverConfig {
        lambda,
        alpha: s.alpha,
        rho: s.rho,
        iterations: s.iters,
        replicates: s.replicates,
        seed,
        ..SolverConfig::default()
    };
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    if s.alpha < 0.0 {
        return Err(usage("--alpha must be non-negative"));
    }
    Ok(cfg)
}

/// Checks the flags that do not depend on the instance, before any work.
fn check_solver_flags(s: &SolverArgs) -> Result<(), CliError> {
    solver_config(s, s.lambda.unwrap_or(0.5), 0).map(|_| ())
}

fn echo_solver(t: &mut Table, s: &SolverArgs) {
    t.meta("lambda", s.lambda.map_or("auto".to_string(), num));
    t.meta("alpha", num(s.alpha));
    t.meta("rho", num(s.rho));
    t.meta("iters", s.iters);
    t.meta("replicates", s.replicates);
    t.meta("metric", flag_name(s.metric));
}

fn echo_instance(t: &mut Table, inst: &InstanceArgs) {
    t.meta("seed", inst.seed);
    t.meta("trials", inst.trials);
    t.meta(
        "instance",
        format!(
            "n1={} n2={} p={} q={} m={} outliers={} p_w={}",
            inst.n1,
            inst.n2,
            inst.p,
            inst.q,
            inst.m,
            if inst.m == 0 { "none".to_owned() } else { flag_name(inst.outliers) },
            inst.p_w
        ),
    );
}

fn variant(l: LaplacianArg) -> LaplacianVariant {
    match l {
        LaplacianArg::Unnormalized => LaplacianVariant::Unnormalized,
        LaplacianArg::SymNormalized => LaplacianVariant::SymNormalized,
        LaplacianArg::RandomWalk => LaplacianVariant::RandomWalkSymmetrized,
        LaplacianArg::NormalizedAdjacency => LaplacianVariant::NormalizedAdjacency,
    }
}

fn scores(
    row: &mut Row,
    prefix: Prefix,
    metric: MetricArg,
    t: &GroundTruth,
    a: &ClusterAssignment,
) -> Result<(), CliError> {
    if metric.pairs() {
        row.push((prefix.pairs, Cell::Num(misclassification_pairs(t, a)?)));
    }
    if metric.matched() {
        row.push((prefix.matched, Cell::Num(misclassification_matched(t, a, Scope::Inliers)?)));
    }
    Ok(())
}

#[derive(Clone, Copy)]
struct Prefix {
    pairs: &'static str,
    matched: &'static str,
}

const SDP: Prefix = Prefix { pairs: "sdp_pairs", matched: "sdp_matched" };
const SPECTRAL: Prefix = Prefix { pairs: "spectral_pairs", matched: "spectral_matched" };

/// Solves one synthetic instance and returns the SDP columns.
fn sdp_trial(g: &Graph, t: &GroundTruth, s: &SolverArgs, seed: u64) -> Result<Row, CliError> {
    let lambda = match s.lambda {
        Some(l) => l,
        None => auto_lambda(g)?,
    };
    let cfg = solver_config(s, lambda, seed)?;
    let start = Instant::now();
    let (a, sol) = detect_communities(g, t.r(), &cfg, Mode::Plain)?;
    let secs = start.elapsed().as_secs_f64();
    let block = check_block_form(&sol.x_hat, t, BLOCK_TOL)?;
    let mut row: Row = vec![("lambda_used", Cell::Num(lambda))];
    scores(&mut row, SDP, s.metric, t, &a)?;
    row.push(("residual", Cell::Num(sol.final_residual)));
    row.push(("block_form", Cell::Flag(block.pass)));
    row.push(("block_deficit", Cell::Num(block.max_in_block_deficit)));
    row.push(("block_excess", Cell::Num(block.max_cross_block_excess)));
    if s.timing {
        row.push(("runtime_s", Cell::Num(secs)));
    }
    Ok(row)
}

pub fn synth(args: &SynthArgs) -> Result<Table, CliError> {
    let inst = &args.instance;
    let spec = instance_spec(inst, inst.p)?;
    check_solver_flags(&args.solver)?;
    let lap = variant(args.laplacian);
    let rows = run_ordered(inst.trials, default_threads(inst.threads), |k| -> Result<Row, CliError> {
        let seed = inst.seed.wrapping_add(k as u64);
        let (g, t) = generate(&spec, seed)?;
        let mut row: Row = vec![("trial", Cell::Int(k as u64)), ("seed", Cell::Int(seed))];
        row.extend(sdp_trial(&g, &t, &args.solver, seed)?);
        let r = t.r();
        let cfg = SpectralConfig {
            replicates: args.solver.replicates,
            ..SpectralConfig::new(SpectralSource::Laplacian(lap), r)
        };
        let a = spectral_cluster::<f64>(&g, &cfg, seed)?;
        scores(&mut row, SPECTRAL, args.solver.metric, &t, &a)?;
        if args.solver.metric.matched() && t.n_outliers() > 0 {
            // one extra cluster for the outliers, scored over every node
            let cfg = SpectralConfig { k: r + 1, ..cfg };
            let a = spectral_cluster::<f64>(&g, &cfg, seed)?;
            row.push(("spectral_all_matched", Cell::Num(misclassification_matched(&t, &a, Scope::All)?)));
        }
        info!("trial {k} done");
        Ok(row)
    })?;
    let mut table = Table::new("synth");
    echo_instance(&mut table, inst);
    echo_solver(&mut table, &args.solver);
    table.meta("spectral", lap.name());
    table.meta("block_tol", num(BLOCK_TOL));
    let mut all = rows;
    all.push(mean_row(&all));
    fill(&mut table, &all);
    Ok(table)
}

fn sweep_values(from: f64, to: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step > 0.0) || !from.is_finite() || !to.is_finite() || to < from {
        return Err(usage(format!("empty sweep range {from}..{to} step {step}")));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    // index-based to avoid accumulating round-off; 12 digits keeps values tidy
    Ok((0..count).map(|i| ((from + i as f64 * step) * 1e12).round() / 1e12).collect())
}

pub fn sweep(args: &SweepArgs) -> Result<Table, CliError> {
    let inst = &args.instance;
    let values = sweep_values(args.from, args.to, args.step)?;
    check_solver_flags(&args.solver)?;
    let specs: Vec<GsbmSpec> = match args.axis {
        AxisArg::Lambda => {
            if let Some(v) = values.iter().find(|v| !(**v > 0.0 && **v < 1.0)) {
                return Err(usage(format!("lambda {v} outside (0, 1)")));
            }
            vec![instance_spec(inst, inst.p)?]
        }
        AxisArg::P => values.iter().map(|&p| instance_spec(inst, p)).collect::<Result<_, _>>()?,
    };
    let jobs = values.len() * inst.trials;
    let rows = run_ordered(jobs, default_threads(inst.threads), |j| -> Result<Row, CliError> {
        let (vi, k) = (j / inst.trials, j % inst.trials);
        let seed = inst.seed.wrapping_add(k as u64);
        let spec = &specs[if args.axis == AxisArg::P { vi } else { 0 }];
        let (g, t) = generate(spec, seed)?;
        let mut solver = args.solver.clone();
        if args.axis == AxisArg::Lambda {
            solver.lambda = Some(values[vi]);
        }
        let mut row: Row =
            vec![("value", Cell::Num(values[vi])), ("trial", Cell::Int(k as u64)), ("seed", Cell::Int(seed))];
        row.extend(sdp_trial(&g, &t, &solver, seed)?);
        Ok(row)
    })?;
    let mut table = Table::new("sweep");
    table.meta("axis", flag_name(args.axis));
    table.meta("values", values.iter().map(|v| num(*v)).collect::<Vec<_>>().join(" "));
    echo_instance(&mut table, inst);
    echo_solver(&mut table, &args.solver);
    table.meta("block_tol", num(BLOCK_TOL));
    fill(&mut table, &rows);
    Ok(table)
}

pub fn real(args: &RealArgs) -> Result<Table, CliError> {
    if args.r == 0 {
        return Err(usage("--r must be at least 1"));
    }
    check_solver_flags(&args.solver)?;
    let opts = EdgeListOptions { largest_component: !args.all_components, labels_path: args.labels.clone() };
    let loaded = load_edge_list(&args.edges, &opts).map_err(|e| CliError::Runtime(e.to_string()))?;
    let g = &loaded.graph;
    if g.n_nodes() < args.r {
        return Err(usage(format!("--r {} exceeds the {} nodes kept", args.r, g.n_nodes())));
    }
    let (mode, lambda) = match args.mode {
        ModeArg::DegreeCorrected => (Mode::DegreeCorrected, None),
        ModeArg::Plain => (
            Mode::Plain,
            Some(match args.solver.lambda {
                Some(l) => l,
                None => auto_lambda(g)?,
            }),
        ),
    };
    let cfg = solver_config(&args.solver, lambda.unwrap_or(0.5), args.seed)?;
    let start = Instant::now();
    let (a, sol) = detect_communities(g, args.r, &cfg, mode)?;
    let secs = start.elapsed().as_secs_f64();
    if let Some(p) = &args.predictions {
        rcd_core::io::write_labels(p, &loaded.node_ids, a.labels()).map_err(|e| CliError::Runtime(e.to_string()))?;
    }

    let mut row: Row = vec![
        ("nodes", Cell::Int(g.n_nodes() as u64)),
        ("edges", Cell::Int(g.edge_count() as u64)),
        ("mode", Cell::Text(flag_name(args.mode))),
        ("lambda_used", Cell::Text(lambda.map_or(String::new(), num))),
        ("residual", Cell::Num(sol.final_residual)),
    ];
    if let Some(t) = &loaded.truth {
        let m = misclassification_matched(t, &a, Scope::Inliers)?;
        row.push(("mismatched", Cell::Int((m * t.n_inliers() as f64).round() as u64)));
        row.push(("labelled", Cell::Int(t.n_inliers() as u64)));
        scores(&mut row, SDP, args.solver.metric, t, &a)?;
    }
    if args.solver.timing {
        row.push(("runtime_s", Cell::Num(secs)));
    }
    let mut table = Table::new("real");
    table.meta("edges", args.edges.display());
    if let Some(l) = &args.labels {
        table.meta("labels", l.display());
    }
    table.meta("seed", args.seed);
    table.meta("r", args.r);
    table.meta("largest_component", !args.all_components);
    echo_solver(&mut table, &args.solver);
    fill(&mut table, &[row]);
    Ok(table)
}

pub fn baseline(args: &BaselineArgs) -> Result<Table, CliError> {
    let inst = &args.instance;
    let spec = instance_spec(inst, inst.p)?;
    if args.replicates == 0 {
        return Err(usage("--replicates must be at least 1"));
    }
    let k = args.k.unwrap_or(spec.r());
    if k == 0 || k > spec.n_total() {
        return Err(usage(format!("--k {k} must lie in 1..={}", spec.n_total())));
    }
    let source =
        if args.adjacency { SpectralSource::Adjacency } else { SpectralSource::Laplacian(variant(args.laplacian)) };
    let eigen_rule = match args.eigen {
        EigenArg::LargestAbs => EigenRule::LargestAbs,
        EigenArg::Smallest => EigenRule::Smallest,
    };
    let cfg = SpectralConfig { source, k, eigen_rule, replicates: args.replicates };
    let rows = run_ordered(inst.trials, default_threads(inst.threads), |t| -> Result<Row, CliError> {
        let seed = inst.seed.wrapping_add(t as u64);
        let (g, truth) = generate(&spec, seed)?;
        let a = spectral_cluster::<f64>(&g, &cfg, seed)?;
        let mut row: Row = vec![("trial", Cell::Int(t as u64)), ("seed", Cell::Int(seed))];
        scores(&mut row, SPECTRAL, args.metric, &truth, &a)?;
        if args.metric.matched() {
            row.push(("spectral_all_matched", Cell::Num(misclassification_matched(&truth, &a, Scope::All)?)));
        }
        Ok(row)
    })?;
    let mut table = Table::new("baseline");
    echo_instance(&mut table, inst);
    table.meta(
        "spectral",
        match source {
            SpectralSource::Adjacency => "adjacency",
            SpectralSource::Laplacian(v) => v.name(),
        },
    );
    table.meta("k", k);
    table.meta("eigen", flag_name(args.eigen));
    table.meta("replicates", args.replicates);
    let mut all = rows;
    all.push(mean_row(&all));
    fill(&mut table, &all);
    Ok(table)
}
