use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use rigd_core::certificate::{verify_certificate_exact_with, verify_certificate_with, CertReport, CertTolerances};
use rigd_core::instances::{make_huber, make_quadratic, GradientOracle, Oracle, Orientation};
use rigd_core::pep::{compare_1d_2d, orthogonality_diagnostic, search_one_step, Criterion, SearchConfig, SearchResult};
use rigd_core::rates::{self, Regime};
use rigd_core::simulator::{metrics, run, RandomOracle};
use rigd_core::stepsize::{approx_optimal_stepsize, optimal_stepsize};
use rigd_core::{certificate, Bound};

use crate::table::{emit, Cell, Table};
use crate::{
    CertifyArgs, CriterionArg, HMaxPolicy, HmaxArgs, HoptArgs, InstanceArg, OracleArg, RatesArgs, SearchArgs,
    SimulateArgs,
};

/// Relative gap allowed between adjacent branch formulas at a regime boundary.
const CONTINUITY_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] rigd_core::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}

/// A failed check, reported on stderr as part of a JSON list.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub check: String,
    pub detail: serde_json::Value,
}

pub type Outcome = Result<Vec<Failure>, CliError>;

fn failure(check: &str, detail: serde_json::Value) -> Failure {
    Failure { check: check.to_string(), detail }
}

fn bound_cell(b: Bound) -> Cell {
    Cell::Num(b.value_or_inf())
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn branch_gap(h: f64, delta: f64, lo: Regime, hi: Regime, ns: &[u32]) -> Result<f64, CliError> {
    let mut gap = rel(
        rates::branch_rate_to_f1(lo, h, delta)?.value_or_inf(),
        rates::branch_rate_to_f1(hi, h, delta)?.value_or_inf(),
    );
    gap = gap.max(rel(rates::branch_rate_to_fstar(lo, h, delta)?, rates::branch_rate_to_fstar(hi, h, delta)?));
    for &n in ns {
        gap = gap.max(rel(rates::branch_rate_n_steps(lo, h, delta, n)?, rates::branch_rate_n_steps(hi, h, delta, n)?));
    }
    Ok(gap)
}

/// Name of a regime boundary with the regimes on either side.
type Boundary = (&'static str, Regime, Regime);

pub fn rates(args: &RatesArgs) -> Outcome {
    if args.points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    if args.n.0.is_empty() || args.delta.0.is_empty() {
        return Err(CliError::Usage("--delta and --n must be non-empty".into()));
    }
    let ns = &args.n.0;
    let mut columns = vec!["delta", "h", "regime", "C", "C_tilde", "lambda_tilde"]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>();
    columns.extend(ns.iter().map(|n| format!("C_tilde_N{n}")));
    columns.extend(ns.iter().map(|n| format!("lower_bound_N{n}")));
    columns.extend(["boundary".to_string(), "branch_gap".to_string()]);
    let mut table = Table::new(columns);
    let mut failures = Vec::new();

    for &delta in &args.delta.0 {
        let b = rates::regime_boundaries(delta)?;
        let hi = match args.h_max_policy {
            HMaxPolicy::Fraction => args.h_max * b.h_max,
            HMaxPolicy::Absolute => args.h_max.min(b.h_max),
        };
        if !(args.h_min >= 0.0 && args.h_min < hi) {
            return Err(CliError::Usage(format!("empty stepsize grid [{}, {hi}] for delta = {delta}", args.h_min)));
        }
        let mut grid: Vec<(f64, Option<Boundary>)> = (0..args.points)
            .map(|i| {
                let h = if i + 1 == args.points {
                    hi
                } else {
                    args.h_min + (hi - args.h_min) * i as f64 / (args.points - 1) as f64
                };
                (h, None)
            })
            .collect();
        if delta > 0.0 {
            for (name, h, lo, up) in [
                ("h_LI", b.left_intermediate, Regime::Left, Regime::Intermediate),
                ("h_IR", b.intermediate_right, Regime::Intermediate, Regime::Right),
            ] {
                if h >= args.h_min && h <= hi {
                    // the boundary row replaces a grid point within rounding of it
                    grid.retain(|(g, tag)| tag.is_some() || rel(*g, h) > 1e-12);
                    grid.push((h, Some((name, lo, up))));
                }
            }
        }
        grid.sort_by(|x, y| x.0.total_cmp(&y.0));

        for (h, boundary) in grid {
            let regime = rates::classify_regime(h, delta)?;
            let lambda = (delta > 0.0 && regime == Regime::Intermediate)
                .then(|| rates::lambda_tilde(h, delta))
                .transpose()?;
            let mut row = vec![
                Cell::Num(delta),
                Cell::Num(h),
                Cell::from(regime.as_str()),
                bound_cell(rates::rate_one_step_to_f1(h, delta)?),
                Cell::Num(rates::rate_one_step_to_fstar(h, delta)?),
                Cell::from(lambda),
            ];
            for &n in ns {
                row.push(Cell::Num(rates::rate_n_steps(h, delta, n)?));
            }
            for &n in ns {
                row.push(Cell::Num(rates::lower_bound_n(h, delta, n)?));
            }
            match boundary {
                Some((name, lo, up)) => {
                    let gap = branch_gap(h, delta, lo, up, ns)?;
                    if gap > CONTINUITY_TOL {
                        failures.push(failure("continuity", json!({ "delta": delta, "boundary": name, "gap": gap })));
                    }
                    row.push(Cell::from(name));
                    row.push(Cell::Num(gap));
                }
                None => {
                    row.push(Cell::Empty);
                    row.push(Cell::Empty);
                }
            }
            table.push(row);
        }
    }
    emit(args.output.out.as_deref(), &table.render(args.output.format, &json!({ "command": "rates", "args": args })))?;
    Ok(failures)
}

fn cert_row(table: &mut Table, r: &CertReport) {
    table.push(vec![
        Cell::Num(r.delta),
        Cell::Num(r.h),
        Cell::from(r.regime.map(|g| g.as_str()).unwrap_or("exact")),
        Cell::Num(r.lambda),
        Cell::Num(r.b),
        Cell::Num(r.rho),
        Cell::Num(r.min_eigenvalue),
        Cell::from(r.rank_one_ratio),
        Cell::from(r.split_residual),
        Cell::Num(r.rate_gap),
        Cell::from(r.passed()),
    ]);
}

pub fn certify(args: &CertifyArgs) -> Outcome {
    if args.grid == 0 {
        return Err(CliError::Usage("--grid must be at least 1".into()));
    }
    let tol = CertTolerances { psd: args.psd_tol, rate_gap: args.rate_tol, ..CertTolerances::default() };
    let mut table = Table::new([
        "delta",
        "h",
        "regime",
        "lambda",
        "b",
        "rho",
        "min_eigenvalue",
        "rank_one_ratio",
        "split_residual",
        "rate_gap",
        "passed",
    ]);
    let mut failures = Vec::new();
    for &delta in &args.delta.0 {
        let h_max = rates::h_max(delta);
        for k in 1..=args.grid {
            let h = h_max * k as f64 / (args.grid + 1) as f64;
            let report = if delta == 0.0 {
                verify_certificate_exact_with(h, &tol)?
            } else {
                let cert = certificate::certificate_params(h, delta)?;
                verify_certificate_with(h, delta, &cert, &tol)?
            };
            if !report.passed() {
                let reasons: Vec<String> = report.failures.iter().map(ToString::to_string).collect();
                failures.push(failure("certificate", json!({ "delta": delta, "h": h, "reasons": reasons })));
            }
            cert_row(&mut table, &report);
        }
    }
    emit(args.output.out.as_deref(), &table.render(args.output.format, &json!({ "command": "certify", "args": args })))?;
    Ok(failures)
}

pub fn simulate(args: &SimulateArgs) -> Outcome {
    eprintln!("seed = {}", args.seed);
    let inst = match args.instance {
        InstanceArg::Huber => make_huber(args.delta, args.h, args.n, args.l)?,
        InstanceArg::Quadratic => make_quadratic(args.l)?,
    }
    .with_dimension(args.dim)?;
    let kind = args.oracle.unwrap_or(match args.instance {
        InstanceArg::Huber => OracleArg::Shrink,
        InstanceArg::Quadratic => OracleArg::Grow,
    });
    let mut oracle: Box<dyn GradientOracle> = match kind {
        OracleArg::Exact => Box::new(Oracle::Exact),
        OracleArg::Shrink => Box::new(Oracle::scaled(1.0 - args.delta, args.delta)?),
        OracleArg::Grow => Box::new(Oracle::scaled(1.0 + args.delta, args.delta)?),
        OracleArg::Orthogonal => Box::new(Oracle::orthogonal(args.delta, Orientation::Positive)?),
        OracleArg::Random => Box::new(RandomOracle::new(args.delta, args.seed)?),
    };
    let trace = run(&inst, oracle.as_mut(), args.h, args.delta, args.n as usize)?;
    let m = metrics(&trace);

    let config = json!({ "command": "simulate", "args": args, "oracle": kind, "instance": inst });
    let mut csv = format!("# config: {config}\n").into_bytes();
    trace.write_csv(&mut csv)?;
    emit(args.out.as_deref(), &String::from_utf8(csv).expect("CSV is UTF-8"))?;

    let bound = (args.h <= rates::h_max(args.delta)).then(|| rates::rate_n_steps(args.h, args.delta, args.n)).transpose()?;
    let summary = json!({ "metrics": m, "rate_n_steps": bound });
    if args.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    let mut failures = Vec::new();
    if let Some(bound) = bound {
        if m.ratio_min > bound + 1e-9 {
            failures.push(failure("upper_bound", json!({ "ratio_min": m.ratio_min, "bound": bound })));
        }
    }
    Ok(failures)
}

fn describe(r: &SearchResult) -> Result<serde_json::Value, CliError> {
    let diag = orthogonality_diagnostic(&r.candidate)?;
    Ok(json!({
        "value": r.value,
        "bound": r.bound,
        "value_over_bound": r.value / r.bound,
        "dimension": r.dimension,
        "starts": r.starts,
        "outer": r.outer,
        "orthogonality": diag,
        "candidate": r.candidate,
    }))
}

fn check_search(r: &SearchResult, failures: &mut Vec<Failure>) -> Result<(), CliError> {
    if r.value > r.bound + 1e-6 {
        failures.push(failure("bound", json!({ "dimension": r.dimension, "value": r.value, "bound": r.bound })));
    }
    if !r.candidate.validate(rigd_core::pep::FEASIBILITY_TOL)? {
        failures.push(failure("feasibility", json!({ "dimension": r.dimension })));
    }
    Ok(())
}

pub fn search(args: &SearchArgs) -> Outcome {
    eprintln!("seed = {}", args.seed);
    let criterion = match args.criterion {
        CriterionArg::ToFstar => Criterion::ToFstar,
        CriterionArg::ToF1 => Criterion::ToF1,
    };
    let mut failures = Vec::new();
    let result = if args.compare {
        if criterion != Criterion::ToFstar {
            return Err(CliError::Usage("--compare is only available for --criterion to-fstar".into()));
        }
        let cmp = compare_1d_2d(args.h, args.delta, args.budget, args.seed)?;
        check_search(&cmp.best_1d, &mut failures)?;
        check_search(&cmp.best_2d, &mut failures)?;
        if cmp.best_2d.value < cmp.best_1d.value - 1e-12 {
            failures.push(failure("dimension_monotonicity", json!({ "best_1d": cmp.best_1d.value, "best_2d": cmp.best_2d.value })));
        }
        json!({ "best_1d": describe(&cmp.best_1d)?, "best_2d": describe(&cmp.best_2d)? })
    } else {
        let cfg = SearchConfig::new(criterion, args.dim, args.budget, args.seed);
        let r = search_one_step(args.h, args.delta, &cfg)?;
        check_search(&r, &mut failures)?;
        describe(&r)?
    };
    let doc = json!({ "config": { "command": "search", "args": args }, "result": result });
    let mut text = serde_json::to_string_pretty(&doc).expect("search output serializes");
    text.push('\n');
    emit(args.out.as_deref(), &text)?;
    Ok(failures)
}

pub fn hopt(args: &HoptArgs) -> Outcome {
    let mut table =
        Table::new(["delta", "N", "h_LI", "h_IR", "h_opt", "rate_opt", "rate_at_h_IR", "ratio", "h_opt_in_intermediate"]);
    let mut failures = Vec::new();
    for &delta in &args.delta.0 {
        let b = rates::regime_boundaries(delta)?;
        let h_ir = approx_optimal_stepsize(delta)?;
        for &n in &args.n.0 {
            let opt = optimal_stepsize(delta, n)?;
            let at_ir = rates::rate_n_steps(h_ir, delta, n)?;
            let ratio = at_ir / opt.rate;
            let inside = opt.h >= b.left_intermediate && opt.h <= b.intermediate_right;
            if !inside || ratio > args.tolerance {
                failures.push(failure("h_opt", json!({ "delta": delta, "n": n, "h_opt": opt.h, "ratio": ratio })));
            }
            table.push(vec![
                Cell::Num(delta),
                Cell::from(n),
                Cell::Num(b.left_intermediate),
                Cell::Num(h_ir),
                Cell::Num(opt.h),
                Cell::Num(opt.rate),
                Cell::Num(at_ir),
                Cell::Num(ratio),
                Cell::from(inside),
            ]);
        }
    }
    emit(args.output.out.as_deref(), &table.render(args.output.format, &json!({ "command": "hopt", "args": args })))?;
    Ok(failures)
}

pub fn hmax(args: &HmaxArgs) -> Outcome {
    let mut table = Table::new(["delta", "ours", "prior", "ratio"]);
    let mut failures = Vec::new();
    for &delta in &args.delta_grid.0 {
        let c = rates::compare_h_max(delta)?;
        if c.ours < c.prior || (delta > 0.0 && c.ours <= c.prior) {
            failures.push(failure("dominance", json!({ "delta": delta, "ours": c.ours, "prior": c.prior })));
        }
        table.push(vec![Cell::Num(delta), Cell::Num(c.ours), Cell::Num(c.prior), Cell::Num(c.ratio)]);
    }
    emit(args.output.out.as_deref(), &table.render(args.output.format, &json!({ "command": "hmax", "args": args })))?;
    Ok(failures)
}
