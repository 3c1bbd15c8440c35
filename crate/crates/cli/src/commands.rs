use std::path::Path;

use biloc_correlators::{
    check_constraints_tol, json::DecompositionJson, table_decomposition, tradeoff_correlation, TableId, TableSpec,
    TradeoffModel, CONSTRAINT_TOL,
};
use biloc_feasibility::{
    analyze, local_visibility, visibility_threshold, RelaxConfig, SearchConfig, ThresholdConfig, Verdict,
};
use biloc_inequalities::{bilocal_test, chsh_conditioned, ij, legacy_from_ij, local_test, tradeoff_front};
use biloc_quantum::{
    apply_detection_model, closed_form, closed_form_exact, generate_correlation, nonmaxent_setup,
    setup::QuantumSetup, source_state, BobMeasurement, ClosedForm, NoClickStrategy,
};
use biloc_scenario::{ac_product_check, io, is_non_signaling, mix, Correlation, Rational, ScenarioKind};
use biloc_simulators::{estimate_visibility, simulate, Protocol, SimConfig};
use biloc_trilocality::{decide_trilocality, example_quantum_fourpartite, quantum_fourpartite_from_states};
use serde_json::json;

use crate::export::{detection_rows, export_slice, parse_grid};
use crate::{fmt17, Cli, CliError, Command, Format, Output, Report};

pub(crate) fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Gen { setup, setup_file, v, eta, xi, theta1, theta2, format } => {
            let c = match (setup, setup_file) {
                (_, Some(path)) => QuantumSetup::from_json_str(&read_text(path)?)?.correlation()?,
                (Some(name), None) => gen_named(name, v, *eta, *xi, *theta1, *theta2)?,
                (None, None) => return Err(CliError::Domain("gen needs --setup or --setup-file".into())),
            };
            Ok(match format {
                Format::Json => Report::json(serde_json::to_value(&c)?),
                Format::Csv => csv_report(
                    &["x", "y", "z", "a", "b", "c", "p"],
                    c.p().iter().enumerate().map(|(k, &p)| {
                        let mut r: Vec<String> = c.scenario().unindex(k).iter().map(usize::to_string).collect();
                        r.push(fmt17(p));
                        r
                    }),
                ),
            })
        }
        Command::Eval { input } => eval(&read_correlation(input)?),
        Command::Search { input, restarts, rounds, relax_depth, max_nodes } => {
            let target = read_correlation(input)?;
            let mut search = SearchConfig { restarts: *restarts, max_rounds: *rounds, seed: cli.seed, ..Default::default() };
            if let Some(t) = cli.tol {
                search.tol = t;
            }
            let relax = RelaxConfig { depth: *relax_depth, max_nodes: *max_nodes };
            let cert = analyze(&target, &search, &relax)?;
            Ok(Report { inconclusive: cert.verdict == Verdict::Inconclusive, output: Output::Json(serde_json::to_value(&cert)?) })
        }
        Command::Certify { table, i, j, k, l, m, eta, v, xi, model } => {
            certify(table, [*i, *j, *k, *l, *m, *eta, *v, *xi], model, cli.tol.unwrap_or(CONSTRAINT_TOL))
        }
        Command::Threshold { family, eta, v, xi, width, restarts, rounds, relax_depth, lo, hi } => {
            let family = family.trim().to_ascii_lowercase();
            let mut cfg = ThresholdConfig { width: *width, ..Default::default() };
            cfg.search.restarts = *restarts;
            cfg.search.max_rounds = *rounds;
            cfg.search.seed = cli.seed;
            if let Some(t) = cli.tol {
                cfg.search.tol = t;
            }
            cfg.relax.depth = relax_depth.unwrap_or(if family == "detection-eta" { 24 } else { 2 });
            if family == "detection-eta" {
                cfg.lo = 0.5;
            }
            cfg.lo = lo.unwrap_or(cfg.lo);
            cfg.hi = hi.unwrap_or(cfg.hi);
            let r = match family.as_str() {
                "detection" => {
                    let eta = need(*eta, "--eta")?;
                    visibility_threshold(|v| detection(eta, v).map_err(feas), &cfg)?
                }
                "detection-eta" => {
                    let v = v.unwrap_or(1.0);
                    visibility_threshold(|eta| detection(eta, v).map_err(feas), &cfg)?
                }
                "tradeoff" => {
                    let xi = need(*xi, "--xi")?;
                    visibility_threshold(|v| Ok(tradeoff_correlation(xi, v)?), &cfg)?
                }
                other => {
                    let kind = parse_closed_form(other)?;
                    visibility_threshold(|v| closed_form(kind, v).map_err(feas), &cfg)?
                }
            };
            let mut out = serde_json::to_value(r)?;
            out["family"] = json!(family);
            Ok(Report { inconclusive: !(r.lower_found && r.upper_found && r.bracketing), output: Output::Json(out) })
        }
        Command::Tradeoff { grid, measure } => tradeoff(*grid, *measure, cli),
        Command::Detection { eta_grid } => {
            let rows = detection_rows(&parse_grid(eta_grid)?)?;
            Ok(csv_report(
                &["eta", "regime", "v_biloc", "v_ineq"],
                rows.iter().map(|r| {
                    vec![fmt17(r.eta), r.regime.to_string(), fmt17(r.v_biloc), r.v_ineq.map(fmt17).unwrap_or_default()]
                }),
            ))
        }
        Command::Simulate { protocol, n, a, c } => {
            let proto = Protocol::parse(protocol)
                .ok_or_else(|| CliError::Domain(format!("unknown protocol {protocol:?} (expected werner or comm2)")))?;
            let cfg = SimConfig { samples: *n, seed: cli.seed, alice: parse_vec3(a, "--a")?, charlie: parse_vec3(c, "--c")? };
            let est = simulate(proto, &cfg)?;
            let vis = match estimate_visibility(&est) {
                Ok(v) => serde_json::to_value(v)?,
                Err(e) => json!({ "error": e.to_string() }),
            };
            Ok(Report::json(json!({ "estimate": est, "visibility": vis })))
        }
        Command::Triloc { demo, construction } => {
            if !demo {
                return Err(CliError::Domain("triloc currently runs only with --demo".into()));
            }
            let f = match construction.as_str() {
                "closed" => example_quantum_fourpartite(),
                "born" => quantum_fourpartite_from_states(),
                other => return Err(CliError::Domain(format!("unknown construction {other:?} (expected closed or born)"))),
            };
            let report = decide_trilocality(&f)?;
            Ok(Report::json(json!({ "fourpartite": f, "report": report })))
        }
        Command::ExportSlice { case, grid } => {
            let rows = export_slice(case, *grid)?;
            Ok(csv_report(
                &["region", "portion", "I", "J"],
                rows.iter().map(|r| vec![r.region.to_string(), r.portion.to_string(), fmt17(r.i), fmt17(r.j)]),
            ))
        }
    }
}

fn feas(e: biloc_quantum::QuantumError) -> biloc_feasibility::FeasibilityError {
    biloc_feasibility::FeasibilityError::Invalid(e.to_string())
}

fn need(x: Option<f64>, flag: &str) -> Result<f64, CliError> {
    x.ok_or_else(|| CliError::Domain(format!("missing {flag}")))
}

fn csv_report<I: IntoIterator<Item = Vec<String>>>(header: &[&str], rows: I) -> Report {
    Report {
        output: Output::Csv { header: header.iter().map(|s| s.to_string()).collect(), rows: rows.into_iter().collect() },
        inconclusive: false,
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    let io_err = |source| CliError::Io { path: path.display().to_string(), source };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(io_err)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io_err)
    }
}

/// JSON when the text opens with `{`, CSV otherwise; `#` lines are comments.
pub(crate) fn read_correlation(path: &Path) -> Result<Correlation, CliError> {
    let text = read_text(path)?;
    let located = |e: biloc_scenario::ScenarioError| CliError::Domain(format!("{}: {e}", path.display()));
    if text.trim_start().starts_with('{') {
        io::from_json_str(&text).map_err(located)
    } else {
        let body: String = text.lines().filter(|l| !l.starts_with('#')).flat_map(|l| [l, "\n"]).collect();
        io::read_csv(body.as_bytes()).map_err(located)
    }
}

fn parse_closed_form(name: &str) -> Result<ClosedForm, CliError> {
    ClosedForm::parse(&name.replace('_', "")).ok_or_else(|| CliError::Domain(format!("unknown setup {name:?}")))
}

fn detection(eta: f64, v: f64) -> Result<Correlation, biloc_quantum::QuantumError> {
    apply_detection_model(&closed_form(ClosedForm::Pq14, v)?, eta, eta, NoClickStrategy::AOutputsXCOutputs0)
}

fn gen_named(
    name: &str,
    v: &str,
    eta: Option<f64>,
    xi: Option<f64>,
    theta1: Option<f64>,
    theta2: Option<f64>,
) -> Result<Correlation, CliError> {
    let exact: Option<Rational> = v.trim().parse().ok();
    let vf = match exact {
        Some(r) => r.to_f64(),
        None => v.trim().parse::<f64>().map_err(|_| CliError::Domain(format!("--v {v:?} is not a number")))?,
    };
    Ok(match name.trim().to_ascii_lowercase().as_str() {
        "detection" => detection(need(eta, "--eta")?, vf)?,
        "tradeoff" => tradeoff_correlation(need(xi, "--xi")?, vf)?,
        "nonmaxent" => {
            let (t1, t2) = (need(theta1, "--theta1")?, need(theta2, "--theta2")?);
            let m = nonmaxent_setup(t1, t2)?;
            let p = generate_correlation(&source_state(t1, 1.0)?, &source_state(t2, 1.0)?, &m.alice, &BobMeasurement::full_bsm(), &m.charlie)?;
            let noise = Correlation::uniform(*p.scenario());
            mix(&[p, noise], &[vf, 1.0 - vf])?
        }
        other => {
            let kind = parse_closed_form(other)?;
            match exact {
                Some(r) => closed_form_exact(kind, r)?,
                None => closed_form(kind, vf)?,
            }
        }
    })
}

fn eval(c: &Correlation) -> Result<Report, CliError> {
    let kind = c.kind().ok_or_else(|| CliError::Domain("eval needs a 22, 14 or 13 scenario".into()))?;
    let v = ij(c)?;
    let biloc = bilocal_test(&v);
    let local = local_test(&v);
    let legacy = (kind == ScenarioKind::S14).then(|| legacy_from_ij(&v));
    let ac_product = ac_product_check(c, 1e-10);
    let mut violations = Vec::new();
    if biloc.violated {
        violations.push("bilocal");
    }
    if local.violated {
        violations.push("local");
    }
    if legacy.is_some_and(|l| !l.satisfied) {
        violations.push("legacy");
    }
    if !ac_product {
        violations.push("ac_product");
    }
    let chsh: Option<Vec<Option<f64>>> = matches!(kind, ScenarioKind::S14 | ScenarioKind::S13)
        .then(|| (0..c.scenario().bob.outputs).map(|b| chsh_conditioned(c, b).ok()).collect());
    Ok(Report::json(json!({
        "scenario": kind.label(),
        "I": v.i,
        "J": v.j,
        "sqrt_sum": biloc.value,
        "abs_sum": local.value,
        "restricted_sum": (kind == ScenarioKind::S13).then(|| v.restricted_lhs()),
        "legacy": legacy,
        "chsh_conditioned": chsh,
        "non_signaling": is_non_signaling(c, 1e-9).ok,
        "ac_product": ac_product,
        "violations": violations,
    })))
}

fn certify(table: &str, p: [Option<f64>; 8], model: &str, tol: f64) -> Result<Report, CliError> {
    let [i, j, k, l, m, eta, v, xi] = p;
    let id = TableId::parse(table).ok_or_else(|| CliError::Domain(format!("unknown table {table:?}")))?;
    let spec = match id {
        TableId::I => TableSpec::I { i: need(i, "--i")?, j: need(j, "--j")?, k },
        TableId::II => TableSpec::II { i: need(i, "--i")?, j: need(j, "--j")?, k },
        TableId::III => match (i, j, k, l, m, v) {
            (None, None, None, None, None, Some(v)) => TableSpec::partial_bsm(v),
            _ => TableSpec::III {
                i: need(i, "--i")?,
                j: need(j, "--j")?,
                k: need(k, "--k")?,
                l: need(l, "--l")?,
                m: need(m, "--m")?,
            },
        },
        TableId::IV => TableSpec::IV { eta: need(eta, "--eta")?, v: need(v, "--v")? },
        TableId::V => {
            let model = match model.to_ascii_lowercase().as_str() {
                "local" => TradeoffModel::Local,
                "bilocal" => TradeoffModel::Bilocal,
                other => return Err(CliError::Domain(format!("unknown model {other:?} (expected local or bilocal)"))),
            };
            TableSpec::V { xi: need(xi, "--xi")?, v: need(v, "--v")?, model }
        }
    };
    let d = table_decomposition(spec)?;
    let check = check_constraints_tol(&d.correlators, tol);
    Ok(Report::json(json!({
        "spec": spec,
        "scenario": spec.scenario().label(),
        "weights": DecompositionJson::from(&d.weights),
        "correlators": DecompositionJson::from(&d.correlators),
        "check": check,
        "target_error": d.target_error(),
        "correlation": d.correlation(),
    })))
}

fn tradeoff(grid: usize, measure: bool, cli: &Cli) -> Result<Report, CliError> {
    if grid < 2 {
        return Err(CliError::Domain(format!("grid must be at least 2, got {grid}")));
    }
    let mut header = vec!["xi", "theta0", "theta1", "v_loc", "v_biloc", "predicted_ij"];
    if measure {
        header.extend(["v_loc_measured", "v_biloc_lower", "v_biloc_upper"]);
    }
    let mut rows = Vec::new();
    for k in 0..grid {
        let xi = k as f64 / (grid - 1) as f64;
        let t = tradeoff_front(xi)?;
        let mut row = vec![fmt17(xi), fmt17(t.theta[0]), fmt17(t.theta[1]), fmt17(t.v_loc), fmt17(t.v_biloc), fmt17(t.predicted_ij)];
        if measure {
            let vl = measured_local_visibility(xi)?;
            let mut cfg = ThresholdConfig::default();
            cfg.search.seed = cli.seed;
            let r = visibility_threshold(|v| Ok(tradeoff_correlation(xi, v)?), &cfg)?;
            row.extend([fmt17(vl), fmt17(r.lower), fmt17(r.upper)]);
        }
        rows.push(row);
    }
    Ok(csv_report(&header, rows))
}

/// Largest visibility at which the trade-off correlation is Bell local.
pub(crate) fn measured_local_visibility(xi: f64) -> Result<f64, CliError> {
    let p = tradeoff_correlation(xi, 1.0)?;
    let s = *p.scenario();
    let noise = Correlation::uniform(s);
    Ok(local_visibility(&[s.alice, s.bob, s.charlie], p.p(), noise.p())?.visibility)
}

fn parse_vec3(s: &str, flag: &str) -> Result<[f64; 3], CliError> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Domain(format!("{flag} {s:?} is not x,y,z")))?;
    v.try_into().map_err(|_| CliError::Domain(format!("{flag} {s:?} is not x,y,z")))
}
