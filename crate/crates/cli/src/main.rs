//! Scenario-driven command line front end.
//!
//! Exit codes: 0 success, 1 golden mismatch, 2 input error. Outputs are
//! byte-deterministic for identical inputs; SVG is presentation-only.

mod config;
mod output;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use okounkov::boundary::{discontinuity_witness, Verdict};
use okounkov::exact::{parse_rat, rat_str};
use okounkov::function::{default_t_grid, okounkov_function_envelope};
use okounkov::integrals::{family_scan, integral, FamilyOutcome};
use okounkov::okbody::okounkov_body;
use okounkov::scenarios::{self, Scenario, SeriesScenario};
use okounkov::semigroup::{builtin_function, gordan_gap, hatf_estimate, standard_schedule, DiscreteSemigroup};
use okounkov::{properties, Rat, SeriesFamily, ValuationSpec};

use output::{function_json, polytope_json, rat_json, value_json, write_json};

#[derive(Parser)]
#[command(name = "okounkov", version, about = "Newton-Okounkov bodies, Okounkov functions and integrals for explicit linear series")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute a level-truncated Okounkov body.
    Body {
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        max_level: Option<usize>,
        /// Parameter for the blow-up scenario (rational, e.g. 1/2).
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Compute an Okounkov function envelope (facet list).
    Function {
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        max_level: Option<usize>,
        /// Valuation override: ord-p, ord-q, ord-p0, ord-p1, ord-p2,
        /// ord-line, ord-e1.
        #[arg(long)]
        valuation: Option<String>,
        #[arg(long)]
        lambda: Option<String>,
        /// Also emit the slice-body step approximation on this grid.
        #[arg(long)]
        t_denominator_bound: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Integrate an Okounkov function; with --lambda-grid, scan the blow-up
    /// family and emit CSV.
    Integral {
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        max_level: Option<usize>,
        #[arg(long)]
        valuation: Option<String>,
        #[arg(long)]
        lambda: Option<String>,
        /// Comma-separated rational grid, e.g. 0,1/4,1/2,3/4.
        #[arg(long)]
        lambda_grid: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Boundary discontinuity demo on a curved body (and polytope control).
    Boundary {
        #[arg(long, default_value = "disk-demo")]
        scenario: String,
        #[arg(long, default_value_t = 10)]
        probes: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Semigroup regularization gaps inside a box.
    Semigroup {
        #[arg(long)]
        scenario: Option<String>,
        /// Generators like "2;3" or "1,0;1,2".
        #[arg(long)]
        generators: Option<String>,
        #[arg(long)]
        box_bound: Option<i64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fekete-type estimate of a subadditive function along a schedule.
    Fekete {
        #[arg(long)]
        scenario: Option<String>,
        /// Built-in function: linear, ceil-norm, floor-multiple,
        /// ceil-multiple.
        #[arg(long)]
        function: Option<String>,
        /// Rational parameters for the function (comma separated).
        #[arg(long)]
        params: Option<String>,
        /// Point of the cone interior, e.g. 3,4.
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the randomized property suites (seeded).
    Properties {
        #[arg(long, default_value_t = 0xA11CE)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        cases: usize,
    },
    /// List built-in scenarios.
    Scenarios,
}

fn parse_lambda(s: &Option<String>) -> Result<Option<Rat>> {
    s.as_deref()
        .map(|t| parse_rat(t).map_err(|e| anyhow!("{e}")))
        .transpose()
}

struct SeriesRun {
    name: String,
    family: SeriesFamily,
    valuation: ValuationSpec,
    max_level: usize,
    golden_body: Option<Vec<Vec<Rat>>>,
    golden_check: bool,
}

/// Resolves --scenario/--config plus overrides into a concrete run.
fn resolve_series(
    scenario: &Option<String>,
    config: &Option<PathBuf>,
    max_level: Option<usize>,
    valuation: &Option<String>,
    lambda: &Option<String>,
) -> Result<SeriesRun> {
    match (scenario, config) {
        (Some(_), Some(_)) => bail!("--scenario and --config are mutually exclusive"),
        (None, None) => bail!("one of --scenario or --config is required"),
        (Some(name), None) => {
            let lam = parse_lambda(lambda)?;
            let sc = scenarios::by_name(name, lam.as_ref()).map_err(|e| anyhow!("{e}"))?;
            let Scenario::Series(s) = sc else {
                bail!("scenario `{name}` is not a series scenario");
            };
            let SeriesScenario {
                family,
                valuation: default_val,
                default_level,
                golden_body,
                ..
            } = s;
            let (val, golden_check) = match valuation {
                None => (default_val, true),
                Some(vname) => (
                    scenarios::valuation_by_name(&family, vname).map_err(|e| anyhow!("{e}"))?,
                    false, // golden answers are tied to the default valuation
                ),
            };
            Ok(SeriesRun {
                name: name.clone(),
                family,
                valuation: val,
                max_level: max_level.unwrap_or(default_level),
                golden_body,
                golden_check,
            })
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let cfg = config::parse_config(&text)?;
            Ok(SeriesRun {
                name: path.display().to_string(),
                family: cfg.family,
                valuation: cfg.valuation,
                max_level: max_level.or(cfg.max_level).unwrap_or(4),
                golden_body: cfg.expected_body,
                golden_check: true,
            })
        }
    }
}

/// Ok(true) = success, Ok(false) = golden mismatch (exit 1).
fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Body { scenario, config, max_level, lambda, out, svg } => {
            let run = resolve_series(&scenario, &config, max_level, &None, &lambda)?;
            let body = okounkov_body(&run.family, run.max_level).map_err(|e| anyhow!("{e}"))?;
            let mut exact = false;
            let mut golden_ok = true;
            if run.golden_check {
                if let Some(expected) = &run.golden_body {
                    let want: BTreeSet<Vec<Rat>> = expected.iter().cloned().collect();
                    exact = body.body.vertex_set() == want;
                    golden_ok = exact;
                }
            }
            let doc = json!({
                "scenario": run.name,
                "max_level": run.max_level,
                "exact": exact,
                "body": polytope_json(&body.body),
            });
            write_json(&out, &doc)?;
            if let Some(svg_path) = svg {
                std::fs::write(svg_path, output::svg_polytope(&body.body))?;
            }
            if !golden_ok {
                eprintln!("golden mismatch: body vertices differ from the expected set");
            }
            Ok(golden_ok)
        }
        Cmd::Function {
            scenario,
            config,
            max_level,
            valuation,
            lambda,
            t_denominator_bound,
            out,
            svg,
        } => {
            let run = resolve_series(&scenario, &config, max_level, &valuation, &lambda)?;
            let env = okounkov_function_envelope(&run.family, &run.valuation, run.max_level)
                .map_err(|e| anyhow!("{e}"))?;
            let mut doc = function_json(&env);
            if let Some(bound) = t_denominator_bound {
                let grid = default_t_grid(&run.family, &run.valuation, bound);
                let psi =
                    okounkov::function::okounkov_function_slices(&run.family, &run.valuation, run.max_level, &grid)
                        .map_err(|e| anyhow!("{e}"))?;
                let slices: Vec<_> = psi
                    .slices
                    .iter()
                    .map(|(t, b)| json!({ "t": rat_json(t), "body": polytope_json(&b.body) }))
                    .collect();
                doc.as_object_mut()
                    .unwrap()
                    .insert("slices".into(), json!(slices));
            }
            // golden: closed form must match the envelope at its samples
            let mut golden_ok = true;
            if run.golden_check {
                if let (Some(name), None) = (&scenario, &config) {
                    if let Ok(Scenario::Series(s)) = scenarios::by_name(name, None) {
                        if let Some(phi) = s.closed_phi {
                            for (p, _) in &env.samples {
                                let got = env.eval(p).map_err(|e| anyhow!("{e}"))?;
                                let want = phi.eval(p).map_err(|e| anyhow!("{e}"))?;
                                if got != want {
                                    eprintln!(
                                        "golden mismatch: envelope({p:?}) = {} expected {}",
                                        rat_str(&got),
                                        rat_str(&want)
                                    );
                                    golden_ok = false;
                                }
                            }
                        }
                    }
                }
            }
            write_json(&out, &doc)?;
            if let Some(svg_path) = svg {
                std::fs::write(svg_path, output::svg_function(&env))?;
            }
            Ok(golden_ok)
        }
        Cmd::Integral { scenario, config, max_level, valuation, lambda, lambda_grid, out } => {
            if let Some(grid_text) = lambda_grid {
                let grid: Vec<Rat> = grid_text
                    .split(',')
                    .map(|t| parse_rat(t).map_err(|e| anyhow!("{e}")))
                    .collect::<Result<_>>()?;
                let fam = scenarios::blowup_family(false);
                let max_level = max_level.unwrap_or(8);
                let points = family_scan(&fam, &grid, max_level).map_err(|e| anyhow!("{e}"))?;
                let mut csv = String::from("lambda,integral,normalized,mass_tail\n");
                let mut golden_ok = true;
                for p in &points {
                    match &p.outcome {
                        FamilyOutcome::Flagged(reason) => {
                            csv.push_str(&format!(
                                "{},{},,\n",
                                rat_str(&p.lambda),
                                output::csv_escape(&format!("flagged: {reason}"))
                            ));
                        }
                        FamilyOutcome::Computed { closed_form, report } => {
                            let exact = closed_form.clone().unwrap_or_else(|| report.integral.clone());
                            let mass_tail = report
                                .mass_sequence
                                .last()
                                .map(|(_, m)| rat_str(m))
                                .unwrap_or_default();
                            csv.push_str(&format!(
                                "{},{},{},{}\n",
                                rat_str(&p.lambda),
                                rat_str(&exact),
                                rat_str(&report.normalized),
                                mass_tail
                            ));
                            let formula = scenarios::blowup_integral_formula(&p.lambda);
                            if exact != formula {
                                eprintln!(
                                    "golden mismatch at lambda = {}: {} expected {}",
                                    rat_str(&p.lambda),
                                    rat_str(&exact),
                                    rat_str(&formula)
                                );
                                golden_ok = false;
                            }
                        }
                    }
                }
                std::fs::write(&out, csv)?;
                return Ok(golden_ok);
            }
            let run = resolve_series(&scenario, &config, max_level, &valuation, &lambda)?;
            let rep = integral(&run.family, &run.valuation, run.max_level).map_err(|e| anyhow!("{e}"))?;
            let mut golden_ok = true;
            if run.golden_check {
                if let (Some(name), None) = (&scenario, &config) {
                    if let Ok(Scenario::Series(s)) = scenarios::by_name(name, None) {
                        if let Some(gold) = s.golden_integral {
                            if rep.integral != gold {
                                eprintln!(
                                    "golden mismatch: integral {} expected {}",
                                    rat_str(&rep.integral),
                                    rat_str(&gold)
                                );
                                golden_ok = false;
                            }
                        }
                    }
                }
            }
            let doc = json!({
                "scenario": run.name,
                "max_level": run.max_level,
                "integral": rat_json(&rep.integral),
                "normalized": rat_json(&rep.normalized),
                "body_volume": rat_json(&rep.body_volume),
                "mass_sequence": rep
                    .mass_sequence
                    .iter()
                    .map(|(k, m)| json!([k, rat_str(m)]))
                    .collect::<Vec<_>>(),
            });
            write_json(&out, &doc)?;
            Ok(golden_ok)
        }
        Cmd::Boundary { scenario, probes, out, svg } => {
            let sc = scenarios::by_name(&scenario, None).map_err(|e| anyhow!("{e}"))?;
            let Scenario::Disk(d) = sc else {
                bail!("scenario `{scenario}` is not a boundary scenario");
            };
            let rep = discontinuity_witness(&d.body, &d.center, probes).map_err(|e| anyhow!("{e}"))?;
            let control = discontinuity_witness(&d.control_body, &d.control_center, probes)
                .map_err(|e| anyhow!("{e}"))?;
            let verdict_str = |v: &Verdict| match v {
                Verdict::Discontinuous => "discontinuous",
                Verdict::ContinuityCertificate => "continuity-certificate",
            };
            let doc = json!({
                "scenario": d.name,
                "locally_cone": rep.locally_cone,
                "center_value": value_json(&rep.center_value),
                "probes": rep
                    .probes
                    .iter()
                    .map(|r| json!({
                        "point": r.point.iter().map(rat_json).collect::<Vec<_>>(),
                        "value": value_json(&r.value),
                        "dist2": rat_json(&r.dist2),
                    }))
                    .collect::<Vec<_>>(),
                "verdict": verdict_str(&rep.verdict),
                "control": json!({
                    "locally_cone": control.locally_cone,
                    "verdict": verdict_str(&control.verdict),
                }),
            });
            write_json(&out, &doc)?;
            if let Some(svg_path) = svg {
                let probe_pts: Vec<_> = rep
                    .probes
                    .iter()
                    .map(|r| (r.point.clone(), r.value.clone()))
                    .collect();
                std::fs::write(svg_path, output::svg_boundary(&d.body, &probe_pts, &d.center))?;
            }
            let ok = rep.verdict == Verdict::Discontinuous
                && control.verdict == Verdict::ContinuityCertificate;
            if !ok {
                eprintln!("golden mismatch: expected a discontinuity witness and a continuous control");
            }
            Ok(ok)
        }
        Cmd::Semigroup { scenario, generators, box_bound, out } => {
            let (gens, bound, golden): (Vec<Vec<i64>>, i64, Option<Vec<Vec<i64>>>) =
                match (&scenario, &generators) {
                    (Some(name), None) => {
                        let sc = scenarios::by_name(name, None).map_err(|e| anyhow!("{e}"))?;
                        let Scenario::Semigroup(s) = sc else {
                            bail!("scenario `{name}` is not a semigroup scenario");
                        };
                        (s.generators, box_bound.unwrap_or(s.box_bound), Some(s.golden_gap))
                    }
                    (None, Some(text)) => {
                        let gens: Vec<Vec<i64>> = text
                            .split(';')
                            .map(|g| {
                                g.split(',')
                                    .map(|c| c.trim().parse::<i64>().context("integer generator"))
                                    .collect()
                            })
                            .collect::<Result<_>>()?;
                        (gens, box_bound.unwrap_or(20), None)
                    }
                    _ => bail!("exactly one of --scenario or --generators is required"),
                };
            let s = DiscreteSemigroup::new(gens.clone()).map_err(|e| anyhow!("{e}"))?;
            let rep = gordan_gap(&s, bound).map_err(|e| anyhow!("{e}"))?;
            let doc = json!({
                "generators": gens,
                "box_bound": bound,
                "gap": rep.gap,
                "stabilized": rep.stabilized,
            });
            write_json(&out, &doc)?;
            match golden {
                Some(want) if want != rep.gap => {
                    eprintln!("golden mismatch: gap {:?} expected {:?}", rep.gap, want);
                    Ok(false)
                }
                _ => Ok(true),
            }
        }
        Cmd::Fekete { scenario, function, params, point, steps, out } => {
            let (fname, x, nsteps, golden): (String, Vec<Rat>, usize, Option<(Rat, Rat)>) =
                match (&scenario, &function) {
                    (Some(name), None) => {
                        let sc = scenarios::by_name(name, None).map_err(|e| anyhow!("{e}"))?;
                        let Scenario::Fekete(f) = sc else {
                            bail!("scenario `{name}` is not a Fekete scenario");
                        };
                        (
                            f.function.to_string(),
                            f.point,
                            steps.unwrap_or(f.steps),
                            Some((f.golden_value, f.bracket_width)),
                        )
                    }
                    (None, Some(fname)) => {
                        let x: Vec<Rat> = point
                            .as_deref()
                            .context("--point required with --function")?
                            .split(',')
                            .map(|t| parse_rat(t).map_err(|e| anyhow!("{e}")))
                            .collect::<Result<_>>()?;
                        (fname.clone(), x, steps.unwrap_or(32), None)
                    }
                    _ => bail!("exactly one of --scenario or --function is required"),
                };
            let pvals: Vec<Rat> = match &params {
                None => Vec::new(),
                Some(text) => text
                    .split(',')
                    .map(|t| parse_rat(t).map_err(|e| anyhow!("{e}")))
                    .collect::<Result<_>>()?,
            };
            let f = builtin_function(&fname, &pvals)
                .with_context(|| format!("unknown built-in function `{fname}`"))?;
            let dim = x.len();
            let gens: Vec<Vec<i64>> = (0..dim)
                .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
                .collect();
            let s = DiscreteSemigroup::new(gens).map_err(|e| anyhow!("{e}"))?;
            let sched = standard_schedule(&x, nsteps);
            let rep = hatf_estimate(&s, &f, &x, &sched).map_err(|e| anyhow!("{e}"))?;
            let doc = json!({
                "function": fname,
                "point": x.iter().map(rat_json).collect::<Vec<_>>(),
                "steps": nsteps,
                "estimate": rat_json(&rep.estimate),
                "bracket": [rat_json(&rep.bracket.0), rat_json(&rep.bracket.1)],
            });
            write_json(&out, &doc)?;
            match golden {
                Some((want, width)) => {
                    let ok = rep.bracket.0 <= want
                        && want <= rep.bracket.1
                        && &rep.bracket.1 - &rep.bracket.0 <= width;
                    if !ok {
                        eprintln!("golden mismatch: bracket does not isolate the expected value");
                    }
                    Ok(ok)
                }
                None => Ok(true),
            }
        }
        Cmd::Properties { seed, cases } => {
            let mut all_ok = true;
            for rep in properties::run_all(seed, cases) {
                match &rep.failure {
                    None => println!("PASS {} ({} cases)", rep.name, rep.cases),
                    Some(msg) => {
                        println!("FAIL {}: {msg}", rep.name);
                        all_ok = false;
                    }
                }
            }
            Ok(all_ok)
        }
        Cmd::Scenarios => {
            for name in scenarios::SCENARIO_NAMES {
                println!("{name}");
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
