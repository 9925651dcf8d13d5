//! Command-line front end: load states, distributions, and ensembles from
//! JSON documents, compute any quantity in the toolkit, run the randomized
//! verification suites, and emit human- or machine-readable reports.
//!
//! Exit codes: 0 success; 1 input/validation error; 2 suite or chain failure
//! (an inequality violated beyond tolerance); 3 detection iteration did not
//! converge.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qpinsker::detection::{
    accessible_information, optimality_residual, optimize_detection_traced, SearchConfig,
    DEFAULT_DETECTION_MAX_ITER,
};
use qpinsker::digest::hex_digest;
use qpinsker::distance::{cq_trace_distance, delta_c, statistical_distance, trace_distance, trace_norm};
use qpinsker::entropy::{
    classical_relative_entropy, conditional_entropy, cq_joint_entropy, holevo_information,
    holevo_information_via_relative_entropy, mutual_information, quantum_mutual_information,
    quantum_mutual_information_via_relative_entropy, quantum_relative_entropy, shannon_entropy,
    von_neumann_entropy,
};
use qpinsker::error::Error;
use qpinsker::inequalities::{
    holevo_vs_trace, pinsker_classical, pinsker_mutual, pinsker_quantum, pinsker_quantum_mutual,
    pinsker_quantum_mutual_printed, BoundCheck,
};
use qpinsker::io::ParsedInput;
use qpinsker::qkd::{classical_guess_bound, guess_bound_with, GuessBoundReport, KeyEnsemble};
use qpinsker::states::{build_cq_state, DensityOperator, Ensemble, ProbDist};
use qpinsker::suites::{run_verify, SuiteConfig, SuiteSelection};
use qpinsker::Tolerances;

use report::Report;

#[derive(Parser)]
#[command(
    name = "qpinsker",
    version,
    about = "Entropies, trace distances, quantum detection, and Pinsker-type bound verification"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for every random choice made by the command.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Residual/convergence tolerance for iterative searches.
    #[arg(long, global = true, default_value_t = 1e-7)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Shannon, conditional, joint, von Neumann, or classical-quantum
    /// entropy, depending on the input kind.
    Entropy {
        #[arg(long)]
        input: PathBuf,
    },
    /// Relative entropy between two distributions or two states.
    Reldiv {
        /// Two input documents of the same kind (repeat the flag).
        #[arg(long, required = true)]
        input: Vec<PathBuf>,
    },
    /// Mutual information of a joint distribution, or quantum mutual
    /// information of a bipartite state (requires --dims).
    Mutual {
        #[arg(long)]
        input: PathBuf,
        /// Subsystem dimensions dA,dB for operator inputs.
        #[arg(long, value_delimiter = ',')]
        dims: Vec<usize>,
    },
    /// Holevo information of an ensemble, through all three
    /// representations.
    Holevo {
        #[arg(long)]
        input: PathBuf,
    },
    /// Statistical distance, trace distance, or classical-quantum trace
    /// distance, depending on the inputs.
    Dist {
        #[arg(long, required = true)]
        input: Vec<PathBuf>,
    },
    /// Pinsker-type bound check; the theorem is picked from the input kinds.
    Pinsker {
        #[arg(long, required = true)]
        input: Vec<PathBuf>,
        /// Subsystem dimensions dA,dB for the bipartite quantum bound.
        #[arg(long, value_delimiter = ',')]
        dims: Vec<usize>,
    },
    /// Holevo-information bound on the classical-quantum trace distance.
    HolevoTrace {
        #[arg(long)]
        input: PathBuf,
    },
    /// Binary Helstrom discrimination (two operators) or multi-hypothesis
    /// detection optimization (ensemble).
    Helstrom {
        #[arg(long, required = true)]
        input: Vec<PathBuf>,
        /// Prior of the first hypothesis in the binary case.
        #[arg(long, default_value_t = 0.5)]
        prior: f64,
        #[arg(long, default_value_t = DEFAULT_DETECTION_MAX_ITER)]
        max_iter: usize,
    },
    /// Accessible-information lower bound with the Holevo upper bound.
    Accinfo {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 2048)]
        grid_points: usize,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
    },
    /// Guessing-probability sandwich for a key ensemble, or the classical
    /// bound for a joint distribution.
    Guess {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DETECTION_MAX_ITER)]
        max_iter: usize,
    },
    /// Randomized verification suites over all theorems and identities.
    Verify {
        /// all, 1..7, or identities; repeatable.
        #[arg(long = "theorem", default_values_t = [String::from("all")])]
        theorems: Vec<String>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// State dimensions for the quantum Pinsker sweep.
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 4, 8])]
        dims: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_DETECTION_MAX_ITER)]
        max_iter: usize,
    },
}

struct CliOutcome {
    reports: Vec<Report>,
    exit: u8,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::NoConvergence { .. } => 3,
        Error::SandwichViolation(_) => 2,
        _ => 1,
    }
}

fn load(path: &Path, tol: &Tolerances) -> Result<(ParsedInput, (String, String)), Error> {
    let bytes = std::fs::read(path)?;
    let digest = hex_digest(&bytes);
    let text = String::from_utf8_lossy(&bytes);
    let parsed = qpinsker::io::parse_document(&text, tol)?;
    Ok((parsed, (path.display().to_string(), digest)))
}

fn bound_check_report(command: &str, seed: u64, check: &BoundCheck) -> Report {
    let mut r = Report::new(command, seed);
    r.set_str("theorem", check.theorem);
    r.set_num("lhs", check.lhs);
    r.set_num("rhs", check.rhs);
    r.set_num("slack", check.slack);
    r.set_bool("holds", check.holds(qpinsker::inequalities::SLACK_TOL));
    r.set_str("inputs_digest", &check.inputs_digest);
    r
}

fn guess_report(command: &str, seed: u64, g: &GuessBoundReport) -> Report {
    let mut r = Report::new(command, seed);
    r.set_usize("m", g.m);
    r.set_num("delta_q", g.delta_q);
    r.set_num("lower", g.lower);
    r.set_num("upper", g.upper);
    r.set_num("p_guess", g.p_guess);
    r.set_num("p_d_sub", g.p_d_sub);
    r.set_num("p_d_ideal", g.p_d_ideal);
    r.set_num("residual", g.residual);
    for check in &g.chain {
        r.set(
            &format!("chain_{}", check.name.replace('-', "_")),
            serde_json::json!({
                "lhs": report::num(check.lhs),
                "rhs": report::num(check.rhs),
                "pass": check.pass,
            }),
        );
    }
    r.set_bool("pass", g.all_pass());
    r
}

fn wrong_inputs(msg: &str) -> Error {
    Error::Parse(msg.into())
}

fn run(cli: &Cli) -> Result<CliOutcome, Error> {
    let tol = Tolerances::default();
    if cli.tol <= 0.0 {
        return Err(wrong_inputs("--tol must be positive"));
    }
    let seed = cli.seed;

    match &cli.command {
        Command::Entropy { input } => {
            let (parsed, provenance) = load(input, &tol)?;
            let mut r = Report::new("entropy", seed);
            r.set_inputs(&[provenance]);
            r.set_str("input_kind", parsed.kind());
            match parsed {
                ParsedInput::Probs(p) => {
                    r.set_num("shannon_entropy_bits", shannon_entropy(&p));
                }
                ParsedInput::Joint(j) => {
                    r.set_num("joint_entropy_bits", shannon_entropy(&j.flattened()));
                    r.set_num("entropy_x_bits", shannon_entropy(&j.row_marginal()));
                    r.set_num("entropy_y_bits", shannon_entropy(&j.col_marginal()));
                    r.set_num("conditional_entropy_bits", conditional_entropy(&j));
                    r.set_num("mutual_information_bits", mutual_information(&j));
                }
                ParsedInput::Operator(rho) => {
                    r.set_num("von_neumann_entropy_bits", von_neumann_entropy(&rho));
                }
                ParsedInput::Ensemble { ensemble, .. } => {
                    let cq = build_cq_state(ensemble);
                    r.set_num("cq_joint_entropy_bits", cq_joint_entropy(&cq));
                    r.set_num("prior_entropy_bits", shannon_entropy(cq.ensemble().priors()));
                    r.set_num("average_state_entropy_bits", von_neumann_entropy(cq.avg()));
                }
            }
            Ok(CliOutcome { reports: vec![r], exit: 0 })
        }

        Command::Reldiv { input } => {
            let [a, b] = two_paths(input)?;
            let (pa, prov_a) = load(a, &tol)?;
            let (pb, prov_b) = load(b, &tol)?;
            let mut r = Report::new("reldiv", seed);
            r.set_inputs(&[prov_a, prov_b]);
            match (pa, pb) {
                (ParsedInput::Probs(p), ParsedInput::Probs(q)) => {
                    r.set_str("kind", "classical");
                    r.set_num("relative_entropy_bits", classical_relative_entropy(&p, &q)?);
                }
                (ParsedInput::Operator(rho), ParsedInput::Operator(sigma)) => {
                    r.set_str("kind", "quantum");
                    r.set_num("relative_entropy_bits", quantum_relative_entropy(&rho, &sigma)?);
                }
                _ => return Err(wrong_inputs("reldiv needs two probs or two operator documents")),
            }
            Ok(CliOutcome { reports: vec![r], exit: 0 })
        }

        Command::Mutual { input, dims } => {
            let (parsed, provenance) = load(input, &tol)?;
            let mut r = Report::new("mutual", seed);
            r.set_inputs(&[provenance]);
            match parsed {
                ParsedInput::Joint(j) => {
                    r.set_str("kind", "classical");
                    r.set_num("mutual_information_bits", mutual_information(&j));
                    r.set_num(
                        "relative_entropy_route_bits",
                        classical_relative_entropy(
                            &j.flattened(),
                            &j.product_of_marginals().flattened(),
                        )?,
                    );
                }
                ParsedInput::Operator(rho) => {
                    let d = parse_dims(dims, &rho)?;
                    r.set_str("kind", "quantum");
                    r.set_num("mutual_information_bits", quantum_mutual_information(&rho, d)?);
                    r.set_num(
                        "relative_entropy_route_bits",
                        quantum_mutual_information_via_relative_entropy(&rho, d)?,
                    );
                }
                _ => return Err(wrong_inputs("mutual needs a joint or an operator document")),
            }
            Ok(CliOutcome { reports: vec![r], exit: 0 })
        }

        Command::Holevo { input } => {
            let (parsed, provenance) = load(input, &tol)?;
            let ensemble = expect_ensemble(parsed)?;
            let cq = build_cq_state(ensemble.clone());
            let mut r = Report::new("holevo", seed);
            r.set_inputs(&[provenance]);
            r.set_num("holevo_information_bits", holevo_information(&ensemble));
            r.set_num(
                "cq_mutual_information_bits",
                quantum_mutual_information(&cq.dense(), (cq.classical_dim(), cq.quantum_dim()))?,
            );
            r.set_num(
                "relative_entropy_route_bits",
                holevo_information_via_relative_entropy(&ensemble)?,
            );
            Ok(CliOutcome { reports: vec![r], exit: 0 })
        }

        Command::Dist { input } => {
            let mut r = Report::new("dist", seed);
            if input.len() == 1 {
                let (parsed, provenance) = load(&input[0], &tol)?;
                let ensemble = expect_ensemble(parsed)?;
                let cq = build_cq_state(ensemble);
                r.set_inputs(&[provenance]);
                r.set_str("kind", "classical-quantum");
                r.set_num("trace_distance", cq_trace_distance(&cq)?.value);
            } else {
                let [a, b] = two_paths(input)?;
                let (pa, prov_a) = load(a, &tol)?;
                let (pb, prov_b) = load(b, &tol)?;
                r.set_inputs(&[prov_a, prov_b]);
                match (pa, pb) {
                    (ParsedInput::Probs(p), ParsedInput::Probs(q)) => {
                        r.set_str("kind", "classical");
                        r.set_num("statistical_distance", statistical_distance(&p, &q)?);
                        r.set_num("delta_c", delta_c(&p, &q)?);
                    }
                    (ParsedInput::Operator(rho), ParsedInput::Operator(sigma)) => {
                        r.set_str("kind", "quantum");
                        let d = trace_distance(&rho, &sigma)?;
                        r.set_num("trace_distance", d.value);
                        r.set_num("trace_norm_difference", trace_norm(&(rho.matrix() - sigma.matrix())));
                    }
                    _ => return Err(wrong_inputs("dist needs two probs, two operators, or one ensemble")),
                }
            }
            Ok(CliOutcome { reports: vec![r], exit: 0 })
        }

        Command::Pinsker { input, dims } => {
            let check = match input.len() {
                1 => {
                    let (parsed, _prov) = load(&input[0], &tol)?;
                    match parsed {
                        ParsedInput::Joint(j) => pinsker_mutual(&j),
                        ParsedInput::Operator(rho) => {
                            let d = parse_dims(dims, &rho)?;
                            pinsker_quantum_mutual(&rho, d)?
                        }
                        _ => return Err(wrong_inputs(
                            "pinsker with one input needs a joint or an operator document",
                        )),
                    }
                }
                2 => {
                    let (pa, _) = load(&input[0], &tol)?;
                    let (pb, _) = load(&input[1], &tol)?;
                    match (pa, pb) {
                        (ParsedInput::Probs(p), ParsedInput::Probs(q)) => pinsker_classical(&p, &q)?,
                        (ParsedInput::Operator(rho), ParsedInput::Operator(sigma)) => {
                            pinsker_quantum(&rho, &sigma)?
                        }
                        _ => return Err(wrong_inputs("pinsker needs matching input kinds")),
                    }
                }
                n => return Err(wrong_inputs(&format!("pinsker takes 1 or 2 inputs, got {n}"))),
            };
            let mut r = bound_check_report("pinsker", seed, &check);
            let provenance: Vec<(String, String)> = input
                .iter()
                .map(|p| Ok((p.display().to_string(), hex_digest(&std::fs::read(p)?))))
                .collect::<Result<_, Error>>()?;
            r.set_inputs(&provenance);
            // the bipartite case also reports the printed middle expression
            if check.theorem == "theorem-4" {
                let (parsed, _) = load(&input[0], &tol)?;
                if let ParsedInput::Operator(rho) = parsed {
                    let d = parse_dims(dims, &rho)?;
                    let printed = pinsker_quantum_mutual_printed(&rho, d)?;
                    r.set_num("printed_middle_rhs", printed.rhs);
                    r.set_bool("printed_middle_holds", printed.holds(1e-9));
                }
            }
            Ok(CliOutcome { reports: vec![r], exit: 0 })
        }

        Command::HolevoTrace { input } => {
            let (parsed, provenance) = load(input, &tol)?;
            let ensemble = expect_ensemble(parsed)?;
            let check = holevo_vs_trace(&ensemble);
            let mut r = bound_check_report("holevo-trace", seed, &check);
            r.set_inputs(&[provenance]);
            Ok(CliOutcome { reports: vec![r], exit: 0 })
        }

        Command::Helstrom { input, prior, max_iter } => {
            let mut r = Report::new("helstrom", seed);
            let mut exit = 0u8;
            if input.len() == 2 {
                let (pa, prov_a) = load(&input[0], &tol)?;
                let (pb, prov_b) = load(&input[1], &tol)?;
                r.set_inputs(&[prov_a, prov_b]);
                let (rho0, rho1) = match (pa, pb) {
                    (ParsedInput::Operator(a), ParsedInput::Operator(b)) => (a, b),
                    _ => return Err(wrong_inputs("binary helstrom needs two operator documents")),
                };
                let result = qpinsker::detection::helstrom_binary(*prior, &rho0, &rho1)?;
                let ensemble = Ensemble::new(
                    ProbDist::new(vec![*prior, 1.0 - prior], &tol)?,
                    vec![rho0, rho1],
                )?;
                r.set_str("kind", "binary");
                r.set_num("prior", *prior);
                r.set_num("p_e", result.p_e);
                r.set_num("p_d", result.p_d);
                r.set_num("residual", optimality_residual(&ensemble, &result.povm)?);
            } else {
                let [path] = one_path(input)?;
                let (parsed, provenance) = load(path, &tol)?;
                let ensemble = expect_ensemble(parsed)?;
                r.set_inputs(&[provenance]);
                let trace = optimize_detection_traced(&ensemble, cli.tol, *max_iter);
                r.set_str("kind", "ensemble");
                r.set_num("p_e", trace.result.p_e);
                r.set_num("p_d", trace.result.p_d);
                r.set_num("residual", trace.result.certificate_residual);
                r.set_usize("iterations", trace.iterations);
                r.set_bool("converged", trace.converged);
                if !trace.converged {
                    exit = 3;
                }
            }
            Ok(CliOutcome { reports: vec![r], exit })
        }

        Command::Accinfo { input, grid_points, restarts } => {
            let (parsed, provenance) = load(input, &tol)?;
            let ensemble = expect_ensemble(parsed)?;
            let cfg = SearchConfig {
                grid_points: *grid_points,
                restarts: *restarts,
                seed,
                ..SearchConfig::default()
            };
            let mut r = Report::new("accinfo", seed);
            r.set_inputs(&[provenance]);
            r.set_num("accessible_information_lower_bits", accessible_information(&ensemble, &cfg));
            r.set_num("holevo_upper_bits", holevo_information(&ensemble));
            Ok(CliOutcome { reports: vec![r], exit: 0 })
        }

        Command::Guess { input, max_iter } => {
            let (parsed, provenance) = load(input, &tol)?;
            match parsed {
                ParsedInput::Joint(j) => {
                    let g = classical_guess_bound(&j);
                    let mut r = guess_report("guess", seed, &g);
                    r.set_str("kind", "classical");
                    r.set_inputs(&[provenance]);
                    Ok(CliOutcome { reports: vec![r], exit: 0 })
                }
                ParsedInput::Ensemble { ensemble, key_bits } => {
                    let priors = ensemble.priors().clone();
                    let ke = match key_bits {
                        Some(bits) if priors.is_uniform(1e-12) => {
                            KeyEnsemble::from_key_bits(bits, ensemble.states().to_vec())?
                        }
                        _ => KeyEnsemble::new(ensemble.states().to_vec(), Some(priors))?,
                    };
                    let g = guess_bound_with(&ke, cli.tol, *max_iter)?;
                    let mut r = guess_report("guess", seed, &g);
                    r.set_str("kind", "quantum");
                    r.set_inputs(&[provenance]);
                    Ok(CliOutcome { reports: vec![r], exit: 0 })
                }
                _ => Err(wrong_inputs("guess needs an ensemble or a joint document")),
            }
        }

        Command::Verify { theorems, samples, dims, max_iter } => {
            if *samples < 1 {
                return Err(wrong_inputs("--samples must be at least 1"));
            }
            if dims.iter().any(|&d| d < 2) {
                return Err(wrong_inputs("--dims entries must be at least 2"));
            }
            let selection = parse_selection(theorems)?;
            let cfg = SuiteConfig {
                samples: *samples,
                seed,
                state_dims: dims.clone(),
                detection_tol: cli.tol,
                max_iter: *max_iter,
                ..SuiteConfig::default()
            };
            let verdict = run_verify(&selection, &cfg);
            let mut reports = Vec::new();
            for s in &verdict.bound_suites {
                let mut r = Report::new("verify", seed);
                r.set_str("type", "bound-suite");
                r.set_str("suite", s.suite);
                r.set_usize("instances", s.instances);
                r.set_num("min_slack", s.min_slack);
                r.set_usize("argmin_index", s.argmin_index);
                r.set_str("argmin_digest", &s.argmin_digest);
                if let Some(instance) = &s.argmin_instance {
                    r.set_str("argmin_instance", instance);
                }
                r.set_bool("pass", s.pass);
                reports.push(r);
            }
            for s in &verdict.identity_suites {
                let mut r = Report::new("verify", seed);
                r.set_str("type", "identity-suite");
                r.set_str("suite", s.suite);
                r.set_usize("instances", s.instances);
                r.set_num("max_abs_diff", s.max_abs_diff);
                r.set_usize("argmax_index", s.argmax_index);
                r.set_str("argmax_digest", &s.argmax_digest);
                if let Some(instance) = &s.argmax_instance {
                    r.set_str("argmax_instance", instance);
                }
                r.set_bool("pass", s.pass);
                reports.push(r);
            }
            let mut summary = Report::new("verify", seed);
            summary.set_str("type", "summary");
            summary.set_usize("samples", *samples);
            summary.set_usize("suites", verdict.bound_suites.len() + verdict.identity_suites.len());
            summary.set_bool("pass", verdict.pass());
            reports.push(summary);
            Ok(CliOutcome {
                reports,
                exit: if verdict.pass() { 0 } else { 2 },
            })
        }
    }
}

fn two_paths(input: &[PathBuf]) -> Result<[&PathBuf; 2], Error> {
    match input {
        [a, b] => Ok([a, b]),
        other => Err(wrong_inputs(&format!("expected 2 inputs, got {}", other.len()))),
    }
}

fn one_path(input: &[PathBuf]) -> Result<[&PathBuf; 1], Error> {
    match input {
        [a] => Ok([a]),
        other => Err(wrong_inputs(&format!("expected 1 input, got {}", other.len()))),
    }
}

fn expect_ensemble(parsed: ParsedInput) -> Result<Ensemble, Error> {
    match parsed {
        ParsedInput::Ensemble { ensemble, .. } => Ok(ensemble),
        other => Err(wrong_inputs(&format!(
            "expected an ensemble document, got {}",
            other.kind()
        ))),
    }
}

fn parse_dims(dims: &[usize], rho: &DensityOperator) -> Result<(usize, usize), Error> {
    match dims {
        [da, db] => {
            if *da < 2 || *db < 2 {
                return Err(wrong_inputs("--dims entries must be at least 2"));
            }
            if da * db != rho.dim() {
                return Err(Error::DimensionMismatch(da * db, rho.dim()));
            }
            Ok((*da, *db))
        }
        [] => Err(wrong_inputs("operator input needs --dims dA,dB")),
        other => Err(wrong_inputs(&format!("--dims takes 2 entries, got {}", other.len()))),
    }
}

fn parse_selection(theorems: &[String]) -> Result<SuiteSelection, Error> {
    if theorems.iter().any(|t| t == "all") {
        return Ok(SuiteSelection::All);
    }
    if theorems.iter().any(|t| t == "identities") && theorems.len() == 1 {
        return Ok(SuiteSelection::Identities);
    }
    let mut list = Vec::new();
    for t in theorems {
        let n: u8 = t
            .parse()
            .map_err(|_| wrong_inputs(&format!("unknown theorem selector: {t}")))?;
        if !(1..=7).contains(&n) {
            return Err(wrong_inputs(&format!("theorem number out of range: {n}")));
        }
        list.push(n);
    }
    Ok(SuiteSelection::Theorems(list))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let mut text = String::new();
            for report in &outcome.reports {
                match cli.format {
                    Format::Machine => {
                        text.push_str(&report.machine_line());
                        text.push('\n');
                    }
                    Format::Human => {
                        text.push_str(&report.human_lines());
                        text.push('\n');
                    }
                }
            }
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: failed to write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{text}");
            }
            ExitCode::from(outcome.exit)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
