//! Command-line front end. Exit codes: 0 = relation holds / success,
//! 1 = relation does not hold / a verification check failed,
//! 2 = usage, parse, or dimension errors.

use blackwell::channel::{Channel, DecisionProblem, Strategy};
use blackwell::exact_linear::Rat;
use blackwell::orders::{blackwell_compare, order_by_name, GarblingOutcome, Verdict};
use blackwell::polytope::{binary_join, binary_meet, PolytopeError};
use blackwell::textio;
use blackwell::verify;
use blackwell::zonotope::Zonotope;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::fs;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "blackwell", version, about = "Exact comparison of finite information channels")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderName {
    /// Garbling (Blackwell) order: mu = kappa lambda for stochastic lambda.
    Garbling,
    /// Zonotope inclusion.
    Zonotope,
    /// Dominance on decision problems with at most k actions.
    KDecision,
}

impl OrderName {
    fn as_str(self) -> &'static str {
        match self {
            OrderName::Garbling => "garbling",
            OrderName::Zonotope => "zonotope",
            OrderName::KDecision => "k-decision",
        }
    }
}

#[derive(Args)]
struct CompareArgs {
    /// Channel file for the (candidate) more informative channel.
    kappa: String,
    /// Channel file for the (candidate) less informative channel.
    mu: String,
    #[arg(long, value_enum, default_value_t = OrderName::Garbling)]
    order: OrderName,
    /// Number of actions for the k-decision order.
    #[arg(long, default_value_t = 2)]
    k: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Test whether the first channel dominates the second in a chosen order.
    Compare(CompareArgs),
    /// Optimal expected reward of a channel on a decision problem.
    Reward {
        /// Channel file.
        kappa: String,
        /// Prior file (one distribution over the inputs).
        prior: String,
        /// Reward matrix file (rows = inputs, columns = actions).
        reward: String,
    },
    /// Print a channel's zonotope: generators and vertices.
    Zonotope {
        /// Channel file.
        kappa: String,
    },
    /// Greatest lower bound of two binary-input channels (a representative).
    Meet {
        kappa: String,
        mu: String,
    },
    /// Least upper bound of two binary-input channels (a representative).
    Join {
        kappa: String,
        mu: String,
    },
    /// Re-derive the embedded worked examples and check every claim.
    VerifyPaper,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_channel(path: &str) -> Result<Channel, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    textio::parse_channel(&text).map_err(|e| format!("{path}: {e}"))
}

fn rat_str(r: &Rat) -> String {
    r.to_string()
}

fn matrix_json(c: &Channel) -> Value {
    let rows: Vec<Vec<String>> = (0..c.input_size())
        .map(|x| (0..c.output_size()).map(|y| rat_str(c.entry(x, y))).collect())
        .collect();
    json!(rows)
}

fn points_json(points: &[Vec<Rat>]) -> Value {
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| p.iter().map(rat_str).collect())
        .collect();
    json!(rows)
}

fn emit(format: Format, text: String, value: Value) {
    match format {
        Format::Text => print!("{text}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("serializable")),
    }
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    match &cli.command {
        Command::Compare(args) => cmd_compare(cli.format, args),
        Command::Reward {
            kappa,
            prior,
            reward,
        } => cmd_reward(cli.format, kappa, prior, reward),
        Command::Zonotope { kappa } => cmd_zonotope(cli.format, kappa),
        Command::Meet { kappa, mu } => cmd_meet_join(cli.format, kappa, mu, true),
        Command::Join { kappa, mu } => cmd_meet_join(cli.format, kappa, mu, false),
        Command::VerifyPaper => cmd_verify_paper(cli.format),
    }
}

fn cmd_compare(format: Format, args: &CompareArgs) -> Result<ExitCode, String> {
    let kappa = read_channel(&args.kappa)?;
    let mu = read_channel(&args.mu)?;
    if args.order == OrderName::KDecision && args.k == 0 {
        return Err("--k must be at least 1".into());
    }

    // The garbling path reports the witness or certificate; the others just
    // decide the relation through the registry.
    let (holds, mut text, mut detail) = match args.order {
        OrderName::Garbling => {
            let result = blackwell_compare(&kappa, &mu).map_err(|e| e.to_string())?;
            let mut text = String::new();
            let mut detail = serde_json::Map::new();
            match &result.forward {
                GarblingOutcome::Garbles(w) => {
                    text.push_str("witness factor:\n");
                    text.push_str(&textio::channel_to_text(&w.lambda));
                    detail.insert("witness".into(), matrix_json(&w.lambda));
                }
                GarblingOutcome::Refuted { certificate } => {
                    text.push_str(&format!(
                        "infeasibility certificate: {}\n",
                        textio::vector_to_text(certificate)
                    ));
                    detail.insert(
                        "certificate".into(),
                        json!(certificate.iter().map(rat_str).collect::<Vec<_>>()),
                    );
                }
            }
            let verdict = match result.verdict {
                Verdict::Equivalent => "equivalent",
                Verdict::StrictlyMore => "strictly more informative",
                Verdict::StrictlyLess => "strictly less informative",
                Verdict::Incomparable => "incomparable",
            };
            text.push_str(&format!("two-sided verdict: {verdict}\n"));
            detail.insert("verdict".into(), json!(verdict));
            (result.forward.holds(), text, detail)
        }
        _ => {
            let rel = order_by_name(args.order.as_str(), args.k)
                .ok_or_else(|| format!("unknown order {}", args.order.as_str()))?;
            let holds = rel.holds(&kappa, &mu).map_err(|e| e.to_string())?;
            (holds, String::new(), serde_json::Map::new())
        }
    };

    let name = match args.order {
        OrderName::KDecision => format!("{}(k={})", args.order.as_str(), args.k),
        _ => args.order.as_str().to_string(),
    };
    let headline = format!(
        "{name}: {}\n",
        if holds { "holds" } else { "does not hold" }
    );
    text.insert_str(0, &headline);
    detail.insert("order".into(), json!(name));
    detail.insert("holds".into(), json!(holds));
    emit(format, text, Value::Object(detail));
    Ok(ExitCode::from(if holds { 0 } else { 1 }))
}

fn cmd_reward(
    format: Format,
    kappa_path: &str,
    prior_path: &str,
    reward_path: &str,
) -> Result<ExitCode, String> {
    let kappa = read_channel(kappa_path)?;
    let prior = fs::read_to_string(prior_path)
        .map_err(|e| format!("{prior_path}: {e}"))
        .and_then(|t| textio::parse_prior(&t).map_err(|e| format!("{prior_path}: {e}")))?;
    let reward = fs::read_to_string(reward_path)
        .map_err(|e| format!("{reward_path}: {e}"))
        .and_then(|t| textio::parse_reward(&t).map_err(|e| format!("{reward_path}: {e}")))?;
    let dp = DecisionProblem::new(prior, reward).map_err(|e| e.to_string())?;
    let (value, strat) =
        blackwell::channel::optimal_reward(&kappa, &dp).map_err(|e| e.to_string())?;
    let actions = match &strat {
        Strategy::Deterministic(map) => map.clone(),
        Strategy::Stochastic(_) => unreachable!("optimal strategy is deterministic"),
    };
    let text = format!(
        "optimal expected reward: {}\noptimal strategy (output -> action): {}\n",
        rat_str(&value),
        actions
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    let value_json = json!({
        "optimal_reward": rat_str(&value),
        "strategy": actions,
    });
    emit(format, text, value_json);
    Ok(ExitCode::from(0))
}

fn cmd_zonotope(format: Format, kappa_path: &str) -> Result<ExitCode, String> {
    let kappa = read_channel(kappa_path)?;
    let z = Zonotope::of_channel(&kappa);
    let vertices = z.try_vertices().map_err(|e| e.to_string())?;
    let mut text = String::new();
    text.push_str("generators (one per line):\n");
    for g in z.generators() {
        text.push_str(&textio::vector_to_text(g));
        text.push('\n');
    }
    text.push_str("vertices (one per line):\n");
    for v in vertices {
        text.push_str(&textio::vector_to_text(v));
        text.push('\n');
    }
    let value = json!({
        "generators": points_json(z.generators()),
        "vertices": points_json(vertices),
    });
    emit(format, text, value);
    Ok(ExitCode::from(0))
}

fn cmd_meet_join(
    format: Format,
    kappa_path: &str,
    mu_path: &str,
    meet: bool,
) -> Result<ExitCode, String> {
    let kappa = read_channel(kappa_path)?;
    let mu = read_channel(mu_path)?;
    let result = if meet {
        binary_meet(&kappa, &mu)
    } else {
        binary_join(&kappa, &mu)
    };
    let out = result.map_err(|e| match e {
        PolytopeError::WrongInputDimension(n) => format!(
            "channels with {n} inputs are not supported: greatest lower and least upper \
             bounds need not exist for more than two inputs; only the binary case is computed"
        ),
        other => other.to_string(),
    })?;
    let text = textio::channel_to_text(&out);
    let value = json!({
        "operation": if meet { "meet" } else { "join" },
        "channel": matrix_json(&out),
    });
    emit(format, text, value);
    Ok(ExitCode::from(0))
}

fn cmd_verify_paper(format: Format) -> Result<ExitCode, String> {
    let results = verify::run_all(&blackwell::data::lattice_kappa1());
    let mut text = String::new();
    let mut all = true;
    let mut first_failed: Option<String> = None;
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        text.push_str(&format!("[{status}] {}: {}\n", r.name, r.detail));
        if !r.passed {
            all = false;
            first_failed.get_or_insert_with(|| r.name.clone());
        }
    }
    if let Some(name) = &first_failed {
        text.push_str(&format!("first failing check: {name}\n"));
    }
    let value = json!({
        "passed": all,
        "checks": results
            .iter()
            .map(|r| json!({"name": r.name, "passed": r.passed, "detail": r.detail}))
            .collect::<Vec<_>>(),
        "first_failed": first_failed,
    });
    emit(format, text, value);
    Ok(ExitCode::from(if all { 0 } else { 1 }))
}
