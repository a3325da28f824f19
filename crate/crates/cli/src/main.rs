//! Command-line front end: packet enumeration, the real→p-adic
//! correspondence, orbit combinatorics, the translation calculus, and the
//! verification suites. All I/O is JSON with half-integers encoded as
//! twice-values under *_x2 keys.

use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use arthur_core::arith::{HalfInteger, Permutation};
use arthur_core::check;
use arthur_core::coherent::{self, FormalCombination};
use arthur_core::correspond::{self, RealCompleteParameter};
use arthur_core::orbits::{self, BlockInvolution, BlockStructure, InvolutionKind};
use arthur_core::packets;
use arthur_core::params::{
    target_group, InfinitesimalCharacter, RealArthurParameter, RealLParameter,
};

const EXIT_VALIDATION: u8 = 1;
const EXIT_MISMATCH: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "arthur", about = "Exact Arthur-packet combinatorics", version)]
struct Cli {
    /// Output format
    #[arg(long, global = true, default_value = "table", value_parser = ["json", "table"])]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Packet enumeration
    Packet {
        #[command(subcommand)]
        which: PacketCommand,
    },
    /// Map a complete parameter (or an Arthur parameter) to the p-adic side
    Correspond(CorrespondArgs),
    /// Orbit combinatorics on the parameter space of λ
    Orbits {
        #[command(subcommand)]
        which: OrbitCommand,
    },
    /// Apply a word of translation operators to Θ(λ)
    Translate(TranslateArgs),
    /// Verify an identity on a given parameter
    Verify {
        #[command(subcommand)]
        which: VerifyCommand,
    },
    /// Run a verification suite
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Subcommand)]
enum PacketCommand {
    /// Adams-Johnson packet of a regular real Arthur parameter
    Real {
        /// ψℝ as {"n":…,"blocks":[{"k":…,"m":…}],"parity":"good"|"bad"}
        #[arg(long)]
        psi: String,
    },
    /// Moeglin packet of a p-adic parameter with discrete diagonal restriction
    Padic {
        /// ψQp as {"blocks":[{"a":…,"b":…}],"dual":"orth"|"symp"}
        #[arg(long)]
        psi: String,
    },
    /// Label bookkeeping for a singular real Arthur parameter
    Singular {
        #[arg(long)]
        psi: String,
        #[arg(long)]
        delta: i64,
    },
}

#[derive(Args)]
struct CorrespondArgs {
    /// Real Arthur parameter: runs ψℝ ↦ ψQp and ι on its L-parameter
    #[arg(long, conflicts_with = "phi")]
    psi: Option<String>,
    /// Real L-parameter as {"characters":[{"t_x2":…,"s_x2":…},…]}
    #[arg(long)]
    phi: Option<String>,
    /// Character on the I⁺ components, as [[t_x2, sign], …]
    #[arg(long, requires = "phi")]
    epsilon: Option<String>,
    #[arg(long)]
    delta: i64,
}

#[derive(Subcommand)]
enum OrbitCommand {
    /// One canonical representative per K-orbit
    Enumerate {
        /// λ as {"entries_x2":[…]}
        #[arg(long)]
        lambda: String,
    },
    /// Decide whether two involutions lie in the same orbit
    Compare {
        #[arg(long)]
        lambda: String,
        /// 1-based image array, e.g. [2,1,3]
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: String,
    },
    /// The multisegment attached to an orbit representative
    Segment {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        s: String,
        #[arg(long)]
        delta: i64,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Member-by-member match of the real and p-adic packets of ψ
    Correspond {
        #[arg(long)]
        psi: String,
        #[arg(long)]
        delta: i64,
    },
}

#[derive(Args)]
struct TranslateArgs {
    /// Base weight as a JSON array of twice-values, e.g. [2,2]
    #[arg(long)]
    lambda: String,
    /// Operator word "j1,j2,…": 𝒯_{j1}∘𝒯_{j2}∘…, rightmost applied first
    #[arg(long)]
    word: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits 0 for --help/--version
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(EXIT_USAGE);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let json = cli.format == "json";
    match run(cli.command, json) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}

/// An argument value of "-" reads the payload from stdin.
fn read_arg(value: &str) -> anyhow::Result<String> {
    if value == "-" {
        let mut buf = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut buf).context("reading stdin")?;
        Ok(buf)
    } else {
        Ok(value.to_string())
    }
}

fn parse_psi_real(text: &str) -> anyhow::Result<RealArthurParameter> {
    serde_json::from_str(&read_arg(text)?).context("parsing real Arthur parameter")
}

fn parse_lambda(text: &str) -> anyhow::Result<InfinitesimalCharacter> {
    serde_json::from_str(&read_arg(text)?).context("parsing infinitesimal character")
}

fn parse_involution(
    text: &str,
    lambda: &InfinitesimalCharacter,
) -> anyhow::Result<BlockInvolution> {
    let perm: Permutation = serde_json::from_str(text).context("parsing permutation")?;
    let blocks = BlockStructure::from_inf_char(lambda);
    let kind = InvolutionKind::for_parity(lambda.parity());
    BlockInvolution::new(perm, blocks, kind).map_err(|e| anyhow!(e))
}

fn emit<T: serde::Serialize>(
    value: &T,
    json: bool,
    table: impl FnOnce(&T) -> String,
) -> anyhow::Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(value)?);
    } else {
        println!("{}", table(value));
    }
    Ok(())
}

fn run(command: Command, json: bool) -> anyhow::Result<ExitCode> {
    match command {
        Command::Packet { which } => run_packet(which, json),
        Command::Correspond(args) => run_correspond(args, json),
        Command::Orbits { which } => run_orbits(which, json),
        Command::Translate(args) => run_translate(args, json),
        Command::Verify { which } => run_verify(which, json),
        Command::Check { suite } => run_check(&suite, json),
    }
}

fn run_verify(which: VerifyCommand, json: bool) -> anyhow::Result<ExitCode> {
    match which {
        VerifyCommand::Correspond { psi, delta } => {
            let psi = parse_psi_real(&psi)?;
            let report =
                packets::verify_regular_correspondence(&psi, delta).map_err(|e| anyhow!(e))?;
            let ok = report.mismatches == 0 && report.epsilon_compatible;
            emit(&report, json, |report| {
                let mut out = format!(
                    "target {} | {} real members, {} p-adic members, {} mismatches\n",
                    report.target.describe(),
                    report.real_members,
                    report.padic_members,
                    report.mismatches
                );
                for m in &report.members {
                    out.push_str(&format!(
                        "l={:?} η={:?} U({},{}): {}{}\n",
                        m.label.l,
                        m.label.eta,
                        m.pure_form.0,
                        m.pure_form.1,
                        if m.matched { "matched" } else { "MISMATCH" },
                        if m.flipped {
                            " (via global η-flip)"
                        } else {
                            ""
                        },
                    ));
                }
                out
            })?;
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_MISMATCH)
            })
        }
    }
}

fn run_packet(which: PacketCommand, json: bool) -> anyhow::Result<ExitCode> {
    match which {
        PacketCommand::Real { psi } => {
            let psi = parse_psi_real(&psi)?;
            let members = packets::packet_regular_real(&psi).map_err(|e| anyhow!(e))?;
            emit(&members, json, |members| {
                let mut out = format!("{} members\n", members.len());
                out.push_str("label (l;η) | (p,q) per block | form | ε\n");
                for m in members {
                    out.push_str(&format!(
                        "l={:?} η={:?} | p={:?} q={:?} | U({},{}) | {:?}\n",
                        m.label.l,
                        m.label.eta,
                        m.pq.p,
                        m.pq.q,
                        m.pure_form.0,
                        m.pure_form.1,
                        m.epsilon
                    ));
                }
                out
            })?;
            Ok(ExitCode::SUCCESS)
        }
        PacketCommand::Padic { psi } => {
            let psi: arthur_core::params::PAdicArthurParameter =
                serde_json::from_str(&psi).context("parsing p-adic Arthur parameter")?;
            let members = packets::packet_ddr_padic(&psi).map_err(|e| anyhow!(e))?;
            emit(&members, json, |members| {
                let mut out = format!("{} members\n", members.len());
                for m in members {
                    out.push_str(&format!(
                        "l={:?} η={:?} | ε={:?} | {:?}\n",
                        m.label.l, m.label.eta, m.epsilon, m.complete.multisegment
                    ));
                }
                out
            })?;
            Ok(ExitCode::SUCCESS)
        }
        PacketCommand::Singular { psi, delta } => {
            let psi = parse_psi_real(&psi)?;
            let report = packets::packet_singular_labels(&psi, delta).map_err(|e| anyhow!(e))?;
            let all_agree = report.labels.iter().all(|l| l.predicates_agree);
            emit(&report, json, |report| {
                let mut out = format!(
                    "ψ≫ = {:?}, shifts {:?}, target {}\n",
                    report.psi_gg,
                    report.shifts,
                    report.target.describe()
                );
                for entry in &report.labels {
                    out.push_str(&format!(
                        "l={:?} η={:?} ε={:?} {}{}\n",
                        entry.label.l,
                        entry.label.eta,
                        entry.epsilon,
                        if entry.vanishes {
                            "vanishes"
                        } else {
                            "survives"
                        },
                        if entry.predicates_agree {
                            ""
                        } else {
                            "  [PREDICATES DISAGREE]"
                        },
                    ));
                }
                out
            })?;
            Ok(if all_agree {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_MISMATCH)
            })
        }
    }
}

fn run_correspond(args: CorrespondArgs, json: bool) -> anyhow::Result<ExitCode> {
    let delta = args.delta;
    if let Some(psi_text) = args.psi {
        let psi = parse_psi_real(&psi_text)?;
        let lambda = psi.inf_char();
        let tg = target_group(&lambda, delta).map_err(|e| anyhow!(e))?;
        let psi_p = correspond::psi_real_to_padic(&psi, delta).map_err(|e| anyhow!(e))?;
        let phi = arthur_core::params::associated_l_param_real(&psi);
        let m = correspond::iota_l(&phi, delta).map_err(|e| anyhow!(e))?;
        let value = serde_json::json!({
            "multisegment": m,
            "character": serde_json::Value::Null,
            "N": tg.big_n,
            "H": tg.describe(),
            "psi_padic": psi_p,
        });
        emit(&value, json, |v| {
            serde_json::to_string_pretty(v).unwrap_or_default()
        })?;
        return Ok(ExitCode::SUCCESS);
    }
    let phi_text = args.phi.ok_or_else(|| anyhow!("provide --psi or --phi"))?;
    let phi: RealLParameter = serde_json::from_str(&phi_text).context("parsing L-parameter")?;
    let lambda = phi.inf_char().map_err(|e| anyhow!(e))?;
    let tg = target_group(&lambda, delta).map_err(|e| anyhow!(e))?;
    let epsilon: correspond::RealCharacter = match args.epsilon {
        None => {
            // default: the trivial character on I⁺
            let structure = correspond::component_structure_real(&phi, lambda.parity());
            structure.i_plus().map(|c| (c.t, 1i8)).collect()
        }
        Some(text) => {
            let pairs: Vec<(i64, i8)> = serde_json::from_str(&text).context("parsing ε")?;
            pairs
                .into_iter()
                .map(|(t, s)| (HalfInteger::from_twice(t), s))
                .collect()
        }
    };
    let xi = RealCompleteParameter::new(phi, epsilon, lambda.parity()).map_err(|e| anyhow!(e))?;
    let (out, twin) = correspond::tilde_iota(&xi, delta, &tg).map_err(|e| anyhow!(e))?;
    let value = serde_json::json!({
        "multisegment": out.multisegment,
        "character": out.epsilon,
        "restriction_class_twin": twin,
        "N": tg.big_n,
        "H": tg.describe(),
    });
    emit(&value, json, |v| {
        serde_json::to_string_pretty(v).unwrap_or_default()
    })?;
    Ok(ExitCode::SUCCESS)
}

fn run_orbits(which: OrbitCommand, json: bool) -> anyhow::Result<ExitCode> {
    match which {
        OrbitCommand::Enumerate { lambda } => {
            let lambda = parse_lambda(&lambda)?;
            let orbits = orbits::enumerate_orbits(&lambda).map_err(|e| anyhow!(e))?;
            let rows: Vec<serde_json::Value> = orbits
                .iter()
                .map(|s| {
                    serde_json::json!({
                        "permutation": s.permutation(),
                        "incidence": s.incidence(),
                    })
                })
                .collect();
            emit(&rows, json, |rows| {
                let mut out = format!("{} orbits\n", rows.len());
                for r in rows {
                    out.push_str(&format!(
                        "s = {} A = {}\n",
                        r["permutation"], r["incidence"]
                    ));
                }
                out
            })?;
            Ok(ExitCode::SUCCESS)
        }
        OrbitCommand::Compare { lambda, s, t } => {
            let lambda = parse_lambda(&lambda)?;
            let s = parse_involution(&s, &lambda)?;
            let t = parse_involution(&t, &lambda)?;
            let fast = orbits::same_orbit(&s, &t).map_err(|e| anyhow!(e))?;
            let value = serde_json::json!({
                "same_orbit": fast,
                "incidence_s": s.incidence(),
                "incidence_t": t.incidence(),
            });
            emit(&value, json, |v| format!("same orbit: {}", v["same_orbit"]))?;
            Ok(ExitCode::SUCCESS)
        }
        OrbitCommand::Segment { lambda, s, delta } => {
            let lambda = parse_lambda(&lambda)?;
            let s = parse_involution(&s, &lambda)?;
            let m = orbits::iota_orbit(&s, &lambda, delta).map_err(|e| anyhow!(e))?;
            emit(&m, json, |m| format!("{m:?}"))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_translate(args: TranslateArgs, json: bool) -> anyhow::Result<ExitCode> {
    let twices: Vec<i64> = serde_json::from_str(&args.lambda).context("parsing λ")?;
    let lambda: Vec<HalfInteger> = twices.into_iter().map(HalfInteger::from_twice).collect();
    let word: Vec<usize> = args
        .word
        .split([',', ' '])
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<usize>().context("parsing word index"))
        .collect::<anyhow::Result<_>>()?;
    let start = FormalCombination::symbol(lambda.clone());
    let result = coherent::apply_word(&word, &lambda, &start).map_err(|e| anyhow!(e))?;
    // {symbol: coefficient} with symbols as comma-joined twice-values
    let terms: std::collections::BTreeMap<String, i64> = result
        .terms()
        .iter()
        .map(|(sym, &c)| {
            let key = sym
                .0
                .iter()
                .map(|x| x.twice().to_string())
                .collect::<Vec<_>>()
                .join(",");
            (key, c)
        })
        .collect();
    emit(&terms, json, |_| format!("{result:?}"))?;
    Ok(ExitCode::SUCCESS)
}

fn run_check(suite: &str, json: bool) -> anyhow::Result<ExitCode> {
    let Some(results) = check::suite_by_name(suite) else {
        eprintln!(
            "unknown suite '{suite}'; available: {}",
            check::suite_names().join(", ")
        );
        return Ok(ExitCode::from(EXIT_USAGE));
    };
    let mut all_ok = true;
    if json {
        println!("{}", serde_json::to_string_pretty(&results)?);
        all_ok = results.iter().all(|s| s.passed());
    } else {
        for suite_result in &results {
            for c in &suite_result.criteria {
                let status = if c.passed { "PASS" } else { "FAIL" };
                println!(
                    "[{status}] {}::{} — {}",
                    suite_result.suite, c.name, c.detail
                );
                if !c.passed {
                    all_ok = false;
                }
            }
        }
    }
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_MISMATCH)
    })
}
