//! Batch command-line interface: instance ingestion, norm and coherency
//! queries with certificate emission, gallery export, and the seeded
//! property suite.
//!
//! Exit codes: 0 success/coherent, 1 property violation, 2 input error,
//! 3 incoherent.

mod suite;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use majonorm::coherence::{
    check_coherent, verify_coherence_certificate, verify_incoherence_witness, CoherenceVerdict,
};
use majonorm::functionals::{op_norm, Functional};
use majonorm::gallery::{make_delta_instance, make_f2_ball_instance, make_lex_instances};
use majonorm::majorize::{
    in_ideal, norm_p, norm_p_lex2, order_unit_norm, InstanceSpec, MajorizedSpace,
};
use majonorm::ratlin::{RVector, Rat};

#[derive(Parser)]
#[command(
    name = "majonorm",
    about = "Exact majorizing norms, order-unit norms, coherency certificates, and operator norms",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate p_M at a vector
    Norm {
        file: PathBuf,
        /// Vector as a JSON array of rationals, e.g. '["1","-1/2"]'
        #[arg(long)]
        vector: String,
        /// Also print the optimal coefficient witness
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        json: bool,
    },
    /// Test membership of a vector in E_M
    Member {
        file: PathBuf,
        #[arg(long)]
        vector: String,
        #[arg(long)]
        json: bool,
    },
    /// Decide coherency of M (exit 0 coherent, 3 incoherent)
    Coherent {
        file: PathBuf,
        /// Print the verified certificate as JSON
        #[arg(long)]
        emit_certificate: bool,
        #[arg(long)]
        json: bool,
    },
    /// Operator norm of a functional on (E_M, p_M)
    Opnorm {
        file: PathBuf,
        /// Covector as a JSON array of rationals
        #[arg(long)]
        functional: String,
        #[arg(long)]
        json: bool,
    },
    /// Order-unit norm ‖v‖_u over the instance cone
    Unitnorm {
        file: PathBuf,
        #[arg(long)]
        vector: String,
        /// Order unit as a JSON array; defaults to the file's order_unit
        #[arg(long)]
        unit: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// List or export the named instances
    Gallery {
        #[command(subcommand)]
        action: GalleryCmd,
    },
    /// Run the seeded cross-module property suite
    Suite {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum GalleryCmd {
    List,
    Emit { name: String },
}

/// On-disk instance: the space plus optional payload sections.
#[derive(Debug, Serialize, Deserialize)]
struct InstanceFile {
    #[serde(flatten)]
    spec: InstanceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vectors: Option<Vec<Vec<Rat>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    functionals: Option<Vec<Vec<Rat>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order_unit: Option<Vec<Rat>>,
}

/// Everything user-input related maps to exit code 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn load(file: &PathBuf) -> Result<(InstanceFile, MajorizedSpace), InputError> {
    let raw = std::fs::read_to_string(file)
        .map_err(|e| InputError(format!("cannot read {}: {e}", file.display())))?;
    let parsed: InstanceFile =
        serde_json::from_str(&raw).map_err(|e| InputError(format!("malformed instance: {e}")))?;
    let space = parsed
        .spec
        .to_space()
        .map_err(|e| InputError(format!("invalid instance: {e}")))?;
    Ok((parsed, space))
}

fn parse_vector(s: &str, dim: usize) -> Result<RVector, InputError> {
    let entries: Vec<Rat> =
        serde_json::from_str(s).map_err(|e| InputError(format!("malformed vector: {e}")))?;
    if entries.len() != dim {
        return Err(InputError(format!(
            "vector has {} entries, instance dimension is {dim}",
            entries.len()
        )));
    }
    Ok(RVector::new(entries))
}

fn cmd_norm(file: &PathBuf, vector: &str, witness: bool, json: bool) -> Result<u8, InputError> {
    let (_, space) = load(file)?;
    let v = parse_vector(vector, space.dim())?;
    if space.cone().is_lex2() {
        let r = norm_p_lex2(space.set(), &v)?;
        if json {
            println!("{}", serde_json::to_string(&r).expect("serializable"));
        } else {
            println!("{}", r.value);
            if r.value.is_finite() && !r.attained {
                println!("infimum not attained");
            }
        }
        return Ok(0);
    }
    let r = norm_p(&space, &v)?;
    if json {
        let mut out = r.clone();
        if !witness {
            out.witness = None;
        }
        println!("{}", serde_json::to_string(&out).expect("serializable"));
    } else {
        println!("{}", r.value);
        if witness {
            if let Some(t) = &r.witness {
                println!(
                    "witness: {}",
                    serde_json::to_string(t).expect("serializable")
                );
            }
        }
    }
    Ok(0)
}

fn cmd_member(file: &PathBuf, vector: &str, json: bool) -> Result<u8, InputError> {
    let (_, space) = load(file)?;
    let v = parse_vector(vector, space.dim())?;
    let inside = in_ideal(&space, &v)?;
    if json {
        println!("{{\"member\":{inside}}}");
    } else {
        println!("{inside}");
    }
    Ok(0)
}

fn cmd_coherent(file: &PathBuf, emit_certificate: bool, json: bool) -> Result<u8, InputError> {
    let (_, space) = load(file)?;
    let verdict = check_coherent(&space)?;
    // re-verify before printing; a failure here is a solver bug, not
    // user error
    let verified = match &verdict {
        CoherenceVerdict::Incoherent { witness } => verify_incoherence_witness(&space, witness)?,
        CoherenceVerdict::Coherent { phi, .. } => verify_coherence_certificate(&space, phi)?,
    };
    if !verified {
        eprintln!("internal error: certificate failed re-verification");
        return Ok(1);
    }
    if json || emit_certificate {
        println!("{}", serde_json::to_string(&verdict).expect("serializable"));
    } else {
        println!(
            "{}",
            if verdict.is_coherent() {
                "coherent"
            } else {
                "incoherent"
            }
        );
    }
    Ok(if verdict.is_coherent() { 0 } else { 3 })
}

fn cmd_opnorm(file: &PathBuf, functional: &str, json: bool) -> Result<u8, InputError> {
    let (_, space) = load(file)?;
    let psi = Functional::new(parse_vector(functional, space.dim())?);
    let value = op_norm(&space, &psi)?;
    if json {
        println!("{{\"op_norm\":\"{value}\"}}");
    } else {
        println!("{value}");
    }
    Ok(0)
}

fn cmd_unitnorm(
    file: &PathBuf,
    vector: &str,
    unit: Option<&str>,
    json: bool,
) -> Result<u8, InputError> {
    let (parsed, space) = load(file)?;
    let v = parse_vector(vector, space.dim())?;
    let u = match (unit, &parsed.order_unit) {
        (Some(s), _) => parse_vector(s, space.dim())?,
        (None, Some(entries)) => {
            if entries.len() != space.dim() {
                return Err(InputError("order_unit has the wrong dimension".into()));
            }
            RVector::new(entries.clone())
        }
        (None, None) => {
            return Err(InputError(
                "no order unit: pass --unit or add an order_unit section".into(),
            ))
        }
    };
    let value = order_unit_norm(space.cone(), &u, &v)?;
    if json {
        println!("{{\"unit_norm\":\"{value}\"}}");
    } else {
        println!("{value}");
    }
    Ok(0)
}

fn gallery_names() -> Vec<(String, String)> {
    vec![
        (
            "delta-<n>".into(),
            "orthant with the delta basis; p_M is the l1 norm (any n ≥ 1)".into(),
        ),
        (
            "f2-ball-<L>".into(),
            "free-group ball with three indicator generators; incoherent (any L ≥ 2)".into(),
        ),
        (
            "lex-point".into(),
            "lex plane, single generator (1,0); open norm infimum at (0,1)".into(),
        ),
        (
            "lex-pair".into(),
            "lex plane, M = {(1,1),(0,1)}; incoherent".into(),
        ),
    ]
}

fn gallery_emit(name: &str) -> Result<InstanceSpec, InputError> {
    if let Some(n) = name.strip_prefix("delta-") {
        let n: usize = n.parse().map_err(|_| InputError(format!("bad size in {name:?}")))?;
        return Ok(InstanceSpec::from_space(&make_delta_instance(n)?.space));
    }
    if let Some(radius) = name.strip_prefix("f2-ball-") {
        let radius: usize = radius
            .parse()
            .map_err(|_| InputError(format!("bad radius in {name:?}")))?;
        return Ok(InstanceSpec::from_space(&make_f2_ball_instance(radius)?.space));
    }
    for inst in make_lex_instances()? {
        if inst.name == name {
            return Ok(InstanceSpec::from_space(&inst.space));
        }
    }
    Err(InputError(format!("unknown gallery instance {name:?}")))
}

fn run() -> Result<u8, InputError> {
    match Cli::parse().cmd {
        Cmd::Norm {
            file,
            vector,
            witness,
            json,
        } => cmd_norm(&file, &vector, witness, json),
        Cmd::Member { file, vector, json } => cmd_member(&file, &vector, json),
        Cmd::Coherent {
            file,
            emit_certificate,
            json,
        } => cmd_coherent(&file, emit_certificate, json),
        Cmd::Opnorm {
            file,
            functional,
            json,
        } => cmd_opnorm(&file, &functional, json),
        Cmd::Unitnorm {
            file,
            vector,
            unit,
            json,
        } => cmd_unitnorm(&file, &vector, unit.as_deref(), json),
        Cmd::Gallery { action } => match action {
            GalleryCmd::List => {
                for (name, blurb) in gallery_names() {
                    println!("{name}\t{blurb}");
                }
                Ok(0)
            }
            GalleryCmd::Emit { name } => {
                let spec = gallery_emit(&name)?;
                println!("{}", serde_json::to_string(&spec).expect("serializable"));
                Ok(0)
            }
        },
        Cmd::Suite { seed, json } => Ok(suite::run_suite(seed, json)),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
