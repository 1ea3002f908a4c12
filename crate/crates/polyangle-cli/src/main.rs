//! polyangle: external angles, curvature measures, Grassmannian weight
//! classification and partition combinatorics from the command line.
//!
//! Every Monte Carlo subcommand requires an explicit --seed; identical
//! inputs and seed reproduce identical reports. Exit status is 0 for a
//! clean run (and passing verdicts), 2 when a verdict fails, 1 for usage
//! or input errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::Digest;

use polyangle::acceptance;
use polyangle::cones::AngleOpts;
use polyangle::crofton::{crofton_estimate, vk_action, FlatMeasure};
use polyangle::curvmeas::{
    direct_constcoeff, evaluate, intrinsic_volumes, steiner_check, weights_from_json,EvalOpts,
    WeightSpec,
};
use polyangle::grassrank::{
    constcoeff_weight_rank, dim_formula, fit_quadratic, restriction_rank, sample_grassmann,
    strichartz_vector, HighestWeightSpec,
};
use polyangle::polytope::{BorelBox, Polytope};
use polyangle::repcomb::{
    tensor_difference_dim_check, littlewood_restrict, lr_coefficient, parse_partition, so_branch_dim_check,
    tensor_decompose, weyl_dim_sl, weyl_dim_so, SOWeight,
};
use polyangle::{BiGradedForm, Frame, PolyCone};

#[derive(Parser)]
#[command(name = "polyangle", version, about = "polytope angle and curvature workbench")]
struct Cli {
    /// Worker threads for Monte Carlo pools (default: all cores). Results
    /// do not depend on this by substream design.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "FILE")]
    json_out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SeedArgs {
    /// Monte Carlo sample count.
    #[arg(long, default_value = "200000", value_parser = parse_samples)]
    samples: u64,
    /// RNG seed (required: no hidden entropy).
    #[arg(long)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// External angle of a polyhedral cone.
    Angle {
        /// Cone JSON file: {"n", "generators", "lineality"}.
        #[arg(long)]
        cone: PathBuf,
        #[command(flatten)]
        mc: SeedArgs,
        /// Force the Monte Carlo estimator over the exact branches.
        #[arg(long)]
        force_mc: bool,
    },
    /// Face lattice of a polytope.
    Faces {
        #[arg(long)]
        polytope: PathBuf,
    },
    /// Intrinsic volumes V_0..V_dim by the face-sum formula.
    Intrinsic {
        #[arg(long)]
        polytope: PathBuf,
        #[command(flatten)]
        mc: SeedArgs,
    },
    /// Tube-volume check of the Steiner polynomial.
    Steiner {
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long)]
        eps: f64,
        #[command(flatten)]
        mc: SeedArgs,
        /// Verdict threshold in combined standard errors.
        #[arg(long, default_value = "3.0")]
        tol: f64,
    },
    /// Face-sum curvature measure evaluation for weights from a file.
    Evaluate {
        #[arg(long)]
        weights: PathBuf,
        #[arg(long)]
        polytope: PathBuf,
        /// Window "lo1,lo2,...:hi1,hi2,..." (default: all of space).
        #[arg(long, value_name = "BOX")]
        window: Option<String>,
        #[command(flatten)]
        mc: SeedArgs,
    },
    /// Direct normal-disc integration of a constant-coefficient form.
    DirectCc {
        #[arg(long)]
        omega: PathBuf,
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long, value_name = "BOX")]
        window: Option<String>,
        #[command(flatten)]
        mc: SeedArgs,
    },
    /// Numerical rank of the quadratic restriction space on Grass(k, n).
    ClassifyRank {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        mc: SeedArgs,
        /// Also rank the constant-coefficient weight functions.
        #[arg(long)]
        with_weights: bool,
        /// Number of random forms for --with-weights.
        #[arg(long)]
        forms: Option<usize>,
    },
    /// Determinantal highest-weight function values.
    Strichartz {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Weight entries "m1,m2,..." (k of them).
        #[arg(long)]
        m: String,
        /// Evaluate on the built-in family plane at this angle.
        #[arg(long)]
        phi: Option<f64>,
        /// Or on a frame file {"n", "vectors": [[...], ...]}.
        #[arg(long)]
        frame: Option<PathBuf>,
    },
    /// Least-squares quadratic fit of a weight over a Grassmannian sample.
    FitQuadratic {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        weights: PathBuf,
        #[command(flatten)]
        mc: SeedArgs,
    },
    /// Littlewood-Richardson coefficient N_{lambda, mu, nu}.
    Lr {
        lambda: String,
        mu: String,
        nu: String,
        /// Print the full tensor decomposition at this many parts.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Weyl dimension of an irreducible representation.
    WeylDim {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        n: usize,
        /// Group family: sl (partitions) or so (signed weights).
        #[arg(long, default_value = "sl")]
        group: String,
    },
    /// Stable-range restriction multiplicities from GL(n) to O(n).
    Branch {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        n: usize,
    },
    /// Exact dimension identities up to nmax.
    LemmaChecks {
        #[arg(long, default_value = "8")]
        nmax: usize,
    },
    /// Crofton estimate of V_k by random flats.
    Crofton {
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        mc: SeedArgs,
    },
    /// Flat average of a curvature measure of the slices.
    VkAction {
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long)]
        k: usize,
        /// Degree of the Federer weight applied to each slice.
        #[arg(long)]
        degree: usize,
        #[arg(long, value_name = "BOX")]
        window: Option<String>,
        #[command(flatten)]
        mc: SeedArgs,
    },
    /// Run the acceptance criteria.
    VerifyAll {
        /// Run a single criterion ("1".."10").
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Serialize)]
struct RunReport {
    command: String,
    inputs: BTreeMap<String, String>,
    seed: Option<u64>,
    results: serde_json::Value,
    verdict: Option<bool>,
    wall_time_s: f64,
}

fn parse_samples(s: &str) -> Result<u64, String> {
    // accept 1000000, 1e6, 2.5e5
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 1.0 && v.is_finite() => Ok(v as u64),
        _ => Err(format!("invalid sample count '{s}'")),
    }
}

fn read_input(path: &PathBuf, inputs: &mut BTreeMap<String, String>) -> anyhow::Result<String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
    let mut hasher = sha2::Sha256::new();
    hasher.update(text.as_bytes());
    let digest = hex_prefix(&hasher.finalize());
    inputs.insert(path.display().to_string(), digest);
    Ok(text)
}

fn hex_prefix(bytes: &[u8]) -> String {
    bytes.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn parse_window(s: Option<&String>, n: usize) -> anyhow::Result<BorelBox> {
    let Some(s) = s else {
        return Ok(BorelBox::All);
    };
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| anyhow::anyhow!("window must be 'lo1,lo2,...:hi1,hi2,...'"))?;
    let parse_vec = |part: &str| -> anyhow::Result<Vec<f64>> {
        part.split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|e| anyhow::anyhow!("bad window: {e}")))
            .collect()
    };
    let lo = parse_vec(lo)?;
    let hi = parse_vec(hi)?;
    if lo.len() != n || hi.len() != n {
        anyhow::bail!("window needs {n} coordinates per corner");
    }
    Ok(BorelBox::aligned(lo, hi)?)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0u8,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if rayon::ThreadPoolBuilder::new().num_threads(t).build_global().is_err() {
            eprintln!("warning: thread pool already initialized");
        }
    }
    let start = std::time::Instant::now();
    let mut inputs = BTreeMap::new();
    let command_name = command_name(&cli.command);
    match run(&cli.command, &mut inputs) {
        Ok((results, seed, verdict)) => {
            let report = RunReport {
                command: command_name,
                inputs,
                seed,
                results,
                verdict,
                wall_time_s: start.elapsed().as_secs_f64(),
            };
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            println!("{text}");
            if let Some(path) = &cli.json_out {
                if let Err(e) = std::fs::File::create(path).and_then(|mut f| f.write_all(text.as_bytes())) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            match verdict {
                Some(false) => ExitCode::from(2),
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Angle { .. } => "angle",
        Command::Faces { .. } => "faces",
        Command::Intrinsic { .. } => "intrinsic",
        Command::Steiner { .. } => "steiner",
        Command::Evaluate { .. } => "evaluate",
        Command::DirectCc { .. } => "direct-cc",
        Command::ClassifyRank { .. } => "classify-rank",
        Command::Strichartz { .. } => "strichartz",
        Command::FitQuadratic { .. } => "fit-quadratic",
        Command::Lr { .. } => "lr",
        Command::WeylDim { .. } => "weyl-dim",
        Command::Branch { .. } => "branch",
        Command::LemmaChecks { .. } => "lemma-checks",
        Command::Crofton { .. } => "crofton",
        Command::VkAction { .. } => "vk-action",
        Command::VerifyAll { .. } => "verify-all",
    }
    .to_string()
}

type CommandOutput = (serde_json::Value, Option<u64>, Option<bool>);

fn run(cmd: &Command, inputs: &mut BTreeMap<String, String>) -> anyhow::Result<CommandOutput> {
    match cmd {
        Command::Angle { cone, mc, force_mc } => {
            let text = read_input(cone, inputs)?;
            let c = PolyCone::from_json(&text)?;
            let est = if *force_mc {
                c.external_angle_mc(mc.samples, mc.seed)
            } else {
                c.external_angle(AngleOpts { samples: mc.samples, seed: mc.seed })
            };
            Ok((serde_json::to_value(est)?, Some(mc.seed), None))
        }
        Command::Faces { polytope } => {
            let text = read_input(polytope, inputs)?;
            let p = Polytope::from_json(&text)?;
            let mut by_dim: BTreeMap<usize, usize> = BTreeMap::new();
            let mut faces = Vec::new();
            for f in p.face_lattice() {
                *by_dim.entry(f.dim).or_default() += 1;
                faces.push(serde_json::json!({
                    "dim": f.dim,
                    "vertices": f.vertex_indices,
                }));
            }
            let results = serde_json::json!({
                "dim": p.dim(),
                "vertex_count": p.vertices().len(),
                "counts_by_dim": by_dim,
                "euler_characteristic": p.euler_characteristic(),
                "faces": faces,
            });
            Ok((results, None, None))
        }
        Command::Intrinsic { polytope, mc } => {
            let text = read_input(polytope, inputs)?;
            let p = Polytope::from_json(&text)?;
            let vols = intrinsic_volumes(
                &p,
                EvalOpts { angle_samples: mc.samples, volume_samples: mc.samples, seed: mc.seed },
            )?;
            let results = serde_json::json!({
                "V": vols.iter().map(|(v, _)| *v).collect::<Vec<f64>>(),
                "sigma": vols.iter().map(|(_, s)| *s).collect::<Vec<f64>>(),
            });
            Ok((results, Some(mc.seed), None))
        }
        Command::Steiner { polytope, eps, mc, tol } => {
            let text = read_input(polytope, inputs)?;
            let p = Polytope::from_json(&text)?;
            let check = steiner_check(&p, *eps, mc.samples, mc.seed)?;
            let sigma = (check.mc_sigma.powi(2) + check.steiner_sigma.powi(2)).sqrt();
            let pass = check.residual < tol * sigma;
            Ok((serde_json::to_value(&check)?, Some(mc.seed), Some(pass)))
        }
        Command::Evaluate { weights, polytope, window, mc } => {
            let wtext = read_input(weights, inputs)?;
            let ptext = read_input(polytope, inputs)?;
            let ws = weights_from_json(&wtext)?;
            let p = Polytope::from_json(&ptext)?;
            let u = parse_window(window.as_ref(), p.n())?;
            let ev = evaluate(
                &ws,
                &p,
                &u,
                EvalOpts { angle_samples: mc.samples, volume_samples: mc.samples, seed: mc.seed },
            )?;
            Ok((serde_json::to_value(&ev)?, Some(mc.seed), None))
        }
        Command::DirectCc { omega, polytope, window, mc } => {
            let otext = read_input(omega, inputs)?;
            let ptext = read_input(polytope, inputs)?;
            let form = BiGradedForm::from_json(&otext)?;
            let p = Polytope::from_json(&ptext)?;
            let u = parse_window(window.as_ref(), p.n())?;
            let ev = direct_constcoeff(&form, &p, &u, mc.samples, mc.seed)?;
            Ok((serde_json::to_value(&ev)?, Some(mc.seed), None))
        }
        Command::ClassifyRank { n, k, mc, with_weights, forms } => {
            let nn = polyangle::comb::binomial(*n, *k);
            let min_samples = 2 * (nn * (nn + 1) / 2);
            let samples = (mc.samples as usize).max(min_samples);
            let report = restriction_rank(*n, *k, samples, mc.seed)?;
            let pass = report.rank as u64 == report.expected;
            let mut results = serde_json::json!({
                "n": n,
                "k": k,
                "expected_dim": report.expected,
                "rank": report.rank,
                "singular_value_gap": report.gap,
                "samples": report.samples,
                "verdict": if pass { "pass" } else { "fail" },
            });
            let mut all_pass = pass;
            if *with_weights {
                let expected = dim_formula(*n, *k)?;
                let forms = forms.unwrap_or(2 * expected as usize + 8);
                let wr = constcoeff_weight_rank(*n, *k, forms, samples, mc.seed ^ 0x77)?;
                let wpass = wr.rank as u64 == wr.expected && wr.max_span_residual < 1e-8;
                all_pass &= wpass;
                results["weights"] = serde_json::json!({
                    "rank": wr.rank,
                    "max_span_residual": wr.max_span_residual,
                    "forms": wr.forms,
                    "verdict": if wpass { "pass" } else { "fail" },
                });
            }
            Ok((results, Some(mc.seed), Some(all_pass)))
        }
        Command::Strichartz { n, k, m, phi, frame } => {
            let entries: Vec<i64> = m
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|e| anyhow::anyhow!("bad weight list: {e}"))?;
            let spec = HighestWeightSpec::new(entries, *n, *k)?;
            let fr = match (phi, frame) {
                (Some(phi), None) => polyangle::grassrank::obstruction_frame(*n, *k, *phi)?,
                (None, Some(path)) => {
                    let text = read_input(path, inputs)?;
                    let v: serde_json::Value = serde_json::from_str(&text)
                        .map_err(|e| anyhow::anyhow!("bad frame file: {e}"))?;
                    let vectors: Vec<Vec<f64>> =
                        serde_json::from_value(v.get("vectors").cloned().unwrap_or_default())
                            .map_err(|e| anyhow::anyhow!("bad frame vectors: {e}"))?;
                    Frame::new(*n, vectors)?
                }
                _ => anyhow::bail!("provide exactly one of --phi or --frame"),
            };
            let value = strichartz_vector(&spec, &fr)?;
            let results = serde_json::json!({
                "re": value.re,
                "im": value.im,
                "abs": value.norm(),
            });
            Ok((results, None, None))
        }
        Command::FitQuadratic { n, k, weights, mc } => {
            let wtext = read_input(weights, inputs)?;
            let ws = weights_from_json(&wtext)?;
            if ws.len() != 1 {
                anyhow::bail!("fit-quadratic takes exactly one weight");
            }
            let sample = sample_grassmann(*n, *k, mc.samples as usize, mc.seed)?;
            let values: Vec<f64> = sample
                .frames
                .iter()
                .map(|f| polyangle::curvmeas::weight_eval(&ws[0], f))
                .collect::<polyangle::Result<_>>()?;
            let fit = fit_quadratic(&sample.frames, &values)?;
            let results = serde_json::json!({
                "rms_residual": fit.rms_residual,
                "condition": fit.condition,
                "coefficients": fit.coefficients,
            });
            Ok((results, Some(mc.seed), None))
        }
        Command::Lr { lambda, mu, nu, n } => {
            let lam = parse_partition(lambda)?;
            let m = parse_partition(mu)?;
            let v = parse_partition(nu)?;
            let c = lr_coefficient(&lam, &m, &v);
            let mut results = serde_json::json!({
                "lambda": lam.to_string(),
                "mu": m.to_string(),
                "nu": v.to_string(),
                "coefficient": c,
            });
            if let Some(n) = n {
                let table: Vec<serde_json::Value> = tensor_decompose(&lam, &m, *n)?
                    .into_iter()
                    .map(|(p, c)| serde_json::json!({"nu": p.to_string(), "mult": c}))
                    .collect();
                results["tensor_decomposition"] = serde_json::Value::Array(table);
            }
            Ok((results, None, None))
        }
        Command::WeylDim { lambda, n, group } => {
            let results = match group.as_str() {
                "sl" => {
                    let lam = parse_partition(lambda)?;
                    let d = weyl_dim_sl(&lam, *n)?;
                    serde_json::json!({"lambda": lam.to_string(), "n": n, "dim": d.to_string()})
                }
                "so" => {
                    let entries: Vec<i64> = lambda
                        .trim_matches(|c| c == '(' || c == ')')
                        .split(',')
                        .filter(|s| !s.trim().is_empty())
                        .map(|s| s.trim().parse::<i64>())
                        .collect::<Result<_, _>>()
                        .map_err(|e| anyhow::anyhow!("bad weight: {e}"))?;
                    let w = SOWeight::new(entries, *n)?;
                    let d = weyl_dim_so(&w);
                    serde_json::json!({"weight": format!("{:?}", w.m), "n": n, "dim": d.to_string()})
                }
                g => anyhow::bail!("unknown group '{g}' (use sl or so)"),
            };
            Ok((results, None, None))
        }
        Command::Branch { lambda, n } => {
            let lam = parse_partition(lambda)?;
            let rows: Vec<serde_json::Value> = littlewood_restrict(&lam, *n)?
                .into_iter()
                .map(|(mu, c)| serde_json::json!({"mu": mu.to_string(), "mult": c}))
                .collect();
            Ok((serde_json::json!({"lambda": lam.to_string(), "n": n, "branch": rows}), None, None))
        }
        Command::LemmaChecks { nmax } => {
            let mut tensor_rows = Vec::new();
            let mut pass = true;
            for n in 2..=*nmax {
                for k in 1..n {
                    let r = tensor_difference_dim_check(n, k)?;
                    let ok = r == num::BigInt::from(0);
                    pass &= ok;
                    tensor_rows.push(serde_json::json!({
                        "n": n, "k": k, "residual": r.to_string(),
                    }));
                }
            }
            let mut branch_rows = Vec::new();
            for n in 3..=*nmax {
                for k in 0..=(n / 2) {
                    let r = so_branch_dim_check(k, n)?;
                    let ok = r == num::BigInt::from(0);
                    pass &= ok;
                    branch_rows.push(serde_json::json!({
                        "n": n, "k": k, "residual": r.to_string(),
                    }));
                }
            }
            let results = serde_json::json!({
                "tensor_difference_dims": tensor_rows,
                "so_branch_dims": branch_rows,
            });
            Ok((results, None, Some(pass)))
        }
        Command::Crofton { polytope, k, mc } => {
            let text = read_input(polytope, inputs)?;
            let p = Polytope::from_json(&text)?;
            let meas = FlatMeasure::for_body(&p, *k)?.calibrate(mc.samples, mc.seed ^ 0xCA11)?;
            let est = crofton_estimate(&p, *k, &meas, mc.samples, mc.seed)?;
            Ok((serde_json::to_value(&est)?, Some(mc.seed), None))
        }
        Command::VkAction { polytope, k, degree, window, mc } => {
            let text = read_input(polytope, inputs)?;
            let p = Polytope::from_json(&text)?;
            let u = parse_window(window.as_ref(), p.n())?;
            let meas = FlatMeasure::for_body(&p, *k)?.calibrate(mc.samples, mc.seed ^ 0xCA11)?;
            let (value, sigma) =
                vk_action(&[WeightSpec::Federer { k: *degree }], &p, &u, *k, &meas, mc.samples, mc.seed)?;
            let results = serde_json::json!({
                "value": value,
                "sigma": sigma,
                "calibration": meas.c,
            });
            Ok((results, Some(mc.seed), None))
        }
        Command::VerifyAll { only } => {
            let checks = match only {
                Some(id) => vec![acceptance::run_by_id(id)?],
                None => acceptance::run_all(),
            };
            let mut pass = true;
            for c in &checks {
                eprintln!("{}", c.line());
                pass &= c.pass;
            }
            Ok((serde_json::to_value(&checks)?, None, Some(pass)))
        }
    }
}
