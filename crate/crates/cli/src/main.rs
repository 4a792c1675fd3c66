mod svg;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tropconf::chow::{configuration_fan_with, ConfigurationFan, LatticeRule, Options};
use tropconf::expansions::{check_all_strata, locate, stratum_report, StratumReport};
use tropconf::fan::{fan_diff, Fan};
use tropconf::io::{
    cone_to_json, config_from_json, config_to_json, fan_to_json, scaffold_from_json, scaffold_to_json,
    stacky_from_json, stratum_to_json, stratum_to_text, to_canonical_string,
};
use tropconf::parse::{parse_constraints, parse_point};
use tropconf::reference::{
    bipermutahedral_fan, bisequence_of, parse_bisequence, permutahedral_fan, permutahedral_square,
};
use tropconf::scaffold::{
    lambda0, lambda_biperm, lambda_square, product_scaffold, scaffold_from_fan, sqrt_stack_scaffold, Scaffold,
};

#[derive(Parser)]
#[command(
    name = "tropconf",
    version,
    about = "Tropical configuration spaces from scaffold fans"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Report format; JSON output is canonical (sorted keys, numbers as strings).
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
    /// Seed for sampling-based checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Build or validate scaffold fans.
    #[command(subcommand)]
    Scaffold(ScaffoldCmd),
    /// Compute the configuration fan of a scaffold.
    Quotient(QuotientArgs),
    /// Write a reference fan.
    Reference {
        #[arg(long, value_enum)]
        kind: RefKind,
        /// Number of non-anchor coordinates.
        #[arg(long)]
        n: usize,
        /// Output file (default: stdout).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Report on the stratum of one cone of a configuration fan.
    Stratum {
        /// Configuration fan file.
        #[arg(short, long)]
        input: PathBuf,
        /// Cone index, or constraints such as "a0<=a1=a2<=a3".
        #[arg(long)]
        cone: String,
        /// Draw the fiber complex (planar strata only).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Find the stratum containing a point of V[n].
    Locate {
        /// Configuration fan file.
        #[arg(short, long)]
        input: PathBuf,
        /// Coordinates such as "1,1,2" or "-1 1/2".
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Draw the fiber complex (planar strata only).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Bisequence label of a point of R^n x R^n, or the cone of a label.
    Bisequence {
        /// Number of non-anchor points.
        #[arg(long)]
        n: usize,
        /// Coordinates (a_1, b_1, ..., a_n, b_n).
        #[arg(
            long,
            allow_hyphen_values = true,
            conflicts_with = "label",
            required_unless_present = "label"
        )]
        point: Option<String>,
        /// A label such as "2|0|12|1".
        #[arg(long)]
        label: Option<String>,
    },
    /// Run named checks (all when none are given).
    Verify {
        /// Any of: permutahedron, square, bipermutahedron, sqrt-stack, chain-stratum,
        /// quilt-stratum, hexagon-stratum, from-fan, certificates.
        targets: Vec<String>,
        /// Largest n for targets that iterate over n.
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Summary counts of a fan file.
    Stats { input: PathBuf },
    /// Maximal cones present in exactly one of two fan files.
    Diff { left: PathBuf, right: PathBuf },
}

#[derive(Subcommand)]
enum ScaffoldCmd {
    /// Write one of the built-in scaffolds, or one assembled from fan files.
    Build(BuildArgs),
    /// Check the scaffold axioms of a scaffold file.
    Validate {
        input: PathBuf,
    },
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Number of non-anchor marked points.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Fan on V for --kind from-fan.
    #[arg(long)]
    fan: Option<PathBuf>,
    /// Two scaffold files for --kind product.
    #[arg(long, num_args = 2)]
    factors: Vec<PathBuf>,
    /// Output file (default: stdout).
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Lambda0,
    Square,
    Biperm,
    FromFan,
    Product,
    SqrtStack,
}

#[derive(Clone, Copy, ValueEnum)]
enum RefKind {
    Perm,
    Perm2,
    Biperm,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    ImageEquals,
    ImageContains,
}

#[derive(Args)]
struct QuotientArgs {
    /// Scaffold file.
    #[arg(short, long)]
    input: PathBuf,
    /// Configuration fan output (default: stdout).
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Also write the refined scaffold here.
    #[arg(long)]
    emit_refined: Option<PathBuf>,
    /// Run all certificates and strata invariants; exit 1 on failure.
    #[arg(long)]
    certify: bool,
    /// How sublattices of quotient cones are chosen from the images of refined cones.
    #[arg(long, value_enum, default_value_t = Rule::ImageEquals)]
    rule: Rule,
}

/// A failed check, as opposed to bad input.
#[derive(Debug)]
struct Failed(String);

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Failed {}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn emit_json(v: &Value, out: Option<&Path>) -> anyhow::Result<()> {
    let text = to_canonical_string(v);
    match out {
        Some(p) => write(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Any fan-shaped file: plain, stacky, scaffold or configuration fan.
fn load_fan(path: &Path) -> anyhow::Result<Fan> {
    let text = read(path)?;
    let v: Value = serde_json::from_str(&text).with_context(|| path.display().to_string())?;
    let ctx = || path.display().to_string();
    let fan = if v.get("refined_scaffold").is_some() {
        config_from_json(&text).with_context(ctx)?.pi_fan().clone()
    } else if v.get("kind").is_some() {
        scaffold_from_json(&text).with_context(ctx)?.fan
    } else {
        stacky_from_json(&text).with_context(ctx)?.fan().clone()
    };
    Ok(fan)
}

fn load_config(path: &Path) -> anyhow::Result<ConfigurationFan> {
    config_from_json(&read(path)?).with_context(|| path.display().to_string())
}

fn build_scaffold(a: &BuildArgs) -> anyhow::Result<Scaffold> {
    Ok(match a.kind {
        Kind::Lambda0 => lambda0(a.n),
        Kind::Square => lambda_square(a.n),
        Kind::Biperm => lambda_biperm(a.n)?,
        Kind::SqrtStack => sqrt_stack_scaffold(),
        Kind::FromFan => {
            let p = a.fan.as_ref().ok_or_else(|| anyhow!("--kind from-fan needs --fan"))?;
            scaffold_from_fan(&load_fan(p)?, a.n)?
        }
        Kind::Product => {
            if a.factors.len() != 2 {
                bail!("--kind product needs --factors A B");
            }
            let s1 = scaffold_from_json(&read(&a.factors[0])?)?;
            let s2 = scaffold_from_json(&read(&a.factors[1])?)?;
            product_scaffold(&s1, &s2)?
        }
    })
}

fn stats_line(f: &Fan) -> String {
    format!(
        "rank {}, maximal {}, total {}, {}",
        f.rank(),
        f.maximal_cones().len(),
        f.all_cones().len(),
        if f.is_complete() { "complete" } else { "not complete" }
    )
}

fn summary(kind: &str, f: &Fan, out: Option<&Path>) {
    if let Some(p) = out {
        println!("{kind}: {} -> {}", stats_line(f), p.display());
    }
}

fn print_report(
    cf: &ConfigurationFan,
    r: &StratumReport,
    output: Output,
    svg_out: Option<&Path>,
) -> anyhow::Result<()> {
    match output {
        Output::Json => emit_json(&stratum_to_json(cf, r), None)?,
        Output::Text => print!("{}", stratum_to_text(r)),
    }
    if let Some(p) = svg_out {
        let s = svg::render(r).ok_or_else(|| anyhow!("--svg needs d = 2"))?;
        write(p, &s)?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    match cli.command {
        Command::Scaffold(ScaffoldCmd::Build(a)) => {
            let s = build_scaffold(&a)?;
            let rep = s.validate();
            if let Some(f) = rep.first_failure() {
                return Err(Failed(format!("scaffold check failed: {f}")).into());
            }
            emit_json(&scaffold_to_json(&s), a.out.as_deref())?;
            summary(&s.kind, &s.fan, a.out.as_deref());
        }
        Command::Scaffold(ScaffoldCmd::Validate { input }) => {
            let s = scaffold_from_json(&read(&input)?)?;
            let rep = s.validate();
            match rep.first_failure() {
                None => println!("ok: {} n={} d={}, {}", s.kind, s.n, s.d, stats_line(&s.fan)),
                Some(f) => return Err(Failed(f).into()),
            }
        }
        Command::Quotient(a) => {
            let s = scaffold_from_json(&read(&a.input)?).with_context(|| a.input.display().to_string())?;
            let opts = Options {
                rule: match a.rule {
                    Rule::ImageEquals => LatticeRule::ImageEquals,
                    Rule::ImageContains => LatticeRule::ImageContains,
                },
                skip_certificates: true,
            };
            let cf = configuration_fan_with(&s, &opts)?;
            if a.certify {
                let c = cf.certificates();
                if let Some(f) = c.first_failure() {
                    return Err(Failed(format!("certificate failed: {f}")).into());
                }
                let st = check_all_strata(&cf);
                if !st.ok {
                    return Err(Failed(st.detail.unwrap_or_default()).into());
                }
            }
            if let Some(p) = &a.emit_refined {
                write(p, &to_canonical_string(&scaffold_to_json(&cf.refined)))?;
            }
            emit_json(&config_to_json(&cf)?, a.out.as_deref())?;
            summary("configuration fan", cf.pi_fan(), a.out.as_deref());
        }
        Command::Reference { kind, n, out } => {
            let f = match kind {
                RefKind::Perm => permutahedral_fan(n),
                RefKind::Perm2 => permutahedral_square(n),
                RefKind::Biperm => bipermutahedral_fan(n),
            };
            emit_json(&fan_to_json(&f), out.as_deref())?;
            summary("reference", &f, out.as_deref());
        }
        Command::Stratum { input, cone, svg } => {
            let cf = load_config(&input)?;
            let cones = cf.pi_fan().all_cones();
            let rho = match cone.trim().parse::<usize>() {
                Ok(i) => cones
                    .get(i)
                    .cloned()
                    .ok_or_else(|| anyhow!("cone index {i} out of range (the fan has {} cones)", cones.len()))?,
                Err(_) => {
                    let c = parse_constraints(&cone, cf.n(), cf.d())?;
                    if !cf.pi_fan().contains_cone(&c) {
                        bail!("the constraints describe a cone that is not in the configuration fan");
                    }
                    c
                }
            };
            let r = stratum_report(&cf, &rho)?;
            print_report(&cf, &r, cli.output, svg.as_deref())?;
        }
        Command::Locate { input, point, svg } => {
            let cf = load_config(&input)?;
            let p = parse_point(&point)?;
            let (_, r) = locate(&cf, &p)?;
            print_report(&cf, &r, cli.output, svg.as_deref())?;
        }
        Command::Bisequence { n, point, label } => match (point, label) {
            (Some(p), _) => {
                let p = parse_point(&p)?;
                if p.len() != 2 * n {
                    bail!("expected {} coordinates, got {}", 2 * n, p.len());
                }
                let s = bisequence_of(&p)?;
                match cli.output {
                    Output::Json => emit_json(&json!({ "bisequence": s }), None)?,
                    Output::Text => println!("{s}"),
                }
            }
            (None, Some(l)) => {
                let c = parse_bisequence(&l, n)?;
                match cli.output {
                    Output::Json => emit_json(&cone_to_json(&c), None)?,
                    Output::Text => println!("{c:?}"),
                }
            }
            (None, None) => bail!("give --point or --label"),
        },
        Command::Verify { targets, max_n } => {
            let names: Vec<&str> = if targets.is_empty() || targets.iter().any(|t| t == "all") {
                verify::TARGETS.to_vec()
            } else {
                for t in &targets {
                    if !verify::TARGETS.contains(&t.as_str()) {
                        bail!("unknown target {t:?}; known: {}", verify::TARGETS.join(", "));
                    }
                }
                targets.iter().map(String::as_str).collect()
            };
            let results = verify::run_all(&names, max_n, cli.seed);
            match cli.output {
                Output::Json => emit_json(&Value::Array(results.iter().map(|r| r.to_json()).collect()), None)?,
                Output::Text => {
                    for r in &results {
                        println!("{} {} ({:.2}s)", if r.ok { "PASS" } else { "FAIL" }, r.name, r.seconds);
                        for l in &r.lines {
                            println!("    {l}");
                        }
                    }
                }
            }
            let failed: Vec<&str> = results.iter().filter(|r| !r.ok).map(|r| r.name.as_str()).collect();
            if !failed.is_empty() {
                return Err(Failed(format!("failed: {}", failed.join(", "))).into());
            }
        }
        Command::Stats { input } => {
            let f = load_fan(&input)?;
            match cli.output {
                Output::Json => emit_json(
                    &json!({
                        "ambient_rank": f.rank(),
                        "maximal": f.maximal_cones().len(),
                        "total": f.all_cones().len(),
                        "complete": f.is_complete(),
                        "f_vector": f.f_vector(),
                    }),
                    None,
                )?,
                Output::Text => {
                    println!("{}", stats_line(&f));
                    println!("f-vector {:?}", f.f_vector());
                }
            }
        }
        Command::Diff { left, right } => {
            let (a, b) = (load_fan(&left)?, load_fan(&right)?);
            let d = fan_diff(&a, &b)?;
            match cli.output {
                Output::Json => emit_json(
                    &json!({
                        "only_left": d.only_left.iter().map(cone_to_json).collect::<Vec<_>>(),
                        "only_right": d.only_right.iter().map(cone_to_json).collect::<Vec<_>>(),
                        "split_left": d.split_left.len(),
                        "split_right": d.split_right.len(),
                    }),
                    None,
                )?,
                Output::Text => {
                    for c in &d.only_left {
                        println!("< {c:?}");
                    }
                    for c in &d.only_right {
                        println!("> {c:?}");
                    }
                    if !d.is_empty() {
                        println!(
                            "{} left cones split on the right, {} right cones split on the left",
                            d.split_left.len(),
                            d.split_right.len()
                        );
                    }
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let verification = e.downcast_ref::<Failed>().is_some()
                || matches!(
                    e.downcast_ref::<tropconf::Error>(),
                    Some(tropconf::Error::Verification(_))
                );
            ExitCode::from(if verification { 1 } else { 2 })
        }
    }
}
