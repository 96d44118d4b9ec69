//! Batch command-line surface over the nonarch library. Every run is
//! deterministic given its arguments and seed; `--json` switches to
//! machine output that re-serializes identically.
//!
//! Exit codes: 0 = all checks passed, 1 = a check produced violations
//! (witnesses printed), 2 = usage or parameter error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use nonarch::error::Error;
use nonarch::fixed_point::{
    ball_relation, chain_intersection, companion_point, iterate_contraction, Ball,
    FixedPointResult,
};
use nonarch::gallery::run_gallery;
use nonarch::isometry::{
    check_additivity, check_isometry, check_midpoint_equation, check_rational_homogeneity,
    equidistant_points, midpoint, unordered_pairs,
};
use nonarch::rational::parse_sample;
use nonarch::sample;
use nonarch::space::{check_norm_axioms, strict_convexity_witness, value_set_report};
use nonarch::valuation::{
    check_field_axioms, padic_val, sharp_triangle, ExtInt, NormValue, Valuation,
};
use nonarch::{
    ExactRational, MapSpec, PAdicNumber, Scalar, SearchSet, SpaceDescriptor, SpacePoint,
};

#[derive(Parser)]
#[command(
    name = "nonarch",
    version,
    about = "Exact non-Archimedean arithmetic: valuations, truncated Q_p, ultrametric spaces, isometry checks, contraction fixed points"
)]
struct Cli {
    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Relative precision in p-adic digits for embeddings without a space
    #[arg(long, default_value_t = nonarch::DEFAULT_PRECISION, global = true)]
    precision: u32,

    /// Seed for sampled modes
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Valuations and absolute values of rational literals
    Val(ValArgs),
    /// Truncated Q_p arithmetic and digit expansions
    Padic(PadicArgs),
    /// Field-axiom or norm-axiom checks over a sample
    Axioms(AxiomArgs),
    /// Sharp triangle equality |a-b| = max(|a|,|b|) for |a| != |b|
    Sharp(SharpArgs),
    /// Search for a witness against strict convexity
    Convexity(ConvexityArgs),
    /// Attained norm values versus the scalar field's values
    Values(ConvexityArgs),
    /// Check that a map preserves distances
    Isometry(MapCheckArgs),
    /// Additivity, midpoint equation, or homogeneity of f - f(0)
    Additivity(AdditivityArgs),
    /// Equidistant points from a pair in the finite model
    Lemma(LemmaArgs),
    /// Run both counterexample isometries end to end
    Gallery,
    /// Iterate a contraction to its fixed point
    Fixpoint(FixpointArgs),
    /// Solve f(u) + f(v) = f((u+v)/k) for the unique v
    Proposition(PropositionArgs),
    /// Ball relations and chain intersections in the finite model
    Balls(BallArgs),
}

#[derive(Args)]
struct ValArgs {
    /// Prime for the p-adic valuation
    #[arg(short = 'p', long)]
    prime: Option<u64>,
    /// Use the trivial valuation instead
    #[arg(long, conflicts_with = "prime")]
    trivial: bool,
    /// Rational literals, e.g. 12 or -3/8
    #[arg(allow_hyphen_values = true)]
    literals: Vec<String>,
    /// Newline-delimited sample file (# comments allowed)
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PadicOp {
    Show,
    Add,
    Sub,
    Mul,
    Div,
    Digits,
}

#[derive(Args)]
struct PadicArgs {
    #[arg(short = 'p', long)]
    prime: u64,
    #[arg(long, value_enum, default_value_t = PadicOp::Show)]
    op: PadicOp,
    #[arg(allow_hyphen_values = true)]
    x: String,
    #[arg(allow_hyphen_values = true)]
    y: Option<String>,
}

#[derive(Args)]
struct AxiomArgs {
    /// Field mode: a prime, or the word `trivial`
    #[arg(long, conflicts_with = "space")]
    field: Option<String>,
    /// Norm mode: a space descriptor (qp:p=3,N=8,dim=2 | trivial | model:p=3,N=4)
    #[arg(long)]
    space: Option<String>,
    /// Explicit sample (rational literals; vectors as comma tuples)
    #[arg(allow_hyphen_values = true)]
    literals: Vec<String>,
    #[arg(long)]
    file: Option<PathBuf>,
    /// Check every point of the finite model
    #[arg(long)]
    exhaustive: bool,
    /// Seeded sample size when no explicit sample is given
    #[arg(long, default_value_t = 200)]
    count: usize,
    /// Comma-separated scalars for the homogeneity axiom
    #[arg(long)]
    scalars: Option<String>,
}

#[derive(Args)]
struct SharpArgs {
    #[arg(short = 'p', long)]
    prime: Option<u64>,
    #[arg(long, conflicts_with = "prime")]
    trivial: bool,
    #[arg(allow_hyphen_values = true)]
    a: String,
    #[arg(allow_hyphen_values = true)]
    b: String,
}

#[derive(Args)]
struct ConvexityArgs {
    #[arg(long)]
    space: String,
    #[arg(long)]
    exhaustive: bool,
    /// Sample points when not exhaustive
    #[arg(allow_hyphen_values = true)]
    points: Vec<String>,
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct MapCheckArgs {
    #[arg(long)]
    space: String,
    #[arg(long)]
    map: String,
    #[arg(allow_hyphen_values = true)]
    points: Vec<String>,
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Additive,
    Midpoint,
    Homogeneity,
    All,
}

#[derive(Args)]
struct AdditivityArgs {
    #[command(flatten)]
    base: MapCheckArgs,
    #[arg(long, value_enum, default_value_t = CheckKind::Additive)]
    check: CheckKind,
    /// Comma-separated rational scalars for the homogeneity check
    #[arg(long, default_value = "2,3,1/2")]
    scalars: String,
}

#[derive(Args)]
struct LemmaArgs {
    #[arg(long)]
    space: String,
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, allow_hyphen_values = true)]
    y: String,
}

#[derive(Args)]
struct FixpointArgs {
    #[arg(long)]
    space: String,
    #[arg(long)]
    map: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    x0: String,
    /// Residual tolerance exponent (stop at p^-target); default N - 4
    #[arg(long)]
    target: Option<i64>,
    #[arg(long, default_value_t = 64)]
    max_iter: usize,
}

#[derive(Args)]
struct PropositionArgs {
    #[arg(long)]
    space: String,
    #[arg(long)]
    map: String,
    #[arg(long, allow_hyphen_values = true)]
    u: String,
    /// Natural scalar with |k| < 1; defaults to the space's prime
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    target: Option<i64>,
    #[arg(long, default_value_t = 64)]
    max_iter: usize,
}

#[derive(Args)]
struct BallArgs {
    #[arg(long)]
    space: String,
    /// Two balls (center:radius-exp, radius `z` for zero) to classify
    #[arg(long, num_args = 2)]
    relation: Option<Vec<String>>,
    /// A chain of balls to intersect
    #[arg(long, num_args = 1.., conflicts_with = "relation")]
    chain: Option<Vec<String>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        // analysis outcomes with witnesses, not usage errors
        Err(e @ (Error::NonContractive { .. } | Error::NoConvergence(_))) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(json_mode: bool, value: serde_json::Value, text: &str) {
    use std::io::Write;
    let rendered = if json_mode {
        serde_json::to_string_pretty(&value).expect("serializable")
    } else {
        text.to_string()
    };
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{rendered}") {
        // a closed pipe is the reader's choice, not a failure
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write output: {e}");
        std::process::exit(2);
    }
}

fn run(cli: &Cli) -> Result<bool, Error> {
    match &cli.command {
        Command::Val(args) => cmd_val(cli, args),
        Command::Padic(args) => cmd_padic(cli, args),
        Command::Axioms(args) => cmd_axioms(cli, args),
        Command::Sharp(args) => cmd_sharp(cli, args),
        Command::Convexity(args) => cmd_convexity(cli, args),
        Command::Values(args) => cmd_values(cli, args),
        Command::Isometry(args) => cmd_isometry(cli, args),
        Command::Additivity(args) => cmd_additivity(cli, args),
        Command::Lemma(args) => cmd_lemma(cli, args),
        Command::Gallery => cmd_gallery(cli),
        Command::Fixpoint(args) => cmd_fixpoint(cli, args),
        Command::Proposition(args) => cmd_proposition(cli, args),
        Command::Balls(args) => cmd_balls(cli, args),
    }
}

fn gather_rationals(
    literals: &[String],
    file: &Option<PathBuf>,
) -> Result<Vec<ExactRational>, Error> {
    let mut out = Vec::new();
    for lit in literals {
        out.push(lit.parse()?);
    }
    if let Some(path) = file {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        out.extend(parse_sample(&text)?);
    }
    Ok(out)
}

/// Parse one point literal for the space: a rational, or a comma tuple of
/// rationals for vector spaces.
fn parse_point(space: &SpaceDescriptor, literal: &str) -> Result<SpacePoint, Error> {
    let coords = literal
        .split(',')
        .map(|c| c.trim().parse())
        .collect::<Result<Vec<ExactRational>, Error>>()?;
    space.point_from_rationals(&coords)
}

fn gather_points(
    space: &SpaceDescriptor,
    literals: &[String],
    file: &Option<PathBuf>,
    exhaustive: bool,
) -> Result<Vec<SpacePoint>, Error> {
    if exhaustive {
        if !literals.is_empty() {
            return Err(Error::InvalidInput(
                "--exhaustive conflicts with an explicit sample".into(),
            ));
        }
        return space.enumerate_points();
    }
    let mut out = Vec::new();
    for lit in literals {
        out.push(parse_point(space, lit)?);
    }
    if let Some(path) = file {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        for q in parse_sample(&text)? {
            out.push(space.point_from_rationals(std::slice::from_ref(&q))?);
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidInput("no points given (pass literals, --file, or --exhaustive)".into()));
    }
    Ok(out)
}

fn parse_valuation(prime: Option<u64>, trivial: bool) -> Result<Valuation, Error> {
    match (prime, trivial) {
        (Some(p), false) => Valuation::padic(p),
        (None, true) => Ok(Valuation::trivial()),
        _ => Err(Error::InvalidInput("pass exactly one of -p <prime> or --trivial".into())),
    }
}

fn cmd_val(cli: &Cli, args: &ValArgs) -> Result<bool, Error> {
    let valuation = parse_valuation(args.prime, args.trivial)?;
    let sample = gather_rationals(&args.literals, &args.file)?;
    if sample.is_empty() {
        return Err(Error::InvalidInput("no literals given".into()));
    }
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    for q in &sample {
        let norm = valuation.abs(q);
        match valuation {
            Valuation::PAdic { p } => {
                let v = padic_val(q, p)?;
                lines.push(format!("|{q}|_{p} = {} (v={v})", norm.human()));
                rows.push(json!({
                    "input": q.to_string(),
                    "norm": norm,
                    "valuation": match v { ExtInt::Finite(n) => json!(n), ExtInt::Infinity => json!(null) },
                }));
            }
            Valuation::Trivial => {
                lines.push(format!("|{q}| = {} (trivial)", norm.human()));
                rows.push(json!({ "input": q.to_string(), "norm": norm }));
            }
        }
    }
    emit(cli.json, json!(rows), &lines.join("\n"));
    Ok(true)
}

fn cmd_padic(cli: &Cli, args: &PadicArgs) -> Result<bool, Error> {
    let embed = |s: &str| -> Result<PAdicNumber, Error> {
        PAdicNumber::from_rational(&s.parse()?, args.prime, cli.precision)
    };
    let x = embed(&args.x)?;
    let need_y = || -> Result<PAdicNumber, Error> {
        args.y
            .as_deref()
            .ok_or_else(|| Error::InvalidInput("this operation needs two operands".into()))
            .and_then(embed)
    };
    let (result, op_name) = match args.op {
        PadicOp::Show => (x.clone(), "show"),
        PadicOp::Add => (x.add(&need_y()?)?, "add"),
        PadicOp::Sub => (x.sub(&need_y()?)?, "sub"),
        PadicOp::Mul => (x.mul(&need_y()?)?, "mul"),
        PadicOp::Div => (x.div(&need_y()?)?, "div"),
        PadicOp::Digits => {
            let expansion = x.digit_expansion()?;
            emit(
                cli.json,
                json!({ "input": args.x, "expansion": expansion }),
                &x.long_form(),
            );
            return Ok(true);
        }
    };
    emit(
        cli.json,
        json!({ "op": op_name, "x": x, "y": args.y, "result": result }),
        &result.long_form(),
    );
    Ok(true)
}

fn parse_scalars(spec: &str) -> Result<Vec<ExactRational>, Error> {
    spec.split(',').map(|s| s.trim().parse()).collect()
}

fn cmd_axioms(cli: &Cli, args: &AxiomArgs) -> Result<bool, Error> {
    if let Some(field) = &args.field {
        let valuation = match field.as_str() {
            "trivial" => Valuation::trivial(),
            p => Valuation::padic(
                p.parse().map_err(|_| Error::InvalidInput(format!("bad field `{p}`")))?,
            )?,
        };
        let mut sample = gather_rationals(&args.literals, &args.file)?;
        if sample.is_empty() {
            sample = match valuation {
                Valuation::PAdic { p } => sample::padic_rationals(cli.seed, args.count, p),
                Valuation::Trivial => sample::rationals(cli.seed, args.count),
            };
        }
        let report = check_field_axioms(&valuation, &sample);
        emit(cli.json, serde_json::to_value(&report).expect("serializable"), &report.to_string());
        return Ok(report.passed());
    }
    let Some(space) = &args.space else {
        return Err(Error::InvalidInput("pass --field <p|trivial> or --space <descriptor>".into()));
    };
    let space: SpaceDescriptor = space.parse()?;
    let set = if args.exhaustive {
        SearchSet::Exhaustive
    } else {
        SearchSet::Sample(gather_points(&space, &args.literals, &args.file, false)?)
    };
    let scalars: Vec<Scalar> = match &args.scalars {
        Some(spec) => parse_scalars(spec)?.into_iter().map(Scalar::Rational).collect(),
        None => default_scalars(&space),
    };
    let report = check_norm_axioms(&space, &set, &scalars)?;
    emit(cli.json, serde_json::to_value(&report).expect("serializable"), &report.to_string());
    Ok(report.passed())
}

fn default_scalars(space: &SpaceDescriptor) -> Vec<Scalar> {
    let mut out = vec![
        Scalar::Rational(ExactRational::zero()),
        Scalar::Rational(ExactRational::one()),
        Scalar::Rational(ExactRational::from_integer(-1)),
    ];
    if let SpaceDescriptor::QpVector { p, .. } | SpaceDescriptor::FiniteModel { p, .. } = space {
        out.push(Scalar::Rational(ExactRational::from_integer(*p as i64)));
    }
    out
}

fn cmd_sharp(cli: &Cli, args: &SharpArgs) -> Result<bool, Error> {
    let valuation = parse_valuation(args.prime, args.trivial)?;
    let a: ExactRational = args.a.parse()?;
    let b: ExactRational = args.b.parse()?;
    let cert = sharp_triangle(&a, &b, &valuation)?;
    emit(
        cli.json,
        serde_json::to_value(&cert).expect("serializable"),
        &format!(
            "|{a} - {b}| = {} = max(|{a}|, |{b}|) = {} -> {}",
            cert.difference.human(),
            cert.maximum.human(),
            if cert.holds() { "equal" } else { "DIFFER" }
        ),
    );
    Ok(cert.holds())
}

fn cmd_convexity(cli: &Cli, args: &ConvexityArgs) -> Result<bool, Error> {
    let space: SpaceDescriptor = args.space.parse()?;
    let set = if args.exhaustive {
        SearchSet::Exhaustive
    } else {
        SearchSet::Sample(gather_points(&space, &args.points, &args.file, false)?)
    };
    let report = strict_convexity_witness(&space, &set)?;
    emit(cli.json, serde_json::to_value(&report).expect("serializable"), &report.to_string());
    // a witness disproves strict convexity, which is the checked property
    Ok(report.witness.is_none())
}

fn cmd_values(cli: &Cli, args: &ConvexityArgs) -> Result<bool, Error> {
    let space: SpaceDescriptor = args.space.parse()?;
    let set = if args.exhaustive {
        SearchSet::Exhaustive
    } else {
        SearchSet::Sample(gather_points(&space, &args.points, &args.file, false)?)
    };
    let report = value_set_report(&space, &set)?;
    emit(cli.json, serde_json::to_value(&report).expect("serializable"), &report.to_string());
    Ok(report.matches)
}

fn cmd_isometry(cli: &Cli, args: &MapCheckArgs) -> Result<bool, Error> {
    let space: SpaceDescriptor = args.space.parse()?;
    let map: MapSpec = args.map.parse()?;
    let points = gather_points(&space, &args.points, &args.file, args.exhaustive)?;
    let pairs = unordered_pairs(&points);
    let report = check_isometry(&map, &space, &pairs)?;
    emit(cli.json, serde_json::to_value(&report).expect("serializable"), &report.to_string());
    Ok(report.passed())
}

fn cmd_additivity(cli: &Cli, args: &AdditivityArgs) -> Result<bool, Error> {
    let space: SpaceDescriptor = args.base.space.parse()?;
    let map: MapSpec = args.base.map.parse()?;
    let points =
        gather_points(&space, &args.base.points, &args.base.file, args.base.exhaustive)?;
    let pairs = unordered_pairs(&points);
    let scalars = parse_scalars(&args.scalars)?;

    let mut passed = true;
    let mut texts = Vec::new();
    let mut values = serde_json::Map::new();
    let run_additive = matches!(args.check, CheckKind::Additive | CheckKind::All);
    let run_midpoint = matches!(args.check, CheckKind::Midpoint | CheckKind::All);
    let run_homogeneity = matches!(args.check, CheckKind::Homogeneity | CheckKind::All);

    if run_additive {
        let report = check_additivity(&map, &space, &pairs)?;
        passed &= report.passed();
        texts.push(report.to_string());
        values.insert("additivity".into(), serde_json::to_value(&report).expect("serializable"));
    }
    if run_midpoint {
        let report = check_midpoint_equation(&map, &space, &pairs)?;
        passed &= report.passed();
        texts.push(report.to_string());
        values.insert("midpoint".into(), serde_json::to_value(&report).expect("serializable"));
    }
    if run_homogeneity {
        let report = check_rational_homogeneity(&map, &space, &points, &scalars)?;
        passed &= report.passed();
        texts.push(report.to_string());
        values.insert("homogeneity".into(), serde_json::to_value(&report).expect("serializable"));
    }
    emit(cli.json, serde_json::Value::Object(values), &texts.join("\n"));
    Ok(passed)
}

fn cmd_lemma(cli: &Cli, args: &LemmaArgs) -> Result<bool, Error> {
    let space: SpaceDescriptor = args.space.parse()?;
    let x = parse_point(&space, &args.x)?;
    let y = parse_point(&space, &args.y)?;
    let set = equidistant_points(&space, &x, &y)?;
    let mid = midpoint(&space, &x, &y)?;
    let unique = set.len() == 1;
    let members: Vec<String> = set.iter().map(|z| z.to_string()).collect();
    let shown = if members.len() > 32 {
        format!("{} ... ({} total)", members[..32].join(", "), members.len())
    } else {
        members.join(", ")
    };
    emit(
        cli.json,
        json!({
            "space": space.to_string(),
            "x": x.to_string(),
            "y": y.to_string(),
            "distance": space.distance(&x, &y)?,
            "midpoint": mid.to_string(),
            "cardinality": set.len(),
            "points": members,
            "unique": unique,
        }),
        &format!(
            "equidistant points from {x} and {y} at distance {}: {{{shown}}}\nmidpoint = {mid} ({})\ncardinality {} -> uniqueness {}",
            space.distance(&x, &y)?.human(),
            if set.contains(&mid) { "member" } else { "NOT a member" },
            set.len(),
            if unique { "HOLDS" } else { "FAILS (the space is not strictly convex)" }
        ),
    );
    Ok(unique)
}

fn cmd_gallery(cli: &Cli) -> Result<bool, Error> {
    let report = run_gallery(cli.seed)?;
    emit(cli.json, serde_json::to_value(&report).expect("serializable"), &report.to_string());
    Ok(report.confirmed())
}

fn fixed_point_json(run: &FixedPointResult, starts_agreed: Option<bool>) -> serde_json::Value {
    json!({
        "v": run.value.to_string(),
        "iterations": run.iterations,
        "residual_exp": run.residual.exp(),
        "verified": run.verified,
        "starts_agreed": starts_agreed,
    })
}

fn default_target(space: &SpaceDescriptor) -> i64 {
    match space {
        SpaceDescriptor::QpVector { prec, .. } => i64::from(*prec) - 4,
        SpaceDescriptor::FiniteModel { n, .. } => i64::from(*n),
        SpaceDescriptor::TrivialLine => 1,
    }
}

fn cmd_fixpoint(cli: &Cli, args: &FixpointArgs) -> Result<bool, Error> {
    let space: SpaceDescriptor = args.space.parse()?;
    let map: MapSpec = args.map.parse()?;
    let x0 = parse_point(&space, &args.x0)?;
    let target = args.target.unwrap_or_else(|| default_target(&space));
    let run = iterate_contraction(&map, &space, &x0, target, args.max_iter)?;
    let history: Vec<String> = run.residual_history.iter().map(|r| r.to_string()).collect();
    emit(
        cli.json,
        fixed_point_json(&run, None),
        &format!(
            "v = {}\niterations = {}\nresidual = {}\nresiduals along the orbit: {}\nverified = {}",
            run.value,
            run.iterations,
            run.residual,
            history.join(" > "),
            run.verified
        ),
    );
    Ok(run.verified)
}

fn cmd_proposition(cli: &Cli, args: &PropositionArgs) -> Result<bool, Error> {
    let space: SpaceDescriptor = args.space.parse()?;
    let map: MapSpec = args.map.parse()?;
    let u: ExactRational = args.u.parse()?;
    let k = args.k.unwrap_or(match &space {
        SpaceDescriptor::QpVector { p, .. } | SpaceDescriptor::FiniteModel { p, .. } => *p,
        SpaceDescriptor::TrivialLine => 2,
    });
    let target = args.target.unwrap_or_else(|| default_target(&space));
    let out = companion_point(&map, &space, &u, k, target, args.max_iter)?;
    let run = &out.fixed_point;
    let closed = out
        .closed_form
        .as_ref()
        .map(|v| format!("\nclosed form v = {v}"))
        .unwrap_or_default();
    emit(
        cli.json,
        fixed_point_json(run, Some(out.starts_agreed)),
        &format!(
            "v = {}{closed}\niterations = {}\nresidual = {}\nidentity f(u)+f(v) = f((u+v)/{k}) verified = {}\ntwo starts agreed = {}",
            run.value, run.iterations, run.residual, run.verified, out.starts_agreed
        ),
    );
    Ok(run.verified && out.starts_agreed)
}

/// Ball literal: `center:exp` (radius p^exp) or `center:z` (radius 0);
/// the center is a rational embeddable into the model.
fn parse_ball(space: &SpaceDescriptor, literal: &str) -> Result<Ball, Error> {
    let (center, radius) = literal
        .split_once(':')
        .ok_or_else(|| Error::InvalidInput(format!("ball literal `{literal}` needs center:radius")))?;
    let center = parse_point(space, center)?;
    let radius = if radius.trim() == "z" {
        NormValue::Zero
    } else {
        let exp: i64 = radius
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad radius exponent `{radius}`")))?;
        let SpaceDescriptor::FiniteModel { p, .. } = space else {
            return Err(Error::IncompatibleSpace("balls live in the finite model".into()));
        };
        NormValue::padic(*p, exp)
    };
    Ok(Ball { center, radius })
}

fn cmd_balls(cli: &Cli, args: &BallArgs) -> Result<bool, Error> {
    let space: SpaceDescriptor = args.space.parse()?;
    if let Some(pair) = &args.relation {
        let first = parse_ball(&space, &pair[0])?;
        let second = parse_ball(&space, &pair[1])?;
        let relation = ball_relation(&space, &first, &second)?;
        emit(
            cli.json,
            json!({
                "first": first.to_string(),
                "second": second.to_string(),
                "relation": relation,
            }),
            &format!("{first} vs {second}: {relation}"),
        );
        return Ok(true);
    }
    if let Some(chain) = &args.chain {
        let balls = chain
            .iter()
            .map(|b| parse_ball(&space, b))
            .collect::<Result<Vec<Ball>, Error>>()?;
        let members = chain_intersection(&space, &balls)?;
        let shown: Vec<String> = members.iter().map(|m| m.to_string()).collect();
        emit(
            cli.json,
            json!({
                "chain": balls.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
                "intersection": members,
            }),
            &format!("chain intersection: {{{}}} ({} points)", shown.join(", "), members.len()),
        );
        return Ok(!members.is_empty());
    }
    Err(Error::InvalidInput("pass --relation B1 B2 or --chain B1 B2 ...".into()))
}
