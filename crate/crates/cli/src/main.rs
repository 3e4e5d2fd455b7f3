use std::path::{Path, PathBuf};
use std::process::ExitCode;

use apartness_lab::morphisms::is_strongly_continuous_brute;
use apartness_lab::search::{CatalogDocument, Escalation};
use apartness_lab::{
    catalog, check_axioms, disjoint_union, enumerate_models, find_with_escalation, is_strongly_continuous,
    net_converges, product, subspace, totally_cauchy, union_harness, DirectedNet, Error, EvalOptions, Evaluator,
    HarnessInput, HarnessReport, ModelQuery, ModelReport, PointMap, Property, PropertyReport, Space, SpaceDocument,
    Subset, TcVariant, WssReading,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

const REPORT_VERSION: u32 = 1;
const THREADS_VAR: &str = "APARTNESS_LAB_THREADS";

/// Finite-model workbench for pre-apartness and apartness spaces.
///
/// Exit status: 0 when every requested property holds, 1 when one fails,
/// 2 for unreadable input, 3 when an input violates a structural invariant.
#[derive(Parser)]
#[command(name = "apartness-lab", version)]
struct Cli {
    /// Print a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check axioms and separation properties of a space document.
    Check(CheckArgs),
    /// Build a space from documents and write it as an abstract document.
    Construct(ConstructArgs),
    /// Check that a map between two spaces is strongly continuous.
    Sc(ScArgs),
    /// Enumerate small models by required and forbidden properties.
    Search(SearchArgs),
    /// Run the union diagram on truncated Cantor spaces.
    Harness(HarnessArgs),
    /// Classify every model up to isomorphism.
    Catalog(CatalogArgs),
}

#[derive(Args)]
struct CheckArgs {
    file: PathBuf,
    /// Comma-separated properties, e.g. B1,B2,B5,WSS.
    #[arg(long, default_value = "B1,B2,B3,B4,B5,EF,NN,WSS")]
    properties: String,
    #[arg(long, value_enum, default_value_t = WssArg::Neighborhood)]
    wss_reading: WssArg,
    #[arg(long, value_enum, default_value_t = TcArg::Corrected)]
    tc_variant: TcArg,
    /// Decide properties by exhaustive subset search.
    #[arg(long)]
    brute_force: bool,
    /// A net to test for total Cauchyness and convergence:
    /// `{"preceq": [[1,1],[0,1]], "values": [0, 2]}`.
    #[arg(long)]
    net: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum WssArg {
    Neighborhood,
    Difference,
}

impl From<WssArg> for WssReading {
    fn from(a: WssArg) -> Self {
        match a {
            WssArg::Neighborhood => WssReading::Neighborhood,
            WssArg::Difference => WssReading::Difference,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TcArg {
    Corrected,
    AsPrinted,
}

impl From<TcArg> for TcVariant {
    fn from(a: TcArg) -> Self {
        match a {
            TcArg::Corrected => TcVariant::Corrected,
            TcArg::AsPrinted => TcVariant::AsPrinted,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructOp {
    Union,
    Product,
    Subspace,
    Cantor,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(value_enum)]
    op: ConstructOp,
    /// Input documents: two for union and product, one for subspace.
    inputs: Vec<PathBuf>,
    /// Points kept by `subspace`, comma-separated.
    #[arg(long)]
    carrier: Option<String>,
    /// Depth for `cantor`.
    #[arg(long)]
    depth: Option<usize>,
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Re-check B1–B5 on the result.
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct ScArgs {
    /// JSON array of target indices, one per source point.
    map: PathBuf,
    src: PathBuf,
    dst: PathBuf,
    #[arg(long)]
    brute_force: bool,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "")]
    require: String,
    #[arg(long, default_value = "")]
    forbid: String,
    /// Stop after this many models.
    #[arg(long)]
    limit: Option<usize>,
    /// Report one model per isomorphism class.
    #[arg(long)]
    canonical: bool,
    /// Retry at larger sizes up to this one while nothing is found.
    #[arg(long)]
    escalate_to: Option<usize>,
}

#[derive(Args)]
struct HarnessArgs {
    #[arg(long)]
    depth: usize,
    /// Points of D₁ (default: all).
    #[arg(long)]
    d1: Option<String>,
    #[arg(long)]
    d2: Option<String>,
    /// Images of h₁ on D₁ in increasing order, comma-separated.
    #[arg(long)]
    h1: Option<String>,
    #[arg(long)]
    h2: Option<String>,
    /// Ambient space document (default: the Cantor space itself).
    #[arg(long)]
    ambient: Option<PathBuf>,
    #[arg(long)]
    x0: Option<String>,
    #[arg(long)]
    x1: Option<String>,
}

#[derive(Args)]
struct CatalogArgs {
    #[arg(long, default_value_t = 4)]
    nmax: usize,
}

/// Failure carried to `main`: the exit code and a message.
struct Failure {
    code: u8,
    error: Error,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        let code = match error {
            Error::Parse(_) | Error::InvalidArgument(_) => 2,
            _ => 3,
        };
        Failure { code, error }
    }
}

type Outcome = Result<bool, Failure>;

fn load_space(path: &Path) -> Result<Space, Error> {
    SpaceDocument::load(path)?.to_space()
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse_points(text: &str) -> Result<Vec<usize>, Error> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("{t:?} is not a point index"))))
        .collect()
}

fn emit(json: bool, value: serde_json::Value, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(&value).expect("reports serialize"));
    } else {
        print!("{}", text());
    }
}

fn print_reports(reports: &[PropertyReport]) -> String {
    reports.iter().map(|r| format!("{r}\n")).collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NetFile {
    preceq: Vec<Vec<u8>>,
    values: Vec<usize>,
}

#[derive(Serialize)]
struct NetReport {
    totally_cauchy: PropertyReport,
    converges_to: Vec<usize>,
}

fn cmd_check(args: CheckArgs, json: bool) -> Outcome {
    let space = load_space(&args.file)?;
    let props = Property::parse_list(&args.properties)?;
    let wss: WssReading = args.wss_reading.into();
    let tc: TcVariant = args.tc_variant.into();
    let mut ev = Evaluator::with_options(
        &space,
        EvalOptions {
            brute_force: args.brute_force,
            wss_reading: wss,
        },
    );
    let reports = props.iter().map(|&p| ev.evaluate(p)).collect::<Result<Vec<_>, _>>()?;

    let net = match &args.net {
        None => None,
        Some(path) => {
            let nf: NetFile = read_json(path)?;
            let preceq: Vec<Vec<bool>> = nf.preceq.iter().map(|r| r.iter().map(|&b| b != 0).collect()).collect();
            if let Some(&v) = nf.values.iter().find(|&&v| v >= space.n()) {
                return Err(Error::PointOutOfRange { point: v, n: space.n() }.into());
            }
            let net = DirectedNet::new(&preceq, nf.values)?;
            let converges_to = (0..space.n())
                .map(|x| net_converges(&net, &space, x).map(|c| c.then_some(x)))
                .filter_map(Result::transpose)
                .collect::<Result<Vec<_>, _>>()?;
            Some(NetReport {
                totally_cauchy: totally_cauchy(&net, &space, tc)?,
                converges_to,
            })
        }
    };

    let holds = reports.iter().all(|r| r.holds) && net.as_ref().is_none_or(|n| n.totally_cauchy.holds);
    emit(
        json,
        json!({
            "version": REPORT_VERSION,
            "command": "check",
            "file": args.file.display().to_string(),
            "n": space.n(),
            "options": {
                "brute_force": args.brute_force,
                "wss_reading": wss,
                "tc_variant": tc,
            },
            "results": reports,
            "net": net,
            "holds": holds,
        }),
        || {
            let mut out = format!("{} ({} points)\n", args.file.display(), space.n());
            out += &print_reports(&reports);
            if let Some(n) = &net {
                out += &format!("{}\nnet converges to {:?}\n", n.totally_cauchy, n.converges_to);
            }
            out
        },
    );
    Ok(holds)
}

fn cmd_construct(args: ConstructArgs, json: bool) -> Outcome {
    let arity = match args.op {
        ConstructOp::Union | ConstructOp::Product => 2,
        ConstructOp::Subspace => 1,
        ConstructOp::Cantor => 0,
    };
    if args.inputs.len() != arity {
        return Err(Error::InvalidArgument(format!(
            "this construction takes {arity} input documents, got {}",
            args.inputs.len()
        ))
        .into());
    }
    let inputs = args.inputs.iter().map(|p| load_space(p)).collect::<Result<Vec<_>, _>>()?;
    let doc = match args.op {
        ConstructOp::Union => {
            let (x, y) = (&inputs[0], &inputs[1]);
            SpaceDocument::from_space(&disjoint_union(x, y)?).with_metadata(
                "order",
                format!("points 0..{} are the first input, {}..{} the second", x.n(), x.n(), x.n() + y.n()),
            )
        }
        ConstructOp::Product => {
            let (x, y) = (&inputs[0], &inputs[1]);
            SpaceDocument::from_space(&product(x, y)?)
                .with_metadata("order", format!("row-major: (i, j) is point i * {} + j", y.n()))
        }
        ConstructOp::Subspace => {
            let x = &inputs[0];
            let text = args
                .carrier
                .as_deref()
                .ok_or_else(|| Error::InvalidArgument("subspace needs --carrier".into()))?;
            let carrier = Subset::from_points(x.n(), parse_points(text)?)?;
            SpaceDocument::from_space(&subspace(x, carrier)?)
                .with_metadata("order", format!("points of {carrier} in increasing order"))
        }
        ConstructOp::Cantor => {
            let depth = args
                .depth
                .ok_or_else(|| Error::InvalidArgument("cantor needs --depth".into()))?;
            let space = SpaceDocument::cantor(depth).to_space()?;
            SpaceDocument::from_space(&space)
                .with_metadata("order", format!("point i spells i in {depth} binary digits, most significant first"))
        }
    };
    let space = doc.to_space()?;
    let verification = if args.verify {
        Some(check_axioms(&space)?)
    } else {
        None
    };
    let holds = verification.as_ref().is_none_or(|r| r.is_apartness());

    match &args.out {
        Some(path) => doc.save(path).map_err(|e| Failure { code: 3, error: e })?,
        None if !json => println!("{}", doc.to_json()),
        None => {}
    }
    emit(
        json,
        json!({
            "version": REPORT_VERSION,
            "command": "construct",
            "n": space.n(),
            "out": args.out.as_ref().map(|p| p.display().to_string()),
            "document": if args.out.is_none() { Some(&doc) } else { None },
            "verification": verification.as_ref().map(|r| r.entries().to_vec()),
            "holds": holds,
        }),
        || {
            let mut out = String::new();
            if let Some(path) = &args.out {
                out += &format!("wrote {} points to {}\n", space.n(), path.display());
            }
            if let Some(r) = &verification {
                out += &print_reports(&r.entries().map(Clone::clone));
            }
            out
        },
    );
    Ok(holds)
}

fn cmd_sc(args: ScArgs, json: bool) -> Outcome {
    let image: Vec<usize> = read_json(&args.map)?;
    let src = load_space(&args.src)?;
    let dst = load_space(&args.dst)?;
    let f = PointMap::new(dst.n(), image)?;
    let report = if args.brute_force {
        is_strongly_continuous_brute(&f, &src, &dst)?
    } else {
        is_strongly_continuous(&f, &src, &dst)?
    };
    let holds = report.holds;
    emit(
        json,
        json!({ "version": REPORT_VERSION, "command": "sc", "result": report, "holds": holds }),
        || format!("{report}\n"),
    );
    Ok(holds)
}

fn model_line(m: &ModelReport) -> String {
    let mut out = format!("model {}", m.code);
    if let Some(c) = &m.canonical {
        out += &format!(" (class {c})");
    }
    let neq: Vec<String> = m.model.neq.iter().map(|r| r.iter().map(u8::to_string).collect()).collect();
    let p: Vec<String> = m.model.p.iter().map(|r| r.iter().map(u8::to_string).collect()).collect();
    out += &format!(": neq {} p {}", neq.join("/"), p.join("/"));
    for (prop, w) in &m.witnesses {
        out += &format!("; {prop} fails at {w}");
    }
    out + "\n"
}

fn cmd_search(args: SearchArgs, json: bool) -> Outcome {
    let mut q = ModelQuery::new(args.n)
        .require(&Property::parse_list(&args.require)?)
        .forbid(&Property::parse_list(&args.forbid)?)
        .canonicalize(args.canonical);
    q.limit = args.limit;

    if let Some(max_n) = args.escalate_to {
        let Escalation { tried, found_at, models } = find_with_escalation(q, max_n)?;
        emit(
            json,
            json!({
                "version": REPORT_VERSION,
                "command": "search",
                "tried": tried,
                "found_at": found_at,
                "models": models,
            }),
            || {
                let mut out: String = tried.iter().map(|(n, k)| format!("n = {n}: {k} models\n")).collect();
                out += &models.iter().map(model_line).collect::<String>();
                out
            },
        );
        return Ok(found_at.is_some());
    }

    // One JSON object per line, so results can be consumed as they arrive.
    let mut stream = enumerate_models(q)?;
    let mut found = 0;
    for m in stream.by_ref() {
        found += 1;
        if json {
            let line = json!({ "version": REPORT_VERSION, "command": "search", "model": m });
            println!("{}", serde_json::to_string(&line).expect("reports serialize"));
        } else {
            print!("{}", model_line(&m));
        }
    }
    if let Some(e) = stream.error() {
        return Err(e.clone().into());
    }
    if !json {
        println!("{found} models");
    }
    Ok(found > 0)
}

fn cmd_harness(args: HarnessArgs, json: bool) -> Outcome {
    let mut input = HarnessInput::identity(args.depth)?;
    let nc = input.d1.carrier();
    if let Some(path) = &args.ambient {
        input.ambient = load_space(path)?;
        input.x0 = input.ambient.full();
        input.x1 = input.ambient.full();
    }
    let ne = input.ambient.n();
    if let Some(t) = &args.d1 {
        input.d1 = Subset::from_points(nc, parse_points(t)?)?;
    }
    if let Some(t) = &args.d2 {
        input.d2 = Subset::from_points(nc, parse_points(t)?)?;
    }
    if let Some(t) = &args.x0 {
        input.x0 = Subset::from_points(ne, parse_points(t)?)?;
    }
    if let Some(t) = &args.x1 {
        input.x1 = Subset::from_points(ne, parse_points(t)?)?;
    }
    let map_or_identity = |spec: &Option<String>, dom: Subset, target: Subset| -> Result<PointMap, Error> {
        match spec {
            Some(t) => PointMap::new(target.len(), parse_points(t)?),
            None if dom.len() == target.len() => Ok(PointMap::identity(dom.len())),
            None => Err(Error::InvalidArgument(
                "the default identity map needs D and X of equal size; pass --h1/--h2".into(),
            )),
        }
    };
    input.h1 = map_or_identity(&args.h1, input.d1, input.x0)?;
    input.h2 = map_or_identity(&args.h2, input.d2, input.x1)?;

    let report: HarnessReport = union_harness(&input)?;
    let holds = report.all_checks_pass();
    emit(
        json,
        json!({ "version": REPORT_VERSION, "command": "harness", "report": report, "holds": holds }),
        || {
            let mut out = format!("depth {}\n", report.depth);
            for (title, group) in [
                ("preconditions", &report.preconditions),
                ("first-bit split", &report.isomorphism),
                ("diagram", &report.checks),
                ("auxiliary", &report.auxiliary),
            ] {
                out += &format!("{title}:\n");
                out += &group.iter().map(|r| format!("  {r}\n")).collect::<String>();
            }
            out
        },
    );
    Ok(holds)
}

fn catalog_text(cat: &CatalogDocument) -> String {
    let mut out = String::new();
    for lvl in &cat.levels {
        out += &format!("n = {}: {} labelled models, {} classes\n", lvl.n, lvl.labelled_models, lvl.classes);
        let counts: Vec<String> = lvl.property_counts.iter().map(|(p, k)| format!("{p} {k}")).collect();
        out += &format!("  {}\n", counts.join(", "));
    }
    for o in &cat.observations {
        out += &format!("{o}\n");
    }
    out
}

fn cmd_catalog(args: CatalogArgs, json: bool) -> Outcome {
    let cat = catalog(args.nmax)?;
    emit(
        json,
        json!({ "version": REPORT_VERSION, "command": "catalog", "catalog": cat }),
        || catalog_text(&cat),
    );
    Ok(true)
}

fn configure_threads() -> Result<(), Error> {
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = v
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{THREADS_VAR} must be a positive integer, got {v:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let outcome = configure_threads().map_err(Failure::from).and_then(|()| match cli.command {
        Command::Check(a) => cmd_check(a, json),
        Command::Construct(a) => cmd_construct(a, json),
        Command::Sc(a) => cmd_sc(a, json),
        Command::Search(a) => cmd_search(a, json),
        Command::Harness(a) => cmd_harness(a, json),
        Command::Catalog(a) => cmd_catalog(a, json),
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure { code, error }) => {
            if json {
                let kind = if code == 2 { "parse" } else { "invariant" };
                let v = json!({ "version": REPORT_VERSION, "error": { "kind": kind, "message": error.to_string() } });
                println!("{}", serde_json::to_string_pretty(&v).expect("errors serialize"));
            }
            eprintln!("error: {error}");
            ExitCode::from(code)
        }
    }
}
