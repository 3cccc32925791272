mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::io::Write;
use std::{env, fs};

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use nonloose_core::calculus::{CalculusError, ClassicalPair, RationalData, Sign};
use nonloose_core::certify::{
    self, Certificate, CertifyError, Side, TensionQuery, Verdict, DEFAULT_MAX_N,
};
use nonloose_core::diagram::{parse_front, Direction, FrontError, FrontWord, OrientedFront};
use nonloose_core::knotdata::{self, KnotDataError, KnotRecord, RecordBook};
use nonloose_core::rational::{self, ParseRationalError, Rational};
use nonloose_core::surgery::{self, Orientation, SurgeryDiagram, SurgeryDiagramParseError, SurgeryError};

#[derive(Parser)]
#[command(name = "nonloose", version, about = "Invariants and looseness certificates for Legendrian knots")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Extra knot records (JSON). Defaults to $XDG_CONFIG_HOME/nonloose/records.json if present.
    #[arg(long, global = true, value_name = "FILE")]
    records: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Base {
    Rightward,
    Leftward,
}

impl From<Base> for Direction {
    fn from(b: Base) -> Self {
        match b {
            Base::Rightward => Direction::Rightward,
            Base::Leftward => Direction::Leftward,
        }
    }
}

#[derive(Args)]
struct FrontInput {
    /// Front word file; `-` reads stdin.
    file: PathBuf,
    /// Direction of the lower strand at the first left cusp.
    #[arg(long, value_enum, default_value_t = Base::Rightward)]
    base: Base,
}

#[derive(Subcommand)]
enum Command {
    /// tb and rot of a front word.
    FrontInvariants {
        #[command(flatten)]
        front: FrontInput,
    },
    /// Adds zigzags to a front word.
    FrontStabilize {
        #[command(flatten)]
        front: FrontInput,
        #[arg(long, default_value = "+")]
        sign: Sign,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Removes the first syntactic zigzag, if any.
    FrontDestab {
        #[command(flatten)]
        front: FrontInput,
    },
    /// Rational invariants of the passive knot in a surgery diagram.
    SurgeryInvariants {
        file: PathBuf,
        #[arg(long)]
        chi: Option<i64>,
        #[arg(long)]
        reverse: bool,
    },
    /// Rational invariants of the (+1)-surgery dual of a knot.
    DualInvariants {
        #[arg(long)]
        tb: i64,
        #[arg(long)]
        rot: i64,
        #[arg(long)]
        chi: Option<i64>,
        /// One stabilization of the dual with this sign.
        #[arg(long, conflicts_with_all = ["pos", "neg"])]
        stab: Option<Sign>,
        #[arg(long, default_value_t = 0)]
        pos: u64,
        #[arg(long, default_value_t = 0)]
        neg: u64,
    },
    /// Checks the Bennequin-type bound.
    CertifyBennequin {
        #[command(flatten)]
        knot: KnotArgs,
        /// Rational self-linking number of a transverse knot instead.
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["tb", "rot"])]
        sl: Option<String>,
    },
    /// Looseness of a Legendrian unknot in an overtwisted S^3.
    CertifyUnknot {
        #[arg(long)]
        tb: i64,
        #[arg(long)]
        rot: i64,
    },
    /// Depth and tension of the (+1)-surgery dual of a knot in the tight S^3.
    CertifyDual(DualArgs),
    /// Upper bound on tension from Bennequin violations of stabilizations.
    CertifyTension {
        #[command(flatten)]
        knot: KnotArgs,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: u64,
        #[arg(long, default_value = "both")]
        side: Side,
    },
    /// Duals of negative torus knots with tension one and depth at least two.
    SearchExamples {
        #[arg(long)]
        p_max: u64,
    },
    /// Looks up a knot record.
    KnotRecord {
        #[arg(long, num_args = 2, value_names = ["P", "Q"])]
        torus: Option<Vec<i64>>,
        /// Named example such as `L2q(3)` or `LOSS(2)`.
        #[arg(long)]
        example: Option<String>,
        #[arg(long)]
        unknot: bool,
        /// Name of a record in the records file.
        #[arg(long)]
        name: Option<String>,
        /// Non-loose unknots with tb up to N.
        #[arg(long, value_name = "N")]
        unknot_table: Option<u64>,
    },
}

#[derive(Args)]
struct DualArgs {
    #[arg(long, requires_all = ["rot", "chi"], required_unless_present_any = ["torus", "record"])]
    tb: Option<i64>,
    #[arg(long)]
    rot: Option<i64>,
    #[arg(long)]
    chi: Option<i64>,
    /// Take the knot from the max-tb torus knot record T(P, Q).
    #[arg(long, num_args = 2, value_names = ["P", "Q"], conflicts_with = "record")]
    torus: Option<Vec<i64>>,
    /// Take the knot from a named record in the records file.
    #[arg(long)]
    record: Option<String>,
    #[arg(long)]
    surgery_overtwisted: Option<bool>,
    #[arg(long)]
    is_stabilization: Option<bool>,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    complement_tight: bool,
}

#[derive(Args)]
struct KnotArgs {
    /// `tb`, or `tb_Q` as `p/q`.
    #[arg(long, allow_hyphen_values = true)]
    tb: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    rot: Option<String>,
    #[arg(long)]
    chi: Option<i64>,
    /// Homological order; implies rational data.
    #[arg(long)]
    r: Option<u64>,
}

#[derive(Debug, Error)]
enum Failure {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Front(#[from] FrontError),
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
    #[error(transparent)]
    SurgeryFile(#[from] SurgeryDiagramParseError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    KnotData(#[from] KnotDataError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error("{0}")]
    Input(String),
}

impl Failure {
    fn kind(&self) -> &'static str {
        match self {
            Failure::Io { .. } => "io",
            Failure::Front(_) => "front",
            Failure::Surgery(_) | Failure::SurgeryFile(_) => "surgery",
            Failure::Certify(_) => "certify",
            Failure::KnotData(_) => "knotdata",
            Failure::Calculus(_) => "calculus",
            Failure::Rational(_) => "rational",
            Failure::Input(_) => "input",
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    let io = |source| Failure::Io { path: path.display().to_string(), source };
    if path == Path::new("-") {
        return std::io::read_to_string(std::io::stdin()).map_err(io);
    }
    fs::read_to_string(path).map_err(io)
}

fn load_front(input: &FrontInput) -> Result<OrientedFront, Failure> {
    let word = parse_front(&read(&input.file)?)?;
    Ok(word.orient(input.base.into()))
}

fn config_records() -> Option<PathBuf> {
    let base = env::var_os("XDG_CONFIG_HOME")
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .or_else(|| env::var_os("HOME").map(|h| PathBuf::from(h).join(".config")))?;
    let path = base.join("nonloose").join("records.json");
    path.is_file().then_some(path)
}

fn load_records(explicit: Option<&Path>) -> Result<RecordBook, Failure> {
    match explicit.map(Path::to_path_buf).or_else(config_records) {
        Some(path) => Ok(RecordBook::from_json(&read(&path)?)?),
        None => Ok(RecordBook::default()),
    }
}

fn front_json(f: &OrientedFront) -> Value {
    json!({ "tb": f.tb(), "rot": f.rot() })
}

fn word_json(w: &FrontWord) -> Value {
    Value::String(w.events().iter().map(ToString::to_string).collect::<Vec<_>>().join(" ; "))
}

fn rational_json(d: &RationalData, chi: Option<i64>) -> Value {
    let mut v = json!({
        "tb_q": rational::format(&d.tb_q),
        "rot_q": rational::format(&d.rot_q),
        "r": d.r,
    });
    if let Some(chi) = chi {
        v["chi"] = json!(chi);
    }
    v
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn knot_query(k: &KnotArgs) -> Result<TensionQuery, Failure> {
    let chi = k.chi.ok_or(CertifyError::MissingChi)?;
    let need = |name: &str, v: &Option<String>| {
        v.as_deref().map(rational::parse).transpose()?.ok_or_else(|| Failure::Input(format!("--{name} is required")))
    };
    let tb: Rational = need("tb", &k.tb)?;
    let rot: Rational = need("rot", &k.rot)?;
    if k.r.is_none() && rational::is_integer(&tb) && rational::is_integer(&rot) {
        let whole = |q: &Rational| i64::try_from(q.to_integer()).map_err(|_| Failure::Input("value out of range".into()));
        let p = ClassicalPair::new(whole(&tb)?, whole(&rot)?).with_chi(chi)?;
        return Ok(TensionQuery::Classical(p));
    }
    Ok(TensionQuery::Rational(RationalData::new(tb, rot, k.r.unwrap_or(1), chi)?))
}

fn certify_dual(cli_records: Option<&Path>, args: DualArgs) -> Result<Value, Failure> {
    let DualArgs { tb, rot, chi, torus, record, surgery_overtwisted, is_stabilization, complement_tight } = args;
    let rec: Option<KnotRecord> = match (torus, record) {
        (Some(pq), _) => Some(knotdata::torus_record(pq[0], pq[1])?),
        (None, Some(name)) => Some(
            load_records(cli_records)?
                .get(&name)
                .cloned()
                .ok_or_else(|| Failure::Input(format!("no record named `{name}`")))?,
        ),
        _ => None,
    };
    let missing = |what: &str| Failure::Input(format!("--{what} is required"));
    let tb = tb.or_else(|| rec.as_ref().and_then(|r| r.max_tb)).ok_or_else(|| missing("tb"))?;
    let rot = rot
        .or_else(|| rec.as_ref().and_then(|r| r.rot_at_max_tb.iter().min().copied()))
        .ok_or_else(|| missing("rot"))?;
    let chi = chi.or(rec.as_ref().map(|r| r.chi)).ok_or_else(|| missing("chi"))?;
    let overtwisted = surgery_overtwisted
        .or_else(|| rec.as_ref().and_then(|r| r.plus_one_surgery_overtwisted))
        .unwrap_or(false);

    let tension = certify::tension_one_dual(tb, rot, chi, overtwisted);
    let is_stab = match (is_stabilization, &rec) {
        (Some(s), _) => Some(s),
        (None, Some(r)) => certify::not_a_stabilization_by_max_tb(tb, r)?.then_some(false),
        (None, None) => None,
    };
    let depth = is_stab.map(|s| {
        let mut c = certify::depth_one_dual(s, complement_tight);
        if let (Some(r), None) = (&rec, is_stabilization) {
            let inputs = json!({ "tb": tb, "max_tb": r.max_tb });
            c.reasons.insert(0, certify::Reason::new(certify::Rule::MaxTbNonStabilization, inputs));
        }
        c
    });
    let combined = match &depth {
        Some(d) if !matches!(tension.verdict, Verdict::Inconclusive { .. }) && d.verdict == Verdict::DepthAtLeastTwo => {
            Some(tension.clone().merge(d.clone(), Verdict::TensionBelowDepth)?)
        }
        _ => None,
    };
    Ok(json!({
        "tension": to_value(&tension),
        "depth": depth.as_ref().map(to_value),
        "combined": combined.as_ref().map(to_value),
    }))
}

fn knot_record(
    cli_records: Option<&Path>,
    torus: Option<Vec<i64>>,
    example: Option<String>,
    unknot: bool,
    name: Option<String>,
    unknot_table: Option<u64>,
) -> Result<Value, Failure> {
    if let Some(pq) = torus {
        return Ok(to_value(&knotdata::torus_record(pq[0], pq[1])?));
    }
    if let Some(tag) = example {
        return Ok(to_value(&knotdata::named_example_str(&tag)?));
    }
    if unknot {
        return Ok(to_value(&knotdata::unknot_record()));
    }
    if let Some(n) = unknot_table {
        let rows = knotdata::nonloose_unknot_table(n)?;
        return Ok(Value::Array(rows.into_iter().map(|(tb, rot)| json!({ "tb": tb, "rot": rot })).collect()));
    }
    if let Some(name) = name {
        let book = load_records(cli_records)?;
        return book
            .get(&name)
            .map(to_value)
            .ok_or_else(|| Failure::Input(format!("no record named `{name}`")));
    }
    Err(Failure::Input("one of --torus, --example, --unknot, --unknot-table or --name is required".into()))
}

fn run(cli: Cli) -> Result<Value, Failure> {
    let records = cli.records.as_deref();
    match cli.command {
        Command::FrontInvariants { front } => Ok(front_json(&load_front(&front)?)),
        Command::FrontStabilize { front, sign, count } => {
            let f = load_front(&front)?;
            let s = match sign {
                Sign::Positive => f.stabilize_many(count, 0),
                Sign::Negative => f.stabilize_many(0, count),
            };
            let mut v = front_json(&s);
            v["word"] = word_json(s.word());
            Ok(v)
        }
        Command::FrontDestab { front } => {
            let f = load_front(&front)?;
            match nonloose_core::diagram::detect_syntactic_destabilization(f.word()) {
                Some(at) => {
                    let d = f.word().remove_zigzag(at)?.orient(f.base());
                    let mut v = front_json(&d);
                    v["found"] = json!(true);
                    v["at"] = json!([at.0, at.1]);
                    v["word"] = word_json(d.word());
                    Ok(v)
                }
                None => Ok(json!({ "found": false })),
            }
        }
        Command::SurgeryInvariants { file, chi, reverse } => {
            let diagram = SurgeryDiagram::from_json(&read(&file)?)?;
            let orientation = if reverse { Orientation::Reversed } else { Orientation::AsGiven };
            let d = diagram.rational_invariants(orientation, chi.unwrap_or(1))?;
            Ok(rational_json(&d, chi))
        }
        Command::DualInvariants { tb, rot, chi, stab, pos, neg } => {
            let (a, b) = match stab {
                Some(Sign::Positive) => (1, 0),
                Some(Sign::Negative) => (0, 1),
                None => (pos, neg),
            };
            let d = surgery::dual_invariants(tb, rot, a, b, chi.unwrap_or(1))?;
            Ok(rational_json(&d, chi))
        }
        Command::CertifyBennequin { knot, sl } => {
            if let Some(sl) = sl {
                let chi = knot.chi.ok_or(CertifyError::MissingChi)?;
                let sl = rational::parse(&sl)?;
                return Ok(to_value(&certify::certify_transverse_bennequin(&sl, chi, knot.r.unwrap_or(1))));
            }
            let cert = match knot_query(&knot)? {
                TensionQuery::Classical(p) => certify::certify_bennequin(&p)?,
                TensionQuery::Rational(d) => certify::certify_bennequin_rational(&d),
            };
            Ok(to_value(&cert))
        }
        Command::CertifyUnknot { tb, rot } => Ok(to_value(&certify::unknot_verdict(&ClassicalPair::new(tb, rot)))),
        Command::CertifyDual(args) => certify_dual(records, args),
        Command::CertifyTension { knot, max_n, side } => {
            let cert: Certificate = certify::tension_certificate(&knot_query(&knot)?, max_n, side)?;
            Ok(to_value(&cert))
        }
        Command::SearchExamples { p_max } => {
            let certs = certify::tension_less_than_depth_search(p_max);
            let bad = certify::check_bundle(&certs);
            if !bad.is_empty() {
                let msgs = bad.into_iter().map(|(i, m)| format!("certificate {i}: {m}")).collect();
                return Err(CertifyError::Inconsistent(msgs).into());
            }
            Ok(to_value(&certs))
        }
        Command::KnotRecord { torus, example, unknot, name, unknot_table } => {
            knot_record(records, torus, example, unknot, name, unknot_table)
        }
    }
}

fn main() -> ExitCode {
    let command = Cli::command().mut_subcommands(|s| s.allow_negative_numbers(true));
    let cli = match Cli::from_arg_matches(&command.get_matches()) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let format = cli.format;
    let (doc, code) = match run(cli) {
        Ok(v) => (v, ExitCode::SUCCESS),
        Err(e) => {
            if format == Format::Text {
                eprintln!("error ({}): {e}", e.kind());
                return ExitCode::from(1);
            }
            (json!({ "error": { "kind": e.kind(), "message": e.to_string() } }), ExitCode::from(1))
        }
    };
    let body = match format {
        Format::Json => serde_json::to_string_pretty(&doc).expect("valid json") + "\n",
        Format::Text => render::text(&doc),
    };
    // A closed pipe downstream is not an error worth reporting.
    let _ = std::io::stdout().lock().write_all(body.as_bytes());
    code
}
