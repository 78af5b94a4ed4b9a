//! Command-line front end: JSON in, deterministic JSON reports out.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use emvkit::algebra::{
    build_with_limit, verify_axioms, AlgebraSpec, Carrier, Element, FiniteEmv, SymbolicEmv,
    DEFAULT_MAX_CARRIER,
};
use emvkit::measures::{
    finite_morphism_id, integral_represent, integral_represent_symbolic, strong_join_t,
    MeasureSpace,
};
use emvkit::states::{
    classify_prestate, classify_symbolic, horn_tarski_extend, horn_tarski_extend_morphism,
    morphism_name, values_from_labels, values_to_labels, StateSpace, SymbolicState,
};
use emvkit::structure::{
    radical_and_infinitesimals, radical_and_infinitesimals_symbolic, representing_checks,
};
use ratlp::Rat;
use serde_json::{json, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable capping finite carrier size.
pub const MAX_CARRIER_VAR: &str = "EMVKIT_MAX_CARRIER";

#[derive(Debug, Parser)]
#[command(name = "emvkit", version, about = "States and measures on EMV-algebras")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Sample bound for symbolic carriers.
    #[arg(long, global = true, default_value_t = 8)]
    pub budget: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Op {
    Join,
    Meet,
    Pos,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the EMV-algebra axioms.
    Verify { spec: PathBuf },
    /// List the state-morphisms.
    Morphisms { spec: PathBuf },
    /// Check a state or classify a symbolic state.
    States {
        spec: PathBuf,
        #[arg(long)]
        check: PathBuf,
    },
    /// Convex weights of a state over the state-morphisms.
    Decompose {
        spec: PathBuf,
        #[arg(long)]
        state: PathBuf,
    },
    /// Extend a state from a subalgebra.
    Extend {
        spec: PathBuf,
        #[arg(long)]
        sub: PathBuf,
        #[arg(long)]
        state: PathBuf,
        /// Extend a state-morphism to a state-morphism.
        #[arg(long)]
        morphism: bool,
    },
    /// Build the representing MV-algebra and check it on a sample.
    Represent { spec: PathBuf },
    /// Lattice operations on signed measures.
    Jordan {
        spec: PathBuf,
        #[arg(long)]
        m1: PathBuf,
        #[arg(long)]
        m2: Option<PathBuf>,
        #[arg(long, value_enum)]
        op: Op,
    },
    /// Radical and infinitesimals.
    Radical {
        spec: PathBuf,
        #[arg(long, default_value_t = 8)]
        bound: usize,
    },
    /// Classify a pre-state.
    Classify {
        spec: PathBuf,
        #[arg(long)]
        prestate: PathBuf,
    },
}

/// What the process prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

#[derive(Debug)]
enum Failure {
    /// Unreadable files, malformed JSON: exit 1.
    Usage(String),
    /// Input that violates a module contract: exit 2.
    Domain {
        code: String,
        message: String,
        witness: Vec<String>,
    },
}

macro_rules! domain_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Domain {
                    code: e.code().to_string(),
                    message: e.to_string(),
                    witness: e.witness(),
                }
            }
        }
    )*};
}

domain_from!(
    emvkit::algebra::AlgebraError,
    emvkit::structure::StructureError,
    emvkit::states::StatesError,
    emvkit::measures::MeasuresError
);

fn domain(code: &str, message: impl Into<String>) -> Failure {
    Failure::Domain {
        code: code.into(),
        message: message.into(),
        witness: Vec::new(),
    }
}

/// Analysis result plus whether the input violated something.
struct Payload {
    value: Value,
    violated: bool,
}

impl Payload {
    fn ok(value: Value) -> Self {
        Payload {
            value,
            violated: false,
        }
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{} is not valid JSON: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path, v: Value) -> Result<T, Failure> {
    serde_json::from_value(v)
        .map_err(|e| Failure::Usage(format!("{} has the wrong shape: {e}", path.display())))
}

fn max_carrier() -> Result<usize, Failure> {
    match std::env::var(MAX_CARRIER_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{MAX_CARRIER_VAR}={v} is not a size"))),
        Err(_) => Ok(DEFAULT_MAX_CARRIER),
    }
}

fn load_carrier(path: &Path) -> Result<Carrier, Failure> {
    let spec: AlgebraSpec = parse(path, read_json(path)?)?;
    Ok(build_with_limit(&spec, max_carrier()?)?)
}

fn summary(carrier: &Carrier) -> Result<Value, Failure> {
    Ok(match carrier {
        Carrier::Finite(m) => json!({
            "size": m.size(),
            "idempotents": m.idempotents().len(),
            "top": m.label(m.top()?),
        }),
        Carrier::Symbolic(s) => json!({
            "name": s.name(),
            "size": Value::Null,
            "idempotents": Value::Null,
            "top": s.top().map(|t| t.to_json()),
        }),
    })
}

fn labels(m: &FiniteEmv, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| m.label(x).to_string()).collect()
}

fn pair_labels(m: &FiniteEmv, p: Option<(usize, usize)>) -> Value {
    match p {
        Some((x, y)) => json!(labels(m, &[x, y])),
        None => Value::Null,
    }
}

fn finite_values(path: &Path) -> Result<BTreeMap<String, Rat>, Failure> {
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Values {
        values: BTreeMap<String, Rat>,
    }
    Ok(parse::<Values>(path, read_json(path)?)?.values)
}

fn symbolic_state(path: &Path) -> Result<SymbolicState, Failure> {
    parse(path, read_json(path)?)
}

fn values_json(values: &BTreeMap<String, Rat>) -> Value {
    serde_json::to_value(values).expect("rationals serialize")
}

fn finite_only<'a>(carrier: &'a Carrier, what: &str) -> Result<&'a FiniteEmv, Failure> {
    carrier
        .as_finite()
        .ok_or_else(|| domain("UnsupportedCarrier", format!("{what} needs a finite algebra")))
}

fn cmd_verify(carrier: &Carrier, cli: &Cli) -> Result<Payload, Failure> {
    let report = verify_axioms(carrier, cli.budget, cli.seed);
    Ok(Payload {
        violated: !report.is_clean(),
        value: serde_json::to_value(&report).expect("report serializes"),
    })
}

fn cmd_morphisms(carrier: &Carrier, cli: &Cli) -> Result<Payload, Failure> {
    match carrier {
        Carrier::Finite(m) => {
            let space = StateSpace::new(m)?;
            let list: Vec<Value> = space
                .morphisms()
                .iter()
                .zip(space.maximal_ideals())
                .enumerate()
                .map(|(i, (s, ideal))| {
                    json!({
                        "id": finite_morphism_id(i),
                        "kernel": ideal.labels(m),
                        "values": values_json(&values_to_labels(m, s)),
                    })
                })
                .collect();
            Ok(Payload::ok(json!({ "morphisms": list })))
        }
        Carrier::Symbolic(s) => {
            let (rule, mut ids): (&str, Vec<String>) = match s {
                SymbolicEmv::FinSubsets => (
                    "s_n(A) = 1 if n ∈ A else 0",
                    (1..=cli.budget as u64).map(|n| morphism_name(s, n)).collect(),
                ),
                SymbolicEmv::FinSupport { .. } => (
                    "s_n(f) = f(n)/k",
                    (1..=cli.budget as u64).map(|n| morphism_name(s, n)).collect(),
                ),
                SymbolicEmv::ChangLex => ("s(b,m) = b", vec!["s".to_string()]),
                SymbolicEmv::Representing(_) => (
                    "~s_n extends s_n; s_inf vanishes on the inner algebra",
                    (1..=cli.budget as u64).map(|n| morphism_name(s, n)).collect(),
                ),
            };
            if matches!(s, SymbolicEmv::Representing(_)) {
                ids.push("s_inf".into());
            }
            Ok(Payload::ok(json!({
                "rule": rule,
                "listed": ids,
                "budget": cli.budget,
            })))
        }
    }
}

fn cmd_states(carrier: &Carrier, check: &Path, cli: &Cli) -> Result<Payload, Failure> {
    match carrier {
        Carrier::Finite(m) => {
            let f = values_from_labels(m, &finite_values(check)?)?;
            let rep = StateSpace::new(m)?.check(&f)?;
            Ok(Payload {
                violated: !rep.is_state,
                value: json!({
                "in_unit_interval": rep.in_unit_interval,
                "is_additive": rep.is_additive,
                "additivity_witness": pair_labels(m, rep.additivity_witness),
                "attains_one": rep.attains_one,
                "is_state": rep.is_state,
                "is_morphism": rep.is_morphism,
                "morphism_witness": pair_labels(m, rep.morphism_witness),
                "is_extremal": rep.is_extremal,
                "kernel": labels(m, &rep.kernel),
                "kernel_is_maximal": rep.kernel_is_maximal,
            }),
            })
        }
        Carrier::Symbolic(s) => {
            let f = symbolic_state(check)?;
            let rep = classify_symbolic(s, &f, cli.budget, cli.seed)?;
            Ok(Payload::ok(serde_json::to_value(&rep).expect("report serializes")))
        }
    }
}

fn cmd_decompose(carrier: &Carrier, state: &Path, cli: &Cli) -> Result<Payload, Failure> {
    match carrier {
        Carrier::Finite(m) => {
            let s = values_from_labels(m, &finite_values(state)?)?;
            let mu = integral_represent(m, &s)?;
            let space = StateSpace::new(m)?;
            let morphisms: BTreeMap<String, Value> = space
                .morphisms()
                .iter()
                .enumerate()
                .filter(|(i, _)| mu.weights.contains_key(&finite_morphism_id(*i)))
                .map(|(i, t)| (finite_morphism_id(i), values_json(&values_to_labels(m, t))))
                .collect();
            Ok(Payload::ok(json!({
                "weights": serde_json::to_value(&mu.weights).expect("rationals serialize"),
                "inf": mu.inf,
                "morphisms": morphisms,
            })))
        }
        Carrier::Symbolic(fam) => {
            let mu = integral_represent_symbolic(fam, &symbolic_state(state)?, cli.budget)?;
            Ok(Payload::ok(serde_json::to_value(&mu).expect("measure serializes")))
        }
    }
}

fn cmd_extend(
    carrier: &Carrier,
    sub: &Path,
    state: &Path,
    morphism: bool,
) -> Result<Payload, Failure> {
    let m = finite_only(carrier, "extend")?;
    let elems: Vec<Value> = parse(sub, read_json(sub)?)?;
    let sub_idx = elems
        .iter()
        .map(|v| match carrier.parse_element(v)? {
            Element::Index(i) => Ok(i),
            other => Err(domain("ForeignElement", format!("{other} is not finite"))),
        })
        .collect::<Result<Vec<usize>, Failure>>()?;
    let given = finite_values(state)?;
    let mut s0 = Vec::with_capacity(sub_idx.len());
    for &x in &sub_idx {
        let v = given.get(m.label(x)).ok_or_else(|| Failure::Domain {
            code: "DimensionMismatch".into(),
            message: format!("no value for {}", m.label(x)),
            witness: vec![m.label(x).to_string()],
        })?;
        s0.push(v.clone());
    }
    if given.len() != sub_idx.len() {
        return Err(Failure::Domain {
            code: "DimensionMismatch".into(),
            message: format!("{} values for {} subalgebra elements", given.len(), sub_idx.len()),
            witness: Vec::new(),
        });
    }
    let s = if morphism {
        horn_tarski_extend_morphism(m, &sub_idx, &s0)?
    } else {
        horn_tarski_extend(m, &sub_idx, &s0)?
    };
    Ok(Payload::ok(json!({
        "mode": if morphism { "morphism" } else { "lp" },
        "extension": values_json(&values_to_labels(m, &s)),
    })))
}

fn cmd_represent(carrier: &Carrier, cli: &Cli) -> Result<Payload, Failure> {
    let inner = match carrier {
        Carrier::Symbolic(s) => s,
        Carrier::Finite(_) => return Err(emvkit::algebra::AlgebraError::HasTop.into()),
    };
    let rep = representing_checks(inner, cli.budget, cli.seed)?;
    let n = SymbolicEmv::representing(inner.clone())?;
    Ok(Payload {
        violated: !rep.holds(),
        value: json!({
            "representing": n.name(),
            "report": serde_json::to_value(&rep).expect("report serializes"),
        }),
    })
}

fn cmd_jordan(carrier: &Carrier, m1: &Path, m2: Option<&Path>, op: Op) -> Result<Payload, Failure> {
    match carrier {
        Carrier::Finite(m) => {
            let space = MeasureSpace::new(m)?;
            let a = values_from_labels(m, &finite_values(m1)?)?;
            let zero = vec![Rat::zero(); m.size()];
            let b = match m2 {
                Some(p) => values_from_labels(m, &finite_values(p)?)?,
                None if op == Op::Pos => zero,
                None => return Err(Failure::Usage("--m2 is required for join and meet".into())),
            };
            let value = match op {
                Op::Join => json!({ "op": "join", "result": values_json(&values_to_labels(m, &space.join(&a, &b)?)) }),
                Op::Meet => json!({ "op": "meet", "result": values_json(&values_to_labels(m, &space.meet(&a, &b)?)) }),
                Op::Pos => {
                    let (pos, neg) = space.jordan_parts(&a)?;
                    json!({
                        "op": "pos",
                        "result": values_json(&values_to_labels(m, &pos)),
                        "negative_part": values_json(&values_to_labels(m, &neg)),
                    })
                }
            };
            Ok(Payload::ok(value))
        }
        Carrier::Symbolic(SymbolicEmv::FinSubsets) if op == Op::Join => {
            let b = m2.ok_or_else(|| Failure::Usage("--m2 is required for join".into()))?;
            let join = strong_join_t(&symbolic_state(m1)?, &symbolic_state(b)?)?;
            Ok(Payload::ok(json!({
                "op": "join",
                "result": serde_json::to_value(&join).expect("measure serializes"),
            })))
        }
        Carrier::Symbolic(s) => Err(domain(
            "UnsupportedCarrier",
            format!("jordan {op:?} is not available on {}", s.name()),
        )),
    }
}

fn cmd_radical(carrier: &Carrier, bound: usize) -> Result<Payload, Failure> {
    Ok(Payload::ok(match carrier {
        Carrier::Finite(m) => {
            let (rad, inf) = radical_and_infinitesimals(m)?;
            json!({
                "radical": rad.labels(m),
                "infinitesimals": inf.labels(m),
                "equal": rad == inf,
            })
        }
        Carrier::Symbolic(s) => {
            let r = radical_and_infinitesimals_symbolic(s, bound)?;
            json!({
                "bound": bound,
                "sample_size": r.sample.len(),
                "radical": r.radical,
                "infinitesimals": r.infinitesimals,
                "equal": r.radical == r.infinitesimals,
            })
        }
    }))
}

fn cmd_classify(carrier: &Carrier, prestate: &Path, cli: &Cli) -> Result<Payload, Failure> {
    let rep = match carrier {
        Carrier::Finite(m) => {
            let f = values_from_labels(m, &finite_values(prestate)?)?;
            classify_prestate(m, &f)?
        }
        Carrier::Symbolic(s) => classify_symbolic(s, &symbolic_state(prestate)?, cli.budget, cli.seed)?,
    };
    Ok(Payload::ok(serde_json::to_value(&rep).expect("report serializes")))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Verify { .. } => "verify",
        Command::Morphisms { .. } => "morphisms",
        Command::States { .. } => "states",
        Command::Decompose { .. } => "decompose",
        Command::Extend { .. } => "extend",
        Command::Represent { .. } => "represent",
        Command::Jordan { .. } => "jordan",
        Command::Radical { .. } => "radical",
        Command::Classify { .. } => "classify",
    }
}

fn spec_path(c: &Command) -> &Path {
    match c {
        Command::Verify { spec }
        | Command::Morphisms { spec }
        | Command::States { spec, .. }
        | Command::Decompose { spec, .. }
        | Command::Extend { spec, .. }
        | Command::Represent { spec }
        | Command::Jordan { spec, .. }
        | Command::Radical { spec, .. }
        | Command::Classify { spec, .. } => spec,
    }
}

fn execute(cli: &Cli) -> Result<(Value, bool), Failure> {
    let carrier = load_carrier(spec_path(&cli.command))?;
    let payload = match &cli.command {
        Command::Verify { .. } => cmd_verify(&carrier, cli),
        Command::Morphisms { .. } => cmd_morphisms(&carrier, cli),
        Command::States { check, .. } => cmd_states(&carrier, check, cli),
        Command::Decompose { state, .. } => cmd_decompose(&carrier, state, cli),
        Command::Extend {
            sub,
            state,
            morphism,
            ..
        } => cmd_extend(&carrier, sub, state, *morphism),
        Command::Represent { .. } => cmd_represent(&carrier, cli),
        Command::Jordan { m1, m2, op, .. } => cmd_jordan(&carrier, m1, m2.as_deref(), *op),
        Command::Radical { bound, .. } => cmd_radical(&carrier, *bound),
        Command::Classify { prestate, .. } => cmd_classify(&carrier, prestate, cli),
    }?;
    let mut echo = json!({
        "name": command_name(&cli.command),
        "seed": cli.seed,
        "budget": cli.budget,
    });
    match &cli.command {
        Command::Jordan { op, .. } => echo["op"] = json!(format!("{op:?}").to_lowercase()),
        Command::Radical { bound, .. } => echo["bound"] = json!(bound),
        Command::Extend { morphism, .. } => echo["morphism"] = json!(morphism),
        _ => {}
    }
    let report = json!({
        "command": echo,
        "algebra": summary(&carrier)?,
        "payload": payload.value,
        "version": VERSION,
    });
    Ok((report, payload.violated))
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    match execute(&cli) {
        Ok((report, violated)) => Outcome {
            stdout: render(&report),
            stderr: String::new(),
            code: if violated { 2 } else { 0 },
        },
        Err(Failure::Usage(message)) => Outcome {
            stdout: render(&json!({ "error": { "code": "Usage", "message": message, "witness": [] } })),
            stderr: String::new(),
            code: 1,
        },
        Err(Failure::Domain {
            code,
            message,
            witness,
        }) => Outcome {
            stdout: render(&json!({ "error": { "code": code, "message": message, "witness": witness } })),
            stderr: String::new(),
            code: 2,
        },
    }
}
