use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use lofs_core::adjunction::{find_lari, find_rali, is_adjunction};
use lofs_core::awfs::{coalgebra_structure, factorise, fibrant_replacement, algebra_structure, Strictness};
use lofs_core::downset_monad::check_lax_idempotent;
use lofs_core::io::{self, IoError, Object};
use lofs_core::kan::{classify_injectives, embedding_family, kan_injectivity_failure};
use lofs_core::lifting::{kz_orthogonal, lifting_structure, GeneratorFamily};
use lofs_core::order::{all_upsets, enumerate_posets, enumerate_preorders};
use lofs_core::topology::{filter_space, is_continuous_lattice, is_subspace_embedding, is_top_coalgebra, FiniteSpace};
use lofs_core::{suite, FinPreorder, Limits, MonotoneMap, OrderError};

mod witness;

/// Finite preorders, the down-set factorisation, KZ lifting and finite topology.
#[derive(Parser)]
#[command(name = "lofs", version)]
struct Cli {
    /// On a false predicate, print a smallest counterexample.
    #[arg(long, global = true)]
    witness: bool,

    /// Largest object size for enumeration and classification.
    #[arg(long, global = true, value_name = "N")]
    max_size: Option<usize>,

    /// Largest carrier any constructed preorder may have.
    #[arg(long, global = true, value_name = "N", default_value_t = 4096)]
    max_carrier: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an object and report what it is.
    Validate { file: PathBuf },
    /// Factorise a map as f = rho . lambda through Kf.
    Factor { map: PathBuf },
    /// The fibrant replacement K(A -> 1) and whether A is fibrant.
    Fibrant { preorder: PathBuf },
    /// Evaluate a predicate; `adjunction` takes the left and then the right map.
    Check {
        predicate: Predicate,
        #[arg(required = true, num_args = 1..=2)]
        files: Vec<PathBuf>,
    },
    /// A lifting structure of a family against g.
    Lift { family: PathBuf, g: PathBuf },
    /// A KZ lifting operation from j to g.
    Kz { j: PathBuf, g: PathBuf },
    /// Kan injectivity against a family, by default all embeddings up to --max-size.
    KanInjective {
        object: PathBuf,
        #[arg(long)]
        family: Option<PathBuf>,
    },
    /// Kan injectivity next to completeness for every object up to --max-size.
    Classify {
        /// Size bound for the embedding family; defaults to min(--max-size, 4).
        #[arg(long, value_name = "N")]
        family_size: Option<usize>,
    },
    /// The space of filters of opens.
    FilterSpace { space: PathBuf },
    /// Preorders on n points, one per isomorphism class unless --labelled.
    Enumerate {
        n: usize,
        #[arg(long)]
        posets: bool,
        #[arg(long)]
        labelled: bool,
    },
    /// Hasse diagram of a preorder or space.
    Dot { file: PathBuf },
    /// Run the acceptance battery, stopping at the first failure.
    Suite {
        #[arg(long, value_name = "K")]
        criterion: Option<usize>,
        #[arg(long)]
        keep_going: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Predicate {
    Poset,
    T0,
    CompleteLattice,
    ContinuousLattice,
    LaxIdempotent,
    Full,
    Injective,
    Surjective,
    OrderEmbedding,
    Adjunction,
    Rali,
    Lari,
    Coalgebra,
    Algebra,
    TopCoalgebra,
    SubspaceEmbedding,
}

enum Failure {
    Usage(String),
    Io(IoError),
    Order(OrderError),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Io(e) if !e.is_invalid_object() => 2,
            Failure::Io(_) => 3,
            Failure::Order(OrderError::SizeLimitExceeded { .. }) => 2,
            Failure::Order(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Io(e) => e.to_string(),
            Failure::Order(e) => e.to_string(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Io(e)
    }
}

impl From<OrderError> for Failure {
    fn from(e: OrderError) -> Self {
        Failure::Order(e)
    }
}

type Outcome = Result<bool, Failure>;

struct Ctx {
    witness: bool,
    format: Format,
    limits: Limits,
}

/// Writes to standard output; a closed pipe ends the process quietly.
fn out(text: &str) {
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("lofs: cannot write output: {e}");
        std::process::exit(2);
    }
}

impl Ctx {
    fn emit(&self, value: Value) {
        out(&format!("{}\n", serde_json::to_string_pretty(&value).expect("JSON values serialise")));
    }

    fn json_only(&self, verb: &str) -> Result<(), Failure> {
        match self.format {
            Format::Json => Ok(()),
            Format::Dot => Err(Failure::Usage(format!("{verb} has no DOT output"))),
        }
    }

    /// A preorder as JSON, or as DOT when asked.
    fn emit_preorder(&self, x: &FinPreorder, name: &str, json: Value) {
        match self.format {
            Format::Json => self.emit(json),
            Format::Dot => out(&io::to_dot(x, name)),
        }
    }
}

fn load(path: &Path) -> Result<Object, Failure> {
    Ok(io::read_object(path)?)
}

fn kind_error(path: &Path, want: &str, got: &Object) -> Failure {
    Failure::Io(IoError::Schema(format!("{}: expected a {want}, got a {}", path.display(), got.kind())))
}

fn load_preorder(path: &Path) -> Result<FinPreorder, Failure> {
    match load(path)? {
        Object::Preorder(x) => Ok(x),
        Object::Space(s) => Ok(s.points().clone()),
        other => Err(kind_error(path, "preorder", &other)),
    }
}

fn load_map(path: &Path) -> Result<MonotoneMap, Failure> {
    match load(path)? {
        Object::Map(f) => Ok(f),
        other => Err(kind_error(path, "map", &other)),
    }
}

fn load_family(path: &Path) -> Result<GeneratorFamily, Failure> {
    match load(path)? {
        Object::Family(fam) => Ok(fam),
        Object::Map(f) => Ok(GeneratorFamily::from_members(vec![f])),
        other => Err(kind_error(path, "family", &other)),
    }
}

/// `{"a": "x", ..}` for a map, by labels.
fn assign_json(f: &MonotoneMap) -> Value {
    let mut m = Map::new();
    for i in 0..f.src().len() {
        m.insert(f.src().label(i).into_owned(), Value::String(f.tgt().label(f.apply(i)).into_owned()));
    }
    Value::Object(m)
}

fn validate(ctx: &Ctx, file: &Path) -> Outcome {
    ctx.json_only("validate")?;
    let obj = load(file)?;
    let detail = match &obj {
        Object::Preorder(x) => json!({"elements": x.len(), "poset": x.is_poset()}),
        Object::Space(s) => json!({"points": s.points().len(), "t0": s.is_t0()}),
        Object::Map(f) => json!({"source": f.src().len(), "target": f.tgt().len(), "full": f.is_full()}),
        Object::Family(fam) => json!({"members": fam.len(), "links": fam.links().len()}),
    };
    ctx.emit(json!({"type": obj.kind(), "valid": true, "detail": detail}));
    Ok(true)
}

fn factor(ctx: &Ctx, path: &Path) -> Outcome {
    let f = load_map(path)?;
    let ff = factorise(&f, &ctx.limits)?;
    ctx.emit_preorder(ff.k(), "K", io::factorisation_to_json(&ff));
    Ok(true)
}

fn fibrant(ctx: &Ctx, path: &Path) -> Outcome {
    let a = load_preorder(path)?;
    let fr = fibrant_replacement(&a, &ctx.limits)?;
    let ff = &fr.factorisation;
    let algebra = algebra_structure(ff, Strictness::UpToEquivalence, &ctx.limits)?;
    let fibrant = algebra.is_some();
    let mut out = json!({
        "fibrant": fibrant,
        "complete_lattice": a.is_complete_lattice(),
        "K": io::preorder_to_json(ff.k()),
        "lambda": io::map_to_json(ff.lambda()),
        "algebra": algebra.as_ref().map(|p| assign_json(p.p())),
    });
    if ctx.witness && !fibrant {
        out["witness"] = witness::subset_without_lub(&a).unwrap_or(Value::Null);
    }
    ctx.emit_preorder(ff.k(), "K", out);
    Ok(fibrant)
}

fn check(ctx: &Ctx, pred: Predicate, files: &[PathBuf]) -> Outcome {
    ctx.json_only("check")?;
    let arity = if pred == Predicate::Adjunction { 2 } else { 1 };
    if files.len() != arity {
        return Err(Failure::Usage(format!("this predicate takes {arity} file(s), got {}", files.len())));
    }
    let limits = &ctx.limits;
    let (holds, witness) = match pred {
        Predicate::Poset | Predicate::T0 => {
            let x = load_preorder(&files[0])?;
            (x.is_poset(), witness::equivalent_pair(&x))
        }
        Predicate::CompleteLattice => {
            let x = load_preorder(&files[0])?;
            (x.is_complete_lattice(), witness::subset_without_lub(&x))
        }
        Predicate::ContinuousLattice => {
            let x = load_preorder(&files[0])?;
            let w = witness::equivalent_pair(&x).or_else(|| witness::subset_without_lub(&x));
            (is_continuous_lattice(&x, limits), w)
        }
        Predicate::LaxIdempotent => (check_lax_idempotent(&load_preorder(&files[0])?, limits)?, None),
        Predicate::Full | Predicate::Coalgebra => {
            let f = load_map(&files[0])?;
            let holds = match pred {
                Predicate::Full => f.is_full(),
                _ => coalgebra_structure(&factorise(&f, limits)?).is_some(),
            };
            (holds, witness::not_full(&f))
        }
        Predicate::Injective => {
            let f = load_map(&files[0])?;
            (f.is_injective(), witness::collision(&f))
        }
        Predicate::Surjective => {
            let f = load_map(&files[0])?;
            (f.is_surjective(), witness::missed(&f))
        }
        Predicate::OrderEmbedding => {
            let f = load_map(&files[0])?;
            (f.is_order_embedding(), witness::not_full(&f).or_else(|| witness::collision(&f)))
        }
        Predicate::Adjunction => {
            let (l, r) = (load_map(&files[0])?, load_map(&files[1])?);
            if l.src() != r.tgt() || l.tgt() != r.src() {
                return Err(Failure::Order(OrderError::ShapeMismatch("the maps must run in opposite directions".into())));
            }
            (is_adjunction(&l, &r), witness::adjunction_violation(&l, &r))
        }
        Predicate::Rali => (find_rali(&load_map(&files[0])?).is_some(), None),
        Predicate::Lari => (find_lari(&load_map(&files[0])?).is_some(), None),
        Predicate::Algebra => {
            let g = load_map(&files[0])?;
            let ff = factorise(&g, limits)?;
            let w = (g.tgt().len() == 1).then(|| witness::subset_without_lub(g.src())).flatten();
            (algebra_structure(&ff, Strictness::UpToEquivalence, limits)?.is_some(), w)
        }
        Predicate::TopCoalgebra | Predicate::SubspaceEmbedding => {
            let f = load_map(&files[0])?;
            let holds = match pred {
                Predicate::TopCoalgebra => is_top_coalgebra(&f, limits)?,
                _ => is_subspace_embedding(&f, limits)?,
            };
            let opens = witness::open_not_preimage(&f, &all_upsets(f.src(), limits)?, &all_upsets(f.tgt(), limits)?);
            let w = match pred {
                Predicate::SubspaceEmbedding => witness::collision(&f).or(opens),
                _ => opens,
            };
            (holds, w)
        }
    };
    let name = pred.to_possible_value().expect("no skipped variants").get_name().to_string();
    let mut out = json!({"predicate": name, "holds": holds});
    if ctx.witness && !holds {
        out["witness"] = witness.unwrap_or(Value::Null);
    }
    ctx.emit(out);
    Ok(holds)
}

fn lift(ctx: &Ctx, family: &Path, g: &Path) -> Outcome {
    ctx.json_only("lift")?;
    let (fam, g) = (load_family(family)?, load_map(g)?);
    let Some(s) = lifting_structure(&fam, &g, &ctx.limits)? else {
        ctx.emit(json!({"exists": false}));
        return Ok(false);
    };
    let members: Vec<Value> = (0..fam.len())
        .map(|m| {
            let squares: Vec<Value> = s
                .squares(m)
                .squares()
                .iter()
                .enumerate()
                .map(|(i, sq)| json!({"h": assign_json(sq.h()), "k": assign_json(sq.k()), "filler": assign_json(s.filler(m, i))}))
                .collect();
            json!({"member": m, "squares": squares})
        })
        .collect();
    ctx.emit(json!({"exists": true, "non_canonical": s.non_canonical(), "members": members}));
    Ok(true)
}

fn kz(ctx: &Ctx, j: &Path, g: &Path) -> Outcome {
    ctx.json_only("kz")?;
    let (j, g) = (load_map(j)?, load_map(g)?);
    let Some(kz) = kz_orthogonal(&j, &g, &ctx.limits)? else {
        ctx.emit(json!({"exists": false}));
        return Ok(false);
    };
    let squares: Vec<Value> = kz
        .canonical
        .squares
        .squares()
        .iter()
        .enumerate()
        .map(|(i, sq)| json!({"h": assign_json(sq.h()), "k": assign_json(sq.k()), "filler": assign_json(kz.filler(i))}))
        .collect();
    ctx.emit(json!({"exists": true, "squares": squares}));
    Ok(true)
}

fn max_size(ctx: &Ctx) -> usize {
    ctx.limits.max_size
}

fn kan_injective(ctx: &Ctx, object: &Path, family: Option<&Path>) -> Outcome {
    ctx.json_only("kan-injective")?;
    let a = load_preorder(object)?;
    let fam = match family {
        Some(p) => load_family(p)?,
        None => embedding_family(max_size(ctx).min(4), false, &ctx.limits)?,
    };
    let failure = kan_injectivity_failure(&a, &fam, &ctx.limits)?;
    let holds = failure.is_none();
    let mut out = json!({"kan_injective": holds, "family_size": fam.len()});
    if ctx.witness {
        if let Some(fail) = failure {
            out["witness"] = json!({
                "generator": io::map_to_json(&fam.members()[fail.member]),
                "f": io::map_to_json(&fail.f),
            });
        }
    }
    ctx.emit(out);
    Ok(holds)
}

fn classify(ctx: &Ctx, family_size: Option<usize>) -> Outcome {
    ctx.json_only("classify")?;
    let n = max_size(ctx);
    let fam = embedding_family(family_size.unwrap_or(n.min(4)), false, &ctx.limits)?;
    let rows = classify_injectives(n, &fam, &ctx.limits)?;
    let agree = rows.iter().all(|r| r.agrees());
    let out: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "object": io::preorder_to_json(&r.object),
                "kan_injective": r.kan_injective,
                "complete_lattice": r.complete_lattice,
            })
        })
        .collect();
    ctx.emit(Value::Array(out));
    Ok(agree)
}

fn filter_space_verb(ctx: &Ctx, path: &Path) -> Outcome {
    let x = load_preorder(path)?;
    let fx = filter_space(&FiniteSpace::new(x), &ctx.limits)?;
    let space = fx.as_space();
    ctx.emit_preorder(space.points(), "F", io::space_to_json(&space));
    Ok(true)
}

fn enumerate(ctx: &Ctx, n: usize, posets: bool, labelled: bool) -> Outcome {
    if n > max_size(ctx) {
        return Err(Failure::Usage(format!("n = {n} is above --max-size {}", max_size(ctx))));
    }
    let all = if posets && !labelled {
        enumerate_posets(n, &ctx.limits)?
    } else {
        let mut xs = enumerate_preorders(n, !labelled, &ctx.limits)?;
        xs.retain(|x| !posets || x.is_poset());
        xs
    };
    match ctx.format {
        Format::Json => ctx.emit(Value::Array(all.iter().map(io::preorder_to_json).collect())),
        Format::Dot => {
            for (i, x) in all.iter().enumerate() {
                out(&io::to_dot(x, &format!("P{i}")));
            }
        }
    }
    Ok(true)
}

fn dot(path: &Path) -> Outcome {
    let x = load_preorder(path)?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out(&io::to_dot(&x, &name));
    Ok(true)
}

/// Prints one line per criterion as it finishes.
fn run_suite(ctx: &Ctx, criterion: Option<usize>, keep_going: bool) -> Outcome {
    if ctx.format == Format::Dot {
        return Err(Failure::Usage("suite has no DOT output".into()));
    }
    let limits = Limits::default().with_max_carrier(ctx.limits.max_carrier);
    let reports = match criterion {
        Some(k) if suite::title(k).is_none() => {
            return Err(Failure::Usage(format!("criteria are numbered 1 to {}", suite::CRITERIA)));
        }
        Some(k) => {
            let r = suite::run(k, &limits)?;
            out(&format!("{r}\n"));
            vec![r]
        }
        None => suite::run_all(&limits, !keep_going, |r| out(&format!("{r}\n")))?,
    };
    Ok(reports.iter().all(|r| r.passed))
}

fn run(cli: Cli) -> Outcome {
    let mut limits = Limits::default().with_max_carrier(cli.max_carrier);
    if let Some(n) = cli.max_size {
        limits = limits.with_max_size(n);
    }
    let ctx = Ctx {
        witness: cli.witness,
        format: cli.format,
        limits,
    };
    match &cli.command {
        Command::Validate { file } => validate(&ctx, file),
        Command::Factor { map } => factor(&ctx, map),
        Command::Fibrant { preorder } => fibrant(&ctx, preorder),
        Command::Check { predicate, files } => check(&ctx, *predicate, files),
        Command::Lift { family, g } => lift(&ctx, family, g),
        Command::Kz { j, g } => kz(&ctx, j, g),
        Command::KanInjective { object, family } => kan_injective(&ctx, object, family.as_deref()),
        Command::Classify { family_size } => classify(&ctx, *family_size),
        Command::FilterSpace { space } => filter_space_verb(&ctx, space),
        Command::Enumerate { n, posets, labelled } => enumerate(&ctx, *n, *posets, *labelled),
        Command::Dot { file } => dot(file),
        Command::Suite { criterion, keep_going } => run_suite(&ctx, *criterion, *keep_going),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("lofs: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
