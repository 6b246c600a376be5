use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use omegabase::expr::parse_rational;
use omegabase::group_topology::{i_of_entourage, i_of_entourage_abelian, sym_member, v_phi};
use omegabase::matrix::{ball_member, shrink_radius};
use omegabase::order_lab::{
    ad_compare, ad_join, box_member, box_unbounded_cert, check_cofinal, check_monotone, diagonal_witness,
    disambiguation_bound, BoxFamily, PosetJson,
};
use omegabase::reduced_power::{baire_witness, compare_ev, interleave, star_metric, Ball};
use omegabase::suites::{markdown_table, reports_json, run_suites, SUITES};
use omegabase::uniformity::{
    countable_base, cofinal_search, u_alpha_member, CountableSpace, PairProfiles, RadiusNeighbourhood, SpaceSpec,
};
use omegabase::{
    ArithOp, Branch, Entourage, EventualSeq, FieldElement, FinitePoset, FnSeq, Matrix, PhiMap, ReducedWord,
    SubsetSpec, SuiteConfig, SuiteReport, TowerLimits,
};

#[derive(Parser)]
#[command(name = "omegabase", version, about = "Exact experiments with ω^ω-bases")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for every randomized suite.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Multiplier on the number of random cases per suite.
    #[arg(long, global = true, default_value_t = 1.0)]
    scale: f64,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the JSON result (or reports) to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record wall time in suite reports (makes them nondeterministic).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Arithmetic in the infinitesimal tower. Operands come from the command
    /// line or, if absent, one per line from stdin.
    Field {
        #[arg(value_enum)]
        op: FieldOp,
        operands: Vec<String>,
        /// Largest exponent accepted in any variable.
        #[arg(long, default_value_t = TowerLimits::default().max_degree)]
        max_degree: u32,
    },
    /// Matrices as JSON arrays of rows of field expressions.
    Matrix {
        #[command(subcommand)]
        op: MatrixOp,
    },
    /// Reduced-power sequences as `{"prefix": [...], "tail": "..."}`.
    Rp {
        #[command(subcommand)]
        op: RpOp,
    },
    /// Free-group neighbourhoods.
    Group {
        #[command(subcommand)]
        op: GroupOp,
    },
    /// Posets, almost disjoint families, diagonals and boxes.
    Order {
        #[command(subcommand)]
        op: OrderOp,
    },
    /// Diagonal neighbourhoods of metric spaces.
    Uniformity {
        #[command(subcommand)]
        op: UniformityOp,
    },
    /// Run property suites and print a summary table.
    Suite {
        /// Suite names; all suites when empty.
        names: Vec<String>,
    },
    /// Merge report files written by `suite --out` and print the table.
    Report {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Compare,
    Invert,
    LeadingTerm,
    Normalize,
}

#[derive(Subcommand)]
enum MatrixOp {
    /// Product of two matrices.
    Mul { a: PathBuf, b: PathBuf },
    /// Inverse and determinant.
    Inv { a: PathBuf },
    /// Whether every entry of `A - I` is below `eps` in absolute value.
    Ball { a: PathBuf, eps: String },
    /// Radius whose ball squares into the ball of radius `eps`.
    Shrink { eps: String, n: usize },
}

#[derive(Subcommand)]
enum RpOp {
    /// Order of two sequences given in one file as `[x, y]`.
    Compare { input: Option<PathBuf> },
    /// Distance of two sequences given in one file as `[x, y]`.
    Metric { input: Option<PathBuf> },
    /// `{"instances": [{"center", "radius"}...], "cuts": [...]}`.
    Interleave { input: Option<PathBuf> },
    /// `{"open": ball, "forbidden": [balls]}`.
    Baire { input: Option<PathBuf> },
}

#[derive(Subcommand)]
enum GroupOp {
    /// `{"word", "sets": [[words]...], "horizon"}`.
    SymMember { input: Option<PathBuf> },
    /// `{"phi": {"default", "exceptions"}, "support": [words]}`.
    Vphi { input: Option<PathBuf> },
    /// `{"pairs": [[x, y]...], "abelian": bool}` with points as generators.
    Iofv { input: Option<PathBuf> },
    /// Run the lemma suite on the free group of rank 2.
    LemmaSuite,
}

#[derive(Subcommand)]
enum OrderOp {
    /// `{"domain", "codomain", "map": {x: y}}`; reports monotone and cofinal.
    CheckMap { input: Option<PathBuf> },
    /// `{"branches": [...], "s": [i...], "t": [i...], "depth"?}`.
    AdEmbed { input: Option<PathBuf> },
    /// `{"family": [FnSeq...]}`.
    Diagonal { input: Option<PathBuf> },
    /// `{"f", "point": {coord: rational}}` or `{"family", "bound"}`.
    Box { input: Option<PathBuf> },
}

#[derive(Subcommand)]
enum UniformityOp {
    /// `{"space", "alpha", "pair"?: [x, y]}`; without a pair lists `U_α ∪ Δ`.
    UAlpha { input: Option<PathBuf> },
    /// `{"space", "neighbourhood": {"radii"}, "resolution"?}`.
    CofinalSearch { input: Option<PathBuf> },
    /// `{"space": {"points", "bases"}, "f": [FnSeq...]}`.
    CountableBase { input: Option<PathBuf> },
}

/// Exit status for a run that found failures.
const FAILED: u8 = 1;
const USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}

fn read_source(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) if p != Path::new("-") => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading stdin")?;
            Ok(s)
        }
    }
}

fn read_json<T: DeserializeOwned>(path: Option<&Path>) -> Result<T> {
    let src = read_source(path)?;
    serde_json::from_str(&src).with_context(|| format!("parsing {}", path.map_or("stdin".into(), |p| p.display().to_string())))
}

/// Prints `text` (or `value` under `--json`) and writes `value` to `--out`.
fn emit(g: &Global, value: Value, text: String) -> Result<()> {
    if let Some(out) = &g.out {
        let body = serde_json::to_string_pretty(&value)? + "\n";
        fs::write(out, body).with_context(|| format!("writing {}", out.display()))?;
    }
    if g.json {
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else {
        println!("{text}");
    }
    Ok(())
}

fn ordering_name(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "LT",
        Ordering::Equal => "EQ",
        Ordering::Greater => "GT",
    }
}

fn run(cli: Cli) -> Result<bool> {
    let g = &cli.global;
    match cli.command {
        Command::Field { op, operands, max_degree } => field(g, op, operands, max_degree).map(|_| true),
        Command::Matrix { op } => matrix(g, op).map(|_| true),
        Command::Rp { op } => rp(g, op).map(|_| true),
        Command::Group { op } => group(g, op),
        Command::Order { op } => order(g, op).map(|_| true),
        Command::Uniformity { op } => uniformity(g, op).map(|_| true),
        Command::Suite { names } => {
            let names: Vec<&str> = if names.is_empty() { SUITES.to_vec() } else { names.iter().map(String::as_str).collect() };
            suites(g, &names)
        }
        Command::Report { files } => {
            let mut reports: Vec<SuiteReport> = Vec::new();
            for f in &files {
                let v: Value = read_json(Some(f))?;
                match v {
                    Value::Array(_) => reports.extend(serde_json::from_value::<Vec<SuiteReport>>(v)?),
                    _ => reports.push(serde_json::from_value(v)?),
                }
            }
            reports.sort_by(|a, b| a.suite.cmp(&b.suite));
            emit_reports(g, &reports)
        }
    }
}

fn suites(g: &Global, names: &[&str]) -> Result<bool> {
    let cfg = SuiteConfig::new(g.seed, g.scale)?;
    let reports = run_suites(names, cfg, g.timings)?;
    emit_reports(g, &reports)
}

fn emit_reports(g: &Global, reports: &[SuiteReport]) -> Result<bool> {
    if reports.is_empty() {
        bail!("no reports");
    }
    let body = reports_json(reports);
    if let Some(out) = &g.out {
        fs::write(out, &body).with_context(|| format!("writing {}", out.display()))?;
    }
    if g.json {
        print!("{body}");
    } else {
        print!("{}", markdown_table(reports));
    }
    Ok(reports.iter().all(SuiteReport::passed))
}

fn field(g: &Global, op: FieldOp, mut operands: Vec<String>, max_degree: u32) -> Result<()> {
    if operands.is_empty() {
        operands = read_source(None)?.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect();
    }
    let want = match op {
        FieldOp::Invert | FieldOp::LeadingTerm | FieldOp::Normalize => 1,
        _ => 2,
    };
    if operands.len() != want {
        bail!("expected {want} operand(s), got {}", operands.len());
    }
    let limits = TowerLimits { max_degree, ..TowerLimits::default() };
    let xs = operands
        .iter()
        .map(|s| FieldElement::parse_with(s, &limits).with_context(|| format!("parsing {s:?}")))
        .collect::<Result<Vec<_>>>()?;
    let arith = |op| FieldElement::arithmetic(op, &xs[0], &xs[1], &limits);
    let result = match op {
        FieldOp::Add => arith(ArithOp::Add)?,
        FieldOp::Sub => arith(ArithOp::Sub)?,
        FieldOp::Mul => arith(ArithOp::Mul)?,
        FieldOp::Div => arith(ArithOp::Div)?,
        FieldOp::Invert => xs[0].invert()?,
        FieldOp::Normalize => xs[0].clone(),
        FieldOp::Compare => {
            let o = ordering_name(xs[0].compare(&xs[1]));
            return emit(g, json!({ "result": o }), o.to_string());
        }
        FieldOp::LeadingTerm => {
            let lt = xs[0].leading_term()?;
            let coeff = lt.coefficient.to_string();
            let text = format!("exponents {:?} coefficient {coeff}", lt.exponents);
            let value = json!({
                "exponents": lt.exponents,
                "coefficient": coeff,
                "infinitesimal": lt.is_infinitesimal(),
            });
            return emit(g, value, text);
        }
    };
    emit(g, json!({ "result": result }), result.to_string())
}

fn show_matrix(m: &Matrix) -> String {
    m.rows()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join("  "))
        .collect::<Vec<_>>()
        .join("\n")
}

fn matrix(g: &Global, op: MatrixOp) -> Result<()> {
    match op {
        MatrixOp::Mul { a, b } => {
            let (a, b): (Matrix, Matrix) = (read_json(Some(&a))?, read_json(Some(&b))?);
            let p = a.mul(&b)?;
            emit(g, json!({ "result": p }), show_matrix(&p))
        }
        MatrixOp::Inv { a } => {
            let a: Matrix = read_json(Some(&a))?;
            let (inv, det) = a.inverse_with_det()?;
            let text = format!("{}\ndet = {det}", show_matrix(&inv));
            emit(g, json!({ "result": inv, "determinant": det }), text)
        }
        MatrixOp::Ball { a, eps } => {
            let a: Matrix = read_json(Some(&a))?;
            let eps: FieldElement = eps.parse()?;
            let inside = ball_member(&a, &eps)?;
            emit(g, json!({ "member": inside }), inside.to_string())
        }
        MatrixOp::Shrink { eps, n } => {
            let eps: FieldElement = eps.parse()?;
            let delta = shrink_radius(&eps, n)?;
            emit(g, json!({ "result": delta }), delta.to_string())
        }
    }
}

#[derive(Deserialize)]
struct InterleaveInput {
    instances: Vec<Ball>,
    cuts: Vec<usize>,
}

#[derive(Deserialize)]
struct BaireInput {
    open: Ball,
    #[serde(default)]
    forbidden: Vec<Ball>,
}

fn rp(g: &Global, op: RpOp) -> Result<()> {
    match op {
        RpOp::Compare { input } => {
            let [x, y]: [EventualSeq; 2] = read_json(input.as_deref())?;
            let o = ordering_name(compare_ev(&x, &y));
            emit(g, json!({ "result": o }), o.to_string())
        }
        RpOp::Metric { input } => {
            let [x, y]: [EventualSeq; 2] = read_json(input.as_deref())?;
            let d = star_metric(&x, &y)?;
            emit(g, json!({ "result": d }), d.to_string())
        }
        RpOp::Interleave { input } => {
            let inp: InterleaveInput = read_json(input.as_deref())?;
            let pairs: Vec<_> = inp.instances.into_iter().map(|b| (b.center, b.radius)).collect();
            let out = interleave(&pairs, &inp.cuts)?;
            emit(g, serde_json::to_value(&out)?, out.h.to_string())
        }
        RpOp::Baire { input } => {
            let inp: BaireInput = read_json(input.as_deref())?;
            let w = baire_witness(&inp.open, &inp.forbidden)?;
            emit(g, serde_json::to_value(&w)?, w.h.to_string())
        }
    }
}

#[derive(Deserialize)]
struct SymInput {
    word: ReducedWord,
    sets: Vec<SubsetSpec>,
    horizon: usize,
}

#[derive(Deserialize)]
struct VphiInput {
    phi: PhiMap,
    support: SubsetSpec,
}

#[derive(Deserialize)]
struct IofvInput {
    pairs: Vec<(usize, usize)>,
    #[serde(default)]
    abelian: bool,
}

fn show_words<'a>(ws: impl IntoIterator<Item = &'a ReducedWord>) -> String {
    ws.into_iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn group(g: &Global, op: GroupOp) -> Result<bool> {
    match op {
        GroupOp::SymMember { input } => {
            let inp: SymInput = read_json(input.as_deref())?;
            let ans = sym_member(&inp.word, &inp.sets, inp.horizon)?;
            let text = match &ans {
                omegabase::group_topology::SymAnswer::Yes { n, permutation, factors } => {
                    format!("yes: n = {n}, order {permutation:?}, factors [{}]", show_words(factors))
                }
                omegabase::group_topology::SymAnswer::NoUpTo { horizon } => format!("no factorization with at most {horizon} factors"),
            };
            emit(g, serde_json::to_value(&ans)?, text)?;
        }
        GroupOp::Vphi { input } => {
            let inp: VphiInput = read_json(input.as_deref())?;
            let set = v_phi(&inp.phi, &inp.support);
            emit(g, serde_json::to_value(&set)?, format!("{{{}}}", show_words(&set)))?;
        }
        GroupOp::Iofv { input } => {
            let inp: IofvInput = read_json(input.as_deref())?;
            if inp.abelian {
                let set = i_of_entourage_abelian(inp.pairs);
                let text = set.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
                emit(g, serde_json::to_value(&set)?, format!("{{{text}}}"))?;
            } else {
                let set = i_of_entourage(inp.pairs);
                emit(g, serde_json::to_value(&set)?, format!("{{{}}}", show_words(&set)))?;
            }
        }
        GroupOp::LemmaSuite => return suites(g, &["rd-lemmas"]),
    }
    Ok(true)
}

#[derive(Deserialize)]
struct CheckMapInput {
    domain: PosetJson,
    codomain: PosetJson,
    map: BTreeMap<String, String>,
}

#[derive(Deserialize)]
struct AdInput {
    branches: Vec<Branch>,
    s: Vec<usize>,
    t: Vec<usize>,
    depth: Option<usize>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BoxInput {
    Point { f: FnSeq, point: BTreeMap<usize, String> },
    Family { family: BoxFamily, bound: u64 },
}

fn order(g: &Global, op: OrderOp) -> Result<()> {
    match op {
        OrderOp::CheckMap { input } => {
            let inp: CheckMapInput = read_json(input.as_deref())?;
            let d = FinitePoset::try_from(inp.domain)?;
            let e = FinitePoset::try_from(inp.codomain)?;
            for k in inp.map.keys() {
                d.index_of(k).ok_or_else(|| anyhow!("map key {k:?} is not in the domain"))?;
            }
            let f = (0..d.len())
                .map(|i| inp.map.get(d.label(i)).map(|y| e.index_of(y).ok_or_else(|| anyhow!("unknown element {y:?}"))).transpose())
                .collect::<Result<Vec<_>>>()?;
            let monotone = check_monotone(&f, &d, &e)?;
            let cofinal = check_cofinal(&f, &d, &e)?;
            emit(g, json!({ "monotone": monotone, "cofinal": cofinal }), format!("monotone: {monotone}\ncofinal: {cofinal}"))
        }
        OrderOp::AdEmbed { input } => {
            let inp: AdInput = read_json(input.as_deref())?;
            let pick = |idx: &[usize]| {
                idx.iter()
                    .map(|&i| inp.branches.get(i).cloned().ok_or_else(|| anyhow!("branch index {i} out of range")))
                    .collect::<Result<Vec<_>>>()
            };
            let (s, t) = (pick(&inp.s)?, pick(&inp.t)?);
            let depth = inp.depth.unwrap_or_else(|| disambiguation_bound(&inp.branches));
            let js = ad_join(&s, depth)?;
            let jt = ad_join(&t, depth)?;
            let below = ad_compare(&s, &t, depth)?;
            let subset = inp.s.iter().collect::<BTreeSet<_>>().is_subset(&inp.t.iter().collect());
            let value = json!({
                "depth": depth,
                "join_s": js,
                "join_t": jt,
                "join_below": below,
                "subset": subset,
            });
            let text = format!("depth {depth}\njoin(S) ≤ join(T): {below}\nS ⊆ T: {subset}");
            emit(g, value, text)
        }
        OrderOp::Diagonal { input } => {
            #[derive(Deserialize)]
            struct D {
                family: Vec<FnSeq>,
            }
            let inp: D = read_json(input.as_deref())?;
            let w = diagonal_witness(&inp.family)?;
            emit(g, serde_json::to_value(&w)?, format!("z = {:?}", w.z.values))
        }
        OrderOp::Box { input } => match read_json::<BoxInput>(input.as_deref())? {
            BoxInput::Point { f, point } => {
                let x = point
                    .into_iter()
                    .map(|(k, v)| Ok((k, parse_rational(&v).with_context(|| format!("coordinate {k}"))?)))
                    .collect::<Result<BTreeMap<_, _>>>()?;
                let inside = box_member(&f, &x)?;
                emit(g, json!({ "member": inside }), inside.to_string())
            }
            BoxInput::Family { family, bound } => {
                let c = box_unbounded_cert(&family, bound)?;
                let text = format!("f_{}({}) = {}: |x_{}| < {}", c.k, c.beta, c.index_at_beta, c.beta, c.radius);
                emit(g, serde_json::to_value(&c)?, text)
            }
        },
    }
}

#[derive(Deserialize)]
struct UAlphaInput {
    space: SpaceSpec,
    alpha: FnSeq,
    pair: Option<(String, String)>,
}

#[derive(Deserialize)]
struct CofinalInput {
    space: SpaceSpec,
    neighbourhood: RadiusNeighbourhood,
    #[serde(default = "default_resolution")]
    resolution: u64,
}

fn default_resolution() -> u64 {
    64
}

#[derive(Deserialize)]
struct CountableInput {
    space: CountableSpace,
    f: Vec<FnSeq>,
}

fn pair_list(e: &Entourage, name: impl Fn(usize) -> String) -> Vec<(String, String)> {
    e.pairs().map(|(x, y)| (name(x), name(y))).collect()
}

fn uniformity(g: &Global, op: UniformityOp) -> Result<()> {
    match op {
        UniformityOp::UAlpha { input } => {
            let inp: UAlphaInput = read_json(input.as_deref())?;
            let space = inp.space.build()?;
            let idx = |s: &str| space.index_of(s).ok_or_else(|| anyhow!("unknown point {s:?}"));
            match inp.pair {
                Some((x, y)) => {
                    let inside = u_alpha_member(&space, &inp.alpha, idx(&x)?, idx(&y)?)?;
                    emit(g, json!({ "member": inside }), inside.to_string())
                }
                None => {
                    let mut e = PairProfiles::new(&space).entourage(&inp.alpha)?;
                    e.union_with(&Entourage::diagonal(space.len()));
                    let pairs = pair_list(&e, |i| space.name(i).to_string());
                    let text = format!("{} pairs", pairs.len());
                    emit(g, json!({ "pairs": pairs }), text)
                }
            }
        }
        UniformityOp::CofinalSearch { input } => {
            let inp: CofinalInput = read_json(input.as_deref())?;
            let space = inp.space.build()?;
            let res = cofinal_search(&space, &PairProfiles::new(&space), &inp.neighbourhood, inp.resolution)?;
            let text = match &res {
                omegabase::uniformity::CofinalSearch::Found { alpha, pairs_audited } => {
                    format!("alpha = {:?} ({pairs_audited} pairs audited)", alpha.values)
                }
                omegabase::uniformity::CofinalSearch::FailureUpTo { resolution } => {
                    format!("no alpha up to resolution {resolution}")
                }
            };
            emit(g, serde_json::to_value(&res)?, text)
        }
        UniformityOp::CountableBase { input } => {
            let inp: CountableInput = read_json(input.as_deref())?;
            let e = countable_base(&inp.space, &inp.f)?;
            let pairs: Vec<(usize, usize)> = e.pairs().collect();
            emit(g, json!({ "pairs": pairs }), format!("{} pairs", pairs.len()))
        }
    }
}
