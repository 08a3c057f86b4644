mod golden;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use subminor::betti::{self, BettiTable};
use subminor::exactalg::PrimeField;
use subminor::invariants::{self, EstimateMode, H2Mode, InvariantOptions, InvariantReport};
use subminor::{oracle, DegreeMatrix, Error};

const EXIT_INVALID: u8 = 1;
const EXIT_NOT_CONVERGED: u8 = 2;
const EXIT_GOLDEN: u8 = 3;

#[derive(Parser)]
#[command(name = "subminor", version, about = "Invariants of Gorenstein schemes cut out by submaximal minors")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Entries b_1..b_t, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    b: Option<Vec<i64>>,
    /// Entries a_1..a_t, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    a: Option<Vec<i64>>,
    /// Ambient P^n.
    #[arg(long, default_value_t = 5)]
    n: usize,
    /// Degree-matrix JSON file {"b":[..],"a":[..],"n":..}; overrides --b/--a/--n.
    #[arg(long)]
    input: Option<std::path::PathBuf>,
    #[arg(long, default_value_t = subminor::exactalg::DEFAULT_PRIME)]
    prime: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Degree bound of syzygy searches (default 2s+4).
    #[arg(long)]
    bound: Option<i64>,
    #[arg(long, default_value_t = 3)]
    window: usize,
    #[arg(long, conflicts_with = "text")]
    json: bool,
    #[arg(long)]
    text: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a degree matrix and the numerical hypotheses.
    Validate(Common),
    /// Betti tables of the closed-form complexes.
    Betti {
        #[command(flatten)]
        common: Common,
        /// hb, sq, gn, kb, nb or all.
        #[arg(long, default_value = "all")]
        kind: String,
    },
    /// Hilbert functions and polynomials, degree and genus.
    Hilbert {
        #[command(flatten)]
        common: Common,
        /// Largest degree listed.
        #[arg(long, default_value_t = 10)]
        up_to: i64,
    },
    /// The closed dimension formula and its hypotheses.
    Dimw(Common),
    /// Compare brute-force Hilbert functions of a random instance with the
    /// closed forms.
    OracleCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = oracle::DEFAULT_ATTEMPTS)]
        attempts: usize,
    },
    /// δ, the dimension estimate and codimension bounds.
    Invariants {
        #[command(flatten)]
        common: Common,
        /// formula, eps or eps_plus_delta.
        #[arg(long, default_value = "eps_plus_delta")]
        mode: String,
        /// skip, compute, or a known integer value of _0h²(R,A,A).
        #[arg(long, default_value = "skip")]
        h2: String,
        /// Number of random instances; the least _0hom(I_B, I_{A/B}) wins.
        #[arg(long, default_value_t = invariants::DEFAULT_SEEDS)]
        seeds: usize,
    },
    /// Recompute the worked examples and diff against the golden table.
    Repro {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        example: u8,
        /// Only this value of s.
        #[arg(long)]
        s: Option<i64>,
        #[arg(long, default_value_t = subminor::exactalg::DEFAULT_PRIME)]
        prime: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = invariants::DEFAULT_SEEDS)]
        seeds: usize,
        #[arg(long)]
        bound: Option<i64>,
        #[arg(long, default_value_t = 3)]
        window: usize,
        #[arg(long, conflicts_with = "text")]
        json: bool,
        #[arg(long)]
        text: bool,
    },
}

/// A failure with its exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotConverged { .. } => EXIT_NOT_CONVERGED,
            _ => EXIT_INVALID,
        };
        Fail(code, e.to_string())
    }
}

struct Output {
    json: Value,
    text: String,
    code: u8,
}

impl Common {
    /// Also checks --prime, so that a bad modulus is rejected by every subcommand.
    fn degree_matrix(&self) -> Result<DegreeMatrix, Fail> {
        self.field()?;
        if let Some(path) = &self.input {
            let s = std::fs::read_to_string(path).map_err(|e| Fail(EXIT_INVALID, format!("{}: {e}", path.display())))?;
            return Ok(DegreeMatrix::from_json(&s)?);
        }
        match (&self.b, &self.a) {
            (Some(b), Some(a)) => Ok(DegreeMatrix::new(b.clone(), a.clone(), self.n)?),
            _ => Err(Fail(EXIT_INVALID, "give --b and --a, or --input".into())),
        }
    }

    fn field(&self) -> Result<PrimeField, Fail> {
        Ok(PrimeField::new(self.prime)?)
    }
}

fn table_text(t: &BettiTable) -> String {
    format!("{:<8}{}", t.kind.label(), t)
}

fn tables(dm: &DegreeMatrix, kind: &str) -> Result<Vec<BettiTable>, Fail> {
    let all = ["hb", "sq", "gn", "kb", "nb"];
    let kinds: Vec<&str> = if kind == "all" { all.to_vec() } else { vec![kind] };
    let mut out = Vec::new();
    for k in kinds {
        let t = match k {
            "hb" => betti::hilbert_burch_table(dm),
            "sq" => betti::ideal_square_table(dm),
            "gn" => betti::gulliksen_negard_table(dm),
            "kb" => betti::canonical_module_table(dm),
            "nb" => betti::normal_presentation_table(dm),
            other => return Err(Fail(EXIT_INVALID, format!("unknown table kind {other:?}"))),
        };
        match t {
            Ok(t) => out.push(t),
            // GN is not minimal for every degree matrix; skip it in "all"
            Err(Error::Unsupported(_)) if kind == "all" => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

fn validate(c: &Common) -> Result<Output, Fail> {
    let dm = c.degree_matrix()?;
    let h = dm.theorem_hypotheses();
    let text = format!(
        "{dm}\ns = {}\nnonempty = {}\nhypotheses: {}",
        dm.det_degree(),
        h.nonempty,
        serde_json::to_string(&h).expect("serializable")
    );
    let code = if h.nonempty { 0 } else { EXIT_INVALID };
    Ok(Output { json: json!({"dm": dm, "s": dm.det_degree(), "hypotheses": h}), text, code })
}

fn betti_cmd(c: &Common, kind: &str) -> Result<Output, Fail> {
    let dm = c.degree_matrix()?;
    let ts = tables(&dm, kind)?;
    let text = ts.iter().map(table_text).collect::<Vec<_>>().join("\n");
    let json = Value::Object(ts.iter().map(|t| (t.kind.label().to_string(), t.to_json())).collect());
    Ok(Output { json: json!({"dm": dm, "tables": json}), text, code: 0 })
}

fn hilbert_cmd(c: &Common, up_to: i64) -> Result<Output, Fail> {
    let dm = c.degree_matrix()?;
    let mut json_tables = serde_json::Map::new();
    let mut text = Vec::new();
    for t in tables(&dm, "all")? {
        if matches!(t.kind, betti::ComplexKind::NormalPresentation) {
            continue;
        }
        let hf: Vec<i64> = (0..=up_to).map(|v| betti::hilbert_function(&t, v)).collect();
        let hp = betti::hilbert_polynomial(&t);
        let dg = betti::degree_and_genus(&hp).ok();
        text.push(format!("{:<8}HF(0..={up_to}) = {hf:?}", t.kind.label()));
        text.push(format!("{:<8}HP binomial coordinates = {:?}", "", hp.binomial_coords));
        if let Some((d, g)) = dg {
            text.push(format!("{:<8}degree = {d}, arithmetic genus = {g}", ""));
        }
        json_tables.insert(
            t.kind.label().to_string(),
            json!({"hilbert_function": hf, "hilbert_polynomial": hp.binomial_coords,
                   "degree_genus": dg}),
        );
    }
    Ok(Output { json: json!({"dm": dm, "tables": json_tables}), text: text.join("\n"), code: 0 })
}

fn dimw(c: &Common) -> Result<Output, Fail> {
    let dm = c.degree_matrix()?;
    let f = betti::dim_w_formula(&dm)?;
    let h = &f.hypotheses;
    let all = h.theorem_applies;
    let text = format!(
        "{dm}\ndim W = {}\nhypotheses: {}",
        f.value,
        if all { "all pass".to_string() } else { serde_json::to_string(h).expect("serializable") }
    );
    Ok(Output { json: json!({"dm": dm, "value": f.value, "hypotheses": h, "all_pass": all}), text, code: 0 })
}

fn oracle_check(c: &Common, attempts: usize) -> Result<Output, Fail> {
    let dm = c.degree_matrix()?;
    let (a, seed) = oracle::certified_instance(&dm, c.field()?, c.seed, attempts)?;
    let checks = oracle::certify(&a)?;
    let sq = oracle::hilbert_function_check(
        &oracle::square_generators(&a.ib_generators()?),
        dm.n_vars(),
        &betti::ideal_square_table(&dm)?,
        oracle::Resolves::Ideal,
        0..=dm.det_degree() + 3,
    )?;
    let mut all = checks;
    all.push(sq);
    let ok = all.iter().all(|c| c.agree);
    let text = all
        .iter()
        .map(|c| format!("{:<8}{}", c.label, if c.agree { "agree".to_string() } else { format!("mismatch at {:?}", c.first_mismatch) }))
        .collect::<Vec<_>>()
        .join("\n");
    let text = format!("seed {seed}\n{text}");
    Ok(Output { json: json!({"dm": dm, "seed": seed, "checks": all}), text, code: if ok { 0 } else { EXIT_INVALID } })
}

fn report_text(r: &InvariantReport) -> String {
    let mut out = vec![
        format!("{}  [{}]", r.dm, r.status()),
        format!("s = {}  seed = {}  bound = {}  window = {}", r.s, r.seed, r.bound, r.window),
        format!("epsilon = {}", r.epsilon),
        format!(
            "delta(K_B)_{} = {}  delta(N_B)_{} = {}  delta = {}",
            r.delta_kb.v, r.delta_kb.value, r.delta_nb.v, r.delta_nb.value, r.delta
        ),
        format!("dim estimate ({:?}) = {}  bracket = [{}, {}]", r.mode, r.dim_estimate, r.dim_bracket.0, r.dim_bracket.1),
        format!("_0hom(I_B, I_A/B) = {}  _0ext1(I_B/I_B^2, I_A/B) = {}", r.hom_ib_iab, r.ext1_ib_iab.value),
        format!("_s ext1(N_B, A) = {}", r.ext1_nb_a.value),
    ];
    if let Some(h) = r.h2_raa {
        out.push(format!("_0h2(R, A, A) = {}", h.value));
    }
    let c = &r.codim;
    out.push(match c.exact {
        Some(e) => format!("codim = {e}  (bounds [{}, {}])", c.lower, c.upper),
        None => format!("codim in [{}, {}]", c.lower, c.upper),
    });
    out.join("\n")
}

fn invariants_cmd(c: &Common, mode: &str, h2: &str, seeds: usize) -> Result<Output, Fail> {
    let dm = c.degree_matrix()?;
    let h2 = match h2 {
        "skip" => H2Mode::Skip,
        "compute" => H2Mode::Compute,
        v => H2Mode::Given(v.parse().map_err(|_| Fail(EXIT_INVALID, format!("bad --h2 value {v:?}")))?),
    };
    let opts = InvariantOptions {
        field: c.field()?,
        seed: c.seed,
        seeds,
        bound: c.bound,
        window: c.window,
        mode: mode.parse::<EstimateMode>()?,
        h2,
    };
    let r = invariants::invariant_report(&dm, &opts)?;
    let code = if r.certified { 0 } else { EXIT_NOT_CONVERGED };
    Ok(Output { json: serde_json::to_value(&r).expect("serializable"), text: report_text(&r), code })
}

fn run(cmd: Cmd) -> Result<(Output, bool), Fail> {
    Ok(match cmd {
        Cmd::Validate(c) => (validate(&c)?, c.json),
        Cmd::Betti { common, kind } => (betti_cmd(&common, &kind)?, common.json),
        Cmd::Hilbert { common, up_to } => (hilbert_cmd(&common, up_to)?, common.json),
        Cmd::Dimw(c) => (dimw(&c)?, c.json),
        Cmd::OracleCheck { common, attempts } => (oracle_check(&common, attempts)?, common.json),
        Cmd::Invariants { common, mode, h2, seeds } => (invariants_cmd(&common, &mode, &h2, seeds)?, common.json),
        Cmd::Repro { example, s, prime, seed, seeds, bound, window, json, .. } => {
            let field = PrimeField::new(prime)?;
            let out = golden::repro(example, s, field, seed, seeds, bound, window)?;
            let code = if !out.matches { EXIT_GOLDEN } else if !out.certified { EXIT_NOT_CONVERGED } else { 0 };
            (Output { json: out.json, text: out.text, code }, json)
        }
    })
}

fn main() -> ExitCode {
    // usage errors share the validation exit code; 2 is reserved for non-convergence
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { 0 });
        }
    };
    match run(cli.cmd) {
        Ok((out, json)) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
            } else {
                println!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
