use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::json;

use eiscong::bernoulli::{bernoulli_rational, bkchi_over_2k, bkchi_over_2k_valuations, generalized_bernoulli};
use eiscong::cohomology::h1_both_orientations;
use eiscong::congruence::max_congruence_search;
use eiscong::eisenstein::{basis_enumeration, default_precision, eisenstein_space_basis};
use eiscong::formal::{mult_by_a_series, torsion_order};
use eiscong::reptheory::predict_max_congruence;
use eiscong::verify::{default_grid, grid_cells, verify_grid, CellStatus, VerificationCell, VerifyConfig};
use eiscong::{DirichletCharacter, IdealHNF};

mod config;
mod output;

use config::Config;
use output::{emit, Format, Table};

#[derive(Parser, Debug)]
#[command(name = "eiscong", version, about = "Maximal congruences of Eisenstein series with character")]
struct Cli {
    /// Defaults file (key = value); overrides $EISCONG_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Worker threads for grid runs; default is all cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct CharArgs {
    /// Character as N:n:[e1,...] (exponents on the unit group generators) or `trivial`.
    #[arg(long = "char", default_value = "trivial")]
    chi: String,
}

impl CharArgs {
    fn parse(&self) -> Result<DirichletCharacter> {
        parse_char(&self.chi)
    }
}

fn parse_char(s: &str) -> Result<DirichletCharacter> {
    if s == "trivial" {
        return Ok(DirichletCharacter::trivial(1));
    }
    s.parse().map_err(|e| anyhow!("bad character {s:?}: {e}"))
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List Dirichlet characters of a modulus.
    Chars {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        primitive: bool,
    },
    /// B_k, or B_{k,chi} and B_{k,chi}/2k with local valuations.
    Bernoulli {
        #[arg(long)]
        k: u32,
        #[arg(long = "char")]
        chi: Option<String>,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Eisenstein basis of weight k and character chi.
    Eisenstein {
        #[arg(long)]
        weight: u32,
        #[command(flatten)]
        chi: CharArgs,
        #[arg(long)]
        level: Option<u64>,
        #[arg(long)]
        q_precision: Option<usize>,
        /// Coefficients shown per series.
        #[arg(long, default_value_t = 10)]
        terms: usize,
    },
    /// Best congruence f = 1 mod I over the Eisenstein span.
    Congruence {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        weight: u32,
        #[command(flatten)]
        chi: CharArgs,
        #[arg(long)]
        level: Option<u64>,
        #[arg(long)]
        q_precision: Option<usize>,
        #[arg(long)]
        p_precision: Option<u32>,
    },
    /// Closed-form maximal congruence of the twisted character.
    Predict {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        weight: u32,
        #[command(flatten)]
        chi: CharArgs,
    },
    /// Fixed points of the finite quotients and the stabilized H^1.
    Cohomology {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        weight: u32,
        #[command(flatten)]
        chi: CharArgs,
        /// Highest level m tried.
        #[arg(long)]
        levels: Option<u32>,
    },
    /// Multiplicative formal group.
    Formal {
        #[command(subcommand)]
        command: FormalCommand,
    },
    /// Compare closed form, oracle, series and cohomology on a grid.
    VerifyMainTheorem {
        #[arg(long, value_delimiter = ',')]
        p: Vec<u64>,
        /// Conductors of the characters tested.
        #[arg(long, value_delimiter = ',')]
        level: Vec<u64>,
        #[arg(long)]
        char_order: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        weights: Vec<u32>,
        #[arg(long)]
        q_precision: Option<usize>,
        #[arg(long)]
        p_precision: Option<u32>,
        #[arg(long)]
        m_max: Option<u32>,
    },
}

#[derive(Subcommand, Debug)]
enum FormalCommand {
    /// [a](t) = (1+t)^a - 1 modulo p^prec, up to t^deg.
    MultBy {
        #[arg(long, allow_hyphen_values = true)]
        a: BigInt,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        prec: u32,
        #[arg(long)]
        deg: usize,
    },
    /// Order of the I-torsion of G_m (x) Z_p[zeta_n], I given as `n; [[...],...]`.
    Torsion {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        ideal: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<u8> {
    let cfg = Config::resolve(cli.config.as_deref())?;
    if let Some(j) = cli.jobs.or(cfg.jobs) {
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global().context("thread pool")?;
    }
    let f = cli.format;
    match cli.command {
        Command::Chars { modulus, primitive } => chars(out, f, modulus, primitive)?,
        Command::Bernoulli { k, chi, p } => bernoulli(out, f, k, chi.as_deref(), p, cfg.p_precision())?,
        Command::Eisenstein { weight, chi, level, q_precision, terms } => {
            let q = q_precision.or(cfg.q_precision).unwrap_or_else(|| default_precision(weight));
            eisenstein(out, f, weight, &chi.parse()?, level, q, terms)?
        }
        Command::Congruence { p, weight, chi, level, q_precision, p_precision } => {
            let q = q_precision.or(cfg.q_precision).unwrap_or_else(|| default_precision(weight));
            let m = p_precision.unwrap_or(cfg.p_precision());
            congruence(out, f, p, weight, &chi.parse()?, level, q, m)?
        }
        Command::Predict { p, weight, chi } => predict(out, f, p, weight, &chi.parse()?)?,
        Command::Cohomology { p, weight, chi, levels } => {
            cohomology(out, f, p, weight, &chi.parse()?, levels.unwrap_or(cfg.m_max()))?
        }
        Command::Formal { command } => formal(out, f, command)?,
        Command::VerifyMainTheorem { p, level, char_order, weights, q_precision, p_precision, m_max } => {
            let vc = VerifyConfig {
                q_precision: q_precision.or(cfg.q_precision),
                p_precision: p_precision.unwrap_or(cfg.p_precision()),
                m_max: m_max.unwrap_or(cfg.m_max()),
            };
            return verify(out, f, &p, &level, char_order, &weights, &vc);
        }
    }
    Ok(0)
}

fn chars(out: &mut dyn Write, f: Format, modulus: u64, primitive: bool) -> Result<()> {
    if modulus == 0 {
        bail!("modulus must be positive");
    }
    let list = if primitive { DirichletCharacter::primitive(modulus) } else { DirichletCharacter::all(modulus) };
    let rows: Vec<_> = list
        .iter()
        .map(|c| json!({"id": c.to_string(), "order": c.order(), "conductor": c.conductor(), "parity": c.parity()}))
        .collect();
    emit(out, f, &rows, || {
        let mut t = Table::new(vec!["id", "order", "conductor", "parity"]);
        for c in &list {
            t.push(vec![c.to_string(), c.order().to_string(), c.conductor().to_string(), c.parity().to_string()]);
        }
        t
    })
}

fn bernoulli(out: &mut dyn Write, f: Format, k: u32, chi: Option<&str>, p: Option<u64>, m: u32) -> Result<()> {
    let Some(chi) = chi else {
        let b = bernoulli_rational(k as u64).to_string();
        let v = json!({"k": k, "value": b});
        return emit(out, f, &v, || {
            let mut t = Table::new(vec!["k", "value"]);
            t.push(vec![k.to_string(), b.clone()]);
            t
        });
    };
    let chi = parse_char(chi)?;
    let b = generalized_bernoulli(k, &chi)?.value;
    let half = bkchi_over_2k(k, &chi)?;
    let vals = match p {
        Some(p) if !half.is_zero() => Some(bkchi_over_2k_valuations(k, &chi, p, m)?),
        _ => None,
    };
    let v = json!({
        "k": k,
        "char": chi.to_string(),
        "value": b.to_string(),
        "over_2k": half.to_string(),
        "valuations": vals,
    });
    emit(out, f, &v, || {
        let mut t = Table::new(vec!["k", "char", "value", "over_2k", "valuations"]);
        let vs = vals.as_ref().map(|v| format!("{v:?}")).unwrap_or_default();
        t.push(vec![k.to_string(), chi.to_string(), b.to_string(), half.to_string(), vs]);
        t
    })
}

fn eisenstein(out: &mut dyn Write, f: Format, k: u32, chi: &DirichletCharacter, level: Option<u64>, q: usize, terms: usize) -> Result<()> {
    let basis = match level {
        Some(l) if l > 1 => basis_enumeration(k, l, chi, q)?,
        _ => eisenstein_space_basis(k, chi, q)?,
    };
    let shown = terms.min(q + 1);
    let rows: Vec<_> = basis
        .iter()
        .map(|b| {
            json!({
                "chi1": b.chi1.to_string(),
                "chi2": b.chi2.to_string(),
                "t": b.t,
                "kind": b.kind,
                "ring": b.series.n(),
                "coefficients": b.series.coeffs()[..shown].iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "diagnostics": b.diagnostics,
            })
        })
        .collect();
    emit(out, f, &rows, || {
        let mut t = Table::new(vec!["chi1", "chi2", "t", "kind", "coefficients"]);
        for b in &basis {
            let cs: Vec<String> = b.series.coeffs()[..shown].iter().map(|c| c.to_string()).collect();
            t.push(vec![b.chi1.to_string(), b.chi2.to_string(), b.t.to_string(), format!("{:?}", b.kind), cs.join(" ")]);
        }
        t
    })
}

#[allow(clippy::too_many_arguments)]
fn congruence(out: &mut dyn Write, f: Format, p: u64, k: u32, chi: &DirichletCharacter, level: Option<u64>, q: usize, m: u32) -> Result<()> {
    let basis = match level {
        Some(l) if l > 1 && l != chi.conductor() => basis_enumeration(k, l, chi, q)?,
        _ => eisenstein_space_basis(k, &chi.primitive_version(), q)?,
    };
    let r = max_congruence_search(&basis, p, None, m)?;
    let elements: Vec<String> = basis.iter().map(|b| format!("E[{}, {}, t={}]", b.chi1, b.chi2, b.t)).collect();
    let v = json!({
        "p": p,
        "weight": k,
        "char": chi.to_string(),
        "basis": elements,
        "ideal": r.ideal.to_string(),
        "norm": r.ideal.norm().to_string(),
        "exponents": r.exponents,
        "stabilization_index": r.stabilization_index,
        "q_precision": q,
        "p_precision": m,
        "confirmed": r.confirmed,
        "witness": r.witness,
        "diagnostics": r.diagnostics,
    });
    emit(out, f, &v, || {
        let mut t = Table::new(vec!["p", "weight", "char", "ideal", "norm", "stabilization", "confirmed"]);
        t.push(vec![
            p.to_string(),
            k.to_string(),
            chi.to_string(),
            r.ideal.to_string(),
            r.ideal.norm().to_string(),
            r.stabilization_index.to_string(),
            r.confirmed.to_string(),
        ]);
        t
    })
}

fn predict(out: &mut dyn Write, f: Format, p: u64, k: u32, chi: &DirichletCharacter) -> Result<()> {
    let pr = predict_max_congruence(k, chi, p)?;
    let mut v = serde_json::to_value(&pr)?;
    if let Some(obj) = v.as_object_mut() {
        obj.remove("case_tag");
        obj.insert("case".into(), json!(pr.case_tag.to_string()));
        obj.insert("char".into(), json!(chi.to_string()));
        obj.insert("norm".into(), json!(pr.ideal.norm().to_string()));
    }
    emit(out, f, &v, || {
        let mut t = Table::new(vec!["case", "p", "weight", "char", "ideal", "norm"]);
        t.push(vec![
            pr.case_tag.to_string(),
            p.to_string(),
            k.to_string(),
            chi.to_string(),
            pr.ideal.to_string(),
            pr.ideal.norm().to_string(),
        ]);
        t
    })
}

fn cohomology(out: &mut dyn Write, f: Format, p: u64, k: u32, chi: &DirichletCharacter, m_max: u32) -> Result<()> {
    let h = h1_both_orientations(k, chi, p, m_max)?;
    emit(out, f, &h, || {
        let mut t = Table::new(vec!["twist", "level", "invariant_factors", "stable_ideal"]);
        for (name, r) in [("chi", &h.chi), ("chi^-1", &h.chi_inverse)] {
            for lv in &r.levels {
                let ideal = if lv.level == r.stabilization_level { r.ideal.to_string() } else { String::new() };
                t.push(vec![name.to_string(), lv.level.to_string(), format!("{:?}", lv.invariant_factors), ideal]);
            }
        }
        t
    })
}

fn formal(out: &mut dyn Write, f: Format, cmd: FormalCommand) -> Result<()> {
    match cmd {
        FormalCommand::MultBy { a, p, prec, deg } => {
            let s = mult_by_a_series(&a, deg, p, prec)?;
            emit(out, f, &s, || {
                let mut t = Table::new(vec!["degree", "coefficient"]);
                for (j, c) in s.coeffs().iter().enumerate() {
                    t.push(vec![(j + 1).to_string(), c.to_string()]);
                }
                t
            })
        }
        FormalCommand::Torsion { p, ideal } => {
            let i: IdealHNF = ideal.parse().map_err(|e| anyhow!("bad ideal {ideal:?}: {e}"))?;
            let order = torsion_order(p, &i)?.to_string();
            let v = json!({"ideal": i.to_string(), "order": order});
            emit(out, f, &v, || {
                let mut t = Table::new(vec!["ideal", "order"]);
                t.push(vec![i.to_string(), order.clone()]);
                t
            })
        }
    }
}

fn verify(
    out: &mut dyn Write,
    f: Format,
    primes: &[u64],
    levels: &[u64],
    char_order: Option<u64>,
    weights: &[u32],
    cfg: &VerifyConfig,
) -> Result<u8> {
    let mut cells = if primes.is_empty() && levels.is_empty() && weights.is_empty() {
        default_grid()
    } else {
        let primes = if primes.is_empty() { vec![2, 3, 5, 7] } else { primes.to_vec() };
        let levels = if levels.is_empty() { vec![1] } else { levels.to_vec() };
        let weights = if weights.is_empty() { (1..=12).collect() } else { weights.to_vec() };
        grid_cells(&primes, &levels, &weights)
    };
    if let Some(n) = char_order {
        cells.retain(|(_, chi, _)| chi.order() == n);
    }
    if cells.is_empty() {
        bail!("no admissible cells (levels without primitive characters of that order, or parity excludes every weight)");
    }
    let results: Vec<VerificationCell> = verify_grid(&cells, cfg).into_iter().collect::<eiscong::Result<_>>()?;
    let failed = results.iter().any(|c| c.status == CellStatus::Fail);
    emit(out, f, &results, || {
        let mut t = Table::new(vec!["p", "level", "k", "char", "case", "predicted", "series", "cohomology", "status"]);
        let show = |i: &Option<IdealHNF>| i.as_ref().map_or("-".to_string(), |x| x.to_string());
        for c in &results {
            t.push(vec![
                c.p.to_string(),
                c.level.to_string(),
                c.k.to_string(),
                c.character.clone(),
                c.case_tag.to_string(),
                c.predicted.to_string(),
                show(&c.series),
                show(&c.cohomology),
                c.status.to_string(),
            ]);
        }
        t
    })?;
    Ok(u8::from(failed))
}
