//! `potequiv`: reproduce the CM counterexample, compare Frobenius tables, decompose character
//! lattices, run power-map experiments and detect twists.
//!
//! Exit codes: 0 when every checked fact holds, 1 on input or usage errors, 2 when a
//! mathematical assertion fails.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use potequiv::algebra::{rat_frac, CyclotomicField, IntMatrix};
use potequiv::density::density_report;
use potequiv::frobenius::{
    cm_pair_table, cyclotomic_pair_table, detect_twist_character, read_ap_table, read_frobenius_table,
    save_frobenius_table, table_verdicts, write_ap_table, APTable, DirichletCharacter, ECModel, FrobeniusTable,
    TwistOutcome,
};
use potequiv::potequiv::{exponent_bound, factorial_exponent_bound, in_x_m, in_y_m};
use potequiv::powermap::{semisimple_noncollapse_demo, torus_collapse_demo, PowerMapReport, DEFAULT_SEED};
use potequiv::torus::{decompose, invariant_order, LatticeAutomorphism, SemidirectGroup, TorusPoint};
use potequiv::Error;

use output::{Format, Out};

#[derive(Parser)]
#[command(name = "potequiv", version, about = "Potential equivalence of Frobenius data and related experiments")]
struct Cli {
    /// Output style: readable text or `@key=value` lines.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    /// Seed for every random sampler.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Demo {
    Torus,
    Swap,
}

#[derive(Clone, Copy, ValueEnum)]
enum Curve {
    /// `y^2 + y = x^3 - x^2 - 10x - 20`.
    #[value(name = "11a")]
    Level11,
    /// `y^2 = x^3 - x`.
    Cm,
}

#[derive(Clone, Copy, ValueEnum)]
enum Twist {
    None,
    /// Character of `Q(i)`, mod 4.
    ChiM4,
    /// Character of `Q(sqrt 2)`, mod 8.
    Chi8,
    /// Character of `Q(sqrt -2)`, mod 8.
    ChiM8,
}

#[derive(Subcommand)]
enum Command {
    /// Compare `chi + chi` with `Ind psi^2` for `y^2 = x^3 - x` at odd primes up to X.
    CmDemo {
        #[arg(long, default_value_t = 1000)]
        xmax: u64,
    },
    /// Verdict per prime for a Frobenius table file.
    Compare {
        #[arg(long)]
        table: PathBuf,
        /// Test only this exponent, by traces and by characteristic polynomials.
        #[arg(long)]
        force_m: Option<u64>,
    },
    /// Decompose the character lattice under an integer matrix of finite order.
    Lattice {
        #[arg(long)]
        matrix: String,
        /// Generators of L0 as a bracketed row list.
        #[arg(long = "L0")]
        l0: Option<String>,
        /// Random points for the coset order check.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Power map on a non-identity component.
    Powermap {
        #[arg(long, value_enum)]
        demo: Demo,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Find a Dirichlet character mod q relating two a_p tables.
    Twist {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        q: u64,
    },
    /// Exponent bound for a degree bound D.
    Bound {
        #[arg(long)]
        degree: u64,
        #[arg(long)]
        factorial: bool,
    },
    /// Write a generated Frobenius table.
    Table {
        #[arg(long, default_value = "cm")]
        kind: String,
        #[arg(long, default_value_t = 1000)]
        xmax: u64,
        #[arg(long, default_value_t = 1)]
        k1: u32,
        #[arg(long, default_value_t = 1)]
        k2: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the a_p table of a curve, optionally twisted.
    ApTable {
        #[arg(long, value_enum)]
        curve: Curve,
        #[arg(long, default_value_t = 2000)]
        xmax: u64,
        #[arg(long, value_enum, default_value_t = Twist::None)]
        twist: Twist,
        #[arg(long)]
        out: PathBuf,
    },
}

type CmdResult = Result<bool, Error>;

fn cm_demo(out: &mut Out, xmax: u64) -> CmdResult {
    let table = cm_pair_table(xmax)?;
    let verdicts = table_verdicts(&table)?;
    let mut failure = None;
    let (mut inert, mut inert_ok, mut split, mut split_ok) = (0, 0, 0, 0);
    for (p, v) in &verdicts {
        if p % 4 == 3 {
            inert += 1;
            if v.equivalent && v.minimal_exponent == Some(4) {
                inert_ok += 1;
            } else if failure.is_none() {
                failure = Some(format!("inert prime {p} is not equivalent at m = 4"));
            }
        } else {
            split += 1;
            if !v.equivalent {
                split_ok += 1;
            } else if failure.is_none() {
                failure = Some(format!("split prime {p} is equivalent"));
            }
        }
    }
    let excluded: Vec<String> = table.excluded().iter().map(|(p, _)| p.to_string()).collect();
    out.human(format!("CM pair chi+chi vs Ind(psi^2), good odd primes p <= {xmax}"));
    out.human(format!("excluded: {}", excluded.join(", ")));
    out.human(format!("inert (p = 3 mod 4): {inert_ok}/{inert} equivalent with m = 4"));
    out.human(format!("split (p = 1 mod 4): {split_ok}/{split} inequivalent"));
    out.kv("xmax", xmax);
    out.kv("excluded", excluded.join(","));
    out.kv("inert", inert);
    out.kv("inert_m4", inert_ok);
    out.kv("split", split);
    out.kv("split_inequivalent", split_ok);
    if verdicts.is_empty() {
        out.human("no good primes: density undefined");
        out.kv("observed", "undefined");
    } else {
        let r = density_report(xmax, &verdicts, Some(rat_frac(1, 2)))?;
        out.human(format!("{r} (finite-X frequency)"));
        out.kv("hits", r.hits);
        out.kv("total", r.total_primes);
        out.kv("observed", &r.observed);
        out.kv("observed_f64", format!("{:.6}", r.observed_f64()));
        out.kv("predicted", "1/2");
        out.kv("deviation", r.deviation.as_ref().expect("prediction supplied"));
    }
    if let Some(f) = &failure {
        out.human(format!("FAILED: {f}"));
        out.kv("failure", f);
    }
    out.kv("status", if failure.is_none() { "ok" } else { "failed" });
    Ok(failure.is_none())
}

fn compare(out: &mut Out, path: &PathBuf, force_m: Option<u64>) -> CmdResult {
    let table = read_frobenius_table(path)?;
    if table.is_empty() {
        return Err(Error::UndefinedDensity(format!("{} has no records", path.display())));
    }
    out.kv("primes", table.len());
    match force_m {
        None => {
            let verdicts = table_verdicts(&table)?;
            for (p, v) in &verdicts {
                let m = v.minimal_exponent.map_or("-".to_string(), |m| m.to_string());
                let word = if v.equivalent { "equivalent" } else { "inequivalent" };
                out.human(format!("{p} {word} {m}"));
                out.kv(&format!("p{p}"), format!("{word},{m}"));
            }
            let r = density_report(table.entries().last().map_or(0, |e| e.record.p), &verdicts, None)?;
            out.human(format!("density: {r}"));
            out.kv("hits", r.hits);
            out.kv("observed", &r.observed);
        }
        Some(m) => {
            let mut hits = 0;
            for e in table.entries() {
                let x = in_x_m(&e.charpoly1, &e.charpoly2, m)?;
                let y = in_y_m(&e.charpoly1, &e.charpoly2, m)?;
                hits += usize::from(y);
                let word = |b: bool| if b { "yes" } else { "no" };
                out.human(format!("{} m={m} traces:{} charpolys:{}", e.record.p, word(x), word(y)));
                out.kv(&format!("p{}", e.record.p), format!("{},{}", word(x), word(y)));
            }
            out.human(format!("density at m = {m}: {hits}/{}", table.len()));
            out.kv("hits", hits);
        }
    }
    Ok(true)
}

fn format_rows<T: std::fmt::Display>(rows: &[Vec<T>]) -> String {
    let rows: Vec<String> = rows
        .iter()
        .map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}

fn lattice(out: &mut Out, matrix: &str, l0: Option<&str>, samples: usize, seed: u64) -> CmdResult {
    let a = IntMatrix::parse(matrix)?;
    let theta = LatticeAutomorphism::new(a)?;
    let l0 = l0
        .map(|s| IntMatrix::parse(s).map(|m| (0..m.rows()).map(|i| m.row(i)).collect::<Vec<_>>()))
        .transpose()?;
    let d = decompose(&theta, l0)?;
    let n = theta.order();
    let m = invariant_order(&theta);
    out.human(format!("theta = {matrix}, order n = {n}"));
    out.human(format!("X^theta rank {}: {}", d.fixed_rank(), format_rows(&d.fixed_basis)));
    out.human(format!("Y rank {}: {}", d.y_rank(), format_rows(&d.y_basis)));
    out.human(format!("L0: {}", format_rows(&d.l0)));
    out.human(format!("L_theta rank {}: {}", d.ltheta_rank(), format_rows(&d.ltheta_basis)));
    let restricted = d.invariant_order.as_ref().map_or("infinite".to_string(), BigInt::to_string);
    let m_text = m.as_ref().map_or("infinite".to_string(), BigInt::to_string);
    out.human(format!("invariant order m = {m_text}; on L_theta: {restricted}"));
    out.kv("n", n);
    out.kv("fixed_rank", d.fixed_rank());
    out.kv("fixed_basis", format_rows(&d.fixed_basis));
    out.kv("y_rank", d.y_rank());
    out.kv("y_basis", format_rows(&d.y_basis));
    out.kv("ltheta_basis", format_rows(&d.ltheta_basis));
    out.kv("m", &m_text);
    out.kv("m_ltheta", &restricted);
    let mut ok = true;
    if let Some(m) = m.and_then(|m| m.to_u64()) {
        let field = CyclotomicField::new(1);
        let group = SemidirectGroup::new(theta.clone(), field.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0;
        for _ in 0..samples {
            let x = TorusPoint::random(&mut rng, &field, theta.rank(), 20);
            let k = group.coset_element_order(&x)?;
            worst = worst.max(k);
            ok &= k <= m * n as u64;
        }
        out.human(format!("coset orders over {samples} points: max {worst} <= mn = {}", m * n as u64));
        out.kv("coset_order_max", worst);
        out.kv("mn", m * n as u64);
    } else {
        out.human("coset order bound: not applicable (infinitely many fixed points)");
    }
    out.kv("status", if ok { "ok" } else { "failed" });
    Ok(ok)
}

fn powermap(out: &mut Out, demo: Demo, samples: usize, seed: u64) -> CmdResult {
    let (name, r): (&str, PowerMapReport) = match demo {
        Demo::Torus => ("torus", torus_collapse_demo(samples, seed)?),
        Demo::Swap => ("swap", semisimple_noncollapse_demo(samples, seed)?),
    };
    out.human(format!("{name} demo, m = {}, {} samples, seed {seed}", r.m, r.samples));
    out.human(format!("distinct images: {}; collapse: {}", r.distinct_images, r.collapse));
    out.human(format!("witnessed image points: {}", r.witnessed_neighborhood.len()));
    if let Some(first) = r.witnessed_neighborhood.first() {
        out.human(format!("first witnessed point:\n{first}"));
    }
    out.kv("demo", name);
    out.kv("m", r.m);
    out.kv("seed", seed);
    out.kv("samples", r.samples);
    out.kv("distinct_images", r.distinct_images);
    out.kv("collapse", r.collapse);
    out.kv("witnesses", r.witnessed_neighborhood.len());
    let ok = match demo {
        Demo::Torus => r.collapse,
        Demo::Swap => !r.collapse || samples < 2,
    };
    out.kv("status", if ok { "ok" } else { "failed" });
    Ok(ok)
}

fn twist(out: &mut Out, f: &PathBuf, g: &PathBuf, q: u64) -> CmdResult {
    let (a, b) = (read_ap_table(f)?, read_ap_table(g)?);
    let r = detect_twist_character(&a, &b, q)?;
    out.kv("usable_primes", r.usable_primes);
    if let Some((wa, wb)) = r.weight_mismatch {
        out.human(format!("warning: weights differ ({wa} vs {wb})"));
        out.kv("weight_mismatch", format!("{wa},{wb}"));
    }
    match &r.outcome {
        TwistOutcome::Character(chi) => {
            out.human(format!("character {chi} from {} primes", r.usable_primes));
            out.kv("outcome", "character");
            for (res, v) in chi.values() {
                out.kv(&format!("chi{res}"), v);
            }
        }
        TwistOutcome::NoCharacter { reason } => {
            out.human(format!("no character: {reason}"));
            out.kv("outcome", "none");
            out.kv("reason", reason);
        }
        TwistOutcome::Inconclusive { missing } => {
            let m: Vec<String> = missing.iter().map(u64::to_string).collect();
            out.human(format!("inconclusive: too few primes in classes {} mod {q}", m.join(", ")));
            out.kv("outcome", "inconclusive");
            out.kv("missing", m.join(","));
        }
    }
    Ok(true)
}

fn bound(out: &mut Out, degree: u64, factorial: bool) -> CmdResult {
    if degree == 0 {
        return Err(Error::Contract("degree must be at least 1".into()));
    }
    let b = exponent_bound(degree);
    out.human(format!("exponent bound for degree {degree}: {b}"));
    out.kv("degree", degree);
    out.kv("bound", &b);
    if factorial {
        let f = factorial_exponent_bound(degree);
        out.human(format!("factorial variant: {f}"));
        out.kv("factorial", &f);
    }
    Ok(true)
}

fn table(out: &mut Out, kind: &str, xmax: u64, k1: u32, k2: u32, path: &PathBuf) -> CmdResult {
    let t: FrobeniusTable = match kind {
        "cm" => cm_pair_table(xmax)?,
        "cyclotomic" => cyclotomic_pair_table(xmax, k1, k2)?,
        other => return Err(Error::Contract(format!("unknown table kind {other:?} (cm, cyclotomic)"))),
    };
    save_frobenius_table(&t, path)?;
    out.human(format!("wrote {} records to {}", t.len(), path.display()));
    out.kv("records", t.len());
    Ok(true)
}

fn ap_table(out: &mut Out, curve: Curve, xmax: u64, twist: Twist, path: &PathBuf) -> CmdResult {
    let (e, level, label) = match curve {
        Curve::Level11 => (ECModel::level_11(), 11, "11a"),
        Curve::Cm => (ECModel::gaussian_cm(), 32, "32a"),
    };
    let mut t = APTable::from_curve(&e, level, xmax, label)?;
    let chi = match twist {
        Twist::None => None,
        Twist::ChiM4 => Some(DirichletCharacter::from_values(4, &[(1, 1), (3, -1)])?),
        Twist::Chi8 => Some(DirichletCharacter::from_values(8, &[(1, 1), (3, -1), (5, -1), (7, 1)])?),
        Twist::ChiM8 => Some(DirichletCharacter::from_values(8, &[(1, 1), (3, 1), (5, -1), (7, -1)])?),
    };
    if let Some(chi) = chi {
        t = t.twisted(&chi, format!("{label} x {chi}"));
    }
    std::fs::write(path, write_ap_table(&t)).map_err(Error::from)?;
    out.human(format!("wrote {} values to {}", t.len(), path.display()));
    out.kv("records", t.len());
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let mut out = Out::new(cli.format);
    let result = match &cli.command {
        Command::CmDemo { xmax } => cm_demo(&mut out, *xmax),
        Command::Compare { table, force_m } => compare(&mut out, table, *force_m),
        Command::Lattice { matrix, l0, samples } => lattice(&mut out, matrix, l0.as_deref(), *samples, cli.seed),
        Command::Powermap { demo, samples } => powermap(&mut out, *demo, *samples, cli.seed),
        Command::Twist { f, g, q } => twist(&mut out, f, g, *q),
        Command::Bound { degree, factorial } => bound(&mut out, *degree, *factorial),
        Command::Table { kind, xmax, k1, k2, out: path } => table(&mut out, kind, *xmax, *k1, *k2, path),
        Command::ApTable { curve, xmax, twist, out: path } => ap_table(&mut out, *curve, *xmax, *twist, path),
    };
    print!("{}", out.finish());
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
