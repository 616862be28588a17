//! Command-line driver.
//!
//! Subcommands cover document validation, catalog emission, torus and
//! simple-module inventories, the named checks, the full corpus sweep, and
//! report-stream conversion.  Exit codes: 0 on success, 1 when a check
//! fails, 2 on input problems, 3 when a resource cap stopped a computation.

use std::io::Read as _;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::catalog::{self, hamiltonian};
use crate::doc::{self, AlgebraDocument, Document};
use crate::field::{Field, Scalar};
use crate::filt::{self, RestrictedFiltration};
use crate::lie::LieAlgebra;
use crate::pim;
use crate::report::{self, Format, ReportRow};
use crate::sweep;
use crate::torus;
use crate::{Error, Result};

#[derive(Parser)]
#[command(
    name = "modlie",
    version,
    about = "Exact workbench for restricted Lie algebras over small finite fields"
)]
pub struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse, canonicalize, and validate an algebra or module document.
    Validate {
        /// Document path; stdin when omitted or `-`.
        file: Option<PathBuf>,
    },
    /// List catalog entries or emit one as a canonical document.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
    /// Compute a maximal torus and its dimension.
    Torus {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        knobs: Knobs,
    },
    /// Inventory the simple modules of the reduced enveloping algebra.
    Simples {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        knobs: Knobs,
    },
    /// Projective indecomposable dimensions and the 0-PIM report.
    Pim {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        knobs: Knobs,
    },
    /// Run one named check; exits 1 if it fails.
    Check {
        /// One of: zero-pim, fong, numirr, 0pim-cover, reciproc, gr-iso,
        /// grind, irr, identities, coker.
        target: String,
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        knobs: Knobs,
        /// Highest weight for the Hamiltonian targets (grind, irr).
        #[arg(long, default_value_t = 0)]
        lambda: u32,
    },
    /// Run the whole corpus sweep; exits 1 on any failing row.
    Sweep {
        #[command(flatten)]
        knobs: Knobs,
        /// Include wall-clock timings (breaks byte-for-byte reproducibility).
        #[arg(long)]
        timing: bool,
    },
    /// Re-emit a report-row stream (JSON lines in; sorted json or csv out).
    Report {
        /// Row stream path; stdin when omitted or `-`.
        file: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: String,
        /// Keep timing fields instead of stripping them.
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// Print the catalog entry names.
    List,
    /// Emit a catalog algebra as a canonical document on stdout.
    Build {
        name: String,
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Linear form: inline ("0,1,2" or "[0,1,2]") or a file path.
        #[arg(long)]
        chi: Option<String>,
        /// Embed the entry's adapted depth-one filtration.
        #[arg(long)]
        with_filtration: bool,
    },
}

/// Where the algebra comes from: a catalog name or a document.
#[derive(Args)]
struct Source {
    /// Catalog entry name to build the algebra from.
    #[arg(long)]
    catalog: Option<String>,
    /// Algebra document path; used when --catalog is absent (`-` = stdin).
    file: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Linear form: inline ("0,1,2" or "[0,1,2]") or a file path.
    #[arg(long)]
    chi: Option<String>,
}

#[derive(Args)]
struct Knobs {
    /// Budget for enumerations and linear-algebra searches.
    #[arg(long, default_value_t = 1 << 20)]
    cap: u64,
    /// Seed for the randomized (but certified) search paths.
    #[arg(long, default_value_t = 2026)]
    seed: u64,
    /// Output format: json (JSON lines) or csv.
    #[arg(long, default_value = "json")]
    format: String,
}

struct Loaded {
    case: String,
    algebra: Arc<LieAlgebra>,
    chi: Vec<Scalar>,
    filtration: Option<RestrictedFiltration>,
}

/// Entry point used by `main`; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Validate { file } => validate(&file),
        Cmd::Catalog { cmd } => match cmd {
            CatalogCmd::List => {
                for name in catalog::names() {
                    println!("{name}");
                }
                Ok(0)
            }
            CatalogCmd::Build {
                name,
                p,
                k,
                chi,
                with_filtration,
            } => catalog_build(&name, p, k, chi.as_deref(), with_filtration),
        },
        Cmd::Torus { src, knobs } => {
            let loaded = load(&src)?;
            let cert = torus::max_torus(&loaded.algebra, knobs.cap.max(torus::DEFAULT_ENUM_CAP))?;
            let row = row_for(
                "torus",
                &loaded,
                json!({
                    "mt": cert.mt_value,
                    "exhaustive": cert.exhaustive,
                    "dim_torus": cert.space.dim(),
                    "elements_scanned": cert.elements_scanned,
                }),
                true,
            );
            emit_rows(vec![row], &knobs.format)
        }
        Cmd::Simples { src, knobs } => {
            let loaded = load(&src)?;
            let inv = pim::simples(&loaded.algebra, &loaded.chi, knobs.cap, knobs.seed)?;
            let row = row_for(
                "simples",
                &loaded,
                json!({
                    "count": inv.entries.len(),
                    "dims": inv.simple_dims(),
                    "split": inv.is_split(),
                    "split_field_degree": inv.field_degree,
                    "wedderburn": inv.wedderburn_ok(),
                }),
                inv.wedderburn_ok(),
            );
            emit_rows(vec![row], &knobs.format)
        }
        Cmd::Pim { src, knobs } => {
            let loaded = load(&src)?;
            let cert = torus::max_torus(&loaded.algebra, torus::DEFAULT_ENUM_CAP)?;
            let rep = pim::check_maximal_0pim(&loaded.algebra, &cert, knobs.cap, knobs.seed)?;
            let pass = rep.routes_agree;
            let row = row_for("pim", &loaded, serde_json::to_value(&rep)?, pass);
            emit_rows(vec![row], &knobs.format)
        }
        Cmd::Check {
            target,
            src,
            knobs,
            lambda,
        } => check(&target, &src, &knobs, lambda),
        Cmd::Sweep { knobs, timing } => {
            let rows = sweep::run_sweep(knobs.cap, knobs.seed);
            let format: Format = knobs.format.parse()?;
            print!("{}", report::emit(&rows, format, timing)?);
            Ok(if rows.iter().all(|r| r.pass) { 0 } else { 1 })
        }
        Cmd::Report {
            file,
            format,
            timing,
        } => {
            let bytes = read_input(&file)?;
            let text = String::from_utf8(bytes)
                .map_err(|_| Error::Parse("row stream is not UTF-8".into()))?;
            let mut rows = Vec::new();
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let row: ReportRow = serde_json::from_str(line)
                    .map_err(|e| Error::Parse(format!("row {}: {e}", i + 1)))?;
                rows.push(row);
            }
            report::sort_rows(&mut rows);
            let format: Format = format.parse()?;
            print!("{}", report::emit(&rows, format, timing)?);
            Ok(0)
        }
    }
}

fn validate(file: &Option<PathBuf>) -> Result<i32> {
    let bytes = read_input(file)?;
    match doc::parse(&bytes)? {
        Document::Algebra(d) => {
            let alg = d.to_algebra()?;
            let f = alg.field();
            if let Some(chi) = d.chi_scalars(f)? {
                if chi.len() != alg.dim() {
                    return Err(Error::Character(format!(
                        "form has {} coefficients for a dimension-{} algebra",
                        chi.len(),
                        alg.dim()
                    )));
                }
            }
            d.filtration_of(&alg)?;
            println!(
                "{}",
                json!({
                    "kind": "algebra",
                    "p": f.p(),
                    "field_degree": f.k(),
                    "dim": alg.dim(),
                    "ok": true,
                })
            );
        }
        Document::Module(d) => {
            let canon = d.canonicalize()?;
            println!(
                "{}",
                json!({
                    "kind": "module",
                    "p": canon.p,
                    "field_degree": canon.field_degree,
                    "algebra_dim": canon.algebra_dim,
                    "dim": canon.dim,
                    "ok": true,
                })
            );
        }
    }
    Ok(0)
}

fn catalog_build(
    name: &str,
    p: u32,
    k: u32,
    chi: Option<&str>,
    with_filtration: bool,
) -> Result<i32> {
    let entry = catalog::build(name, p, k)?;
    let alg = &entry.algebra;
    let chi = chi
        .map(|spec| parse_chi(spec, alg.field(), alg.dim()))
        .transpose()?;
    let levels = if with_filtration {
        let degrees = entry
            .degrees
            .clone()
            .unwrap_or_else(|| vec![-1; alg.dim()]);
        Some(doc::filtration_levels_from_degrees(&degrees))
    } else {
        None
    };
    let d = AlgebraDocument::from_algebra(alg, chi.as_deref(), levels.as_deref());
    let bytes = d.canonical_bytes()?;
    print!("{}", String::from_utf8_lossy(&bytes));
    Ok(0)
}

fn check(target: &str, src: &Source, knobs: &Knobs, lambda: u32) -> Result<i32> {
    let cap = knobs.cap;
    let seed = knobs.seed;
    let rows = match target {
        "zero-pim" => {
            let loaded = load(src)?;
            let cert = torus::max_torus(&loaded.algebra, torus::DEFAULT_ENUM_CAP)?;
            let rep = pim::check_maximal_0pim(&loaded.algebra, &cert, cap, seed)?;
            let pass = rep.maximal_0pim && rep.routes_agree;
            vec![row_for("zero-pim", &loaded, serde_json::to_value(&rep)?, pass)]
        }
        "fong" => {
            let loaded = load(src)?;
            let inv = pim::simples(&loaded.algebra, &loaded.chi, cap, seed)?;
            let walg = inv.algebra.clone();
            let mut pairs = 0usize;
            let mut all = true;
            for ideal in sweep::p_ideal_candidates(&walg) {
                for e in &inv.entries {
                    let kills = ideal.basis().rows_iter().all(|r| {
                        e.module
                            .action_of(r)
                            .rows_iter()
                            .all(|row| row.iter().all(|&c| c == 0))
                    });
                    if !kills {
                        continue;
                    }
                    let rep = pim::verify_fong(&walg, &ideal, &e.module, cap, seed)?;
                    pairs += 1;
                    all &= rep.factorizes;
                }
            }
            vec![row_for(
                "fong",
                &loaded,
                json!({ "pairs": pairs, "all_factorize": all }),
                all,
            )]
        }
        "numirr" => {
            let loaded = load(src)?;
            let rep = pim::verify_numirr(&loaded.algebra, &loaded.chi, cap, seed)?;
            let pass = rep.within_bound;
            vec![row_for("numirr", &loaded, serde_json::to_value(&rep)?, pass)]
        }
        "0pim-cover" => {
            let loaded = load(src)?;
            let inv = pim::simples(&loaded.algebra, &loaded.chi, cap, seed)?;
            let cert = torus::max_torus(&loaded.algebra, torus::DEFAULT_ENUM_CAP)?;
            let trows = sweep::torus_rows_for(&inv, &cert)?;
            let mut covers = 0usize;
            let mut all = true;
            for idx in 0..inv.entries.len() {
                if inv.entries[idx].module.dim() != 1 {
                    continue;
                }
                let rep = pim::verify_induced_cover(&inv, &trows, idx, cap, seed)?;
                covers += 1;
                all &= rep.ok;
            }
            vec![row_for(
                "0pim-cover",
                &loaded,
                json!({ "covers": covers, "all_ok": all }),
                all,
            )]
        }
        "reciproc" => {
            let loaded = load(src)?;
            let inv = pim::simples(&loaded.algebra, &loaded.chi, cap, seed)?;
            let mut all = true;
            let mut reports = Vec::new();
            for e in &inv.entries {
                let rep = pim::verify_reciproc(&loaded.algebra, &e.module, cap, seed)?;
                all &= rep.accounting_ok && rep.contains_trivial_cover;
                reports.push(serde_json::to_value(&rep)?);
            }
            vec![row_for(
                "reciproc",
                &loaded,
                json!({ "simples": reports }),
                all,
            )]
        }
        "gr-iso" => {
            let loaded = load(src)?;
            let filt = loaded.filtration.as_ref().ok_or_else(|| {
                Error::Precondition(
                    "gr-iso needs a filtration: embed one in the document or use a catalog entry"
                        .into(),
                )
            })?;
            let g = filt::verify_gr_iso(&loaded.algebra, filt, cap)?;
            let a = filt::augmentation_containments(&loaded.algebra, filt, cap)?;
            let pass = g.ok && a.ok;
            vec![row_for(
                "gr-iso",
                &loaded,
                json!({
                    "gr": serde_json::to_value(&g)?,
                    "aug": serde_json::to_value(&a)?,
                }),
                pass,
            )]
        }
        "grind" => match hamiltonian_source(src)? {
            Some((p, k)) => {
                let rep = filt::hamiltonian_grind(p, k, lambda, cap, seed, false)?;
                let pass = rep.ok;
                vec![hamiltonian_row("grind", p, k, serde_json::to_value(&rep)?, pass)]
            }
            None => {
                let loaded = load(src)?;
                let filt = loaded.filtration.as_ref().ok_or_else(|| {
                    Error::Precondition("grind needs a filtration".into())
                })?;
                let zero = vec![0 as Scalar; filt.space_at(0).dim()];
                let rep = filt::weight_grind(&loaded.algebra, filt, &zero, cap, seed, false)?;
                let pass = rep.ok;
                vec![row_for("grind", &loaded, serde_json::to_value(&rep)?, pass)]
            }
        },
        "irr" => {
            let (p, k) = hamiltonian_source(src)?.ok_or_else(|| {
                Error::Precondition(
                    "irr is defined for the Hamiltonian family; use --catalog hamiltonian-nongraded"
                        .into(),
                )
            })?;
            let rep = filt::hamiltonian_grind(p, k, lambda, cap, seed, true)?;
            let pass = rep.original_irreducible == Some(true);
            vec![hamiltonian_row(
                "irr",
                p,
                k,
                json!({
                    "dim": rep.dim_induced,
                    "irreducible": rep.original_irreducible,
                    "grind": serde_json::to_value(&rep)?,
                }),
                pass,
            )]
        }
        "identities" => {
            let rep = hamiltonian::verify_identities(src.p, src.k)?;
            let pass = rep.ok;
            vec![hamiltonian_row(
                "identities",
                src.p,
                src.k,
                serde_json::to_value(&rep)?,
                pass,
            )]
        }
        "coker" => {
            let rep = hamiltonian::coker_degrees(src.p, src.k)?;
            let pass = rep.ok;
            vec![hamiltonian_row(
                "coker",
                src.p,
                src.k,
                serde_json::to_value(&rep)?,
                pass,
            )]
        }
        other => {
            return Err(Error::Parse(format!(
                "unknown check target `{other}` (expected zero-pim, fong, numirr, 0pim-cover, \
                 reciproc, gr-iso, grind, irr, identities, or coker)"
            )))
        }
    };
    let pass = rows.iter().all(|r| r.pass);
    let format: Format = knobs.format.parse()?;
    print!("{}", report::emit(&rows, format, false)?);
    Ok(if pass { 0 } else { 1 })
}

/// The Hamiltonian targets accept either no source or the nongraded catalog
/// entry; anything else is rejected.
fn hamiltonian_source(src: &Source) -> Result<Option<(u32, u32)>> {
    match (&src.catalog, &src.file) {
        (Some(name), _) if name == "hamiltonian-nongraded" => Ok(Some((src.p, src.k))),
        (None, None) => Ok(Some((src.p, src.k))),
        _ => Ok(None),
    }
}

fn hamiltonian_row(check: &str, p: u32, k: u32, values: serde_json::Value, pass: bool) -> ReportRow {
    ReportRow::new(
        check,
        &format!("hamiltonian-nongraded@{p}.{k}"),
        p,
        k,
        &[],
        values,
        pass,
    )
}

fn row_for(check: &str, loaded: &Loaded, values: serde_json::Value, pass: bool) -> ReportRow {
    let f = loaded.algebra.field();
    ReportRow::new(check, &loaded.case, f.p(), f.k(), &loaded.chi, values, pass)
}

fn emit_rows(rows: Vec<ReportRow>, format: &str) -> Result<i32> {
    let format: Format = format.parse()?;
    print!("{}", report::emit(&rows, format, false)?);
    Ok(if rows.iter().all(|r| r.pass) { 0 } else { 1 })
}

fn load(src: &Source) -> Result<Loaded> {
    if let Some(name) = &src.catalog {
        let entry = catalog::build(name, src.p, src.k)?;
        let alg = entry.algebra.clone();
        let chi = match &src.chi {
            Some(spec) => parse_chi(spec, alg.field(), alg.dim())?,
            None => vec![0; alg.dim()],
        };
        let degrees = entry
            .degrees
            .clone()
            .unwrap_or_else(|| vec![-1; alg.dim()]);
        let filtration = Some(RestrictedFiltration::from_degrees(&alg, &degrees)?);
        return Ok(Loaded {
            case: format!("{name}@{}.{}", src.p, src.k),
            algebra: alg,
            chi,
            filtration,
        });
    }
    let bytes = read_input(&src.file)?;
    let d = doc::parse_algebra(&bytes)?;
    let alg = d.to_algebra()?;
    let chi = match &src.chi {
        Some(spec) => parse_chi(spec, alg.field(), alg.dim())?,
        None => d
            .chi_scalars(alg.field())?
            .unwrap_or_else(|| vec![0; alg.dim()]),
    };
    if chi.len() != alg.dim() {
        return Err(Error::Character(format!(
            "form has {} coefficients for a dimension-{} algebra",
            chi.len(),
            alg.dim()
        )));
    }
    let filtration = d.filtration_of(&alg)?;
    let case = match &src.file {
        Some(p) if p.as_os_str() != "-" => p
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "document".into()),
        _ => "stdin".into(),
    };
    Ok(Loaded {
        case,
        algebra: alg,
        chi,
        filtration,
    })
}

/// Reads a file argument, with `-` or absence meaning stdin.
fn read_input(file: &Option<PathBuf>) -> Result<Vec<u8>> {
    match file {
        Some(p) if p.as_os_str() != "-" => Ok(std::fs::read(p)?),
        _ => {
            let mut buf = Vec::new();
            std::io::stdin().read_to_end(&mut buf)?;
            Ok(buf)
        }
    }
}

/// A linear form given inline ("0,1,2" or "[0,1,2]") or as a path to a JSON
/// list.  Entries are reduced mod p over prime fields; over extension fields
/// they must already be canonical scalar indices.
fn parse_chi(spec: &str, f: &Arc<Field>, dim: usize) -> Result<Vec<Scalar>> {
    let text = if std::path::Path::new(spec).exists() {
        std::fs::read_to_string(spec)?
    } else {
        spec.to_string()
    };
    let trimmed = text.trim();
    let ints: Vec<i64> = if trimmed.starts_with('[') {
        serde_json::from_str(trimmed)
            .map_err(|e| Error::Parse(format!("linear form: {e}")))?
    } else {
        trimmed
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("linear form entry `{t}`")))
            })
            .collect::<Result<Vec<i64>>>()?
    };
    if ints.len() != dim {
        return Err(Error::Character(format!(
            "form has {} coefficients for a dimension-{} algebra",
            ints.len(),
            dim
        )));
    }
    ints.iter()
        .map(|&v| {
            if f.is_prime_field() {
                Ok(f.from_int(v))
            } else {
                let raw = u64::try_from(v)
                    .map_err(|_| Error::Parse(format!("scalar index {v} is negative")))?;
                f.check_scalar(raw)
            }
        })
        .collect()
}
