//! Corpus sweep: every verification check over a bank of small solvable
//! algebras.
//!
//! The corpus is a fixed list of catalog algebras over p ∈ {2, 3, 5}, each
//! small enough that its reduced enveloping algebra has dimension at most
//! 243.  Each algebra is swept with three linear forms (zero and two
//! nonzero ones) and produces one [`ReportRow`] per check: 0-PIM
//! maximality, induced covers of one-dimensional simples, projective
//! factorization through p-ideals, simple-count and projective-dimension
//! bounds, Wedderburn accounting, graded-envelope comparison, and
//! augmentation-ideal containments.  Standalone property rows cover
//! Frobenius reciprocity, induction transitivity, and tensor reciprocity.
//!
//! Cases run in parallel; the merged rows are sorted into case order, so
//! the output is a deterministic function of the seed.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use crate::catalog;
use crate::field::Scalar;
use crate::filt::{self, RestrictedFiltration};
use crate::lie::LieAlgebra;
use crate::matrix::Subspace;
use crate::module::{self, Module};
use crate::pim::{self, SimpleInventory};
use crate::report::{self, ReportRow};
use crate::torus::{self, TorusCertificate};
use crate::{Error, Result};

/// One corpus member: a catalog name with field parameters.
#[derive(Debug, Clone)]
pub struct SweepCase {
    pub name: String,
    pub p: u32,
    pub k: u32,
}

impl SweepCase {
    fn new(name: &str, p: u32) -> SweepCase {
        SweepCase {
            name: name.into(),
            p,
            k: 1,
        }
    }

    /// Stable case identifier used as the sort key for merged output.
    pub fn id(&self) -> String {
        format!("{}@{}.{}", self.name, self.p, self.k)
    }
}

/// The solvable corpus: at least ten algebras over p ∈ {2, 3, 5}, all with
/// p^dim ≤ 243.
pub fn corpus() -> Vec<SweepCase> {
    vec![
        SweepCase::new("nonabelian2", 2),
        SweepCase::new("nonabelian2", 3),
        SweepCase::new("nonabelian2", 5),
        SweepCase::new("heisenberg-zero", 2),
        SweepCase::new("heisenberg-zero", 3),
        SweepCase::new("heisenberg-zero", 5),
        SweepCase::new("heisenberg-pcentral", 3),
        SweepCase::new("heisenberg-toralz", 3),
        SweepCase::new("borel-sl2", 3),
        SweepCase::new("borel-sl2", 5),
        SweepCase::new("abelian-zero-3", 2),
        SweepCase::new("abelian-toral-2", 3),
        SweepCase::new("abelian-jordan-2", 3),
        SweepCase::new("abelian-mixed-2", 5),
    ]
}

/// Three linear forms per algebra: zero, then the base-q digit vectors of 1
/// and 2 written into the trailing coordinates.  The corpus algebras list
/// toral basis elements first, and a nonzero value on a toral element needs
/// a degree-p splitting field, which at p = 5 exceeds the escalation range;
/// filling from the tail keeps every case decidable.
pub fn chi_values(alg: &Arc<LieAlgebra>) -> Vec<Vec<Scalar>> {
    let q = alg.field().q() as u64;
    let n = alg.dim();
    (0..3u64)
        .map(|mut t| {
            let mut chi = vec![0 as Scalar; n];
            let mut i = 0usize;
            while t > 0 && i < n {
                chi[n - 1 - i] = (t % q) as Scalar;
                t /= q;
                i += 1;
            }
            chi
        })
        .collect()
}

/// Proper nonzero p-ideals worth testing: p-closures of the center, of the
/// derived series members, and of single basis lines.
pub fn p_ideal_candidates(alg: &Arc<LieAlgebra>) -> Vec<Subspace> {
    let n = alg.dim();
    let f = alg.field().clone();
    let mut seeds: Vec<Subspace> = vec![alg.center()];
    seeds.extend(alg.derived_series().into_iter().skip(1));
    for i in 0..n {
        let mut e = vec![0 as Scalar; n];
        e[i] = 1;
        seeds.push(Subspace::from_rows(f.clone(), n, &[e]));
    }
    let mut cands: Vec<Subspace> = Vec::new();
    for s in seeds {
        let c = alg.p_closure(&s);
        if c.dim() > 0 && c.dim() < n && alg.is_p_ideal(&c) && !cands.contains(&c) {
            cands.push(c);
        }
    }
    cands
}

pub fn torus_rows_for(
    inv: &SimpleInventory,
    base_cert: &TorusCertificate,
) -> Result<Vec<Vec<Scalar>>> {
    let cert_space = if inv.escalated {
        torus::max_torus(&inv.algebra, torus::DEFAULT_ENUM_CAP)?.space
    } else {
        base_cert.space.clone()
    };
    Ok(cert_space.basis().rows_iter().map(|r| r.to_vec()).collect())
}

/// Filtration degrees for a corpus case: the catalog's adapted degrees when
/// recorded, otherwise the degenerate chain concentrated in degree -1.
fn case_degrees(entry: &catalog::CatalogEntry) -> Vec<i64> {
    entry
        .degrees
        .clone()
        .unwrap_or_else(|| vec![-1; entry.algebra.dim()])
}

/// All check rows for one corpus case.
pub fn case_rows(case: &SweepCase, cap: u64, seed: u64) -> Result<Vec<ReportRow>> {
    let entry = catalog::build(&case.name, case.p, case.k)?;
    let alg = entry.algebra.clone();
    let n = alg.dim();
    let id = case.id();
    let chi0 = vec![0 as Scalar; n];
    let mut rows = Vec::new();

    let start = Instant::now();
    let vr = alg.data().validate();
    rows.push(
        ReportRow::new(
            "validate",
            &id,
            case.p,
            case.k,
            &chi0,
            json!({ "dim": n, "summary": vr.summary() }),
            vr.passed(),
        )
        .timed(start),
    );

    let cert = torus::max_torus(&alg, torus::DEFAULT_ENUM_CAP)?;

    let start = Instant::now();
    let zp = pim::check_maximal_0pim(&alg, &cert, cap, seed)?;
    rows.push(
        ReportRow::new(
            "zero-pim",
            &id,
            case.p,
            case.k,
            &chi0,
            serde_json::to_value(&zp).map_err(|e| Error::Parse(e.to_string()))?,
            zp.maximal_0pim && zp.routes_agree,
        )
        .timed(start),
    );

    if let Some(ideal) = p_ideal_candidates(&alg).into_iter().next() {
        let start = Instant::now();
        let ext = pim::verify_ext(&alg, &ideal, cap, seed)?;
        rows.push(
            ReportRow::new(
                "ext",
                &id,
                case.p,
                case.k,
                &chi0,
                json!({
                    "ideal_dim": ideal.dim(),
                    "whole": ext.whole.maximal_0pim,
                    "ideal": ext.ideal.maximal_0pim,
                    "quotient": ext.quotient.maximal_0pim,
                }),
                ext.biconditional_ok,
            )
            .timed(start),
        );
    }

    for chi in chi_values(&alg) {
        let start = Instant::now();
        let inv = pim::simples(&alg, &chi, cap, seed)?;
        rows.push(
            ReportRow::new(
                "simples",
                &id,
                case.p,
                case.k,
                &chi,
                json!({
                    "count": inv.entries.len(),
                    "dims": inv.simple_dims(),
                    "escalated": inv.escalated,
                    "field_degree": inv.field_degree,
                }),
                inv.is_split(),
            )
            .timed(start),
        );

        let start = Instant::now();
        rows.push(
            ReportRow::new(
                "wedderburn",
                &id,
                case.p,
                case.k,
                &chi,
                json!({
                    "sum": inv
                        .entries
                        .iter()
                        .map(|e| e.module.dim() * e.dim_p)
                        .sum::<usize>(),
                    "dim_env": inv.dim_a,
                }),
                inv.wedderburn_ok(),
            )
            .timed(start),
        );

        let start = Instant::now();
        let trows = torus_rows_for(&inv, &cert)?;
        let mut cover_reports = Vec::new();
        let mut cover_ok = true;
        for (idx, e) in inv.entries.iter().enumerate() {
            if e.module.dim() != 1 {
                continue;
            }
            let rep = pim::verify_induced_cover(&inv, &trows, idx, cap, seed)?;
            cover_ok &= rep.ok;
            cover_reports.push(serde_json::to_value(&rep).map_err(|e| Error::Parse(e.to_string()))?);
        }
        rows.push(
            ReportRow::new(
                "0pim-cover",
                &id,
                case.p,
                case.k,
                &chi,
                json!({ "one_dimensional_simples": cover_reports.len(), "reports": cover_reports }),
                cover_ok,
            )
            .timed(start),
        );

        let start = Instant::now();
        let walg = inv.algebra.clone();
        let mut fong_reports = Vec::new();
        let mut fong_ok = true;
        for ideal in p_ideal_candidates(&walg) {
            for e in &inv.entries {
                let kills = ideal
                    .basis()
                    .rows_iter()
                    .all(|row| e.module.action_of(row).is_zero());
                if !kills {
                    continue;
                }
                let rep = pim::verify_fong(&walg, &ideal, &e.module, cap, seed)?;
                fong_ok &= rep.factorizes;
                fong_reports.push(json!({
                    "ideal_dim": ideal.dim(),
                    "dim_s": e.module.dim(),
                    "report": serde_json::to_value(&rep).map_err(|e| Error::Parse(e.to_string()))?,
                }));
            }
        }
        rows.push(
            ReportRow::new(
                "fong",
                &id,
                case.p,
                case.k,
                &chi,
                json!({ "pairs": fong_reports.len(), "reports": fong_reports }),
                fong_ok,
            )
            .timed(start),
        );

        let start = Instant::now();
        let ni = pim::verify_numirr(&alg, &chi, cap, seed)?;
        rows.push(
            ReportRow::new(
                "numirr",
                &id,
                case.p,
                case.k,
                &chi,
                serde_json::to_value(&ni).map_err(|e| Error::Parse(e.to_string()))?,
                ni.within_bound,
            )
            .timed(start),
        );

        let start = Instant::now();
        let mt = torus::max_torus(&inv.algebra, torus::DEFAULT_ENUM_CAP)?.mt_value;
        let ub = pim::verify_upbd(&inv, mt)?;
        rows.push(
            ReportRow::new(
                "upbd",
                &id,
                case.p,
                case.k,
                &chi,
                serde_json::to_value(&ub).map_err(|e| Error::Parse(e.to_string()))?,
                ub.ok,
            )
            .timed(start),
        );
    }

    let degrees = case_degrees(&entry);
    let filt = RestrictedFiltration::from_degrees(&alg, &degrees)?;

    let start = Instant::now();
    let gi = filt::verify_gr_iso(&alg, &filt, cap)?;
    rows.push(
        ReportRow::new(
            "gr-iso",
            &id,
            case.p,
            case.k,
            &chi0,
            serde_json::to_value(&gi).map_err(|e| Error::Parse(e.to_string()))?,
            gi.ok,
        )
        .timed(start),
    );

    let start = Instant::now();
    let aug = filt::augmentation_containments(&alg, &filt, cap)?;
    rows.push(
        ReportRow::new(
            "aug",
            &id,
            case.p,
            case.k,
            &chi0,
            serde_json::to_value(&aug).map_err(|e| Error::Parse(e.to_string()))?,
            aug.ok,
        )
        .timed(start),
    );

    // Graded induction on the two designated filtered solvable cases (the
    // level-zero subalgebras are one-dimensional, so the weight is a single
    // scalar and must be nil-compatible, i.e. zero).
    if (case.name == "nonabelian2" || case.name == "heisenberg-zero") && case.p == 3 {
        let start = Instant::now();
        let ctx_dim = filt.space_at(0).dim();
        let gr = filt::weight_grind(&alg, &filt, &vec![0; ctx_dim], cap, seed, true)?;
        rows.push(
            ReportRow::new(
                "grind",
                &id,
                case.p,
                case.k,
                &chi0,
                serde_json::to_value(&gr).map_err(|e| Error::Parse(e.to_string()))?,
                gr.ok,
            )
            .timed(start),
        );
    }

    Ok(rows)
}

/// Frobenius-reciprocity rows: dim Hom_L(Ind_H^L V, S) equals
/// dim Hom_H(V, S|_H) for every (H, V, S) in the fixed triple bank.
pub fn frobenius_rows(cap: u64, seed: u64) -> Result<Vec<ReportRow>> {
    // (catalog name, p, subalgebra coordinates, chi)
    let bank: Vec<(&str, u32, Vec<usize>, Vec<Scalar>)> = vec![
        ("nonabelian2", 3, vec![0], vec![0, 0]),
        ("heisenberg-zero", 3, vec![1, 2], vec![0, 0, 1]),
        ("borel-sl2", 5, vec![1], vec![0, 1]),
    ];
    let mut rows = Vec::new();
    for (name, p, coords, chi) in bank {
        let start = Instant::now();
        let alg = catalog::build(name, p, 1)?.algebra;
        let n = alg.dim();
        let f = alg.field().clone();
        let hrows: Vec<Vec<Scalar>> = coords
            .iter()
            .map(|&i| {
                let mut e = vec![0 as Scalar; n];
                e[i] = 1;
                e
            })
            .collect();
        let ctx = alg.subalgebra(&Subspace::from_rows(f.clone(), n, &hrows))?;
        let chi_h: Vec<Scalar> = coords.iter().map(|&i| chi[i]).collect();
        let vs = Module::one_dim_modules(&ctx.algebra, &chi_h, cap)?;
        let inv = pim::simples(&alg, &chi, cap, seed)?;
        if inv.escalated {
            return Err(Error::Undecided(
                "reciprocity bank expects split base-field cases".into(),
            ));
        }
        let mut checked = 0usize;
        let mut ok = true;
        for v in &vs {
            let ind = module::induce(&alg, &ctx, v, &chi, cap)?;
            for e in &inv.entries {
                let lhs = module::hom_space(&ind.module, &e.module, cap)?.len();
                let sres = e.module.restrict(&ctx);
                let rhs = module::hom_space(v, &sres, cap)?.len();
                ok &= lhs == rhs;
                checked += 1;
            }
        }
        rows.push(
            ReportRow::new(
                "frobenius",
                format!("{name}@{p}.1"),
                p,
                1,
                &chi,
                json!({ "subalgebra_dim": coords.len(), "pairs": checked }),
                ok && checked > 0,
            )
            .timed(start),
        );
    }
    Ok(rows)
}

/// Induction-transitivity rows: Ind_H^L(Ind_K^H V) ≅ Ind_K^L V along a
/// chain K ⊆ H ⊆ L, checked by an explicit isomorphism search.
pub fn transitivity_rows(cap: u64) -> Result<Vec<ReportRow>> {
    // (catalog name, p, inner coordinates, middle coordinates, chi)
    let bank: Vec<(&str, u32, Vec<usize>, Vec<usize>, Vec<Scalar>)> = vec![
        ("heisenberg-zero", 3, vec![2], vec![1, 2], vec![0, 0, 1]),
        ("abelian-zero-3", 2, vec![2], vec![1, 2], vec![0, 1, 0]),
    ];
    let mut rows = Vec::new();
    for (name, p, inner, middle, chi) in bank {
        let start = Instant::now();
        let alg = catalog::build(name, p, 1)?.algebra;
        let n = alg.dim();
        let f = alg.field().clone();
        let unit_rows = |coords: &[usize]| -> Vec<Vec<Scalar>> {
            coords
                .iter()
                .map(|&i| {
                    let mut e = vec![0 as Scalar; n];
                    e[i] = 1;
                    e
                })
                .collect()
        };
        let ctx_h = alg.subalgebra(&Subspace::from_rows(f.clone(), n, &unit_rows(&middle)))?;
        let ctx_k = alg.subalgebra(&Subspace::from_rows(f.clone(), n, &unit_rows(&inner)))?;
        // K inside H, in H's coordinates.
        let hd = ctx_h.algebra.dim();
        let k_in_h_rows: Vec<Vec<Scalar>> = unit_rows(&inner)
            .iter()
            .map(|r| {
                ctx_h
                    .space
                    .coordinates(r)
                    .expect("inner subalgebra lies inside the middle one")
            })
            .collect();
        let ctx_kh = ctx_h
            .algebra
            .subalgebra(&Subspace::from_rows(f.clone(), hd, &k_in_h_rows))?;

        let chi_h: Vec<Scalar> = (0..hd)
            .map(|j| {
                let row = ctx_h.inclusion.row_vec(j);
                let mut val = 0 as Scalar;
                for (i, &c) in row.iter().enumerate() {
                    val = f.add(val, f.mul(c, chi[i]));
                }
                val
            })
            .collect();
        let chi_k: Vec<Scalar> = (0..ctx_k.algebra.dim())
            .map(|j| {
                let row = ctx_k.inclusion.row_vec(j);
                let mut val = 0 as Scalar;
                for (i, &c) in row.iter().enumerate() {
                    val = f.add(val, f.mul(c, chi[i]));
                }
                val
            })
            .collect();

        let vs = Module::one_dim_modules(&ctx_k.algebra, &chi_k, cap)?;
        let mut ok = !vs.is_empty();
        let mut checked = 0usize;
        for v in &vs {
            // The same module over K viewed inside H.
            let v_in_h = Module::new(
                ctx_kh.algebra.clone(),
                chi_k.clone(),
                v.action_matrices().to_vec(),
            )?;
            let step = module::induce(&ctx_h.algebra, &ctx_kh, &v_in_h, &chi_h, cap)?;
            let two = module::induce(&alg, &ctx_h, &step.module, &chi, cap)?;
            let one = module::induce(&alg, &ctx_k, v, &chi, cap)?;
            ok &= two.module.dim() == one.module.dim();
            ok &= module::is_isomorphic_small(&two.module, &one.module, cap)?;
            checked += 1;
        }
        rows.push(
            ReportRow::new(
                "transitivity",
                format!("{name}@{p}.1"),
                p,
                1,
                &chi,
                json!({ "modules": checked }),
                ok,
            )
            .timed(start),
        );
    }
    Ok(rows)
}

/// Tensor-reciprocity rows: P(S) ⊗ S* contains the projective cover of the
/// trivial module, for every simple of the designated instances.
pub fn reciproc_rows(cap: u64, seed: u64) -> Result<Vec<ReportRow>> {
    let bank: Vec<(&str, u32)> = vec![("nonabelian2", 3), ("heisenberg-zero", 2)];
    let mut rows = Vec::new();
    for (name, p) in bank {
        let alg = catalog::build(name, p, 1)?.algebra;
        let chi0 = vec![0 as Scalar; alg.dim()];
        let inv = pim::simples(&alg, &chi0, cap, seed)?;
        for (idx, e) in inv.entries.iter().enumerate() {
            let start = Instant::now();
            let rep = pim::verify_reciproc(&alg, &e.module, cap, seed)?;
            rows.push(
                ReportRow::new(
                    "reciproc",
                    format!("{name}@{p}.1#{idx}"),
                    p,
                    1,
                    &chi0,
                    serde_json::to_value(&rep).map_err(|e| Error::Parse(e.to_string()))?,
                    rep.contains_trivial_cover && rep.accounting_ok,
                )
                .timed(start),
            );
        }
    }
    Ok(rows)
}

/// Runs the whole sweep: corpus cases in parallel plus the property banks,
/// merged and sorted into deterministic order.  A case-level error becomes
/// a failing row rather than aborting the sweep.
pub fn run_sweep(cap: u64, seed: u64) -> Vec<ReportRow> {
    let cases = corpus();
    let mut rows: Vec<ReportRow> = cases
        .par_iter()
        .flat_map(|c| match case_rows(c, cap, seed) {
            Ok(r) => r,
            Err(e) => vec![ReportRow::new(
                "error",
                c.id(),
                c.p,
                c.k,
                &[],
                json!({ "message": e.to_string() }),
                false,
            )],
        })
        .collect();
    let extra = [
        frobenius_rows(cap, seed),
        transitivity_rows(cap),
        reciproc_rows(cap, seed),
    ];
    for part in extra {
        match part {
            Ok(r) => rows.extend(r),
            Err(e) => rows.push(ReportRow::new(
                "error",
                "properties",
                0,
                0,
                &[],
                json!({ "message": e.to_string() }),
                false,
            )),
        }
    }
    report::sort_rows(&mut rows);
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: u64 = 1 << 20;

    #[test]
    fn corpus_is_large_enough_and_stays_inside_the_size_budget() {
        let cases = corpus();
        assert!(cases.len() >= 10);
        let mut ps: Vec<u32> = cases.iter().map(|c| c.p).collect();
        ps.sort_unstable();
        ps.dedup();
        assert_eq!(ps, vec![2, 3, 5]);
        for c in &cases {
            let alg = catalog::build(&c.name, c.p, c.k).unwrap().algebra;
            assert!(alg.is_solvable(), "{} is not solvable", c.id());
            assert!(
                (c.p as u64).pow(alg.dim() as u32) <= 243,
                "{} exceeds the envelope budget",
                c.id()
            );
        }
    }

    #[test]
    fn chi_values_are_distinct_and_include_zero() {
        for c in corpus() {
            let alg = catalog::build(&c.name, c.p, c.k).unwrap().algebra;
            let chis = chi_values(&alg);
            assert_eq!(chis.len(), 3);
            assert!(chis[0].iter().all(|&x| x == 0));
            assert_ne!(chis[0], chis[1]);
            assert_ne!(chis[0], chis[2]);
            assert_ne!(chis[1], chis[2]);
        }
    }

    #[test]
    fn one_case_produces_passing_rows_for_every_check() {
        let case = SweepCase::new("nonabelian2", 3);
        let rows = case_rows(&case, CAP, 17).unwrap();
        let mut checks: Vec<&str> = rows.iter().map(|r| r.check.as_str()).collect();
        checks.sort_unstable();
        checks.dedup();
        for want in [
            "0pim-cover",
            "aug",
            "ext",
            "fong",
            "gr-iso",
            "grind",
            "numirr",
            "simples",
            "upbd",
            "validate",
            "wedderburn",
            "zero-pim",
        ] {
            assert!(checks.contains(&want), "missing {want}: {checks:?}");
        }
        for r in &rows {
            assert!(r.pass, "row failed: {} / {}: {}", r.case, r.check, r.values);
        }
        // Three forms per form-dependent check.
        assert_eq!(rows.iter().filter(|r| r.check == "simples").count(), 3);
        assert_eq!(rows.iter().filter(|r| r.check == "fong").count(), 3);
    }

    #[test]
    fn property_banks_pass() {
        for r in frobenius_rows(CAP, 23).unwrap() {
            assert!(r.pass, "{}: {}", r.case, r.values);
        }
        for r in transitivity_rows(CAP).unwrap() {
            assert!(r.pass, "{}: {}", r.case, r.values);
        }
        let rows = reciproc_rows(CAP, 23).unwrap();
        assert!(rows.len() >= 3);
        for r in &rows {
            assert!(r.pass, "{}: {}", r.case, r.values);
        }
    }
}
