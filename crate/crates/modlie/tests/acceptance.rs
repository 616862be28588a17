//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line (visible under `--nocapture`) and asserting its result.
//!
//! The criteria are serialized through a mutex so that the recorded wall
//! times reflect each suite alone.

use std::sync::{Mutex, OnceLock};
use std::time::Instant;

use modlie::catalog::hamiltonian;
use modlie::catalog::zassenhaus;
use modlie::field::Scalar;
use modlie::filt;
use modlie::matrix::{Mat, OnlineEchelon, Subspace};
use modlie::module::{self, Module};
use modlie::pim;
use modlie::report::{self, Format, ReportRow};
use modlie::sweep;
use modlie::torus;

static GATE: Mutex<()> = Mutex::new(());
const CAP: u64 = 1 << 20;
const SEED: u64 = 2026;

fn run(name: &str, budget_secs: Option<u64>, body: impl FnOnce() -> Result<String, String>) {
    let _lock = GATE.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let outcome = body();
    let secs = start.elapsed().as_secs_f64();
    match &outcome {
        Ok(detail) => println!("acceptance {name}: PASS ({secs:.2}s) {detail}"),
        Err(e) => println!("acceptance {name}: FAIL ({secs:.2}s) {e}"),
    }
    if let Err(e) = outcome {
        panic!("{name}: {e}");
    }
    if let Some(b) = budget_secs {
        assert!(
            secs < b as f64,
            "{name} exceeded its {b}s budget ({secs:.2}s)"
        );
    }
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

fn sweep_rows() -> &'static Vec<ReportRow> {
    static ROWS: OnceLock<Vec<ReportRow>> = OnceLock::new();
    ROWS.get_or_init(|| sweep::run_sweep(CAP, SEED))
}

/// Closure of a vector under the module action, as a subspace.
fn spin(m: &Module, v: &[Scalar]) -> Subspace {
    let f = m.algebra().field().clone();
    let mut ech = OnlineEchelon::new(f.clone(), m.dim());
    let mut work = Vec::new();
    if ech.insert(v) {
        work.push(v.to_vec());
    }
    while let Some(w) = work.pop() {
        for a in m.action_matrices() {
            let img = a.apply_col(&w);
            if ech.insert(&img) {
                work.push(img);
            }
        }
    }
    Subspace::from_rows(f, m.dim(), ech.rows())
}

/// Every submodule, by closing the cyclic submodules under sums.
fn all_submodules(m: &Module) -> Result<Vec<Subspace>, String> {
    let f = m.algebra().field().clone();
    let whole = Subspace::whole(f.clone(), m.dim());
    let vectors = whole.enumerate(1 << 16).map_err(|e| e.to_string())?;
    let mut subs: Vec<Subspace> = vec![Subspace::zero(f.clone(), m.dim())];
    for v in vectors {
        if v.iter().all(|&c| c == 0) {
            continue;
        }
        let s = spin(m, &v);
        if !subs.contains(&s) {
            subs.push(s);
        }
    }
    loop {
        let mut grew = false;
        let snapshot = subs.clone();
        for a in &snapshot {
            for b in &snapshot {
                let s = a.sum(b);
                if !subs.contains(&s) {
                    subs.push(s);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    Ok(subs)
}

#[test]
fn criterion_1_characteristic_two_example() {
    run("1 characteristic-two example", Some(5), || {
        let z = zassenhaus::zassenhaus(1).map_err(|e| e.to_string())?;
        let alg = z.algebra.clone();
        ensure!(alg.data().validate().passed(), "structure validation failed");
        ensure!(alg.dim() == 5, "dim = {}", alg.dim());
        let chi0 = vec![0 as Scalar; 5];

        // The derived subalgebra has dimension 3 and is simple: every
        // nonzero vector generates it as an ideal (checked exhaustively).
        let derived = z.derived_space();
        ensure!(derived.dim() == 3, "derived dim = {}", derived.dim());
        let dbasis: Vec<Vec<Scalar>> = derived.basis().rows_iter().map(|r| r.to_vec()).collect();
        for v in derived.enumerate(1 << 10).map_err(|e| e.to_string())? {
            if v.iter().all(|&c| c == 0) {
                continue;
            }
            let f = alg.field().clone();
            let mut ech = OnlineEchelon::new(f, 5);
            let mut work = vec![v.clone()];
            ech.insert(&v);
            while let Some(w) = work.pop() {
                for d in &dbasis {
                    let br = alg.bracket(d, &w);
                    if ech.insert(&br) {
                        work.push(br);
                    }
                }
            }
            ensure!(ech.dim() == 3, "ideal generated by {v:?} has dim {}", ech.dim());
        }

        // Distinguished toral pair.
        for t in z.toral_pair() {
            ensure!(alg.p_power(&t) == t, "pair element {t:?} is not toral");
        }

        // MT = 2, exhaustively over both fields.
        let mut cert1 = None;
        for k in [1u32, 2] {
            let zk = zassenhaus::zassenhaus(k).map_err(|e| e.to_string())?;
            let cert = torus::max_torus(&zk.algebra, torus::DEFAULT_ENUM_CAP)
                .map_err(|e| e.to_string())?;
            ensure!(
                cert.mt_value == 2 && cert.exhaustive,
                "MT over degree {k}: {} (exhaustive {})",
                cert.mt_value,
                cert.exhaustive
            );
            if k == 1 {
                cert1 = Some(cert);
            }
        }
        let cert = cert1.unwrap();

        // Exactly two simple modules, of dimensions 1 and 3.
        let inv = pim::simples(&alg, &chi0, CAP, SEED).map_err(|e| e.to_string())?;
        ensure!(
            inv.simple_dims() == vec![1, 3],
            "simple dims {:?}",
            inv.simple_dims()
        );

        // The torus has no fixed vectors on the derived subalgebra.
        let f = alg.field().clone();
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for d in &dbasis {
            let mut row = Vec::new();
            for t in cert.space.basis().rows_iter() {
                row.extend(alg.bracket(&t.to_vec(), d));
            }
            rows.push(row);
        }
        let m = Mat::from_rows(f.clone(), rows[0].len(), &rows);
        ensure!(
            m.transpose().kernel().rows() == 0,
            "derived subalgebra has torus-fixed vectors"
        );

        // dim P(triv) = 8 by both routes, and dim P of the 3-dim simple is 8.
        let rep = pim::check_maximal_0pim(&alg, &cert, CAP, SEED).map_err(|e| e.to_string())?;
        ensure!(
            rep.maximal_0pim && rep.routes_agree && rep.dim_p_trivial == 8,
            "0-PIM report: maximal {} dim {}",
            rep.maximal_0pim,
            rep.dim_p_trivial
        );
        let cover = rep.induced_cover.as_ref().ok_or("missing induced-cover report")?;
        ensure!(cover.ok, "induced cover rejected");
        let s3 = inv
            .entries
            .iter()
            .position(|e| e.module.dim() == 3)
            .ok_or("no 3-dimensional simple")?;
        ensure!(
            inv.entries[s3].dim_p == 8,
            "dim P(S3) = {}",
            inv.entries[s3].dim_p
        );

        // Induction of the trivial module from the torus: dimension 8,
        // indecomposable (no nontrivial idempotent endomorphism over F_2),
        // and isomorphic to P(triv).
        let ctx = alg.subalgebra(&cert.space).map_err(|e| e.to_string())?;
        let triv_t = Module::trivial(ctx.algebra.clone());
        let ind = module::induce(&alg, &ctx, &triv_t, &chi0, CAP).map_err(|e| e.to_string())?;
        ensure!(ind.module.dim() == 8, "induced dim {}", ind.module.dim());
        let ends = module::hom_space(&ind.module, &ind.module, CAP).map_err(|e| e.to_string())?;
        ensure!(ends.len() <= 16, "endomorphism space too large to enumerate");
        let id = Mat::identity(f.clone(), ind.module.dim());
        let zero = Mat::zero(f.clone(), ind.module.dim(), ind.module.dim());
        for mask in 0u32..(1 << ends.len()) {
            let mut e = zero.clone();
            for (i, b) in ends.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    e = e.add(b);
                }
            }
            if e.mul(&e) == e {
                ensure!(
                    e == zero || e == id,
                    "nontrivial idempotent endomorphism found"
                );
            }
        }
        let pf = inv
            .projective_module(inv.trivial_index().ok_or("no trivial simple")?, CAP)
            .map_err(|e| e.to_string())?;
        ensure!(
            module::is_isomorphic_small(&ind.module, &pf, 1 << 16).map_err(|e| e.to_string())?,
            "induced module is not isomorphic to P(triv)"
        );

        // Baby Verma modules from the Borel: unique maximal submodule for
        // both one-dimensional weights.
        let ctx_b = alg.subalgebra(&z.borel()).map_err(|e| e.to_string())?;
        let chib = vec![0 as Scalar; ctx_b.algebra.dim()];
        let weights = Module::one_dim_modules(&ctx_b.algebra, &chib, CAP).map_err(|e| e.to_string())?;
        ensure!(weights.len() == 2, "{} Borel weights", weights.len());
        for (li, v) in weights.iter().enumerate() {
            let zmod = module::induce(&alg, &ctx_b, v, &chi0, CAP).map_err(|e| e.to_string())?;
            ensure!(zmod.module.dim() == 4, "Z({li}) has dim {}", zmod.module.dim());
            let subs = all_submodules(&zmod.module)?;
            let proper: Vec<&Subspace> =
                subs.iter().filter(|s| s.dim() < zmod.module.dim()).collect();
            let maximal: Vec<&&Subspace> = proper
                .iter()
                .filter(|s| {
                    !proper
                        .iter()
                        .any(|t| t.dim() > s.dim() && s.is_subspace_of(t))
                })
                .collect();
            ensure!(
                maximal.len() == 1,
                "Z({li}) has {} maximal submodules among {} submodules",
                maximal.len(),
                subs.len()
            );
        }

        Ok(format!(
            "dim 5, MT 2 over both fields, dim P(triv) = dim P(S3) = 8, {} submodule lattices checked",
            weights.len()
        ))
    });
}

#[test]
fn criterion_2_solvable_sweep() {
    run("2 solvable sweep", Some(120), || {
        let rows = sweep_rows();
        let cases = sweep::corpus();
        ensure!(cases.len() >= 10, "{} corpus cases", cases.len());
        let mut ps: Vec<u32> = cases.iter().map(|c| c.p).collect();
        ps.sort_unstable();
        ps.dedup();
        ensure!(ps == vec![2, 3, 5], "primes {ps:?}");

        for r in rows.iter() {
            ensure!(r.pass, "failing row {} / {} ({})", r.case, r.check, r.values);
        }
        for c in &cases {
            let id = c.id();
            for check in ["validate", "zero-pim", "ext", "gr-iso", "aug"] {
                ensure!(
                    rows.iter().any(|r| r.case == id && r.check == check),
                    "missing {check} row for {id}"
                );
            }
            for check in ["simples", "0pim-cover", "fong", "numirr", "upbd", "wedderburn"] {
                let n = rows
                    .iter()
                    .filter(|r| r.case == id && r.check == check)
                    .count();
                ensure!(n == 3, "{id} has {n} {check} rows");
            }
            // Three distinct forms, including zero.
            let mut digests: Vec<&str> = rows
                .iter()
                .filter(|r| r.case == id && r.check == "simples")
                .map(|r| r.chi_digest.as_str())
                .collect();
            digests.sort_unstable();
            digests.dedup();
            ensure!(digests.len() == 3, "{id} swept {} distinct forms", digests.len());
            let alg = modlie::catalog::build(&c.name, c.p, c.k)
                .map_err(|e| e.to_string())?
                .algebra;
            let zero_digest = report::chi_digest(&vec![0 as Scalar; alg.dim()]);
            ensure!(
                digests.contains(&zero_digest.as_str()),
                "{id} did not sweep the zero form"
            );
        }
        let fong_pairs: u64 = rows
            .iter()
            .filter(|r| r.check == "fong")
            .map(|r| r.values["pairs"].as_u64().unwrap_or(0))
            .sum();
        ensure!(fong_pairs > 0, "no factorization pairs exercised");
        Ok(format!(
            "{} rows over {} cases, {} factorization pairs",
            rows.len(),
            cases.len(),
            fong_pairs
        ))
    });
}

#[test]
fn criterion_3_identity_suite() {
    run("3 identity suite", Some(10), || {
        let mut checked = 0usize;
        for p in [3u32, 5] {
            let rep = hamiltonian::verify_identities(p, 1).map_err(|e| e.to_string())?;
            ensure!(rep.ok, "identity failures at p={p}: {:?}", rep.failures);
            ensure!(
                rep.dim == (p as usize).pow(2) + 1,
                "dim {} at p={p}",
                rep.dim
            );
            ensure!(
                rep.exceptional_monomials == vec![(0, 1), (1, 0)],
                "exceptional set {:?} at p={p}",
                rep.exceptional_monomials
            );
            let ck = hamiltonian::coker_degrees(p, 1).map_err(|e| e.to_string())?;
            ensure!(ck.ok, "cokernel degrees {:?} at p={p}", ck.degrees);
            ensure!(
                ck.degree_set == vec![p as i64 - 2, 2 * p as i64 - 4],
                "degree set {:?} at p={p}",
                ck.degree_set
            );
            checked += rep.graded_checked + rep.filtered_checked;
        }
        Ok(format!("{checked} identities checked at p = 3, 5"))
    });
}

#[test]
fn criterion_4_filtration_and_graded_suite() {
    run("4 filtration and graded suite", Some(120), || {
        let expected_level_dims: [(u32, Vec<(i64, usize)>); 2] = [
            (3, vec![(-1, 10), (0, 8), (1, 5), (2, 1)]),
            (
                5,
                vec![
                    (-1, 26),
                    (0, 24),
                    (1, 21),
                    (2, 17),
                    (3, 12),
                    (4, 6),
                    (5, 3),
                    (6, 1),
                ],
            ),
        ];
        for (p, levels) in &expected_level_dims {
            let fh = hamiltonian::filtered(*p, 1).map_err(|e| e.to_string())?;
            let fl = filt::hamiltonian_filtration(&fh).map_err(|e| e.to_string())?;
            let pp = *p as i64;
            ensure!(
                fl.height() == 2 * pp - 4,
                "height {} at p={p}",
                fl.height()
            );
            ensure!(
                fl.level_dims() == *levels,
                "level dims {:?} at p={p}",
                fl.level_dims()
            );
            ensure!(
                fl.space_at(0).dim() < fl.space_at(-1).dim(),
                "filtration is not of depth one at p={p}"
            );
            let gh = hamiltonian::graded(*p, 1).map_err(|e| e.to_string())?;
            let psi = filt::verify_psi(&fh, &gh).map_err(|e| e.to_string())?;
            ensure!(psi.ok, "relabelling map fails at p={p}");
        }

        // Graded-envelope comparison and augmentation containments on the
        // full corpus come from the sweep rows.
        let rows = sweep_rows();
        for check in ["gr-iso", "aug"] {
            let n = rows.iter().filter(|r| r.check == check).count();
            ensure!(
                n == sweep::corpus().len(),
                "{n} {check} rows for {} cases",
                sweep::corpus().len()
            );
            ensure!(
                rows.iter().filter(|r| r.check == check).all(|r| r.pass),
                "failing {check} row"
            );
        }

        // Graded induction: Hamiltonian p=5 for all five weights, plus the
        // two small solvable filtered cases from the sweep.
        for lambda in 0..5u32 {
            let rep = filt::hamiltonian_grind(5, 1, lambda, CAP, SEED, false)
                .map_err(|e| e.to_string())?;
            ensure!(
                rep.ok && rep.dims_match && rep.iota_bijective && rep.iota_intertwines,
                "graded induction fails at lambda={lambda}"
            );
            ensure!(
                rep.dim_induced == 25 * (lambda as usize + 1),
                "dim {} at lambda={lambda}",
                rep.dim_induced
            );
        }
        let grind_rows: Vec<&ReportRow> = rows.iter().filter(|r| r.check == "grind").collect();
        ensure!(
            grind_rows.len() >= 2 && grind_rows.iter().all(|r| r.pass),
            "{} solvable graded-induction rows",
            grind_rows.len()
        );
        Ok("heights, components, relabelling, corpus envelopes, 5 + 2 graded inductions".into())
    });
}

#[test]
fn criterion_5_irreducibility_at_p_five() {
    run("5 irreducibility at p=5", Some(300), || {
        for lambda in [2u32, 3, 4] {
            for k in [1u32, 2] {
                let rep = filt::hamiltonian_grind(5, k, lambda, CAP, SEED, true)
                    .map_err(|e| e.to_string())?;
                ensure!(
                    rep.dim_induced == 25 * (lambda as usize + 1),
                    "dim {} at lambda={lambda} k={k}",
                    rep.dim_induced
                );
                ensure!(
                    rep.original_irreducible == Some(true),
                    "module not certified irreducible at lambda={lambda} k={k}: {:?}",
                    rep.original_irreducible
                );
                ensure!(rep.ok, "graded-induction report fails at lambda={lambda} k={k}");
            }
            let rp = filt::verify_reps1(5, 1, lambda, CAP).map_err(|e| e.to_string())?;
            ensure!(
                rp.ok && rp.bijective && rp.intertwines,
                "restriction map fails at lambda={lambda}"
            );
        }
        Ok("dims 75, 100, 125 certified over degree-1 and degree-2 fields".into())
    });
}

#[test]
fn criterion_6_property_suites() {
    run("6 property suites", None, || {
        let rows = sweep_rows();
        let count = |check: &str| rows.iter().filter(|r| r.check == check).count();
        let all_pass =
            |check: &str| rows.iter().filter(|r| r.check == check).all(|r| r.pass);

        ensure!(
            count("wedderburn") == 3 * sweep::corpus().len() && all_pass("wedderburn"),
            "wedderburn rows incomplete"
        );
        ensure!(
            count("upbd") == 3 * sweep::corpus().len() && all_pass("upbd"),
            "projective bound rows incomplete"
        );
        ensure!(
            count("frobenius") >= 3 && all_pass("frobenius"),
            "reciprocity-dimension rows incomplete"
        );
        ensure!(
            count("transitivity") >= 2 && all_pass("transitivity"),
            "transitivity rows incomplete"
        );
        ensure!(
            count("reciproc") >= 3 && all_pass("reciproc"),
            "tensor-reciprocity rows incomplete"
        );

        // Byte-for-byte determinism of a re-run with the same seed.
        let again = sweep::run_sweep(CAP, SEED);
        let b1 = report::emit(rows, Format::Json, false).map_err(|e| e.to_string())?;
        let b2 = report::emit(&again, Format::Json, false).map_err(|e| e.to_string())?;
        ensure!(b1 == b2, "re-run output differs");
        Ok(format!(
            "{} frobenius, {} transitivity, {} reciprocity rows; rerun identical ({} bytes)",
            count("frobenius"),
            count("transitivity"),
            count("reciproc"),
            b1.len()
        ))
    });
}
