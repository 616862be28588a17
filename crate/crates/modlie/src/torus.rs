//! Toral elements, tori, and the maximal torus dimension by exhaustive
//! search.
//!
//! An element t is toral when t^[p] = t.  A span of pairwise-commuting toral
//! elements is automatically a torus: it is abelian, the p-map acts
//! semilinearly on it, and every element x = sum c_i t_i satisfies
//! x^[p^k] = sum c_i^{p^k} t_i = x over the field with p^k elements, so x
//! lies in the p-subalgebra generated by x^[p].  The searches below
//! enumerate toral elements outright and maximize the span dimension over
//! commuting subsets with a branch-and-bound walk, so a certificate with the
//! exhaustive flag set is a complete desk-scale proof for the field at hand.
//! Values are always reported per field degree; nothing here appeals to an
//! algebraic closure.

use std::sync::Arc;

use serde_json::json;

use crate::field::{field, Scalar};
use crate::lie::LieAlgebra;
use crate::matrix::{OnlineEchelon, Subspace};
use crate::{Error, Result};

pub const DEFAULT_ENUM_CAP: u64 = 2_000_000;

/// A certified torus: the span, the commuting toral set that spans it, and
/// how the search ran.
#[derive(Clone, Debug)]
pub struct TorusCertificate {
    pub space: Subspace,
    pub toral_basis: Vec<Vec<Scalar>>,
    pub mt_value: usize,
    /// True when every element of the ambient space was inspected, so no
    /// commuting toral set spans anything larger over this field.
    pub exhaustive: bool,
    pub field_degree: u32,
    pub elements_scanned: u64,
}

impl TorusCertificate {
    /// Re-run the defining checks: basis elements toral, pairwise
    /// commuting, spanning the recorded space.
    pub fn revalidate(&self, alg: &Arc<LieAlgebra>) -> bool {
        let n = alg.dim();
        let f = alg.field().clone();
        for t in &self.toral_basis {
            if alg.p_power(t) != *t {
                return false;
            }
        }
        for (i, a) in self.toral_basis.iter().enumerate() {
            for b in &self.toral_basis[i + 1..] {
                if alg.bracket(a, b).iter().any(|&c| c != 0) {
                    return false;
                }
            }
        }
        let span = Subspace::from_rows(f, n, &self.toral_basis);
        span == self.space && span.dim() == self.mt_value
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "mt_value": self.mt_value,
            "field_degree": self.field_degree,
            "exhaustive": self.exhaustive,
            "elements_scanned": self.elements_scanned,
            "toral_basis": self.toral_basis,
            "space_basis": (0..self.space.dim())
                .map(|r| self.space.basis().row_vec(r))
                .collect::<Vec<_>>(),
        })
    }
}

pub fn is_toral(alg: &Arc<LieAlgebra>, x: &[Scalar]) -> bool {
    alg.p_power(x) == x
}

/// x lies in the p-subalgebra generated by x^[p].  That subalgebra is the
/// span of the iterated p-powers x^[p], x^[p^2], ...; the span is complete
/// as soon as the next iterate is dependent, because the p-map carries the
/// span into itself from that point on.
pub fn is_semisimple_element(alg: &Arc<LieAlgebra>, x: &[Scalar]) -> bool {
    let f = alg.field().clone();
    let n = alg.dim();
    let mut ech = OnlineEchelon::new(f.clone(), n);
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut cur = alg.p_power(x);
    while ech.insert(&cur) {
        rows.push(cur.clone());
        cur = alg.p_power(&cur);
    }
    Subspace::from_rows(f, n, &rows).contains(x)
}

fn enumerate_space(space: &Subspace, q: u64, cap: u64) -> Result<Vec<Vec<Scalar>>> {
    let d = space.dim();
    let n = space.basis().cols();
    let mut total: u64 = 1;
    for _ in 0..d {
        total = total
            .checked_mul(q)
            .filter(|&t| t <= cap)
            .ok_or(Error::ResourceCap {
                what: "element enumeration".into(),
                needed: u64::MAX,
                cap,
            })?;
    }
    if total > cap {
        return Err(Error::ResourceCap {
            what: "element enumeration".into(),
            needed: total,
            cap,
        });
    }
    let f = space.basis().field().clone();
    let mut out = Vec::with_capacity(total as usize);
    let mut odo = vec![0u64; d];
    loop {
        let mut v = vec![0 as Scalar; n];
        for (t, &c) in odo.iter().enumerate() {
            if c != 0 {
                let row = space.basis().row_vec(t);
                for (x, &b) in v.iter_mut().zip(&row) {
                    *x = f.add(*x, f.mul(c as Scalar, b));
                }
            }
        }
        out.push(v);
        let mut t = 0;
        loop {
            if t == d {
                return Ok(out);
            }
            odo[t] += 1;
            if odo[t] < q {
                break;
            }
            odo[t] = 0;
            t += 1;
        }
    }
}

/// All toral elements of the whole algebra (including 0).
pub fn toral_elements(alg: &Arc<LieAlgebra>, cap: u64) -> Result<Vec<Vec<Scalar>>> {
    toral_elements_in(alg, &Subspace::whole(alg.field().clone(), alg.dim()), cap)
}

/// All toral elements inside a subspace.
pub fn toral_elements_in(
    alg: &Arc<LieAlgebra>,
    space: &Subspace,
    cap: u64,
) -> Result<Vec<Vec<Scalar>>> {
    let q = alg.field().q() as u64;
    Ok(enumerate_space(space, q, cap)?
        .into_iter()
        .filter(|x| is_toral(alg, x))
        .collect())
}

/// Torus test for a subspace: abelian, closed under the p-map, and every
/// element semisimple.  Complete (the whole subspace is enumerated).
pub fn is_torus(alg: &Arc<LieAlgebra>, space: &Subspace, cap: u64) -> Result<bool> {
    let basis: Vec<Vec<Scalar>> = (0..space.dim())
        .map(|r| space.basis().row_vec(r))
        .collect();
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            if alg.bracket(a, b).iter().any(|&c| c != 0) {
                return Ok(false);
            }
        }
    }
    // Abelian, so the p-map is additive here and closure on a basis is
    // closure everywhere.
    for a in &basis {
        if !space.contains(&alg.p_power(a)) {
            return Ok(false);
        }
    }
    let q = alg.field().q() as u64;
    for x in enumerate_space(space, q, cap)? {
        if x.iter().all(|&c| c == 0) {
            continue;
        }
        if !is_semisimple_element(alg, &x) {
            return Ok(false);
        }
    }
    Ok(true)
}

struct Search<'a> {
    alg: &'a Arc<LieAlgebra>,
    torals: &'a [Vec<Scalar>],
    commutes: Vec<Vec<bool>>,
    best_dim: usize,
    best_set: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, chosen: &mut Vec<usize>, span: &Subspace, candidates: &[usize]) {
        if span.dim() > self.best_dim {
            self.best_dim = span.dim();
            self.best_set = chosen.clone();
        }
        if candidates.is_empty() {
            return;
        }
        // Upper bound for this subtree: the span of everything still
        // admissible.
        let f = self.alg.field().clone();
        let n = self.alg.dim();
        let mut rows: Vec<Vec<Scalar>> = (0..span.dim())
            .map(|r| span.basis().row_vec(r))
            .collect();
        for &c in candidates {
            rows.push(self.torals[c].clone());
        }
        if Subspace::from_rows(f.clone(), n, &rows).dim() <= self.best_dim {
            return;
        }
        for (pos, &ci) in candidates.iter().enumerate() {
            if span.contains(&self.torals[ci]) {
                continue;
            }
            let line = Subspace::from_rows(f.clone(), n, &[self.torals[ci].clone()]);
            let bigger = span.sum(&line);
            let rest: Vec<usize> = candidates[pos + 1..]
                .iter()
                .copied()
                .filter(|&cj| self.commutes[ci][cj])
                .collect();
            chosen.push(ci);
            self.run(chosen, &bigger, &rest);
            chosen.pop();
        }
    }
}

/// Maximal commuting-toral-span search over the whole algebra.  The
/// certificate is exhaustive for the algebra's own field.
pub fn max_torus(alg: &Arc<LieAlgebra>, cap: u64) -> Result<TorusCertificate> {
    let scanned = {
        let q = alg.field().q() as u64;
        let mut t: u64 = 1;
        for _ in 0..alg.dim() {
            t = t.saturating_mul(q);
        }
        t
    };
    let torals = toral_elements(alg, cap)?;
    let mut cert = max_span_of(alg, &torals)?;
    cert.exhaustive = true;
    cert.elements_scanned = scanned;
    Ok(cert)
}

/// Same search restricted to the toral elements of a subspace; the result
/// is a lower-bound certificate (exhaustive = false).
pub fn max_torus_in(
    alg: &Arc<LieAlgebra>,
    space: &Subspace,
    cap: u64,
) -> Result<TorusCertificate> {
    let torals = toral_elements_in(alg, space, cap)?;
    let mut cert = max_span_of(alg, &torals)?;
    cert.elements_scanned = torals.len() as u64;
    Ok(cert)
}

/// Extend scalars to the field with p^k elements and run the exhaustive
/// search there.  Returns the extended algebra along with the certificate.
pub fn max_torus_over(
    alg: &Arc<LieAlgebra>,
    k: u32,
    cap: u64,
) -> Result<(TorusCertificate, Arc<LieAlgebra>)> {
    let p = alg.field().p();
    let ext = alg.extend_scalars(&field(p, k)?)?;
    let cert = max_torus(&ext, cap)?;
    Ok((cert, ext))
}

fn max_span_of(alg: &Arc<LieAlgebra>, torals: &[Vec<Scalar>]) -> Result<TorusCertificate> {
    let f = alg.field().clone();
    let n = alg.dim();
    let nonzero: Vec<Vec<Scalar>> = torals
        .iter()
        .filter(|t| t.iter().any(|&c| c != 0))
        .cloned()
        .collect();
    let m = nonzero.len();
    let mut commutes = vec![vec![false; m]; m];
    for i in 0..m {
        commutes[i][i] = true;
        for j in (i + 1)..m {
            let ok = alg.bracket(&nonzero[i], &nonzero[j]).iter().all(|&c| c == 0);
            commutes[i][j] = ok;
            commutes[j][i] = ok;
        }
    }
    let mut search = Search {
        alg,
        torals: &nonzero,
        commutes,
        best_dim: 0,
        best_set: Vec::new(),
    };
    let all: Vec<usize> = (0..m).collect();
    search.run(&mut Vec::new(), &Subspace::zero(f.clone(), n), &all);
    let basis: Vec<Vec<Scalar>> = search.best_set.iter().map(|&i| nonzero[i].clone()).collect();
    let space = Subspace::from_rows(f, n, &basis);
    Ok(TorusCertificate {
        mt_value: space.dim(),
        space,
        toral_basis: basis,
        exhaustive: false,
        field_degree: alg.field().k(),
        elements_scanned: 0,
    })
}

/// Outcome of a toral-basis search for a given torus, possibly after
/// extending scalars.
pub struct ToralBasisReport {
    /// Field degree at which a toral basis was found.
    pub field_degree: u32,
    /// The (possibly extended) algebra the basis lives in.
    pub algebra: Arc<LieAlgebra>,
    /// The torus carried into that algebra.
    pub space: Subspace,
    pub basis: Vec<Vec<Scalar>>,
}

/// Find toral elements spanning the given torus, escalating the field
/// degree (k, 2k, 3k, 4k) until one exists.  Fails naming the last degree
/// tried.  The subspace must be a torus for the search to make sense; this
/// is not re-checked here.
pub fn toral_basis_of(
    alg: &Arc<LieAlgebra>,
    space: &Subspace,
    cap: u64,
) -> Result<ToralBasisReport> {
    let base_k = alg.field().k();
    let p = alg.field().p();
    for mult in 1..=4u32 {
        let kk = base_k * mult;
        let (ext, ext_space) = if mult == 1 {
            (alg.clone(), space.clone())
        } else {
            let big = field(p, kk)?;
            let table = alg.field().embedding_into(&big)?;
            let ext = alg.extend_scalars(&big)?;
            let rows: Vec<Vec<Scalar>> = (0..space.dim())
                .map(|r| {
                    space
                        .basis()
                        .row_vec(r)
                        .iter()
                        .map(|&c| table[c as usize])
                        .collect()
                })
                .collect();
            (ext, Subspace::from_rows(big, alg.dim(), &rows))
        };
        let torals = toral_elements_in(&ext, &ext_space, cap)?;
        let mut ech = OnlineEchelon::new(ext.field().clone(), ext.dim());
        let mut basis = Vec::new();
        for t in &torals {
            if ech.insert(t) {
                basis.push(t.clone());
            }
        }
        if basis.len() == ext_space.dim() {
            return Ok(ToralBasisReport {
                field_degree: kk,
                algebra: ext,
                space: ext_space,
                basis,
            });
        }
    }
    Err(Error::Undecided(format!(
        "no toral basis found up to field degree {}",
        base_k * 4
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, solvable, zassenhaus};
    use crate::lie::AlgebraData;

    #[test]
    fn toral_elements_of_basic_algebras() {
        // Abelian with everything toral over the prime field.
        let a = solvable::abelian(3, 1, 2, "toral").unwrap();
        assert_eq!(toral_elements(&a, 1 << 20).unwrap().len(), 9);
        // Nilpotent p-map: only zero.
        let b = solvable::abelian(3, 1, 2, "jordan").unwrap();
        let t = toral_elements(&b, 1 << 20).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t[0].iter().all(|&c| c == 0));
    }

    #[test]
    fn mt_of_tori_and_nilpotent_algebras() {
        let a = solvable::abelian(3, 1, 3, "toral").unwrap();
        let cert = max_torus(&a, 1 << 20).unwrap();
        assert_eq!(cert.mt_value, 3);
        assert!(cert.exhaustive);
        assert!(cert.revalidate(&a));
        assert!(is_torus(&a, &cert.space, 1 << 20).unwrap());

        let b = solvable::abelian(5, 1, 2, "jordan").unwrap();
        assert_eq!(max_torus(&b, 1 << 20).unwrap().mt_value, 0);

        let h = solvable::heisenberg(3, 1, "toralz").unwrap();
        let cert = max_torus(&h, 1 << 20).unwrap();
        assert_eq!(cert.mt_value, 1);
        assert!(cert.revalidate(&h));
    }

    #[test]
    fn borel_has_a_one_dimensional_maximal_torus_at_both_degrees() {
        let b = solvable::borel_sl2(3, 1).unwrap();
        let c1 = max_torus(&b, 1 << 20).unwrap();
        assert_eq!(c1.mt_value, 1);
        assert!(c1.exhaustive && c1.field_degree == 1);
        let (c2, ext) = max_torus_over(&b, 2, 1 << 20).unwrap();
        assert_eq!(c2.mt_value, 1);
        assert!(c2.exhaustive && c2.field_degree == 2);
        assert!(c2.revalidate(&ext));
    }

    #[test]
    fn zassenhaus_envelope_has_mt_two_over_both_field_degrees() {
        let z = zassenhaus::zassenhaus(1).unwrap();
        let cert = max_torus(&z.algebra, 1 << 20).unwrap();
        assert_eq!(cert.mt_value, 2);
        assert!(cert.exhaustive);
        assert_eq!(cert.elements_scanned, 32);
        // The designated toral pair spans a maximal torus.
        let [tp, tm] = z.toral_pair();
        let span = Subspace::from_rows(z.algebra.field().clone(), 5, &[tp, tm]);
        assert_eq!(span.dim(), 2);
        assert!(is_torus(&z.algebra, &span, 1 << 20).unwrap());
        let (c4, _) = max_torus_over(&z.algebra, 2, 1 << 20).unwrap();
        assert_eq!(c4.mt_value, 2);
        assert_eq!(c4.elements_scanned, 1024);
    }

    #[test]
    fn mt_is_monotone_under_field_extension_on_the_corpus() {
        for name in [
            "nonabelian2",
            "heisenberg-zero",
            "heisenberg-pcentral",
            "heisenberg-toralz",
            "borel-sl2",
            "abelian-mixed-3",
        ] {
            let e = catalog::build(name, 3, 1).unwrap();
            let small = max_torus(&e.algebra, 1 << 21).unwrap();
            let (big, _) = max_torus_over(&e.algebra, 2, 1 << 21).unwrap();
            assert!(
                small.mt_value <= big.mt_value,
                "{name}: {} vs {}",
                small.mt_value,
                big.mt_value
            );
        }
    }

    #[test]
    fn anisotropic_line_needs_a_quadratic_extension_for_a_toral_basis() {
        // One-dimensional torus spanned by x with x^[3] = 2x.  Over F_3 no
        // scalar multiple is toral (c^{-2} never equals 2), so the basis
        // search must escalate to F_9.
        let f = field(3, 1).unwrap();
        let a = AlgebraData {
            field: f.clone(),
            names: vec!["x".into()],
            brackets: vec![],
            pmap: vec![vec![(0, 2)]],
        }
        .build()
        .unwrap();
        let whole = Subspace::whole(f, 1);
        assert!(is_torus(&a, &whole, 1 << 10).unwrap());
        assert!(toral_elements(&a, 1 << 10)
            .unwrap()
            .iter()
            .all(|t| t.iter().all(|&c| c == 0)));
        let report = toral_basis_of(&a, &whole, 1 << 10).unwrap();
        assert_eq!(report.field_degree, 2);
        assert_eq!(report.basis.len(), 1);
        assert!(is_toral(&report.algebra, &report.basis[0]));
    }

    #[test]
    fn zero_subalgebra_is_a_torus_and_certificates_serialize() {
        let a = solvable::abelian(2, 1, 2, "toral").unwrap();
        let zero = Subspace::zero(a.field().clone(), 2);
        assert!(is_torus(&a, &zero, 16).unwrap());
        let cert = max_torus(&a, 1 << 10).unwrap();
        let v = cert.to_json();
        assert_eq!(v["mt_value"], 2);
        assert_eq!(v["exhaustive"], true);
    }
}
