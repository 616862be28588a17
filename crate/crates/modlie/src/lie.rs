//! Finite-dimensional restricted Lie algebras given by structure constants.
//!
//! An algebra is fixed by a basis e_0..e_{n-1}, brackets [e_i, e_j] for
//! i < j (the rest follow by antisymmetry; characteristic 2 needs [x,x] = 0,
//! which the triangular encoding grants for free), and the p-map on basis
//! vectors.  Construction validates the Jacobi identity on all basis triples
//! and the compatibility ad(e_i^[p]) = (ad e_i)^p; nothing else in the crate
//! accepts unvalidated data.
//!
//! The p-map on non-basis elements is not a linear extension.  It is defined
//! operationally as the associative p-th power in the restricted enveloping
//! algebra and lives in `pbw::p_power`.

use crate::field::{Field, Scalar};
use crate::matrix::{vec_add_scaled, Mat, Subspace};
use crate::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// Raw structure constants, not yet trusted.
#[derive(Clone)]
pub struct AlgebraData {
    pub field: Arc<Field>,
    pub names: Vec<String>,
    /// Entries (i, j, value) with i < j; omitted pairs commute.
    pub brackets: Vec<(usize, usize, Vec<(usize, Scalar)>)>,
    /// pmap[i] = e_i^[p] as a sparse vector.
    pub pmap: Vec<Vec<(usize, Scalar)>>,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ValidationReport {
    pub dim: usize,
    pub structural: Vec<String>,
    pub jacobi_failures: Vec<(usize, usize, usize)>,
    pub pcompat_failures: Vec<usize>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.structural.is_empty()
            && self.jacobi_failures.is_empty()
            && self.pcompat_failures.is_empty()
    }

    pub fn summary(&self) -> String {
        if self.passed() {
            return format!("valid restricted Lie algebra of dim {}", self.dim);
        }
        let mut parts = Vec::new();
        if !self.structural.is_empty() {
            parts.push(format!("structural: {}", self.structural.join("; ")));
        }
        if !self.jacobi_failures.is_empty() {
            parts.push(format!(
                "Jacobi fails at triples {:?}",
                &self.jacobi_failures[..self.jacobi_failures.len().min(5)]
            ));
        }
        if !self.pcompat_failures.is_empty() {
            parts.push(format!(
                "ad(e^[p]) != (ad e)^p at indices {:?}",
                self.pcompat_failures
            ));
        }
        parts.join("; ")
    }
}

pub struct LieAlgebra {
    field: Arc<Field>,
    dim: usize,
    names: Vec<String>,
    /// bracket_table[i][j] = coordinates of [e_i, e_j], full antisymmetric table.
    bracket_table: Vec<Vec<Vec<Scalar>>>,
    pmap_table: Vec<Vec<Scalar>>,
    ad_mats: Vec<Mat>,
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra dim {} over {:?}", self.dim, self.field)
    }
}

impl AlgebraData {
    pub fn validate(&self) -> ValidationReport {
        let n = self.names.len();
        let mut rep = ValidationReport {
            dim: n,
            structural: Vec::new(),
            jacobi_failures: Vec::new(),
            pcompat_failures: Vec::new(),
        };
        if self.pmap.len() != n {
            rep.structural
                .push(format!("pmap has {} rows, dim is {}", self.pmap.len(), n));
        }
        let q = self.field.q();
        let mut seen = std::collections::HashSet::new();
        for &(i, j, ref entries) in &self.brackets {
            if i >= j || j >= n {
                rep.structural
                    .push(format!("bracket entry ({}, {}) out of order or range", i, j));
                continue;
            }
            if !seen.insert((i, j)) {
                rep.structural.push(format!("duplicate bracket ({}, {})", i, j));
            }
            for &(k, c) in entries {
                if k >= n || c as u32 >= q {
                    rep.structural
                        .push(format!("bracket ({}, {}) has bad term ({}, {})", i, j, k, c));
                }
            }
        }
        for (i, row) in self.pmap.iter().enumerate() {
            for &(k, c) in row {
                if k >= n || c as u32 >= q {
                    rep.structural
                        .push(format!("pmap[{}] has bad term ({}, {})", i, k, c));
                }
            }
        }
        if !rep.structural.is_empty() {
            return rep;
        }
        // Build dense tables, then test the axioms.
        let alg = self.assemble();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let mut acc = alg.bracket(&alg.bracket_table[i][j], &alg.basis_vec(k));
                    let t2 = alg.bracket(&alg.bracket_table[j][k], &alg.basis_vec(i));
                    let t3 = alg.bracket(&alg.bracket_table[k][i], &alg.basis_vec(j));
                    for idx in 0..n {
                        acc[idx] = alg
                            .field
                            .add(acc[idx], alg.field.add(t2[idx], t3[idx]));
                    }
                    if acc.iter().any(|&c| c != 0) {
                        rep.jacobi_failures.push((i, j, k));
                    }
                }
            }
        }
        let p = self.field.p() as u64;
        for i in 0..n {
            let adp = alg.ad_mats[i].pow(p);
            let ad_target = alg.ad(&alg.pmap_table[i]);
            if adp != ad_target {
                rep.pcompat_failures.push(i);
            }
        }
        rep
    }

    fn assemble(&self) -> LieAlgebra {
        let n = self.names.len();
        let f = &self.field;
        let mut table = vec![vec![vec![0 as Scalar; n]; n]; n];
        for &(i, j, ref entries) in &self.brackets {
            for &(k, c) in entries {
                table[i][j][k] = f.add(table[i][j][k], c);
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    table[j][i][k] = f.neg(table[i][j][k]);
                }
            }
        }
        let mut pmap = vec![vec![0 as Scalar; n]; n];
        for (i, row) in self.pmap.iter().enumerate() {
            for &(k, c) in row {
                pmap[i][k] = f.add(pmap[i][k], c);
            }
        }
        let ad_mats = (0..n)
            .map(|i| {
                Mat::from_fn(self.field.clone(), n, n, |r, j| table[i][j][r])
            })
            .collect();
        LieAlgebra {
            field: self.field.clone(),
            dim: n,
            names: self.names.clone(),
            bracket_table: table,
            pmap_table: pmap,
            ad_mats,
        }
    }

    /// Validate and freeze.  Only validated algebras circulate.
    pub fn build(self) -> Result<Arc<LieAlgebra>> {
        let rep = self.validate();
        if !rep.passed() {
            return Err(Error::Invalid(rep.summary()));
        }
        Ok(Arc::new(self.assemble()))
    }
}

/// A subalgebra repackaged as an algebra of its own, with the inclusion kept
/// so modules can be moved back and forth.
pub struct SubalgebraContext {
    pub space: Subspace,
    pub algebra: Arc<LieAlgebra>,
    /// rows = basis of the subalgebra in parent coordinates (the canonical
    /// echelon basis of `space`).
    pub inclusion: Mat,
}

/// Quotient by a p-ideal.
pub struct QuotientContext {
    pub ideal: Subspace,
    pub algebra: Arc<LieAlgebra>,
    /// proj: parent coords -> quotient coords (m x n applied to columns).
    pub proj: Mat,
    /// section rows = chosen lifts of the quotient basis.
    pub section: Mat,
}

impl LieAlgebra {
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn name_of(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![0 as Scalar; self.dim];
        v[i] = 1;
        v
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Scalar] {
        &self.bracket_table[i][j]
    }

    pub fn pmap_basis(&self, i: usize) -> &[Scalar] {
        &self.pmap_table[i]
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let f = &self.field;
        let mut out = vec![0 as Scalar; self.dim];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let c = f.mul(xi, yj);
                vec_add_scaled(f, &mut out, &self.bracket_table[i][j], c);
            }
        }
        out
    }

    /// ad(x) as a matrix acting on column vectors: ad(x) e_j = [x, e_j].
    pub fn ad(&self, x: &[Scalar]) -> Mat {
        let mut m = Mat::zero(self.field.clone(), self.dim, self.dim);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            m = m.add(&self.ad_mats[i].scale(xi));
        }
        m
    }

    pub fn ad_basis(&self, i: usize) -> &Mat {
        &self.ad_mats[i]
    }

    /// Cross terms of Jacobson's formula:
    ///   (a+b)^[p] = a^[p] + b^[p] + Σ_{i=1}^{p-1} s_i(a,b),
    /// where Σ i·s_i(a,b) t^{i-1} = (ad(ta+b))^{p-1}(a) as a polynomial
    /// in the formal variable t.  Returns Σ s_i(a,b).
    fn jacobson_cross_terms(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let f = &self.field;
        let p = f.p() as usize;
        let ad_a = self.ad(a);
        let ad_b = self.ad(b);
        // coeffs[d] = coefficient vector of t^d; start with the element a.
        let mut coeffs: Vec<Vec<Scalar>> = vec![vec![0; self.dim]; p];
        coeffs[0] = a.to_vec();
        for _ in 0..(p - 1) {
            let mut next: Vec<Vec<Scalar>> = vec![vec![0; self.dim]; p];
            for d in 0..p {
                let from_b = ad_b.apply_col(&coeffs[d]);
                let mut acc = from_b;
                if d > 0 {
                    let from_a = ad_a.apply_col(&coeffs[d - 1]);
                    for idx in 0..self.dim {
                        acc[idx] = f.add(acc[idx], from_a[idx]);
                    }
                }
                next[d] = acc;
            }
            coeffs = next;
        }
        let mut out = vec![0 as Scalar; self.dim];
        for i in 1..p {
            // s_i = (1/i) * coefficient of t^{i-1}
            let inv_i = f.inv(f.from_int(i as i64));
            vec_add_scaled(f, &mut out, &coeffs[i - 1], inv_i);
        }
        out
    }

    /// p-th power of an arbitrary element.  Decomposes x over the basis and
    /// folds Jacobson's formula; (λe)^[p] = λ^p e^[p] seeds each step.
    pub fn p_power(&self, x: &[Scalar]) -> Vec<Scalar> {
        let f = &self.field;
        let p = f.p() as u64;
        let mut acc: Option<(Vec<Scalar>, Vec<Scalar>)> = None; // (element, its p-power)
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            let mut term = vec![0 as Scalar; self.dim];
            term[i] = xi;
            let mut term_pow = vec![0 as Scalar; self.dim];
            vec_add_scaled(f, &mut term_pow, &self.pmap_table[i], f.pow(xi, p));
            acc = Some(match acc {
                None => (term, term_pow),
                Some((a, a_pow)) => {
                    let cross = self.jacobson_cross_terms(&a, &term);
                    let mut pow = a_pow;
                    for idx in 0..self.dim {
                        pow[idx] =
                            f.add(pow[idx], f.add(term_pow[idx], cross[idx]));
                    }
                    let mut elt = a;
                    vec_add_scaled(f, &mut elt, &term, 1);
                    (elt, pow)
                }
            });
        }
        match acc {
            None => vec![0; self.dim],
            Some((_, pow)) => pow,
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket_table
            .iter()
            .all(|row| row.iter().all(|v| v.iter().all(|&c| c == 0)))
    }

    pub fn is_subalgebra(&self, s: &Subspace) -> bool {
        let rows = s.basis();
        for a in rows.rows_iter() {
            for b in rows.rows_iter() {
                if !s.contains(&self.bracket(a, b)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_ideal(&self, s: &Subspace) -> bool {
        for a in s.basis().rows_iter() {
            for j in 0..self.dim {
                if !s.contains(&self.bracket(a, &self.basis_vec(j))) {
                    return false;
                }
            }
        }
        true
    }

    /// For a subalgebra, closure of a spanning set under the p-map is
    /// enough: p-th powers of sums differ from sums of p-th powers by
    /// iterated brackets, which the subalgebra already contains.
    pub fn is_p_closed_subalgebra(&self, s: &Subspace) -> bool {
        self.is_subalgebra(s)
            && s.basis()
                .rows_iter()
                .all(|row| s.contains(&self.p_power(row)))
    }

    pub fn is_p_ideal(&self, s: &Subspace) -> bool {
        self.is_ideal(s)
            && s.basis()
                .rows_iter()
                .all(|row| s.contains(&self.p_power(row)))
    }

    /// Smallest restricted subalgebra containing the rows of `gens`.
    pub fn p_closure(&self, gens: &Subspace) -> Subspace {
        let mut cur = gens.clone();
        loop {
            let mut next = cur.clone();
            let rows: Vec<Vec<Scalar>> = cur.basis().rows_iter().map(|r| r.to_vec()).collect();
            for a in &rows {
                for b in &rows {
                    let br = self.bracket(a, b);
                    next = next.sum(&Subspace::from_rows(
                        self.field.clone(),
                        self.dim,
                        &[br],
                    ));
                }
                let pp = self.p_power(a);
                next = next.sum(&Subspace::from_rows(self.field.clone(), self.dim, &[pp]));
            }
            if next.dim() == cur.dim() {
                return cur;
            }
            cur = next;
        }
    }

    /// Derived series L ⊇ [L,L] ⊇ ... down to stabilization; first entry is
    /// the whole algebra.
    pub fn derived_series(&self) -> Vec<Subspace> {
        let mut series = vec![Subspace::whole(self.field.clone(), self.dim)];
        loop {
            let cur = series.last().unwrap();
            let rows: Vec<Vec<Scalar>> = cur.basis().rows_iter().map(|r| r.to_vec()).collect();
            let mut gens = Vec::new();
            for a in &rows {
                for b in &rows {
                    gens.push(self.bracket(a, b));
                }
            }
            let next = Subspace::from_rows(self.field.clone(), self.dim, &gens);
            if next.dim() == cur.dim() {
                break;
            }
            series.push(next);
            if series.last().unwrap().dim() == 0 {
                break;
            }
        }
        series
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().unwrap().dim() == 0
    }

    pub fn center(&self) -> Subspace {
        // x is central iff ad(e_j) x = 0 for all j (antisymmetry).
        let mut stacked = Mat::zero(self.field.clone(), 0, self.dim);
        for m in &self.ad_mats {
            stacked = stacked.vstack(m);
        }
        Subspace::from_mat(stacked.kernel())
    }

    pub fn centralizer(&self, s: &Subspace) -> Subspace {
        let mut stacked = Mat::zero(self.field.clone(), 0, self.dim);
        for row in s.basis().rows_iter() {
            stacked = stacked.vstack(&self.ad(row));
        }
        Subspace::from_mat(stacked.kernel())
    }

    /// Package a p-closed subalgebra as an algebra of its own.
    pub fn subalgebra(&self, space: &Subspace) -> Result<SubalgebraContext> {
        if !self.is_subalgebra(space) {
            return Err(Error::Precondition(
                "span is not closed under the bracket".into(),
            ));
        }
        let d = space.dim();
        let rows: Vec<Vec<Scalar>> = space.basis().rows_iter().map(|r| r.to_vec()).collect();
        let mut brackets = Vec::new();
        for i in 0..d {
            for j in (i + 1)..d {
                let br = self.bracket(&rows[i], &rows[j]);
                let coords = space
                    .coordinates(&br)
                    .expect("closure checked above");
                brackets.push((i, j, sparse(&coords)));
            }
        }
        let mut pmap = Vec::new();
        for row in &rows {
            let pp = self.p_power(row);
            let coords = space.coordinates(&pp).ok_or_else(|| {
                Error::Precondition("span is not closed under the p-map".into())
            })?;
            pmap.push(sparse(&coords));
        }
        let names = (0..d)
            .map(|i| format!("s{}", i))
            .collect();
        let algebra = AlgebraData {
            field: self.field.clone(),
            names,
            brackets,
            pmap,
        }
        .build()?;
        Ok(SubalgebraContext {
            space: space.clone(),
            algebra,
            inclusion: space.basis().clone(),
        })
    }

    /// Quotient by a p-ideal, with projection and a section.
    pub fn quotient(&self, ideal: &Subspace) -> Result<QuotientContext> {
        if !self.is_p_ideal(ideal) {
            return Err(Error::Precondition("subspace is not a p-ideal".into()));
        }
        let free = ideal.complement_positions();
        let m = free.len();
        let n = self.dim;
        // proj x = coordinates of (x mod ideal) on the complement positions.
        let mut proj = Mat::zero(self.field.clone(), m, n);
        for j in 0..n {
            let reduced = ideal.reduce(&self.basis_vec(j));
            for (t, &c) in free.iter().enumerate() {
                proj.set(t, j, reduced[c]);
            }
        }
        let section_rows: Vec<Vec<Scalar>> =
            free.iter().map(|&c| self.basis_vec(c)).collect();
        let section = Mat::from_rows(self.field.clone(), n, &section_rows);
        let mut brackets = Vec::new();
        for s in 0..m {
            for t in (s + 1)..m {
                let br = self.bracket(&section_rows[s], &section_rows[t]);
                let coords = proj.apply_col(&br);
                brackets.push((s, t, sparse(&coords)));
            }
        }
        let mut pmap = Vec::new();
        for row in &section_rows {
            let pp = self.p_power(row);
            pmap.push(sparse(&proj.apply_col(&pp)));
        }
        let names = free
            .iter()
            .map(|&c| format!("{}~", self.names[c]))
            .collect();
        let algebra = AlgebraData {
            field: self.field.clone(),
            names,
            brackets,
            pmap,
        }
        .build()?;
        Ok(QuotientContext {
            ideal: ideal.clone(),
            algebra,
            proj,
            section,
        })
    }

    /// Same structure constants in a new basis; `rows` must be invertible.
    pub fn change_basis(&self, rows: &Mat) -> Result<Arc<LieAlgebra>> {
        assert_eq!(rows.rows(), self.dim);
        assert_eq!(rows.cols(), self.dim);
        let inv = rows
            .inverse()
            .ok_or_else(|| Error::Precondition("basis change must be invertible".into()))?;
        // New coords of v = (row-basis expansion) = inv^T applied... we use:
        // v expressed in rows-basis is (rows^T)^{-1} v as columns.
        let to_new = inv.transpose();
        let n = self.dim;
        let row_vecs: Vec<Vec<Scalar>> = rows.rows_iter().map(|r| r.to_vec()).collect();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let br = self.bracket(&row_vecs[i], &row_vecs[j]);
                brackets.push((i, j, sparse(&to_new.apply_col(&br))));
            }
        }
        let mut pmap = Vec::new();
        for r in &row_vecs {
            pmap.push(sparse(&to_new.apply_col(&self.p_power(r))));
        }
        AlgebraData {
            field: self.field.clone(),
            names: (0..n).map(|i| format!("b{}", i)).collect(),
            brackets,
            pmap,
        }
        .build()
    }

    /// The same algebra over an extension field.
    pub fn extend_scalars(&self, to: &Arc<Field>) -> Result<Arc<LieAlgebra>> {
        let table = self.field.embedding_into(to)?;
        let n = self.dim;
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let mapped: Vec<(usize, Scalar)> = self.bracket_table[i][j]
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(k, &c)| (k, table[c as usize]))
                    .collect();
                if !mapped.is_empty() {
                    brackets.push((i, j, mapped));
                }
            }
        }
        let pmap = self
            .pmap_table
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(k, &c)| (k, table[c as usize]))
                    .collect()
            })
            .collect();
        AlgebraData {
            field: to.clone(),
            names: self.names.clone(),
            brackets,
            pmap,
        }
        .build()
    }

    /// Export in the sparse form used for serialization.
    pub fn data(&self) -> AlgebraData {
        let n = self.dim;
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let entries = sparse(&self.bracket_table[i][j]);
                if !entries.is_empty() {
                    brackets.push((i, j, entries));
                }
            }
        }
        AlgebraData {
            field: self.field.clone(),
            names: self.names.clone(),
            brackets,
            pmap: self.pmap_table.iter().map(|r| sparse(r)).collect(),
        }
    }
}

pub fn sparse(v: &[Scalar]) -> Vec<(usize, Scalar)> {
    v.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| (k, c))
        .collect()
}
