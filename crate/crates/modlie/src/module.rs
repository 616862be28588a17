//! Finite-dimensional modules over a restricted Lie algebra with a p-character.
//!
//! A module with p-character `chi` is a representation `rho` of the algebra
//! satisfying, for every basis element `e_i`,
//!
//! ```text
//!   rho([e_i, e_j]) = [rho(e_i), rho(e_j)]           (Lie condition)
//!   rho(e_i)^p      = rho(e_i^[p]) + chi(e_i)^p * I  (p-character condition)
//! ```
//!
//! Equivalently, a module over the reduced enveloping algebra `u(L, chi)`.
//! Matrices act on column vectors throughout.

use std::collections::HashMap;
use std::sync::Arc;

use crate::field::Scalar;
use crate::lie::{LieAlgebra, QuotientContext, SubalgebraContext};
use crate::matrix::{Mat, OnlineEchelon, Subspace};
use crate::pbw::Envelope;
use crate::{Error, Result};

#[derive(Clone)]
pub struct Module {
    alg: Arc<LieAlgebra>,
    chi: Vec<Scalar>,
    dim: usize,
    /// One action matrix per basis element of the algebra.
    action: Vec<Mat>,
}

/// Outcome of the module axioms check.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ModuleReport {
    pub dim: usize,
    /// Pairs (i, j) where rho([e_i,e_j]) != [rho(e_i), rho(e_j)].
    pub bracket_failures: Vec<(usize, usize)>,
    /// Indices i where rho(e_i)^p != rho(e_i^[p]) + chi(e_i)^p I.
    pub pchar_failures: Vec<usize>,
}

impl ModuleReport {
    pub fn passed(&self) -> bool {
        self.bracket_failures.is_empty() && self.pchar_failures.is_empty()
    }
}

impl Module {
    /// Wraps raw data after shape validation only; run `validate`/`checked`
    /// for the module axioms.
    pub fn new(alg: Arc<LieAlgebra>, chi: Vec<Scalar>, action: Vec<Mat>) -> Result<Module> {
        if chi.len() != alg.dim() || action.len() != alg.dim() {
            return Err(Error::Dim(format!(
                "expected {} chi entries and action matrices, got {} and {}",
                alg.dim(),
                chi.len(),
                action.len()
            )));
        }
        for c in &chi {
            alg.field().check_scalar(*c as u64)?;
        }
        let dim = action.first().map_or(0, |m| m.rows());
        for m in &action {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::Dim(format!(
                    "action matrices must be square of size {dim}, got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
            if !Arc::ptr_eq(m.field(), alg.field()) {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(Module {
            alg,
            chi,
            dim,
            action,
        })
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.alg
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn chi(&self) -> &[Scalar] {
        &self.chi
    }
    pub fn action_basis(&self, i: usize) -> &Mat {
        &self.action[i]
    }

    pub fn action_matrices(&self) -> &[Mat] {
        &self.action
    }

    /// rho(x) for an arbitrary element x of the algebra.
    pub fn action_of(&self, x: &[Scalar]) -> Mat {
        let mut m = Mat::zero(self.alg.field().clone(), self.dim, self.dim);
        for (i, &c) in x.iter().enumerate() {
            if c != 0 {
                m = m.add(&self.action[i].scale(c));
            }
        }
        m
    }

    pub fn apply(&self, x: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        self.action_of(x).apply_col(v)
    }

    /// chi evaluated on an arbitrary element (chi is linear).
    pub fn chi_of(&self, x: &[Scalar]) -> Scalar {
        let f = self.alg.field();
        x.iter()
            .zip(&self.chi)
            .fold(0, |acc, (&a, &c)| f.add(acc, f.mul(a, c)))
    }

    pub fn validate(&self) -> ModuleReport {
        let f = self.alg.field();
        let n = self.alg.dim();
        let p = f.p() as u64;
        let mut bracket_failures = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let lhs = self.action_of(self.alg.bracket_basis(i, j));
                let rhs = self.action[i]
                    .mul(&self.action[j])
                    .sub(&self.action[j].mul(&self.action[i]));
                if lhs != rhs {
                    bracket_failures.push((i, j));
                }
            }
        }
        let mut pchar_failures = Vec::new();
        for i in 0..n {
            let lhs = self.action[i].pow(p);
            let shift = f.pow(self.chi[i], p);
            let mut rhs = self.action_of(self.alg.pmap_basis(i));
            if shift != 0 {
                rhs = rhs.add(&Mat::identity(f.clone(), self.dim).scale(shift));
            }
            if lhs != rhs {
                pchar_failures.push(i);
            }
        }
        ModuleReport {
            dim: self.dim,
            bracket_failures,
            pchar_failures,
        }
    }

    /// Validating constructor wrapper: returns the module only if the axioms hold.
    pub fn checked(self) -> Result<Module> {
        let rep = self.validate();
        if rep.passed() {
            Ok(self)
        } else {
            Err(Error::Invalid(format!(
                "module axioms fail: {} bracket pair(s), {} p-power index(es)",
                rep.bracket_failures.len(),
                rep.pchar_failures.len()
            )))
        }
    }

    // ---- standard constructions -------------------------------------------

    /// The trivial one-dimensional module (p-character zero).
    pub fn trivial(alg: Arc<LieAlgebra>) -> Module {
        let n = alg.dim();
        let f = alg.field().clone();
        Module {
            chi: vec![0; n],
            dim: 1,
            action: (0..n).map(|_| Mat::zero(f.clone(), 1, 1)).collect(),
            alg,
        }
    }

    /// One-dimensional module where e_i acts by the scalar `weights[i]`.
    /// Fails unless the weight vanishes on the derived subalgebra and
    /// satisfies w(e_i)^p = w(e_i^[p]) + chi(e_i)^p.
    pub fn one_dimensional(
        alg: Arc<LieAlgebra>,
        weights: &[Scalar],
        chi: &[Scalar],
    ) -> Result<Module> {
        let f = alg.field().clone();
        let action = weights
            .iter()
            .map(|&w| {
                let mut m = Mat::zero(f.clone(), 1, 1);
                m.set(0, 0, w);
                m
            })
            .collect();
        Module::new(alg, chi.to_vec(), action)?.checked()
    }

    /// All one-dimensional modules with the given p-character: weights are the
    /// functionals vanishing on [L, L] that satisfy the p-character equation.
    pub fn one_dim_modules(alg: &Arc<LieAlgebra>, chi: &[Scalar], cap: u64) -> Result<Vec<Module>> {
        let f = alg.field();
        let n = alg.dim();
        // w([e_i, e_j]) = 0 as linear conditions on w.
        let mut rows = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                rows.push(alg.bracket_basis(i, j).to_vec());
            }
        }
        let conditions = Mat::from_rows(f.clone(), n, &rows);
        let candidates = Subspace::from_mat(conditions.kernel()).enumerate(cap)?;
        let mut out = Vec::new();
        for w in candidates {
            let ok = (0..n).all(|i| {
                let lhs = f.pow(w[i], f.p() as u64);
                let on_pmap = alg
                    .pmap_basis(i)
                    .iter()
                    .zip(&w)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                lhs == f.add(on_pmap, f.pow(chi[i], f.p() as u64))
            });
            if ok {
                out.push(Module::one_dimensional(alg.clone(), &w, chi)?);
            }
        }
        Ok(out)
    }

    /// The adjoint module (restricted by Jacobson compatibility).
    pub fn adjoint(alg: &Arc<LieAlgebra>) -> Module {
        let n = alg.dim();
        Module {
            alg: alg.clone(),
            chi: vec![0; n],
            dim: n,
            action: (0..n).map(|i| alg.ad_basis(i).clone()).collect(),
        }
    }

    /// The left regular module of u(L, chi).
    pub fn regular(env: &Envelope, cap: u64) -> Result<Module> {
        let alg = env.algebra().clone();
        let n = alg.dim();
        let dim = env.dense_dim(cap)?;
        let mut action = Vec::with_capacity(n);
        for i in 0..n {
            action.push(env.gen_action_matrix(i, cap)?);
        }
        Ok(Module {
            chi: env.chi().to_vec(),
            dim,
            action,
            alg,
        })
    }

    // ---- submodule machinery ----------------------------------------------

    /// Smallest submodule containing the given vectors.
    pub fn spin(&self, seeds: &[Vec<Scalar>]) -> Subspace {
        let f = self.alg.field();
        let mut ech = OnlineEchelon::new(f.clone(), self.dim);
        let mut queue: Vec<Vec<Scalar>> = Vec::new();
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for s in seeds {
            if ech.insert(s) {
                queue.push(s.clone());
                rows.push(s.clone());
            }
        }
        while let Some(v) = queue.pop() {
            for a in &self.action {
                let w = a.apply_col(&v);
                if ech.insert(&w) {
                    queue.push(w.clone());
                    rows.push(w);
                }
            }
        }
        Subspace::from_rows(f.clone(), self.dim, &rows)
    }

    pub fn spin_vector(&self, v: &[Scalar]) -> Subspace {
        self.spin(std::slice::from_ref(&v.to_vec()))
    }

    pub fn is_submodule(&self, s: &Subspace) -> bool {
        s.basis()
            .rows_iter()
            .all(|r| self.action.iter().all(|a| s.contains(&a.apply_col(r))))
    }

    /// The submodule `s` as a module in its own coordinates.
    pub fn submodule_module(&self, s: &Subspace) -> Result<Module> {
        let d = s.dim();
        let f = self.alg.field();
        let mut action = Vec::with_capacity(self.action.len());
        for a in &self.action {
            let mut m = Mat::zero(f.clone(), d, d);
            for (k, row) in s.basis().rows_iter().enumerate() {
                let img = a.apply_col(row);
                let coords = s
                    .coordinates(&img)
                    .ok_or_else(|| Error::Precondition("not a submodule".into()))?;
                for (r, &c) in coords.iter().enumerate() {
                    m.set(r, k, c);
                }
            }
            action.push(m);
        }
        Module::new(self.alg.clone(), self.chi.clone(), action)
    }

    /// Quotient by a submodule; also returns the projection matrix
    /// (ambient coordinates -> quotient coordinates).
    pub fn quotient_module(&self, s: &Subspace) -> Result<(Module, Mat)> {
        if !self.is_submodule(s) {
            return Err(Error::Precondition("not a submodule".into()));
        }
        let f = self.alg.field();
        let cpos = s.complement_positions();
        let d = cpos.len();
        let mut proj = Mat::zero(f.clone(), d, self.dim);
        for col in 0..self.dim {
            let mut e = vec![0; self.dim];
            e[col] = 1;
            let red = s.reduce(&e);
            for (r, &c) in cpos.iter().enumerate() {
                proj.set(r, col, red[c]);
            }
        }
        let mut action = Vec::with_capacity(self.action.len());
        for a in &self.action {
            let mut m = Mat::zero(f.clone(), d, d);
            for (k, &c) in cpos.iter().enumerate() {
                let mut e = vec![0; self.dim];
                e[c] = 1;
                let img = proj.apply_col(&a.apply_col(&e));
                for (r, &v) in img.iter().enumerate() {
                    m.set(r, k, v);
                }
            }
            action.push(m);
        }
        Ok((Module::new(self.alg.clone(), self.chi.clone(), action)?, proj))
    }

    /// Vectors killed by every element spanned by `rows` (rows in algebra
    /// coordinates).
    pub fn annihilated_by(&self, rows: &Mat) -> Subspace {
        let f = self.alg.field();
        if rows.rows() == 0 {
            return Subspace::whole(f.clone(), self.dim);
        }
        let mut stacked: Option<Mat> = None;
        for r in rows.rows_iter() {
            let a = self.action_of(r);
            stacked = Some(match stacked {
                None => a,
                Some(s) => s.vstack(&a),
            });
        }
        Subspace::from_mat(stacked.unwrap().kernel())
    }

    /// Invariants under the whole algebra.
    pub fn invariants(&self) -> Subspace {
        self.annihilated_by(&Mat::identity(self.alg.field().clone(), self.alg.dim()))
    }

    // ---- functorial constructions -----------------------------------------

    /// Dual module: rho*(x) = -rho(x)^T, with p-character -chi.
    pub fn dual(&self) -> Module {
        let f = self.alg.field();
        Module {
            alg: self.alg.clone(),
            chi: self.chi.iter().map(|&c| f.neg(c)).collect(),
            dim: self.dim,
            action: self
                .action
                .iter()
                .map(|a| a.transpose().scale(f.neg(1)))
                .collect(),
        }
    }

    /// Tensor product over the same algebra; p-characters add.
    pub fn tensor(&self, other: &Module) -> Result<Module> {
        if !Arc::ptr_eq(&self.alg, &other.alg) {
            return Err(Error::Precondition("tensor over different algebras".into()));
        }
        let f = self.alg.field();
        let ida = Mat::identity(f.clone(), self.dim);
        let idb = Mat::identity(f.clone(), other.dim);
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| a.kronecker(&idb).add(&ida.kronecker(b)))
            .collect();
        let chi = self
            .chi
            .iter()
            .zip(&other.chi)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Module::new(self.alg.clone(), chi, action)
    }

    /// Direct sum; requires equal p-characters.
    pub fn direct_sum(&self, other: &Module) -> Result<Module> {
        if !Arc::ptr_eq(&self.alg, &other.alg) {
            return Err(Error::Precondition("sum over different algebras".into()));
        }
        if self.chi != other.chi {
            return Err(Error::Character(
                "direct sum of modules with different p-characters".into(),
            ));
        }
        let f = self.alg.field();
        let d = self.dim + other.dim;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| {
                let mut m = Mat::zero(f.clone(), d, d);
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        m.set(i, j, a.get(i, j));
                    }
                }
                for i in 0..other.dim {
                    for j in 0..other.dim {
                        m.set(self.dim + i, self.dim + j, b.get(i, j));
                    }
                }
                m
            })
            .collect();
        Module::new(self.alg.clone(), self.chi.clone(), action)
    }

    /// Restriction along a subalgebra context of the parent algebra.
    pub fn restrict(&self, ctx: &SubalgebraContext) -> Module {
        let action = ctx
            .inclusion
            .rows_iter()
            .map(|r| self.action_of(r))
            .collect();
        let chi = ctx.inclusion.rows_iter().map(|r| self.chi_of(r)).collect();
        Module {
            alg: ctx.algebra.clone(),
            chi,
            dim: self.dim,
            action,
        }
    }

    /// Extend scalars of the module to a larger field together with its algebra.
    pub fn extend_scalars(
        &self,
        ext_alg: &Arc<LieAlgebra>,
        table: &[Scalar],
    ) -> Result<Module> {
        let big = ext_alg.field().clone();
        let action = self
            .action
            .iter()
            .map(|a| a.map_scalars(big.clone(), table))
            .collect();
        let chi = self.chi.iter().map(|&c| table[c as usize]).collect();
        Module::new(ext_alg.clone(), chi, action)
    }
}

/// Inflation along a quotient map: the quotient module pulled back to the
/// parent, with the ideal acting as zero.
pub fn inflate(parent: &Arc<LieAlgebra>, q: &QuotientContext, v: &Module) -> Result<Module> {
    if !Arc::ptr_eq(v.algebra(), &q.algebra) {
        return Err(Error::Precondition(
            "module is not over the quotient algebra".into(),
        ));
    }
    let n = parent.dim();
    let mut action = Vec::with_capacity(n);
    let mut chi = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![0; n];
        e[j] = 1;
        let img = q.proj.apply_col(&e);
        action.push(v.action_of(&img));
        chi.push(v.chi_of(&img));
    }
    Module::new(parent.clone(), chi, action)
}

/// Coinvariants M / I·M of a parent module along a p-ideal quotient, as a
/// module over the quotient algebra.  Requires chi to vanish on the ideal.
pub fn coinvariants(m: &Module, q: &QuotientContext) -> Result<(Module, Mat)> {
    let f = m.algebra().field();
    for r in q.ideal.basis().rows_iter() {
        if m.chi_of(r) != 0 {
            return Err(Error::Character(
                "p-character does not vanish on the ideal".into(),
            ));
        }
    }
    // I·M = sum of images of the ideal's action.
    let mut ech = OnlineEchelon::new(f.clone(), m.dim());
    let mut rows = Vec::new();
    for r in q.ideal.basis().rows_iter() {
        let a = m.action_of(r);
        for j in 0..m.dim() {
            let mut e = vec![0; m.dim()];
            e[j] = 1;
            let col = a.apply_col(&e);
            if ech.insert(&col) {
                rows.push(col);
            }
        }
    }
    let im = Subspace::from_rows(f.clone(), m.dim(), &rows);
    let (quot, proj) = m.quotient_module(&im)?;
    // Reinterpret over the quotient algebra via the chosen section.
    let action = q
        .section
        .rows_iter()
        .map(|r| quot.action_of(r))
        .collect::<Vec<_>>();
    let chi = q
        .section
        .rows_iter()
        .map(|r| quot.chi_of(r))
        .collect::<Vec<_>>();
    Ok((Module::new(q.algebra.clone(), chi, action)?, proj))
}

/// An induced module u(L, chi) ⊗_{u(H, chi|H)} V together with its monomial
/// bookkeeping.  Basis vectors are y^β ⊗ v_j where y runs over a transversal
/// of H inside L and the index is `beta_rank * dim V + j`.
pub struct InducedModule {
    pub module: Module,
    /// Positions (in the parent basis) of the transversal elements; the
    /// transversal monomials are ordered products of these basis vectors.
    pub transversal: Vec<usize>,
    /// Exponent vectors over the transversal slots, listed by rank.
    pub betas: Vec<Vec<u8>>,
    pub v_dim: usize,
}

impl InducedModule {
    pub fn index(&self, beta_rank: usize, j: usize) -> usize {
        beta_rank * self.v_dim + j
    }
    /// Total exponent degree of the β-block containing the given index.
    pub fn beta_total(&self, idx: usize) -> usize {
        self.betas[idx / self.v_dim].iter().map(|&b| b as usize).sum()
    }
}

/// Induction from a subalgebra.  The basis of `l` is reordered internally so
/// the transversal precedes the subalgebra in the straightening order, which
/// makes every PBW monomial split as (transversal part)·(subalgebra part).
pub fn induce(
    l: &Arc<LieAlgebra>,
    ctx: &SubalgebraContext,
    v: &Module,
    chi: &[Scalar],
    cap: u64,
) -> Result<InducedModule> {
    if !Arc::ptr_eq(v.algebra(), &ctx.algebra) {
        return Err(Error::Precondition(
            "module is not over the subalgebra".into(),
        ));
    }
    let f = l.field().clone();
    let n = l.dim();
    let d = ctx.space.dim();
    let m = n - d;
    let free = ctx.space.complement_positions();

    // Reordered basis: transversal standard vectors first, then the echelon
    // basis of H.
    let mut rows = Vec::with_capacity(n);
    for &t in &free {
        let mut e = vec![0; n];
        e[t] = 1;
        rows.push(e);
    }
    for r in ctx.inclusion.rows_iter() {
        rows.push(r.to_vec());
    }
    let p_mat = Mat::from_rows(f.clone(), n, &rows);
    let l2 = l.change_basis(&p_mat)?;

    // chi in the reordered coordinates, and compatibility with V.
    let chi2: Vec<Scalar> = rows
        .iter()
        .map(|r| {
            r.iter()
                .zip(chi)
                .fold(0, |acc, (&a, &c)| f.add(acc, f.mul(a, c)))
        })
        .collect();
    for k in 0..d {
        if v.chi()[k] != chi2[m + k] {
            return Err(Error::Character(
                "p-character of the module disagrees with chi on the subalgebra".into(),
            ));
        }
    }

    let env = Envelope::new(l2.clone(), &chi2)?;
    let p = f.p() as usize;
    let mut count: u64 = 1;
    for _ in 0..m {
        count = count
            .checked_mul(p as u64)
            .filter(|&c| c.saturating_mul(v.dim() as u64) <= cap)
            .ok_or(Error::ResourceCap {
                what: "induced module dimension".into(),
                needed: u64::MAX,
                cap,
            })?;
    }
    let total = count as usize * v.dim();
    if (total as u64) > cap {
        return Err(Error::ResourceCap {
            what: "induced module dimension".into(),
            needed: total as u64,
            cap,
        });
    }

    // Enumerate transversal exponents by rank (slot 0 least significant).
    let mut betas = Vec::with_capacity(count as usize);
    for r in 0..count as usize {
        let mut b = vec![0u8; m];
        let mut x = r;
        for slot in 0..m {
            b[slot] = (x % p) as u8;
            x /= p;
        }
        betas.push(b);
    }
    let rank_of = |g: &[u8]| -> usize {
        let mut r = 0usize;
        for slot in (0..m).rev() {
            r = r * p + g[slot] as usize;
        }
        r
    };

    // Operator of an H-monomial h_0^{a_0}...h_{d-1}^{a_{d-1}} on V.
    let mut hword: HashMap<Vec<u8>, Mat> = HashMap::new();
    hword.insert(vec![0; d], Mat::identity(f.clone(), v.dim()));
    let mut op_of = |gh: &[u8], v: &Module| -> Mat {
        if let Some(m) = hword.get(gh) {
            return m.clone();
        }
        let mut acc = Mat::identity(f.clone(), v.dim());
        for k in 0..d {
            if gh[k] > 0 {
                acc = acc.mul(&v.action_basis(k).pow(gh[k] as u64));
            }
        }
        hword.insert(gh.to_vec(), acc.clone());
        acc
    };

    // Action of each reordered generator.
    let vd = v.dim();
    let mut reordered_action = Vec::with_capacity(n);
    for i in 0..n {
        let mut a = Mat::zero(f.clone(), total, total);
        for (b_rank, beta) in betas.iter().enumerate() {
            let mut alpha = vec![0u8; n];
            alpha[..m].copy_from_slice(beta);
            let prod = env.mul(&env.gen(i), &env.monomial(&alpha));
            for (gamma, c) in &prod {
                let r0 = rank_of(&gamma[..m]) * vd;
                let op = op_of(&gamma[m..], v);
                for j in 0..vd {
                    let cidx = b_rank * vd + j;
                    for i2 in 0..vd {
                        let val = op.get(i2, j);
                        if val != 0 {
                            let cur = a.get(r0 + i2, cidx);
                            a.set(r0 + i2, cidx, f.add(cur, f.mul(*c, val)));
                        }
                    }
                }
            }
        }
        reordered_action.push(a);
    }

    // Convert to the original basis: coords of e_j in the reordered basis are
    // the j-th column of (P^T)^{-1}.
    let pt_inv = p_mat
        .transpose()
        .inverse()
        .ok_or_else(|| Error::Invalid("basis reorder is singular".into()))?;
    let mut action = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = Mat::zero(f.clone(), total, total);
        for i in 0..n {
            let c = pt_inv.get(i, j);
            if c != 0 {
                acc = acc.add(&reordered_action[i].scale(c));
            }
        }
        action.push(acc);
    }

    Ok(InducedModule {
        module: Module::new(l.clone(), chi.to_vec(), action)?,
        transversal: free,
        betas,
        v_dim: vd,
    })
}

/// Basis of the space of module homomorphisms M -> N (intertwiners), as
/// matrices (dim N) x (dim M).  Both modules must share algebra and
/// p-character.
pub fn hom_space(m: &Module, n: &Module, cap: u64) -> Result<Vec<Mat>> {
    if !Arc::ptr_eq(m.algebra(), n.algebra()) {
        return Err(Error::Precondition("hom over different algebras".into()));
    }
    if m.chi() != n.chi() {
        return Err(Error::Character(
            "hom between modules with different p-characters".into(),
        ));
    }
    let f = m.algebra().field().clone();
    let (dm, dn) = (m.dim(), n.dim());
    let sz = dm * dn;
    if sz as u64 > cap {
        return Err(Error::ResourceCap {
            what: "hom space solve size".into(),
            needed: sz as u64,
            cap,
        });
    }
    if sz == 0 {
        return Ok(Vec::new());
    }
    // vec_c(X rho_M(e_i) - rho_N(e_i) X) = (rho_M^T ⊗ I - I ⊗ rho_N) vec_c(X).
    let id_m = Mat::identity(f.clone(), dm);
    let id_n = Mat::identity(f.clone(), dn);
    // Current kernel basis as columns of K.
    let mut k: Option<Mat> = None;
    for i in 0..m.algebra().dim() {
        let block = m.action_basis(i)
            .transpose()
            .kronecker(&id_n)
            .sub(&id_m.kronecker(n.action_basis(i)));
        let restricted = match &k {
            None => block,
            Some(kmat) => block.mul(kmat),
        };
        let ker_rows = restricted.kernel();
        let next = match &k {
            None => ker_rows.transpose(),
            Some(kmat) => kmat.mul(&ker_rows.transpose()),
        };
        if next.cols() == 0 {
            return Ok(Vec::new());
        }
        k = Some(next);
    }
    let kmat = k.unwrap();
    let mut out = Vec::with_capacity(kmat.cols());
    for c in 0..kmat.cols() {
        let mut x = Mat::zero(f.clone(), dn, dm);
        for j1 in 0..dm {
            for i2 in 0..dn {
                x.set(i2, j1, kmat.get(j1 * dn + i2, c));
            }
        }
        out.push(x);
    }
    Ok(out)
}

pub fn end_dim(m: &Module, cap: u64) -> Result<usize> {
    Ok(hom_space(m, m, cap)?.len())
}

/// Decides isomorphism by exhaustively searching the hom space for an
/// invertible element.  Complete (never a false negative) as long as the
/// search space q^{dim Hom} stays under the cap; errs out otherwise.
pub fn is_isomorphic_small(m: &Module, n: &Module, cap: u64) -> Result<bool> {
    if m.dim() != n.dim() {
        return Ok(false);
    }
    let homs = hom_space(m, n, cap)?;
    if homs.is_empty() {
        return Ok(false);
    }
    let f = m.algebra().field();
    let q = f.q();
    let h = homs.len();
    let mut combos: u64 = 1;
    for _ in 0..h {
        combos = combos.saturating_mul(q as u64);
        if combos > 1 << 16 {
            return Err(Error::Undecided(
                "hom space too large for exhaustive isomorphism search".into(),
            ));
        }
    }
    let elems: Vec<Scalar> = f.elements().collect();
    let mut idx = vec![0usize; h];
    loop {
        let mut x = Mat::zero(f.clone(), n.dim(), m.dim());
        for (t, &e) in idx.iter().enumerate() {
            if elems[e] != 0 {
                x = x.add(&homs[t].scale(elems[e]));
            }
        }
        if x.inverse().is_some() {
            return Ok(true);
        }
        // next tuple
        let mut carry = 0;
        while carry < h {
            idx[carry] += 1;
            if idx[carry] < elems.len() {
                break;
            }
            idx[carry] = 0;
            carry += 1;
        }
        if carry == h {
            return Ok(false);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::testalg;
    use crate::matrix::Subspace;

    fn fp(p: u32) -> Arc<crate::field::Field> {
        crate::field::field(p, 1).unwrap()
    }

    #[test]
    fn adjoint_modules_validate_and_have_central_invariants() {
        let sl2 = testalg::sl2(5);
        let adj = Module::adjoint(&sl2);
        assert!(adj.validate().passed());
        assert_eq!(adj.invariants().dim(), 0);

        let h3 = testalg::heisenberg(3);
        let adj3 = Module::adjoint(&h3);
        assert!(adj3.validate().passed());
        // Invariants of the adjoint module = the center, here spanned by z.
        let inv = adj3.invariants();
        assert_eq!(inv.dim(), 1);
        assert!(inv.contains(&[0, 0, 1]));
    }

    #[test]
    fn one_dimensional_weights_on_a_solvable_algebra() {
        let tx = testalg::tx(3);
        // chi = 0: weight must vanish on [L,L] = <x> and satisfy w^3 = w.
        let all = Module::one_dim_modules(&tx, &[0, 0], 1 << 10).unwrap();
        assert_eq!(all.len(), 3);
        // chi(t) nonzero: w^3 = w + 1 has no root in F_3.
        let none = Module::one_dim_modules(&tx, &[1, 0], 1 << 10).unwrap();
        assert!(none.is_empty());
        // chi(x) nonzero: weights vanish on [L,L] = <x>, so w(x)^3 = chi(x)^3
        // is unsolvable and no one-dimensional module exists.
        let shifted = Module::one_dim_modules(&tx, &[0, 1], 1 << 10).unwrap();
        assert!(shifted.is_empty());
    }

    #[test]
    fn dual_is_an_involution_and_respects_p_characters() {
        let h3 = testalg::heisenberg(3);
        let adj = Module::adjoint(&h3);
        let dd = adj.dual().dual();
        for i in 0..3 {
            assert_eq!(dd.action_basis(i), adj.action_basis(i));
        }
        assert!(adj.dual().validate().passed());
    }

    // Hand-computed induction over <t, x> with [t, x] = x, t^[3] = t, x^[3] = 0:
    // inducing the weight-mu module of <t> gives basis 1⊗v, x⊗v, x²⊗v with
    //   t · x^a ⊗ v = (mu + a) x^a ⊗ v     (since t x^a = x^a (t + a))
    //   x · x^a ⊗ v = x^{a+1} ⊗ v,  x³ = chi(x)³.
    #[test]
    fn induced_module_matches_hand_matrices_on_tx() {
        let tx = testalg::tx(3);
        let f = fp(3);
        let t_line = Subspace::from_rows(f.clone(), 2, &[vec![1, 0]]);
        let ctx = tx.subalgebra(&t_line).unwrap();
        let v = Module::one_dimensional(ctx.algebra.clone(), &[1], &[0]).unwrap();

        let ind = induce(&tx, &ctx, &v, &[0, 0], 1 << 20).unwrap();
        assert_eq!(ind.module.dim(), 3);
        assert_eq!(ind.transversal, vec![1]);
        assert!(ind.module.validate().passed());
        let rho_t = ind.module.action_basis(0);
        let rho_x = ind.module.action_basis(1);
        let expect_t =
            Mat::from_rows(f.clone(), 3, &[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 0]]);
        assert_eq!(rho_t, &expect_t);
        let expect_x =
            Mat::from_rows(f.clone(), 3, &[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(rho_x, &expect_x);

        // With chi(x) = 1 the third power of x wraps around to the identity.
        let ind2 = induce(&tx, &ctx, &v, &[0, 1], 1 << 20).unwrap();
        assert!(ind2.module.validate().passed());
        let rho_x2 = ind2.module.action_basis(1);
        let expect_x2 =
            Mat::from_rows(f.clone(), 3, &[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(rho_x2, &expect_x2);

        // chi disagreeing with the module on the subalgebra is rejected.
        assert!(matches!(
            induce(&tx, &ctx, &v, &[1, 0], 1 << 20),
            Err(Error::Character(_))
        ));
    }

    // Interleaved transversal: H = <x, z> inside the Heisenberg algebra with
    // basis (x, y, z), so the transversal y sits between the pivots.  With
    // chi(z) = 1 the induced module is the classical 3-dimensional
    // representation: z = I, y = shift, x = weighted shift back.
    #[test]
    fn induced_module_with_interleaved_transversal() {
        let h3 = testalg::heisenberg(3);
        let f = fp(3);
        let sub = Subspace::from_rows(f.clone(), 3, &[vec![1, 0, 0], vec![0, 0, 1]]);
        let ctx = h3.subalgebra(&sub).unwrap();
        assert!(h3.is_p_closed_subalgebra(&sub));
        let v = Module::one_dimensional(ctx.algebra.clone(), &[0, 1], &[0, 1]).unwrap();

        let ind = induce(&h3, &ctx, &v, &[0, 0, 1], 1 << 20).unwrap();
        assert_eq!(ind.module.dim(), 3);
        assert_eq!(ind.transversal, vec![1]);
        assert!(ind.module.validate().passed());

        let expect_x =
            Mat::from_rows(f.clone(), 3, &[vec![0, 1, 0], vec![0, 0, 2], vec![0, 0, 0]]);
        let expect_y =
            Mat::from_rows(f.clone(), 3, &[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(ind.module.action_basis(0), &expect_x);
        assert_eq!(ind.module.action_basis(1), &expect_y);
        assert_eq!(
            ind.module.action_basis(2),
            &Mat::identity(f.clone(), 3)
        );

        // Irreducible: every nonzero basis vector spins up the whole module.
        for j in 0..3 {
            let mut e = vec![0; 3];
            e[j] = 1;
            assert_eq!(ind.module.spin_vector(&e).dim(), 3);
        }
    }

    #[test]
    fn frobenius_reciprocity_dimensions_hold_for_induced_modules() {
        let tx = testalg::tx(3);
        let f = fp(3);
        let t_line = Subspace::from_rows(f.clone(), 2, &[vec![1, 0]]);
        let ctx = tx.subalgebra(&t_line).unwrap();
        let m = Module::adjoint(&tx);
        for mu in 0..3u16 {
            let v = Module::one_dimensional(ctx.algebra.clone(), &[mu], &[0]).unwrap();
            let ind = induce(&tx, &ctx, &v, &[0, 0], 1 << 20).unwrap();
            let lhs = hom_space(&ind.module, &m, 1 << 12).unwrap().len();
            let rhs = hom_space(&v, &m.restrict(&ctx), 1 << 12).unwrap().len();
            assert_eq!(lhs, rhs, "reciprocity fails at weight {mu}");
        }
    }

    #[test]
    fn induction_is_transitive_up_to_isomorphism() {
        let h3 = testalg::heisenberg(3);
        let f = fp(3);
        // Chain <z> ⊂ <y, z> ⊂ H, chi(z) = 1.
        let zline = Subspace::from_rows(f.clone(), 3, &[vec![0, 0, 1]]);
        let yz = Subspace::from_rows(f.clone(), 3, &[vec![0, 1, 0], vec![0, 0, 1]]);
        let chi = vec![0, 0, 1];

        let ctx_z = h3.subalgebra(&zline).unwrap();
        let ctx_yz = h3.subalgebra(&yz).unwrap();
        let v = Module::one_dimensional(ctx_z.algebra.clone(), &[1], &[1]).unwrap();
        let direct = induce(&h3, &ctx_z, &v, &chi, 1 << 20).unwrap();

        // Inner step: <z> inside the algebra of <y, z>.
        let inner_line = Subspace::from_rows(f.clone(), 2, &[vec![0, 1]]);
        let inner_ctx = ctx_yz.algebra.subalgebra(&inner_line).unwrap();
        let v_inner = Module::one_dimensional(inner_ctx.algebra.clone(), &[1], &[1]).unwrap();
        let mid = induce(&ctx_yz.algebra, &inner_ctx, &v_inner, &[0, 1], 1 << 20).unwrap();
        let outer = induce(&h3, &ctx_yz, &mid.module, &chi, 1 << 20).unwrap();

        assert_eq!(direct.module.dim(), 9);
        assert_eq!(outer.module.dim(), 9);
        assert!(is_isomorphic_small(&direct.module, &outer.module, 1 << 12).unwrap());
    }

    #[test]
    fn inflation_and_coinvariants_round_trip() {
        let tx = testalg::tx(3);
        let f = fp(3);
        let xline = Subspace::from_rows(f.clone(), 2, &[vec![0, 1]]);
        let q = tx.quotient(&xline).unwrap();
        let v = Module::one_dimensional(q.algebra.clone(), &[2], &[0]).unwrap();
        let up = inflate(&tx, &q, &v).unwrap();
        assert!(up.validate().passed());
        assert_eq!(up.action_basis(0).get(0, 0), 2);
        assert!(up.action_basis(1).is_zero());
        let (back, _) = coinvariants(&up, &q).unwrap();
        assert_eq!(back.dim(), 1);
        assert_eq!(back.action_basis(0).get(0, 0), 2);
    }

    #[test]
    fn hom_spaces_match_invariant_computations() {
        let h3 = testalg::heisenberg(3);
        let f = fp(3);
        // The chi(z)=1 irreducible from the induction test.
        let sub = Subspace::from_rows(f.clone(), 3, &[vec![1, 0, 0], vec![0, 0, 1]]);
        let ctx = h3.subalgebra(&sub).unwrap();
        let v = Module::one_dimensional(ctx.algebra.clone(), &[0, 1], &[0, 1]).unwrap();
        let m = induce(&h3, &ctx, &v, &[0, 0, 1], 1 << 20).unwrap().module;

        // End(M) is one-dimensional...
        assert_eq!(end_dim(&m, 1 << 12).unwrap(), 1);
        // ...and agrees with the invariants of M ⊗ M*, computed independently.
        let mm = m.tensor(&m.dual()).unwrap();
        assert_eq!(mm.chi(), &[0, 0, 0]);
        assert!(mm.validate().passed());
        assert_eq!(mm.invariants().dim(), 1);

        // Hom out of the trivial module picks out invariants of the target.
        let adj = Module::adjoint(&h3);
        let triv = Module::trivial(h3.clone());
        assert_eq!(hom_space(&triv, &adj, 1 << 12).unwrap().len(), 1);
    }

    #[test]
    fn regular_module_of_a_torus_splits_into_all_weights() {
        let tx = testalg::tx(3);
        let f = fp(3);
        let xline = Subspace::from_rows(f.clone(), 2, &[vec![0, 1]]);
        let q = tx.quotient(&xline).unwrap();
        let torus = q.algebra.clone();
        let env = Envelope::new(torus.clone(), &[0]).unwrap();
        let reg = Module::regular(&env, 1 << 10).unwrap();
        assert_eq!(reg.dim(), 3);
        assert!(reg.validate().passed());
        // t acts semisimply with all three eigenvalues: each weight space is
        // an invariant line.
        let rho = reg.action_basis(0);
        for lam in 0..3u16 {
            let shifted = rho.sub(&Mat::identity(f.clone(), 3).scale(lam));
            assert_eq!(shifted.kernel().rows(), 1);
        }
    }
}
