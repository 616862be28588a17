//! Reduced enveloping algebras u(L, χ) with a memoized straightener.
//!
//! Fix an ordered basis e_0 < ... < e_{n-1} of L and a linear form χ.  The
//! algebra u(L, χ) has basis the ordered monomials x^α = e_0^{α_0} ···
//! e_{n-1}^{α_{n-1}} with 0 ≤ α_i < p, subject to
//!
//! ```text
//! e_j e_i = e_i e_j + [e_j, e_i]          (straightening)
//! e_i^p  = e_i^[p] + χ(e_i)^p · 1         (p-th power reduction)
//! ```
//!
//! so dim u(L, χ) = p^n.  Elements are sparse maps from exponent vectors to
//! scalars; iteration order is the monomial order, which keeps every
//! downstream artifact deterministic.
//!
//! The one primitive is right multiplication of a monomial by a generator.
//! Writing j for the largest index in the monomial: if i ≥ j the generator
//! appends (reducing e_i^p when the exponent fills up), otherwise one e_j is
//! peeled off and commuted past e_i.  Bracket and p-reduction steps strictly
//! drop total degree, and the only same-degree recursion lands in the append
//! case, so the rewriting terminates; results are memoized per monomial.

use crate::field::{Field, Scalar};
use crate::lie::LieAlgebra;
use crate::matrix::Mat;
use crate::{Error, Result};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

/// Exponent vector of a PBW monomial; entries are < p.
pub type Expo = Vec<u8>;

/// Sparse element of u(L, χ): monomial -> nonzero coefficient.
pub type UElt = BTreeMap<Expo, Scalar>;

type Straightened = Arc<Vec<(Expo, Scalar)>>;

pub struct Envelope {
    alg: Arc<LieAlgebra>,
    chi: Vec<Scalar>,
    /// χ(e_i)^p, the constant produced when e_i^p reduces.
    chi_p: Vec<Scalar>,
    memo: Mutex<HashMap<(Expo, usize), Straightened>>,
}

impl Envelope {
    pub fn new(alg: Arc<LieAlgebra>, chi: &[Scalar]) -> Result<Self> {
        if chi.len() != alg.dim() {
            return Err(Error::Character(format!(
                "character has {} entries, algebra dimension is {}",
                chi.len(),
                alg.dim()
            )));
        }
        let f = alg.field().clone();
        for &c in chi {
            f.check_scalar(c as u64)?;
        }
        let p = f.p() as u64;
        let chi_p = chi.iter().map(|&c| f.pow(c, p)).collect();
        Ok(Envelope {
            alg,
            chi: chi.to_vec(),
            chi_p,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.alg
    }
    pub fn field(&self) -> &Arc<Field> {
        self.alg.field()
    }
    pub fn chi(&self) -> &[Scalar] {
        &self.chi
    }
    fn p(&self) -> u8 {
        self.field().p() as u8
    }

    /// χ extended linearly.
    pub fn chi_of(&self, x: &[Scalar]) -> Scalar {
        let f = self.field();
        let mut acc = 0;
        for (i, &xi) in x.iter().enumerate() {
            acc = f.add(acc, f.mul(xi, self.chi[i]));
        }
        acc
    }

    /// p^n if it fits in the cap, otherwise a resource error.
    pub fn dense_dim(&self, cap: u64) -> Result<usize> {
        let p = self.field().p() as u64;
        let needed = (0..self.alg.dim()).try_fold(1u64, |acc, _| acc.checked_mul(p));
        match needed {
            Some(d) if d <= cap => Ok(d as usize),
            _ => Err(Error::ResourceCap {
                what: "enveloping algebra dimension p^n".into(),
                needed: needed.unwrap_or(u64::MAX),
                cap,
            }),
        }
    }

    pub fn zero(&self) -> UElt {
        UElt::new()
    }

    pub fn one(&self) -> UElt {
        let mut e = UElt::new();
        e.insert(vec![0; self.alg.dim()], 1);
        e
    }

    pub fn monomial(&self, alpha: &[u8]) -> UElt {
        assert_eq!(alpha.len(), self.alg.dim());
        assert!(alpha.iter().all(|&a| a < self.p()));
        let mut e = UElt::new();
        e.insert(alpha.to_vec(), 1);
        e
    }

    pub fn gen(&self, i: usize) -> UElt {
        let mut alpha = vec![0u8; self.alg.dim()];
        alpha[i] = 1;
        self.monomial(&alpha)
    }

    /// Degree-1 image of a Lie algebra element.
    pub fn embed(&self, x: &[Scalar]) -> UElt {
        let mut e = UElt::new();
        for (i, &c) in x.iter().enumerate() {
            if c != 0 {
                let mut alpha = vec![0u8; self.alg.dim()];
                alpha[i] = 1;
                e.insert(alpha, c);
            }
        }
        e
    }

    pub fn add_assign(&self, a: &mut UElt, b: &UElt) {
        let f = self.field();
        for (m, &c) in b {
            self.add_term(a, m, c, f);
        }
    }

    fn add_term(&self, a: &mut UElt, m: &Expo, c: Scalar, f: &Arc<Field>) {
        if c == 0 {
            return;
        }
        match a.get_mut(m) {
            Some(slot) => {
                *slot = f.add(*slot, c);
                if *slot == 0 {
                    a.remove(m);
                }
            }
            None => {
                a.insert(m.clone(), c);
            }
        }
    }

    pub fn scale(&self, a: &UElt, c: Scalar) -> UElt {
        let f = self.field();
        if c == 0 {
            return UElt::new();
        }
        a.iter().map(|(m, &v)| (m.clone(), f.mul(v, c))).collect()
    }

    pub fn sub(&self, a: &UElt, b: &UElt) -> UElt {
        let mut out = a.clone();
        let f = self.field();
        for (m, &c) in b {
            self.add_term(&mut out, m, f.neg(c), f);
        }
        out
    }

    /// Straightened form of x^α · e_i.
    fn mono_times_gen(&self, alpha: &[u8], i: usize) -> Straightened {
        let key = (alpha.to_vec(), i);
        if let Some(hit) = self.memo.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let f = self.field().clone();
        let p = self.p();
        let top = alpha.iter().rposition(|&a| a > 0);
        let mut acc = UElt::new();
        if top.map_or(true, |j| i >= j) {
            // Append: the generator lands at or past the last factor.
            if alpha[i] + 1 < p {
                let mut next = alpha.to_vec();
                next[i] += 1;
                self.add_term(&mut acc, &next, 1, &f);
            } else {
                // x^α e_i = x^α̂ e_i^p with α̂_i = 0; reduce the p-th power.
                let mut hat = alpha.to_vec();
                hat[i] = 0;
                self.add_term(&mut acc, &hat, self.chi_p[i], &f);
                for (k, &c) in self.alg.pmap_basis(i).iter().enumerate() {
                    if c != 0 {
                        for &(ref m, v) in self.mono_times_gen(&hat, k).iter() {
                            self.add_term(&mut acc, m, f.mul(v, c), &f);
                        }
                    }
                }
            }
        } else {
            // Peel one e_j (i < j):
            //   x^α e_i = (x^{α-δ_j} e_i) e_j + x^{α-δ_j} [e_j, e_i].
            let j = top.unwrap();
            let mut peeled = alpha.to_vec();
            peeled[j] -= 1;
            for &(ref m, v) in self.mono_times_gen(&peeled, i).iter() {
                for &(ref m2, v2) in self.mono_times_gen(m, j).iter() {
                    self.add_term(&mut acc, m2, f.mul(v, v2), &f);
                }
            }
            for (k, &c) in self.alg.bracket_basis(j, i).iter().enumerate() {
                if c != 0 {
                    for &(ref m, v) in self.mono_times_gen(&peeled, k).iter() {
                        self.add_term(&mut acc, m, f.mul(v, c), &f);
                    }
                }
            }
        }
        let result: Straightened = Arc::new(acc.into_iter().collect());
        self.memo.lock().unwrap().insert(key, result.clone());
        result
    }

    pub fn mul_by_gen(&self, a: &UElt, i: usize) -> UElt {
        let f = self.field();
        let mut out = UElt::new();
        for (m, &c) in a {
            for &(ref m2, v) in self.mono_times_gen(m, i).iter() {
                self.add_term(&mut out, m2, f.mul(c, v), f);
            }
        }
        out
    }

    /// a · x^β, folding the generators of β in increasing index order.
    fn mul_by_mono(&self, a: &UElt, beta: &[u8]) -> UElt {
        let mut cur = a.clone();
        for (i, &b) in beta.iter().enumerate() {
            for _ in 0..b {
                cur = self.mul_by_gen(&cur, i);
            }
        }
        cur
    }

    pub fn mul(&self, a: &UElt, b: &UElt) -> UElt {
        let f = self.field();
        let mut out = UElt::new();
        for (beta, &c) in b {
            let part = self.mul_by_mono(a, beta);
            for (m, &v) in &part {
                self.add_term(&mut out, m, f.mul(c, v), f);
            }
        }
        out
    }

    pub fn pow(&self, a: &UElt, e: u64) -> UElt {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    // ----- dense vector view, for matrix work -------------------------------

    /// Monomial rank with e_0 least significant: Σ α_i p^i.
    pub fn rank_of(&self, alpha: &[u8]) -> usize {
        let p = self.p() as usize;
        alpha.iter().rev().fold(0, |acc, &a| acc * p + a as usize)
    }

    pub fn unrank(&self, mut idx: usize) -> Expo {
        let p = self.p() as usize;
        let mut alpha = vec![0u8; self.alg.dim()];
        for slot in alpha.iter_mut() {
            *slot = (idx % p) as u8;
            idx /= p;
        }
        debug_assert_eq!(idx, 0);
        alpha
    }

    /// All monomials in rank order.
    pub fn monomials(&self, cap: u64) -> Result<Vec<Expo>> {
        let d = self.dense_dim(cap)?;
        Ok((0..d).map(|i| self.unrank(i)).collect())
    }

    pub fn to_dense(&self, a: &UElt, cap: u64) -> Result<Vec<Scalar>> {
        let d = self.dense_dim(cap)?;
        let mut v = vec![0 as Scalar; d];
        for (m, &c) in a {
            v[self.rank_of(m)] = c;
        }
        Ok(v)
    }

    pub fn from_dense(&self, v: &[Scalar]) -> UElt {
        let mut e = UElt::new();
        for (idx, &c) in v.iter().enumerate() {
            if c != 0 {
                e.insert(self.unrank(idx), c);
            }
        }
        e
    }

    /// Matrix of left multiplication by e_i on the dense monomial basis
    /// (columns indexed by monomial rank).  These are the action matrices of
    /// the left regular module.
    pub fn gen_action_matrix(&self, i: usize, cap: u64) -> Result<Mat> {
        let d = self.dense_dim(cap)?;
        let f = self.field().clone();
        let mut m = Mat::zero(f, d, d);
        for col in 0..d {
            let alpha = self.unrank(col);
            let prod = self.mul(&self.gen(i), &self.monomial(&alpha));
            for (mono, &c) in &prod {
                m.set(self.rank_of(mono), col, c);
            }
        }
        Ok(m)
    }

    /// Matrix of right multiplication by `a` on the dense monomial basis.
    pub fn right_mult_matrix(&self, a: &UElt, cap: u64) -> Result<Mat> {
        let d = self.dense_dim(cap)?;
        let f = self.field().clone();
        let mut m = Mat::zero(f, d, d);
        for col in 0..d {
            let alpha = self.unrank(col);
            let prod = self.mul(&self.monomial(&alpha), a);
            for (mono, &c) in &prod {
                m.set(self.rank_of(mono), col, c);
            }
        }
        Ok(m)
    }

    /// Matrix of left multiplication by `a`.
    pub fn left_mult_matrix(&self, a: &UElt, cap: u64) -> Result<Mat> {
        let d = self.dense_dim(cap)?;
        let f = self.field().clone();
        let mut m = Mat::zero(f, d, d);
        for col in 0..d {
            let alpha = self.unrank(col);
            let prod = self.mul(a, &self.monomial(&alpha));
            for (mono, &c) in &prod {
                m.set(self.rank_of(mono), col, c);
            }
        }
        Ok(m)
    }

    pub fn total_degree(alpha: &[u8]) -> usize {
        alpha.iter().map(|&a| a as usize).sum()
    }
}
