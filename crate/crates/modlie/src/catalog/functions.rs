//! The commutative function algebras that the named algebras act on: a
//! truncated polynomial algebra in two variables, and a four-dimensional
//! divided power algebra in characteristic two.

use std::sync::Arc;

use crate::field::{Field, Scalar};
use crate::matrix::Mat;
use crate::{Error, Result};

/// F[x, y] / (x^p, y^p) with monomial basis x^a y^b indexed by a + p*b.
pub struct TruncPoly2 {
    field: Arc<Field>,
    p: usize,
}

impl TruncPoly2 {
    pub fn new(field: Arc<Field>) -> TruncPoly2 {
        let p = field.p() as usize;
        TruncPoly2 { field, p }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    pub fn p(&self) -> usize {
        self.p
    }
    pub fn dim(&self) -> usize {
        self.p * self.p
    }
    pub fn idx(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < self.p && b < self.p);
        a + self.p * b
    }
    pub fn exps(&self, i: usize) -> (usize, usize) {
        (i % self.p, i / self.p)
    }

    pub fn one(&self) -> Vec<Scalar> {
        self.monomial(0, 0)
    }

    pub fn monomial(&self, a: usize, b: usize) -> Vec<Scalar> {
        let mut v = vec![0; self.dim()];
        v[self.idx(a, b)] = 1;
        v
    }

    /// Truncated product: exponents at or beyond p vanish.
    pub fn mul(&self, f: &[Scalar], g: &[Scalar]) -> Vec<Scalar> {
        let fld = &self.field;
        let mut out = vec![0; self.dim()];
        for (i, &ci) in f.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            let (a1, b1) = self.exps(i);
            for (j, &cj) in g.iter().enumerate() {
                if cj == 0 {
                    continue;
                }
                let (a2, b2) = self.exps(j);
                if a1 + a2 < self.p && b1 + b2 < self.p {
                    let t = self.idx(a1 + a2, b1 + b2);
                    out[t] = fld.add(out[t], fld.mul(ci, cj));
                }
            }
        }
        out
    }

    /// Multiplication operator g -> f*g.
    pub fn mult_op(&self, f: &[Scalar]) -> Mat {
        let mut m = Mat::zero(self.field.clone(), self.dim(), self.dim());
        for j in 0..self.dim() {
            let mut e = vec![0; self.dim()];
            e[j] = 1;
            let col = self.mul(f, &e);
            for (i, &c) in col.iter().enumerate() {
                if c != 0 {
                    m.set(i, j, c);
                }
            }
        }
        m
    }

    pub fn dx(&self) -> Mat {
        let mut m = Mat::zero(self.field.clone(), self.dim(), self.dim());
        for a in 1..self.p {
            for b in 0..self.p {
                m.set(self.idx(a - 1, b), self.idx(a, b), self.field.from_int(a as i64));
            }
        }
        m
    }

    pub fn dy(&self) -> Mat {
        let mut m = Mat::zero(self.field.clone(), self.dim(), self.dim());
        for a in 0..self.p {
            for b in 1..self.p {
                m.set(self.idx(a, b - 1), self.idx(a, b), self.field.from_int(b as i64));
            }
        }
        m
    }

    /// Apply a polynomial map given as a matrix to a function, convenience for
    /// building membership equations.
    pub fn apply(&self, op: &Mat, f: &[Scalar]) -> Vec<Scalar> {
        op.apply_col(f)
    }
}

/// The divided power algebra O(1;2) over F_2: basis x^(0), ..., x^(3) with
/// x^(i) x^(j) = binom(i+j, i) x^(i+j), truncated beyond x^(3).
pub struct DividedPower12 {
    field: Arc<Field>,
}

impl DividedPower12 {
    pub fn new(field: Arc<Field>) -> Result<DividedPower12> {
        if field.p() != 2 {
            return Err(Error::Invalid(
                "divided power algebra O(1;2) is only built in characteristic 2".into(),
            ));
        }
        Ok(DividedPower12 { field })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    pub fn dim(&self) -> usize {
        4
    }

    fn binom_mod2(n: usize, k: usize) -> u64 {
        // Lucas: binom(n, k) is odd iff k's bits are a subset of n's bits.
        if (k & n) == k {
            1
        } else {
            0
        }
    }

    pub fn mul(&self, f: &[Scalar], g: &[Scalar]) -> Vec<Scalar> {
        let fld = &self.field;
        let mut out = vec![0; 4];
        for (i, &ci) in f.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            for (j, &cj) in g.iter().enumerate() {
                if cj == 0 || i + j > 3 {
                    continue;
                }
                if Self::binom_mod2(i + j, i) == 1 {
                    out[i + j] = fld.add(out[i + j], fld.mul(ci, cj));
                }
            }
        }
        out
    }

    pub fn mult_op(&self, f: &[Scalar]) -> Mat {
        let mut m = Mat::zero(self.field.clone(), 4, 4);
        for j in 0..4 {
            let mut e = vec![0; 4];
            e[j] = 1;
            let col = self.mul(f, &e);
            for (i, &c) in col.iter().enumerate() {
                if c != 0 {
                    m.set(i, j, c);
                }
            }
        }
        m
    }

    pub fn monomial(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![0; 4];
        v[i] = 1;
        v
    }

    /// The divided power derivative: x^(i) -> x^(i-1).
    pub fn d(&self) -> Mat {
        let mut m = Mat::zero(self.field.clone(), 4, 4);
        for i in 1..4 {
            m.set(i - 1, i, 1);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field;

    #[test]
    fn truncated_polynomials_multiply_and_differentiate() {
        let f = field(5, 1).unwrap();
        let o = TruncPoly2::new(f.clone());
        // (x^3 y) * (x^2) = x^5 y = 0 by truncation.
        assert!(o
            .mul(&o.monomial(3, 1), &o.monomial(2, 0))
            .iter()
            .all(|&c| c == 0));
        // dx(x^4 y^2) = 4 x^3 y^2.
        let d = o.dx().apply_col(&o.monomial(4, 2));
        assert_eq!(d[o.idx(3, 2)], 4);
        assert_eq!(d.iter().filter(|&&c| c != 0).count(), 1);
        // dx and dy commute as operators.
        assert_eq!(o.dx().mul(&o.dy()), o.dy().mul(&o.dx()));
        // Leibniz for the multiplication operators: dx ∘ m_f - m_f ∘ dx = m_{dx f}.
        let fpoly = o.mul(&o.monomial(1, 1), &o.monomial(2, 0)); // x^3 y
        let lhs = o.dx().mul(&o.mult_op(&fpoly)).sub(&o.mult_op(&fpoly).mul(&o.dx()));
        assert_eq!(lhs, o.mult_op(&o.dx().apply_col(&fpoly)));
    }

    #[test]
    fn divided_powers_follow_the_binomial_rule() {
        let f = field(2, 1).unwrap();
        let o = DividedPower12::new(f.clone()).unwrap();
        // x^(1) x^(1) = binom(2,1) x^(2) = 0 in characteristic 2.
        assert!(o.mul(&o.monomial(1), &o.monomial(1)).iter().all(|&c| c == 0));
        // x^(1) x^(2) = binom(3,1) x^(3) = x^(3).
        assert_eq!(o.mul(&o.monomial(1), &o.monomial(2)), o.monomial(3));
        // d is a derivation: d(x^(1) x^(2)) = d(x^(3)) = x^(2) and the
        // Leibniz expansion gives x^(0) x^(2) + x^(1) x^(1) = x^(2).
        let prod = o.mul(&o.monomial(1), &o.monomial(2));
        let lhs = o.d().apply_col(&prod);
        let rhs_a = o.mul(&o.d().apply_col(&o.monomial(1)), &o.monomial(2));
        let rhs_b = o.mul(&o.monomial(1), &o.d().apply_col(&o.monomial(2)));
        let rhs: Vec<_> = rhs_a
            .iter()
            .zip(&rhs_b)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        assert_eq!(lhs, rhs);
        // d^2 is also a derivation in characteristic 2 (it will serve as a
        // basis element of the p-envelope).
        let dd = o.d().mul(&o.d());
        for i in 0..4 {
            for j in 0..4 {
                let prod = o.mul(&o.monomial(i), &o.monomial(j));
                let lhs = dd.apply_col(&prod);
                let ra = o.mul(&dd.apply_col(&o.monomial(i)), &o.monomial(j));
                let rb = o.mul(&o.monomial(i), &dd.apply_col(&o.monomial(j)));
                let rhs: Vec<_> = ra.iter().zip(&rb).map(|(&a, &b)| f.add(a, b)).collect();
                assert_eq!(lhs, rhs, "d^2 fails Leibniz on ({i}, {j})");
            }
        }
    }
}
