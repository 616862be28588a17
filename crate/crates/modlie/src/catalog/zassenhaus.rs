//! The five-dimensional minimal p-envelope of the Zassenhaus algebra W(1;2)
//! in characteristic two, realized by derivations of the divided power
//! algebra O(1;2).
//!
//! Basis (in order): e_{-2} = d^2, e_{-1} = d, e_0 = x^(1) d,
//! e_1 = x^(2) d, e_2 = x^(3) d.  The element d^2 is a derivation only
//! because the characteristic is two; it completes span(e_{-1}, ..., e_2)
//! to a p-subalgebra of Der(O(1;2)).

use std::sync::Arc;

use crate::field::{field, Scalar};
use crate::lie::LieAlgebra;
use crate::matrix::Subspace;
use crate::{Error, Result};

use super::functions::DividedPower12;
use super::operator::{algebra_from_operators, OperatorSpan};

pub struct Zassenhaus {
    pub algebra: Arc<LieAlgebra>,
    pub realization: OperatorSpan,
    /// Degrees (-1, -1, 0, 0, 0) adapting the basis to the depth-one
    /// filtration with L_(0) = the Borel subalgebra below.
    pub degrees: Vec<i64>,
    /// W-degrees (-2, -1, 0, 1, 2) of the natural grading of Der(O(1;2)).
    pub w_degrees: Vec<i64>,
}

impl Zassenhaus {
    /// Indices of e_{-2}, ..., e_2 in the basis.
    pub fn idx(&self, k: i64) -> usize {
        (k + 2) as usize
    }

    pub fn basis_elt(&self, k: i64) -> Vec<Scalar> {
        let mut v = vec![0; 5];
        v[self.idx(k)] = 1;
        v
    }

    /// The Borel subalgebra B = span(e_0, e_1, e_2).
    pub fn borel(&self) -> Subspace {
        let f = self.algebra.field().clone();
        Subspace::from_rows(
            f,
            5,
            &[self.basis_elt(0), self.basis_elt(1), self.basis_elt(2)],
        )
    }

    /// The simple derived subalgebra span(e_{-1}, e_0, e_1), computed rather
    /// than asserted in `derived_space`.
    pub fn derived_space(&self) -> Subspace {
        self.algebra.derived_series()[1].clone()
    }

    /// The two distinguished toral elements t_+ = e_0 + e_1 + e_2 and
    /// t_- = e_0 + e_{-1} + e_{-2}.
    pub fn toral_pair(&self) -> [Vec<Scalar>; 2] {
        let f = self.algebra.field();
        let mut plus = vec![0; 5];
        let mut minus = vec![0; 5];
        for k in [0, 1, 2] {
            plus[self.idx(k)] = f.from_int(1);
        }
        for k in [0, -1, -2] {
            minus[self.idx(k)] = f.from_int(1);
        }
        [plus, minus]
    }
}

pub fn zassenhaus(k: u32) -> Result<Zassenhaus> {
    let f = field(2, k)?;
    let o = DividedPower12::new(f.clone())?;
    let d = o.d();
    let mut ops = vec![d.mul(&d), d.clone()];
    for i in 1..=3 {
        ops.push(o.mult_op(&o.monomial(i)).mul(&d));
    }
    // Every operator must be a derivation of O(1;2); d^2 qualifies only in
    // characteristic two.
    for (t, op) in ops.iter().enumerate() {
        for i in 0..4 {
            for j in 0..4 {
                let prod = o.mul(&o.monomial(i), &o.monomial(j));
                let lhs = op.apply_col(&prod);
                let ra = o.mul(&op.apply_col(&o.monomial(i)), &o.monomial(j));
                let rb = o.mul(&o.monomial(i), &op.apply_col(&o.monomial(j)));
                let rhs: Vec<Scalar> =
                    ra.iter().zip(&rb).map(|(&a, &b)| f.add(a, b)).collect();
                if lhs != rhs {
                    return Err(Error::Invalid(format!(
                        "operator {t} is not a derivation of O(1;2)"
                    )));
                }
            }
        }
    }
    let names = vec![
        "e[-2]".to_string(),
        "e[-1]".to_string(),
        "e[0]".to_string(),
        "e[1]".to_string(),
        "e[2]".to_string(),
    ];
    let (algebra, realization) = algebra_from_operators(names, ops)?;
    Ok(Zassenhaus {
        algebra,
        realization,
        degrees: vec![-1, -1, 0, 0, 0],
        w_degrees: vec![-2, -1, 0, 1, 2],
    })
}
