//! Builds a restricted Lie algebra from a family of linear operators: the
//! structure constants come from operator commutators, and the p-map from
//! operator p-th powers.  Nothing about the bracket or p-map is entered by
//! hand; closure of the span under both operations is checked, and the
//! resulting data still passes the full Jacobi / p-compatibility validation.

use std::sync::Arc;

use crate::field::Scalar;
use crate::lie::{sparse, AlgebraData, LieAlgebra};
use crate::matrix::{Mat, Subspace};
use crate::{Error, Result};

/// The realization kept alongside a constructed algebra: the operators
/// themselves and their span inside End(A), flattened row-major.
pub struct OperatorSpan {
    pub ops: Vec<Mat>,
    pub span: Subspace,
    flat_len: usize,
    /// Expresses a flattened operator in terms of the original operator list:
    /// row r of `span.basis()` equals sum_i expr[r][i] * ops[i].
    expr: Mat,
}

fn flatten(m: &Mat) -> Vec<Scalar> {
    let mut v = Vec::with_capacity(m.rows() * m.cols());
    for r in m.rows_iter() {
        v.extend_from_slice(r);
    }
    v
}

impl OperatorSpan {
    /// Coordinates of an operator in the original operator list, or None if
    /// it lies outside the span.
    pub fn coordinates(&self, op: &Mat) -> Option<Vec<Scalar>> {
        let v = flatten(op);
        debug_assert_eq!(v.len(), self.flat_len);
        let in_echelon = self.span.coordinates(&v)?;
        let f = self.span.basis().field();
        let mut out = vec![0; self.ops.len()];
        for (r, &c) in in_echelon.iter().enumerate() {
            if c != 0 {
                for i in 0..self.ops.len() {
                    out[i] = f.add(out[i], f.mul(c, self.expr.get(r, i)));
                }
            }
        }
        Some(out)
    }

    pub fn contains(&self, op: &Mat) -> bool {
        self.span.contains(&flatten(op))
    }
}

/// Assembles the algebra spanned by `ops` (which must be linearly
/// independent).  Fails if the span is not closed under commutators or
/// operator p-th powers, or if the resulting data is not a restricted Lie
/// algebra.
pub fn algebra_from_operators(
    names: Vec<String>,
    ops: Vec<Mat>,
) -> Result<(Arc<LieAlgebra>, OperatorSpan)> {
    if ops.is_empty() {
        return Err(Error::Invalid("no operators given".into()));
    }
    let f = ops[0].field().clone();
    let n = ops.len();
    let flat_len = ops[0].rows() * ops[0].cols();
    let flat_rows: Vec<Vec<Scalar>> = ops.iter().map(flatten).collect();

    // Echelonize the flattened operators and keep the transform so we can
    // express arbitrary operators in the original list.
    let b = Mat::from_rows(f.clone(), flat_len, &flat_rows);
    let aug = b.hstack(&Mat::identity(f.clone(), n));
    let mut red = aug.clone();
    red.rref_in_place();
    // Rows whose left part is zero witness a dependency.
    let span = Subspace::from_rows(f.clone(), flat_len, &flat_rows);
    if span.dim() != n {
        return Err(Error::Invalid(format!(
            "operators are linearly dependent: span has dimension {} < {}",
            span.dim(),
            n
        )));
    }
    let mut expr_rows = Vec::with_capacity(n);
    for r in 0..n {
        let row = red.row_vec(r);
        expr_rows.push(row[flat_len..].to_vec());
    }
    let expr = Mat::from_rows(f.clone(), n, &expr_rows);
    // Sanity: the recorded transform really rebuilds the echelon basis.
    #[cfg(debug_assertions)]
    for (r, row) in span.basis().rows_iter().enumerate() {
        let mut rebuilt = vec![0; flat_len];
        for i in 0..n {
            let c = expr.get(r, i);
            if c != 0 {
                crate::matrix::vec_add_scaled(&f, &mut rebuilt, &flat_rows[i], c);
            }
        }
        debug_assert_eq!(rebuilt, row, "operator span transform is inconsistent");
    }

    let real = OperatorSpan {
        ops,
        span,
        flat_len,
        expr,
    };

    let mut brackets = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let comm = real.ops[i].mul(&real.ops[j]).sub(&real.ops[j].mul(&real.ops[i]));
            let coords = real.coordinates(&comm).ok_or_else(|| {
                Error::Invalid(format!(
                    "commutator of operators {i} and {j} leaves the span"
                ))
            })?;
            brackets.push((i, j, sparse(&coords)));
        }
    }
    let p = f.p() as u64;
    let mut pmap = Vec::with_capacity(n);
    for i in 0..n {
        let pw = real.ops[i].pow(p);
        let coords = real.coordinates(&pw).ok_or_else(|| {
            Error::Invalid(format!("p-th power of operator {i} leaves the span"))
        })?;
        pmap.push(sparse(&coords));
    }

    let alg = AlgebraData {
        field: f,
        names,
        brackets,
        pmap,
    }
    .build()?;
    Ok((alg, real))
}
