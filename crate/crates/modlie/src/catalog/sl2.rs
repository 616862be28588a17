//! sl2 realized by trace-zero 2x2 matrices, its irreducible restricted
//! modules V(lambda), and transport of those modules along an sl2-triple in
//! any three-dimensional restricted Lie algebra.

use std::sync::Arc;

use crate::field::{field, Scalar};
use crate::lie::LieAlgebra;
use crate::matrix::{solve, Mat, SolveOutcome};
use crate::module::Module;
use crate::{Error, Result};

use super::operator::{algebra_from_operators, OperatorSpan};

/// sl2 with basis (e, h, f): e = E01, h = diag(1, -1), f = E10.
pub fn sl2(p: u32, k: u32) -> Result<(Arc<LieAlgebra>, OperatorSpan)> {
    if p == 2 {
        return Err(Error::Invalid(
            "sl2 is not built in characteristic 2 (h and the identity collide)".into(),
        ));
    }
    let fld = field(p, k)?;
    let mut e = Mat::zero(fld.clone(), 2, 2);
    e.set(0, 1, 1);
    let mut h = Mat::zero(fld.clone(), 2, 2);
    h.set(0, 0, 1);
    h.set(1, 1, fld.neg(1));
    let mut f = Mat::zero(fld.clone(), 2, 2);
    f.set(1, 0, 1);
    algebra_from_operators(vec!["e".into(), "h".into(), "f".into()], vec![e, h, f])
}

/// The irreducible restricted module of highest weight lambda (dimension
/// lambda + 1), over an algebra with an (e, h, f) basis in that order:
///   h v_i = (lambda - 2i) v_i,  f v_i = v_{i+1},  e v_i = i(lambda - i + 1) v_{i-1}.
pub fn v_lambda(alg: &Arc<LieAlgebra>, lambda: u32) -> Result<Module> {
    let fld = alg.field().clone();
    let p = fld.p();
    if lambda >= p {
        return Err(Error::Invalid(format!(
            "highest weight {lambda} is not restricted for p = {p}"
        )));
    }
    let d = lambda as usize + 1;
    let mut rho_e = Mat::zero(fld.clone(), d, d);
    let mut rho_h = Mat::zero(fld.clone(), d, d);
    let mut rho_f = Mat::zero(fld.clone(), d, d);
    for i in 0..d {
        rho_h.set(i, i, fld.from_int(lambda as i64 - 2 * i as i64));
        if i + 1 < d {
            rho_f.set(i + 1, i, 1);
        }
        if i > 0 {
            rho_e.set(
                i - 1,
                i,
                fld.from_int(i as i64 * (lambda as i64 - i as i64 + 1)),
            );
        }
    }
    Module::new(alg.clone(), vec![0; 3], vec![rho_e, rho_h, rho_f])?.checked()
}

/// Builds the V(lambda) action on a 3-dimensional algebra from an explicit
/// sl2-triple (e, h, f) inside it: each basis element is expressed in the
/// triple and acts accordingly.
pub fn module_via_triple(
    target: &Arc<LieAlgebra>,
    triple: &[Vec<Scalar>; 3],
    lambda: u32,
) -> Result<Module> {
    if target.dim() != 3 {
        return Err(Error::Precondition(
            "sl2-triple transport needs a 3-dimensional algebra".into(),
        ));
    }
    let fld = target.field().clone();
    let (self_alg, _) = sl2(fld.p(), fld.k())?;
    let v = v_lambda(&self_alg, lambda)?;
    // Columns of T are the triple; solve T c = e_j for each j.
    let mut t = Mat::zero(fld.clone(), 3, 3);
    for (c, vec) in triple.iter().enumerate() {
        for (r, &x) in vec.iter().enumerate() {
            t.set(r, c, x);
        }
    }
    let coords = match solve(&t, &Mat::identity(fld.clone(), 3)) {
        SolveOutcome::Solution { particular, .. } => particular,
        SolveOutcome::Inconsistent => {
            return Err(Error::Precondition("triple does not span the algebra".into()))
        }
    };
    let mut action = Vec::with_capacity(3);
    for j in 0..3 {
        let mut m = Mat::zero(fld.clone(), v.dim(), v.dim());
        for i in 0..3 {
            let c = coords.get(i, j);
            if c != 0 {
                m = m.add(&v.action_basis(i).scale(c));
            }
        }
        action.push(m);
    }
    Module::new(target.clone(), vec![0; 3], action)?.checked()
}
