//! Named constructions of restricted Lie algebras.
//!
//! Everything here is buildable by name through [`build`], which is what the
//! command-line `catalog` subcommand and the sweep corpus use.  The heavier
//! constructions (Cartan-type algebras realized as derivation algebras) live
//! in their own submodules and expose richer handles than the registry entry.

pub mod functions;
pub mod hamiltonian;
pub mod operator;
pub mod sl2;
pub mod solvable;
pub mod zassenhaus;

use std::sync::Arc;

use serde_json::json;

use crate::field::field;
use crate::lie::LieAlgebra;
use crate::{Error, Result};

use functions::TruncPoly2;
use operator::algebra_from_operators;

/// A catalog construction: the algebra, an optional vector of per-basis
/// degrees adapting it to a depth-one restricted filtration, and free-form
/// notes recording facts established during construction.
pub struct CatalogEntry {
    pub name: String,
    pub algebra: Arc<LieAlgebra>,
    pub degrees: Option<Vec<i64>>,
    pub notes: serde_json::Value,
}

/// Representative names accepted by [`build`].  `<n>` stands for a
/// positive integer, e.g. `abelian-toral-3`.
pub fn names() -> Vec<&'static str> {
    vec![
        "sl2",
        "nonabelian2",
        "heisenberg-zero",
        "heisenberg-pcentral",
        "heisenberg-toralz",
        "borel-sl2",
        "abelian-zero-<n>",
        "abelian-toral-<n>",
        "abelian-jordan-<n>",
        "abelian-mixed-<n>",
        "witt2",
        "hamiltonian-graded",
        "hamiltonian-nongraded",
        "zassenhaus-char2",
    ]
}

/// Build a catalog entry by name over the field with p^k elements.
pub fn build(name: &str, p: u32, k: u32) -> Result<CatalogEntry> {
    let entry = |algebra: Arc<LieAlgebra>, degrees: Option<Vec<i64>>, notes: serde_json::Value| {
        Ok(CatalogEntry {
            name: name.to_string(),
            algebra,
            degrees,
            notes,
        })
    };

    if let Some(rest) = name.strip_prefix("abelian-") {
        let (pattern, n) = rest
            .rsplit_once('-')
            .ok_or_else(|| Error::UnknownCatalog(name.to_string()))?;
        let n: usize = n
            .parse()
            .map_err(|_| Error::UnknownCatalog(name.to_string()))?;
        let algebra = solvable::abelian(p, k, n, pattern)?;
        return entry(algebra, None, json!({ "pattern": pattern }));
    }

    match name {
        "sl2" => {
            let (algebra, _) = sl2::sl2(p, k)?;
            entry(algebra, Some(vec![-1, 0, 1]), json!({}))
        }
        "nonabelian2" => entry(
            solvable::nonabelian2(p, k)?,
            Some(solvable::nonabelian2_degrees()),
            json!({}),
        ),
        "heisenberg-zero" | "heisenberg-pcentral" | "heisenberg-toralz" => {
            let pattern = name.strip_prefix("heisenberg-").unwrap();
            entry(
                solvable::heisenberg(p, k, pattern)?,
                Some(solvable::heisenberg_degrees()),
                json!({ "pattern": pattern }),
            )
        }
        "borel-sl2" => entry(
            solvable::borel_sl2(p, k)?,
            Some(solvable::borel_sl2_degrees()),
            json!({}),
        ),
        "witt2" => {
            let (algebra, degrees) = witt2(p, k)?;
            entry(algebra, Some(degrees), json!({}))
        }
        "hamiltonian-graded" => {
            let h = hamiltonian::graded(p, k)?;
            let notes = json!({
                "derived_dim": h.h_dim,
                "derived_equals_divergence_kernel": h.y_equals_h,
                "second_derived_dim": h.x_indices.len(),
            });
            entry(h.algebra.clone(), Some(h.degrees.clone()), notes)
        }
        "hamiltonian-nongraded" => {
            let h = hamiltonian::filtered(p, k)?;
            let notes = json!({
                "membership_equation_holds": h.membership_ok,
                "exceptional_monomials": h.exceptional_monomials,
                "ambient_dim": h.tau_algebra_dim,
                "spans_ambient": h.l_equals_tau_algebra,
            });
            entry(h.algebra.clone(), Some(h.degrees.clone()), notes)
        }
        "zassenhaus-char2" => {
            if p != 2 {
                return Err(Error::Invalid(format!(
                    "zassenhaus-char2 lives in characteristic 2, got p = {p}"
                )));
            }
            let z = zassenhaus::zassenhaus(k)?;
            let notes = json!({ "derived_dim": z.derived_space().dim() });
            entry(z.algebra.clone(), Some(z.degrees.clone()), notes)
        }
        _ => Err(Error::UnknownCatalog(name.to_string())),
    }
}

/// The full Jacobson-Witt algebra W(2;1) = Der O(2;1), realized from the
/// operators x^a y^b d/dx and x^a y^b d/dy.  Dimension 2 p^2.  The returned
/// degrees are a + b - 1 for both families, the natural grading.
pub fn witt2(p: u32, k: u32) -> Result<(Arc<LieAlgebra>, Vec<i64>)> {
    let f = field(p, k)?;
    let o = TruncPoly2::new(f);
    let pp = p as usize;
    let mut names = Vec::new();
    let mut ops = Vec::new();
    let mut degrees = Vec::new();
    for (suffix, dir) in [("dx", o.dx()), ("dy", o.dy())] {
        for a in 0..pp {
            for b in 0..pp {
                names.push(format!("m[{a},{b}]{suffix}"));
                ops.push(o.mult_op(&o.monomial(a, b)).mul(&dir));
                degrees.push(a as i64 + b as i64 - 1);
            }
        }
    }
    let (algebra, _) = algebra_from_operators(names, ops)?;
    Ok((algebra, degrees))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_builds_every_fixed_name() {
        for name in [
            "sl2",
            "nonabelian2",
            "heisenberg-zero",
            "heisenberg-pcentral",
            "heisenberg-toralz",
            "borel-sl2",
            "abelian-toral-2",
            "abelian-jordan-3",
        ] {
            let e = build(name, 3, 1).unwrap();
            assert_eq!(e.name, name);
            if let Some(d) = &e.degrees {
                assert_eq!(d.len(), e.algebra.dim());
            }
        }
        assert!(build("no-such-algebra", 3, 1).is_err());
        assert!(build("abelian-zero-x", 3, 1).is_err());
    }

    #[test]
    fn witt2_dimension_and_grading() {
        for p in [2u32, 3] {
            let (w, degrees) = witt2(p, 1).unwrap();
            let n = 2 * (p as usize) * (p as usize);
            assert_eq!(w.dim(), n);
            assert_eq!(degrees.len(), n);
            assert_eq!(*degrees.iter().min().unwrap(), -1);
            assert_eq!(*degrees.iter().max().unwrap(), 2 * (p as i64) - 3);
            // Brackets respect the grading.
            for i in 0..n {
                for j in 0..n {
                    let v = w.bracket_basis(i, j);
                    for (t, c) in v.iter().enumerate() {
                        if *c != 0 {
                            assert_eq!(degrees[t], degrees[i] + degrees[j]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn char2_entries_guard_their_characteristic() {
        assert!(build("zassenhaus-char2", 3, 1).is_err());
        assert!(build("zassenhaus-char2", 2, 1).is_ok());
        assert!(build("hamiltonian-graded", 2, 1).is_err());
        assert!(build("sl2", 2, 1).is_err());
    }
}
