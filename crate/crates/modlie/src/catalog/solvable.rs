//! A small family of solvable restricted Lie algebras used as a test corpus.
//! These are textbook constructions; the structure constants are the
//! definitions.  Where a natural matrix realization exists (the
//! two-dimensional nonabelian algebra, the Heisenberg algebra with zero
//! p-map) it is used and cross-checked in tests.

use std::sync::Arc;

use crate::field::field;
use crate::lie::{AlgebraData, LieAlgebra};
use crate::{Error, Result};

/// P-map patterns for the abelian algebra: every semilinear map is
/// admissible, so a few representative shapes are provided.
///  - "zero":   x^[p] = 0 everywhere
///  - "toral":  e_i^[p] = e_i (a torus)
///  - "jordan": e_i^[p] = e_{i+1}, e_{n-1}^[p] = 0 (one nilpotent string)
///  - "mixed":  even indices toral, odd indices nil
pub fn abelian(p: u32, k: u32, n: usize, pattern: &str) -> Result<Arc<LieAlgebra>> {
    if n == 0 {
        return Err(Error::Invalid("abelian algebra needs dimension >= 1".into()));
    }
    let f = field(p, k)?;
    let names = (0..n).map(|i| format!("a{i}")).collect();
    let pmap = (0..n)
        .map(|i| match pattern {
            "zero" => vec![],
            "toral" => vec![(i, 1)],
            "jordan" => {
                if i + 1 < n {
                    vec![(i + 1, 1)]
                } else {
                    vec![]
                }
            }
            "mixed" => {
                if i % 2 == 0 {
                    vec![(i, 1)]
                } else {
                    vec![]
                }
            }
            _ => vec![],
        })
        .collect::<Vec<_>>();
    if !matches!(pattern, "zero" | "toral" | "jordan" | "mixed") {
        return Err(Error::Invalid(format!("unknown abelian p-map pattern `{pattern}`")));
    }
    AlgebraData {
        field: f,
        names,
        brackets: vec![],
        pmap,
    }
    .build()
}

/// The nonabelian two-dimensional algebra <t, x> with [t, x] = x,
/// t^[p] = t, x^[p] = 0.
pub fn nonabelian2(p: u32, k: u32) -> Result<Arc<LieAlgebra>> {
    let f = field(p, k)?;
    AlgebraData {
        field: f,
        names: vec!["t".into(), "x".into()],
        brackets: vec![(0, 1, vec![(1, 1)])],
        pmap: vec![vec![(0, 1)], vec![]],
    }
    .build()
}

/// Degrees adapting <t, x> to its depth-one filtration with L_(0) = <t>.
pub fn nonabelian2_degrees() -> Vec<i64> {
    vec![0, -1]
}

/// The Heisenberg algebra <x, y, z> with [x, y] = z and a choice of p-map:
///  - "zero":     all p-powers vanish
///  - "pcentral": x^[p] = z (and y, z nil)
///  - "toralz":   z^[p] = z (center is a torus)
pub fn heisenberg(p: u32, k: u32, pattern: &str) -> Result<Arc<LieAlgebra>> {
    let f = field(p, k)?;
    let pmap = match pattern {
        "zero" => vec![vec![], vec![], vec![]],
        "pcentral" => vec![vec![(2, 1)], vec![], vec![]],
        "toralz" => vec![vec![], vec![], vec![(2, 1)]],
        _ => {
            return Err(Error::Invalid(format!(
                "unknown Heisenberg p-map pattern `{pattern}`"
            )))
        }
    };
    AlgebraData {
        field: f,
        names: vec!["x".into(), "y".into(), "z".into()],
        brackets: vec![(0, 1, vec![(2, 1)])],
        pmap,
    }
    .build()
}

pub fn heisenberg_degrees() -> Vec<i64> {
    // [x, y] = z with degrees (-1, 0, -1): depth one, height zero.
    vec![-1, 0, -1]
}

/// The Borel subalgebra <h, e> of sl2: [h, e] = 2e, h^[p] = h, e^[p] = 0.
/// Needs odd characteristic to be nonabelian.
pub fn borel_sl2(p: u32, k: u32) -> Result<Arc<LieAlgebra>> {
    if p == 2 {
        return Err(Error::Invalid(
            "the Borel of sl2 degenerates in characteristic 2".into(),
        ));
    }
    let f = field(p, k)?;
    AlgebraData {
        field: f.clone(),
        names: vec!["h".into(), "e".into()],
        brackets: vec![(0, 1, vec![(1, f.from_int(2))])],
        pmap: vec![vec![(0, 1)], vec![]],
    }
    .build()
}

pub fn borel_sl2_degrees() -> Vec<i64> {
    vec![0, -1]
}
