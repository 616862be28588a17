//! JSON document formats for algebras and modules.
//!
//! An [`AlgebraDocument`] records a restricted Lie algebra by its structure
//! constants: brackets as sparse `[i, j, [[k, c], ...]]` triples with `i < j`
//! (omitted pairs commute), p-th powers as sparse `[i, [[k, c], ...]]` rows
//! (omitted rows vanish), plus an optional linear form `chi` and an optional
//! descending filtration given as nested basis-index lists.  A
//! [`ModuleDocument`] records a representation by its `chi` and one dense
//! action matrix per algebra basis element.
//!
//! Field coefficients are integers: the index of the element in the ambient
//! field, which for a prime field is just the least nonnegative residue.
//! [`canonical_bytes`](AlgebraDocument::canonical_bytes) fixes a normal form
//! (reduced coefficients, merged and sorted sparse entries, sorted JSON keys)
//! so that equal documents have equal bytes.  Schema violations are reported
//! with JSON-pointer paths into the offending value.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::field::{field, Field, Scalar};
use crate::filt::RestrictedFiltration;
use crate::lie::{AlgebraData, LieAlgebra};
use crate::matrix::{Mat, Subspace};
use crate::module::Module;
use crate::{Error, Result};

/// Version tag carried by every document this crate reads or writes.
pub const SCHEMA_VERSION: u32 = 1;

/// Serializable description of a restricted Lie algebra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    pub schema_version: u32,
    pub p: u32,
    pub field_degree: u32,
    pub dim: usize,
    pub basis_names: Vec<String>,
    /// Sparse brackets `[i, j, [[k, c], ...]]` with `i < j`.
    pub brackets: Vec<(usize, usize, Vec<(usize, i64)>)>,
    /// Sparse p-th powers `[i, [[k, c], ...]]`.
    pub pmap: Vec<(usize, Vec<(usize, i64)>)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<Vec<i64>>,
    /// Nested chain of basis-index lists for levels -1, 0, 1, ...
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filtration: Option<Vec<Vec<usize>>>,
}

/// Serializable description of a module over a restricted Lie algebra,
/// given by one `dim`-by-`dim` action matrix per algebra basis element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDocument {
    pub schema_version: u32,
    pub p: u32,
    pub field_degree: u32,
    pub algebra_dim: usize,
    pub dim: usize,
    pub chi: Vec<i64>,
    pub action: Vec<Vec<Vec<i64>>>,
}

/// Either kind of document, distinguished by the presence of an `action`
/// field.
#[derive(Debug, Clone)]
pub enum Document {
    Algebra(AlgebraDocument),
    Module(ModuleDocument),
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut s = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => {
                s.push('/');
                s.push_str(&index.to_string());
            }
            Segment::Map { key } => {
                s.push('/');
                s.push_str(key);
            }
            Segment::Enum { variant } => {
                s.push('/');
                s.push_str(variant);
            }
            Segment::Unknown => s.push_str("/?"),
        }
    }
    if s.is_empty() {
        "/".into()
    } else {
        s
    }
}

fn from_value<T: serde::de::DeserializeOwned>(value: serde_json::Value) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        Error::Parse(format!("{}: {}", pointer_of(e.path()), e.inner()))
    })
}

fn parse_value(bytes: &[u8]) -> Result<serde_json::Value> {
    serde_json::from_slice(bytes).map_err(|e| Error::Parse(format!("/: {e}")))
}

/// Parses an algebra document, reporting type errors with their JSON path.
pub fn parse_algebra(bytes: &[u8]) -> Result<AlgebraDocument> {
    from_value(parse_value(bytes)?)
}

/// Parses a module document, reporting type errors with their JSON path.
pub fn parse_module(bytes: &[u8]) -> Result<ModuleDocument> {
    from_value(parse_value(bytes)?)
}

/// Parses either document kind, sniffing the `action` field.
pub fn parse(bytes: &[u8]) -> Result<Document> {
    let value = parse_value(bytes)?;
    let is_module = value
        .as_object()
        .map(|o| o.contains_key("action"))
        .unwrap_or(false);
    if is_module {
        Ok(Document::Module(from_value(value)?))
    } else {
        Ok(Document::Algebra(from_value(value)?))
    }
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

fn err(path: String, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

fn checked_field(p: u32, k: u32) -> Result<Arc<Field>> {
    field(p, k).map_err(|e| err("/p".into(), e))
}

fn check_version(v: u32) -> Result<()> {
    if v != SCHEMA_VERSION {
        return Err(err(
            "/schema_version".into(),
            format!("unsupported schema version {v} (expected {SCHEMA_VERSION})"),
        ));
    }
    Ok(())
}

fn check_index(i: usize, dim: usize, path: String) -> Result<()> {
    if i >= dim {
        return Err(err(path, format!("basis index {i} out of range (dim {dim})")));
    }
    Ok(())
}

/// Strict range check used by validation: coefficients must already be
/// canonical element indices.
fn check_coeff(f: &Field, c: i64, path: String) -> Result<()> {
    if c < 0 || c as u64 >= f.q() as u64 {
        return Err(err(
            path,
            format!("coefficient {c} is not a reduced element of GF({})", f.q()),
        ));
    }
    Ok(())
}

/// Lenient conversion used by canonicalization: prime-field coefficients may
/// be arbitrary integers and are reduced; extension fields require a valid
/// element index.
fn reduce_coeff(f: &Field, c: i64, path: String) -> Result<Scalar> {
    if f.is_prime_field() {
        Ok(f.from_int(c))
    } else if c >= 0 && (c as u64) < f.q() as u64 {
        Ok(c as Scalar)
    } else {
        Err(err(
            path,
            format!("coefficient {c} is not an element index for GF({})", f.q()),
        ))
    }
}

fn check_filtration_shape(levels: &[Vec<usize>], dim: usize) -> Result<()> {
    if levels.len() < 2 {
        return Err(err(
            "/filtration".into(),
            "a filtration lists the levels -1, 0, ... and so has at least two entries",
        ));
    }
    for (li, level) in levels.iter().enumerate() {
        for (s, &i) in level.iter().enumerate() {
            check_index(i, dim, format!("/filtration/{li}/{s}"))?;
        }
        if li == 0 {
            let mut all: Vec<usize> = level.clone();
            all.sort_unstable();
            all.dedup();
            if all != (0..dim).collect::<Vec<_>>() {
                return Err(err(
                    "/filtration/0".into(),
                    "level -1 must list every basis index",
                ));
            }
        } else {
            let prev = &levels[li - 1];
            for &i in level {
                if !prev.contains(&i) {
                    return Err(err(
                        format!("/filtration/{li}"),
                        format!("index {i} does not appear in the previous level"),
                    ));
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// AlgebraDocument
// ---------------------------------------------------------------------------

impl AlgebraDocument {
    /// Extracts the document of an algebra, optionally together with a linear
    /// form and a filtration (levels -1, 0, ... as basis-index lists).
    pub fn from_algebra(
        alg: &LieAlgebra,
        chi: Option<&[Scalar]>,
        filtration: Option<&[Vec<usize>]>,
    ) -> AlgebraDocument {
        let data = alg.data();
        AlgebraDocument {
            schema_version: SCHEMA_VERSION,
            p: data.field.p(),
            field_degree: data.field.k(),
            dim: alg.dim(),
            basis_names: data.names,
            brackets: data
                .brackets
                .into_iter()
                .map(|(i, j, terms)| {
                    (i, j, terms.into_iter().map(|(k, c)| (k, c as i64)).collect())
                })
                .collect(),
            pmap: data
                .pmap
                .into_iter()
                .enumerate()
                .filter(|(_, row)| !row.is_empty())
                .map(|(i, row)| (i, row.into_iter().map(|(k, c)| (k, c as i64)).collect()))
                .collect(),
            chi: chi.map(|v| v.iter().map(|&c| c as i64).collect()),
            filtration: filtration.map(|levels| levels.to_vec()),
        }
    }

    /// Validates the document shape: schema version, field parameters,
    /// dimension consistency, index ranges, `i < j`, reduced coefficients,
    /// and filtration nesting.  Errors carry JSON-pointer paths.
    pub fn check(&self) -> Result<()> {
        check_version(self.schema_version)?;
        let f = checked_field(self.p, self.field_degree)?;
        let dim = self.dim;
        if self.basis_names.len() != dim {
            return Err(err(
                "/basis_names".into(),
                format!("expected {dim} names, found {}", self.basis_names.len()),
            ));
        }
        for (t, (i, j, terms)) in self.brackets.iter().enumerate() {
            check_index(*i, dim, format!("/brackets/{t}/0"))?;
            check_index(*j, dim, format!("/brackets/{t}/1"))?;
            if i >= j {
                return Err(err(
                    format!("/brackets/{t}"),
                    format!("bracket rows require i < j, found ({i}, {j})"),
                ));
            }
            for (s, (k, c)) in terms.iter().enumerate() {
                check_index(*k, dim, format!("/brackets/{t}/2/{s}/0"))?;
                check_coeff(&f, *c, format!("/brackets/{t}/2/{s}/1"))?;
            }
        }
        for (t, (i, terms)) in self.pmap.iter().enumerate() {
            check_index(*i, dim, format!("/pmap/{t}/0"))?;
            for (s, (k, c)) in terms.iter().enumerate() {
                check_index(*k, dim, format!("/pmap/{t}/1/{s}/0"))?;
                check_coeff(&f, *c, format!("/pmap/{t}/1/{s}/1"))?;
            }
        }
        if let Some(chi) = &self.chi {
            if chi.len() != dim {
                return Err(err(
                    "/chi".into(),
                    format!("expected {dim} coefficients, found {}", chi.len()),
                ));
            }
            for (s, &c) in chi.iter().enumerate() {
                check_coeff(&f, c, format!("/chi/{s}"))?;
            }
        }
        if let Some(levels) = &self.filtration {
            check_filtration_shape(levels, dim)?;
        }
        Ok(())
    }

    /// Returns the canonical form: coefficients reduced, duplicate sparse
    /// entries merged by field addition, zero terms dropped, everything
    /// sorted.  Two documents describing the same data canonicalize
    /// identically.
    pub fn canonicalize(&self) -> Result<AlgebraDocument> {
        check_version(self.schema_version)?;
        let f = checked_field(self.p, self.field_degree)?;
        let dim = self.dim;
        if self.basis_names.len() != dim {
            return Err(err(
                "/basis_names".into(),
                format!("expected {dim} names, found {}", self.basis_names.len()),
            ));
        }

        let mut brackets: BTreeMap<(usize, usize), BTreeMap<usize, Scalar>> = BTreeMap::new();
        for (t, (i, j, terms)) in self.brackets.iter().enumerate() {
            check_index(*i, dim, format!("/brackets/{t}/0"))?;
            check_index(*j, dim, format!("/brackets/{t}/1"))?;
            if i >= j {
                return Err(err(
                    format!("/brackets/{t}"),
                    format!("bracket rows require i < j, found ({i}, {j})"),
                ));
            }
            let row = brackets.entry((*i, *j)).or_default();
            for (s, (k, c)) in terms.iter().enumerate() {
                check_index(*k, dim, format!("/brackets/{t}/2/{s}/0"))?;
                let c = reduce_coeff(&f, *c, format!("/brackets/{t}/2/{s}/1"))?;
                let slot = row.entry(*k).or_insert(0);
                *slot = f.add(*slot, c);
            }
        }
        let brackets = brackets
            .into_iter()
            .map(|((i, j), row)| {
                let terms: Vec<(usize, i64)> = row
                    .into_iter()
                    .filter(|&(_, c)| c != 0)
                    .map(|(k, c)| (k, c as i64))
                    .collect();
                (i, j, terms)
            })
            .filter(|(_, _, terms)| !terms.is_empty())
            .collect();

        let mut pmap: BTreeMap<usize, BTreeMap<usize, Scalar>> = BTreeMap::new();
        for (t, (i, terms)) in self.pmap.iter().enumerate() {
            check_index(*i, dim, format!("/pmap/{t}/0"))?;
            let row = pmap.entry(*i).or_default();
            for (s, (k, c)) in terms.iter().enumerate() {
                check_index(*k, dim, format!("/pmap/{t}/1/{s}/0"))?;
                let c = reduce_coeff(&f, *c, format!("/pmap/{t}/1/{s}/1"))?;
                let slot = row.entry(*k).or_insert(0);
                *slot = f.add(*slot, c);
            }
        }
        let pmap = pmap
            .into_iter()
            .map(|(i, row)| {
                let terms: Vec<(usize, i64)> = row
                    .into_iter()
                    .filter(|&(_, c)| c != 0)
                    .map(|(k, c)| (k, c as i64))
                    .collect();
                (i, terms)
            })
            .filter(|(_, terms)| !terms.is_empty())
            .collect();

        let chi = match &self.chi {
            None => None,
            Some(chi) => {
                if chi.len() != dim {
                    return Err(err(
                        "/chi".into(),
                        format!("expected {dim} coefficients, found {}", chi.len()),
                    ));
                }
                let mut out = Vec::with_capacity(dim);
                for (s, &c) in chi.iter().enumerate() {
                    out.push(reduce_coeff(&f, c, format!("/chi/{s}"))? as i64);
                }
                Some(out)
            }
        };

        let filtration = match &self.filtration {
            None => None,
            Some(levels) => {
                check_filtration_shape(levels, dim)?;
                Some(
                    levels
                        .iter()
                        .map(|level| {
                            let mut level = level.clone();
                            level.sort_unstable();
                            level.dedup();
                            level
                        })
                        .collect(),
                )
            }
        };

        Ok(AlgebraDocument {
            schema_version: SCHEMA_VERSION,
            p: self.p,
            field_degree: self.field_degree,
            dim,
            basis_names: self.basis_names.clone(),
            brackets,
            pmap,
            chi,
            filtration,
        })
    }

    /// Canonical serialized form: the canonicalized document printed with
    /// sorted object keys and a trailing newline.
    pub fn canonical_bytes(&self) -> Result<Vec<u8>> {
        canonical_json(&self.canonicalize()?)
    }

    /// Builds the algebra this document describes, running the structural
    /// validator (anticommutativity, Jacobi, p-map laws) before returning.
    pub fn to_algebra(&self) -> Result<Arc<LieAlgebra>> {
        let doc = self.canonicalize()?;
        let f = checked_field(doc.p, doc.field_degree)?;
        let mut pmap = vec![Vec::new(); doc.dim];
        for (i, terms) in doc.pmap {
            pmap[i] = terms
                .into_iter()
                .map(|(k, c)| (k, c as Scalar))
                .collect();
        }
        AlgebraData {
            field: f,
            names: doc.basis_names,
            brackets: doc
                .brackets
                .into_iter()
                .map(|(i, j, terms)| {
                    (
                        i,
                        j,
                        terms
                            .into_iter()
                            .map(|(k, c)| (k, c as Scalar))
                            .collect(),
                    )
                })
                .collect(),
            pmap,
        }
        .build()
    }

    /// The document's linear form as field scalars, if present.
    pub fn chi_scalars(&self, f: &Arc<Field>) -> Result<Option<Vec<Scalar>>> {
        match &self.chi {
            None => Ok(None),
            Some(chi) => {
                let mut out = Vec::with_capacity(chi.len());
                for (s, &c) in chi.iter().enumerate() {
                    out.push(reduce_coeff(f, c, format!("/chi/{s}"))?);
                }
                Ok(Some(out))
            }
        }
    }

    /// The document's filtration over the given algebra, if present; the
    /// chain conditions are re-validated on construction.
    pub fn filtration_of(&self, alg: &Arc<LieAlgebra>) -> Result<Option<RestrictedFiltration>> {
        let Some(levels) = &self.filtration else {
            return Ok(None);
        };
        check_filtration_shape(levels, alg.dim())?;
        let f = alg.field().clone();
        let n = alg.dim();
        let spaces = levels
            .iter()
            .map(|level| {
                let rows: Vec<Vec<Scalar>> = level
                    .iter()
                    .map(|&i| {
                        let mut v = vec![0 as Scalar; n];
                        v[i] = 1;
                        v
                    })
                    .collect();
                Subspace::from_rows(f.clone(), n, &rows)
            })
            .collect();
        RestrictedFiltration::new(alg.clone(), spaces).map(Some)
    }
}

/// Basis-index lists for the levels -1..=h of the chain determined by basis
/// degrees (level n is spanned by the indices of degree at least n).
pub fn filtration_levels_from_degrees(degrees: &[i64]) -> Vec<Vec<usize>> {
    let h = degrees.iter().copied().max().unwrap_or(-1).max(0);
    (-1..=h)
        .map(|lvl| {
            (0..degrees.len())
                .filter(|&i| degrees[i] >= lvl)
                .collect()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// ModuleDocument
// ---------------------------------------------------------------------------

impl ModuleDocument {
    /// Extracts the document of a module.
    pub fn from_module(m: &Module) -> ModuleDocument {
        let f = m.algebra().field();
        ModuleDocument {
            schema_version: SCHEMA_VERSION,
            p: f.p(),
            field_degree: f.k(),
            algebra_dim: m.algebra().dim(),
            dim: m.dim(),
            chi: m.chi().iter().map(|&c| c as i64).collect(),
            action: m
                .action_matrices()
                .iter()
                .map(|a| {
                    a.rows_iter()
                        .map(|r| r.iter().map(|&c| c as i64).collect())
                        .collect()
                })
                .collect(),
        }
    }

    /// Validates the document shape; errors carry JSON-pointer paths.
    pub fn check(&self) -> Result<()> {
        check_version(self.schema_version)?;
        let f = checked_field(self.p, self.field_degree)?;
        if self.chi.len() != self.algebra_dim {
            return Err(err(
                "/chi".into(),
                format!(
                    "expected {} coefficients, found {}",
                    self.algebra_dim,
                    self.chi.len()
                ),
            ));
        }
        for (s, &c) in self.chi.iter().enumerate() {
            check_coeff(&f, c, format!("/chi/{s}"))?;
        }
        if self.action.len() != self.algebra_dim {
            return Err(err(
                "/action".into(),
                format!(
                    "expected {} matrices, found {}",
                    self.algebra_dim,
                    self.action.len()
                ),
            ));
        }
        for (i, a) in self.action.iter().enumerate() {
            if a.len() != self.dim {
                return Err(err(
                    format!("/action/{i}"),
                    format!("expected {} rows, found {}", self.dim, a.len()),
                ));
            }
            for (r, row) in a.iter().enumerate() {
                if row.len() != self.dim {
                    return Err(err(
                        format!("/action/{i}/{r}"),
                        format!("expected {} columns, found {}", self.dim, row.len()),
                    ));
                }
                for (c, &v) in row.iter().enumerate() {
                    check_coeff(&f, v, format!("/action/{i}/{r}/{c}"))?;
                }
            }
        }
        Ok(())
    }

    /// Returns the canonical form (reduced coefficients).
    pub fn canonicalize(&self) -> Result<ModuleDocument> {
        check_version(self.schema_version)?;
        let f = checked_field(self.p, self.field_degree)?;
        let mut doc = self.clone();
        if doc.chi.len() != doc.algebra_dim {
            return Err(err(
                "/chi".into(),
                format!(
                    "expected {} coefficients, found {}",
                    doc.algebra_dim,
                    doc.chi.len()
                ),
            ));
        }
        for (s, c) in doc.chi.iter_mut().enumerate() {
            *c = reduce_coeff(&f, *c, format!("/chi/{s}"))? as i64;
        }
        if doc.action.len() != doc.algebra_dim {
            return Err(err(
                "/action".into(),
                format!(
                    "expected {} matrices, found {}",
                    doc.algebra_dim,
                    doc.action.len()
                ),
            ));
        }
        for (i, a) in doc.action.iter_mut().enumerate() {
            if a.len() != doc.dim {
                return Err(err(
                    format!("/action/{i}"),
                    format!("expected {} rows, found {}", doc.dim, a.len()),
                ));
            }
            for (r, row) in a.iter_mut().enumerate() {
                if row.len() != doc.dim {
                    return Err(err(
                        format!("/action/{i}/{r}"),
                        format!("expected {} columns, found {}", doc.dim, row.len()),
                    ));
                }
                for (c, v) in row.iter_mut().enumerate() {
                    *v = reduce_coeff(&f, *v, format!("/action/{i}/{r}/{c}"))? as i64;
                }
            }
        }
        Ok(doc)
    }

    /// Canonical serialized form with sorted keys and a trailing newline.
    pub fn canonical_bytes(&self) -> Result<Vec<u8>> {
        canonical_json(&self.canonicalize()?)
    }

    /// Builds the module over the given algebra, running the representation
    /// validator before returning.
    pub fn to_module(&self, alg: &Arc<LieAlgebra>) -> Result<Module> {
        let doc = self.canonicalize()?;
        let f = alg.field();
        if f.p() != doc.p || f.k() != doc.field_degree {
            return Err(err(
                "/p".into(),
                format!(
                    "document field GF({}^{}) does not match the algebra's GF({}^{})",
                    doc.p,
                    doc.field_degree,
                    f.p(),
                    f.k()
                ),
            ));
        }
        if alg.dim() != doc.algebra_dim {
            return Err(err(
                "/algebra_dim".into(),
                format!("expected {}, found {}", alg.dim(), doc.algebra_dim),
            ));
        }
        let chi: Vec<Scalar> = doc.chi.iter().map(|&c| c as Scalar).collect();
        let action: Vec<Mat> = doc
            .action
            .iter()
            .map(|a| {
                let rows: Vec<Vec<Scalar>> = a
                    .iter()
                    .map(|row| row.iter().map(|&v| v as Scalar).collect())
                    .collect();
                Mat::from_rows(f.clone(), doc.dim, &rows)
            })
            .collect();
        Module::new(alg.clone(), chi, action)?.checked()
    }
}

/// Pretty JSON with sorted object keys and a trailing newline.
fn canonical_json<T: Serialize>(doc: &T) -> Result<Vec<u8>> {
    let value = serde_json::to_value(doc).map_err(|e| Error::Parse(format!("/: {e}")))?;
    let mut bytes = serde_json::to_string_pretty(&value)
        .map_err(|e| Error::Parse(format!("/: {e}")))?
        .into_bytes();
    bytes.push(b'\n');
    Ok(bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn zassenhaus_documents_round_trip_byte_for_byte() {
        let entry = catalog::build("zassenhaus-char2", 2, 1).unwrap();
        let levels = filtration_levels_from_degrees(entry.degrees.as_deref().unwrap());
        let doc = AlgebraDocument::from_algebra(&entry.algebra, None, Some(&levels));
        doc.check().unwrap();

        let bytes = doc.canonical_bytes().unwrap();
        let reparsed = match parse(&bytes).unwrap() {
            Document::Algebra(d) => d,
            Document::Module(_) => panic!("algebra document sniffed as module"),
        };
        assert_eq!(reparsed.canonical_bytes().unwrap(), bytes);

        // Rebuilding the algebra and re-extracting reproduces the same bytes.
        let alg = reparsed.to_algebra().unwrap();
        let again = AlgebraDocument::from_algebra(&alg, None, Some(&levels));
        assert_eq!(again.canonical_bytes().unwrap(), bytes);

        // The document's filtration re-validates over the rebuilt algebra.
        let filt = reparsed.filtration_of(&alg).unwrap().unwrap();
        assert_eq!(filt.height(), 0);
        assert_eq!(filt.space_at(0).dim(), 3);
    }

    #[test]
    fn out_of_range_entries_name_the_offending_json_path() {
        let mut doc = AlgebraDocument {
            schema_version: SCHEMA_VERSION,
            p: 3,
            field_degree: 1,
            dim: 2,
            basis_names: vec!["t".into(), "x".into()],
            brackets: vec![(0, 1, vec![(5, 1)])],
            pmap: vec![],
            chi: None,
            filtration: None,
        };
        let e = doc.check().unwrap_err().to_string();
        assert!(e.contains("/brackets/0/2/0/0"), "{e}");
        assert!(e.contains("out of range"), "{e}");

        doc.brackets = vec![(0, 1, vec![(1, 7)])];
        let e = doc.check().unwrap_err().to_string();
        assert!(e.contains("/brackets/0/2/0/1"), "{e}");

        doc.brackets = vec![(1, 0, vec![(1, 1)])];
        let e = doc.check().unwrap_err().to_string();
        assert!(e.contains("/brackets/0"), "{e}");
        assert!(e.contains("i < j"), "{e}");

        doc.brackets = vec![(0, 1, vec![(1, 1)])];
        doc.pmap = vec![(9, vec![(0, 1)])];
        let e = doc.check().unwrap_err().to_string();
        assert!(e.contains("/pmap/0/0"), "{e}");

        doc.pmap = vec![(0, vec![(0, 1)])];
        doc.chi = Some(vec![0, 1, 2]);
        let e = doc.check().unwrap_err().to_string();
        assert!(e.contains("/chi"), "{e}");

        doc.chi = None;
        doc.filtration = Some(vec![vec![0, 1], vec![0, 3]]);
        let e = doc.check().unwrap_err().to_string();
        assert!(e.contains("/filtration/1/1"), "{e}");

        // Type errors from the deserializer also carry a path.
        let e = parse_algebra(br#"{"schema_version": 1, "p": "three"}"#)
            .unwrap_err()
            .to_string();
        assert!(e.contains("/p"), "{e}");
    }

    #[test]
    fn hand_written_documents_canonicalize_to_the_generated_form() {
        // Unsorted entries, a duplicated bracket term, a zero term, and a
        // negative coefficient, all of which the canonical form smooths out.
        let text = br#"{
            "schema_version": 1,
            "p": 3,
            "field_degree": 1,
            "dim": 2,
            "basis_names": ["t", "x"],
            "brackets": [[0, 1, [[1, 2], [0, 0], [1, -1]]]],
            "pmap": [[1, []], [0, [[0, 4]]]]
        }"#;
        let hand = parse_algebra(text).unwrap();
        let generated = AlgebraDocument::from_algebra(
            &catalog::build("nonabelian2", 3, 1).unwrap().algebra,
            None,
            None,
        );
        assert_eq!(
            hand.canonical_bytes().unwrap(),
            generated.canonical_bytes().unwrap()
        );
        hand.to_algebra().unwrap();
    }

    #[test]
    fn module_documents_round_trip_through_the_checked_constructor() {
        let alg = catalog::build("nonabelian2", 3, 1).unwrap().algebra;
        let chi = vec![0, 0];
        let v = crate::module::Module::one_dim_modules(&alg, &chi, 10)
            .unwrap()
            .remove(0);
        let doc = ModuleDocument::from_module(&v);
        doc.check().unwrap();

        let bytes = doc.canonical_bytes().unwrap();
        let reparsed = match parse(&bytes).unwrap() {
            Document::Module(d) => d,
            Document::Algebra(_) => panic!("module document sniffed as algebra"),
        };
        assert_eq!(reparsed.canonical_bytes().unwrap(), bytes);
        let back = reparsed.to_module(&alg).unwrap();
        assert_eq!(back.dim(), v.dim());
        assert_eq!(back.chi(), v.chi());

        // A corrupted action matrix fails the representation laws.
        let mut bad = doc.clone();
        bad.action[1][0][0] = 1;
        assert!(bad.to_module(&alg).is_err());

        // A malformed shape names its path.
        let mut short = doc;
        short.action[0].pop();
        let e = short.check().unwrap_err().to_string();
        assert!(e.contains("/action/0"), "{e}");
    }
}
