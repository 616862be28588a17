//! Scalars in small finite fields F_{p^k} with p prime, 2 <= p <= 251.
//!
//! An element is its canonical index in `0..q` (q = p^k): the base-p digits
//! of the index, least significant first, are the coefficients of the residue
//! polynomial.  The modulus for (p, k) is picked deterministically as the
//! monic irreducible x^k + c_{k-1} x^{k-1} + ... + c_0 minimizing the integer
//! sum(c_i p^i), so a scalar index means the same thing in every run and in
//! serialized data.  The prime subfield always sits at indices `0..p`.
//!
//! Fields with q <= 1024 carry full add/mul tables; larger fields (reached
//! only through splitting-field escalation, q <= 65536) multiply through
//! discrete-log tables and add digitwise.

use crate::{poly, Error, Result};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

pub type Scalar = u16;

/// Largest q for which full q x q lookup tables are built.
const FULL_TABLE_LIMIT: u32 = 1024;
/// Hard ceiling on field size.
const MAX_Q: u32 = 65536;

enum Tables {
    Full {
        add: Vec<Scalar>,
        mul: Vec<Scalar>,
        neg: Vec<Scalar>,
        inv: Vec<Scalar>,
    },
    /// exp has length 2(q-1) so a sum of two logs never wraps.
    Log { exp: Vec<Scalar>, log: Vec<u32> },
}

pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<Scalar>,
    tables: Tables,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}", self.p, self.k)
        }
    }
}

// The registry hands out one instance per (p, k), so parameter equality is
// instance equality.
impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k
    }
}
impl Eq for Field {}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

static REGISTRY: OnceLock<Mutex<HashMap<(u32, u32), Arc<Field>>>> = OnceLock::new();

/// Shared handle to the field F_{p^k}.  Instances are cached per (p, k), so
/// pointer equality of handles coincides with field equality.
pub fn field(p: u32, k: u32) -> Result<Arc<Field>> {
    if !is_prime(p) || p > 251 {
        return Err(Error::BadPrime(p as u64));
    }
    if k == 0 {
        return Err(Error::Parse("field degree k must be >= 1".into()));
    }
    let q = (p as u64).checked_pow(k).filter(|&q| q <= MAX_Q as u64);
    let q = match q {
        Some(q) => q as u32,
        None => return Err(Error::FieldTooLarge { p, k }),
    };
    let reg = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = reg.lock().unwrap().get(&(p, k)) {
        return Ok(f.clone());
    }
    // Built outside the lock: extension fields recurse into field(p, 1) for
    // the modulus search.  First insertion wins so handles stay canonical.
    let built = Arc::new(Field::build(p, k, q));
    let mut guard = reg.lock().unwrap();
    Ok(guard.entry((p, k)).or_insert(built).clone())
}

impl Field {
    fn build(p: u32, k: u32, q: u32) -> Field {
        let modulus = canonical_modulus(p, k);
        let mut f = Field {
            p,
            k,
            q,
            modulus,
            tables: Tables::Log {
                exp: Vec::new(),
                log: Vec::new(),
            },
        };
        if q <= FULL_TABLE_LIMIT {
            f.tables = f.build_full_tables();
        } else {
            f.tables = f.build_log_tables();
        }
        f
    }

    fn build_full_tables(&self) -> Tables {
        let q = self.q as usize;
        let mut add = vec![0 as Scalar; q * q];
        let mut mul = vec![0 as Scalar; q * q];
        let mut neg = vec![0 as Scalar; q];
        let mut inv = vec![0 as Scalar; q];
        for a in 0..q as u32 {
            neg[a as usize] = self.neg_raw(a) as Scalar;
            for b in 0..q as u32 {
                add[a as usize * q + b as usize] = self.add_raw(a, b) as Scalar;
                mul[a as usize * q + b as usize] = self.mul_raw(a, b) as Scalar;
            }
        }
        for a in 1..q {
            if inv[a] == 0 {
                for b in 1..q {
                    if mul[a * q + b] == 1 {
                        inv[a] = b as Scalar;
                        inv[b] = a as Scalar;
                        break;
                    }
                }
            }
        }
        Tables::Full { add, mul, neg, inv }
    }

    fn build_log_tables(&self) -> Tables {
        let q = self.q;
        let g = self.find_generator();
        let mut exp = vec![0 as Scalar; 2 * (q as usize - 1)];
        let mut log = vec![0u32; q as usize];
        let mut cur: u32 = 1;
        for i in 0..(q - 1) as usize {
            exp[i] = cur as Scalar;
            exp[i + (q as usize - 1)] = cur as Scalar;
            log[cur as usize] = i as u32;
            cur = self.mul_raw(cur, g);
        }
        debug_assert_eq!(cur, 1);
        Tables::Log { exp, log }
    }

    fn find_generator(&self) -> u32 {
        let order = self.q - 1;
        let mut primes = Vec::new();
        let mut m = order;
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                primes.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            primes.push(m);
        }
        'cand: for g in 2..self.q {
            for &ell in &primes {
                if self.pow_raw(g, (order / ell) as u64) == 1 {
                    continue 'cand;
                }
            }
            return g;
        }
        unreachable!("multiplicative group of a finite field is cyclic");
    }

    // Raw digit/polynomial arithmetic, used to bootstrap the tables.

    fn add_raw(&self, a: u32, b: u32) -> u32 {
        let (p, mut a, mut b) = (self.p, a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.k {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place = place.saturating_mul(p);
        }
        out
    }

    fn neg_raw(&self, a: u32) -> u32 {
        let (p, mut a) = (self.p, a);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.k {
            out += ((p - a % p) % p) * place;
            a /= p;
            place = place.saturating_mul(p);
        }
        out
    }

    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return (a as u64 * b as u64 % self.p as u64) as u32;
        }
        // Schoolbook product of digit polynomials, reduced mod the modulus.
        let k = self.k as usize;
        let p = self.p as u64;
        let mut coef = vec![0u64; 2 * k - 1];
        let da = self.digits(a);
        let db = self.digits(b);
        for (i, &ca) in da.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (j, &cb) in db.iter().enumerate() {
                coef[i + j] = (coef[i + j] + ca as u64 * cb as u64) % p;
            }
        }
        // Reduce: x^k = -(c_{k-1} x^{k-1} + ... + c_0).
        for d in (k..2 * k - 1).rev() {
            let c = coef[d];
            if c == 0 {
                continue;
            }
            coef[d] = 0;
            for (i, &m) in self.modulus[..k].iter().enumerate() {
                let sub = c * m as u64 % p;
                coef[d - k + i] = (coef[d - k + i] + p - sub) % p;
            }
        }
        let mut out = 0u32;
        let mut place = 1u32;
        for &c in coef[..k].iter() {
            out += c as u32 * place;
            place = place.saturating_mul(self.p);
        }
        out
    }

    fn pow_raw(&self, mut base: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut d = vec![0u32; self.k as usize];
        for slot in d.iter_mut() {
            *slot = a % self.p;
            a /= self.p;
        }
        d
    }

    // Public scalar interface.

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[Scalar] {
        &self.modulus
    }
    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    #[inline]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        match &self.tables {
            Tables::Full { add, .. } => add[a as usize * self.q as usize + b as usize],
            Tables::Log { .. } => self.add_raw(a as u32, b as u32) as Scalar,
        }
    }

    #[inline]
    pub fn neg(&self, a: Scalar) -> Scalar {
        match &self.tables {
            Tables::Full { neg, .. } => neg[a as usize],
            Tables::Log { .. } => self.neg_raw(a as u32) as Scalar,
        }
    }

    #[inline]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        match &self.tables {
            Tables::Full { mul, .. } => mul[a as usize * self.q as usize + b as usize],
            Tables::Log { exp, log } => {
                if a == 0 || b == 0 {
                    0
                } else {
                    exp[(log[a as usize] + log[b as usize]) as usize]
                }
            }
        }
    }

    /// Multiplicative inverse.  Panics on zero; callers guard pivots.
    #[inline]
    pub fn inv(&self, a: Scalar) -> Scalar {
        assert!(a != 0, "inverse of zero in {:?}", self);
        match &self.tables {
            Tables::Full { inv, .. } => inv[a as usize],
            Tables::Log { exp, log } => exp[(self.q - 1 - log[a as usize]) as usize],
        }
    }

    pub fn pow(&self, base: Scalar, e: u64) -> Scalar {
        let mut acc: Scalar = 1;
        let mut b = base;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// x -> x^p, the absolute Frobenius.
    pub fn frobenius(&self, a: Scalar) -> Scalar {
        self.pow(a, self.p as u64)
    }

    /// Canonical image of an integer through the prime subfield.
    pub fn from_int(&self, n: i64) -> Scalar {
        let r = n.rem_euclid(self.p as i64) as u32;
        r as Scalar
    }

    /// Checks a serialized scalar index.
    pub fn check_scalar(&self, v: u64) -> Result<Scalar> {
        if v < self.q as u64 {
            Ok(v as Scalar)
        } else {
            Err(Error::Parse(format!(
                "scalar {} out of range for {:?}",
                v, self
            )))
        }
    }

    /// All field elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Scalar> + '_ {
        (0..self.q).map(|v| v as Scalar)
    }

    /// Table mapping each element of `self` to its image in `other` under
    /// the canonical embedding (modulus root of least index).  Requires the
    /// same characteristic and self.k | other.k.
    pub fn embedding_into(&self, other: &Field) -> Result<Vec<Scalar>> {
        if self.p != other.p {
            return Err(Error::FieldMismatch);
        }
        if other.k % self.k != 0 {
            return Err(Error::Precondition(format!(
                "no embedding of {:?} into {:?}",
                self, other
            )));
        }
        if self.k == 1 {
            return Ok((0..self.q as usize).map(|v| v as Scalar).collect());
        }
        let root = (0..other.q)
            .map(|v| v as Scalar)
            .find(|&r| poly::eval(other, &scalar_poly(self, other), r) == 0)
            .expect("the modulus splits in any extension of its splitting field");
        let mut powers = vec![1 as Scalar; self.k as usize];
        for i in 1..self.k as usize {
            powers[i] = other.mul(powers[i - 1], root);
        }
        let mut table = vec![0 as Scalar; self.q as usize];
        for (a, slot) in table.iter_mut().enumerate() {
            let digs = self.digits(a as u32);
            let mut acc: Scalar = 0;
            for (i, &c) in digs.iter().enumerate() {
                acc = other.add(acc, other.mul(c as Scalar, powers[i]));
            }
            *slot = acc;
        }
        Ok(table)
    }
}

/// The modulus of `f` with coefficients viewed in `target` (same p).
fn scalar_poly(f: &Field, _target: &Field) -> Vec<Scalar> {
    // Modulus coefficients lie in the prime subfield, whose indices agree
    // in every field of the same characteristic.
    f.modulus.to_vec()
}

/// Monic irreducible of degree k over F_p minimizing sum(c_i p^i) over the
/// non-leading coefficients.  Degree 1 always yields x.
fn canonical_modulus(p: u32, k: u32) -> Vec<Scalar> {
    if k == 1 {
        return vec![0, 1];
    }
    let fp = field(p, 1).expect("prime field");
    let total = (p as u64).pow(k);
    for t in 0..total {
        let mut f: Vec<Scalar> = Vec::with_capacity(k as usize + 1);
        let mut rest = t;
        for _ in 0..k {
            f.push((rest % p as u64) as Scalar);
            rest /= p as u64;
        }
        f.push(1);
        if poly::is_irreducible(&fp, &f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(field(4, 1).is_err());
        assert!(field(1, 1).is_err());
        assert!(field(257, 1).is_err());
        assert!(field(2, 0).is_err());
        assert!(field(251, 3).is_err()); // 251^3 > 65536
    }

    #[test]
    fn canonical_moduli_are_stable() {
        assert_eq!(field(2, 2).unwrap().modulus(), &[1, 1, 1]); // x^2+x+1
        assert_eq!(field(3, 2).unwrap().modulus(), &[1, 0, 1]); // x^2+1
        assert_eq!(field(5, 2).unwrap().modulus(), &[2, 0, 1]); // x^2+2
        assert_eq!(field(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn registry_returns_shared_instances() {
        let a = field(7, 1).unwrap();
        let b = field(7, 1).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    /// Exhaustive field axioms for every q <= 81.
    #[test]
    fn axioms_exhaustive_small_fields() {
        let cases = [
            (2, 1),
            (3, 1),
            (5, 1),
            (7, 1),
            (2, 2),
            (2, 3),
            (2, 4),
            (2, 6),
            (3, 2),
            (3, 3),
            (3, 4),
            (5, 2),
            (7, 2),
        ];
        for &(p, k) in &cases {
            let f = field(p, k).unwrap();
            let q = f.q();
            assert!(q <= 81);
            for a in f.elements() {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1, "inv fails in {:?} at {}", f, a);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                }
            }
            // Associativity and distributivity on all triples only when cheap.
            if q <= 27 {
                for a in f.elements() {
                    for b in f.elements() {
                        for c in f.elements() {
                            assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                            assert_eq!(
                                f.mul(a, f.add(b, c)),
                                f.add(f.mul(a, b), f.mul(a, c))
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_fixes_exactly_the_prime_subfield() {
        let f = field(3, 2).unwrap();
        let fixed: Vec<Scalar> = f.elements().filter(|&a| f.frobenius(a) == a).collect();
        assert_eq!(fixed, vec![0, 1, 2]);
    }

    #[test]
    fn log_tables_agree_with_digit_arithmetic() {
        // 5^5 = 3125 > 1024 exercises the discrete-log path.
        let f = field(5, 5).unwrap();
        assert_eq!(f.q(), 3125);
        let samples = [0u16, 1, 2, 4, 17, 311, 3124, 1000, 2718];
        for &a in &samples {
            for &b in &samples {
                assert_eq!(f.mul(a, b) as u32, f.mul_raw(a as u32, b as u32));
                assert_eq!(f.add(a, b) as u32, f.add_raw(a as u32, b as u32));
            }
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
        }
    }

    #[test]
    fn embeddings_are_ring_maps_and_compose() {
        let f2 = field(2, 1).unwrap();
        let f4 = field(2, 2).unwrap();
        let f16 = field(2, 4).unwrap();
        let e24 = f2.embedding_into(&f4).unwrap();
        let e4_16 = f4.embedding_into(&f16).unwrap();
        let e2_16 = f2.embedding_into(&f16).unwrap();
        for a in f4.elements() {
            for b in f4.elements() {
                assert_eq!(
                    e4_16[f4.add(a, b) as usize],
                    f16.add(e4_16[a as usize], e4_16[b as usize])
                );
                assert_eq!(
                    e4_16[f4.mul(a, b) as usize],
                    f16.mul(e4_16[a as usize], e4_16[b as usize])
                );
            }
        }
        for a in f2.elements() {
            assert_eq!(e2_16[a as usize], e4_16[e24[a as usize] as usize]);
        }
        assert!(f4.embedding_into(&field(2, 3).unwrap()).is_err());
    }
}
