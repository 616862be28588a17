//! Dense univariate polynomials over a finite field.
//!
//! Coefficient vectors are little-endian (index = degree) with no trailing
//! zeros; the zero polynomial is the empty vector.  These are working tools
//! for modulus selection, minimal polynomials and factorization, not a
//! public polynomial type: functions take the field explicitly.

use crate::field::{Field, Scalar};
use rand::Rng;

pub type Poly = Vec<Scalar>;

pub fn trim(mut f: Poly) -> Poly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

pub fn deg(f: &[Scalar]) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub fn add(ff: &Field, f: &[Scalar], g: &[Scalar]) -> Poly {
    let n = f.len().max(g.len());
    let mut out = vec![0 as Scalar; n];
    for (i, slot) in out.iter_mut().enumerate() {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        *slot = ff.add(a, b);
    }
    trim(out)
}

pub fn sub(ff: &Field, f: &[Scalar], g: &[Scalar]) -> Poly {
    let neg: Poly = g.iter().map(|&c| ff.neg(c)).collect();
    add(ff, f, &neg)
}

pub fn scale(ff: &Field, f: &[Scalar], c: Scalar) -> Poly {
    trim(f.iter().map(|&a| ff.mul(a, c)).collect())
}

pub fn mul(ff: &Field, f: &[Scalar], g: &[Scalar]) -> Poly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0 as Scalar; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = ff.add(out[i + j], ff.mul(a, b));
        }
    }
    trim(out)
}

/// Quotient and remainder; the divisor must be nonzero.
pub fn divrem(ff: &Field, f: &[Scalar], g: &[Scalar]) -> (Poly, Poly) {
    assert!(!g.is_empty(), "polynomial division by zero");
    let mut rem: Poly = f.to_vec();
    let dg = g.len() - 1;
    if f.len() <= dg {
        return (Vec::new(), trim(rem));
    }
    let lead_inv = ff.inv(*g.last().unwrap());
    let mut quot = vec![0 as Scalar; f.len() - dg];
    for d in (dg..f.len()).rev() {
        let c = ff.mul(rem[d], lead_inv);
        if c == 0 {
            continue;
        }
        quot[d - dg] = c;
        for (i, &gc) in g.iter().enumerate() {
            let t = ff.mul(c, gc);
            rem[d - dg + i] = ff.sub(rem[d - dg + i], t);
        }
    }
    (trim(quot), trim(rem))
}

pub fn rem(ff: &Field, f: &[Scalar], g: &[Scalar]) -> Poly {
    divrem(ff, f, g).1
}

pub fn monic(ff: &Field, f: &[Scalar]) -> Poly {
    match f.last() {
        None => Vec::new(),
        Some(&c) if c == 1 => f.to_vec(),
        Some(&c) => scale(ff, f, ff.inv(c)),
    }
}

/// Monic gcd.
pub fn gcd(ff: &Field, f: &[Scalar], g: &[Scalar]) -> Poly {
    let mut a = f.to_vec();
    let mut b = g.to_vec();
    while !b.is_empty() {
        let r = rem(ff, &a, &b);
        a = b;
        b = r;
    }
    monic(ff, &a)
}

pub fn eval(ff: &Field, f: &[Scalar], x: Scalar) -> Scalar {
    let mut acc: Scalar = 0;
    for &c in f.iter().rev() {
        acc = ff.add(ff.mul(acc, x), c);
    }
    acc
}

pub fn derivative(ff: &Field, f: &[Scalar]) -> Poly {
    if f.len() <= 1 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(f.len() - 1);
    for (i, &c) in f.iter().enumerate().skip(1) {
        let factor = ff.from_int(i as i64);
        out.push(ff.mul(c, factor));
    }
    trim(out)
}

/// base^e mod m by square-and-multiply.
pub fn powmod(ff: &Field, base: &[Scalar], mut e: u64, m: &[Scalar]) -> Poly {
    let mut acc: Poly = vec![1];
    let mut b = rem(ff, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(ff, &mul(ff, &acc, &b), m);
        }
        b = rem(ff, &mul(ff, &b, &b), m);
        e >>= 1;
    }
    acc
}

/// x^(q^j) mod m, iterating the q-power map so the exponent never overflows.
pub fn frobenius_power(ff: &Field, j: u32, m: &[Scalar]) -> Poly {
    let mut acc: Poly = vec![0, 1];
    for _ in 0..j {
        acc = powmod(ff, &acc, ff.q() as u64, m);
    }
    acc
}

/// Irreducibility over the coefficient field: f of degree n is irreducible
/// iff x^(q^n) = x mod f and gcd(x^(q^(n/l)) - x, f) = 1 for each prime l | n.
pub fn is_irreducible(ff: &Field, f: &[Scalar]) -> bool {
    let n = match deg(f) {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let xqn = frobenius_power(ff, n as u32, f);
    if sub(ff, &xqn, &[0, 1]) != Vec::<Scalar>::new() {
        return false;
    }
    let mut primes = Vec::new();
    let mut m = n;
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
    for ell in primes {
        let xq = frobenius_power(ff, (n / ell) as u32, f);
        let diff = sub(ff, &xq, &[0, 1]);
        if deg(&gcd(ff, &diff, f)).is_some_and(|d| d > 0) {
            return false;
        }
    }
    true
}

/// Full factorization of a nonzero polynomial into monic irreducibles with
/// multiplicities, by squarefree + distinct-degree + equal-degree splitting.
/// The equal-degree stage draws random splitters from `rng`; the output is
/// sorted, so it does not depend on the draw.
pub fn factor(ff: &Field, f: &[Scalar], rng: &mut impl Rng) -> Vec<(Poly, usize)> {
    let mut out: Vec<(Poly, usize)> = Vec::new();
    let f = monic(ff, f);
    assert!(!f.is_empty(), "factor of zero polynomial");
    factor_inner(ff, &f, 1, rng, &mut out);
    out.sort();
    // Merge duplicates that can arise from the p-th power route.
    let mut merged: Vec<(Poly, usize)> = Vec::new();
    for (g, m) in out {
        match merged.last_mut() {
            Some((h, hm)) if *h == g => *hm += m,
            _ => merged.push((g, m)),
        }
    }
    merged
}

fn factor_inner(
    ff: &Field,
    f: &[Scalar],
    mult: usize,
    rng: &mut impl Rng,
    out: &mut Vec<(Poly, usize)>,
) {
    if deg(f) == Some(0) || f.is_empty() {
        return;
    }
    let fd = derivative(ff, f);
    if fd.is_empty() {
        // f = g(x^p); take p-th roots of the coefficients.
        let p = ff.p() as usize;
        let root_exp = (ff.q() / ff.p()) as u64; // c^(q/p) is the p-th root
        let mut g = Vec::new();
        for (i, &c) in f.iter().enumerate() {
            if i % p == 0 {
                g.push(ff.pow(c, root_exp));
            } else {
                assert!(c == 0);
            }
        }
        factor_inner(ff, &trim(g), mult * p, rng, out);
        return;
    }
    let rad = divrem(ff, f, &gcd(ff, f, &fd)).0;
    // Distinct-degree on the squarefree part, keeping x^(q^d) mod rest
    // incrementally (reducing mod the shrunken rest stays valid because the
    // new rest divides the old one).
    let mut rest = monic(ff, &rad);
    let mut d = 1u32;
    let mut frob: Poly = vec![0, 1];
    let mut pieces: Vec<(Poly, usize)> = Vec::new();
    while deg(&rest).is_some_and(|r| r >= 2 * d as usize) {
        frob = powmod(ff, &frob, ff.q() as u64, &rest);
        let diff = sub(ff, &frob, &[0, 1]);
        let g = gcd(ff, &diff, &rest);
        if deg(&g).is_some_and(|dg| dg > 0) {
            pieces.push((g.clone(), d as usize));
            rest = divrem(ff, &rest, &g).0;
            frob = rem(ff, &frob, &rest);
        }
        d += 1;
    }
    if deg(&rest).is_some_and(|r| r > 0) {
        let r = deg(&rest).unwrap();
        pieces.push((rest, r));
    }
    let mut removed: Poly = vec![1];
    for (piece, ed) in pieces {
        let mut stack = vec![piece];
        while let Some(g) = stack.pop() {
            let dg = deg(&g).unwrap();
            if dg == ed {
                let factor_mult = divide_out(ff, f, &g);
                for _ in 0..factor_mult {
                    removed = mul(ff, &removed, &g);
                }
                out.push((g, mult * factor_mult));
                continue;
            }
            // Equal-degree splitting (Cantor-Zassenhaus; trace variant in
            // characteristic 2).
            let split = loop {
                let h = random_poly(ff, dg, rng);
                if h.is_empty() {
                    continue;
                }
                let cand = if ff.p() == 2 {
                    let mut tr: Poly = h.clone();
                    let mut pow = h.clone();
                    for _ in 1..(ed as u32 * ff.k()) {
                        pow = rem(ff, &mul(ff, &pow, &pow), &g);
                        tr = add(ff, &tr, &pow);
                    }
                    gcd(ff, &tr, &g)
                } else {
                    // h^((q^ed - 1)/2) = Norm(h)^((q-1)/2) with the norm
                    // accumulated through q-power steps, so no exponent
                    // ever exceeds q.
                    let mut conj = h.clone();
                    let mut norm = h.clone();
                    for _ in 1..ed {
                        conj = powmod(ff, &conj, ff.q() as u64, &g);
                        norm = rem(ff, &mul(ff, &norm, &conj), &g);
                    }
                    let np = powmod(ff, &norm, (ff.q() as u64 - 1) / 2, &g);
                    gcd(ff, &sub(ff, &np, &[1]), &g)
                };
                if let Some(dc) = deg(&cand) {
                    if dc > 0 && dc < dg {
                        break cand;
                    }
                }
            };
            let other = divrem(ff, &g, &split).0;
            stack.push(split);
            stack.push(monic(ff, &other));
        }
    }
    // Factors whose multiplicity is divisible by p never show up in the
    // squarefree part; what is left over is a p-th power.
    let cofactor = divrem(ff, f, &removed).0;
    if deg(&cofactor).is_some_and(|c| c > 0) {
        factor_inner(ff, &monic(ff, &cofactor), mult, rng, out);
    }
}

/// Multiplicity of the irreducible g in f.
fn divide_out(ff: &Field, f: &[Scalar], g: &[Scalar]) -> usize {
    let mut count = 0;
    let mut cur = f.to_vec();
    loop {
        let (q, r) = divrem(ff, &cur, g);
        if !r.is_empty() {
            return count;
        }
        count += 1;
        cur = q;
    }
}

fn random_poly(ff: &Field, below_deg: usize, rng: &mut impl Rng) -> Poly {
    let len = below_deg.max(1);
    trim(
        (0..len)
            .map(|_| (rng.random_range(0..ff.q())) as Scalar)
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn division_roundtrip() {
        let f3 = field(3, 1).unwrap();
        let a: Poly = vec![1, 0, 2, 1, 1];
        let b: Poly = vec![2, 1, 1];
        let (q, r) = divrem(&f3, &a, &b);
        let back = add(&f3, &mul(&f3, &q, &b), &r);
        assert_eq!(back, a);
        assert!(deg(&r) < deg(&b));
    }

    /// Oracle: irreducibility by exhaustive trial division over small fields.
    #[test]
    fn irreducibility_matches_trial_division() {
        for (p, k) in [(2u32, 1u32), (3, 1), (5, 1), (2, 2)] {
            let ff = field(p, k).unwrap();
            let q = ff.q() as u64;
            // All monic polynomials of degree 2..=4 (degree capped for cost).
            for degree in 2usize..=4 {
                let total = q.pow(degree as u32);
                for t in 0..total {
                    let mut f: Poly = Vec::new();
                    let mut rest = t;
                    for _ in 0..degree {
                        f.push((rest % q) as Scalar);
                        rest /= q;
                    }
                    f.push(1);
                    let fast = is_irreducible(&ff, &f);
                    let slow = trial_division_irreducible(&ff, &f);
                    assert_eq!(fast, slow, "disagree on {:?} over {:?}", f, ff);
                }
            }
        }
    }

    fn trial_division_irreducible(ff: &Field, f: &[Scalar]) -> bool {
        let n = deg(f).unwrap();
        let q = ff.q() as u64;
        for d in 1..=n / 2 {
            let total = q.pow(d as u32);
            for t in 0..total {
                let mut g: Poly = Vec::new();
                let mut rest = t;
                for _ in 0..d {
                    g.push((rest % q) as Scalar);
                    rest /= q;
                }
                g.push(1);
                if rem(ff, f, &g).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn factor_recovers_known_products() {
        let f5 = field(5, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        // (x^2+2)^2 (x+1) (x+3) over F_5; x^2+2 is irreducible.
        let sq = mul(&f5, &[2, 0, 1], &[2, 0, 1]);
        let prod = mul(&f5, &mul(&f5, &sq, &[1, 1]), &[3, 1]);
        let factors = factor(&f5, &prod, &mut rng);
        assert_eq!(
            factors,
            vec![
                (vec![1, 1], 1),
                (vec![2, 0, 1], 2),
                (vec![3, 1], 1),
            ]
        );
    }

    #[test]
    fn factor_handles_pth_powers_and_char2() {
        let f2 = field(2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        // (x^2+x+1)^2 = x^4+x^2+1 has zero derivative in characteristic 2.
        let f: Poly = vec![1, 0, 1, 0, 1];
        let factors = factor(&f2, &f, &mut rng);
        assert_eq!(factors, vec![(vec![1, 1, 1], 2)]);
        // Artin-Schreier irreducible x^2+x+1 times x.
        let g = mul(&f2, &[1, 1, 1], &[0, 1]);
        let factors = factor(&f2, &g, &mut rng);
        assert_eq!(factors, vec![(vec![0, 1], 1), (vec![1, 1, 1], 1)]);
    }

    #[test]
    fn factorization_multiplicities_rebuild_input() {
        let f9 = field(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for seed_poly in [vec![1, 4, 2, 0, 1, 5, 1], vec![8, 1, 0, 0, 0, 0, 0, 1]] {
            let factors = factor(&f9, &seed_poly, &mut rng);
            let mut rebuilt: Poly = vec![*seed_poly.last().unwrap()];
            for (g, m) in &factors {
                for _ in 0..*m {
                    rebuilt = mul(&f9, &rebuilt, g);
                }
            }
            assert_eq!(rebuilt, trim(seed_poly));
        }
    }
}
