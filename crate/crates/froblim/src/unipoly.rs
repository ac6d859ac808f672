//! Univariate polynomial arithmetic over finite fields.
//!
//! Polynomials are coefficient vectors from the constant term up, with no
//! trailing zeros (the zero polynomial is the empty vector). The module
//! provides the irreducibility test used to validate field moduli and the
//! complete factorization (squarefree + distinct-degree + equal-degree)
//! needed for idempotent extraction from commutative algebras.

use crate::field::{FieldSpec, FqElem};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type UniPoly = Vec<FqElem>;

pub fn trim(mut f: UniPoly) -> UniPoly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

pub fn deg(f: &UniPoly) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub fn add(fq: &FieldSpec, a: &UniPoly, b: &UniPoly) -> UniPoly {
    let n = a.len().max(b.len());
    let mut out = vec![0; n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = fq.add(x, y);
    }
    trim(out)
}

pub fn sub(fq: &FieldSpec, a: &UniPoly, b: &UniPoly) -> UniPoly {
    let n = a.len().max(b.len());
    let mut out = vec![0; n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = fq.sub(x, y);
    }
    trim(out)
}

pub fn mul(fq: &FieldSpec, a: &UniPoly, b: &UniPoly) -> UniPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = fq.add(out[i + j], fq.mul(x, y));
        }
    }
    trim(out)
}

pub fn scale(fq: &FieldSpec, a: &UniPoly, c: FqElem) -> UniPoly {
    trim(a.iter().map(|&x| fq.mul(x, c)).collect())
}

/// Division with remainder; divisor must be nonzero.
pub fn divrem(fq: &FieldSpec, a: &UniPoly, b: &UniPoly) -> (UniPoly, UniPoly) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut rem = a.clone();
    let db = b.len() - 1;
    let lead_inv = fq.inv(b[db]);
    if rem.len() <= db {
        return (vec![], trim(rem));
    }
    let mut quo = vec![0; rem.len() - db];
    while rem.len() > db && !rem.is_empty() {
        let dr = rem.len() - 1;
        if dr < db {
            break;
        }
        let c = fq.mul(rem[dr], lead_inv);
        quo[dr - db] = c;
        for (j, &bc) in b.iter().enumerate() {
            let idx = dr - db + j;
            rem[idx] = fq.sub(rem[idx], fq.mul(c, bc));
        }
        rem = trim(rem);
    }
    (trim(quo), rem)
}

pub fn rem(fq: &FieldSpec, a: &UniPoly, b: &UniPoly) -> UniPoly {
    divrem(fq, a, b).1
}

pub fn monic(fq: &FieldSpec, a: &UniPoly) -> UniPoly {
    match a.last() {
        None => vec![],
        Some(&c) => scale(fq, a, fq.inv(c)),
    }
}

pub fn gcd(fq: &FieldSpec, a: &UniPoly, b: &UniPoly) -> UniPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = rem(fq, &x, &y);
        x = y;
        y = r;
    }
    monic(fq, &x)
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic.
pub fn ext_gcd(fq: &FieldSpec, a: &UniPoly, b: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1], vec![]);
    let (mut t0, mut t1) = (vec![], vec![1]);
    while !r1.is_empty() {
        let (q, r) = divrem(fq, &r0, &r1);
        let s = sub(fq, &s0, &mul(fq, &q, &s1));
        let t = sub(fq, &t0, &mul(fq, &q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    if let Some(&lc) = r0.last() {
        let inv = fq.inv(lc);
        return (scale(fq, &r0, inv), scale(fq, &s0, inv), scale(fq, &t0, inv));
    }
    (r0, s0, t0)
}

pub fn powmod(fq: &FieldSpec, a: &UniPoly, mut e: u64, modulus: &UniPoly) -> UniPoly {
    let mut base = rem(fq, a, modulus);
    let mut acc = vec![1];
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(fq, &mul(fq, &acc, &base), modulus);
        }
        base = rem(fq, &mul(fq, &base, &base), modulus);
        e >>= 1;
    }
    acc
}

/// Formal derivative.
pub fn derivative(fq: &FieldSpec, a: &UniPoly) -> UniPoly {
    if a.len() <= 1 {
        return vec![];
    }
    let mut out = vec![0; a.len() - 1];
    for (i, o) in out.iter_mut().enumerate() {
        let k = fq.from_int((i + 1) as i64);
        *o = fq.mul(a[i + 1], k);
    }
    trim(out)
}

pub fn eval(fq: &FieldSpec, a: &UniPoly, x: FqElem) -> FqElem {
    let mut acc = 0;
    for &c in a.iter().rev() {
        acc = fq.add(fq.mul(acc, x), c);
    }
    acc
}

// ---------------------------------------------------------------------------
// Irreducibility over the prime field (bootstraps FieldSpec construction).
// ---------------------------------------------------------------------------

fn powmod_fp(p: u64, a: &[u64], mut e: u64, modulus: &[u64]) -> Vec<u64> {
    let fp = FieldSpec {
        p,
        m: 1,
        q: p,
        modulus: vec![0, 1],
    };
    let mut base = rem(&fp, &a.to_vec(), &modulus.to_vec());
    let mut acc = vec![1];
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&fp, &mul(&fp, &acc, &base), &modulus.to_vec());
        }
        base = rem(&fp, &mul(&fp, &base, &base), &modulus.to_vec());
        e >>= 1;
    }
    acc
}

/// Rabin irreducibility test for a monic polynomial over F_p.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f: Vec<u64> = trim(f.to_vec());
    if f.len() < 2 {
        return false;
    }
    let n = (f.len() - 1) as u32;
    if n == 1 {
        return true;
    }
    let fp = FieldSpec {
        p,
        m: 1,
        q: p,
        modulus: vec![0, 1],
    };
    let x = vec![0, 1];
    // x^{p^n} == x mod f
    let mut t = x.clone();
    for _ in 0..n {
        t = powmod_fp(p, &t, p, &f);
    }
    if sub(&fp, &t, &x) != Vec::<u64>::new() {
        return false;
    }
    // gcd(x^{p^{n/l}} - x, f) == 1 for every prime l | n
    let mut primes = vec![];
    let mut nn = n;
    let mut d = 2;
    while d * d <= nn {
        if nn % d == 0 {
            primes.push(d);
            while nn % d == 0 {
                nn /= d;
            }
        }
        d += 1;
    }
    if nn > 1 {
        primes.push(nn);
    }
    for l in primes {
        let k = n / l;
        let mut t = x.clone();
        for _ in 0..k {
            t = powmod_fp(p, &t, p, &f);
        }
        let g = gcd(&fp, &sub(&fp, &t, &x), &f);
        if deg(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of the given degree over F_p.
pub fn smallest_irreducible(p: u64, degree: usize) -> Vec<u64> {
    let total = p.pow(degree as u32);
    for code in 0..total {
        let mut f = vec![0u64; degree + 1];
        let mut v = code;
        for c in f.iter_mut().take(degree) {
            *c = v % p;
            v /= p;
        }
        f[degree] = 1;
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

// ---------------------------------------------------------------------------
// Factorization over F_q.
// ---------------------------------------------------------------------------

/// Squarefree part decomposition: returns pairs (g, multiplicity) with the
/// g monic squarefree and pairwise coprime.
pub fn squarefree_decomposition(fq: &FieldSpec, f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let f = monic(fq, f);
    if deg(&f).unwrap_or(0) == 0 {
        return vec![];
    }
    let df = derivative(fq, &f);
    if df.is_empty() {
        // f = g(x^p): take p-th roots of the coefficients and recurse
        let p = fq.p as usize;
        let mut g = vec![0; (f.len() - 1) / p + 1];
        for (i, c) in g.iter_mut().enumerate() {
            *c = fq.frobenius_root(f[i * p], 1);
        }
        return squarefree_decomposition(fq, &g)
            .into_iter()
            .map(|(h, m)| (h, m * p))
            .collect();
    }
    let mut out: Vec<(UniPoly, usize)> = vec![];
    let mut c = gcd(fq, &f, &df);
    let mut w = divrem(fq, &f, &c).0;
    let mut i = 1;
    while deg(&w) != Some(0) {
        let y = gcd(fq, &w, &c);
        let fac = divrem(fq, &w, &y).0;
        if deg(&fac) != Some(0) {
            out.push((monic(fq, &fac), i));
        }
        w = y.clone();
        c = divrem(fq, &c, &y).0;
        i += 1;
    }
    if deg(&c) != Some(0) {
        for (h, m) in squarefree_decomposition(fq, &c) {
            out.push((h, m * fq.p as usize));
        }
    }
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// pairs (product of irreducibles of degree d, d).
pub fn distinct_degree(fq: &FieldSpec, f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let mut out = vec![];
    let mut f = monic(fq, f);
    let mut h = vec![0, 1]; // x
    let mut d = 0;
    while deg(&f).map(|n| n >= 2 * (d + 1)).unwrap_or(false) {
        d += 1;
        h = powmod(fq, &h, fq.q, &f);
        let g = gcd(fq, &sub(fq, &h, &[0, 1].to_vec()), &f);
        if deg(&g) != Some(0) {
            out.push((g.clone(), d));
            f = divrem(fq, &f, &g).0;
            h = rem(fq, &h, &f);
        }
    }
    if deg(&f).map(|n| n > 0).unwrap_or(false) {
        let n = deg(&f).unwrap();
        out.push((f, n));
    }
    out
}

fn random_poly(fq: &FieldSpec, degree: usize, rng: &mut ChaCha8Rng) -> UniPoly {
    let mut f = vec![0; degree + 1];
    for c in f.iter_mut() {
        *c = rng.gen_range(0..fq.q);
    }
    trim(f)
}

/// Equal-degree splitting (Cantor–Zassenhaus) of a monic squarefree product
/// of irreducibles all of degree d.
fn equal_degree(fq: &FieldSpec, f: &UniPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<UniPoly> {
    let n = deg(f).unwrap();
    if n == d {
        return vec![monic(fq, f)];
    }
    loop {
        let a = random_poly(fq, n - 1, rng);
        if deg(&a).is_none() {
            continue;
        }
        let g = if fq.p == 2 {
            // trace map T(a) = a + a^2 + a^4 + ... over F_{2^m}: m*d doublings
            let steps = (fq.m as usize) * d;
            let mut t = rem(fq, &a, f);
            let mut acc = t.clone();
            for _ in 1..steps {
                t = rem(fq, &mul(fq, &t, &t), f);
                acc = add(fq, &acc, &t);
            }
            gcd(fq, &acc, f)
        } else {
            let e = (fq.q.pow(d as u32) - 1) / 2;
            let b = powmod(fq, &a, e, f);
            gcd(fq, &sub(fq, &b, &[1].to_vec()), f)
        };
        if let Some(dg) = deg(&g) {
            if dg > 0 && dg < n {
                let h = divrem(fq, f, &g).0;
                let mut out = equal_degree(fq, &g, d, rng);
                out.extend(equal_degree(fq, &h, d, rng));
                return out;
            }
        }
    }
}

/// Full factorization into monic irreducibles with multiplicities,
/// deterministic for a fixed seed. The leading coefficient is dropped.
pub fn factor(fq: &FieldSpec, f: &UniPoly, seed: u64) -> Vec<(UniPoly, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![];
    for (g, mult) in squarefree_decomposition(fq, f) {
        for (h, d) in distinct_degree(fq, &g) {
            for irr in equal_degree(fq, &h, d, &mut rng) {
                out.push((irr, mult));
            }
        }
    }
    out.sort();
    out
}
