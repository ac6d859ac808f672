//! A small Buchberger engine over F_q and staircase colength counting.
//!
//! The monomial order is graded reverse lexicographic in the ring's
//! variable order; S-pairs are processed in normal strategy (minimal lcm
//! degree first, deterministic tie-break). The engine is budgeted: it
//! never truncates silently.

use crate::error::{Error, Result};
use crate::poly::{Mono, Poly, RingSpec};
use std::collections::BTreeSet;

/// Vector-space dimension of B/I.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Colength {
    Finite(u64),
    Infinite,
}

/// Fully reduce `f` modulo `basis`; every term of the remainder is
/// divisible by no leading term of the basis.
pub fn reduce(ring: &RingSpec, f: &Poly, basis: &[Poly]) -> Poly {
    let fq = &ring.field;
    let mut rem = Poly::zero();
    let mut work = f.clone();
    'outer: while let Some((m, &c)) = work.leading() {
        let m = m.clone();
        for g in basis {
            if let Some((lm, &lc)) = g.leading() {
                if lm.divides(&m) {
                    let factor = fq.div(c, lc);
                    let quot_m = m.div(lm);
                    let sub = ring.mul_term(g, &quot_m, factor);
                    work = ring.sub(&work, &sub);
                    continue 'outer;
                }
            }
        }
        // leading term irreducible: move it to the remainder
        work.terms.remove(&m);
        rem.terms.insert(m, c);
    }
    rem
}

fn s_poly(ring: &RingSpec, f: &Poly, g: &Poly) -> Poly {
    let fq = &ring.field;
    let (lmf, &lcf) = f.leading().unwrap();
    let (lmg, &lcg) = g.leading().unwrap();
    let l = lmf.lcm(lmg);
    let a = ring.mul_term(f, &l.div(lmf), fq.inv(lcf));
    let b = ring.mul_term(g, &l.div(lmg), fq.inv(lcg));
    ring.sub(&a, &b)
}

/// Buchberger with the product criterion, bounded by `budget` processed
/// S-pairs. Returns the reduced Groebner basis, sorted by leading term.
pub fn groebner_basis(ring: &RingSpec, gens: &[Poly], budget: usize) -> Result<Vec<Poly>> {
    let mut basis: Vec<Poly> = gens.iter().filter(|p| !p.is_zero()).cloned().collect();
    if basis.is_empty() {
        return Ok(vec![]);
    }
    let mut pairs: BTreeSet<(u64, usize, usize)> = BTreeSet::new();
    let lead = |p: &Poly| p.leading().unwrap().0.clone();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let l = lead(&basis[i]).lcm(&lead(&basis[j]));
            pairs.insert((l.total_degree(), i, j));
        }
    }
    let mut processed = 0usize;
    while let Some(&(_, i, j)) = pairs.iter().next() {
        pairs.remove(&(lead(&basis[i]).lcm(&lead(&basis[j])).total_degree(), i, j));
        processed += 1;
        if processed > budget {
            return Err(Error::BudgetExceeded { budget });
        }
        let (li, lj) = (lead(&basis[i]), lead(&basis[j]));
        // product criterion: coprime leading monomials reduce to zero
        if li.lcm(&lj) == li.mul(&lj) {
            continue;
        }
        let s = s_poly(ring, &basis[i], &basis[j]);
        let r = reduce(ring, &s, &basis);
        if !r.is_zero() {
            let k = basis.len();
            for (idx, _) in basis.iter().enumerate() {
                let l = lead(&basis[idx]).lcm(&r.leading().unwrap().0.clone());
                pairs.insert((l.total_degree(), idx, k));
            }
            basis.push(r);
        }
    }
    Ok(reduce_basis(ring, basis))
}

fn reduce_basis(ring: &RingSpec, mut basis: Vec<Poly>) -> Vec<Poly> {
    let fq = &ring.field;
    // minimalize: drop generators whose leading term another divides
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let lmi = basis[i].leading().unwrap().0.clone();
        for j in 0..basis.len() {
            if i != j && keep[j] {
                let lmj = basis[j].leading().unwrap().0.clone();
                if lmj.divides(&lmi) && (lmj != lmi || j < i) {
                    keep[i] = false;
                    break;
                }
            }
        }
    }
    basis = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect();
    // inter-reduce and normalize monic
    loop {
        let mut changed = false;
        for i in 0..basis.len() {
            let others: Vec<Poly> = basis
                .iter()
                .enumerate()
                .filter_map(|(j, p)| (j != i).then(|| p.clone()))
                .collect();
            let r = reduce(ring, &basis[i], &others);
            if r != basis[i] {
                basis[i] = r;
                changed = true;
            }
        }
        basis.retain(|p| !p.is_zero());
        if !changed {
            break;
        }
    }
    for p in basis.iter_mut() {
        let lc = *p.leading().unwrap().1;
        *p = ring.scale(p, fq.inv(lc));
    }
    basis.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    basis
}

/// Minimal monomial generators of the leading-term ideal of a reduced basis.
pub fn leading_term_generators(basis: &[Poly]) -> Vec<Mono> {
    let mut lts: Vec<Mono> = basis
        .iter()
        .filter_map(|p| p.leading().map(|(m, _)| m.clone()))
        .collect();
    lts.sort();
    let mut minimal: Vec<Mono> = vec![];
    for m in lts {
        if !minimal.iter().any(|g| g.divides(&m)) {
            minimal.push(m);
        }
    }
    minimal
}

/// The standard monomials (those outside the leading-term ideal) when the
/// quotient is finite-dimensional.
pub fn standard_monomials(ring: &RingSpec, lt_gens: &[Mono]) -> Option<Vec<Mono>> {
    let d = ring.dim();
    let mut bounds = vec![None; d];
    for g in lt_gens {
        let support: Vec<usize> = (0..d).filter(|&i| g.0[i] > 0).collect();
        if g.is_unit() {
            return Some(vec![]); // ideal is the unit ideal
        }
        if support.len() == 1 {
            let i = support[0];
            let b = g.0[i] as u64;
            bounds[i] = Some(bounds[i].map_or(b, |old: u64| old.min(b)));
        }
    }
    let bounds: Option<Vec<u64>> = bounds.into_iter().collect();
    let bounds = bounds?;
    let total: u128 = bounds.iter().map(|&b| b as u128).product();
    assert!(total <= 100_000_000, "staircase enumeration too large");
    let mut out = vec![];
    let mut current = vec![0u16; d];
    enumerate_standard(0, &bounds, lt_gens, &mut current, &mut out);
    out.sort();
    Some(out)
}

fn enumerate_standard(
    i: usize,
    bounds: &[u64],
    lt_gens: &[Mono],
    current: &mut Vec<u16>,
    out: &mut Vec<Mono>,
) {
    if i == bounds.len() {
        let m = Mono(current.clone());
        if !lt_gens.iter().any(|g| g.divides(&m)) {
            out.push(m);
        }
        return;
    }
    for e in 0..bounds[i] {
        current[i] = e as u16;
        enumerate_standard(i + 1, bounds, lt_gens, current, out);
    }
    current[i] = 0;
}

/// dim_k B/(gens) via the Groebner staircase; `Infinite` when some
/// variable has no pure power in the leading-term ideal.
pub fn colength(ring: &RingSpec, gens: &[Poly], budget: usize) -> Result<Colength> {
    if gens.is_empty() || gens.iter().all(|g| g.is_zero()) {
        return Ok(Colength::Infinite);
    }
    let gb = groebner_basis(ring, gens, budget)?;
    let lt = leading_term_generators(&gb);
    match standard_monomials(ring, &lt) {
        Some(monos) => Ok(Colength::Finite(monos.len() as u64)),
        None => Ok(Colength::Infinite),
    }
}

/// Generators of the Frobenius power I^[q]: q-th powers of the generators.
pub fn frobenius_power(ring: &RingSpec, gens: &[Poly], q: u64) -> Vec<Poly> {
    gens.iter().map(|g| ring.pow(g, q)).collect()
}
