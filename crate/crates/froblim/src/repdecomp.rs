//! Krull-Schmidt decomposition of finite-dimensional kG-modules, the
//! simple modules with their projective covers, and head multiplicities.
//!
//! The splitting driver follows the endomorphism route: compute End(M),
//! its radical, and extract idempotents of the semisimple quotient from
//! factored minimal polynomials; indecomposability is certified by the
//! quotient being a finite field (locality of the endomorphism ring).

use crate::error::{Error, Result};
use crate::fdalg::{echelon_basis, FDAlgebra};
use crate::fdmod::{FDModule, Q};
use crate::field::FqElem;
use crate::group::GroupTable;
use crate::linalg::Mat;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// One direct-summand copy: its basis inside the ambient module, and the
/// degree it is concentrated in for graded modules.
#[derive(Debug, Clone)]
pub struct SummandCopy {
    pub basis: Vec<Vec<FqElem>>,
    pub degree: Option<Q>,
}

/// An isomorphism class of indecomposable summands with all its copies.
#[derive(Debug, Clone)]
pub struct Summand {
    pub module: FDModule,
    pub copies: Vec<SummandCopy>,
}

impl Summand {
    pub fn multiplicity(&self) -> usize {
        self.copies.len()
    }
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub summands: Vec<Summand>,
}

impl Decomposition {
    pub fn total_dim(&self) -> usize {
        self.summands
            .iter()
            .map(|s| s.module.dim * s.copies.len())
            .sum()
    }

    /// Multiset of (dimension, multiplicity) pairs, sorted.
    pub fn shape(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = self
            .summands
            .iter()
            .map(|s| (s.module.dim, s.copies.len()))
            .collect();
        v.sort();
        v
    }

    /// Check the certificate: the union of all copy bases is a basis of M,
    /// every copy spans a submodule, and each copy is isomorphic to its
    /// class representative.
    pub fn verify(&self, m: &FDModule) -> bool {
        let fq = &m.gt.ring.field;
        let mut columns: Vec<Vec<FqElem>> = vec![];
        for s in &self.summands {
            for copy in &s.copies {
                let sub = match m.submodule(&copy.basis) {
                    Ok(sub) => sub,
                    Err(_) => return false,
                };
                if sub.iso(&s.module, 17).is_none() {
                    return false;
                }
                columns.extend(copy.basis.iter().cloned());
            }
        }
        if columns.len() != m.dim {
            return false;
        }
        let u = Mat::from_rows(columns).transpose();
        u.inverse(fq).is_some()
    }
}

fn ambient_unit_basis(dim: usize) -> Vec<Vec<FqElem>> {
    (0..dim)
        .map(|i| {
            let mut v = vec![0; dim];
            v[i] = 1;
            v
        })
        .collect()
}

fn column_space_basis(m: &Mat, fq: &crate::field::FieldSpec) -> Vec<Vec<FqElem>> {
    let mut kept: Vec<Vec<FqElem>> = vec![];
    let mut rank = 0;
    for j in 0..m.cols {
        let col = m.col(j);
        let mut candidate = kept.clone();
        candidate.push(col.clone());
        let r = Mat::from_rows(candidate).rank(fq);
        if r > rank {
            kept.push(col);
            rank = r;
        }
    }
    kept
}

/// Evaluate a univariate polynomial at a square matrix (Horner).
fn matrix_poly_eval(
    fq: &crate::field::FieldSpec,
    f: &crate::unipoly::UniPoly,
    m: &Mat,
) -> Mat {
    let n = m.rows;
    let mut acc = Mat::zero(n, n);
    for &c in f.iter().rev() {
        acc = acc.mul(fq, m);
        if c != 0 {
            let mut diag = Mat::zero(n, n);
            for i in 0..n {
                diag.set(i, i, c);
            }
            acc = acc.add(fq, &diag);
        }
    }
    acc
}

/// Idempotent from the Fitting decomposition of a single endomorphism:
/// when its minimal polynomial has at least two distinct irreducible
/// factors, the CRT projection onto the first primary component is an
/// exact idempotent commuting with everything that commutes with phi.
fn fitting_idempotent(
    fq: &crate::field::FieldSpec,
    phi: &Mat,
    seed: u64,
) -> Option<Mat> {
    let mp = phi.min_poly(fq);
    let factors = crate::unipoly::factor(fq, &mp, seed);
    if factors.len() < 2 {
        return None;
    }
    let (f1, m1) = &factors[0];
    let mut comp1 = vec![1];
    for _ in 0..*m1 {
        comp1 = crate::unipoly::mul(fq, &comp1, f1);
    }
    let mut rest = vec![1];
    for (f, m) in factors.iter().skip(1) {
        for _ in 0..*m {
            rest = crate::unipoly::mul(fq, &rest, f);
        }
    }
    let (g, s, _) = crate::unipoly::ext_gcd(fq, &rest, &comp1);
    if crate::unipoly::deg(&g) != Some(0) {
        return None;
    }
    let e_poly = crate::unipoly::rem(fq, &crate::unipoly::mul(fq, &rest, &s), &mp);
    let eps = matrix_poly_eval(fq, &e_poly, phi);
    let n = phi.rows;
    if eps.is_zero() || eps == Mat::identity(n) || eps.mul(fq, &eps) != eps {
        return None;
    }
    Some(eps)
}

fn split_by_idempotent(
    m: &FDModule,
    eps: &Mat,
    seed: u64,
) -> Result<Vec<Vec<Vec<FqElem>>>> {
    let fq = &m.gt.ring.field;
    let complement = Mat::identity(m.dim).sub(fq, eps);
    let b1 = column_space_basis(eps, fq);
    let b0 = column_space_basis(&complement, fq);
    if b1.is_empty() || b0.is_empty() || b1.len() + b0.len() != m.dim {
        return Err(Error::NotSplit(
            "idempotent image did not split the module".into(),
        ));
    }
    let mut out = vec![];
    for basis in [b1, b0] {
        let sub = m.submodule(&basis)?;
        for piece in split_core(&sub, seed.wrapping_add(1))? {
            // map back to ambient coordinates
            let ambient: Vec<Vec<FqElem>> = piece
                .iter()
                .map(|v| {
                    let mut w = vec![0; m.dim];
                    for (k, &c) in v.iter().enumerate() {
                        if c != 0 {
                            for (idx, &b) in basis[k].iter().enumerate() {
                                w[idx] = fq.add(w[idx], fq.mul(c, b));
                            }
                        }
                    }
                    w
                })
                .collect();
            out.push(ambient);
        }
    }
    Ok(out)
}

/// Split an ungraded module into indecomposable summand bases (ambient
/// coordinates). Deterministic for a fixed seed: fitting splits from
/// sampled endomorphisms first, then the endomorphism-algebra route to
/// certify indecomposability (local End) or force a split.
fn split_core(m: &FDModule, seed: u64) -> Result<Vec<Vec<Vec<FqElem>>>> {
    if m.dim == 0 {
        return Ok(vec![]);
    }
    let fq = &m.gt.ring.field;
    if m.is_diagonal() {
        return Ok(ambient_unit_basis(m.dim)
            .into_iter()
            .map(|v| vec![v])
            .collect());
    }
    let end_basis = m.hom(m);
    if end_basis.len() == 1 {
        // End = k: a brick, indecomposable
        return Ok(vec![ambient_unit_basis(m.dim)]);
    }
    // Fitting phase: basis elements first, then seeded random combinations
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = 32 + 4 * end_basis.len();
    for attempt in 0..end_basis.len() + budget {
        let phi = if attempt < end_basis.len() {
            end_basis[attempt].clone()
        } else {
            let mut acc = Mat::zero(m.dim, m.dim);
            for h in &end_basis {
                let c = rng.gen_range(0..fq.q);
                if c != 0 {
                    acc = acc.add(fq, &h.scale(fq, c));
                }
            }
            acc
        };
        if let Some(eps) = fitting_idempotent(fq, &phi, seed ^ 0xf17) {
            return split_by_idempotent(m, &eps, seed);
        }
    }
    // certification phase
    let alg = FDAlgebra::from_matrices(fq, &end_basis)?;
    let rad = alg.radical();
    let (quot, proj) = alg.quotient(&rad)?;
    if quot.semisimple_is_field() {
        return Ok(vec![ambient_unit_basis(m.dim)]);
    }
    let ebar = quot.splitting_idempotent(seed).ok_or_else(|| {
        Error::NotSplit("semisimple endomorphism quotient yielded no idempotent".into())
    })?;
    let pre = section(&proj, &ebar, alg.dim);
    let e = alg.lift_idempotent(&pre)?;
    let mut eps = Mat::zero(m.dim, m.dim);
    for (i, &c) in e.iter().enumerate() {
        if c != 0 {
            eps = eps.add(fq, &end_basis[i].scale(fq, c));
        }
    }
    split_by_idempotent(m, &eps, seed)
}

/// Section of a quotient projection: place quotient coordinates on the
/// columns where the projection is a coordinate unit vector.
fn section(proj: &Mat, vec: &[FqElem], ambient_dim: usize) -> Vec<FqElem> {
    let mut pre = vec![0; ambient_dim];
    'rows: for (r, &v) in vec.iter().enumerate() {
        for c in 0..ambient_dim {
            if proj.get(r, c) == 1 && (0..proj.rows).all(|rr| rr == r || proj.get(rr, c) == 0) {
                pre[c] = v;
                continue 'rows;
            }
        }
        // fall back: any column with a nonzero entry in this row only
        for c in 0..ambient_dim {
            let val = proj.get(r, c);
            if val != 0 && (0..proj.rows).all(|rr| rr == r || proj.get(rr, c) == 0) {
                pre[c] = v; // scaled section is still a valid preimage mod J
                continue 'rows;
            }
        }
    }
    pre
}

/// Full Krull-Schmidt decomposition with certificates. Graded modules are
/// split degreewise first; iso classes are merged across degrees (shift
/// is immaterial for the class).
pub fn decompose_fdmodule(m: &FDModule, seed: u64) -> Result<Decomposition> {
    let mut pieces: Vec<(Vec<Vec<FqElem>>, Option<Q>)> = vec![];
    match &m.grading {
        None => {
            for basis in split_core(m, seed)? {
                pieces.push((basis, None));
            }
        }
        Some(grading) => {
            let mut degrees: Vec<Q> = grading.clone();
            degrees.sort();
            degrees.dedup();
            for deg in degrees {
                let idxs: Vec<usize> = (0..m.dim).filter(|&i| grading[i] == deg).collect();
                let basis: Vec<Vec<FqElem>> = idxs
                    .iter()
                    .map(|&i| {
                        let mut v = vec![0; m.dim];
                        v[i] = 1;
                        v
                    })
                    .collect();
                let sub = m.submodule(&basis)?;
                for piece in split_core(&sub, seed)? {
                    let ambient: Vec<Vec<FqElem>> = piece
                        .iter()
                        .map(|v| {
                            let mut w = vec![0; m.dim];
                            for (k, &c) in v.iter().enumerate() {
                                w[idxs[k]] = c;
                            }
                            w
                        })
                        .collect();
                    pieces.push((ambient, Some(deg.clone())));
                }
            }
        }
    }
    // group by isomorphism class
    let mut summands: Vec<Summand> = vec![];
    for (basis, degree) in pieces {
        let mut rep = m.submodule(&basis)?;
        rep.grading = None;
        let copy = SummandCopy { basis, degree };
        let mut found = false;
        for s in summands.iter_mut() {
            if s.module.dim == rep.dim && s.module.iso(&rep, seed ^ 0x15).is_some() {
                s.copies.push(copy.clone());
                found = true;
                break;
            }
        }
        if !found {
            summands.push(Summand {
                module: rep,
                copies: vec![copy],
            });
        }
    }
    summands.sort_by_key(|s| (s.module.dim, std::cmp::Reverse(s.copies.len())));
    Ok(Decomposition { summands })
}

/// One simple module with its projective cover and bookkeeping.
#[derive(Debug, Clone)]
pub struct SimpleEntry {
    pub simple: FDModule,
    pub cover: FDModule,
    /// multiplicity of the cover in kG
    pub u: usize,
    pub endo_dim: usize,
}

/// The simples V_i, covers P_i, multiplicities u_i and endomorphism
/// dimensions for one group, with V_0 the trivial module.
#[derive(Debug, Clone)]
pub struct SimpleTable {
    pub gt: Arc<GroupTable>,
    pub entries: Vec<SimpleEntry>,
    /// Jacobson radical of kG, as coordinate vectors over group elements.
    pub jacobson: Vec<Vec<FqElem>>,
}

/// Apply an element of kG (coordinates over group elements) in a module.
fn kg_element_matrix(m: &FDModule, coords: &[FqElem]) -> Mat {
    let fq = &m.gt.ring.field;
    let mut out = Mat::zero(m.dim, m.dim);
    for (g, &c) in coords.iter().enumerate() {
        if c != 0 {
            out = out.add(fq, &m.mats[g].scale(fq, c));
        }
    }
    out
}

/// The subspace J(kG)M, as an echelon basis.
pub fn radical_submodule(m: &FDModule, jacobson: &[Vec<FqElem>]) -> Vec<Vec<FqElem>> {
    let fq = &m.gt.ring.field;
    let mut vectors = vec![];
    for j in jacobson {
        let mat = kg_element_matrix(m, j);
        for col in 0..m.dim {
            let v = mat.col(col);
            if v.iter().any(|&c| c != 0) {
                vectors.push(v);
            }
        }
    }
    echelon_basis(fq, vectors, m.dim)
}

/// All simple kG-modules with their projective covers, found inside the
/// regular module. The identity sum u_i * dim P_i = |G| is verified.
pub fn simples_and_covers(gt: Arc<GroupTable>, seed: u64) -> Result<SimpleTable> {
    let fq = gt.ring.field.clone();
    let reg = FDModule::regular(gt.clone());
    let dec = decompose_fdmodule(&reg, seed)?;
    let kg = FDAlgebra::group_algebra(&fq, &gt.mul, gt.identity);
    let jacobson = kg.radical();
    let mut entries = vec![];
    for s in &dec.summands {
        let cover = s.module.clone();
        let jm = radical_submodule(&cover, &jacobson);
        let (simple, _) = cover.quotient(&jm)?;
        let endo_dim = simple.end_dim();
        let u = s.multiplicity();
        if endo_dim == 0 || simple.dim % endo_dim != 0 || u != simple.dim / endo_dim {
            return Err(Error::ConfigInvalid(format!(
                "cover multiplicity {} does not match dim V / dim End = {}/{}",
                u, simple.dim, endo_dim
            )));
        }
        entries.push(SimpleEntry {
            simple,
            cover,
            u,
            endo_dim,
        });
    }
    let total: usize = entries.iter().map(|e| e.u * e.cover.dim).sum();
    if total != gt.order() {
        return Err(Error::ConfigInvalid(format!(
            "sum u_i dim P_i = {total} differs from |G| = {}",
            gt.order()
        )));
    }
    // trivial module first, then by (dim V, dim P)
    let trivial = FDModule::trivial(gt.clone(), 1);
    entries.sort_by_key(|e| {
        let is_trivial = e.simple.dim == 1 && e.simple.iso(&trivial, 0).is_some();
        (!is_trivial, e.simple.dim, e.cover.dim)
    });
    Ok(SimpleTable {
        gt,
        entries,
        jacobson,
    })
}

impl SimpleTable {
    /// Multiplicity of each simple in M / J(kG)M.
    pub fn head_multiplicities(&self, m: &FDModule) -> Result<Vec<usize>> {
        if m.dim == 0 {
            return Ok(vec![0; self.entries.len()]);
        }
        let mut ungraded = m.clone();
        ungraded.grading = None;
        let jm = radical_submodule(&ungraded, &self.jacobson);
        let (head, _) = ungraded.quotient(&jm)?;
        let mut out = vec![];
        for e in &self.entries {
            let homs = head.hom(&e.simple);
            if homs.len() % e.endo_dim != 0 {
                return Err(Error::ConfigInvalid(
                    "hom dimension not divisible by endo dimension".into(),
                ));
            }
            out.push(homs.len() / e.endo_dim);
        }
        Ok(out)
    }

    /// kG-length of the head of M.
    pub fn head_length(&self, m: &FDModule) -> Result<usize> {
        Ok(self.head_multiplicities(m)?.iter().sum())
    }

    /// Index of the entry whose cover is isomorphic to the given module.
    pub fn cover_index(&self, m: &FDModule) -> Option<usize> {
        self.entries
            .iter()
            .position(|e| e.cover.dim == m.dim && e.cover.iso(m, 0).is_some())
    }

    /// Number of full regular-module copies inside a decomposition:
    /// min over i of (copies of P_i) / u_i.
    pub fn regular_copies(&self, dec: &Decomposition) -> usize {
        let mut best = usize::MAX;
        for e in &self.entries {
            let count = dec
                .summands
                .iter()
                .find(|s| s.module.dim == e.cover.dim && s.module.iso(&e.cover, 0).is_some())
                .map(|s| s.multiplicity())
                .unwrap_or(0);
            best = best.min(count / e.u);
        }
        if best == usize::MAX {
            0
        } else {
            best
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::group::{close_group, diagonal_images, permutation_images, ActionSpec};
    use crate::poly::RingSpec;

    fn group(p: u64, vars: &[&str], images: Vec<crate::poly::Poly>) -> Arc<GroupTable> {
        let r = RingSpec::standard(FieldSpec::prime(p).unwrap(), vars).unwrap();
        Arc::new(close_group(&ActionSpec::new(r, vec![("g".into(), images)])).unwrap())
    }

    fn z2_char2() -> Arc<GroupTable> {
        let r = RingSpec::standard(FieldSpec::prime(2).unwrap(), &["x", "y"]).unwrap();
        let images = permutation_images(&r, &[1, 0]);
        group(2, &["x", "y"], images)
    }

    fn z3_f7() -> Arc<GroupTable> {
        let r = RingSpec::standard(FieldSpec::prime(7).unwrap(), &["x", "y"]).unwrap();
        let images = diagonal_images(&r, &[2, 4]);
        group(7, &["x", "y"], images)
    }

    fn z3_f2() -> Arc<GroupTable> {
        let r = RingSpec::standard(FieldSpec::prime(2).unwrap(), &["x1", "x2", "x3"]).unwrap();
        let images = permutation_images(&r, &[1, 2, 0]);
        group(2, &["x1", "x2", "x3"], images)
    }

    #[test]
    fn regular_z2_char2_is_indecomposable() {
        let gt = z2_char2();
        let reg = FDModule::regular(gt);
        let dec = decompose_fdmodule(&reg, 1).unwrap();
        assert_eq!(dec.shape(), vec![(2, 1)]);
        assert!(dec.verify(&reg));
    }

    #[test]
    fn regular_z3_f7_splits_into_three_characters() {
        let gt = z3_f7();
        let reg = FDModule::regular(gt.clone());
        let dec = decompose_fdmodule(&reg, 1).unwrap();
        assert_eq!(dec.shape(), vec![(1, 1), (1, 1), (1, 1)]);
        assert!(dec.verify(&reg));
        // eigenspace oracle: each summand is a character with eigenvalue
        // 1, 2 or 4 on the generator
        let gen = (0..3).find(|&g| g != gt.identity).unwrap();
        let mut values: Vec<u64> = dec
            .summands
            .iter()
            .map(|s| s.module.mats[gen].get(0, 0))
            .collect();
        values.sort();
        let mut expected = vec![1, 2, 4];
        // the generator could be either nontrivial element; eigenvalues are
        // the same set
        expected.sort();
        assert_eq!(values, expected);
    }

    #[test]
    fn swap2_fiber_shape() {
        // 16-dimensional monomial fiber of the double swap at e = 1:
        // kG^6 + k^4 by the orbit count oracle
        let r = RingSpec::standard(FieldSpec::prime(2).unwrap(), &["x1", "x2", "x3", "x4"])
            .unwrap();
        let images = permutation_images(&r, &[1, 0, 3, 2]);
        let gt = group(2, &["x1", "x2", "x3", "x4"], images);
        // basis: exponent vectors in {0,1}^4, sigma permutes them
        let exps: Vec<Vec<u16>> = (0..16u32)
            .map(|k| (0..4).map(|i| ((k >> i) & 1) as u16).collect())
            .collect();
        let perm_of = |e: &Vec<u16>| -> Vec<u16> { vec![e[1], e[0], e[3], e[2]] };
        let mut mat = Mat::zero(16, 16);
        for (j, e) in exps.iter().enumerate() {
            let img = perm_of(e);
            let i = exps.iter().position(|x| *x == img).unwrap();
            mat.set(i, j, 1);
        }
        let sigma = (0..gt.order()).find(|&g| g != gt.identity).unwrap();
        let m = FDModule::from_generators(gt, &[(sigma, mat)], None).unwrap();
        let dec = decompose_fdmodule(&m, 1).unwrap();
        assert_eq!(dec.shape(), vec![(1, 4), (2, 6)]);
        assert!(dec.verify(&m));
    }

    #[test]
    fn decompose_is_seed_independent() {
        let gt = z3_f2();
        let reg = FDModule::regular(gt.clone());
        let big = reg.direct_sum(&reg).direct_sum(&FDModule::trivial(gt, 2));
        let d1 = decompose_fdmodule(&big, 1).unwrap();
        let d2 = decompose_fdmodule(&big, 99).unwrap();
        assert_eq!(d1.shape(), d2.shape());
        assert!(d1.verify(&big));
        assert!(d2.verify(&big));
    }

    #[test]
    fn simples_z2_char2() {
        let table = simples_and_covers(z2_char2(), 1).unwrap();
        assert_eq!(table.entries.len(), 1);
        let e = &table.entries[0];
        assert_eq!(e.simple.dim, 1);
        assert_eq!(e.cover.dim, 2);
        assert_eq!(e.u, 1);
        assert_eq!(e.endo_dim, 1);
    }

    #[test]
    fn simples_z3_f7() {
        let table = simples_and_covers(z3_f7(), 1).unwrap();
        assert_eq!(table.entries.len(), 3);
        for e in &table.entries {
            assert_eq!(e.simple.dim, 1);
            assert_eq!(e.cover.dim, 1);
            assert_eq!(e.u, 1);
            assert_eq!(e.endo_dim, 1);
        }
        // V_0 is the trivial module
        let trivial = FDModule::trivial(table.gt.clone(), 1);
        assert!(table.entries[0].simple.iso(&trivial, 0).is_some());
    }

    #[test]
    fn simples_z3_f2_has_endo_dim_two() {
        // x^3 - 1 = (x+1)(x^2+x+1) over F_2: simples of dims 1 and 2, the
        // 2-dimensional one with endomorphism field F_4
        let table = simples_and_covers(z3_f2(), 1).unwrap();
        assert_eq!(table.entries.len(), 2);
        let dims: Vec<(usize, usize, usize)> = table
            .entries
            .iter()
            .map(|e| (e.simple.dim, e.endo_dim, e.u))
            .collect();
        assert_eq!(dims, vec![(1, 1, 1), (2, 2, 1)]);
        let total: usize = table.entries.iter().map(|e| e.u * e.cover.dim).sum();
        assert_eq!(total, 3);
    }

    #[test]
    fn head_multiplicities_examples() {
        // head of kG for Z/2 in char 2 is one copy of the unique simple
        let gt = z2_char2();
        let table = simples_and_covers(gt.clone(), 1).unwrap();
        let reg = FDModule::regular(gt.clone());
        assert_eq!(table.head_multiplicities(&reg).unwrap(), vec![1]);
        // kG^6 + k^4 has head length 10
        let mut m = FDModule::trivial(gt.clone(), 4);
        for _ in 0..6 {
            m = m.direct_sum(&reg);
        }
        assert_eq!(table.head_length(&m).unwrap(), 10);
        // zero module
        let z = FDModule::zero(gt);
        assert_eq!(table.head_multiplicities(&z).unwrap(), vec![0]);
    }

    #[test]
    fn regular_copies_counts() {
        let gt = z3_f2();
        let table = simples_and_covers(gt.clone(), 1).unwrap();
        let reg = FDModule::regular(gt.clone());
        let m = reg.direct_sum(&reg).direct_sum(&FDModule::trivial(gt, 1));
        let dec = decompose_fdmodule(&m, 1).unwrap();
        assert_eq!(table.regular_copies(&dec), 2);
    }
}
