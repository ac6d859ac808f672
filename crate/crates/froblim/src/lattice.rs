//! Q-graded B*G-lattices: modules that are finite free over B with a
//! compatible semilinear G-action.
//!
//! A lattice stores one sparse action matrix per group element, column j
//! holding the coordinates of g . e_j. The twisted cocycle law
//! C(gh) = C(g) . g(C(h)) and the degree discipline
//! deg C(g)_{ij} = deg(e_j) - deg(e_i) are enforced at construction.
//!
//! The Frobenius pushforward has basis ^e(x^a e_j) over exponent vectors a
//! below p^e, degrees divided by p^e, and action computed by substitution
//! and p^e-th root decomposition.

use crate::error::{Error, Result};
use crate::fdmod::{FDModule, Q};
use crate::field::FqElem;
use crate::group::GroupTable;
use crate::poly::{Mono, Poly};
use num::{BigInt, One, Signed, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_u64(n: u64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_ratio(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Sparse column: nonzero (row, entry) pairs, sorted by row.
pub type SparseCol = Vec<(usize, Poly)>;

#[derive(Debug, Clone)]
pub struct Lattice {
    pub gt: Arc<GroupTable>,
    pub rank: usize,
    pub degs: Vec<Q>,
    /// act[g][j] = sparse column of g . e_j
    pub act: Vec<Vec<SparseCol>>,
}

/// All exponent vectors with entries < q, in increasing monomial order.
pub fn exponent_box(dim: usize, q: u64) -> Vec<Mono> {
    let mut out = vec![];
    let mut current = vec![0u16; dim];
    loop {
        out.push(Mono(current.clone()));
        let mut i = 0;
        loop {
            if i == dim {
                out.sort();
                return out;
            }
            current[i] += 1;
            if (current[i] as u64) < q {
                break;
            }
            current[i] = 0;
            i += 1;
        }
    }
}

impl Lattice {
    pub fn new(gt: Arc<GroupTable>, degs: Vec<Q>, act: Vec<Vec<SparseCol>>) -> Result<Self> {
        let lat = Lattice {
            rank: degs.len(),
            gt,
            degs,
            act,
        };
        lat.validate()?;
        Ok(lat)
    }

    /// B tensor V, shifted so basis vector j sits in degree
    /// shift + grading(V)_j.
    pub fn make_free(v: &FDModule, shift: &Q) -> Lattice {
        let gt = v.gt.clone();
        let ring = &gt.ring;
        let degs: Vec<Q> = (0..v.dim)
            .map(|j| match &v.grading {
                Some(g) => shift + &g[j],
                None => shift.clone(),
            })
            .collect();
        let mut act = vec![];
        for g in 0..gt.order() {
            let mut cols = vec![];
            for j in 0..v.dim {
                let mut col = vec![];
                for i in 0..v.dim {
                    let c = v.mats[g].get(i, j);
                    if c != 0 {
                        col.push((i, ring.constant(c)));
                    }
                }
                cols.push(col);
            }
            act.push(cols);
        }
        Lattice {
            gt,
            rank: v.dim,
            degs,
            act,
        }
    }

    /// The standard lattice B itself.
    pub fn standard(gt: Arc<GroupTable>) -> Lattice {
        Lattice::make_free(&FDModule::trivial(gt, 1), &Q::zero())
    }

    /// The rank-one free B*G-module B tensor kG.
    pub fn free_bg(gt: Arc<GroupTable>) -> Lattice {
        Lattice::make_free(&FDModule::regular(gt), &Q::zero())
    }

    pub fn validate(&self) -> Result<()> {
        let ring = &self.gt.ring;
        if self.act.len() != self.gt.order() {
            return Err(Error::ConfigInvalid(
                "one action matrix per group element".into(),
            ));
        }
        for g in 0..self.gt.order() {
            if self.act[g].len() != self.rank {
                return Err(Error::ConfigInvalid("action matrix rank mismatch".into()));
            }
            for (j, col) in self.act[g].iter().enumerate() {
                for (i, p) in col {
                    if p.is_zero() {
                        return Err(Error::ConfigInvalid("stored zero action entry".into()));
                    }
                    let expected = &self.degs[j] - &self.degs[*i];
                    if !expected.is_integer() || expected.is_negative() {
                        return Err(Error::DegreeMismatch(format!(
                            "action entry ({i},{j}) would need degree {expected}"
                        )));
                    }
                    let d = expected.to_integer();
                    let d: u64 = d.try_into().map_err(|_| {
                        Error::DegreeMismatch("degree out of range".into())
                    })?;
                    match ring.homogeneous_degree(p) {
                        Some(pd) if pd == d => {}
                        _ => {
                            return Err(Error::DegreeMismatch(format!(
                                "action entry ({i},{j}) is not homogeneous of degree {d}"
                            )))
                        }
                    }
                }
            }
        }
        // identity acts as identity
        let id = self.gt.identity;
        for (j, col) in self.act[id].iter().enumerate() {
            let ok = col.len() == 1 && col[0].0 == j && col[0].1 == ring.one();
            if !ok {
                return Err(Error::ConfigInvalid(
                    "identity element must act as the identity matrix".into(),
                ));
            }
        }
        if !self.cocycle_holds() {
            return Err(Error::ConfigInvalid(
                "twisted cocycle law C(gh) = C(g) g(C(h)) violated".into(),
            ));
        }
        Ok(())
    }

    /// Exhaustive check of C(gh) = C(g) . g(C(h)) over G x G.
    pub fn cocycle_holds(&self) -> bool {
        let n = self.gt.order();
        for g in 0..n {
            for h in 0..n {
                let gh = self.gt.mul[g][h];
                for j in 0..self.rank {
                    let lhs = self.col_to_dense(&self.act[gh][j]);
                    // C(g) . g(C(h)) column j
                    let mut rhs = vec![Poly::zero(); self.rank];
                    for (k, p) in &self.act[h][j] {
                        let gp = self.gt.apply(g, p);
                        for (i, q) in &self.act[g][*k] {
                            let prod = self.gt.ring.mul(q, &gp);
                            rhs[*i] = self.gt.ring.add(&rhs[*i], &prod);
                        }
                    }
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn col_to_dense(&self, col: &SparseCol) -> Vec<Poly> {
        let mut v = vec![Poly::zero(); self.rank];
        for (i, p) in col {
            v[*i] = p.clone();
        }
        v
    }

    /// g . v for a coordinate vector v over B: C(g) . g(v).
    pub fn apply_element(&self, g: usize, v: &[Poly]) -> Vec<Poly> {
        let ring = &self.gt.ring;
        let mut out = vec![Poly::zero(); self.rank];
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero() {
                continue;
            }
            let gv = self.gt.apply(g, vj);
            for (i, p) in &self.act[g][j] {
                let prod = ring.mul(p, &gv);
                out[*i] = ring.add(&out[*i], &prod);
            }
        }
        out
    }

    /// Degree of a homogeneous element, `None` if zero or inhomogeneous.
    pub fn element_degree(&self, v: &[Poly]) -> Option<Q> {
        let ring = &self.gt.ring;
        let mut result: Option<Q> = None;
        for (i, p) in v.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let pd = ring.homogeneous_degree(p)?;
            let total = q_u64(pd) + &self.degs[i];
            match &result {
                None => result = Some(total),
                Some(r) if *r == total => {}
                _ => return None,
            }
        }
        result
    }

    /// Whether every action entry is a constant polynomial. Constant
    /// lattices are exactly those of the form B tensor (fiber).
    pub fn is_constant(&self) -> bool {
        self.act.iter().all(|cols| {
            cols.iter().all(|col| {
                col.iter()
                    .all(|(_, p)| p.terms.keys().all(|m| m.is_unit()))
            })
        })
    }

    /// The fiber F / m_B F as a graded kG-module.
    pub fn fiber(&self) -> FDModule {
        let ring = &self.gt.ring;
        let mut mats = vec![];
        for g in 0..self.gt.order() {
            let mut m = crate::linalg::Mat::zero(self.rank, self.rank);
            for (j, col) in self.act[g].iter().enumerate() {
                for (i, p) in col {
                    if let Some(&c) = p.terms.get(&Mono::unit(ring.dim())) {
                        m.set(*i, j, c);
                    }
                }
            }
            mats.push(m);
        }
        FDModule::new(self.gt.clone(), mats, Some(self.degs.clone()))
            .expect("fiber of a valid lattice is a valid module")
    }

    /// Shift all degrees by lambda (the lattice F[-lambda] convention:
    /// basis degrees increase by lambda).
    pub fn shifted(&self, lambda: &Q) -> Lattice {
        let mut out = self.clone();
        for d in out.degs.iter_mut() {
            *d = &*d + lambda;
        }
        out
    }

    /// Normalize so the minimum degree is zero; returns the shift removed.
    pub fn shift_normalized(&self) -> (Lattice, Q) {
        let min = self.degs.iter().min().cloned().unwrap_or_else(Q::zero);
        (self.shifted(&(-&min)), min)
    }

    /// The Frobenius pushforward ^e(self): basis ^e(x^a e_j) with
    /// 0 <= a_i < p^e, ordered with j major and a in monomial order.
    pub fn pushforward(&self, e: u64) -> Lattice {
        if e == 0 {
            return self.clone();
        }
        let ring = &self.gt.ring;
        let p = ring.field.p;
        let pe = p.pow(e as u32);
        let pe_q = q_u64(pe);
        let d = ring.dim();
        let box_monos = exponent_box(d, pe);
        let box_index: BTreeMap<Mono, usize> =
            box_monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let bs = box_monos.len();
        let rank = self.rank * bs;
        // degree of ^e(x^a e_j) = (deg x^a + deg e_j) / p^e
        let mut degs = Vec::with_capacity(rank);
        for j in 0..self.rank {
            for a in &box_monos {
                let deg = (q_u64(ring.weighted_degree(a)) + &self.degs[j]) / &pe_q;
                degs.push(deg);
            }
        }
        let idx = |j: usize, ai: usize| j * bs + ai;
        let mut act = Vec::with_capacity(self.gt.order());
        for g in 0..self.gt.order() {
            let mut cols: Vec<SparseCol> = vec![vec![]; rank];
            for j in 0..self.rank {
                for (ai, a) in box_monos.iter().enumerate() {
                    // g . ^e(x^a e_j) = ^e( g(x^a) . sum_i C(g)_{ij} e_i )
                    let ga = self.gt.apply(g, &ring.monomial(a.clone(), 1));
                    let mut col: SparseCol = vec![];
                    for (i, cgij) in &self.act[g][j] {
                        let h = ring.mul(&ga, cgij);
                        for (b, hb) in ring.root_decompose(&h, e) {
                            let bi = *box_index.get(&b).expect("root exponents below p^e");
                            col.push((idx(*i, bi), hb));
                        }
                    }
                    col.sort_by_key(|(r, _)| *r);
                    // merge duplicate rows
                    let mut merged: SparseCol = vec![];
                    for (r, p) in col {
                        if let Some((lr, lp)) = merged.last_mut() {
                            if *lr == r {
                                *lp = ring.add(lp, &p);
                                continue;
                            }
                        }
                        merged.push((r, p));
                    }
                    merged.retain(|(_, p)| !p.is_zero());
                    cols[idx(j, ai)] = merged;
                }
            }
            act.push(cols);
        }
        let out = Lattice {
            gt: self.gt.clone(),
            rank,
            degs,
            act,
        };
        debug_assert!(out.cocycle_holds());
        out
    }

    /// Basis of the degree-mu component: pairs (basis index, monomial).
    pub fn degree_component(&self, mu: &Q) -> Vec<(usize, Mono)> {
        let ring = &self.gt.ring;
        let mut out = vec![];
        for i in 0..self.rank {
            let need = mu - &self.degs[i];
            if !need.is_integer() || need.is_negative() {
                continue;
            }
            let n: u64 = match need.to_integer().try_into() {
                Ok(n) => n,
                Err(_) => continue,
            };
            for m in ring.monomials_of_degree(n) {
                out.push((i, m));
            }
        }
        out
    }

    /// Solve sum_s b_s gens[s] = target with b_s in B homogeneous of the
    /// forced degrees. Gens and target must be homogeneous elements given
    /// with their degrees. Returns the coefficient polynomials.
    pub fn solve_in_span(
        &self,
        gens: &[(Vec<Poly>, Q)],
        target: &[Poly],
        target_deg: &Q,
    ) -> Option<Vec<Poly>> {
        let ring = &self.gt.ring;
        let fq = &ring.field;
        // unknowns: coefficients of b_s over monomials of degree
        // target_deg - deg(gens[s])
        let mut unknown_monos: Vec<(usize, Mono)> = vec![];
        for (s, (_, d)) in gens.iter().enumerate() {
            let need = target_deg - d;
            if !need.is_integer() || need.is_negative() {
                continue;
            }
            let n: u64 = match need.to_integer().try_into() {
                Ok(n) => n,
                Err(_) => continue,
            };
            for m in ring.monomials_of_degree(n) {
                unknown_monos.push((s, m));
            }
        }
        if unknown_monos.is_empty() {
            return if target.iter().all(|p| p.is_zero()) {
                Some(vec![Poly::zero(); gens.len()])
            } else {
                None
            };
        }
        let coords = self.degree_component(target_deg);
        let coord_index: BTreeMap<(usize, Mono), usize> = coords
            .iter()
            .cloned()
            .enumerate()
            .map(|(k, c)| (c, k))
            .collect();
        let mut sys = crate::linalg::Mat::zero(coords.len(), unknown_monos.len());
        for (u, (s, m)) in unknown_monos.iter().enumerate() {
            // m * gens[s] has coordinates (i, m * mono)
            for (i, p) in gens[*s].0.iter().enumerate() {
                for (pm, &c) in &p.terms {
                    let key = (i, m.mul(pm));
                    let row = *coord_index
                        .get(&key)
                        .expect("homogeneous product stays in the component");
                    let v = fq.add(sys.get(row, u), c);
                    sys.set(row, u, v);
                }
            }
        }
        let mut rhs = vec![0; coords.len()];
        for (i, p) in target.iter().enumerate() {
            for (pm, &c) in &p.terms {
                let row = *coord_index.get(&(i, pm.clone()))?;
                rhs[row] = c;
            }
        }
        let sol = sys.solve(fq, &rhs)?;
        let mut out = vec![Poly::zero(); gens.len()];
        for (u, (s, m)) in unknown_monos.iter().enumerate() {
            if sol[u] != 0 {
                let t = ring.monomial(m.clone(), sol[u]);
                out[*s] = ring.add(&out[*s], &t);
            }
        }
        Some(out)
    }

    /// Restrict to a G-stable free direct summand spanned by the given
    /// homogeneous elements; the action is re-solved in the new basis.
    pub fn sublattice(&self, basis: &[(Vec<Poly>, Q)]) -> Result<Lattice> {
        let s = basis.len();
        let degs: Vec<Q> = basis.iter().map(|(_, d)| d.clone()).collect();
        let mut act = vec![];
        for g in 0..self.gt.order() {
            let mut cols: Vec<SparseCol> = vec![];
            for (v, dv) in basis {
                let gv = self.apply_element(g, v);
                let coeffs = self
                    .solve_in_span(basis, &gv, dv)
                    .ok_or_else(|| Error::NotSplit("subspace not G-stable over B".into()))?;
                let mut col: SparseCol = vec![];
                for (i, c) in coeffs.into_iter().enumerate() {
                    if !c.is_zero() {
                        col.push((i, c));
                    }
                }
                cols.push(col);
            }
            act.push(cols);
        }
        Lattice::new(self.gt.clone(), degs, act).map(|mut l| {
            l.rank = s;
            l
        })
    }

    /// Unit coordinate vector e_i as a lattice element.
    pub fn unit_element(&self, i: usize) -> Vec<Poly> {
        let mut v = vec![Poly::zero(); self.rank];
        v[i] = self.gt.ring.one();
        v
    }

    /// Multiset of degrees after shift normalization, sorted.
    pub fn normalized_degree_multiset(&self) -> Vec<Q> {
        let (norm, _) = self.shift_normalized();
        let mut d = norm.degs;
        d.sort();
        d
    }
}

/// Apply a matrix of polynomials (columns = images) to a coordinate
/// vector.
pub fn matvec(ring: &crate::poly::RingSpec, cols: &[Vec<Poly>], v: &[Poly]) -> Vec<Poly> {
    let rows = cols.first().map(|c| c.len()).unwrap_or(0);
    let mut out = vec![Poly::zero(); rows];
    for (j, vj) in v.iter().enumerate() {
        if vj.is_zero() {
            continue;
        }
        for (i, cij) in cols[j].iter().enumerate() {
            if !cij.is_zero() {
                let prod = ring.mul(cij, vj);
                out[i] = ring.add(&out[i], &prod);
            }
        }
    }
    out
}

pub type FqScalar = FqElem;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::group::{close_group, diagonal_images, permutation_images, ActionSpec};
    use crate::poly::RingSpec;

    fn ver3() -> Arc<GroupTable> {
        let r = RingSpec::standard(FieldSpec::prime(7).unwrap(), &["x", "y"]).unwrap();
        let gen = diagonal_images(&r, &[2, 4]);
        Arc::new(close_group(&ActionSpec::new(r, vec![("g".into(), gen)])).unwrap())
    }

    fn swap2() -> Arc<GroupTable> {
        let r = RingSpec::standard(FieldSpec::prime(2).unwrap(), &["x1", "x2", "x3", "x4"])
            .unwrap();
        let gen = permutation_images(&r, &[1, 0, 3, 2]);
        Arc::new(close_group(&ActionSpec::new(r, vec![("s".into(), gen)])).unwrap())
    }

    fn d1_p2() -> Arc<GroupTable> {
        let r = RingSpec::standard(FieldSpec::prime(2).unwrap(), &["x"]).unwrap();
        let gen = vec![r.var(0)];
        Arc::new(close_group(&ActionSpec::new(r, vec![("e".into(), gen)])).unwrap())
    }

    #[test]
    fn standard_lattice_and_free_bg() {
        let gt = ver3();
        let b = Lattice::standard(gt.clone());
        assert_eq!(b.rank, 1);
        b.validate().unwrap();
        let bg = Lattice::free_bg(gt);
        assert_eq!(bg.rank, 3);
        bg.validate().unwrap();
    }

    #[test]
    fn character_lattice_ver3() {
        // V = chi_1 of Z/3 over F_7: rank-1 lattice with C(g) = (2)
        let gt = ver3();
        let two = gt
            .elements
            .iter()
            .position(|im| im[0] == gt.ring.parse("2*x").unwrap())
            .unwrap();
        let chi: Vec<u64> = (0..3)
            .map(|g| {
                if g == gt.identity {
                    1
                } else if g == two {
                    2
                } else {
                    4
                }
            })
            .collect();
        let v = FDModule::character(gt.clone(), chi).unwrap();
        let lat = Lattice::make_free(&v, &Q::zero());
        lat.validate().unwrap();
        assert_eq!(lat.act[two][0], vec![(0, gt.ring.constant(2))]);
    }

    #[test]
    fn pushforward_rank_and_degrees_d1() {
        // B = F_2[x], trivial group, e = 1: rank 2, degrees {0, 1/2}
        let gt = d1_p2();
        let b = Lattice::standard(gt);
        let pf = b.pushforward(1);
        assert_eq!(pf.rank, 2);
        let mut degs = pf.degs.clone();
        degs.sort();
        assert_eq!(degs, vec![q_int(0), q_ratio(1, 2)]);
        pf.validate().unwrap();
    }

    #[test]
    fn pushforward_rank_ver3() {
        let gt = ver3();
        let b = Lattice::standard(gt);
        let pf = b.pushforward(1);
        assert_eq!(pf.rank, 49);
        pf.validate().unwrap();
        // degree rule: every degree is (deg x^a)/7 for exponents below 7
        for d in &pf.degs {
            let scaled = d * q_int(7);
            assert!(scaled.is_integer());
        }
    }

    #[test]
    fn pushforward_of_swap_has_permutation_action() {
        let gt = swap2();
        let b = Lattice::standard(gt.clone());
        let pf = b.pushforward(1);
        assert_eq!(pf.rank, 16);
        assert!(pf.is_constant());
        pf.validate().unwrap();
        // fiber decomposes as kG^6 + k^4
        let fiber = pf.fiber();
        let dec = crate::repdecomp::decompose_fdmodule(&fiber, 1).unwrap();
        assert_eq!(dec.shape(), vec![(1, 4), (2, 6)]);
    }

    #[test]
    fn rank_formula_general() {
        // rank(^e F) = p^{de} rank(F)
        let gt = swap2();
        let bg = Lattice::free_bg(gt);
        let pf = bg.pushforward(1);
        assert_eq!(pf.rank, 16 * 2);
        pf.validate().unwrap();
    }

    #[test]
    fn iterated_pushforward_matches_depth_two_rank() {
        let gt = d1_p2();
        let b = Lattice::standard(gt);
        let p1 = b.pushforward(1).pushforward(1);
        let p2 = b.pushforward(2);
        assert_eq!(p1.rank, p2.rank);
        let mut d1: Vec<Q> = p1.degs.clone();
        let mut d2: Vec<Q> = p2.degs.clone();
        d1.sort();
        d2.sort();
        assert_eq!(d1, d2);
    }

    #[test]
    fn solve_in_span_finds_module_coordinates() {
        let gt = ver3();
        let ring = gt.ring.clone();
        let b = Lattice::free_bg(gt);
        // target = x * e_0 + 2 e_1 in degree 1 against basis {e_0, e_1, e_2}
        let gens: Vec<(Vec<Poly>, Q)> = (0..3)
            .map(|i| (b.unit_element(i), Q::zero()))
            .collect();
        let mut target = vec![Poly::zero(); 3];
        target[0] = ring.parse("x").unwrap();
        target[1] = ring.parse("2*x").unwrap();
        let sol = b.solve_in_span(&gens, &target, &q_int(1)).unwrap();
        assert_eq!(sol[0], ring.parse("x").unwrap());
        assert_eq!(sol[1], ring.parse("2*x").unwrap());
        assert!(sol[2].is_zero());
    }

    #[test]
    fn shift_normalization() {
        let gt = ver3();
        let b = Lattice::standard(gt).shifted(&q_ratio(3, 7));
        let (norm, shift) = b.shift_normalized();
        assert_eq!(shift, q_ratio(3, 7));
        assert_eq!(norm.degs, vec![Q::zero()]);
    }
}
