//! Finite-dimensional kG-modules given by one matrix per group element.

use crate::error::{Error, Result};
use crate::field::FqElem;
use crate::group::GroupTable;
use crate::linalg::Mat;
use num::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

pub type Q = BigRational;

/// A kG-module of dimension n: one invertible n x n matrix per group
/// element, respecting the multiplication table, with an optional rational
/// degree per basis vector.
#[derive(Debug, Clone)]
pub struct FDModule {
    pub gt: Arc<GroupTable>,
    pub dim: usize,
    pub mats: Vec<Mat>,
    pub grading: Option<Vec<Q>>,
}

impl FDModule {
    pub fn new(gt: Arc<GroupTable>, mats: Vec<Mat>, grading: Option<Vec<Q>>) -> Result<Self> {
        let dim = mats.first().map(|m| m.rows).unwrap_or(0);
        if mats.len() != gt.order() {
            return Err(Error::ConfigInvalid(
                "need one matrix per group element".into(),
            ));
        }
        let fq = &gt.ring.field;
        for m in &mats {
            if m.rows != dim || m.cols != dim {
                return Err(Error::ConfigInvalid("module matrices must be square".into()));
            }
        }
        if !mats[gt.identity].eq(&Mat::identity(dim)) {
            return Err(Error::ConfigInvalid("identity must act as identity".into()));
        }
        for g in 0..gt.order() {
            for h in 0..gt.order() {
                if mats[g].mul(fq, &mats[h]) != mats[gt.mul[g][h]] {
                    return Err(Error::ConfigInvalid(
                        "matrices do not respect the group table".into(),
                    ));
                }
            }
        }
        if let Some(grading) = &grading {
            if grading.len() != dim {
                return Err(Error::ConfigInvalid("one degree per basis vector".into()));
            }
            for m in &mats {
                for i in 0..dim {
                    for j in 0..dim {
                        if m.get(i, j) != 0 && grading[i] != grading[j] {
                            return Err(Error::ConfigInvalid(
                                "module matrices must preserve degrees".into(),
                            ));
                        }
                    }
                }
            }
        }
        Ok(FDModule {
            gt,
            dim,
            mats,
            grading,
        })
    }

    /// Build from matrices assigned to the generator elements, extending to
    /// the whole group along the multiplication table.
    pub fn from_generators(
        gt: Arc<GroupTable>,
        gens: &[(usize, Mat)],
        grading: Option<Vec<Q>>,
    ) -> Result<Self> {
        let dim = gens.first().map(|(_, m)| m.rows).unwrap_or(0);
        let fq = gt.ring.field.clone();
        let n = gt.order();
        let mut mats: Vec<Option<Mat>> = vec![None; n];
        mats[gt.identity] = Some(Mat::identity(dim));
        let mut frontier = vec![gt.identity];
        while let Some(e) = frontier.pop() {
            for (gi, gm) in gens {
                let target = gt.mul[*gi][e];
                if mats[target].is_none() {
                    let m = gm.mul(&fq, mats[e].as_ref().unwrap());
                    mats[target] = Some(m);
                    frontier.push(target);
                }
            }
        }
        let mats: Option<Vec<Mat>> = mats.into_iter().collect();
        let mats = mats.ok_or_else(|| {
            Error::ConfigInvalid("generator matrices do not reach every element".into())
        })?;
        FDModule::new(gt, mats, grading)
    }

    pub fn trivial(gt: Arc<GroupTable>, dim: usize) -> Self {
        let mats = vec![Mat::identity(dim); gt.order()];
        FDModule {
            gt,
            dim,
            mats,
            grading: None,
        }
    }

    /// The regular module kG with basis the group elements and the left
    /// translation action.
    pub fn regular(gt: Arc<GroupTable>) -> Self {
        let n = gt.order();
        let mut mats = vec![];
        for g in 0..n {
            let mut m = Mat::zero(n, n);
            for h in 0..n {
                m.set(gt.mul[g][h], h, 1);
            }
            mats.push(m);
        }
        FDModule {
            gt,
            dim: n,
            mats,
            grading: None,
        }
    }

    /// One-dimensional module with the given value on each element.
    pub fn character(gt: Arc<GroupTable>, values: Vec<FqElem>) -> Result<Self> {
        let mats = values
            .into_iter()
            .map(|v| Mat::from_rows(vec![vec![v]]))
            .collect();
        FDModule::new(gt, mats, None)
    }

    pub fn zero(gt: Arc<GroupTable>) -> Self {
        FDModule {
            gt: gt.clone(),
            dim: 0,
            mats: vec![Mat::zero(0, 0); gt.order()],
            grading: None,
        }
    }

    pub fn direct_sum(&self, other: &FDModule) -> FDModule {
        let dim = self.dim + other.dim;
        let mut mats = vec![];
        for g in 0..self.gt.order() {
            let mut m = Mat::zero(dim, dim);
            for i in 0..self.dim {
                for j in 0..self.dim {
                    m.set(i, j, self.mats[g].get(i, j));
                }
            }
            for i in 0..other.dim {
                for j in 0..other.dim {
                    m.set(self.dim + i, self.dim + j, other.mats[g].get(i, j));
                }
            }
            mats.push(m);
        }
        let grading = match (&self.grading, &other.grading) {
            (Some(a), Some(b)) => {
                let mut g = a.clone();
                g.extend(b.iter().cloned());
                Some(g)
            }
            _ => None,
        };
        FDModule {
            gt: self.gt.clone(),
            dim,
            mats,
            grading,
        }
    }

    /// Restrict the action to an invariant subspace with the given basis
    /// (vectors in ambient coordinates).
    pub fn submodule(&self, basis: &[Vec<FqElem>]) -> Result<FDModule> {
        let fq = &self.gt.ring.field;
        let k = basis.len();
        let mut bmat = Mat::zero(self.dim, k);
        for (j, v) in basis.iter().enumerate() {
            for i in 0..self.dim {
                bmat.set(i, j, v[i]);
            }
        }
        let mut mats = vec![];
        for g in 0..self.gt.order() {
            let mut m = Mat::zero(k, k);
            for j in 0..k {
                let img = self.mats[g].mul_vec(fq, &basis[j]);
                let coords = bmat
                    .solve(fq, &img)
                    .ok_or_else(|| Error::ConfigInvalid("subspace is not invariant".into()))?;
                for i in 0..k {
                    m.set(i, j, coords[i]);
                }
            }
            mats.push(m);
        }
        let grading = self.grading.as_ref().map(|deg| {
            basis
                .iter()
                .map(|v| {
                    let i = v.iter().position(|&c| c != 0).unwrap();
                    deg[i].clone()
                })
                .collect()
        });
        FDModule::new(self.gt.clone(), mats, grading)
    }

    /// Quotient by the span of the given vectors; also returns the
    /// projection matrix onto the quotient coordinates.
    pub fn quotient(&self, sub: &[Vec<FqElem>]) -> Result<(FDModule, Mat)> {
        let fq = &self.gt.ring.field;
        let mut m = if sub.is_empty() {
            Mat::zero(0, self.dim)
        } else {
            Mat::from_rows(sub.to_vec())
        };
        let pivots = m.rref(fq);
        let free: Vec<usize> = (0..self.dim).filter(|c| !pivots.contains(c)).collect();
        let k = free.len();
        let mut proj = Mat::zero(k, self.dim);
        for (r, &c) in free.iter().enumerate() {
            proj.set(r, c, 1);
        }
        for (row, &pc) in pivots.iter().enumerate() {
            for (r, &fc) in free.iter().enumerate() {
                let v = fq.neg(m.get(row, fc));
                proj.set(r, pc, v);
            }
        }
        let mut qmats = vec![];
        for g in 0..self.gt.order() {
            let mut qm = Mat::zero(k, k);
            for (j, &fc) in free.iter().enumerate() {
                let mut e = vec![0; self.dim];
                e[fc] = 1;
                let img = self.mats[g].mul_vec(fq, &e);
                let coords = proj.mul_vec(fq, &img);
                for i in 0..k {
                    qm.set(i, j, coords[i]);
                }
            }
            qmats.push(qm);
        }
        let grading = self
            .grading
            .as_ref()
            .map(|deg| free.iter().map(|&c| deg[c].clone()).collect());
        Ok((FDModule::new(self.gt.clone(), qmats, grading)?, proj))
    }

    /// Frobenius twist: matrices with entrywise p^e-th roots; degrees
    /// divided by p^e.
    pub fn pushforward(&self, e: u64) -> FDModule {
        let fq = &self.gt.ring.field;
        let mats = self
            .mats
            .iter()
            .map(|m| {
                let mut out = m.clone();
                for v in out.data.iter_mut() {
                    *v = fq.frobenius_root(*v, e);
                }
                out
            })
            .collect();
        let q = Q::from_integer(fq.p.pow(e as u32).into());
        let grading = self
            .grading
            .as_ref()
            .map(|deg| deg.iter().map(|d| d / &q).collect());
        FDModule {
            gt: self.gt.clone(),
            dim: self.dim,
            mats,
            grading,
        }
    }

    /// Basis of equivariant maps self -> other as matrices.
    pub fn hom(&self, other: &FDModule) -> Vec<Mat> {
        let fq = &self.gt.ring.field;
        let (n, m) = (self.dim, other.dim);
        if n == 0 || m == 0 {
            return vec![];
        }
        // unknowns H (m x n), equations H A_g = B_g H
        let unknowns = m * n;
        let mut rows = vec![];
        for g in 0..self.gt.order() {
            if g == self.gt.identity {
                continue;
            }
            let a = &self.mats[g];
            let b = &other.mats[g];
            for i in 0..m {
                for j in 0..n {
                    let mut row = vec![0; unknowns];
                    // (H A)_{ij} = sum_k H_{ik} A_{kj}
                    for k in 0..n {
                        row[i * n + k] = fq.add(row[i * n + k], a.get(k, j));
                    }
                    // -(B H)_{ij} = -sum_k B_{ik} H_{kj}
                    for k in 0..m {
                        row[k * n + j] = fq.sub(row[k * n + j], b.get(i, k));
                    }
                    rows.push(row);
                }
            }
        }
        if rows.is_empty() {
            let mut out = vec![];
            for idx in 0..unknowns {
                let mut h = Mat::zero(m, n);
                h.data[idx] = 1;
                out.push(h);
            }
            return out;
        }
        let sys = Mat::from_rows(rows);
        sys.nullspace(fq)
            .into_iter()
            .map(|v| Mat {
                rows: m,
                cols: n,
                data: v,
            })
            .collect()
    }

    pub fn end_dim(&self) -> usize {
        self.hom(self).len()
    }

    /// Search for an equivariant isomorphism; deterministic for a fixed
    /// seed. Basis elements are tried first, then seeded random k-linear
    /// combinations within a budget.
    pub fn iso(&self, other: &FDModule, seed: u64) -> Option<Mat> {
        if self.dim != other.dim {
            return None;
        }
        if self.dim == 0 {
            return Some(Mat::zero(0, 0));
        }
        let fq = &self.gt.ring.field;
        let homs = self.hom(other);
        if homs.is_empty() {
            return None;
        }
        for h in &homs {
            if h.inverse(fq).is_some() {
                return Some(h.clone());
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let budget = 64 * self.dim * self.dim;
        for _ in 0..budget {
            let mut cand = Mat::zero(other.dim, self.dim);
            for h in &homs {
                let c = rng.gen_range(0..fq.q);
                cand = cand.add(fq, &h.scale(fq, c));
            }
            if cand.inverse(fq).is_some() {
                return Some(cand);
            }
        }
        None
    }

    /// Whether every element acts by a diagonal matrix.
    pub fn is_diagonal(&self) -> bool {
        self.mats
            .iter()
            .all(|m| (0..m.rows).all(|i| (0..m.cols).all(|j| i == j || m.get(i, j) == 0)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::group::{close_group, diagonal_images, permutation_images, ActionSpec};
    use crate::poly::RingSpec;

    fn z2_char2() -> Arc<GroupTable> {
        let r = RingSpec::standard(FieldSpec::prime(2).unwrap(), &["x", "y"]).unwrap();
        let gen = permutation_images(&r, &[1, 0]);
        Arc::new(close_group(&ActionSpec::new(r, vec![("s".into(), gen)])).unwrap())
    }

    fn z3_f7() -> Arc<GroupTable> {
        let r = RingSpec::standard(FieldSpec::prime(7).unwrap(), &["x", "y"]).unwrap();
        let gen = diagonal_images(&r, &[2, 4]);
        Arc::new(close_group(&ActionSpec::new(r, vec![("g".into(), gen)])).unwrap())
    }

    #[test]
    fn regular_module_respects_table() {
        let gt = z3_f7();
        let m = FDModule::regular(gt);
        assert_eq!(m.dim, 3);
    }

    #[test]
    fn hom_of_regular_has_group_order_dimension() {
        // End_kG(kG) = kG acting by right translations
        for gt in [z2_char2(), z3_f7()] {
            let m = FDModule::regular(gt.clone());
            assert_eq!(m.end_dim(), gt.order());
        }
    }

    #[test]
    fn characters_of_z3_over_f7() {
        let gt = z3_f7();
        let two = gt
            .elements
            .iter()
            .position(|imgs| imgs[0] == gt.ring.parse("2*x").unwrap())
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
        assert_eq!(v.dim, 1);
        let w = FDModule::trivial(gt, 1);
        assert!(v.iso(&w, 0).is_none());
        assert!(v.iso(&v, 0).is_some());
    }

    #[test]
    fn pushforward_twist_is_identity_on_prime_fields() {
        let gt = z3_f7();
        let m = FDModule::regular(gt);
        let t = m.pushforward(1);
        for (a, b) in m.mats.iter().zip(&t.mats) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn submodule_and_quotient_of_swap_module() {
        // span{(1,1)} is the fixed line of the swap over F_2
        let gt = z2_char2();
        let m = FDModule::regular(gt);
        let sub = m.submodule(&[vec![1, 1]]).unwrap();
        assert_eq!(sub.dim, 1);
        let (quot, _) = m.quotient(&[vec![1, 1]]).unwrap();
        assert_eq!(quot.dim, 1);
    }
}
