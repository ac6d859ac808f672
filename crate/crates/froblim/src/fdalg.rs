//! Finite-dimensional associative algebras over F_q: radical, quotients,
//! idempotent lifting and splitting idempotents.
//!
//! The radical uses the iterated characteristic-p trace forms: in
//! characteristic p the plain trace form degenerates, and the chain of
//! kernels of the maps x -> c_{p^i}(xy) (coefficients of the
//! characteristic polynomial in the left regular representation) cuts out
//! the radical. Each step is p^i-semilinear, so a substitution
//! u = t^{p^i} turns it into ordinary linear algebra over F_q.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, FqElem};
use crate::linalg::Mat;
use crate::unipoly;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// An algebra given by structure constants over a fixed basis; the unit's
/// coordinates are stored explicitly. Elements are coordinate vectors.
#[derive(Debug, Clone)]
pub struct FDAlgebra {
    pub fq: FieldSpec,
    pub dim: usize,
    pub unit: Vec<FqElem>,
    /// table[i][j] = coordinates of b_i * b_j
    pub table: Vec<Vec<Vec<FqElem>>>,
}

impl FDAlgebra {
    /// Build from a closed basis of n x n matrices. Products must stay in
    /// the span and the span must contain a two-sided unit.
    pub fn from_matrices(fq: &FieldSpec, basis: &[Mat]) -> Result<Self> {
        let dim = basis.len();
        if dim == 0 {
            return Err(Error::ConfigInvalid("empty algebra basis".into()));
        }
        let n2 = basis[0].data.len();
        let mut coord = Mat::zero(n2, dim);
        for (j, b) in basis.iter().enumerate() {
            for (i, &v) in b.data.iter().enumerate() {
                coord.set(i, j, v);
            }
        }
        let solver = coord.solver(fq);
        let mut table = vec![vec![vec![]; dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let prod = basis[i].mul(fq, &basis[j]);
                let coords = solver.solve(fq, &prod.data).ok_or_else(|| {
                    Error::ConfigInvalid("algebra basis is not multiplicatively closed".into())
                })?;
                table[i][j] = coords;
            }
        }
        // solve for a two-sided unit
        let mut rows = vec![];
        let mut rhs = vec![];
        for j in 0..dim {
            for coordinate in 0..dim {
                let mut row = vec![0; dim];
                for i in 0..dim {
                    row[i] = table[i][j][coordinate];
                }
                rows.push(row);
                rhs.push(if coordinate == j { 1 } else { 0 });
                let mut row2 = vec![0; dim];
                for i in 0..dim {
                    row2[i] = table[j][i][coordinate];
                }
                rows.push(row2);
                rhs.push(if coordinate == j { 1 } else { 0 });
            }
        }
        let sys = Mat::from_rows(rows);
        let unit = sys
            .solve(fq, &rhs)
            .ok_or_else(|| Error::ConfigInvalid("algebra has no unit in its span".into()))?;
        Ok(FDAlgebra {
            fq: fq.clone(),
            dim,
            unit,
            table,
        })
    }

    /// The group algebra kG over a multiplication table.
    pub fn group_algebra(fq: &FieldSpec, mul: &[Vec<usize>], identity: usize) -> Self {
        let dim = mul.len();
        let mut table = vec![vec![vec![0; dim]; dim]; dim];
        for g in 0..dim {
            for h in 0..dim {
                table[g][h][mul[g][h]] = 1;
            }
        }
        let mut unit = vec![0; dim];
        unit[identity] = 1;
        FDAlgebra {
            fq: fq.clone(),
            dim,
            unit,
            table,
        }
    }

    pub fn mul(&self, x: &[FqElem], y: &[FqElem]) -> Vec<FqElem> {
        let mut out = vec![0; self.dim];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let c = self.fq.mul(xi, yj);
                for (k, &t) in self.table[i][j].iter().enumerate() {
                    if t != 0 {
                        out[k] = self.fq.add(out[k], self.fq.mul(c, t));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, x: &[FqElem], y: &[FqElem]) -> Vec<FqElem> {
        x.iter().zip(y).map(|(&a, &b)| self.fq.add(a, b)).collect()
    }

    pub fn sub(&self, x: &[FqElem], y: &[FqElem]) -> Vec<FqElem> {
        x.iter().zip(y).map(|(&a, &b)| self.fq.sub(a, b)).collect()
    }

    pub fn scale(&self, x: &[FqElem], c: FqElem) -> Vec<FqElem> {
        x.iter().map(|&a| self.fq.mul(a, c)).collect()
    }

    /// Matrix of left multiplication by x in the basis.
    pub fn left_regular(&self, x: &[FqElem]) -> Mat {
        let mut m = Mat::zero(self.dim, self.dim);
        for j in 0..self.dim {
            let mut e = vec![0; self.dim];
            e[j] = 1;
            let col = self.mul(x, &e);
            for i in 0..self.dim {
                m.set(i, j, col[i]);
            }
        }
        m
    }

    pub fn is_commutative(&self) -> bool {
        for i in 0..self.dim {
            for j in 0..i {
                if self.table[i][j] != self.table[j][i] {
                    return false;
                }
            }
        }
        true
    }

    /// Basis of the Jacobson radical via the iterated char-p trace forms in
    /// the left regular representation.
    pub fn radical(&self) -> Vec<Vec<FqElem>> {
        let fq = &self.fq;
        let n = self.dim;
        let mut space: Vec<Vec<FqElem>> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        let mut pk: u64 = 1; // p^i
        loop {
            if space.is_empty() {
                return space;
            }
            // conditions: c_{p^i}(rep(x) rep(y)) = 0 for all y in the current
            // space, where c_j is the coefficient of lambda^{n-j} in the
            // characteristic polynomial. On the current space the map is
            // p^i-semilinear in x, so with u = t^{p^i} the system is linear.
            let reps: Vec<Mat> = space.iter().map(|v| self.left_regular(v)).collect();
            let mut rows = vec![];
            for y in &reps {
                let mut row = Vec::with_capacity(space.len());
                for z in &reps {
                    let prod = z.mul(fq, y);
                    let cp = prod.char_poly(fq);
                    let deg = cp.len() - 1;
                    let coeff = if (pk as usize) <= deg {
                        cp[deg - pk as usize]
                    } else {
                        0
                    };
                    row.push(coeff);
                }
                rows.push(row);
            }
            let sys = Mat::from_rows(rows);
            let null = sys.nullspace(fq);
            let mut new_space = vec![];
            for u in null {
                let mut t = vec![0; n];
                for (s, &us) in u.iter().enumerate() {
                    let ts = root_iterated(fq, us, pk);
                    if ts != 0 {
                        for (c, &b) in space[s].iter().enumerate() {
                            t[c] = fq.add(t[c], fq.mul(ts, b));
                        }
                    }
                }
                new_space.push(t);
            }
            space = echelon_basis(fq, new_space, n);
            if pk >= n as u64 || space.is_empty() {
                return space;
            }
            pk = pk.saturating_mul(fq.p);
        }
    }

    /// Brute-force radical for tiny algebras: the span of all nilpotent
    /// elements. Test oracle only.
    pub fn radical_bruteforce(&self) -> Option<Vec<Vec<FqElem>>> {
        let total = (self.fq.q as u128).checked_pow(self.dim as u32)?;
        if total > 1 << 20 {
            return None;
        }
        let mut nilpotents = vec![];
        for code in 0..total as u64 {
            let mut x = vec![0; self.dim];
            let mut v = code;
            for c in x.iter_mut() {
                *c = v % self.fq.q;
                v /= self.fq.q;
            }
            let m = self.left_regular(&x);
            if m.pow(&self.fq, self.dim as u64).is_zero() {
                nilpotents.push(x);
            }
        }
        Some(echelon_basis(&self.fq, nilpotents, self.dim))
    }

    /// Quotient by an ideal subspace; returns the quotient algebra and the
    /// projection matrix from ambient coordinates.
    pub fn quotient(&self, ideal: &[Vec<FqElem>]) -> Result<(FDAlgebra, Mat)> {
        let fq = &self.fq;
        let mut m = if ideal.is_empty() {
            Mat::zero(0, self.dim)
        } else {
            Mat::from_rows(ideal.to_vec())
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
                proj.set(r, pc, fq.neg(m.get(row, fc)));
            }
        }
        let mut table = vec![vec![vec![0; k]; k]; k];
        for (i, &fi) in free.iter().enumerate() {
            for (j, &fj) in free.iter().enumerate() {
                table[i][j] = proj.mul_vec(fq, &self.table[fi][fj]);
            }
        }
        let unit = proj.mul_vec(fq, &self.unit);
        Ok((
            FDAlgebra {
                fq: fq.clone(),
                dim: k,
                unit,
                table,
            },
            proj,
        ))
    }

    /// Verify a subspace spans a nilpotent ideal-like system by powering.
    pub fn ideal_is_nilpotent(&self, ideal: &[Vec<FqElem>]) -> bool {
        let fq = &self.fq;
        let mut current = echelon_basis(fq, ideal.to_vec(), self.dim);
        for _ in 0..=ideal.len() {
            if current.is_empty() {
                return true;
            }
            let mut products = vec![];
            for x in &current {
                for y in ideal {
                    products.push(self.mul(x, y));
                }
            }
            let next = echelon_basis(fq, products, self.dim);
            if next == current {
                return false;
            }
            current = next;
        }
        current.is_empty()
    }

    /// Minimal polynomial of an element (monic).
    pub fn min_poly(&self, x: &[FqElem]) -> unipoly::UniPoly {
        let fq = &self.fq;
        let mut powers: Vec<Vec<FqElem>> = vec![self.unit.clone()];
        loop {
            let next = self.mul(powers.last().unwrap(), x);
            let k = powers.len();
            let mut sys = Mat::zero(self.dim, k);
            for (idx, pw) in powers.iter().enumerate() {
                for c in 0..self.dim {
                    sys.set(c, idx, pw[c]);
                }
            }
            if let Some(sol) = sys.solve(fq, &next) {
                let mut f = vec![0; k + 1];
                f[k] = 1;
                for (i, &c) in sol.iter().enumerate() {
                    f[i] = fq.neg(c);
                }
                return f;
            }
            powers.push(next);
        }
    }

    /// Evaluate a univariate polynomial at an algebra element.
    pub fn eval_poly(&self, f: &unipoly::UniPoly, x: &[FqElem]) -> Vec<FqElem> {
        let mut acc = vec![0; self.dim];
        for &c in f.iter().rev() {
            acc = self.mul(&acc, x);
            if c != 0 {
                acc = self.add(&acc, &self.scale(&self.unit, c));
            }
        }
        acc
    }

    /// Locality test for a semisimple algebra: it is a finite field iff it
    /// is commutative and the fixed space of the q-power map is a line.
    pub fn semisimple_is_field(&self) -> bool {
        if self.dim == 0 || !self.is_commutative() {
            return false;
        }
        let fq = &self.fq;
        let mut frob = Mat::zero(self.dim, self.dim);
        for j in 0..self.dim {
            let mut e = vec![0; self.dim];
            e[j] = 1;
            let mut result = self.unit.clone();
            let mut base = e;
            let mut exp = fq.q;
            while exp > 0 {
                if exp & 1 == 1 {
                    result = self.mul(&result, &base);
                }
                base = self.mul(&base, &base);
                exp >>= 1;
            }
            for i in 0..self.dim {
                frob.set(i, j, result[i]);
            }
        }
        let fixed = frob.sub(fq, &Mat::identity(self.dim)).nullspace(fq);
        fixed.len() == 1
    }

    /// A nontrivial idempotent in a semisimple algebra, found by factoring
    /// minimal polynomials of basis elements and seeded random elements.
    /// `None` when the algebra is a field.
    pub fn splitting_idempotent(&self, seed: u64) -> Option<Vec<FqElem>> {
        if self.semisimple_is_field() {
            return None;
        }
        let fq = self.fq.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut candidates: Vec<Vec<FqElem>> = (0..self.dim)
            .map(|i| {
                let mut v = vec![0; self.dim];
                v[i] = 1;
                v
            })
            .collect();
        let budget = 64 + 16 * self.dim;
        for _ in 0..budget {
            let mut v = vec![0; self.dim];
            for c in v.iter_mut() {
                *c = rng.gen_range(0..fq.q);
            }
            candidates.push(v);
        }
        for z in candidates {
            let mp = self.min_poly(&z);
            let factors = unipoly::factor(&fq, &mp, seed ^ 0x5eed);
            if factors.len() < 2 {
                continue;
            }
            // CRT idempotent supported on the first primary component
            let (f1, m1) = &factors[0];
            let mut comp1 = vec![1];
            for _ in 0..*m1 {
                comp1 = unipoly::mul(&fq, &comp1, f1);
            }
            let mut rest = vec![1];
            for (f, m) in factors.iter().skip(1) {
                for _ in 0..*m {
                    rest = unipoly::mul(&fq, &rest, f);
                }
            }
            let (g, s, _) = unipoly::ext_gcd(&fq, &rest, &comp1);
            if unipoly::deg(&g) != Some(0) {
                continue;
            }
            let e_poly = unipoly::rem(&fq, &unipoly::mul(&fq, &rest, &s), &mp);
            let e = self.eval_poly(&e_poly, &z);
            let e2 = self.mul(&e, &e);
            let zero = vec![0; self.dim];
            if e2 == e && e != zero && e != self.unit {
                return Some(e);
            }
        }
        None
    }

    /// Lift an idempotent of self/J back to an exact idempotent, given any
    /// preimage. Newton iteration e <- 3e^2 - 2e^3 (e <- e^2 in char 2);
    /// converges along powers of the nilpotent ideal.
    pub fn lift_idempotent(&self, preimage: &[FqElem]) -> Result<Vec<FqElem>> {
        let mut e = preimage.to_vec();
        for _ in 0..=(self.dim + 2) {
            let e2 = self.mul(&e, &e);
            if e2 == e {
                return Ok(e);
            }
            let e3 = self.mul(&e2, &e);
            let three = self.fq.from_int(3);
            let two = self.fq.from_int(2);
            e = self.sub(&self.scale(&e2, three), &self.scale(&e3, two));
        }
        Err(Error::NotSplit("idempotent lifting did not converge".into()))
    }
}

fn root_iterated(fq: &FieldSpec, mut c: FqElem, pk: u64) -> FqElem {
    let mut k = pk;
    while k > 1 {
        c = fq.frobenius_root(c, 1);
        k /= fq.p;
    }
    c
}

/// Reduce a spanning set to a deterministic echelon basis.
pub fn echelon_basis(fq: &FieldSpec, vectors: Vec<Vec<FqElem>>, width: usize) -> Vec<Vec<FqElem>> {
    if vectors.is_empty() {
        return vec![];
    }
    let mut m = Mat::from_rows(vectors);
    let pivots = m.rref(fq);
    let mut out = vec![];
    for r in 0..pivots.len() {
        let row: Vec<FqElem> = (0..width).map(|c| m.get(r, c)).collect();
        out.push(row);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn group_algebra_zn(p: u64, n: usize) -> FDAlgebra {
        let mul: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        FDAlgebra::group_algebra(&f(p), &mul, 0)
    }

    #[test]
    fn radical_of_kz2_char2() {
        // J = span{1 + s}, dimension 1, since (1+s)^2 = 0 in char 2
        let a = group_algebra_zn(2, 2);
        let j = a.radical();
        assert_eq!(j.len(), 1);
        let v = &j[0];
        assert_eq!(v[0], v[1]);
        assert!(v[0] != 0);
        // oracle: exhaustive nilpotency scan over the 4 elements
        let brute = a.radical_bruteforce().unwrap();
        assert_eq!(j, brute);
        assert!(a.ideal_is_nilpotent(&j));
    }

    #[test]
    fn radical_of_kz3_over_f7_is_zero() {
        let a = group_algebra_zn(7, 3);
        assert!(a.radical().is_empty());
        assert_eq!(a.radical_bruteforce().unwrap().len(), 0);
    }

    #[test]
    fn radical_of_upper_triangular() {
        let fq = f(7);
        let e11 = Mat::from_rows(vec![vec![1, 0], vec![0, 0]]);
        let e12 = Mat::from_rows(vec![vec![0, 1], vec![0, 0]]);
        let e22 = Mat::from_rows(vec![vec![0, 0], vec![0, 1]]);
        let a = FDAlgebra::from_matrices(&fq, &[e11, e12, e22]).unwrap();
        let j = a.radical();
        assert_eq!(j.len(), 1);
        assert_eq!(j[0], vec![0, 1, 0]);
        let brute = a.radical_bruteforce().unwrap();
        assert_eq!(j, brute);
    }

    #[test]
    fn radical_quotient_has_zero_radical_and_no_nilpotents() {
        for a in [
            group_algebra_zn(2, 2),
            group_algebra_zn(2, 4),
            group_algebra_zn(3, 3),
            group_algebra_zn(7, 3),
            group_algebra_zn(2, 6),
        ] {
            let j = a.radical();
            assert!(a.ideal_is_nilpotent(&j));
            if let Some(brute) = a.radical_bruteforce() {
                assert_eq!(j, brute);
            }
            let (q, _) = a.quotient(&j).unwrap();
            assert!(q.radical().is_empty());
            // squarefree minimal polynomials on the semisimple quotient
            for i in 0..q.dim {
                let mut e = vec![0; q.dim];
                e[i] = 1;
                let mp = q.min_poly(&e);
                let d = unipoly::derivative(&q.fq, &mp);
                if !d.is_empty() {
                    let g = unipoly::gcd(&q.fq, &mp, &d);
                    assert_eq!(unipoly::deg(&g), Some(0), "min poly not squarefree");
                }
            }
        }
    }

    #[test]
    fn splitting_idempotent_of_kz3_over_f2() {
        // kZ/3 over F_2 = F_2 x F_4
        let a = group_algebra_zn(2, 3);
        assert!(a.radical().is_empty());
        assert!(!a.semisimple_is_field());
        let e = a.splitting_idempotent(7).unwrap();
        assert_eq!(a.mul(&e, &e), e);
    }

    #[test]
    fn kz2_semisimple_quotient_is_field() {
        let a = group_algebra_zn(2, 2);
        let j = a.radical();
        let (q, _) = a.quotient(&j).unwrap();
        assert!(q.semisimple_is_field());
        assert!(q.splitting_idempotent(1).is_none());
    }

    #[test]
    fn lift_idempotent_in_kz6_char2() {
        // k[Z/6] over F_2 has radical of dimension 3; idempotents of the
        // semisimple quotient lift to exact idempotents
        let a = group_algebra_zn(2, 6);
        let j = a.radical();
        assert_eq!(j.len(), 3);
        let (q, proj) = a.quotient(&j).unwrap();
        let ebar = q.splitting_idempotent(3).unwrap();
        // section of proj: place quotient coordinates on columns where
        // proj restricted is a unit vector
        let mut pre = vec![0; a.dim];
        let mut placed = 0;
        'rows: for (r, &eb) in ebar.iter().enumerate() {
            for c in 0..a.dim {
                if proj.get(r, c) == 1 && (0..q.dim).all(|rr| rr == r || proj.get(rr, c) == 0) {
                    pre[c] = eb;
                    placed += 1;
                    continue 'rows;
                }
            }
        }
        assert_eq!(placed, q.dim);
        let e = a.lift_idempotent(&pre).unwrap();
        assert_eq!(a.mul(&e, &e), e);
        assert_ne!(e, vec![0; a.dim]);
        assert_ne!(e, a.unit);
    }
}
