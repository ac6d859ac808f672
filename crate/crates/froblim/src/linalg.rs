//! Dense exact linear algebra over F_q: reduction, rank, nullspace,
//! solving, inverse and characteristic polynomials.

use crate::field::{FieldSpec, FqElem};
use crate::unipoly::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<FqElem>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FqElem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|v| v.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FqElem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FqElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FqElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<FqElem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn add(&self, fq: &FieldSpec, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| fq.add(a, b))
            .collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, fq: &FieldSpec, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| fq.sub(a, b))
            .collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, fq: &FieldSpec, c: FqElem) -> Mat {
        let data = self.data.iter().map(|&a| fq.mul(a, c)).collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn mul(&self, fq: &FieldSpec, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b == 0 {
                        continue;
                    }
                    let v = fq.add(out.get(i, j), fq.mul(a, b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, fq: &FieldSpec, v: &[FqElem]) -> Vec<FqElem> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![0; self.rows];
        for i in 0..self.rows {
            let mut acc = 0;
            for j in 0..self.cols {
                acc = fq.add(acc, fq.mul(self.get(i, j), v[j]));
            }
            out[i] = acc;
        }
        out
    }

    pub fn pow(&self, fq: &FieldSpec, mut e: u64) -> Mat {
        assert_eq!(self.rows, self.cols);
        let mut acc = Mat::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(fq, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(fq, &base);
            }
        }
        acc
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self, fq: &FieldSpec) -> Vec<usize> {
        let mut pivots = vec![];
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let mut piv = None;
            for i in r..self.rows {
                if self.get(i, c) != 0 {
                    piv = Some(i);
                    break;
                }
            }
            let Some(piv) = piv else { continue };
            if piv != r {
                for j in 0..self.cols {
                    let (a, b) = (self.get(r, j), self.get(piv, j));
                    self.set(r, j, b);
                    self.set(piv, j, a);
                }
            }
            let inv = fq.inv(self.get(r, c));
            for j in 0..self.cols {
                let v = fq.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && self.get(i, c) != 0 {
                    let f = self.get(i, c);
                    for j in 0..self.cols {
                        let v = fq.sub(self.get(i, j), fq.mul(f, self.get(r, j)));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, fq: &FieldSpec) -> usize {
        let mut m = self.clone();
        m.rref(fq).len()
    }

    /// Basis of the right nullspace, in reduced form.
    pub fn nullspace(&self, fq: &FieldSpec) -> Vec<Vec<FqElem>> {
        let mut m = self.clone();
        let pivots = m.rref(fq);
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = vec![];
        for c in 0..self.cols {
            if pivot_of_col[c].is_some() {
                continue;
            }
            let mut vec = vec![0; self.cols];
            vec[c] = 1;
            for (pc, pr) in pivot_of_col.iter().enumerate() {
                if let Some(r) = pr {
                    vec[pc] = fq.neg(m.get(*r, c));
                }
            }
            basis.push(vec);
        }
        basis
    }

    /// One solution x of self * x = b, if any.
    pub fn solve(&self, fq: &FieldSpec, b: &[FqElem]) -> Option<Vec<FqElem>> {
        assert_eq!(self.rows, b.len());
        let mut aug = Mat::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let pivots = aug.rref(fq);
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        Some(x)
    }

    pub fn inverse(&self, fq: &FieldSpec) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let pivots = aug.rref(fq);
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
            return None;
        }
        let mut inv = Mat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j));
            }
        }
        Some(inv)
    }

    pub fn det(&self, fq: &FieldSpec) -> FqElem {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1;
        for c in 0..n {
            let mut piv = None;
            for i in c..n {
                if m.get(i, c) != 0 {
                    piv = Some(i);
                    break;
                }
            }
            let Some(piv) = piv else { return 0 };
            if piv != c {
                for j in 0..n {
                    let (a, b) = (m.get(c, j), m.get(piv, j));
                    m.set(c, j, b);
                    m.set(piv, j, a);
                }
                det = fq.neg(det);
            }
            det = fq.mul(det, m.get(c, c));
            let inv = fq.inv(m.get(c, c));
            for i in c + 1..n {
                if m.get(i, c) != 0 {
                    let f = fq.mul(m.get(i, c), inv);
                    for j in c..n {
                        let v = fq.sub(m.get(i, j), fq.mul(f, m.get(c, j)));
                        m.set(i, j, v);
                    }
                }
            }
        }
        det
    }

    /// Factorization object for repeated solves against the same matrix.
    pub fn solver(&self, fq: &FieldSpec) -> Solver {
        let n = self.rows;
        let mut work = self.clone();
        let mut ops = Mat::identity(n);
        let mut pivots = vec![];
        let mut r = 0;
        for c in 0..self.cols {
            if r == n {
                break;
            }
            let mut piv = None;
            for i in r..n {
                if work.get(i, c) != 0 {
                    piv = Some(i);
                    break;
                }
            }
            let Some(piv) = piv else { continue };
            if piv != r {
                for j in 0..self.cols {
                    let (a, b) = (work.get(r, j), work.get(piv, j));
                    work.set(r, j, b);
                    work.set(piv, j, a);
                }
                for j in 0..n {
                    let (a, b) = (ops.get(r, j), ops.get(piv, j));
                    ops.set(r, j, b);
                    ops.set(piv, j, a);
                }
            }
            let inv = fq.inv(work.get(r, c));
            for j in 0..self.cols {
                work.set(r, j, fq.mul(work.get(r, j), inv));
            }
            for j in 0..n {
                ops.set(r, j, fq.mul(ops.get(r, j), inv));
            }
            for i in 0..n {
                if i != r && work.get(i, c) != 0 {
                    let f = work.get(i, c);
                    for j in 0..self.cols {
                        let v = fq.sub(work.get(i, j), fq.mul(f, work.get(r, j)));
                        work.set(i, j, v);
                    }
                    for j in 0..n {
                        let v = fq.sub(ops.get(i, j), fq.mul(f, ops.get(r, j)));
                        ops.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Solver {
            cols: self.cols,
            pivots,
            ops,
        }
    }

    /// Characteristic polynomial via Hessenberg reduction; valid in any
    /// characteristic. Coefficients from the constant term up, monic.
    pub fn char_poly(&self, fq: &FieldSpec) -> UniPoly {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return vec![1];
        }
        let mut h = self.clone();
        // reduce to upper Hessenberg by similarity transforms
        for c in 0..n.saturating_sub(2) {
            let mut piv = None;
            for i in c + 1..n {
                if h.get(i, c) != 0 {
                    piv = Some(i);
                    break;
                }
            }
            let Some(piv) = piv else { continue };
            if piv != c + 1 {
                for j in 0..n {
                    let (a, b) = (h.get(c + 1, j), h.get(piv, j));
                    h.set(c + 1, j, b);
                    h.set(piv, j, a);
                }
                for i in 0..n {
                    let (a, b) = (h.get(i, c + 1), h.get(i, piv));
                    h.set(i, c + 1, b);
                    h.set(i, piv, a);
                }
            }
            let inv = fq.inv(h.get(c + 1, c));
            for i in c + 2..n {
                if h.get(i, c) != 0 {
                    let f = fq.mul(h.get(i, c), inv);
                    for j in 0..n {
                        let v = fq.sub(h.get(i, j), fq.mul(f, h.get(c + 1, j)));
                        h.set(i, j, v);
                    }
                    for jj in 0..n {
                        let v = fq.add(h.get(jj, c + 1), fq.mul(f, h.get(jj, i)));
                        h.set(jj, c + 1, v);
                    }
                }
            }
        }
        // expand char polys of leading principal Hessenberg minors
        // p_0 = 1; p_k(t) = (t - h[k-1][k-1]) p_{k-1}
        //        - sum_{i=1..k-1} h[k-1-i][k-1] (prod subdiag) p_{k-1-i}
        let mut polys: Vec<UniPoly> = vec![vec![1]];
        for k in 1..=n {
            let mut pk = {
                // (t - h_{k-1,k-1}) * p_{k-1}
                let prev = &polys[k - 1];
                let mut shifted = vec![0; prev.len() + 1];
                for (i, &c) in prev.iter().enumerate() {
                    shifted[i + 1] = c;
                }
                let neg = fq.neg(h.get(k - 1, k - 1));
                for (i, &c) in prev.iter().enumerate() {
                    shifted[i] = fq.add(shifted[i], fq.mul(neg, c));
                }
                shifted
            };
            let mut beta = 1;
            for i in 1..k {
                beta = fq.mul(beta, h.get(k - i, k - i - 1));
                if beta == 0 {
                    break;
                }
                let coef = fq.mul(beta, h.get(k - 1 - i, k - 1));
                if coef == 0 {
                    continue;
                }
                let pi = &polys[k - 1 - i];
                for (d, &c) in pi.iter().enumerate() {
                    pk[d] = fq.sub(pk[d], fq.mul(coef, c));
                }
            }
            polys.push(pk);
        }
        polys.pop().unwrap()
    }

    /// Minimal polynomial of the matrix (monic), by Krylov-style search for
    /// the first linear dependence among powers.
    pub fn min_poly(&self, fq: &FieldSpec) -> UniPoly {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut powers: Vec<Mat> = vec![Mat::identity(n)];
        loop {
            let next = powers.last().unwrap().mul(fq, self);
            // solve: next = sum c_i powers[i]?
            let k = powers.len();
            let mut sys = Mat::zero(n * n, k);
            for (idx, pw) in powers.iter().enumerate() {
                for e in 0..n * n {
                    sys.set(e, idx, pw.data[e]);
                }
            }
            if let Some(sol) = sys.solve(fq, &next.data) {
                // x^k - sum c_i x^i
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
}

/// Precomputed row reduction of a matrix A, for solving A x = b repeatedly.
#[derive(Debug, Clone)]
pub struct Solver {
    cols: usize,
    pivots: Vec<usize>,
    ops: Mat,
}

impl Solver {
    pub fn solve(&self, fq: &FieldSpec, b: &[FqElem]) -> Option<Vec<FqElem>> {
        let y = self.ops.mul_vec(fq, b);
        for r in self.pivots.len()..y.len() {
            if y[r] != 0 {
                return None;
            }
        }
        let mut x = vec![0; self.cols];
        for (r, &c) in self.pivots.iter().enumerate() {
            x[c] = y[r];
        }
        Some(x)
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unipoly;

    fn f7() -> FieldSpec {
        FieldSpec::prime(7).unwrap()
    }

    #[test]
    fn rank_nullspace_solve() {
        let fq = f7();
        let m = Mat::from_rows(vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(m.rank(&fq), 2);
        let ns = m.nullspace(&fq);
        assert_eq!(ns.len(), 1);
        for v in &ns {
            assert!(m.mul_vec(&fq, v).iter().all(|&x| x == 0));
        }
        let b = vec![6, 5, 2];
        let x = m.solve(&fq, &b).unwrap();
        assert_eq!(m.mul_vec(&fq, &x), b);
    }

    #[test]
    fn inverse_round_trip() {
        let fq = f7();
        let m = Mat::from_rows(vec![vec![2, 1], vec![3, 4]]);
        let inv = m.inverse(&fq).unwrap();
        assert_eq!(m.mul(&fq, &inv), Mat::identity(2));
        let singular = Mat::from_rows(vec![vec![1, 2], vec![2, 4]]);
        assert!(singular.inverse(&fq).is_none());
    }

    #[test]
    fn char_poly_matches_det_and_trace() {
        let fq = f7();
        let m = Mat::from_rows(vec![vec![1, 2], vec![3, 4]]);
        let cp = m.char_poly(&fq);
        // t^2 - 5t + (4 - 6) = t^2 + 2t + 5 over F_7
        assert_eq!(cp, vec![5, 2, 1]);
        assert_eq!(cp[0], fq.mul(fq.pow(fq.neg(1), 2), m.det(&fq)));
    }

    #[test]
    fn char_poly_char_p_example() {
        // nilpotent Jordan block over F_2: char poly t^3
        let fq = FieldSpec::prime(2).unwrap();
        let m = Mat::from_rows(vec![vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]);
        assert_eq!(m.char_poly(&fq), vec![0, 0, 0, 1]);
        assert_eq!(m.min_poly(&fq), vec![0, 0, 0, 1]);
    }

    #[test]
    fn char_poly_random_cayley_hamilton() {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        use rand_chacha::ChaCha8Rng;
        let fq = f7();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let n = rng.gen_range(1..6);
            let mut m = Mat::zero(n, n);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, rng.gen_range(0..7));
                }
            }
            let cp = m.char_poly(&fq);
            assert_eq!(cp.len(), n + 1);
            assert_eq!(cp[n], 1);
            // Cayley-Hamilton: cp(m) = 0
            let mut acc = Mat::zero(n, n);
            for (d, &c) in cp.iter().enumerate() {
                acc = acc.add(&fq, &m.pow(&fq, d as u64).scale(&fq, c));
            }
            assert!(acc.is_zero());
            // min poly divides char poly
            let mp = m.min_poly(&fq);
            let r = unipoly::rem(&fq, &cp, &mp);
            assert!(r.is_empty());
        }
    }
}
