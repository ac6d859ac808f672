//! Sparse multivariate polynomials over F_q in a weighted-graded ring.
//!
//! `RingSpec` fixes the coefficient field, the named generators and their
//! positive degrees. Monomials are exponent vectors ordered by graded
//! reverse lexicographic order (so the maximal key of the term map is the
//! leading monomial), and polynomials never store zero coefficients.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, FqElem};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Exponent vector. Entries are capped at u16::MAX; pushforward and
/// Groebner exponents stay far below that at desk scale.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u16>);

impl Mono {
    pub fn unit(d: usize) -> Self {
        Mono(vec![0; d])
    }

    pub fn var(d: usize, i: usize) -> Self {
        let mut e = vec![0; d];
        e[i] = 1;
        Mono(e)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.checked_add(b).expect("monomial exponent exceeds cap"))
                .collect(),
        )
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a <= b)
    }

    pub fn div(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(&a, &b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        )
    }
}

/// Graded reverse lexicographic order: first by total degree, ties broken
/// so that the monomial with the smaller exponent at the last differing
/// position is the larger one.
impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        let (da, db) = (self.total_degree(), other.total_degree());
        if da != db {
            return da.cmp(&db);
        }
        for i in (0..self.0.len()).rev() {
            if self.0[i] != other.0[i] {
                return other.0[i].cmp(&self.0[i]);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A graded polynomial ring B over F_q with positive generator degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingSpec {
    pub field: FieldSpec,
    pub vars: Vec<String>,
    pub degs: Vec<u64>,
}

/// Sparse polynomial: monomial -> nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    pub terms: BTreeMap<Mono, FqElem>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(&Mono, &FqElem)> {
        self.terms.iter().next_back()
    }
}

impl RingSpec {
    pub fn new(field: FieldSpec, vars: Vec<String>, degs: Vec<u64>) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::ConfigInvalid("ring needs at least one variable".into()));
        }
        if vars.len() != degs.len() {
            return Err(Error::ConfigInvalid(
                "one degree per ring variable required".into(),
            ));
        }
        if degs.iter().any(|&d| d == 0) {
            return Err(Error::ConfigInvalid(
                "generator degrees must be positive".into(),
            ));
        }
        let mut sorted = vars.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != vars.len() {
            return Err(Error::ConfigInvalid("duplicate variable names".into()));
        }
        Ok(RingSpec { field, vars, degs })
    }

    /// Standard grading: every generator in degree one.
    pub fn standard(field: FieldSpec, vars: &[&str]) -> Result<Self> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let degs = vec![1; names.len()];
        Self::new(field, names, degs)
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn weighted_degree(&self, m: &Mono) -> u64 {
        m.0.iter()
            .zip(&self.degs)
            .map(|(&e, &w)| e as u64 * w)
            .sum()
    }

    pub fn constant(&self, c: FqElem) -> Poly {
        let mut p = Poly::zero();
        if c != 0 {
            p.terms.insert(Mono::unit(self.dim()), c);
        }
        p
    }

    pub fn one(&self) -> Poly {
        self.constant(1)
    }

    pub fn var(&self, i: usize) -> Poly {
        self.monomial(Mono::var(self.dim(), i), 1)
    }

    pub fn monomial(&self, m: Mono, c: FqElem) -> Poly {
        let mut p = Poly::zero();
        if c != 0 {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = a.clone();
        for (m, &c) in &b.terms {
            let e = self.field.add(out.terms.get(m).copied().unwrap_or(0), c);
            if e == 0 {
                out.terms.remove(m);
            } else {
                out.terms.insert(m.clone(), e);
            }
        }
        out
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, &c) in &a.terms {
            out.terms.insert(m.clone(), self.field.neg(c));
        }
        out
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &Poly, c: FqElem) -> Poly {
        let mut out = Poly::zero();
        if c == 0 {
            return out;
        }
        for (m, &x) in &a.terms {
            out.terms.insert(m.clone(), self.field.mul(x, c));
        }
        out
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, &ca) in &a.terms {
            for (mb, &cb) in &b.terms {
                let m = ma.mul(mb);
                let c = self.field.mul(ca, cb);
                let e = self.field.add(out.terms.get(&m).copied().unwrap_or(0), c);
                if e == 0 {
                    out.terms.remove(&m);
                } else {
                    out.terms.insert(m, e);
                }
            }
        }
        out
    }

    pub fn mul_term(&self, a: &Poly, m: &Mono, c: FqElem) -> Poly {
        let mut out = Poly::zero();
        if c == 0 {
            return out;
        }
        for (ma, &ca) in &a.terms {
            out.terms.insert(ma.mul(m), self.field.mul(ca, c));
        }
        out
    }

    pub fn pow(&self, a: &Poly, e: u64) -> Poly {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Weighted degree when homogeneous; `None` for zero or inhomogeneous.
    pub fn homogeneous_degree(&self, a: &Poly) -> Option<u64> {
        let mut it = a.terms.keys();
        let first = self.weighted_degree(it.next()?);
        for m in it {
            if self.weighted_degree(m) != first {
                return None;
            }
        }
        Some(first)
    }

    pub fn is_homogeneous(&self, a: &Poly) -> bool {
        a.is_zero() || self.homogeneous_degree(a).is_some()
    }

    /// Apply the graded algebra map x_i -> images[i]. Images must be
    /// homogeneous of the same degree as the variable they replace.
    pub fn substitute(&self, images: &[Poly], a: &Poly) -> Result<Poly> {
        if images.len() != self.dim() {
            return Err(Error::DegreeMismatch(
                "one image per ring variable required".into(),
            ));
        }
        for (i, img) in images.iter().enumerate() {
            if img.is_zero() {
                return Err(Error::DegreeMismatch(format!(
                    "image of {} is zero",
                    self.vars[i]
                )));
            }
            match self.homogeneous_degree(img) {
                Some(d) if d == self.degs[i] => {}
                _ => {
                    return Err(Error::DegreeMismatch(format!(
                        "image of {} must be homogeneous of degree {}",
                        self.vars[i], self.degs[i]
                    )))
                }
            }
        }
        // cache powers per variable
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|im| vec![self.one(), im.clone()]).collect();
        let mut out = Poly::zero();
        for (m, &c) in &a.terms {
            let mut term = self.constant(c);
            for (i, &e) in m.0.iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = self.mul(powers[i].last().unwrap(), &images[i]);
                    powers[i].push(next);
                }
                if e > 0 {
                    term = self.mul(&term, &powers[i][e]);
                }
            }
            out = self.add(&out, &term);
        }
        Ok(out)
    }

    /// The unique expansion b = sum_a (b_a)^{p^e} * x^a over exponent
    /// vectors a with every entry < p^e; returns the map a -> b_a.
    pub fn root_decompose(&self, b: &Poly, e: u64) -> BTreeMap<Mono, Poly> {
        let q = self.field.p.pow(e as u32);
        let mut out: BTreeMap<Mono, Poly> = BTreeMap::new();
        for (m, &c) in &b.terms {
            let mut low = Vec::with_capacity(m.0.len());
            let mut high = Vec::with_capacity(m.0.len());
            for &a in &m.0 {
                low.push((a as u64 % q) as u16);
                high.push((a as u64 / q) as u16);
            }
            let root = self.field.frobenius_root(c, e);
            let bucket = out.entry(Mono(low)).or_insert_with(Poly::zero);
            let hm = Mono(high);
            let v = self
                .field
                .add(bucket.terms.get(&hm).copied().unwrap_or(0), root);
            if v == 0 {
                bucket.terms.remove(&hm);
            } else {
                bucket.terms.insert(hm, v);
            }
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Inverse of `root_decompose`: sum_a (b_a)^{p^e} x^a.
    pub fn root_recompose(&self, parts: &BTreeMap<Mono, Poly>, e: u64) -> Poly {
        let q = self.field.p.pow(e as u32);
        let mut out = Poly::zero();
        for (a, ba) in parts {
            let mut powered = Poly::zero();
            for (m, &c) in &ba.terms {
                let mono = Mono(m.0.iter().map(|&x| (x as u64 * q) as u16).collect());
                powered.terms.insert(mono, self.field.pow(c, q));
            }
            out = self.add(&out, &self.mul_term(&powered, a, 1));
        }
        out
    }

    /// Monomials of weighted degree n, in increasing grevlex order.
    pub fn monomials_of_degree(&self, n: u64) -> Vec<Mono> {
        let mut out = vec![];
        let mut current = vec![0u16; self.dim()];
        self.enumerate_rec(0, n, &mut current, &mut out);
        out.sort();
        out
    }

    fn enumerate_rec(&self, i: usize, remaining: u64, current: &mut Vec<u16>, out: &mut Vec<Mono>) {
        if i == self.dim() {
            if remaining == 0 {
                out.push(Mono(current.clone()));
            }
            return;
        }
        let w = self.degs[i];
        let max = remaining / w;
        for e in 0..=max {
            current[i] = e as u16;
            self.enumerate_rec(i + 1, remaining - e * w, current, out);
        }
        current[i] = 0;
    }

    pub fn dim_of_degree(&self, n: u64) -> usize {
        self.monomials_of_degree(n).len()
    }

    pub fn poly_to_string(&self, a: &Poly) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, &c)) in a.terms.iter().rev().enumerate() {
            if k > 0 {
                s.push_str(" + ");
            }
            let mut factors: Vec<String> = vec![];
            if c != 1 || m.is_unit() {
                factors.push(format!("{c}"));
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            let _ = write!(s, "{}", factors.join("*"));
        }
        s
    }

    /// Parse standard infix with integer coefficients (reduced mod p),
    /// `+ - * ^` and parentheses.
    pub fn parse(&self, input: &str) -> Result<Poly> {
        let mut parser = PolyParser {
            ring: self,
            chars: input.chars().collect(),
            pos: 0,
        };
        let p = parser.expr()?;
        parser.skip_ws();
        if parser.pos != parser.chars.len() {
            return Err(Error::ConfigInvalid(format!(
                "unexpected trailing input in polynomial '{input}'"
            )));
        }
        Ok(p)
    }
}

struct PolyParser<'a> {
    ring: &'a RingSpec,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> PolyParser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                self.ring.neg(&self.term()?)
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.ring.add(&acc, &t);
                }
                Some('-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.ring.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while let Some('*') = self.peek() {
            self.pos += 1;
            let f = self.factor()?;
            acc = self.ring.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.base()?;
        if let Some('^') = self.peek() {
            self.pos += 1;
            let e = self.integer()?;
            return Ok(self.ring.pow(&base, e as u64));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(Error::ConfigInvalid("expected ')'".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(self.ring.constant(self.ring.field.from_int(n)))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                match self.ring.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(self.ring.var(i)),
                    None => Err(Error::ConfigInvalid(format!("unknown variable '{name}'"))),
                }
            }
            other => Err(Error::ConfigInvalid(format!(
                "unexpected token {other:?} in polynomial"
            ))),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::ConfigInvalid("expected integer".into()));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse()
            .map_err(|_| Error::ConfigInvalid(format!("bad integer '{s}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ring_f2_xy() -> RingSpec {
        RingSpec::standard(FieldSpec::prime(2).unwrap(), &["x", "y"]).unwrap()
    }

    fn ring_f7_xy() -> RingSpec {
        RingSpec::standard(FieldSpec::prime(7).unwrap(), &["x", "y"]).unwrap()
    }

    #[test]
    fn root_decompose_x_cubed() {
        // x^3 = (x)^2 * x over F_2
        let r = ring_f2_xy();
        let b = r.parse("x^3").unwrap();
        let parts = r.root_decompose(&b, 1);
        assert_eq!(parts.len(), 1);
        let key = Mono(vec![1, 0]);
        assert_eq!(parts[&key], r.parse("x").unwrap());
    }

    #[test]
    fn root_decompose_mixed_terms() {
        // x^2 y^3 + x^4 over F_2, e = 1: {(0,1) -> xy, (0,0) -> x^2}
        let r = ring_f2_xy();
        let b = r.parse("x^2*y^3 + x^4").unwrap();
        let parts = r.root_decompose(&b, 1);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[&Mono(vec![0, 1])], r.parse("x*y").unwrap());
        assert_eq!(parts[&Mono(vec![0, 0])], r.parse("x^2").unwrap());
        assert_eq!(r.root_recompose(&parts, 1), b);
    }

    #[test]
    fn root_decompose_constant() {
        let r = ring_f7_xy();
        for e in 0..3 {
            let b = r.constant(5);
            let parts = r.root_decompose(&b, e);
            assert_eq!(parts.len(), 1);
            let expected = r.constant(r.field.frobenius_root(5, e));
            assert_eq!(parts[&Mono(vec![0, 0])], expected);
        }
    }

    fn random_homogeneous(r: &RingSpec, deg: u64, rng: &mut ChaCha8Rng) -> Poly {
        let monos = r.monomials_of_degree(deg);
        let mut p = Poly::zero();
        for m in monos {
            let c = rng.gen_range(0..r.field.q);
            if c != 0 {
                p.terms.insert(m, c);
            }
        }
        p
    }

    #[test]
    fn root_decompose_round_trip_1000_random() {
        // spec invariant: exact identity on 1000 random homogeneous inputs
        // per (p, e) configuration
        for (p, m, e) in [(2u64, 1u32, 1u64), (2, 1, 3), (7, 1, 1), (7, 1, 2), (2, 2, 1)] {
            let field = FieldSpec::extension(p, m, None).unwrap();
            let r = RingSpec::new(field, vec!["x".into(), "y".into()], vec![1, 2]).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(1000 * p + e);
            for i in 0..1000 {
                let deg = (i % 9) as u64;
                let b = random_homogeneous(&r, deg, &mut rng);
                let parts = r.root_decompose(&b, e);
                assert_eq!(r.root_recompose(&parts, e), b);
                // keys restricted to exponents < p^e
                let q = p.pow(e as u32);
                for key in parts.keys() {
                    assert!(key.0.iter().all(|&a| (a as u64) < q));
                }
                // homogeneity of each piece: (b_a)^{p^e} x^a homogeneous of deg b
                if let Some(d) = r.homogeneous_degree(&b) {
                    for (a, ba) in &parts {
                        let da = r.weighted_degree(a);
                        let db = r.homogeneous_degree(ba).unwrap();
                        assert_eq!(db * q + da, d);
                    }
                }
            }
        }
    }

    #[test]
    fn substitute_identity() {
        let r = ring_f7_xy();
        let images = vec![r.var(0), r.var(1)];
        let b = r.parse("3*x^2*y + x - 2").unwrap();
        assert_eq!(r.substitute(&images, &b).unwrap(), b);
    }

    #[test]
    fn substitute_diagonal_scaling() {
        // x -> 2x, y -> 4y over F_7 applied to xy gives 8xy = xy
        let r = ring_f7_xy();
        let images = vec![r.parse("2*x").unwrap(), r.parse("4*y").unwrap()];
        let b = r.parse("x*y").unwrap();
        assert_eq!(r.substitute(&images, &b).unwrap(), b);
    }

    #[test]
    fn substitute_swap_fixes_symmetric() {
        let r = ring_f7_xy();
        let images = vec![r.var(1), r.var(0)];
        let b = r.parse("x + y").unwrap();
        assert_eq!(r.substitute(&images, &b).unwrap(), b);
    }

    #[test]
    fn substitute_is_ring_homomorphism() {
        let r = ring_f7_xy();
        let images = vec![r.parse("x + y").unwrap(), r.parse("3*y").unwrap()];
        let f = r.parse("x^2 + 2*y").unwrap();
        let g = r.parse("x*y + 5").unwrap();
        let fg = r.mul(&f, &g);
        let sub_fg = r.substitute(&images, &fg).unwrap();
        let sub_f = r.substitute(&images, &f).unwrap();
        let sub_g = r.substitute(&images, &g).unwrap();
        assert_eq!(sub_fg, r.mul(&sub_f, &sub_g));
    }

    #[test]
    fn substitute_rejects_degree_violations() {
        let r = ring_f7_xy();
        let images = vec![r.parse("x^2").unwrap(), r.var(1)];
        assert!(matches!(
            r.substitute(&images, &r.var(0)),
            Err(Error::DegreeMismatch(_))
        ));
    }

    #[test]
    fn grevlex_order_expected() {
        let r = ring_f7_xy();
        // x > y in grevlex with x before y
        let x = Mono(vec![1, 0]);
        let y = Mono(vec![0, 1]);
        assert!(x > y);
        let x2 = Mono(vec![2, 0]);
        let xy = Mono(vec![1, 1]);
        let y2 = Mono(vec![0, 2]);
        assert!(x2 > xy && xy > y2);
        assert_eq!(r.parse("x^2 + x*y").unwrap().leading().unwrap().0, &x2);
    }

    #[test]
    fn weighted_enumeration() {
        let field = FieldSpec::prime(7).unwrap();
        let r = RingSpec::new(field, vec!["x".into(), "y".into()], vec![1, 2]).unwrap();
        // degree 4 with weights (1,2): x^4, x^2 y, y^2
        assert_eq!(r.dim_of_degree(4), 3);
    }

    #[test]
    fn parser_round_trip() {
        let r = ring_f7_xy();
        let p = r.parse("2*x^3 + x*y - 3").unwrap();
        let s = r.poly_to_string(&p);
        assert_eq!(r.parse(&s).unwrap(), p);
    }
}
