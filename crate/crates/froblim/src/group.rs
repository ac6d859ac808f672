//! Finite groups acting on B by graded algebra automorphisms.
//!
//! Elements are stored extensionally as variable-image tuples, so two
//! words that induce the same automorphism are merged during closure and
//! faithfulness is structural. The multiplication table is exact.

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::poly::{Mono, Poly, RingSpec};
use std::collections::HashMap;

pub const DEFAULT_GROUP_CAP: usize = 256;

/// Generators of the action: one homogeneous image per variable, per
/// named generator.
#[derive(Debug, Clone)]
pub struct ActionSpec {
    pub ring: RingSpec,
    pub generators: Vec<(String, Vec<Poly>)>,
    /// Optional declared abstract order; closure must match it exactly.
    pub declared_order: Option<usize>,
    pub cap: usize,
}

/// The closed group: automorphisms, multiplication table, inverses.
#[derive(Debug, Clone)]
pub struct GroupTable {
    pub ring: RingSpec,
    /// Variable-image tuples, one per element; index 0 is the identity.
    pub elements: Vec<Vec<Poly>>,
    pub mul: Vec<Vec<usize>>,
    pub inv: Vec<usize>,
    pub identity: usize,
    /// Set when every image of every element is a linear form.
    pub linear: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmallnessVerdict {
    Small,
    HasPseudoReflection,
    Unknown,
}

/// Per-element fixed-locus codimensions plus the overall verdict.
#[derive(Debug, Clone)]
pub struct SmallnessReport {
    /// codim(X_g) for each non-identity element, `None` for nonlinear
    /// actions where it is not computed.
    pub codims: Vec<Option<usize>>,
    pub verdict: SmallnessVerdict,
}

impl ActionSpec {
    pub fn new(ring: RingSpec, generators: Vec<(String, Vec<Poly>)>) -> Self {
        ActionSpec {
            ring,
            generators,
            declared_order: None,
            cap: DEFAULT_GROUP_CAP,
        }
    }
}

fn images_key(ring: &RingSpec, images: &[Poly]) -> String {
    images
        .iter()
        .map(|p| ring.poly_to_string(p))
        .collect::<Vec<_>>()
        .join(";")
}

/// Close the generating set into a full group table.
pub fn close_group(spec: &ActionSpec) -> Result<GroupTable> {
    let ring = &spec.ring;
    let d = ring.dim();
    for (name, images) in &spec.generators {
        if images.len() != d {
            return Err(Error::ConfigInvalid(format!(
                "generator {name} must give one image per variable"
            )));
        }
        for (i, img) in images.iter().enumerate() {
            match ring.homogeneous_degree(img) {
                Some(deg) if deg == ring.degs[i] => {}
                _ => {
                    return Err(Error::ConfigInvalid(format!(
                        "generator {name}: image of {} is not homogeneous of degree {}",
                        ring.vars[i], ring.degs[i]
                    )))
                }
            }
        }
        // invertibility on each graded piece it touches: the induced map on
        // degree-n forms must be bijective; checking the span of variable
        // degrees suffices since the images generate the algebra map
        let mut degrees: Vec<u64> = ring.degs.clone();
        degrees.dedup();
        for deg in degrees {
            let basis = ring.monomials_of_degree(deg);
            let mut m = Mat::zero(basis.len(), basis.len());
            for (j, b) in basis.iter().enumerate() {
                let img = ring.substitute(images, &ring.monomial(b.clone(), 1))?;
                for (i, bi) in basis.iter().enumerate() {
                    m.set(i, j, img.terms.get(bi).copied().unwrap_or(0));
                }
            }
            if m.inverse(&ring.field).is_none() {
                return Err(Error::ConfigInvalid(format!(
                    "generator {name} is not invertible in degree {deg}"
                )));
            }
        }
    }

    let identity: Vec<Poly> = (0..d).map(|i| ring.var(i)).collect();
    let mut elements = vec![identity.clone()];
    let mut index: HashMap<String, usize> = HashMap::new();
    index.insert(images_key(ring, &identity), 0);

    // breadth-first closure under post-composition with the generators
    let mut frontier = vec![0usize];
    while let Some(idx) = frontier.pop() {
        let current = elements[idx].clone();
        for (_, gen) in &spec.generators {
            // (gen . current)(x_i) = gen(current(x_i))
            let mut composed = Vec::with_capacity(d);
            for img in &current {
                composed.push(ring.substitute(gen, img)?);
            }
            let key = images_key(ring, &composed);
            if !index.contains_key(&key) {
                if elements.len() >= spec.cap {
                    return Err(Error::GroupTooLarge { cap: spec.cap });
                }
                index.insert(key, elements.len());
                frontier.push(elements.len());
                elements.push(composed);
            }
        }
    }

    if let Some(declared) = spec.declared_order {
        if declared != elements.len() {
            return Err(Error::NotFaithful {
                declared,
                closed: elements.len(),
            });
        }
    }

    let n = elements.len();
    let mut mul = vec![vec![0usize; n]; n];
    for g in 0..n {
        for h in 0..n {
            // (g*h)(x_i) = g(h(x_i))
            let mut composed = Vec::with_capacity(d);
            for img in &elements[h] {
                composed.push(ring.substitute(&elements[g], img)?);
            }
            let key = images_key(ring, &composed);
            mul[g][h] = *index
                .get(&key)
                .expect("closure must contain all products");
        }
    }
    let mut inv = vec![0usize; n];
    for g in 0..n {
        inv[g] = (0..n)
            .find(|&h| mul[g][h] == 0)
            .expect("every element has an inverse");
    }

    let linear = elements.iter().all(|images| {
        images.iter().all(|p| {
            p.terms
                .keys()
                .all(|m| m.total_degree() == 1)
        })
    });

    Ok(GroupTable {
        ring: spec.ring.clone(),
        elements,
        mul,
        inv,
        identity: 0,
        linear,
    })
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Apply element `g` to a polynomial.
    pub fn apply(&self, g: usize, p: &Poly) -> Poly {
        self.ring
            .substitute(&self.elements[g], p)
            .expect("group elements are valid graded maps")
    }

    /// The matrix of `g` on the span of the variables, for linear actions:
    /// column j holds the coordinates of g(x_j).
    pub fn linear_matrix(&self, g: usize) -> Option<Mat> {
        if !self.linear {
            return None;
        }
        let d = self.ring.dim();
        let mut m = Mat::zero(d, d);
        for (j, img) in self.elements[g].iter().enumerate() {
            for (mono, &c) in &img.terms {
                let i = mono.0.iter().position(|&e| e == 1)?;
                m.set(i, j, c);
            }
        }
        Some(m)
    }

    /// Whether p | |G| (the modular case).
    pub fn is_modular(&self) -> bool {
        self.order() as u64 % self.ring.field.p == 0
    }

    /// A generating set of element indices, found greedily.
    pub fn generator_indices(&self) -> Vec<usize> {
        let n = self.order();
        let mut gens = vec![];
        let mut subgroup = vec![false; n];
        subgroup[self.identity] = true;
        let mut size = 1;
        for e in 0..n {
            if subgroup[e] {
                continue;
            }
            gens.push(e);
            // close the subgroup under the new generator
            loop {
                let mut added = false;
                for a in 0..n {
                    if !subgroup[a] {
                        continue;
                    }
                    for &b in [e].iter().chain(gens.iter()) {
                        let ab = self.mul[a][b];
                        if !subgroup[ab] {
                            subgroup[ab] = true;
                            size += 1;
                            added = true;
                        }
                        let ba = self.mul[b][a];
                        if !subgroup[ba] {
                            subgroup[ba] = true;
                            size += 1;
                            added = true;
                        }
                    }
                }
                if !added {
                    break;
                }
            }
            if size == n {
                break;
            }
        }
        gens
    }
}

/// Fixed-locus codimensions and smallness verdict. For linear actions the
/// codimension of X_g is the rank of matrix(g) - identity; nonlinear
/// actions are reported `Unknown` and require an explicit override before
/// any A-side claim.
pub fn smallness_report(gt: &GroupTable) -> SmallnessReport {
    if !gt.linear {
        return SmallnessReport {
            codims: vec![None; gt.order().saturating_sub(1)],
            verdict: SmallnessVerdict::Unknown,
        };
    }
    let fq = &gt.ring.field;
    let mut codims = vec![];
    let mut verdict = SmallnessVerdict::Small;
    for g in 0..gt.order() {
        if g == gt.identity {
            continue;
        }
        let m = gt.linear_matrix(g).unwrap();
        let diff = m.sub(fq, &Mat::identity(gt.ring.dim()));
        let codim = diff.rank(fq);
        if codim == 1 {
            verdict = SmallnessVerdict::HasPseudoReflection;
        }
        codims.push(Some(codim));
    }
    SmallnessReport { codims, verdict }
}

/// Convenience: a permutation automorphism sending x_i to x_{perm[i]}.
pub fn permutation_images(ring: &RingSpec, perm: &[usize]) -> Vec<Poly> {
    perm.iter().map(|&j| ring.var(j)).collect()
}

/// Convenience: the diagonal automorphism x_i -> scalars[i] * x_i.
pub fn diagonal_images(ring: &RingSpec, scalars: &[u64]) -> Vec<Poly> {
    scalars
        .iter()
        .enumerate()
        .map(|(i, &c)| ring.scale(&ring.var(i), c))
        .collect()
}

#[allow(dead_code)]
fn mono_is_var(m: &Mono) -> bool {
    m.total_degree() == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn ring(p: u64, vars: &[&str]) -> RingSpec {
        RingSpec::standard(FieldSpec::prime(p).unwrap(), vars).unwrap()
    }

    fn ver3_group() -> GroupTable {
        let r = ring(7, &["x", "y"]);
        let gen = diagonal_images(&r, &[2, 4]);
        close_group(&ActionSpec::new(r, vec![("g".into(), gen)])).unwrap()
    }

    fn swap2_group() -> GroupTable {
        let r = ring(2, &["x1", "x2", "x3", "x4"]);
        let gen = permutation_images(&r, &[1, 0, 3, 2]);
        close_group(&ActionSpec::new(r, vec![("s".into(), gen)])).unwrap()
    }

    #[test]
    fn diag_2_4_closes_to_z3() {
        // 2^3 = 8 = 1 in F_7
        let gt = ver3_group();
        assert_eq!(gt.order(), 3);
        assert!(gt.linear);
    }

    #[test]
    fn double_swap_is_involution() {
        let gt = swap2_group();
        assert_eq!(gt.order(), 2);
    }

    #[test]
    fn identity_only_spec() {
        let r = ring(2, &["x", "y"]);
        let ident = permutation_images(&r, &[0, 1]);
        let gt = close_group(&ActionSpec::new(r, vec![("e".into(), ident)])).unwrap();
        assert_eq!(gt.order(), 1);
    }

    #[test]
    fn mul_table_associativity_exhaustive() {
        for gt in [ver3_group(), swap2_group()] {
            let n = gt.order();
            assert!(n <= 64);
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        assert_eq!(gt.mul[gt.mul[a][b]][c], gt.mul[a][gt.mul[b][c]]);
                    }
                }
            }
        }
    }

    #[test]
    fn inverse_acts_as_inverse_on_variables() {
        for gt in [ver3_group(), swap2_group()] {
            for g in 0..gt.order() {
                for i in 0..gt.ring.dim() {
                    let v = gt.ring.var(i);
                    let back = gt.apply(gt.inv[g], &gt.apply(g, &v));
                    assert_eq!(back, v);
                }
            }
        }
    }

    #[test]
    fn smallness_ver3_is_small() {
        let rep = smallness_report(&ver3_group());
        assert_eq!(rep.verdict, SmallnessVerdict::Small);
        assert_eq!(rep.codims, vec![Some(2), Some(2)]);
    }

    #[test]
    fn smallness_transvection_is_pseudo_reflection() {
        // x -> x, y -> x + y over F_2: fixed locus has codimension 1
        let r = ring(2, &["x", "y"]);
        let gen = vec![r.var(0), r.parse("x + y").unwrap()];
        let gt = close_group(&ActionSpec::new(r, vec![("t".into(), gen)])).unwrap();
        assert_eq!(gt.order(), 2);
        let rep = smallness_report(&gt);
        assert_eq!(rep.verdict, SmallnessVerdict::HasPseudoReflection);
        assert_eq!(rep.codims, vec![Some(1)]);
    }

    #[test]
    fn smallness_double_swap() {
        let rep = smallness_report(&swap2_group());
        assert_eq!(rep.verdict, SmallnessVerdict::Small);
        assert_eq!(rep.codims, vec![Some(2)]);
    }

    #[test]
    fn smallness_invariant_under_variable_permutation() {
        // conjugating the double swap by the permutation exchanging the
        // two coordinate pairs gives the same verdict
        let r = ring(2, &["x1", "x2", "x3", "x4"]);
        let gen = permutation_images(&r, &[3, 2, 1, 0]); // x1<->x4, x2<->x3
        let gt = close_group(&ActionSpec::new(r.clone(), vec![("s".into(), gen)])).unwrap();
        let rep = smallness_report(&gt);
        assert_eq!(rep.verdict, SmallnessVerdict::Small);
        assert_eq!(rep.codims, vec![Some(2)]);
    }

    #[test]
    fn declared_order_mismatch_is_not_faithful() {
        let r = ring(7, &["x", "y"]);
        let gen = diagonal_images(&r, &[2, 4]);
        let mut spec = ActionSpec::new(r, vec![("g".into(), gen)]);
        spec.declared_order = Some(6);
        assert!(matches!(
            close_group(&spec),
            Err(Error::NotFaithful {
                declared: 6,
                closed: 3
            })
        ));
    }

    #[test]
    fn non_invertible_generator_rejected() {
        let r = ring(7, &["x", "y"]);
        let gen = vec![r.parse("x + y").unwrap(), r.parse("x + y").unwrap()];
        assert!(matches!(
            close_group(&ActionSpec::new(r, vec![("b".into(), gen)])),
            Err(Error::ConfigInvalid(_))
        ));
    }

    #[test]
    fn group_cap_enforced() {
        let r = ring(7, &["x", "y"]);
        let gen = diagonal_images(&r, &[3, 1]); // 3 has order 6 mod 7
        let mut spec = ActionSpec::new(r, vec![("g".into(), gen)]);
        spec.cap = 4;
        assert!(matches!(
            close_group(&spec),
            Err(Error::GroupTooLarge { cap: 4 })
        ));
    }
}
