//! Automorphisms of finite groups stored as full image arrays.

mod search;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Quotient, Subgroup};

pub use search::{AutSearchLimits, DEFAULT_AUT_NODE_BUDGET, DEFAULT_AUT_ORDER_CAP};

/// A multiplicative bijection of a group. `image[x]` is the image of `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    image: Vec<u32>,
    order: u32,
}

impl Automorphism {
    /// Validates `image` as an automorphism of `g`.
    pub fn new(g: &FiniteGroup, image: &[usize]) -> Result<Self> {
        if let Some(reason) = automorphism_defect(g, image) {
            return Err(Error::NotAutomorphism(reason));
        }
        Ok(Self::from_raw(image.iter().map(|&x| x as u32).collect()))
    }

    /// Caller guarantees `image` is an automorphism.
    pub(crate) fn from_raw(image: Vec<u32>) -> Self {
        let order = permutation_order(&image);
        Automorphism { image, order }
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        Automorphism { image: (0..g.order() as u32).collect(), order: 1 }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.image.iter().map(|&x| x as usize).collect()
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.image
    }

    /// Least `k >= 1` with the `k`-fold composite equal to the identity map.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    pub fn is_identity(&self) -> bool {
        self.order == 1
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Self::from_raw(other.image.iter().map(|&x| self.image[x as usize]).collect())
    }

    pub fn inverse(&self) -> Automorphism {
        let mut inv = vec![0u32; self.image.len()];
        for (x, &y) in self.image.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Automorphism { image: inv, order: self.order }
    }

    pub fn pow(&self, k: u32) -> Automorphism {
        let image = (0..self.image.len() as u32).map(|x| (0..k).fold(x, |y, _| self.image[y as usize])).collect();
        Self::from_raw(image)
    }

    /// The maps `α^0, α^1, .., α^{n-1}` as image arrays.
    pub fn power_maps(&self, n: u32) -> Vec<Vec<u32>> {
        let mut maps = Vec::with_capacity(n as usize);
        let mut current: Vec<u32> = (0..self.image.len() as u32).collect();
        for _ in 0..n {
            let next = current.iter().map(|&x| self.image[x as usize]).collect();
            maps.push(std::mem::replace(&mut current, next));
        }
        maps
    }

    /// `β ∘ self ∘ β^{-1}`.
    pub fn conjugate_by(&self, beta: &Automorphism) -> Automorphism {
        let inv = beta.inverse();
        beta.compose(&self.compose(&inv))
    }

    pub fn stabilizes(&self, n: &Subgroup) -> Option<usize> {
        n.members().iter().copied().find(|&x| !n.contains(self.apply(x)))
    }
}

fn permutation_order(image: &[u32]) -> u32 {
    let mut seen = vec![false; image.len()];
    let mut order = 1u64;
    for start in 0..image.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = image[x] as usize;
            len += 1;
        }
        order = num_integer::lcm(order, len);
    }
    order as u32
}

fn automorphism_defect(g: &FiniteGroup, image: &[usize]) -> Option<String> {
    let n = g.order();
    if image.len() != n {
        return Some(format!("image has length {}, group has order {n}", image.len()));
    }
    let mut seen = vec![false; n];
    for &y in image {
        if y >= n || std::mem::replace(&mut seen[y], true) {
            return Some("map is not a bijection".into());
        }
    }
    if image[g.identity()] != g.identity() {
        return Some("identity is not fixed".into());
    }
    for a in 0..n {
        for b in 0..n {
            if image[g.mul(a, b)] != g.mul(image[a], image[b]) {
                return Some(format!("not multiplicative at ({a}, {b})"));
            }
        }
    }
    None
}

/// Bijective and multiplicative.
pub fn is_automorphism(g: &FiniteGroup, image: &[usize]) -> bool {
    automorphism_defect(g, image).is_none()
}

/// How much of `Aut(G)` a set covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "n")]
pub enum Coverage {
    /// Every automorphism of the group.
    Full,
    /// Every automorphism whose order divides `n`.
    OrderDividing(u32),
    /// A documented sub-family of the automorphisms of order dividing `n`.
    Partial(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismSet {
    pub automorphisms: Vec<Automorphism>,
    pub coverage: Coverage,
}

impl AutomorphismSet {
    pub fn len(&self) -> usize {
        self.automorphisms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.automorphisms.is_empty()
    }

    /// True when the set is all of `Aut(G)`.
    pub fn is_complete(&self) -> bool {
        self.coverage == Coverage::Full
    }

    /// True when every automorphism of order dividing `n` is present.
    pub fn covers_order_dividing(&self, n: u32) -> bool {
        match self.coverage {
            Coverage::Full => true,
            Coverage::OrderDividing(m) => m == n,
            Coverage::Partial(_) => false,
        }
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Automorphism> {
        self.automorphisms.iter()
    }

    /// Histogram `order -> count`.
    pub fn order_histogram(&self) -> Vec<(u32, usize)> {
        let mut counts: HashMap<u32, usize> = HashMap::new();
        for a in &self.automorphisms {
            *counts.entry(a.order()).or_default() += 1;
        }
        let mut hist: Vec<(u32, usize)> = counts.into_iter().collect();
        hist.sort_unstable();
        hist
    }
}

impl FiniteGroup {
    /// `x ↦ g x g^{-1}`.
    pub fn conjugation_automorphism(&self, g: usize) -> Automorphism {
        let gi = self.inv(g);
        Automorphism::from_raw((0..self.order()).map(|x| self.mul(self.mul(g, x), gi) as u32).collect())
    }

    /// `x ↦ x^{-1}` when the group is abelian.
    pub fn inversion_automorphism(&self) -> Option<Automorphism> {
        self.is_abelian().then(|| Automorphism::from_raw((0..self.order()).map(|x| self.inv(x) as u32).collect()))
    }
}

/// The automorphism `x̄ ↦ \overline{α(x)}` of `G/N`.
pub fn induced_quotient_automorphism(
    g: &FiniteGroup,
    n: &Subgroup,
    quotient: &Quotient,
    alpha: &Automorphism,
) -> Result<Automorphism> {
    if !g.is_normal(n) {
        return Err(Error::NotNormal);
    }
    if let Some(x) = alpha.stabilizes(n) {
        return Err(Error::NotInvariant { element: x, image: alpha.apply(x) });
    }
    let image = quotient.representatives.iter().map(|&r| quotient.projection[alpha.apply(r)]).collect();
    Ok(Automorphism::from_raw(image))
}

/// Groups `set` into orbits under conjugation by `conjugators`, keeping the
/// first member of each orbit. Conjugates that fall outside `set` are
/// ignored, so the result is sound for any conjugator list drawn from
/// `Aut(G)`. Returns `(representative index, orbit size)` pairs in order.
pub fn conjugacy_representatives(set: &[Automorphism], conjugators: &[Automorphism]) -> Vec<(usize, usize)> {
    let index: HashMap<&[u32], usize> = set.iter().enumerate().map(|(i, a)| (a.raw(), i)).collect();
    let mut parent: Vec<usize> = (0..set.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let inverses: Vec<Automorphism> = conjugators.iter().map(Automorphism::inverse).collect();
    for (i, alpha) in set.iter().enumerate() {
        for (beta, beta_inv) in conjugators.iter().zip(&inverses) {
            let conj: Vec<u32> = beta_inv.image.iter().map(|&x| beta.image[alpha.image[x as usize] as usize]).collect();
            if let Some(&j) = index.get(conj.as_slice()) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    let (lo, hi) = if ri < rj { (ri, rj) } else { (rj, ri) };
                    parent[hi] = lo;
                }
            }
        }
    }
    let mut sizes: HashMap<usize, usize> = HashMap::new();
    for i in 0..set.len() {
        *sizes.entry(find(&mut parent, i)).or_default() += 1;
    }
    let mut reps: Vec<(usize, usize)> = sizes.into_iter().collect();
    reps.sort_unstable();
    reps
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(m: usize) -> FiniteGroup {
        FiniteGroup::from_fn(m, |a, b| (a + b) % m).unwrap()
    }

    fn s3() -> FiniteGroup {
        FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]).unwrap()
    }

    #[test]
    fn identity_and_inversion_maps() {
        let c3 = cyclic(3);
        assert!(is_automorphism(&c3, &[0, 1, 2]));
        assert!(is_automorphism(&c3, &[0, 2, 1]));
        let g = s3();
        let inversion: Vec<usize> = (0..6).map(|x| g.inv(x)).collect();
        assert!(!is_automorphism(&g, &inversion));
        assert!(g.inversion_automorphism().is_none());
        assert!(!is_automorphism(&c3, &[0, 1]));
    }

    #[test]
    fn conjugations_in_s3() {
        let g = s3();
        let e = g.identity();
        assert!(g.conjugation_automorphism(e).is_identity());
        let three_cycle = (0..6).find(|&x| g.element_order(x) == 3).unwrap();
        assert_eq!(g.conjugation_automorphism(three_cycle).order(), 3);
        let c5 = cyclic(5);
        assert!((0..5).all(|x| c5.conjugation_automorphism(x).is_identity()));
    }

    #[test]
    fn composition_inverse_and_powers() {
        let g = s3();
        let a = g.conjugation_automorphism(1);
        let b = g.conjugation_automorphism(2);
        let ab = a.compose(&b);
        for x in 0..6 {
            assert_eq!(ab.apply(x), a.apply(b.apply(x)));
        }
        assert!(a.compose(&a.inverse()).is_identity());
        assert!(a.pow(a.order()).is_identity());
        let maps = a.power_maps(3);
        assert_eq!(maps[0], (0..6).collect::<Vec<u32>>());
        assert_eq!(maps[1], a.raw());
    }

    #[test]
    fn induced_maps_on_s3_mod_a3() {
        let g = s3();
        let a3 = g.subgroup_generated(&[(0..6).find(|&x| g.element_order(x) == 3).unwrap()]);
        let q = g.quotient(&a3).unwrap();
        let id = Automorphism::identity(&g);
        assert!(induced_quotient_automorphism(&g, &a3, &q, &id).unwrap().is_identity());
        for x in 0..6 {
            let conj = g.conjugation_automorphism(x);
            let induced = induced_quotient_automorphism(&g, &a3, &q, &conj).unwrap();
            let expected = q.group.conjugation_automorphism(q.project(x));
            assert_eq!(induced, expected);
        }
    }

    #[test]
    fn induced_map_requires_invariance() {
        let c3 = cyclic(3);
        let g = c3.direct_product(&c3).unwrap();
        // swap (a, b) -> (b, a); index a * 3 + b.
        let swap: Vec<usize> = (0..9).map(|x| (x % 3) * 3 + x / 3).collect();
        let swap = Automorphism::new(&g, &swap).unwrap();
        let first = g.subgroup_generated(&[3]);
        let q = g.quotient(&first).unwrap();
        assert!(matches!(induced_quotient_automorphism(&g, &first, &q, &swap), Err(Error::NotInvariant { .. })));
    }
}
