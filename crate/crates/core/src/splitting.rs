//! Twisted power sets `X_{n,α}(G) = { x : x α(x) α²(x) ⋯ α^{n-1}(x) = 1 }`,
//! their exact densities, and Hughes–Thompson subgroups.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automorphism::Automorphism;
use crate::density::{self, ratio_of};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::Density;

/// Groups at least this large evaluate the defining product in parallel.
const PARALLEL_THRESHOLD: usize = 512;

/// The members of `X_{n,α}(G)` with their exact density.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    pub n: u32,
    pub members: Vec<usize>,
    pub density: Density,
    pub group_order: usize,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_everything(&self) -> bool {
        self.members.len() == self.group_order
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.group_order];
        for &x in &self.members {
            mask[x] = true;
        }
        mask
    }
}

/// `x α(x) α²(x) ⋯ α^{n-1}(x)` for every `x`, multiplied left to right.
/// Fails unless `α^n` is the identity map.
pub fn twisted_norms(g: &FiniteGroup, alpha: &Automorphism, n: u32) -> Result<Vec<u32>> {
    if n == 0 || n % alpha.order() != 0 {
        return Err(Error::AutomorphismOrderMismatch { order: alpha.order(), n });
    }
    let powers = alpha.power_maps(n);
    let norm = |x: usize| -> u32 {
        let mut acc = x;
        for map in &powers[1..] {
            acc = g.mul(acc, map[x] as usize);
        }
        acc as u32
    };
    Ok(if g.order() >= PARALLEL_THRESHOLD {
        (0..g.order()).into_par_iter().map(norm).collect()
    } else {
        (0..g.order()).map(norm).collect()
    })
}

pub fn twisted_solution_set(g: &FiniteGroup, alpha: &Automorphism, n: u32) -> Result<SolutionSet> {
    let norms = twisted_norms(g, alpha, n)?;
    let e = g.identity() as u32;
    let members: Vec<usize> = (0..g.order()).filter(|&x| norms[x] == e).collect();
    Ok(SolutionSet { n, density: ratio_of(members.len(), g.order()), members, group_order: g.order() })
}

/// `{ x : x^n = 1 }`.
pub fn power_solution_set(g: &FiniteGroup, n: u32) -> SolutionSet {
    twisted_solution_set(g, &Automorphism::identity(g), n).expect("identity has order 1")
}

/// `H_n(G)`: the subgroup generated by all `x` with `x^n != 1`.
pub fn hughes_thompson_subgroup(g: &FiniteGroup, n: u32) -> Subgroup {
    let solutions = power_solution_set(g, n).mask();
    let outside: Vec<usize> = (0..g.order()).filter(|&x| !solutions[x]).collect();
    let h = g.subgroup_generated(&outside);
    // The generating set is closed under conjugation.
    assert!(g.is_normal(&h), "Hughes-Thompson subgroup must be normal");
    h
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexBoundReport {
    pub n: u32,
    pub group_order: usize,
    pub hn_order: usize,
    pub hn_index: usize,
    #[serde(with = "density::as_string")]
    pub density: Density,
    /// `G \ H_n(G) ⊆ X_n(G)`.
    pub containment_ok: bool,
    /// `1 / (1 - density)`, absent when `X_n(G) = G`.
    #[serde(with = "density::opt_as_string")]
    pub bound: Option<Density>,
    /// `[G : H_n(G)] <= 1 / (1 - density)`; `None` when vacuous.
    pub bound_ok: Option<bool>,
    pub vacuous: bool,
}

impl IndexBoundReport {
    pub fn passed(&self) -> bool {
        self.containment_ok && self.bound_ok != Some(false)
    }
}

/// Checks `G \ H_n(G) ⊆ X_n(G)` and, when `H_n(G) != 1` and `X_n(G) != G`,
/// `[G : H_n(G)] <= 1 / (1 - |X_n(G)|/|G|)` in exact arithmetic.
pub fn check_index_bound(g: &FiniteGroup, n: u32) -> IndexBoundReport {
    let x = power_solution_set(g, n);
    let mask = x.mask();
    let h = hughes_thompson_subgroup(g, n);
    let containment_ok = (0..g.order()).all(|y| h.contains(y) || mask[y]);
    let order = g.order() as i64;
    let solutions = x.len() as i64;
    let bound = (solutions < order).then(|| Density::new(order, order - solutions));
    let vacuous = h.is_trivial() || x.is_everything();
    let bound_ok = (!vacuous).then(|| {
        // index * (1 - d) <= 1  <=>  index * (|G| - |X|) <= |G|
        h.index_in_parent() as i64 * (order - solutions) <= order
    });
    IndexBoundReport {
        n,
        group_order: g.order(),
        hn_order: h.order(),
        hn_index: h.index_in_parent(),
        density: x.density,
        containment_ok,
        bound,
        bound_ok,
        vacuous,
    }
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

    fn d8() -> FiniteGroup {
        FiniteGroup::from_permutations(&[vec![1, 2, 3, 0], vec![3, 2, 1, 0]]).unwrap()
    }

    /// Brute-force oracle: evaluate the defining product with repeated
    /// application of α and no precomputed power maps.
    fn oracle(g: &FiniteGroup, alpha: &Automorphism, n: u32) -> Vec<usize> {
        (0..g.order())
            .filter(|&x| {
                let mut acc = g.identity();
                let mut y = x;
                for _ in 0..n {
                    acc = g.mul(acc, y);
                    y = alpha.apply(y);
                }
                acc == g.identity()
            })
            .collect()
    }

    #[test]
    fn exponent_dividing_n_gives_everything() {
        let c3 = cyclic(3);
        let x = twisted_solution_set(&c3, &Automorphism::identity(&c3), 3).unwrap();
        assert_eq!(x.len(), 3);
        assert_eq!(x.density, Density::from_integer(1));
    }

    #[test]
    fn s3_cube_roots() {
        let g = s3();
        let x = power_solution_set(&g, 3);
        assert_eq!(x.density, Density::new(1, 2));
        assert!(x.members.iter().all(|&m| g.element_order(m) != 2));
        assert_eq!(x.members, oracle(&g, &Automorphism::identity(&g), 3));
    }

    #[test]
    fn swap_on_c3_squared() {
        let c3 = cyclic(3);
        let g = c3.direct_product(&c3).unwrap();
        let swap: Vec<usize> = (0..9).map(|x| (x % 3) * 3 + x / 3).collect();
        let swap = Automorphism::new(&g, &swap).unwrap();
        let x = twisted_solution_set(&g, &swap, 2).unwrap();
        assert_eq!(x.density, Density::new(1, 3));
        // (a, a^{-1}) at index a * 3 + (3 - a) % 3.
        assert_eq!(x.members, vec![0, 5, 7]);
        assert_eq!(x.members, oracle(&g, &swap, 2));
    }

    #[test]
    fn order_mismatch_is_rejected() {
        let c3 = cyclic(3);
        let inv = c3.inversion_automorphism().unwrap();
        assert_eq!(
            twisted_solution_set(&c3, &inv, 3).unwrap_err(),
            Error::AutomorphismOrderMismatch { order: 2, n: 3 }
        );
    }

    #[test]
    fn involution_counts() {
        assert_eq!(power_solution_set(&d8(), 2).density, Density::new(3, 4));
        assert_eq!(power_solution_set(&cyclic(5), 2).members, vec![0]);
        let klein = cyclic(2).direct_product(&cyclic(2)).unwrap();
        assert!(power_solution_set(&klein, 2).is_everything());
    }

    #[test]
    fn hughes_thompson_examples() {
        let klein = cyclic(2).direct_product(&cyclic(2)).unwrap();
        assert!(hughes_thompson_subgroup(&klein, 2).is_trivial());
        let h = hughes_thompson_subgroup(&s3(), 2);
        assert_eq!((h.order(), h.index_in_parent()), (3, 2));
        assert!(hughes_thompson_subgroup(&cyclic(4), 2).is_whole());
    }

    #[test]
    fn index_bound_examples() {
        let r = check_index_bound(&s3(), 2);
        assert_eq!(r.density, Density::new(2, 3));
        assert_eq!(r.hn_index, 2);
        assert_eq!(r.bound, Some(Density::from_integer(3)));
        assert!(r.containment_ok);
        assert_eq!(r.bound_ok, Some(true));

        let r = check_index_bound(&cyclic(3), 3);
        assert!(r.vacuous);
        assert_eq!(r.bound_ok, None);
        assert!(r.passed());

        let r = check_index_bound(&d8(), 2);
        assert_eq!(r.density, Density::new(3, 4));
        assert_eq!((r.hn_order, r.hn_index), (4, 2));
        assert_eq!(r.bound, Some(Density::from_integer(4)));
        assert_eq!(r.bound_ok, Some(true));
    }
}
