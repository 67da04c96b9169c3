//! Semidirect products `G ⋊ C_n` and exact finite-group forms of the
//! measure arguments: the coset relation, quotient monotonicity, the
//! translate-intersection bound and the coset-count inequalities.
//!
//! Convention: the product is built on pairs `x·t^k`, `0 <= k < n`, with
//! `t^{-1} x t = α(x)`. Hence `t^k y = α^{-k}(y) t^k` and
//! `(x t^{-1})^n = x α(x) ⋯ α^{n-1}(x)`. The cyclic factor has order exactly
//! `n` even when `α` has smaller order.

use serde::{Deserialize, Serialize};

use crate::automorphism::{induced_quotient_automorphism, Automorphism};
use crate::density::{self, ratio_of};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Quotient, Subgroup, DEFAULT_ORDER_CAP};
use crate::splitting::{power_solution_set, twisted_solution_set, SolutionSet};
use crate::Density;

pub const SEMIDIRECT_CONVENTION: &str = "G x| C_n on pairs x*t^k with t^-1 x t = alpha(x)";

#[derive(Debug, Clone)]
pub struct SemidirectProduct {
    pub base_order: usize,
    pub acting_order: u32,
    pub action: Automorphism,
    pub group: FiniteGroup,
    /// Base element `x` sits at index `embedding[x]` (which equals `x`).
    pub embedding: Vec<usize>,
    pub generator_t: usize,
}

impl SemidirectProduct {
    /// Index of `x·t^k`.
    #[inline]
    pub fn element(&self, x: usize, k: u32) -> usize {
        (k % self.acting_order) as usize * self.base_order + x
    }

    /// `(x, k)` with the element equal to `x·t^k`.
    #[inline]
    pub fn split(&self, index: usize) -> (usize, u32) {
        (index % self.base_order, (index / self.base_order) as u32)
    }

    pub fn t_inverse(&self) -> usize {
        self.group.inv(self.generator_t)
    }

    /// Structural invariants: conjugation by `t` realizes `α`, `t` has order
    /// `n`, the base is a normal subgroup of index `n`, and `(x t^{-1})^n`
    /// is the defining product of `x`.
    pub fn verify_structure(&self, base: &FiniteGroup) -> bool {
        let p = &self.group;
        let t = self.generator_t;
        let n = self.acting_order;
        let conj_ok =
            (0..self.base_order).all(|x| p.conjugate(self.embedding[x], t) == self.embedding[self.action.apply(x)]);
        let hom_ok = (0..self.base_order).all(|x| {
            (0..self.base_order).all(|y| self.embedding[base.mul(x, y)] == p.mul(self.embedding[x], self.embedding[y]))
        });
        let base_sub = Subgroup::from_mask((0..p.order()).map(|i| i < self.base_order).collect());
        let normal_ok = p.is_normal(&base_sub) && base_sub.index_in_parent() == n as usize;
        let t_ok = p.element_order(t) == n;
        let t_inv = self.t_inverse();
        let power_ok = (0..self.base_order).all(|x| {
            let mut defining = x;
            let mut y = x;
            for _ in 1..n {
                y = self.action.apply(y);
                defining = base.mul(defining, y);
            }
            p.pow(p.mul(self.embedding[x], t_inv), n as i64) == self.embedding[defining]
        });
        conj_ok && hom_ok && normal_ok && t_ok && power_ok
    }
}

pub fn semidirect_with_cyclic(g: &FiniteGroup, alpha: &Automorphism, n: u32) -> Result<SemidirectProduct> {
    semidirect_with_cyclic_capped(g, alpha, n, DEFAULT_ORDER_CAP)
}

pub fn semidirect_with_cyclic_capped(
    g: &FiniteGroup,
    alpha: &Automorphism,
    n: u32,
    cap: usize,
) -> Result<SemidirectProduct> {
    if n == 0 || n % alpha.order() != 0 {
        return Err(Error::AutomorphismOrderMismatch { order: alpha.order(), n });
    }
    let m = g.order();
    let order = m.checked_mul(n as usize).filter(|&o| o <= cap).ok_or(Error::OrderCapExceeded { cap })?;
    let powers = alpha.power_maps(n);
    let nn = n as usize;
    let mut table = Vec::with_capacity(order * order);
    for a in 0..order {
        let (x, k) = (a % m, a / m);
        // x t^k · y t^l = x α^{-k}(y) t^{k+l}
        let twist = &powers[(nn - k) % nn];
        for b in 0..order {
            let (y, l) = (b % m, b / m);
            let z = g.mul(x, twist[y] as usize);
            table.push((((k + l) % nn) * m + z) as u32);
        }
    }
    let labels = (0..order)
        .map(|i| match i / m {
            0 => g.label(i % m),
            1 => format!("{}*t", g.label(i % m)),
            k => format!("{}*t^{k}", g.label(i % m)),
        })
        .collect();
    let group = FiniteGroup::from_flat(order, table, Some(labels))?;
    Ok(SemidirectProduct {
        base_order: m,
        acting_order: n,
        action: alpha.clone(),
        group,
        embedding: (0..m).collect(),
        generator_t: m + g.identity(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetRelationReport {
    pub n: u32,
    pub base_order: usize,
    pub product_order: usize,
    /// `|X_n(G ⋊ C_n) ∩ G t^{-1}|`.
    pub lhs_size: usize,
    /// `|X_{n,α}(G) t^{-1}|`.
    pub rhs_size: usize,
    pub equal: bool,
    pub convention: String,
}

/// `X_n(G ⋊ C_n) ∩ G t^{-1} = X_{n,α}(G) t^{-1}`, as exact sets.
pub fn verify_coset_relation(g: &FiniteGroup, alpha: &Automorphism, n: u32) -> Result<CosetRelationReport> {
    let product = semidirect_with_cyclic(g, alpha, n)?;
    let twisted = twisted_solution_set(g, alpha, n)?;
    Ok(coset_relation_for(&product, &twisted))
}

pub fn coset_relation_for(product: &SemidirectProduct, twisted: &SolutionSet) -> CosetRelationReport {
    let p = &product.group;
    let n = product.acting_order;
    let t_inv = product.t_inverse();
    let powers = power_solution_set(p, n);
    let coset: Vec<usize> = (0..product.base_order).map(|x| p.mul(product.embedding[x], t_inv)).collect();
    let mut lhs: Vec<usize> = coset.iter().copied().filter(|&c| powers.contains(c)).collect();
    let mut rhs: Vec<usize> = twisted.members.iter().map(|&x| coset[x]).collect();
    lhs.sort_unstable();
    rhs.sort_unstable();
    CosetRelationReport {
        n,
        base_order: product.base_order,
        product_order: p.order(),
        lhs_size: lhs.len(),
        rhs_size: rhs.len(),
        equal: lhs == rhs,
        convention: SEMIDIRECT_CONVENTION.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub n: u32,
    pub normal_order: usize,
    #[serde(with = "density::as_string")]
    pub density_g: Density,
    #[serde(with = "density::as_string")]
    pub density_q: Density,
    /// `density_g <= density_q`.
    pub ok: bool,
}

/// `|X_{n,α}(G)|/|G| <= |X_{n,ᾱ}(G/N)|/|G/N|` for an `α`-invariant normal `N`.
pub fn verify_quotient_monotonicity(
    g: &FiniteGroup,
    alpha: &Automorphism,
    n: u32,
    normal: &Subgroup,
) -> Result<MonotonicityReport> {
    let quotient = g.quotient(normal)?;
    let x_g = twisted_solution_set(g, alpha, n)?;
    monotonicity_with_quotient(g, alpha, n, normal, &quotient, &x_g).map(|(report, _)| report)
}

/// As [`verify_quotient_monotonicity`] with the quotient and `X_{n,α}(G)`
/// supplied; also returns the quotient's solution set.
pub fn monotonicity_with_quotient(
    g: &FiniteGroup,
    alpha: &Automorphism,
    n: u32,
    normal: &Subgroup,
    quotient: &Quotient,
    x_g: &SolutionSet,
) -> Result<(MonotonicityReport, SolutionSet)> {
    let induced = induced_quotient_automorphism(g, normal, quotient, alpha)?;
    let x_q = twisted_solution_set(&quotient.group, &induced, n)?;
    // Members of X_{n,α}(G) project into X_{n,ᾱ}(G/N).
    debug_assert!(x_g.members.iter().all(|&x| x_q.contains(quotient.project(x))));
    let report = MonotonicityReport {
        n,
        normal_order: normal.order(),
        density_g: x_g.density,
        density_q: x_q.density,
        ok: x_g.density <= x_q.density,
    };
    Ok((report, x_q))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualSplittingReport {
    pub n: u32,
    /// Nontrivial `α`-invariant normal subgroups whose quotient splits.
    pub splitting_quotients: usize,
    pub intersection_trivial: bool,
    pub splits: bool,
    /// `splits` whenever `intersection_trivial`.
    pub ok: bool,
}

/// If the nontrivial `α`-invariant normal subgroups `N` with
/// `X_{n,ᾱ}(G/N) = G/N` intersect trivially, then `X_{n,α}(G) = G`.
pub fn verify_residual_splitting(
    g: &FiniteGroup,
    alpha: &Automorphism,
    n: u32,
    normals: &[Subgroup],
) -> Result<ResidualSplittingReport> {
    let x_g = twisted_solution_set(g, alpha, n)?;
    let mut intersection = vec![true; g.order()];
    let mut count = 0;
    for normal in normals {
        if normal.is_trivial() || alpha.stabilizes(normal).is_some() {
            continue;
        }
        let quotient = g.quotient(normal)?;
        let (_, x_q) = monotonicity_with_quotient(g, alpha, n, normal, &quotient, &x_g)?;
        if x_q.is_everything() {
            count += 1;
            for (slot, &m) in intersection.iter_mut().zip(normal.mask()) {
                *slot &= m;
            }
        }
    }
    let intersection_trivial = intersection.iter().filter(|&&b| b).count() == 1;
    let splits = x_g.is_everything();
    Ok(ResidualSplittingReport {
        n,
        splitting_quotients: count,
        intersection_trivial,
        splits,
        ok: !intersection_trivial || splits,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargeIntersectionReport {
    pub shifts: usize,
    #[serde(with = "density::as_string")]
    pub epsilon: Density,
    /// `1 - k ε`; may be negative.
    #[serde(with = "density::as_string")]
    pub lower_bound: Density,
    #[serde(with = "density::as_string")]
    pub actual: Density,
    pub vacuous: bool,
    pub ok: bool,
}

/// With `ε = 1 - |A|/|G|`: `|g_1 A ∩ ⋯ ∩ g_k A| / |G| >= 1 - k ε`.
pub fn check_large_intersection(g: &FiniteGroup, a: &[usize], shifts: &[usize]) -> Result<LargeIntersectionReport> {
    let mask = subset_mask(g, a)?;
    for &s in shifts {
        g.check_element(s)?;
    }
    let size = mask.iter().filter(|&&b| b).count();
    let mut inter = vec![true; g.order()];
    for &s in shifts {
        let mut translate = vec![false; g.order()];
        for x in (0..g.order()).filter(|&x| mask[x]) {
            translate[g.mul(s, x)] = true;
        }
        for (slot, t) in inter.iter_mut().zip(translate) {
            *slot &= t;
        }
    }
    let actual: Density = ratio_of(inter.iter().filter(|&&b| b).count(), g.order());
    let epsilon = Density::from_integer(1) - ratio_of::<i64>(size, g.order());
    let lower_bound = Density::from_integer(1) - epsilon * Density::from_integer(shifts.len() as i64);
    Ok(LargeIntersectionReport {
        shifts: shifts.len(),
        epsilon,
        lower_bound,
        actual,
        vacuous: lower_bound <= Density::from_integer(0),
        ok: actual >= lower_bound,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetDensityReport {
    /// `[G : N]`.
    pub r: usize,
    /// Cosets of `N` meeting `A`.
    pub s: usize,
    /// `|N x ∩ A|` for the fullest coset.
    pub max_coset_hits: usize,
    /// `|N x ∩ A| / |N|`.
    #[serde(with = "density::as_string")]
    pub max_coset_density: Density,
    /// `(r - s)/r <= 1 - |A|/|G|`.
    pub ine1_ok: bool,
    /// `|A|/|G| <= s |N x ∩ A| / |G|`.
    pub ine2_ok: bool,
}

pub fn check_coset_density(g: &FiniteGroup, a: &[usize], normal: &Subgroup) -> Result<CosetDensityReport> {
    if !g.is_normal(normal) {
        return Err(Error::NotNormal);
    }
    let mask = subset_mask(g, a)?;
    let size = mask.iter().filter(|&&b| b).count();
    if size == 0 {
        return Err(Error::EmptySet);
    }
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut hits: Vec<usize> = Vec::new();
    for x in 0..g.order() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let c = hits.len();
        let mut count = 0;
        for &m in normal.members() {
            let y = g.mul(m, x);
            coset_of[y] = c;
            count += usize::from(mask[y]);
        }
        hits.push(count);
    }
    let r = hits.len();
    let s = hits.iter().filter(|&&h| h > 0).count();
    let max_coset_hits = hits.iter().copied().max().unwrap_or(0);
    let order = g.order();
    // (r - s)/r <= (|G| - |A|)/|G|  <=>  (r - s) |G| <= r (|G| - |A|)
    let ine1_ok = (r - s) * order <= r * (order - size);
    let ine2_ok = size <= s * max_coset_hits;
    Ok(CosetDensityReport {
        r,
        s,
        max_coset_hits,
        max_coset_density: ratio_of(max_coset_hits, normal.order()),
        ine1_ok,
        ine2_ok,
    })
}

fn subset_mask(g: &FiniteGroup, a: &[usize]) -> Result<Vec<bool>> {
    let mut mask = vec![false; g.order()];
    for &x in a {
        g.check_element(x)?;
        mask[x] = true;
    }
    Ok(mask)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(m: usize) -> FiniteGroup {
        FiniteGroup::from_fn(m, |a, b| (a + b) % m).unwrap()
    }

    fn involutions(g: &FiniteGroup) -> usize {
        g.element_orders().iter().filter(|&&o| o == 2).count()
    }

    fn s3() -> FiniteGroup {
        FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]).unwrap()
    }

    fn d8() -> FiniteGroup {
        FiniteGroup::from_permutations(&[vec![1, 2, 3, 0], vec![3, 2, 1, 0]]).unwrap()
    }

    #[test]
    fn dihedral_products_by_inversion() {
        let c3 = cyclic(3);
        let p = semidirect_with_cyclic(&c3, &c3.inversion_automorphism().unwrap(), 2).unwrap();
        assert_eq!(p.group.order(), 6);
        assert_eq!(involutions(&p.group), 3);
        assert!(p.verify_structure(&c3));

        let c4 = cyclic(4);
        let p = semidirect_with_cyclic(&c4, &c4.inversion_automorphism().unwrap(), 2).unwrap();
        assert_eq!(p.group.order(), 8);
        assert_eq!(involutions(&p.group), 5);
        assert!(p.verify_structure(&c4));
    }

    #[test]
    fn identity_action_with_trivial_factor() {
        let g = s3();
        let p = semidirect_with_cyclic(&g, &Automorphism::identity(&g), 1).unwrap();
        assert_eq!(p.group.table_rows(), g.table_rows());
        // Kernel allowed: identity action with n = 3 is G x C3.
        let p = semidirect_with_cyclic(&g, &Automorphism::identity(&g), 3).unwrap();
        assert_eq!(p.group.order(), 18);
        assert_eq!(p.group.element_order(p.generator_t), 3);
        assert!(p.verify_structure(&g));
    }

    #[test]
    fn semidirect_errors() {
        let c3 = cyclic(3);
        let inv = c3.inversion_automorphism().unwrap();
        assert!(matches!(semidirect_with_cyclic(&c3, &inv, 3), Err(Error::AutomorphismOrderMismatch { .. })));
        assert_eq!(semidirect_with_cyclic_capped(&c3, &inv, 2, 5).unwrap_err(), Error::OrderCapExceeded { cap: 5 });
    }

    #[test]
    fn coset_relation_examples() {
        let c4 = cyclic(4);
        let r = verify_coset_relation(&c4, &c4.inversion_automorphism().unwrap(), 2).unwrap();
        assert_eq!((r.lhs_size, r.rhs_size, r.equal), (4, 4, true));

        let c3 = cyclic(3);
        let klein = cyclic(2).direct_product(&cyclic(2)).unwrap();
        let r = verify_coset_relation(&klein, &Automorphism::identity(&klein), 2).unwrap();
        assert_eq!((r.lhs_size, r.equal), (4, true));

        let g = c3.direct_product(&c3).unwrap();
        let swap: Vec<usize> = (0..9).map(|x| (x % 3) * 3 + x / 3).collect();
        let swap = Automorphism::new(&g, &swap).unwrap();
        let r = verify_coset_relation(&g, &swap, 2).unwrap();
        assert_eq!((r.lhs_size, r.rhs_size, r.equal), (3, 3, true));
    }

    #[test]
    fn monotonicity_examples() {
        let g = s3();
        let id = Automorphism::identity(&g);
        let a3 = g.subgroup_generated(&[(0..6).find(|&x| g.element_order(x) == 3).unwrap()]);
        let r = verify_quotient_monotonicity(&g, &id, 2, &a3).unwrap();
        assert_eq!((r.density_g, r.density_q, r.ok), (Density::new(2, 3), Density::from_integer(1), true));
        let r = verify_quotient_monotonicity(&g, &id, 2, &Subgroup::trivial(&g)).unwrap();
        assert_eq!(r.density_g, r.density_q);

        let d = d8();
        let id = Automorphism::identity(&d);
        let r = verify_quotient_monotonicity(&d, &id, 2, &d.center()).unwrap();
        assert_eq!((r.density_g, r.density_q, r.ok), (Density::new(3, 4), Density::from_integer(1), true));

        let t = g.subgroup_generated(&[(0..6).find(|&x| g.element_order(x) == 2).unwrap()]);
        assert_eq!(verify_quotient_monotonicity(&g, &id_of(&g), 2, &t).unwrap_err(), Error::NotNormal);
    }

    fn id_of(g: &FiniteGroup) -> Automorphism {
        Automorphism::identity(g)
    }

    #[test]
    fn residual_splitting_on_klein() {
        let klein = cyclic(2).direct_product(&cyclic(2)).unwrap();
        let normals = klein.normal_subgroups();
        let r = verify_residual_splitting(&klein, &id_of(&klein), 2, &normals).unwrap();
        assert!(r.intersection_trivial && r.splits && r.ok);
        let c4 = cyclic(4);
        let r = verify_residual_splitting(&c4, &id_of(&c4), 2, &c4.normal_subgroups()).unwrap();
        // Only C4/C2 and C4/C4 split and both contain the subgroup of order 2.
        assert!(!r.intersection_trivial && !r.splits && r.ok);
    }

    #[test]
    fn large_intersection_examples() {
        let g = s3();
        let all: Vec<usize> = (0..6).collect();
        let r = check_large_intersection(&g, &all, &[1, 2, 3]).unwrap();
        assert_eq!((r.actual, r.lower_bound, r.ok), (Density::from_integer(1), Density::from_integer(1), true));
        let a = [0, 1, 4];
        let r = check_large_intersection(&g, &a, &[5]).unwrap();
        assert_eq!(r.actual, r.lower_bound);
        assert!(r.ok);
    }

    #[test]
    fn coset_density_examples() {
        let g = s3();
        let a3 = g.subgroup_generated(&[(0..6).find(|&x| g.element_order(x) == 3).unwrap()]);
        let r = check_coset_density(&g, a3.members(), &a3).unwrap();
        assert_eq!((r.r, r.s, r.max_coset_hits), (2, 1, 3));
        assert!(r.ine1_ok && r.ine2_ok);
        let all: Vec<usize> = (0..6).collect();
        let r = check_coset_density(&g, &all, &a3).unwrap();
        assert_eq!((r.r, r.s), (2, 2));
        assert!(r.ine1_ok && r.ine2_ok);
        assert_eq!(check_coset_density(&g, &[], &a3).unwrap_err(), Error::EmptySet);
    }
}
