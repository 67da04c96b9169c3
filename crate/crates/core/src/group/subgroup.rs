//! Subgroups, normality, quotients and the lattice of normal subgroups.

use std::collections::HashSet;
use std::sync::OnceLock;

use super::table::FiniteGroup;
use crate::error::{Error, Result};

/// A subgroup of some parent group, stored as a sorted member list plus a
/// membership mask over the parent's indices.
#[derive(Debug, Clone)]
pub struct Subgroup {
    members: Vec<usize>,
    mask: Vec<bool>,
    is_normal: OnceLock<bool>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && self.mask.len() == other.mask.len()
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    /// Validates that `members` is a subgroup of `g`.
    pub fn new(g: &FiniteGroup, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut mask = vec![false; g.order()];
        for x in members {
            g.check_element(x)?;
            mask[x] = true;
        }
        if !mask[g.identity()] {
            return Err(Error::NotSubgroup("identity missing".into()));
        }
        let members: Vec<usize> = (0..g.order()).filter(|&x| mask[x]).collect();
        for &a in &members {
            if !mask[g.inv(a)] {
                return Err(Error::NotSubgroup(format!("inverse of {a} missing")));
            }
            for &b in &members {
                if !mask[g.mul(a, b)] {
                    return Err(Error::NotSubgroup(format!("product {a}*{b} missing")));
                }
            }
        }
        if g.order() % members.len() != 0 {
            return Err(Error::NotSubgroup("order does not divide the group order".into()));
        }
        Ok(Self::from_mask(mask))
    }

    /// Callers guarantee the mask describes a subgroup.
    pub(crate) fn from_mask(mask: Vec<bool>) -> Self {
        let members = mask.iter().enumerate().filter_map(|(i, &m)| m.then_some(i)).collect();
        Subgroup { members, mask, is_normal: OnceLock::new() }
    }

    pub(crate) fn with_normal_flag(self, normal: bool) -> Self {
        let _ = self.is_normal.set(normal);
        self
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        Self::from_mask(vec![true; g.order()]).with_normal_flag(true)
    }

    pub fn trivial(g: &FiniteGroup) -> Self {
        let mut mask = vec![false; g.order()];
        mask[g.identity()] = true;
        Self::from_mask(mask).with_normal_flag(true)
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.mask[x]
    }

    pub fn index_in_parent(&self) -> usize {
        self.mask.len() / self.members.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.mask.len()
    }

    /// Cached normality verdict, if already known.
    pub fn normal_flag(&self) -> Option<bool> {
        self.is_normal.get().copied()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup::from_mask(self.mask.iter().zip(&other.mask).map(|(&a, &b)| a && b).collect())
    }
}

impl FiniteGroup {
    /// Smallest subgroup containing `set`.
    pub fn subgroup_generated(&self, set: &[usize]) -> Subgroup {
        let mut mask = vec![false; self.order()];
        mask[self.identity()] = true;
        extend_closure(self, &mut mask, set);
        Subgroup::from_mask(mask)
    }

    /// `g^{-1} H g = H` for every `g`; conjugation by a generating set suffices.
    pub fn is_normal(&self, h: &Subgroup) -> bool {
        *h.is_normal.get_or_init(|| {
            self.generators().iter().all(|&g| h.members().iter().all(|&x| h.contains(self.conjugate(x, g))))
        })
    }

    pub fn normal_closure(&self, set: &[usize]) -> Subgroup {
        let classes = self.conjugacy_classes();
        let wanted: HashSet<u32> = set.iter().map(|&x| classes.class_of[x]).collect();
        let full: Vec<usize> = (0..self.order()).filter(|&x| wanted.contains(&classes.class_of[x])).collect();
        self.subgroup_generated(&full).with_normal_flag(true)
    }

    pub fn center(&self) -> Subgroup {
        let gens = self.generators();
        let mask = (0..self.order()).map(|x| gens.iter().all(|&g| self.commutes(x, g))).collect();
        Subgroup::from_mask(mask).with_normal_flag(true)
    }

    /// Subgroup generated by all `[a, b]` with `a` in `a_set`, `b` in `b_set`.
    pub fn commutator_subgroup(&self, a_set: &Subgroup, b_set: &Subgroup) -> Subgroup {
        let mut seen = vec![false; self.order()];
        let mut comms = Vec::new();
        for &a in a_set.members() {
            for &b in b_set.members() {
                let c = self.comm(a, b);
                if !seen[c] {
                    seen[c] = true;
                    comms.push(c);
                }
            }
        }
        self.subgroup_generated(&comms)
    }

    pub fn quotient(&self, n: &Subgroup) -> Result<Quotient> {
        if !self.is_normal(n) {
            return Err(Error::NotNormal);
        }
        let mut projection = vec![u32::MAX; self.order()];
        let mut representatives = Vec::new();
        // Cosets are numbered by their smallest member.
        for x in 0..self.order() {
            if projection[x] != u32::MAX {
                continue;
            }
            let c = representatives.len() as u32;
            representatives.push(x);
            for &m in n.members() {
                projection[self.mul(x, m)] = c;
            }
        }
        let r = representatives.len();
        let mut table = Vec::with_capacity(r * r);
        for &a in &representatives {
            for &b in &representatives {
                table.push(projection[self.mul(a, b)]);
            }
        }
        let labels = representatives.iter().map(|&x| format!("{}N", self.label(x))).collect();
        let group = FiniteGroup::from_flat(r, table, Some(labels))?;
        Ok(Quotient { group, projection, representatives })
    }

    /// All normal subgroups, ordered by size and then by member list.
    pub fn normal_subgroups(&self) -> Vec<Subgroup> {
        let classes = self.conjugacy_classes();
        let minimal: Vec<Subgroup> = classes.representatives.iter().map(|&x| self.normal_closure(&[x])).collect();
        let mut seen: HashSet<Vec<bool>> = HashSet::new();
        let mut all = Vec::new();
        let trivial = Subgroup::trivial(self);
        seen.insert(trivial.mask.clone());
        all.push(trivial);
        let mut head = 0;
        while head < all.len() {
            let base = all[head].clone();
            head += 1;
            for m in &minimal {
                if m.is_subset_of(&base) {
                    continue;
                }
                let mut mask = base.mask.clone();
                extend_closure(self, &mut mask, m.members());
                if seen.insert(mask.clone()) {
                    all.push(Subgroup::from_mask(mask).with_normal_flag(true));
                }
            }
        }
        all.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
        all
    }
}

/// Incremental closure under right multiplication. After every `add` the
/// element list is closed under all generators added so far.
pub(crate) struct Closure<'g> {
    g: &'g FiniteGroup,
    pub(crate) mask: Vec<bool>,
    pub(crate) elements: Vec<usize>,
    gens: Vec<usize>,
}

impl<'g> Closure<'g> {
    pub(crate) fn new(g: &'g FiniteGroup) -> Self {
        let mut mask = vec![false; g.order()];
        mask[g.identity()] = true;
        Closure { g, mask, elements: vec![g.identity()], gens: Vec::new() }
    }

    pub(crate) fn add(&mut self, s: usize) {
        if self.mask[s] {
            return;
        }
        self.gens.push(s);
        let old_len = self.elements.len();
        for i in 0..old_len {
            self.visit(self.g.mul(self.elements[i], s));
        }
        let mut i = old_len;
        while i < self.elements.len() {
            let x = self.elements[i];
            for k in 0..self.gens.len() {
                self.visit(self.g.mul(x, self.gens[k]));
            }
            i += 1;
        }
    }

    #[inline]
    fn visit(&mut self, y: usize) {
        if !self.mask[y] {
            self.mask[y] = true;
            self.elements.push(y);
        }
    }
}

/// Grows `mask` (already a subgroup containing the identity) to the subgroup
/// generated by it and `extra`.
fn extend_closure(g: &FiniteGroup, mask: &mut [bool], extra: &[usize]) {
    let mut closure = Closure::new(g);
    for x in 0..g.order() {
        if mask[x] {
            closure.add(x);
        }
    }
    for &s in extra {
        closure.add(s);
    }
    mask.copy_from_slice(&closure.mask);
}

/// `G/N` together with the projection `G -> G/N`.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub group: FiniteGroup,
    pub projection: Vec<u32>,
    pub representatives: Vec<usize>,
}

impl Quotient {
    #[inline]
    pub fn project(&self, x: usize) -> usize {
        self.projection[x] as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FiniteGroup {
        FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]).unwrap()
    }

    fn find(g: &FiniteGroup, label: &str) -> usize {
        (0..g.order()).find(|&x| g.label(x) == label).unwrap()
    }

    #[test]
    fn generated_subgroups_in_s3() {
        let g = s3();
        assert!(g.subgroup_generated(&[]).is_trivial());
        let t1 = find(&g, "(0 1)");
        let t2 = find(&g, "(0 2)");
        assert!(g.subgroup_generated(&[t1, t2]).is_whole());
        let h = g.subgroup_generated(&[t1]);
        assert_eq!(h.order(), 2);
        assert!(!g.is_normal(&h));
        let a3 = g.subgroup_generated(&[find(&g, "(0 1 2)")]);
        assert_eq!(a3.order(), 3);
        assert!(g.is_normal(&a3));
        assert!(g.is_normal(&Subgroup::whole(&g)));
    }

    #[test]
    fn subgroup_validation() {
        let g = s3();
        let t1 = find(&g, "(0 1)");
        assert!(Subgroup::new(&g, [g.identity(), t1]).is_ok());
        assert!(Subgroup::new(&g, [t1]).is_err());
        assert!(Subgroup::new(&g, [g.identity(), t1, find(&g, "(0 2)")]).is_err());
    }

    #[test]
    fn quotients_of_s3() {
        let g = s3();
        let a3 = g.subgroup_generated(&[find(&g, "(0 1 2)")]);
        let q = g.quotient(&a3).unwrap();
        assert_eq!(q.group.order(), 2);
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(q.project(g.mul(a, b)), q.group.mul(q.project(a), q.project(b)));
            }
        }
        assert_eq!(g.quotient(&Subgroup::whole(&g)).unwrap().group.order(), 1);
        let same = g.quotient(&Subgroup::trivial(&g)).unwrap();
        assert_eq!(same.group.table_rows(), g.table_rows());
        let h = g.subgroup_generated(&[find(&g, "(0 1)")]);
        assert_eq!(g.quotient(&h).unwrap_err(), Error::NotNormal);
    }

    #[test]
    fn normal_subgroups_of_s3_and_klein() {
        let g = s3();
        let sizes: Vec<usize> = g.normal_subgroups().iter().map(Subgroup::order).collect();
        assert_eq!(sizes, vec![1, 3, 6]);
        let c2 = FiniteGroup::from_fn(2, |a, b| a ^ b).unwrap();
        let klein = c2.direct_product(&c2).unwrap();
        assert_eq!(klein.normal_subgroups().len(), 5);
    }

    #[test]
    fn center_of_s3_is_trivial() {
        assert!(s3().center().is_trivial());
    }
}
