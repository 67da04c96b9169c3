//! Backtracking enumeration of automorphisms.
//!
//! A partial map is always a homomorphism defined on a subgroup (the
//! domain), extended one generator at a time by closing the Cayley graph.
//! Candidate images for a generator must share its element order and
//! conjugacy-class size, both preserved by every automorphism.
//!
//! When only automorphisms of order dividing `n` are wanted, the next
//! generator is taken from the orbit of an earlier one: if `α(y)` has been
//! chosen but lies outside the domain, it becomes the next generator. Orbits
//! are thereby walked one step at a time, and the image that closes an orbit
//! of length `n` is forced, which keeps the search close to the size of the
//! answer instead of all of `Aut(G)`.

use std::collections::HashMap;

use super::{Automorphism, AutomorphismSet, Coverage};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// Largest group order whose automorphisms are enumerated exhaustively.
pub const DEFAULT_AUT_ORDER_CAP: usize = 256;
/// Search nodes (candidate extensions tried) before giving up.
pub const DEFAULT_AUT_NODE_BUDGET: u64 = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AutSearchLimits {
    pub order_cap: usize,
    pub node_budget: u64,
}

impl Default for AutSearchLimits {
    fn default() -> Self {
        AutSearchLimits { order_cap: DEFAULT_AUT_ORDER_CAP, node_budget: DEFAULT_AUT_NODE_BUDGET }
    }
}

const NONE: u32 = u32::MAX;

struct Search<'g> {
    g: &'g FiniteGroup,
    /// `Some(n)`: only automorphisms with `α^n = id`.
    target: Option<u32>,
    signature: Vec<u32>,
    by_signature: Vec<Vec<u32>>,
    fixed_gens: Vec<usize>,
    img: Vec<u32>,
    used: Vec<bool>,
    dom: Vec<u32>,
    gens: Vec<usize>,
    /// Per generator: (orbit root, position of the generator in the orbit).
    chain: Vec<(usize, u32)>,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

impl<'g> Search<'g> {
    fn new(g: &'g FiniteGroup, target: Option<u32>, budget: u64) -> Self {
        let orders = g.element_orders();
        let mut ids: HashMap<(u32, usize), u32> = HashMap::new();
        let mut signature = Vec::with_capacity(g.order());
        let mut by_signature: Vec<Vec<u32>> = Vec::new();
        for x in 0..g.order() {
            let key = (orders[x], g.class_size(x));
            let next = ids.len() as u32;
            let id = *ids.entry(key).or_insert(next);
            if id as usize == by_signature.len() {
                by_signature.push(Vec::new());
            }
            by_signature[id as usize].push(x as u32);
            signature.push(id);
        }
        let n = g.order();
        let mut img = vec![NONE; n];
        let mut used = vec![false; n];
        img[g.identity()] = g.identity() as u32;
        used[g.identity()] = true;
        Search {
            g,
            target,
            signature,
            by_signature,
            fixed_gens: g.generators().to_vec(),
            img,
            used,
            dom: vec![g.identity() as u32],
            gens: Vec::new(),
            chain: Vec::new(),
            nodes: 0,
            budget,
            aborted: false,
        }
    }

    fn run(&mut self, visit: &mut dyn FnMut(&[u32])) {
        if self.aborted {
            return;
        }
        if self.dom.len() == self.g.order() {
            if self.target.is_none_or(|n| n % super::permutation_order(&self.img) == 0) {
                visit(&self.img);
            }
            return;
        }
        let (y, root, pos) = self.next_generator();
        let candidates: Vec<u32> = match self.target {
            Some(n) if pos + 1 == n => vec![root as u32],
            Some(n) => self.by_signature[self.signature[y] as usize]
                .iter()
                .copied()
                .filter(|&c| c as usize != root || n % (pos + 1) == 0)
                .collect(),
            None => self.by_signature[self.signature[y] as usize].clone(),
        };
        for c in candidates {
            if self.used[c as usize] || self.signature[c as usize] != self.signature[y] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                self.aborted = true;
                return;
            }
            let saved = self.dom.len();
            self.gens.push(y);
            self.chain.push((root, pos));
            if self.extend(y, c) && self.orbits_consistent() {
                self.run(visit);
            }
            self.gens.pop();
            self.chain.pop();
            self.rollback(saved);
            if self.aborted {
                return;
            }
        }
    }

    /// `(generator, orbit root, orbit position)` for the next extension.
    fn next_generator(&self) -> (usize, usize, u32) {
        if self.target.is_some() {
            for (k, &gen) in self.gens.iter().enumerate().rev() {
                let image = self.img[gen] as usize;
                if self.img[image] == NONE {
                    let (root, pos) = self.chain[k];
                    return (image, root, pos + 1);
                }
            }
        }
        let y = *self.fixed_gens.iter().find(|&&x| self.img[x] == NONE).expect("generators of G generate G");
        (y, y, 0)
    }

    /// Extends the homomorphism to `<dom, y>` with `y ↦ c`.
    fn extend(&mut self, y: usize, c: u32) -> bool {
        let g = self.g;
        let old_len = self.dom.len();
        // dom[0] is the identity, so the first edge assigns img[y] = c.
        for i in 0..old_len {
            let x = self.dom[i] as usize;
            if !self.edge(g.mul(x, y), g.mul(self.img[x] as usize, c as usize)) {
                return false;
            }
        }
        let mut i = old_len;
        while i < self.dom.len() {
            let x = self.dom[i] as usize;
            let fx = self.img[x] as usize;
            for k in 0..self.gens.len() {
                let s = self.gens[k];
                if !self.edge(g.mul(x, s), g.mul(fx, self.img[s] as usize)) {
                    return false;
                }
            }
            i += 1;
        }
        true
    }

    #[inline]
    fn edge(&mut self, p: usize, value: usize) -> bool {
        let current = self.img[p];
        if current == NONE {
            if self.used[value] {
                return false;
            }
            self.img[p] = value as u32;
            self.used[value] = true;
            self.dom.push(p as u32);
            true
        } else {
            current as usize == value
        }
    }

    fn rollback(&mut self, len: usize) {
        for &x in &self.dom[len..] {
            let v = self.img[x as usize];
            self.used[v as usize] = false;
            self.img[x as usize] = NONE;
        }
        self.dom.truncate(len);
    }

    /// Every generator's orbit, as far as it is defined, closes after a
    /// length dividing `n` and never runs `n` steps without closing.
    fn orbits_consistent(&self) -> bool {
        let Some(n) = self.target else { return true };
        self.gens.iter().all(|&start| {
            let mut x = start;
            for k in 1..=n {
                let y = self.img[x];
                if y == NONE {
                    return true;
                }
                x = y as usize;
                if x == start {
                    return n % k == 0;
                }
            }
            false
        })
    }
}

fn collect(g: &FiniteGroup, target: Option<u32>, limits: &AutSearchLimits) -> (Vec<Automorphism>, bool) {
    let mut search = Search::new(g, target, limits.node_budget);
    let mut found = Vec::new();
    search.run(&mut |img| found.push(Automorphism::from_raw(img.to_vec())));
    found.sort_unstable();
    (found, !search.aborted)
}

fn check_cap(g: &FiniteGroup, limits: &AutSearchLimits) -> Result<()> {
    if g.order() > limits.order_cap {
        return Err(Error::OrderCapExceeded { cap: limits.order_cap });
    }
    Ok(())
}

impl FiniteGroup {
    /// All of `Aut(G)`, sorted by image array.
    pub fn automorphism_group(&self) -> Result<AutomorphismSet> {
        self.automorphism_group_with(&AutSearchLimits::default())
    }

    pub fn automorphism_group_with(&self, limits: &AutSearchLimits) -> Result<AutomorphismSet> {
        check_cap(self, limits)?;
        let (automorphisms, finished) = collect(self, None, limits);
        if !finished {
            return Err(Error::SearchBudgetExceeded { budget: limits.node_budget });
        }
        Ok(AutomorphismSet { automorphisms, coverage: Coverage::Full })
    }

    /// Exactly the automorphisms `α` with `α^n = id`, sorted by image array.
    pub fn automorphisms_of_order_dividing(&self, n: u32) -> Result<AutomorphismSet> {
        self.automorphisms_of_order_dividing_with(n, &AutSearchLimits::default())
    }

    pub fn automorphisms_of_order_dividing_with(&self, n: u32, limits: &AutSearchLimits) -> Result<AutomorphismSet> {
        assert!(n >= 1, "n must be positive");
        check_cap(self, limits)?;
        let (automorphisms, finished) = collect(self, Some(n), limits);
        if !finished {
            return Err(Error::SearchBudgetExceeded { budget: limits.node_budget });
        }
        Ok(AutomorphismSet { automorphisms, coverage: Coverage::OrderDividing(n) })
    }

    /// Automorphisms of order dividing `n` for surveys. Falls back to a
    /// partial family when the group is above the order cap or the search
    /// runs out of budget: the identity, inversion (abelian groups), every
    /// inner automorphism of order dividing `n`, and whatever the bounded
    /// search found before stopping.
    pub fn survey_automorphisms(&self, n: u32, limits: &AutSearchLimits) -> AutomorphismSet {
        let mut prefix = Vec::new();
        if self.order() <= limits.order_cap {
            let (found, finished) = collect(self, Some(n), limits);
            if finished {
                return AutomorphismSet { automorphisms: found, coverage: Coverage::OrderDividing(n) };
            }
            prefix = found;
        }
        let mut family = prefix;
        family.push(Automorphism::identity(self));
        family.extend(self.inversion_automorphism());
        family.extend((0..self.order()).map(|x| self.conjugation_automorphism(x)));
        family.retain(|a| n % a.order() == 0);
        family.sort_unstable();
        family.dedup();
        AutomorphismSet { automorphisms: family, coverage: Coverage::Partial(n) }
    }
}
