//! Finite groups stored as dense multiplication tables.
//!
//! Elements are the indices `0..order`. The table is row-major, so
//! `mul(a, b)` is a single lookup. Everything built here is validated
//! before it is handed out; derived data (element orders, conjugacy
//! classes, a small generating set) is computed lazily and cached.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Default upper bound on the order of a materialized table.
pub const DEFAULT_ORDER_CAP: usize = 2000;

/// Conjugacy class data: `class_of[x]` is the class index of `x`, classes are
/// numbered by their smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClasses {
    pub class_of: Vec<u32>,
    pub sizes: Vec<usize>,
    pub representatives: Vec<usize>,
}

#[derive(Debug, Clone, Default)]
struct Cache {
    orders: OnceLock<Vec<u32>>,
    generators: OnceLock<Vec<usize>>,
    classes: OnceLock<ConjugacyClasses>,
}

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    identity: usize,
    inverse: Vec<u32>,
    labels: Option<Vec<String>>,
    cache: Cache,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Validates a square table and builds the group. Rows are indexed by
    /// the left factor.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self> {
        Self::from_table_with_cap(rows, DEFAULT_ORDER_CAP)
    }

    pub fn from_table_with_cap(rows: &[Vec<usize>], cap: usize) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::EmptyTable);
        }
        if order > cap {
            return Err(Error::OrderCapExceeded { cap });
        }
        let mut flat = Vec::with_capacity(order * order);
        for (row, entries) in rows.iter().enumerate() {
            if entries.len() != order {
                return Err(Error::NotSquare { row, len: entries.len(), expected: order });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= order {
                    return Err(Error::EntryOutOfRange { row, col, value });
                }
                flat.push(value as u32);
            }
        }
        Self::from_flat(order, flat, None)
    }

    /// Builds the table from a product closure over `0..order`.
    pub fn from_fn(order: usize, mut mul: impl FnMut(usize, usize) -> usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::EmptyTable);
        }
        if order > DEFAULT_ORDER_CAP {
            return Err(Error::OrderCapExceeded { cap: DEFAULT_ORDER_CAP });
        }
        let mut flat = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                let value = mul(a, b);
                if value >= order {
                    return Err(Error::EntryOutOfRange { row: a, col: b, value });
                }
                flat.push(value as u32);
            }
        }
        Self::from_flat(order, flat, None)
    }

    /// Full validation of a flat table: Latin property, identity, inverses
    /// and associativity.
    pub(crate) fn from_flat(order: usize, table: Vec<u32>, labels: Option<Vec<String>>) -> Result<Self> {
        debug_assert_eq!(table.len(), order * order);
        check_latin(order, &table)?;
        let identity = find_identity(order, &table).ok_or(Error::NoIdentity)?;
        let inverse = find_inverses(order, &table, identity)?;
        check_associative_light(order, &table, identity)?;
        Ok(Self::assemble(order, table, identity, inverse, labels))
    }

    /// Builds a group whose table is associative by construction (composition
    /// of permutations). Latin property, identity and inverses are still
    /// checked.
    pub(crate) fn from_flat_associative(order: usize, table: Vec<u32>, labels: Option<Vec<String>>) -> Result<Self> {
        check_latin(order, &table)?;
        let identity = find_identity(order, &table).ok_or(Error::NoIdentity)?;
        let inverse = find_inverses(order, &table, identity)?;
        Ok(Self::assemble(order, table, identity, inverse, labels))
    }

    fn assemble(
        order: usize,
        table: Vec<u32>,
        identity: usize,
        inverse: Vec<u32>,
        labels: Option<Vec<String>>,
    ) -> Self {
        FiniteGroup { order, table, identity, inverse, labels, cache: Cache::default() }
    }

    pub fn trivial() -> Self {
        Self::assemble(1, vec![0], 0, vec![0], None)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        if labels.len() == self.order {
            self.labels = Some(labels);
        }
        self
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `a^k` for a possibly negative exponent.
    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut exp = k.unsigned_abs();
        let mut acc = self.identity;
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            exp >>= 1;
        }
        acc
    }

    /// `g^{-1} x g`.
    #[inline]
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// `[a, b] = a^{-1} b^{-1} a b`.
    #[inline]
    pub fn comm(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    /// Left-normed iterated commutator `[[..[x1, x2], x3], .., xk]`.
    pub fn commutator(&self, elements: &[usize]) -> Result<usize> {
        if elements.len() < 2 {
            return Err(Error::ArityTooSmall(elements.len()));
        }
        for &x in elements {
            self.check_element(x)?;
        }
        Ok(elements[1..].iter().fold(elements[0], |acc, &x| self.comm(acc, x)))
    }

    pub fn check_element(&self, x: usize) -> Result<()> {
        if x < self.order {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { index: x, order: self.order })
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(labels) => labels[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|row| row.iter().map(|&v| v as usize).collect()).collect()
    }

    /// Least `k >= 1` with `x^k = 1`.
    pub fn element_order(&self, x: usize) -> u32 {
        self.element_orders()[x]
    }

    pub fn element_orders(&self) -> &[u32] {
        self.cache.orders.get_or_init(|| {
            (0..self.order)
                .map(|x| {
                    let mut k = 1;
                    let mut y = x;
                    while y != self.identity {
                        y = self.mul(y, x);
                        k += 1;
                    }
                    k
                })
                .collect()
        })
    }

    pub fn exponent(&self) -> u64 {
        self.element_orders().iter().fold(1u64, |acc, &o| num_integer::lcm(acc, o as u64))
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter().all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn commutes(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// A small generating set, chosen greedily: each step adds the element
    /// whose adjunction yields the largest subgroup.
    pub fn generators(&self) -> &[usize] {
        self.cache.generators.get_or_init(|| greedy_generators(self))
    }

    pub fn conjugacy_classes(&self) -> &ConjugacyClasses {
        self.cache.classes.get_or_init(|| {
            let gens = self.generators();
            let mut class_of = vec![u32::MAX; self.order];
            let mut sizes = Vec::new();
            let mut representatives = Vec::new();
            let mut stack = Vec::new();
            for x in 0..self.order {
                if class_of[x] != u32::MAX {
                    continue;
                }
                let id = sizes.len() as u32;
                class_of[x] = id;
                stack.push(x);
                let mut size = 0;
                while let Some(y) = stack.pop() {
                    size += 1;
                    for &g in gens {
                        let z = self.conjugate(y, g);
                        if class_of[z] == u32::MAX {
                            class_of[z] = id;
                            stack.push(z);
                        }
                    }
                }
                sizes.push(size);
                representatives.push(x);
            }
            ConjugacyClasses { class_of, sizes, representatives }
        })
    }

    pub fn class_size(&self, x: usize) -> usize {
        let classes = self.conjugacy_classes();
        classes.sizes[classes.class_of[x] as usize]
    }

    /// Direct product with pair `(i, j)` at index `i * |other| + j`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Result<FiniteGroup> {
        self.direct_product_with_cap(other, DEFAULT_ORDER_CAP)
    }

    pub fn direct_product_with_cap(&self, other: &FiniteGroup, cap: usize) -> Result<FiniteGroup> {
        let (m, k) = (self.order, other.order);
        let order = m.checked_mul(k).filter(|&o| o <= cap).ok_or(Error::OrderCapExceeded { cap })?;
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            let (a1, a2) = (a / k, a % k);
            for b in 0..order {
                let (b1, b2) = (b / k, b % k);
                table.push((self.mul(a1, b1) * k + other.mul(a2, b2)) as u32);
            }
        }
        let labels = (0..order).map(|x| format!("({},{})", self.label(x / k), other.label(x % k))).collect();
        Self::from_flat(order, table, Some(labels))
    }
}

fn check_latin(order: usize, table: &[u32]) -> Result<()> {
    let mut stamp = vec![usize::MAX; order];
    for row in 0..order {
        for col in 0..order {
            let v = table[row * order + col] as usize;
            if stamp[v] == row {
                return Err(Error::NotLatin { line: "row", index: row });
            }
            stamp[v] = row;
        }
    }
    stamp.fill(usize::MAX);
    for col in 0..order {
        for row in 0..order {
            let v = table[row * order + col] as usize;
            if stamp[v] == col {
                return Err(Error::NotLatin { line: "column", index: col });
            }
            stamp[v] = col;
        }
    }
    Ok(())
}

fn find_identity(order: usize, table: &[u32]) -> Option<usize> {
    (0..order).find(|&e| (0..order).all(|j| table[e * order + j] as usize == j && table[j * order + e] as usize == j))
}

fn find_inverses(order: usize, table: &[u32], identity: usize) -> Result<Vec<u32>> {
    let mut inverse = vec![0u32; order];
    for i in 0..order {
        let row = &table[i * order..(i + 1) * order];
        let j = row.iter().position(|&v| v as usize == identity).ok_or(Error::NoInverse { element: i })?;
        if table[j * order + i] as usize != identity {
            return Err(Error::NoInverse { element: i });
        }
        inverse[i] = j as u32;
    }
    Ok(inverse)
}

/// Right-multiplication closure of `seeds` inside a table with identity.
fn right_closure(order: usize, table: &[u32], identity: usize, seeds: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; order];
    seen[identity] = true;
    let mut queue = vec![identity];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for &s in seeds {
            let y = table[x * order + s] as usize;
            if !seen[y] {
                seen[y] = true;
                queue.push(y);
            }
        }
    }
    seen
}

/// Light's associativity test. The elements `a` with `(x a) y = x (a y)` for
/// all `x, y` form a subloop, so checking `a` over a generating set covers
/// every triple.
fn check_associative_light(order: usize, table: &[u32], identity: usize) -> Result<()> {
    let mut gens = Vec::new();
    let mut reached = right_closure(order, table, identity, &gens);
    while let Some(next) = reached.iter().position(|&r| !r) {
        gens.push(next);
        reached = right_closure(order, table, identity, &gens);
    }
    let at = |a: usize, b: usize| table[a * order + b] as usize;
    for &s in &gens {
        for x in 0..order {
            let xs = at(x, s);
            for y in 0..order {
                if at(xs, y) != at(x, at(s, y)) {
                    return Err(Error::NotAssociative { a: x, b: s, c: y });
                }
            }
        }
    }
    Ok(())
}

/// Exhaustive cubic associativity check, returning the first failing triple.
pub fn associativity_witness(g_order: usize, mul: impl Fn(usize, usize) -> usize) -> Option<(usize, usize, usize)> {
    for a in 0..g_order {
        for b in 0..g_order {
            let ab = mul(a, b);
            for c in 0..g_order {
                if mul(ab, c) != mul(a, mul(b, c)) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

fn greedy_generators(g: &FiniteGroup) -> Vec<usize> {
    let n = g.order();
    let orders = g.element_orders();
    let mut gens: Vec<usize> = Vec::new();
    let mut current = right_closure(n, &g.table, g.identity, &gens);
    let mut current_size = 1;
    let mut candidates: Vec<usize> = (0..n).collect();
    // Larger element orders first; ties by index.
    candidates.sort_by(|&a, &b| orders[b].cmp(&orders[a]).then(a.cmp(&b)));
    while current_size < n {
        let mut dominated = current.clone();
        let mut best: Option<(usize, Vec<bool>, usize)> = None;
        for &x in &candidates {
            if dominated[x] {
                continue;
            }
            gens.push(x);
            let closure = right_closure(n, &g.table, g.identity, &gens);
            gens.pop();
            let size = closure.iter().filter(|&&b| b).count();
            for (d, &c) in dominated.iter_mut().zip(&closure) {
                *d |= c;
            }
            if best.as_ref().is_none_or(|(_, _, s)| size > *s) {
                let full = size == n;
                best = Some((x, closure, size));
                if full {
                    break;
                }
            }
        }
        let (x, closure, size) = best.expect("a proper subgroup leaves a candidate");
        gens.push(x);
        current = closure;
        current_size = size;
    }
    gens
}
