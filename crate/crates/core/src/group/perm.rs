//! Permutation groups, closed up to a full multiplication table.
//!
//! Permutations act on the right: `i^(pq) = (i^p)^q`, so the product
//! `p * q` applies `p` first.

use std::collections::HashMap;

use super::table::{FiniteGroup, DEFAULT_ORDER_CAP};
use crate::error::{Error, Result};

/// Image-array permutation of `0..degree`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree as u32).collect())
    }

    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection of 0..{n}")));
            }
        }
        Ok(Permutation(images.iter().map(|&i| i as u32).collect()))
    }

    /// Builds a permutation from disjoint cycles written with 0-based points.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                let q = cycle[(k + 1) % cycle.len()];
                if p >= degree || q >= degree {
                    return Err(Error::InvalidPermutation(format!("point out of range in {cycle:?}")));
                }
                images[p] = q;
            }
        }
        Self::from_images(&images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.0[point] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&i| i as usize).collect()
    }

    /// `self * other`: apply `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    /// Cycle notation with 0-based points, `()` for the identity.
    pub fn cycle_string(&self) -> String {
        let mut seen = vec![false; self.degree()];
        let mut out = String::new();
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.apply(start);
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.apply(p);
            }
            let body: Vec<String> = cycle.iter().map(|p| p.to_string()).collect();
            out.push('(');
            out.push_str(&body.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl FiniteGroup {
    /// Breadth-first closure of the generators. All generators must act on
    /// the same number of points; an empty list gives the trivial group.
    pub fn from_permutations(generators: &[Vec<usize>]) -> Result<FiniteGroup> {
        Self::from_permutations_with_cap(generators, DEFAULT_ORDER_CAP)
    }

    pub fn from_permutations_with_cap(generators: &[Vec<usize>], cap: usize) -> Result<FiniteGroup> {
        let gens = generators.iter().map(|g| Permutation::from_images(g)).collect::<Result<Vec<_>>>()?;
        let degree = gens.first().map_or(0, Permutation::degree);
        if let Some(bad) = gens.iter().find(|g| g.degree() != degree) {
            return Err(Error::InvalidPermutation(format!("generators act on {degree} and {} points", bad.degree())));
        }
        let (elements, table) = close(&gens, degree, cap)?;
        let labels = elements.iter().map(Permutation::cycle_string).collect();
        FiniteGroup::from_flat_associative(elements.len(), table, Some(labels))
    }
}

/// Returns the elements (identity first) and the flat product table.
fn close(gens: &[Permutation], degree: usize, cap: usize) -> Result<(Vec<Permutation>, Vec<u32>)> {
    let mut elements = vec![Permutation::identity(degree)];
    let mut index: HashMap<Permutation, usize> = HashMap::from([(elements[0].clone(), 0)]);
    // right[x][s] = index of elements[x] * gens[s]; parent[x] = (y, s) with x = y * gens[s].
    let mut right: Vec<Vec<u32>> = Vec::new();
    let mut parent: Vec<(usize, usize)> = vec![(0, usize::MAX)];
    let mut head = 0;
    while head < elements.len() {
        let mut row = Vec::with_capacity(gens.len());
        for (s, gen) in gens.iter().enumerate() {
            let product = elements[head].then(gen);
            let idx = match index.get(&product) {
                Some(&i) => i,
                None => {
                    if elements.len() == cap {
                        return Err(Error::OrderCapExceeded { cap });
                    }
                    let i = elements.len();
                    index.insert(product.clone(), i);
                    elements.push(product);
                    parent.push((head, s));
                    i
                }
            };
            row.push(idx as u32);
        }
        right.push(row);
        head += 1;
    }
    // Elements are discovered in BFS order, so each parent precedes its child
    // and row a can be filled left to right: a * x = (a * y) * s.
    let n = elements.len();
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        table[a * n] = a as u32;
        for x in 1..n {
            let (y, s) = parent[x];
            let ay = table[a * n + y] as usize;
            table[a * n + x] = right[ay][s];
        }
    }
    Ok((elements, table))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_three_cycle() {
        let g = FiniteGroup::from_permutations(&[vec![1, 2, 0]]).unwrap();
        assert_eq!(g.order(), 3);
    }

    #[test]
    fn empty_generating_set() {
        let g = FiniteGroup::from_permutations(&[]).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn mismatched_degrees_rejected() {
        let err = FiniteGroup::from_permutations(&[vec![1, 0], vec![1, 2, 0]]).unwrap_err();
        assert!(matches!(err, Error::InvalidPermutation(_)));
        assert!(FiniteGroup::from_permutations(&[vec![0, 0]]).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let gens = vec![vec![1, 0, 2, 3, 4], vec![1, 2, 3, 4, 0]];
        assert_eq!(
            FiniteGroup::from_permutations_with_cap(&gens, 100).unwrap_err(),
            Error::OrderCapExceeded { cap: 100 }
        );
        assert_eq!(FiniteGroup::from_permutations(&gens).unwrap().order(), 120);
    }

    #[test]
    fn table_matches_composition() {
        let gens = vec![vec![1, 0, 2, 3], vec![1, 2, 3, 0]];
        let g = FiniteGroup::from_permutations(&gens).unwrap();
        let gen_perms: Vec<Permutation> = gens.iter().map(|g| Permutation::from_images(g).unwrap()).collect();
        let (elements, _) = close(&gen_perms, 4, 100).unwrap();
        for a in 0..g.order() {
            for b in 0..g.order() {
                assert_eq!(elements[g.mul(a, b)], elements[a].then(&elements[b]));
            }
        }
        assert_eq!(super::super::table::associativity_witness(g.order(), |a, b| g.mul(a, b)), None);
    }

    #[test]
    fn cycle_strings() {
        let p = Permutation::from_cycles(5, &[&[0, 1], &[2, 3, 4]]).unwrap();
        assert_eq!(p.cycle_string(), "(0 1)(2 3 4)");
        assert_eq!(Permutation::identity(3).cycle_string(), "()");
    }
}
