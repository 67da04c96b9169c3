//! Lower central and derived series, nilpotency class, solvability and the
//! 2-Engel condition.

use serde::{Deserialize, Serialize};

use super::subgroup::Subgroup;
use super::table::FiniteGroup;

/// Nilpotency class, or the marker for groups whose lower central series
/// stalls above the trivial subgroup. Not an error: surveys handle both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NilpotencyClass {
    Class(u32),
    NotNilpotent,
}

impl NilpotencyClass {
    pub fn at_most(self, bound: u32) -> bool {
        matches!(self, NilpotencyClass::Class(c) if c <= bound)
    }
}

impl FiniteGroup {
    /// `gamma_1 = G`, `gamma_{k+1} = [gamma_k, G]`, up to stabilization. The
    /// class of the trivial group is 0.
    pub fn lower_central_series(&self) -> (Vec<Subgroup>, NilpotencyClass) {
        let whole = Subgroup::whole(self);
        let mut series = vec![whole.clone()];
        loop {
            let last = series.last().expect("series starts with G");
            if last.is_trivial() {
                let class = series.len() as u32 - 1;
                return (series, NilpotencyClass::Class(class));
            }
            let next = self.commutator_subgroup(last, &whole).with_normal_flag(true);
            if next.order() == last.order() {
                return (series, NilpotencyClass::NotNilpotent);
            }
            series.push(next);
        }
    }

    pub fn nilpotency_class(&self) -> NilpotencyClass {
        self.lower_central_series().1
    }

    /// `G^(0) = G`, `G^(k+1) = [G^(k), G^(k)]`, up to stabilization.
    pub fn derived_series(&self) -> Vec<Subgroup> {
        let mut series = vec![Subgroup::whole(self)];
        loop {
            let last = series.last().expect("series starts with G");
            if last.is_trivial() {
                return series;
            }
            let next = self.commutator_subgroup(last, last).with_normal_flag(true);
            if next.order() == last.order() {
                return series;
            }
            series.push(next);
        }
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let whole = Subgroup::whole(self);
        self.commutator_subgroup(&whole, &whole).with_normal_flag(true)
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().is_some_and(Subgroup::is_trivial)
    }

    /// `[x, y, y] = 1` for every pair.
    pub fn is_two_engel(&self) -> bool {
        self.two_engel_witness().is_none()
    }

    pub fn two_engel_witness(&self) -> Option<(usize, usize)> {
        let n = self.order();
        let e = self.identity();
        (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).find(|&(x, y)| self.comm(self.comm(x, y), y) != e)
    }
}
