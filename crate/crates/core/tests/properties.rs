//! Randomized checks over catalog groups.

use std::sync::OnceLock;

use proptest::prelude::*;
use splitaut::automorphism::AutSearchLimits;
use splitaut::catalog::{enumerate_catalog, export_group_string, import_group, Catalog, CatalogFilter, GroupSpec};
use splitaut::constructions::{check_coset_density, check_large_intersection};
use splitaut::splitting::twisted_solution_set;
use splitaut::survey::{reproduce_density, scan_catalog, SurveyConfig};
use splitaut::{Density, FiniteGroup};

fn catalog() -> &'static Catalog {
    static C: OnceLock<Catalog> = OnceLock::new();
    C.get_or_init(|| enumerate_catalog(48, &CatalogFilter::default()).unwrap())
}

fn group(i: usize) -> &'static FiniteGroup {
    let c = catalog();
    &c.entries[i % c.len()].group
}

/// Product of `x`, `α(x)`, ..., `α^{n-1}(x)`.
fn norm(g: &FiniteGroup, images: &[usize], x: usize, n: u32) -> usize {
    let (mut acc, mut y) = (g.identity(), x);
    for _ in 0..n {
        acc = g.mul(acc, y);
        y = images[y];
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn random_triples_associate(i in 0usize..1000, a in 0usize..48, b in 0usize..48, c in 0usize..48) {
        let g = group(i);
        let (a, b, c) = (a % g.order(), b % g.order(), c % g.order());
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
    }

    #[test]
    fn twisted_density_matches_direct_count(i in 0usize..1000, n in 1u32..7, pick in 0usize..10_000) {
        let g = group(i);
        let set = g.survey_automorphisms(n, &AutSearchLimits::default());
        let alpha = &set.automorphisms[pick % set.len()];
        let images = alpha.images();
        let x = twisted_solution_set(g, alpha, n).unwrap();
        let direct: Vec<usize> = (0..g.order()).filter(|&y| norm(g, &images, y, n) == g.identity()).collect();
        prop_assert_eq!(&x.members, &direct);
        prop_assert_eq!(x.density, Density::new(direct.len() as i64, g.order() as i64));
    }

    #[test]
    fn export_import_round_trip(i in 0usize..1000) {
        let g = group(i);
        let back = import_group(&export_group_string(g, "g")).unwrap();
        prop_assert_eq!(back.order(), g.order());
        for x in 0..g.order() {
            for y in 0..g.order() {
                prop_assert_eq!(back.mul(x, y), g.mul(x, y));
            }
        }
    }

    #[test]
    fn spec_text_and_json_round_trip(i in 0usize..1000) {
        let spec = &catalog().entries[i % catalog().len()].spec;
        let text: GroupSpec = spec.to_string().parse().unwrap();
        prop_assert_eq!(&text, spec);
        let json: GroupSpec = serde_json::from_str(&serde_json::to_string(spec).unwrap()).unwrap();
        prop_assert_eq!(&json, spec);
    }

    #[test]
    fn large_intersection_bound_holds(i in 0usize..1000, mask in any::<u64>(), shifts in prop::collection::vec(0usize..48, 1..4)) {
        let g = group(i);
        let a: Vec<usize> = (0..g.order()).filter(|&x| mask >> (x % 64) & 1 == 1 || x == 0).collect();
        let shifts: Vec<usize> = shifts.iter().map(|s| s % g.order()).collect();
        let report = check_large_intersection(g, &a, &shifts).unwrap();
        prop_assert!(report.ok);
    }

    #[test]
    fn coset_density_inequalities_hold(i in 0usize..1000, pick in 0usize..1000, mask in any::<u64>()) {
        let g = group(i);
        let normals = g.normal_subgroups();
        let normal = &normals[pick % normals.len()];
        let a: Vec<usize> = (0..g.order()).filter(|&x| mask >> (x % 64) & 1 == 1 || x == 0).collect();
        let report = check_coset_density(g, &a, normal).unwrap();
        prop_assert!(report.ine1_ok && report.ine2_ok);
    }
}

#[test]
fn scan_rows_reproduce() {
    let small = enumerate_catalog(24, &CatalogFilter::default()).unwrap();
    for n in [2, 3, 4] {
        let scan = scan_catalog(&small, n, &SurveyConfig::with_workers(2));
        for g in &scan.groups {
            for row in &g.rows {
                assert_eq!(reproduce_density(&g.spec, &row.representative, n).unwrap(), row.density, "{}", g.name);
            }
            assert_eq!(g.rows.iter().map(|r| r.automorphisms).sum::<usize>(), g.automorphisms);
        }
    }
}
