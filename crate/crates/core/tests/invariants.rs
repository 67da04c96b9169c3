//! Exhaustive invariant sweeps over catalog groups.

use std::collections::HashSet;
use std::sync::OnceLock;

use splitaut::automorphism::induced_quotient_automorphism;
use splitaut::catalog::{enumerate_catalog, enumerate_catalog_with, Catalog, CatalogFilter, GroupSpec};
use splitaut::constructions::semidirect_with_cyclic;
use splitaut::group::associativity_witness;
use splitaut::splitting::{hughes_thompson_subgroup, power_solution_set, twisted_solution_set};
use splitaut::survey::{survey_c_n, ClassRestriction, SurveyConfig};
use splitaut::{Automorphism, Density, FiniteGroup, Subgroup};

fn catalog(max: usize) -> &'static Catalog {
    static C128: OnceLock<Catalog> = OnceLock::new();
    let full = C128.get_or_init(|| enumerate_catalog(128, &CatalogFilter::default()).unwrap());
    assert!(max <= 128);
    full
}

fn groups_to(max: usize) -> impl Iterator<Item = (&'static str, &'static FiniteGroup)> {
    catalog(max).iter().filter(move |e| e.group.order() <= max).map(|e| (e.name.as_str(), &e.group))
}

#[test]
fn tables_are_associative() {
    for (name, g) in groups_to(64) {
        assert_eq!(associativity_witness(g.order(), |a, b| g.mul(a, b)), None, "{name}");
    }
}

#[test]
fn element_orders_divide_group_order() {
    for (name, g) in groups_to(128) {
        for x in 0..g.order() {
            assert_eq!(g.order() % g.element_order(x) as usize, 0, "{name} element {x}");
        }
    }
}

#[test]
fn two_engel_groups_have_class_at_most_three_and_the_identity() {
    let mut count = 0;
    for (name, g) in groups_to(128).filter(|(_, g)| g.is_two_engel()) {
        count += 1;
        assert!(g.nilpotency_class().at_most(3), "{name}");
        let n = g.order();
        for a in 0..n {
            for b in 0..n {
                let ab = g.comm(a, b);
                for c in 0..n {
                    assert_eq!(g.comm(ab, c), g.inv(g.comm(g.comm(a, c), b)), "{name} ({a},{b},{c})");
                }
            }
        }
    }
    assert!(count > 50);
}

#[test]
fn weight_three_commutators_are_central_in_class_three() {
    for (name, g) in groups_to(128).filter(|(_, g)| g.nilpotency_class().at_most(3)) {
        let center = g.center();
        let n = g.order();
        for a in 0..n {
            for b in 0..n {
                let ab = g.comm(a, b);
                for c in 0..n {
                    assert!(center.contains(g.comm(ab, c)), "{name} ({a},{b},{c})");
                }
            }
        }
    }
}

fn assert_projection_hom(name: &str, g: &FiniteGroup, normal: &Subgroup) {
    let q = g.quotient(normal).unwrap();
    for x in 0..g.order() {
        for y in 0..g.order() {
            assert_eq!(q.project(g.mul(x, y)), q.group.mul(q.project(x), q.project(y)), "{name}");
        }
    }
}

#[test]
fn projections_are_homomorphisms() {
    for (name, g) in groups_to(32) {
        for normal in g.normal_subgroups() {
            assert_projection_hom(name, g, &normal);
        }
    }
    for (name, g) in groups_to(128).filter(|(_, g)| g.order() > 32) {
        assert_projection_hom(name, g, &g.center());
        assert_projection_hom(name, g, &g.derived_subgroup());
    }
}

#[test]
fn product_densities_multiply() {
    let small: Vec<_> = groups_to(12).filter(|(_, g)| g.order() > 1).collect();
    for (i, (_, g)) in small.iter().enumerate() {
        for (_, h) in &small[i..] {
            let gh = g.direct_product(h).unwrap();
            for n in 2..=4 {
                let lhs = power_solution_set(&gh, n).density;
                let rhs = power_solution_set(g, n).density * power_solution_set(h, n).density;
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn twisted_sets_contain_identity_and_are_invariant() {
    for (name, g) in groups_to(32) {
        for n in 2..=4 {
            let set = g.automorphisms_of_order_dividing(n).unwrap();
            for alpha in set.iter() {
                let x = twisted_solution_set(g, alpha, n).unwrap();
                assert!(x.contains(g.identity()), "{name}");
                assert!(x.members.iter().all(|&m| x.contains(alpha.apply(m))), "{name}");
            }
        }
    }
}

#[test]
fn identity_twist_is_the_power_set() {
    for (name, g) in groups_to(64) {
        for n in 1..=8 {
            let a = twisted_solution_set(g, &Automorphism::identity(g), n).unwrap();
            let direct: Vec<usize> = (0..g.order()).filter(|&x| g.pow(x, n as i64) == g.identity()).collect();
            assert_eq!(a.members, direct, "{name} n={n}");
        }
    }
}

#[test]
fn hughes_thompson_normal_and_containing_complement() {
    for (name, g) in groups_to(64) {
        for n in 2..=8 {
            let h = hughes_thompson_subgroup(g, n);
            assert!(g.is_normal(&h), "{name}");
            let x = power_solution_set(g, n);
            assert!((0..g.order()).all(|y| h.contains(y) || x.contains(y)), "{name} n={n}");
        }
    }
}

#[test]
fn semidirect_products_realize_the_action() {
    for (name, g) in groups_to(12) {
        for n in 2..=4 {
            for alpha in g.automorphisms_of_order_dividing(n).unwrap().iter() {
                let p = semidirect_with_cyclic(g, alpha, n).unwrap();
                assert!(p.verify_structure(g), "{name} n={n}");
            }
        }
    }
}

#[test]
fn automorphism_groups_are_closed() {
    for (name, g) in groups_to(24) {
        let aut = g.automorphism_group().unwrap();
        let members: HashSet<Automorphism> = aut.iter().cloned().collect();
        for a in aut.iter() {
            assert!(members.contains(&a.inverse()), "{name}");
            for b in aut.iter() {
                assert!(members.contains(&a.compose(b)), "{name}");
            }
        }
        let factorial: u128 = (1..=g.order() as u128).product();
        assert_eq!(factorial % aut.len() as u128, 0, "{name}");
    }
}

#[test]
fn order_dividing_n_means_n_fold_identity() {
    for (name, g) in groups_to(24) {
        for n in 1..=6 {
            for alpha in g.automorphisms_of_order_dividing(n).unwrap().iter() {
                assert!(alpha.pow(n).is_identity(), "{name} n={n}");
            }
        }
    }
}

#[test]
fn conjugations_compose() {
    for (name, g) in groups_to(24) {
        for a in 0..g.order() {
            for b in 0..g.order() {
                let lhs = g.conjugation_automorphism(a).compose(&g.conjugation_automorphism(b));
                assert_eq!(lhs, g.conjugation_automorphism(g.mul(a, b)), "{name}");
            }
        }
    }
}

#[test]
fn induced_automorphisms_commute_with_projection() {
    for (name, g) in groups_to(24) {
        let auts = g.automorphisms_of_order_dividing(2).unwrap();
        for normal in g.normal_subgroups() {
            let q = g.quotient(&normal).unwrap();
            for alpha in auts.iter().filter(|a| a.stabilizes(&normal).is_none()) {
                let bar = induced_quotient_automorphism(g, &normal, &q, alpha).unwrap();
                for x in 0..g.order() {
                    assert_eq!(q.project(alpha.apply(x)), bar.apply(q.project(x)), "{name}");
                }
            }
        }
    }
}

#[test]
fn catalog_regression_values() {
    let c16 = enumerate_catalog(16, &CatalogFilter::default()).unwrap();
    assert_eq!(c16.len(), 39);
    let fingerprints: HashSet<_> = c16.iter().map(|e| e.fingerprint.clone()).collect();
    assert_eq!(fingerprints.len(), 39);
    assert_eq!(c16.hash(), enumerate_catalog(16, &CatalogFilter::default()).unwrap().hash());
}

#[test]
fn frontiers_grow_with_the_catalog() {
    let config = SurveyConfig::with_workers(2);
    for n in [2, 3] {
        let mut last: Option<Density> = None;
        for max in [4, 8, 16, 32] {
            let c = enumerate_catalog(max, &CatalogFilter::default()).unwrap();
            let best = survey_c_n(&c, n, ClassRestriction::All, &config).frontier.best_density;
            assert!(best >= last, "n={n} max={max}");
            last = best;
        }
    }
    // Joining an extra group into a small catalog.
    let base = enumerate_catalog(6, &CatalogFilter::default()).unwrap();
    let extra = [GroupSpec::Dihedral { m: 4 }];
    let joined = enumerate_catalog_with(8, &CatalogFilter::default(), &extra).unwrap();
    let a = survey_c_n(&base, 2, ClassRestriction::All, &config).frontier.best_density;
    let b = survey_c_n(&joined, 2, ClassRestriction::All, &config).frontier.best_density;
    assert!(b >= a);
    assert_eq!(b, Some(Density::new(3, 4)));
}
