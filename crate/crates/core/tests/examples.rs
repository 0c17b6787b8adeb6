//! Golden values on the worked examples.

use frlp_core::covering::instance_covers;
use frlp_core::feasibility::{SearchOptions, ServiceChecker};
use frlp_core::generators::{gen_example, gen_prop5a, gen_prop5b, prop5b_family};
use frlp_core::oracle::{brute_force_solve, exhaustive_served};
use frlp_core::solver::{reevaluate, separate, solve, Limits, Objective, SolveRequest};
use frlp_core::{FrlpError, NodeSet, Variant};

fn set(n: usize, one_based: &[usize]) -> NodeSet {
    NodeSet::from_nodes(n, one_based.iter().map(|j| j - 1))
}

#[test]
fn fig7_oracle_min_stations() {
    let inst = gen_example("fig7").unwrap();
    let cyc = brute_force_solve(&inst, Variant::Cyclic, Objective::MinStations { coverage: 1.0 }).unwrap();
    assert_eq!(cyc.objective, 1.0);
    assert!(cyc.optimal_sets.contains(&set(4, &[3])));
    assert!(cyc.optimal_sets.contains(&set(4, &[4])));

    // (1,2) round trip has gap 2d/3, so a station at 1 or 2 also serves the original demand
    let orig = brute_force_solve(&inst, Variant::Original, Objective::MinStations { coverage: 1.0 }).unwrap();
    assert_eq!(orig.objective, 1.0);
    assert_eq!(orig.optimal_sets, vec![set(4, &[1]), set(4, &[2]), set(4, &[3])]);
}

#[test]
fn oracle_without_demands() {
    let mut inst = gen_example("fig7").unwrap();
    inst.demands.clear();
    let r = brute_force_solve(&inst, Variant::Cyclic, Objective::MinStations { coverage: 1.0 }).unwrap();
    assert_eq!(r.objective, 0.0);
    assert_eq!(r.optimal_sets[0], NodeSet::empty(4));
}

#[test]
fn example3_by_enumeration() {
    let inst = gen_example("fig7").unwrap();
    let s4 = set(4, &[4]);
    assert!(!exhaustive_served(&inst, 0, &s4, Variant::Original).unwrap());
    assert!(exhaustive_served(&inst, 0, &s4, Variant::Cyclic).unwrap());
    assert!(!exhaustive_served(&inst, 0, &NodeSet::empty(4), Variant::Cyclic).unwrap());
}

#[test]
fn fig8_with_dominance_still_finds_the_cycle() {
    let inst = gen_example("fig8").unwrap();
    let checker = ServiceChecker::new(&inst, Variant::Cyclic).unwrap();
    let s = checker
        .cycle_search(0, &set(3, &[3]), SearchOptions { dominance: true, trace: true })
        .unwrap();
    assert_eq!(s.witness.unwrap().visits, vec![0, 1, 2, 0]);
    assert_eq!(s.sink_label.unwrap().tuple(), (1, 1, 3.0, 1.0, 2.0));
}

#[test]
fn separation_on_fig7() {
    let inst = gen_example("fig7").unwrap();
    let checker = ServiceChecker::new(&inst, Variant::Original).unwrap();
    let cuts = separate(&checker, &set(4, &[4]), &[0]);
    assert_eq!(cuts.len(), 1);
    let (q, cut) = &cuts[0];
    assert_eq!(*q, 0);
    // opening every node of the cut must serve the demand
    assert!(!cut.contains(3));
    assert!(checker.is_served(0, &cut.union(&set(4, &[4]))));
}

#[test]
fn cyclic_reevaluation_of_original_plan() {
    let inst = gen_example("fig7").unwrap();
    let plan = solve(&SolveRequest {
        instance: &inst,
        variant: Variant::Original,
        objective: Objective::MaxCover { budget: 1 },
        limits: Limits::default(),
        seed: 0,
    })
    .unwrap();
    assert_eq!(plan.objective, 1.0);
    assert_eq!(reevaluate(&inst, &plan.stations, Variant::Cyclic).unwrap(), 1.0);
}

#[test]
fn prop5a_families() {
    let inst = gen_prop5a(3, 1.0, 10.0).unwrap();
    assert_eq!(inst.node_count(), 6);
    assert_eq!(inst.network.edges().len(), 7);
    let covers = instance_covers(&inst, Variant::Original).unwrap();
    assert_eq!(covers[0].routes.len(), 3);
    let one = gen_prop5a(1, 1.0, 10.0).unwrap();
    assert_eq!(one.node_count(), 2);
}

#[test]
fn prop5b_servedness_rule_n2() {
    let inst = gen_prop5b(2, 0.1, 1.0, 1.0).unwrap();
    let checker = ServiceChecker::new(&inst, Variant::Original).unwrap();
    for mask in 0..(1u64 << 4) {
        let mut s = set(8, &[1, 2, 7, 8]);
        for k in 0..4 {
            if mask >> k & 1 == 1 {
                s.insert(2 + k);
            }
        }
        assert_eq!(checker.is_served(0, &s), mask.count_ones() >= 3, "mask {mask:b}");
    }
    assert_eq!(prop5b_family(2).len(), 4 + 6);
}

#[test]
fn prop5b_rejects_large_delta() {
    assert!(matches!(gen_prop5b(3, 0.2, 1.0, 1.0), Err(FrlpError::InvalidArgument(_))));
}
