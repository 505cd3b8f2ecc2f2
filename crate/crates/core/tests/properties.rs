use cayley_core::classify::{is_isospectral, triple_report};
use cayley_core::oracle::{
    adjacency_spectrum, build_concrete_ring, character_spectrum, role_spectrum, sweep::check_symmetric_pair,
    sweep::random_pairs, DEFAULT_BOUND,
};
use cayley_core::search::{build_bundle, enumerate_specs, table1_rows, Factor, Recipe, SearchConfig};
use cayley_core::{closed_form_spectrum, Execution, RingSpec, Role};
use proptest::prelude::*;

fn small_specs() -> Vec<RingSpec> {
    enumerate_specs(&SearchConfig::new(64)).unwrap()
}

fn spec_strategy() -> impl Strategy<Value = RingSpec> {
    prop::sample::select(small_specs())
}

fn role_strategy() -> impl Strategy<Value = Role> {
    prop::sample::select(vec![Role::Gr, Role::GrPlus, Role::GrBar])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_agrees_with_closed_forms(s in spec_strategy(), role in role_strategy()) {
        let ring = build_concrete_ring(&s, DEFAULT_BOUND).unwrap();
        let closed = closed_form_spectrum(&s, role).unwrap();
        prop_assert_eq!(&adjacency_spectrum(&ring, role).unwrap(), &closed);
        prop_assert_eq!(&character_spectrum(&ring, role).unwrap(), &closed);
    }

    #[test]
    fn non_unit_sum_graph_matches_complement_energy(s in spec_strategy()) {
        let minus = role_spectrum(&s, Role::GrMinus, DEFAULT_BOUND).unwrap();
        let ring = build_concrete_ring(&s, DEFAULT_BOUND).unwrap();
        prop_assert_eq!(&adjacency_spectrum(&ring, Role::GrMinus).unwrap(), &minus);
        let bar = closed_form_spectrum(&s, Role::GrBar).unwrap();
        prop_assert_eq!(minus.energy().unwrap(), bar.energy().unwrap());
    }

    #[test]
    fn sum_and_difference_sets_are_equienergetic(seed in any::<u64>()) {
        for (n, s) in random_pairs(seed, 4, 3..=40) {
            let c = check_symmetric_pair(n, &s).unwrap();
            prop_assert!((c.difference_energy - c.sum_energy).abs() <= 1e-6 * n as f64);
            prop_assert!(c.inverse_gap <= 1e-9);
            prop_assert_eq!(c.difference_connected_nonbipartite, c.sum_connected_nonbipartite);
        }
    }

    #[test]
    fn kronecker_products_multiply(a in spec_strategy(), b in spec_strategy(), ra in role_strategy(), rb in role_strategy()) {
        let (x, y) = (closed_form_spectrum(&a, ra).unwrap(), closed_form_spectrum(&b, rb).unwrap());
        let k = x.kron(&y).unwrap();
        prop_assert_eq!(k.n(), x.n() * y.n());
        prop_assert_eq!(k.degree(), x.degree() * y.degree());
        prop_assert_eq!(k.energy().unwrap(), x.energy().unwrap() * y.energy().unwrap());
        prop_assert_eq!(k.trace().unwrap(), x.trace().unwrap() * y.trace().unwrap());
    }

    #[test]
    fn products_of_difference_graphs_are_difference_graphs(a in spec_strategy(), b in spec_strategy(), plus in any::<bool>()) {
        let role = if plus { Role::GrPlus } else { Role::Gr };
        let recipe = Recipe::Custom(vec![
            vec![Factor { spec: a.clone(), role }, Factor { spec: b.clone(), role }],
            vec![Factor { spec: a.product(&b).unwrap(), role }],
        ]);
        let bundle = build_bundle(&recipe).unwrap();
        prop_assert_eq!(bundle.members.len(), 1);
        prop_assert_eq!(bundle.duplicates_removed, 1);
        prop_assert_eq!(&bundle.members[0].spectrum, &closed_form_spectrum(&a.product(&b).unwrap(), role).unwrap());
    }

    #[test]
    fn isospectral_is_symmetric(a in spec_strategy(), b in spec_strategy(), r in role_strategy()) {
        let (x, y) = (closed_form_spectrum(&a, r).unwrap(), closed_form_spectrum(&b, r).unwrap());
        prop_assert_eq!(is_isospectral(&x, &y).value, is_isospectral(&y, &x).value);
        prop_assert_eq!(is_isospectral(&x, &y).value, x == y);
    }
}

#[test]
fn parallel_and_sequential_agree() {
    let specs = enumerate_specs(&SearchConfig::new(120)).unwrap();
    let run = |e: Execution| e.try_map(&specs, triple_report).unwrap();
    let (a, b) = (run(Execution::Sequential), run(Execution::Parallel));
    assert_eq!(a, b);
    assert_eq!(table1_rows(64, Execution::Sequential).unwrap(), table1_rows(64, Execution::Parallel).unwrap());
}

#[test]
fn sixteen_bundle_has_loops_only_at_the_end() {
    let b = build_bundle(&Recipe::Sixteen).unwrap();
    assert_eq!((b.n, b.members.len()), (180, 16));
    assert!(b.all_equienergetic);
    let loops: Vec<usize> = (0..16).filter(|&i| b.members[i].trace > 0).collect();
    assert_eq!(loops, [14, 15]);
}

#[test]
fn tensor_four_tuple_requires_a_loopless_connected_nonbipartite_graph() {
    let b = build_bundle(&"tensor:gr(F4xF5)".parse().unwrap()).unwrap();
    assert_eq!(b.members.len(), 4);
    assert!(b.all_equienergetic && b.isospectral_pairs.is_empty());
    assert!(build_bundle(&"tensor:grplus(F5)".parse().unwrap()).is_err());
    assert!(build_bundle(&"tensor:gr(F2xF3)".parse().unwrap()).is_err());
}
