use binvar_core::hilbert::{numerator, poincare_table, to_usize};
use binvar_core::reference;
use binvar_core::search::{parse_selection, preset, target_dim, SearchConfig, SearchState, Status};

#[test]
fn degree_table_through_fourteen_at_two_primes() {
    for p in [109, 197] {
        let mut s = SearchState::new(SearchConfig::for_degree(p, 7, 14)).unwrap();
        s.run_through(14, |_| {}).unwrap();
        for r in s.reports() {
            assert_eq!(r.status, Status::Complete, "p={p} degree {}", r.degree);
            assert_eq!(r.rank, r.target);
            assert_eq!(
                r.dm,
                reference::basic_count(r.degree),
                "p={p} degree {}",
                r.degree
            );
        }
    }
}

#[test]
fn odd_degrees_below_nine_have_no_generators() {
    let mut s = SearchState::new(SearchConfig::for_degree(109, 3, 8)).unwrap();
    s.run_through(8, |_| {}).unwrap();
    for m in [3, 5, 7] {
        assert_eq!(s.reports().iter().find(|r| r.degree == m).unwrap().dm, 0);
    }
}

#[test]
fn graded_ideal_presets_at_desk_scale() {
    let mut s = SearchState::new(SearchConfig::for_degree(197, 1, 24)).unwrap();
    s.run_through(20, |_| {}).unwrap();
    for name in ["all", "j10"] {
        let (items, m, expected) = preset(name).unwrap();
        let r = s.ideal_dimension(&items, m).unwrap();
        assert_eq!(r.rank, expected, "{name}");
        assert!(r.is_full());
    }
}

/// The system of parameters alone generates an ideal whose degree-m piece
/// misses exactly a_m dimensions, a_m the numerator coefficient.
#[test]
fn hsop_ideal_control() {
    let table = poincare_table(10, 58);
    let a = numerator(&table, &reference::HSOP_DEGREES).unwrap();
    let mut s = SearchState::new(SearchConfig::for_degree(197, 2, 24)).unwrap();
    s.run_through(20, |_| {}).unwrap();
    let items = parse_selection("4,A6,C6,j8,j9,j10,j14+A14").unwrap();
    for m in [18, 20, 24] {
        let r = s.ideal_dimension(&items, m).unwrap();
        assert_eq!(
            r.rank,
            target_dim(m) - to_usize(&a.coeffs[m as usize]),
            "degree {m}"
        );
    }
}

#[test]
fn ideal_dimension_needs_the_search() {
    let mut s = SearchState::new(SearchConfig::for_degree(197, 1, 24)).unwrap();
    s.run_through(10, |_| {}).unwrap();
    let (items, m, _) = preset("all").unwrap();
    assert!(s.ideal_dimension(&items, m).is_err());
}
