use qtrunc_core::catalog::{build_catalog, run_suite, Suite, CATALOG_TYPES, DEFAULT_SEED};

#[test]
fn catalog_is_deterministic() {
    let a = build_catalog(DEFAULT_SEED);
    let b = build_catalog(DEFAULT_SEED);
    let names = |c: &qtrunc_core::catalog::Catalog| -> Vec<String> {
        c.types.iter().flat_map(|t| t.lweights.iter().map(|w| w.to_string())).collect()
    };
    assert_eq!(names(&a), names(&b));
    assert_ne!(names(&a), names(&build_catalog(DEFAULT_SEED + 1)));
    let labels: Vec<String> = a.types.iter().map(|t| t.cartan.label()).collect();
    assert_eq!(labels, CATALOG_TYPES);
}

#[test]
fn catalog_covers_single_factors_and_products() {
    let c = build_catalog(DEFAULT_SEED);
    for t in &c.types {
        let r = t.cartan.rank();
        let singles = t.lweights.iter().filter(|w| w.factors().len() == 1).count();
        assert!(singles >= 2 * 7 * r);
        assert!(t.lweights.iter().any(|w| w.factors().iter().any(|f| f.exp < 0) && w.factors().iter().any(|f| f.exp > 0)));
        assert!(t.polynomial.iter().all(|w| w.is_polynomial()));
        assert!(!t.pairs.is_empty());
    }
}

#[test]
fn suites_pass_at_low_order() {
    let c = build_catalog(DEFAULT_SEED);
    for s in [Suite::Gklo, Suite::AtRatio, Suite::Lemma, Suite::Polynomiality, Suite::Sl2] {
        let order = if s == Suite::Polynomiality { 14 } else { 6 };
        let rep = run_suite(s, &c, order, 2).unwrap();
        assert!(rep.pass, "{}: {:?}", s.name(), rep.checks.iter().find(|c| !c.pass));
        assert!(rep.total > 0);
    }
}

#[test]
fn suite_names_parse() {
    for n in Suite::NAMES {
        assert_eq!(n.parse::<Suite>().unwrap().name(), n);
    }
    assert!("bogus".parse::<Suite>().is_err());
}
