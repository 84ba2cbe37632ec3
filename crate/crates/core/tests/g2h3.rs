use dsusy::exactla::Scalar;
use dsusy::scenarios::builtin;
use dsusy::suites::{example_g2h3, susy_audit, SuiteOptions};
use dsusy::susy::g2h3::{
    example_g2h3_checks, horizontal_prefactor, vertical_prefactor, G2H3Params,
};

#[test]
fn reports_pass_for_all_parameter_points() {
    for params in [
        G2H3Params::sl2(),
        G2H3Params::abelian(),
        G2H3Params::vertical_only(),
    ] {
        let r = example_g2h3_checks(&params).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.k1_positive_dim, 2);
        assert_eq!(r.vertical_prefactor, vertical_prefactor());
        assert_eq!(r.horizontal_prefactor, horizontal_prefactor());
        let bbb = r.bbb.expect("curvature present");
        assert_eq!(bbb.display_factor, Some(Scalar::ratio(1, 2)));
        assert_eq!(bbb.literal_factor, None);
    }
}

#[test]
fn suites_on_the_example() {
    let sc = builtin("g2h3-abelian", 0).unwrap();
    let r = example_g2h3(&sc);
    assert!(r.passed, "{:?}", r.failures().collect::<Vec<_>>());
    let r = susy_audit(&sc, &SuiteOptions::default());
    assert!(r.passed, "{:?}", r.failures().collect::<Vec<_>>());
}
