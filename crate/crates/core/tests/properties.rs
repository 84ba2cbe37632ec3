use dsusy::background::{
    difference_from_shape, shape_admissible, Background, ShapeKind, ShapeTerm,
};
use dsusy::clifford::{build_rep_d3, build_rep_d7, multi_indices};
use dsusy::exactla::Scalar;
use dsusy::grading::filtration_identity_failures;
use dsusy::scenarios::{builtin, random_admissible_d3};
use dsusy::suites::jacobi_residuals;
use dsusy::superfields::{Engine, SuperForm};
use dsusy::susy::{compare_oo_bracket, e_map_unchecked, killing_bracket, strip_meta};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4)
        .prop_map(|(a, b, c, d)| Scalar::complex((a, b), (c, d)))
}

fn form(s: usize) -> impl Strategy<Value = SuperForm> {
    prop::collection::vec((0u64..(1 << s), scalar()), 0..5).prop_map(|terms| {
        let mut f = SuperForm::zero();
        for (w, c) in terms {
            f.add_term(w, c);
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_text_round_trips(x in scalar()) {
        let back: Scalar = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn scalar_field_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if a != Scalar::from(0) {
            prop_assert_eq!(&a * &a.inv(), Scalar::from(1));
        }
    }

    #[test]
    fn wedge_is_associative_and_graded_commutative(a in form(4), b in form(4), c in form(4)) {
        prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
        let (ae, ao) = (a.parity_part(false), a.parity_part(true));
        let (be, bo) = (b.parity_part(false), b.parity_part(true));
        prop_assert_eq!(ae.wedge(&b), b.wedge(&ae));
        prop_assert_eq!(ao.wedge(&bo), bo.wedge(&ao).neg());
        prop_assert_eq!(ao.wedge(&be), be.wedge(&ao));
    }

    #[test]
    fn graded_jacobi_on_seeded_triples(seed in 0u64..1000) {
        for name in ["flat-d3", "flat-d3-killing"] {
            let sc = builtin(name, 0).unwrap();
            let engine = Engine::new(&sc.background);
            let res = jacobi_residuals(&engine, seed, 3).unwrap();
            prop_assert!(res.is_empty(), "{}: {:?}", name, res);
        }
    }

    #[test]
    fn odd_bracket_closed_form_on_draws(seed in 0u64..500) {
        let draw = random_admissible_d3(seed);
        let bg = &draw.background;
        for phi in &bg.parallel_spinors() {
            for psi in &bg.parallel_spinors() {
                let c = compare_oo_bracket(bg, phi, psi).unwrap();
                prop_assert!(c.admissible && c.agrees, "seed {} {:?}", seed, draw.shape);
            }
        }
    }

    #[test]
    fn shape_rule_matches_direct_admissibility(d7 in any::<bool>(), coeffs in prop::collection::vec(1i64..=3, 35)) {
        let rep = if d7 { build_rep_d7() } else { build_rep_d3() };
        let n = rep.dim();
        for degree in 0..=n {
            for kind in [ShapeKind::Wedge, ShapeKind::Contraction] {
                let comps: Vec<(Vec<usize>, Scalar)> = multi_indices(n, degree).into_iter().zip(&coeffs).map(|(idx, c)| (idx, Scalar::from(*c))).collect();
                let term = ShapeTerm::new(kind, degree, comps);
                let diff = difference_from_shape(&rep, std::slice::from_ref(&term));
                if diff.iter().all(|m| m.is_zero()) {
                    continue;
                }
                let bg = Background::flat_type(rep.clone(), diff).unwrap();
                prop_assert_eq!(bg.is_admissible(), shape_admissible(&rep, &[term]).unwrap(), "n={} degree {} {:?}", n, degree, kind);
            }
        }
    }
}

#[test]
fn e_map_is_a_homomorphism() {
    for name in ["flat-d3", "flat-d3-killing"] {
        let sc = builtin(name, 0).unwrap();
        let bg = &sc.background;
        let engine = Engine::new(bg);
        let k0 = bg.killing_fields();
        for x in &k0.basis {
            for y in &k0.basis {
                let lhs = engine
                    .bracket(&e_map_unchecked(bg, x), &e_map_unchecked(bg, y))
                    .unwrap();
                let rhs = e_map_unchecked(bg, &killing_bracket(bg, x, y));
                assert_eq!(strip_meta(&lhs), strip_meta(&rhs), "{name}");
            }
        }
    }
}

#[test]
fn filtration_identities_hold_exhaustively() {
    for s in [2, 4, 8] {
        assert!(filtration_identity_failures(s, 4).is_empty(), "dim S = {s}");
    }
}

#[test]
fn non_admissible_backgrounds_are_rejected() {
    // 𝒜 = X ∧ (vector) has the wrong Δ sign in three dimensions
    let rep = build_rep_d3();
    let term = ShapeTerm::new(ShapeKind::Wedge, 1, vec![(vec![0], Scalar::from(1))]);
    assert!(!shape_admissible(&rep, std::slice::from_ref(&term)).unwrap());
    let bg = Background::flat_type(rep.clone(), difference_from_shape(&rep, &[term])).unwrap();
    assert!(!bg.is_admissible());
    let sym: bool = (0..3).any(|mu| (0..3).any(|nu| !bg.hat_d_gamma_symmetric(mu, nu).is_zero()));
    assert!(sym);
    // the closed form only claims agreement on admissible pairs
    let e0 = vec![Scalar::from(1), Scalar::from(0)];
    let c = compare_oo_bracket(&bg, &e0, &e0).unwrap();
    assert!(!c.admissible);
}
