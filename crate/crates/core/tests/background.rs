use dsusy::background::{Background, LemmaWeight};
use dsusy::clifford::{build_rep_d3, CliffordRep};
use dsusy::exactla::{ExactMatrix, Scalar};

fn lambda_gamma(rep: &CliffordRep, lambda: i64) -> Vec<ExactMatrix> {
    rep.gammas
        .iter()
        .map(|g| g.scale(&Scalar::from(lambda)))
        .collect()
}

fn skew_structure(rep: &CliffordRep, s: &Scalar) -> Vec<Scalar> {
    // c_{ab}^c = s ε_{abd} g^{dc}
    let eps = |a: usize, b: usize, c: usize| -> i64 {
        match (a, b, c) {
            (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
            (1, 0, 2) | (0, 2, 1) | (2, 1, 0) => -1,
            _ => 0,
        }
    };
    let mut out = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                out.push(s * &(Scalar::from(eps(a, b, c)) * rep.metric_sign(c)));
            }
        }
    }
    out
}

#[test]
fn flat_lambda_gamma_audit() {
    let rep = build_rep_d3();
    let bg = Background::flat_type(rep.clone(), lambda_gamma(&rep, 1)).unwrap();
    assert!(bg.torsion_routes_agree());
    for a in 0..3 {
        for b in 0..3 {
            assert_eq!(bg.torsion(a, b), rep.gamma2(a, b).scale(&Scalar::from(4)));
        }
    }
    assert!(bg.is_admissible());
    let report = bg.bianchi_check();
    assert!(report.torsion && report.ad_curvature && report.curvature);
    assert_eq!(report.levi_civita_curvature, Some(Some(LemmaWeight::Unit)));
    assert!(bg.parallel_spinors().is_empty());
    assert_eq!(bg.killing_fields().dim(), 6);
}

#[test]
fn homogeneous_flat_connection() {
    let rep = build_rep_d3();
    let s = Scalar::ratio(3, 2);
    let zero = vec![ExactMatrix::zeros(2, 2); 3];
    let bg =
        Background::homogeneous_with_spin_connection(rep.clone(), skew_structure(&rep, &s), zero)
            .unwrap();
    assert_eq!(bg.parallel_spinors().len(), 2);
    assert!(bg.torsion_routes_agree());
    assert!(bg.is_admissible());
    let report = bg.bianchi_check();
    assert!(report.torsion && report.ad_curvature && report.curvature);
    assert_eq!(report.levi_civita_curvature, Some(Some(LemmaWeight::Unit)));
    // left translations only: the frame is parallel, so no rotations survive
    assert_eq!(bg.killing_fields().dim(), 3);
}
