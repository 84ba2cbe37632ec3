use dsusy::clifford::{
    build_rep_d10, build_rep_d3, build_rep_d3_adapted, build_rep_d7, CliffordRep,
};
use dsusy::exactla::Scalar;
use dsusy::g2::{G2Structure, Tensor4};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Independent oracle: (Cγ_I)ᵀ = Δ₀ (Δ₀Δ₁)^k (−1)^{k(k−1)/2} Cγ_I.
fn delta_oracle(d0: i8, d1: i8, dim: usize) -> Vec<i8> {
    (0..=dim)
        .map(|k| {
            let rev = if (k * k.saturating_sub(1) / 2) % 2 == 0 {
                1
            } else {
                -1
            };
            let p = if k % 2 == 0 { 1 } else { d0 * d1 };
            d0 * p * rev
        })
        .collect()
}

fn random_spinor(rng: &mut ChaCha8Rng, n: usize) -> Vec<Scalar> {
    (0..n)
        .map(|_| {
            Scalar::complex(
                (rng.gen_range(-4..5), 1),
                (rng.gen_range(-4..5), rng.gen_range(1..4)),
            )
        })
        .collect()
}

#[test]
fn delta_tables() {
    assert_eq!(build_rep_d3().delta_table().unwrap(), vec![-1, 1, 1, -1]);
    assert_eq!(
        build_rep_d3_adapted().delta_table().unwrap(),
        vec![-1, 1, 1, -1]
    );
    assert_eq!(
        build_rep_d7().delta_table().unwrap(),
        vec![1, -1, -1, 1, 1, -1, -1, 1]
    );
    let d10 = build_rep_d10();
    let table = d10.delta_table().unwrap();
    assert_eq!(table[0], -1);
    assert_eq!(table[1], 1);
    assert_eq!(table, delta_oracle(-1, 1, 10));
}

#[test]
fn d10_structure() {
    let rep = build_rep_d10();
    assert_eq!(rep.spinor_dim(), 32);
    assert_eq!(rep.metric, vec![1, 1, 1, 1, 1, 1, 1, -1, 1, 1]);
    rep.verify_clifford().unwrap();
    assert!(rep.fierz_basis_complete());
}

#[test]
fn d3_gamma_c_adjoint_is_minus_gamma() {
    let rep = build_rep_d3();
    for g in &rep.gammas {
        assert_eq!(rep.c_adjoint(g), -g);
    }
}

fn check_fierz(rep: &CliffordRep, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rep.spinor_dim();
    for _ in 0..3 {
        let (eta, xi, psi) = (
            random_spinor(&mut rng, n),
            random_spinor(&mut rng, n),
            random_spinor(&mut rng, n),
        );
        let c = rep.c_form(&eta, &psi);
        let lhs: Vec<Scalar> = xi.iter().map(|x| x * &c).collect();
        assert_eq!(lhs, rep.fierz_rhs(&eta, &xi, &psi));
    }
}

#[test]
fn fierz_rearrangement() {
    check_fierz(&build_rep_d3(), 1);
    check_fierz(&build_rep_d7(), 2);
    assert!(build_rep_d3().fierz_basis_complete());
    assert!(build_rep_d7().fierz_basis_complete());
}

#[test]
fn ten_dimensional_bracket_of_horizontal_spinors() {
    // X^M = C(η_α, Γ^M η_β), η_α = e_{(+, 8, α)}.
    let rep = build_rep_d10();
    let eta = |a: usize| rep.basis_spinor(14 + a);
    let x = |a: usize, b: usize| -> Vec<Scalar> {
        (0..10)
            .map(|m| rep.c_form(&eta(a), &rep.gamma_upper(m).apply(&eta(b))))
            .collect()
    };
    let i = Scalar::i();
    let e = |k: usize| {
        let mut v = vec![Scalar::zero(); 10];
        v[7 + k] = Scalar::one();
        v
    };
    let add = |a: Vec<Scalar>, b: Vec<Scalar>, s: i64| -> Vec<Scalar> {
        a.iter()
            .zip(&b)
            .map(|(p, q)| (p + &(q * &Scalar::from(s))) * &i)
            .collect()
    };
    assert_eq!(x(0, 0), add(e(0), e(2), -1));
    assert_eq!(x(1, 1), add(e(0), e(2), 1));
    assert_eq!(x(0, 1), e(1).iter().map(|v| v * &i).collect::<Vec<_>>());
    assert_eq!(x(1, 0), x(0, 1));
}

fn random_tensor(seed: u64) -> Tensor4 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<i64> = (0..2401).map(|_| rng.gen_range(-3..4)).collect();
    Tensor4::from_fn(|a, b, c, d| Scalar::from(raw[((a * 7 + b) * 7 + c) * 7 + d]))
}

#[test]
fn projectors() {
    let report = G2Structure::standard().verify_projectors();
    assert!(report.plus_idempotent && report.minus_idempotent && report.complementary);
    assert_eq!((report.rank_plus, report.rank_minus), (14, 7));
    assert!(report.gamma_decomposition_matches);
}

#[test]
fn curvature_projection_and_gamma_contraction() {
    let g2 = G2Structure::standard();
    let rep = build_rep_d7();
    let r = g2.g2_project_curvature(&random_tensor(7));
    assert!(!r.is_zero());
    assert!(g2.second_pair_in_g2(&r));
    assert!(g2.first_pair_in_g2(&r));
    assert_eq!(g2.g2_project_curvature(&r), r);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let xi = random_spinor(&mut rng, 8);
    let mut printed_differs = false;
    for mu in 0..7 {
        for nu in 0..7 {
            let sides = g2.rgamma_sides(&rep, &r, &xi, mu, nu);
            assert_eq!(sides.lhs, sides.rhs);
            printed_differs |= sides.lhs != sides.rhs_as_printed;
        }
    }
    assert!(printed_differs);
}

#[test]
fn first_pair_projection_agrees_when_second_pair_is_g2() {
    let g2 = G2Structure::standard();
    // project only the second pair, then compare the two routes on the first pair
    let t = g2
        .project_first_pair(&random_tensor(11).pair_swap(), true)
        .pair_swap();
    assert!(g2.second_pair_in_g2(&t));
    assert!(!g2.first_pair_in_g2(&t));
    assert_eq!(g2.project_first_pair(&t, true), g2.g2_project_curvature(&t));
}
