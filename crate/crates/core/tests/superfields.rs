use dsusy::background::Background;
use dsusy::clifford::{build_rep_d3, CliffordRep};
use dsusy::exactla::{ExactMatrix, Scalar};
use dsusy::superfields::{Derivation, Engine, Monomial, PolySection, Slot, SuperForm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_form(rng: &mut ChaCha8Rng, s: usize) -> SuperForm {
    let mut f = SuperForm::zero();
    for w in 0..(1u64 << s) {
        if rng.gen_bool(0.5) {
            f.add_term(w, Scalar::ratio(rng.gen_range(-3..4), rng.gen_range(1..3)));
        }
    }
    f
}

fn random_derivation(rng: &mut ChaCha8Rng, n: usize, s: usize) -> Derivation {
    let mut d = Derivation::zero();
    let slots: Vec<Slot> = (0..n)
        .map(Slot::Vector)
        .chain((0..s).map(Slot::Spinor))
        .collect();
    for slot in slots {
        let mut c = PolySection::constant(random_form(rng, s));
        let mu = rng.gen_range(0..n);
        c.add_assign(&PolySection::term(Monomial::var(mu), random_form(rng, s)));
        d.add_term(rng.gen_range(0..2), slot, c);
    }
    d
}

fn random_matrices(rng: &mut ChaCha8Rng, rep: &CliffordRep) -> Vec<ExactMatrix> {
    let s = rep.spinor_dim();
    (0..rep.dim())
        .map(|_| {
            let v: Vec<Scalar> = (0..s * s)
                .map(|_| Scalar::complex((rng.gen_range(-2..3), 1), (rng.gen_range(-2..3), 2)))
                .collect();
            ExactMatrix::reshape(v, s, s).unwrap()
        })
        .collect()
}

#[test]
fn structural_matches_operator_backend() {
    let rep = build_rep_d3();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..4 {
        let bg = Background::flat_type(rep.clone(), random_matrices(&mut rng, &rep)).unwrap();
        let engine = Engine::new(&bg);
        let x = random_derivation(&mut rng, 3, 2);
        let y = random_derivation(&mut rng, 3, 2);
        let structural = engine.bracket(&x, &y).unwrap();
        let operator = engine.bracket_operator(&x, &y, 2, 2).unwrap();
        assert_eq!(structural, operator);
    }
}
