use nilcx::catalog::{g_ab_real, FamilyPoint};
use nilcx::cohomology::{fingerprint, symplectic_obstruction, Cohomology, SymplecticVerdict};
use nilcx::dsl::parse_form;
use nilcx::exterior::Form;
use nilcx::liealg::Presentation;
use nilcx::scalars::{rat, Assignment, Param};

const H1: [&str; 3] = ["e1", "e2", "e3"];
const H2: [&str; 4] = ["e1^e2", "e1^e4", "e2^e5", "e3^e4"];
const H3: [&str; 7] = [
    "e1^e4^e7",
    "e2^e5^e7 - 2 e3^e4^e6",
    "3 e1^e4^e6 - e2^e5^e6 + 2 e3^e5^e6",
    "e1^e5^e6 + e2^e4^e6 - 2 e3^e4^e6",
    "3 e1^e5^e7 + 3 e2^e4^e7 + 2 e2^e5^e6 + 2 e3^e5^e6",
    "2 e1^e2^e6 + 3 e1^e2^e8 + 4 e2^e3^e7 - 2 e2^e5^e6",
    "2a e2^e3^e7 - e3^e4^e6 - e3^e5^e7",
];

fn samples() -> Vec<(nilcx::scalars::Rational, Presentation)> {
    [(0, 1), (1, 1), (2, 1), (5, 3)]
        .into_iter()
        .map(|(p, q)| (rat(p, q), g_ab_real(&FamilyPoint::rational(rat(p, q), rat(1, 1))).unwrap()))
        .collect()
}

fn forms(g: &Presentation, a: &nilcx::scalars::Rational, texts: &[&str]) -> Vec<Form> {
    let asg = Assignment::new().with(Param::A, a.clone());
    texts.iter().map(|t| parse_form(g.frame(), &[Param::A], t).unwrap().specialize(&asg)).collect()
}

#[test]
fn betti_numbers_and_duality() {
    for (_, g) in samples() {
        let fp = fingerprint(&g).unwrap();
        assert_eq!(fp.betti, vec![1, 3, 4, 7, 10, 7, 4, 3, 1]);
        assert_eq!(fp.euler_characteristic(), 0);
        assert!((0..=8).all(|k| fp.betti[k] == fp.betti[8 - k]));
    }
}

#[test]
fn listed_generators_are_closed_and_independent() {
    for (a, g) in samples() {
        let h = Cohomology::new(&g).unwrap();
        for (texts, dim) in [(&H1[..], 3), (&H2[..], 4), (&H3[..], 6)] {
            let fs = forms(&g, &a, texts);
            assert!(fs.iter().all(|f| h.is_closed(f).unwrap()), "a = {a}");
            assert_eq!(h.class_span_dim(&fs).unwrap(), dim, "a = {a}, degree {}", fs[0].degree());
        }
    }
}

#[test]
fn listed_degree_three_classes_satisfy_one_relation() {
    for (a, g) in samples() {
        let h = Cohomology::new(&g).unwrap();
        let fs = forms(&g, &a, &H3);
        let rel = [(0, 3), (1, 1), (3, -1), (6, 2)]
            .iter()
            .fold(Form::zero(g.frame(), 3), |acc, (i, c)| &acc + &fs[*i].scale(&nilcx::scalars::Scalar::from_int(*c)));
        assert!(h.reduce(&rel).unwrap().is_zero(), "a = {a}");
        let without_last = &fs[..6];
        assert_eq!(h.class_span_dim(without_last).unwrap(), 6);
        assert_eq!(h.representatives(3).dim, 7);
    }
}

#[test]
fn no_symplectic_class() {
    for (_, g) in samples() {
        let rep = symplectic_obstruction(&g).unwrap();
        assert_eq!(rep.verdict, SymplecticVerdict::NoSymplecticStructure);
        assert_eq!(rep.vanishing_power, Some(2));
        assert_eq!(rep.checked_power, 3);
        assert_eq!(rep.monomials_checked, 20);
    }
}

#[test]
fn torus_has_symplectic_witness() {
    let g = Presentation::abelian(&nilcx::exterior::Frame::real(8));
    let rep = symplectic_obstruction(&g).unwrap();
    assert_eq!(rep.verdict, SymplecticVerdict::Inconclusive);
    let w = rep.witness.unwrap();
    assert!(!w.wedge_pow(4).is_zero());
    assert_eq!(rep.top_power.unwrap(), w.wedge_pow(4));
}
