use nilcx::catalog::{g_ab_complex, metric_f, metric_f0, metric_fa, FamilyPoint};
use nilcx::dsl::parse_form;
use nilcx::exterior::Form;
use nilcx::hermitian::{condition_check, gauduchon_constant, positivity_report, HermitianForm, Positivity, Witness};
use nilcx::liealg::Presentation;
use nilcx::scalars::{rat, Assignment, Param, Scalar};

const DDBAR_F: &str = "-4i w1^w2^cw1^cw2 - (1 - 6i) w1^w2^cw1^cw3 + a w1^w2^cw1^cw4 - (1 - i) w1^w2^cw2^cw3 \
    + (1 + 6i) w1^w3^cw1^cw2 - i w1^w3^cw1^cw3 - w1^w3^cw2^cw3 - a w1^w4^cw1^cw2 - 12i w1^w4^cw1^cw4 \
    + w1^w4^cw3^cw4 + (1 + i) w2^w3^cw1^cw2 + w2^w3^cw1^cw3 - 2i w2^w4^cw2^cw4 - w3^w4^cw1^cw4";

const TWO_DEL_F0: &str = "4 w1^w2^cw3 - 4 w1^w3^cw2 + (i - 1) w1^w4^cw2 + i w1^w4^cw3 - 4 w2^w3^cw1 \
    - (i + 1) w2^w4^cw1 - w2^w4^cw2 - 4 w2^w4^cw3 - i w3^w4^cw1 - 4 w3^w4^cw2";

const TWO_DEL_FA: &str = "i w1^w2^cw2 + 2 w1^w2^cw3 - a i w1^w3^cw1 - w1^w3^cw2 - (2 - i (a - 1)) w1^w4^cw2 \
    + 2i w1^w4^cw3 - w1^w4^cw4 - (2 + i (a - 1)) w2^w4^cw1 - 2 w2^w4^cw2 - w2^w4^cw3 - 2i w3^w4^cw1 - w3^w4^cw2";

fn x_a() -> Presentation {
    g_ab_complex(&FamilyPoint::new(Scalar::a(), Scalar::one()).unwrap()).unwrap()
}

fn display(g: &Presentation, text: &str) -> Form {
    let f = parse_form(g.frame(), &[Param::A], text).unwrap();
    assert_eq!(f.len(), text.matches('w').count() / f.degree());
    f
}

fn del(g: &Presentation, f: &HermitianForm) -> Form {
    g.differential().del(&f.form().reframe(g.frame())).unwrap()
}

#[test]
fn first_gauduchon_metric() {
    let g = x_a();
    let f = metric_f();
    let rep = positivity_report(&f);
    let expected: Vec<Scalar> =
        [(101, 4), (101, 4), (1, 4), (1, 8)].iter().map(|(p, q)| Scalar::frac(*p, *q)).collect();
    assert_eq!(rep.minors, expected);
    assert_eq!(rep.verdict, Positivity::PositiveDefinite);

    let d = g.differential();
    let ddbar = d.del(&d.delbar(&f.form().reframe(g.frame())).unwrap()).unwrap();
    assert_eq!(ddbar, display(&g, DDBAR_F));

    for k in 1..=3 {
        assert!(gauduchon_constant(&g, &f, k).unwrap().is_zero(), "k = {k}");
        assert!(condition_check(&g, &f, &format!("gauduchon:{k}")).unwrap().holds);
    }
    let skt = condition_check(&g, &f, "skt").unwrap();
    assert!(!skt.holds);
    assert_eq!(skt.witness, Witness::Form { label: "ddbar(F)".into(), form: ddbar });
}

#[test]
fn balanced_metric_at_zero() {
    let g = x_a().specialize(&Assignment::new().with(Param::A, rat(0, 1)));
    let f = metric_f0();
    assert_eq!(positivity_report(&f).verdict, Positivity::PositiveDefinite);
    let df = del(&g, &f);
    assert_eq!(df.scale(&Scalar::from_int(2)), display(&g, TWO_DEL_F0));
    let ff = f.form().reframe(g.frame());
    assert!(df.wedge(&ff.wedge_pow(2)).unwrap().is_zero());
    assert!(condition_check(&g, &f, "balanced").unwrap().holds);
}

#[test]
fn balanced_metrics_for_positive_parameter() {
    let g = x_a();
    let f = metric_fa(&Scalar::a());
    let rep = positivity_report(&f);
    assert_eq!(rep.verdict, Positivity::PositiveForAllPositiveParameters);
    let a = Scalar::a();
    let aa1 = &a * &(&a + &Scalar::one());
    let expected = [
        aa1.scale(&nilcx::scalars::Tower::frac(1, 2)),
        aa1.scale(&nilcx::scalars::Tower::frac(1, 4)),
        a.scale(&nilcx::scalars::Tower::frac(1, 8)),
        a.scale(&nilcx::scalars::Tower::frac(1, 16)),
    ];
    assert_eq!(rep.minors, expected);

    let df = del(&g, &f);
    assert_eq!(df.scale(&Scalar::from_int(2)), display(&g, TWO_DEL_FA));
    let ff = f.form().reframe(g.frame());
    assert!(df.wedge(&ff.wedge_pow(2)).unwrap().is_zero());
    assert!(condition_check(&g, &f, "balanced").unwrap().holds);
    let sg = condition_check(&g, &f, "strongly_gauduchon").unwrap();
    assert!(sg.holds);
    assert_eq!(sg.witness, Witness::Form { label: "gamma".into(), form: Form::zero(g.frame(), 6) });
}

#[test]
fn strongly_gauduchon_at_zero() {
    let g = x_a().specialize(&Assignment::new().with(Param::A, rat(0, 1)));
    let sg = condition_check(&g, &metric_f0(), "strongly_gauduchon").unwrap();
    assert!(sg.holds);
    assert_eq!(sg.witness, Witness::Form { label: "gamma".into(), form: Form::zero(g.frame(), 6) });
}

#[test]
fn verdicts_survive_rescaling() {
    let g = x_a();
    for t in [rat(2, 1), rat(7, 3), rat(1, 5)] {
        let t = Scalar::from_rational(t);
        let f = metric_f().scale(&t).unwrap();
        assert!(!condition_check(&g, &f, "skt").unwrap().holds);
        assert!(condition_check(&g, &f, "gauduchon:1").unwrap().holds);
        let fa = metric_fa(&Scalar::a()).scale(&t).unwrap();
        assert!(condition_check(&g, &fa, "balanced").unwrap().holds);
    }
}
