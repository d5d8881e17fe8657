use nilcx::catalog::{basis_change_check, e_to_v, g_ab_complex, g_ab_real, j_ab, m_alphabeta, omega_to_e, FamilyPoint};
use nilcx::cxstruct::{
    complexify, is_integrable, j_series_classify, j_series_invariants, nijenhuis, realify, snn_p412_build,
    snn_structure_assert, JVerdict, SnnCoefficients,
};
use nilcx::liealg::{ascending_series, descending_series};
use nilcx::scalars::{rat, Scalar};

fn samples() -> Vec<FamilyPoint> {
    [(0, 1), (1, 1), (2, 1), (5, 3)].into_iter().map(|(p, q)| FamilyPoint::rational(rat(p, q), rat(1, 1))).collect()
}

#[test]
fn complex_equations_realify_to_real_equations() {
    let p = FamilyPoint::symbolic();
    let real = realify(&g_ab_complex(&p).unwrap(), &omega_to_e()).unwrap();
    assert_eq!(real.differential(), g_ab_real(&p).unwrap().differential());
}

#[test]
fn real_equations_complexify_to_complex_equations() {
    let p = FamilyPoint::symbolic();
    let cx = complexify(&g_ab_real(&p).unwrap(), &omega_to_e()).unwrap();
    assert_eq!(cx.differential(), g_ab_complex(&p).unwrap().differential());
}

#[test]
fn normalizing_change_gives_m_alphabeta() {
    let report = basis_change_check(&FamilyPoint::symbolic()).unwrap();
    assert!(report.holds(), "mismatch on {:?}", report.mismatches);
    assert!(basis_change_check(&FamilyPoint::ints(0, 0)).unwrap().holds());
}

#[test]
fn v4_component_of_change() {
    let p = FamilyPoint::symbolic();
    let c = e_to_v(&p);
    let two_over_s3 =
        Scalar::from_tower(nilcx::scalars::Tower::from_int(2) * Scalar::sqrt3().constant().unwrap().inverse().unwrap());
    assert_eq!(c[(3, 3)], two_over_s3);
    let m = m_alphabeta(&p).unwrap();
    let v13 = nilcx::exterior::Form::from_indices(m.frame(), &[0, 2], Scalar::one());
    assert_eq!(m.differential().image(3), &v13);
}

#[test]
fn structure_from_coframe_matches_listed_images() {
    assert_eq!(&j_ab(), &omega_to_e().complex_structure());
}

#[test]
fn structure_is_integrable_symbolically() {
    let g = g_ab_real(&FamilyPoint::symbolic()).unwrap();
    let n = nijenhuis(&g, &j_ab()).unwrap();
    assert!(n.values().all(|v| v.iter().all(Scalar::is_zero)));
    assert!(is_integrable(&g, &j_ab()).unwrap());
}

#[test]
fn series_and_type_at_samples() {
    for p in samples() {
        let g = g_ab_real(&p).unwrap();
        let asc = ascending_series(&g).unwrap();
        assert_eq!(asc.dims, vec![1, 3, 5, 8]);
        assert_eq!(asc.step, Some(4));
        let desc = descending_series(&g).unwrap();
        assert_eq!(desc.dims, vec![8, 5, 3, 1]);
        let js = j_series_classify(&g, &j_ab()).unwrap();
        assert_eq!(js.verdict, JVerdict::StronglyNonNilpotent);
        assert!(j_series_invariants(&g, &j_ab(), &js).unwrap());
        assert!(snn_structure_assert(8, &asc.dims, js.verdict).unwrap().pass());
    }
}

#[test]
fn generic_equations_specialize_to_family() {
    let i = Scalar::i();
    let half = Scalar::frac(1, 2);
    let c = SnnCoefficients {
        s: Scalar::one(),
        coeff_b: Scalar::one(),
        coeff_n: Scalar::one(),
        coeff_c: &i * &half,
        coeff_d: &(&i * &half) * &Scalar::from_int(3),
        coeff_f: Scalar::a(),
        coeff_g: -&(&i * &half),
        coeff_h: -&i,
        coeff_m: &i * &Scalar::b(),
        ..Default::default()
    };
    let (g, residuals) = snn_p412_build(&c).unwrap();
    assert!(residuals.iter().all(|(_, f)| f.is_zero()));
    assert_eq!(g.differential(), g_ab_complex(&FamilyPoint::symbolic()).unwrap().differential());
}

#[test]
fn unrotated_coframe_has_same_structure_but_other_equations() {
    use nilcx::catalog::omega_to_e_unrotated;
    let r = omega_to_e_unrotated();
    assert_eq!(&r.complex_structure(), &j_ab());
    let p = FamilyPoint::symbolic();
    let cx = complexify(&g_ab_real(&p).unwrap(), &r).unwrap();
    assert_ne!(cx.differential(), g_ab_complex(&p).unwrap().differential());
}

#[test]
fn generic_equations_can_fail_jacobi() {
    let zero = snn_p412_build(&SnnCoefficients::default()).unwrap();
    assert!(zero.1.iter().all(|(_, f)| f.is_zero()));
    let bh = SnnCoefficients { coeff_b: Scalar::one(), coeff_h: Scalar::one(), ..Default::default() };
    assert!(snn_p412_build(&bh).unwrap().1.iter().all(|(_, f)| f.is_zero()));
    let ah = SnnCoefficients { coeff_a: Scalar::one(), coeff_h: Scalar::one(), ..Default::default() };
    let (g, residuals) = snn_p412_build(&ah).unwrap();
    let fr = g.frame();
    let expected = &nilcx::exterior::Form::from_indices(fr, &[0, 3, 4], Scalar::one())
        + &nilcx::exterior::Form::from_indices(fr, &[0, 4, 7], Scalar::one());
    assert_eq!(residuals[2].1, expected);
}
