//! Randomized property checks shared by the property tests and the acceptance run.

#![allow(dead_code)]

use nilcx::catalog::{g_ab_complex, g_ab_real, metric_f, metric_fa, FamilyPoint};
use nilcx::cohomology::Cohomology;
use nilcx::dsl::{parse, Document, MetricSpec};
use nilcx::exterior::{blades_of_degree, Differential, Form, Frame, FrameRef};
use nilcx::hermitian::{condition_check, positivity_report};
use nilcx::liealg::Presentation;
use nilcx::scalars::{rat, Assignment, Param, Rational, Scalar, Tower};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use std::collections::BTreeMap;

pub const CASES: u32 = 128;

pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=9, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

fn sparse_rational() -> impl Strategy<Value = Rational> {
    prop_oneof![2 => Just(rat(0, 1)), 3 => small_rational()]
}

pub fn tower() -> impl Strategy<Value = Tower> {
    [sparse_rational(), sparse_rational(), sparse_rational(), sparse_rational()]
        .prop_map(|[a, b, c, d]| Tower::new(a, b, c, d))
}

/// Polynomials in the declared parameters.
pub fn scalar(params: Vec<Param>) -> impl Strategy<Value = Scalar> {
    let has_a = params.contains(&Param::A);
    let has_b = params.contains(&Param::B);
    prop::collection::vec((tower(), 0u32..=2, 0u32..=2), 0..=3).prop_map(move |terms| {
        terms.into_iter().fold(Scalar::zero(), |acc, (t, i, j)| {
            let mut m = Scalar::from_tower(t);
            if has_a {
                m = &m * &Scalar::a().pow(i);
            }
            if has_b {
                m = &m * &Scalar::b().pow(j);
            }
            &acc + &m
        })
    })
}

pub fn real_scalar() -> impl Strategy<Value = Scalar> {
    (sparse_rational(), sparse_rational(), small_rational()).prop_map(|(x, y, z)| {
        &(&Scalar::from_rational(x) + &(&Scalar::sqrt3() * &Scalar::from_rational(y)))
            + &(&Scalar::a() * &Scalar::from_rational(z))
    })
}

pub fn form_on(frame: FrameRef, degree: usize, coeff: BoxedStrategy<Scalar>) -> impl Strategy<Value = Form> {
    let blades = blades_of_degree(frame.len(), degree);
    let count = blades.len();
    prop::collection::vec((0..count.max(1), coeff), 0..=4).prop_map(move |terms| {
        terms.into_iter().fold(Form::zero(&frame, degree), |acc, (k, c)| {
            if count == 0 {
                acc
            } else {
                &acc + &Form::monomial(&frame, blades[k], c)
            }
        })
    })
}

/// Structure constants `c[k] = {(i, j): c}` with `i < j < k`, and the differential they define.
#[derive(Clone, Debug)]
pub struct RandomAlgebra {
    pub n: usize,
    pub constants: Vec<BTreeMap<(usize, usize), i64>>,
}

impl RandomAlgebra {
    pub fn differential(&self) -> Differential {
        let frame = Frame::real(self.n);
        let images = self
            .constants
            .iter()
            .map(|ck| {
                ck.iter().fold(Form::zero(&frame, 2), |acc, ((i, j), c)| {
                    &acc + &Form::from_indices(&frame, &[*i, *j], Scalar::from_int(-c))
                })
            })
            .collect();
        Differential::new(&frame, images).unwrap()
    }

    /// Jacobi on basis triples, with `[e_i, e_j] = Σ_k c^k_{ij} e_k`.
    pub fn jacobi_brute_force(&self) -> bool {
        let n = self.n;
        let bracket = |x: &[i64], y: &[i64]| -> Vec<i64> {
            let mut out = vec![0; n];
            for (k, ck) in self.constants.iter().enumerate() {
                for ((i, j), c) in ck {
                    out[k] += c * (x[*i] * y[*j] - x[*j] * y[*i]);
                }
            }
            out
        };
        let e = |i: usize| (0..n).map(|k| i64::from(k == i)).collect::<Vec<_>>();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (x, y, z) = (e(i), e(j), e(k));
                    let s1 = bracket(&bracket(&x, &y), &z);
                    let s2 = bracket(&bracket(&y, &z), &x);
                    let s3 = bracket(&bracket(&z, &x), &y);
                    if (0..n).any(|m| s1[m] + s2[m] + s3[m] != 0) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

pub fn random_algebra(max_dim: usize) -> impl Strategy<Value = RandomAlgebra> {
    (3..=max_dim).prop_flat_map(|n| {
        let slots: Vec<(usize, usize, usize)> =
            (0..n).flat_map(|k| (0..k).flat_map(move |j| (0..j).map(move |i| (i, j, k)))).collect();
        let len = slots.len();
        prop::collection::vec(prop_oneof![6 => Just(0i64), 1 => -2i64..=2], len).prop_map(move |cs| {
            let mut constants = vec![BTreeMap::new(); n];
            for ((i, j, k), c) in slots.iter().zip(cs) {
                if c != 0 {
                    constants[*k].insert((*i, *j), c);
                }
            }
            RandomAlgebra { n, constants }
        })
    })
}

type Outcome = Result<(), String>;

fn finish<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> Outcome {
    r.map_err(|e| e.to_string())
}

pub fn ring_axioms(cases: u32) -> Outcome {
    let s = || scalar(vec![Param::A, Param::B]);
    finish(runner(cases).run(&(s(), s(), s()), |(x, y, z)| {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        let copy = x.clone();
        prop_assert!((&x - &copy).is_zero());
        Ok(())
    }))
}

pub fn evaluation_is_homomorphism(cases: u32) -> Outcome {
    let s = || scalar(vec![Param::A, Param::B]);
    finish(runner(cases).run(&(s(), s(), small_rational(), small_rational()), |(x, y, a, b)| {
        let asg = Assignment::new().with(Param::A, a).with(Param::B, b);
        let ev = |s: &Scalar| s.evaluate(&asg).unwrap();
        prop_assert_eq!(ev(&(&x * &y)), &ev(&x) * &ev(&y));
        prop_assert_eq!(ev(&(&x + &y)), &ev(&x) + &ev(&y));
        Ok(())
    }))
}

pub fn conjugation_involution(cases: u32) -> Outcome {
    let frame = Frame::complex(3);
    let strat = (0usize..=4).prop_flat_map(move |k| form_on(frame.clone(), k, scalar(vec![Param::A]).boxed()));
    finish(runner(cases).run(&(strat, scalar(vec![Param::A, Param::B])), |(f, s)| {
        prop_assert_eq!(f.conj().unwrap().conj().unwrap(), f.clone());
        prop_assert_eq!(s.conjugate().conjugate(), s);
        Ok(())
    }))
}

pub fn wedge_laws(cases: u32) -> Outcome {
    let frame = Frame::real(6);
    let c = || scalar(vec![Param::A]).boxed();
    let f = move |fr: FrameRef| (0usize..=3).prop_flat_map(move |k| form_on(fr.clone(), k, c()));
    let strat = (f(frame.clone()), f(frame.clone()), f(frame));
    finish(runner(cases).run(&strat, |(x, y, z)| {
        let xy = x.wedge(&y).unwrap();
        let yx = y.wedge(&x).unwrap();
        let sign = if x.degree() * y.degree() % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        prop_assert_eq!(&xy, &yx.scale(&sign));
        prop_assert_eq!(xy.wedge(&z).unwrap(), x.wedge(&y.wedge(&z).unwrap()).unwrap());
        Ok(())
    }))
}

pub fn graded_leibniz(cases: u32) -> Outcome {
    let strat = random_algebra(7).prop_flat_map(|alg| {
        let fr = Frame::real(alg.n);
        let c = || scalar(vec![Param::A]).boxed();
        let f = move |fr: FrameRef| (0usize..=3).prop_flat_map(move |k| form_on(fr.clone(), k, c()));
        (Just(alg), f(fr.clone()), f(fr))
    });
    finish(runner(cases).run(&strat, |(alg, x, y)| {
        let d = alg.differential();
        let lhs = d.differentiate(&x.wedge(&y).unwrap()).unwrap();
        let sign = if x.degree() % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        let rhs = &d.differentiate(&x).unwrap().wedge(&y).unwrap()
            + &x.wedge(&d.differentiate(&y).unwrap()).unwrap().scale(&sign);
        prop_assert_eq!(lhs, rhs);
        Ok(())
    }))
}

pub fn d_squared_matches_jacobi(cases: u32) -> Outcome {
    let holds = std::cell::Cell::new(0u32);
    finish(runner(cases).run(&random_algebra(8), |alg| {
        let brute = alg.jacobi_brute_force();
        holds.set(holds.get() + u32::from(brute));
        prop_assert_eq!(alg.differential().satisfies_d_squared(), brute);
        Ok(())
    }))?;
    // Both outcomes must occur in the sample.
    if holds.get() == 0 || holds.get() == cases {
        return Err(format!("Jacobi held in {} of {cases} samples", holds.get()));
    }
    Ok(())
}

pub struct CupFixture {
    pub algebra: Presentation,
    pub cohomology: Cohomology,
    pub h1: Vec<Form>,
    pub h2: Vec<Form>,
}

pub fn cup_fixture() -> CupFixture {
    let g = g_ab_real(&FamilyPoint::ints(1, 1)).unwrap();
    let cohomology = Cohomology::new(&g).unwrap();
    let h1 = cohomology.representatives(1).representatives;
    let h2 = cohomology.representatives(2).representatives;
    CupFixture { algebra: g, cohomology, h1, h2 }
}

pub fn cup_independent_of_representatives(cases: u32, fx: &CupFixture) -> Outcome {
    let frame = fx.cohomology.frame().clone();
    let coeffs = |n: usize| prop::collection::vec(small_rational(), n);
    let rational = || small_rational().prop_map(Scalar::from_rational).boxed();
    let strat = (
        coeffs(fx.h1.len()),
        coeffs(fx.h2.len()),
        coeffs(fx.h2.len()),
        form_on(frame.clone(), 1, rational()),
        form_on(frame, 1, rational()),
    );
    let combine = |cs: &[Rational], reps: &[Form], degree: usize| {
        cs.iter().zip(reps).fold(Form::zero(fx.cohomology.frame(), degree), |acc, (c, r)| {
            &acc + &r.scale(&Scalar::from_rational(c.clone()))
        })
    };
    let d = |f: &Form| fx.algebra.differential().differentiate(f).unwrap();
    finish(runner(cases).run(&strat, |(c1, c2, c3, g1, g2)| {
        let x = combine(&c1, &fx.h1, 1);
        let y = combine(&c2, &fx.h2, 2);
        let z = combine(&c3, &fx.h2, 2);
        let y2 = &y + &d(&g1);
        let z2 = &z + &d(&g2);
        let h = &fx.cohomology;
        prop_assert_eq!(
            h.cup(&[x.clone(), y.clone()]).unwrap().coordinates,
            h.cup(&[x, y2.clone()]).unwrap().coordinates
        );
        prop_assert_eq!(h.cup(&[y, z]).unwrap().coordinates, h.cup(&[y2, z2]).unwrap().coordinates);
        Ok(())
    }))
}

pub fn metric_verdicts_scale_invariant(cases: u32) -> Outcome {
    let names =
        ["gauduchon:1", "gauduchon:2", "gauduchon:3", "balanced", "skt", "astheno_kahler", "strongly_gauduchon"];
    let strat = (positive_rational(), positive_rational(), any::<bool>());
    finish(runner(cases).run(&strat, |(a, t, use_fa)| {
        let asg = Assignment::new().with(Param::A, a.clone());
        let g = g_ab_complex(&FamilyPoint::rational(a.clone(), rat(1, 1))).unwrap();
        let f = if use_fa { metric_fa(&Scalar::from_rational(a)) } else { metric_f() }.specialize(&asg);
        let ft = f.scale(&Scalar::from_rational(t)).unwrap();
        prop_assert_eq!(positivity_report(&f).verdict, positivity_report(&ft).verdict);
        for name in names {
            let v = condition_check(&g, &f, name).unwrap().holds;
            let vt = condition_check(&g, &ft, name).unwrap().holds;
            prop_assert_eq!(v, vt, "{}", name);
        }
        Ok(())
    }))
}

pub fn random_document() -> impl Strategy<Value = Document> {
    let frame = prop_oneof![(2usize..=6).prop_map(Frame::real), (1usize..=3).prop_map(Frame::complex)];
    let params = prop_oneof![Just(vec![]), Just(vec![Param::A]), Just(vec![Param::A, Param::B])];
    (frame, params, any::<bool>()).prop_flat_map(|(frame, params, entries)| {
        let gens = if frame.is_complex() { frame.rank() } else { frame.len() };
        let c = {
            let p = params.clone();
            move || scalar(p.clone()).boxed()
        };
        let diffs = prop::collection::btree_map(0..gens, form_on(frame.clone(), 2, c()), 0..=gens);
        let maps = prop::collection::btree_map(0..frame.len(), form_on(frame.clone(), 1, c()), 0..=2);
        let rank = frame.rank();
        let metric = if !frame.is_complex() {
            Just(None).boxed()
        } else if entries {
            prop::collection::btree_map((0..rank, 0..rank), c(), 1..=3)
                .prop_map(|e| Some(MetricSpec::Entries(e)))
                .boxed()
        } else {
            let nonzero = c().prop_filter("nonzero multiple", |s| !s.is_zero());
            (nonzero, form_on(frame.clone(), 2, c()))
                .prop_map(|(multiple, form)| Some(MetricSpec::Form { multiple, form }))
                .boxed()
        };
        (Just(frame), Just(params), diffs, maps, metric, any::<bool>()).prop_map(
            |(frame, params, differentials, map, metric, named)| {
                let mut d = Document::new(&frame);
                d.name = named.then(|| "doc_1".to_string());
                d.params = params;
                d.differentials = differentials;
                d.map = map;
                d.metric = metric;
                d
            },
        )
    })
}

pub fn parse_emit_round_trip(cases: u32) -> Outcome {
    finish(runner(cases).run(&random_document(), |d| {
        let text = d.export();
        let back = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &d, "{}", text);
        prop_assert_eq!(back.export(), text);
        Ok(())
    }))
}

pub fn catalog_round_trip(cases: u32) -> Outcome {
    let strat = (small_rational(), small_rational());
    finish(runner(cases).run(&strat, |(a, b)| {
        let p = FamilyPoint::rational(a, b);
        for g in [g_ab_real(&p).unwrap(), g_ab_complex(&p).unwrap()] {
            let d = Document::from_presentation(&g);
            let back = parse(&d.export()).unwrap();
            let parsed = back.presentation().unwrap();
            prop_assert_eq!(parsed.differential(), g.differential());
        }
        Ok(())
    }))
}

pub fn real_scalars_are_self_conjugate(cases: u32) -> Outcome {
    finish(runner(cases).run(&real_scalar(), |s| {
        prop_assert!(s.is_real());
        prop_assert_eq!(s.conjugate(), s);
        Ok(())
    }))
}
