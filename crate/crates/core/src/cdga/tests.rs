use super::*;
use crate::{rat, Rat};
use proptest::prelude::*;

type E = GcaElement<Rat>;

/// x1(8), x2(10), y1(33), y2(35), y3(37) with the y-differentials of the
/// model.
fn small_model() -> Cdga<Rat> {
    let gens = GeneratorSet::new(vec![
        Generator::new("x1", 8),
        Generator::new("x2", 10),
        Generator::new("y1", 33),
        Generator::new("y2", 35),
        Generator::new("y3", 37),
    ])
    .unwrap();
    let d = |t: &str| E::parse(t, &gens).unwrap();
    let diffs = vec![d("0"), d("0"), d("x1^3*x2"), d("x1^2*x2^2"), d("x1*x2^3")];
    Cdga::new(gens.clone(), diffs).unwrap()
}

fn el(a: &Cdga<Rat>, t: &str) -> E {
    a.element(t).unwrap()
}

#[test]
fn odd_generators_anticommute() {
    let a = small_model();
    let (y1, y2) = (el(&a, "y1"), el(&a, "y2"));
    assert_eq!(&y1 * &y2, el(&a, "y1*y2"));
    assert_eq!(&y2 * &y1, el(&a, "-y1*y2"));
    assert_eq!(el(&a, "y2*y1"), el(&a, "-y1*y2"));
    assert!((&y1 * &y1).is_zero());
    assert!(el(&a, "y1*y1").is_zero());
    assert_eq!(&el(&a, "y1*x1") * &el(&a, "y2*x2"), el(&a, "y1*y2*x1*x2"));
    assert_eq!(el(&a, "x1*y3*x2*y1").to_string(), "-y1*y3*x1*x2");
}

#[test]
fn differential_examples() {
    let a = small_model();
    assert_eq!(a.d(&el(&a, "y1*y2")), el(&a, "x1^3*x2*y2 - y1*x1^2*x2^2"));
    assert!(a.d(&el(&a, "x1^5*x2^7")).is_zero());
    let core = el(&a, "y1*y2*x1^4*x2^2 - y1*y3*x1^5*x2 + y2*y3*x1^6");
    assert!(a.d(&core).is_zero());
    assert_eq!(a.d(&el(&a, "y2*y1")), -a.d(&el(&a, "y1*y2")));
    assert_eq!(a.d(&el(&a, "x1^3")), E::zero(a.gens()));
}

#[test]
fn d_squared_checks() {
    let a = small_model();
    assert!(a.check_d_squared().is_ok());
    assert!(a.is_minimal());

    // z with d(z) = the cancelling core; corrupting d(y1) leaves a residue on z
    let gens = GeneratorSet::new(vec![
        Generator::new("x1", 8),
        Generator::new("x2", 10),
        Generator::new("y1", 33),
        Generator::new("y2", 35),
        Generator::new("y3", 37),
        Generator::new("z", 119),
    ])
    .unwrap();
    let d = |t: &str| E::parse(t, &gens).unwrap();
    let good = vec![
        d("0"),
        d("0"),
        d("x1^3*x2"),
        d("x1^2*x2^2"),
        d("x1*x2^3"),
        d("y1*y2*x1^4*x2^2 - y1*y3*x1^5*x2 + y2*y3*x1^6"),
    ];
    assert!(Cdga::new(gens.clone(), good.clone()).unwrap().check_d_squared().is_ok());
    let mut bad = good;
    bad[2] = d("x1^4");
    assert!(matches!(Cdga::new(gens.clone(), bad.clone()), Err(CdgaError::DegreeMismatch { .. })));
    let corrupted = Cdga::new_unchecked(gens, bad).unwrap();
    let cx = corrupted.check_d_squared().unwrap_err();
    assert_eq!(cx.generator, "z");
    assert!(!cx.residue.is_zero());

    let closed = Cdga::<Rat>::trivial(a.gens().clone());
    assert!(closed.check_d_squared().is_ok());
    assert!(closed.is_minimal());
}

#[test]
fn minimality() {
    let gens = GeneratorSet::new(vec![Generator::new("x1", 8), Generator::new("u", 7)]).unwrap();
    let d = |t: &str| E::parse(t, &gens).unwrap();
    let a = Cdga::new(gens.clone(), vec![d("0"), d("x1")]).unwrap();
    assert!(!a.is_minimal());
    assert!(a.check_d_squared().is_ok());
}

#[test]
fn generator_validation() {
    assert!(GeneratorSet::new(vec![Generator::new("a", 1)]).is_err());
    assert!(GeneratorSet::new(vec![Generator::new("a", 2), Generator::new("a", 3)]).is_err());
    let a = small_model();
    assert!(a.element("w").is_err());
    let other = GeneratorSet::new(vec![Generator::new("x1", 8)]).unwrap();
    assert_eq!(el(&a, "x1").checked_mul(&E::generator(&other, 0)), Err(CdgaError::AlgebraMismatch));
}

fn identity_with(a: &Arc<Cdga<Rat>>, overrides: &[(&str, &str)]) -> DgaMorphism<Rat> {
    let gens = a.gens();
    let images = (0..gens.len())
        .map(|i| {
            let name = &gens.get(i).name;
            match overrides.iter().find(|(n, _)| n == name) {
                Some((_, t)) => a.element(t).unwrap(),
                None => E::generator(gens, i),
            }
        })
        .collect();
    DgaMorphism::new(a.clone(), a.clone(), images).unwrap()
}

#[test]
fn chain_maps() {
    let a = Arc::new(small_model());
    assert!(DgaMorphism::identity(a.clone()).is_chain_map().is_ok());
    let f = identity_with(&a, &[("y1", "2*y1")]);
    let cx = f.is_chain_map().unwrap_err();
    assert_eq!(cx.generator, "y1");
    // a1 = 2, a2 = 1 forces b1 = 8, b2 = 4, b3 = 2
    let g = identity_with(&a, &[("x1", "2*x1"), ("y1", "8*y1"), ("y2", "4*y2"), ("y3", "2*y3")]);
    assert!(g.is_chain_map().is_ok());
    assert!(g.after(&g).unwrap().is_chain_map().is_ok());
    assert_eq!(g.after(&g).unwrap().image(0), &el(&a, "4*x1"));
    assert!(matches!(
        DgaMorphism::new(a.clone(), a.clone(), vec![el(&a, "x2"); 5]),
        Err(CdgaError::NotDegreePreserving { .. })
    ));
}

#[test]
fn text_round_trip() {
    let a = small_model();
    let meta = vec![("k".to_string(), "2".to_string())];
    let text = write_cdga(&a, &meta);
    assert!(text.contains("d(y1) = x1^3*x2\n"));
    let back = parse_cdga::<Rat>(&text).unwrap();
    assert_eq!(back.cdga, a);
    assert_eq!(back.metadata, meta);
    assert!(parse_cdga::<Rat>("x1 8\n").is_err());
    assert!(matches!(parse_cdga::<Rat>("generators:\nx1 8\nd(x1) = q\n"), Err(CdgaError::Syntax { line: 3, .. })));

    let a = Arc::new(a);
    let f = identity_with(&a, &[("x1", "2*x1"), ("y1", "8*y1"), ("y2", "4*y2"), ("y3", "2*y3")]);
    let text = write_morphism(&f);
    let g = parse_morphism(&text, a.clone(), a.clone()).unwrap();
    assert!(g.same_as(&f));
    assert!(parse_morphism("f(x1) = x1\n", a.clone(), a).is_err());
}

/// Generators of both parities and small degrees for random tests.
fn mixed_algebra() -> Cdga<Rat> {
    let gens = GeneratorSet::new(vec![
        Generator::new("a", 2),
        Generator::new("b", 3),
        Generator::new("c", 4),
        Generator::new("e", 5),
        Generator::new("f", 7),
    ])
    .unwrap();
    let d = |t: &str| E::parse(t, &gens).unwrap();
    // d² need not vanish for the derivation law, so d(f) is arbitrary
    let diffs = vec![d("0"), d("a^2"), d("0"), d("a*c"), d("a^2*c + b*e")];
    Cdga::new_unchecked(gens, diffs).unwrap()
}

fn arb_element(a: &Cdga<Rat>) -> impl Strategy<Value = E> {
    let gens = a.gens().clone();
    let n = gens.len();
    prop::collection::vec((prop::collection::vec(0u32..3, n), -4i64..=4), 0..5).prop_map(move |terms| {
        E::from_terms(
            &gens,
            terms.into_iter().filter_map(|(mut e, c)| {
                for (i, x) in e.iter_mut().enumerate() {
                    if gens.is_odd(i) {
                        *x = (*x).min(1);
                    }
                }
                Some((GcaMonomial::new(e, &gens)?, rat(c, 1)))
            }),
        )
    })
}

/// Homogeneous part of the given parity, so degree signs are defined.
fn homogeneous_part(e: &E) -> E {
    match e.terms().next() {
        Some((m, _)) => {
            let deg = m.degree(e.gens());
            e.filter(|t| t.degree(e.gens()) == deg)
        }
        None => e.clone(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn graded_commutativity(a in arb_element(&mixed_algebra()), b in arb_element(&mixed_algebra())) {
        let (a, b) = (homogeneous_part(&a), homogeneous_part(&b));
        let (Some(da), Some(db)) = (a.homogeneous_degree(), b.homogeneous_degree()) else { return Ok(()) };
        let ab = &a * &b;
        let ba = &b * &a;
        if da * db % 2 == 1 {
            prop_assert_eq!(ab, -ba);
        } else {
            prop_assert_eq!(ab, ba);
        }
    }

    #[test]
    fn derivation_law(a in arb_element(&mixed_algebra()), b in arb_element(&mixed_algebra())) {
        let alg = mixed_algebra();
        let a = homogeneous_part(&a);
        let Some(da) = a.homogeneous_degree() else { return Ok(()) };
        let lhs = alg.d(&(&a * &b));
        let second = &a * &alg.d(&b);
        let rhs = &(&alg.d(&a) * &b) + &(if da % 2 == 1 { -second } else { second });
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn normal_form_is_idempotent(a in arb_element(&mixed_algebra())) {
        let again = E::from_terms(a.gens(), a.terms().map(|(m, c)| (m.clone(), c.clone())));
        prop_assert_eq!(&again, &a);
        prop_assert_eq!(E::parse(&a.to_string(), a.gens()).unwrap(), a);
    }

    #[test]
    fn associativity(a in arb_element(&mixed_algebra()), b in arb_element(&mixed_algebra()), c in arb_element(&mixed_algebra())) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn chain_maps_compose(l1 in -3i64..4, l2 in -3i64..4, t in 0i64..3) {
        prop_assume!(l1 != 0 && l2 != 0);
        // x1 -> λ x1, x2 -> μ x2 with the y-scalings this forces
        let alg = Arc::new(small_model());
        let scale = |x: i64, y: i64| identity_with(&alg, &[
            ("x1", &format!("{x}*x1")),
            ("x2", &format!("{y}*x2")),
            ("y1", &format!("{}*y1", x.pow(3) * y)),
            ("y2", &format!("{}*y2", x.pow(2) * y.pow(2))),
            ("y3", &format!("{}*y3", x * y.pow(3))),
        ]);
        let f = scale(l1, l2);
        let g = scale(l2 + t, l1);
        prop_assert!(f.is_chain_map().is_ok());
        prop_assert!(g.is_chain_map().is_ok());
        prop_assert!(g.after(&f).unwrap().is_chain_map().is_ok());
    }
}
