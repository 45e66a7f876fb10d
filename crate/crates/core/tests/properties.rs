use nashforge_core::algebra::*;
use nashforge_core::charp::{reassemble, root_decomposition};
use nashforge_core::diffops::{differential_power, idealizer_operators};
use nashforge_core::groebner::{kernel_of_quotient_map, mat_vec};
use nashforge_core::invariants::{reynolds, GroupAction};
use nashforge_core::{Ideal, Submodule};
use proptest::prelude::*;

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::Rational),
        Just(Field::Prime(2)),
        Just(Field::Prime(3)),
        Just(Field::Prime(5)),
        Just(Field::Prime(2_147_483_647)),
    ]
}

fn ring(field: Field, n: usize) -> Ring {
    let names = ["x", "y", "z"];
    Ring::new(field, &names[..n], MonomialOrder::GRevLex)
}

fn poly_in(r: &Ring, terms: &[(Vec<u32>, i64)]) -> Poly {
    let f = r.field();
    r.from_terms(
        terms
            .iter()
            .map(|(e, c)| (Monomial::from_exponents(&e[..r.nvars()]), f.from_i64(*c)))
            .collect(),
    )
}

fn terms_strategy(max_deg: u32, max_terms: usize) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, 3), -4i64..=4), 0..=max_terms)
}

/// Terms without a constant, so the origin lies on the hypersurface.
fn vanishing_terms(max_deg: u32, max_terms: usize) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    terms_strategy(max_deg, max_terms)
        .prop_map(|ts| ts.into_iter().filter(|(e, _)| e[..2].iter().any(|&x| x > 0)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(field in field_strategy(), a in -50i64..50, b in -50i64..50, c in -50i64..50) {
        let (a, b, c) = (field.from_i64(a), field.from_i64(b), field.from_i64(c));
        prop_assert_eq!(field.add(&field.add(&a, &b), &c), field.add(&a, &field.add(&b, &c)));
        prop_assert_eq!(field.mul(&field.mul(&a, &b), &c), field.mul(&a, &field.mul(&b, &c)));
        prop_assert_eq!(field.mul(&a, &field.add(&b, &c)), field.add(&field.mul(&a, &b), &field.mul(&a, &c)));
        prop_assert_eq!(field.add(&a, &field.neg(&a)), field.zero());
        if !a.is_zero() {
            let inv = field.inv(&a).unwrap();
            prop_assert!(field.mul(&a, &inv).is_one());
        }
    }

    #[test]
    fn ring_axioms(field in field_strategy(), f in terms_strategy(3, 4), g in terms_strategy(3, 4), h in terms_strategy(3, 4)) {
        let r = ring(field, 2);
        let (f, g, h) = (poly_in(&r, &f), poly_in(&r, &g), poly_in(&r, &h));
        prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!(f.terms().iter().all(|(_, c)| !c.is_zero()));
    }

    #[test]
    fn divided_powers_are_additive(field in field_strategy(), f in terms_strategy(5, 5), g in terms_strategy(5, 5), a in prop::collection::vec(0u32..4, 2)) {
        let r = ring(field, 2);
        let (f, g) = (poly_in(&r, &f), poly_in(&r, &g));
        let a = Monomial::from_exponents(&a);
        prop_assert_eq!(apply_divided_power(&a, &(&f + &g)), &apply_divided_power(&a, &f) + &apply_divided_power(&a, &g));
    }

    #[test]
    fn divided_power_of_monomial_matches_expansion(field in field_strategy(), b in prop::collection::vec(0u32..6, 2)) {
        // Coefficients of z^a in (x + z)^b are the divided powers of x^b.
        let r = ring(field, 2);
        let xb = r.monomial(Monomial::from_exponents(&b));
        let shifted = taylor_shift(&xb, 12);
        let jr = jet_ring(&r);
        let x_part: Vec<usize> = (0..2).collect();
        for a in monomials_up_to(2, 12) {
            let mut slice = jr.zero();
            for (m, c) in shifted.terms() {
                if m.exponent(2) == a.exponent(0) && m.exponent(3) == a.exponent(1) {
                    let mut xm = Monomial::one(4);
                    xm.set_exponent(0, m.exponent(0));
                    xm.set_exponent(1, m.exponent(1));
                    slice = &slice + &jr.term(xm, c.clone());
                }
            }
            prop_assert_eq!(slice, apply_divided_power(&a, &xb).map_vars(&jr, &x_part));
        }
    }

    #[test]
    fn taylor_slices_are_divided_powers(field in field_strategy(), f in terms_strategy(4, 5), n in 0u32..4) {
        let r = ring(field, 2);
        let f = poly_in(&r, &f);
        let jr = jet_ring(&r);
        let x_part: Vec<usize> = (0..2).collect();
        let mut rebuilt = jr.zero();
        for (a, coeff) in taylor_coefficients(&f, n) {
            let mut z = Monomial::one(4);
            z.set_exponent(2, a.exponent(0));
            z.set_exponent(3, a.exponent(1));
            rebuilt = &rebuilt + &coeff.map_vars(&jr, &x_part).mul_term(&z, &jr.field().one());
        }
        let shifted = taylor_shift(&f, n);
        prop_assert_eq!(&shifted, &rebuilt);
        let zero_slice: Vec<_> = shifted.terms().iter().filter(|(m, _)| m.exponent(2) + m.exponent(3) == 0).cloned().collect();
        prop_assert_eq!(jr.from_terms(zero_slice), f.map_vars(&jr, &x_part));
    }

    #[test]
    fn groebner_bases_are_sound(field in field_strategy(), gens in prop::collection::vec(terms_strategy(3, 3), 1..4)) {
        let r = ring(field, 3);
        let ideal = Ideal::new(&r, gens.iter().map(|t| poly_in(&r, t)).collect());
        prop_assert!(ideal.verify_groebner().unwrap());
        for g in ideal.generators() {
            prop_assert!(ideal.reduce(g).unwrap().is_zero());
        }
        for g in ideal.groebner().unwrap() {
            prop_assert!(g.lead_coeff().unwrap().is_one());
        }
        // recomputation is canonical
        let again = Ideal::new(&r, ideal.generators().iter().rev().cloned().collect());
        prop_assert_eq!(again.groebner().unwrap(), ideal.groebner().unwrap());
    }

    #[test]
    fn normal_form_is_linear(field in field_strategy(), gens in prop::collection::vec(terms_strategy(3, 3), 1..3), f in terms_strategy(4, 4), g in terms_strategy(4, 4)) {
        let r = ring(field, 2);
        let ideal = Ideal::new(&r, gens.iter().map(|t| poly_in(&r, t)).collect());
        let (f, g) = (poly_in(&r, &f), poly_in(&r, &g));
        let lhs = ideal.reduce(&(&f + &g)).unwrap();
        let rhs = &ideal.reduce(&f).unwrap() + &ideal.reduce(&g).unwrap();
        prop_assert_eq!(lhs, rhs);
        let diff = &f - &ideal.reduce(&f).unwrap();
        prop_assert!(ideal.contains(&diff).unwrap());
    }

    #[test]
    fn kernels_map_into_the_ideal(field in field_strategy(), f in vanishing_terms(3, 3), a in prop::collection::vec(terms_strategy(2, 2), 2)) {
        let r = ring(field, 2);
        let ideal = Ideal::new(&r, vec![poly_in(&r, &f)]);
        let row = vec![a.iter().map(|t| poly_in(&r, t)).collect::<Vec<_>>()];
        let k = kernel_of_quotient_map(&row, 2, &ideal).unwrap();
        prop_assert!(k.verify_groebner().unwrap());
        for v in k.groebner().unwrap() {
            let image = mat_vec(&r, &row, v);
            prop_assert!(ideal.contains(&image[0]).unwrap());
        }
        prop_assert!(k.contains_module(&Submodule::ideal_multiple(&ideal, 2)).unwrap());
    }

    #[test]
    fn idealizer_generators_preserve_products(field in field_strategy(), f in vanishing_terms(3, 3), n in 0u32..3, extra in prop::collection::vec(0u32..4, 2)) {
        let r = ring(field, 2);
        let ideal = Ideal::new(&r, vec![poly_in(&r, &f)]);
        let ops = idealizer_operators(&ideal, n).unwrap();
        let beta = Monomial::from_exponents(&extra);
        for k in 0..ops.len() {
            for g in ideal.generators() {
                let fb = g.mul_term(&beta, &r.field().one());
                prop_assert!(ideal.contains(&ops.apply(k, &fb)).unwrap());
            }
        }
    }

    #[test]
    fn differential_powers_nest(field in field_strategy(), f in vanishing_terms(3, 3), n in 1u32..4) {
        let r = ring(field, 2);
        let ideal = Ideal::new(&r, vec![poly_in(&r, &f)]);
        let lower = differential_power(&ideal, n).unwrap();
        let upper = differential_power(&ideal, n + 1).unwrap();
        prop_assert!(lower.ideal.contains_ideal(&upper.ideal).unwrap());
        prop_assert!(lower.ideal.contains_ideal(&Ideal::maximal_power(&r, n)).unwrap());
        prop_assert!(lower.ideal.contains_ideal(&ideal).unwrap());
        prop_assert!(Ideal::maximal(&r).contains_ideal(&lower.ideal).unwrap());
    }

    #[test]
    fn root_decomposition_round_trips(p in prop_oneof![Just(2u64), Just(3), Just(5)], e in 1u32..3, f in terms_strategy(12, 6)) {
        let r = ring(Field::Prime(p), 3);
        let f = poly_in(&r, &f);
        let q = p.pow(e);
        let parts = root_decomposition(&f, q);
        prop_assert!(parts.iter().all(|(a, _)| a.exponents().iter().all(|&x| (x as u64) < q)));
        let back = reassemble(&parts, q).unwrap_or_else(|| r.zero());
        prop_assert_eq!(back, f);
    }

    #[test]
    fn reynolds_is_an_idempotent_projection(c in prop_oneof![Just(0u64), Just(3), Just(5)], f in terms_strategy(4, 5)) {
        let field = Field::from_characteristic(c).unwrap();
        let r = ring(field, 2);
        let m = |a: i64, b: i64, cc: i64, d: i64| vec![vec![field.from_i64(a), field.from_i64(b)], vec![field.from_i64(cc), field.from_i64(d)]];
        let g = GroupAction::generated_by(&r, vec![m(0, -1, 1, 0)]).unwrap();
        let f = poly_in(&r, &f);
        let avg = reynolds(&f, &g);
        prop_assert_eq!(reynolds(&avg, &g), avg.clone());
        for el in g.elements() {
            prop_assert_eq!(g.act(el, &avg), avg.clone());
        }
    }
}

#[test]
fn composition_law_of_divided_powers() {
    // D^(a) D^(c) = C(a + c, a) D^(a + c), checked on all small cases.
    for field in [Field::Rational, Field::Prime(2), Field::Prime(3)] {
        let r = ring(field, 2);
        for b in monomials_up_to(2, 6) {
            let xb = r.monomial(b.clone());
            for a in monomials_up_to(2, 3) {
                for c in monomials_up_to(2, 3) {
                    let lhs = apply_divided_power(&a, &apply_divided_power(&c, &xb));
                    let ac = a.mul(&c);
                    let coeff = binomial_in_field(ac.exponents(), a.exponents(), &field);
                    let rhs = apply_divided_power(&ac, &xb).scale(&coeff);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
