//! Divided-power derivatives `D^(a)(x^b) = C(b, a) x^(b - a)` and truncated
//! Taylor expansions; valid in every characteristic.

use super::field::binomial_in_field;
use super::monomial::{monomials_up_to, Monomial, MonomialOrder};
use super::poly::{Poly, Ring};

/// Applies `D^(alpha)` to `f`, extended linearly over the terms.
pub fn apply_divided_power(alpha: &Monomial, f: &Poly) -> Poly {
    let ring = f.ring();
    assert_eq!(alpha.nvars(), ring.nvars(), "operator arity differs from ring arity");
    let field = ring.field();
    let terms = f
        .terms()
        .iter()
        .filter_map(|(m, c)| {
            let q = alpha.quotient_of(m)?;
            let b = binomial_in_field(m.exponents(), alpha.exponents(), field);
            if b.is_zero() {
                None
            } else {
                Some((q, field.mul(c, &b)))
            }
        })
        .collect();
    ring.from_terms(terms)
}

/// Ring `K[x_1..x_d, z_1..z_d]` carrying the shift variables of a Taylor expansion.
pub fn jet_ring(ring: &Ring) -> Ring {
    let mut names: Vec<String> = ring.names().to_vec();
    names.extend(ring.names().iter().map(|n| format!("z_{n}")));
    ring.with_names(&names, MonomialOrder::GRevLex)
}

/// The pairs `(alpha, D^(alpha) f)` for `|alpha| <= n`, graded order.
pub fn taylor_coefficients(f: &Poly, n: u32) -> Vec<(Monomial, Poly)> {
    monomials_up_to(f.ring().nvars(), n)
        .into_iter()
        .map(|a| {
            let d = apply_divided_power(&a, f);
            (a, d)
        })
        .collect()
}

/// `sum_{|a| <= n} D^(a)(f)(x) z^a` in `jet_ring(f.ring())`: the expansion of
/// `f(x + z)` truncated modulo `(z)^(n+1)`.
pub fn taylor_shift(f: &Poly, n: u32) -> Poly {
    let ring = f.ring();
    let d = ring.nvars();
    let jr = jet_ring(ring);
    let x_map: Vec<usize> = (0..d).collect();
    let mut acc = jr.zero();
    for (alpha, coeff) in taylor_coefficients(f, n) {
        if coeff.is_zero() {
            continue;
        }
        let mut z = Monomial::one(2 * d);
        for i in 0..d {
            z.set_exponent(d + i, alpha.exponent(i));
        }
        let lifted = coeff.map_vars(&jr, &x_map);
        acc = &acc + &lifted.mul_term(&z, &jr.field().one());
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Field;
    use crate::algebra::parse::parse_poly;

    fn ring(c: u64) -> Ring {
        Ring::new(
            Field::from_characteristic(c).unwrap(),
            &["x", "y"],
            MonomialOrder::GRevLex,
        )
    }

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn divided_power_examples() {
        let q = ring(0);
        let f = parse_poly(&q, "x^2*y").unwrap();
        assert_eq!(apply_divided_power(&m(&[0, 0]), &f), f);
        assert_eq!(apply_divided_power(&m(&[1, 0]), &f).to_string(), "2*x*y");
        let r2 = Ring::new(Field::Prime(2), &["x"], MonomialOrder::GRevLex);
        let g = parse_poly(&r2, "x^3").unwrap();
        assert_eq!(apply_divided_power(&m(&[2]), &g).to_string(), "x");
    }

    #[test]
    fn taylor_shift_examples() {
        let q = ring(0);
        let x = parse_poly(&q, "x").unwrap();
        assert_eq!(taylor_shift(&x, 1).to_string(), "x + z_x");
        let cusp = parse_poly(&q, "x^3 - y^2").unwrap();
        let jr = jet_ring(&q);
        let expect = parse_poly(&jr, "x^3 - y^2 + 3x^2 z_x - 2y z_y").unwrap();
        assert_eq!(taylor_shift(&cusp, 1), expect);

        let f2 = ring(2);
        let cusp2 = parse_poly(&f2, "x^3 + y^2").unwrap();
        let jr2 = jet_ring(&f2);
        let expect2 = parse_poly(&jr2, "x^3 + y^2 + x^2 z_x + x z_x^2 + z_y^2").unwrap();
        assert_eq!(taylor_shift(&cusp2, 2), expect2);
    }
}
