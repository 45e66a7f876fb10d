//! Values computed by Gröbner-free code paths, frozen and compared against
//! the Gröbner-based implementations.

use nashforge_core::algebra::*;
use nashforge_core::charp::{frobenius_pushforward, kunz_test};
use nashforge_core::diffops::{default_cutoff, differential_power, jets_oracle_diff_dim, pairing_from};
use nashforge_core::linalg::{SparseEchelon, SparseVec};
use nashforge_core::pparts::fitting_ideal;
use nashforge_core::{Dimension, Ideal};

fn ideal(c: u64, vars: &[&str], gens: &[&str]) -> Ideal {
    let r = Ring::new(Field::from_characteristic(c).unwrap(), vars, MonomialOrder::GRevLex);
    Ideal::new(&r, gens.iter().map(|g| parse_poly(&r, g).unwrap()).collect())
}

/// `dim S / (I + m^k)` by linear algebra on polynomials of degree `< k`.
fn truncated_colength(i: &Ideal, k: u32) -> u64 {
    let r = i.ring();
    let mons: Vec<Monomial> = monomials_up_to(r.nvars(), k.saturating_sub(1));
    let index = |m: &Monomial| mons.iter().position(|x| x == m);
    let mut span = SparseEchelon::new(*r.field());
    for f in i.generators() {
        for g in &mons {
            let v: SparseVec = f
                .mul_term(g, &r.field().one())
                .terms()
                .iter()
                .filter_map(|(m, c)| index(m).map(|p| (p, c.clone())))
                .collect();
            span.insert(v);
        }
    }
    (mons.len() - span.rank()) as u64
}

struct Case {
    name: &'static str,
    c: u64,
    vars: &'static [&'static str],
    gens: &'static [&'static str],
    /// `dim R / m^<n>` for `n = 1..=5`, from the jet oracle.
    codims: [u64; 5],
}

const BATTERY: &[Case] = &[
    Case {
        name: "cusp over QQ",
        c: 0,
        vars: &["x", "y"],
        gens: &["x^3 - y^2"],
        codims: [1, 1, 2, 3, 4],
    },
    Case {
        name: "cusp over GF(2)",
        c: 2,
        vars: &["x", "y"],
        gens: &["x^3 + y^2"],
        codims: [1, 2, 3, 4, 5],
    },
    Case {
        name: "cone over QQ",
        c: 0,
        vars: &["u", "v", "w"],
        gens: &["u*w - v^2"],
        codims: [1, 1, 4, 4, 9],
    },
    Case {
        name: "cone over GF(5)",
        c: 5,
        vars: &["u", "v", "w"],
        gens: &["u*w - v^2"],
        codims: [1, 1, 4, 4, 9],
    },
    Case {
        name: "line over QQ",
        c: 0,
        vars: &["x", "y"],
        gens: &["y"],
        codims: [1, 2, 3, 4, 5],
    },
    Case {
        name: "parabola over QQ",
        c: 0,
        vars: &["x", "y"],
        gens: &["x - y^2"],
        codims: [1, 2, 3, 4, 5],
    },
    Case {
        name: "plane over QQ",
        c: 0,
        vars: &["x", "y"],
        gens: &[],
        codims: [1, 3, 6, 10, 15],
    },
];

#[test]
fn jet_oracle_values_are_frozen() {
    for case in BATTERY {
        let i = ideal(case.c, case.vars, case.gens);
        for n in 1..=5u32 {
            let got = jets_oracle_diff_dim(&i, n, default_cutoff(&i, n)).unwrap();
            assert_eq!(got, case.codims[n as usize - 1], "{} n={n}", case.name);
        }
    }
}

#[test]
fn three_paths_agree_on_the_battery() {
    for case in BATTERY {
        let i = ideal(case.c, case.vars, case.gens);
        for n in 1..=5u32 {
            let dp = differential_power(&i, n).unwrap();
            let expect = case.codims[n as usize - 1];
            assert_eq!(dp.codim, expect, "{} n={n} Gröbner", case.name);
            assert_eq!(pairing_from(&dp).rank as u64, expect, "{} n={n} pairing", case.name);
            assert_eq!(
                truncated_colength(&dp.ideal, n),
                expect,
                "{} n={n} truncated",
                case.name
            );
        }
    }
}

#[test]
fn jet_oracle_is_monotone_in_the_cutoff() {
    for case in BATTERY {
        let i = ideal(case.c, case.vars, case.gens);
        for n in 1..=3u32 {
            let mut prev = u64::MAX;
            for cutoff in n.saturating_sub(1)..=default_cutoff(&i, n) + 2 {
                let v = jets_oracle_diff_dim(&i, n, cutoff).unwrap();
                assert!(v <= prev, "{} n={n} cutoff={cutoff}", case.name);
                prev = v;
            }
            assert_eq!(prev, case.codims[n as usize - 1]);
        }
    }
}

#[test]
fn staircase_counts_match_linear_algebra() {
    let cases = [
        ideal(0, &["x", "y"], &["x^2", "y^3"]),
        ideal(0, &["x", "y"], &["x^3 - y^2", "x^4", "y^4"]),
        ideal(2, &["x", "y"], &["x^3 + y^2", "x^2", "y^2"]),
        ideal(5, &["u", "v", "w"], &["u*w - v^2", "u^5", "v^5", "w^5"]),
    ];
    for i in &cases {
        let dim = i.k_dimension().unwrap().finite().unwrap();
        let k = 16;
        assert_eq!(truncated_colength(&i.sum(&Ideal::maximal_power(i.ring(), k)), k), dim);
    }
    assert_eq!(
        ideal(0, &["x", "y"], &["x*y"]).k_dimension().unwrap(),
        Dimension::Infinite
    );
}

#[test]
fn char_two_cusp_frobenius_fitting_ideal() {
    // Cross-block products of entries give every quadratic monomial.
    let i = ideal(2, &["x", "y"], &["x^3 + y^2"]);
    let fp = frobenius_pushforward(&i, 1).unwrap();
    let fitt2 = fitting_ideal(&fp.module, 2).unwrap();
    assert!(fitt2.same_ideal(&Ideal::maximal_power(i.ring(), 2)).unwrap());
    // Larger minors factor through a 2x2 block determinant, which vanishes in R.
    assert!(fitting_ideal(&fp.module, 1).unwrap().same_ideal(&i).unwrap());
    assert!(fitting_ideal(&fp.module, 0).unwrap().same_ideal(&i).unwrap());

    let k = kunz_test(&i).unwrap();
    assert_eq!((k.fiber_dim, k.frobenius_colength), (4, 4));
}
