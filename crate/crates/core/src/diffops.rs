//! Differential operators on `R = S/I` at the origin: idealizers, differential
//! powers of the maximal ideal, the operator/function pairing, the chain of
//! differential powers and a Gröbner-free jet oracle.

use std::collections::BTreeMap;

use crate::algebra::divided::apply_divided_power;
use crate::algebra::field::Scalar;
use crate::algebra::monomial::{monomials_up_to, Monomial};
use crate::algebra::poly::Poly;
use crate::error::{Error, Result};
use crate::groebner::{kernel_of_quotient_map, Ideal};
use crate::linalg::{rank, rref, SparseEchelon, SparseVec};

/// Operators `δ = Σ g_α D^(α)` of order at most `order` preserving an ideal.
#[derive(Clone, Debug)]
pub struct OperatorBasis {
    pub order: u32,
    /// Multi-indices `α`, graded and lex-descending within a degree.
    pub alphas: Vec<Monomial>,
    /// Coefficient vectors `(g_α)` indexed like `alphas`.
    pub generators: Vec<Vec<Poly>>,
    pub ideal: Ideal,
}

impl OperatorBasis {
    pub fn apply(&self, k: usize, f: &Poly) -> Poly {
        apply_operator(&self.alphas, &self.generators[k], f)
    }

    /// Constant terms `g_α(0)` of generator `k`.
    pub fn constant_row(&self, k: usize) -> Vec<Scalar> {
        self.generators[k].iter().map(|g| g.constant_term()).collect()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// `Σ_α g_α D^(α) f`.
pub fn apply_operator(alphas: &[Monomial], coeffs: &[Poly], f: &Poly) -> Poly {
    let ring = f.ring();
    let mut acc = ring.zero();
    for (a, g) in alphas.iter().zip(coeffs) {
        if g.is_zero() {
            continue;
        }
        let d = apply_divided_power(a, f);
        if !d.is_zero() {
            acc = &acc + &(g * &d);
        }
    }
    acc
}

pub(crate) fn require_origin(ideal: &Ideal) -> Result<()> {
    for g in ideal.generators() {
        if !g.constant_term().is_zero() {
            return Err(Error::PointNotOnVariety(format!(
                "generator {g} does not vanish at the origin"
            )));
        }
    }
    Ok(())
}

/// All operators of order at most `n` on `S` mapping `I` into `I`, modulo
/// `I` times the free module. Uses the finite criterion
/// `δ(f_j x^β) ∈ I` for `|β| <= n`.
pub fn idealizer_operators(ideal: &Ideal, n: u32) -> Result<OperatorBasis> {
    let ring = ideal.ring();
    let d = ring.nvars();
    let alphas = monomials_up_to(d, n);
    let betas = alphas.clone();
    let mut rows: Vec<Vec<Poly>> = Vec::new();
    for f in ideal.generators() {
        for b in &betas {
            let fb = f.mul_term(b, &ring.field().one());
            rows.push(alphas.iter().map(|a| apply_divided_power(a, &fb)).collect());
        }
    }
    let generators: Vec<Vec<Poly>> = if rows.is_empty() {
        (0..alphas.len())
            .map(|k| {
                (0..alphas.len())
                    .map(|j| if j == k { ring.one() } else { ring.zero() })
                    .collect()
            })
            .collect()
    } else {
        let kernel = kernel_of_quotient_map(&rows, alphas.len(), ideal)?;
        let mut out = Vec::new();
        for v in kernel.groebner()? {
            let reduced: Vec<Poly> = v.iter().map(|p| ideal.reduce(p)).collect::<Result<_>>()?;
            if reduced.iter().any(|p| !p.is_zero()) && !out.contains(&reduced) {
                out.push(reduced);
            }
        }
        out
    };
    Ok(OperatorBasis {
        order: n,
        alphas,
        generators,
        ideal: ideal.clone(),
    })
}

/// The differential power `m^<n>` of the maximal ideal of the origin.
#[derive(Clone, Debug)]
pub struct DiffPowerIdeal {
    pub order: u32,
    /// `m^<n>` as an ideal of `S` containing `I`.
    pub ideal: Ideal,
    /// `dim_K R / m^<n>`.
    pub codim: u64,
    /// Standard monomials of `R / m^<n>`.
    pub standard_monomials: Vec<Monomial>,
    /// Row-reduced constant functionals `f ↦ δ(f)(0)` on jets of order `< n`,
    /// indexed by `operators.alphas`.
    pub functionals: Vec<Vec<Scalar>>,
    pub operators: OperatorBasis,
}

/// `m^<n> = {f : δ(f) ∈ m for all operators of order <= n - 1}`.
pub fn differential_power(ideal: &Ideal, n: u32) -> Result<DiffPowerIdeal> {
    if n == 0 {
        return Err(Error::InvalidInput("differential powers start at n = 1".into()));
    }
    require_origin(ideal)?;
    let ring = ideal.ring();
    let field = ring.field();
    let ops = idealizer_operators(ideal, n - 1)?;
    let mut functionals: Vec<Vec<Scalar>> = (0..ops.len()).map(|k| ops.constant_row(k)).collect();
    rref(field, &mut functionals);

    // Jets killed by every functional span the low-degree part of m^<n>.
    let width = ops.alphas.len();
    let pivots: Vec<usize> = functionals
        .iter()
        .map(|r| r.iter().position(|c| !c.is_zero()).expect("nonzero row"))
        .collect();
    let mut gens: Vec<Poly> = Ideal::maximal_power(ring, n).generators().to_vec();
    for free in (0..width).filter(|c| !pivots.contains(c)) {
        let mut terms = vec![(ops.alphas[free].clone(), field.one())];
        for (row, &p) in functionals.iter().zip(&pivots) {
            if !row[free].is_zero() {
                terms.push((ops.alphas[p].clone(), field.neg(&row[free])));
            }
        }
        gens.push(ring.from_terms(terms));
    }
    gens.extend(ideal.generators().iter().cloned());
    let power = Ideal::new(ring, gens);
    let standard_monomials = power
        .standard_monomials()?
        .expect("contains a power of the maximal ideal");
    Ok(DiffPowerIdeal {
        order: n,
        codim: standard_monomials.len() as u64,
        ideal: power,
        standard_monomials,
        functionals,
        operators: ops,
    })
}

/// The pairing `(δ, x^β) ↦ δ(x^β)(0)` between operators of order `< n` and
/// the standard monomials of `R / m^<n>`.
#[derive(Clone, Debug)]
pub struct PairingMatrix {
    pub order: u32,
    /// Operators as coefficient vectors over `alphas`, one per row.
    pub operators: Vec<Vec<Poly>>,
    pub alphas: Vec<Monomial>,
    pub monomials: Vec<Monomial>,
    pub entries: Vec<Vec<Scalar>>,
    pub rank: usize,
}

pub fn pairing_matrix(ideal: &Ideal, n: u32) -> Result<PairingMatrix> {
    let dp = differential_power(ideal, n)?;
    Ok(pairing_from(&dp))
}

/// Pairing built on a computed differential power. Rows are the operator
/// combinations whose constant parts are the reduced functionals.
pub fn pairing_from(dp: &DiffPowerIdeal) -> PairingMatrix {
    let ops = &dp.operators;
    let ring = ops.ideal.ring();
    let field = ring.field();
    // Recover each reduced functional as a combination of the generators.
    let rows: Vec<Vec<Scalar>> = (0..ops.len()).map(|k| ops.constant_row(k)).collect();
    let mut operators = Vec::new();
    for target in &dp.functionals {
        let coeffs = solve_combination(field, &rows, target).expect("functional lies in the span");
        let mut acc = vec![ring.zero(); ops.alphas.len()];
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (slot, g) in acc.iter_mut().zip(&ops.generators[k]) {
                *slot = &*slot + &g.scale(c);
            }
        }
        operators.push(acc);
    }
    let entries: Vec<Vec<Scalar>> = operators
        .iter()
        .map(|op| {
            dp.standard_monomials
                .iter()
                .map(|m| apply_operator(&ops.alphas, op, &ring.monomial(m.clone())).constant_term())
                .collect()
        })
        .collect();
    let rank = rank(field, &entries);
    PairingMatrix {
        order: dp.order,
        operators,
        alphas: ops.alphas.clone(),
        monomials: dp.standard_monomials.clone(),
        entries,
        rank,
    }
}

/// Coefficients `c` with `Σ c_k rows[k] = target`, if any.
fn solve_combination(
    field: &crate::algebra::field::Field,
    rows: &[Vec<Scalar>],
    target: &[Scalar],
) -> Option<Vec<Scalar>> {
    let m = rows.len();
    let width = target.len();
    // Columns are the rows; augment with the target.
    let mut system: Vec<Vec<Scalar>> = (0..width)
        .map(|i| {
            let mut r: Vec<Scalar> = rows.iter().map(|row| row[i].clone()).collect();
            r.push(target[i].clone());
            r
        })
        .collect();
    let pivots = rref(field, &mut system);
    if pivots.contains(&m) {
        return None;
    }
    let mut out = vec![field.zero(); m];
    for (row, &p) in system.iter().zip(&pivots) {
        out[p] = row[m].clone();
    }
    Some(out)
}

/// Outcome of a differential-power chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoreVerdict {
    /// The last two powers coincide; the chain has reached the given ideal.
    CoreStabilized(Vec<String>),
    /// Codimensions are still growing at the end of the chain.
    CoreZeroLikely,
}

#[derive(Clone, Debug)]
pub struct ChainEntry {
    pub order: u32,
    pub codim: u64,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct CoreChain {
    pub entries: Vec<ChainEntry>,
    pub verdict: CoreVerdict,
}

/// `m^<1> ⊇ ... ⊇ m^<N>` with codimensions. The verdict is read off the
/// tail: equal codimensions at `N - 1` and `N` (nested ideals, so equal
/// ideals) report stabilization, anything else reports continued growth.
pub fn differential_core_chain(ideal: &Ideal, n_max: u32) -> Result<CoreChain> {
    if n_max == 0 {
        return Err(Error::InvalidInput("the chain needs at least one step".into()));
    }
    let mut entries = Vec::new();
    for n in 1..=n_max {
        let dp = differential_power(ideal, n)?;
        entries.push(ChainEntry {
            order: n,
            codim: dp.codim,
            generators: dp.ideal.canonical_generators()?,
        });
    }
    let verdict = match entries.as_slice() {
        [.., a, b] if a.codim == b.codim => CoreVerdict::CoreStabilized(b.generators.clone()),
        _ => CoreVerdict::CoreZeroLikely,
    };
    Ok(CoreChain { entries, verdict })
}

/// `dim_K R / m^<n>` from linear algebra on jets of order `<= cutoff`.
///
/// Operator coefficients are truncated at `cutoff` and preservation is
/// imposed modulo `m^(cutoff + 1)`. The count can only drop as the cutoff
/// grows, so it is an upper bound that is attained once the cutoff is large.
pub fn jets_oracle_diff_dim(ideal: &Ideal, n: u32, cutoff: u32) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidInput("differential powers start at n = 1".into()));
    }
    require_origin(ideal)?;
    let ring = ideal.ring();
    let field = ring.field();
    let d = ring.nvars();
    let alphas = monomials_up_to(d, n - 1);
    let jets = monomials_up_to(d, cutoff);
    let jet_index: BTreeMap<Monomial, usize> = jets.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let to_sparse = |p: &Poly| -> SparseVec {
        p.terms()
            .iter()
            .filter_map(|(m, c)| jet_index.get(m).map(|&i| (i, c.clone())))
            .collect()
    };

    // Image of I in S / m^(cutoff + 1).
    let mut ideal_span = SparseEchelon::new(*field);
    for f in ideal.generators() {
        for g in &jets {
            if g.degree() >= cutoff {
                continue;
            }
            ideal_span.insert(to_sparse(&f.mul_term(g, &field.one())));
        }
    }

    // Unknowns: coefficient of x^γ in g_α. Non-constant ones come first so
    // echelon elimination removes them before touching the constants.
    let nonconst = jets.len() - 1;
    let unknown = |a: usize, g: usize| -> usize {
        if g == 0 {
            alphas.len() * nonconst + a
        } else {
            a * nonconst + (g - 1)
        }
    };
    debug_assert!(jets[0].is_one());

    let mut equations = SparseEchelon::new(*field);
    for f in ideal.generators() {
        for b in &alphas {
            let fb = f.mul_term(b, &field.one());
            // equation index: jet monomial -> combination of unknowns
            let mut eqs: BTreeMap<usize, SparseVec> = BTreeMap::new();
            for (ai, a) in alphas.iter().enumerate() {
                let da = apply_divided_power(a, &fb);
                if da.is_zero() {
                    continue;
                }
                for (gi, g) in jets.iter().enumerate() {
                    let shifted = da.mul_term(g, &field.one());
                    let v = ideal_span.reduce_full(to_sparse(&shifted));
                    let u = unknown(ai, gi);
                    for (m, c) in v {
                        eqs.entry(m).or_default().insert(u, c);
                    }
                }
            }
            for (_, eq) in eqs {
                equations.insert(eq);
            }
        }
    }
    let first_constant = alphas.len() * nonconst;
    let constraints = equations.rows().filter(|(&p, _)| p >= first_constant).count();
    Ok((alphas.len() - constraints) as u64)
}

/// Smallest cutoff for which the jet oracle is expected to be exact.
pub fn default_cutoff(ideal: &Ideal, n: u32) -> u32 {
    let maxdeg = ideal.generators().iter().filter_map(|g| g.degree()).max().unwrap_or(0);
    n + maxdeg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Field;
    use crate::algebra::monomial::MonomialOrder;
    use crate::algebra::parse::parse_poly;
    use crate::algebra::poly::Ring;

    fn ring(c: u64, vars: &[&str]) -> Ring {
        Ring::new(Field::from_characteristic(c).unwrap(), vars, MonomialOrder::GRevLex)
    }

    fn cusp(c: u64) -> Ideal {
        let r = ring(c, &["x", "y"]);
        let f = parse_poly(&r, if c == 2 { "x^3 + y^2" } else { "x^3 - y^2" }).unwrap();
        Ideal::new(&r, vec![f])
    }

    fn preserves(ops: &OperatorBasis) -> bool {
        let ring = ops.ideal.ring();
        (0..ops.len()).all(|k| {
            ops.ideal.generators().iter().all(|f| {
                monomials_up_to(ring.nvars(), ops.order).iter().all(|b| {
                    let fb = f.mul_term(b, &ring.field().one());
                    ops.ideal.contains(&ops.apply(k, &fb)).unwrap()
                })
            })
        })
    }

    #[test]
    fn idealizer_of_zero_ideal_is_everything() {
        let r = ring(0, &["x", "y"]);
        let ops = idealizer_operators(&Ideal::zero(&r), 1).unwrap();
        assert_eq!(ops.len(), 3);
    }

    #[test]
    fn idealizer_of_rational_cusp() {
        let i = cusp(0);
        let ops = idealizer_operators(&i, 1).unwrap();
        assert!(preserves(&ops));
        let r = i.ring();
        let euler = vec![r.zero(), parse_poly(r, "2x").unwrap(), parse_poly(r, "3y").unwrap()];
        let other = vec![r.zero(), parse_poly(r, "2y").unwrap(), parse_poly(r, "3x^2").unwrap()];
        for op in [euler, other] {
            let f = &i.generators()[0];
            assert!(i.contains(&apply_operator(&ops.alphas, &op, f)).unwrap());
        }
        assert!(ops.generators.iter().any(|g| g[0].is_constant() && !g[0].is_zero()));
    }

    #[test]
    fn idealizer_of_char_two_cusp() {
        let i = cusp(2);
        let ops = idealizer_operators(&i, 1).unwrap();
        assert!(preserves(&ops));
        // d/dy is an operator; no generator has a unit d/dx coefficient.
        let consts: Vec<Vec<Scalar>> = (0..ops.len()).map(|k| ops.constant_row(k)).collect();
        assert!(consts.iter().all(|r| r[1].is_zero()));
        assert!(consts.iter().any(|r| !r[2].is_zero()));
    }

    #[test]
    fn order_zero_idealizer_is_multiplication() {
        let ops = idealizer_operators(&cusp(0), 0).unwrap();
        assert_eq!(ops.len(), 1);
        assert!(ops.generators[0][0].constant_term().is_one());
    }

    #[test]
    fn differential_power_examples() {
        let r = ring(0, &["x", "y"]);
        let dp = differential_power(&Ideal::zero(&r), 2).unwrap();
        assert_eq!(dp.codim, 3);
        assert!(dp.ideal.same_ideal(&Ideal::maximal_power(&r, 2)).unwrap());

        let dp = differential_power(&cusp(0), 2).unwrap();
        assert_eq!(dp.codim, 1);
        assert!(dp.ideal.same_ideal(&Ideal::maximal(cusp(0).ring())).unwrap());

        let i = cusp(2);
        let dp = differential_power(&i, 2).unwrap();
        assert_eq!(dp.codim, 2);
        let expect = Ideal::new(
            i.ring(),
            vec![parse_poly(i.ring(), "x").unwrap(), parse_poly(i.ring(), "y^2").unwrap()],
        );
        assert!(dp.ideal.same_ideal(&expect).unwrap());
        let names: Vec<String> = dp
            .standard_monomials
            .iter()
            .map(|m| i.ring().format_monomial(m))
            .collect();
        assert_eq!(names, vec!["1", "y"]);
    }

    #[test]
    fn origin_is_required() {
        let r = ring(0, &["x"]);
        let i = Ideal::new(&r, vec![parse_poly(&r, "x - 1").unwrap()]);
        assert!(matches!(differential_power(&i, 1), Err(Error::PointNotOnVariety(_))));
    }

    #[test]
    fn pairing_examples() {
        let p = pairing_matrix(&cusp(2), 2).unwrap();
        assert_eq!(p.rank, 2);
        let f = Field::Prime(2);
        assert_eq!(p.entries, vec![vec![f.one(), f.zero()], vec![f.zero(), f.one()]]);

        let r = ring(0, &["x"]);
        assert_eq!(pairing_matrix(&Ideal::zero(&r), 2).unwrap().rank, 2);
        assert_eq!(pairing_matrix(&cusp(0), 2).unwrap().rank, 1);
    }

    #[test]
    fn chains() {
        let c = differential_core_chain(&cusp(2), 4).unwrap();
        let codims: Vec<u64> = c.entries.iter().map(|e| e.codim).collect();
        assert_eq!(codims, vec![1, 2, 3, 4]);
        assert_eq!(c.verdict, CoreVerdict::CoreZeroLikely);

        let r = ring(0, &["x"]);
        let c = differential_core_chain(&Ideal::zero(&r), 3).unwrap();
        let codims: Vec<u64> = c.entries.iter().map(|e| e.codim).collect();
        assert_eq!(codims, vec![1, 2, 3]);
    }

    #[test]
    fn jet_oracle_examples() {
        assert_eq!(jets_oracle_diff_dim(&cusp(0), 2, 8).unwrap(), 1);
        assert_eq!(jets_oracle_diff_dim(&cusp(2), 2, 8).unwrap(), 2);
        let r = ring(0, &["x", "y"]);
        for cutoff in [0, 2, 5] {
            assert_eq!(jets_oracle_diff_dim(&Ideal::zero(&r), 2, cutoff).unwrap(), 3);
        }
    }
}
