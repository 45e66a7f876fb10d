//! Exact coefficient fields: the rationals and prime fields `F_p`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest admissible prime characteristic (exclusive).
pub const MAX_PRIME: u64 = 1 << 31;

/// The coefficient field of a ring context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

/// A field element. `Mod` values are canonical representatives in `0..p`,
/// `Rat` values are always reduced with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod(u64),
    Rat(BigRational),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl Field {
    /// Builds a field from its characteristic (0 for the rationals).
    pub fn from_characteristic(c: u64) -> Result<Field> {
        if c == 0 {
            Ok(Field::Rational)
        } else {
            Field::prime(c)
        }
    }

    pub fn prime(p: u64) -> Result<Field> {
        if p >= MAX_PRIME || !is_prime(p) {
            return Err(Error::InvalidInput(format!(
                "characteristic {p} is not a prime below 2^31"
            )));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::zero()),
            Field::Prime(_) => Scalar::Mod(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::one()),
            Field::Prime(_) => Scalar::Mod(1),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Mod(v.rem_euclid(*p as i64) as u64),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(*p));
                Scalar::Mod(r.to_u64().expect("residue fits in u64"))
            }
        }
    }

    /// Reduces the fraction `num/den` into the field. Fails when the
    /// denominator vanishes in the field.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        let d = self.from_bigint(den);
        if d.is_zero() {
            return Err(Error::FieldMismatch(format!(
                "{num}/{den} is undefined in characteristic {}",
                self.characteristic()
            )));
        }
        let n = self.from_bigint(num);
        Ok(self.div(&n, &d))
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        self.from_ratio(q.numer(), q.denom())
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod((x + y) % p),
            (Field::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            _ => mismatch(),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod((x + p - y) % p),
            (Field::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x - y),
            _ => mismatch(),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Prime(p), Scalar::Mod(x)) => Scalar::Mod((p - x) % p),
            (Field::Rational, Scalar::Rat(x)) => Scalar::Rat(-x),
            _ => mismatch(),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod(x * y % p),
            (Field::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            _ => mismatch(),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        match (self, a) {
            (Field::Prime(p), Scalar::Mod(x)) => Some(Scalar::Mod(inv_mod(*x, *p))),
            (Field::Rational, Scalar::Rat(x)) => Some(Scalar::Rat(x.recip())),
            _ => mismatch(),
        }
    }

    /// `a / b`; panics when `b` is zero.
    pub fn div(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let inv = self.inv(b).expect("division by zero in field");
        self.mul(a, &inv)
    }

    pub fn pow(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Image of the integer `n` in the field, i.e. `n * 1`.
    pub fn from_u64(&self, n: u64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Mod(n % p),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Field::Rational => "QQ".to_string(),
            Field::Prime(p) => format!("GF({p})"),
        }
    }

    /// Renders a scalar. Prime-field elements use the symmetric representative.
    pub fn format(&self, a: &Scalar) -> String {
        match (self, a) {
            (Field::Prime(p), Scalar::Mod(x)) => {
                if *x > p / 2 {
                    format!("-{}", p - x)
                } else {
                    x.to_string()
                }
            }
            (_, Scalar::Rat(q)) => {
                if q.is_integer() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
            _ => mismatch(),
        }
    }

    /// True when `a` renders with a leading minus sign.
    pub fn is_negative(&self, a: &Scalar) -> bool {
        match (self, a) {
            (Field::Prime(p), Scalar::Mod(x)) => *x > p / 2,
            (_, Scalar::Rat(q)) => q.is_negative(),
            _ => mismatch(),
        }
    }
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod(x) => *x == 0,
            Scalar::Rat(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod(x) => *x == 1,
            Scalar::Rat(q) => q.is_one(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod(x) => write!(f, "{x}"),
            Scalar::Rat(q) => write!(f, "{q}"),
        }
    }
}

#[cold]
fn mismatch() -> ! {
    panic!("scalar does not belong to the field it is combined in")
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut old_r, mut r) = (a as i64, p as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(p as i64) as u64
}

fn binomial_u64_mod(n: u64, k: u64, p: u64) -> u64 {
    // n, k < p here, so the factorials are invertible.
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * inv_mod(den, p) % p
}

/// `C(n, k)` reduced into the field; Lucas' theorem in characteristic `p`.
pub fn binomial(n: u64, k: u64, field: &Field) -> Scalar {
    if k > n {
        return field.zero();
    }
    match field {
        Field::Prime(p) => {
            let (mut n, mut k) = (n, k);
            let mut acc = 1u64;
            while k > 0 || n > 0 {
                let (ni, ki) = (n % p, k % p);
                if ki > ni {
                    return Scalar::Mod(0);
                }
                acc = acc * binomial_u64_mod(ni, ki, *p) % p;
                n /= p;
                k /= p;
            }
            Scalar::Mod(acc)
        }
        Field::Rational => {
            let k = k.min(n - k);
            let mut acc = BigInt::one();
            for i in 0..k {
                acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
            }
            Scalar::Rat(BigRational::from_integer(acc))
        }
    }
}

/// Multinomial-style product `prod_i C(beta_i, alpha_i)` in the field;
/// zero as soon as some `alpha_i > beta_i`.
pub fn binomial_in_field(beta: &[u32], alpha: &[u32], field: &Field) -> Scalar {
    assert_eq!(beta.len(), alpha.len(), "exponent vectors of different arity");
    let mut acc = field.one();
    for (&b, &a) in beta.iter().zip(alpha) {
        if a > b {
            return field.zero();
        }
        acc = field.mul(&acc, &binomial(b as u64, a as u64, field));
        if acc.is_zero() {
            break;
        }
    }
    acc
}
