use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default prime for rank probing: 2^31 - 1.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Smallest admissible probing prime (exclusive).
pub const MIN_PRIME: u64 = 1 << 30;

/// Coefficient field of a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// Validated prime field. The modulus must be a prime above 2^30 and below 2^63.
    pub fn prime(p: u64) -> Result<Field> {
        if p <= MIN_PRIME || p >= (1 << 63) || !is_prime(p) {
            return Err(Error::InvalidArgument(format!(
                "{p} is not a prime in (2^30, 2^63)"
            )));
        }
        Ok(Field::Prime(p))
    }

    /// Whether `k!` is invertible, i.e. division by `k!` is defined.
    pub fn factorial_invertible(&self, k: usize) -> bool {
        match *self {
            Field::Rational => true,
            Field::Prime(p) => (k as u64) < p,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// Exact coefficient: a reduced rational or a residue modulo a prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Mod { value: u64, prime: u64 },
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue by Fermat's little theorem.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl Scalar {
    pub fn zero(field: Field) -> Scalar {
        match field {
            Field::Rational => Scalar::Rational(BigRational::zero()),
            Field::Prime(p) => Scalar::Mod { value: 0, prime: p },
        }
    }

    pub fn one(field: Field) -> Scalar {
        Scalar::from_i64(field, 1)
    }

    pub fn from_i64(field: Field, v: i64) -> Scalar {
        match field {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => {
                let r = (v as i128).rem_euclid(p as i128) as u64;
                Scalar::Mod { value: r, prime: p }
            }
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(Scalar::Rational(BigRational::new(num.into(), den.into())))
    }

    pub fn from_residue(value: u64, prime: u64) -> Scalar {
        Scalar::Mod {
            value: value % prime,
            prime,
        }
    }

    /// Map a rational into `field`. Fails if the denominator vanishes mod p.
    pub fn from_rational(field: Field, q: &BigRational) -> Result<Scalar> {
        match field {
            Field::Rational => Ok(Scalar::Rational(q.clone())),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let num = q.numer().mod_floor(&pb).to_u64().unwrap_or(0);
                let den = q.denom().mod_floor(&pb).to_u64().unwrap_or(0);
                if den == 0 {
                    return Err(Error::Domain(format!("denominator of {q} vanishes mod {p}")));
                }
                Ok(Scalar::Mod {
                    value: mul_mod(num, inv_mod(den, p), p),
                    prime: p,
                })
            }
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Mod { prime, .. } => Field::Prime(*prime),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Mod { .. } => None,
        }
    }

    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Mod { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    fn mismatch(&self, other: &Scalar) -> ! {
        panic!(
            "scalar mode mismatch: {} vs {}",
            self.field(),
            other.field()
        )
    }

    /// Sum; both operands must share a field.
    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Mod { value: a, prime: p }, Scalar::Mod { value: b, prime: q }) if p == q => {
                Scalar::Mod {
                    value: add_mod(*a, *b, *p),
                    prime: *p,
                }
            }
            _ => self.mismatch(other),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Mod { value: a, prime: p }, Scalar::Mod { value: b, prime: q }) if p == q => {
                Scalar::Mod {
                    value: sub_mod(*a, *b, *p),
                    prime: *p,
                }
            }
            _ => self.mismatch(other),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Mod { value: a, prime: p }, Scalar::Mod { value: b, prime: q }) if p == q => {
                Scalar::Mod {
                    value: mul_mod(*a, *b, *p),
                    prime: *p,
                }
            }
            _ => self.mismatch(other),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Mod { value, prime } => Scalar::Mod {
                value: sub_mod(0, *value, *prime),
                prime: *prime,
            },
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        Ok(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Mod { value, prime } => Scalar::Mod {
                value: inv_mod(*value, *prime),
                prime: *prime,
            },
        })
    }

    pub fn pow(&self, e: u32) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(num_traits::pow(a.clone(), e as usize)),
            Scalar::Mod { value, prime } => Scalar::Mod {
                value: pow_mod(*value, e as u64, *prime),
                prime: *prime,
            },
        }
    }

    /// Parse `"num/den"`, `"int"`, or `"int mod p"`.
    pub fn parse(s: &str) -> Result<Scalar> {
        let s = s.trim();
        if let Some((v, p)) = s.split_once(" mod ") {
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad modulus in {s:?}")))?;
            let field = Field::prime(p)?;
            let v: BigInt = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad residue in {s:?}")))?;
            return Scalar::from_rational(field, &BigRational::from_integer(v));
        }
        let q = match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim())
                    .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
                let d = BigInt::from_str(d.trim())
                    .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
                if d.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in {s:?}")));
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(
                BigInt::from_str(s).map_err(|_| Error::Parse(format!("bad integer {s:?}")))?,
            ),
        };
        Ok(Scalar::Rational(q))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Mod { value, prime } => write!(f, "{value} mod {prime}"),
        }
    }
}
