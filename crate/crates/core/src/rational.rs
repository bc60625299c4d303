//! Exact scalars, vectors and the extended value `Finite | Infinite`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type Vector = Vec<Rational>;
pub type Matrix = Vec<Vector>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn vec_i(xs: &[i64]) -> Vector {
    xs.iter().map(|&x| int(x)).collect()
}

pub fn zeros(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = zeros(n);
    v[i] = Rational::one();
    v
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut s = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg(a: &[Rational]) -> Vector {
    a.iter().map(|x| -x).collect()
}

pub fn scale(t: &Rational, a: &[Rational]) -> Vector {
    a.iter().map(|x| t * x).collect()
}

/// `a + t·b`.
pub fn axpy(a: &[Rational], t: &Rational, b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + t * y).collect()
}

pub fn is_zero_vec(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn mat_vec(m: &[Vector], x: &[Rational]) -> Vector {
    m.iter().map(|row| dot(row, x)).collect()
}

pub fn transpose(m: &[Vector], cols: usize) -> Matrix {
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_mul(a: &[Vector], b: &[Vector], b_cols: usize) -> Matrix {
    let bt = transpose(b, b_cols);
    a.iter()
        .map(|row| bt.iter().map(|col| dot(row, col)).collect())
        .collect()
}

pub fn max_abs(a: &[Rational]) -> Rational {
    a.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
}

pub fn l1(a: &[Rational]) -> Rational {
    a.iter().map(|x| x.abs()).fold(Rational::zero(), |s, x| s + x)
}

/// Positive rescaling to a primitive integer vector (gcd of entries 1).
pub fn primitive(v: &[Rational]) -> Vector {
    let mut lcm = BigInt::one();
    for x in v {
        if !x.is_zero() {
            lcm = lcm.lcm(x.denom());
        }
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn to_f64_vec(v: &[Rational]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

/// Parses `n`, `-n` or `n/d` with `d != 0`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Input(format!("malformed rational `{s}`"));
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Input(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(n, d))
}

pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn format_vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("[{}]", parts.join(","))
}

/// The simplest rational (smallest denominator, then smallest magnitude
/// numerator) in the closed interval `[lo, hi]`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo <= hi);
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    simplest_positive(lo, hi)
}

fn simplest_positive(lo: &Rational, hi: &Rational) -> Rational {
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    if fl.clone() + Rational::one() <= *hi {
        return fl + Rational::one();
    }
    // Both endpoints share the integer part; recurse on reciprocals of the fractional parts.
    let a = lo - &fl;
    let b = hi - &fl;
    let inner = simplest_positive(&b.recip(), &a.recip());
    fl + inner.recip()
}

/// A value in `Q ∪ {+∞}`; the order puts every finite value below `Infinite`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Extended {
    Finite(Rational),
    Infinite,
}

impl Extended {
    pub fn zero() -> Self {
        Extended::Finite(Rational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(x) => Some(x),
            Extended::Infinite => None,
        }
    }

    pub fn le_rational(&self, r: &Rational) -> bool {
        matches!(self, Extended::Finite(x) if x <= r)
    }

    pub fn add(&self, other: &Extended) -> Extended {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a + b),
            _ => Extended::Infinite,
        }
    }

    /// Multiplication by a nonnegative scalar with the convention `0·∞ = 0`.
    pub fn scale(&self, t: &Rational) -> Extended {
        match self {
            Extended::Finite(a) => Extended::Finite(a * t),
            Extended::Infinite if t.is_zero() => Extended::zero(),
            Extended::Infinite => Extended::Infinite,
        }
    }

    /// Product of two nonnegative extended values with `0·∞ = 0`.
    pub fn mul(&self, other: &Extended) -> Extended {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a * b),
            (Extended::Finite(a), Extended::Infinite) | (Extended::Infinite, Extended::Finite(a)) => {
                if a.is_zero() {
                    Extended::zero()
                } else {
                    Extended::Infinite
                }
            }
            _ => Extended::Infinite,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Extended::Finite(x) => to_f64(x),
            Extended::Infinite => f64::INFINITY,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" => Ok(Extended::Infinite),
            t => parse_rational(t).map(Extended::Finite),
        }
    }
}

impl From<Rational> for Extended {
    fn from(x: Rational) -> Self {
        Extended::Finite(x)
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp(b),
            (Extended::Finite(_), Extended::Infinite) => Ordering::Less,
            (Extended::Infinite, Extended::Finite(_)) => Ordering::Greater,
            (Extended::Infinite, Extended::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(x) => f.write_str(&format_rational(x)),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "3", "-7", "2/3", "-5/4"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("6/4").unwrap()), "3/2");
        assert!(parse_rational("3/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn extended_order_and_arithmetic() {
        let a = Extended::Finite(int(5));
        assert!(a < Extended::Infinite);
        assert_eq!(Extended::Infinite.scale(&int(0)), Extended::zero());
        assert_eq!(Extended::Infinite.mul(&Extended::zero()), Extended::zero());
        assert_eq!(a.add(&Extended::Infinite), Extended::Infinite);
        assert_eq!(Extended::parse("inf").unwrap(), Extended::Infinite);
    }

    #[test]
    fn primitive_vectors() {
        assert_eq!(primitive(&[ratio(1, 2), ratio(-3, 4)]), vec_i(&[2, -3]));
        assert_eq!(primitive(&vec_i(&[0, 6, 9])), vec_i(&[0, 2, 3]));
    }

    #[test]
    fn simplest_rationals() {
        assert_eq!(simplest_between(&ratio(31, 32), &int(1)), int(1));
        assert_eq!(simplest_between(&ratio(1, 3), &ratio(2, 5)), ratio(1, 3));
        assert_eq!(simplest_between(&ratio(3, 10), &ratio(7, 20)), ratio(1, 3));
        assert_eq!(simplest_between(&ratio(-1, 2), &ratio(1, 2)), int(0));
        assert_eq!(simplest_between(&ratio(-7, 20), &ratio(-3, 10)), ratio(-1, 3));
        assert_eq!(simplest_between(&ratio(5, 2), &ratio(5, 2)), ratio(5, 2));
    }
}
