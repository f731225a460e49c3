//! Exact rational scalars and a few helpers used throughout the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Builds `num/den` as an exact rational.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// `base^exp` for a non-negative exponent.
pub fn pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

/// Lossy conversion to `f64`; very large numerators and denominators are
/// rescaled before dividing so the result stays finite.
pub fn to_f64(x: &Rational) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let n = x.numer();
    let d = x.denom();
    let shift = n.bits().max(d.bits()).saturating_sub(1000);
    let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Closest rational to `x` with the given denominator.
pub fn from_f64_with_den(x: f64, den: i64) -> Rational {
    rat((x * den as f64).round() as i64, den)
}

/// Scales a vector of rationals to coprime integers with a positive first
/// nonzero entry. The zero vector is returned unchanged.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<Rational> {
    let lcm = v
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let gcd = ints
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return v.to_vec();
    }
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(first) if first.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &gcd * &sign))
        .collect()
}

/// Exact dot product.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Formats as `n` or `n/d`.
pub fn display(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `n` or `n/d`.
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_vector_has_unit_content() {
        let v = vec![rat(2, 3), rat(-4, 3), zero(), rat(2, 1)];
        assert_eq!(primitive_integer_vector(&v), vec![int(1), int(-2), int(0), int(3)]);
        let w = vec![rat(-1, 2), rat(1, 4)];
        assert_eq!(primitive_integer_vector(&w), vec![int(2), int(-1)]);
    }

    #[test]
    fn display_and_parse_agree() {
        for x in [rat(3, 7), int(-5), rat(-12, 5), zero()] {
            assert_eq!(parse(&display(&x)), Some(x));
        }
        assert_eq!(parse("1/0"), None);
    }

    #[test]
    fn huge_values_convert_finitely() {
        let big = pow(&rat(5, 3), 2000);
        let ratio = &big / (&big + one());
        assert!((to_f64(&ratio) - 1.0).abs() < 1e-12);
    }
}
