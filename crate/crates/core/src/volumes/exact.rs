//! Exact values of the form `r · π^a · √k`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul};

use num::bigint::Sign;
use num::rational::Ratio;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `rational · π^pi_pow · √sqrt_arg`, kept canonical: `sqrt_arg` is a
/// square-free positive integer and every square factor lives in `rational`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactVolume {
    rational: BigRational,
    pi_pow: Ratio<i64>,
    sqrt_arg: BigInt,
}

fn big(n: impl Into<BigInt>) -> BigInt {
    n.into()
}

/// Splits `n > 0` as `a² · b` with `b` square-free.
fn square_split(n: &BigInt) -> (BigInt, BigInt) {
    let mut rest = n.clone();
    let mut outside = BigInt::one();
    let mut inside = BigInt::one();
    let mut p = BigInt::from(2u32);
    while &p * &p <= rest {
        let mut count = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            count += 1;
        }
        for _ in 0..count / 2 {
            outside *= &p;
        }
        if count % 2 == 1 {
            inside *= &p;
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    (outside, inside * rest)
}

/// `1 / ∏_{k=1}^{n-1} k!`, the superfactorial product that every formula carries.
pub fn inv_superfactorial(n: usize) -> BigRational {
    BigRational::new(BigInt::one(), superfactorial(n))
}

/// `∏_{k=1}^{n-1} k!`.
pub fn superfactorial(n: usize) -> BigInt {
    let mut out = BigInt::one();
    let mut fact = BigInt::one();
    for k in 1..n {
        fact *= k;
        out *= &fact;
    }
    out
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

impl ExactVolume {
    /// `rational · π^pi_pow · √sqrt_arg`, canonicalized.
    pub fn new(rational: BigRational, pi_pow: Ratio<i64>, sqrt_arg: BigRational) -> Result<Self> {
        if !sqrt_arg.is_positive() {
            return Err(Error::Constraint(format!("square-root argument {sqrt_arg} must be positive")));
        }
        // √(a/b) = √(ab)/b
        let (num, den) = (sqrt_arg.numer().clone(), sqrt_arg.denom().clone());
        let (outside, inside) = square_split(&(num * &den));
        Ok(Self {
            rational: rational * BigRational::new(outside, den),
            pi_pow,
            sqrt_arg: inside,
        })
    }

    pub fn rational(r: BigRational) -> Self {
        Self {
            rational: r,
            pi_pow: Ratio::zero(),
            sqrt_arg: BigInt::one(),
        }
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(BigRational::from_integer(big(n)))
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    /// `π^p`.
    pub fn pi_pow(p: i64) -> Self {
        Self {
            rational: BigRational::one(),
            pi_pow: Ratio::from_integer(p),
            sqrt_arg: BigInt::one(),
        }
    }

    /// `√(num/den)`.
    pub fn sqrt_of(num: i64, den: i64) -> Self {
        Self::new(BigRational::one(), Ratio::zero(), BigRational::new(big(num), big(den)))
            .expect("callers pass positive arguments")
    }

    /// `2^{e/2}`.
    pub fn sqrt2_pow(e: i64) -> Self {
        let whole = BigRational::from_integer(BigInt::from(2).pow((e.unsigned_abs() / 2) as u32));
        let whole = if e < 0 { whole.recip() } else { whole };
        let v = Self::rational(whole);
        match e.rem_euclid(2) {
            0 => v,
            _ if e > 0 => v * Self::sqrt_of(2, 1),
            _ => v * Self::sqrt_of(1, 2),
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn pi_exponent(&self) -> Ratio<i64> {
        self.pi_pow
    }

    pub fn sqrt_part(&self) -> &BigInt {
        &self.sqrt_arg
    }

    pub fn recip(&self) -> Self {
        Self::one() / self.clone()
    }

    pub fn to_f64(&self) -> f64 {
        let r = self.rational.to_f64().unwrap_or(f64::NAN);
        let pi = std::f64::consts::PI;
        let pi_part = if self.pi_pow.is_integer() {
            pi.powi(self.pi_pow.to_integer() as i32)
        } else {
            pi.powf(*self.pi_pow.numer() as f64 / *self.pi_pow.denom() as f64)
        };
        let s = self.sqrt_arg.to_f64().unwrap_or(f64::NAN).sqrt();
        r * pi_part * s
    }

    fn pi_text(&self) -> Option<String> {
        let p = self.pi_pow;
        if p.is_zero() {
            None
        } else if p.is_one() {
            Some("pi".into())
        } else if p.is_integer() {
            Some(format!("pi^{}", p.numer()))
        } else {
            Some(format!("pi^({}/{})", p.numer(), p.denom()))
        }
    }

    /// Splits into numerator and denominator display factors. `√k` moves to
    /// the denominator when `k` divides the rational's denominator.
    fn parts(&self) -> (bool, Vec<String>, Vec<String>) {
        let neg = self.rational.is_negative();
        let mut p = self.rational.numer().abs();
        let mut q = self.rational.denom().clone();
        let k = &self.sqrt_arg;
        let sqrt_below = !k.is_one() && (&q % k).is_zero();
        let mut num = Vec::new();
        let mut den = Vec::new();
        if sqrt_below {
            q /= k;
        }
        if !k.is_one() && !sqrt_below {
            num.push(format!("sqrt({k})"));
        }
        if let Some(t) = self.pi_text() {
            if self.pi_pow.is_negative() {
                // keep exponents nonnegative in text
                let inv = ExactVolume {
                    pi_pow: -self.pi_pow,
                    ..self.clone()
                };
                den.push(inv.pi_text().unwrap_or_default());
            } else {
                num.push(t);
            }
        }
        if !p.is_one() || num.is_empty() {
            num.insert(0, std::mem::take(&mut p).to_string());
        }
        if !q.is_one() {
            den.insert(0, q.to_string());
        }
        if sqrt_below {
            den.push(format!("sqrt({k})"));
        }
        (neg, num, den)
    }

    pub fn latex(&self) -> String {
        let (neg, num, den) = self.parts();
        let tex = |s: &String| -> String {
            if let Some(inner) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
                format!("\\sqrt{{{inner}}}")
            } else if let Some(e) = s.strip_prefix("pi^") {
                format!("\\pi^{{{}}}", e.trim_matches(|c| c == '(' || c == ')'))
            } else if s == "pi" {
                "\\pi".into()
            } else {
                s.clone()
            }
        };
        let n: String = num.iter().map(tex).collect::<Vec<_>>().join(" ");
        let sign = if neg { "-" } else { "" };
        if den.is_empty() {
            format!("{sign}{n}")
        } else {
            let d: String = den.iter().map(tex).collect::<Vec<_>>().join(" ");
            format!("{sign}\\frac{{{n}}}{{{d}}}")
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(ExactRepr::from(self)).expect("exact volumes serialize")
    }
}

impl fmt::Display for ExactVolume {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (neg, num, den) = self.parts();
        if neg {
            write!(f, "-")?;
        }
        write!(f, "{}", num.join("*"))?;
        match den.len() {
            0 => Ok(()),
            1 => write!(f, "/{}", den[0]),
            _ => write!(f, "/({})", den.join("*")),
        }
    }
}

impl Mul for ExactVolume {
    type Output = ExactVolume;

    fn mul(self, rhs: ExactVolume) -> ExactVolume {
        ExactVolume::new(
            self.rational * rhs.rational,
            self.pi_pow + rhs.pi_pow,
            BigRational::from_integer(self.sqrt_arg * rhs.sqrt_arg),
        )
        .expect("products of positive square roots stay positive")
    }
}

impl Div for ExactVolume {
    type Output = ExactVolume;

    fn div(self, rhs: ExactVolume) -> ExactVolume {
        assert!(!rhs.rational.is_zero(), "division by a zero volume");
        ExactVolume::new(
            self.rational / rhs.rational,
            self.pi_pow - rhs.pi_pow,
            BigRational::new(self.sqrt_arg, rhs.sqrt_arg),
        )
        .expect("quotients of positive square roots stay positive")
    }
}

impl PartialOrd for ExactVolume {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.to_f64().partial_cmp(&other.to_f64())
    }
}

#[derive(Serialize, Deserialize)]
struct ExactRepr {
    exact: String,
    rational: String,
    pi_pow: String,
    sqrt_arg: String,
    float: f64,
    latex: String,
}

fn ratio_text<T: fmt::Display + Clone + num::Integer>(r: &Ratio<T>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl From<&ExactVolume> for ExactRepr {
    fn from(v: &ExactVolume) -> Self {
        ExactRepr {
            exact: v.to_string(),
            rational: ratio_text(&v.rational),
            pi_pow: ratio_text(&v.pi_pow),
            sqrt_arg: format!("{}/1", v.sqrt_arg),
            float: v.to_f64(),
            latex: v.latex(),
        }
    }
}

fn parse_big_ratio(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("expected a rational \"a/b\", got {s:?}"));
    let (a, b) = s.split_once('/').unwrap_or((s, "1"));
    let a: BigInt = a.trim().parse().map_err(|_| bad())?;
    let b: BigInt = b.trim().parse().map_err(|_| bad())?;
    if b.sign() == Sign::NoSign {
        return Err(bad());
    }
    Ok(BigRational::new(a, b))
}

impl Serialize for ExactVolume {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExactRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactVolume {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ExactRepr::deserialize(d)?;
        ExactVolume::from_parts(&r.rational, &r.pi_pow, &r.sqrt_arg).map_err(serde::de::Error::custom)
    }
}

impl ExactVolume {
    /// Rebuilds a value from the `"a/b"` strings of its JSON form.
    pub fn from_parts(rational: &str, pi_pow: &str, sqrt_arg: &str) -> Result<Self> {
        let rational = parse_big_ratio(rational)?;
        let p = parse_big_ratio(pi_pow)?;
        let to_i64 = |x: &BigInt| x.to_i64().ok_or_else(|| Error::Parse(format!("pi exponent {p} too large")));
        let pi_pow = Ratio::new(to_i64(p.numer())?, to_i64(p.denom())?);
        Self::new(rational, pi_pow, parse_big_ratio(sqrt_arg)?)
    }
}
