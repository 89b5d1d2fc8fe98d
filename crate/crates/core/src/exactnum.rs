//! Exact coefficient arithmetic.
//!
//! Rationals are [`BigRat`] (`num_rational::BigRational`, always kept in
//! lowest terms with a positive denominator). The two quadratic fields the
//! library needs, Q(i) and Q(√2), are provided as [`Quad<D>`] where the
//! discriminant is a const parameter, so mixing fields inside generic series
//! code is a type error. [`QuadElem`] is the runtime-tagged form used at the
//! API and serialization boundary, where mismatches surface as errors.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub type BigRat = BigRational;

/// Coefficient field used by every series type in the crate.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    fn from_rat(r: BigRat) -> Self;
    fn to_json(&self) -> Value;

    fn from_int(n: i64) -> Self {
        Self::from_rat(BigRat::from_integer(BigInt::from(n)))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r *= other;
        r
    }

    fn checked_div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul_ref(&i))
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }
}

impl Field for BigRat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rat(r: BigRat) -> Self {
        r
    }
    fn to_json(&self) -> Value {
        Value::String(fmt_rat(self))
    }
}

/// `num/den` with the denominator always present (`5/1`, `-3/4`).
pub fn fmt_rat(r: &BigRat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_rat(s: &str) -> Result<BigRat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRat::new(n, d))
        }
        None => Ok(BigRat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(n.into(), d.into())
}

pub fn int(n: i64) -> BigRat {
    BigRat::from_integer(n.into())
}

/// Binomial coefficient; zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Canonical form: lowest terms, positive denominator, zero as 0/1.
pub fn is_canonical(r: &BigRat) -> bool {
    r.denom().is_positive()
        && r.numer().gcd(r.denom()).is_one()
        && (!r.numer().is_zero() || r.denom().is_one())
}

/// Element a + b√D of Q(√D), D ∈ {−1, 2}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Quad<const D: i64> {
    pub a: BigRat,
    pub b: BigRat,
}

/// Gaussian rationals Q(i).
pub type GaussRat = Quad<-1>;
/// Q(√2).
pub type QSqrt2 = Quad<2>;

impl<const D: i64> Quad<D> {
    pub fn new(a: BigRat, b: BigRat) -> Self {
        Quad { a, b }
    }

    pub fn rational(a: BigRat) -> Self {
        Quad { a, b: int(0) }
    }

    /// √D itself.
    pub fn root() -> Self {
        Quad { a: int(0), b: int(1) }
    }

    pub fn conj(&self) -> Self {
        Quad { a: self.a.clone(), b: -self.b.clone() }
    }

    /// a² − D·b²
    pub fn norm(&self) -> BigRat {
        &self.a * &self.a - BigRat::from_integer(D.into()) * &self.b * &self.b
    }

    pub fn is_rational(&self) -> bool {
        Zero::is_zero(&self.b)
    }

    pub fn to_elem(&self) -> QuadElem {
        QuadElem { a: self.a.clone(), b: self.b.clone(), d: D }
    }
}

impl<const D: i64> fmt::Debug for Quad<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})*sqrt({})", self.a, self.b, D)
    }
}

impl<const D: i64> fmt::Display for Quad<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl<const D: i64> Add for Quad<D> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += &rhs;
        self
    }
}

impl<const D: i64> Sub for Quad<D> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= &rhs;
        self
    }
}

impl<const D: i64> Mul for Quad<D> {
    type Output = Self;
    fn mul(mut self, rhs: Self) -> Self {
        self *= &rhs;
        self
    }
}

impl<const D: i64> Neg for Quad<D> {
    type Output = Self;
    fn neg(self) -> Self {
        Quad { a: -self.a, b: -self.b }
    }
}

impl<'a, const D: i64> AddAssign<&'a Quad<D>> for Quad<D> {
    fn add_assign(&mut self, rhs: &'a Quad<D>) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl<'a, const D: i64> SubAssign<&'a Quad<D>> for Quad<D> {
    fn sub_assign(&mut self, rhs: &'a Quad<D>) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl<'a, const D: i64> MulAssign<&'a Quad<D>> for Quad<D> {
    fn mul_assign(&mut self, rhs: &'a Quad<D>) {
        let (a, b) = quad_mul(&self.a, &self.b, &rhs.a, &rhs.b, D);
        self.a = a;
        self.b = b;
    }
}

fn quad_mul(a: &BigRat, b: &BigRat, c: &BigRat, e: &BigRat, d: i64) -> (BigRat, BigRat) {
    let re = a * c + BigRat::from_integer(d.into()) * b * e;
    let im = a * e + b * c;
    (re, im)
}

fn quad_inv(a: &BigRat, b: &BigRat, d: i64) -> Option<(BigRat, BigRat)> {
    let norm = a * a - BigRat::from_integer(d.into()) * b * b;
    if Zero::is_zero(&norm) {
        return None;
    }
    Some((a / &norm, -(b / &norm)))
}

impl<const D: i64> Field for Quad<D> {
    fn zero() -> Self {
        Quad { a: int(0), b: int(0) }
    }
    fn one() -> Self {
        Quad { a: int(1), b: int(0) }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn inv(&self) -> Option<Self> {
        quad_inv(&self.a, &self.b, D).map(|(a, b)| Quad { a, b })
    }
    fn from_rat(r: BigRat) -> Self {
        Quad::rational(r)
    }
    fn to_json(&self) -> Value {
        self.to_elem().to_json()
    }
}

impl QSqrt2 {
    /// Exact sign of a + b√2, decided by comparing a² with 2b².
    pub fn signum(&self) -> Ordering {
        sign_a_plus_b_sqrt2(&self.a, &self.b)
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }
}

impl PartialOrd for QSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some((self.clone() - other.clone()).signum())
    }
}

fn sign_a_plus_b_sqrt2(a: &BigRat, b: &BigRat) -> Ordering {
    let sa = a.cmp(&int(0));
    let sb = b.cmp(&int(0));
    match (sa, sb) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (s, t) if s == t => s,
        _ => {
            // Opposite signs: the term with the larger square wins.
            let a2 = a * a;
            let b2 = BigRat::from_integer(2.into()) * b * b;
            match a2.cmp(&b2) {
                Ordering::Greater => sa,
                Ordering::Less => sb,
                Ordering::Equal => Ordering::Equal,
            }
        }
    }
}

/// Runtime-tagged quadratic element, as exchanged at API and JSON boundaries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub a: BigRat,
    pub b: BigRat,
    pub d: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl QuadElem {
    pub fn new(a: BigRat, b: BigRat, d: i64) -> Result<Self> {
        check_discriminant(d)?;
        Ok(QuadElem { a, b, d })
    }

    pub fn rational(a: BigRat, d: i64) -> Result<Self> {
        QuadElem::new(a, int(0), d)
    }

    pub fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }

    pub fn to_typed<const D: i64>(&self) -> Result<Quad<D>> {
        if self.d != D {
            return Err(Error::DiscriminantMismatch { left: self.d, right: D });
        }
        Ok(Quad { a: self.a.clone(), b: self.b.clone() })
    }

    /// `{"a": "num/den", "b": "num/den", "d": d}`
    pub fn to_json(&self) -> Value {
        json!({ "a": fmt_rat(&self.a), "b": fmt_rat(&self.b), "d": self.d })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| -> Result<BigRat> {
            v.get(k)
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse(format!("missing field {k:?}")))
                .and_then(parse_rat)
        };
        let d = v
            .get("d")
            .and_then(Value::as_i64)
            .ok_or_else(|| Error::Parse("missing field \"d\"".into()))?;
        QuadElem::new(field("a")?, field("b")?, d)
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.b) {
            write!(f, "{}", self.a)
        } else {
            let r = if self.d == -1 { "i".to_string() } else { format!("sqrt({})", self.d) };
            write!(f, "{} + ({})*{}", self.a, self.b, r)
        }
    }
}

fn check_discriminant(d: i64) -> Result<()> {
    if d == -1 || d == 2 {
        Ok(())
    } else {
        Err(Error::UnsupportedDiscriminant(d))
    }
}

/// Exact field arithmetic in Q(√d); both operands must carry the same d.
pub fn quad_field_ops(lhs: &QuadElem, rhs: &QuadElem, op: QuadOp) -> Result<QuadElem> {
    check_discriminant(lhs.d)?;
    check_discriminant(rhs.d)?;
    if lhs.d != rhs.d {
        return Err(Error::DiscriminantMismatch { left: lhs.d, right: rhs.d });
    }
    let d = lhs.d;
    let (a, b) = match op {
        QuadOp::Add => (&lhs.a + &rhs.a, &lhs.b + &rhs.b),
        QuadOp::Sub => (&lhs.a - &rhs.a, &lhs.b - &rhs.b),
        QuadOp::Mul => quad_mul(&lhs.a, &lhs.b, &rhs.a, &rhs.b, d),
        QuadOp::Div => {
            let (ia, ib) = quad_inv(&rhs.a, &rhs.b, d).ok_or(Error::DivisionByZero)?;
            quad_mul(&lhs.a, &lhs.b, &ia, &ib, d)
        }
    };
    Ok(QuadElem { a, b, d })
}

/// Floating approximation of a quadratic element. For d = −1 the imaginary
/// part carries b; for d = 2 it is zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadFloat {
    pub re: f64,
    pub im: f64,
}

/// Dyadic rational approximation of a + b√2 with relative error at most
/// 2^(−precision). Computed from an integer square root bracket, so the bound
/// is guaranteed rather than estimated.
pub fn approx_sqrt2_combo(a: &BigRat, b: &BigRat, precision: u32) -> BigRat {
    if Zero::is_zero(b) {
        return a.clone();
    }
    // value = (p + r√2) / q
    let q: BigInt = a.denom() * b.denom();
    let p: BigInt = a.numer() * b.denom();
    let r: BigInt = b.numer() * a.denom();
    let mut k: u64 = precision as u64 + 8;
    loop {
        let scale = BigInt::one() << k;
        // z ≤ |r|·√2·2^k < z + 1
        let z = (BigInt::from(2) * &r * &r * &scale * &scale).sqrt();
        let (lo_root, hi_root) = if r.is_negative() {
            (-(&z) - 1, -(&z))
        } else {
            (z.clone(), &z + 1)
        };
        let base = &p * &scale;
        let lo = &base + lo_root;
        let hi = &base + hi_root;
        let same_sign = lo.sign() == hi.sign() && lo.sign() != Sign::NoSign;
        if same_sign {
            let min_abs = lo.abs().min(hi.abs());
            // Interval width 1, midpoint error ≤ 1/2; require 1/2 ≤ 2^-precision·min_abs.
            if min_abs.bits() > precision as u64 + 1 {
                let mid = BigRat::new(lo + hi, BigInt::from(2) * scale * q);
                return mid;
            }
        }
        k = k * 2 + 16;
    }
}

/// Float approximation with relative error ≤ 2^(1−precision). f64 carries
/// 53 bits, so precision above 52 is clamped.
pub fn quad_to_float(x: &QuadElem, precision: u32) -> QuadFloat {
    let p = precision.min(52);
    match x.d {
        2 => {
            let approx = approx_sqrt2_combo(&x.a, &x.b, p + 1);
            QuadFloat { re: rat_to_f64(&approx), im: 0.0 }
        }
        _ => QuadFloat { re: rat_to_f64(&x.a), im: rat_to_f64(&x.b) },
    }
}

pub fn qsqrt2_to_f64(x: &QSqrt2) -> f64 {
    rat_to_f64(&approx_sqrt2_combo(&x.a, &x.b, 60))
}

/// Correctly scaled conversion that survives numerators and denominators far
/// outside the f64 exponent range.
pub fn rat_to_f64(r: &BigRat) -> f64 {
    ratio_to_f64(r.numer(), r.denom())
}

pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    // Bring the quotient to ~64 significant bits before dividing.
    let shift = 64 - (nb - db);
    let q = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let f = q.to_f64().unwrap_or(f64::NAN);
    f * 2f64.powi(-(shift as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q2(a: BigRat, b: BigRat) -> QuadElem {
        QuadElem::new(a, b, 2).unwrap()
    }

    #[test]
    fn norm_of_two_minus_root_two() {
        let x = q2(int(2), int(-1));
        let y = q2(int(2), int(1));
        let p = quad_field_ops(&x, &y, QuadOp::Mul).unwrap();
        assert_eq!(p, q2(int(2), int(0)));
    }

    #[test]
    fn i_squared() {
        let i = QuadElem::new(int(0), int(1), -1).unwrap();
        let p = quad_field_ops(&i, &i, QuadOp::Mul).unwrap();
        assert_eq!(p, QuadElem::new(int(-1), int(0), -1).unwrap());
    }

    #[test]
    fn reciprocal_of_two_minus_root_two() {
        let one = q2(int(1), int(0));
        let x = q2(int(2), int(-1));
        let inv = quad_field_ops(&one, &x, QuadOp::Div).unwrap();
        assert_eq!(inv, q2(int(1), rat(1, 2)));
        assert_eq!(quad_field_ops(&inv, &x, QuadOp::Mul).unwrap(), one);
    }

    #[test]
    fn mismatch_and_zero_division() {
        let i = QuadElem::new(int(0), int(1), -1).unwrap();
        let r = q2(int(1), int(1));
        assert!(matches!(
            quad_field_ops(&i, &r, QuadOp::Add),
            Err(Error::DiscriminantMismatch { .. })
        ));
        let z = q2(int(0), int(0));
        assert!(matches!(quad_field_ops(&r, &z, QuadOp::Div), Err(Error::DivisionByZero)));
        assert!(matches!(QuadElem::new(int(1), int(1), 3), Err(Error::UnsupportedDiscriminant(3))));
    }

    #[test]
    fn float_values() {
        let x = q2(int(2), int(-1));
        let f = quad_to_float(&x, 50).re;
        assert!((f - (2.0 - 2f64.sqrt())).abs() < 1e-15);
        assert!((f - 0.5857864).abs() < 1e-7);
        let p2 = q2(rat(5 * 19, 34), rat(-5 * 11, 34));
        assert!((quad_to_float(&p2, 40).re - 0.506).abs() < 1e-3);
        assert_eq!(quad_to_float(&q2(int(0), int(0)), 40).re, 0.0);
    }

    #[test]
    fn approximation_bound_under_cancellation() {
        // 99/70 is a convergent of √2, so 99 − 70√2 ≈ 0.00714 suffers heavy cancellation.
        let a = int(99);
        let b = int(-70);
        let approx = approx_sqrt2_combo(&a, &b, 80);
        let exact = 99.0f64 - 70.0 * 2f64.sqrt();
        assert!((rat_to_f64(&approx) / exact - 1.0).abs() < 1e-9);
        // Compare against a much tighter bracket: |approx − x| ≤ 2^-80 |x|.
        let tight = approx_sqrt2_combo(&a, &b, 200);
        let diff = (&approx - &tight).abs();
        let bound = tight.abs() * BigRat::new(1.into(), BigInt::one() << 79u32);
        assert!(diff <= bound);
    }

    #[test]
    fn exact_sign() {
        assert_eq!(QSqrt2::new(int(3), int(-2)).signum(), Ordering::Greater);
        assert_eq!(QSqrt2::new(int(-3), int(2)).signum(), Ordering::Less);
        assert_eq!(QSqrt2::new(int(1), int(-1)).signum(), Ordering::Less);
        assert_eq!(QSqrt2::new(int(0), int(0)).signum(), Ordering::Equal);
    }

    #[test]
    fn json_roundtrip() {
        let x = q2(rat(5, 34), rat(-55, 34));
        assert_eq!(QuadElem::from_json(&x.to_json()).unwrap(), x);
        assert_eq!(fmt_rat(&int(5)), "5/1");
        assert_eq!(parse_rat("-3/6").unwrap(), rat(-1, 2));
    }

    #[test]
    fn large_ratio_to_f64() {
        let big = BigInt::from(3) << 5000u32;
        let r = BigRat::new(big.clone(), (BigInt::from(1) << 5000u32) * 4);
        assert!((rat_to_f64(&r) - 0.75).abs() < 1e-15);
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn small_rat() -> impl Strategy<Value = BigRat> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| rat(n, d))
    }

    fn sqrt2_elem() -> impl Strategy<Value = QSqrt2> {
        (small_rat(), small_rat()).prop_map(|(a, b)| QSqrt2::new(a, b))
    }

    fn gauss_elem() -> impl Strategy<Value = GaussRat> {
        (small_rat(), small_rat()).prop_map(|(a, b)| GaussRat::new(a, b))
    }

    fn canonical<const D: i64>(x: &Quad<D>) -> bool {
        is_canonical(&x.a) && is_canonical(&x.b)
    }

    proptest! {
        #[test]
        fn field_axioms_sqrt2(x in sqrt2_elem(), y in sqrt2_elem(), z in sqrt2_elem()) {
            prop_assert_eq!((x.clone() * y.clone()) * z.clone(), x.clone() * (y.clone() * z.clone()));
            prop_assert_eq!(x.clone() * (y.clone() + z.clone()), x.clone() * y.clone() + x.clone() * z.clone());
            if !Field::is_zero(&x) {
                let inv = x.inv().unwrap();
                prop_assert!(canonical(&inv));
                prop_assert_eq!(x.clone() * inv, QSqrt2::one());
            }
            prop_assert!(canonical(&(x * y)));
        }

        #[test]
        fn field_axioms_gauss(x in gauss_elem(), y in gauss_elem(), z in gauss_elem()) {
            prop_assert_eq!((x.clone() + y.clone()) + z.clone(), x.clone() + (y.clone() + z.clone()));
            prop_assert_eq!(x.clone() * (y.clone() - z.clone()), x.clone() * y.clone() - x.clone() * z.clone());
            if !Field::is_zero(&x) {
                prop_assert_eq!(x.clone() * x.inv().unwrap(), GaussRat::one());
            }
        }

        #[test]
        fn sign_matches_float(x in sqrt2_elem()) {
            let f = rat_to_f64(&x.a) + rat_to_f64(&x.b) * 2f64.sqrt();
            if f.abs() > 1e-9 {
                prop_assert_eq!(x.signum(), if f > 0.0 { Ordering::Greater } else { Ordering::Less });
            }
        }
    }
}
