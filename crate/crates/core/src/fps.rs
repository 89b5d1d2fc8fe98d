//! Sparse Laurent polynomials and power series in t truncated at a fixed order.
//!
//! A [`TSeries`] of order N stores the coefficients of t⁰..t^N; everything
//! from t^(N+1) on is unknown. Binary operations return a series whose order
//! is the smaller of the two. Coefficients are [`Laurent`] polynomials keyed by
//! an [`Exponent`] type, which fixes the number of variables at compile time
//! (`i64` for x, `(i64, i64)` for x and y, `[i64; 3]` for x, y and a marker v).

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactnum::{BigRat, Field};

pub trait Exponent: Copy + Ord + Hash + Debug + Send + Sync + 'static {
    /// Variable names in key order, used for JSON dumps.
    const VARS: &'static [&'static str];
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    /// The x-exponent, which drives positive/negative splitting.
    fn x(self) -> i64;
    fn components(self) -> Vec<i64>;
    fn from_components(c: &[i64]) -> Option<Self>;
}

impl Exponent for i64 {
    const VARS: &'static [&'static str] = &["x"];
    fn zero() -> Self {
        0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn x(self) -> i64 {
        self
    }
    fn components(self) -> Vec<i64> {
        vec![self]
    }
    fn from_components(c: &[i64]) -> Option<Self> {
        match c {
            [i] => Some(*i),
            _ => None,
        }
    }
}

impl Exponent for (i64, i64) {
    const VARS: &'static [&'static str] = &["x", "y"];
    fn zero() -> Self {
        (0, 0)
    }
    fn add(self, other: Self) -> Self {
        (self.0 + other.0, self.1 + other.1)
    }
    fn x(self) -> i64 {
        self.0
    }
    fn components(self) -> Vec<i64> {
        vec![self.0, self.1]
    }
    fn from_components(c: &[i64]) -> Option<Self> {
        match c {
            [i, j] => Some((*i, *j)),
            _ => None,
        }
    }
}

impl Exponent for [i64; 3] {
    const VARS: &'static [&'static str] = &["x", "y", "v"];
    fn zero() -> Self {
        [0; 3]
    }
    fn add(self, other: Self) -> Self {
        [self[0] + other[0], self[1] + other[1], self[2] + other[2]]
    }
    fn x(self) -> i64 {
        self[0]
    }
    fn components(self) -> Vec<i64> {
        self.to_vec()
    }
    fn from_components(c: &[i64]) -> Option<Self> {
        match c {
            [i, j, k] => Some([*i, *j, *k]),
            _ => None,
        }
    }
}

/// Finite-support Laurent polynomial; zero coefficients are never stored.
#[derive(Clone, PartialEq, Debug)]
pub struct Laurent<E: Exponent, F: Field = BigRat> {
    terms: BTreeMap<E, F>,
}

pub type LaurentPoly<F = BigRat> = Laurent<i64, F>;
pub type LaurentPoly2<F = BigRat> = Laurent<(i64, i64), F>;
pub type LaurentPoly3<F = BigRat> = Laurent<[i64; 3], F>;

impl<E: Exponent, F: Field> Default for Laurent<E, F> {
    fn default() -> Self {
        Laurent { terms: BTreeMap::new() }
    }
}

impl<E: Exponent, F: Field> Laurent<E, F> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(E::zero(), c)
    }

    pub fn monomial(e: E, c: F) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (E, F)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&E, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &E) -> Option<&F> {
        self.terms.get(e)
    }

    pub fn coeff_or_zero(&self, e: &E) -> F {
        self.terms.get(e).cloned().unwrap_or_else(F::zero)
    }

    /// The coefficient if the polynomial is a constant (possibly zero).
    pub fn as_scalar(&self) -> Option<F> {
        match self.terms.len() {
            0 => Some(F::zero()),
            1 => self.terms.get(&E::zero()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, e: E, c: F) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        for (e, c) in &other.terms {
            self.add_term(*e, c.clone());
        }
    }

    pub fn sub_assign_ref(&mut self, other: &Self) {
        for (e, c) in &other.terms {
            self.add_term(*e, -c.clone());
        }
    }

    /// self += a·b
    pub fn add_product(&mut self, a: &Self, b: &Self) {
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                self.add_term(ea.add(*eb), ca.mul_ref(cb));
            }
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Laurent { terms: self.terms.iter().map(|(e, v)| (*e, v.mul_ref(c))).collect() }
    }

    pub fn shift(&self, by: E) -> Self {
        Laurent { terms: self.terms.iter().map(|(e, v)| (e.add(by), v.clone())).collect() }
    }

    pub fn map_exponents<E2: Exponent>(&self, f: impl Fn(E) -> E2) -> Laurent<E2, F> {
        Laurent::from_terms(self.terms.iter().map(|(e, c)| (f(*e), c.clone())))
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> Laurent<E, G> {
        Laurent::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    pub fn filter(&self, keep: impl Fn(E) -> bool) -> Self {
        Laurent {
            terms: self.terms.iter().filter(|(e, _)| keep(**e)).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    pub fn min_x(&self) -> Option<i64> {
        self.terms.keys().map(|e| e.x()).min()
    }

    pub fn max_x(&self) -> Option<i64> {
        self.terms.keys().map(|e| e.x()).max()
    }

    /// Value with every variable set to 1.
    pub fn sum_coeffs(&self) -> F {
        let mut s = F::zero();
        for c in self.terms.values() {
            s += c;
        }
        s
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl<F: Field> LaurentPoly<F> {
    /// Evaluates at x = α (α must be invertible if negative exponents occur).
    pub fn eval(&self, alpha: &F) -> Option<F> {
        let mut acc = F::zero();
        for (e, c) in &self.terms {
            let p = if *e >= 0 { alpha.pow(*e as u32) } else { alpha.inv()?.pow((-*e) as u32) };
            acc += &c.mul_ref(&p);
        }
        Some(acc)
    }

    /// x ↦ x̄.
    pub fn reflect(&self) -> Self {
        self.map_exponents(|e| -e)
    }
}

impl<'a, E: Exponent, F: Field> Add for &'a Laurent<E, F> {
    type Output = Laurent<E, F>;
    fn add(self, rhs: Self) -> Laurent<E, F> {
        let mut r = self.clone();
        r.add_assign_ref(rhs);
        r
    }
}

impl<'a, E: Exponent, F: Field> Sub for &'a Laurent<E, F> {
    type Output = Laurent<E, F>;
    fn sub(self, rhs: Self) -> Laurent<E, F> {
        let mut r = self.clone();
        r.sub_assign_ref(rhs);
        r
    }
}

impl<'a, E: Exponent, F: Field> Mul for &'a Laurent<E, F> {
    type Output = Laurent<E, F>;
    fn mul(self, rhs: Self) -> Laurent<E, F> {
        let mut r = Laurent::zero();
        r.add_product(self, rhs);
        r
    }
}

impl<'a, E: Exponent, F: Field> Neg for &'a Laurent<E, F> {
    type Output = Laurent<E, F>;
    fn neg(self) -> Laurent<E, F> {
        Laurent { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

/// Power series in t with Laurent-polynomial coefficients, known mod t^(order+1).
#[derive(Clone, PartialEq, Debug)]
pub struct TSeries<E: Exponent, F: Field = BigRat> {
    order: usize,
    coeffs: Vec<Laurent<E, F>>,
}

pub type Series1<F = BigRat> = TSeries<i64, F>;
pub type Series2<F = BigRat> = TSeries<(i64, i64), F>;
pub type Series3<F = BigRat> = TSeries<[i64; 3], F>;

impl<E: Exponent, F: Field> TSeries<E, F> {
    pub fn zero(order: usize) -> Self {
        TSeries { order, coeffs: vec![Laurent::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(order, Laurent::one())
    }

    pub fn constant(order: usize, c: Laurent<E, F>) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// Series from its first coefficients; missing ones are zero, extra ones dropped.
    pub fn from_coeffs(order: usize, coeffs: Vec<Laurent<E, F>>) -> Self {
        let mut coeffs = coeffs;
        coeffs.resize(order + 1, Laurent::zero());
        TSeries { order, coeffs }
    }

    /// Series with scalar coefficients c₀, c₁, … (placed at the zero exponent).
    pub fn from_scalars(order: usize, scalars: impl IntoIterator<Item = F>) -> Self {
        let coeffs = scalars.into_iter().take(order + 1).map(Laurent::constant).collect();
        Self::from_coeffs(order, coeffs)
    }

    /// The single term c·e·tⁿ.
    pub fn monomial(order: usize, e: E, n: usize, c: F) -> Self {
        let mut s = Self::zero(order);
        if n <= order {
            s.coeffs[n] = Laurent::monomial(e, c);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Laurent<E, F>] {
        &self.coeffs
    }

    /// Coefficient of tⁿ as a Laurent polynomial.
    pub fn t_coeff(&self, n: usize) -> Result<&Laurent<E, F>> {
        self.coeffs.get(n).ok_or(Error::BeyondOrder { n, order: self.order })
    }

    /// Exact coefficient of e·tⁿ; zero when absent.
    pub fn coeff(&self, e: E, n: usize) -> Result<F> {
        Ok(self.t_coeff(n)?.coeff_or_zero(&e))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Laurent::is_zero)
    }

    /// [e]·tⁿ for n = 0..=order.
    pub fn coeff_seq(&self, e: E) -> Vec<F> {
        self.coeffs.iter().map(|c| c.coeff_or_zero(&e)).collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        TSeries { order, coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn scale(&self, c: &F) -> Self {
        TSeries { order: self.order, coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn mul_laurent(&self, p: &Laurent<E, F>) -> Self {
        TSeries { order: self.order, coeffs: self.coeffs.iter().map(|c| c * p).collect() }
    }

    /// Multiplies by t^k, keeping the order.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![Laurent::zero(); k.min(self.order + 1)];
        coeffs.extend(self.coeffs.iter().take((self.order + 1).saturating_sub(k)).cloned());
        TSeries { order: self.order, coeffs }
    }

    /// Divides by t^k; the result is known to order − k.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if k > self.order {
            return Err(Error::NotDivisibleByT(k));
        }
        if self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return Err(Error::NotDivisibleByT(k));
        }
        Ok(TSeries { order: self.order - k, coeffs: self.coeffs[k..].to_vec() })
    }

    pub fn map_exponents<E2: Exponent>(&self, f: impl Fn(E) -> E2 + Copy) -> TSeries<E2, F> {
        TSeries { order: self.order, coeffs: self.coeffs.iter().map(|c| c.map_exponents(f)).collect() }
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G + Copy) -> TSeries<E, G> {
        TSeries { order: self.order, coeffs: self.coeffs.iter().map(|c| c.map_coeffs(f)).collect() }
    }

    pub fn filter(&self, keep: impl Fn(E) -> bool + Copy) -> Self {
        TSeries { order: self.order, coeffs: self.coeffs.iter().map(|c| c.filter(keep)).collect() }
    }

    /// Scalar series obtained by setting every Laurent variable to 1.
    pub fn sum_coeffs(&self) -> Vec<F> {
        self.coeffs.iter().map(Laurent::sum_coeffs).collect()
    }

    /// Coefficients when every tⁿ coefficient is a constant.
    pub fn scalars(&self) -> Option<Vec<F>> {
        self.coeffs.iter().map(Laurent::as_scalar).collect()
    }

    fn constant_is_one(&self) -> bool {
        self.coeffs[0] == Laurent::one()
    }

    /// Cauchy product truncated at min(order_a, order_b). Each tⁿ coefficient
    /// is computed independently, so the parallel evaluation is deterministic.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let coeffs = (0..=order)
            .into_par_iter()
            .map(|n| {
                let mut acc = Laurent::zero();
                for k in 0..=n {
                    let (a, b) = (&self.coeffs[k], &other.coeffs[n - k]);
                    if !a.is_zero() && !b.is_zero() {
                        acc.add_product(a, b);
                    }
                }
                acc
            })
            .collect();
        TSeries { order, coeffs }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.order);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// 1/a, from r₀ = 1 and rₙ = −Σ_{k≥1} a_k r_{n−k}.
    pub fn recip(&self) -> Result<Self> {
        if !self.constant_is_one() {
            return Err(Error::BadConstantTerm { expected: "1" });
        }
        let mut r: Vec<Laurent<E, F>> = Vec::with_capacity(self.order + 1);
        r.push(Laurent::one());
        for n in 1..=self.order {
            let mut acc = Laurent::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() && !r[n - k].is_zero() {
                    acc.add_product(&self.coeffs[k], &r[n - k]);
                }
            }
            r.push(-&acc);
        }
        Ok(TSeries { order: self.order, coeffs: r })
    }

    /// Principal square root (constant term 1).
    pub fn sqrt(&self) -> Result<Self> {
        if !self.constant_is_one() {
            return Err(Error::BadConstantTerm { expected: "1" });
        }
        let half = F::from_rat(BigRat::new(1.into(), 2.into()));
        let mut s: Vec<Laurent<E, F>> = Vec::with_capacity(self.order + 1);
        s.push(Laurent::one());
        for n in 1..=self.order {
            // Σ_{k=1}^{n−1} s_k s_{n−k}, using the symmetry of the sum.
            let mut cross = Laurent::zero();
            for k in 1..n {
                if k >= n - k {
                    break;
                }
                cross.add_product(&s[k], &s[n - k]);
            }
            let mut sq = &cross + &cross;
            if n % 2 == 0 && n >= 2 {
                sq.add_product(&s[n / 2], &s[n / 2]);
            }
            s.push((&self.coeffs[n] - &sq).scale(&half));
        }
        Ok(TSeries { order: self.order, coeffs: s })
    }

    /// log a for a(0) = 1, from n·Lₙ = n·aₙ − Σ_{k=1}^{n−1} k·L_k·a_{n−k}.
    pub fn log(&self) -> Result<Self> {
        if !self.constant_is_one() {
            return Err(Error::BadConstantTerm { expected: "1" });
        }
        let mut l: Vec<Laurent<E, F>> = Vec::with_capacity(self.order + 1);
        l.push(Laurent::zero());
        for n in 1..=self.order {
            let mut acc = self.coeffs[n].scale(&F::from_int(n as i64));
            for k in 1..n {
                if !l[k].is_zero() && !self.coeffs[n - k].is_zero() {
                    let prod = &l[k] * &self.coeffs[n - k];
                    acc.sub_assign_ref(&prod.scale(&F::from_int(k as i64)));
                }
            }
            l.push(acc.scale(&F::from_rat(BigRat::new(1.into(), (n as i64).into()))));
        }
        Ok(TSeries { order: self.order, coeffs: l })
    }

    /// exp a for a(0) = 0, from n·Eₙ = Σ_{k=1}^{n} k·a_k·E_{n−k}.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::BadConstantTerm { expected: "0" });
        }
        let weighted: Vec<Laurent<E, F>> =
            self.coeffs.iter().enumerate().map(|(k, c)| c.scale(&F::from_int(k as i64))).collect();
        let mut ex: Vec<Laurent<E, F>> = Vec::with_capacity(self.order + 1);
        ex.push(Laurent::one());
        for n in 1..=self.order {
            let mut acc = Laurent::zero();
            for k in 1..=n {
                if !weighted[k].is_zero() && !ex[n - k].is_zero() {
                    acc.add_product(&weighted[k], &ex[n - k]);
                }
            }
            ex.push(acc.scale(&F::from_rat(BigRat::new(1.into(), (n as i64).into()))));
        }
        Ok(TSeries { order: self.order, coeffs: ex })
    }

    /// Splits into the terms with x-exponent ≥ 0 and those with x-exponent < 0.
    pub fn x_split(&self) -> (Self, Self) {
        (self.filter(|e| e.x() >= 0), self.filter(|e| e.x() < 0))
    }

    /// `{"vars": [...,"t"], "order": N, "terms": [{"i":…,"j":…,"n":…,"c":…}]}`,
    /// terms sorted by (n, i, j).
    pub fn to_json(&self) -> Value {
        let keys = exponent_keys(E::VARS);
        let mut terms = Vec::new();
        for (n, c) in self.coeffs.iter().enumerate() {
            for (e, v) in c.iter() {
                let mut obj = serde_json::Map::new();
                for (k, x) in keys.iter().zip(e.components()) {
                    obj.insert((*k).to_string(), json!(x));
                }
                obj.insert("n".into(), json!(n));
                obj.insert("c".into(), v.to_json());
                terms.push(Value::Object(obj));
            }
        }
        let mut vars: Vec<&str> = E::VARS.to_vec();
        vars.push("t");
        json!({ "vars": vars, "order": self.order, "terms": terms })
    }
}

fn exponent_keys(vars: &[&str]) -> Vec<&'static str> {
    ["i", "j", "k"].into_iter().take(vars.len()).collect()
}

impl<E: Exponent> TSeries<E, BigRat> {
    /// Inverse of [`TSeries::to_json`] for rational series.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(m.to_string());
        let order = v.get("order").and_then(Value::as_u64).ok_or_else(|| bad("missing order"))? as usize;
        let keys = exponent_keys(E::VARS);
        let mut s = Self::zero(order);
        for t in v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing terms"))? {
            let comps: Option<Vec<i64>> = keys.iter().map(|k| t.get(*k).and_then(Value::as_i64)).collect();
            let e = comps.as_deref().and_then(E::from_components).ok_or_else(|| bad("bad exponent"))?;
            let n = t.get("n").and_then(Value::as_u64).ok_or_else(|| bad("bad n"))? as usize;
            let c = t.get("c").and_then(Value::as_str).ok_or_else(|| bad("bad c"))?;
            if n > order {
                return Err(bad("term beyond order"));
            }
            s.coeffs[n].add_term(e, crate::exactnum::parse_rat(c)?);
        }
        Ok(s)
    }
}

impl<'a, E: Exponent, F: Field> Add for &'a TSeries<E, F> {
    type Output = TSeries<E, F>;
    fn add(self, rhs: Self) -> TSeries<E, F> {
        let order = self.order.min(rhs.order);
        TSeries { order, coeffs: (0..=order).map(|n| &self.coeffs[n] + &rhs.coeffs[n]).collect() }
    }
}

impl<'a, E: Exponent, F: Field> Sub for &'a TSeries<E, F> {
    type Output = TSeries<E, F>;
    fn sub(self, rhs: Self) -> TSeries<E, F> {
        let order = self.order.min(rhs.order);
        TSeries { order, coeffs: (0..=order).map(|n| &self.coeffs[n] - &rhs.coeffs[n]).collect() }
    }
}

impl<'a, E: Exponent, F: Field> Mul for &'a TSeries<E, F> {
    type Output = TSeries<E, F>;
    fn mul(self, rhs: Self) -> TSeries<E, F> {
        TSeries::mul(self, rhs)
    }
}

impl<'a, E: Exponent, F: Field> Neg for &'a TSeries<E, F> {
    type Output = TSeries<E, F>;
    fn neg(self) -> TSeries<E, F> {
        TSeries { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

/// Embeds a series in x into the two-variable ring (y-exponent 0).
pub fn lift_xy<F: Field>(s: &Series1<F>) -> Series2<F> {
    s.map_exponents(|i| (i, 0))
}

/// x̄ ↦ x on a one-variable series.
pub fn reflect<F: Field>(s: &Series1<F>) -> Series1<F> {
    s.map_exponents(|i: i64| -i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn scalar_series(order: usize, c: &[i64]) -> Series1 {
        TSeries::from_scalars(order, c.iter().map(|v| int(*v)))
    }

    fn catalan(n: usize) -> Vec<BigRat> {
        let mut c = vec![int(1)];
        for k in 1..n {
            let mut s = int(0);
            for i in 0..k {
                s += &c[i] * &c[k - 1 - i];
            }
            c.push(s);
        }
        c
    }

    #[test]
    fn product_of_conjugates() {
        let a = TSeries::from_coeffs(2, vec![LaurentPoly::one(), LaurentPoly::monomial(1, int(1))]);
        let b = TSeries::from_coeffs(2, vec![LaurentPoly::one(), LaurentPoly::monomial(1, int(-1))]);
        let p = a.mul(&b);
        assert_eq!(p.coeff(0, 0).unwrap(), int(1));
        assert_eq!(p.coeff(1, 1).unwrap(), int(0));
        assert_eq!(p.coeff(2, 2).unwrap(), int(-1));
        assert_eq!(a.mul(&TSeries::one(2)), a);
    }

    #[test]
    fn catalan_at_t_and_minus_t() {
        let c = catalan(8);
        let ct: Series1 = TSeries::from_scalars(6, c.iter().cloned());
        let cmt: Series1 = TSeries::from_scalars(6, c.iter().enumerate().map(|(n, v)| if n % 2 == 1 { -v.clone() } else { v.clone() }));
        let p = ct.mul(&cmt);
        assert_eq!(p.scalars().unwrap(), vec![int(1), int(0), int(3), int(0), int(22), int(0), int(211)]);
    }

    #[test]
    fn reciprocal_examples() {
        let one_minus_t = scalar_series(6, &[1, -1]);
        assert_eq!(one_minus_t.recip().unwrap().scalars().unwrap(), vec![int(1); 7]);
        // Unrestricted square-lattice walks: 4 of length 2 return to the origin.
        let step = Laurent::from_terms([((1, 0), int(-1)), ((-1, 0), int(-1)), ((0, 1), int(-1)), ((0, -1), int(-1))]);
        let k = TSeries::from_coeffs(4, vec![LaurentPoly2::one(), step]);
        let free = k.recip().unwrap();
        assert_eq!(free.coeff((0, 0), 2).unwrap(), int(4));
        assert_eq!(free.coeff((0, 0), 4).unwrap(), int(36));
        assert_eq!(free.recip().unwrap(), k);
        assert!(matches!(scalar_series(3, &[2, 1]).recip(), Err(Error::BadConstantTerm { .. })));
    }

    #[test]
    fn sqrt_of_one_minus_4t() {
        let s = scalar_series(4, &[1, -4]).sqrt().unwrap();
        assert_eq!(s.scalars().unwrap(), vec![int(1), int(-2), int(-2), int(-4), int(-10)]);
        // equals 1 − 2tC(t)
        let c = catalan(5);
        for n in 1..=4 {
            assert_eq!(s.coeff(0, n).unwrap(), int(-2) * &c[n - 1]);
        }
        assert!(scalar_series(3, &[4, 1]).sqrt().is_err());
    }

    #[test]
    fn log_and_exp() {
        let geo = scalar_series(5, &[1, -1]).recip().unwrap();
        let l = geo.log().unwrap();
        let expect: Vec<BigRat> = (0..=5).map(|n| if n == 0 { int(0) } else { rat(1, n) }).collect();
        assert_eq!(l.scalars().unwrap(), expect);
        assert_eq!(Series1::<BigRat>::zero(4).exp().unwrap(), Series1::one(4));
        assert!(geo.exp().is_err());
        assert!(scalar_series(2, &[0, 1]).log().is_err());
    }

    #[test]
    fn split_examples() {
        let p = Laurent::from_terms([(-1, int(1)), (0, int(2)), (1, int(3))]);
        let s = TSeries::constant(2, p);
        let (pos, neg) = s.x_split();
        assert_eq!(pos.t_coeff(0).unwrap(), &Laurent::from_terms([(0, int(2)), (1, int(3))]));
        assert_eq!(neg.t_coeff(0).unwrap(), &Laurent::monomial(-1, int(1)));
        let poly = scalar_series(3, &[1, 2, 3]);
        let (pos, neg) = poly.x_split();
        assert_eq!(pos, poly);
        assert!(neg.is_zero());
    }

    #[test]
    fn coefficient_beyond_order() {
        let s = scalar_series(3, &[1, 1]);
        assert!(matches!(s.coeff(0, 4), Err(Error::BeyondOrder { n: 4, order: 3 })));
        assert_eq!(s.coeff(5, 2).unwrap(), int(0));
    }

    #[test]
    fn order_is_minimum() {
        let a = scalar_series(3, &[1, 1]);
        let b = scalar_series(5, &[1, 2]);
        assert_eq!((&a + &b).order(), 3);
        assert_eq!(a.mul(&b).order(), 3);
    }

    #[test]
    fn shifts() {
        let s = scalar_series(4, &[0, 0, 1, 2, 3]);
        let d = s.shift_down(2).unwrap();
        assert_eq!(d.order(), 2);
        assert_eq!(d.scalars().unwrap(), vec![int(1), int(2), int(3)]);
        assert!(s.shift_down(3).is_err());
        assert_eq!(d.shift_up(1).scalars().unwrap(), vec![int(0), int(1), int(2)]);
    }

    #[test]
    fn json_dump_is_sorted() {
        let p = Laurent::from_terms([((1, -1), int(2)), ((-1, 0), rat(1, 3))]);
        let s = TSeries::from_coeffs(1, vec![LaurentPoly2::one(), p]);
        let v = s.to_json();
        assert_eq!(v["vars"], json!(["x", "y", "t"]));
        let terms = v["terms"].as_array().unwrap();
        assert_eq!(terms[0], json!({"i":0,"j":0,"n":0,"c":"1/1"}));
        assert_eq!(terms[1], json!({"i":-1,"j":0,"n":1,"c":"1/3"}));
        assert_eq!(terms[2], json!({"i":1,"j":-1,"n":1,"c":"2/1"}));
        assert_eq!(Series2::from_json(&v).unwrap(), s);
    }
}
