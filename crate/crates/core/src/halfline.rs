//! Probabilities at t = 1/4 on the square lattice, exact in Q(√2): where a
//! random walk first meets the half-line, and how often it returns to (k,0).

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_bigint::{BigInt, Sign};
use serde_json::{json, Value};
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exactnum::{fmt_rat, int, qsqrt2_to_f64, rat, ratio_to_f64, BigRat, Field, QSqrt2};
use crate::model::StepSet;
use crate::oracle;

/// Integer a + b√2.
type Z2 = (BigInt, BigInt);

fn z2_mul_small(x: &Z2, p: i64, q: i64) -> Z2 {
    // x·(p + q√2)
    (&x.0 * p + &x.1 * (2 * q), &x.0 * q + &x.1 * p)
}

fn z2_div_exact(x: Z2, n: i64) -> Z2 {
    debug_assert!((&x.0 % n) == BigInt::from(0) && (&x.1 % n) == BigInt::from(0));
    (x.0 / n, x.1 / n)
}

fn z2_to_q(x: &Z2, scale_pow4: usize) -> QSqrt2 {
    let den = BigInt::from(4).pow(scale_pow4 as u32);
    QSqrt2::new(BigRat::new(x.0.clone(), den.clone()), BigRat::new(x.1.clone(), den))
}

fn z2_sign(x: &Z2) -> Ordering {
    let (sa, sb) = (x.0.sign(), x.1.sign());
    if sa == sb || sb == Sign::NoSign {
        return x.0.cmp(&BigInt::from(0));
    }
    if sa == Sign::NoSign {
        return x.1.cmp(&BigInt::from(0));
    }
    let a2 = &x.0 * &x.0;
    let b2 = (&x.1 * &x.1) << 1;
    match a2.cmp(&b2) {
        Ordering::Greater => x.0.cmp(&BigInt::from(0)),
        Ordering::Less => x.1.cmp(&BigInt::from(0)),
        Ordering::Equal => Ordering::Equal,
    }
}

/// (a + b√2)/4^k as f64. √2 is taken to enough bits to absorb the
/// cancellation between a and b√2.
fn z2_to_f64(x: &Z2, scale_pow4: usize) -> f64 {
    let p = x.0.bits().max(x.1.bits()) + 64;
    let root = (BigInt::from(2) << (2 * p)).sqrt();
    let num = (&x.0 << p) + &x.1 * root;
    ratio_to_f64(&num, &(BigInt::from(1) << (p + 2 * scale_pow4 as u64)))
}

/// Scaled coefficients h_n = 4ⁿ·[zⁿ] of √((1−z)(1−cz)) (inverse = false)
/// or 1/√((1−z)(1−cz)) (inverse = true), n = 0..=len−1. All h_n lie in Z[√2].
fn scaled_coeffs(len: usize, inverse: bool) -> Vec<Z2> {
    let mut h: Vec<Z2> = Vec::with_capacity(len);
    if len == 0 {
        return h;
    }
    h.push((BigInt::from(1), BigInt::from(0)));
    // 2(1+c) = 8 − 4√2, 16c = 48 − 32√2
    for n in 0..len.saturating_sub(1) {
        let ni = n as i64;
        let (k1, k2) = if inverse { (2 * ni + 1, ni) } else { (2 * ni - 1, ni - 2) };
        let mut next = z2_mul_small(&h[n], 8 * k1, -4 * k1);
        if n >= 1 && k2 != 0 {
            let t = z2_mul_small(&h[n - 1], 48 * k2, -32 * k2);
            next = (next.0 - t.0, next.1 - t.1);
        }
        h.push(z2_div_exact(next, ni + 1));
    }
    h
}

/// S_{k,0}(1/4) for k = 0..=K: the x-coefficients of 1/√((1−x)(1−cx)).
pub fn s0_at_quarter(kmax: usize) -> Vec<QSqrt2> {
    scaled_coeffs(kmax + 1, true).iter().enumerate().map(|(k, h)| z2_to_q(h, k)).collect()
}

#[derive(Clone, Debug)]
pub struct QuarterContext {
    pub s: Vec<QSqrt2>,
    /// 1/√D(1/4) = 4(√2 − 1)
    pub sqrt_d_inv: QSqrt2,
}

impl QuarterContext {
    pub fn new(kmax: usize) -> Result<Self> {
        let s = s0_at_quarter(kmax);
        if s[0] != QSqrt2::rational(int(1)) {
            return Err(Error::Inconsistent("S_{0,0}(1/4) must be 1".into()));
        }
        if let Some(k) = (1..s.len()).find(|&k| s[k] >= s[k - 1]) {
            return Err(Error::Inconsistent(format!("S_{{k,0}}(1/4) not decreasing at k = {k}")));
        }
        Ok(QuarterContext { s, sqrt_d_inv: QSqrt2::new(int(-4), int(4)) })
    }
}

/// `a` when b = 0, else `a + b*sqrt(2)`, both parts as `num/den`.
pub fn exact_string(q: &QSqrt2) -> String {
    if q.is_rational() {
        fmt_rat(&q.a)
    } else {
        let sign = if q.b.is_negative() { '-' } else { '+' };
        format!("{} {sign} {}*sqrt(2)", fmt_rat(&q.a), fmt_rat(&q.b.abs()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum HittingValue {
    Exact(QSqrt2),
    /// Partial sum plus an n^(−3/2) tail extrapolation; the error bar is
    /// heuristic.
    Estimate { value: f64, error: f64, terms: usize },
}

impl HittingValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            Self::Exact(q) => qsqrt2_to_f64(q),
            Self::Estimate { value, .. } => *value,
        }
    }

    pub fn exact(&self) -> Option<&QSqrt2> {
        match self {
            Self::Exact(q) => Some(q),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Self::Exact(q) => json!({"exact": exact_string(q), "value": qsqrt2_to_f64(q), "elem": q.to_elem().to_json()}),
            Self::Estimate { value, error, terms } => {
                json!({"estimate": value, "error": error, "terms": terms, "rigorous": false})
            }
        }
    }
}

/// Closed forms at t = 1/4, where √(1−4t) = √(1−16t²) = 0 and √(1+4t) = √2.
fn point_closed_form(i: i64, j: i64) -> Option<QSqrt2> {
    let r2 = QSqrt2::root();
    match (i, j.abs()) {
        // (1 − 0)/(8t)
        (0, 1) => Some(QSqrt2::rational(rat(1, 2))),
        // (2 − 0 − √2)/(4t)
        (1, 0) => Some(QSqrt2::rational(int(2)) - r2),
        // (√2 − 0 − 1)/(8t)
        (-1, 1) => Some(QSqrt2::new(rat(-1, 2), rat(1, 2))),
        // (1 − 24t² + 4t√2 − 0 − 0)/(32t²)
        (1, 1) => Some(QSqrt2::new(rat(-1, 4), rat(1, 2))),
        _ => None,
    }
}

/// u/(1−u²) and u²/(1−u²) at u = √2 − 1.
pub fn point_u_form(i: i64, j: i64) -> Option<QSqrt2> {
    let u = QSqrt2::new(int(-1), int(1));
    let den = (QSqrt2::rational(int(1)) - u.clone() * u.clone()).inv()?;
    match (i, j.abs()) {
        (0, 1) => Some(u * den),
        (-1, 1) => Some(u.clone() * u * den),
        _ => None,
    }
}

pub const DEFAULT_ESTIMATE_TERMS: usize = 200;

/// Probability that a random walk from (i,j) first meets the half-line at
/// the origin, i.e. S_{i,j}(1/4). Exact where a closed form is known;
/// otherwise a tail-extrapolated estimate from `terms` exact counts.
pub fn hitting_point_prob(i: i64, j: i64, terms: usize) -> Result<HittingValue> {
    if let Some(q) = point_closed_form(i, j) {
        return Ok(HittingValue::Exact(q));
    }
    if j == 0 && i >= 0 {
        return Ok(HittingValue::Exact(s0_at_quarter(i as usize).pop().expect("nonempty")));
    }
    if j == 0 {
        return Err(Error::Domain(format!("({i},0) lies on the half-line")));
    }
    let (value, error) = estimate_from_counts(&oracle::count_walks(&StepSet::square(), 0, terms)?, i, j);
    Ok(HittingValue::Estimate { value, error, terms })
}

/// Σ a(n)/4ⁿ plus the tail Σ_{n>M, same parity} c·n^(−3/2) ≈ c·M^(−1/2),
/// with c fitted on the last nonzero term. Error bar: half the tail.
fn estimate_from_counts(tables: &[oracle::CountTable], i: i64, j: i64) -> (f64, f64) {
    let quarter_pow = |n: usize| 0.25f64.powi(n as i32);
    let mut sum = 0.0;
    let mut last = None;
    for (n, t) in tables.iter().enumerate() {
        let a = crate::exactnum::rat_to_f64(&t.get(i, j));
        if a != 0.0 {
            let term = a * quarter_pow(n);
            sum += term;
            last = Some((n, term));
        }
    }
    match last {
        Some((m, term)) if m > 0 => {
            let c = term * (m as f64).powf(1.5);
            let tail = c / (m as f64).sqrt();
            (sum + tail, 0.5 * tail)
        }
        _ => (sum, f64::NAN),
    }
}

pub fn hitting_constant() -> f64 {
    ((2f64.sqrt() - 1.0) / (2.0 * PI)).sqrt()
}

/// Largest K for which hitting_distribution keeps exact coefficients.
pub const EXACT_HITTING_LIMIT: usize = 50_000;

#[derive(Clone, Debug)]
pub struct HittingDistribution {
    pub kmax: usize,
    /// Scaled exact coefficients: p^{[k]} = exact[k]/4^(k+1).
    exact: Option<Vec<Z2>>,
    /// p^{[k]} for k = 0..=kmax, from the float recurrence.
    pub floats: Vec<f64>,
    /// Σ_{k≤K} p^{[k]}.
    pub partial_sum: f64,
    /// K^{3/2}·p^{[K]}.
    pub scaled_last: f64,
    pub target: f64,
    /// Every p^{[k]} > 0, decided exactly; None when no exact data was kept.
    pub all_positive: Option<bool>,
}

impl HittingDistribution {
    /// Exact p^{[k]}, if retained.
    pub fn exact(&self, k: usize) -> Option<QSqrt2> {
        self.exact.as_ref().and_then(|e| e.get(k)).map(|h| z2_to_q(h, k + 1))
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn relative_gap(&self) -> f64 {
        (self.scaled_last - self.target).abs() / self.target
    }

    pub fn to_json(&self, list: usize) -> Value {
        let shown = list.min(self.kmax + 1);
        let mut rows = Vec::with_capacity(shown);
        for k in 0..shown {
            let mut row = json!({"k": k, "value": self.floats[k]});
            if let Some(q) = self.exact(k) {
                row["exact"] = json!(exact_string(&q));
            }
            rows.push(row);
        }
        json!({
            "kmax": self.kmax,
            "partial_sum": self.partial_sum,
            "scaled_last": self.scaled_last,
            "target": self.target,
            "relative_gap": self.relative_gap(),
            "all_positive": self.all_positive,
            "p": rows,
        })
    }
}

/// p^{[k]} = [z^k](1 − √Δ(z))/z at t = 1/4, Δ(z) = (1−z)(1−cz), k = 0..=K.
/// `check_signs` decides positivity of every exact coefficient.
pub fn hitting_distribution(kmax: usize, check_signs: bool) -> Result<HittingDistribution> {
    if kmax < 1 {
        return Err(Error::Domain("hitting distribution needs K ≥ 1".into()));
    }
    let floats = float_hitting(kmax);
    let target = hitting_constant();
    if kmax > EXACT_HITTING_LIMIT {
        let partial_sum = floats.iter().sum();
        let scaled_last = (kmax as f64).powf(1.5) * floats[kmax];
        return Ok(HittingDistribution { kmax, exact: None, floats, partial_sum, scaled_last, target, all_positive: None });
    }
    let g = scaled_coeffs(kmax + 2, false);
    let p: Vec<Z2> = g[1..].iter().map(|h| (-h.0.clone(), -h.1.clone())).collect();
    let all_positive = check_signs.then(|| p.iter().all(|h| z2_sign(h) == Ordering::Greater));
    // 4^{K+1}·Σ p^{[k]} by Horner
    let mut acc: Z2 = (BigInt::from(0), BigInt::from(0));
    for h in &p {
        acc = ((acc.0 << 2) + &h.0, (acc.1 << 2) + &h.1);
    }
    let partial_sum = z2_to_f64(&acc, kmax + 1);
    let last = z2_to_f64(&p[kmax], kmax + 1);
    let scaled_last = (kmax as f64).powf(1.5) * last;
    Ok(HittingDistribution { kmax, exact: Some(p), floats, partial_sum, scaled_last, target, all_positive })
}

/// Same coefficients in f64. The wanted solution is the dominant one of the
/// recurrence, so forward evaluation is stable.
pub fn float_hitting(kmax: usize) -> Vec<f64> {
    let c = 3.0 - 2.0 * 2f64.sqrt();
    let mut g = vec![0.0f64; kmax + 2];
    g[0] = 1.0;
    for n in 0..=kmax {
        let nf = n as f64;
        let mut next = (1.0 + c) * (2.0 * nf - 1.0) * g[n];
        if n >= 1 {
            next -= 2.0 * c * (nf - 2.0) * g[n - 1];
        }
        g[n + 1] = next / (2.0 * (nf + 1.0));
    }
    g[1..].iter().map(|x| -x).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transience {
    /// p_k, k = 1..=kmax (index 0 holds k = 1)
    pub p: Vec<QSqrt2>,
    pub v: Vec<QSqrt2>,
}

impl Transience {
    pub fn p(&self, k: usize) -> &QSqrt2 {
        &self.p[k - 1]
    }

    pub fn v(&self, k: usize) -> &QSqrt2 {
        &self.v[k - 1]
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = (1..=self.p.len())
            .map(|k| {
                json!({
                    "k": k,
                    "p": exact_string(self.p(k)),
                    "p_value": qsqrt2_to_f64(self.p(k)),
                    "v": exact_string(self.v(k)),
                    "v_value": qsqrt2_to_f64(self.v(k)),
                })
            })
            .collect();
        json!({"rows": rows})
    }
}

/// p_k = s_k·Σ_{ℓ<k}s_ℓ / Σ_{ℓ<k}s_ℓ² and v_k = 4(√2−1)·s_k·Σ_{ℓ<k}s_ℓ, with
/// s_ℓ = S_{ℓ,0}(1/4). Fails if some p_k is not below 1.
pub fn transience(kmax: usize) -> Result<Transience> {
    if kmax < 1 {
        return Err(Error::Domain("transience needs kmax ≥ 1".into()));
    }
    let ctx = QuarterContext::new(kmax)?;
    let s = &ctx.s;
    let mut sum = QSqrt2::rational(int(0));
    let mut sum_sq = QSqrt2::rational(int(0));
    let mut p = Vec::with_capacity(kmax);
    let mut v = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        sum = sum + s[k - 1].clone();
        sum_sq = sum_sq + s[k - 1].clone() * s[k - 1].clone();
        let num = s[k].clone() * sum.clone();
        let pk = num.clone() * sum_sq.inv().ok_or(Error::DivisionByZero)?;
        if !(QSqrt2::rational(int(1)) - pk.clone()).is_positive() {
            return Err(Error::Inconsistent(format!("p_{k} is not below 1")));
        }
        v.push(ctx.sqrt_d_inv.clone() * num);
        p.push(pk);
    }
    Ok(Transience { p, v })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// c = 3 − 2√2 = (√2 − 1)²
    fn c_const() -> QSqrt2 {
        QSqrt2::new(int(3), int(-2))
    }

    fn q(a: BigRat, b: BigRat) -> QSqrt2 {
        QSqrt2::new(a, b)
    }

    #[test]
    fn s0_values() {
        let s = s0_at_quarter(3);
        assert_eq!(s[0], QSqrt2::rational(int(1)));
        assert_eq!(s[1], q(int(2), int(-1)));
        assert_eq!(s[2], q(rat(15, 2), int(-5)));
        assert!(QuarterContext::new(40).is_ok());
    }

    #[test]
    fn s0_satisfies_defining_identity() {
        // F²·(1−z)(1−cz) = 1 through z^20
        let n = 20;
        let s = s0_at_quarter(n);
        let c = c_const();
        let one_plus_c = QSqrt2::rational(int(1)) + c.clone();
        let zero = QSqrt2::rational(int(0));
        let mut sq = vec![zero.clone(); n + 1];
        for a in 0..=n {
            for b in 0..=n - a {
                sq[a + b] = sq[a + b].clone() + s[a].clone() * s[b].clone();
            }
        }
        for k in 0..=n {
            let mut v = sq[k].clone();
            if k >= 1 {
                v = v - one_plus_c.clone() * sq[k - 1].clone();
            }
            if k >= 2 {
                v = v + c.clone() * sq[k - 2].clone();
            }
            assert_eq!(v, if k == 0 { QSqrt2::rational(int(1)) } else { zero.clone() }, "z^{k}");
        }
    }

    #[test]
    fn points() {
        assert_eq!(hitting_point_prob(0, 1, 0).unwrap().exact(), Some(&QSqrt2::rational(rat(1, 2))));
        assert_eq!(hitting_point_prob(1, 0, 0).unwrap().exact(), Some(&q(int(2), int(-1))));
        let m = hitting_point_prob(-1, 1, 0).unwrap();
        assert_eq!(m.exact(), point_u_form(-1, 1).as_ref());
        assert_eq!(point_u_form(0, 1), Some(QSqrt2::rational(rat(1, 2))));
        assert_eq!(hitting_point_prob(3, 0, 0).unwrap().exact(), s0_at_quarter(3).last());
        assert!(hitting_point_prob(-2, 0, 0).is_err());
    }

    #[test]
    fn estimate_agrees_with_exact_points() {
        let tables = oracle::count_walks(&StepSet::square(), 0, 120).unwrap();
        for (i, j) in [(0, 1), (1, 0), (-1, 1), (1, 1), (2, 0), (3, 0), (4, 0)] {
            let exact = hitting_point_prob(i, j, 0).unwrap().to_f64();
            let (est, err) = estimate_from_counts(&tables, i, j);
            assert!((est - exact).abs() <= 2.0 * err + 1e-9, "({i},{j}): {est} ± {err} vs {exact}");
        }
    }

    #[test]
    fn distribution() {
        let d = hitting_distribution(300, true).unwrap();
        assert_eq!(d.exact(0), Some(q(int(2), int(-1))));
        assert_eq!(d.all_positive, Some(true));
        for k in [0, 1, 10, 300] {
            let e = qsqrt2_to_f64(&d.exact(k).unwrap());
            assert!((e - d.floats[k]).abs() <= 1e-12 * e.abs().max(1e-300), "k = {k}");
        }
        let sum: f64 = d.floats.iter().sum();
        assert!((sum - d.partial_sum).abs() < 1e-10);
        assert!(d.partial_sum < 1.0);
        assert!(hitting_distribution(0, false).is_err());
    }

    #[test]
    fn transience_values() {
        let t = transience(6).unwrap();
        assert_eq!(t.p(1), &q(int(2), int(-1)));
        assert_eq!(t.p(2), &q(rat(95, 34), rat(-55, 34)));
        assert_eq!(t.v(1), &q(int(-16), int(12)));
        assert_eq!(t.v(2), &q(int(-310), int(220)));
        assert!((qsqrt2_to_f64(t.p(2)) - 0.506).abs() < 1e-3);
    }
}
