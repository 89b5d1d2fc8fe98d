//! Generating functions for walks on the slit plane: S = √(DΔ̄)/K, bridges,
//! sections S_j, shifted starting points, loops and visits.
//!
//! Series in a spatial index z (starting point (±k,0)) are kept as a list of
//! t-series, one per power of z, truncated at a caller-given `zorder`.

use std::sync::OnceLock;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactnum::{binomial, int, BigRat, Field};
use crate::factorize::{canonical_factorize, CanonicalFactors};
use crate::fps::{lift_xy, Laurent, Series1, Series2, Series3, TSeries};
use crate::model::{build_delta, delta_from_parts, StepSet};

pub const DEFAULT_ZORDER: usize = 8;

/// Everything derived from a model at a fixed truncation order.
#[derive(Debug)]
pub struct SlitModelContext {
    model: StepSet,
    order: usize,
    factors: CanonicalFactors,
    y: Series1,
    sqrt_delta: Series1,
    inv_sqrt_delta: Series1,
    sqrt_d_delta_bar: Series1,
    inv_sqrt_d: Series1,
    complete: OnceLock<Series2>,
}

/// A series in z whose zᵏ coefficient is a t-series in x and y.
#[derive(Clone, Debug, PartialEq)]
pub struct ZSeries {
    pub slices: Vec<Series2>,
}

impl ZSeries {
    pub fn zorder(&self) -> usize {
        self.slices.len() - 1
    }

    pub fn slice(&self, k: usize) -> &Series2 {
        &self.slices[k]
    }

    pub fn coeff(&self, k: usize, i: i64, j: i64, n: usize) -> Result<BigRat> {
        self.slices.get(k).ok_or(Error::BeyondOrder { n: k, order: self.zorder() })?.coeff((i, j), n)
    }

    /// Like [`TSeries::to_json`] with an extra `"k"` key for the power of z.
    pub fn to_json(&self) -> Value {
        let mut terms = Vec::new();
        for (k, s) in self.slices.iter().enumerate() {
            for (n, c) in s.coeffs().iter().enumerate() {
                for ((i, j), v) in c.iter() {
                    terms.push(json!({"k": k, "i": i, "j": j, "n": n, "c": v.to_json()}));
                }
            }
        }
        let order = self.slices.first().map_or(0, TSeries::order);
        json!({"vars": ["z", "x", "y", "t"], "order": order, "zorder": self.zorder(), "terms": terms})
    }
}

/// Walks visiting (k,0): plain count and count weighted by number of visits.
#[derive(Clone, Debug, PartialEq)]
pub struct VisitSeries {
    pub visiting: Vec<BigRat>,
    pub visit_total: Vec<BigRat>,
}

fn scalar(order: usize, c: Vec<BigRat>) -> Series1 {
    TSeries::from_scalars(order, c)
}

fn scalar_coeffs(s: &Series1) -> Vec<BigRat> {
    s.coeff_seq(0)
}

impl SlitModelContext {
    pub fn new(model: StepSet, order: usize) -> Result<Self> {
        let factors = canonical_factorize(&build_delta(&model, order))?;
        let y = kernel_root(&model, order);
        let sqrt_delta = factors.delta.sqrt()?;
        let inv_sqrt_delta = sqrt_delta.recip()?;
        let sqrt_d_delta_bar = factors.d.mul(&factors.delta_bar).sqrt()?;
        let inv_sqrt_d = factors.d.sqrt()?.recip()?;
        let ctx = SlitModelContext {
            model,
            order,
            factors,
            y,
            sqrt_delta,
            inv_sqrt_delta,
            sqrt_d_delta_bar,
            inv_sqrt_d,
            complete: OnceLock::new(),
        };
        ctx.check_kernel_root()?;
        Ok(ctx)
    }

    pub fn model(&self) -> &StepSet {
        &self.model
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn factors(&self) -> &CanonicalFactors {
        &self.factors
    }

    pub fn kernel_root(&self) -> &Series1 {
        &self.y
    }

    pub fn sqrt_delta(&self) -> &Series1 {
        &self.sqrt_delta
    }

    pub fn sqrt_d_delta_bar(&self) -> &Series1 {
        &self.sqrt_d_delta_bar
    }

    /// S₀(x) = 1/√Δ(x).
    pub fn s0(&self) -> &Series1 {
        &self.inv_sqrt_delta
    }

    fn check_kernel_root(&self) -> Result<()> {
        let n = self.order;
        let a0 = self.model.a0();
        let a1 = self.model.a1();
        let one = Series1::one(n);
        let lin = self.y.mul_laurent(&a0).shift_up(1);
        let quad = (&one + &self.y.mul(&self.y)).mul_laurent(&a1).shift_up(1);
        if !(&(&self.y - &lin) - &quad).is_zero() {
            return Err(Error::Inconsistent("K(x, Y(x)) ≠ 0".into()));
        }
        Ok(())
    }

    /// S(x,y;t) = √(DΔ̄(x̄)) / K(x,y).
    pub fn complete_gf(&self) -> &Series2 {
        self.complete.get_or_init(|| {
            let inv_k = self.model.kernel(self.order).recip().expect("K(0) = 1");
            lift_xy(&self.sqrt_d_delta_bar).mul(&inv_k)
        })
    }

    /// B(x̄;t) = 1 − √(DΔ̄(x̄)).
    pub fn bridges_gf(&self) -> Series1 {
        &Series1::one(self.order) - &self.sqrt_d_delta_bar
    }

    /// S_j(x) = Y(x)^|j| / √Δ(x), checked against the form built from f_j⁺ and f_j⁻.
    pub fn section_sj(&self, j: i64) -> Result<Series1> {
        let j = j.unsigned_abs() as u32;
        let sj = self.y.pow(j).mul(&self.inv_sqrt_delta);
        let lhs = sj.mul_laurent(&self.model.a1().scale(&int(2)).pow(j)).shift_up(j as usize);
        if lhs != self.lemma_form(j) {
            return Err(Error::Inconsistent(format!("section S_{j} disagrees with its f_j± form")));
        }
        Ok(sj)
    }

    /// f_j⁺/√Δ − f_j⁻·√(DΔ̄), which equals (2tA₁)^j·S_j.
    pub fn lemma_form(&self, j: u32) -> Series1 {
        let n = self.order;
        let delta = build_delta(&self.model, n);
        let p = TSeries::from_coeffs(n, vec![Laurent::one(), -&self.model.a0()]);
        let mut fplus = Series1::zero(n);
        let mut fminus = Series1::zero(n);
        for m in 0..=j {
            let c = BigRat::from_integer(binomial(j as u64, m as u64));
            let term = delta.pow(m / 2).mul(&p.pow(j - m)).scale(&c);
            if m % 2 == 0 {
                fplus = &fplus + &term;
            } else {
                fminus = &fminus + &term;
            }
        }
        &fplus.mul(&self.inv_sqrt_delta) - &fminus.mul(&self.sqrt_d_delta_bar)
    }

    /// a_{i,j}(n) for n = 0..=order.
    pub fn endpoint_series(&self, i: i64, j: i64) -> Result<Vec<BigRat>> {
        Ok(self.section_sj(j)?.coeff_seq(i))
    }

    fn require_reversal(&self) -> Result<()> {
        if self.model.reverse_symmetric() {
            Ok(())
        } else {
            Err(Error::NotReverseSymmetric)
        }
    }

    /// [z^m]√Δ(z) as a scalar series.
    fn sqrt_delta_z(&self, m: usize) -> Series1 {
        scalar(self.order, self.sqrt_delta.coeff_seq(m as i64))
    }

    /// S_{m,0} as a scalar series.
    fn s_m0(&self, m: usize) -> Series1 {
        scalar(self.order, self.inv_sqrt_delta.coeff_seq(m as i64))
    }

    /// S⁻(z;x,y;t) = √Δ(z)/(1 − zx̄)·S(x,y;t): walks from (−k,0) that never return to H.
    pub fn start_negative(&self, zorder: usize) -> Result<ZSeries> {
        self.require_reversal()?;
        let s = self.complete_gf();
        let slices = (0..=zorder)
            .map(|k| {
                // Σ_{m+l=k} [z^m]√Δ · x̄^l
                let mut mult = Series1::zero(self.order);
                for m in 0..=k {
                    let l = (k - m) as i64;
                    mult = &mult + &self.sqrt_delta_z(m).mul_laurent(&Laurent::monomial(-l, int(1)));
                }
                lift_xy(&mult).mul(s)
            })
            .collect();
        Ok(ZSeries { slices })
    }

    /// D_{i,j}(z;t) = √Δ(z)·Σ_k z^k S_{i+k,j}(t): walks from (i,j) whose first
    /// contact with H is at (−k,0). The x-exponent of the result is the power of z.
    pub fn hitting_series(&self, i: i64, j: i64, zorder: usize) -> Result<Series1> {
        self.require_reversal()?;
        let sj = self.section_sj(j)?;
        let plus: Series1 = sj.filter(|e| e >= i && e <= i + zorder as i64).map_exponents(|e| e - i);
        Ok(plus.mul(&self.sqrt_delta).filter(|e| e <= zorder as i64))
    }

    /// S⁺(z;x,y;t) = zx·S₀(z)·S(x,y;t)/((1 − zx)√D): walks from (k,0), k > 0.
    /// Slice 0 is zero.
    pub fn start_positive(&self, zorder: usize) -> Result<ZSeries> {
        self.require_reversal()?;
        let s = self.complete_gf();
        let mut slices = vec![Series2::zero(self.order)];
        for k in 1..=zorder {
            slices.push(self.positive_slice(k, s));
        }
        Ok(ZSeries { slices })
    }

    fn positive_slice(&self, k: usize, s: &Series2) -> Series2 {
        let mut mult = Series1::zero(self.order);
        for m in 0..k {
            let x = Laurent::monomial((k - m) as i64, int(1));
            mult = &mult + &self.s_m0(m).mul_laurent(&x);
        }
        lift_xy(&mult.mul(&self.inv_sqrt_d)).mul(s)
    }

    /// S^{[k]} for one starting point (k,0), any k.
    pub fn start_at(&self, k: i64) -> Result<Series2> {
        self.require_reversal()?;
        if k > 0 {
            Ok(self.positive_slice(k as usize, self.complete_gf()))
        } else {
            Ok(self.start_negative(k.unsigned_abs() as usize)?.slices.pop().expect("nonempty"))
        }
    }

    /// L_k(t) = (1/√D)·Σ_{ℓ<k} S_{ℓ,0}².
    pub fn loop_series(&self, k: usize) -> Result<Vec<BigRat>> {
        self.require_reversal()?;
        if k == 0 {
            return Err(Error::Domain("loops are rooted at (k,0) with k > 0".into()));
        }
        let mut sum = Series1::zero(self.order);
        for l in 0..k {
            let s = self.s_m0(l);
            sum = &sum + &s.mul(&s);
        }
        Ok(scalar_coeffs(&sum.mul(&self.inv_sqrt_d)))
    }

    /// L_k read off as [x^k y⁰] of S^{[k]}.
    pub fn loop_series_via_start(&self, k: usize) -> Result<Vec<BigRat>> {
        Ok(self.start_at(k as i64)?.coeff_seq((k as i64, 0)))
    }

    /// L_1..=L_kmax.
    pub fn loops_gf(&self, kmax: usize) -> Result<Vec<Vec<BigRat>>> {
        (1..=kmax).map(|k| self.loop_series(k)).collect()
    }

    /// V_k(1,1;t,1) = S_{k,0}·S^{[k]}(1,1)/L_k and ∂V_k/∂v at v=1 = S_{k,0}·S^{[k]}(1,1).
    pub fn visits_gf(&self, k: usize) -> Result<VisitSeries> {
        let lk = scalar(self.order, self.loop_series(k)?);
        let start = self.start_at(k as i64)?;
        let total = self.s_m0(k).mul(&scalar(self.order, start.sum_coeffs()));
        Ok(VisitSeries {
            visiting: scalar_coeffs(&total.mul(&lk.recip()?)),
            visit_total: scalar_coeffs(&total),
        })
    }
}

/// Square lattice with vertical steps marked by v (third exponent):
/// S(x,y;t,v) = √(DΔ̄)/K with K = 1 − t(x + x̄ + vy + vȳ).
pub fn refined_square_gf(order: usize) -> Result<Series3> {
    let a0 = Laurent::from_terms([([1, 0, 0], int(1)), ([-1, 0, 0], int(1))]);
    let a1 = Laurent::monomial([0, 0, 1], int(1));
    let f = canonical_factorize(&delta_from_parts(&a0, &a1, order))?;
    let step = Laurent::from_terms([
        ([1, 0, 0], int(-1)),
        ([-1, 0, 0], int(-1)),
        ([0, 1, 1], int(-1)),
        ([0, -1, 1], int(-1)),
    ]);
    let k = TSeries::from_coeffs(order, vec![Laurent::one(), step]);
    Ok(f.d.mul(&f.delta_bar).sqrt()?.mul(&k.recip()?))
}

/// Y = tA₀Y + tA₁(1 + Y²), solved order by order (Y₀ = 0).
pub fn kernel_root(m: &StepSet, order: usize) -> Series1 {
    let a0 = m.a0();
    let a1 = m.a1();
    let mut y: Vec<Laurent<i64>> = vec![Laurent::zero(); order + 1];
    for n in 1..=order {
        let mut sq = Laurent::zero();
        for k in 1..n.saturating_sub(1) {
            sq.add_product(&y[k], &y[n - 1 - k]);
        }
        if n == 1 {
            sq = Laurent::one();
        }
        let mut c = &a0 * &y[n - 1];
        c.add_product(&a1, &sq);
        y[n] = c;
    }
    TSeries::from_coeffs(order, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn ints(v: &[i64]) -> Vec<BigRat> {
        v.iter().map(|x| int(*x)).collect()
    }

    #[test]
    fn kernel_root_square() {
        let y = kernel_root(&StepSet::square(), 3);
        assert_eq!(y.t_coeff(0).unwrap(), &Laurent::zero());
        assert_eq!(y.t_coeff(1).unwrap(), &Laurent::one());
        assert_eq!(y.t_coeff(2).unwrap(), &Laurent::from_terms([(1, int(1)), (-1, int(1))]));
        assert!(kernel_root(&StepSet::square(), 0).is_zero());
    }

    #[test]
    fn square_expansion() {
        let ctx = SlitModelContext::new(StepSet::square(), 4).unwrap();
        let s = ctx.complete_gf();
        assert_eq!(s.sum_coeffs()[..4], ints(&[1, 3, 9, 34])[..]);
        assert_eq!(s.coeff((1, 0), 1).unwrap(), int(1));
        assert_eq!(s.coeff((-1, -1), 2).unwrap(), int(1));
        for n in 1..=4 {
            for i in -4..=0 {
                assert_eq!(s.coeff((i, 0), n).unwrap(), int(0));
            }
        }
    }

    #[test]
    fn kernel_equation() {
        // K·S = 1 − B
        for m in StepSet::presets() {
            let ctx = SlitModelContext::new(m.clone(), 8).unwrap();
            let ks = m.kernel(8).mul(ctx.complete_gf());
            let one_minus_b = &Series1::one(8) - &ctx.bridges_gf();
            assert_eq!(ks, lift_xy(&one_minus_b));
        }
    }

    #[test]
    fn bridges_square() {
        let ctx = SlitModelContext::new(StepSet::square(), 4).unwrap();
        let b = ctx.bridges_gf();
        assert_eq!(b.coeff(-1, 1).unwrap(), int(1));
        assert_eq!(b.coeff(0, 2).unwrap(), int(3));
        assert!(b.t_coeff(0).unwrap().is_zero());
        assert!(b.coeffs().iter().all(|c| c.max_x().unwrap_or(0) <= 0));
    }

    #[test]
    fn sections() {
        let ctx = SlitModelContext::new(StepSet::square(), 9).unwrap();
        let s0 = ctx.section_sj(0).unwrap();
        assert!(s0.coeffs().iter().all(|c| c.min_x().unwrap_or(0) >= 0));
        assert_eq!(s0.coeff_seq(0), ints(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 0]));
        let s = ctx.complete_gf();
        for j in 0..=4i64 {
            let sj = ctx.section_sj(j).unwrap();
            assert_eq!(sj, ctx.y.pow(j as u32).mul(&s0));
            for n in 0..=9 {
                for (i, c) in sj.t_coeff(n).unwrap().iter() {
                    assert_eq!(&s.coeff((*i, j), n).unwrap(), c);
                    assert_eq!(&s.coeff((*i, -j), n).unwrap(), c);
                }
            }
        }
        let e = ctx.endpoint_series(0, 1).unwrap();
        assert_eq!([&e[1], &e[3], &e[5], &e[7]], [&int(1), &int(4), &int(32), &int(320)]);
        let e = ctx.endpoint_series(1, 0).unwrap();
        assert_eq!([&e[1], &e[3], &e[5], &e[7], &e[9]], [&int(1), &int(5), &int(42), &int(429), &int(4862)]);
        let d = SlitModelContext::new(StepSet::diagonal(), 7).unwrap();
        let e = d.endpoint_series(1, 1).unwrap();
        assert_eq!([&e[1], &e[3], &e[5], &e[7]], [&int(1), &int(5), &int(42), &int(429)]);
    }

    #[test]
    fn reversal_gate() {
        let ctx = SlitModelContext::new(StepSet::triangular(), 4).unwrap();
        assert!(matches!(ctx.start_negative(2), Err(Error::NotReverseSymmetric)));
        assert!(matches!(ctx.start_positive(2), Err(Error::NotReverseSymmetric)));
        assert!(matches!(ctx.loops_gf(2), Err(Error::NotReverseSymmetric)));
        assert!(matches!(ctx.visits_gf(1), Err(Error::NotReverseSymmetric)));
    }

    #[test]
    fn shifted_starts() {
        let ctx = SlitModelContext::new(StepSet::square(), 6).unwrap();
        let neg = ctx.start_negative(4).unwrap();
        assert_eq!(neg.slice(0), ctx.complete_gf());
        let pos = ctx.start_positive(3).unwrap();
        assert_eq!(pos.slice(1).t_coeff(0).unwrap(), &Laurent::monomial((1, 0), int(1)));
        let step = Laurent::from_terms([((2, 0), int(1)), ((1, 1), int(1)), ((1, -1), int(1))]);
        assert_eq!(pos.slice(1).t_coeff(1).unwrap(), &step);
        // D_{1,0}(z) = (1 − √Δ(z))/z
        let d10 = ctx.hitting_series(1, 0, 4).unwrap();
        for k in 0..=4i64 {
            for n in 0..=6 {
                assert_eq!(d10.coeff(k, n).unwrap(), -ctx.sqrt_delta.coeff(k + 1, n).unwrap());
            }
        }
    }

    #[test]
    fn loops_two_ways() {
        let ctx = SlitModelContext::new(StepSet::square(), 8).unwrap();
        for k in 1..=3 {
            let l = ctx.loop_series(k).unwrap();
            assert_eq!(l[0], int(1));
            assert_eq!(l, ctx.loop_series_via_start(k).unwrap());
        }
        assert_eq!(ctx.loop_series(1).unwrap()[2], int(3));
        let v = ctx.visits_gf(1).unwrap();
        assert_eq!(v.visiting[1], int(1));
        assert_eq!(v.visit_total[1], int(1));
    }

    #[test]
    fn weighted_model_context() {
        let m = StepSet::parse("1 0 1/2\n-1 0 1/2\n0 1 3\n0 -1 3\n").unwrap();
        let ctx = SlitModelContext::new(m, 5).unwrap();
        assert_eq!(ctx.complete_gf().coeff((1, 0), 1).unwrap(), rat(1, 2));
        assert_eq!(ctx.complete_gf().coeff((0, 1), 1).unwrap(), int(3));
    }
}
