//! Limit law of the rescaled endpoint of a long square-lattice walk avoiding
//! the half-line, and finite-n comparisons against exact counts.

use std::f64::consts::PI;

use serde_json::{json, Value};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::exactnum::{fmt_rat, rat_to_f64, ratio_to_f64, BigRat};
use crate::model::StepSet;
use crate::oracle::{self, EndpointMoments};

/// (Γ(1/4), Γ(3/4)), checked against Γ(1/4)Γ(3/4) = π√2.
pub fn gamma_quarters() -> Result<(f64, f64)> {
    let (g1, g3) = (gamma(0.25), gamma(0.75));
    let gap = (g1 * g3 - PI * 2f64.sqrt()).abs();
    if gap > 1e-12 {
        return Err(Error::Inconsistent(format!("Γ(1/4)Γ(3/4) off by {gap:e}")));
    }
    Ok((g1, g3))
}

fn gamma_quarter() -> f64 {
    gamma_quarters().expect("gamma layer self-check").0
}

/// f(x,y) = √2/Γ(1/4)·e^(−(x²+y²))·√(x + √(x²+y²))
pub fn density_eval(x: f64, y: f64) -> Result<f64> {
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::Domain(format!("density at ({x}, {y})")));
    }
    let r = x.hypot(y);
    // x + r = y²/(r − x) avoids cancellation for x < 0
    let s = if x >= 0.0 { x + r } else { y * y / (r - x) };
    Ok(2f64.sqrt() / gamma_quarter() * (-(r * r)).exp() * s.sqrt())
}

/// g(ρ,θ) = 2/Γ(1/4)·ρ^(3/2)·e^(−ρ²)·cos(θ/2), ρ ≥ 0, |θ| ≤ π.
pub fn polar_density_eval(rho: f64, theta: f64) -> Result<f64> {
    if !(rho >= 0.0) || !(theta.abs() <= PI) || !rho.is_finite() {
        return Err(Error::Domain(format!("polar density at (ρ, θ) = ({rho}, {theta})")));
    }
    Ok(polar_unchecked(rho, theta, gamma_quarter()))
}

fn polar_unchecked(rho: f64, theta: f64, g14: f64) -> f64 {
    2.0 / g14 * rho.powf(1.5) * (-(rho * rho)).exp() * (theta / 2.0).cos()
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const G_WEIGHTS: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// 15-point Kronrod estimate and its difference from the embedded 7-point
/// Gauss rule.
fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = GK_WEIGHTS[7] * fc;
    let mut g = G_WEIGHTS[3] * fc;
    for i in 0..7 {
        let dx = h * GK_NODES[i];
        let s = f(c - dx) + f(c + dx);
        k += GK_WEIGHTS[i] * s;
        if i % 2 == 1 {
            g += G_WEIGHTS[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod on [a,b] with absolute tolerance `tol`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, whole: (f64, f64), depth: u32) -> f64 {
        let (v, err) = whole;
        if err <= tol || depth == 0 {
            return v;
        }
        let m = 0.5 * (a + b);
        let left = gk15(f, a, m);
        let right = gk15(f, m, b);
        rec(f, a, m, tol / 2.0, left, depth - 1) + rec(f, m, b, tol / 2.0, right, depth - 1)
    }
    rec(f, a, b, tol, gk15(f, a, b), 40)
}

/// e^(−ρ²) < 1e-60 beyond this radius.
const RHO_MAX: f64 = 12.0;

/// ∫∫ w(ρ,θ)·g(ρ,θ) dρ dθ over ρ ∈ [0, RHO_MAX], θ ∈ [−π, π].
pub fn polar_expectation(w: &dyn Fn(f64, f64) -> f64, tol: f64) -> f64 {
    let g14 = gamma_quarter();
    let outer = |theta: f64| integrate(&|rho| w(rho, theta) * polar_unchecked(rho, theta, g14), 0.0, RHO_MAX, tol * 1e-2);
    integrate(&outer, -PI, PI, tol)
}

pub fn normalization() -> f64 {
    polar_expectation(&|_, _| 1.0, 1e-10)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitMoments {
    pub ex: f64,
    pub ey: f64,
    pub ex2: f64,
    pub ey2: f64,
    pub er: f64,
}

impl LimitMoments {
    pub const NAMES: [&'static str; 5] = ["E(X)/sqrt(n)", "E(Y)", "E(X^2)/n", "E(Y^2)/n", "E(R)/sqrt(n)"];

    pub fn as_array(&self) -> [f64; 5] {
        [self.ex, self.ey, self.ex2, self.ey2, self.er]
    }

    pub fn to_json(&self) -> Value {
        json!({"ex": self.ex, "ey": self.ey, "ex2": self.ex2, "ey2": self.ey2, "er": self.er})
    }
}

/// Γ(3/4)/Γ(1/4), 0, 7/12, 2/3, 3Γ(3/4)/Γ(1/4).
pub fn limit_moments() -> Result<LimitMoments> {
    let (g1, g3) = gamma_quarters()?;
    let r = g3 / g1;
    Ok(LimitMoments { ex: r, ey: 0.0, ex2: 7.0 / 12.0, ey2: 2.0 / 3.0, er: 3.0 * r })
}

/// The same five moments by quadrature of the polar density.
pub fn quadrature_moments() -> LimitMoments {
    let tol = 1e-10;
    LimitMoments {
        ex: polar_expectation(&|r, t| r * t.cos(), tol),
        ey: polar_expectation(&|r, t| r * t.sin(), tol),
        ex2: polar_expectation(&|r, t| (r * t.cos()).powi(2), tol),
        ey2: polar_expectation(&|r, t| (r * t.sin()).powi(2), tol),
        er: polar_expectation(&|r, _| r, tol),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentReport {
    pub n: usize,
    /// Exact E(Y_n), zero by symmetry.
    pub ey_exact: BigRat,
    pub values: LimitMoments,
    pub targets: LimitMoments,
}

impl MomentReport {
    pub fn from_moments(m: &EndpointMoments, targets: LimitMoments) -> Self {
        let n = m.n as f64;
        let values = LimitMoments {
            ex: rat_to_f64(&m.ex) / n.sqrt(),
            ey: rat_to_f64(&m.ey),
            ex2: rat_to_f64(&m.ex2) / n,
            ey2: rat_to_f64(&m.ey2) / n,
            er: m.er / n.sqrt(),
        };
        MomentReport { n: m.n, ey_exact: m.ey.clone(), values, targets }
    }

    pub fn gaps(&self) -> [f64; 5] {
        let v = self.values.as_array();
        let t = self.targets.as_array();
        std::array::from_fn(|i| (v[i] - t[i]).abs())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "ey_exact": fmt_rat(&self.ey_exact),
            "values": self.values.to_json(),
            "targets": self.targets.to_json(),
            "gaps": self.gaps().to_vec(),
        })
    }
}

/// Endpoint moments of uniform square-lattice walks of each length in `nlist`.
pub fn empirical_moments(nlist: &[usize]) -> Result<Vec<MomentReport>> {
    let targets = limit_moments()?;
    let ms = oracle::endpoint_moments(&StepSet::square(), nlist)?;
    Ok(ms.iter().map(|m| MomentReport::from_moments(m, targets)).collect())
}

/// √(1+√2)/(2Γ(3/4))
pub fn an_constant() -> Result<f64> {
    let (_, g3) = gamma_quarters()?;
    Ok((1.0 + 2f64.sqrt()).sqrt() / (2.0 * g3))
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnRow {
    pub n: usize,
    pub an: BigRat,
    /// a(n)·n^(1/4)/4ⁿ
    pub ratio: f64,
    pub constant: f64,
}

impl AnRow {
    pub fn relative_gap(&self) -> f64 {
        (self.ratio - self.constant).abs() / self.constant
    }

    pub fn to_json(&self) -> Value {
        json!({"n": self.n, "an": fmt_rat(&self.an), "ratio": self.ratio, "constant": self.constant, "relative_gap": self.relative_gap()})
    }
}

pub fn an_row(n: usize, an: &BigRat, constant: f64) -> AnRow {
    let four_n = num_bigint::BigInt::from(4).pow(n as u32) * an.denom();
    let ratio = ratio_to_f64(an.numer(), &four_n) * (n as f64).powf(0.25);
    AnRow { n, an: an.clone(), ratio, constant }
}

pub fn asymptotic_an(nlist: &[usize]) -> Result<Vec<AnRow>> {
    let c = an_constant()?;
    Ok(oracle::totals_at(&StepSet::square(), nlist)?.iter().map(|(n, a)| an_row(*n, a, c)).collect())
}

/// CSV with columns n, statistic, value, target, gap.
pub fn moments_csv(reports: &[MomentReport], an: &[AnRow]) -> String {
    let mut out = String::from("n,statistic,value,target,gap\n");
    for r in reports {
        let (v, t, g) = (r.values.as_array(), r.targets.as_array(), r.gaps());
        for i in 0..5 {
            out.push_str(&format!("{},{},{},{},{}\n", r.n, LimitMoments::NAMES[i], v[i], t[i], g[i]));
        }
    }
    for a in an {
        out.push_str(&format!("{},a(n)n^(1/4)/4^n,{},{},{}\n", a.n, a.ratio, a.constant, (a.ratio - a.constant).abs()));
    }
    out
}

/// Each of the five gaps is no larger at the last length than at the first.
pub fn gaps_improve(reports: &[MomentReport]) -> bool {
    match (reports.first(), reports.last()) {
        (Some(a), Some(b)) if reports.len() >= 2 => {
            let (ga, gb) = (a.gaps(), b.gaps());
            (0..5).all(|i| gb[i] <= ga[i])
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_check() {
        let (g1, g3) = gamma_quarters().unwrap();
        assert!((g1 - 3.625_609_908_221_908).abs() < 1e-12);
        assert!((g3 / g1 - 0.337_989).abs() < 1e-6);
    }

    #[test]
    fn density_values() {
        assert_eq!(density_eval(0.0, 0.0).unwrap(), 0.0);
        let f10 = density_eval(1.0, 0.0).unwrap();
        assert!((f10 - 2.0 * (-1f64).exp() / gamma(0.25)).abs() < 1e-15);
        assert!((f10 - 0.20293).abs() < 1e-5);
        assert!(density_eval(-1.0, 0.0).unwrap() < 1e-15);
        assert!(polar_density_eval(-1.0, 0.0).is_err());
        assert!(polar_density_eval(1.0, 4.0).is_err());
        assert!(density_eval(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn quadrature_rule_is_exact_on_polynomials() {
        let v = integrate(&|x| x.powi(9) - 3.0 * x * x, -1.0, 2.0, 1e-14);
        assert!((v - (1023.0 / 10.0 - 9.0)).abs() < 1e-11);
    }

    #[test]
    fn normalized_and_consistent_moments() {
        assert!((normalization() - 1.0).abs() < 1e-6);
        let q = quadrature_moments();
        let l = limit_moments().unwrap();
        for (a, b) in q.as_array().iter().zip(l.as_array()) {
            assert!((a - b).abs() < 1e-5, "{a} vs {b}");
        }
    }

    #[test]
    fn an_small() {
        let rows = asymptotic_an(&[1, 3]).unwrap();
        assert_eq!(rows[0].an, crate::exactnum::int(3));
        assert_eq!(rows[1].an, crate::exactnum::int(34));
        assert!((an_constant().unwrap() - 0.633_978).abs() < 1e-6);
    }

    #[test]
    fn csv_shape() {
        let r = empirical_moments(&[10, 20]).unwrap();
        assert!(r.iter().all(|m| m.ey_exact == crate::exactnum::int(0)));
        let csv = moments_csv(&r, &asymptotic_an(&[10]).unwrap());
        assert_eq!(csv.lines().count(), 1 + 10 + 1);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn polar_matches_cartesian(rho in 0.0f64..6.0, theta in -PI..PI) {
                let f = density_eval(rho * theta.cos(), rho * theta.sin()).unwrap() * rho;
                let g = polar_density_eval(rho, theta).unwrap();
                prop_assert!((f - g).abs() <= 1e-13 * g.abs() + 1e-300, "{} vs {}", f, g);
            }
        }
    }
}
