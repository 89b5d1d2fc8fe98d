//! The canonical factorization δ = D·Δ(x)·Δ̄(x̄).
//!
//! log δ is split by the sign of the x-exponent and each part exponentiated.
//! Coefficients may carry extra marker variables (y, v); only the x-exponent
//! decides which factor a term belongs to.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fps::{Exponent, TSeries};
use crate::model::{build_delta, StepSet};

#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalFactors<E: Exponent = i64> {
    /// x-free factor.
    pub d: TSeries<E>,
    /// Polynomial in x, constant term 1.
    pub delta: TSeries<E>,
    /// Polynomial in x̄, constant term 1.
    pub delta_bar: TSeries<E>,
}

/// How Δ̄ is obtained. Both must give the same triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Δ̄ = exp of the negative part of log δ.
    Exponentials,
    /// Δ̄ = δ / (D·Δ).
    Quotient,
}

pub fn canonical_factorize<E: Exponent>(delta: &TSeries<E>) -> Result<CanonicalFactors<E>> {
    canonical_factorize_via(delta, Route::Exponentials)
}

pub fn canonical_factorize_via<E: Exponent>(delta: &TSeries<E>, route: Route) -> Result<CanonicalFactors<E>> {
    let log = delta.log()?;
    let l0 = log.filter(|e| e.x() == 0);
    let lplus = log.filter(|e| e.x() > 0);
    let d = l0.exp()?;
    let dplus = lplus.exp()?;
    let dminus = match route {
        Route::Exponentials => log.filter(|e| e.x() < 0).exp()?,
        Route::Quotient => delta.mul(&d.mul(&dplus).recip()?),
    };
    let f = CanonicalFactors { d, delta: dplus, delta_bar: dminus };
    f.check_shape()?;
    Ok(f)
}

pub fn factorize_model(m: &StepSet, order: usize) -> Result<CanonicalFactors> {
    canonical_factorize(&build_delta(m, order))
}

impl<E: Exponent> CanonicalFactors<E> {
    pub fn order(&self) -> usize {
        self.d.order()
    }

    pub fn recompose(&self) -> TSeries<E> {
        self.d.mul(&self.delta).mul(&self.delta_bar)
    }

    fn check_shape(&self) -> Result<()> {
        let has = |s: &TSeries<E>, bad: &dyn Fn(i64) -> bool| {
            s.coeffs().iter().any(|c| c.iter().any(|(e, _)| bad(e.x())))
        };
        if has(&self.d, &|x| x != 0) {
            return Err(Error::Inconsistent("D depends on x".into()));
        }
        if has(&self.delta, &|x| x < 0) {
            return Err(Error::Inconsistent("Δ has a negative x-exponent".into()));
        }
        if has(&self.delta_bar, &|x| x > 0) {
            return Err(Error::Inconsistent("Δ̄ has a positive x-exponent".into()));
        }
        for s in [&self.delta, &self.delta_bar] {
            if s.coeffs()[1..].iter().any(|c| c.iter().any(|(e, _)| e.x() == 0)) {
                return Err(Error::Inconsistent("Δ is not normalized".into()));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({ "D": self.d.to_json(), "Delta": self.delta.to_json(), "DeltaBar": self.delta_bar.to_json() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, BigRat};
    use crate::fps::{reflect, Laurent, Series1};

    fn catalan(n: usize) -> Vec<BigRat> {
        let mut c = vec![int(1)];
        for k in 1..n {
            c.push((0..k).map(|i| &c[i] * &c[k - 1 - i]).sum());
        }
        c
    }

    #[test]
    fn square_examples() {
        let f = factorize_model(&StepSet::square(), 5).unwrap();
        let dx: Vec<BigRat> = (0..=5).map(|n| f.delta.coeff(1, n).unwrap()).collect();
        assert_eq!(dx, vec![int(0), int(-2), int(0), int(-10), int(0), f.delta.coeff(1, 5).unwrap()]);
        let f = factorize_model(&StepSet::square(), 4).unwrap();
        assert_eq!(f.d.scalars().unwrap(), vec![int(1), int(0), int(-6), int(0), int(-17)]);
    }

    #[test]
    fn square_delta_closed_form() {
        // (1 − x(C(t)−1))(1 + x(C(−t)−1))
        let n = 10;
        let c = catalan(n + 1);
        let cm1: Series1 = TSeries::from_scalars(n, c.iter().enumerate().map(|(k, v)| if k == 0 { int(0) } else { v.clone() }));
        let cm1_neg: Series1 = TSeries::from_scalars(n, c.iter().enumerate().map(|(k, v)| match k {
            0 => int(0),
            k if k % 2 == 1 => -v.clone(),
            _ => v.clone(),
        }));
        let x = Laurent::monomial(1, int(1));
        let left = &Series1::one(n) - &cm1.mul_laurent(&x);
        let right = &Series1::one(n) + &cm1_neg.mul_laurent(&x);
        assert_eq!(factorize_model(&StepSet::square(), n).unwrap().delta, left.mul(&right));
    }

    #[test]
    fn diagonal_example() {
        let f = factorize_model(&StepSet::diagonal(), 7).unwrap();
        let got: Vec<BigRat> = [2, 4, 6].iter().map(|n| f.delta.coeff(2, *n).unwrap()).collect();
        assert_eq!(got, vec![int(-4), int(-32), int(-320)]);
    }

    #[test]
    fn recomposes_and_routes_agree() {
        for m in StepSet::presets() {
            let delta = build_delta(&m, 10);
            let a = canonical_factorize_via(&delta, Route::Exponentials).unwrap();
            let b = canonical_factorize_via(&delta, Route::Quotient).unwrap();
            assert_eq!(a.recompose(), delta);
            assert_eq!(a, b);
            if m.reverse_symmetric() {
                assert_eq!(reflect(&a.delta), a.delta_bar);
            }
        }
    }

    #[test]
    fn rejects_bad_constant() {
        let s: Series1 = TSeries::from_scalars(3, [int(2)]);
        assert!(canonical_factorize(&s).is_err());
    }
}
