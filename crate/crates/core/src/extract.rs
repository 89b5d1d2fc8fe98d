//! Positive parts of quotients U(x;t)/A(x) by Taylor peeling at the roots of A.
//!
//! T_{α,m}(U) = (U − Σ_{k<m} U⁽ᵏ⁾(α)(x−α)ᵏ/k!)/(x−α)^m, applied to each t-coefficient.
//! If U = A·W with A = c·Π(x−αᵢ)^{mᵢ}, then W⁺ is obtained from U⁺ by applying
//! T_{αᵢ,mᵢ} once per root and dividing by c.

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exactnum::{binomial, int, BigRat, Field, GaussRat, QuadElem};
use crate::fps::{Laurent, LaurentPoly, Series1, TSeries};
use crate::slitgf::SlitModelContext;

#[derive(Clone, Debug, PartialEq)]
pub struct RootSpec<F: Field = GaussRat> {
    pub root: F,
    pub multiplicity: usize,
}

impl<const D: i64> RootSpec<crate::exactnum::Quad<D>> {
    pub fn from_elem(root: &QuadElem, multiplicity: usize) -> Result<Self> {
        if multiplicity == 0 {
            return Err(Error::Domain("root multiplicity must be positive".into()));
        }
        Ok(RootSpec { root: root.to_typed::<D>()?, multiplicity })
    }
}

/// C(e, k) for any integer e.
fn gen_binomial(e: i64, k: usize) -> BigRat {
    let mut acc = int(1);
    for r in 0..k as i64 {
        acc = acc * int(e - r) / int(r + 1);
    }
    acc
}

fn power<F: Field>(alpha: &F, e: i64) -> Result<F> {
    if e >= 0 {
        Ok(alpha.pow(e as u32))
    } else {
        Ok(alpha.inv().ok_or(Error::ZeroRootWithNegativePart)?.pow((-e) as u32))
    }
}

/// Dense coefficients a₀..a_d divided by (x − α); returns (quotient, remainder).
fn synthetic_div<F: Field>(a: &[F], alpha: &F) -> (Vec<F>, F) {
    if a.is_empty() {
        return (Vec::new(), F::zero());
    }
    let d = a.len() - 1;
    let mut q = vec![F::zero(); d];
    let mut carry = F::zero();
    for k in (0..=d).rev() {
        let v = a[k].clone() + carry.mul_ref(alpha);
        if k == 0 {
            return (q, v);
        }
        q[k - 1] = v.clone();
        carry = v;
    }
    unreachable!()
}

/// T_{α,m} on one Laurent polynomial; also reports whether the subtracted
/// Taylor polynomial was nonzero.
fn taylor_laurent<F: Field>(p: &LaurentPoly<F>, alpha: &F, m: usize) -> Result<(LaurentPoly<F>, bool)> {
    if p.is_zero() {
        return Ok((Laurent::zero(), false));
    }
    let lo = p.min_x().unwrap_or(0);
    if alpha.is_zero() {
        if lo < 0 {
            return Err(Error::ZeroRootWithNegativePart);
        }
        let low = p.filter(|e| e < m as i64);
        let q = p.filter(|e| e >= m as i64).map_exponents(|e| e - m as i64);
        return Ok((q, !low.is_zero()));
    }
    // Taylor polynomial Σ_{k<m} U⁽ᵏ⁾(α)/k!·(x−α)^k
    let mut tau = Laurent::zero();
    let mut nonzero = false;
    for k in 0..m {
        let mut dk = F::zero();
        for (e, c) in p.iter() {
            let b = gen_binomial(*e, k);
            if !b.is_zero() {
                dk += &(c.mul_ref(&F::from_rat(b)) * power(alpha, *e - k as i64)?);
            }
        }
        if dk.is_zero() {
            continue;
        }
        nonzero = true;
        for i in 0..=k {
            let c = F::from_rat(BigRat::from_integer(binomial(k as u64, i as u64)));
            let t = dk.mul_ref(&c) * (-alpha.clone()).pow((k - i) as u32);
            tau.add_term(i as i64, t);
        }
    }
    let s = (-lo).max(0);
    let shifted = (p - &tau).map_exponents(|e| e + s);
    let deg = shifted.max_x().unwrap_or(0).max(0) as usize;
    let mut dense = vec![F::zero(); deg + 1];
    for (e, c) in shifted.iter() {
        dense[*e as usize] = c.clone();
    }
    for _ in 0..m {
        let (q, r) = synthetic_div(&dense, alpha);
        if !r.is_zero() {
            return Err(Error::Inconsistent("Taylor remainder is not divisible".into()));
        }
        dense = q;
    }
    let q = Laurent::from_terms(dense.into_iter().enumerate().map(|(i, c)| (i as i64 - s, c)));
    Ok((q, nonzero))
}

pub fn taylor_op<F: Field>(u: &Series1<F>, alpha: &F, m: usize) -> Result<Series1<F>> {
    let coeffs = u.coeffs().iter().map(|c| taylor_laurent(c, alpha, m).map(|r| r.0)).collect::<Result<_>>()?;
    Ok(TSeries::from_coeffs(u.order(), coeffs))
}

/// U/(x−α)^m, failing unless the division is exact.
pub fn exact_divide<F: Field>(u: &Series1<F>, alpha: &F, m: usize) -> Result<Series1<F>> {
    let mut coeffs = Vec::with_capacity(u.order() + 1);
    for (n, c) in u.coeffs().iter().enumerate() {
        let (q, residue) = taylor_laurent(c, alpha, m)?;
        if residue {
            return Err(Error::DivisionInconsistency(format!("t^{n} coefficient does not vanish at the root")));
        }
        coeffs.push(q);
    }
    Ok(TSeries::from_coeffs(u.order(), coeffs))
}

/// W⁺ where U = c·t^s·Π(x−αᵢ)^{mᵢ}·W.
pub fn positive_part_via_roots<F: Field>(
    u: &Series1<F>,
    roots: &[RootSpec<F>],
    leading: &F,
    t_shift: usize,
) -> Result<Series1<F>> {
    let inv = leading.inv().ok_or(Error::DivisionByZero)?;
    let mut full = u.clone();
    let mut pos = u.x_split().0;
    for r in roots {
        full = exact_divide(&full, &r.root, r.multiplicity)?;
        pos = taylor_op(&pos, &r.root, r.multiplicity)?;
    }
    full.shift_down(t_shift)
        .map_err(|_| Error::DivisionInconsistency(format!("quotient is not divisible by t^{t_shift}")))?;
    pos.scale(&inv)
        .shift_down(t_shift)
        .map_err(|_| Error::DivisionInconsistency(format!("positive part is not divisible by t^{t_shift}")))
}

/// x² ↦ X on a series with even support.
pub fn reindex_even<F: Field>(s: &Series1<F>) -> Result<Series1<F>> {
    if s.coeffs().iter().any(|c| c.iter().any(|(e, _)| e % 2 != 0)) {
        return Err(Error::Domain("series has odd powers of x".into()));
    }
    Ok(s.map_exponents(|e| e / 2))
}

/// X ↦ x².
pub fn expand_even<F: Field>(s: &Series1<F>) -> Series1<F> {
    s.map_exponents(|e| 2 * e)
}

fn to_gauss(s: &Series1) -> Series1<GaussRat> {
    s.map_coeffs(|c| GaussRat::rational(c.clone()))
}

fn from_gauss(s: &Series1<GaussRat>) -> Result<Series1> {
    if s.coeffs().iter().any(|c| c.iter().any(|(_, v)| !v.is_rational())) {
        return Err(Error::Inconsistent("imaginary part in a real series".into()));
    }
    Ok(s.map_coeffs(|c| c.a.clone()))
}

fn rational_sqrt(r: &BigRat) -> Option<BigRat> {
    if r.is_negative() {
        return None;
    }
    let root = |n: &BigInt| {
        let s = n.sqrt();
        (&s * &s == *n).then_some(s)
    };
    Some(BigRat::new(root(r.numer())?, root(r.denom())?))
}

/// Roots of a polynomial of degree ≤ 2 over Q, when they lie in Q(i).
fn gauss_roots(a: &LaurentPoly) -> Result<Vec<RootSpec<GaussRat>>> {
    let c = |e| a.coeff_or_zero(&e);
    match a.max_x().unwrap_or(0) {
        0 => Ok(Vec::new()),
        1 => Ok(vec![RootSpec { root: GaussRat::rational(-c(0) / c(1)), multiplicity: 1 }]),
        2 => {
            let (a2, a1, a0) = (c(2), c(1), c(0));
            let disc = &a1 * &a1 - int(4) * &a2 * &a0;
            let two_a = int(2) * &a2;
            let re = -&a1 / &two_a;
            if disc.is_zero() {
                return Ok(vec![RootSpec { root: GaussRat::rational(re), multiplicity: 2 }]);
            }
            let (r, imaginary) = match rational_sqrt(&disc) {
                Some(r) => (r, false),
                None => (rational_sqrt(&-disc).ok_or_else(|| Error::Domain("roots outside Q(i)".into()))?, true),
            };
            let off = r / &two_a;
            let mk = |sign: i64| {
                let o = &off * int(sign);
                if imaginary {
                    GaussRat::new(re.clone(), o)
                } else {
                    GaussRat::rational(&re + &o)
                }
            };
            Ok(vec![RootSpec { root: mk(1), multiplicity: 1 }, RootSpec { root: mk(-1), multiplicity: 1 }])
        }
        _ => Err(Error::Domain("denominator of degree > 2".into())),
    }
}

/// S_j⁺ through the roots of A = x^m·A₁ (m minimal with A a polynomial):
/// S_j = x^{mj}(f_j⁺/√Δ − f_j⁻√(DΔ̄)) / (2t·A)^j. Works over Q(i); the result
/// is known to order N − |j|.
pub fn section_plus_via_roots(ctx: &SlitModelContext, j: i64) -> Result<Series1> {
    let j = j.unsigned_abs() as usize;
    let a1 = ctx.model().a1();
    let m = -a1.min_x().ok_or_else(|| Error::Domain("model has no vertical steps".into()))?;
    let a = a1.map_exponents(|e| e + m);
    let lead = a.coeff_or_zero(&a.max_x().unwrap_or(0));
    let shift = Laurent::monomial(m * j as i64, int(1));
    let u = to_gauss(&ctx.lemma_form(j as u32).mul_laurent(&shift));
    let mut roots = gauss_roots(&a)?;
    for r in &mut roots {
        r.multiplicity *= j;
    }
    let leading = GaussRat::rational(int(2).pow(j as i32) * lead.pow(j as i32));
    let w = positive_part_via_roots(&u, &roots, &leading, j)?;
    from_gauss(&w)
}

/// Diagonal-lattice S_j⁺ over Q in the variable X = x², with the single root
/// X = −1 of multiplicity j.
pub fn diagonal_section_plus_via_x2(ctx: &SlitModelContext, j: i64) -> Result<Series1> {
    let j = j.unsigned_abs() as usize;
    let mut u = ctx.lemma_form(j as u32).mul_laurent(&Laurent::monomial(j as i64, int(1)));
    if j % 2 == 1 {
        u = u.map_exponents(|e| e - 1);
    }
    let ux = reindex_even(&u)?;
    let roots = [RootSpec { root: int(-1), multiplicity: j }];
    let w = expand_even(&positive_part_via_roots(&ux, &roots, &int(2).pow(j as i32), j)?);
    Ok(if j % 2 == 1 { w.map_exponents(|e| e + 1) } else { w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::model::StepSet;

    fn lift(p: LaurentPoly) -> Series1 {
        TSeries::constant(0, p)
    }

    #[test]
    fn taylor_examples() {
        let alpha = rat(3, 2);
        let x = lift(Laurent::monomial(1, int(1)));
        assert_eq!(taylor_op(&x, &alpha, 1).unwrap(), Series1::one(0));
        let x2 = lift(Laurent::monomial(2, int(1)));
        let expect = lift(Laurent::from_terms([(1, int(1)), (0, alpha.clone())]));
        assert_eq!(taylor_op(&x2, &alpha, 1).unwrap(), expect);
        // x̄ = −(x − α)/(α x) + 1/α, so T_{α,1}(x̄) = −x̄/α
        let xb = lift(Laurent::monomial(-1, int(1)));
        assert_eq!(taylor_op(&xb, &alpha, 1).unwrap(), lift(Laurent::monomial(-1, -alpha.recip())));
        assert!(matches!(taylor_op(&xb, &int(0), 1), Err(Error::ZeroRootWithNegativePart)));
        assert_eq!(taylor_op(&x2, &int(0), 1).unwrap(), x);
    }

    #[test]
    fn trivial_denominator() {
        let u = lift(Laurent::from_terms([(-2, int(1)), (0, int(3)), (4, int(5))]));
        assert_eq!(positive_part_via_roots(&u, &[], &int(1), 0).unwrap(), u.x_split().0);
    }

    #[test]
    fn gaussian_roots() {
        let mut a = Laurent::from_terms([(0, int(1)), (2, int(1))]);
        let r = gauss_roots(&a).unwrap();
        assert_eq!(r[0].root, GaussRat::root());
        assert_eq!(r[1].root, -GaussRat::root());
        a = Laurent::from_terms([(0, int(-2)), (1, int(1)), (2, int(1))]);
        let r: Vec<BigRat> = gauss_roots(&a).unwrap().iter().map(|r| r.root.a.clone()).collect();
        assert_eq!(r, vec![int(1), int(-2)]);
        assert!(gauss_roots(&Laurent::from_terms([(0, int(-2)), (2, int(1))])).is_err());
        assert!(RootSpec::<GaussRat>::from_elem(&QuadElem::rational(int(1), -1).unwrap(), 0).is_err());
    }

    #[test]
    fn detects_non_divisible() {
        let u = lift(Laurent::from_terms([(0, int(1)), (2, int(2))]));
        let roots = [RootSpec { root: int(-1), multiplicity: 1 }];
        assert!(matches!(positive_part_via_roots(&u, &roots, &int(1), 0), Err(Error::DivisionInconsistency(_))));
    }

    #[test]
    fn sections_match_split() {
        let n = 10;
        for m in [StepSet::square(), StepSet::diagonal(), StepSet::triangular()] {
            let ctx = SlitModelContext::new(m, n).unwrap();
            for j in 0..=2 {
                let direct = ctx.section_sj(j).unwrap().x_split().0.truncate(n - j as usize);
                assert_eq!(section_plus_via_roots(&ctx, j).unwrap(), direct);
            }
        }
        let ctx = SlitModelContext::new(StepSet::diagonal(), n).unwrap();
        for j in 1..=3 {
            let direct = ctx.section_sj(j).unwrap().x_split().0.truncate(n - j as usize);
            assert_eq!(diagonal_section_plus_via_x2(&ctx, j).unwrap(), direct);
        }
    }
}
