//! Step sets, the kernel K(x,y) = 1 − tA₀(x) − t(y+ȳ)A₁(x), and δ.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use rand::Rng;

use crate::error::{Error, Result};
use crate::exactnum::{fmt_rat, int, parse_rat, rat, BigRat};
use crate::fps::{Laurent, LaurentPoly, LaurentPoly2, Series1, Series2, TSeries};

#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub dx: i64,
    pub dy: i64,
    pub weight: BigRat,
}

impl Step {
    pub fn unit(dx: i64, dy: i64) -> Self {
        Step { dx, dy, weight: int(1) }
    }

    pub fn weighted(dx: i64, dy: i64, weight: BigRat) -> Self {
        Step { dx, dy, weight }
    }
}

/// A validated step set: nonempty, symmetric in y, |dy| ≤ 1.
#[derive(Clone, Debug, PartialEq)]
pub struct StepSet {
    name: String,
    steps: Vec<Step>,
    reverse_symmetric: bool,
}

pub fn validate_steps(raw: Vec<Step>) -> Result<StepSet> {
    StepSet::new("custom", raw)
}

impl StepSet {
    pub fn new(name: impl Into<String>, raw: Vec<Step>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut seen = BTreeSet::new();
        for s in &raw {
            if !s.weight.is_positive() {
                return Err(Error::BadWeight { dx: s.dx, dy: s.dy });
            }
            if s.dy.abs() > 1 {
                return Err(Error::HeightViolation { dx: s.dx, dy: s.dy });
            }
            if !seen.insert((s.dx, s.dy)) {
                return Err(Error::DuplicateStep { dx: s.dx, dy: s.dy });
            }
        }
        let weight_of = |dx: i64, dy: i64| raw.iter().find(|s| s.dx == dx && s.dy == dy).map(|s| &s.weight);
        for s in &raw {
            if weight_of(s.dx, -s.dy) != Some(&s.weight) {
                return Err(Error::SymmetryViolation { dx: s.dx, dy: s.dy });
            }
        }
        let reverse_symmetric = raw.iter().all(|s| weight_of(-s.dx, -s.dy) == Some(&s.weight));
        let mut steps = raw;
        steps.sort_by_key(|s| (s.dx, s.dy));
        Ok(StepSet { name: name.into(), steps, reverse_symmetric })
    }

    pub fn square() -> Self {
        let steps = vec![Step::unit(1, 0), Step::unit(-1, 0), Step::unit(0, 1), Step::unit(0, -1)];
        Self::new("square", steps).expect("preset is valid")
    }

    pub fn diagonal() -> Self {
        let steps = vec![Step::unit(1, 1), Step::unit(1, -1), Step::unit(-1, 1), Step::unit(-1, -1)];
        Self::new("diagonal", steps).expect("preset is valid")
    }

    pub fn triangular() -> Self {
        let steps = vec![Step::unit(-1, 1), Step::unit(-1, -1), Step::unit(2, 0)];
        Self::new("triangular", steps).expect("preset is valid")
    }

    pub fn presets() -> Vec<StepSet> {
        vec![Self::square(), Self::diagonal(), Self::triangular()]
    }

    /// `square`, `diagonal`, `triangular` or `file:PATH`.
    pub fn from_selector(sel: &str) -> Result<Self> {
        match sel {
            "square" => Ok(Self::square()),
            "diagonal" => Ok(Self::diagonal()),
            "triangular" => Ok(Self::triangular()),
            _ => match sel.strip_prefix("file:") {
                Some(path) => Self::from_file(path),
                None => Err(Error::Parse(format!("unknown model {sel:?}"))),
            },
        }
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        let mut m = Self::parse(&text)?;
        m.name = path.as_ref().display().to_string();
        Ok(m)
    }

    /// One step per line, `dx dy [weight]`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Parse(format!("line {}: expected `dx dy [weight]`", lineno + 1));
            if fields.len() < 2 || fields.len() > 3 {
                return Err(bad());
            }
            let dx = fields[0].parse().map_err(|_| bad())?;
            let dy = fields[1].parse().map_err(|_| bad())?;
            let weight = match fields.get(2) {
                Some(w) => parse_rat(w)?,
                None => int(1),
            };
            raw.push(Step { dx, dy, weight });
        }
        Self::new("custom", raw)
    }

    /// Random valid weighted model with |dx| ≤ 2 and at least one vertical move.
    pub fn random(rng: &mut impl Rng) -> Self {
        loop {
            let mut raw = Vec::new();
            for dx in -2..=2 {
                for dy in 0..=1 {
                    if rng.gen_bool(0.4) {
                        let w = rat(rng.gen_range(1..=5), rng.gen_range(1..=3));
                        raw.push(Step::weighted(dx, dy, w.clone()));
                        if dy == 1 {
                            raw.push(Step::weighted(dx, -1, w));
                        }
                    }
                }
            }
            if raw.iter().any(|s| s.dy != 0) {
                return Self::new("random", raw).expect("generated model is valid");
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn reverse_symmetric(&self) -> bool {
        self.reverse_symmetric
    }

    pub fn is_unweighted(&self) -> bool {
        self.steps.iter().all(|s| s.weight.is_one())
    }

    pub fn max_abs_dx(&self) -> i64 {
        self.steps.iter().map(|s| s.dx.abs()).max().unwrap_or(0)
    }

    pub fn total_weight(&self) -> BigRat {
        self.steps.iter().map(|s| s.weight.clone()).sum()
    }

    /// Least common multiple of the weight denominators.
    pub fn weight_lcm(&self) -> BigInt {
        self.steps.iter().fold(BigInt::one(), |acc, s| acc.lcm(s.weight.denom()))
    }

    pub fn a0(&self) -> LaurentPoly {
        Laurent::from_terms(self.steps.iter().filter(|s| s.dy == 0).map(|s| (s.dx, s.weight.clone())))
    }

    pub fn a1(&self) -> LaurentPoly {
        Laurent::from_terms(self.steps.iter().filter(|s| s.dy == 1).map(|s| (s.dx, s.weight.clone())))
    }

    /// Σ w·x^dx·y^dy.
    pub fn step_poly(&self) -> LaurentPoly2 {
        Laurent::from_terms(self.steps.iter().map(|s| ((s.dx, s.dy), s.weight.clone())))
    }

    /// K(x,y) = 1 − t·Σ w x^dx y^dy, padded to order N.
    pub fn kernel(&self, order: usize) -> Series2 {
        TSeries::from_coeffs(order, vec![Laurent::one(), -&self.step_poly()])
    }

    pub fn to_text(&self) -> String {
        self.steps.iter().map(|s| format!("{} {} {}\n", s.dx, s.dy, fmt_rat(&s.weight))).collect()
    }
}

impl fmt::Display for StepSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{", self.name)?;
        for (k, s) in self.steps.iter().enumerate() {
            let sep = if k == 0 { "" } else { ", " };
            if s.weight.is_one() {
                write!(f, "{sep}({},{})", s.dx, s.dy)?;
            } else {
                write!(f, "{sep}({},{})×{}", s.dx, s.dy, s.weight)?;
            }
        }
        write!(f, "}}")
    }
}

/// δ = (1 − tA₀ − 2tA₁)(1 − tA₀ + 2tA₁), padded to order N.
pub fn build_delta(m: &StepSet, order: usize) -> Series1 {
    delta_from_parts(&m.a0(), &m.a1(), order)
}

pub fn delta_from_parts<E: crate::fps::Exponent>(a0: &Laurent<E>, a1: &Laurent<E>, order: usize) -> TSeries<E> {
    let two_a1 = a1.scale(&int(2));
    let minus = TSeries::from_coeffs(order, vec![Laurent::one(), -&(a0 + &two_a1)]);
    let plus = TSeries::from_coeffs(order, vec![Laurent::one(), &two_a1 - a0]);
    minus.mul(&plus)
}
