//! Brute-force enumeration of slit-plane walks by dynamic programming.
//!
//! Each layer holds the number of n-step walks ending at every cell of a dense
//! grid. Weighted models are scaled to integers: with L the lcm of the weight
//! denominators, cells hold L^n times the weighted count.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactnum::{int, BigRat};
use crate::model::StepSet;

pub const DEFAULT_GUARD_N: usize = 400;
pub const GUARD_ENV: &str = "SLITWALK_GUARD_N";

/// Largest length the dense enumerator accepts (env `SLITWALK_GUARD_N`, default 400).
pub fn guard_n() -> usize {
    std::env::var(GUARD_ENV).ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_GUARD_N)
}

fn check_guard(nmax: usize) -> Result<()> {
    let limit = guard_n();
    if nmax > limit {
        return Err(Error::GuardExceeded { requested: nmax, limit });
    }
    Ok(())
}

fn on_h(i: i64, j: i64) -> bool {
    j == 0 && i <= 0
}

/// Endpoint counts for walks of one length.
#[derive(Clone, Debug, PartialEq)]
pub struct CountTable {
    pub n: usize,
    pub counts: BTreeMap<(i64, i64), BigRat>,
}

impl CountTable {
    pub fn get(&self, i: i64, j: i64) -> BigRat {
        self.counts.get(&(i, j)).cloned().unwrap_or_else(|| int(0))
    }

    pub fn total(&self) -> BigRat {
        self.counts.values().cloned().sum()
    }
}

struct ScaledSteps {
    steps: Vec<(i64, i64, BigUint)>,
    unit: bool,
    lcm: BigUint,
}

fn scaled_steps(model: &StepSet) -> ScaledSteps {
    let lcm = model.weight_lcm();
    let steps = model
        .steps()
        .iter()
        .map(|s| {
            let w = (&s.weight * BigRat::from_integer(lcm.clone())).to_integer();
            (s.dx, s.dy, w.to_biguint().expect("weights are positive"))
        })
        .collect();
    ScaledSteps { steps, unit: model.is_unweighted(), lcm: lcm.to_biguint().expect("lcm is positive") }
}

/// One layer of the dense enumeration.
pub struct Layer<'a> {
    pub n: usize,
    imin: i64,
    jmax: i64,
    height: usize,
    reach_i: (i64, i64),
    cells: &'a [BigUint],
    scale: &'a BigUint,
}

impl Layer<'_> {
    fn idx(&self, i: i64, j: i64) -> usize {
        (i - self.imin) as usize * self.height + (j + self.jmax) as usize
    }

    /// Scaled integer count (L^n times the weighted count).
    pub fn raw(&self, i: i64, j: i64) -> &BigUint {
        &self.cells[self.idx(i, j)]
    }

    /// L^n.
    pub fn scale(&self) -> &BigUint {
        self.scale
    }

    pub fn count(&self, i: i64, j: i64) -> BigRat {
        let jn = self.n as i64;
        if i < self.reach_i.0 || i > self.reach_i.1 || j.abs() > jn {
            return int(0);
        }
        BigRat::new(BigInt::from(self.raw(i, j).clone()), BigInt::from(self.scale.clone()))
    }

    /// Nonzero cells as (i, j, scaled count).
    pub fn iter(&self) -> impl Iterator<Item = (i64, i64, &BigUint)> + '_ {
        let jn = self.n as i64;
        (self.reach_i.0..=self.reach_i.1).flat_map(move |i| {
            (-jn..=jn).filter_map(move |j| {
                let c = self.raw(i, j);
                (!c.is_zero()).then_some((i, j, c))
            })
        })
    }

    pub fn raw_total(&self) -> BigUint {
        let mut s = BigUint::zero();
        for (_, _, c) in self.iter() {
            s += c;
        }
        s
    }

    pub fn total(&self) -> BigRat {
        BigRat::new(self.raw_total().into(), self.scale.clone().into())
    }

    pub fn to_table(&self) -> CountTable {
        let counts = self.iter().map(|(i, j, _)| ((i, j), self.count(i, j))).collect();
        CountTable { n: self.n, counts }
    }
}

/// Runs the enumeration from (k,0) up to length `nmax`, calling `visit` with
/// every layer and the walks that hit H at that length (before they are removed).
pub fn walk_layers(
    model: &StepSet,
    start: i64,
    nmax: usize,
    mut visit: impl FnMut(&Layer<'_>, &[(i64, BigRat)]),
) -> Result<()> {
    check_guard(nmax)?;
    let sc = scaled_steps(model);
    let dxm = model.max_abs_dx();
    let span = nmax as i64 * dxm;
    let imin = start - span;
    let jmax = nmax as i64;
    let width = (2 * span + 1) as usize;
    let height = (2 * jmax + 1) as usize;
    let mut cur = vec![BigUint::zero(); width * height];
    let mut next = cur.clone();
    cur[(start - imin) as usize * height + jmax as usize] = BigUint::one();
    let mut scale = BigUint::one();
    for n in 0..=nmax {
        let reach = n as i64 * dxm;
        let reach_i = (start - reach, start + reach);
        let mut hits = Vec::new();
        if n > 0 {
            let prev = (start - reach + dxm, start + reach - dxm);
            let prev_j = n as i64 - 1;
            next.par_chunks_mut(height).enumerate().for_each(|(row, col)| {
                let i = imin + row as i64;
                if i < reach_i.0 || i > reach_i.1 {
                    return;
                }
                for jj in -(n as i64)..=(n as i64) {
                    let acc = &mut col[(jj + jmax) as usize];
                    acc.set_zero();
                    for (dx, dy, w) in &sc.steps {
                        let (si, sj) = (i - dx, jj - dy);
                        if si < prev.0 || si > prev.1 || sj.abs() > prev_j {
                            continue;
                        }
                        let src = &cur[(si - imin) as usize * height + (sj + jmax) as usize];
                        if src.is_zero() {
                            continue;
                        }
                        if sc.unit {
                            *acc += src;
                        } else {
                            *acc += src * w;
                        }
                    }
                }
            });
            std::mem::swap(&mut cur, &mut next);
            scale *= &sc.lcm;
            for i in reach_i.0..=0.min(reach_i.1) {
                let c = &mut cur[(i - imin) as usize * height + jmax as usize];
                if !c.is_zero() {
                    hits.push((i, BigRat::new(BigInt::from(std::mem::take(c)), BigInt::from(scale.clone()))));
                }
            }
        }
        let layer = Layer { n, imin, jmax, height, reach_i, cells: &cur, scale: &scale };
        visit(&layer, &hits);
    }
    Ok(())
}

/// Endpoint tables for n = 0..=nmax of walks from (k,0).
pub fn count_walks(model: &StepSet, start: i64, nmax: usize) -> Result<Vec<CountTable>> {
    let mut out = Vec::with_capacity(nmax + 1);
    walk_layers(model, start, nmax, |layer, _| out.push(layer.to_table()))?;
    Ok(out)
}

/// a(n) for n = 0..=nmax, walks from the origin.
pub fn total_counts(model: &StepSet, nmax: usize) -> Result<Vec<BigRat>> {
    let mut out = Vec::with_capacity(nmax + 1);
    walk_layers(model, 0, nmax, |layer, _| out.push(layer.total()))?;
    Ok(out)
}

/// Bridges by length: nonempty walks from the origin ending on H, otherwise avoiding it.
/// Keys are (i, 0).
pub fn count_bridges(model: &StepSet, nmax: usize) -> Result<Vec<CountTable>> {
    let mut out = Vec::with_capacity(nmax + 1);
    walk_layers(model, 0, nmax, |layer, hits| {
        let counts = hits.iter().map(|(i, c)| ((*i, 0), c.clone())).collect();
        out.push(CountTable { n: layer.n, counts });
    })?;
    Ok(out)
}

/// Loops at (k,0), k > 0, by length.
pub fn count_loops(model: &StepSet, k: i64, nmax: usize) -> Result<Vec<BigRat>> {
    if k <= 0 {
        return Err(Error::Domain("loops are rooted at (k,0) with k > 0".into()));
    }
    let mut out = Vec::with_capacity(nmax + 1);
    walk_layers(model, k, nmax, |layer, _| out.push(layer.count(k, 0)))?;
    Ok(out)
}

type Sparse<K> = HashMap<K, BigRat>;

fn sparse_step<K: std::hash::Hash + Eq + Copy>(
    model: &StepSet,
    cur: &Sparse<K>,
    mv: impl Fn(K, i64, i64) -> K,
) -> Sparse<K> {
    let mut next: Sparse<K> = HashMap::new();
    for (key, c) in cur {
        for s in model.steps() {
            *next.entry(mv(*key, s.dx, s.dy)).or_insert_with(|| int(0)) += c * &s.weight;
        }
    }
    next
}

/// Per length: (walks from the origin that visit (k,0), total number of visits).
pub fn count_visits_marked(model: &StepSet, k: i64, nmax: usize) -> Result<Vec<(BigRat, BigRat)>> {
    check_guard(nmax)?;
    // cell → (all walks, walks that visited, summed visits), stored as three sparse maps keyed by tag
    let mut cur: Sparse<(i64, i64, u8)> = HashMap::from([((0, 0, 0), int(1))]);
    let mut out = vec![(int(0), int(0))];
    for _ in 1..=nmax {
        let mut next = sparse_step(model, &cur, |(i, j, tag), dx, dy| (i + dx, j + dy, tag));
        next.retain(|(i, j, _), c| !on_h(*i, *j) && !num_traits::Zero::is_zero(c));
        if let Some(all) = next.get(&(k, 0, 0)).cloned() {
            let prev_sum = next.get(&(k, 0, 2)).cloned().unwrap_or_else(|| int(0));
            next.insert((k, 0, 1), all.clone());
            next.insert((k, 0, 2), prev_sum + all);
        }
        let sum_tag = |t: u8| next.iter().filter(|((_, _, tag), _)| *tag == t).map(|(_, c)| c.clone()).sum::<BigRat>();
        out.push((sum_tag(1), sum_tag(2)));
        cur = next;
    }
    Ok(out)
}

/// Square-lattice walks from the origin by length, endpoint and number of vertical steps.
/// Entry n maps (i, j, v) to the count.
pub fn count_vertical_marked(nmax: usize) -> Result<Vec<BTreeMap<(i64, i64, i64), BigRat>>> {
    check_guard(nmax)?;
    let square = StepSet::square();
    let mut cur: Sparse<(i64, i64, i64)> = HashMap::from([((0, 0, 0), int(1))]);
    let mut out = vec![cur.clone().into_iter().collect()];
    for _ in 1..=nmax {
        let mut next = sparse_step(&square, &cur, |(i, j, v), dx, dy| (i + dx, j + dy, v + dy.abs()));
        next.retain(|(i, j, _), _| !on_h(*i, *j));
        out.push(next.clone().into_iter().collect());
        cur = next;
    }
    Ok(out)
}

/// Exact moments of the endpoint of a uniform (or weight-proportional) random
/// walk of length n; E(R) is a float.
#[derive(Clone, Debug, PartialEq)]
pub struct EndpointMoments {
    pub n: usize,
    pub total: BigRat,
    pub ex: BigRat,
    pub ey: BigRat,
    pub ex2: BigRat,
    pub ey2: BigRat,
    pub er: f64,
}

/// Normalized endpoint law at length n.
#[derive(Clone, Debug, PartialEq)]
pub struct EndpointDistribution {
    pub n: usize,
    pub probs: BTreeMap<(i64, i64), BigRat>,
    pub moments: EndpointMoments,
}

impl EndpointDistribution {
    pub fn marginal_x(&self) -> BTreeMap<i64, BigRat> {
        let mut m = BTreeMap::new();
        for ((i, _), p) in &self.probs {
            *m.entry(*i).or_insert_with(|| int(0)) += p;
        }
        m
    }

    pub fn marginal_y(&self) -> BTreeMap<i64, BigRat> {
        let mut m = BTreeMap::new();
        for ((_, j), p) in &self.probs {
            *m.entry(*j).or_insert_with(|| int(0)) += p;
        }
        m
    }
}

fn layer_moments(layer: &Layer<'_>) -> EndpointMoments {
    let total = layer.raw_total();
    let mut sx = BigInt::zero();
    let mut sy = BigInt::zero();
    let mut sx2 = BigInt::zero();
    let mut sy2 = BigInt::zero();
    let shift = total.bits().saturating_sub(60);
    let denom = (&total >> shift).to_f64().unwrap_or(f64::INFINITY);
    let mut er = 0.0;
    for (i, j, c) in layer.iter() {
        let c = BigInt::from(c.clone());
        sx += &c * i;
        sy += &c * j;
        sx2 += &c * (i * i);
        sy2 += &c * (j * j);
        let w = (c.magnitude() >> shift).to_f64().unwrap_or(0.0);
        er += w * ((i * i + j * j) as f64).sqrt();
    }
    let t = BigInt::from(total.clone());
    let q = |s: BigInt| BigRat::new(s, t.clone());
    EndpointMoments {
        n: layer.n,
        total: BigRat::new(t.clone(), layer.scale().clone().into()),
        ex: q(sx),
        ey: q(sy),
        ex2: q(sx2),
        ey2: q(sy2),
        er: er / denom,
    }
}

pub fn endpoint_distribution(model: &StepSet, n: usize) -> Result<EndpointDistribution> {
    let mut out = None;
    walk_layers(model, 0, n, |layer, _| {
        if layer.n == n {
            let total = layer.total();
            let probs = layer.iter().map(|(i, j, _)| ((i, j), layer.count(i, j) / &total)).collect();
            out = Some(EndpointDistribution { n, probs, moments: layer_moments(layer) });
        }
    })?;
    Ok(out.expect("last layer visited"))
}

/// Moments at several lengths from a single enumeration.
pub fn endpoint_moments(model: &StepSet, nlist: &[usize]) -> Result<Vec<EndpointMoments>> {
    let nmax = nlist.iter().copied().max().unwrap_or(0);
    let mut out = Vec::new();
    walk_layers(model, 0, nmax, |layer, _| {
        if nlist.contains(&layer.n) {
            out.push(layer_moments(layer));
        }
    })?;
    Ok(out)
}

/// a(n) at selected lengths from a single enumeration.
pub fn totals_at(model: &StepSet, nlist: &[usize]) -> Result<Vec<(usize, BigRat)>> {
    let nmax = nlist.iter().copied().max().unwrap_or(0);
    let mut out = Vec::new();
    walk_layers(model, 0, nmax, |layer, _| {
        if nlist.contains(&layer.n) {
            out.push((layer.n, layer.total()));
        }
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn square_small_lengths() {
        let t = count_walks(&StepSet::square(), 0, 3).unwrap();
        let totals: Vec<BigRat> = t.iter().map(CountTable::total).collect();
        assert_eq!(totals, vec![int(1), int(3), int(9), int(34)]);
        assert_eq!(t[3].get(0, 1), int(4));
        assert_eq!(t[1].counts.len(), 3);
        for table in &t[1..] {
            assert!(table.counts.keys().all(|(i, j)| !on_h(*i, *j)));
            for ((i, j), c) in &table.counts {
                assert_eq!(&table.get(*i, -*j), c);
            }
        }
    }

    #[test]
    fn diagonal_example() {
        let t = count_walks(&StepSet::diagonal(), 0, 2).unwrap();
        assert_eq!(t[2].get(2, 0), int(2));
    }

    #[test]
    fn strictly_fewer_than_free_walks() {
        for m in StepSet::presets() {
            let totals = total_counts(&m, 6).unwrap();
            let size = m.steps().len() as i64;
            assert_eq!(totals[0], int(1));
            for (n, a) in totals.iter().enumerate().skip(1) {
                assert!(*a <= int(size.pow(n as u32)));
            }
            assert!(totals[6] < int(size.pow(6)));
            if m.name() == "square" {
                assert!(totals[1] < int(size));
            }
        }
    }

    #[test]
    fn bridges_square() {
        let b = count_bridges(&StepSet::square(), 2).unwrap();
        assert!(b[0].counts.is_empty());
        assert_eq!(b[1].counts, BTreeMap::from([((-1, 0), int(1))]));
        assert_eq!(b[2].total(), int(3));
    }

    #[test]
    fn loops_square() {
        let l = count_loops(&StepSet::square(), 1, 2).unwrap();
        assert_eq!(l, vec![int(1), int(0), int(3)]);
        assert!(count_loops(&StepSet::square(), 0, 2).is_err());
    }

    #[test]
    fn visits_square() {
        let v = count_visits_marked(&StepSet::square(), 1, 3).unwrap();
        assert_eq!(v[1], (int(1), int(1)));
        // walks never visiting (1,0) plus walks visiting it = all walks
        let totals = total_counts(&StepSet::square(), 3).unwrap();
        let t = count_walks(&StepSet::square(), 0, 3).unwrap();
        assert!(v[3].0 <= totals[3] && t[3].total() == totals[3]);
    }

    #[test]
    fn vertical_marked() {
        let t = count_vertical_marked(3).unwrap();
        assert_eq!(t[3].get(&(1, 0, 0)), Some(&int(1)));
        assert_eq!(t[3].get(&(1, 0, 2)), Some(&int(4)));
    }

    #[test]
    fn distribution_small() {
        let d = endpoint_distribution(&StepSet::square(), 1).unwrap();
        assert_eq!(d.probs.len(), 3);
        assert!(d.probs.values().all(|p| *p == rat(1, 3)));
        assert_eq!(d.moments.ey, int(0));
        // nine 2-step walks: EE, EN, ES, NE, NN, NW, SE, SS, SW
        let d = endpoint_distribution(&StepSet::square(), 2).unwrap();
        assert_eq!(d.moments.ex, rat(2 + 1 + 1 + 1 + 0 - 1 + 1 + 0 - 1, 9));
        assert_eq!(d.marginal_y().values().cloned().sum::<BigRat>(), int(1));
    }

    #[test]
    fn weighted_counts_are_rational() {
        let m = StepSet::parse("1 0 1/2\n-1 0 1/2\n0 1 1/3\n0 -1 1/3\n").unwrap();
        let t = count_walks(&m, 0, 2).unwrap();
        assert_eq!(t[1].get(1, 0), rat(1, 2));
        assert_eq!(t[2].get(1, 1), rat(1, 3));
    }

    #[test]
    fn guard() {
        assert!(matches!(count_walks(&StepSet::square(), 0, DEFAULT_GUARD_N + 1), Err(Error::GuardExceeded { .. })));
    }
}
