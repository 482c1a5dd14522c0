//! Certified enclosures of suprema over Euclidean balls.
//!
//! `maximize_over_ball` is a best-first branch and bound on axis-aligned
//! cubes. Each cube is evaluated at its center clipped into the ball, and
//! the objective supplies an upper bound valid on a box around that point.
//! Lower bounds come only from evaluated points, which always lie in the
//! ball, so the returned `lo` is attained and `hi` is a proven bound.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{HyperError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn overlaps(&self, other: &Interval, slack: f64) -> bool {
        self.lo <= other.hi + slack && other.lo <= self.hi + slack
    }

    /// Enclosure of `max(x, y)` for `x` in `self`, `y` in `other`.
    pub fn max(self, other: Interval) -> Interval {
        Interval::new(self.lo.max(other.lo), self.hi.max(other.hi))
    }

    /// Enclosure of `min(x, c)`.
    pub fn min_scalar(self, c: f64) -> Interval {
        Interval::new(self.lo.min(c), self.hi.min(c))
    }

    /// Strictly below `t`, strictly not below `t`, or undecided.
    pub fn compare(&self, t: f64) -> Option<bool> {
        if self.hi < t {
            Some(true)
        } else if self.lo >= t {
            Some(false)
        } else {
            None
        }
    }
}

/// An objective on a ball that can bound itself on boxes.
pub trait BoxBound {
    /// Value at `y` together with an upper bound of the objective over the
    /// box `y + [-w_1, w_1] x ... x [-w_d, w_d]` intersected with the ball.
    fn bound(&self, y: &DVector<f64>, w: &DVector<f64>) -> Result<(f64, f64)>;

    fn value(&self, y: &DVector<f64>) -> Result<f64> {
        Ok(self.bound(y, &DVector::zeros(y.len()))?.0)
    }
}

pub const DEFAULT_BUDGET: usize = 400_000;

#[derive(Clone, Copy, Debug)]
pub struct SearchParams {
    /// Target width `hi - lo`.
    pub eps: f64,
    /// Values at or below `floor + eps` need no resolution; the caller
    /// already holds a lower bound at least this large.
    pub floor: f64,
    /// Stop as soon as `lo >= cap`.
    pub cap: f64,
    /// A priori upper bound on the supremum.
    pub ceiling: f64,
    /// Maximum number of evaluated cells.
    pub budget: usize,
}

impl SearchParams {
    pub fn new(eps: f64) -> Self {
        Self {
            eps,
            floor: f64::NEG_INFINITY,
            cap: f64::INFINITY,
            ceiling: f64::INFINITY,
            budget: DEFAULT_BUDGET,
        }
    }
}

struct Cell {
    ub: f64,
    order: usize,
    center: DVector<f64>,
    half: f64,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Cell {}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ub.total_cmp(&other.ub).then_with(|| other.order.cmp(&self.order))
    }
}

fn clip_to_ball(c: &DVector<f64>, radius: f64) -> DVector<f64> {
    let n = c.norm();
    if n <= radius {
        c.clone()
    } else {
        c * (radius / n)
    }
}

/// Enclosure of `sup { f(y) : |y| <= radius }` for `y` in `R^dim`.
///
/// `seeds` are extra points (clipped into the ball) evaluated up front to
/// raise the lower bound early. Returns `Uncertified` with the best
/// interval found when the cell budget runs out.
pub fn maximize_over_ball<B: BoxBound>(
    obj: &B,
    dim: usize,
    radius: f64,
    seeds: &[DVector<f64>],
    params: &SearchParams,
) -> Result<Interval> {
    if !(radius >= 0.0 && params.eps > 0.0) {
        return Err(HyperError::InvalidArgument(format!(
            "need radius >= 0 and eps > 0, got {radius} and {}",
            params.eps
        )));
    }
    let mut lo = f64::NEG_INFINITY;
    if dim == 0 || radius == 0.0 {
        let v = obj.value(&DVector::zeros(dim))?;
        return Ok(Interval::point(v));
    }
    for s in seeds {
        lo = lo.max(obj.value(&clip_to_ball(s, radius))?);
    }

    let mut st = Search {
        obj,
        dim,
        radius,
        params,
        lo,
        heap: BinaryHeap::new(),
        pruned_max: f64::NEG_INFINITY,
        evals: 0,
        order: 0,
    };
    st.visit(DVector::zeros(dim), radius)?;

    loop {
        let top = st.heap.peek().map(|c| c.ub).unwrap_or(f64::NEG_INFINITY);
        let lo = st.lo;
        let hi = top.max(st.pruned_max).min(params.ceiling).max(lo);
        let done = st.heap.is_empty() || hi - lo <= params.eps || hi <= params.floor + params.eps || lo >= params.cap;
        if done {
            return Ok(Interval::new(lo, hi));
        }
        if st.evals >= params.budget {
            return Err(HyperError::Uncertified {
                best: Interval::new(lo, hi),
                target: params.eps,
            });
        }
        let cell = st.heap.pop().expect("nonempty heap");
        // stale cells: lo may have risen since the push
        if cell.ub <= lo.max(params.floor) + params.eps {
            st.pruned_max = st.pruned_max.max(cell.ub);
            continue;
        }
        let h = 0.5 * cell.half;
        for mask in 0..(1usize << dim) {
            let mut c = cell.center.clone();
            for i in 0..dim {
                c[i] += if mask >> i & 1 == 1 { h } else { -h };
            }
            st.visit(c, h)?;
        }
    }
}

struct Search<'a, B> {
    obj: &'a B,
    dim: usize,
    radius: f64,
    params: &'a SearchParams,
    lo: f64,
    heap: BinaryHeap<Cell>,
    pruned_max: f64,
    evals: usize,
    order: usize,
}

impl<B: BoxBound> Search<'_, B> {
    fn visit(&mut self, center: DVector<f64>, half: f64) -> Result<()> {
        let outside: f64 = center
            .iter()
            .map(|c| (c.abs() - half).max(0.0).powi(2))
            .sum::<f64>()
            .sqrt();
        if outside > self.radius {
            return Ok(());
        }
        let y = clip_to_ball(&center, self.radius);
        let w = DVector::from_iterator(
            self.dim,
            center.iter().zip(y.iter()).map(|(c, yy)| half + (c - yy).abs()),
        );
        let (val, ub) = self.obj.bound(&y, &w)?;
        self.evals += 1;
        self.lo = self.lo.max(val);
        let ub = ub.max(val);
        if ub <= self.lo.max(self.params.floor) + self.params.eps {
            self.pruned_max = self.pruned_max.max(ub);
        } else {
            self.order += 1;
            self.heap.push(Cell {
                ub,
                order: self.order,
                center,
                half,
            });
        }
        Ok(())
    }
}

/// Objective with only a Lipschitz constant: `ub = f(y) + L |w|`.
pub struct Lipschitz<F> {
    pub f: F,
    pub constant: f64,
}

impl<F: Fn(&DVector<f64>) -> Result<f64>> BoxBound for Lipschitz<F> {
    fn bound(&self, y: &DVector<f64>, w: &DVector<f64>) -> Result<(f64, f64)> {
        let v = (self.f)(y)?;
        Ok((v, v + self.constant * w.norm()))
    }
}
