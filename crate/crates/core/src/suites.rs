//! Randomized property suites.
//!
//! Each suite draws `trials` random instances from per-trial RNG streams
//! keyed by `(seed, trial)`, checks one family of identities or
//! inequalities on them, and aggregates the outcome into a [`Report`].
//! Interval-valued quantities that straddle a decision threshold are
//! counted as inconclusive rather than failed.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bundle::{base_map, chart_convex, chart_convex_inv, lift_set, ChartTriple};
use crate::convex::{
    affine_hull, dimension, metric_projection, nearest_point, truncated_distance, ConvexSet, Flat, Polytope, Subspace,
    Vector,
};
use crate::document::SetDocument;
use crate::error::{HyperError, Result};
use crate::grassmann::{
    chart_flat, chart_flat_inv, gap, gap_direct, lift_point, orthogonal_complement, truncated_ball_hausdorff,
    ProjectionOperator,
};
use crate::hypermetrics::{attouch_wets, aw_origin, hausdorff, sup_distance_gap, truncated_hausdorff, AWParams};
use crate::independence::{
    adversarial_independence_check, barycentric, in_relative_interior, independence_radius, is_affinely_independent,
    PointFamily,
};
use crate::random::{gaussian_matrix, gaussian_polytope, gaussian_vector, random_flat, random_subspace, stream_rng};
use crate::random::{uniform_in_ball, unit_vector};
use crate::report::{Check, Report, SeriesPoint, Verdict};
use crate::tolerance::ToleranceConfig;

/// Largest ambient dimension used by suites that estimate suprema.
pub const MAX_DIM_AW: usize = 4;
/// Largest ambient dimension of the sandwich suite.
pub const MAX_DIM_SANDWICH: usize = 3;
/// Largest ambient dimension of the algebraic suites.
pub const MAX_DIM_ALGEBRAIC: usize = 6;
/// Largest subspace dimension in the gap oracle comparison.
pub const MAX_K_GAP_ORACLE: usize = 4;
/// Largest ambient dimension for the independence suite.
pub const MAX_DIM_INDEPENDENCE: usize = 5;
/// Adversarial selections drawn per family in the independence suite.
pub const SELECTIONS_PER_FAMILY: usize = 10_000;
/// Points sampled per set (truncation) or per instance (simplex stability).
pub const SAMPLES_PER_INSTANCE: usize = 20;
pub const SIMPLEX_SAMPLES: usize = 100;
/// Perturbation scales of the continuity probes.
pub const PROBE_SCALES: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];
/// Bound required at the smallest probe scale.
pub const PROBE_LIMIT: f64 = 1e-2;

/// Residual thresholds of the individual suites.
pub const PROJECTION_THRESHOLD: f64 = 1e-8;
pub const TRUNCATION_THRESHOLD: f64 = 1e-7;
pub const COMPLEMENT_THRESHOLD: f64 = 1e-9;
pub const FLAT_CHART_THRESHOLD: f64 = 1e-7;
pub const CONVEX_CHART_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    ProjectionLaws,
    TruncationLemma,
    AwMetric,
    AwOriginEquivalence,
    GapOracle,
    GapComplement,
    GapSandwich,
    FlatCharts,
    ConvexCharts,
    Independence,
    SimplexStability,
    ContinuityProbes,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::ProjectionLaws,
        Suite::TruncationLemma,
        Suite::AwMetric,
        Suite::AwOriginEquivalence,
        Suite::GapOracle,
        Suite::GapComplement,
        Suite::GapSandwich,
        Suite::FlatCharts,
        Suite::ConvexCharts,
        Suite::Independence,
        Suite::SimplexStability,
        Suite::ContinuityProbes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ProjectionLaws => "projection-laws",
            Suite::TruncationLemma => "truncation-lemma",
            Suite::AwMetric => "aw-metric",
            Suite::AwOriginEquivalence => "aw-origin-equivalence",
            Suite::GapOracle => "gap-oracle",
            Suite::GapComplement => "gap-complement",
            Suite::GapSandwich => "gap-sandwich",
            Suite::FlatCharts => "flat-charts",
            Suite::ConvexCharts => "convex-charts",
            Suite::Independence => "independence",
            Suite::SimplexStability => "simplex-stability",
            Suite::ContinuityProbes => "continuity-probes",
        }
    }

    /// Ambient dimension actually used for a requested `n`.
    pub fn effective_dim(self, n: usize) -> usize {
        let cap = match self {
            Suite::AwMetric | Suite::AwOriginEquivalence | Suite::ContinuityProbes => MAX_DIM_AW,
            Suite::GapSandwich => MAX_DIM_SANDWICH,
            Suite::Independence => MAX_DIM_INDEPENDENCE,
            _ => MAX_DIM_ALGEBRAIC,
        };
        n.clamp(1, cap)
    }

    pub fn run(self, n: usize, trials: usize, seed: u64, tol: &ToleranceConfig) -> Report {
        let start = Instant::now();
        let n = self.effective_dim(n);
        let ctx = Ctx { n, tol: *tol };
        let mut report = match self {
            Suite::ProjectionLaws => per_trial(self, &ctx, trials, seed, projection_laws),
            Suite::TruncationLemma => per_trial(self, &ctx, trials, seed, truncation_lemma),
            Suite::AwMetric => {
                let mut r = per_trial(self, &ctx, trials, seed, aw_metric);
                r.add_checks(vec![aw_worked_value(&ctx)]);
                r
            }
            Suite::AwOriginEquivalence => per_trial(self, &ctx, trials, seed, aw_origin_equivalence),
            Suite::GapOracle => per_trial(self, &ctx, trials, seed, gap_oracle),
            Suite::GapComplement => per_trial(self, &ctx, trials, seed, gap_complement),
            Suite::GapSandwich => per_trial(self, &ctx, trials, seed, gap_sandwich),
            Suite::FlatCharts => per_trial(self, &ctx, trials, seed, flat_charts),
            Suite::ConvexCharts => per_trial(self, &ctx, trials, seed, convex_charts),
            Suite::Independence => per_trial(self, &ctx, trials, seed, independence_family),
            Suite::SimplexStability => per_trial(self, &ctx, trials, seed, simplex_stability),
            Suite::ContinuityProbes => continuity_probes(&ctx, trials, seed),
        };
        report.runtime_ms = start.elapsed().as_millis() as u64;
        report
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = HyperError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| HyperError::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

/// Runs a named suite, or every suite for `"all"`.
pub fn run_suite(name: &str, n: usize, trials: usize, seed: u64, tol: &ToleranceConfig) -> Result<Report> {
    if n == 0 {
        return Err(HyperError::InvalidArgument("dimension must be at least 1".into()));
    }
    tol.validate()?;
    if name == "all" {
        let children = Suite::ALL.iter().map(|s| s.run(n, trials, seed, tol)).collect();
        return Ok(Report::combine("all", n, seed, children));
    }
    Ok(name.parse::<Suite>()?.run(n, trials, seed, tol))
}

struct Ctx {
    n: usize,
    tol: ToleranceConfig,
}

impl Ctx {
    /// Ambient dimension of one trial, uniform in `lo..=n`.
    fn dim(&self, rng: &mut ChaCha8Rng, lo: usize) -> usize {
        let lo = lo.min(self.n);
        rng.random_range(lo..=self.n)
    }
}

fn per_trial<F>(suite: Suite, ctx: &Ctx, trials: usize, seed: u64, f: F) -> Report
where
    F: Fn(&Ctx, &mut ChaCha8Rng) -> Vec<Check> + Sync,
{
    let outcomes: Vec<Vec<Check>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream_rng(seed, t);
            f(ctx, &mut rng)
        })
        .collect();
    Report::from_trials(suite.name(), ctx.n, seed, outcomes)
}

fn doc(set: &ConvexSet) -> SetDocument {
    SetDocument::from_set(set)
}

fn point_doc(x: &Vector) -> SetDocument {
    SetDocument::Polytope {
        ambient_dim: x.len(),
        points: vec![x.as_slice().to_vec()],
    }
}

/// A check that could not be evaluated: uncertified enclosures are
/// inconclusive, anything else is a failure.
fn errored(e: HyperError, inputs: Vec<SetDocument>) -> Check {
    match e {
        HyperError::Uncertified { best, target } => Check::inconclusive(best.width(), target)
            .with_inputs(inputs)
            .with_note("enclosure not certified within budget"),
        other => Check::at_most(f64::INFINITY, 0.0)
            .with_inputs(inputs)
            .with_note(other.to_string()),
    }
}

/// `p => q` for interval-decided propositions.
fn implication(p: Option<bool>, q: Option<bool>) -> Verdict {
    match (p, q) {
        (Some(false), _) | (_, Some(true)) => Verdict::Pass,
        (Some(true), Some(false)) => Verdict::Fail,
        _ => Verdict::Inconclusive,
    }
}

fn verdict_check(verdict: Verdict, note: &str, inputs: Vec<SetDocument>) -> Check {
    let residual = match verdict {
        Verdict::Fail => 1.0,
        _ => 0.0,
    };
    let mut c = Check::at_most(residual, 0.0).with_note(note);
    c.verdict = verdict;
    if verdict == Verdict::Fail {
        c = c.with_inputs(inputs);
    }
    c
}

fn fail_inputs(check: Check, inputs: impl FnOnce() -> Vec<SetDocument>) -> Check {
    if check.verdict == Verdict::Fail {
        check.with_inputs(inputs())
    } else {
        check
    }
}

/// Random polytope, flat or subspace of `R^n`, roughly of unit scale.
fn random_set(rng: &mut ChaCha8Rng, n: usize) -> ConvexSet {
    match rng.random_range(0..3) {
        0 => {
            let k = rng.random_range(0..=n);
            {
                let e = rng.random_range(0..=3);
                gaussian_polytope(rng, n, k, e)
            }
            .into()
        }
        1 => {
            let k = rng.random_range(0..n.max(1));
            random_flat(rng, n, k).into()
        }
        _ => {
            let k = rng.random_range(0..=n);
            random_subspace(rng, n, k).into()
        }
    }
}

/// A `k`-subspace in `W~` given as the graph of a random linear map
/// `W -> W-perp`.
fn graph_subspace(rng: &mut ChaCha8Rng, w: &Subspace, scale: f64) -> Subspace {
    let n = w.ambient_dim();
    let k = w.dim();
    if k == 0 || k == n {
        return w.clone();
    }
    let perp = orthogonal_complement(w);
    let l = gaussian_matrix(rng, n - k, k) * (scale / ((n - k) as f64).sqrt());
    let m = w.basis() + perp.basis() * l;
    Subspace::new(crate::linalg::column_space(&m, 1e-12), &ToleranceConfig::default()).expect("orthonormal")
}

fn projection_laws(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let tol = &ctx.tol;
    let n = ctx.dim(rng, 1);
    let set = random_set(rng, n);
    let x = gaussian_vector(rng, n) * 3.0;
    let y = if rng.random_bool(0.5) {
        &x + gaussian_vector(rng, n) * 1e-3
    } else {
        gaussian_vector(rng, n) * 3.0
    };
    let inputs = || vec![doc(&set), point_doc(&x), point_doc(&y)];
    let (px, py) = match (metric_projection(&set, &x, tol), metric_projection(&set, &y, tol)) {
        (Ok(a), Ok(b)) => (a.point, b.point),
        (Err(e), _) | (_, Err(e)) => return vec![errored(e, inputs())],
    };
    let mut out = Vec::new();
    let expand = (&px - &py).norm() - (&x - &y).norm();
    out.push(fail_inputs(
        Check::at_most(expand, PROJECTION_THRESHOLD).with_note("non-expansiveness"),
        inputs,
    ));
    match &set {
        ConvexSet::Polytope(p) => {
            let r = &x - &px;
            let vi = p
                .points()
                .iter()
                .map(|a| r.dot(&(a - &px)))
                .fold(f64::NEG_INFINITY, f64::max);
            out.push(fail_inputs(
                Check::at_most(vi, PROJECTION_THRESHOLD).with_note("variational inequality"),
                inputs,
            ));
        }
        other => {
            let f = other.as_flat().expect("flat-like");
            let r = &x - &px;
            let orth = f
                .direction()
                .basis_vectors()
                .iter()
                .map(|b| r.dot(b).abs())
                .fold(0.0, f64::max);
            out.push(fail_inputs(
                Check::at_most(orth, PROJECTION_THRESHOLD).with_note("flat orthogonality"),
                inputs,
            ));
        }
    }
    match metric_projection(&set, &px, tol) {
        Ok(again) => out.push(fail_inputs(
            Check::at_most((again.point - &px).norm(), PROJECTION_THRESHOLD).with_note("fixed point"),
            inputs,
        )),
        Err(e) => out.push(errored(e, inputs())),
    }
    out.push(convex_combination_bound(rng, n));
    out
}

/// `|sum l_i a_i - sum l_i b_i| < r` whenever every `|a_i - b_i| < r`.
fn convex_combination_bound(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let k = rng.random_range(0..=n);
    let r: f64 = rng.random_range(0.01..1.0);
    let a: Vec<Vector> = (0..=k).map(|_| gaussian_vector(rng, n)).collect();
    let b: Vec<Vector> = a.iter().map(|p| p + uniform_in_ball(rng, n, r * 0.999_999)).collect();
    let w: Vec<f64> = (0..=k).map(|_| rng.random_range(0.0..1.0f64) + 1e-9).collect();
    let total: f64 = w.iter().sum();
    let mut diff = DVector::zeros(n);
    for ((p, q), wi) in a.iter().zip(&b).zip(&w) {
        diff += (p - q) * (wi / total);
    }
    let residual = diff.norm() - r;
    let inputs = || {
        vec![
            doc(&Polytope::new(a.clone()).expect("non-empty").into()),
            doc(&Polytope::new(b.clone()).expect("non-empty").into()),
        ]
    };
    fail_inputs(
        Check::at_most(residual, 0.0).with_note("convex combination bound"),
        inputs,
    )
}

fn truncation_lemma(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let tol = &ctx.tol;
    let n = ctx.dim(rng, 1);
    let set = random_set(rng, n);
    let nu = match nearest_point(&set, tol) {
        Ok((_, nu)) => nu,
        Err(e) => return vec![errored(e, vec![doc(&set)])],
    };
    let mut out = Vec::new();
    for s in 0..SAMPLES_PER_INSTANCE {
        let j = (s % 3 + 1) as f64;
        let radius = 2.0 * j + nu + 1.0;
        // strictly inside the open ball of radius j
        let x = uniform_in_ball(rng, n, j * 0.999_999);
        let inputs = || vec![doc(&set), point_doc(&x)];
        let check = match (
            crate::convex::distance(&set, &x, tol),
            truncated_distance(&set, &x, radius, tol),
        ) {
            (Ok(d), Ok(dt)) => fail_inputs(
                Check::at_most((d - dt).abs(), TRUNCATION_THRESHOLD).with_note(format!("j = {j}")),
                inputs,
            ),
            (Err(e), _) | (_, Err(e)) => errored(e, inputs()),
        };
        out.push(check);
    }
    out
}

fn aw_params(tol: &ToleranceConfig) -> AWParams {
    AWParams::new(tol.sup)
}

fn small_set(rng: &mut ChaCha8Rng, n: usize) -> ConvexSet {
    if rng.random_range(0..4) == 0 {
        let k = rng.random_range(0..n.max(1));
        return random_flat(rng, n, k).into();
    }
    let k = rng.random_range(0..=n.min(2));
    {
        let e = rng.random_range(0..=1);
        gaussian_polytope(rng, n, k, e)
    }
    .into()
}

/// Perturbation of `a` of size about `scale`.
fn perturb(rng: &mut ChaCha8Rng, a: &ConvexSet, scale: f64) -> ConvexSet {
    let n = a.ambient_dim();
    match a {
        ConvexSet::Polytope(p) => p.map(|q| q + uniform_in_ball(rng, n, scale)).expect("non-empty").into(),
        other => {
            let f = other.as_flat().expect("flat-like");
            let w = graph_subspace(rng, f.direction(), scale);
            let base = f.base() + uniform_in_ball(rng, n, scale);
            let g = Flat::new(base, w).expect("dimensions agree");
            match other {
                ConvexSet::Subspace(_) => g.direction().clone().into(),
                _ => g.into(),
            }
        }
    }
}

fn interval_or<T>(r: Result<T>, inputs: &dyn Fn() -> Vec<SetDocument>, out: &mut Vec<Check>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            out.push(errored(e, inputs()));
            None
        }
    }
}

fn aw_metric(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let tol = &ctx.tol;
    let params = aw_params(tol);
    let n = ctx.dim(rng, 1);
    let a = small_set(rng, n);
    let scale = 10f64.powf(rng.random_range(-1.5..0.0));
    let b = perturb(rng, &a, scale);
    let c = perturb(rng, &b, scale);
    let inputs = || vec![doc(&a), doc(&b), doc(&c)];
    let mut out = Vec::new();
    let Some(ab) = interval_or(attouch_wets(&a, &b, &params, tol), &inputs, &mut out) else {
        return out;
    };
    let Some(ba) = interval_or(attouch_wets(&b, &a, &params, tol), &inputs, &mut out) else {
        return out;
    };
    let Some(bc) = interval_or(attouch_wets(&b, &c, &params, tol), &inputs, &mut out) else {
        return out;
    };
    let Some(ac) = interval_or(attouch_wets(&a, &c, &params, tol), &inputs, &mut out) else {
        return out;
    };
    let slack = 4.0 * tol.geom;
    let sym = (ab.mid() - ba.mid()).abs() - 0.5 * (ab.width() + ba.width());
    out.push(fail_inputs(Check::at_most(sym, slack).with_note("symmetry"), inputs));
    let tri = ac.lo - ab.hi - bc.hi;
    out.push(fail_inputs(
        Check::at_most(tri, slack).with_note("triangle inequality"),
        inputs,
    ));

    let j = rng.random_range(1..=3usize);
    let eps = rng.random_range(1.0 / (j + 1) as f64..1.0 / j as f64);
    let Some(s) = interval_or(sup_distance_gap(&a, &b, j as f64, tol.sup, tol), &inputs, &mut out) else {
        return out;
    };
    out.push(verdict_check(
        implication(ab.compare(eps), s.compare(eps)),
        "d_AW < eps implies the j-term is < eps",
        inputs(),
    ));
    out.push(verdict_check(
        implication(s.compare(eps), ab.compare(eps)),
        "j-term < eps implies d_AW < eps",
        inputs(),
    ));
    out
}

/// Segments `[0, 10 e1]` and `[0, 20 e1]` in the plane are at distance 1/11.
fn aw_worked_value(ctx: &Ctx) -> Check {
    let tol = &ctx.tol;
    let seg = |len: f64| -> ConvexSet {
        Polytope::from_slices(&[&[0.0, 0.0], &[len, 0.0]])
            .expect("valid")
            .into()
    };
    let (a, b) = (seg(10.0), seg(20.0));
    let target = 1.0 / 11.0;
    match attouch_wets(&a, &b, &aw_params(tol), tol) {
        Ok(iv) => {
            let miss = if iv.contains(target) {
                0.0
            } else {
                (iv.mid() - target).abs()
            };
            let c = Check::at_most(miss.max(iv.width() - tol.sup), 0.0).with_note("worked value 1/11");
            fail_inputs(c, || vec![doc(&a), doc(&b)])
        }
        Err(e) => errored(e, vec![doc(&a), doc(&b)]),
    }
}

/// A random set containing the origin.
fn origin_set(rng: &mut ChaCha8Rng, n: usize) -> ConvexSet {
    match rng.random_range(0..3) {
        0 => {
            let k = rng.random_range(0..=n);
            random_subspace(rng, n, k).into()
        }
        _ => {
            let k = rng.random_range(1..=n.min(2));
            let p = {
                let e = rng.random_range(0..=1);
                gaussian_polytope(rng, n, k, e)
            };
            // move a random convex combination of the generators to 0
            let w: Vec<f64> = p.points().iter().map(|_| rng.random_range(0.05..1.0f64)).collect();
            let total: f64 = w.iter().sum();
            let c = p
                .points()
                .iter()
                .zip(&w)
                .fold(DVector::zeros(n), |acc, (q, wi)| acc + q * (wi / total));
            p.translate(&-c).into()
        }
    }
}

fn perturb_keeping_origin(rng: &mut ChaCha8Rng, a: &ConvexSet, scale: f64) -> ConvexSet {
    let n = a.ambient_dim();
    match a {
        ConvexSet::Polytope(p) => {
            // scaling about the origin and adding the origin keeps 0 inside
            let s = 1.0 + rng.random_range(-scale..scale);
            let mut pts: Vec<Vector> = p
                .points()
                .iter()
                .map(|q| q * s + uniform_in_ball(rng, n, scale))
                .collect();
            pts.push(DVector::zeros(n));
            Polytope::new(pts).expect("non-empty").into()
        }
        ConvexSet::Subspace(v) => graph_subspace(rng, v, scale).into(),
        ConvexSet::Flat(f) => graph_subspace(rng, f.direction(), scale).into(),
    }
}

fn aw_origin_equivalence(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let tol = &ctx.tol;
    let params = aw_params(tol);
    let n = ctx.dim(rng, 1);
    let a = origin_set(rng, n);
    let scale = 10f64.powf(rng.random_range(-1.5..0.0));
    let b = perturb_keeping_origin(rng, &a, scale);
    let inputs = || vec![doc(&a), doc(&b)];
    let mut out = Vec::new();
    let Some(aw) = interval_or(attouch_wets(&a, &b, &params, tol), &inputs, &mut out) else {
        return out;
    };
    let Some(ao) = interval_or(aw_origin(&a, &b, &params, tol), &inputs, &mut out) else {
        return out;
    };
    let apart = (aw.lo - ao.hi).max(ao.lo - aw.hi);
    out.push(fail_inputs(
        Check::at_most(apart, 4.0 * tol.geom).with_note("oracle agreement"),
        inputs,
    ));
    let j = rng.random_range(1..=3usize);
    let eps = rng.random_range(1.0 / (j + 1) as f64..1.0 / j as f64);
    let Some(h) = interval_or(truncated_hausdorff(&a, &b, j as f64, tol.sup, tol), &inputs, &mut out) else {
        return out;
    };
    out.push(verdict_check(
        implication(aw.compare(eps), h.compare(eps)),
        "d_AW < eps implies d_H of truncations < eps",
        inputs(),
    ));
    out.push(verdict_check(
        implication(h.compare(eps), aw.compare(eps)),
        "d_H of truncations < eps implies d_AW < eps",
        inputs(),
    ));
    out
}

fn subspace_doc(v: &Subspace) -> SetDocument {
    doc(&v.clone().into())
}

fn gap_oracle(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let tol = &ctx.tol;
    let n = ctx.dim(rng, 1);
    let k = rng.random_range(1..=n.min(MAX_K_GAP_ORACLE));
    let v = random_subspace(rng, n, k);
    // mostly equal dimensions; sometimes a different one
    let kw = if rng.random_range(0..5) == 0 {
        rng.random_range(0..=n.min(MAX_K_GAP_ORACLE))
    } else {
        k
    };
    let w = if kw == k && rng.random_bool(0.5) {
        {
            let e = 10f64.powf(rng.random_range(-3.0..0.5));
            graph_subspace(rng, &v, e)
        }
    } else {
        random_subspace(rng, n, kw)
    };
    let inputs = || vec![subspace_doc(&v), subspace_doc(&w)];
    let exact = match gap(&v, &w) {
        Ok(g) => g,
        Err(e) => return vec![errored(e, inputs())],
    };
    match gap_direct(&v, &w, tol.sup, tol) {
        Ok(iv) => vec![fail_inputs(
            Check::at_most((exact - iv.mid()).abs(), 2.0 * tol.sup).with_note("operator norm vs definition"),
            inputs,
        )],
        Err(e) => vec![errored(e, inputs())],
    }
}

fn gap_complement(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let n = ctx.dim(rng, 1);
    let k = rng.random_range(0..=n);
    let kw = if rng.random_range(0..5) == 0 {
        rng.random_range(0..=n)
    } else {
        k
    };
    let v = random_subspace(rng, n, k);
    let w = random_subspace(rng, n, kw);
    let u = {
        let e = rng.random_range(0..=n);
        random_subspace(rng, n, e)
    };
    let inputs = || vec![subspace_doc(&v), subspace_doc(&w), subspace_doc(&u)];
    let g = |a: &Subspace, b: &Subspace| gap(a, b).expect("same ambient dimension");
    let mut out = Vec::new();
    let iso = (g(&v, &w) - g(&orthogonal_complement(&v), &orthogonal_complement(&w))).abs();
    out.push(fail_inputs(
        Check::at_most(iso, COMPLEMENT_THRESHOLD).with_note("complement isometry"),
        inputs,
    ));
    out.push(fail_inputs(
        Check::at_most((g(&v, &w) - g(&w, &v)).abs(), 0.0).with_note("symmetry"),
        inputs,
    ));
    let tri = g(&v, &u) - g(&v, &w) - g(&w, &u);
    out.push(fail_inputs(
        Check::at_most(tri, ctx.tol.geom).with_note("triangle inequality"),
        inputs,
    ));
    let pv = ProjectionOperator::new(&v);
    let pc = ProjectionOperator::new(&orthogonal_complement(&v));
    let r = pv.residuals(v.dim());
    let sum = pv.matrix() + pc.matrix() - DMatrix::identity(n, n);
    let sum = sum.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let worst = r.symmetry.max(r.idempotence).max(r.trace).max(sum);
    out.push(fail_inputs(
        Check::at_most(worst, ctx.tol.orth).with_note("projection operator laws"),
        inputs,
    ));
    out
}

fn gap_sandwich(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let tol = &ctx.tol;
    let n = ctx.dim(rng, 2);
    let k = rng.random_range(1..=n);
    let v = random_subspace(rng, n, k);
    let w = if rng.random_bool(0.5) {
        {
            let e = 10f64.powf(rng.random_range(-2.0..0.5));
            graph_subspace(rng, &v, e)
        }
    } else {
        random_subspace(rng, n, k)
    };
    let inputs = || vec![subspace_doc(&v), subspace_doc(&w)];
    let theta = match gap(&v, &w) {
        Ok(t) => t,
        Err(e) => return vec![errored(e, inputs())],
    };
    let eps = tol.sup;
    let mut out = Vec::new();
    for j in 1..=3 {
        let r = j as f64;
        match truncated_ball_hausdorff(&v, &w, r, eps, tol) {
            Ok(iv) => {
                let below = (theta - eps) - iv.lo;
                let above = iv.hi - (r * theta + eps);
                out.push(fail_inputs(
                    Check::at_most(below.max(above), 0.0).with_note(format!("sandwich at j = {j}")),
                    inputs,
                ));
            }
            Err(e) => out.push(errored(e, inputs())),
        }
    }
    out
}

fn flat_charts(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let tol = &ctx.tol;
    let n = ctx.dim(rng, 1);
    let k = rng.random_range(0..=n);
    let w = random_subspace(rng, n, k);
    let v = {
        let e = rng.random_range(0.0..2.0);
        graph_subspace(rng, &w, e)
    };
    let omega = w.reject(&(gaussian_vector(rng, n) * 2.0));
    let inputs = || vec![subspace_doc(&w), subspace_doc(&v), point_doc(&omega)];
    let mut out = Vec::new();
    let thr = FLAT_CHART_THRESHOLD;

    // chart_flat_inv ∘ chart_flat
    let forward = chart_flat(&w, &v, &omega, tol).and_then(|f| chart_flat_inv(&w, &f, tol));
    match forward {
        Ok((v2, omega2)) => {
            let r = gap(&v, &v2).unwrap_or(f64::INFINITY).max((&omega - omega2).norm());
            out.push(fail_inputs(
                Check::at_most(r, thr).with_note("inverse after chart"),
                inputs,
            ));
        }
        Err(e) => out.push(errored(e, inputs())),
    }

    // chart_flat ∘ chart_flat_inv on a flat with direction in W~
    let scale = rng.random_range(0.0..2.0);
    let f = Flat::new(gaussian_vector(rng, n) * 2.0, graph_subspace(rng, &w, scale)).expect("dimensions agree");
    let back = chart_flat_inv(&w, &f, tol).and_then(|(v2, o2)| chart_flat(&w, &v2, &o2, tol));
    match back {
        Ok(g) => {
            let r = gap(f.direction(), g.direction())
                .unwrap_or(f64::INFINITY)
                .max((f.nearest_to_origin() - g.nearest_to_origin()).norm());
            out.push(fail_inputs(
                Check::at_most(r, thr).with_note("chart after inverse"),
                || vec![subspace_doc(&w), doc(&f.clone().into())],
            ));
        }
        Err(e) => out.push(errored(e, vec![subspace_doc(&w), doc(&f.clone().into())])),
    }

    // section property and linearity of the lift
    let p = w.project(&gaussian_vector(rng, n));
    let q = w.project(&gaussian_vector(rng, n));
    let c: f64 = rng.random_range(-3.0..3.0);
    let lifted = (|| -> Result<(Vector, Vector, Vector, Vector)> {
        Ok((
            lift_point(&w, &v, &p, tol)?,
            lift_point(&w, &v, &q, tol)?,
            lift_point(&w, &v, &(&p + &q), tol)?,
            lift_point(&w, &v, &(&p * c), tol)?,
        ))
    })();
    match lifted {
        Ok((lp, lq, lsum, lscaled)) => {
            let section = (w.project(&lp) - &p).norm();
            let additive = (&lsum - &lp - &lq).norm();
            let homogeneous = (&lscaled - &lp * c).norm();
            let off = v.reject(&lp).norm();
            let r = section.max(additive).max(homogeneous).max(off);
            out.push(fail_inputs(
                Check::at_most(r, thr).with_note("lift section and linearity"),
                inputs,
            ));
        }
        Err(e) => out.push(errored(e, inputs())),
    }
    out
}

fn triple_docs(w: &Subspace, t: &ChartTriple) -> Vec<SetDocument> {
    vec![
        subspace_doc(w),
        subspace_doc(&t.v),
        point_doc(&t.omega),
        doc(&t.a.clone().into()),
    ]
}

/// Full-dimensional polytope inside `W`.
fn fiber(rng: &mut ChaCha8Rng, w: &Subspace, tol: &ToleranceConfig) -> Polytope {
    let k = w.dim();
    loop {
        let m = k + 1 + rng.random_range(0..=2);
        let pts: Vec<Vector> = (0..m).map(|_| w.basis() * gaussian_vector(rng, k)).collect();
        let p = Polytope::new(pts).expect("non-empty");
        if affine_hull(&p, tol).dim() == k {
            return p;
        }
    }
}

fn convex_charts(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let tol = &ctx.tol;
    let n = ctx.dim(rng, 1);
    let k = rng.random_range(0..=n.min(3));
    let w = random_subspace(rng, n, k);
    let t = ChartTriple {
        v: {
            let e = rng.random_range(0.0..2.0);
            graph_subspace(rng, &w, e)
        },
        omega: w.reject(&(gaussian_vector(rng, n) * 2.0)),
        a: fiber(rng, &w, tol),
    };
    let inputs = || triple_docs(&w, &t);
    let thr = CONVEX_CHART_THRESHOLD;
    let mut out = Vec::new();

    let b = match chart_convex(&w, &t, tol) {
        Ok(b) => b,
        Err(e) => return vec![errored(e, inputs())],
    };
    match chart_convex_inv(&w, &b, tol).and_then(|t2| t.residual(&t2, tol)) {
        Ok(r) => {
            let worst = r.gap.max(r.omega).max(r.hausdorff);
            out.push(fail_inputs(
                Check::at_most(worst, thr).with_note("inverse after chart"),
                inputs,
            ));
        }
        Err(e) => out.push(errored(e, inputs())),
    }
    match lift_set(&w, &t.v, &t.a, tol)
        .and_then(|l| l.map(|p| w.project(p)))
        .and_then(|s| hausdorff(&s, &t.a, tol))
    {
        Ok(h) => out.push(fail_inputs(
            Check::at_most(h, thr).with_note("section property"),
            inputs,
        )),
        Err(e) => out.push(errored(e, inputs())),
    }
    let bset: ConvexSet = b.clone().into();
    let base = gap(&base_map(&bset, tol), &t.v).unwrap_or(f64::INFINITY);
    out.push(fail_inputs(
        Check::at_most(base, FLAT_CHART_THRESHOLD).with_note("base equivariance"),
        inputs,
    ));
    let dims = dimension(&bset, tol) as f64 - dimension(&t.a.clone().into(), tol) as f64;
    out.push(fail_inputs(
        Check::at_most(dims.abs(), 0.0).with_note("dimension preservation"),
        inputs,
    ));

    // a triple with a separated offset maps to a separated polytope
    if k < n {
        let shift = w.reject(&unit_vector(rng, n));
        if shift.norm() > 1e-3 {
            let shift = shift.normalize() * 0.1;
            let t2 = ChartTriple {
                omega: &t.omega + &shift,
                ..t.clone()
            };
            match chart_convex(&w, &t2, tol).and_then(|b2| hausdorff(&b, &b2, tol)) {
                Ok(h) => out.push(fail_inputs(
                    Check::at_most(10.0 * tol.geom - h, 0.0).with_note("injectivity witness"),
                    inputs,
                )),
                Err(e) => out.push(errored(e, inputs())),
            }
        }
    }

    // chart ∘ inverse on a polytope whose affine hull is parallel to W~
    let hull_dir = {
        let e = rng.random_range(0.0..2.0);
        graph_subspace(rng, &w, e)
    };
    let base = gaussian_vector(rng, n);
    let pts: Vec<Vector> = fiber(rng, &w, tol)
        .points()
        .iter()
        .map(|p| &base + hull_dir.basis() * w.coords(p))
        .collect();
    let poly = Polytope::new(pts).expect("non-empty");
    let pinputs = || vec![subspace_doc(&w), doc(&poly.clone().into())];
    match chart_convex_inv(&w, &poly, tol)
        .and_then(|t3| chart_convex(&w, &t3, tol))
        .and_then(|back| hausdorff(&back, &poly, tol))
    {
        Ok(h) => out.push(fail_inputs(
            Check::at_most(h, thr).with_note("chart after inverse"),
            pinputs,
        )),
        Err(e) => out.push(errored(e, pinputs())),
    }
    out
}

fn independent_family(rng: &mut ChaCha8Rng, n: usize, k: usize, tol: &ToleranceConfig) -> PointFamily {
    loop {
        let fam = PointFamily::new((0..=k).map(|_| gaussian_vector(rng, n)).collect()).expect("valid");
        if is_affinely_independent(&fam, 1e-3) || k == 0 {
            debug_assert!(is_affinely_independent(&fam, tol.rank));
            return fam;
        }
    }
}

fn independence_family(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let tol = &ctx.tol;
    let n = ctx.dim(rng, 1);
    let k = rng.random_range(0..=n);
    let fam = independent_family(rng, n, k, tol);
    let inputs = || vec![fam.to_document()];
    let delta = match independence_radius(&fam, tol) {
        Ok(d) => d,
        Err(e) => return vec![errored(e, inputs())],
    };
    let mut out = Vec::new();
    let sub_seed: u64 = rng.random();
    match adversarial_independence_check(&fam, delta, SELECTIONS_PER_FAMILY, sub_seed, tol) {
        Ok(rep) => {
            let mut c = Check::at_most(rep.worst_ratio, 1.0).with_note(format!(
                "{} dependent selections out of {}",
                rep.failure_count, rep.trials
            ));
            if rep.failure_count > 0 {
                c.verdict = Verdict::Fail;
                let mut docs = inputs();
                docs.extend(rep.failures.into_iter().take(1).flat_map(|f| f.inputs));
                c = c.with_inputs(docs);
            } else {
                c.verdict = Verdict::Pass;
            }
            out.push(c);
        }
        Err(e) => out.push(errored(e, inputs())),
    }
    if delta.is_finite() {
        let c: f64 = rng.random_range(0.1..10.0);
        let scaled = independence_radius(&fam.scale(c), tol).unwrap_or(f64::NAN);
        let rel = ((scaled - c * delta) / (c * delta)).abs();
        out.push(fail_inputs(
            Check::at_most(rel, ctx.tol.geom).with_note("radius scales linearly"),
            inputs,
        ));
    }
    out
}

/// Distance from the centroid of a simplex inside its affine hull to the
/// relative boundary.
fn centroid_inradius(fam: &PointFamily, tol: &ToleranceConfig) -> f64 {
    let k = fam.k();
    let mut rho = f64::INFINITY;
    for i in 0..=k {
        let others: Vec<Vector> = fam
            .points()
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let facet = affine_hull(&Polytope::new(others).expect("k >= 1"), tol);
        let h = (&fam.points()[i] - facet.project(&fam.points()[i])).norm();
        rho = rho.min(h / (k + 1) as f64);
    }
    rho
}

fn simplex_stability(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let tol = &ctx.tol;
    let n = ctx.dim(rng, 1);
    let k = if n == 1 { 1 } else { rng.random_range(1..n) };
    let f = random_flat(rng, n, k);
    let (simplex, m) = loop {
        let pts: Vec<Vector> = (0..=k)
            .map(|_| f.base() + f.direction().basis() * gaussian_vector(rng, k))
            .collect();
        let s = PointFamily::new(pts).expect("valid");
        if is_affinely_independent(&s, 1e-3) {
            let m = 0.999 * centroid_inradius(&s, tol) / 3.0;
            break (s, m);
        }
    };
    let a = simplex.points().iter().fold(DVector::zeros(n), |acc, p| acc + p) / (k + 1) as f64;
    let chosen = loop {
        let bs: Vec<Vector> = simplex
            .points()
            .iter()
            .map(|p| p + uniform_in_ball(rng, n, m * 0.999_999))
            .collect();
        let fam = PointFamily::new(bs).expect("valid");
        if is_affinely_independent(&fam, tol.rank) {
            break fam;
        }
    };
    let g = affine_hull(&Polytope::new(chosen.points().to_vec()).expect("non-empty"), tol);
    let b = chosen.points().iter().fold(DVector::zeros(n), |acc, p| acc + p) / (k + 1) as f64;
    let inputs = || vec![simplex.to_document(), chosen.to_document(), point_doc(&a)];
    let mut out = Vec::new();
    out.push(fail_inputs(
        Check::at_most((&b - &a).norm() - m, 0.0).with_note("b lies in B(a, M)"),
        inputs,
    ));
    let mut worst = f64::NEG_INFINITY;
    let mut recon = 0.0f64;
    let mut bad: Option<Vector> = None;
    for s in 0..SIMPLEX_SAMPLES {
        let radius = m * (1.0 - 1e-6);
        let local = if s % 4 == 0 {
            unit_vector(rng, k) * radius
        } else {
            uniform_in_ball(rng, k, radius)
        };
        let z = &b + g.direction().basis() * local;
        let lambda = match barycentric(&chosen, &z, tol.geom) {
            Ok(l) => l,
            Err(e) => {
                out.push(errored(e, inputs()));
                continue;
            }
        };
        let back = chosen
            .points()
            .iter()
            .zip(&lambda)
            .fold(DVector::zeros(n), |acc, (p, l)| acc + p * *l);
        recon = recon.max((back - &z).norm());
        let min = lambda.iter().cloned().fold(f64::INFINITY, f64::min);
        if -min > worst {
            worst = -min;
        }
        if !in_relative_interior(&chosen, &z, tol.geom).unwrap_or(false) && bad.is_none() {
            bad = Some(z.clone());
        }
    }
    let mut c = Check::at_most(worst, -tol.geom).with_note("sampled points of B(b, M) ∩ G are interior");
    if let Some(z) = bad {
        c.verdict = Verdict::Fail;
        let mut docs = inputs();
        docs.push(point_doc(&z));
        c = c.with_inputs(docs);
    } else {
        c.verdict = Verdict::Pass;
    }
    out.push(c);
    out.push(fail_inputs(
        Check::at_most(recon, tol.geom * a.norm().max(1.0) * 10.0).with_note("barycentric reconstruction"),
        inputs,
    ));
    out
}

/// Continuity of `p` and of translation under `d_AW`: for each scale `t`,
/// the maximum over instances of `|p(A_t) - p(A)|` and of the upper end of
/// `d_AW(A + v_t, A)` with `|v_t| = t`. Both maxima must decrease with `t`
/// and end below [`PROBE_LIMIT`].
fn continuity_probes(ctx: &Ctx, trials: usize, seed: u64) -> Report {
    let tol = &ctx.tol;
    let rows: Vec<Vec<(f64, f64, Option<Check>)>> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream_rng(seed, trial);
            let n = ctx.dim(&mut rng, 1);
            let a = small_set(&mut rng, n);
            let pa = nearest_point(&a, tol).map(|x| x.0);
            PROBE_SCALES
                .iter()
                .map(|&t| {
                    let at = perturb(&mut rng, &a, t);
                    let v = unit_vector(&mut rng, n) * t;
                    let moved = a.translate(&v).expect("dimension matches");
                    let inputs = || vec![doc(&a), doc(&at), doc(&moved)];
                    let p_shift = match (&pa, nearest_point(&at, tol)) {
                        (Ok(p), Ok((q, _))) => (p - q).norm(),
                        (Err(e), _) => {
                            let c = Check::at_most(f64::INFINITY, 0.0).with_note(e.to_string());
                            return (f64::NAN, f64::NAN, Some(c.with_inputs(inputs())));
                        }
                        (_, Err(e)) => return (f64::NAN, f64::NAN, Some(errored(e, inputs()))),
                    };
                    let params = AWParams::new((t / 10.0).min(tol.sup));
                    match attouch_wets(&moved, &a, &params, tol) {
                        Ok(iv) => (p_shift, iv.hi, None),
                        Err(e) => (p_shift, f64::NAN, Some(errored(e, inputs()))),
                    }
                })
                .collect()
        })
        .collect();
    let mut report = Report::from_trials(
        Suite::ContinuityProbes.name(),
        ctx.n,
        seed,
        rows.iter()
            .map(|r| r.iter().filter_map(|(_, _, c)| c.clone()).collect())
            .collect(),
    );
    if trials == 0 {
        return report;
    }
    let mut checks = Vec::new();
    for (label, pick) in [("nearest_point", 0usize), ("aw_translation", 1)] {
        let maxima: Vec<f64> = (0..PROBE_SCALES.len())
            .map(|i| {
                rows.iter()
                    .map(|r| if pick == 0 { r[i].0 } else { r[i].1 })
                    .filter(|x| x.is_finite())
                    .fold(0.0, f64::max)
            })
            .collect();
        for (t, m) in PROBE_SCALES.iter().zip(&maxima) {
            report.series.push(SeriesPoint {
                label: format!("{label}@{t:e}"),
                value: *m,
            });
        }
        let rise = maxima.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
        checks.push(Check::at_most(rise, 0.0).with_note(format!("{label} decreases with the scale")));
        checks.push(
            Check::at_most(*maxima.last().expect("non-empty"), PROBE_LIMIT)
                .with_note(format!("{label} at the smallest scale")),
        );
    }
    report.add_checks(checks);
    report
}
