//! Collocation sampling.
//!
//! The classical sampler draws points uniformly over the whole space-time
//! rectangle. The stratified sampler only draws where at least one
//! first-layer neuron is in its active gradient zone, at the same point
//! density:
//!
//! - On the initial line every neuron `j` contributes the interval
//!   `[C_j - r_j, C_j + r_j]`, where `C_j` is the root of its preactivation
//!   at `t_0` and `r_j = δ / |ω_x^j|`.
//! - In the interior the time axis is cut into `N` slabs. Inside a slab the
//!   zone of a neuron travels with constant speed, so its x-extent is
//!   covered by `[min(C_i, C_{i+1}) - r_j, max(C_i, C_{i+1}) + r_j]`.
//!
//! Intervals are clipped to the domain and merged per slab. A slab (or the
//! initial line) with no zone at all falls back to the full spatial extent.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::calculus::{delta_epsilon, ZoneRadiusSpec};
use crate::net::NetworkParams;
use crate::pde::Domain;
use crate::{Error, Result};

/// First-layer x-weights below this magnitude are treated as zero.
pub const DEGENERATE_WEIGHT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub t: f64,
}

impl Point {
    pub fn new(x: f64, t: f64) -> Self {
        Self { x, t }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Partition {
    Ic,
    Lbc,
    Rbc,
    Pde,
}

impl Partition {
    pub const ALL: [Partition; 4] = [Partition::Ic, Partition::Lbc, Partition::Rbc, Partition::Pde];

    pub fn label(self) -> &'static str {
        match self {
            Partition::Ic => "IC",
            Partition::Lbc => "LBC",
            Partition::Rbc => "RBC",
            Partition::Pde => "PDE",
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= hi) {
            return Err(Error::Config(format!("interval [{lo}, {hi}] has lo > hi")));
        }
        Ok(Self { lo, hi })
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// One time slab `(t_lo, t_hi]` and its merged zone intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct Slab {
    pub t_lo: f64,
    pub t_hi: f64,
    pub intervals: Vec<Interval>,
    /// True when no neuron produced a zone and the slab was filled with the
    /// full spatial domain.
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZoneSet {
    pub slabs: Vec<Slab>,
}

impl ZoneSet {
    pub fn total_area(&self) -> f64 {
        self.slabs
            .iter()
            .map(|s| (s.t_hi - s.t_lo) * s.intervals.iter().map(Interval::len).sum::<f64>())
            .sum()
    }

    pub fn interval_count(&self) -> usize {
        self.slabs.iter().map(|s| s.intervals.len()).sum()
    }

    /// Slab containing `t`, using the `(t_lo, t_hi]` convention (the first
    /// slab also owns `t_lo`).
    pub fn slab_index(&self, t: f64) -> Option<usize> {
        let first = self.slabs.first()?;
        if t < first.t_lo || t > self.slabs.last()?.t_hi {
            return None;
        }
        if t <= first.t_hi {
            return Some(0);
        }
        self.slabs.iter().position(|s| t > s.t_lo && t <= s.t_hi)
    }

    pub fn contains(&self, p: Point) -> bool {
        self.slab_index(p.t)
            .map(|i| self.slabs[i].intervals.iter().any(|iv| iv.contains(p.x)))
            .unwrap_or(false)
    }
}

/// The four-way partitioned collocation set.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SampleSet {
    pub ic: Vec<Point>,
    pub lbc: Vec<Point>,
    pub rbc: Vec<Point>,
    pub interior: Vec<Point>,
}

impl SampleSet {
    pub fn partition(&self, p: Partition) -> &[Point] {
        match p {
            Partition::Ic => &self.ic,
            Partition::Lbc => &self.lbc,
            Partition::Rbc => &self.rbc,
            Partition::Pde => &self.interior,
        }
    }

    pub fn partition_mut(&mut self, p: Partition) -> &mut Vec<Point> {
        match p {
            Partition::Ic => &mut self.ic,
            Partition::Lbc => &mut self.lbc,
            Partition::Rbc => &mut self.rbc,
            Partition::Pde => &mut self.interior,
        }
    }

    /// `[n_ic, n_lbc, n_rbc, n_pde]`.
    pub fn sizes(&self) -> [usize; 4] {
        [self.ic.len(), self.lbc.len(), self.rbc.len(), self.interior.len()]
    }

    pub fn len(&self) -> usize {
        self.sizes().iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Writes `samples_<PARTITION>.csv` files with header `x,t,partition`.
    pub fn write_csv(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        for part in Partition::ALL {
            let mut f = fs::File::create(dir.join(format!("samples_{part}.csv")))?;
            writeln!(f, "x,t,partition")?;
            for p in self.partition(part) {
                writeln!(f, "{},{},{}", p.x, p.t, part)?;
            }
        }
        Ok(())
    }
}

/// How the spatial zone radius is derived from the threshold `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum RadiusMode {
    /// `δ_{ε_n} / |ω_x|` with the derivative-bounding radius.
    #[default]
    Lemma,
    /// `ε / |ω_x|`, taking the threshold itself as the preactivation radius.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SamplerKind {
    Classical,
    #[default]
    Stratified,
}

impl SamplerKind {
    pub fn label(self) -> &'static str {
        match self {
            SamplerKind::Classical => "classical",
            SamplerKind::Stratified => "stratified",
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            SamplerKind::Classical => "CS",
            SamplerKind::Stratified => "SS",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplerConfig {
    /// Points per unit area in the interior.
    pub density: f64,
    /// Points per unit length on the initial line and the two boundaries.
    /// Defaults to `density`.
    pub line_density: Option<f64>,
    pub epsilon: f64,
    pub n_slabs: usize,
    pub seed: u64,
    pub derivative_order: u32,
    pub radius_mode: RadiusMode,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            density: 1.0,
            line_density: None,
            epsilon: 1e-3,
            n_slabs: 50,
            seed: 0,
            derivative_order: 1,
            radius_mode: RadiusMode::Lemma,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.density > 0.0 && self.density.is_finite()) {
            return Err(Error::Config(format!("density must be positive, got {}", self.density)));
        }
        if let Some(d) = self.line_density {
            if !(d > 0.0 && d.is_finite()) {
                return Err(Error::Config(format!("line density must be positive, got {d}")));
            }
        }
        if self.n_slabs == 0 {
            return Err(Error::Config("n_slabs must be at least 1".into()));
        }
        self.zone_spec().map(|_| ())
    }

    pub fn zone_spec(&self) -> Result<ZoneRadiusSpec> {
        ZoneRadiusSpec::new(self.epsilon, self.derivative_order)
    }

    pub fn line_density(&self) -> f64 {
        self.line_density.unwrap_or(self.density)
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Zone radius in preactivation units.
    pub fn preactivation_radius(&self) -> Result<f64> {
        let spec = self.zone_spec()?;
        match self.radius_mode {
            RadiusMode::Lemma => delta_epsilon(&spec),
            RadiusMode::Literal => Ok(spec.epsilon()),
        }
    }
}

/// Point count for a region of the given measure: `ceil(density · measure)`,
/// at least one. A relative slack of 1e-12 keeps exact products such as
/// `10 · 2.5` from rounding up.
pub fn point_count(density: f64, measure: f64) -> usize {
    let v = density * measure;
    ((v * (1.0 - 1e-12)).ceil() as usize).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZoneRadius {
    Bounded(f64),
    /// The neuron does not depend on `x`.
    Unbounded,
}

/// Spatial half-width of neuron `j`'s active zone (0-based `j`).
pub fn zone_radius_x(
    params: &NetworkParams,
    j: usize,
    spec: &ZoneRadiusSpec,
    mode: RadiusMode,
) -> Result<ZoneRadius> {
    let (wx, _, _) = params.first_layer_neuron(j)?;
    if wx.abs() < DEGENERATE_WEIGHT {
        return Ok(ZoneRadius::Unbounded);
    }
    let delta = match mode {
        RadiusMode::Lemma => delta_epsilon(spec)?,
        RadiusMode::Literal => spec.epsilon(),
    };
    Ok(ZoneRadius::Bounded(delta / wx.abs()))
}

/// `x` at which neuron `j`'s preactivation vanishes at time `t`.
pub fn ic_zone_center(params: &NetworkParams, j: usize, t: f64) -> Result<f64> {
    let (wx, wt, b) = params.first_layer_neuron(j)?;
    if wx.abs() < DEGENERATE_WEIGHT {
        return Err(Error::DegenerateWeight(j));
    }
    Ok(-(t * wt + b) / wx)
}

/// Sorted, pairwise-disjoint union of `raw`. Touching intervals merge.
pub fn merge_intervals(raw: &[Interval]) -> Vec<Interval> {
    let mut sorted = raw.to_vec();
    sorted.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut out: Vec<Interval> = Vec::with_capacity(sorted.len());
    for iv in sorted {
        match out.last_mut() {
            Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
            _ => out.push(iv),
        }
    }
    out
}

fn clip(lo: f64, hi: f64, domain: &Domain) -> Option<Interval> {
    let lo = lo.max(domain.x_lo);
    let hi = hi.min(domain.x_hi);
    (lo < hi).then_some(Interval { lo, hi })
}

fn full_line(domain: &Domain) -> Interval {
    Interval {
        lo: domain.x_lo,
        hi: domain.x_hi,
    }
}

/// Active zones on the initial line.
pub fn build_ic_zones(params: &NetworkParams, domain: &Domain, config: &SamplerConfig) -> Result<Vec<Interval>> {
    let delta = config.preactivation_radius()?;
    let mut raw = Vec::new();
    for j in 0..params.first_layer_width() {
        let (wx, _, _) = params.first_layer_neuron(j)?;
        if wx.abs() < DEGENERATE_WEIGHT {
            raw.push(full_line(domain));
            continue;
        }
        let c = ic_zone_center(params, j, domain.t_lo)?;
        let r = delta / wx.abs();
        raw.extend(clip(c - r, c + r, domain));
    }
    let merged = merge_intervals(&raw);
    Ok(if merged.is_empty() { vec![full_line(domain)] } else { merged })
}

fn slab_bounds(domain: &Domain, n: usize, i: usize) -> (f64, f64) {
    let dt = domain.duration() / n as f64;
    let lo = domain.t_lo + i as f64 * dt;
    let hi = if i + 1 == n { domain.t_hi } else { domain.t_lo + (i + 1) as f64 * dt };
    (lo, hi)
}

/// Per-slab active zones over the interior.
pub fn build_pde_zones(params: &NetworkParams, domain: &Domain, config: &SamplerConfig) -> Result<ZoneSet> {
    config.validate()?;
    let delta = config.preactivation_radius()?;
    let width = params.first_layer_width();
    let neurons: Vec<(f64, f64, f64)> = (0..width)
        .map(|j| params.first_layer_neuron(j))
        .collect::<Result<_>>()?;

    let mut slabs = Vec::with_capacity(config.n_slabs);
    for i in 0..config.n_slabs {
        let (t0, t1) = slab_bounds(domain, config.n_slabs, i);
        let mut raw = Vec::with_capacity(width);
        for &(wx, wt, b) in &neurons {
            if wx.abs() < DEGENERATE_WEIGHT {
                // Only t matters: active when |wt t + b| dips below δ in the slab.
                let (z0, z1) = (wt * t0 + b, wt * t1 + b);
                let min_abs = if z0.signum() != z1.signum() { 0.0 } else { z0.abs().min(z1.abs()) };
                if min_abs < delta {
                    raw.push(full_line(domain));
                }
                continue;
            }
            let c0 = -(t0 * wt + b) / wx;
            let c1 = -(t1 * wt + b) / wx;
            let r = delta / wx.abs();
            raw.extend(clip(c0.min(c1) - r, c0.max(c1) + r, domain));
        }
        let merged = merge_intervals(&raw);
        let fallback = merged.is_empty();
        slabs.push(Slab {
            t_lo: t0,
            t_hi: t1,
            intervals: if fallback { vec![full_line(domain)] } else { merged },
            fallback,
        });
    }
    Ok(ZoneSet { slabs })
}

fn uniform_in<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        rng.random_range(lo..hi)
    } else {
        lo
    }
}

/// Uniform on the open interval `(lo, hi)`.
fn uniform_open<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    loop {
        let v = rng.random_range(lo..hi);
        if v > lo {
            return v;
        }
    }
}

pub fn sample_ic<R: Rng + ?Sized>(zones: &[Interval], domain: &Domain, config: &SamplerConfig, rng: &mut R) -> Vec<Point> {
    let density = config.line_density();
    let mut out = Vec::new();
    for iv in zones {
        for _ in 0..point_count(density, iv.len()) {
            out.push(Point::new(uniform_in(rng, iv.lo, iv.hi), domain.t_lo));
        }
    }
    out
}

pub fn sample_pde<R: Rng + ?Sized>(zones: &ZoneSet, domain: &Domain, config: &SamplerConfig, rng: &mut R) -> Vec<Point> {
    let mut out = Vec::new();
    for slab in &zones.slabs {
        let dt = slab.t_hi - slab.t_lo;
        for iv in &slab.intervals {
            let lo = iv.lo.max(domain.x_lo);
            let hi = iv.hi.min(domain.x_hi);
            for _ in 0..point_count(config.density, iv.len() * dt) {
                // x in (lo, hi), t in (t_lo, t_hi] but never on the final line.
                let x = uniform_open(rng, lo, hi);
                let t = loop {
                    let t = slab.t_hi - rng.random_range(0.0..dt);
                    if t < domain.t_hi {
                        break t;
                    }
                };
                out.push(Point::new(x, t));
            }
        }
    }
    out
}

/// `ceil(line_density · (t_F - t_0))` points on each spatial boundary.
pub fn sample_boundary<R: Rng + ?Sized>(domain: &Domain, config: &SamplerConfig, rng: &mut R) -> (Vec<Point>, Vec<Point>) {
    let n = point_count(config.line_density(), domain.duration());
    let lbc = (0..n)
        .map(|_| Point::new(domain.x_lo, uniform_in(rng, domain.t_lo, domain.t_hi)))
        .collect();
    let rbc = (0..n)
        .map(|_| Point::new(domain.x_hi, uniform_in(rng, domain.t_lo, domain.t_hi)))
        .collect();
    (lbc, rbc)
}

pub fn sample_classical_ic<R: Rng + ?Sized>(domain: &Domain, config: &SamplerConfig, rng: &mut R) -> Vec<Point> {
    sample_ic(&[full_line(domain)], domain, config, rng)
}

/// Uniform baseline over the whole rectangle.
pub fn sample_classical<R: Rng + ?Sized>(domain: &Domain, config: &SamplerConfig, rng: &mut R) -> SampleSet {
    let ic = sample_classical_ic(domain, config, rng);
    let n = point_count(config.density, domain.area());
    let interior = (0..n)
        .map(|_| {
            Point::new(
                uniform_open(rng, domain.x_lo, domain.x_hi),
                uniform_open(rng, domain.t_lo, domain.t_hi),
            )
        })
        .collect();
    let (lbc, rbc) = sample_boundary(domain, config, rng);
    SampleSet { ic, lbc, rbc, interior }
}

/// A stratified draw together with the zones it was drawn from.
#[derive(Debug, Clone)]
pub struct StratifiedDraw {
    pub samples: SampleSet,
    pub ic_zones: Vec<Interval>,
    pub pde_zones: ZoneSet,
}

pub fn sample_stratified<R: Rng + ?Sized>(
    params: &NetworkParams,
    domain: &Domain,
    config: &SamplerConfig,
    rng: &mut R,
) -> Result<StratifiedDraw> {
    let ic_zones = build_ic_zones(params, domain, config)?;
    let pde_zones = build_pde_zones(params, domain, config)?;
    let ic = sample_ic(&ic_zones, domain, config, rng);
    let interior = sample_pde(&pde_zones, domain, config, rng);
    let (lbc, rbc) = sample_boundary(domain, config, rng);
    Ok(StratifiedDraw {
        samples: SampleSet { ic, lbc, rbc, interior },
        ic_zones,
        pde_zones,
    })
}

/// Writes `zones.csv` with header `slab_index,t_lo,t_hi,x_lo,x_hi`.
pub fn write_zones_csv(path: &Path, zones: &ZoneSet) -> Result<()> {
    let mut f = fs::File::create(path)?;
    writeln!(f, "slab_index,t_lo,t_hi,x_lo,x_hi")?;
    for (i, slab) in zones.slabs.iter().enumerate() {
        for iv in &slab.intervals {
            writeln!(f, "{},{},{},{},{}", i, slab.t_lo, slab.t_hi, iv.lo, iv.hi)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::sigmoid;
    use crate::net::{first_layer_preactivation, init_params, NetworkShape};
    use proptest::prelude::*;

    fn one_neuron(wx: f64, wt: f64, b: f64) -> NetworkParams {
        let mut p = NetworkParams::zeros(NetworkShape::new(vec![1]).unwrap());
        p.set_weight(0, 0, 0, wx);
        p.set_weight(0, 0, 1, wt);
        p.set_bias(0, 0, b);
        p.set_weight(1, 0, 0, 1.0);
        p
    }

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn cfg(density: f64) -> SamplerConfig {
        SamplerConfig {
            density,
            ..SamplerConfig::default()
        }
    }

    #[test]
    fn radius_examples() {
        let spec = ZoneRadiusSpec::new(1e-3, 1).unwrap();
        let r1 = match zone_radius_x(&one_neuron(1.0, 0.0, 0.0), 0, &spec, RadiusMode::Lemma).unwrap() {
            ZoneRadius::Bounded(r) => r,
            ZoneRadius::Unbounded => panic!(),
        };
        assert!((r1 - 7.6004).abs() < 1e-4);
        let r2 = zone_radius_x(&one_neuron(-2.0, 0.0, 0.0), 0, &spec, RadiusMode::Lemma).unwrap();
        assert_eq!(r2, ZoneRadius::Bounded(r1 / 2.0));
        assert_eq!(
            zone_radius_x(&one_neuron(0.0, 1.0, 0.0), 0, &spec, RadiusMode::Lemma).unwrap(),
            ZoneRadius::Unbounded
        );
        assert_eq!(
            zone_radius_x(&one_neuron(4.0, 0.0, 0.0), 0, &spec, RadiusMode::Literal).unwrap(),
            ZoneRadius::Bounded(2.5e-4)
        );
        assert!(zone_radius_x(&one_neuron(1.0, 0.0, 0.0), 1, &spec, RadiusMode::Lemma).is_err());
    }

    #[test]
    fn center_examples() {
        assert_eq!(ic_zone_center(&one_neuron(2.0, 0.0, -4.0), 0, 11.0).unwrap(), 2.0);
        assert_eq!(ic_zone_center(&one_neuron(1.0, 1.0, 0.0), 0, 3.0).unwrap(), -3.0);
        assert!(matches!(
            ic_zone_center(&one_neuron(0.0, 1.0, 0.0), 0, 0.0),
            Err(Error::DegenerateWeight(0))
        ));
        let p = init_params(&NetworkShape::uniform(2, 7).unwrap(), 3);
        for j in 0..7 {
            let c = ic_zone_center(&p, j, 1.5).unwrap();
            let z = first_layer_preactivation(&p, j, c, 1.5).unwrap();
            assert!((sigmoid(z) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn merge_examples() {
        assert_eq!(
            merge_intervals(&[iv(5.0, 6.0), iv(0.0, 2.0), iv(1.0, 3.0)]),
            vec![iv(0.0, 3.0), iv(5.0, 6.0)]
        );
        assert!(merge_intervals(&[]).is_empty());
        assert_eq!(merge_intervals(&[iv(0.0, 1.0), iv(1.0, 2.0)]), vec![iv(0.0, 2.0)]);
        assert_eq!(merge_intervals(&[iv(0.0, 10.0), iv(2.0, 3.0)]), vec![iv(0.0, 10.0)]);
        assert!(Interval::new(2.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn merge_is_idempotent_and_disjoint(raw in proptest::collection::vec((-50.0f64..50.0, 0.0f64..10.0), 0..40)) {
            let raw: Vec<Interval> = raw.into_iter().map(|(lo, len)| iv(lo, lo + len)).collect();
            let once = merge_intervals(&raw);
            prop_assert_eq!(merge_intervals(&once), once.clone());
            for w in once.windows(2) {
                prop_assert!(w[0].hi < w[1].lo);
            }
            for r in &raw {
                prop_assert!(once.iter().any(|m| m.lo <= r.lo && r.hi <= m.hi));
            }
        }
    }

    #[test]
    fn ic_zone_examples() {
        let domain = Domain::new(-50.0, 150.0, 0.0, 10.0).unwrap();
        let config = cfg(1.0);
        let zones = build_ic_zones(&one_neuron(2.0, 0.0, -4.0), &domain, &config).unwrap();
        let half = 1999f64.ln() / 2.0;
        assert_eq!(zones.len(), 1);
        assert!((zones[0].lo - (2.0 - half)).abs() < 1e-12);
        assert!((zones[0].hi - (2.0 + half)).abs() < 1e-12);
        assert!((zones[0].lo + 1.8002).abs() < 1e-4);

        // Zone centred at x = -100, far left of the domain: only the fallback remains.
        let left = build_ic_zones(&one_neuron(1.0, 0.0, 100.0), &domain, &config).unwrap();
        assert_eq!(left, vec![iv(-50.0, 150.0)]);

        let flat = build_ic_zones(&one_neuron(0.0, 1.0, 0.0), &domain, &config).unwrap();
        assert_eq!(flat, vec![iv(-50.0, 150.0)]);
    }

    #[test]
    fn sample_ic_counts() {
        let domain = Domain::new(0.0, 10.0, 0.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(sample_ic(&[iv(1.0, 3.5)], &domain, &cfg(10.0), &mut rng).len(), 25);
        assert_eq!(sample_ic(&[iv(1.0, 1.01)], &domain, &cfg(10.0), &mut rng).len(), 1);
        let pts = sample_ic(&[iv(0.0, 1.0)], &domain, &cfg(100.0), &mut rng);
        assert_eq!(pts.len(), 100);
        assert!(pts.iter().all(|p| p.x >= 0.0 && p.x <= 1.0 && p.t == 0.0));
    }

    #[test]
    fn pde_zone_examples() {
        let domain = Domain::new(0.0, 100.0, 0.0, 10.0).unwrap();
        let config = SamplerConfig {
            n_slabs: 10,
            ..cfg(1.0)
        };
        let delta = 1999f64.ln();
        let zones = build_pde_zones(&one_neuron(1.0, -1.0, 0.0), &domain, &config).unwrap();
        assert_eq!(zones.slabs.len(), 10);
        let first = &zones.slabs[0];
        assert_eq!((first.t_lo, first.t_hi), (0.0, 1.0));
        assert_eq!(first.intervals.len(), 1);
        assert_eq!(first.intervals[0].lo, 0.0);
        assert!((first.intervals[0].hi - (1.0 + delta)).abs() < 1e-12);
        assert_eq!(zones.slabs[9].t_hi, 10.0);

        let still = build_pde_zones(&one_neuron(0.5, 0.0, -10.0), &domain, &config).unwrap();
        for s in &still.slabs {
            assert_eq!(s.intervals, still.slabs[0].intervals);
        }
        assert!(zones.total_area() <= domain.area());
    }

    #[test]
    fn degenerate_neuron_uses_time_rule() {
        let domain = Domain::new(0.0, 100.0, 0.0, 100.0).unwrap();
        let config = SamplerConfig { n_slabs: 10, ..cfg(1.0) };
        // Preactivation t - 50 is small only for t near 50.
        let zones = build_pde_zones(&one_neuron(0.0, 1.0, -50.0), &domain, &config).unwrap();
        for s in &zones.slabs {
            let active = s.t_lo < 50.0 + 7.6 && s.t_hi > 50.0 - 7.6;
            assert_eq!(!s.fallback, active, "slab {:?}", (s.t_lo, s.t_hi));
        }
    }

    #[test]
    fn sample_pde_counts_and_membership() {
        let domain = Domain::new(0.0, 100.0, 0.0, 10.0).unwrap();
        let zones = ZoneSet {
            slabs: vec![Slab {
                t_lo: 0.0,
                t_hi: 2.0,
                intervals: vec![iv(10.0, 15.0)],
                fallback: false,
            }],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pts = sample_pde(&zones, &domain, &cfg(10.0), &mut rng);
        assert_eq!(pts.len(), 100);
        assert!(pts.iter().all(|p| p.x > 10.0 && p.x < 15.0 && p.t > 0.0 && p.t <= 2.0));
    }

    #[test]
    fn boundary_examples() {
        let domain = Domain::new(-20.0, 80.0, 0.0, 60.0).unwrap();
        let (l, r) = sample_boundary(&domain, &cfg(1.0), &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!((l.len(), r.len()), (60, 60));
        assert!(l.iter().all(|p| p.x == -20.0));
        assert!(r.iter().all(|p| p.x == 80.0));
        let (l2, _) = sample_boundary(&domain, &cfg(1.0), &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(l2.len(), 60);
        assert_ne!(l, l2);
    }

    #[test]
    fn classical_examples() {
        let domain = Domain::new(-200.0, 800.0, 0.0, 600.0).unwrap();
        let density = 15_000.0 / domain.area();
        assert!((density - 0.025).abs() < 1e-15);
        let s = sample_classical(&domain, &cfg(density), &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(s.interior.len(), 15_000);
        assert!(s.interior.iter().all(|p| domain.contains_interior(*p)));

        let unit = Domain::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let s = sample_classical(&unit, &cfg(100.0), &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(s.interior.len(), 100);
        assert_eq!(s.ic.len(), 100);
    }

    #[test]
    fn full_coverage_matches_classical_count_up_to_ceiling_slack() {
        let domain = Domain::new(-20.0, 80.0, 0.0, 60.0).unwrap();
        // A zero network has no x-dependence: every slab falls back to the full line.
        let p = NetworkParams::zeros(NetworkShape::new(vec![4]).unwrap());
        let config = cfg(0.37);
        let zones = build_pde_zones(&p, &domain, &config).unwrap();
        assert!((zones.total_area() - domain.area()).abs() < 1e-9);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ss = sample_pde(&zones, &domain, &config, &mut rng).len();
        let cs = point_count(config.density, domain.area());
        assert!(ss >= cs && ss <= cs + zones.interval_count());
    }

    #[test]
    fn line_density_overrides_lines_only() {
        let domain = Domain::new(0.0, 10.0, 0.0, 10.0).unwrap();
        let config = SamplerConfig {
            line_density: Some(3.0),
            ..cfg(0.5)
        };
        let s = sample_classical(&domain, &config, &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(s.sizes(), [30, 30, 30, 50]);
    }

    #[test]
    fn zone_set_membership() {
        let zones = ZoneSet {
            slabs: vec![
                Slab { t_lo: 0.0, t_hi: 1.0, intervals: vec![iv(0.0, 1.0)], fallback: false },
                Slab { t_lo: 1.0, t_hi: 2.0, intervals: vec![iv(5.0, 6.0)], fallback: false },
            ],
        };
        assert!(zones.contains(Point::new(0.5, 0.0)));
        assert!(zones.contains(Point::new(0.5, 1.0)));
        assert!(!zones.contains(Point::new(0.5, 1.5)));
        assert!(zones.contains(Point::new(5.5, 2.0)));
        assert!(!zones.contains(Point::new(5.5, 2.1)));
    }

    #[test]
    fn config_validation() {
        assert!(cfg(0.0).validate().is_err());
        assert!(SamplerConfig { n_slabs: 0, ..cfg(1.0) }.validate().is_err());
        assert!(SamplerConfig { epsilon: 0.7, ..cfg(1.0) }.validate().is_err());
        assert!(SamplerConfig { line_density: Some(-1.0), ..cfg(1.0) }.validate().is_err());
        assert!(cfg(1.0).validate().is_ok());
    }

    #[test]
    fn csv_dumps_have_expected_headers() {
        let dir = tempfile::tempdir().unwrap();
        let domain = Domain::new(0.0, 4.0, 0.0, 2.0).unwrap();
        let p = init_params(&NetworkShape::new(vec![3]).unwrap(), 0);
        let draw = sample_stratified(&p, &domain, &cfg(2.0), &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        draw.samples.write_csv(dir.path()).unwrap();
        write_zones_csv(&dir.path().join("zones.csv"), &draw.pde_zones).unwrap();
        let ic = fs::read_to_string(dir.path().join("samples_IC.csv")).unwrap();
        assert!(ic.starts_with("x,t,partition\n"));
        assert!(ic.lines().skip(1).all(|l| l.ends_with(",IC")));
        let zones = fs::read_to_string(dir.path().join("zones.csv")).unwrap();
        assert!(zones.starts_with("slab_index,t_lo,t_hi,x_lo,x_hi\n"));
    }
}
