//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use stratified_pinn::sampler::Interval;
use stratified_pinn::NetworkParams;

/// `S(m, n)` by enumerating restricted growth strings of length `m`.
pub fn brute_stirling(m: usize, n: usize) -> u64 {
    if m == 0 {
        return u64::from(n == 0);
    }
    fn walk(pos: usize, m: usize, blocks: usize, target: usize) -> u64 {
        if pos == m {
            return u64::from(blocks == target);
        }
        if blocks + (m - pos) < target {
            return 0;
        }
        let mut count = 0;
        for b in 0..=blocks.min(target - 1) {
            count += walk(pos + 1, m, blocks.max(b + 1), target);
        }
        count
    }
    if n == 0 {
        return 0;
    }
    // Element 0 always opens block 0.
    walk(1, m, 1, n)
}

pub fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// `σ'`, `σ''`, `σ'''` from the textbook polynomial forms in `s = σ(x)`.
pub fn hand_sigmoid_derivatives(x: f64) -> [f64; 3] {
    // 1 - sigma(x) taken as sigma(-x) to avoid cancellation near sigma = 1.
    let (s, c) = (logistic(x), logistic(-x));
    let d1 = s * c;
    [d1, d1 * (c - s), d1 * (1.0 - 6.0 * s * c)]
}

/// Straight-line evaluation of the network with scalar loops.
pub fn naive_forward(params: &NetworkParams, x: f64, t: f64) -> f64 {
    let widths = params.shape().neurons_per_layer().to_vec();
    let mut prev = vec![x, t];
    for (k, &h) in widths.iter().enumerate() {
        let mut next = Vec::with_capacity(h);
        for r in 0..h {
            let mut z = params.bias(k, r);
            for (c, p) in prev.iter().enumerate() {
                z += params.weight(k, r, c) * p;
            }
            next.push(logistic(z));
        }
        prev = next;
    }
    let out = widths.len();
    let mut u = params.bias(out, 0);
    for (c, p) in prev.iter().enumerate() {
        u += params.weight(out, 0, c) * p;
    }
    u
}

/// First derivative by Richardson-extrapolated central differences.
pub fn richardson_d1(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let d = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

/// Second derivative by Richardson-extrapolated central differences.
pub fn richardson_d2(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let fx = f(x);
    let d = |h: f64| (f(x + h) - 2.0 * fx + f(x - h)) / (h * h);
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

/// `|a - b| ≤ rel·|b|` or `|a - b| ≤ floor`.
pub fn close(a: f64, b: f64, rel: f64, floor: f64) -> bool {
    let e = (a - b).abs();
    e <= rel * b.abs() || e <= floor
}

/// Membership of every cell midpoint and cell edge of a uniform grid in the
/// union of `intervals` (closed).
pub fn rasterize(intervals: &[Interval], lo: f64, hi: f64, cells: usize) -> Vec<bool> {
    (0..=2 * cells)
        .map(|k| lo + (hi - lo) * k as f64 / (2 * cells) as f64)
        .map(|x| intervals.iter().any(|iv| iv.lo <= x && x <= iv.hi))
        .collect()
}
