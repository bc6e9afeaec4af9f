//! Batched evaluation of the network and its input jets, with reverse-mode
//! gradients of arbitrary point-wise losses.
//!
//! Points are processed in fixed-size chunks. Inside a chunk every layer holds
//! a matrix of `rows × (channels · points)` entries where the channel blocks
//! are the value, `∂/∂x`, `∂/∂t` and `∂²/∂x²` of each neuron. Propagating all
//! channels is a single matrix product per layer; the activation then mixes
//! the channels with the chain rule:
//!
//! ```text
//! a   = σ(z)
//! a_x = σ'(z) z_x         a_t = σ'(z) z_t
//! a_xx = σ''(z) z_x² + σ'(z) z_xx
//! ```
//!
//! The backward pass is the exact adjoint of that recurrence, so parameter
//! gradients of losses built from `u_xx` are exact as well.
//!
//! Chunk gradients are reduced in chunk order, which makes results identical
//! whether the chunks run serially or on a thread pool.

use std::sync::Arc;

use rayon::prelude::*;

use super::{EvalJet, NetworkParams, INPUT_DIM};
use crate::calculus::sigmoid;
use crate::sampler::Point;
use crate::{Error, Result};

const CHUNK: usize = 128;

/// Which input derivatives to propagate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetOrder {
    /// `u` only.
    Value,
    /// `u`, `u_x`, `u_t`, `u_xx`.
    Full,
}

impl JetOrder {
    fn channels(self) -> usize {
        match self {
            JetOrder::Value => 1,
            JetOrder::Full => 4,
        }
    }
}

/// Sensitivity of a scalar loss to each component of a point's jet.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JetAdjoint {
    pub u: f64,
    pub u_x: f64,
    pub u_t: f64,
    pub u_xx: f64,
}

impl JetAdjoint {
    pub fn scaled(self, k: f64) -> Self {
        Self {
            u: self.u * k,
            u_x: self.u_x * k,
            u_t: self.u_t * k,
            u_xx: self.u_xx * k,
        }
    }
}

#[derive(Clone, Default)]
pub enum Parallelism {
    #[default]
    Serial,
    Pool(Arc<rayon::ThreadPool>),
}

impl Parallelism {
    /// `threads <= 1` is serial.
    pub fn with_threads(threads: usize) -> Result<Self> {
        if threads <= 1 {
            return Ok(Parallelism::Serial);
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        Ok(Parallelism::Pool(Arc::new(pool)))
    }

    fn map_chunks<T, F>(&self, points: &[Point], f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize, &[Point]) -> T + Sync,
    {
        match self {
            Parallelism::Serial => points
                .chunks(CHUNK)
                .enumerate()
                .map(|(i, c)| f(i * CHUNK, c))
                .collect(),
            Parallelism::Pool(pool) => pool.install(|| {
                points
                    .par_chunks(CHUNK)
                    .enumerate()
                    .map(|(i, c)| f(i * CHUNK, c))
                    .collect()
            }),
        }
    }
}

impl std::fmt::Debug for Parallelism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Parallelism::Serial => write!(f, "Serial"),
            Parallelism::Pool(p) => write!(f, "Pool({} threads)", p.current_num_threads()),
        }
    }
}

/// `c (m×n) = a (m×k) · b (k×n) + beta · c`, strides given as (row, col).
#[allow(clippy::too_many_arguments)]
fn gemm(
    m: usize,
    k: usize,
    n: usize,
    a: &[f64],
    a_strides: (usize, usize),
    b: &[f64],
    b_strides: (usize, usize),
    beta: f64,
    c: &mut [f64],
    c_strides: (usize, usize),
) {
    if m == 0 || n == 0 {
        return;
    }
    let last = |rows: usize, cols: usize, (rs, cs): (usize, usize)| {
        if rows == 0 || cols == 0 {
            0
        } else {
            (rows - 1) * rs + (cols - 1) * cs + 1
        }
    };
    assert!(a.len() >= last(m, k, a_strides));
    assert!(b.len() >= last(k, n, b_strides));
    assert!(c.len() >= last(m, n, c_strides));
    // SAFETY: the asserts above bound every index the kernel touches.
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            1.0,
            a.as_ptr(),
            a_strides.0 as isize,
            a_strides.1 as isize,
            b.as_ptr(),
            b_strides.0 as isize,
            b_strides.1 as isize,
            beta,
            c.as_mut_ptr(),
            c_strides.0 as isize,
            c_strides.1 as isize,
        );
    }
}

struct HiddenTape {
    /// Preactivations, all channels (`rows × cols`).
    z: Vec<f64>,
    /// Activations, all channels (`rows × cols`).
    a: Vec<f64>,
    /// σ', σ'', σ''' of the value preactivation (`rows × points`).
    d1: Vec<f64>,
    d2: Vec<f64>,
    d3: Vec<f64>,
}

struct Tape {
    points: usize,
    channels: usize,
    input: Vec<f64>,
    hidden: Vec<HiddenTape>,
    /// Output row, all channels.
    u: Vec<f64>,
}

impl Tape {
    fn cols(&self) -> usize {
        self.points * self.channels
    }

    fn jet(&self, p: usize) -> EvalJet {
        let b = self.points;
        if self.channels == 1 {
            EvalJet {
                u: self.u[p],
                ..EvalJet::default()
            }
        } else {
            EvalJet {
                u: self.u[p],
                u_x: self.u[b + p],
                u_t: self.u[2 * b + p],
                u_xx: self.u[3 * b + p],
            }
        }
    }
}

fn forward_chunk(params: &NetworkParams, points: &[Point], order: JetOrder, keep: bool) -> Tape {
    let b = points.len();
    let ch = order.channels();
    let cols = ch * b;

    let mut input = vec![0.0; INPUT_DIM * cols];
    for (p, pt) in points.iter().enumerate() {
        input[p] = pt.x;
        input[cols + p] = pt.t;
        if ch == 4 {
            input[b + p] = 1.0; // ∂x/∂x
            input[cols + 2 * b + p] = 1.0; // ∂t/∂t
        }
    }

    let spans = params.spans();
    let n_hidden = spans.len() - 1;
    let mut hidden: Vec<HiddenTape> = Vec::with_capacity(n_hidden);
    let mut prev_owned: Option<Vec<f64>> = None;

    for k in 0..n_hidden {
        let s = spans[k];
        let prev: &[f64] = match (&prev_owned, hidden.last()) {
            (Some(v), _) => v,
            (None, Some(h)) => &h.a,
            (None, None) => &input,
        };
        let mut z = vec![0.0; s.rows * cols];
        gemm(s.rows, s.cols, cols, params.weights(k), (s.cols, 1), prev, (cols, 1), 0.0, &mut z, (cols, 1));

        let bias = params.biases(k);
        let mut a = vec![0.0; s.rows * cols];
        let mut d1 = vec![0.0; s.rows * b];
        let mut d2 = vec![0.0; s.rows * b];
        let mut d3 = vec![0.0; s.rows * b];
        for r in 0..s.rows {
            let row = r * cols;
            for p in 0..b {
                let zv = z[row + p] + bias[r];
                z[row + p] = zv;
                let sv = sigmoid(zv);
                let s1 = sv * (1.0 - sv);
                let s2 = s1 * (1.0 - 2.0 * sv);
                let s3 = s1 * (1.0 - 6.0 * s1);
                a[row + p] = sv;
                d1[r * b + p] = s1;
                d2[r * b + p] = s2;
                d3[r * b + p] = s3;
                if ch == 4 {
                    let zx = z[row + b + p];
                    let zt = z[row + 2 * b + p];
                    let zxx = z[row + 3 * b + p];
                    a[row + b + p] = s1 * zx;
                    a[row + 2 * b + p] = s1 * zt;
                    a[row + 3 * b + p] = s2 * zx * zx + s1 * zxx;
                }
            }
        }
        if keep {
            hidden.push(HiddenTape { z, a, d1, d2, d3 });
            prev_owned = None;
        } else {
            prev_owned = Some(a);
        }
    }

    let s = spans[n_hidden];
    let last: &[f64] = match (&prev_owned, hidden.last()) {
        (Some(v), _) => v,
        (None, Some(h)) => &h.a,
        (None, None) => &input,
    };
    let mut u = vec![0.0; cols];
    gemm(1, s.cols, cols, params.weights(n_hidden), (s.cols, 1), last, (cols, 1), 0.0, &mut u, (cols, 1));
    let b_out = params.biases(n_hidden)[0];
    for v in &mut u[..b] {
        *v += b_out;
    }

    Tape {
        points: b,
        channels: ch,
        input,
        hidden,
        u,
    }
}

/// Adds `Σ_p seeds_p · ∂jet_p/∂θ` to `grad`. `seeds` has the channel-major
/// layout of the output row.
fn backward_chunk(params: &NetworkParams, tape: &Tape, seeds: &[f64], grad: &mut [f64]) {
    let b = tape.points;
    let ch = tape.channels;
    let cols = tape.cols();
    let spans = params.spans();
    let n_hidden = spans.len() - 1;

    // Output layer.
    let s = spans[n_hidden];
    let last_a: &[f64] = match tape.hidden.last() {
        Some(h) => &h.a,
        None => &tape.input,
    };
    gemm(1, cols, s.cols, seeds, (cols, 1), last_a, (1, cols), 1.0, &mut grad[s.weights..s.biases], (s.cols, 1));
    grad[s.biases] += seeds[..b].iter().sum::<f64>();
    let mut adj = vec![0.0; s.cols * cols];
    gemm(s.cols, 1, cols, params.weights(n_hidden), (1, s.cols), seeds, (cols, 1), 0.0, &mut adj, (cols, 1));

    for k in (0..n_hidden).rev() {
        let s = spans[k];
        let h = &tape.hidden[k];
        // adj ← adjoint of z (in place).
        for r in 0..s.rows {
            let row = r * cols;
            for p in 0..b {
                let i = r * b + p;
                let (s1, s2) = (h.d1[i], h.d2[i]);
                if ch == 1 {
                    adj[row + p] *= s1;
                } else {
                    let (s3, zx, zt, zxx) = (h.d3[i], h.z[row + b + p], h.z[row + 2 * b + p], h.z[row + 3 * b + p]);
                    let av = adj[row + p];
                    let ax = adj[row + b + p];
                    let at = adj[row + 2 * b + p];
                    let axx = adj[row + 3 * b + p];
                    adj[row + p] = av * s1 + ax * s2 * zx + at * s2 * zt + axx * (s3 * zx * zx + s2 * zxx);
                    adj[row + b + p] = ax * s1 + 2.0 * axx * s2 * zx;
                    adj[row + 2 * b + p] = at * s1;
                    adj[row + 3 * b + p] = axx * s1;
                }
            }
        }
        let prev: &[f64] = if k == 0 { &tape.input } else { &tape.hidden[k - 1].a };
        gemm(s.rows, cols, s.cols, &adj, (cols, 1), prev, (1, cols), 1.0, &mut grad[s.weights..s.biases], (s.cols, 1));
        for r in 0..s.rows {
            grad[s.biases + r] += adj[r * cols..r * cols + b].iter().sum::<f64>();
        }
        if k > 0 {
            let mut next = vec![0.0; s.cols * cols];
            gemm(s.cols, s.rows, cols, params.weights(k), (1, s.cols), &adj, (cols, 1), 0.0, &mut next, (cols, 1));
            adj = next;
        }
    }
}

/// `U_T` at every point.
pub fn forward_batch(params: &NetworkParams, points: &[Point], par: &Parallelism) -> Vec<f64> {
    par.map_chunks(points, |_, chunk| forward_chunk(params, chunk, JetOrder::Value, false).u)
        .into_iter()
        .flatten()
        .collect()
}

/// Full jets at every point.
pub fn jet_batch(params: &NetworkParams, points: &[Point], par: &Parallelism) -> Vec<EvalJet> {
    par.map_chunks(points, |_, chunk| {
        let tape = forward_chunk(params, chunk, JetOrder::Full, false);
        (0..chunk.len()).map(|p| tape.jet(p)).collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect()
}

/// Evaluates a point-wise loss and accumulates its exact parameter gradient.
///
/// `seed(i, jet)` receives the index of the point in `points` and its jet
/// and returns the point's loss contribution together with the sensitivity
/// of that contribution to the jet. The summed contributions are returned and
/// `Σ_i ∂contribution_i/∂θ` is added to `grad` (canonical parameter order).
pub fn accumulate_gradient<F>(
    params: &NetworkParams,
    points: &[Point],
    order: JetOrder,
    par: &Parallelism,
    seed: F,
    grad: &mut [f64],
) -> Result<f64>
where
    F: Fn(usize, &EvalJet) -> Result<(f64, JetAdjoint)> + Sync,
{
    if grad.len() != params.len() {
        return Err(Error::Dimension {
            expected: params.len(),
            got: grad.len(),
        });
    }
    let results = par.map_chunks(points, |offset, chunk| -> Result<(f64, Vec<f64>)> {
        let tape = forward_chunk(params, chunk, order, true);
        let b = chunk.len();
        let mut seeds = vec![0.0; tape.cols()];
        let mut loss = 0.0;
        for p in 0..b {
            let (value, adjoint) = seed(offset + p, &tape.jet(p))?;
            loss += value;
            seeds[p] = adjoint.u;
            if order == JetOrder::Full {
                seeds[b + p] = adjoint.u_x;
                seeds[2 * b + p] = adjoint.u_t;
                seeds[3 * b + p] = adjoint.u_xx;
            }
        }
        let mut local = vec![0.0; params.len()];
        backward_chunk(params, &tape, &seeds, &mut local);
        Ok((loss, local))
    });
    let mut total = 0.0;
    for r in results {
        let (loss, local) = r?;
        total += loss;
        for (g, l) in grad.iter_mut().zip(&local) {
            *g += l;
        }
    }
    Ok(total)
}
