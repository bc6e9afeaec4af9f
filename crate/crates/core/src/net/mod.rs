//! Feedforward sigmoid network `U_T : (x, t) -> R`.
//!
//! Hidden layers apply the logistic function to an affine map of the previous
//! layer; the output layer is affine with a single unit. Parameters live in a
//! flat vector in the canonical order
//!
//! ```text
//! for each layer k = 1..=F+1:
//!     weights of layer k, row-major (h_k rows × h_{k-1} columns)
//!     biases of layer k (h_k entries)
//! ```
//!
//! with `h_0 = 2` (inputs `x`, `t`) and `h_{F+1} = 1`. Optimizer state and
//! checkpoints index into this vector.

mod checkpoint;
mod engine;

pub use checkpoint::{read_checkpoint, write_checkpoint, CHECKPOINT_MAGIC};
pub use engine::{accumulate_gradient, forward_batch, jet_batch, JetAdjoint, JetOrder, Parallelism};

use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::calculus::sigmoid;
use crate::{Error, Result};

/// Input dimension: `x` and `t`.
pub const INPUT_DIM: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkShape {
    neurons_per_layer: Vec<usize>,
}

impl NetworkShape {
    pub fn new(neurons_per_layer: Vec<usize>) -> Result<Self> {
        if neurons_per_layer.is_empty() {
            return Err(Error::InvalidShape("at least one hidden layer is required".into()));
        }
        if let Some(k) = neurons_per_layer.iter().position(|&h| h == 0) {
            return Err(Error::InvalidShape(format!("hidden layer {} has zero width", k + 1)));
        }
        Ok(Self { neurons_per_layer })
    }

    /// `F` hidden layers of equal width.
    pub fn uniform(layers: usize, width: usize) -> Result<Self> {
        Self::new(vec![width; layers])
    }

    pub fn hidden_layer_count(&self) -> usize {
        self.neurons_per_layer.len()
    }

    pub fn neurons_per_layer(&self) -> &[usize] {
        &self.neurons_per_layer
    }

    /// `(rows, cols)` of every weight matrix, output layer included.
    pub fn layer_dims(&self) -> Vec<(usize, usize)> {
        let mut dims = Vec::with_capacity(self.neurons_per_layer.len() + 1);
        let mut fan_in = INPUT_DIM;
        for &h in &self.neurons_per_layer {
            dims.push((h, fan_in));
            fan_in = h;
        }
        dims.push((1, fan_in));
        dims
    }

    pub fn param_count(&self) -> usize {
        self.layer_dims().iter().map(|(r, c)| r * c + r).sum()
    }
}

/// Location of one layer inside the flat parameter vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerSpan {
    pub rows: usize,
    pub cols: usize,
    pub weights: usize,
    pub biases: usize,
}

impl LayerSpan {
    pub fn end(&self) -> usize {
        self.biases + self.rows
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkParams {
    shape: NetworkShape,
    spans: Vec<LayerSpan>,
    values: Vec<f64>,
}

impl NetworkParams {
    pub fn zeros(shape: NetworkShape) -> Self {
        let mut spans = Vec::new();
        let mut offset = 0;
        for (rows, cols) in shape.layer_dims() {
            let span = LayerSpan {
                rows,
                cols,
                weights: offset,
                biases: offset + rows * cols,
            };
            offset = span.end();
            spans.push(span);
        }
        Self {
            shape,
            spans,
            values: vec![0.0; offset],
        }
    }

    /// Builds parameters from a flat vector in canonical order.
    pub fn from_flat(shape: NetworkShape, values: Vec<f64>) -> Result<Self> {
        let mut params = Self::zeros(shape);
        if values.len() != params.values.len() {
            return Err(Error::Dimension {
                expected: params.values.len(),
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteUpdate { index });
        }
        params.values = values;
        Ok(params)
    }

    pub fn shape(&self) -> &NetworkShape {
        &self.shape
    }

    pub fn spans(&self) -> &[LayerSpan] {
        &self.spans
    }

    /// Number of weight layers (`F + 1`).
    pub fn layer_count(&self) -> usize {
        self.spans.len()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.values
    }

    pub fn as_flat_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Layers are 0-based here: layer 0 is the first hidden layer, layer `F`
    /// the output.
    pub fn weights(&self, layer: usize) -> &[f64] {
        let s = self.spans[layer];
        &self.values[s.weights..s.biases]
    }

    pub fn biases(&self, layer: usize) -> &[f64] {
        let s = self.spans[layer];
        &self.values[s.biases..s.end()]
    }

    pub fn weight_index(&self, layer: usize, row: usize, col: usize) -> usize {
        let s = self.spans[layer];
        assert!(row < s.rows && col < s.cols, "weight index out of range");
        s.weights + row * s.cols + col
    }

    pub fn bias_index(&self, layer: usize, row: usize) -> usize {
        let s = self.spans[layer];
        assert!(row < s.rows, "bias index out of range");
        s.biases + row
    }

    pub fn weight(&self, layer: usize, row: usize, col: usize) -> f64 {
        self.values[self.weight_index(layer, row, col)]
    }

    pub fn bias(&self, layer: usize, row: usize) -> f64 {
        self.values[self.bias_index(layer, row)]
    }

    pub fn set_weight(&mut self, layer: usize, row: usize, col: usize, value: f64) {
        let i = self.weight_index(layer, row, col);
        self.values[i] = value;
    }

    pub fn set_bias(&mut self, layer: usize, row: usize, value: f64) {
        let i = self.bias_index(layer, row);
        self.values[i] = value;
    }

    pub fn first_layer_width(&self) -> usize {
        self.spans[0].rows
    }

    /// First-layer coefficients `(ω_x, ω_t, b)` of neuron `j` (0-based).
    pub fn first_layer_neuron(&self, j: usize) -> Result<(f64, f64, f64)> {
        let width = self.first_layer_width();
        if j >= width {
            return Err(Error::NeuronIndex { index: j, width });
        }
        Ok((self.weight(0, j, 0), self.weight(0, j, 1), self.bias(0, j)))
    }

    /// Flat indices of every first-layer parameter.
    pub fn first_layer_indices(&self) -> std::ops::Range<usize> {
        0..self.spans[0].end()
    }

    /// Human-readable id of a flat parameter index, e.g. `w1[3,0]` or `b2[7]`.
    pub fn param_id(&self, index: usize) -> String {
        for (k, s) in self.spans.iter().enumerate() {
            if index < s.biases && index >= s.weights {
                let local = index - s.weights;
                return format!("w{}[{},{}]", k + 1, local / s.cols, local % s.cols);
            }
            if index >= s.biases && index < s.end() {
                return format!("b{}[{}]", k + 1, index - s.biases);
            }
        }
        format!("p[{index}]")
    }
}

/// Glorot-uniform weights and zero biases, deterministic in `seed`.
pub fn init_params(shape: &NetworkShape, seed: u64) -> NetworkParams {
    let mut params = NetworkParams::zeros(shape.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spans = params.spans.clone();
    for s in spans {
        let limit = (6.0 / (s.rows + s.cols) as f64).sqrt();
        let dist = Uniform::new_inclusive(-limit, limit).expect("finite Glorot limit");
        for w in &mut params.values[s.weights..s.biases] {
            *w = dist.sample(&mut rng);
        }
    }
    params
}

/// Trial value and exact input partials at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EvalJet {
    pub u: f64,
    pub u_x: f64,
    pub u_t: f64,
    pub u_xx: f64,
}

fn check_input(x: f64, t: f64) -> Result<()> {
    if x.is_finite() && t.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFiniteInput { x, t })
    }
}

/// `U_T(x, t)`.
pub fn forward(params: &NetworkParams, x: f64, t: f64) -> Result<f64> {
    check_input(x, t)?;
    Ok(forward_batch(params, &[crate::sampler::Point { x, t }], &Parallelism::Serial)[0])
}

/// `U_T` with `u_x`, `u_t`, `u_xx`, all by exact forward-mode propagation.
pub fn eval_jet(params: &NetworkParams, x: f64, t: f64) -> Result<EvalJet> {
    check_input(x, t)?;
    Ok(jet_batch(params, &[crate::sampler::Point { x, t }], &Parallelism::Serial)[0])
}

/// Affine preactivation `ω_x x + ω_t t + b` of first-layer neuron `j` (0-based).
pub fn first_layer_preactivation(params: &NetworkParams, j: usize, x: f64, t: f64) -> Result<f64> {
    let (wx, wt, b) = params.first_layer_neuron(j)?;
    Ok(wx * x + wt * t + b)
}

/// Outputs of every hidden layer at one point, for instrumentation.
pub fn hidden_activations(params: &NetworkParams, x: f64, t: f64) -> Result<Vec<Vec<f64>>> {
    check_input(x, t)?;
    let mut prev = vec![x, t];
    let mut out = Vec::with_capacity(params.layer_count() - 1);
    for k in 0..params.layer_count() - 1 {
        let s = params.spans[k];
        let w = params.weights(k);
        let b = params.biases(k);
        let next: Vec<f64> = (0..s.rows)
            .map(|r| {
                let z = w[r * s.cols..(r + 1) * s.cols]
                    .iter()
                    .zip(&prev)
                    .map(|(a, p)| a * p)
                    .sum::<f64>()
                    + b[r];
                sigmoid(z)
            })
            .collect();
        out.push(next.clone());
        prev = next;
    }
    Ok(out)
}
