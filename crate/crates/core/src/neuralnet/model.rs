use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embedding::{Embedded, EmbeddingTable, TokenIds};
use crate::error::{Error, Result};

/// Gate block order inside the stacked `4h` rows.
pub const GATE_INPUT: usize = 0;
pub const GATE_FORGET: usize = 1;
pub const GATE_CELL: usize = 2;
pub const GATE_OUTPUT: usize = 3;

pub const INIT_RANGE: f64 = 0.08;
pub const FORGET_BIAS_INIT: f64 = 1.0;

/// Single-layer LSTM with a sigmoid output unit on the final hidden state.
///
/// Gate pre-activations are `W x_t + U h_{t-1} + b`, stacked as input,
/// forget, cell and output blocks of `hidden_size` rows each.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmModel {
    pub input_size: usize,
    pub hidden_size: usize,
    pub rng_seed: u64,
    /// `4h × d`, row-major.
    pub w_input: Vec<f64>,
    /// `4h × h`, row-major.
    pub w_hidden: Vec<f64>,
    /// `4h`.
    pub bias: Vec<f64>,
    /// `h`.
    pub head_w: Vec<f64>,
    pub head_b: f64,
}

impl LstmModel {
    pub fn zeros(input_size: usize, hidden_size: usize) -> Self {
        let g = 4 * hidden_size;
        LstmModel {
            input_size,
            hidden_size,
            rng_seed: 0,
            w_input: vec![0.0; g * input_size],
            w_hidden: vec![0.0; g * hidden_size],
            bias: vec![0.0; g],
            head_w: vec![0.0; hidden_size],
            head_b: 0.0,
        }
    }

    pub fn param_count(&self) -> usize {
        self.w_input.len() + self.w_hidden.len() + self.bias.len() + self.head_w.len() + 1
    }

    pub fn forget_bias(&self) -> &[f64] {
        let h = self.hidden_size;
        &self.bias[GATE_FORGET * h..(GATE_FORGET + 1) * h]
    }

    /// Named parameter tensors in a fixed order.
    pub fn tensors(&self) -> [(&'static str, &[f64]); 5] {
        [
            ("w_input", &self.w_input),
            ("w_hidden", &self.w_hidden),
            ("bias", &self.bias),
            ("head_w", &self.head_w),
            ("head_b", std::slice::from_ref(&self.head_b)),
        ]
    }

    pub fn tensors_mut(&mut self) -> [(&'static str, &mut [f64]); 5] {
        [
            ("w_input", &mut self.w_input),
            ("w_hidden", &mut self.w_hidden),
            ("bias", &mut self.bias),
            ("head_w", &mut self.head_w),
            ("head_b", std::slice::from_mut(&mut self.head_b)),
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.tensors().iter().all(|(_, t)| t.iter().all(|v| v.is_finite()))
    }
}

/// Uniform `[-0.08, 0.08]` weights from `seed`, forget-gate bias at 1.0.
pub fn init_model(seed: u64, input_size: usize, hidden_size: usize) -> Result<LstmModel> {
    if input_size == 0 || hidden_size == 0 {
        return Err(Error::InvalidArgument("model sizes must be > 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut model = LstmModel::zeros(input_size, hidden_size);
    model.rng_seed = seed;
    for (_, tensor) in model.tensors_mut() {
        for v in tensor.iter_mut() {
            *v = rng.gen_range(-INIT_RANGE..=INIT_RANGE);
        }
    }
    let h = hidden_size;
    model.bias[GATE_FORGET * h..(GATE_FORGET + 1) * h].fill(FORGET_BIAS_INIT);
    Ok(model)
}

/// A sequence of input vectors fed to the recurrence.
pub trait Sequence {
    fn steps(&self) -> usize;
    fn step(&self, t: usize) -> &[f64];
}

impl Sequence for Embedded {
    fn steps(&self) -> usize {
        self.true_len
    }

    fn step(&self, t: usize) -> &[f64] {
        self.row(self.max_len - self.true_len + t)
    }
}

/// Token ids resolved against a table on the fly.
#[derive(Clone, Copy)]
pub struct Encoded<'a> {
    pub ids: &'a TokenIds,
    pub table: &'a EmbeddingTable,
}

impl Sequence for Encoded<'_> {
    fn steps(&self) -> usize {
        self.ids.len()
    }

    fn step(&self, t: usize) -> &[f64] {
        match self.ids.0[t] {
            Some(id) => self.table.row(id),
            None => self.table.oov_vector(),
        }
    }
}

/// Dense rows, mostly for tests and the gradient checker.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub dimension: usize,
    pub rows: Vec<f64>,
}

impl Sequence for Dense {
    fn steps(&self) -> usize {
        self.rows.len().checked_div(self.dimension).unwrap_or(0)
    }

    fn step(&self, t: usize) -> &[f64] {
        &self.rows[t * self.dimension..(t + 1) * self.dimension]
    }
}

/// Per-sequence inverted-dropout masks (entries are 0 or `1/(1-rate)`).
#[derive(Debug, Clone, PartialEq)]
pub struct DropoutMasks {
    pub input: Vec<f64>,
    pub recurrent: Vec<f64>,
}

impl DropoutMasks {
    pub fn sample<R: Rng>(rng: &mut R, input_size: usize, hidden_size: usize, input_rate: f64, recurrent_rate: f64) -> Self {
        DropoutMasks {
            input: sample_mask(rng, input_size, input_rate),
            recurrent: sample_mask(rng, hidden_size, recurrent_rate),
        }
    }
}

fn sample_mask<R: Rng>(rng: &mut R, n: usize, rate: f64) -> Vec<f64> {
    if rate <= 0.0 {
        return vec![1.0; n];
    }
    let keep = 1.0 / (1.0 - rate);
    (0..n)
        .map(|_| if rng.gen::<f64>() < rate { 0.0 } else { keep })
        .collect()
}

#[inline]
pub(crate) fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (x, y) in ra.iter().zip(rb) {
        s += x * y;
    }
    s
}

#[inline]
pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Activations recorded during a forward pass, laid out per step.
#[derive(Debug, Default, Clone)]
pub(crate) struct Trace {
    pub steps: usize,
    /// Masked inputs, `T × d`.
    pub x: Vec<f64>,
    /// Masked previous hidden states, `T × h`.
    pub h_in: Vec<f64>,
    /// Cell states `c_0..c_T`, `(T+1) × h`.
    pub c: Vec<f64>,
    /// Activated gates, `T × 4h`.
    pub gates: Vec<f64>,
    /// `tanh(c_t)`, `T × h`.
    pub tanh_c: Vec<f64>,
    pub h_final: Vec<f64>,
    pub logit: f64,
}

impl LstmModel {
    fn check_input<S: Sequence>(&self, seq: &S) -> Result<()> {
        for t in 0..seq.steps() {
            let x = seq.step(t);
            if x.len() != self.input_size {
                return Err(Error::Dimension {
                    expected: self.input_size,
                    found: x.len(),
                });
            }
            if x.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite(format!("input step {t}")));
            }
        }
        Ok(())
    }

    /// Runs the recurrence, filling `trace`, and returns the output logit.
    pub(crate) fn run<S: Sequence>(
        &self,
        seq: &S,
        masks: Option<&DropoutMasks>,
        trace: &mut Trace,
    ) -> f64 {
        let (d, h) = (self.input_size, self.hidden_size);
        let g = 4 * h;
        let steps = seq.steps();
        trace.steps = steps;
        trace.x.resize(steps * d, 0.0);
        trace.h_in.resize(steps * h, 0.0);
        trace.c.clear();
        trace.c.resize((steps + 1) * h, 0.0);
        trace.gates.resize(steps * g, 0.0);
        trace.tanh_c.resize(steps * h, 0.0);
        trace.h_final.clear();
        trace.h_final.resize(h, 0.0);

        let mut z = vec![0.0; g];
        for t in 0..steps {
            let x = &mut trace.x[t * d..(t + 1) * d];
            x.copy_from_slice(seq.step(t));
            if let Some(m) = masks {
                x.iter_mut().zip(&m.input).for_each(|(v, k)| *v *= k);
            }
            let h_in = &mut trace.h_in[t * h..(t + 1) * h];
            h_in.copy_from_slice(&trace.h_final);
            if let Some(m) = masks {
                h_in.iter_mut().zip(&m.recurrent).for_each(|(v, k)| *v *= k);
            }
            for (r, zr) in z.iter_mut().enumerate().take(g) {
                *zr = self.bias[r]
                    + dot(&self.w_input[r * d..(r + 1) * d], x)
                    + dot(&self.w_hidden[r * h..(r + 1) * h], h_in);
            }
            let gates = &mut trace.gates[t * g..(t + 1) * g];
            for k in 0..h {
                let i = sigmoid(z[k]);
                let f = sigmoid(z[h + k]);
                let cc = z[2 * h + k].tanh();
                let o = sigmoid(z[3 * h + k]);
                gates[k] = i;
                gates[h + k] = f;
                gates[2 * h + k] = cc;
                gates[3 * h + k] = o;
                let c_prev = trace.c[t * h + k];
                let c = f * c_prev + i * cc;
                trace.c[(t + 1) * h + k] = c;
                let tc = c.tanh();
                trace.tanh_c[t * h + k] = tc;
                trace.h_final[k] = o * tc;
            }
        }
        let logit = self.head_b + dot(&self.head_w, &trace.h_final);
        trace.logit = logit;
        logit
    }

    /// Probability of the positive class with dropout disabled. Only the real
    /// steps of the sequence are consumed; padding never enters the state.
    pub fn forward<S: Sequence>(&self, seq: &S) -> Result<f64> {
        self.check_input(seq)?;
        let mut scratch = Scratch::new(self.hidden_size);
        Ok(self.forward_fast(seq, &mut scratch))
    }

    /// Inference path without a full trace.
    pub(crate) fn forward_fast<S: Sequence>(&self, seq: &S, s: &mut Scratch) -> f64 {
        let (d, h) = (self.input_size, self.hidden_size);
        s.h.fill(0.0);
        s.c.fill(0.0);
        for t in 0..seq.steps() {
            let x = seq.step(t);
            for r in 0..4 * h {
                s.z[r] = self.bias[r]
                    + dot(&self.w_input[r * d..(r + 1) * d], x)
                    + dot(&self.w_hidden[r * h..(r + 1) * h], &s.h);
            }
            for k in 0..h {
                let i = sigmoid(s.z[k]);
                let f = sigmoid(s.z[h + k]);
                let cc = s.z[2 * h + k].tanh();
                let o = sigmoid(s.z[3 * h + k]);
                s.c[k] = f * s.c[k] + i * cc;
                s.h_next[k] = o * s.c[k].tanh();
            }
            std::mem::swap(&mut s.h, &mut s.h_next);
        }
        sigmoid(self.head_b + dot(&self.head_w, &s.h))
    }
}

pub(crate) struct Scratch {
    h: Vec<f64>,
    h_next: Vec<f64>,
    c: Vec<f64>,
    z: Vec<f64>,
}

impl Scratch {
    pub(crate) fn new(hidden_size: usize) -> Self {
        Scratch {
            h: vec![0.0; hidden_size],
            h_next: vec![0.0; hidden_size],
            c: vec![0.0; hidden_size],
            z: vec![0.0; 4 * hidden_size],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_is_deterministic() {
        let a = init_model(42, 8, 4).unwrap();
        let b = init_model(42, 8, 4).unwrap();
        assert_eq!(a, b);
        let c = init_model(43, 8, 4).unwrap();
        assert_ne!(a.w_input, c.w_input);
        assert!(a.forget_bias().iter().all(|&v| v == 1.0));
        assert!(a
            .w_input
            .iter()
            .chain(&a.w_hidden)
            .all(|v| v.abs() <= INIT_RANGE));
        assert!(init_model(1, 0, 4).is_err());
    }

    #[test]
    fn zero_model_outputs_half() {
        let m = LstmModel::zeros(2, 3);
        let x = Dense { dimension: 2, rows: vec![0.3, -1.0, 2.0, 0.5] };
        assert_eq!(m.forward(&x).unwrap(), 0.5);
    }

    #[test]
    fn empty_sequence_uses_head_bias() {
        let mut m = init_model(3, 2, 3).unwrap();
        m.head_b = 0.7;
        let x = Dense { dimension: 2, rows: vec![] };
        assert!((m.forward(&x).unwrap() - sigmoid(0.7)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        let m = LstmModel::zeros(2, 2);
        let wrong = Dense { dimension: 3, rows: vec![1.0; 3] };
        assert!(matches!(m.forward(&wrong), Err(Error::Dimension { .. })));
        let nan = Dense { dimension: 2, rows: vec![f64::NAN, 0.0] };
        assert!(matches!(m.forward(&nan), Err(Error::NonFinite(_))));
    }

    #[test]
    fn one_step_matches_hand_computation() {
        // h = 2, d = 2; input [1, 0]; weights chosen so each pre-activation is
        // a simple number.
        let mut m = LstmModel::zeros(2, 2);
        // Column 0 of W (the only active input) per gate row.
        let w_col0 = [0.5, -0.25, 0.1, 0.2, 0.3, -0.4, 0.6, 0.7];
        for (r, w) in w_col0.iter().enumerate() {
            m.w_input[r * 2] = *w;
        }
        m.bias = vec![0.0, 0.1, 1.0, 1.0, 0.0, 0.0, -0.2, 0.0];
        m.head_w = vec![1.5, -2.0];
        m.head_b = 0.25;

        let sig = |x: f64| 1.0 / (1.0 + (-x).exp());
        // z = W[:,0] + b
        let zi = [0.5, -0.25 + 0.1];
        // The forget gate has no effect on the first step (c_prev = 0).
        let zg: [f64; 2] = [0.3, -0.4];
        let zo = [0.6 - 0.2, 0.7];
        let mut hid = [0.0; 2];
        for k in 0..2 {
            let c = sig(zi[k]) * zg[k].tanh(); // c_prev = 0
            hid[k] = sig(zo[k]) * c.tanh();
        }
        let expected = sig(0.25 + 1.5 * hid[0] - 2.0 * hid[1]);

        let x = Dense { dimension: 2, rows: vec![1.0, 0.0] };
        let got = m.forward(&x).unwrap();
        assert!((got - expected).abs() < 1e-15, "{got} vs {expected}");
    }

    #[test]
    fn order_matters() {
        let m = init_model(11, 3, 4).unwrap();
        let rows = vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];
        let rev = vec![0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0];
        let a = m.forward(&Dense { dimension: 3, rows }).unwrap();
        let b = m.forward(&Dense { dimension: 3, rows: rev }).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn fast_path_matches_trace_path() {
        let m = init_model(5, 3, 4).unwrap();
        let x = Dense { dimension: 3, rows: (0..15).map(|i| (i as f64 * 0.37).sin()).collect() };
        let mut trace = Trace::default();
        let logit = m.run(&x, None, &mut trace);
        assert!((sigmoid(logit) - m.forward(&x).unwrap()).abs() < 1e-15);
    }
}
