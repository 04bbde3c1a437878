use super::model::{axpy, sigmoid, DropoutMasks, LstmModel, Sequence, Trace};
use crate::error::{Error, Result};

pub const PROB_CLAMP: f64 = 1e-7;

/// Weighted binary cross-entropy; only the positive term carries `pos_weight`.
pub fn loss(p: f64, label: f64, pos_weight: f64) -> f64 {
    let p = p.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP);
    -(pos_weight * label * p.ln() + (1.0 - label) * (1.0 - p).ln())
}

/// d loss / d logit for the clamped loss.
fn loss_grad_logit(p: f64, label: f64, pos_weight: f64) -> f64 {
    if !(PROB_CLAMP..=1.0 - PROB_CLAMP).contains(&p) {
        return 0.0;
    }
    -pos_weight * label * (1.0 - p) + (1.0 - label) * p
}

/// Gradients with the same shapes as the model's tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub w_input: Vec<f64>,
    pub w_hidden: Vec<f64>,
    pub bias: Vec<f64>,
    pub head_w: Vec<f64>,
    pub head_b: f64,
}

impl Gradients {
    pub fn zeros_like(model: &LstmModel) -> Self {
        Gradients {
            w_input: vec![0.0; model.w_input.len()],
            w_hidden: vec![0.0; model.w_hidden.len()],
            bias: vec![0.0; model.bias.len()],
            head_w: vec![0.0; model.head_w.len()],
            head_b: 0.0,
        }
    }

    pub fn clear(&mut self) {
        for (_, t) in self.tensors_mut() {
            t.fill(0.0);
        }
    }

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

    pub fn global_norm(&self) -> f64 {
        self.tensors()
            .iter()
            .flat_map(|(_, t)| t.iter())
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&mut self, factor: f64) {
        for (_, t) in self.tensors_mut() {
            t.iter_mut().for_each(|v| *v *= factor);
        }
    }

    pub fn check_finite(&self) -> Result<()> {
        for (name, t) in self.tensors() {
            if t.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteGradient(name));
            }
        }
        Ok(())
    }
}

/// Reusable buffers for one example's forward and backward pass.
#[derive(Debug, Default)]
pub(crate) struct Workspace {
    trace: Trace,
    dh: Vec<f64>,
    dc: Vec<f64>,
    dz: Vec<f64>,
    dh_in: Vec<f64>,
}

impl Workspace {
    pub(crate) fn new() -> Self {
        Self::default()
    }
}

/// Forward and backward pass for one example. Gradients of `scale · loss`
/// are added to `grads`; the unscaled loss is returned.
#[allow(clippy::too_many_arguments)]
pub(crate) fn accumulate<S: Sequence>(
    model: &LstmModel,
    seq: &S,
    label: f64,
    pos_weight: f64,
    masks: Option<&DropoutMasks>,
    scale: f64,
    grads: &mut Gradients,
    ws: &mut Workspace,
) -> f64 {
    let (d, h) = (model.input_size, model.hidden_size);
    let g = 4 * h;
    let logit = model.run(seq, masks, &mut ws.trace);
    let p = sigmoid(logit);
    let l = loss(p, label, pos_weight);
    let dlogit = scale * loss_grad_logit(p, label, pos_weight);

    let tr = &ws.trace;
    grads.head_b += dlogit;
    axpy(dlogit, &tr.h_final, &mut grads.head_w);

    ws.dh.clear();
    ws.dh.extend(model.head_w.iter().map(|w| w * dlogit));
    ws.dc.clear();
    ws.dc.resize(h, 0.0);
    ws.dz.resize(g, 0.0);
    ws.dh_in.resize(h, 0.0);

    for t in (0..tr.steps).rev() {
        let gates = &tr.gates[t * g..(t + 1) * g];
        let c_prev = &tr.c[t * h..(t + 1) * h];
        let tanh_c = &tr.tanh_c[t * h..(t + 1) * h];
        for k in 0..h {
            let (i, f, cc, o) = (gates[k], gates[h + k], gates[2 * h + k], gates[3 * h + k]);
            let tc = tanh_c[k];
            let dh = ws.dh[k];
            let dc = ws.dc[k] + dh * o * (1.0 - tc * tc);
            ws.dz[k] = dc * cc * i * (1.0 - i);
            ws.dz[h + k] = dc * c_prev[k] * f * (1.0 - f);
            ws.dz[2 * h + k] = dc * i * (1.0 - cc * cc);
            ws.dz[3 * h + k] = dh * tc * o * (1.0 - o);
            ws.dc[k] = dc * f;
        }
        let x = &tr.x[t * d..(t + 1) * d];
        let h_in = &tr.h_in[t * h..(t + 1) * h];
        ws.dh_in.fill(0.0);
        for r in 0..g {
            let dz = ws.dz[r];
            if dz == 0.0 {
                continue;
            }
            grads.bias[r] += dz;
            axpy(dz, x, &mut grads.w_input[r * d..(r + 1) * d]);
            axpy(dz, h_in, &mut grads.w_hidden[r * h..(r + 1) * h]);
            axpy(dz, &model.w_hidden[r * h..(r + 1) * h], &mut ws.dh_in);
        }
        // h_in = mask ⊙ h_{t-1}
        match masks {
            Some(m) => {
                for k in 0..h {
                    ws.dh[k] = ws.dh_in[k] * m.recurrent[k];
                }
            }
            None => ws.dh.copy_from_slice(&ws.dh_in),
        }
    }
    l
}

/// Mean loss and exact gradients over a batch. With `masks`, each example
/// uses its own dropout masks; without, dropout is off.
pub fn backward<S: Sequence>(
    model: &LstmModel,
    batch: &[(S, f64)],
    pos_weight: f64,
    masks: Option<&[DropoutMasks]>,
) -> Result<(f64, Gradients)> {
    if batch.is_empty() {
        return Err(Error::Empty("batch"));
    }
    if let Some(m) = masks {
        if m.len() != batch.len() {
            return Err(Error::InvalidArgument("one mask set per example required".into()));
        }
    }
    let mut grads = Gradients::zeros_like(model);
    let mut ws = Workspace::new();
    let scale = 1.0 / batch.len() as f64;
    let mut total = 0.0;
    for (i, (seq, label)) in batch.iter().enumerate() {
        let m = masks.map(|m| &m[i]);
        total += accumulate(model, seq, *label, pos_weight, m, scale, &mut grads, &mut ws);
    }
    grads.check_finite()?;
    Ok((total * scale, grads))
}

/// Mean loss over a batch computed by forward passes only.
pub fn batch_loss<S: Sequence>(
    model: &LstmModel,
    batch: &[(S, f64)],
    pos_weight: f64,
    masks: Option<&[DropoutMasks]>,
) -> f64 {
    let mut trace = Trace::default();
    let total: f64 = batch
        .iter()
        .enumerate()
        .map(|(i, (seq, label))| {
            let logit = model.run(seq, masks.map(|m| &m[i]), &mut trace);
            loss(sigmoid(logit), *label, pos_weight)
        })
        .sum();
    total / batch.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neuralnet::model::{init_model, Dense};

    #[test]
    fn loss_values() {
        let ln2 = std::f64::consts::LN_2;
        assert!((loss(0.5, 1.0, 1.0) - ln2).abs() < 1e-12);
        assert!((loss(0.5, 1.0, 10.0) - 10.0 * ln2).abs() < 1e-12);
        assert!((loss(0.5, 0.0, 10.0) - ln2).abs() < 1e-12);
        assert!(loss(0.0, 1.0, 1.0).is_finite());
        assert!(loss(1.0, 0.0, 1.0).is_finite());
    }

    fn seq(rows: Vec<f64>) -> Dense {
        Dense { dimension: 2, rows }
    }

    #[test]
    fn zero_head_gives_zero_gate_gradients() {
        let mut m = init_model(9, 2, 3).unwrap();
        m.head_w.fill(0.0);
        let batch = vec![(seq(vec![0.5, -1.0, 1.0, 0.2]), 1.0)];
        let (_, g) = backward(&m, &batch, 10.0, None).unwrap();
        assert!(g.w_input.iter().chain(&g.w_hidden).chain(&g.bias).all(|&v| v == 0.0));
        assert!(g.head_b != 0.0);
    }

    #[test]
    fn duplicated_example_has_same_mean_gradient() {
        let m = init_model(4, 2, 3).unwrap();
        let one = vec![(seq(vec![0.5, -1.0, 1.0, 0.2, -0.3, 0.9]), 1.0)];
        let two = vec![one[0].clone(), one[0].clone()];
        let (l1, g1) = backward(&m, &one, 3.0, None).unwrap();
        let (l2, g2) = backward(&m, &two, 3.0, None).unwrap();
        assert!((l1 - l2).abs() < 1e-15);
        for ((_, a), (_, b)) in g1.tensors().iter().zip(g2.tensors().iter()) {
            for (x, y) in a.iter().zip(b.iter()) {
                assert!((x - y).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn empty_batch_is_error() {
        let m = init_model(4, 2, 3).unwrap();
        let batch: Vec<(Dense, f64)> = vec![];
        assert!(backward(&m, &batch, 1.0, None).is_err());
    }

    #[test]
    fn non_finite_gradient_names_parameter() {
        let mut m = init_model(4, 2, 3).unwrap();
        m.head_w[0] = f64::INFINITY;
        let batch = vec![(seq(vec![0.5, -1.0]), 0.0)];
        let err = backward(&m, &batch, 1.0, None).unwrap_err();
        assert!(matches!(err, Error::NonFiniteGradient(_)), "{err:?}");
    }
}
