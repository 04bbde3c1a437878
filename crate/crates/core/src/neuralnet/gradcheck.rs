//! Central finite-difference check of the analytic BPTT gradients.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::backward::{backward, batch_loss};
use super::model::{Dense, DropoutMasks, LstmModel};
use crate::error::Result;

pub const DEFAULT_STEP: f64 = 1e-5;
pub const DEFAULT_TOLERANCE: f64 = 1e-4;
/// Denominator floor for the relative error of near-zero gradients.
pub const RELATIVE_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckLimits {
    pub max_hidden: usize,
    pub max_input: usize,
    pub max_len: usize,
    pub max_batch: usize,
}

impl Default for CheckLimits {
    fn default() -> Self {
        CheckLimits {
            max_hidden: 4,
            max_input: 3,
            max_len: 5,
            max_batch: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigResult {
    pub hidden_size: usize,
    pub input_size: usize,
    pub max_seq_len: usize,
    pub params_checked: usize,
    pub max_rel_error: f64,
    pub worst_param: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradCheckReport {
    pub step: f64,
    pub tolerance: f64,
    pub configs: Vec<ConfigResult>,
    pub max_rel_error: f64,
    pub passed: bool,
}

pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    let denom = analytic.abs().max(numeric.abs()).max(RELATIVE_FLOOR);
    (analytic - numeric).abs() / denom
}

/// Compares every analytic gradient element with a central difference of the
/// mean batch loss.
pub fn check_model(
    model: &LstmModel,
    batch: &[(Dense, f64)],
    pos_weight: f64,
    masks: Option<&[DropoutMasks]>,
    step: f64,
) -> Result<(f64, &'static str, usize)> {
    let (_, grads) = backward(model, batch, pos_weight, masks)?;
    let mut probe = model.clone();
    let mut worst = (0.0f64, "none");
    let mut checked = 0;
    let analytic = grads.tensors();
    for (ti, (name, grad)) in analytic.iter().enumerate() {
        for (j, &a) in grad.iter().enumerate() {
            let original = model.tensors()[ti].1[j];
            probe.tensors_mut()[ti].1[j] = original + step;
            let plus = batch_loss(&probe, batch, pos_weight, masks);
            probe.tensors_mut()[ti].1[j] = original - step;
            let minus = batch_loss(&probe, batch, pos_weight, masks);
            probe.tensors_mut()[ti].1[j] = original;
            let numeric = (plus - minus) / (2.0 * step);
            let err = relative_error(a, numeric);
            if err > worst.0 || err.is_nan() {
                worst = (err, name);
            }
            checked += 1;
        }
    }
    Ok((worst.0, worst.1, checked))
}

fn random_model<R: Rng>(rng: &mut R, input: usize, hidden: usize) -> LstmModel {
    let mut m = LstmModel::zeros(input, hidden);
    for (_, t) in m.tensors_mut() {
        t.iter_mut().for_each(|v| *v = rng.gen_range(-0.6..0.6));
    }
    m
}

/// Runs the check on `configs` random small models with dropout off.
pub fn gradient_check(seed: u64, configs: usize, limits: CheckLimits, step: f64, tolerance: f64) -> Result<GradCheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results = Vec::with_capacity(configs);
    for _ in 0..configs {
        let hidden = rng.gen_range(1..=limits.max_hidden);
        let input = rng.gen_range(1..=limits.max_input);
        let model = random_model(&mut rng, input, hidden);
        let batch_size = rng.gen_range(1..=limits.max_batch);
        let mut max_seq_len = 0;
        let batch: Vec<(Dense, f64)> = (0..batch_size)
            .map(|_| {
                let len = rng.gen_range(1..=limits.max_len);
                max_seq_len = max_seq_len.max(len);
                let rows = (0..len * input).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let label = if rng.gen_bool(0.5) { 1.0 } else { 0.0 };
                (Dense { dimension: input, rows }, label)
            })
            .collect();
        let pos_weight = rng.gen_range(1.0..10.0);
        let (err, name, checked) = check_model(&model, &batch, pos_weight, None, step)?;
        results.push(ConfigResult {
            hidden_size: hidden,
            input_size: input,
            max_seq_len,
            params_checked: checked,
            max_rel_error: err,
            worst_param: name,
        });
    }
    let max_rel_error = results.iter().map(|r| r.max_rel_error).fold(0.0, f64::max);
    let passed = results.iter().all(|r| r.max_rel_error <= tolerance);
    Ok(GradCheckReport {
        step,
        tolerance,
        configs: results,
        max_rel_error,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neuralnet::model::DropoutMasks;

    #[test]
    fn small_models_pass() {
        let report = gradient_check(1, 5, CheckLimits::default(), DEFAULT_STEP, DEFAULT_TOLERANCE).unwrap();
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn h3_d2_len4_model() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let model = random_model(&mut rng, 2, 3);
        let batch = vec![(
            Dense { dimension: 2, rows: (0..8).map(|i| (i as f64 * 0.7).cos()).collect() },
            1.0,
        )];
        let (err, name, n) = check_model(&model, &batch, 10.0, None, DEFAULT_STEP).unwrap();
        assert_eq!(n, model.param_count());
        assert!(err < DEFAULT_TOLERANCE, "{name}: {err}");
    }

    #[test]
    fn exact_under_fixed_dropout_masks() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let model = random_model(&mut rng, 3, 4);
        let batch: Vec<(Dense, f64)> = (0..2)
            .map(|k| {
                (
                    Dense { dimension: 3, rows: (0..12).map(|i| ((i + k) as f64).sin()).collect() },
                    k as f64,
                )
            })
            .collect();
        let masks: Vec<DropoutMasks> = (0..2)
            .map(|_| DropoutMasks::sample(&mut rng, 3, 4, 0.2, 0.2))
            .collect();
        let (err, name, _) = check_model(&model, &batch, 4.0, Some(&masks), DEFAULT_STEP).unwrap();
        assert!(err < DEFAULT_TOLERANCE, "{name}: {err}");
    }
}
