//! Finite-difference check of the LSTM's analytic gradients on random small
//! models.
//!
//! ```text
//! cargo run --release --example gradient_check -- [configs] [seed]
//! ```

use twopath::neuralnet::gradcheck::{gradient_check, CheckLimits, DEFAULT_STEP, DEFAULT_TOLERANCE};

fn main() -> twopath::Result<()> {
    let mut args = std::env::args().skip(1);
    let configs = args.next().map_or(20, |a| a.parse().expect("configs"));
    let seed = args.next().map_or(0, |a| a.parse().expect("seed"));
    let report = gradient_check(seed, configs, CheckLimits::default(), DEFAULT_STEP, DEFAULT_TOLERANCE)?;
    for c in &report.configs {
        println!(
            "hidden {} input {} len {} params {:>3}  max rel err {:.2e} ({})",
            c.hidden_size, c.input_size, c.max_seq_len, c.params_checked, c.max_rel_error, c.worst_param
        );
    }
    println!("worst {:.2e} vs tolerance {:.0e}: {}", report.max_rel_error, report.tolerance, if report.passed { "ok" } else { "FAILED" });
    Ok(())
}
