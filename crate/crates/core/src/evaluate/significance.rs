//! Paired two-sided t-test over per-instance correctness.

use serde::Serialize;
use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TTest {
    pub t: f64,
    pub df: usize,
    pub p_value: f64,
    /// The differences had zero variance; `p_value` is 1 when the means are
    /// equal and 0 otherwise.
    pub degenerate: bool,
}

/// Paired t-test of `a - b`. The two-sided p-value is computed from the
/// regularized incomplete beta function, `I_{df/(df+t^2)}(df/2, 1/2)`, which
/// keeps precision for very small p.
pub fn significance_test(a: &[bool], b: &[bool]) -> Result<TTest> {
    if a.len() != b.len() {
        return Err(Error::Argument(format!(
            "paired test needs equal lengths, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let n = a.len();
    if n < 2 {
        return Err(Error::Argument("paired test needs at least two instances".to_string()));
    }
    let diffs: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| x as i32 as f64 - y as i32 as f64)
        .collect();
    let nf = n as f64;
    let mean = diffs.iter().sum::<f64>() / nf;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    let df = n - 1;
    if var == 0.0 {
        let (t, p) = if mean == 0.0 {
            (0.0, 1.0)
        } else {
            (f64::INFINITY.copysign(mean), 0.0)
        };
        return Ok(TTest {
            t,
            df,
            p_value: p,
            degenerate: true,
        });
    }
    let t = mean / (var / nf).sqrt();
    let dff = df as f64;
    let p = beta_reg(dff / 2.0, 0.5, dff / (dff + t * t)).clamp(0.0, 1.0);
    Ok(TTest {
        t,
        df,
        p_value: p,
        degenerate: false,
    })
}
