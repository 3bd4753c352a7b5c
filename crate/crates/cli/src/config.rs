use crate::error::CliError;

/// Shared knobs for every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub tolerance: f64,
    pub seed: u64,
    pub t_min: f64,
    pub t_max: f64,
    pub step: f64,
    /// Busemann horizon; `t_max + 5` when unset.
    pub horizon: Option<f64>,
    pub n_max: usize,
    pub eps: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            seed: 0,
            t_min: -3.0,
            t_max: 3.0,
            step: 0.5,
            horizon: None,
            n_max: 20,
            eps: 0.1,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::input(format!("config: {m}")));
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return bad(&format!(
                "tolerance must be positive, got {}",
                self.tolerance
            ));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return bad(&format!("step must be positive, got {}", self.step));
        }
        if !(self.t_min.is_finite() && self.t_max.is_finite()) || self.t_min > self.t_max {
            return bad(&format!("empty time grid [{}, {}]", self.t_min, self.t_max));
        }
        if let Some(h) = self.horizon {
            if !h.is_finite() {
                return bad("horizon must be finite");
            }
        }
        if !(self.eps.is_finite() && self.eps >= 0.0) {
            return bad(&format!("eps must be nonnegative, got {}", self.eps));
        }
        Ok(())
    }

    pub fn horizon(&self) -> f64 {
        self.horizon.unwrap_or(self.t_max + 5.0)
    }

    /// `t_min + i·step` for every `i` that stays within `t_max`.
    pub fn t_grid(&self) -> Vec<f64> {
        let count = ((self.t_max - self.t_min) / self.step + 1e-9).floor() as usize;
        (0..=count)
            .map(|i| self.t_min + i as f64 * self.step)
            .collect()
    }
}
