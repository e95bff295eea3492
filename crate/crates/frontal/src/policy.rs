//! Numeric tolerances shared by every computation.

use serde::{Deserialize, Serialize};

/// Default jet order used when a caller does not ask for one.
pub const DEFAULT_ORDER: usize = 6;

/// Tolerances threaded through all modules.
///
/// Every threshold that decides a verdict lives here so a run can be
/// reproduced from its policy alone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericPolicy {
    /// Jet order used for point evaluations.
    pub order: usize,
    /// Smallest admissible constant term of a divisor.
    pub eps_den: f64,
    /// Relative threshold for the v-free coefficients in `divide_by_v`.
    pub eps_div: f64,
    /// Relative threshold for the vanishing of classifier coefficients.
    pub eps_class: f64,
    /// Number of sample points used to certify a pure-frontal curve.
    pub n_check: usize,
    /// Points with `|v|` at or below this value are treated as singular.
    pub eps_singular: f64,
    /// Lower bound for `|f_u x h|` before the frame is declared degenerate.
    pub eps_frame: f64,
    /// Tolerance for supplied Gauss maps (unit length, orthogonality).
    pub eps_frontal: f64,
    /// Relative threshold below which `Gamma` counts as umbilic.
    pub eps_umbilic: f64,
    /// Tolerance for `|b3 - 1|` in the Ribaucour frame decomposition.
    pub eps_b3: f64,
    /// Threshold for `abs` arguments near zero.
    pub eps_abs: f64,
}

impl Default for NumericPolicy {
    fn default() -> Self {
        Self {
            order: DEFAULT_ORDER,
            eps_den: 1e-300,
            eps_div: 1e-12,
            eps_class: 1e-9,
            n_check: 17,
            eps_singular: 0.0,
            eps_frame: 1e-12,
            eps_frontal: 1e-9,
            eps_umbilic: 1e-12,
            eps_b3: 1e-9,
            eps_abs: 1e-14,
        }
    }
}

impl NumericPolicy {
    /// Same policy with a different jet order.
    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    /// Multiply every relative tolerance by `factor`.
    pub fn scaled(mut self, factor: f64) -> Self {
        self.eps_div *= factor;
        self.eps_class *= factor;
        self.eps_frame *= factor;
        self.eps_frontal *= factor;
        self.eps_umbilic *= factor;
        self.eps_b3 *= factor;
        self.eps_abs *= factor;
        self
    }
}
