//! Numerical tolerances shared across the crate.

/// Unitarity and orthonormality checks in public constructors.
pub const CONSTRUCTOR: f64 = 1e-10;

/// `| ||v|| - 1 |` bound for a vector to count as normalized.
pub const NORMALIZED: f64 = 1e-12;

/// Default tolerance for perfect-guessing checks and test assertions.
pub const CHECK: f64 = 1e-9;

/// Eigenvalues of a density operator below this are treated as zero.
pub const EIGEN_FLOOR: f64 = 1e-12;

/// Coefficients of the qubit closed form below this count as zero.
pub const DEGENERATE: f64 = 1e-12;

/// Branch probabilities below this are snapped to zero when sampling.
pub const PROB_FLOOR: f64 = 1e-12;

/// Weights must sum to one within this.
pub const WEIGHT_SUM: f64 = 1e-12;
