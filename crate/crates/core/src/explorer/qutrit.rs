//! The three-basis qutrit game written out in components.
//!
//! For a probe `(α, β, γ)` and the uniform set of the three MUBs `U_0, U_1, U_2`,
//! the post-selected vectors are `φ_a / 3` with the components below. The
//! residuals are the pairwise inner products `⟨φ_0|φ_1⟩, ⟨φ_0|φ_2⟩, ⟨φ_1|φ_2⟩`
//! without the `1/9`.

use crate::error::{Error, Result};
use crate::linalg::{StateVector, C64};
use std::f64::consts::TAU;

fn omega(e: u32) -> C64 {
    C64::from_polar(1.0, TAU * (e % 3) as f64 / 3.0)
}

fn components(p: &StateVector) -> Result<(C64, C64, C64)> {
    if p.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: p.dim() });
    }
    Ok((p[0], p[1], p[2]))
}

/// Unscaled post-selected vectors `3 φ_a`.
fn phis(al: C64, be: C64, ga: C64) -> [[C64; 3]; 3] {
    let w = omega;
    let c = |eb: u32, eg: u32| al + w(eb) * be + w(eg) * ga;
    [
        [c(0, 0), c(2, 2), c(1, 1)],
        [c(2, 1), c(1, 0), c(0, 2)],
        [c(1, 2), c(0, 1), c(2, 0)],
    ]
}

fn dot(x: &[C64; 3], y: &[C64; 3]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// The three pairwise-orthogonality left-hand sides for pairs (0,1), (0,2), (1,2).
/// They equal `9 ⟨u_a|u_b⟩` of the uniform three-MUB ensemble.
pub fn qutrit_mub_residuals(probe: &StateVector) -> Result<[C64; 3]> {
    let (al, be, ga) = components(probe)?;
    let f = phis(al, be, ga);
    Ok([dot(&f[0], &f[1]), dot(&f[0], &f[2]), dot(&f[1], &f[2])])
}

/// Constant `k` in `LHS₁ − LHS₂ = k (β − γ)(β + γ)*`; equals `−3√3 i`.
pub fn factorization_constant() -> C64 {
    3.0 * omega(1) * (omega(1) - 1.0)
}

/// `|LHS₁ − LHS₂ − k (β − γ)(β + γ)*|` with `k` from [`factorization_constant`].
pub fn factorization_identity_check(probe: &StateVector) -> Result<f64> {
    let (_, be, ga) = components(probe)?;
    let r = qutrit_mub_residuals(probe)?;
    let rhs = factorization_constant() * (be - ga) * (be + ga).conj();
    Ok((r[0] - r[1] - rhs).norm())
}
