//! Minimal-variance curves `F_S[x]`.
//!
//! `S·F_S[x]` is the smallest `Var[S_z]` a spin-`S` state can have at
//! polarisation `|⟨S_x⟩| = xS`. For integer `S` the minimisers are ground
//! states of `λS_x + S_z²`, so the curve is traced parametrically in `λ`.
//! For half-integer `S` the minimiser need not have `⟨S_z⟩ = 0`; there the
//! curve is the minimum over a centre `μ ∈ (0, ½]` of the ground-state
//! families of `λS_x + (S_z − μ)²`.

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::spin_core::{build_centered_hamiltonian, ground_state, moments, SpinLength};

pub const LAMBDA_MIN: f64 = 1e-6;
pub const LAMBDA_MAX: f64 = 1e6;
pub const DEFAULT_POINTS: usize = 512;
pub const MIN_POINTS: usize = 16;

const TABLE_BISECTION_STEPS: usize = 32;
const DIRECT_BISECTION_STEPS: usize = 48;

// half-integer search ranges
const CENTERED_LAMBDA_MIN: f64 = 1e-12;
const CENTERED_LAMBDA_MAX: f64 = 1e8;
const CENTERED_BISECTION_STEPS: usize = 56;
const MU_FLOOR: f64 = 1e-6;
const GOLDEN_STEPS: usize = 30;

/// One point of a ground-state family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FsSample {
    pub lambda: f64,
    /// `|⟨S_x⟩|/S`
    pub x: f64,
    /// `Var[S_z]/S`
    pub f: f64,
}

/// Ground state of `λS_x + (S_z − μ)²` reduced to `(x, f)`.
pub fn family_point(spin: SpinLength, lambda: f64, mu: f64) -> Result<FsSample> {
    let (_, state) = ground_state(&build_centered_hamiltonian(lambda, mu, spin)?)?;
    let mo = moments(&state);
    let s = spin.s();
    Ok(FsSample {
        lambda,
        x: mo.mean_sx.abs() / s,
        f: mo.var_sz / s,
    })
}

/// Tabulated `F_S` for one spin length, sorted by strictly increasing `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct FsTable {
    spin: SpinLength,
    samples: Vec<FsSample>,
}

impl FsTable {
    pub fn spin(&self) -> SpinLength {
        self.spin
    }

    pub fn samples(&self) -> &[FsSample] {
        &self.samples
    }

    /// Linear extrapolation of the first two samples to `x = 0`.
    pub fn extrapolate_to_zero(&self) -> f64 {
        let a = self.samples[0];
        let b = self.samples[1];
        a.f - a.x * (b.f - a.f) / (b.x - a.x)
    }

    /// `F_S[|x|]` using the table only to bracket the multiplier, followed by a
    /// fresh bisection in `λ`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let x = check_polarization(x)?;
        if !self.spin.is_integer() {
            return fs_eval(self.spin, x);
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        if x == 1.0 {
            return Ok(0.5);
        }
        let first = self.samples[0];
        let last = *self.samples.last().expect("table is never empty");
        if x >= last.x {
            return Ok(interpolate(last, endpoint_css(), x));
        }
        if x <= first.x {
            let origin = FsSample {
                lambda: 0.0,
                x: 0.0,
                f: 0.0,
            };
            return bisect_family(
                self.spin,
                0.0,
                x,
                origin,
                first,
                TABLE_BISECTION_STEPS,
                false,
            );
        }
        let i = self.samples.partition_point(|s| s.x < x);
        bisect_family(
            self.spin,
            0.0,
            x,
            self.samples[i - 1],
            self.samples[i],
            TABLE_BISECTION_STEPS,
            true,
        )
    }
}

fn endpoint_css() -> FsSample {
    FsSample {
        lambda: f64::INFINITY,
        x: 1.0,
        f: 0.5,
    }
}

fn check_polarization(x: f64) -> Result<f64> {
    let ax = x.abs();
    if ax.is_nan() || ax > 1.0 {
        return domain(format!("polarization |x| = {ax} must lie in [0, 1]"));
    }
    Ok(ax)
}

fn interpolate(a: FsSample, b: FsSample, x: f64) -> f64 {
    if b.x == a.x {
        return a.f.min(b.f);
    }
    let t = ((x - a.x) / (b.x - a.x)).clamp(0.0, 1.0);
    a.f + t * (b.f - a.f)
}

/// Bisection on `λ` for `x(λ) = target` within `[lo, hi]`, then linear
/// interpolation of `f` across the final (tiny) bracket.
fn bisect_family(
    spin: SpinLength,
    mu: f64,
    target: f64,
    mut lo: FsSample,
    mut hi: FsSample,
    steps: usize,
    logarithmic: bool,
) -> Result<f64> {
    Ok(bisect_family_sample(spin, mu, target, &mut lo, &mut hi, steps, logarithmic)?.f)
}

fn bisect_family_sample(
    spin: SpinLength,
    mu: f64,
    target: f64,
    lo: &mut FsSample,
    hi: &mut FsSample,
    steps: usize,
    logarithmic: bool,
) -> Result<FsSample> {
    for _ in 0..steps {
        let lambda = if logarithmic {
            (lo.lambda * hi.lambda).sqrt()
        } else {
            0.5 * (lo.lambda + hi.lambda)
        };
        let mid = family_point(spin, lambda, mu)?;
        if mid.x < target {
            *lo = mid;
        } else {
            *hi = mid;
        }
    }
    let f = interpolate(*lo, *hi, target);
    let t = if hi.x > lo.x {
        ((target - lo.x) / (hi.x - lo.x)).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok(FsSample {
        lambda: lo.lambda + t * (hi.lambda - lo.lambda),
        x: target,
        f,
    })
}

fn log_grid(n: usize) -> Vec<f64> {
    let (a, b) = (LAMBDA_MIN.ln(), LAMBDA_MAX.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Tabulates `F_S`.
///
/// Integer spins: ground states of `λS_x + S_z²` on `n_points` log-spaced
/// multipliers in `[1e-6, 1e6]`. Half-integer spins: `n_points` equally
/// spaced interior polarisations, each minimised over the centre `μ`.
/// Monotonicity of `x` and `f` is checked on the assembled table.
pub fn build_fs_table(spin: SpinLength, n_points: usize) -> Result<FsTable> {
    if n_points < MIN_POINTS {
        return domain(format!(
            "n_points = {n_points} is below the minimum {MIN_POINTS}"
        ));
    }
    let samples: Vec<FsSample> = if spin.is_integer() {
        log_grid(n_points)
            .into_par_iter()
            .map(|lambda| family_point(spin, lambda, 0.0))
            .collect::<Result<_>>()?
    } else {
        (0..n_points)
            .into_par_iter()
            .map(|i| {
                let x = (i + 1) as f64 / (n_points + 1) as f64;
                half_integer_sample(spin, x)
            })
            .collect::<Result<_>>()?
    };

    let ordered = samples
        .windows(2)
        .all(|w| w[1].x > w[0].x && w[1].f >= w[0].f - 1e-12);
    let bounded = samples.iter().all(|s| s.f <= 0.5 + 1e-9);
    if !ordered || !bounded {
        return Err(Error::NonConvergence {
            routine: "F_S table monotonicity check",
            iterations: n_points,
        });
    }
    Ok(FsTable { spin, samples })
}

/// `F_S[|x|]` computed by root-finding the Lagrange multiplier.
///
/// The multiplier is bracketed directly on `[1e-6, 1e6]` (extended to `λ = 0`
/// and to the coherent-state endpoint `x = 1`), so no table is needed.
pub fn fs_eval(spin: SpinLength, x: f64) -> Result<f64> {
    let x = check_polarization(x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(0.5);
    }
    if spin.two_s() == 1 {
        // Var[S_z] = ¼ − ⟨S_z⟩² ≥ ⟨S_x⟩² for any spin-½ state
        return Ok(0.5 * x * x);
    }
    if spin.is_integer() {
        integer_fs(spin, x)
    } else {
        Ok(half_integer_sample(spin, x)?.f)
    }
}

fn integer_fs(spin: SpinLength, x: f64) -> Result<f64> {
    let lo = family_point(spin, LAMBDA_MIN, 0.0)?;
    let hi = family_point(spin, LAMBDA_MAX, 0.0)?;
    if x >= hi.x {
        return Ok(interpolate(hi, endpoint_css(), x));
    }
    if x <= lo.x {
        let origin = FsSample {
            lambda: 0.0,
            x: 0.0,
            f: 0.0,
        };
        return bisect_family(spin, 0.0, x, origin, lo, DIRECT_BISECTION_STEPS, false);
    }
    bisect_family(spin, 0.0, x, lo, hi, DIRECT_BISECTION_STEPS, true)
}

/// Family with centre `μ > 0` evaluated at polarisation `x`.
fn centered_solve(spin: SpinLength, mu: f64, x: f64) -> Result<FsSample> {
    let mut lo = family_point(spin, CENTERED_LAMBDA_MIN, mu)?;
    let mut hi = family_point(spin, CENTERED_LAMBDA_MAX, mu)?;
    if x >= hi.x {
        return Ok(FsSample {
            lambda: hi.lambda,
            x,
            f: interpolate(hi, endpoint_css(), x),
        });
    }
    if x <= lo.x {
        // the λ → 0 ground state of (S_z − μ)² is the Dicke state m = ½
        let mut origin = FsSample {
            lambda: 0.0,
            x: 0.0,
            f: 0.0,
        };
        return bisect_family_sample(
            spin,
            mu,
            x,
            &mut origin,
            &mut lo,
            CENTERED_BISECTION_STEPS,
            false,
        );
    }
    bisect_family_sample(
        spin,
        mu,
        x,
        &mut lo,
        &mut hi,
        CENTERED_BISECTION_STEPS,
        true,
    )
}

fn half_integer_sample(spin: SpinLength, x: f64) -> Result<FsSample> {
    const COARSE: [f64; 12] = [
        MU_FLOOR, 0.025, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5,
    ];
    let values = COARSE
        .iter()
        .map(|&mu| centered_solve(spin, mu, x))
        .collect::<Result<Vec<_>>>()?;
    let (best, _) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.f.total_cmp(&b.1.f))
        .expect("coarse grid is non-empty");
    let mut incumbent = values[best];

    // golden-section refinement around the coarse minimum
    let mut a = COARSE[best.saturating_sub(1)];
    let mut b = COARSE[(best + 1).min(COARSE.len() - 1)];
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let mut fc = centered_solve(spin, c, x)?;
    let mut fd = centered_solve(spin, d, x)?;
    for _ in 0..GOLDEN_STEPS {
        if fc.f < fd.f {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = centered_solve(spin, c, x)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = centered_solve(spin, d, x)?;
        }
    }
    for cand in [fc, fd] {
        if cand.f < incumbent.f {
            incumbent = cand;
        }
    }
    Ok(incumbent)
}

/// Large-`S` analytic approximation
/// `½(1 + S(1−x²) − √((1−x²)((1+S)² − S²x²)))`.
pub fn fs_analytic_large_s(spin: SpinLength, x: f64) -> Result<f64> {
    let x = check_polarization(x)?;
    let s = spin.s();
    let q = 1.0 - x * x;
    let root = (q * ((1.0 + s) * (1.0 + s) - s * s * x * x))
        .max(0.0)
        .sqrt();
    Ok(0.5 * (1.0 + s * q - root))
}

/// `lim_{x→0} F_S[x]/x² = 1/(2+2S)`, integer spins only.
pub fn fs_small_x_coefficient(spin: SpinLength) -> Result<f64> {
    if !spin.is_integer() {
        return domain(format!(
            "small-x coefficient is only established for integer S, got S = {spin}"
        ));
    }
    Ok(1.0 / (2.0 + 2.0 * spin.s()))
}

/// Normalised first-order perturbative ground state of `λS_x + S_z²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbativeMoments {
    pub mean_sx: f64,
    pub mean_sz2: f64,
    pub xi2: f64,
}

pub fn perturbative_moments(spin: SpinLength, lambda: f64) -> Result<PerturbativeMoments> {
    if !spin.is_integer() {
        return domain(format!(
            "perturbative expansion needs integer S, got S = {spin}"
        ));
    }
    let s = spin.s();
    let c = s * (s + 1.0);
    let denom = 2.0 + c * lambda * lambda;
    Ok(PerturbativeMoments {
        mean_sx: -2.0 * c * lambda / denom,
        // 1 − 2/(2 + cλ²) without the cancellation at small λ
        mean_sz2: c * lambda * lambda / denom,
        xi2: 1.0 / (s + 1.0) + 0.5 * s * lambda * lambda,
    })
}

/// Smallest squeezing coefficient reachable by any spin-`S` state, `1/(1+S)`.
pub fn xi2_min(spin: SpinLength) -> f64 {
    1.0 / (1.0 + spin.s())
}
