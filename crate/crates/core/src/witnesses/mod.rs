//! Entanglement, inseparability, depth, steering and local-squeezing criteria
//! evaluated from collective or per-mode spin moments.
//!
//! All detections use strict inequalities: a value equal to a bound is not a
//! violation.

mod partition;
mod report;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::sm_curves::fs_eval;
use crate::spin_core::SpinLength;

pub use partition::{bell_number, min_block_sum, Partition, MAX_ENUMERATED_MODES};
pub use report::{build_report, SteeringFlags, WitnessReport, SM_DEPTH_MAX_PARTICLES};

const MOMENT_SLACK: f64 = 1e-9;

/// Collective moments of an `N`-particle ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectiveMoments {
    n_particles: u64,
    var_sz: f64,
    mean_sx: f64,
}

impl CollectiveMoments {
    pub fn new(n_particles: u64, var_sz: f64, mean_sx: f64) -> Result<Self> {
        if n_particles == 0 {
            return Err(Error::InvalidInput(
                "particle number must be positive".into(),
            ));
        }
        if !var_sz.is_finite() || !mean_sx.is_finite() {
            return Err(Error::InvalidInput("moments must be finite".into()));
        }
        let half = n_particles as f64 / 2.0;
        if var_sz < 0.0 || var_sz > half * half * (1.0 + MOMENT_SLACK) {
            return Err(Error::InvalidInput(format!(
                "var_sz = {var_sz} outside [0, N²/4] for N = {n_particles}"
            )));
        }
        if mean_sx.abs() > half * (1.0 + MOMENT_SLACK) {
            return Err(Error::InvalidInput(format!(
                "|mean_sx| = {} exceeds N/2 for N = {n_particles}",
                mean_sx.abs()
            )));
        }
        Ok(CollectiveMoments {
            n_particles,
            var_sz,
            mean_sx,
        })
    }

    pub fn n_particles(&self) -> u64 {
        self.n_particles
    }

    pub fn var_sz(&self) -> f64 {
        self.var_sz
    }

    pub fn mean_sx(&self) -> f64 {
        self.mean_sx
    }

    /// `|⟨S_x⟩|/S` with `S = N/2`, clamped to 1.
    pub fn polarization(&self) -> f64 {
        (2.0 * self.mean_sx.abs() / self.n_particles as f64).min(1.0)
    }
}

/// Symmetric covariance matrix of one spin component across modes.
///
/// Either a dense matrix or the structured form produced by independent
/// random assignment of particles to modes,
/// `C_IJ = π_Iπ_J (V − σ) + δ_IJ π_I σ` with total variance `V` and shot-noise
/// term `σ = N/4`. The structured form keeps quadratic forms free of the
/// cancellation between `V` and `σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Covariance {
    repr: CovRepr,
}

#[derive(Debug, Clone, PartialEq)]
enum CovRepr {
    Dense(Vec<Vec<f64>>),
    Split { pi: Vec<f64>, total: f64, shot: f64 },
}

impl Covariance {
    pub fn new(entries: Vec<Vec<f64>>) -> Result<Self> {
        let m = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != m {
                return Err(Error::Dimension {
                    expected: m,
                    got: row.len(),
                });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(
                    "covariance entries must be finite".into(),
                ));
            }
            if row[i] < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "negative variance on mode {}",
                    i + 1
                )));
            }
            for j in 0..i {
                let (a, b) = (row[j], entries[j][i]);
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::InvalidInput(format!(
                        "covariance not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Covariance {
            repr: CovRepr::Dense(entries),
        })
    }

    /// Diagonal covariance (uncorrelated modes).
    pub fn diagonal(variances: &[f64]) -> Result<Self> {
        let m = variances.len();
        let entries = (0..m)
            .map(|i| {
                let mut row = vec![0.0; m];
                row[i] = variances[i];
                row
            })
            .collect();
        Covariance::new(entries)
    }

    /// Structured covariance of a random split with probabilities `pi`
    /// (summing to one), total variance `total` and shot noise `shot`.
    pub fn from_split(pi: Vec<f64>, total: f64, shot: f64) -> Result<Self> {
        if !total.is_finite() || !shot.is_finite() || total < 0.0 || shot < 0.0 {
            return Err(Error::InvalidInput(
                "split covariance needs finite, non-negative variances".into(),
            ));
        }
        Ok(Covariance {
            repr: CovRepr::Split { pi, total, shot },
        })
    }

    pub fn dim(&self) -> usize {
        match &self.repr {
            CovRepr::Dense(e) => e.len(),
            CovRepr::Split { pi, .. } => pi.len(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match &self.repr {
            CovRepr::Dense(e) => e[i][j],
            CovRepr::Split { pi, total, shot } => {
                let c = pi[i] * pi[j] * (total - shot);
                if i == j {
                    c + pi[i] * shot
                } else {
                    c
                }
            }
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let m = self.dim();
        (0..m)
            .map(|i| (0..m).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// `Var[Σ_I w_I S^I] = wᵀ C w`.
    pub fn quadratic_form(&self, w: &[f64]) -> f64 {
        match &self.repr {
            CovRepr::Dense(e) => e
                .iter()
                .zip(w)
                .map(|(row, wi)| wi * row.iter().zip(w).map(|(c, wj)| c * wj).sum::<f64>())
                .sum(),
            CovRepr::Split { pi, total, shot } => {
                // (w·π)² V + σ Σ_I π_I (w_I − w̄)², with w̄ = w·π
                let mean: f64 = pi.iter().zip(w).map(|(p, x)| p * x).sum();
                let spread: f64 = pi
                    .iter()
                    .zip(w)
                    .map(|(p, x)| p * (x - mean) * (x - mean))
                    .sum();
                mean * mean * total + shot * spread
            }
        }
    }
}

/// Per-mode moments of a state distributed over `M ≥ 2` addressable modes.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeMomentSet {
    n_total: u64,
    pi: Vec<f64>,
    mean_sx: Vec<f64>,
    cov_sz: Covariance,
    cov_sy: Option<Covariance>,
}

impl ModeMomentSet {
    pub fn new(
        n_total: u64,
        pi: Vec<f64>,
        mean_sx: Vec<f64>,
        cov_sz: Covariance,
        cov_sy: Option<Covariance>,
    ) -> Result<Self> {
        let m = pi.len();
        if m < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least 2 modes, got {m}"
            )));
        }
        for len in [mean_sx.len(), cov_sz.dim()]
            .into_iter()
            .chain(cov_sy.as_ref().map(Covariance::dim))
        {
            if len != m {
                return Err(Error::Dimension {
                    expected: m,
                    got: len,
                });
            }
        }
        if pi.iter().any(|&p| !(p > 0.0 && p < 1.0)) {
            return Err(Error::InvalidInput(
                "mode probabilities must lie in (0, 1)".into(),
            ));
        }
        let total: f64 = pi.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "mode probabilities sum to {total}, not 1"
            )));
        }
        if mean_sx.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(
                "mode polarisations must be finite".into(),
            ));
        }
        Ok(ModeMomentSet {
            n_total,
            pi,
            mean_sx,
            cov_sz,
            cov_sy,
        })
    }

    pub fn modes(&self) -> usize {
        self.pi.len()
    }

    pub fn n_total(&self) -> u64 {
        self.n_total
    }

    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    pub fn mean_sx(&self) -> &[f64] {
        &self.mean_sx
    }

    pub fn cov_sz(&self) -> &Covariance {
        &self.cov_sz
    }

    pub fn cov_sy(&self) -> Option<&Covariance> {
        self.cov_sy.as_ref()
    }

    fn require_cov_sy(&self) -> Result<&Covariance> {
        self.cov_sy
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("S_y variances of the modes are required".into()))
    }
}

/// Squeezing coefficient `ξ² = N·Var[S_z]/⟨S_x⟩²`.
pub fn xi2(m: &CollectiveMoments) -> Result<f64> {
    if m.mean_sx == 0.0 {
        return Err(Error::DegenerateInput(
            "mean_sx = 0: squeezing coefficient undefined, no detection".into(),
        ));
    }
    Ok(m.n_particles as f64 * m.var_sz / (m.mean_sx * m.mean_sx))
}

fn two_mode_product(mm: &ModeMomentSet) -> Result<f64> {
    if mm.modes() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            got: mm.modes(),
        });
    }
    let vz = mm.cov_sz.quadratic_form(&[1.0, 1.0]);
    let vy = mm.require_cov_sy()?.quadratic_form(&[1.0, -1.0]);
    Ok(4.0 * vz * vy)
}

/// Two-mode inseparability coefficient
/// `𝒢² = 4·Var[S_z^A+S_z^B]·Var[S_y^A−S_y^B]/(|⟨S_x^A⟩|+|⟨S_x^B⟩|)²`.
pub fn g2_two_mode(mm: &ModeMomentSet) -> Result<f64> {
    let product = two_mode_product(mm)?;
    let denom = mm.mean_sx[0].abs() + mm.mean_sx[1].abs();
    if denom == 0.0 {
        return Err(Error::DegenerateInput("both modes are unpolarised".into()));
    }
    Ok(product / (denom * denom))
}

/// Steering coefficient `ℛ² = 4·Var[S_z^A+S_z^B]·Var[S_y^A−S_y^B]/⟨S_x^B⟩²`.
pub fn steering_r2(mm: &ModeMomentSet) -> Result<f64> {
    let product = two_mode_product(mm)?;
    let b = mm.mean_sx[1];
    if b == 0.0 {
        return Err(Error::DegenerateInput("mode B is unpolarised".into()));
    }
    Ok(product / (b * b))
}

fn check_k(m: usize, k: usize) -> Result<()> {
    if m < 2 || k < 2 || k > m {
        return domain(format!("need 2 ≤ k ≤ M, got k = {k}, M = {m}"));
    }
    Ok(())
}

/// Optimal weights `g*_I = 1`, `h*_1 = 1`, `h*_{J>1} = −1/(M−1)`.
pub fn optimal_weights(m: usize) -> (Vec<f64>, Vec<f64>) {
    let g = vec![1.0; m];
    let mut h = vec![-1.0 / (m as f64 - 1.0); m];
    h[0] = 1.0;
    (g, h)
}

/// `β_min = 2(k−1)/(M−1)` for the optimal weights.
pub fn beta_min_closed(m: usize, k: usize) -> Result<f64> {
    check_k(m, k)?;
    Ok(2.0 * (k as f64 - 1.0) / (m as f64 - 1.0))
}

/// Exhaustive `min_Λ Σ_q |Σ_{I∈𝒜_q} g_I h_I|` over partitions with at least
/// `k` blocks.
pub fn beta_min_enumerate(m: usize, k: usize, g: &[f64], h: &[f64]) -> Result<(f64, Partition)> {
    for len in [g.len(), h.len()] {
        if len != m {
            return Err(Error::Dimension {
                expected: m,
                got: len,
            });
        }
    }
    let weights: Vec<f64> = g.iter().zip(h).map(|(a, b)| a * b).collect();
    min_block_sum(&weights, k)
}

/// `𝒢_k^M(g*,h*)² = ξ²·M²(M−1)/(4(k−1)²)` for symmetric splits.
pub fn gk2_symmetric(xi2: f64, m: usize, k: usize) -> Result<f64> {
    check_k(m, k)?;
    if xi2.is_nan() || xi2 <= 0.0 {
        return domain(format!("xi2 = {xi2} must be positive"));
    }
    let (mf, kf) = (m as f64, k as f64 - 1.0);
    Ok(xi2 * mf * mf * (mf - 1.0) / (4.0 * kf * kf))
}

/// `ξ²` below which every partition into `k` or more blocks is excluded.
pub fn mode_sep_threshold(m: usize, k: usize) -> Result<f64> {
    check_k(m, k)?;
    let (mf, kf) = (m as f64, k as f64 - 1.0);
    Ok(4.0 * kf * kf / (mf * mf * (mf - 1.0)))
}

/// `𝒢_k^M(g*,h*)²` from arbitrary per-mode moments, with the bound obtained by
/// enumerating partitions. Returns the value and a minimising partition.
pub fn gk2_from_modes(mm: &ModeMomentSet, k: usize) -> Result<(f64, Partition)> {
    let m = mm.modes();
    check_k(m, k)?;
    let (g, h) = optimal_weights(m);
    let vz = mm.cov_sz.quadratic_form(&g);
    let vy = mm.require_cov_sy()?.quadratic_form(&h);
    let weights: Vec<f64> = (0..m).map(|i| g[i] * h[i] * mm.mean_sx[i]).collect();
    let (beta, partition) = min_block_sum(&weights, k)?;
    let bound = 0.5 * beta;
    if bound == 0.0 {
        return Err(Error::DegenerateInput(format!(
            "polarisation bound vanishes for k = {k}"
        )));
    }
    Ok((vz * vy / (bound * bound), partition))
}

/// Smallest `k ∈ [2, M]` whose separability threshold is violated.
///
/// `Some(k)` excludes every partition with `k` or more blocks; `Some(2)` is
/// full inseparability.
pub fn mode_insep_k(xi2: f64, m: usize) -> Option<usize> {
    (2..=m).find(|&k| mode_sep_threshold(m, k).is_ok_and(|t| xi2 < t))
}

/// Largest `M` with `M < 2(1 + √(1−ξ²))/ξ²`, i.e. entanglement among all `M`
/// modes of a symmetric split. Returns 1 when `ξ² ≥ 1`.
pub fn max_entangled_modes(xi2: f64) -> Result<u64> {
    if !xi2.is_finite() || xi2 <= 0.0 {
        return domain(format!("xi2 = {xi2} must be positive and finite"));
    }
    if xi2 >= 1.0 {
        return Ok(1);
    }
    let bound = 2.0 * (1.0 + (1.0 - xi2).sqrt()) / xi2;
    // exact test equivalent to the strict inequality
    let ok = |m: u64| {
        let mf = m as f64;
        xi2 * mf * mf < 4.0 * (mf - 1.0)
    };
    let mut m = (bound.ceil() as u64).saturating_sub(1).max(1);
    while m > 1 && !ok(m) {
        m -= 1;
    }
    while ok(m + 1) {
        m += 1;
    }
    Ok(m)
}

fn check_depth_args(n: u64, p: u64) -> Result<()> {
    if p < 1 || p > n {
        return domain(format!("need 1 ≤ p ≤ N, got p = {p}, N = {n}"));
    }
    Ok(())
}

/// `N/(N_p·p²/2 + r²/2 + N)` with `N_p = ⌊N/p⌋`, `r = N − pN_p`.
pub fn depth_bound_state_independent(n: u64, p: u64) -> Result<f64> {
    check_depth_args(n, p)?;
    let np = (n / p) as f64;
    let r = (n % p) as f64;
    let (nf, pf) = (n as f64, p as f64);
    Ok(nf / (np * pf * pf / 2.0 + r * r / 2.0 + nf))
}

/// Fisher-information depth bound `1/p`.
pub fn depth_bound_fisher(p: u64) -> Result<f64> {
    if p == 0 {
        return domain("p must be at least 1");
    }
    Ok(1.0 / p as f64)
}

/// Depth-detection strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DepthMethod {
    Fisher,
    Tight,
    Sm,
}

/// Variance bound of the generalised SM criterion for `p`-producible states,
/// assuming every group carries polarisation `x = |⟨S_x⟩|/S`:
/// `(S_p N_p)·F_{S_p}[x] + S_r·F_{S_r}[x]`.
pub fn sm_depth_bound_symmetric(n: u64, p: u64, x: f64) -> Result<f64> {
    check_depth_args(n, p)?;
    let np = n / p;
    let r = n % p;
    let sp = SpinLength::new(p as u32)?;
    let mut bound = sp.s() * np as f64 * fs_eval(sp, x)?;
    if r > 0 {
        let sr = SpinLength::new(r as u32)?;
        bound += sr.s() * fs_eval(sr, x)?;
    }
    Ok(bound)
}

/// Variance bound of the generalised SM criterion without assuming how the
/// total polarisation `X = |⟨S_x⟩|` is shared between the `N_p` full groups
/// (`A`) and the remainder (`B = X − A`): the minimum over `A` of
/// `(S_p N_p)·F_{S_p}[A/(S_p N_p)] + S_r·F_{S_r}[B/S_r]`.
pub fn sm_depth_bound_worst_split(n: u64, p: u64, mean_sx: f64) -> Result<f64> {
    check_depth_args(n, p)?;
    let total = mean_sx.abs();
    let big = SpinLength::new(p as u32)?;
    let s_big = big.s() * (n / p) as f64;
    let r = n % p;
    if total > n as f64 / 2.0 * (1.0 + MOMENT_SLACK) {
        return domain(format!("|mean_sx| = {total} exceeds N/2"));
    }
    if r == 0 {
        return Ok(s_big * fs_eval(big, (total / s_big).min(1.0))?);
    }
    let rest = SpinLength::new(r as u32)?;
    let s_rest = rest.s();
    let value = |a: f64| -> Result<f64> {
        let xa = (a / s_big).clamp(0.0, 1.0);
        let xb = ((total - a) / s_rest).clamp(0.0, 1.0);
        Ok(s_big * fs_eval(big, xa)? + s_rest * fs_eval(rest, xb)?)
    };
    // the objective is convex in A (each F_S is convex); near the minimum the
    // value error is quadratic in the location error, so 1e-10 suffices
    let mut lo = (total - s_rest).max(0.0);
    let mut hi = total.min(s_big);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = hi - ratio * (hi - lo);
    let mut d = lo + ratio * (hi - lo);
    let mut fc = value(c)?;
    let mut fd = value(d)?;
    for _ in 0..80 {
        if hi - lo <= 1e-10 * total.max(1e-300) {
            break;
        }
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = value(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = value(d)?;
        }
    }
    let ends = [value(lo)?, value(hi)?];
    Ok(fc.min(fd).min(ends[0]).min(ends[1]))
}

/// Detected entanglement depth: one more than the largest `p` whose bound is
/// strictly violated, clamped to `N`; 1 when nothing is violated.
pub fn depth_detect(m: &CollectiveMoments, method: DepthMethod) -> Result<u64> {
    let n = m.n_particles;
    let violated: Vec<bool> = match method {
        DepthMethod::Fisher => {
            let v = xi2(m)?;
            (1..=n).map(|p| v < 1.0 / p as f64).collect()
        }
        DepthMethod::Tight => {
            let v = xi2(m)?;
            (1..=n)
                .map(|p| depth_bound_state_independent(n, p).map(|b| v < b))
                .collect::<Result<_>>()?
        }
        DepthMethod::Sm => {
            if m.mean_sx == 0.0 {
                return Err(Error::DegenerateInput(
                    "mean_sx = 0: polarisation-dependent bound undefined".into(),
                ));
            }
            let x = m.polarization();
            (1..=n)
                .into_par_iter()
                .map(|p| sm_depth_bound_symmetric(n, p, x).map(|b| m.var_sz < b))
                .collect::<Result<_>>()?
        }
    };
    Ok(depth_from_violations(&violated, n))
}

fn depth_from_violations(violated: &[bool], n: u64) -> u64 {
    match violated.iter().rposition(|&v| v) {
        Some(i) => (i as u64 + 2).min(n),
        None => 1,
    }
}

/// Squeezing bound for `p`-producible states, `2·F_{p/2}[x]/x²`.
pub fn sm_xi2_bound(p: u64, x: f64) -> Result<f64> {
    if p == 0 {
        return domain("p must be at least 1");
    }
    if x == 0.0 {
        return domain("x = 0: use the limit 1/(1+p/2)");
    }
    let spin = SpinLength::new(p as u32)?;
    Ok(2.0 * fs_eval(spin, x)? / (x * x))
}

/// Outcome of the SM steering test on mode `B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmSteering {
    pub violated: bool,
    /// `S_B·F_{S_B}[⟨S_x^B⟩/S_B]`
    pub bound: f64,
    /// `S·F_{S_B}[⟨S_x^B⟩/S]`, present when the total particle number is known.
    pub weaker_bound: Option<f64>,
}

/// Steering of `B` by `A` is detected when `Var[S_z] < S_B·F_{S_B}[⟨S_x^B⟩/S_B]`.
pub fn steering_sm(
    var_sz: f64,
    mean_sx_b: f64,
    n_b: u64,
    n_total: Option<u64>,
) -> Result<SmSteering> {
    if n_b == 0 {
        return domain("n_b must be at least 1");
    }
    let spin_b = SpinLength::new(n_b as u32)?;
    let s_b = spin_b.s();
    if mean_sx_b.abs() > s_b {
        return domain(format!(
            "|mean_sx_b| = {} exceeds S_B = {s_b}",
            mean_sx_b.abs()
        ));
    }
    let bound = s_b * fs_eval(spin_b, mean_sx_b / s_b)?;
    let weaker_bound = match n_total {
        None => None,
        Some(n) if n < n_b => {
            return domain(format!("total N = {n} is smaller than n_b = {n_b}"));
        }
        Some(n) => {
            let s = n as f64 / 2.0;
            Some(s * fs_eval(spin_b, mean_sx_b / s)?)
        }
    };
    if let Some(w) = weaker_bound {
        if w > bound + 1e-9 * bound.abs().max(1e-12) {
            return Err(Error::Assertion(format!(
                "steering bound {bound} below the weaker bound {w}"
            )));
        }
    }
    Ok(SmSteering {
        violated: var_sz < bound,
        bound,
        weaker_bound,
    })
}

/// Local squeezing of a mode holding fraction `π`:
/// `ξ²_I = ξ²π + (1−π)·(N/(2⟨S_x⟩))²`.
pub fn local_xi2_from_global(xi2: f64, pi: f64, n: u64, mean_sx: f64) -> Result<f64> {
    if !(pi > 0.0 && pi < 1.0) {
        return domain(format!("pi = {pi} must lie in (0, 1)"));
    }
    if mean_sx == 0.0 {
        return Err(Error::DegenerateInput("mean_sx = 0".into()));
    }
    let ratio = n as f64 / (2.0 * mean_sx);
    Ok(xi2 * pi + (1.0 - pi) * ratio * ratio)
}

/// `Σ_I ξ²_I − N²(M−1)/(4⟨S_x⟩²)`, which recovers the global `ξ²`.
pub fn global_local_identity(local_xi2: &[f64], n: u64, m: usize, mean_sx: f64) -> Result<f64> {
    if local_xi2.len() != m {
        return Err(Error::Dimension {
            expected: m,
            got: local_xi2.len(),
        });
    }
    if mean_sx == 0.0 {
        return Err(Error::DegenerateInput("mean_sx = 0".into()));
    }
    let nf = n as f64;
    let correction = nf * nf * (m as f64 - 1.0) / (4.0 * mean_sx * mean_sx);
    Ok(local_xi2.iter().sum::<f64>() - correction)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(n: u64, var: f64, sx: f64) -> CollectiveMoments {
        CollectiveMoments::new(n, var, sx).unwrap()
    }

    fn two_modes(sx: [f64; 2], vz: [[f64; 2]; 2], vy: [[f64; 2]; 2]) -> ModeMomentSet {
        ModeMomentSet::new(
            sx.iter().map(|v| v.abs() * 2.0).sum::<f64>().round() as u64,
            vec![0.5, 0.5],
            sx.to_vec(),
            Covariance::new(vz.iter().map(|r| r.to_vec()).collect()).unwrap(),
            Some(Covariance::new(vy.iter().map(|r| r.to_vec()).collect()).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn collective_validation() {
        assert!(CollectiveMoments::new(0, 0.0, 0.0).is_err());
        assert!(CollectiveMoments::new(10, -0.1, 1.0).is_err());
        assert!(CollectiveMoments::new(10, 1.0, 5.5).is_err());
        assert!(CollectiveMoments::new(10, 26.0, 1.0).is_err());
        assert!(CollectiveMoments::new(10, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn xi2_examples() {
        assert_eq!(xi2(&cm(10, 2.5, 5.0)).unwrap(), 1.0);
        assert!((xi2(&cm(2, 0.1, 0.6)).unwrap() - 0.2 / 0.36).abs() < 1e-15);
        assert!(matches!(
            xi2(&cm(4, 1.0, 0.0)),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn product_of_coherent_states() {
        // each mode a coherent state of 5 particles: Var[S_z^I] = Var[S_y^I] = 5/4
        let mm = two_modes(
            [2.5, 2.5],
            [[1.25, 0.0], [0.0, 1.25]],
            [[1.25, 0.0], [0.0, 1.25]],
        );
        assert!((g2_two_mode(&mm).unwrap() - 1.0).abs() < 1e-15);
        assert!((steering_r2(&mm).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn g2_errors() {
        let mm = two_modes(
            [0.0, 0.0],
            [[1.0, 0.0], [0.0, 1.0]],
            [[1.0, 0.0], [0.0, 1.0]],
        );
        assert!(matches!(g2_two_mode(&mm), Err(Error::DegenerateInput(_))));
        assert!(matches!(steering_r2(&mm), Err(Error::DegenerateInput(_))));
        let three = ModeMomentSet::new(
            6,
            vec![0.25, 0.25, 0.5],
            vec![1.0; 3],
            Covariance::diagonal(&[1.0; 3]).unwrap(),
            None,
        )
        .unwrap();
        assert!(matches!(g2_two_mode(&three), Err(Error::Dimension { .. })));
    }

    #[test]
    fn mode_set_validation() {
        let c = Covariance::diagonal(&[1.0, 1.0]).unwrap();
        assert!(ModeMomentSet::new(4, vec![0.5, 0.6], vec![1.0, 1.0], c.clone(), None).is_err());
        assert!(ModeMomentSet::new(4, vec![1.0], vec![1.0], c.clone(), None).is_err());
        assert!(ModeMomentSet::new(4, vec![0.5, 0.5], vec![1.0], c, None).is_err());
        assert!(Covariance::new(vec![vec![1.0, 0.2], vec![0.3, 1.0]]).is_err());
        assert!(Covariance::new(vec![vec![1.0, 0.2]]).is_err());
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta_min_closed(2, 2).unwrap(), 2.0);
        assert_eq!(beta_min_closed(5, 3).unwrap(), 1.0);
        assert!(beta_min_closed(3, 4).is_err());
        assert!(beta_min_closed(3, 1).is_err());

        let (g, h) = optimal_weights(3);
        let (v, p) = beta_min_enumerate(3, 2, &g, &h).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        let s = p.to_string();
        assert!(s == "{{1,2},{3}}" || s == "{{1,3},{2}}", "{s}");

        let (g, h) = optimal_weights(2);
        assert_eq!(beta_min_enumerate(2, 2, &g, &h).unwrap().0, 2.0);
        assert!(beta_min_enumerate(3, 2, &g, &h).is_err());
    }

    #[test]
    fn all_ones_weights_give_mode_count() {
        for m in 2..=6 {
            for k in 2..=m {
                let ones = vec![1.0; m];
                assert_eq!(beta_min_enumerate(m, k, &ones, &ones).unwrap().0, m as f64);
            }
        }
    }

    #[test]
    fn gk2_examples() {
        assert_eq!(gk2_symmetric(0.3, 2, 2).unwrap(), 0.3);
        assert!((gk2_symmetric(0.2, 3, 2).unwrap() - 0.9).abs() < 1e-15);
        assert!((gk2_symmetric(8.0 / 9.0, 3, 3).unwrap() - 1.0).abs() < 1e-15);
        assert!(gk2_symmetric(0.0, 3, 2).is_err());
    }

    #[test]
    fn mode_insep_examples() {
        assert_eq!(mode_insep_k(0.3, 3), Some(3));
        assert_eq!(mode_insep_k(0.2, 3), Some(2));
        for m in 2..10 {
            assert_eq!(mode_insep_k(1.0, m), None);
        }
    }

    #[test]
    fn max_modes_examples() {
        assert_eq!(max_entangled_modes(0.5).unwrap(), 6);
        assert_eq!(max_entangled_modes(1.0).unwrap(), 1);
        assert_eq!(max_entangled_modes(1.5).unwrap(), 1);
        assert!(max_entangled_modes(0.0).is_err());
        for &x in &[0.9, 0.5, 0.2, 0.05, 0.013] {
            let m = max_entangled_modes(x).unwrap() as usize;
            assert_eq!(mode_insep_k(x, m), Some(m), "xi2 = {x}");
        }
    }

    #[test]
    fn depth_bound_examples() {
        assert!((depth_bound_state_independent(12, 4).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((depth_bound_state_independent(100, 13).unwrap() - 100.0 / 732.0).abs() < 1e-15);
        assert!((depth_bound_state_independent(9, 1).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(depth_bound_state_independent(9, 10).is_err());
        assert!(depth_bound_state_independent(9, 0).is_err());
    }

    #[test]
    fn depth_scans() {
        let m = cm(100, 3.25, 50.0);
        assert_eq!(depth_detect(&m, DepthMethod::Tight).unwrap(), 14);
        assert_eq!(depth_detect(&m, DepthMethod::Fisher).unwrap(), 8);
        let css = cm(100, 25.0, 50.0);
        assert_eq!(depth_detect(&css, DepthMethod::Tight).unwrap(), 1);
        assert_eq!(depth_detect(&css, DepthMethod::Fisher).unwrap(), 1);
        assert!(depth_detect(&cm(4, 1.0, 0.0), DepthMethod::Sm).is_err());
    }

    #[test]
    fn fisher_outranks_tight_only_between_two_thirds_and_one() {
        let m = cm(12, 0.8 * 36.0 / 12.0, 6.0);
        assert_eq!(depth_detect(&m, DepthMethod::Fisher).unwrap(), 2);
        assert_eq!(depth_detect(&m, DepthMethod::Tight).unwrap(), 1);
    }

    #[test]
    fn sm_bound_examples() {
        assert!((sm_xi2_bound(2, 0.6).unwrap() - 0.2 / 0.36).abs() < 1e-9);
        assert!((sm_xi2_bound(3, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(sm_xi2_bound(2, 0.0).is_err());
    }

    #[test]
    fn steering_sm_examples() {
        let s = steering_sm(0.05, 0.6, 2, Some(4)).unwrap();
        assert!(s.violated);
        assert!((s.bound - 0.1).abs() < 1e-10);
        assert!(s.weaker_bound.unwrap() <= s.bound);
        assert!(!steering_sm(0.2, 0.6, 2, None).unwrap().violated);
        assert!(steering_sm(0.2, 1.2, 2, None).is_err());
    }

    #[test]
    fn local_squeezing_examples() {
        let l = local_xi2_from_global(0.1, 0.5, 100, 48.0).unwrap();
        assert!((l - (0.05 + 0.5 * (25.0f64 / 24.0).powi(2))).abs() < 1e-15);
        let back = global_local_identity(&[l, l], 100, 2, 48.0).unwrap();
        assert!((back - 0.1).abs() < 1e-12);
        assert_eq!(global_local_identity(&[0.7], 10, 1, 3.0).unwrap(), 0.7);
        assert!(global_local_identity(&[0.7], 10, 2, 3.0).is_err());
        assert!(local_xi2_from_global(0.1, 1.0, 100, 48.0).is_err());
    }
}
