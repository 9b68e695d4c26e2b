//! Moment propagation for a symmetric state split into addressable modes.
//!
//! Each particle is assumed to land in mode `I` with probability `π_I`,
//! independently of the others and of its spin. Under that assumption the
//! per-mode first and second moments follow exactly from the parent's
//! single-particle and pair correlations, for any particle number.

use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedIndex;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::spin_core::{moments, SpinState};
use crate::witnesses::{
    g2_two_mode, gk2_from_modes, gk2_symmetric, steering_r2, xi2, CollectiveMoments, Covariance,
    ModeMomentSet,
};

/// Relative tolerance of the equivalence assertions.
pub const EQUIVALENCE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// Single-particle means `⟨s_u⟩` and two-particle correlators
/// `⟨s_u^{(1)} s_v^{(2)}⟩` of a permutation-symmetric state.
///
/// The collective second moments `⟨S_u S_v⟩` they were derived from are kept
/// alongside, so that propagated variances do not inherit the rounding of
/// `⟨S_u²⟩ − N/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCorrelations {
    n: u64,
    single: [f64; 3],
    second: [[f64; 3]; 3],
}

impl PairCorrelations {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn single(&self, u: Axis) -> f64 {
        self.single[u.index()]
    }

    /// `⟨s_u^{(1)} s_v^{(2)}⟩`; for `u ≠ v` the symmetrised correlator.
    pub fn pair(&self, u: Axis, v: Axis) -> f64 {
        let nf = self.n as f64;
        // single-particle anticommutators {s_u, s_v} vanish for u ≠ v
        let own = if u == v { nf / 4.0 } else { 0.0 };
        (self.second[u.index()][v.index()] - own) / (nf * (nf - 1.0))
    }

    /// Collective `Var[S_u] = N/4 + N(N−1)⟨s_u s_u⟩ − N²⟨s_u⟩²`.
    pub fn collective_variance(&self, u: Axis) -> f64 {
        let mean = self.n as f64 * self.single(u);
        (self.second[u.index()][u.index()] - mean * mean).max(0.0)
    }
}

/// Inverts `⟨S_u⟩ = N⟨s_u⟩` and `⟨S_u²⟩ = N/4 + N(N−1)⟨s_u s_u⟩` for a parent
/// in the symmetric sector (`N = 2S`).
pub fn extract_pair_correlations(parent: &SpinState) -> Result<PairCorrelations> {
    let n = u64::from(parent.spin().two_s());
    if n < 2 {
        return domain(format!("pair correlations need N ≥ 2, got N = {n}"));
    }
    let mo = moments(parent);
    let nf = n as f64;
    let xz = mo.mean_sxsz_sym;
    Ok(PairCorrelations {
        n,
        single: [mo.mean_sx / nf, 0.0, mo.mean_sz / nf],
        second: [
            [mo.mean_sx2, 0.0, xz],
            [0.0, mo.mean_sy2, 0.0],
            [xz, 0.0, mo.mean_sz2],
        ],
    })
}

/// Mode probabilities of a split.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitConfig {
    pi: Vec<f64>,
}

impl SplitConfig {
    pub fn new(pi: Vec<f64>) -> Result<Self> {
        if pi.len() < 2 {
            return domain(format!("a split needs at least 2 modes, got {}", pi.len()));
        }
        if pi.iter().any(|&p| !(p > 0.0 && p.is_finite())) {
            return domain("mode probabilities must be positive");
        }
        let total: f64 = pi.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return domain(format!("mode probabilities sum to {total}, not 1"));
        }
        Ok(SplitConfig { pi })
    }

    pub fn symmetric(m: usize) -> Result<Self> {
        if m < 2 {
            return domain(format!("a split needs at least 2 modes, got {m}"));
        }
        Ok(SplitConfig {
            pi: vec![1.0 / m as f64; m],
        })
    }

    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    pub fn modes(&self) -> usize {
        self.pi.len()
    }
}

/// Means `⟨S_u^I⟩ = π_I N⟨s_u⟩` and covariance
/// `Cov[S_u^I, S_u^J] = π_Iπ_J (N(N−1)⟨s_u s_u⟩ − N²⟨s_u⟩²) + δ_IJ π_I N/4`.
pub fn propagate_component(
    pc: &PairCorrelations,
    cfg: &SplitConfig,
    u: Axis,
) -> Result<(Vec<f64>, Covariance)> {
    let nf = pc.n as f64;
    let s = pc.single(u);
    let means = cfg.pi.iter().map(|pi| pi * nf * s).collect();
    let cov = Covariance::from_split(cfg.pi.clone(), pc.collective_variance(u), nf / 4.0)?;
    Ok((means, cov))
}

/// Per-mode moments entering the mode witnesses.
pub fn propagate_mode_moments(pc: &PairCorrelations, cfg: &SplitConfig) -> Result<ModeMomentSet> {
    let (mean_sx, _) = propagate_component(pc, cfg, Axis::X)?;
    let (_, cov_sz) = propagate_component(pc, cfg, Axis::Z)?;
    let (_, cov_sy) = propagate_component(pc, cfg, Axis::Y)?;
    ModeMomentSet::new(pc.n, cfg.pi.clone(), mean_sx, cov_sz, Some(cov_sy))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GkComparison {
    pub k: usize,
    /// `ξ²·M²(M−1)/(4(k−1)²)`
    pub formula: f64,
    /// Evaluated from the propagated mode moments.
    pub modes: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub n: u64,
    pub modes: usize,
    pub xi2: f64,
    /// Two-mode values, present for `M = 2`.
    pub g2: Option<f64>,
    pub r2: Option<f64>,
    pub g2_pass: Option<bool>,
    pub r2_pass: Option<bool>,
    pub gk2: Vec<GkComparison>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.g2_pass.unwrap_or(true)
            && self.r2_pass.unwrap_or(true)
            && self.gk2.iter().all(|g| g.pass)
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= EQUIVALENCE_TOLERANCE * b.abs()
}

/// Splits `parent` symmetrically into `M` modes and compares the mode
/// witnesses with their closed forms in terms of the parent `ξ²`.
pub fn equivalence_check(parent: &SpinState, m: usize) -> Result<EquivalenceReport> {
    let pc = extract_pair_correlations(parent)?;
    let mo = moments(parent);
    if mo.mean_sx == 0.0 {
        return Err(Error::DegenerateInput(
            "unpolarized parent: <S_x> = 0".into(),
        ));
    }
    let n = pc.n;
    let xi = xi2(&CollectiveMoments::new(n, mo.var_sz, mo.mean_sx)?)?;
    let mm = propagate_mode_moments(&pc, &SplitConfig::symmetric(m)?)?;

    let (g2, r2) = if m == 2 {
        (Some(g2_two_mode(&mm)?), Some(steering_r2(&mm)?))
    } else {
        (None, None)
    };
    let gk2 = (2..=m)
        .map(|k| {
            let formula = gk2_symmetric(xi, m, k)?;
            let (modes, _) = gk2_from_modes(&mm, k)?;
            Ok(GkComparison {
                k,
                formula,
                modes,
                pass: close(modes, formula),
            })
        })
        .collect::<Result<_>>()?;

    Ok(EquivalenceReport {
        n,
        modes: m,
        xi2: xi,
        g2,
        r2,
        g2_pass: g2.map(|g| close(g, xi)),
        r2_pass: r2.map(|r| close(r, 4.0 * xi)),
        gk2,
    })
}

/// Empirical occupation statistics of the independent-assignment model.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupationStats {
    pub trials: u64,
    /// Estimates of `⟨Π^I⟩`.
    pub mean: Vec<f64>,
    pub mean_se: Vec<f64>,
    /// Estimates of `⟨Π^{I,(1)} Π^{J,(2)}⟩` for two distinct particles.
    pub pair: Vec<Vec<f64>>,
    pub pair_se: Vec<Vec<f64>>,
}

const TRIALS_PER_CHUNK: u64 = 1024;

/// Assigns `n` particles to modes independently with probabilities `π`, in
/// `trials` independent repetitions. Trial `t` draws from a ChaCha8 stream
/// seeded with `seed + t`, and partial sums are combined in trial order, so
/// the result does not depend on the thread count.
pub fn sample_mode_occupation(
    n: u64,
    cfg: &SplitConfig,
    trials: u64,
    seed: u64,
) -> Result<OccupationStats> {
    if trials == 0 {
        return domain("trials must be at least 1");
    }
    if n < 2 {
        return domain(format!(
            "pair statistics need at least 2 particles, got {n}"
        ));
    }
    let m = cfg.modes();
    let dist = WeightedIndex::new(&cfg.pi)
        .map_err(|e| Error::InvalidInput(format!("mode probabilities: {e}")))?;
    let nf = n as f64;
    let stride = m + m * m;

    let chunks: Vec<u64> = (0..trials.div_ceil(TRIALS_PER_CHUNK)).collect();
    let partials: Vec<(Vec<f64>, Vec<f64>)> = chunks
        .par_iter()
        .map(|&c| {
            let mut sum = vec![0.0; stride];
            let mut sum_sq = vec![0.0; stride];
            let mut counts = vec![0u64; m];
            let end = ((c + 1) * TRIALS_PER_CHUNK).min(trials);
            for t in c * TRIALS_PER_CHUNK..end {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t));
                counts.iter_mut().for_each(|v| *v = 0);
                for _ in 0..n {
                    counts[dist.sample(&mut rng)] += 1;
                }
                for i in 0..m {
                    let ni = counts[i] as f64;
                    let est = ni / nf;
                    sum[i] += est;
                    sum_sq[i] += est * est;
                    for j in 0..m {
                        let nj = counts[j] as f64;
                        let same = if i == j { ni } else { 0.0 };
                        let est = (ni * nj - same) / (nf * (nf - 1.0));
                        sum[m + i * m + j] += est;
                        sum_sq[m + i * m + j] += est * est;
                    }
                }
            }
            (sum, sum_sq)
        })
        .collect();

    let mut sum = vec![0.0; stride];
    let mut sum_sq = vec![0.0; stride];
    for (s, q) in &partials {
        for k in 0..stride {
            sum[k] += s[k];
            sum_sq[k] += q[k];
        }
    }
    let tf = trials as f64;
    let stat = |k: usize| {
        let mean = sum[k] / tf;
        let se = if trials > 1 {
            let var = ((sum_sq[k] - tf * mean * mean) / (tf - 1.0)).max(0.0);
            (var / tf).sqrt()
        } else {
            0.0
        };
        (mean, se)
    };
    let (mean, mean_se) = (0..m).map(stat).unzip();
    let (pair, pair_se) = (0..m)
        .map(|i| (0..m).map(|j| stat(m + i * m + j)).unzip())
        .unzip();
    Ok(OccupationStats {
        trials,
        mean,
        mean_se,
        pair,
        pair_se,
    })
}
