//! Collective spin operators in the Dicke basis `|S,m⟩` and pure-state moments.
//!
//! Basis vectors are indexed by `k = m + S`, so index 0 is `m = -S` and the
//! last index is `m = +S`. All operators here are real symmetric tridiagonal
//! matrices and all states have real amplitudes.

mod eigen;

pub use eigen::ground_state;

use crate::error::{domain, Error, Result};

/// Spin length stored as `2S`, so half-integer spins are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinLength {
    two_s: u32,
}

impl SpinLength {
    pub fn new(two_s: u32) -> Result<Self> {
        if two_s == 0 {
            return Err(Error::InvalidSpin(two_s));
        }
        Ok(Self { two_s })
    }

    /// Symmetric sector of `n` spin-1/2 particles, `S = n/2`.
    pub fn from_particles(n: u32) -> Result<Self> {
        Self::new(n)
    }

    pub fn two_s(self) -> u32 {
        self.two_s
    }

    pub fn s(self) -> f64 {
        f64::from(self.two_s) / 2.0
    }

    pub fn dim(self) -> usize {
        self.two_s as usize + 1
    }

    pub fn is_integer(self) -> bool {
        self.two_s.is_multiple_of(2)
    }

    /// Magnetic quantum number of basis index `k`.
    pub fn m(self, k: usize) -> f64 {
        k as f64 - self.s()
    }

    /// `S(S+1)`.
    pub fn casimir(self) -> f64 {
        let s = self.s();
        s * (s + 1.0)
    }

    /// Matrix element `⟨m+1|S₊|m⟩ = √(S(S+1) − m(m+1))` for `m = m(k)`.
    pub fn raising(self, k: usize) -> f64 {
        let m = self.m(k);
        (self.casimir() - m * (m + 1.0)).max(0.0).sqrt()
    }
}

impl std::fmt::Display for SpinLength {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.two_s / 2)
        } else {
            write!(f, "{}/2", self.two_s)
        }
    }
}

/// Real symmetric tridiagonal matrix in the Dicke basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    diagonal: Vec<f64>,
    off_diagonal: Vec<f64>,
}

impl TridiagonalOperator {
    pub fn new(diagonal: Vec<f64>, off_diagonal: Vec<f64>) -> Result<Self> {
        if diagonal.len() < 2 {
            return Err(Error::Dimension {
                expected: 2,
                got: diagonal.len(),
            });
        }
        if off_diagonal.len() + 1 != diagonal.len() {
            return Err(Error::Dimension {
                expected: diagonal.len() - 1,
                got: off_diagonal.len(),
            });
        }
        if diagonal.iter().chain(&off_diagonal).any(|v| !v.is_finite()) {
            return domain("operator entries must be finite");
        }
        Ok(Self {
            diagonal,
            off_diagonal,
        })
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.off_diagonal
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// Spin length implied by the dimension, `2S = dim − 1`.
    pub fn spin(&self) -> SpinLength {
        SpinLength {
            two_s: (self.dim() - 1) as u32,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            diagonal: self.diagonal.iter().map(|d| d * factor).collect(),
            off_diagonal: self.off_diagonal.iter().map(|e| e * factor).collect(),
        }
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(v.len(), n, "vector length does not match operator");
        (0..n)
            .map(|i| {
                let mut acc = self.diagonal[i] * v[i];
                if i > 0 {
                    acc += self.off_diagonal[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += self.off_diagonal[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }

    /// Infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut acc = self.diagonal[i].abs();
                if i > 0 {
                    acc += self.off_diagonal[i - 1].abs();
                }
                if i + 1 < n {
                    acc += self.off_diagonal[i].abs();
                }
                acc
            })
            .fold(0.0, f64::max)
    }

    /// Dense row-major copy, mainly for cross-checks.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut out = vec![vec![0.0; n]; n];
        for i in 0..n {
            out[i][i] = self.diagonal[i];
            if i + 1 < n {
                out[i][i + 1] = self.off_diagonal[i];
                out[i + 1][i] = self.off_diagonal[i];
            }
        }
        out
    }
}

/// `S_x` in the Dicke basis: zero diagonal, off-diagonal `½√(S(S+1) − m(m+1))`.
pub fn build_sx(spin: SpinLength) -> TridiagonalOperator {
    let off = (0..spin.dim() - 1).map(|k| 0.5 * spin.raising(k)).collect();
    TridiagonalOperator {
        diagonal: vec![0.0; spin.dim()],
        off_diagonal: off,
    }
}

/// `S_z` in the Dicke basis.
pub fn build_sz(spin: SpinLength) -> TridiagonalOperator {
    TridiagonalOperator {
        diagonal: (0..spin.dim()).map(|k| spin.m(k)).collect(),
        off_diagonal: vec![0.0; spin.dim() - 1],
    }
}

/// `H = λ S_x + S_z²`, whose ground states minimise `Var[S_z]` at fixed `⟨S_x⟩`.
pub fn build_hamiltonian(lambda: f64, spin: SpinLength) -> Result<TridiagonalOperator> {
    build_centered_hamiltonian(lambda, 0.0, spin)
}

/// `H = λ S_x + (S_z − μ)²`.
///
/// With `μ = 0` this is [`build_hamiltonian`]. A nonzero centre is needed for
/// half-integer spins, where minimal-variance states need not have `⟨S_z⟩ = 0`.
pub fn build_centered_hamiltonian(
    lambda: f64,
    mu: f64,
    spin: SpinLength,
) -> Result<TridiagonalOperator> {
    if !lambda.is_finite() || !mu.is_finite() {
        return domain(format!("lambda = {lambda}, mu = {mu} must be finite"));
    }
    let diagonal = (0..spin.dim())
        .map(|k| {
            let d = spin.m(k) - mu;
            d * d
        })
        .collect();
    let off_diagonal = (0..spin.dim() - 1)
        .map(|k| lambda * 0.5 * spin.raising(k))
        .collect();
    Ok(TridiagonalOperator {
        diagonal,
        off_diagonal,
    })
}

/// Normalised pure state with real amplitudes over `m = −S, …, +S`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinState {
    spin: SpinLength,
    amplitudes: Vec<f64>,
}

const NORM_TOLERANCE: f64 = 1e-12;

impl SpinState {
    /// Wraps amplitudes that are already normalised to within `1e-12`.
    pub fn new(spin: SpinLength, amplitudes: Vec<f64>) -> Result<Self> {
        if amplitudes.len() != spin.dim() {
            return Err(Error::Dimension {
                expected: spin.dim(),
                got: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOLERANCE {
            return domain(format!("state norm {norm} differs from 1"));
        }
        Ok(Self { spin, amplitudes })
    }

    /// Normalises arbitrary nonzero amplitudes.
    pub fn normalized(spin: SpinLength, mut amplitudes: Vec<f64>) -> Result<Self> {
        if amplitudes.len() != spin.dim() {
            return Err(Error::Dimension {
                expected: spin.dim(),
                got: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::DegenerateInput(
                "zero or non-finite state vector".into(),
            ));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { spin, amplitudes })
    }

    /// Dicke state `|S,m⟩` with `m = two_m / 2`.
    pub fn dicke(spin: SpinLength, two_m: i64) -> Result<Self> {
        let two_s = i64::from(spin.two_s());
        if two_m.abs() > two_s || (two_m + two_s) % 2 != 0 {
            return domain(format!("m = {two_m}/2 is not a projection of spin {spin}"));
        }
        let mut amplitudes = vec![0.0; spin.dim()];
        amplitudes[((two_m + two_s) / 2) as usize] = 1.0;
        Ok(Self { spin, amplitudes })
    }

    /// Coherent spin state polarised along `+x` (binomial amplitudes).
    pub fn coherent_x(spin: SpinLength) -> Self {
        let two_s = f64::from(spin.two_s());
        let mut amplitudes = Vec::with_capacity(spin.dim());
        let mut a = 1.0f64;
        for k in 0..spin.dim() {
            amplitudes.push(a);
            a *= ((two_s - k as f64) / (k as f64 + 1.0)).sqrt();
        }
        Self::normalized(spin, amplitudes).expect("binomial amplitudes are nonzero")
    }

    pub fn spin(&self) -> SpinLength {
        self.spin
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    /// `⟨ψ|A|ψ⟩` for a tridiagonal operator of matching dimension.
    pub fn expectation(&self, op: &TridiagonalOperator) -> f64 {
        op.apply(&self.amplitudes)
            .iter()
            .zip(&self.amplitudes)
            .map(|(x, y)| x * y)
            .sum()
    }
}

/// First and second moments of a real pure state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateMoments {
    pub mean_sx: f64,
    pub mean_sz: f64,
    pub var_sz: f64,
    pub mean_sy2: f64,
    pub mean_sx2: f64,
    pub mean_sz2: f64,
    /// `½⟨S_x S_z + S_z S_x⟩`.
    pub mean_sxsz_sym: f64,
}

/// Moments via ladder-operator algebra on real amplitudes.
///
/// `⟨S_y⟩` vanishes identically for real states, so it is not stored.
pub fn moments(state: &SpinState) -> StateMoments {
    let spin = state.spin;
    let a = &state.amplitudes;
    let n = a.len();

    let mut mean_sz = 0.0;
    let mut mean_sz2 = 0.0;
    for (k, ak) in a.iter().enumerate() {
        let m = spin.m(k);
        let p = ak * ak;
        mean_sz += m * p;
        mean_sz2 += m * m * p;
    }

    let mut mean_sx = 0.0;
    let mut mean_sxsz_sym = 0.0;
    for k in 0..n - 1 {
        let c = spin.raising(k);
        let cross = a[k] * a[k + 1] * c;
        mean_sx += cross;
        mean_sxsz_sym += 0.5 * cross * (spin.m(k) + spin.m(k + 1));
    }

    // ⟨S₊²⟩ = ⟨S₋²⟩ for real amplitudes
    let mut raise2 = 0.0;
    for k in 0..n.saturating_sub(2) {
        raise2 += a[k] * a[k + 2] * spin.raising(k) * spin.raising(k + 1);
    }
    let transverse = spin.casimir() - mean_sz2;

    StateMoments {
        mean_sx,
        mean_sz,
        var_sz: (mean_sz2 - mean_sz * mean_sz).max(0.0),
        mean_sy2: 0.5 * (transverse - raise2),
        mean_sx2: 0.5 * (transverse + raise2),
        mean_sz2,
        mean_sxsz_sym,
    }
}

/// Quantum Fisher information of a pure state for rotations generated by `S_y`,
/// `4 Var[S_y]`.
pub fn qfi_pure(state: &SpinState) -> f64 {
    4.0 * moments(state).mean_sy2
}

/// Squeezing coefficient `N Var[S_z]/⟨S_x⟩²` of a pure spin-`S` state with `N = 2S`.
pub fn state_xi2(state: &SpinState) -> Result<f64> {
    let mo = moments(state);
    if mo.mean_sx == 0.0 {
        return Err(Error::DegenerateInput(
            "unpolarized state, <S_x> = 0".into(),
        ));
    }
    Ok(f64::from(state.spin.two_s()) * mo.var_sz / (mo.mean_sx * mo.mean_sx))
}
