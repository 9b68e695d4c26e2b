//! Smallest eigenpair of a real symmetric tridiagonal matrix.
//!
//! The eigenvalue is bracketed by Sturm-sequence bisection, then the vector is
//! obtained by inverse iteration with a pivoted tridiagonal LU factorisation.

use super::{SpinState, TridiagonalOperator};
use crate::error::{Error, Result};

const BISECTION_CAP: usize = 100;
const INVERSE_ITERATION_CAP: usize = 8;
const RESIDUAL_TOLERANCE: f64 = 1e-12;

/// Ground energy and normalised ground state of `op`.
///
/// The global sign is fixed so that the largest-magnitude amplitude (first one
/// on ties) is positive. For a diagonal operator with a degenerate minimum the
/// equal-weight combination of the degenerate basis states is returned.
pub fn ground_state(op: &TridiagonalOperator) -> Result<(f64, SpinState)> {
    let d = op.diagonal();
    let e = op.off_diagonal();
    let norm = op.norm_inf().max(f64::MIN_POSITIVE);
    let spin = op.spin();

    if e.iter().all(|&v| v == 0.0) {
        let emin = d.iter().copied().fold(f64::INFINITY, f64::min);
        let tie = 4.0 * f64::EPSILON * norm;
        let amps = d
            .iter()
            .map(|&v| if v - emin <= tie { 1.0 } else { 0.0 })
            .collect();
        return Ok((emin, SpinState::normalized(spin, amps)?));
    }

    let energy = smallest_eigenvalue(d, e, norm)?;
    let mut vector = inverse_iteration(op, energy, norm)?;
    fix_sign(&mut vector);
    Ok((energy, SpinState::normalized(spin, vector)?))
}

/// Number of eigenvalues strictly below `sigma`.
fn sturm_count(d: &[f64], e: &[f64], sigma: f64, pivmin: f64) -> usize {
    // tiny pivots are replaced by −pivmin before their sign is counted
    let guard = |q: f64| if q.abs() < pivmin { -pivmin } else { q };
    let mut q = guard(d[0] - sigma);
    let mut count = usize::from(q <= 0.0);
    for i in 1..d.len() {
        q = guard(d[i] - sigma - e[i - 1] * e[i - 1] / q);
        count += usize::from(q <= 0.0);
    }
    count
}

fn smallest_eigenvalue(d: &[f64], e: &[f64], norm: f64) -> Result<f64> {
    let n = d.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let mut r = 0.0;
        if i > 0 {
            r += e[i - 1].abs();
        }
        if i + 1 < n {
            r += e[i].abs();
        }
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    let emax2 = e.iter().map(|v| v * v).fold(1.0, f64::max);
    let pivmin = f64::MIN_POSITIVE * emax2;
    // widen so that the bracket is strict
    let pad = 2.0 * f64::EPSILON * norm + pivmin;
    lo -= pad;
    hi += pad;

    let floor = f64::EPSILON * norm;
    for _ in 0..BISECTION_CAP {
        let width = hi - lo;
        let tol = (2.0 * f64::EPSILON * lo.abs().max(hi.abs())).max(floor);
        if width <= tol {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        if sturm_count(d, e, mid, pivmin) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::NonConvergence {
        routine: "sturm bisection",
        iterations: BISECTION_CAP,
    })
}

/// LU factors of `T − σI` with row interchanges (LAPACK `gttrf` layout).
struct TridiagonalLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagonalLu {
    fn factor(op: &TridiagonalOperator, sigma: f64, pivot_floor: f64) -> Self {
        let n = op.dim();
        let mut dl = op.off_diagonal().to_vec();
        let mut du = op.off_diagonal().to_vec();
        let mut d: Vec<f64> = op.diagonal().iter().map(|v| v - sigma).collect();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n - 1];

        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        for p in d.iter_mut() {
            if p.abs() < pivot_floor {
                *p = if *p < 0.0 { -pivot_floor } else { pivot_floor };
            }
        }
        Self {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

fn normalize(v: &mut [f64]) {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale > 0.0 && scale.is_finite() {
        v.iter_mut().for_each(|x| *x /= scale);
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

fn inverse_iteration(op: &TridiagonalOperator, energy: f64, norm: f64) -> Result<Vec<f64>> {
    let n = op.dim();
    let lu = TridiagonalLu::factor(op, energy, f64::EPSILON * norm);
    // deterministic start vector without special symmetry
    let mut v: Vec<f64> = (0..n)
        .map(|k| 0.5 + (0.618_033_988_749_895 * (k as f64 + 1.0)).fract())
        .collect();
    normalize(&mut v);

    let tol = RESIDUAL_TOLERANCE * norm.max(1.0);
    for _ in 0..INVERSE_ITERATION_CAP {
        lu.solve(&mut v);
        if v.iter().any(|x| !x.is_finite()) {
            break;
        }
        normalize(&mut v);
        let hv = op.apply(&v);
        let residual = hv
            .iter()
            .zip(&v)
            .map(|(h, x)| (h - energy * x).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= tol {
            return Ok(v);
        }
    }
    Err(Error::NonConvergence {
        routine: "inverse iteration",
        iterations: INVERSE_ITERATION_CAP,
    })
}

fn fix_sign(v: &mut [f64]) {
    let amax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(lead) = v.iter().find(|x| x.abs() >= amax * (1.0 - 1e-9)) {
        if *lead < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_core::{build_hamiltonian, build_sx, moments, SpinLength};

    fn spin(two_s: u32) -> SpinLength {
        SpinLength::new(two_s).unwrap()
    }

    #[test]
    fn spin_half_exact_midpoint() {
        // σ = 1/4 makes the first Sturm pivot exactly zero
        for &lambda in &[1e-4, 0.3, 25.0] {
            let (energy, st) = ground_state(&build_hamiltonian(lambda, spin(1)).unwrap()).unwrap();
            assert!((energy - (0.25 - 0.5 * lambda)).abs() < 1e-14);
            let h = std::f64::consts::FRAC_1_SQRT_2;
            assert!((st.amplitudes()[0].abs() - h).abs() < 1e-12);
        }
    }

    #[test]
    fn spin_one_closed_form_energy() {
        for &lambda in &[1e-3, 0.1, 0.5, 1.0, 3.0, 40.0] {
            let (energy, _) = ground_state(&build_hamiltonian(lambda, spin(2)).unwrap()).unwrap();
            let exact = 0.5 * (1.0 - (1.0 + 4.0 * lambda * lambda).sqrt());
            assert!(
                (energy - exact).abs() < 1e-12,
                "lambda {lambda}: {energy} vs {exact}"
            );
        }
    }

    #[test]
    fn unperturbed_integer_spin_gives_twin_fock() {
        let (energy, state) = ground_state(&build_hamiltonian(0.0, spin(2)).unwrap()).unwrap();
        assert_eq!(energy, 0.0);
        assert_eq!(state.amplitudes(), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn unperturbed_half_integer_spin_gives_symmetric_pair() {
        let (energy, state) = ground_state(&build_hamiltonian(0.0, spin(3)).unwrap()).unwrap();
        assert_eq!(energy, 0.25);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for (a, b) in state.amplitudes().iter().zip([0.0, h, h, 0.0]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn sign_convention_leading_amplitude_positive() {
        for two_s in 1..8 {
            let (_, st) = ground_state(&build_hamiltonian(0.7, spin(two_s)).unwrap()).unwrap();
            let a = st.amplitudes();
            let amax = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let lead = a.iter().find(|x| x.abs() >= amax * (1.0 - 1e-9)).unwrap();
            assert!(*lead > 0.0);
        }
    }

    #[test]
    fn coherent_state_from_negative_sx() {
        let (energy, st) = ground_state(&build_sx(spin(10)).scaled(-1.0)).unwrap();
        assert!((energy + 5.0).abs() < 1e-12);
        let mo = moments(&st);
        assert!((mo.mean_sx - 5.0).abs() < 1e-10);
        assert!((mo.var_sz - 2.5).abs() < 1e-10);
    }

    #[test]
    fn residual_small_for_large_multiplier() {
        let op = build_hamiltonian(1e6, spin(40)).unwrap();
        let (energy, st) = ground_state(&op).unwrap();
        let hv = op.apply(st.amplitudes());
        let r: f64 = hv
            .iter()
            .zip(st.amplitudes())
            .map(|(h, x)| (h - energy * x).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!(r <= 1e-12 * op.norm_inf());
    }
}
