use serde::Serialize;

use super::{
    depth_bound_state_independent, depth_detect, g2_two_mode, gk2_from_modes, gk2_symmetric,
    max_entangled_modes, mode_insep_k, mode_sep_threshold, steering_r2, steering_sm, xi2,
    CollectiveMoments, DepthMethod, ModeMomentSet, MAX_ENUMERATED_MODES,
};
use crate::error::Result;
use crate::to_db;

/// The SM depth scan costs one root-find per group size; above this particle
/// number it is skipped and reported as an error entry.
pub const SM_DEPTH_MAX_PARTICLES: u64 = 400;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SteeringFlags {
    /// `ℛ² < 1`
    pub r2_violated: Option<bool>,
    /// SM steering of mode B by mode A.
    pub sm_b_by_a: Option<bool>,
    /// SM steering of mode A by mode B.
    pub sm_a_by_b: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Threshold {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GkEntry {
    pub k: usize,
    pub value: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct WitnessReport {
    pub n_particles: u64,
    pub xi2: Option<f64>,
    pub xi2_db: Option<f64>,
    pub depth_state_independent: Option<u64>,
    pub depth_fisher: Option<u64>,
    pub depth_sm: Option<u64>,
    pub modes: Option<usize>,
    pub mode_insep_k: Option<usize>,
    /// `𝒢_k^M²` from `ξ²` for a symmetric split, `k = 2..=M`.
    pub gk2_symmetric: Vec<GkEntry>,
    /// `𝒢_k^M²` evaluated from the supplied per-mode moments.
    pub gk2_modes: Vec<GkEntry>,
    pub max_entangled_modes: Option<u64>,
    pub g2: Option<f64>,
    pub r2: Option<f64>,
    pub steering: SteeringFlags,
    pub thresholds: Vec<Threshold>,
    pub errors: Vec<FieldError>,
}

impl WitnessReport {
    fn record<T>(&mut self, field: &str, result: Result<T>) -> Option<T> {
        match result {
            Ok(v) => Some(v),
            Err(e) => {
                self.errors.push(FieldError {
                    field: field.to_string(),
                    message: e.to_string(),
                });
                None
            }
        }
    }

    fn threshold(&mut self, name: impl Into<String>, value: f64) {
        self.thresholds.push(Threshold {
            name: name.into(),
            value,
        });
    }
}

/// Evaluates every applicable criterion. Failures are collected per field in
/// `errors` and never abort the remaining fields.
///
/// The mode count is taken from `modes` when given, otherwise from `mm`.
pub fn build_report(
    m: &CollectiveMoments,
    mm: Option<&ModeMomentSet>,
    modes: Option<usize>,
) -> WitnessReport {
    let n = m.n_particles();
    let mut report = WitnessReport {
        n_particles: n,
        ..WitnessReport::default()
    };
    report.threshold("separable_xi2", 1.0);

    let xi = report.record("xi2", xi2(m));
    report.xi2 = xi;
    report.xi2_db = xi.map(to_db);

    if xi.is_some() {
        report.depth_state_independent = report.record(
            "depth_state_independent",
            depth_detect(m, DepthMethod::Tight),
        );
        report.depth_fisher = report.record("depth_fisher", depth_detect(m, DepthMethod::Fisher));
        if let Some(d) = report.depth_state_independent {
            if d > 1 {
                if let Ok(b) = depth_bound_state_independent(n, d - 1) {
                    report.threshold(format!("tight_bound_p{}", d - 1), b);
                }
            }
        }
    }
    if n > SM_DEPTH_MAX_PARTICLES {
        report.errors.push(FieldError {
            field: "depth_sm".into(),
            message: format!("skipped: N = {n} exceeds {SM_DEPTH_MAX_PARTICLES}"),
        });
    } else {
        report.depth_sm = report.record("depth_sm", depth_detect(m, DepthMethod::Sm));
    }

    if let Some(v) = xi {
        report.max_entangled_modes = report.record("max_entangled_modes", max_entangled_modes(v));
    }

    let m_count = modes.or_else(|| mm.map(ModeMomentSet::modes));
    report.modes = m_count;
    if let (Some(mc), Some(v)) = (m_count, xi) {
        if mc >= 2 {
            report.mode_insep_k = mode_insep_k(v, mc);
            for k in 2..=mc {
                let threshold = mode_sep_threshold(mc, k).expect("k in range");
                if let Some(value) = report.record("gk2_symmetric", gk2_symmetric(v, mc, k)) {
                    report.gk2_symmetric.push(GkEntry {
                        k,
                        value,
                        threshold,
                    });
                }
            }
        }
    }

    if let Some(mm) = mm {
        add_mode_fields(&mut report, m, mm);
    }
    report
}

fn add_mode_fields(report: &mut WitnessReport, m: &CollectiveMoments, mm: &ModeMomentSet) {
    let mc = mm.modes();
    if mc == 2 {
        report.g2 = report.record("g2", g2_two_mode(mm));
        report.r2 = report.record("r2", steering_r2(mm));
        report.steering.r2_violated = report.r2.map(|r| r < 1.0);
        report.threshold("steering_r2", 1.0);

        let n_modes: Vec<u64> = mm
            .pi()
            .iter()
            .map(|p| (p * mm.n_total() as f64).round() as u64)
            .collect();
        let n_total = Some(m.n_particles());
        let b = steering_sm(m.var_sz(), mm.mean_sx()[1], n_modes[1], n_total);
        report.steering.sm_b_by_a = report.record("steering_sm_b_by_a", b).map(|s| s.violated);
        let a = steering_sm(m.var_sz(), mm.mean_sx()[0], n_modes[0], n_total);
        report.steering.sm_a_by_b = report.record("steering_sm_a_by_b", a).map(|s| s.violated);
    }
    if mm.cov_sy().is_some() && mc <= MAX_ENUMERATED_MODES {
        for k in 2..=mc {
            let threshold = 1.0;
            if let Some((value, _)) = report.record("gk2_modes", gk2_from_modes(mm, k)) {
                report.gk2_modes.push(GkEntry {
                    k,
                    value,
                    threshold,
                });
            }
        }
    }
}
