//! Comparison of an observed run with the blowup theorem.

use serde::{Deserialize, Serialize};

use crate::characteristics::{Level, RunStatus};
use crate::error::{Error, Result};
use crate::gas::GasModel;
use crate::initial::ledger::{tilde_exponent, ConstantsLedger};
use crate::initial::AssumptionReport;
use crate::riccati::blowup_time_bound;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    TheoremConsistent,
    /// The theorem's hypothesis held and the run stayed smooth (or the
    /// rarefactive assumptions held and the run blew up).
    CounterexampleCandidate,
    /// The run lost the supersonic regime before anything could be decided.
    Inconclusive,
    /// Neither theorem applies to this data.
    InconclusiveByTheorem,
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::TheoremConsistent => "theorem-consistent",
            Classification::CounterexampleCandidate => "counterexample-candidate",
            Classification::Inconclusive => "inconclusive",
            Classification::InconclusiveByTheorem => "inconclusive-by-theorem",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupComparison {
    pub horizon: f64,
    /// 𝒩(T) at the horizon.
    pub threshold: f64,
    pub min_alpha0: f64,
    pub min_beta0: f64,
    /// Node where min(α0, β0) is attained.
    pub r_star: f64,
    pub hypothesis_met: bool,
    /// T* from the tilde-weighted value at r*, when the hypothesis holds.
    pub t_star: Option<f64>,
    pub observed: Option<f64>,
    pub classification: Classification,
    /// Set for counterexample candidates: rerun at doubled resolution.
    pub rerun_doubled: bool,
}

/// Classifies a run against the theorem at horizon `horizon` (0 < T ≤ T0).
/// Endpoint nodes are excluded from the hypothesis since r* ranges over the
/// open interval.
#[allow(clippy::too_many_arguments)]
pub fn detect_blowup(
    level0: &Level,
    alpha0: &[f64],
    beta0: &[f64],
    gas: &GasModel,
    ledger: &ConstantsLedger,
    assumptions: &AssumptionReport,
    horizon: f64,
    status: &RunStatus,
) -> Result<BlowupComparison> {
    let n = level0.len();
    if alpha0.len() != n || beta0.len() != n {
        return Err(Error::InvalidConfig("initial gradients do not match the level".into()));
    }
    let threshold = ledger.n_of_t(horizon, gas)?;
    let interior = 1..n.saturating_sub(1);
    let min_alpha0 = interior.clone().map(|j| alpha0[j]).fold(f64::INFINITY, f64::min);
    let min_beta0 = interior.clone().map(|j| beta0[j]).fold(f64::INFINITY, f64::min);
    let j_star = interior
        .clone()
        .min_by(|&a, &b| alpha0[a].min(beta0[a]).total_cmp(&alpha0[b].min(beta0[b])))
        .unwrap_or(0);
    let r_star = level0.r[j_star];
    let theorem_applies = assumptions.a1_ok && assumptions.a2_ok;
    let hypothesis_met = theorem_applies && min_alpha0.min(min_beta0) <= -threshold;

    let t_star = if hypothesis_met {
        let h = level0.h(j_star, gas);
        let wt = h.powf(-tilde_exponent(gas.gamma()));
        let v = wt * alpha0[j_star].min(beta0[j_star]);
        Some(blowup_time_bound(v, ledger, gas)?)
    } else {
        None
    };

    let observed = status.blowup_time();
    let regime_lost = matches!(status, RunStatus::RegimeLoss { .. });
    let rarefactive = assumptions.all_ok(true);
    let classification = if hypothesis_met {
        match observed {
            Some(t) if t <= horizon * (1.0 + 1e-12) => Classification::TheoremConsistent,
            _ if regime_lost => Classification::Inconclusive,
            _ => Classification::CounterexampleCandidate,
        }
    } else if rarefactive {
        match (observed, regime_lost) {
            (Some(_), _) => Classification::CounterexampleCandidate,
            (None, true) => Classification::Inconclusive,
            (None, false) => Classification::TheoremConsistent,
        }
    } else if regime_lost {
        Classification::Inconclusive
    } else {
        Classification::InconclusiveByTheorem
    };
    Ok(BlowupComparison {
        horizon,
        threshold,
        min_alpha0,
        min_beta0,
        r_star,
        hypothesis_met,
        t_star,
        observed,
        classification,
        rerun_doubled: classification == Classification::CounterexampleCandidate,
    })
}
