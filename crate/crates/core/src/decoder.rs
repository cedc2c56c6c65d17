//! Multi-stage decoding over a dilution sequence with collective decimation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dilution_sequence, max_stage, DilutionSequence, PatternFamily, SurfaceCode};
use crate::mp::{run_mp, MpConfig, MpGraph, MpMode, PhiMode};
use crate::noise::{NoiseKind, Prior};
use crate::pauli::{syndrome, PauliConfig, Syndrome};

/// Iterations at stage `k`: `20k + 20`.
pub fn stage_iterations(k: usize) -> usize {
    20 * k + 20
}

/// Sum of the stage iterations over `k = 0..=K`, i.e. `10(K+1)(K+2)`.
pub fn max_iteration_budget(d: usize) -> usize {
    let k = max_stage(d);
    10 * (k + 1) * (k + 2)
}

pub fn default_pattern(kind: NoiseKind) -> PatternFamily {
    match kind {
        NoiseKind::Depolarizing => PatternFamily::DV,
        NoiseKind::SingleX => PatternFamily::CH,
    }
}

pub fn default_damping(kind: NoiseKind, d: usize) -> f64 {
    match (kind, d) {
        (NoiseKind::SingleX, 33) => 0.1,
        (NoiseKind::SingleX, 65) => 0.05,
        _ => 0.15,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecoderConfig {
    pub mode: MpMode,
    pub phi_mode: PhiMode,
    pub damping: f64,
    /// Run only the undiluted stage, with the whole budget.
    pub dilution: bool,
    /// Cap on the total number of iterations; defaults to `10(K+1)(K+2)`.
    pub budget: Option<usize>,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig {
            mode: MpMode::MinSum,
            phi_mode: PhiMode::Max,
            damping: 0.15,
            dilution: true,
            budget: None,
        }
    }
}

impl DecoderConfig {
    /// Iterations granted to each stage of a `K`-stage sequence.
    pub fn schedule(&self, k_max: usize) -> Vec<usize> {
        let full = 10 * (k_max + 1) * (k_max + 2);
        let budget = self.budget.unwrap_or(full);
        if !self.dilution {
            return vec![budget];
        }
        let mut left = budget;
        (0..=k_max)
            .map(|k| {
                let it = stage_iterations(k).min(left);
                left -= it;
                it
            })
            .collect()
    }

    fn mp(&self, max_iters: usize) -> MpConfig {
        MpConfig {
            mode: self.mode,
            damping: self.damping,
            max_iters,
            phi_mode: self.phi_mode,
            ..MpConfig::default()
        }
    }
}

/// Bookkeeping at the end of a non-final stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageBoundary {
    pub stage: usize,
    /// Accumulated frozen corrections after this stage.
    pub frozen: PauliConfig,
    /// Syndrome left for the remaining stages.
    pub residual: Syndrome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodeOutcome {
    pub estimate: PauliConfig,
    pub converged: bool,
    pub stage_of_convergence: Option<usize>,
    pub total_iterations: usize,
    pub per_stage_iterations: Vec<usize>,
    pub boundaries: Vec<StageBoundary>,
}

/// A dilution sequence compiled for repeated decoding.
#[derive(Debug, Clone)]
pub struct Decoder {
    pub code: SurfaceCode,
    pub sequence: DilutionSequence,
    pub config: DecoderConfig,
    graphs: Vec<MpGraph>,
}

impl Decoder {
    pub fn new(
        code: &SurfaceCode,
        sequence: DilutionSequence,
        config: DecoderConfig,
    ) -> Result<Self> {
        if sequence.d != code.d || sequence.stages.iter().any(|g| g.n() != code.n) {
            return Err(Error::Mismatch(format!(
                "sequence built for d={} does not match code of distance {}",
                sequence.d, code.d
            )));
        }
        config.mp(1).validate()?;
        let graphs = sequence.stages.iter().map(MpGraph::new).collect();
        Ok(Decoder {
            code: code.clone(),
            sequence,
            config,
            graphs,
        })
    }

    pub fn with_family(
        code: &SurfaceCode,
        family: PatternFamily,
        config: DecoderConfig,
    ) -> Result<Self> {
        Decoder::new(code, dilution_sequence(code, family), config)
    }

    pub fn graphs(&self) -> &[MpGraph] {
        &self.graphs
    }

    pub fn decode(&self, input: &Syndrome, prior: &Prior) -> Result<DecodeOutcome> {
        let n = self.code.n;
        if input.z_checks.len() != self.code.z_checks.len()
            || input.x_checks.len() != self.code.x_checks.len()
        {
            return Err(Error::LengthMismatch {
                expected: self.code.z_checks.len() + self.code.x_checks.len(),
                got: input.z_checks.len() + input.x_checks.len(),
            });
        }
        let schedule = self.config.schedule(self.sequence.k_max());
        let last = schedule.len() - 1;
        let mut residual = input.clone();
        let mut frozen = PauliConfig::identity(n);
        let mut per_stage = Vec::with_capacity(schedule.len());
        let mut boundaries = Vec::new();
        let mut total = 0;
        let mut stage_of_convergence = None;
        let mut estimate = frozen.clone();

        for (k, &iters) in schedule.iter().enumerate() {
            let graph = &self.graphs[k];
            let out = run_mp(graph, &residual, prior, &self.config.mp(iters), None)?;
            let used = out.converged_at.unwrap_or(iters);
            per_stage.push(used);
            total += used;
            if out.converged_at.is_some() || k == last {
                estimate = frozen.apply(&out.estimate)?;
                if out.converged_at.is_some() {
                    stage_of_convergence = Some(k);
                }
                break;
            }
            // decimate the qubits that leave the graph at the next stage
            let next = &self.graphs[k + 1];
            let mut frozen_now = PauliConfig::identity(n);
            for &q in &graph.active_list {
                if !next.active[q] {
                    frozen_now.x[q] = out.estimate.x[q];
                    frozen_now.z[q] = out.estimate.z[q];
                }
            }
            residual = residual.xor(&syndrome(&self.code, &frozen_now)?);
            frozen = frozen.apply(&frozen_now)?;
            boundaries.push(StageBoundary {
                stage: k,
                frozen: frozen.clone(),
                residual: residual.clone(),
            });
        }

        let converged = syndrome(&self.code, &estimate)? == *input;
        Ok(DecodeOutcome {
            estimate,
            converged,
            stage_of_convergence: if converged {
                stage_of_convergence
            } else {
                None
            },
            total_iterations: total,
            per_stage_iterations: per_stage,
            boundaries,
        })
    }
}

pub fn decode(
    code: &SurfaceCode,
    sequence: &DilutionSequence,
    input: &Syndrome,
    prior: &Prior,
    config: &DecoderConfig,
) -> Result<DecodeOutcome> {
    Decoder::new(code, sequence.clone(), config.clone())?.decode(input, prior)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{prior_of, NoiseModel};
    use crate::pauli::classify_residual;

    #[test]
    fn budgets() {
        assert_eq!(max_iteration_budget(5), 120);
        assert_eq!(max_iteration_budget(2), 20);
        assert_eq!(max_iteration_budget(65), 560);
        assert_eq!(max_iteration_budget(17), 300);
        let cfg = DecoderConfig::default();
        assert_eq!(cfg.schedule(2), vec![20, 40, 60]);
        let cfg = DecoderConfig {
            dilution: false,
            ..DecoderConfig::default()
        };
        assert_eq!(cfg.schedule(4), vec![300]);
        let cfg = DecoderConfig {
            budget: Some(70),
            ..DecoderConfig::default()
        };
        assert_eq!(cfg.schedule(2), vec![20, 40, 10]);
    }

    #[test]
    fn zero_syndrome() {
        let code = SurfaceCode::new(5).unwrap();
        let prior = prior_of(&NoiseModel::depolarizing(0.05).unwrap()).unwrap();
        let dec = Decoder::with_family(&code, PatternFamily::DV, DecoderConfig::default()).unwrap();
        let out = dec.decode(&Syndrome::zero(&code), &prior).unwrap();
        assert!(out.converged);
        assert!(out.estimate.is_identity());
        assert_eq!(out.stage_of_convergence, Some(0));
        assert_eq!(out.total_iterations, 1);
    }

    #[test]
    fn every_single_x_at_d3_is_corrected() {
        let code = SurfaceCode::new(3).unwrap();
        let prior = prior_of(&NoiseModel::single_x(0.05).unwrap()).unwrap();
        let dec = Decoder::with_family(&code, PatternFamily::CH, DecoderConfig::default()).unwrap();
        for q in 0..code.n {
            let e = PauliConfig::x_on(code.n, &[q]);
            let out = dec.decode(&syndrome(&code, &e).unwrap(), &prior).unwrap();
            assert!(out.converged, "qubit {q}");
            let class = classify_residual(&code, &out.estimate.apply(&e).unwrap()).unwrap();
            assert!(!class.is_logical_error(), "qubit {q}");
        }
    }

    #[test]
    fn mismatched_sequence_rejected() {
        let c3 = SurfaceCode::new(3).unwrap();
        let c5 = SurfaceCode::new(5).unwrap();
        let seq = dilution_sequence(&c5, PatternFamily::DV);
        assert!(Decoder::new(&c3, seq, DecoderConfig::default()).is_err());
    }
}
