//! Parameter sweeps over the handover offset, time-to-trigger, scheduled
//! beams per cell and UE scheme.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::kpi::{KpiReport, KpiRow, CSV_HEADER};
use crate::scenario::{ScenarioConfig, UeModel};

use super::sim::{run_batch, RunOptions};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    pub o_a3_db: Vec<f64>,
    pub t_ttt_ms: Vec<f64>,
    pub k_b: Vec<usize>,
    pub schemes: Vec<UeModel>,
    pub seeds: Vec<u64>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            o_a3_db: vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
            t_ttt_ms: vec![80.0, 160.0, 240.0, 320.0],
            k_b: vec![1, 2, 4],
            schemes: UeModel::ALL.to_vec(),
            seeds: vec![1],
        }
    }
}

/// One grid point, without the seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub scheme: UeModel,
    pub k_b: usize,
    pub o_a3_db: f64,
    pub t_ttt_ms: f64,
}

impl SweepPoint {
    pub fn apply(&self, base: &ScenarioConfig) -> ScenarioConfig {
        ScenarioConfig {
            ue_model: self.scheme,
            k_b: self.k_b,
            o_a3_db: self.o_a3_db,
            t_ttt_ms: self.t_ttt_ms,
            ..base.clone()
        }
    }
}

impl SweepSpec {
    /// Grid points ordered by scheme, k_b, o_a3, t_ttt.
    pub fn points(&self) -> Vec<SweepPoint> {
        let mut out = Vec::new();
        for &scheme in &self.schemes {
            for &k_b in &self.k_b {
                for &o_a3_db in &self.o_a3_db {
                    for &t_ttt_ms in &self.t_ttt_ms {
                        out.push(SweepPoint {
                            scheme,
                            k_b,
                            o_a3_db,
                            t_ttt_ms,
                        });
                    }
                }
            }
        }
        out
    }
}

/// Seed-averaged KPIs of one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(flatten)]
    pub kpi: KpiRow,
    pub n_seeds: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub runs: Vec<KpiReport>,
}

fn mean(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let (mut s, mut n) = (0.0, 0usize);
    for v in values.flatten() {
        s += v;
        n += 1;
    }
    (n > 0).then(|| s / n as f64)
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.kpi.to_csv());
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep serializes")
    }
}

/// Run every grid point for every seed. All points of one seed run as one
/// batch over a shared channel realisation. A point whose configuration is
/// invalid gets an error row; the rest of the sweep still runs.
pub fn run_sweep(
    base: &ScenarioConfig,
    spec: &SweepSpec,
    parallelism: usize,
) -> Result<SweepResult> {
    let points = spec.points();
    let configs: Vec<ScenarioConfig> = points.iter().map(|p| p.apply(base)).collect();
    let errors: Vec<Option<String>> = configs
        .iter()
        .map(|c| c.validate().err().map(|e| e.to_string()))
        .collect();
    let valid: Vec<usize> = (0..configs.len())
        .filter(|&i| errors[i].is_none())
        .collect();
    let batch: Vec<ScenarioConfig> = valid.iter().map(|&i| configs[i].clone()).collect();

    let opts = RunOptions {
        parallelism,
        ..Default::default()
    };
    // per_point[i] collects the reports of point i across seeds.
    let mut per_point: Vec<Vec<KpiReport>> = vec![Vec::new(); configs.len()];
    let mut runs = Vec::new();
    if !batch.is_empty() {
        for &seed in &spec.seeds {
            let out = run_batch(&batch, seed, &opts)?;
            for (k, run) in out.runs.into_iter().enumerate() {
                per_point[valid[k]].push(run.report.clone());
                runs.push(run.report);
            }
        }
    }

    let rows = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let reps = &per_point[i];
            SweepRow {
                kpi: KpiRow {
                    scheme: p.scheme,
                    k_b: p.k_b,
                    o_a3_db: p.o_a3_db,
                    t_ttt_ms: p.t_ttt_ms,
                    pct_success: mean(reps.iter().map(|r| r.pct_success)),
                    pct_fast_ho: mean(reps.iter().map(|r| r.pct_fast_ho)),
                    pct_failure: mean(reps.iter().map(|r| r.pct_failure)),
                    outage_pct: mean(reps.iter().map(|r| Some(r.outage_pct))),
                },
                n_seeds: reps.len(),
                error: errors[i].clone(),
            }
        })
        .collect();
    Ok(SweepResult { rows, runs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_size_and_order() {
        let spec = SweepSpec::default();
        let pts = spec.points();
        assert_eq!(pts.len(), 216);
        assert_eq!(pts[0].scheme, UeModel::Isotropic);
        assert_eq!(
            (pts[0].k_b, pts[0].o_a3_db, pts[0].t_ttt_ms),
            (1, 1.0, 80.0)
        );
        assert_eq!(pts[1].t_ttt_ms, 160.0);
        assert_eq!(pts[4].o_a3_db, 2.0);
        assert_eq!(pts[24].k_b, 2);
        assert_eq!(pts[72].scheme, UeModel::MpueA3);
    }

    #[test]
    fn figure_grid() {
        let spec = SweepSpec {
            k_b: vec![4],
            schemes: vec![UeModel::MpueA3, UeModel::MpueA1],
            ..Default::default()
        };
        assert_eq!(spec.points().len(), 48);
    }
}
