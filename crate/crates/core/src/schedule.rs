//! Non-preemptive schedules on identical machines, greedy list scheduling and
//! the objectives evaluated on them.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{DeterministicInstance, Job};

/// Relative tolerance used when checking that a machine runs without gaps.
const GAP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScheduledJob {
    pub machine: usize,
    pub start: f64,
    pub completion: f64,
}

/// Absolute start and completion times for every job, plus per-machine sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    jobs: Vec<Job>,
    sequences: Vec<Vec<usize>>,
    entries: Vec<ScheduledJob>,
}

fn check_permutation(n: usize, order: &[usize]) -> Result<()> {
    if order.len() != n {
        return Err(Error::InvalidInstance(format!(
            "priority list has {} entries for {n} jobs",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &j in order {
        if j >= n || std::mem::replace(&mut seen[j], true) {
            return Err(Error::InvalidInstance(format!(
                "priority list is not a permutation (bad or repeated index {j})"
            )));
        }
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha must lie in [0, 1], got {alpha}")))
    }
}

/// Greedy list scheduling: each job in `priority` starts on the machine that
/// becomes free first (lowest index on ties) without deliberate idling.
pub fn list_schedule(inst: &DeterministicInstance, priority: &[usize]) -> Result<Schedule> {
    check_permutation(inst.len(), priority)?;
    let m = inst.machines();
    let mut free_at = vec![0.0_f64; m];
    let mut sequences = vec![Vec::new(); m];
    let mut entries = vec![
        ScheduledJob {
            machine: 0,
            start: 0.0,
            completion: 0.0
        };
        inst.len()
    ];
    for &j in priority {
        let machine = (0..m)
            .min_by(|&a, &b| free_at[a].total_cmp(&free_at[b]))
            .expect("at least one machine");
        let start = free_at[machine];
        let completion = start + inst.jobs()[j].ptime;
        free_at[machine] = completion;
        sequences[machine].push(j);
        entries[j] = ScheduledJob {
            machine,
            start,
            completion,
        };
    }
    Ok(Schedule {
        jobs: inst.jobs().to_vec(),
        sequences,
        entries,
    })
}

/// List scheduling in Smith order.
pub fn wspt_schedule(inst: &DeterministicInstance) -> Schedule {
    list_schedule(inst, &inst.smith_order()).expect("smith order is a permutation")
}

impl Schedule {
    /// Runs every machine's sequence back to back from time zero.
    pub fn from_sequences(inst: &DeterministicInstance, sequences: Vec<Vec<usize>>) -> Result<Self> {
        if sequences.len() != inst.machines() {
            return Err(Error::InvalidInstance(format!(
                "{} machine sequences for {} machines",
                sequences.len(),
                inst.machines()
            )));
        }
        let flat: Vec<usize> = sequences.iter().flatten().copied().collect();
        check_permutation(inst.len(), &flat)?;
        let mut entries = vec![
            ScheduledJob {
                machine: 0,
                start: 0.0,
                completion: 0.0
            };
            inst.len()
        ];
        for (machine, seq) in sequences.iter().enumerate() {
            let mut t = 0.0;
            for &j in seq {
                let completion = t + inst.jobs()[j].ptime;
                entries[j] = ScheduledJob {
                    machine,
                    start: t,
                    completion,
                };
                t = completion;
            }
        }
        Ok(Self {
            jobs: inst.jobs().to_vec(),
            sequences,
            entries,
        })
    }

    pub fn machines(&self) -> usize {
        self.sequences.len()
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn sequences(&self) -> &[Vec<usize>] {
        &self.sequences
    }

    pub fn entries(&self) -> &[ScheduledJob] {
        &self.entries
    }

    pub fn entry(&self, job: usize) -> ScheduledJob {
        self.entries[job]
    }

    /// Time at which `job` has received `alpha * p_j` units of processing.
    pub fn alpha_point(&self, job: usize, alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        let e = self
            .entries
            .get(job)
            .ok_or_else(|| Error::InvalidInstance(format!("job index {job} out of range")))?;
        Ok(e.start + alpha * self.jobs[job].ptime)
    }

    /// `Σ w_j C_j(α)`.
    pub fn weighted_alpha_objective(&self, alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        Ok(self
            .jobs
            .iter()
            .zip(&self.entries)
            .map(|(job, e)| job.weight * (e.start + alpha * job.ptime))
            .sum())
    }

    pub fn weighted_completion(&self) -> f64 {
        self.weighted_alpha_objective(1.0).expect("alpha 1 is admissible")
    }

    pub fn machine_loads(&self) -> Vec<f64> {
        self.sequences
            .iter()
            .map(|seq| seq.iter().map(|&j| self.jobs[j].ptime).sum())
            .collect()
    }

    pub fn makespan(&self) -> f64 {
        self.entries.iter().map(|e| e.completion).fold(0.0, f64::max)
    }

    /// Whether some machine waits before one of its jobs.
    pub fn has_idle_time(&self) -> bool {
        self.sequences.iter().any(|seq| {
            let mut t = 0.0_f64;
            for &j in seq {
                let e = self.entries[j];
                if e.start - t > GAP_TOL * (1.0 + t.abs()) {
                    return true;
                }
                t = e.completion;
            }
            false
        })
    }

    /// `½ Σ M_i²`. For unit-ratio instances without idle time this equals `Σ p_j C_j(½)`.
    pub fn halfpoint_load_value(&self) -> Result<f64> {
        if self.has_idle_time() {
            return Err(Error::Contract(
                "load identity requires a schedule without idle time".into(),
            ));
        }
        Ok(0.5 * self.machine_loads().iter().map(|l| l * l).sum::<f64>())
    }

    /// CSV with header `job_id,machine,start,completion`, machines numbered from 1.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("job_id,machine,start,completion\n");
        for (seq_machine, seq) in self.sequences.iter().enumerate() {
            for &j in seq {
                let e = self.entries[j];
                debug_assert_eq!(e.machine, seq_machine);
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    self.jobs[j].id,
                    e.machine + 1,
                    e.start,
                    e.completion
                );
            }
        }
        out
    }
}
