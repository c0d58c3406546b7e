use serde::{Deserialize, Serialize};

use super::power::{check_operator, split_coefficient};
use super::{step, Certificate, SolveOptions, SolveReport, Trace};
use crate::error::{check_dim, Error, Result};
use crate::tensor::{Bilinear, StochasticVector};

/// Reinforcement weights `c_t`, `t = 0, 1, ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ScheduleC {
    Constant {
        c: f64,
    },
    /// `c_t = 1 / (t + 1)`.
    Harmonic,
    /// Explicit values; the last one is repeated once the list runs out.
    /// `divergent` declares `sum_t c_t = inf` for the extended sequence.
    Custom {
        values: Vec<f64>,
        divergent: bool,
    },
}

impl ScheduleC {
    /// Parses `constant:<c>` or `harmonic`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("harmonic") {
            return Ok(ScheduleC::Harmonic);
        }
        if let Some(c) = s.strip_prefix("constant:") {
            let c: f64 = c
                .parse()
                .map_err(|e| Error::invalid(format!("bad schedule constant `{c}`: {e}")))?;
            let sched = ScheduleC::Constant { c };
            sched.validate()?;
            return Ok(sched);
        }
        Err(Error::invalid(format!(
            "unknown schedule `{s}`, expected constant:<c> or harmonic"
        )))
    }

    pub fn validate(&self) -> Result<()> {
        let in_unit = |c: f64| (0.0..=1.0).contains(&c);
        match self {
            ScheduleC::Constant { c } if !in_unit(*c) => {
                Err(Error::invalid(format!("schedule value {c} outside [0, 1]")))
            }
            ScheduleC::Custom { values, .. } => {
                if values.is_empty() {
                    return Err(Error::invalid("custom schedule is empty"));
                }
                if let Some(c) = values.iter().find(|c| !in_unit(**c)) {
                    return Err(Error::invalid(format!("schedule value {c} outside [0, 1]")));
                }
                if let Some(t) = values.windows(2).position(|w| w[1] > w[0]) {
                    return Err(Error::invalid(format!(
                        "schedule increases at t = {}",
                        t + 1
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn value(&self, t: usize) -> f64 {
        match self {
            ScheduleC::Constant { c } => *c,
            ScheduleC::Harmonic => 1.0 / (t as f64 + 1.0),
            ScheduleC::Custom { values, .. } => values[t.min(values.len() - 1)],
        }
    }

    /// Whether `sum_t c_t` diverges, as declared by the schedule kind.
    pub fn is_divergent(&self) -> bool {
        match self {
            ScheduleC::Constant { c } => *c > 0.0,
            ScheduleC::Harmonic => true,
            ScheduleC::Custom { divergent, .. } => *divergent,
        }
    }

    /// Lower bound `inf_t c_t`.
    pub fn lower_bound(&self) -> f64 {
        match self {
            ScheduleC::Constant { c } => *c,
            ScheduleC::Harmonic => 0.0,
            ScheduleC::Custom { values, .. } => *values.last().unwrap(),
        }
    }

    /// Contraction factor over two steps for `c_t >= c > 0`:
    /// `max(r + l (l + r), 1 - c (l + r))`.
    pub fn two_step_rate(&self, left: f64, right: f64) -> Option<f64> {
        let c = self.lower_bound();
        (c > 0.0 && left + right < 1.0)
            .then(|| (right + left * (left + right)).max(1.0 - c * (left + right)))
    }
}

/// Reinforced walk `x_{t+1} = P x_t y_t`, `y_{t+1} = c_t x_t + (1 - c_t) y_t`.
///
/// The recorded residual is `max(||x_{t+1} - x_t||_1, ||x_{t+1} - y_{t+1}||_1)`:
/// with vanishing `c_t` the `x` steps become small long before `y` reaches
/// the fixed point. The certificate `T_L + T_R` is attached only for
/// schedules with divergent sum.
pub fn vrrw<B: Bilinear + ?Sized>(
    p: &B,
    x0: &StochasticVector,
    y0: &StochasticVector,
    schedule: &ScheduleC,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    check_operator(p, x0)?;
    check_dim(x0.len(), y0.len())?;
    schedule.validate()?;
    let mut trace = Trace::new(opts, x0);
    let mut x = x0.clone();
    let mut y = y0.clone();
    for t in 0..opts.maxit {
        let c = schedule.value(t);
        let next = step(p, &x, &y)?;
        y = x.mix(c, &y);
        let r = next.l1_distance(&x).max(next.l1_distance(&y));
        x = next;
        if trace.push(r, &x) {
            break;
        }
    }
    let mut report = trace.finish(x, Some(y));
    if opts.certify && schedule.is_divergent() {
        report.attach(split_coefficient(p).map(|s| (Certificate::TauLeftPlusRight, s)));
    }
    Ok(report)
}
