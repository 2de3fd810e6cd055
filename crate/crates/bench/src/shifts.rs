use clap::ValueEnum;
use paradiag::zolotarev::{
    cayley_disc_interval, decay_bound_di, plan_2discs, plan_eds, plan_zoldi, plan_zoldi_cyclic, shifts_ek, Enclosures,
    ShiftPlan,
};
use serde::{Deserialize, Serialize};

use crate::config::ProblemConfig;
use crate::BenchError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PlanKind {
    Ek,
    #[serde(rename = "2discs")]
    #[value(name = "2discs")]
    TwoDiscs,
    Zoldi,
    ZoldiCyclic,
    Eds,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftsConfig {
    pub kind: PlanKind,
    /// Plan length; for `zoldi` the degree `j`.
    pub count: usize,
    /// Base length of `zoldi-cyclic`.
    #[serde(default = "default_cycle")]
    pub cycle: usize,
    #[serde(default = "default_problem")]
    pub problem: ProblemConfig,
}

fn default_cycle() -> usize {
    4
}

fn default_problem() -> ProblemConfig {
    ProblemConfig::Heat1d { n: 64, nt: 64 }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundSample {
    pub j: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShiftsOutput {
    pub plan: ShiftPlan,
    pub enclosures: Option<Enclosures>,
    /// `[ã, b̃]` after the Cayley map, when enclosures exist.
    pub interval: Option<[f64; 2]>,
    pub avoids_enclosures: Option<bool>,
    pub bound: Vec<BoundSample>,
}

pub fn shifts(cfg: &ShiftsConfig) -> Result<ShiftsOutput, BenchError> {
    if cfg.count == 0 {
        return Err(BenchError::Usage("count must be positive".into()));
    }
    let enc = match &cfg.problem {
        ProblemConfig::RkHeat { .. } => None,
        p => p.spec().unwrap().build()?.enclosures,
    };
    let need = || enc.ok_or_else(|| BenchError::Usage(format!("problem {} has no spectral enclosures", cfg.problem.family())));
    let plan = match cfg.kind {
        PlanKind::Ek => shifts_ek(cfg.count),
        PlanKind::TwoDiscs => plan_2discs(&need()?, cfg.count)?,
        PlanKind::Zoldi => plan_zoldi(&need()?, cfg.count)?,
        PlanKind::ZoldiCyclic => plan_zoldi_cyclic(&need()?, cfg.cycle, cfg.count)?,
        PlanKind::Eds => plan_eds(&need()?, cfg.count)?,
    };
    let (interval, bound) = match &enc {
        Some(e) => {
            let (_, a, b) = cayley_disc_interval(&e.neg_b_disc, &e.a_interval)?;
            let bound = (0..=cfg.count).map(|j| BoundSample { j, value: decay_bound_di(a, b, j) }).collect();
            (Some([a, b]), bound)
        }
        None => (None, vec![]),
    };
    let avoids_enclosures = enc.as_ref().map(|e| plan.avoids(e));
    Ok(ShiftsOutput { plan, enclosures: enc, interval, avoids_enclosures, bound })
}
