//! The combined protocol: greedy recurrence rounds, then either direct hashing
//! with the interpolation protocol or the four-pair cascade, with the round
//! counts chosen by exhaustive search.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aepp::aepp_star4_yield;
use crate::channels::{make_depolarizing, make_xz, PauliDist4};
use crate::curve::YieldCurve;
use crate::error::{domain, DistillError, Result};
use crate::recurrence::{greedy_sequence, macchiavello_sequence, RecurrenceRun};
use crate::vv::vv_best_over_permutations;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    DirectVV,
    Aepp4,
}

/// A plan without its yield. `n2`/`n3` are ignored by `DirectVV`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlanSpec {
    pub n1: usize,
    pub branch: Branch,
    pub n2: usize,
    pub n3: usize,
}

impl PlanSpec {
    pub fn direct(n1: usize) -> Self {
        Self { n1, branch: Branch::DirectVV, n2: 0, n3: 0 }
    }

    pub fn aepp(n1: usize, n2: usize, n3: usize) -> Self {
        Self { n1, branch: Branch::Aepp4, n2, n3 }
    }
}

/// State after one greedy preprocessing round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub dist: PauliDist4,
    /// `p_pass / 2` of this round.
    pub rate_factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolPlan {
    pub n1: usize,
    pub branch: Branch,
    pub n2: usize,
    pub n3: usize,
    /// Per initial channel use, clamped at 0.
    #[serde(rename = "yield")]
    pub yield_: f64,
    /// Yield of the final stage per pair entering it, before clamping.
    pub stage_yield: f64,
    pub trace: Vec<TraceEntry>,
}

impl ProtocolPlan {
    pub fn spec(&self) -> PlanSpec {
        PlanSpec { n1: self.n1, branch: self.branch, n2: self.n2, n3: self.n3 }
    }

    /// Product of the per-round rate factors in the trace.
    pub fn rate_factor(&self) -> f64 {
        self.trace.iter().map(|t| t.rate_factor).product()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Bounds {
    pub n1_max: usize,
    pub n2_max: usize,
    pub n3_max: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Self { n1_max: 8, n2_max: 4, n3_max: 4 }
    }
}

fn stage_yield(d: &PauliDist4, spec: &PlanSpec) -> f64 {
    match spec.branch {
        Branch::DirectVV => vv_best_over_permutations(d).0,
        Branch::Aepp4 => aepp_star4_yield(d, spec.n2, spec.n3),
    }
}

fn clamp(y: f64) -> f64 {
    if y > 0.0 {
        y
    } else {
        0.0
    }
}

pub fn evaluate_plan(d: &PauliDist4, spec: &PlanSpec) -> ProtocolPlan {
    let run = greedy_sequence(d, spec.n1);
    let stage = stage_yield(&run.output(), spec);
    ProtocolPlan {
        n1: spec.n1,
        branch: spec.branch,
        n2: spec.n2,
        n3: spec.n3,
        yield_: clamp(run.rate_factor() * stage),
        stage_yield: stage,
        trace: run.steps.iter().map(|s| TraceEntry { dist: s.accepted, rate_factor: s.rate_factor() }).collect(),
    }
}

pub fn plan_yield(d: &PauliDist4, spec: &PlanSpec) -> f64 {
    evaluate_plan(d, spec).yield_
}

/// All plans within `bounds`, in lexicographic `(n1, n2, n3)` order with
/// `DirectVV` ahead of `Aepp4` at equal counts.
pub fn enumerate_plans(bounds: &Bounds) -> Vec<PlanSpec> {
    let mut out = Vec::new();
    for n1 in 0..=bounds.n1_max {
        out.push(PlanSpec::direct(n1));
        for n2 in 0..=bounds.n2_max {
            for n3 in 0..=bounds.n3_max {
                out.push(PlanSpec::aepp(n1, n2, n3));
            }
        }
    }
    out
}

/// Best plan within `bounds`; the first plan in [`enumerate_plans`] order wins ties.
pub fn optimize_plan(d: &PauliDist4, bounds: &Bounds) -> ProtocolPlan {
    best_of(d, enumerate_plans(bounds))
}

fn best_of(d: &PauliDist4, plans: impl IntoIterator<Item = PlanSpec>) -> ProtocolPlan {
    let mut best: Option<ProtocolPlan> = None;
    for spec in plans {
        let plan = evaluate_plan(d, &spec);
        if best.as_ref().is_none_or(|b| plan.yield_ > b.yield_) {
            best = Some(plan);
        }
    }
    best.expect("plan list is never empty")
}

/// Greedy recurrence followed by direct hashing, best over `n1 <= n1_max`.
pub fn greedy_vv_yield(d: &PauliDist4, n1_max: usize) -> f64 {
    best_of(d, (0..=n1_max).map(PlanSpec::direct)).yield_
}

/// The cascade without preprocessing, best over the post-round counts.
pub fn aepp4_vv_yield(d: &PauliDist4, n2_max: usize, n3_max: usize) -> f64 {
    let plans = (0..=n2_max).flat_map(|n2| (0..=n3_max).map(move |n3| PlanSpec::aepp(0, n2, n3)));
    best_of(d, plans).yield_
}

/// Alternating `Z`/`Y` recurrence followed by direct hashing, best over `k <= k_max`.
pub fn macchiavello_vv_yield(d: &PauliDist4, k_max: usize) -> f64 {
    let run: RecurrenceRun = macchiavello_sequence(d, k_max);
    let mut best = clamp(vv_best_over_permutations(d).0);
    let mut rate = 1.0;
    for step in &run.steps {
        rate *= step.rate_factor();
        best = best.max(clamp(rate * vv_best_over_permutations(&step.accepted).0));
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelFamily {
    Depolarizing,
    XZ,
}

impl ChannelFamily {
    pub fn channel(self, p: f64) -> Result<PauliDist4> {
        match self {
            ChannelFamily::Depolarizing => make_depolarizing(p),
            ChannelFamily::XZ => make_xz(p),
        }
    }

    /// Columns of the figure this family is plotted in.
    pub fn default_columns(self) -> Vec<Column> {
        match self {
            ChannelFamily::Depolarizing => vec![Column::Aepp4, Column::Greedy, Column::ProposedProtocol],
            ChannelFamily::XZ => vec![Column::Macchiavello, Column::Greedy],
        }
    }
}

impl fmt::Display for ChannelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChannelFamily::Depolarizing => "depolarizing",
            ChannelFamily::XZ => "xz",
        })
    }
}

impl FromStr for ChannelFamily {
    type Err = DistillError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "depolarizing" | "depol" => Ok(ChannelFamily::Depolarizing),
            "xz" => Ok(ChannelFamily::XZ),
            other => Err(domain(format!("unknown channel family '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Column {
    Macchiavello,
    Greedy,
    Aepp4,
    ProposedProtocol,
}

impl Column {
    pub fn name(self) -> &'static str {
        match self {
            Column::Macchiavello => "Macchiavello",
            Column::Greedy => "Greedy",
            Column::Aepp4 => "AEPP4",
            Column::ProposedProtocol => "ProposedProtocol",
        }
    }

    pub fn evaluate(self, d: &PauliDist4, bounds: &Bounds) -> f64 {
        match self {
            Column::Macchiavello => macchiavello_vv_yield(d, bounds.n1_max),
            Column::Greedy => greedy_vv_yield(d, bounds.n1_max),
            Column::Aepp4 => aepp4_vv_yield(d, bounds.n2_max, bounds.n3_max),
            Column::ProposedProtocol => optimize_plan(d, bounds).yield_,
        }
    }
}

impl FromStr for Column {
    type Err = DistillError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "macchiavello" => Ok(Column::Macchiavello),
            "greedy" => Ok(Column::Greedy),
            "aepp4" => Ok(Column::Aepp4),
            "proposedprotocol" | "proposed" => Ok(Column::ProposedProtocol),
            other => Err(domain(format!("unknown column '{other}'"))),
        }
    }
}

/// Sweep with the family's default figure columns.
pub fn sweep_combined(family: ChannelFamily, p_grid: &[f64], bounds: &Bounds) -> Result<YieldCurve> {
    sweep_columns(family, p_grid, bounds, &family.default_columns())
}

/// Evaluates `columns` at every grid point in parallel; rows follow grid order.
pub fn sweep_columns(family: ChannelFamily, p_grid: &[f64], bounds: &Bounds, columns: &[Column]) -> Result<YieldCurve> {
    let channels = p_grid.iter().map(|&p| family.channel(p)).collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<f64>> = p_grid
        .par_iter()
        .zip(channels.par_iter())
        .map(|(&p, d)| std::iter::once(p).chain(columns.iter().map(|c| c.evaluate(d, bounds))).collect())
        .collect();
    let mut curve = YieldCurve::new(std::iter::once("p").chain(columns.iter().map(|c| c.name())));
    for row in rows {
        curve.push_row(row)?;
    }
    Ok(curve)
}
