//! The primal/dual worklist decomposer.
//!
//! A stack holds signed cones tagged with the space they live in. A cone
//! tagged [`Space::Dual`] stands for the primal cone generated by its dual,
//! so switching spaces replaces the bundle by its dual and flips the tag
//! without changing what the entry contributes.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cone::{dual_plan, primal_plan, Sign, SignedCone};
use crate::error::{Error, Result};
use crate::lattice::{default_delta, pick_beta, Direction, Norm};
use crate::linalg::{is_primitive, primitive_reduce, GammaBundle, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Primal space only, closed-form step.
    Pbarv,
    /// Dual space only: decompose `B*` modulo lower-dimensional cones.
    Dbarv,
    /// Always decompose whichever of the cone and its dual has smaller index.
    Pdbarv,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Pbarv, Strategy::Dbarv, Strategy::Pdbarv];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Pbarv => "pbarv",
            Strategy::Dbarv => "dbarv",
            Strategy::Pdbarv => "pdbarv",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    Primal,
    Dual,
}

impl Space {
    pub fn flip(self) -> Space {
        match self {
            Space::Primal => Space::Dual,
            Space::Dual => Space::Primal,
        }
    }
}

const DEFAULT_MAX_DEPTH: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct StrategyConfig {
    pub strategy: Strategy,
    pub norm: Norm,
    pub adjust: bool,
    pub lll_delta: BigRational,
    pub max_cones: Option<u64>,
    /// Defaults to 64, raised to `log2(index) + 1` when `adjust` is set
    /// since termination is then guaranteed.
    pub max_depth: Option<usize>,
    pub time_budget: Option<Duration>,
}

impl Default for StrategyConfig {
    fn default() -> Self {
        StrategyConfig {
            strategy: Strategy::Pdbarv,
            norm: Norm::One,
            adjust: true,
            lll_delta: default_delta(),
            max_cones: None,
            max_depth: None,
            time_budget: None,
        }
    }
}

impl StrategyConfig {
    pub fn new(strategy: Strategy, norm: Norm) -> Self {
        StrategyConfig { strategy, norm, ..Default::default() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub cones_emitted: u64,
    /// Non-unimodular cones that were split.
    pub nodes_split: u64,
    pub lll_calls: u64,
    pub space_switches: u64,
    pub max_depth: usize,
    #[serde(rename = "elapsed_ms", with = "millis")]
    pub elapsed: Duration,
}

mod millis {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        u64::deserialize(d).map(Duration::from_millis)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionResult {
    pub cones: Vec<SignedCone>,
    pub stats: Stats,
}

/// Worklist entry.
#[derive(Clone, Debug)]
pub struct SignedTaggedCone {
    pub sign: Sign,
    pub space: Space,
    pub bundle: GammaBundle,
    pub depth: usize,
}

/// Reported once per split cone, after any space switch.
#[derive(Debug)]
pub struct SplitEvent<'a> {
    pub depth: usize,
    pub space: Space,
    pub switched: bool,
    /// The bundle that was split, in `space`.
    pub bundle: &'a GammaBundle,
    /// The direction used; `gamma` is primitive. In dual space the sign is
    /// the one actually used (at least one positive coefficient).
    pub direction: &'a Direction,
    pub children: &'a [SignedTaggedCone],
}

/// Receives unimodular cones as they are produced; returning
/// `ControlFlow::Break` stops the run.
pub trait Sink {
    fn cone(&mut self, cone: SignedCone) -> ControlFlow<()>;

    fn split(&mut self, _event: &SplitEvent<'_>) {}
}

impl<F: FnMut(SignedCone) -> ControlFlow<()>> Sink for F {
    fn cone(&mut self, cone: SignedCone) -> ControlFlow<()> {
        self(cone)
    }
}

#[derive(Default)]
struct Counters {
    cones: AtomicU64,
    nodes: AtomicU64,
    lll: AtomicU64,
    switches: AtomicU64,
    depth: AtomicUsize,
}

struct Run<'a> {
    cfg: &'a StrategyConfig,
    max_depth: usize,
    deadline: Option<Instant>,
    start: Instant,
    counters: Counters,
}

#[allow(clippy::large_enum_variant)]
enum Expansion {
    Emit(SignedCone),
    Split { bundle: GammaBundle, direction: Direction, space: Space, switched: bool, children: Vec<SignedTaggedCone> },
}

impl<'a> Run<'a> {
    fn new(cfg: &'a StrategyConfig, root: &SignedTaggedCone) -> Result<Self> {
        let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
        if cfg.lll_delta <= quarter || cfg.lll_delta >= BigRational::one() {
            return Err(Error::InvalidDelta);
        }
        let index = root.bundle.index().min(root.bundle.dual_index());
        let max_depth = cfg.max_depth.unwrap_or(if cfg.adjust {
            DEFAULT_MAX_DEPTH.max(index.bits() as usize + 1)
        } else {
            DEFAULT_MAX_DEPTH
        });
        let start = Instant::now();
        Ok(Run { cfg, max_depth, deadline: cfg.time_budget.map(|t| start + t), start, counters: Counters::default() })
    }

    fn stats(&self) -> Stats {
        let c = &self.counters;
        Stats {
            cones_emitted: c.cones.load(Ordering::Relaxed),
            nodes_split: c.nodes.load(Ordering::Relaxed),
            lll_calls: c.lll.load(Ordering::Relaxed),
            space_switches: c.switches.load(Ordering::Relaxed),
            max_depth: c.depth.load(Ordering::Relaxed),
            elapsed: self.start.elapsed(),
        }
    }

    fn budget_error(&self, reason: &str) -> Error {
        Error::BudgetExceeded { reason: reason.to_string(), stats: Box::new(self.stats()) }
    }

    fn check_budgets(&self, item: &SignedTaggedCone) -> Result<()> {
        if item.depth > self.max_depth {
            return Err(self.budget_error(&format!("recursion depth exceeded {}", self.max_depth)));
        }
        if let Some(deadline) = self.deadline {
            if Instant::now() > deadline {
                return Err(self.budget_error("time budget exhausted"));
            }
        }
        Ok(())
    }

    fn expand(&self, item: SignedTaggedCone) -> Result<Expansion> {
        self.check_budgets(&item)?;
        self.counters.depth.fetch_max(item.depth, Ordering::Relaxed);
        let SignedTaggedCone { sign, mut space, mut bundle, depth } = item;
        if bundle.det_a().abs().is_one() {
            let emitted = self.counters.cones.fetch_add(1, Ordering::Relaxed);
            if let Some(max) = self.cfg.max_cones {
                if emitted >= max {
                    self.counters.cones.fetch_sub(1, Ordering::Relaxed);
                    return Err(self.budget_error(&format!("more than {max} cones")));
                }
            }
            let generators = match space {
                Space::Primal => bundle.a().clone(),
                Space::Dual => bundle.a_star().clone(),
            };
            return Ok(Expansion::Emit(SignedCone { sign, generators }));
        }
        let mut switched = false;
        if self.cfg.strategy == Strategy::Pdbarv && bundle.index() > bundle.dual_index() {
            bundle = bundle.dual();
            space = space.flip();
            switched = true;
            self.counters.switches.fetch_add(1, Ordering::Relaxed);
        }
        let mut dir = pick_beta(&bundle, self.cfg.norm, self.cfg.adjust, &self.cfg.lll_delta)?;
        self.counters.lll.fetch_add(1, Ordering::Relaxed);
        self.counters.nodes.fetch_add(1, Ordering::Relaxed);
        let plans = match space {
            Space::Primal => primal_plan(&dir.beta),
            Space::Dual => {
                if !dir.beta.numer().iter().any(Signed::is_positive) {
                    dir = dir.neg();
                }
                dual_plan(&dir.beta)
            }
        };
        let flipped = dir.neg();
        let children = plans
            .iter()
            .map(|p| {
                let d = if p.negate_gamma { &flipped } else { &dir };
                let child = bundle.update_unchecked(p.column, &d.beta, &d.gamma).negate_columns(&p.negated);
                debug_assert!(is_primitive(child.a()));
                SignedTaggedCone { sign: sign * p.sign, space, bundle: child, depth: depth + 1 }
            })
            .collect();
        Ok(Expansion::Split { bundle, direction: dir, space, switched, children })
    }
}

/// Root worklist entry for `b` under `strategy`; `b` is primitive-reduced
/// first.
pub fn root_entry(b: &IntMatrix, strategy: Strategy) -> Result<SignedTaggedCone> {
    if !b.is_square() {
        return Err(Error::NotSquare { rows: b.rows(), cols: b.cols() });
    }
    let bundle = GammaBundle::new(primitive_reduce(b)?)?;
    Ok(match strategy {
        Strategy::Pbarv | Strategy::Pdbarv => {
            SignedTaggedCone { sign: Sign::Plus, space: Space::Primal, bundle, depth: 0 }
        }
        Strategy::Dbarv => SignedTaggedCone { sign: Sign::Plus, space: Space::Dual, bundle: bundle.dual(), depth: 0 },
    })
}

/// Runs the decomposition, handing every unimodular cone to `sink` as soon
/// as it is produced. Memory is bounded by the worklist, not the output.
pub fn decompose_streaming<S: Sink + ?Sized>(b: &IntMatrix, cfg: &StrategyConfig, sink: &mut S) -> Result<Stats> {
    let root = root_entry(b, cfg.strategy)?;
    let run = Run::new(cfg, &root)?;
    let mut stack = vec![root];
    while let Some(item) = stack.pop() {
        match run.expand(item)? {
            Expansion::Emit(cone) => {
                if sink.cone(cone).is_break() {
                    return Err(Error::Aborted);
                }
            }
            Expansion::Split { bundle, direction, space, switched, children } => {
                sink.split(&SplitEvent {
                    depth: children[0].depth - 1,
                    space,
                    switched,
                    bundle: &bundle,
                    direction: &direction,
                    children: &children,
                });
                stack.extend(children);
            }
        }
    }
    Ok(run.stats())
}

/// Decomposes `C(b)` into a signed list of unimodular cones.
pub fn decompose(b: &IntMatrix, cfg: &StrategyConfig) -> Result<DecompositionResult> {
    let mut cones = Vec::new();
    let stats = decompose_streaming(b, cfg, &mut |c: SignedCone| {
        cones.push(c);
        ControlFlow::Continue(())
    })?;
    Ok(DecompositionResult { cones, stats })
}

/// Same multiset of cones as [`decompose`], with independent subtrees of
/// the worklist processed on the rayon pool. Output order is unspecified.
pub fn decompose_parallel(b: &IntMatrix, cfg: &StrategyConfig) -> Result<DecompositionResult> {
    let root = root_entry(b, cfg.strategy)?;
    let run = Run::new(cfg, &root)?;
    let failed = AtomicBool::new(false);
    let cones = par_expand(&run, root, &failed)?;
    Ok(DecompositionResult { cones, stats: run.stats() })
}

fn par_expand(run: &Run<'_>, item: SignedTaggedCone, failed: &AtomicBool) -> Result<Vec<SignedCone>> {
    if failed.load(Ordering::Relaxed) {
        return Ok(Vec::new());
    }
    let out = match run.expand(item) {
        Ok(Expansion::Emit(c)) => Ok(vec![c]),
        Ok(Expansion::Split { children, .. }) => children
            .into_par_iter()
            .map(|c| par_expand(run, c, failed))
            .collect::<Result<Vec<_>>>()
            .map(|parts| parts.into_iter().flatten().collect()),
        Err(e) => Err(e),
    };
    if out.is_err() {
        failed.store(true, Ordering::Relaxed);
    }
    out
}

/// Parallel counterpart of [`decompose_streaming`]. The sink may be called
/// from several threads at once and sees cones in no particular order.
pub fn decompose_parallel_streaming<F>(b: &IntMatrix, cfg: &StrategyConfig, sink: &F) -> Result<Stats>
where
    F: Fn(SignedCone) -> ControlFlow<()> + Sync,
{
    let root = root_entry(b, cfg.strategy)?;
    let run = Run::new(cfg, &root)?;
    par_stream(&run, root, sink)?;
    Ok(run.stats())
}

fn par_stream<F>(run: &Run<'_>, item: SignedTaggedCone, sink: &F) -> Result<()>
where
    F: Fn(SignedCone) -> ControlFlow<()> + Sync,
{
    match run.expand(item)? {
        Expansion::Emit(c) => {
            if sink(c).is_break() {
                return Err(Error::Aborted);
            }
            Ok(())
        }
        Expansion::Split { children, .. } => children.into_par_iter().try_for_each(|c| par_stream(run, c, sink)),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategyRun {
    pub strategy: Strategy,
    pub cones_emitted: u64,
    pub lll_calls: u64,
    #[serde(rename = "elapsed_ms", with = "millis")]
    pub elapsed: Duration,
}

/// Runs every configuration on the same input, counting cones without
/// storing them.
pub fn compare_strategies(b: &IntMatrix, cfgs: &[StrategyConfig]) -> Result<Vec<StrategyRun>> {
    cfgs.iter()
        .map(|cfg| {
            let stats = decompose_streaming(b, cfg, &mut |_: SignedCone| ControlFlow::Continue(()))?;
            Ok(StrategyRun {
                strategy: cfg.strategy,
                cones_emitted: stats.cones_emitted,
                lll_calls: stats.lll_calls,
                elapsed: stats.elapsed,
            })
        })
        .collect()
}
