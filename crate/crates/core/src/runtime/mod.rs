//! Simulated distributed-memory machine.
//!
//! Every PE runs a [`PeProgram`] against its own [`PeContext`]. Records are
//! aggregated per next hop, optionally routed through a 2D grid of proxies,
//! and counted on the way. A call to [`Runtime::run_until_quiescent`] is one
//! phase: it ends once every program is done, every buffer has been flushed
//! and nothing is in flight.

mod collective;
mod context;
mod cost;
mod queue;
mod wire;

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use collective::{dense_all_to_all, gather, reduce_sum, sparse_all_to_all, Inbox};
pub use context::{PeContext, PeProgram, Step, TraceEvent, TraceKind};
pub use cost::{CostModel, CostReport, PeStats};
pub use queue::AggregationQueue;
pub use wire::{Envelope, Record, Records, Tag, Word, RECORD_HEADER_WORDS};

use crate::graph::PeId;
use crate::num::Real;
use crate::routing::{grid_shape, GridShape};
use context::Transport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuntimeError {
    #[error("malformed envelope: {0}")]
    Malformed(String),
    #[error("unknown record tag {0}")]
    UnknownTag(u64),
    #[error("no handler registered for {tag:?} records on PE {pe}")]
    UnregisteredTag { pe: PeId, tag: Tag },
    #[error("PE {pe} does not exist (p = {p})")]
    InvalidPe { pe: PeId, p: usize },
    #[error("invalid runtime configuration: {0}")]
    Config(String),
    #[error("phase did not terminate within {rounds} rounds; {diagnostic}")]
    Livelock { rounds: u64, diagnostic: String },
    #[error("phase did not terminate within {0:?}")]
    Timeout(Duration),
    #[error("protocol violation: {0}")]
    Protocol(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheduler {
    /// Round-robin over PEs on the calling thread; runs are reproducible.
    #[default]
    Deterministic,
    /// One thread per PE.
    Concurrent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Routing {
    #[default]
    Direct,
    /// Two-hop delivery over the proxy grid.
    Indirect,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct RuntimeConfig<S: Real = f64> {
    pub pes: usize,
    pub cost: CostModel<S>,
    pub scheduler: Scheduler,
    /// Default aggregation threshold δ in payload words.
    pub threshold: usize,
    /// Upper bound on scheduler rounds (deterministic) or main-loop steps
    /// per PE (concurrent) within one phase.
    pub step_budget: u64,
    pub timeout: Option<Duration>,
    pub trace: bool,
}

impl<S: Real> Default for RuntimeConfig<S> {
    fn default() -> Self {
        Self {
            pes: 1,
            cost: CostModel::default(),
            scheduler: Scheduler::Deterministic,
            threshold: 1 << 14,
            step_budget: 1 << 24,
            timeout: None,
            trace: false,
        }
    }
}

pub struct Runtime<S: Real = f64> {
    config: RuntimeConfig<S>,
    thresholds: Vec<usize>,
    grid: GridShape,
    phase: u32,
    trace: Vec<TraceEvent>,
}

impl<S: Real> Runtime<S> {
    pub fn new(config: RuntimeConfig<S>) -> Result<Self, RuntimeError> {
        if config.pes == 0 {
            return Err(RuntimeError::Config("at least one PE is required".into()));
        }
        if config.pes > u32::MAX as usize {
            return Err(RuntimeError::Config(format!(
                "too many PEs: {}",
                config.pes
            )));
        }
        let grid = grid_shape(config.pes).map_err(|e| RuntimeError::Config(e.to_string()))?;
        Ok(Self {
            thresholds: vec![config.threshold; config.pes],
            grid,
            phase: 0,
            trace: Vec::new(),
            config,
        })
    }

    pub fn num_pes(&self) -> usize {
        self.config.pes
    }

    pub fn config(&self) -> &RuntimeConfig<S> {
        &self.config
    }

    pub fn grid(&self) -> GridShape {
        self.grid
    }

    /// Number of phases run so far.
    pub fn phase(&self) -> u32 {
        self.phase
    }

    pub fn empty_report(&self) -> CostReport<S> {
        CostReport::empty(self.config.pes, self.config.cost)
    }

    pub fn thresholds(&self) -> &[usize] {
        &self.thresholds
    }

    pub fn set_thresholds(&mut self, thresholds: Vec<usize>) -> Result<(), RuntimeError> {
        if thresholds.len() != self.config.pes {
            return Err(RuntimeError::Config(format!(
                "{} thresholds given for {} PEs",
                thresholds.len(),
                self.config.pes
            )));
        }
        self.thresholds = thresholds;
        Ok(())
    }

    pub fn trace(&self) -> &[TraceEvent] {
        &self.trace
    }

    pub fn take_trace(&mut self) -> Vec<TraceEvent> {
        std::mem::take(&mut self.trace)
    }

    /// Marks the start of a phase that exchanges no messages, so that phase
    /// numbers in traces stay aligned with the algorithm's structure.
    pub fn skip_phase(&mut self) {
        self.phase += 1;
    }

    /// Runs one phase to global quiescence and returns its communication
    /// accounting. `programs[i]` runs on PE `i`.
    pub fn run_until_quiescent<P: PeProgram>(
        &mut self,
        programs: &mut [P],
        routing: Routing,
    ) -> Result<CostReport<S>, RuntimeError> {
        let p = self.config.pes;
        if programs.len() != p {
            return Err(RuntimeError::Config(format!(
                "{} programs given for {} PEs",
                programs.len(),
                p
            )));
        }
        let transport = Arc::new(Transport::new(p));
        let contexts: Vec<PeContext> = (0..p)
            .map(|pe| {
                PeContext::new(
                    pe,
                    p,
                    self.phase,
                    routing,
                    self.grid,
                    Arc::clone(&transport),
                    self.thresholds[pe],
                    self.config.trace,
                )
            })
            .collect();
        let contexts = match self.config.scheduler {
            Scheduler::Deterministic => self.run_deterministic(contexts, programs, &transport)?,
            Scheduler::Concurrent => self.run_concurrent(contexts, programs, &transport)?,
        };
        self.phase += 1;
        let mut report = self.empty_report();
        for (pe, ctx) in contexts.into_iter().enumerate() {
            let (stats, trace) = ctx.finish();
            report.per_pe[pe] = stats;
            self.trace.extend(trace);
        }
        Ok(report)
    }

    fn check_timeout(&self, started: Instant) -> Result<(), RuntimeError> {
        match self.config.timeout {
            Some(limit) if started.elapsed() > limit => Err(RuntimeError::Timeout(limit)),
            _ => Ok(()),
        }
    }

    fn run_deterministic<P: PeProgram>(
        &self,
        mut contexts: Vec<PeContext>,
        programs: &mut [P],
        transport: &Transport,
    ) -> Result<Vec<PeContext>, RuntimeError> {
        let started = Instant::now();
        for (ctx, program) in contexts.iter_mut().zip(programs.iter_mut()) {
            program.init(ctx)?;
        }
        let mut done = vec![false; contexts.len()];
        let mut rounds = 0u64;
        loop {
            rounds += 1;
            if rounds > self.config.step_budget {
                return Err(RuntimeError::Livelock {
                    rounds: self.config.step_budget,
                    diagnostic: diagnose(&contexts, &done),
                });
            }
            self.check_timeout(started)?;
            for (pe, (ctx, program)) in contexts.iter_mut().zip(programs.iter_mut()).enumerate() {
                ctx.poll_and_dispatch(program)?;
                if !done[pe] && program.step(ctx)? == Step::Done {
                    done[pe] = true;
                }
            }
            if !done.iter().all(|&d| d)
                || transport.in_flight()
                || contexts.iter().any(|c| c.has_pending_input())
            {
                continue;
            }
            // Quiescent up to buffered records. Release records that still
            // need forwarding first so proxies can merge them with their own
            // traffic, then everything else.
            let mut relayed = false;
            for ctx in contexts.iter_mut() {
                relayed |= ctx.flush_forwarding();
            }
            if relayed {
                continue;
            }
            if contexts.iter().any(|c| c.has_buffered()) {
                for ctx in contexts.iter_mut() {
                    ctx.flush();
                }
                continue;
            }
            return Ok(contexts);
        }
    }

    fn run_concurrent<P: PeProgram>(
        &self,
        contexts: Vec<PeContext>,
        programs: &mut [P],
        transport: &Transport,
    ) -> Result<Vec<PeContext>, RuntimeError> {
        let p = contexts.len();
        let stop = AtomicBool::new(false);
        let failure: Mutex<Option<RuntimeError>> = Mutex::new(None);
        let idle: Vec<AtomicBool> = (0..p).map(|_| AtomicBool::new(false)).collect();
        let activity: Vec<AtomicU64> = (0..p).map(|_| AtomicU64::new(0)).collect();
        let budget = self.config.step_budget;
        let started = Instant::now();

        let fail = |e: RuntimeError| {
            let mut slot = failure.lock().unwrap_or_else(|e| e.into_inner());
            slot.get_or_insert(e);
            stop.store(true, Ordering::SeqCst);
        };

        let contexts = std::thread::scope(|scope| {
            let handles: Vec<_> = contexts
                .into_iter()
                .zip(programs.iter_mut())
                .enumerate()
                .map(|(pe, (mut ctx, program))| {
                    let (stop, idle, activity, fail) = (&stop, &idle, &activity, &fail);
                    scope.spawn(move || {
                        let mut body = || -> Result<(), RuntimeError> {
                            program.init(&mut ctx)?;
                            let mut done = false;
                            let mut steps = 0u64;
                            while !stop.load(Ordering::SeqCst) {
                                if done && !ctx.has_pending_input() && !ctx.has_buffered() {
                                    idle[pe].store(true, Ordering::SeqCst);
                                    std::thread::yield_now();
                                    continue;
                                }
                                idle[pe].store(false, Ordering::SeqCst);
                                activity[pe].fetch_add(1, Ordering::SeqCst);
                                ctx.poll_and_dispatch(program)?;
                                if !done {
                                    steps += 1;
                                    if steps > budget {
                                        let mut diagnostic = String::new();
                                        ctx.describe(&mut diagnostic);
                                        return Err(RuntimeError::Livelock {
                                            rounds: budget,
                                            diagnostic,
                                        });
                                    }
                                    done = program.step(&mut ctx)? == Step::Done;
                                }
                                if done && !ctx.has_pending_input() {
                                    ctx.flush();
                                }
                            }
                            Ok(())
                        };
                        if let Err(e) = body() {
                            fail(e);
                        }
                        ctx
                    })
                })
                .collect();

            let scan = || {
                let act: u64 = activity.iter().map(|a| a.load(Ordering::SeqCst)).sum();
                let all_idle = idle.iter().all(|i| i.load(Ordering::SeqCst));
                (act, all_idle && !transport.in_flight())
            };
            while !stop.load(Ordering::SeqCst) {
                if let Err(e) = self.check_timeout(started) {
                    fail(e);
                    break;
                }
                let (a1, quiet1) = scan();
                if quiet1 {
                    std::thread::sleep(Duration::from_micros(50));
                    let (a2, quiet2) = scan();
                    if quiet2 && a1 == a2 {
                        stop.store(true, Ordering::SeqCst);
                        break;
                    }
                }
                std::thread::sleep(Duration::from_micros(20));
            }
            handles
                .into_iter()
                .map(|h| h.join().expect("PE thread panicked"))
                .collect::<Vec<_>>()
        });

        if let Some(e) = failure.into_inner().unwrap_or_else(|e| e.into_inner()) {
            return Err(e);
        }
        Ok(contexts)
    }
}

fn diagnose(contexts: &[PeContext], done: &[bool]) -> String {
    let running: Vec<PeId> = (0..done.len()).filter(|&pe| !done[pe]).collect();
    let mut out = format!("PEs still running: {running:?}");
    for ctx in contexts {
        if ctx.has_pending_input() || ctx.has_buffered() {
            out.push_str("; ");
            ctx.describe(&mut out);
        }
    }
    out
}
