use std::collections::VecDeque;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use super::cost::PeStats;
use super::queue::AggregationQueue;
use super::wire::{frame_into, Envelope, Record, Tag, Word};
use super::{Routing, RuntimeError};
use crate::graph::PeId;
use crate::routing::GridShape;

/// Shared mailboxes of one phase.
pub(crate) struct Transport {
    inboxes: Vec<Mutex<VecDeque<Envelope>>>,
    sent: AtomicU64,
    received: AtomicU64,
}

impl Transport {
    pub(crate) fn new(p: usize) -> Self {
        Self {
            inboxes: (0..p).map(|_| Mutex::new(VecDeque::new())).collect(),
            sent: AtomicU64::new(0),
            received: AtomicU64::new(0),
        }
    }

    fn inbox(&self, pe: PeId) -> std::sync::MutexGuard<'_, VecDeque<Envelope>> {
        self.inboxes[pe].lock().unwrap_or_else(|e| e.into_inner())
    }

    fn deliver(&self, env: Envelope) {
        let dst = env.dst;
        self.sent.fetch_add(1, Ordering::SeqCst);
        self.inbox(dst).push_back(env);
    }

    fn pop(&self, pe: PeId) -> Option<Envelope> {
        let env = self.inbox(pe).pop_front();
        if env.is_some() {
            self.received.fetch_add(1, Ordering::SeqCst);
        }
        env
    }

    pub(crate) fn inbox_len(&self, pe: PeId) -> usize {
        self.inbox(pe).len()
    }

    pub(crate) fn sent(&self) -> u64 {
        self.sent.load(Ordering::SeqCst)
    }

    pub(crate) fn received(&self) -> u64 {
        self.received.load(Ordering::SeqCst)
    }

    pub(crate) fn in_flight(&self) -> bool {
        self.sent() != self.received()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TraceKind {
    Sent,
    Delivered,
}

/// One posted or delivered record, captured when tracing is enabled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub phase: u32,
    pub kind: TraceKind,
    pub tag: Tag,
    pub origin: PeId,
    pub final_dst: PeId,
    pub payload: Vec<Word>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Continue,
    Done,
}

/// Per-PE behaviour driven by the runtime.
///
/// `step` runs the PE's main loop in small increments until it reports
/// [`Step::Done`]; `handle` is invoked for every record addressed to this PE,
/// before and after the main loop has finished.
pub trait PeProgram: Send {
    fn init(&mut self, _ctx: &mut PeContext) -> Result<(), RuntimeError> {
        Ok(())
    }

    fn step(&mut self, ctx: &mut PeContext) -> Result<Step, RuntimeError>;

    fn handle(&mut self, ctx: &mut PeContext, record: Record<'_>) -> Result<(), RuntimeError>;
}

/// The view a program has of the machine while running on one PE.
pub struct PeContext {
    pe: PeId,
    p: usize,
    phase: u32,
    routing: Routing,
    grid: GridShape,
    transport: Arc<Transport>,
    queue: AggregationQueue,
    handlers: [bool; Tag::COUNT],
    self_inbox: VecDeque<(Tag, Vec<Word>)>,
    stats: PeStats,
    trace: Option<Vec<TraceEvent>>,
}

impl PeContext {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn new(
        pe: PeId,
        p: usize,
        phase: u32,
        routing: Routing,
        grid: GridShape,
        transport: Arc<Transport>,
        threshold: usize,
        trace: bool,
    ) -> Self {
        Self {
            pe,
            p,
            phase,
            routing,
            grid,
            transport,
            queue: AggregationQueue::new(threshold),
            handlers: [false; Tag::COUNT],
            self_inbox: VecDeque::new(),
            stats: PeStats::default(),
            trace: trace.then(Vec::new),
        }
    }

    pub fn pe(&self) -> PeId {
        self.pe
    }

    pub fn num_pes(&self) -> usize {
        self.p
    }

    pub fn phase(&self) -> u32 {
        self.phase
    }

    pub fn routing(&self) -> Routing {
        self.routing
    }

    pub fn threshold(&self) -> usize {
        self.queue.threshold()
    }

    pub fn stats(&self) -> &PeStats {
        &self.stats
    }

    pub fn register(&mut self, tag: Tag) {
        self.handlers[tag.index()] = true;
    }

    fn check_pe(&self, dst: PeId) -> Result<(), RuntimeError> {
        if dst >= self.p {
            return Err(RuntimeError::InvalidPe { pe: dst, p: self.p });
        }
        Ok(())
    }

    fn record_trace(
        &mut self,
        kind: TraceKind,
        tag: Tag,
        origin: PeId,
        final_dst: PeId,
        payload: &[Word],
    ) {
        if let Some(trace) = &mut self.trace {
            trace.push(TraceEvent {
                phase: self.phase,
                kind,
                tag,
                origin,
                final_dst,
                payload: payload.to_vec(),
            });
        }
    }

    fn note_posted(&mut self, tag: Tag, dst: PeId, payload: &[Word]) {
        self.record_trace(TraceKind::Sent, tag, self.pe, dst, payload);
        if dst != self.pe {
            self.stats.records_sent[tag.index()] += 1;
            self.stats.payload_words_sent[tag.index()] += payload.len() as u64;
            self.stats.max_record_words = self.stats.max_record_words.max(payload.len() as u64);
        }
    }

    fn hop_towards(&self, dst: PeId) -> PeId {
        match self.routing {
            Routing::Direct => dst,
            Routing::Indirect => self.grid.next_hop(self.pe, dst),
        }
    }

    fn transmit(&mut self, hop: PeId, payload: Vec<Word>) {
        if payload.is_empty() {
            return;
        }
        self.stats.messages_sent += 1;
        self.stats.words_sent += payload.len() as u64;
        self.stats.peers.insert(hop);
        self.transport.deliver(Envelope {
            src: self.pe,
            dst: hop,
            payload,
        });
    }

    fn enqueue(&mut self, hop: PeId, record: Record<'_>) {
        if record.payload.len() > self.queue.threshold() {
            let mut framed = Vec::with_capacity(record.framed_len());
            frame_into(&mut framed, record);
            self.transmit(hop, framed);
            return;
        }
        let exceeded = self.queue.push(hop, record);
        self.stats.max_buffer_occupancy = self
            .stats
            .max_buffer_occupancy
            .max(self.queue.peak() as u64);
        if exceeded {
            self.flush();
        }
    }

    /// Posts a record through the aggregation queue, routed according to the
    /// phase's routing mode. Records to self bypass the transport.
    pub fn post(&mut self, tag: Tag, dst: PeId, payload: &[Word]) -> Result<(), RuntimeError> {
        self.check_pe(dst)?;
        self.note_posted(tag, dst, payload);
        if dst == self.pe {
            self.self_inbox.push_back((tag, payload.to_vec()));
            return Ok(());
        }
        let hop = self.hop_towards(dst);
        self.enqueue(
            hop,
            Record {
                tag,
                origin: self.pe,
                final_dst: dst,
                payload,
            },
        );
        Ok(())
    }

    /// Sends a single record straight to `dst`, bypassing buffering and
    /// indirection. An empty payload is counted as an empty exchange and
    /// nothing is transported.
    pub fn send_direct(
        &mut self,
        tag: Tag,
        dst: PeId,
        payload: &[Word],
    ) -> Result<(), RuntimeError> {
        self.check_pe(dst)?;
        if payload.is_empty() {
            if dst != self.pe {
                self.stats.empty_exchanges += 1;
            }
            return Ok(());
        }
        self.note_posted(tag, dst, payload);
        if dst == self.pe {
            self.self_inbox.push_back((tag, payload.to_vec()));
            return Ok(());
        }
        let record = Record {
            tag,
            origin: self.pe,
            final_dst: dst,
            payload,
        };
        let mut framed = Vec::with_capacity(record.framed_len());
        frame_into(&mut framed, record);
        self.transmit(dst, framed);
        Ok(())
    }

    /// Sends every non-empty buffer.
    pub fn flush(&mut self) {
        for (hop, words) in self.queue.take_all() {
            self.transmit(hop, words);
        }
    }

    /// Sends only buffers holding records that still need another hop.
    /// Returns whether anything was sent.
    pub fn flush_forwarding(&mut self) -> bool {
        let batches = self.queue.take_relaying();
        let any = !batches.is_empty();
        for (hop, words) in batches {
            self.transmit(hop, words);
        }
        any
    }

    pub fn has_buffered(&self) -> bool {
        !self.queue.is_empty()
    }

    pub(crate) fn has_pending_input(&self) -> bool {
        !self.self_inbox.is_empty() || self.transport.inbox_len(self.pe) > 0
    }

    fn dispatch<P: PeProgram + ?Sized>(
        &mut self,
        program: &mut P,
        record: Record<'_>,
    ) -> Result<(), RuntimeError> {
        if !self.handlers[record.tag.index()] {
            return Err(RuntimeError::UnregisteredTag {
                pe: self.pe,
                tag: record.tag,
            });
        }
        self.stats.records_delivered[record.tag.index()] += 1;
        self.record_trace(
            TraceKind::Delivered,
            record.tag,
            record.origin,
            record.final_dst,
            record.payload,
        );
        program.handle(self, record)
    }

    /// Delivers everything currently waiting for this PE. Records addressed
    /// elsewhere are forwarded towards their destination. Returns the number
    /// of envelopes and self-posted records processed.
    pub fn poll_and_dispatch<P: PeProgram + ?Sized>(
        &mut self,
        program: &mut P,
    ) -> Result<usize, RuntimeError> {
        let mut processed = 0;
        loop {
            if let Some((tag, payload)) = self.self_inbox.pop_front() {
                processed += 1;
                let record = Record {
                    tag,
                    origin: self.pe,
                    final_dst: self.pe,
                    payload: &payload,
                };
                self.dispatch(program, record)?;
                continue;
            }
            let Some(env) = self.transport.pop(self.pe) else {
                break;
            };
            processed += 1;
            self.stats.messages_received += 1;
            self.stats.words_received += env.len() as u64;
            for record in env.records() {
                let record = record?;
                if record.final_dst == self.pe {
                    self.dispatch(program, record)?;
                } else {
                    self.check_pe(record.final_dst)?;
                    self.stats.records_forwarded += 1;
                    let hop = self.hop_towards(record.final_dst);
                    self.enqueue(hop, record);
                }
            }
        }
        Ok(processed)
    }

    pub(crate) fn describe(&self, out: &mut String) {
        let _ = write!(
            out,
            "pe {}: inbox {} self {} buffered {}",
            self.pe,
            self.transport.inbox_len(self.pe),
            self.self_inbox.len(),
            self.queue.occupancy()
        );
    }

    pub(crate) fn finish(self) -> (PeStats, Vec<TraceEvent>) {
        (self.stats, self.trace.unwrap_or_default())
    }
}
