use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::wire::Tag;
use crate::graph::PeId;
use crate::num::Real;

/// Linear message cost: a message of `l` words takes `alpha + beta * l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct CostModel<S: Real = f64> {
    pub alpha: S,
    pub beta: S,
}

impl<S: Real> Default for CostModel<S> {
    fn default() -> Self {
        Self {
            alpha: S::one(),
            beta: S::of_f64(0.01),
        }
    }
}

impl<S: Real> CostModel<S> {
    pub fn new(alpha: S, beta: S) -> Self {
        Self { alpha, beta }
    }

    pub fn time(&self, messages: u64, words: u64) -> S {
        self.alpha * S::of_u64(messages) + self.beta * S::of_u64(words)
    }
}

/// Counters of one PE. Inter-PE traffic only; self-deliveries are free.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeStats {
    pub messages_sent: u64,
    pub messages_received: u64,
    /// Envelope words including record framing.
    pub words_sent: u64,
    pub words_received: u64,
    /// Records posted by this PE (as origin), per tag.
    pub records_sent: [u64; Tag::COUNT],
    /// Payload words of records posted by this PE, per tag.
    pub payload_words_sent: [u64; Tag::COUNT],
    /// Records consumed by a handler on this PE, per tag.
    pub records_delivered: [u64; Tag::COUNT],
    pub records_forwarded: u64,
    /// Collective exchanges with nothing to say; not transported or billed.
    pub empty_exchanges: u64,
    pub max_buffer_occupancy: u64,
    pub max_record_words: u64,
    /// Distinct PEs this one sent envelopes to.
    pub peers: BTreeSet<PeId>,
}

impl PeStats {
    pub fn merge(&mut self, other: &PeStats) {
        self.messages_sent += other.messages_sent;
        self.messages_received += other.messages_received;
        self.words_sent += other.words_sent;
        self.words_received += other.words_received;
        for t in 0..Tag::COUNT {
            self.records_sent[t] += other.records_sent[t];
            self.payload_words_sent[t] += other.payload_words_sent[t];
            self.records_delivered[t] += other.records_delivered[t];
        }
        self.records_forwarded += other.records_forwarded;
        self.empty_exchanges += other.empty_exchanges;
        self.max_buffer_occupancy = self.max_buffer_occupancy.max(other.max_buffer_occupancy);
        self.max_record_words = self.max_record_words.max(other.max_record_words);
        self.peers.extend(other.peers.iter().copied());
    }
}

/// Per-PE communication accounting for one or more phases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct CostReport<S: Real = f64> {
    pub model: CostModel<S>,
    pub per_pe: Vec<PeStats>,
}

impl<S: Real> CostReport<S> {
    pub fn empty(p: usize, model: CostModel<S>) -> Self {
        Self {
            model,
            per_pe: vec![PeStats::default(); p],
        }
    }

    pub fn num_pes(&self) -> usize {
        self.per_pe.len()
    }

    pub fn merge(&mut self, other: &CostReport<S>) {
        if self.per_pe.len() < other.per_pe.len() {
            self.per_pe.resize(other.per_pe.len(), PeStats::default());
        }
        for (mine, theirs) in self.per_pe.iter_mut().zip(&other.per_pe) {
            mine.merge(theirs);
        }
    }

    fn max_of(&self, f: impl Fn(&PeStats) -> u64) -> u64 {
        self.per_pe.iter().map(f).max().unwrap_or(0)
    }

    fn sum_of(&self, f: impl Fn(&PeStats) -> u64) -> u64 {
        self.per_pe.iter().map(f).sum()
    }

    /// Maximum number of outgoing messages over all PEs.
    pub fn max_messages_sent(&self) -> u64 {
        self.max_of(|s| s.messages_sent)
    }

    pub fn max_messages_received(&self) -> u64 {
        self.max_of(|s| s.messages_received)
    }

    /// Bottleneck communication volume: maximum words sent by any PE.
    pub fn bottleneck_volume(&self) -> u64 {
        self.max_of(|s| s.words_sent)
    }

    pub fn max_words_received(&self) -> u64 {
        self.max_of(|s| s.words_received)
    }

    pub fn total_messages(&self) -> u64 {
        self.sum_of(|s| s.messages_sent)
    }

    pub fn total_messages_received(&self) -> u64 {
        self.sum_of(|s| s.messages_received)
    }

    pub fn total_words(&self) -> u64 {
        self.sum_of(|s| s.words_sent)
    }

    pub fn total_words_received(&self) -> u64 {
        self.sum_of(|s| s.words_received)
    }

    pub fn mean_volume(&self) -> S {
        if self.per_pe.is_empty() {
            return S::zero();
        }
        S::of_u64(self.total_words()) / S::of_u64(self.per_pe.len() as u64)
    }

    pub fn records_sent(&self, tag: Tag) -> u64 {
        self.sum_of(|s| s.records_sent[tag.index()])
    }

    pub fn records_delivered(&self, tag: Tag) -> u64 {
        self.sum_of(|s| s.records_delivered[tag.index()])
    }

    /// Maximum over PEs of payload words posted under `tag`.
    pub fn bottleneck_payload_words(&self, tag: Tag) -> u64 {
        self.max_of(|s| s.payload_words_sent[tag.index()])
    }

    pub fn total_payload_words(&self, tag: Tag) -> u64 {
        self.sum_of(|s| s.payload_words_sent[tag.index()])
    }

    pub fn max_buffer_occupancy(&self) -> u64 {
        self.max_of(|s| s.max_buffer_occupancy)
    }

    pub fn modeled_time(&self, pe: PeId) -> S {
        let s = &self.per_pe[pe];
        self.model.time(s.messages_sent, s.words_sent)
    }

    /// Modeled communication time of the slowest PE.
    pub fn max_modeled_time(&self) -> S {
        (0..self.per_pe.len())
            .map(|pe| self.modeled_time(pe))
            .fold(S::zero(), S::max)
    }
}
