use std::collections::{BTreeMap, BTreeSet};

use super::wire::{frame_into, Record, Word};
use crate::graph::PeId;

#[derive(Debug, Clone, Default)]
struct Buffer {
    framed: Vec<Word>,
    payload_words: usize,
}

/// Per-destination send buffers with a global flush threshold.
///
/// Occupancy `B` counts buffered payload words summed over all destinations;
/// framing headers are not counted. Once a push makes `B` exceed the
/// threshold the caller is expected to flush every buffer.
#[derive(Debug, Clone)]
pub struct AggregationQueue {
    threshold: usize,
    buffers: BTreeMap<PeId, Buffer>,
    /// Destinations whose buffer holds at least one record that has to be
    /// forwarded further.
    relaying: BTreeSet<PeId>,
    occupancy: usize,
    peak: usize,
}

impl AggregationQueue {
    pub fn new(threshold: usize) -> Self {
        Self {
            threshold,
            buffers: BTreeMap::new(),
            relaying: BTreeSet::new(),
            occupancy: 0,
            peak: 0,
        }
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    /// Current `B`.
    pub fn occupancy(&self) -> usize {
        self.occupancy
    }

    /// Largest `B` observed right after a push.
    pub fn peak(&self) -> usize {
        self.peak
    }

    pub fn is_empty(&self) -> bool {
        self.buffers.is_empty()
    }

    pub fn buffer(&self, hop: PeId) -> Option<&[Word]> {
        self.buffers.get(&hop).map(|b| b.framed.as_slice())
    }

    /// Appends a framed record to the buffer for `hop`. Returns `true` when
    /// the threshold is now exceeded.
    pub fn push(&mut self, hop: PeId, record: Record<'_>) -> bool {
        let buf = self.buffers.entry(hop).or_default();
        frame_into(&mut buf.framed, record);
        buf.payload_words += record.payload.len();
        if record.final_dst != hop {
            self.relaying.insert(hop);
        }
        self.occupancy += record.payload.len();
        self.peak = self.peak.max(self.occupancy);
        self.occupancy > self.threshold
    }

    /// Empties every buffer, in destination order.
    pub fn take_all(&mut self) -> Vec<(PeId, Vec<Word>)> {
        self.occupancy = 0;
        self.relaying.clear();
        std::mem::take(&mut self.buffers)
            .into_iter()
            .map(|(hop, b)| (hop, b.framed))
            .collect()
    }

    /// Empties only buffers that carry records needing another hop.
    pub fn take_relaying(&mut self) -> Vec<(PeId, Vec<Word>)> {
        let hops = std::mem::take(&mut self.relaying);
        let mut out = Vec::with_capacity(hops.len());
        for hop in hops {
            if let Some(buf) = self.buffers.remove(&hop) {
                self.occupancy -= buf.payload_words;
                out.push((hop, buf.framed));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runtime::wire::{Tag, RECORD_HEADER_WORDS};

    fn rec(payload: &[Word], final_dst: PeId) -> Record<'_> {
        Record {
            tag: Tag::Control,
            origin: 0,
            final_dst,
            payload,
        }
    }

    #[test]
    fn threshold_arithmetic() {
        let mut q = AggregationQueue::new(8);
        assert!(!q.push(1, rec(&[1, 2, 3], 1)));
        assert!(!q.push(1, rec(&[4, 5, 6], 1)));
        assert!(q.push(1, rec(&[7, 8, 9], 1)));
        assert_eq!(q.peak(), 9);
        let flushed = q.take_all();
        assert_eq!(flushed.len(), 1);
        assert_eq!(flushed[0].1.len(), 9 + 3 * RECORD_HEADER_WORDS);
        assert!(q.is_empty());
        assert_eq!(q.occupancy(), 0);
    }

    #[test]
    fn relaying_buffers_are_taken_separately() {
        let mut q = AggregationQueue::new(100);
        q.push(1, rec(&[1], 1));
        q.push(2, rec(&[2, 2], 5));
        q.push(2, rec(&[3], 2));
        let relayed = q.take_relaying();
        assert_eq!(relayed.iter().map(|(h, _)| *h).collect::<Vec<_>>(), vec![2]);
        assert_eq!(q.occupancy(), 1);
        assert_eq!(q.take_relaying().len(), 0);
        assert_eq!(q.take_all().len(), 1);
    }
}
