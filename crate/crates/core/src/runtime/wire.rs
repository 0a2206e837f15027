use serde::{Deserialize, Serialize};

use super::RuntimeError;
use crate::graph::PeId;

/// Machine word carried by the transport.
pub type Word = u64;

/// Framing overhead of one record inside an envelope.
pub const RECORD_HEADER_WORDS: usize = 2;

const LEN_BITS: u32 = 56;
const LEN_MASK: u64 = (1 << LEN_BITS) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum Tag {
    Degree = 0,
    Neighborhood = 1,
    Delta = 2,
    Control = 3,
    Filter = 4,
}

impl Tag {
    pub const COUNT: usize = 5;
    pub const ALL: [Tag; Tag::COUNT] = [
        Tag::Degree,
        Tag::Neighborhood,
        Tag::Delta,
        Tag::Control,
        Tag::Filter,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: u64) -> Option<Tag> {
        Tag::ALL.get(i as usize).copied()
    }
}

/// One framed message inside an envelope. `origin` is the PE that posted it,
/// `final_dst` the PE whose handler consumes it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Record<'a> {
    pub tag: Tag,
    pub origin: PeId,
    pub final_dst: PeId,
    pub payload: &'a [Word],
}

impl Record<'_> {
    pub fn framed_len(&self) -> usize {
        RECORD_HEADER_WORDS + self.payload.len()
    }
}

pub(crate) fn frame_into(buf: &mut Vec<Word>, record: Record<'_>) {
    debug_assert!((record.payload.len() as u64) <= LEN_MASK);
    debug_assert!(record.origin < (1 << 32) && record.final_dst < (1 << 32));
    buf.push(((record.tag as u64) << LEN_BITS) | record.payload.len() as u64);
    buf.push(((record.origin as u64) << 32) | record.final_dst as u64);
    buf.extend_from_slice(record.payload);
}

/// The unit handed to the transport: a batch of framed records travelling
/// one hop from `src` to `dst`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    pub src: PeId,
    pub dst: PeId,
    pub payload: Vec<Word>,
}

impl Envelope {
    /// Length in words, framing included.
    pub fn len(&self) -> usize {
        self.payload.len()
    }

    pub fn is_empty(&self) -> bool {
        self.payload.is_empty()
    }

    pub fn records(&self) -> Records<'_> {
        Records {
            words: &self.payload,
        }
    }
}

pub struct Records<'a> {
    words: &'a [Word],
}

impl<'a> Iterator for Records<'a> {
    type Item = Result<Record<'a>, RuntimeError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.words.is_empty() {
            return None;
        }
        if self.words.len() < RECORD_HEADER_WORDS {
            self.words = &[];
            return Some(Err(RuntimeError::Malformed(
                "truncated record header".into(),
            )));
        }
        let head = self.words[0];
        let route = self.words[1];
        let len = (head & LEN_MASK) as usize;
        let Some(tag) = Tag::from_index(head >> LEN_BITS) else {
            self.words = &[];
            return Some(Err(RuntimeError::UnknownTag(head >> LEN_BITS)));
        };
        let end = RECORD_HEADER_WORDS + len;
        if self.words.len() < end {
            self.words = &[];
            return Some(Err(RuntimeError::Malformed(
                "truncated record payload".into(),
            )));
        }
        let record = Record {
            tag,
            origin: (route >> 32) as PeId,
            final_dst: (route & 0xffff_ffff) as PeId,
            payload: &self.words[RECORD_HEADER_WORDS..end],
        };
        self.words = &self.words[end..];
        Some(Ok(record))
    }
}
