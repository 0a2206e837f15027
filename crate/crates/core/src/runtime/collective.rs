//! Collective exchanges built on top of phases. All of them use direct,
//! unbuffered delivery.

use std::collections::BTreeMap;

use super::context::{PeContext, PeProgram, Step};
use super::cost::CostReport;
use super::wire::{Record, Tag, Word};
use super::{Routing, Runtime, RuntimeError};
use crate::graph::PeId;
use crate::num::Real;

/// Messages received by one PE, sorted by sender.
pub type Inbox = Vec<(PeId, Vec<Word>)>;

struct Exchange {
    tag: Tag,
    outgoing: Vec<(PeId, Vec<Word>)>,
    received: Inbox,
}

impl PeProgram for Exchange {
    fn init(&mut self, ctx: &mut PeContext) -> Result<(), RuntimeError> {
        ctx.register(self.tag);
        Ok(())
    }

    fn step(&mut self, ctx: &mut PeContext) -> Result<Step, RuntimeError> {
        for (dst, payload) in std::mem::take(&mut self.outgoing) {
            ctx.send_direct(self.tag, dst, &payload)?;
        }
        Ok(Step::Done)
    }

    fn handle(&mut self, _ctx: &mut PeContext, record: Record<'_>) -> Result<(), RuntimeError> {
        self.received.push((record.origin, record.payload.to_vec()));
        Ok(())
    }
}

fn run_exchange<S: Real>(
    rt: &mut Runtime<S>,
    tag: Tag,
    outgoing: Vec<Vec<(PeId, Vec<Word>)>>,
) -> Result<(Vec<Inbox>, CostReport<S>), RuntimeError> {
    if outgoing.len() != rt.num_pes() {
        return Err(RuntimeError::Config(format!(
            "exchange needs one outbox per PE, got {}",
            outgoing.len()
        )));
    }
    let mut programs: Vec<Exchange> = outgoing
        .into_iter()
        .map(|outgoing| Exchange {
            tag,
            outgoing,
            received: Vec::new(),
        })
        .collect();
    let report = rt.run_until_quiescent(&mut programs, Routing::Direct)?;
    let inboxes = programs
        .into_iter()
        .map(|mut prog| {
            prog.received.sort_by_key(|(src, _)| *src);
            prog.received
        })
        .collect();
    Ok((inboxes, report))
}

/// Each PE sends one message to each partner it has data for. Partners with
/// empty payloads are skipped entirely.
pub fn sparse_all_to_all<S: Real>(
    rt: &mut Runtime<S>,
    tag: Tag,
    outgoing: Vec<BTreeMap<PeId, Vec<Word>>>,
) -> Result<(Vec<Inbox>, CostReport<S>), RuntimeError> {
    let outgoing = outgoing
        .into_iter()
        .map(|m| {
            m.into_iter()
                .filter(|(_, words)| !words.is_empty())
                .collect()
        })
        .collect();
    run_exchange(rt, tag, outgoing)
}

/// Every PE exchanges with every other PE. `outgoing[i][j]` is the payload
/// from `i` to `j`; empty payloads count as empty exchanges and are not
/// billed.
pub fn dense_all_to_all<S: Real>(
    rt: &mut Runtime<S>,
    tag: Tag,
    outgoing: Vec<Vec<Vec<Word>>>,
) -> Result<(Vec<Inbox>, CostReport<S>), RuntimeError> {
    let p = rt.num_pes();
    if outgoing.iter().any(|row| row.len() != p) {
        return Err(RuntimeError::Config(
            "dense exchange rows must have p entries".into(),
        ));
    }
    let outgoing = outgoing
        .into_iter()
        .map(|row| row.into_iter().enumerate().collect())
        .collect();
    let (mut inboxes, report) = run_exchange(rt, tag, outgoing)?;
    for inbox in &mut inboxes {
        inbox.retain(|(_, words)| !words.is_empty());
    }
    Ok((inboxes, report))
}

/// Collects one message from every PE at PE 0. Entry `i` of the result is
/// what PE `i` contributed.
pub fn gather<S: Real>(
    rt: &mut Runtime<S>,
    values: Vec<Vec<Word>>,
) -> Result<(Vec<Vec<Word>>, CostReport<S>), RuntimeError> {
    let p = rt.num_pes();
    if values.len() != p {
        return Err(RuntimeError::Config(format!(
            "gather needs one value per PE, got {}",
            values.len()
        )));
    }
    let mut values = values;
    let own = std::mem::take(&mut values[0]);
    let outgoing = values
        .into_iter()
        .enumerate()
        .map(|(pe, v)| if pe == 0 { Vec::new() } else { vec![(0, v)] })
        .collect();
    let (inboxes, report) = run_exchange(rt, Tag::Control, outgoing)?;
    let mut gathered = vec![Vec::new(); p];
    gathered[0] = own;
    for (src, words) in inboxes.into_iter().next().unwrap_or_default() {
        gathered[src] = words;
    }
    Ok((gathered, report))
}

/// Element-wise sum of equally long vectors, gathered at PE 0.
pub fn reduce_sum<S: Real>(
    rt: &mut Runtime<S>,
    values: &[Vec<u64>],
) -> Result<(Vec<u64>, CostReport<S>), RuntimeError> {
    let width = values.first().map_or(0, Vec::len);
    if values.iter().any(|v| v.len() != width) {
        return Err(RuntimeError::Config(
            "reduction inputs differ in length".into(),
        ));
    }
    let (gathered, report) = gather(rt, values.to_vec())?;
    let mut total = vec![0u64; width];
    for words in &gathered {
        if words.len() != width {
            return Err(RuntimeError::Protocol("reduction contribution lost".into()));
        }
        for (acc, w) in total.iter_mut().zip(words) {
            *acc += w;
        }
    }
    Ok((total, report))
}
