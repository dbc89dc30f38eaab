//! Line-delimited JSON event log.
//!
//! One record per line: `{"slot":..,"kind":..,"node":..,"peer":..,"beam":..}`.
//! Slots skipped after every pair is known (see [`super::Simulation`]) emit
//! nothing.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::geometry::{BeamIndex, NodeId};
use crate::policies::{SlotDecision, Transceiver};

use super::slot::{SlotOutcome, SubSlot};

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Event {
    pub slot: u64,
    pub kind: &'static str,
    pub node: NodeId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peer: Option<NodeId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beam: Option<BeamIndex>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub senders: Vec<NodeId>,
}

impl Event {
    fn new(slot: u64, kind: &'static str, node: NodeId) -> Self {
        Self { slot, kind, node, peer: None, beam: None, senders: Vec::new() }
    }
}

pub fn slot_events(outcome: &SlotOutcome) -> Vec<Event> {
    let slot = outcome.slot;
    let mut ev = Vec::new();
    for (node, d) in outcome.decisions.iter().enumerate() {
        if let SlotDecision::Active { state, beam } = d {
            let kind = match state {
                Transceiver::Transmit => "transmit",
                Transceiver::Receive => "receive",
            };
            ev.push(Event { beam: Some(*beam), ..Event::new(slot, kind, node) });
        }
    }
    for &(rx, tx) in &outcome.hellos {
        ev.push(Event { peer: Some(tx), ..Event::new(slot, "hello", rx) });
    }
    for &(rx, tx) in &outcome.suppressed {
        ev.push(Event { peer: Some(tx), ..Event::new(slot, "suppressed", rx) });
    }
    for &(tx, from) in &outcome.feedbacks {
        ev.push(Event { peer: Some(from), ..Event::new(slot, "feedback", tx) });
    }
    for c in &outcome.collisions {
        let kind = match c.subslot {
            SubSlot::Hello => "hello_collision",
            SubSlot::Feedback => "feedback_collision",
        };
        ev.push(Event { senders: c.senders.clone(), ..Event::new(slot, kind, c.at) });
    }
    for d in &outcome.direct {
        ev.push(Event { peer: Some(d.discovered), ..Event::new(slot, "discovery", d.observer) });
    }
    for d in &outcome.gossip {
        ev.push(Event {
            peer: Some(d.discovered),
            senders: d.relay.into_iter().collect(),
            ..Event::new(slot, "gossip", d.observer)
        });
    }
    ev
}

pub struct EventLog<W: Write> {
    out: W,
}

impl<W: Write> EventLog<W> {
    pub fn new(out: W) -> Self {
        Self { out }
    }

    pub fn record(&mut self, outcome: &SlotOutcome) -> Result<()> {
        for e in slot_events(outcome) {
            serde_json::to_writer(&mut self.out, &e)?;
            self.out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}
