//! Binary message log: one fixed-size little-endian record per delivered message.

use serde::{Deserialize, Serialize};
use vft_core::graph::EdgeId;

use crate::error::SimError;
use crate::network::Tag;

pub const ENTRY_BYTES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LogEntry {
    pub round: u32,
    pub edge: EdgeId,
    /// Sent from the lower endpoint `u` to `v`.
    pub forward: bool,
    pub bits: u16,
    pub tag: Tag,
}

/// Layout: round u32, edge u32, direction u8, bits u16, tag u8.
pub fn encode(entries: &[LogEntry]) -> Vec<u8> {
    let mut out = Vec::with_capacity(entries.len() * ENTRY_BYTES);
    for e in entries {
        out.extend_from_slice(&e.round.to_le_bytes());
        out.extend_from_slice(&e.edge.to_le_bytes());
        out.push(u8::from(e.forward));
        out.extend_from_slice(&e.bits.to_le_bytes());
        out.push(e.tag as u8);
    }
    out
}

pub fn decode(bytes: &[u8]) -> Result<Vec<LogEntry>, SimError> {
    if !bytes.len().is_multiple_of(ENTRY_BYTES) {
        return Err(SimError::Log(format!("length {} is not a multiple of {ENTRY_BYTES}", bytes.len())));
    }
    bytes
        .chunks_exact(ENTRY_BYTES)
        .enumerate()
        .map(|(i, c)| {
            let tag = Tag::from_u8(c[11]).ok_or_else(|| SimError::Log(format!("entry {i}: unknown tag {}", c[11])))?;
            let forward = match c[8] {
                0 => false,
                1 => true,
                d => return Err(SimError::Log(format!("entry {i}: bad direction byte {d}"))),
            };
            Ok(LogEntry {
                round: u32::from_le_bytes(c[0..4].try_into().unwrap()),
                edge: u32::from_le_bytes(c[4..8].try_into().unwrap()),
                forward,
                bits: u16::from_le_bytes(c[9..11].try_into().unwrap()),
                tag,
            })
        })
        .collect()
}

/// Totals recomputed from a log alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LogSummary {
    pub last_round: u32,
    pub messages: u64,
    pub max_bits: u16,
    /// Largest number of messages on one directed edge in one round.
    pub max_per_slot: u32,
}

pub fn summarize(entries: &[LogEntry]) -> LogSummary {
    let mut s = LogSummary::default();
    let mut slots: Vec<(u32, EdgeId, bool)> = Vec::with_capacity(entries.len());
    for e in entries {
        s.last_round = s.last_round.max(e.round);
        s.messages += 1;
        s.max_bits = s.max_bits.max(e.bits);
        slots.push((e.round, e.edge, e.forward));
    }
    slots.sort_unstable();
    let mut run = 0;
    for (i, slot) in slots.iter().enumerate() {
        run = if i > 0 && slots[i - 1] == *slot { run + 1 } else { 1 };
        s.max_per_slot = s.max_per_slot.max(run);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let entries = vec![
            LogEntry { round: 1, edge: 7, forward: true, bits: 20, tag: Tag::PathVertex },
            LogEntry { round: 300, edge: u32::MAX, forward: false, bits: 1, tag: Tag::StatusKey },
        ];
        let bytes = encode(&entries);
        assert_eq!(bytes.len(), 24);
        assert_eq!(decode(&bytes).unwrap(), entries);
        assert!(decode(&bytes[..23]).is_err());
        let mut bad = bytes.clone();
        bad[11] = 99;
        assert!(decode(&bad).is_err());
        let s = summarize(&entries);
        assert_eq!((s.last_round, s.messages, s.max_bits, s.max_per_slot), (300, 2, 20, 1));
    }
}
