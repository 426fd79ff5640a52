use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use vft_core::graph::{EdgeId, Graph, VertexId, Weight};
use vft_core::result::ceil_log2;

use crate::error::SimError;
use crate::log::LogEntry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum Tag {
    PathVertex = 1,
    Register = 2,
    Broadcast = 3,
    Heads = 4,
    Status = 5,
    StatusKey = 6,
    StatusWeight = 7,
}

impl Tag {
    pub fn from_u8(x: u8) -> Option<Tag> {
        Some(match x {
            1 => Tag::PathVertex,
            2 => Tag::Register,
            3 => Tag::Broadcast,
            4 => Tag::Heads,
            5 => Tag::Status,
            6 => Tag::StatusKey,
            7 => Tag::StatusWeight,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    /// One vertex of a cluster path, sent head first. `next` is the edge toward
    /// the following vertex; `last` marks the tail.
    PathVertex {
        vertex: VertexId,
        next: Option<EdgeId>,
        last: bool,
    },
    /// "I am your child in the tree rooted at `center`."
    Register {
        center: VertexId,
    },
    Broadcast {
        center: VertexId,
        sampled: bool,
    },
    /// One chunk of the sender's sampled-head mask. Chunks arrive in order.
    Heads {
        bits: Vec<bool>,
    },
    /// `heavy` announces that the weight and id of the heaviest cluster edge follow.
    Status {
        clustered: bool,
        added: bool,
        heavy: bool,
    },
    StatusWeight {
        weight: Weight,
    },
    StatusKey {
        id: EdgeId,
    },
}

impl Payload {
    pub fn tag(&self) -> Tag {
        match self {
            Payload::PathVertex { .. } => Tag::PathVertex,
            Payload::Register { .. } => Tag::Register,
            Payload::Broadcast { .. } => Tag::Broadcast,
            Payload::Heads { .. } => Tag::Heads,
            Payload::Status { .. } => Tag::Status,
            Payload::StatusKey { .. } => Tag::StatusKey,
            Payload::StatusWeight { .. } => Tag::StatusWeight,
        }
    }
}

/// Bit costs of the message fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Encoding {
    pub id_bits: u32,
    pub edge_bits: u32,
    pub weight_bits: u32,
}

impl Encoding {
    pub fn for_graph(g: &Graph) -> Self {
        Encoding {
            id_bits: ceil_log2(g.n()) as u32,
            edge_bits: ceil_log2(g.m()) as u32,
            weight_bits: ceil_log2(g.max_weight() as usize + 1) as u32,
        }
    }

    /// Size of a payload in bits.
    pub fn bits(&self, p: &Payload) -> u32 {
        match p {
            Payload::PathVertex { .. } => self.id_bits + self.edge_bits + 1,
            Payload::Register { .. } => self.id_bits,
            Payload::Broadcast { .. } => self.id_bits + 1,
            Payload::Heads { bits, .. } => bits.len() as u32,
            Payload::Status { .. } => 3,
            Payload::StatusWeight { .. } => self.weight_bits,
            Payload::StatusKey { .. } => self.edge_bits,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    pub from: VertexId,
    pub to: VertexId,
    pub edge: EdgeId,
    pub payload: Payload,
}

/// Synchronous network over the edges of a graph. Every directed edge keeps a
/// FIFO queue and carries at most one message per round.
#[derive(Debug)]
pub struct Network<'g> {
    g: &'g Graph,
    pub bandwidth: u32,
    pub encoding: Encoding,
    round: u64,
    queues: BTreeMap<(EdgeId, bool), VecDeque<Envelope>>,
    log: Option<Vec<LogEntry>>,
    max_bits: u32,
    messages: u64,
}

impl<'g> Network<'g> {
    /// `B = c_b * ceil(log2 n)` bits per message.
    pub fn new(g: &'g Graph, c_b: u32, record_log: bool) -> Self {
        Network {
            g,
            bandwidth: c_b * ceil_log2(g.n()) as u32,
            encoding: Encoding::for_graph(g),
            round: 0,
            queues: BTreeMap::new(),
            log: record_log.then(Vec::new),
            max_bits: 0,
            messages: 0,
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.g
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn max_bits(&self) -> u32 {
        self.max_bits
    }

    pub fn messages(&self) -> u64 {
        self.messages
    }

    pub fn take_log(&mut self) -> Option<Vec<LogEntry>> {
        self.log.take()
    }

    pub fn pending(&self) -> bool {
        !self.queues.is_empty()
    }

    /// Queues a message from `from` over incident edge `edge`.
    pub fn send(&mut self, from: VertexId, edge: EdgeId, payload: Payload) -> Result<(), SimError> {
        let e = self.g.edge(edge);
        if !e.touches(from) {
            return Err(SimError::NotIncident { vertex: from, edge });
        }
        let bits = self.encoding.bits(&payload);
        if bits > self.bandwidth {
            return Err(SimError::Bandwidth {
                round: self.round + 1,
                edge,
                from,
                to: e.other(from),
                bits,
                limit: self.bandwidth,
            });
        }
        let forward = from == e.u;
        self.queues.entry((edge, forward)).or_default().push_back(Envelope { from, to: e.other(from), edge, payload });
        Ok(())
    }

    /// Runs one round: the head of every non-empty queue is delivered.
    /// Deliveries are ordered by receiver, then sender.
    pub fn deliver_round(&mut self) -> Vec<Envelope> {
        self.round += 1;
        let mut out = Vec::with_capacity(self.queues.len());
        self.queues.retain(|_, q| {
            out.push(q.pop_front().expect("queues are never left empty"));
            !q.is_empty()
        });
        for env in &out {
            let bits = self.encoding.bits(&env.payload);
            self.max_bits = self.max_bits.max(bits);
            self.messages += 1;
            if let Some(log) = self.log.as_mut() {
                log.push(LogEntry {
                    round: self.round as u32,
                    edge: env.edge,
                    forward: env.from == self.g.edge(env.edge).u,
                    bits: bits as u16,
                    tag: env.payload.tag(),
                });
            }
        }
        out.sort_by_key(|env| (env.to, env.from, env.edge));
        out
    }

    /// Delivers rounds until every queue is empty, handing each message to
    /// `handle`, which may queue further messages. Returns the rounds used.
    pub fn drain<H>(&mut self, mut handle: H) -> Result<u64, SimError>
    where
        H: FnMut(&mut Network<'g>, Envelope) -> Result<(), SimError>,
    {
        let start = self.round;
        while self.pending() {
            for env in self.deliver_round() {
                handle(self, env)?;
            }
        }
        Ok(self.round - start)
    }
}
