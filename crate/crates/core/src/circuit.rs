//! Append-only arena of {AND2, OR2} gates.
//!
//! Every gate is created after both of its predecessors, so arena order is a
//! topological order and cycles cannot be expressed.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Dense handle into one circuit's node arena.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    And,
    Or,
}

impl GateKind {
    pub fn dual(self) -> GateKind {
        match self {
            GateKind::And => GateKind::Or,
            GateKind::Or => GateKind::And,
        }
    }

    #[inline]
    pub fn apply(self, a: u64, b: u64) -> u64 {
        match self {
            GateKind::And => a & b,
            GateKind::Or => a | b,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Input { label: String },
    Gate { kind: GateKind, left: NodeId, right: NodeId },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Circuit {
    nodes: Vec<Node>,
    depth: Vec<u32>,
    inputs: Vec<NodeId>,
    outputs: Vec<(String, NodeId)>,
    gates: usize,
}

impl Circuit {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_input(&mut self, label: impl Into<String>) -> NodeId {
        let id = NodeId(self.nodes.len());
        self.nodes.push(Node::Input { label: label.into() });
        self.depth.push(0);
        self.inputs.push(id);
        id
    }

    /// Adds a gate, checking that both predecessors exist.
    pub fn add_gate(&mut self, kind: GateKind, left: NodeId, right: NodeId) -> Result<NodeId> {
        let len = self.nodes.len();
        for id in [left, right] {
            if id.0 >= len {
                return Err(Error::UnknownNode { id: id.0, len });
            }
        }
        Ok(self.push_gate(kind, left, right))
    }

    /// Adds a gate whose predecessors are known to exist.
    ///
    /// Panics on an unissued id; construction code uses this to avoid
    /// threading a `Result` through every gate.
    pub fn gate(&mut self, kind: GateKind, left: NodeId, right: NodeId) -> NodeId {
        assert!(
            left.0 < self.nodes.len() && right.0 < self.nodes.len(),
            "gate predecessor out of range"
        );
        self.push_gate(kind, left, right)
    }

    pub fn and(&mut self, left: NodeId, right: NodeId) -> NodeId {
        self.gate(GateKind::And, left, right)
    }

    pub fn or(&mut self, left: NodeId, right: NodeId) -> NodeId {
        self.gate(GateKind::Or, left, right)
    }

    fn push_gate(&mut self, kind: GateKind, left: NodeId, right: NodeId) -> NodeId {
        let id = NodeId(self.nodes.len());
        let d = 1 + self.depth[left.0].max(self.depth[right.0]);
        self.nodes.push(Node::Gate { kind, left, right });
        self.depth.push(d);
        self.gates += 1;
        id
    }

    pub fn add_output(&mut self, name: impl Into<String>, node: NodeId) -> Result<()> {
        if node.0 >= self.nodes.len() {
            return Err(Error::UnknownNode { id: node.0, len: self.nodes.len() });
        }
        self.outputs.push((name.into(), node));
        Ok(())
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn inputs(&self) -> &[NodeId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[(String, NodeId)] {
        &self.outputs
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    /// Cached depth of one node: gates on the longest path ending there.
    pub fn node_depth(&self, id: NodeId) -> u32 {
        self.depth[id.0]
    }

    /// Maximum depth over the designated outputs.
    pub fn depth(&self) -> u32 {
        self.outputs.iter().map(|&(_, v)| self.depth[v.0]).max().unwrap_or(0)
    }

    /// Number of gates.
    pub fn size(&self) -> usize {
        self.gates
    }

    /// Maximum number of successors of any node.
    pub fn fanout(&self) -> usize {
        self.successor_counts().into_iter().max().unwrap_or(0)
    }

    pub fn successor_counts(&self) -> Vec<usize> {
        let mut count = vec![0usize; self.nodes.len()];
        for node in &self.nodes {
            if let Node::Gate { left, right, .. } = node {
                count[left.0] += 1;
                count[right.0] += 1;
            }
        }
        count
    }

    /// Same shape with every gate kind flipped.
    pub fn dualize(&self) -> Circuit {
        let mut out = self.clone();
        for node in &mut out.nodes {
            if let Node::Gate { kind, .. } = node {
                *kind = kind.dual();
            }
        }
        out
    }

    /// Evaluates all nodes on 64 assignments at once; lane `b` of input `i`
    /// is bit `b` of `lanes[i]`.
    pub fn eval_nodes(&self, lanes: &[u64]) -> Result<Vec<u64>> {
        if lanes.len() != self.inputs.len() {
            return Err(Error::AssignmentLength { expected: self.inputs.len(), got: lanes.len() });
        }
        let mut val = vec![0u64; self.nodes.len()];
        let mut next_input = 0;
        for (i, node) in self.nodes.iter().enumerate() {
            val[i] = match *node {
                Node::Input { .. } => {
                    next_input += 1;
                    lanes[next_input - 1]
                }
                Node::Gate { kind, left, right } => kind.apply(val[left.0], val[right.0]),
            };
        }
        Ok(val)
    }

    /// Output lanes for `W` words per input at once.
    pub fn eval_wide<const W: usize>(&self, lanes: &[[u64; W]]) -> Result<Vec<[u64; W]>> {
        if lanes.len() != self.inputs.len() {
            return Err(Error::AssignmentLength { expected: self.inputs.len(), got: lanes.len() });
        }
        let mut val = vec![[0u64; W]; self.nodes.len()];
        let mut next_input = 0;
        for i in 0..self.nodes.len() {
            val[i] = match self.nodes[i] {
                Node::Input { .. } => {
                    next_input += 1;
                    lanes[next_input - 1]
                }
                Node::Gate { kind, left, right } => {
                    let (a, b) = (val[left.0], val[right.0]);
                    match kind {
                        GateKind::And => std::array::from_fn(|w| a[w] & b[w]),
                        GateKind::Or => std::array::from_fn(|w| a[w] | b[w]),
                    }
                }
            };
        }
        Ok(self.outputs.iter().map(|&(_, v)| val[v.0]).collect())
    }

    /// Bit-parallel evaluation of the outputs.
    pub fn eval_lanes(&self, lanes: &[u64]) -> Result<Vec<u64>> {
        let val = self.eval_nodes(lanes)?;
        Ok(self.outputs.iter().map(|&(_, v)| val[v.0]).collect())
    }

    pub fn evaluate(&self, assignment: &[bool]) -> Result<Vec<bool>> {
        let lanes: Vec<u64> = assignment.iter().map(|&b| if b { !0 } else { 0 }).collect();
        Ok(self.eval_lanes(&lanes)?.into_iter().map(|x| x & 1 == 1).collect())
    }

    /// Appends a copy of `other`'s gates, wiring its inputs to `input_map`.
    /// Returns the images of `other`'s outputs.
    pub fn embed(&mut self, other: &Circuit, input_map: &[NodeId]) -> Result<Vec<NodeId>> {
        if input_map.len() != other.inputs.len() {
            return Err(Error::LengthMismatch(format!(
                "embedding {} inputs with {} bindings",
                other.inputs.len(),
                input_map.len()
            )));
        }
        let mut image = Vec::with_capacity(other.nodes.len());
        let mut next_input = 0;
        for node in &other.nodes {
            let id = match *node {
                Node::Input { .. } => {
                    next_input += 1;
                    input_map[next_input - 1]
                }
                Node::Gate { kind, left, right } => self.add_gate(kind, image[left.0], image[right.0])?,
            };
            image.push(id);
        }
        Ok(other.outputs.iter().map(|&(_, v)| image[v.0]).collect())
    }
}
