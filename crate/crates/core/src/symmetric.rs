//! Delay-optimum symmetric trees, leftist circuits and triangular input sets.
//!
//! A leftist circuit covers its inputs with full binary trees of decreasing
//! size. Sets of inputs whose maximal covered subtrees form an increasing then
//! decreasing depth profile ("triangular" sets) can be aggregated cheaply by
//! running Huffman coding over those subtrees, reusing the leftist gates.

use crate::circuit::{Circuit, GateKind, NodeId};
use crate::{floor_log2, Error, Result};
use std::cmp::Reverse;
use std::collections::BinaryHeap;

pub const MAX_ARRIVAL: u32 = 63;

/// Builds a symmetric tree over `items` (node, arrival time) by repeatedly
/// merging the two earliest signals. Ties are broken first-in first-out.
pub fn huffman_tree(circuit: &mut Circuit, kind: GateKind, items: &[(NodeId, u32)]) -> Result<NodeId> {
    if items.is_empty() {
        return Err(Error::Empty("symmetric tree needs at least one item"));
    }
    let mut heap = BinaryHeap::with_capacity(items.len());
    for (seq, &(node, arrival)) in items.iter().enumerate() {
        if arrival > MAX_ARRIVAL {
            return Err(Error::ArrivalTooLarge(arrival));
        }
        heap.push(Reverse((arrival, seq, node)));
    }
    let mut seq = items.len();
    while heap.len() > 1 {
        let Reverse((a1, _, first)) = heap.pop().expect("heap has two items");
        let Reverse((a2, _, second)) = heap.pop().expect("heap has two items");
        let g = circuit.gate(kind, first, second);
        heap.push(Reverse((a1.max(a2) + 1, seq, g)));
        seq += 1;
    }
    let Reverse((_, _, root)) = heap.pop().expect("heap has one item");
    Ok(root)
}

/// Optimum delay of a symmetric tree: `ceil(log2(sum 2^a))`.
pub fn optimal_delay(arrivals: &[u32]) -> u32 {
    let total: u128 = arrivals.iter().map(|&a| 1u128 << a).sum();
    if total <= 1 {
        0
    } else {
        128 - (total - 1).leading_zeros()
    }
}

/// One maximal subtree of a boundary: the index of its left-most input and
/// its depth within the leftist circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryItem {
    pub start: usize,
    pub depth: u32,
}

impl BoundaryItem {
    pub fn end(&self) -> usize {
        self.start + (1usize << self.depth) - 1
    }
}

/// Boundary vertices sorted left to right.
pub type BoundarySeq = Vec<BoundaryItem>;

#[derive(Clone, Debug)]
pub struct LeftistCircuit {
    kind: GateKind,
    inputs: Vec<NodeId>,
    /// (first input index, depth) of each tree, left to right.
    trees: Vec<(usize, u32)>,
    /// `right_desc[i][j]`: subtree of depth `j` whose left-most input is
    /// `i`, once its gate exists.
    right_desc: Vec<Vec<Option<NodeId>>>,
    gates: usize,
}

impl LeftistCircuit {
    /// Carves `inputs` into full trees of sizes `2^k`, largest first. No
    /// gates are created; subtrees are built on first use.
    pub fn plan(kind: GateKind, inputs: &[NodeId]) -> Result<LeftistCircuit> {
        if inputs.is_empty() {
            return Err(Error::Empty("leftist circuit needs at least one input"));
        }
        let n = inputs.len();
        let mut right_desc: Vec<Vec<Option<NodeId>>> = inputs.iter().map(|&v| vec![Some(v)]).collect();
        let mut trees = Vec::new();
        let mut start = 0;
        while start < n {
            let k = floor_log2((n - start) as u64);
            for j in 1..=k {
                for i in (start..start + (1 << k)).step_by(1 << j) {
                    right_desc[i].push(None);
                }
            }
            trees.push((start, k));
            start += 1 << k;
        }
        Ok(LeftistCircuit { kind, inputs: inputs.to_vec(), trees, right_desc, gates: 0 })
    }

    /// The complete leftist circuit with all of its gates.
    pub fn build(circuit: &mut Circuit, kind: GateKind, inputs: &[NodeId]) -> Result<LeftistCircuit> {
        let mut l = Self::plan(kind, inputs)?;
        for (start, depth) in l.trees.clone() {
            l.materialize(circuit, start, depth);
        }
        Ok(l)
    }

    /// Root of the subtree of depth `j` starting at input `i`, creating the
    /// missing gates below it.
    pub fn materialize(&mut self, circuit: &mut Circuit, i: usize, j: u32) -> NodeId {
        if let Some(v) = self.right_desc[i][j as usize] {
            return v;
        }
        let l = self.materialize(circuit, i, j - 1);
        let r = self.materialize(circuit, i + (1 << (j - 1)), j - 1);
        let v = circuit.gate(self.kind, l, r);
        self.right_desc[i][j as usize] = Some(v);
        self.gates += 1;
        v
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn inputs(&self) -> &[NodeId] {
        &self.inputs
    }

    pub fn input(&self, i: usize) -> NodeId {
        self.inputs[i]
    }

    /// Gates created so far.
    pub fn gates(&self) -> usize {
        self.gates
    }

    pub fn tree_depths(&self) -> Vec<u32> {
        self.trees.iter().map(|&(_, d)| d).collect()
    }

    pub fn tree_roots(&self) -> Vec<BoundaryItem> {
        self.trees
            .iter()
            .map(|&(start, depth)| BoundaryItem { start, depth })
            .collect()
    }

    /// Highest depth of a subtree whose left-most input is `i`.
    pub fn max_right_desc(&self, i: usize) -> u32 {
        self.right_desc[i].len() as u32 - 1
    }

    /// The subtree's root if it has been built.
    pub fn right_desc(&self, i: usize, j: u32) -> Option<NodeId> {
        self.right_desc.get(i)?.get(j as usize).copied().flatten()
    }

    /// Maximal subtrees covering exactly the inputs `a..=b`, left to right.
    pub fn boundary_consecutive(&self, a: usize, b: usize) -> Result<BoundarySeq> {
        if a > b || b >= self.len() {
            return Err(Error::OutOfRange(format!("interval [{a}, {b}] in leftist circuit of {} inputs", self.len())));
        }
        let mut out = Vec::new();
        let mut i = a;
        while i <= b {
            let j = floor_log2((b - i + 1) as u64).min(self.max_right_desc(i));
            out.push(BoundaryItem { start: i, depth: j });
            i += 1 << j;
        }
        Ok(out)
    }

    /// Boundary of a triangular set; errors when the set is not triangular.
    pub fn boundary_triangular(&self, set: &TriangularSet) -> Result<BoundarySeq> {
        let seq = self.boundary_of_runs(set)?;
        if !is_triangular_sequence(&seq) {
            return Err(Error::NotTriangular);
        }
        Ok(seq)
    }

    fn boundary_of_runs(&self, set: &TriangularSet) -> Result<BoundarySeq> {
        let mut seq = Vec::new();
        for &(a, b) in set.runs() {
            seq.extend(self.boundary_consecutive(a, b)?);
        }
        Ok(seq)
    }

    /// Reference boundary computation: walks every tree top-down and keeps
    /// the maximal subtrees lying entirely inside `members`.
    pub fn boundary_scan(&self, members: &[bool]) -> BoundarySeq {
        let mut prefix = vec![0usize; self.len() + 1];
        for i in 0..self.len() {
            prefix[i + 1] = prefix[i] + usize::from(members.get(i).copied().unwrap_or(false));
        }
        let mut out = Vec::new();
        for &(start, depth) in &self.trees {
            self.scan(start, depth, &prefix, &mut out);
        }
        out
    }

    fn scan(&self, start: usize, depth: u32, prefix: &[usize], out: &mut BoundarySeq) {
        let width = 1usize << depth;
        let inside = prefix[start + width] - prefix[start];
        if inside == width {
            out.push(BoundaryItem { start, depth });
        } else if inside > 0 {
            self.scan(start, depth - 1, prefix, out);
            self.scan(start + width / 2, depth - 1, prefix, out);
        }
    }

    /// Test oracle: whether the set given by `members` is triangular.
    pub fn is_triangular(&self, members: &[bool]) -> bool {
        is_triangular_sequence(&self.boundary_scan(members))
    }
}

/// Some split point exists where the prefix is input-consecutive with
/// strictly increasing depths and the suffix is input-consecutive with
/// strictly decreasing depths.
pub fn is_triangular_sequence(seq: &[BoundaryItem]) -> bool {
    if seq.len() <= 1 {
        return true;
    }
    let linked = |x: &BoundaryItem, y: &BoundaryItem| x.end() + 1 == y.start;
    let n = seq.len();
    // inc_ok[j]: items 0..=j are consecutive and increasing
    let mut inc_ok = vec![true; n];
    for j in 1..n {
        inc_ok[j] = inc_ok[j - 1] && linked(&seq[j - 1], &seq[j]) && seq[j - 1].depth < seq[j].depth;
    }
    // dec_ok[j]: items j..n are consecutive and decreasing
    let mut dec_ok = vec![true; n + 1];
    for j in (0..n - 1).rev() {
        dec_ok[j] = dec_ok[j + 1] && linked(&seq[j], &seq[j + 1]) && seq[j].depth > seq[j + 1].depth;
    }
    (0..n).any(|j| inc_ok[j] && dec_ok[j + 1])
}

/// Input indices of a leftist circuit as sorted, disjoint, non-adjacent
/// inclusive runs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TriangularSet {
    runs: Vec<(usize, usize)>,
}

impl TriangularSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn interval(a: usize, b: usize) -> Self {
        if a > b {
            Self::empty()
        } else {
            TriangularSet { runs: vec![(a, b)] }
        }
    }

    /// Normalizes arbitrary runs: sorts, drops empty ones, merges touching.
    pub fn from_runs(runs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut runs: Vec<(usize, usize)> = runs.into_iter().filter(|&(a, b)| a <= b).collect();
        runs.sort_unstable();
        let mut merged: Vec<(usize, usize)> = Vec::with_capacity(runs.len());
        for (a, b) in runs {
            match merged.last_mut() {
                Some(last) if a <= last.1 + 1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        TriangularSet { runs: merged }
    }

    pub fn from_members(members: &[bool]) -> Self {
        let mut runs = Vec::new();
        let mut i = 0;
        while i < members.len() {
            if members[i] {
                let a = i;
                while i + 1 < members.len() && members[i + 1] {
                    i += 1;
                }
                runs.push((a, i));
            }
            i += 1;
        }
        TriangularSet { runs }
    }

    pub fn runs(&self) -> &[(usize, usize)] {
        &self.runs
    }

    pub fn len(&self) -> usize {
        self.runs.iter().map(|&(a, b)| b - a + 1).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.runs.iter().any(|&(a, b)| a <= i && i <= b)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.runs.iter().flat_map(|&(a, b)| a..=b)
    }

    pub fn members(&self, len: usize) -> Vec<bool> {
        let mut m = vec![false; len];
        for i in self.indices() {
            m[i] = true;
        }
        m
    }

    /// Right-most index, if any.
    pub fn last(&self) -> Option<usize> {
        self.runs.last().map(|&(_, b)| b)
    }

    pub fn with(&self, i: usize) -> Self {
        Self::from_runs(self.runs.iter().copied().chain([(i, i)]))
    }

    pub fn difference(&self, other: &TriangularSet) -> Self {
        let mut out = Vec::new();
        for &(a, b) in &self.runs {
            let mut cur = a;
            for &(c, d) in &other.runs {
                if d < cur || c > b {
                    continue;
                }
                if c > cur {
                    out.push((cur, c - 1));
                }
                cur = d + 1;
                if cur > b {
                    break;
                }
            }
            if cur <= b {
                out.push((cur, b));
            }
        }
        Self::from_runs(out)
    }
}

/// `rho(n) = n` for `n <= 2`, `floor(2 log2(n - 1))` otherwise.
pub fn rho(n: u64) -> u64 {
    if n <= 2 {
        n
    } else {
        let sq = ((n - 1) as u128) * ((n - 1) as u128);
        (127 - sq.leading_zeros()) as u64
    }
}

/// Greatest odd integer not above `x`.
pub fn flodd(x: f64) -> Result<u64> {
    if x.is_nan() || x < 1.0 {
        return Err(Error::OutOfRange(format!("flodd({x}) has no positive odd value")));
    }
    let f = (x + 1e-9).floor() as u64;
    Ok(if f % 2 == 0 { f - 1 } else { f })
}

/// Symmetric tree over a triangular set `k` plus extra signals `extra`
/// (node, arrival). Reuses the leftist subtrees at the set's boundary and
/// returns the root with the number of gates added outside the leftist
/// circuit.
pub fn sym_prep(
    circuit: &mut Circuit,
    leftist: &mut LeftistCircuit,
    k: &TriangularSet,
    extra: &[(NodeId, u32)],
) -> Result<(NodeId, usize)> {
    let mut items: Vec<(NodeId, u32)> = Vec::new();
    if !k.is_empty() {
        for b in leftist.boundary_triangular(k)? {
            let v = leftist.materialize(circuit, b.start, b.depth);
            items.push((v, circuit.node_depth(v)));
        }
    }
    let before = circuit.size();
    items.extend_from_slice(extra);
    if items.is_empty() {
        return Err(Error::Empty("symmetric tree over an empty set"));
    }
    let root = huffman_tree(circuit, leftist.kind(), &items)?;
    Ok((root, circuit.size() - before))
}

/// Picks `K` inside a triangular set `N` with `|K| = 2^(d-1)` where
/// `2^(d-1) <= |N| < 2^d`, such that `K` and `N \ K` stay triangular.
/// Returns `(K, N \ K)`.
pub fn extract_triangular_subset(
    leftist: &LeftistCircuit,
    set: &TriangularSet,
) -> Result<(TriangularSet, TriangularSet)> {
    if set.is_empty() {
        return Err(Error::Empty("cannot extract from an empty set"));
    }
    let seq = leftist.boundary_triangular(set)?;
    let d = floor_log2(set.len() as u64) + 1;
    let pick = if let Some(t) = seq.iter().find(|t| t.depth == d - 1) {
        TriangularSet::interval(t.start, t.end())
    } else {
        let mut seen = std::collections::HashMap::new();
        let mut best: Option<(u32, usize, usize)> = None;
        for (idx, t) in seq.iter().enumerate() {
            if let Some(&first) = seen.get(&t.depth) {
                if best.is_none_or(|(dd, _, _)| t.depth > dd) {
                    best = Some((t.depth, first, idx));
                }
            } else {
                seen.insert(t.depth, idx);
            }
        }
        let (_, j0, j1) = best.ok_or_else(|| {
            Error::Precondition("boundary has no tree of depth d-1 and no repeated depth".into())
        })?;
        TriangularSet::from_runs(seq[j0..=j1].iter().map(|t| (t.start, t.end())))
    };
    let rest = set.difference(&pick);
    Ok((pick, rest))
}
