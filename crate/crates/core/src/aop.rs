//! Depth-optimized AND-OR path synthesis with linear size.
//!
//! The recursion splits an extended path `Sym(s) ∘ g(t)` either by peeling
//! off symmetric inputs or by an alternating split at an odd prefix length.
//! Every symmetric tree is assembled from the subtrees of two shared leftist
//! circuits, one per polarity, which keeps the total gate count linear.

use crate::circuit::{Circuit, GateKind, NodeId};
use crate::reference::{extended_aop_lanes, Polarity};
use crate::symmetric::{
    extract_triangular_subset, flodd, huffman_tree, rho, sym_prep, LeftistCircuit, TriangularSet,
};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Slack constant of the capacity function.
pub const XI: f64 = 1.999;
pub const ALPHA: f64 = 2.67;
pub const EPS: f64 = 1e-9;

/// `mu(d, n) = XI (2^d - n - 2) / d + 2`: how many alternating inputs fit
/// next to `n` symmetric ones at depth `d`.
pub fn mu(d: u32, n: u64) -> f64 {
    XI * ((2f64).powi(d as i32) - n as f64 - 2.0) / d as f64 + 2.0
}

/// Smallest `d >= 1` with `m <= mu(d, n)`.
pub fn d_min(n: u64, m: u64) -> u32 {
    let mut d = 1;
    while (m as f64) > mu(d, n) + EPS {
        d += 1;
    }
    d
}

pub fn psi(d: u32) -> Result<f64> {
    if d < 5 {
        return Err(Error::OutOfRange(format!("psi is defined for d >= 5, got {d}")));
    }
    let x = XI * ((2f64).powi(d as i32 - 1) - 2.0) / (d - 1) as f64;
    let half = flodd(x)?.div_ceil(2);
    Ok((1 + rho(half)) as f64 / ((x - EPS).ceil() + 2.0))
}

pub fn phi(d: u32) -> f64 {
    let mut acc = -1.67;
    for dd in 5..=d {
        acc += psi(dd).expect("d >= 5");
    }
    acc
}

/// Upper bound on additional gates at depth `d`.
pub fn capital_phi(d: u32, m: u64, n: u64) -> f64 {
    (ALPHA + phi(d)) * m as f64 + rho(n) as f64
}

/// Capacity-derived depths for `1 <= m <= 9` (rows) and `0 <= n <= 12`.
pub const DMIN_TABLE: [[u32; 13]; 9] = [
    [1, 2, 2, 2, 3, 3, 3, 3, 4, 4, 4, 4, 4],
    [1, 2, 2, 3, 3, 3, 3, 4, 4, 4, 4, 4, 4],
    [2, 3, 3, 3, 3, 4, 4, 4, 4, 4, 4, 4, 5],
    [3, 3, 3, 4, 4, 4, 4, 4, 4, 4, 5, 5, 5],
    [3, 3, 4, 4, 4, 4, 4, 4, 5, 5, 5, 5, 5],
    [4, 4, 4, 4, 4, 4, 5, 5, 5, 5, 5, 5, 5],
    [4, 4, 4, 4, 5, 5, 5, 5, 5, 5, 5, 5, 5],
    [4, 4, 5, 5, 5, 5, 5, 5, 5, 5, 5, 5, 5],
    [5, 5, 5, 5, 5, 5, 5, 5, 5, 5, 5, 5, 5],
];

/// Published upper bounds on `psi(d)` and on its running sum from `d = 5`.
pub const PSI_TABLE: [(u32, f64, f64); 14] = [
    (5, 0.3334, 0.3334),
    (6, 0.3572, 0.6906),
    (7, 0.3044, 0.9950),
    (8, 0.2369, 1.2319),
    (9, 0.1516, 1.3835),
    (10, 0.1035, 1.4870),
    (11, 0.0677, 1.5547),
    (12, 0.0428, 1.5975),
    (13, 0.0249, 1.6224),
    (14, 0.0151, 1.6375),
    (15, 0.0090, 1.6465),
    (16, 0.0053, 1.6518),
    (17, 0.0030, 1.6548),
    (18, 0.0017, 1.6565),
];

/// Additional-gate budget for one small `(m, n)` cell, with its formula.
/// `None` outside the tabulated region.
pub fn additional_gates_cell(m: u64, n: u64) -> Option<(u64, &'static str)> {
    let l2 = |x: u64| (x as f64).log2();
    let fl = |x: f64| (x + EPS).floor() as u64;
    let (value, formula) = match (m, n) {
        (1..=5, 0..=1) => (m + n - 1, "m + n - 1"),
        (6..=8, 0..=1) => (m + n, "m + n"),
        (1..=2, _) | (3, 2..=4) => (fl(m as f64 + 2.0 * l2(n + 1) - 3.0), "m + 2 log2(n + 1) - 3"),
        (3, 5..=8) | (4, 2..=8) | (5, 2..=7) => (fl(m as f64 + 2.0 * l2(n) - 2.0), "m + 2 log2(n) - 2"),
        (3, 9..=10) | (4, 9) => (m + 5, "m + 5"),
        (3, 11) => (m + 6, "m + 6"),
        (6, 2..=5) | (7, 2..=3) => (fl(m as f64 + 2.0 * l2(n + 1) - 2.0), "m + 2 log2(n + 1) - 2"),
        _ => return None,
    };
    Some((value, formula))
}

/// How symmetric trees are realized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SynthMode {
    /// Reuse subtrees of the two leftist circuits.
    Shared,
    /// Fresh trees everywhere; yields a formula-like circuit.
    Formula,
}

/// Gate counts by role.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub leftist: usize,
    pub alt_split: usize,
    pub base_case: usize,
    pub sym_tree: usize,
    pub split_concat: usize,
}

impl GateCounts {
    /// Everything outside the leftist circuits.
    pub fn additional(&self) -> usize {
        self.alt_split + self.base_case + self.sym_tree + self.split_concat
    }

    pub fn total(&self) -> usize {
        self.leftist + self.additional()
    }
}

#[derive(Clone, Copy, Debug)]
enum Category {
    AltSplit,
    BaseCase,
    SymTree,
    SplitConcat,
}

struct Ctx<'a> {
    circuit: &'a mut Circuit,
    /// Index 0 holds `s ++ (t0, t2, ...)`, index 1 holds `(t1, t3, ...)`.
    lists: [Vec<NodeId>; 2],
    /// Leftist circuits over the two lists; in formula mode they are never
    /// built and only provide boundary structure.
    leftist: [Option<LeftistCircuit>; 2],
    q: usize,
    top: Polarity,
    mode: SynthMode,
    counts: GateCounts,
}

impl Ctx<'_> {
    fn side(&self, p: Polarity) -> usize {
        usize::from(p != self.top)
    }

    /// List position of alternating input `t_j`.
    fn slot(&self, j: usize) -> usize {
        if j % 2 == 0 {
            self.q + j / 2
        } else {
            (j - 1) / 2
        }
    }

    fn t(&self, j: usize) -> NodeId {
        self.lists[j % 2][self.slot(j)]
    }

    fn count(&mut self, cat: Category, gates: usize) {
        match cat {
            Category::AltSplit => self.counts.alt_split += gates,
            Category::BaseCase => self.counts.base_case += gates,
            Category::SymTree => self.counts.sym_tree += gates,
            Category::SplitConcat => self.counts.split_concat += gates,
        }
    }

    fn gate(&mut self, cat: Category, kind: GateKind, l: NodeId, r: NodeId) -> NodeId {
        self.count(cat, 1);
        self.circuit.gate(kind, l, r)
    }

    /// Symmetric tree of polarity `p` over the set `k` in that polarity's
    /// list, plus `extra` signals.
    fn sym(&mut self, cat: Category, p: Polarity, k: &TriangularSet, extra: &[NodeId]) -> Result<NodeId> {
        let side = self.side(p);
        let extra: Vec<(NodeId, u32)> = extra.iter().map(|&v| (v, self.circuit.node_depth(v))).collect();
        let (root, added) = match self.mode {
            SynthMode::Shared => {
                let leftist = self.leftist[side].as_mut().expect("leftist circuit exists for a used side");
                let built = leftist.gates();
                let out = sym_prep(self.circuit, leftist, k, &extra)?;
                self.counts.leftist += leftist.gates() - built;
                out
            }
            SynthMode::Formula => {
                let mut items: Vec<(NodeId, u32)> =
                    k.indices().map(|i| self.lists[side][i]).map(|v| (v, self.circuit.node_depth(v))).collect();
                items.extend(extra);
                let before = self.circuit.size();
                let root = huffman_tree(self.circuit, p.kind(), &items)?;
                (root, self.circuit.size() - before)
            }
        };
        self.count(cat, added);
        Ok(root)
    }

    fn synth(&mut self, s: TriangularSet, ts: usize, m: usize, p: Polarity) -> Result<NodeId> {
        let n = s.len();
        let kind = p.kind();
        let dual = kind.dual();
        if m == 0 {
            return self.sym(Category::SymTree, p, &s, &[]);
        }
        let with_t0 = s.with(self.slot(ts));
        if m <= 2 {
            let extra: Vec<NodeId> = if m == 2 { vec![self.t(ts + 1)] } else { vec![] };
            return self.sym(Category::BaseCase, p, &with_t0, &extra);
        }
        let d = d_min(n as u64, m as u64);
        if d <= 3 {
            return match m {
                3 => {
                    let pair = self.gate(Category::BaseCase, dual, self.t(ts + 1), self.t(ts + 2));
                    self.sym(Category::BaseCase, p, &with_t0, &[pair])
                }
                4 => {
                    let a = self.sym(Category::BaseCase, p, &with_t0, &[])?;
                    let inner = self.gate(Category::BaseCase, kind, self.t(ts + 2), self.t(ts + 3));
                    let b = self.gate(Category::BaseCase, dual, self.t(ts + 1), inner);
                    Ok(self.gate(Category::BaseCase, kind, a, b))
                }
                5 => {
                    // t1 ∨ (t2 ∧ (t3 ∨ t4)) = (t1 ∨ t2) ∧ (t1 ∨ t3 ∨ t4)
                    let pair = self.gate(Category::BaseCase, dual, self.t(ts + 1), self.t(ts + 2));
                    let a = self.sym(Category::BaseCase, p, &with_t0, &[pair])?;
                    let odd = TriangularSet::interval(self.slot(ts + 1), self.slot(ts + 3));
                    let c = self.sym(Category::BaseCase, p.dual(), &odd, &[self.t(ts + 4)])?;
                    Ok(self.gate(Category::BaseCase, kind, a, c))
                }
                _ => Err(Error::Precondition(format!("no depth-{d} base case for m = {m}, n = {n}"))),
            };
        }
        if n >= 1 << (d - 1) {
            let (k, rest) = extract_triangular_subset(self.structure(p), &s)?;
            let a = self.sym(Category::SymTree, p, &k, &[])?;
            let r = self.synth(rest, ts, m, p)?;
            return Ok(self.gate(Category::SplitConcat, kind, a, r));
        }
        if n >= 1 && (m as f64) <= mu(d - 1, 0) + EPS {
            let a = self.sym(Category::SymTree, p, &s, &[])?;
            let r = self.synth(TriangularSet::empty(), ts, m, p)?;
            return Ok(self.gate(Category::SplitConcat, kind, a, r));
        }
        let k = flodd(mu(d - 1, n as u64))? as usize;
        let valid = k % 2 == 1 && k < m && ((m - k) as f64) <= mu(d - 1, (k as u64 - 1) / 2) + EPS;
        if !valid {
            return Err(Error::Precondition(format!("illegal alternating split k = {k} for m = {m}, n = {n}")));
        }
        let left = self.synth(s, ts, k, p)?;
        let start = self.slot(ts + 1);
        let s2 = if k == 1 { TriangularSet::empty() } else { TriangularSet::interval(start, start + (k - 1) / 2 - 1) };
        let right = self.synth(s2, ts + k, m - k, p.dual())?;
        Ok(self.gate(Category::AltSplit, kind, left, right))
    }

    fn structure(&self, p: Polarity) -> &LeftistCircuit {
        self.leftist[self.side(p)].as_ref().expect("leftist circuit exists for a used side")
    }
}

/// Synthesizes `Sym(s) ∘ g(t)` (polarity `F`: conjunction; `FStar`: the
/// dual) into `circuit` over existing nodes. Returns the root and the gate
/// counts by role.
pub fn synth_extended_aop_into(
    circuit: &mut Circuit,
    s: &[NodeId],
    t: &[NodeId],
    polarity: Polarity,
    mode: SynthMode,
) -> Result<(NodeId, GateCounts)> {
    if s.is_empty() && t.is_empty() {
        return Err(Error::Empty("extended AND-OR path needs at least one input"));
    }
    let mut even: Vec<NodeId> = s.to_vec();
    even.extend(t.iter().step_by(2));
    let odd: Vec<NodeId> = t.iter().skip(1).step_by(2).copied().collect();
    let kinds = [polarity.kind(), polarity.kind().dual()];
    let mut counts = GateCounts::default();
    let mut leftist: [Option<LeftistCircuit>; 2] = [None, None];
    for (side, list) in [&even, &odd].into_iter().enumerate() {
        if list.is_empty() {
            continue;
        }
        leftist[side] = Some(match mode {
            SynthMode::Shared => {
                let l = LeftistCircuit::build(circuit, kinds[side], list)?;
                counts.leftist += l.gates();
                l
            }
            SynthMode::Formula => LeftistCircuit::plan(kinds[side], list)?,
        });
    }
    let mut ctx = Ctx { circuit, lists: [even, odd], leftist, q: s.len(), top: polarity, mode, counts };
    let s_set = if s.is_empty() { TriangularSet::empty() } else { TriangularSet::interval(0, s.len() - 1) };
    let root = ctx.synth(s_set, 0, t.len(), polarity)?;
    Ok((root, ctx.counts))
}

/// A standalone path circuit with its gate accounting.
#[derive(Clone, Debug)]
pub struct AopCircuit {
    pub circuit: Circuit,
    pub shape: crate::reference::AopShape,
    pub counts: GateCounts,
}

impl AopCircuit {
    /// Bit-parallel oracle matching the circuit's input order (`s` then `t`).
    pub fn oracle(&self) -> impl Fn(&[u64]) -> Vec<u64> + '_ {
        move |lanes: &[u64]| {
            let (s, t) = lanes.split_at(self.shape.n_sym);
            vec![extended_aop_lanes(s, t, self.shape.polarity).expect("nonempty shape")]
        }
    }
}

/// Standalone circuit for `Sym(s_0..s_{n-1}) ∘ g(t_0..t_{m-1})`; inputs are
/// `s0.., t0..` in that order and the single output is `f`.
pub fn synth_extended_aop(n: usize, m: usize, polarity: Polarity, mode: SynthMode) -> Result<AopCircuit> {
    let mut circuit = Circuit::new();
    let s: Vec<NodeId> = (0..n).map(|i| circuit.add_input(format!("s{i}"))).collect();
    let t: Vec<NodeId> = (0..m).map(|i| circuit.add_input(format!("t{i}"))).collect();
    let (root, counts) = synth_extended_aop_into(&mut circuit, &s, &t, polarity, mode)?;
    circuit.add_output("f", root)?;
    let shape = crate::reference::AopShape { n_sym: n, m_alt: m, polarity };
    Ok(AopCircuit { circuit, shape, counts })
}

/// Standalone AND-OR path on `m >= 2` alternating inputs.
pub fn synth_aop(m: usize, polarity: Polarity, mode: SynthMode) -> Result<AopCircuit> {
    if m < 2 {
        return Err(Error::OutOfRange(format!("AND-OR path needs m >= 2, got {m}")));
    }
    synth_extended_aop(0, m, polarity, mode)
}

/// Depth guarantee for a path with `n` symmetric and `m` alternating inputs.
pub fn depth_bound(n: u64, m: u64) -> u32 {
    if m == 0 {
        return crate::ceil_log2(n);
    }
    if m <= 2 {
        return crate::ceil_log2(n + m);
    }
    d_min(n, m)
}

/// `floor(log2 m + log2 log2 m + 0.65)` for `m >= 3`; 1 for `m = 2`.
pub fn aop_depth_formula(m: u64) -> u32 {
    if m <= 2 {
        return if m == 2 { 1 } else { 0 };
    }
    let l = (m as f64).log2();
    (l + l.log2() + 0.65 + EPS).floor() as u32
}

/// `3.67 m + n + rho(n) - 2` (shared mode).
pub fn size_bound(n: u64, m: u64) -> f64 {
    3.67 * m as f64 + n as f64 + rho(n) as f64 - 2.0
}

/// Alternating inputs `(g_{k-1}, p_{k-1}, ..., p_1, g_0)` whose disjunction-rooted
/// path is the carry `c_k`.
pub fn carry_path_inputs(p: &[NodeId], g: &[NodeId], k: usize) -> Vec<NodeId> {
    let mut t = Vec::with_capacity(2 * k - 1);
    for i in (1..k).rev() {
        t.push(g[i]);
        t.push(p[i]);
    }
    t.push(g[0]);
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{verify_equivalence, VerifyMode};

    #[test]
    fn mu_values() {
        assert!((mu(3, 0) - 5.998).abs() < 1e-12);
        assert!((mu(1, 0) - 2.0).abs() < 1e-12);
        assert!((mu(4, 0) - 8.9965).abs() < 1e-12);
    }

    #[test]
    fn d_min_spot_values() {
        assert_eq!(d_min(0, 3), 2);
        assert_eq!(d_min(8, 1), 4);
        assert_eq!(d_min(12, 3), 5);
        assert_eq!(d_min(0, 5), 3);
        assert_eq!(d_min(0, 9), 5);
    }

    #[test]
    fn psi_phi_values() {
        assert!((psi(5).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!(psi(4).is_err());
        assert!((capital_phi(4, 10, 5) - (10.0 + 4.0)).abs() < 1e-9);
    }

    #[test]
    fn cells() {
        assert_eq!(additional_gates_cell(4, 2), Some((4, "m + 2 log2(n) - 2")));
        assert_eq!(additional_gates_cell(1, 0), Some((0, "m + n - 1")));
        assert_eq!(additional_gates_cell(8, 2), None);
        assert_eq!(additional_gates_cell(2, 100).map(|c| c.0), Some(12));
    }

    #[test]
    fn small_paths() {
        let c = synth_aop(2, Polarity::F, SynthMode::Shared).unwrap();
        assert_eq!((c.circuit.depth(), c.circuit.size()), (1, 1));
        assert_eq!(c.counts.alt_split, 0);
        let c = synth_aop(5, Polarity::F, SynthMode::Shared).unwrap();
        assert_eq!(c.circuit.depth(), 3);
        assert!(c.counts.additional() <= 5);
        let v = verify_equivalence(&c.circuit, &c.oracle(), VerifyMode::Exhaustive).unwrap();
        assert!(v.passed());
    }

    #[test]
    fn four_plus_three() {
        let c = synth_extended_aop(4, 3, Polarity::F, SynthMode::Shared).unwrap();
        assert_eq!(c.circuit.depth(), 3);
        let v = verify_equivalence(&c.circuit, &c.oracle(), VerifyMode::Exhaustive).unwrap();
        assert!(v.passed());
    }

    #[test]
    fn formula_mode_small() {
        for m in 2..=12 {
            let c = synth_aop(m, Polarity::FStar, SynthMode::Formula).unwrap();
            let d = c.circuit.depth() as usize;
            assert!(c.circuit.fanout() <= d);
            assert!(c.circuit.size() < m * d);
            assert!(verify_equivalence(&c.circuit, &c.oracle(), VerifyMode::Exhaustive).unwrap().passed());
        }
    }
}
