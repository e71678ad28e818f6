//! Ladner-Fischer prefix networks, their AND and carry instantiations, and
//! the two small adders (ripple and halved).

use crate::circuit::{Circuit, NodeId};
use crate::{ceil_log2, Error, Result};

/// An abstract prefix network. Values `0..n` are the inputs; step `k`
/// produces value `n + k` as `hi ∘ lo`, where `hi` covers the more
/// significant segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixPlan {
    pub n: usize,
    pub f: u32,
    pub steps: Vec<(usize, usize)>,
    /// `outputs[i]` holds `z_i ∘ ... ∘ z_0`.
    pub outputs: Vec<usize>,
}

impl PrefixPlan {
    pub fn size(&self) -> usize {
        self.steps.len()
    }

    /// Number of steps on the longest path.
    pub fn depth(&self) -> u32 {
        let level = self.levels();
        self.outputs.iter().map(|&v| level[v]).max().unwrap_or(0)
    }

    fn levels(&self) -> Vec<u32> {
        let mut level = vec![0u32; self.n + self.steps.len()];
        for (k, &(hi, lo)) in self.steps.iter().enumerate() {
            level[self.n + k] = 1 + level[hi].max(level[lo]);
        }
        level
    }

    /// Runs the plan over arbitrary values with an associative operator.
    pub fn instantiate<T: Clone>(&self, inputs: &[T], mut op: impl FnMut(&T, &T) -> T) -> Vec<T> {
        assert_eq!(inputs.len(), self.n, "prefix plan input count");
        let mut vals: Vec<T> = inputs.to_vec();
        for &(hi, lo) in &self.steps {
            let v = op(&vals[hi], &vals[lo]);
            vals.push(v);
        }
        self.outputs.iter().map(|&v| vals[v].clone()).collect()
    }
}

/// Ladner-Fischer plan with depth at most `ceil(log2 n) + f`.
pub fn lf_plan(n: usize, f: u32) -> Result<PrefixPlan> {
    if n == 0 {
        return Err(Error::Empty("prefix network needs at least one input"));
    }
    if n > 1 && f > ceil_log2(n as u64) {
        return Err(Error::OutOfRange(format!("f = {f} exceeds ceil(log2 {n})")));
    }
    let mut steps = Vec::new();
    let ids: Vec<usize> = (0..n).collect();
    let outputs = build(&ids, f, n, &mut steps);
    Ok(PrefixPlan { n, f, steps, outputs })
}

fn push(steps: &mut Vec<(usize, usize)>, n: usize, hi: usize, lo: usize) -> usize {
    steps.push((hi, lo));
    n + steps.len() - 1
}

fn build(ids: &[usize], f: u32, n: usize, steps: &mut Vec<(usize, usize)>) -> Vec<usize> {
    let len = ids.len();
    if len == 1 {
        return vec![ids[0]];
    }
    if f >= 1 {
        // odd-even: pair up, solve the half, fix up the even positions
        let mut condensed: Vec<usize> = (0..len / 2).map(|j| push(steps, n, ids[2 * j + 1], ids[2 * j])).collect();
        if len % 2 == 1 {
            condensed.push(ids[len - 1]);
        }
        let w = build(&condensed, f - 1, n, steps);
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            out.push(if i == 0 {
                ids[0]
            } else if i % 2 == 1 || i == len - 1 {
                w[i / 2]
            } else {
                push(steps, n, ids[i], w[i / 2 - 1])
            });
        }
        out
    } else {
        // halves: the low half may spend one extra level everywhere but at
        // its top output, which the high half needs early
        let m = len.div_ceil(2);
        let low = build(&ids[..m], u32::from(m >= 2), n, steps);
        let high = build(&ids[m..], 0, n, steps);
        let top = low[m - 1];
        let mut out = low;
        out.extend(high.into_iter().map(|h| push(steps, n, h, top)));
        out
    }
}

/// AND-prefix outputs `z_0, z_1 ∧ z_0, ...` over `inputs`.
pub fn and_prefix_circuit(circuit: &mut Circuit, inputs: &[NodeId], f: u32) -> Result<Vec<NodeId>> {
    let plan = lf_plan(inputs.len(), f)?;
    Ok(plan.instantiate(inputs, |&hi, &lo| circuit.and(hi, lo)))
}

/// Carries and AND-prefix of the combined network.
#[derive(Clone, Debug)]
pub struct CombinedOutputs {
    /// `carries[i] = c_{i+1}`.
    pub carries: Vec<NodeId>,
    /// `and_prefix[i] = p_i ∧ ... ∧ p_0`.
    pub and_prefix: Vec<NodeId>,
}

/// Prefix network over (generate, propagate) pairs, three gates per step.
pub fn lf_combined_adder(circuit: &mut Circuit, p: &[NodeId], g: &[NodeId], f: u32) -> Result<CombinedOutputs> {
    let (carries, and_prefix) = combined(circuit, p, g, f, true)?;
    Ok(CombinedOutputs { carries, and_prefix: and_prefix.into_iter().map(|x| x.expect("prefix requested")).collect() })
}

/// The same network without the AND-prefix outputs: propagate conjunctions
/// are built only where a carry depends on them.
pub fn lf_carry_adder(circuit: &mut Circuit, p: &[NodeId], g: &[NodeId], f: u32) -> Result<Vec<NodeId>> {
    Ok(combined(circuit, p, g, f, false)?.0)
}

type CombinedParts = (Vec<NodeId>, Vec<Option<NodeId>>);

fn combined(circuit: &mut Circuit, p: &[NodeId], g: &[NodeId], f: u32, with_prefix: bool) -> Result<CombinedParts> {
    check_pairs(p, g)?;
    let plan = lf_plan(p.len(), f)?;
    let n = plan.n;
    let mut need_x = vec![false; n + plan.steps.len()];
    if with_prefix {
        for &v in &plan.outputs {
            need_x[v] = true;
        }
    }
    for (k, &(hi, lo)) in plan.steps.iter().enumerate().rev() {
        need_x[hi] = true;
        if need_x[n + k] {
            need_x[lo] = true;
        }
    }
    let mut vals: Vec<(NodeId, Option<NodeId>)> = g.iter().zip(p).map(|(&y, &x)| (y, Some(x))).collect();
    for (k, &(hi, lo)) in plan.steps.iter().enumerate() {
        let ((y1, x1), (y0, x0)) = (vals[hi], vals[lo]);
        let x1 = x1.expect("propagate of a high segment is always built");
        let t = circuit.and(x1, y0);
        let y = circuit.or(y1, t);
        let x = if need_x[n + k] { Some(circuit.and(x1, x0.expect("needed propagate is built"))) } else { None };
        vals.push((y, x));
    }
    Ok(plan.outputs.iter().map(|&v| vals[v]).unzip())
}

pub(crate) fn check_pairs(p: &[NodeId], g: &[NodeId]) -> Result<()> {
    if p.len() != g.len() {
        return Err(Error::LengthMismatch(format!("{} propagate vs {} generate signals", p.len(), g.len())));
    }
    if p.is_empty() {
        return Err(Error::Empty("adder needs at least one input pair"));
    }
    Ok(())
}

/// `c_1 = g_0`, `c_{i+1} = g_i ∨ (p_i ∧ c_i)`.
pub fn ripple_adder(circuit: &mut Circuit, p: &[NodeId], g: &[NodeId]) -> Result<Vec<NodeId>> {
    check_pairs(p, g)?;
    let mut carries = vec![g[0]];
    for i in 1..p.len() {
        let t = circuit.and(p[i], carries[i - 1]);
        carries.push(circuit.or(g[i], t));
    }
    Ok(carries)
}

/// Ripple adders on both halves; the lower half's top carry doubles as the
/// incoming carry of the upper half, whose propagate conjunctions come from
/// an AND chain.
pub fn halved_adder(circuit: &mut Circuit, p: &[NodeId], g: &[NodeId]) -> Result<Vec<NodeId>> {
    if p.is_empty() && g.is_empty() {
        return Ok(Vec::new());
    }
    check_pairs(p, g)?;
    let n = p.len();
    if n == 1 {
        return Ok(vec![g[0]]);
    }
    let kr = n.div_ceil(2);
    let mut carries = ripple_adder(circuit, &p[..kr], &g[..kr])?;
    let incoming = carries[kr - 1];
    let local = ripple_adder(circuit, &p[kr..], &g[kr..])?;
    let mut chain = vec![p[kr]];
    for &x in &p[kr + 1..] {
        let prev = chain[chain.len() - 1];
        chain.push(circuit.and(x, prev));
    }
    carries.extend(propagate_into(circuit, &local, &chain, incoming));
    Ok(carries)
}

/// `local[i] ∨ (prefix[i] ∧ incoming)` for every position of an upper part.
pub(crate) fn propagate_into(
    circuit: &mut Circuit,
    local: &[NodeId],
    prefix: &[NodeId],
    incoming: NodeId,
) -> Vec<NodeId> {
    local
        .iter()
        .zip(prefix)
        .map(|(&a, &s)| {
            let t = circuit.and(s, incoming);
            circuit.or(a, t)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn and_oracle(lanes: &[u64]) -> Vec<u64> {
        let mut acc = !0u64;
        lanes
            .iter()
            .map(|&x| {
                acc &= x;
                acc
            })
            .collect()
    }

    #[test]
    fn plan_semantics_by_segments() {
        // instantiate with segment unions to check every output covers [0, i]
        for n in 1..=70 {
            for f in 0..=ceil_log2(n as u64) {
                let plan = lf_plan(n, f).unwrap();
                let segs: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
                let out = plan.instantiate(&segs, |&(a, b), &(c, d)| {
                    assert_eq!(d + 1, a, "high segment must start right above the low one");
                    (c, b)
                });
                for (i, &(lo, hi)) in out.iter().enumerate() {
                    assert_eq!((lo, hi), (0, i));
                }
                assert!(plan.depth() <= ceil_log2(n as u64) + f, "n={n} f={f} depth {}", plan.depth());
                let cap = (2.0 * (1.0 + 0.5f64.powi(f as i32)) * n as f64).ceil() as usize;
                assert!(plan.size() <= cap, "n={n} f={f} size {}", plan.size());
            }
        }
    }

    #[test]
    fn and_prefix_small() {
        let mut c = Circuit::new();
        let xs: Vec<_> = (0..2).map(|i| c.add_input(format!("z{i}"))).collect();
        let out = and_prefix_circuit(&mut c, &xs, 0).unwrap();
        assert_eq!(c.size(), 1);
        assert_eq!(c.node_depth(out[1]), 1);

        let mut c = Circuit::new();
        let xs: Vec<_> = (0..8).map(|i| c.add_input(format!("z{i}"))).collect();
        let out = and_prefix_circuit(&mut c, &xs, 0).unwrap();
        for (i, &o) in out.iter().enumerate() {
            c.add_output(format!("y{i}"), o).unwrap();
        }
        assert!(c.depth() <= 3);
        let v = crate::verify::verify_equivalence(&c, &and_oracle, crate::verify::VerifyMode::Exhaustive).unwrap();
        assert!(v.passed());
    }

    #[test]
    fn plan_errors() {
        assert!(lf_plan(0, 0).is_err());
        assert!(lf_plan(4, 3).is_err());
        assert!(lf_plan(1, 5).unwrap().steps.is_empty());
    }

    #[test]
    fn ripple_three() {
        let mut c = Circuit::new();
        let mut p = Vec::new();
        let mut g = Vec::new();
        for i in 0..3 {
            p.push(c.add_input(format!("p{i}")));
            g.push(c.add_input(format!("g{i}")));
        }
        let carries = ripple_adder(&mut c, &p, &g).unwrap();
        for (i, &v) in carries.iter().enumerate() {
            c.add_output(format!("c{}", i + 1), v).unwrap();
        }
        assert_eq!((c.depth(), c.size()), (4, 4));
    }
}
