//! Adder circuits computing every carry `c_1..c_n` from propagate/generate
//! pairs.
//!
//! The larger constructions combine a fast adder on the low part with a
//! carry-path circuit for the incoming carry of the high part, and a
//! linearization scheme that cuts the input into short parts joined by a
//! small spine adder.

use crate::aop::{carry_path_inputs, synth_extended_aop_into, SynthMode, EPS};
use crate::circuit::{Circuit, NodeId};
use crate::prefix::{
    and_prefix_circuit, check_pairs, halved_adder, lf_carry_adder, lf_combined_adder, propagate_into, ripple_adder,
};
use crate::reference::{interleaved_carry_oracle, Polarity};
use crate::{ceil_log2, Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Construction {
    Ripple,
    /// Combined Ladner-Fischer network with tradeoff parameter `f`.
    Lf(u32),
    Halved,
    A1,
    A2,
    A3,
    /// One independent carry-path circuit per carry.
    PerCarry,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Construction::Ripple => write!(f, "ripple"),
            Construction::Lf(k) => write!(f, "lf:f={k}"),
            Construction::Halved => write!(f, "halved"),
            Construction::A1 => write!(f, "a1"),
            Construction::A2 => write!(f, "a2"),
            Construction::A3 => write!(f, "a3"),
            Construction::PerCarry => write!(f, "percarry"),
        }
    }
}

impl FromStr for Construction {
    type Err = Error;

    /// Accepts `ripple`, `lf`, `lf:f=2`, `lf:2`, `halved`, `a1`, `a2`, `a3`,
    /// `percarry`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let c = match s.as_str() {
            "ripple" => Construction::Ripple,
            "lf" => Construction::Lf(0),
            "halved" => Construction::Halved,
            "a1" => Construction::A1,
            "a2" => Construction::A2,
            "a3" => Construction::A3,
            "percarry" => Construction::PerCarry,
            other => {
                let f = other
                    .strip_prefix("lf:f=")
                    .or_else(|| other.strip_prefix("lf:"))
                    .and_then(|x| x.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown construction {other}")))?;
                Construction::Lf(f)
            }
        };
        Ok(c)
    }
}

/// Builds the carries of `construction` over existing nodes.
pub fn adder_into(circuit: &mut Circuit, construction: Construction, p: &[NodeId], g: &[NodeId]) -> Result<Vec<NodeId>> {
    check_pairs(p, g)?;
    let n = p.len();
    match construction {
        Construction::Ripple => ripple_adder(circuit, p, g),
        Construction::Lf(f) => Ok(lf_combined_adder(circuit, p, g, f)?.carries),
        Construction::Halved => halved_adder(circuit, p, g),
        Construction::A1 => a1_with(circuit, p, g, a1_leaves()),
        Construction::A2 if n <= A2_THRESHOLD => Ok(lf_combined_adder(circuit, p, g, 0)?.carries),
        Construction::A2 => {
            let plan = LPartPlan::new(n, ceil_log2(n as u64) as usize, PartScheme::Halved)?;
            Ok(l_part_adder(circuit, p, g, &plan)?.carries)
        }
        Construction::A3 if n <= A3_THRESHOLD => Ok(lf_combined_adder(circuit, p, g, 0)?.carries),
        Construction::A3 => {
            let k = ((n as f64).log2().powi(2) - EPS).ceil() as usize;
            let plan = LPartPlan::new(n, k, PartScheme::Combined)?;
            Ok(l_part_adder(circuit, p, g, &plan)?.carries)
        }
        Construction::PerCarry => per_carry(circuit, p, g),
    }
}

pub const A2_THRESHOLD: usize = 1024;
pub const A3_THRESHOLD: usize = 2048;

/// Standalone adder: inputs `p0, g0, p1, g1, ...`, outputs `c1..cn`.
#[derive(Clone, Debug)]
pub struct AdderCircuit {
    pub construction: Construction,
    pub n: usize,
    pub circuit: Circuit,
}

impl AdderCircuit {
    pub fn oracle(&self) -> impl Fn(&[u64]) -> Vec<u64> {
        interleaved_carry_oracle
    }
}

/// Fresh interleaved inputs `p0, g0, p1, g1, ...`.
pub fn adder_inputs(circuit: &mut Circuit, n: usize) -> (Vec<NodeId>, Vec<NodeId>) {
    let mut p = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    for i in 0..n {
        p.push(circuit.add_input(format!("p{i}")));
        g.push(circuit.add_input(format!("g{i}")));
    }
    (p, g)
}

pub fn build_adder(construction: Construction, n: usize) -> Result<AdderCircuit> {
    let mut circuit = Circuit::new();
    let (p, g) = adder_inputs(&mut circuit, n);
    let carries = adder_into(&mut circuit, construction, &p, &g)?;
    for (i, c) in carries.into_iter().enumerate() {
        circuit.add_output(format!("c{}", i + 1), c)?;
    }
    Ok(AdderCircuit { construction, n, circuit })
}

/// Where the upper part's conjunctions of propagate signals come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrefixChoice {
    Chain,
    /// Ladner-Fischer with `min(f, ceil(log2 k_l))`.
    LadnerFischer(u32),
}

/// Where the incoming carry of the upper part comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AopChoice {
    /// The top carry of the lower adder.
    LowerCarry,
    /// A separate carry-path circuit.
    Synth(SynthMode),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoPartPlan {
    pub n: usize,
    pub k_l: usize,
    pub k_r: usize,
    pub child: Construction,
    pub prefix: PrefixChoice,
    pub aop: AopChoice,
}

impl TwoPartPlan {
    pub fn new(n: usize, child: Construction, prefix: PrefixChoice, aop: AopChoice) -> Result<Self> {
        if n < 2 {
            return Err(Error::OutOfRange(format!("two-part adder needs n >= 2, got {n}")));
        }
        Ok(TwoPartPlan { n, k_l: n / 2, k_r: n.div_ceil(2), child, prefix, aop })
    }
}

/// Lower `k_r` pairs and upper `k_l` pairs solved separately; upper carries
/// are patched with the incoming carry `c_{k_r}`.
pub fn two_part_adder(circuit: &mut Circuit, p: &[NodeId], g: &[NodeId], plan: &TwoPartPlan) -> Result<Vec<NodeId>> {
    check_pairs(p, g)?;
    if p.len() != plan.n {
        return Err(Error::LengthMismatch(format!("plan for {} pairs applied to {}", plan.n, p.len())));
    }
    let child = |c: &mut Circuit, p: &[NodeId], g: &[NodeId]| adder_into(c, plan.child, p, g);
    two_part_with(circuit, p, g, plan, child)
}

fn two_part_with(
    circuit: &mut Circuit,
    p: &[NodeId],
    g: &[NodeId],
    plan: &TwoPartPlan,
    mut child: impl FnMut(&mut Circuit, &[NodeId], &[NodeId]) -> Result<Vec<NodeId>>,
) -> Result<Vec<NodeId>> {
    let kr = plan.k_r;
    let mut carries = child(circuit, &p[..kr], &g[..kr])?;
    let local = child(circuit, &p[kr..], &g[kr..])?;
    let prefix = match plan.prefix {
        PrefixChoice::Chain => {
            let mut chain = vec![p[kr]];
            for &x in &p[kr + 1..] {
                let prev = chain[chain.len() - 1];
                chain.push(circuit.and(x, prev));
            }
            chain
        }
        PrefixChoice::LadnerFischer(f) => {
            and_prefix_circuit(circuit, &p[kr..], f.min(ceil_log2(plan.k_l as u64)))?
        }
    };
    let incoming = match plan.aop {
        AopChoice::LowerCarry => carries[kr - 1],
        AopChoice::Synth(mode) => carry_path(circuit, &p[..kr], &g[..kr], mode)?,
    };
    carries.extend(propagate_into(circuit, &local, &prefix, incoming));
    Ok(carries)
}

/// Carry `c_k` of `k` pairs as a standalone path circuit.
fn carry_path(circuit: &mut Circuit, p: &[NodeId], g: &[NodeId], mode: SynthMode) -> Result<NodeId> {
    let t = carry_path_inputs(p, g, p.len());
    Ok(synth_extended_aop_into(circuit, &[], &t, Polarity::FStar, mode)?.0)
}

/// The `k`-th circuit of the per-carry construction on its own: inputs
/// `p0, g0, ..., p_{k-1}, g_{k-1}`, single output `c_k`.
pub fn per_carry_component(k: usize) -> Result<Circuit> {
    if k == 0 {
        return Err(Error::OutOfRange("carry index starts at 1".into()));
    }
    let mut circuit = Circuit::new();
    let (p, g) = adder_inputs(&mut circuit, k);
    let c = carry_path(&mut circuit, &p, &g, SynthMode::Shared)?;
    circuit.add_output(format!("c{k}"), c)?;
    Ok(circuit)
}

fn per_carry(circuit: &mut Circuit, p: &[NodeId], g: &[NodeId]) -> Result<Vec<NodeId>> {
    (1..=p.len()).map(|k| carry_path(circuit, &p[..k], &g[..k], SynthMode::Shared)).collect()
}

/// Recursion leaf for a small first-family adder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum A1Leaf {
    Ripple,
    Lf0,
    Split,
}

const A1_SMALL: usize = 17;

fn a1_leaf(n: usize, table: &[A1Leaf]) -> A1Leaf {
    if n <= 3 {
        A1Leaf::Ripple
    } else if n <= A1_SMALL {
        table[n]
    } else {
        A1Leaf::Split
    }
}

fn a1_plan(n: usize) -> Result<TwoPartPlan> {
    TwoPartPlan::new(n, Construction::A1, PrefixChoice::LadnerFischer(2), AopChoice::Synth(SynthMode::Shared))
}

fn a1_with(circuit: &mut Circuit, p: &[NodeId], g: &[NodeId], table: &[A1Leaf]) -> Result<Vec<NodeId>> {
    match a1_leaf(p.len(), table) {
        A1Leaf::Ripple => ripple_adder(circuit, p, g),
        A1Leaf::Lf0 => Ok(lf_combined_adder(circuit, p, g, 0)?.carries),
        A1Leaf::Split => {
            let plan = a1_plan(p.len())?;
            two_part_with(circuit, p, g, &plan, |c, p, g| a1_with(c, p, g, table))
        }
    }
}

/// For `4 <= n <= 17`, the cheaper of L^0 and one split step, compared by
/// (depth, size).
fn a1_leaves() -> &'static [A1Leaf] {
    static TABLE: OnceLock<Vec<A1Leaf>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = vec![A1Leaf::Ripple; A1_SMALL + 1];
        for n in 4..=A1_SMALL {
            let measure = |leaf: A1Leaf, table: &[A1Leaf]| -> (u32, usize) {
                let mut c = Circuit::new();
                let (p, g) = adder_inputs(&mut c, n);
                let carries = match leaf {
                    A1Leaf::Lf0 => lf_combined_adder(&mut c, &p, &g, 0).map(|o| o.carries),
                    _ => {
                        let plan = a1_plan(n).expect("n >= 4");
                        two_part_with(&mut c, &p, &g, &plan, |c, p, g| a1_with(c, p, g, table))
                    }
                }
                .expect("small adder builds");
                for (i, v) in carries.into_iter().enumerate() {
                    c.add_output(format!("c{}", i + 1), v).expect("own node");
                }
                (c.depth(), c.size())
            };
            let lf = measure(A1Leaf::Lf0, &table);
            let split = measure(A1Leaf::Split, &table);
            table[n] = if split < lf { A1Leaf::Split } else { A1Leaf::Lf0 };
        }
        table
    })
}

/// How each part of a linearized adder computes its local carries and its
/// propagate conjunctions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartScheme {
    /// Halved adder plus a separate Ladner-Fischer AND-prefix (`f <= 2`).
    Halved,
    /// One combined network `L^f` with `f <= 3` for both.
    Combined,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPartPlan {
    pub n: usize,
    pub k: usize,
    pub scheme: PartScheme,
}

impl LPartPlan {
    pub fn new(n: usize, k: usize, scheme: PartScheme) -> Result<Self> {
        if n < 2 || k == 0 || k >= n {
            return Err(Error::OutOfRange(format!("part size {k} for {n} pairs")));
        }
        Ok(LPartPlan { n, k, scheme })
    }

    pub fn parts(&self) -> usize {
        self.n.div_ceil(self.k)
    }

    /// `(offset, length)` of each part, low to high; only the last can be short.
    pub fn part_bounds(&self) -> Vec<(usize, usize)> {
        (0..self.parts()).map(|j| (j * self.k, self.k.min(self.n - j * self.k))).collect()
    }
}

#[derive(Clone, Debug)]
pub struct LPartOutputs {
    pub carries: Vec<NodeId>,
    /// `spine[j - 1]` is the carry into part `j`, i.e. `c_{N_j}`.
    pub spine: Vec<NodeId>,
}

/// Splits the input into parts; a first-family spine adder over (part
/// conjunction, part carry path) pairs supplies the carry into every part.
pub fn l_part_adder(circuit: &mut Circuit, p: &[NodeId], g: &[NodeId], plan: &LPartPlan) -> Result<LPartOutputs> {
    check_pairs(p, g)?;
    if p.len() != plan.n {
        return Err(Error::LengthMismatch(format!("plan for {} pairs applied to {}", plan.n, p.len())));
    }
    let bounds = plan.part_bounds();
    let mut local = Vec::with_capacity(bounds.len());
    let mut prefixes = Vec::with_capacity(bounds.len());
    let mut spine_p = Vec::with_capacity(bounds.len());
    let mut spine_g = Vec::with_capacity(bounds.len());
    for (j, &(off, len)) in bounds.iter().enumerate() {
        let (pp, gg) = (&p[off..off + len], &g[off..off + len]);
        let f_cap = ceil_log2(len as u64);
        let (carries, prefix) = match plan.scheme {
            PartScheme::Halved => {
                let carries = halved_adder(circuit, pp, gg)?;
                let prefix = if j == 0 { Vec::new() } else { and_prefix_circuit(circuit, pp, f_cap.min(2))? };
                (carries, prefix)
            }
            PartScheme::Combined if j == 0 => (lf_carry_adder(circuit, pp, gg, f_cap.min(3))?, Vec::new()),
            PartScheme::Combined => {
                let out = lf_combined_adder(circuit, pp, gg, f_cap.min(3))?;
                (out.carries, out.and_prefix)
            }
        };
        spine_g.push(carry_path(circuit, pp, gg, SynthMode::Shared)?);
        spine_p.push(if j == 0 { p[0] } else { prefix[len - 1] });
        local.push(carries);
        prefixes.push(prefix);
    }
    let spine = a1_with(circuit, &spine_p, &spine_g, a1_leaves())?;
    let mut out = Vec::with_capacity(plan.n);
    for (j, carries) in local.into_iter().enumerate() {
        if j == 0 {
            out.extend(carries);
        } else {
            out.extend(propagate_into(circuit, &carries, &prefixes[j], spine[j - 1]));
        }
    }
    let spine_carries = spine[..bounds.len() - 1].to_vec();
    Ok(LPartOutputs { carries: out, spine: spine_carries })
}

/// A depth and size guarantee with the formulas they come from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub depth: Option<u32>,
    pub depth_formula: Option<String>,
    pub size: Option<f64>,
    pub size_formula: Option<String>,
}

impl Bounds {
    pub fn none() -> Self {
        Bounds { depth: None, depth_formula: None, size: None, size_formula: None }
    }

    pub fn holds(&self, depth: u32, size: usize) -> bool {
        self.depth.is_none_or(|d| depth <= d) && self.size.is_none_or(|s| size as f64 <= s + EPS)
    }
}

fn lg(x: f64) -> f64 {
    x.log2()
}

pub fn adder_bounds(construction: Construction, n: usize) -> Bounds {
    let nf = n as f64;
    let floor = |x: f64| (x + EPS).floor() as u32;
    let both = |d: u32, df: &str, s: f64, sf: &str| Bounds {
        depth: Some(d),
        depth_formula: Some(df.to_string()),
        size: Some(s),
        size_formula: Some(sf.to_string()),
    };
    if n == 0 {
        return Bounds::none();
    }
    match construction {
        Construction::Ripple => {
            let v = 2 * n - 2;
            both(v as u32, "2n - 2", v as f64, "2n - 2")
        }
        Construction::Lf(f) => both(
            2 * (ceil_log2(n as u64) + f),
            "2(ceil(log2 n) + f)",
            (6.0 * (1.0 + 0.5f64.powi(f as i32)) * nf).ceil(),
            "ceil(6(1 + 2^-f) n)",
        ),
        Construction::Halved => both(n as u32 + 2, "n + 2", 3.5 * nf, "3.5 n"),
        Construction::A1 if n >= 3 => both(
            floor(lg(nf) + lg(lg(nf)) + 2.65),
            "floor(log2 n + log2 log2 n + 2.65)",
            6.2 * nf * lg(nf),
            "6.2 n log2 n",
        ),
        Construction::A2 if n >= 4 => both(
            floor(lg(nf) + lg(lg(nf)) + lg(lg(lg(nf))) + 6.6),
            "floor(log2 n + log2 log2 n + log2 log2 log2 n + 6.6)",
            21.6 * nf,
            "21.6 n",
        ),
        Construction::A3 if n >= 4 => both(
            floor(lg(nf) + lg(lg(nf)) + lg(lg(lg(nf))) + 7.6),
            "floor(log2 n + log2 log2 n + log2 log2 log2 n + 7.6)",
            16.7 * nf,
            "16.7 n",
        ),
        Construction::PerCarry => Bounds {
            depth: Some(crate::aop::aop_depth_formula(2 * n as u64 - 1)),
            depth_formula: Some("floor(log2 m + log2 log2 m + 0.65), m = 2n - 1".into()),
            size: None,
            size_formula: None,
        },
        _ => Bounds::none(),
    }
}
