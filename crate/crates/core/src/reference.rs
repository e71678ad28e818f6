//! Direct evaluations of the target functions, used as verification oracles.
//!
//! Each function has a bit-parallel form over `u64` lanes and a scalar form.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Which of the two dual path functions is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarity {
    /// Conjunction-rooted: `t0 ∧ (t1 ∨ (t2 ∧ ...))`.
    F,
    /// Disjunction-rooted: `t0 ∨ (t1 ∧ (t2 ∨ ...))`.
    FStar,
}

impl Polarity {
    pub fn dual(self) -> Polarity {
        match self {
            Polarity::F => Polarity::FStar,
            Polarity::FStar => Polarity::F,
        }
    }

    /// Gate kind at the root.
    pub fn kind(self) -> crate::GateKind {
        match self {
            Polarity::F => crate::GateKind::And,
            Polarity::FStar => crate::GateKind::Or,
        }
    }
}

/// Shape of an extended AND-OR path: `n_sym` symmetric inputs and `m_alt`
/// alternating inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AopShape {
    pub n_sym: usize,
    pub m_alt: usize,
    pub polarity: Polarity,
}

fn path_lanes(t: &[u64], polarity: Polarity) -> u64 {
    let m = t.len();
    let mut acc = t[m - 1];
    for i in (0..m - 1).rev() {
        // position i uses the root kind on even levels, the dual on odd ones
        let and_here = (i % 2 == 0) == (polarity == Polarity::F);
        acc = if and_here { t[i] & acc } else { t[i] | acc };
    }
    acc
}

pub fn aop_lanes(t: &[u64], polarity: Polarity) -> Result<u64> {
    if t.is_empty() {
        return Err(Error::Empty("AND-OR path needs at least one input"));
    }
    Ok(path_lanes(t, polarity))
}

pub fn aop_reference(t: &[bool], polarity: Polarity) -> Result<bool> {
    let lanes: Vec<u64> = t.iter().map(|&b| b as u64).collect();
    Ok(aop_lanes(&lanes, polarity)? & 1 == 1)
}

/// `Sym(s) ∧ g(t)` for [`Polarity::F`], `Sym(s) ∨ g*(t)` for the dual.
pub fn extended_aop_lanes(s: &[u64], t: &[u64], polarity: Polarity) -> Result<u64> {
    if s.is_empty() && t.is_empty() {
        return Err(Error::Empty("extended AND-OR path needs at least one input"));
    }
    let (mut acc, and) = match polarity {
        Polarity::F => (!0u64, true),
        Polarity::FStar => (0u64, false),
    };
    for &x in s {
        acc = if and { acc & x } else { acc | x };
    }
    if !t.is_empty() {
        let g = path_lanes(t, polarity);
        acc = if and { acc & g } else { acc | g };
    }
    Ok(acc)
}

pub fn extended_aop_reference(s: &[bool], t: &[bool], polarity: Polarity) -> Result<bool> {
    let s: Vec<u64> = s.iter().map(|&b| b as u64).collect();
    let t: Vec<u64> = t.iter().map(|&b| b as u64).collect();
    Ok(extended_aop_lanes(&s, &t, polarity)? & 1 == 1)
}

/// Carries `c_1..c_n` of `c_{i+1} = g_i ∨ (p_i ∧ c_i)`, `c_0 = 0`.
/// `p[0]` is never read.
pub fn carry_lanes(p: &[u64], g: &[u64]) -> Result<Vec<u64>> {
    if p.len() != g.len() {
        return Err(Error::LengthMismatch(format!("{} propagate vs {} generate signals", p.len(), g.len())));
    }
    if g.is_empty() {
        return Err(Error::Empty("adder needs at least one input pair"));
    }
    let mut c = Vec::with_capacity(g.len());
    let mut carry = g[0];
    c.push(carry);
    for i in 1..g.len() {
        carry = g[i] | (p[i] & carry);
        c.push(carry);
    }
    Ok(c)
}

pub fn carry_reference(p: &[bool], g: &[bool]) -> Result<Vec<bool>> {
    let p: Vec<u64> = p.iter().map(|&b| b as u64).collect();
    let g: Vec<u64> = g.iter().map(|&b| b as u64).collect();
    Ok(carry_lanes(&p, &g)?.into_iter().map(|x| x & 1 == 1).collect())
}

/// Oracle for adder circuits whose inputs are ordered `p0, g0, p1, g1, ...`.
pub fn interleaved_carry_oracle(lanes: &[u64]) -> Vec<u64> {
    let p: Vec<u64> = lanes.iter().step_by(2).copied().collect();
    let g: Vec<u64> = lanes.iter().skip(1).step_by(2).copied().collect();
    carry_lanes(&p, &g).expect("interleaved adder inputs")
}
