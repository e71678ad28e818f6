//! Functional equivalence checks against an oracle.

use crate::circuit::Circuit;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const EXHAUSTIVE_CAP: usize = 24;
pub const DEFAULT_TRIALS: usize = 10_000;
pub const DEFAULT_SEED: u64 = 0xC1AC0DE;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerifyMode {
    Exhaustive,
    Random { trials: usize, seed: u64 },
}

impl VerifyMode {
    pub fn random_default() -> Self {
        VerifyMode::Random { trials: DEFAULT_TRIALS, seed: DEFAULT_SEED }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass { checked: u64 },
    Fail { assignment: Vec<bool>, expected: Vec<bool>, actual: Vec<bool> },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }
}

/// Bit-parallel oracle: input lanes in circuit input order, output lanes in
/// circuit output order.
pub type Oracle<'a> = &'a dyn Fn(&[u64]) -> Vec<u64>;

pub fn verify_equivalence(circuit: &Circuit, oracle: Oracle, mode: VerifyMode) -> Result<Verdict> {
    let n = circuit.num_inputs();
    let mut batch = Batch::new(circuit, oracle);
    match mode {
        VerifyMode::Exhaustive => {
            if n > EXHAUSTIVE_CAP {
                return Err(Error::ExhaustiveTooLarge { inputs: n, cap: EXHAUSTIVE_CAP });
            }
            let total = 1u64 << n;
            let valid = if total >= 64 { !0 } else { (1u64 << total) - 1 };
            for block in 0..total.div_ceil(64) {
                let lanes = (0..n).map(|i| exhaustive_lane(i, block)).collect();
                if let Some(fail) = batch.push(lanes, valid)? {
                    return Ok(fail);
                }
            }
        }
        VerifyMode::Random { trials, seed } => {
            for (lanes, valid) in structured_blocks(n) {
                if let Some(fail) = batch.push(lanes, valid)? {
                    return Ok(fail);
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut left = trials;
            while left > 0 {
                let take = left.min(64);
                let valid = if take == 64 { !0 } else { (1u64 << take) - 1 };
                let lanes = (0..n).map(|_| rng.random::<u64>()).collect();
                if let Some(fail) = batch.push(lanes, valid)? {
                    return Ok(fail);
                }
                left -= take;
            }
        }
    }
    if let Some(fail) = batch.flush()? {
        return Ok(fail);
    }
    Ok(Verdict::Pass { checked: batch.checked })
}

const WIDTH: usize = 8;

/// Collects blocks of 64 assignments and evaluates them `WIDTH` at a time.
struct Batch<'a> {
    circuit: &'a Circuit,
    oracle: Oracle<'a>,
    blocks: Vec<(Vec<u64>, u64)>,
    checked: u64,
}

impl<'a> Batch<'a> {
    fn new(circuit: &'a Circuit, oracle: Oracle<'a>) -> Self {
        Batch { circuit, oracle, blocks: Vec::with_capacity(WIDTH), checked: 0 }
    }

    fn push(&mut self, lanes: Vec<u64>, valid: u64) -> Result<Option<Verdict>> {
        self.blocks.push((lanes, valid));
        if self.blocks.len() == WIDTH {
            self.flush()
        } else {
            Ok(None)
        }
    }

    fn flush(&mut self) -> Result<Option<Verdict>> {
        if self.blocks.is_empty() {
            return Ok(None);
        }
        let n = self.circuit.num_inputs();
        let wide: Vec<[u64; WIDTH]> = (0..n)
            .map(|i| std::array::from_fn(|w| self.blocks.get(w).map_or(0, |b| b.0[i])))
            .collect();
        let got = self.circuit.eval_wide(&wide)?;
        for (w, (lanes, valid)) in self.blocks.iter().enumerate() {
            let got: Vec<u64> = got.iter().map(|o| o[w]).collect();
            if let Some(fail) = compare(&got, (self.oracle)(lanes), lanes, *valid)? {
                return Ok(Some(fail));
            }
            self.checked += valid.count_ones() as u64;
        }
        self.blocks.clear();
        Ok(None)
    }
}

fn compare(got: &[u64], want: Vec<u64>, lanes: &[u64], valid: u64) -> Result<Option<Verdict>> {
    if got.len() != want.len() {
        return Err(Error::LengthMismatch(format!(
            "circuit has {} outputs, oracle returned {}",
            got.len(),
            want.len()
        )));
    }
    let mut diff = 0u64;
    for (a, b) in got.iter().zip(&want) {
        diff |= a ^ b;
    }
    diff &= valid;
    if diff == 0 {
        return Ok(None);
    }
    let lane = diff.trailing_zeros();
    let bit = |x: u64| (x >> lane) & 1 == 1;
    Ok(Some(Verdict::Fail {
        assignment: lanes.iter().map(|&x| bit(x)).collect(),
        expected: want.iter().map(|&x| bit(x)).collect(),
        actual: got.iter().map(|&x| bit(x)).collect(),
    }))
}

/// Lane pattern of input `i` in exhaustive block `block`: assignment number
/// `64 * block + lane`.
fn exhaustive_lane(i: usize, block: u64) -> u64 {
    const PATTERNS: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    if i < 6 {
        PATTERNS[i]
    } else if (block >> (i - 6)) & 1 == 1 {
        !0
    } else {
        0
    }
}

/// All-zeros, all-ones and every single-hot vector, packed 64 per block.
fn structured_blocks(n: usize) -> Vec<(Vec<u64>, u64)> {
    // vector 0 is all-zeros, 1 all-ones, 2 + i has only input i set
    let count = n + 2;
    (0..count.div_ceil(64))
        .map(|block| {
            let first = 64 * block;
            let width = (count - first).min(64);
            let ones = if first == 0 { 0b10 } else { 0 };
            let lanes = (0..n)
                .map(|i| {
                    let hot = i + 2;
                    let own = if hot / 64 == block { 1u64 << (hot % 64) } else { 0 };
                    ones | own
                })
                .collect();
            let valid = if width == 64 { !0 } else { (1u64 << width) - 1 };
            (lanes, valid)
        })
        .collect()
}
