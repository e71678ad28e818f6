use monosynth::prefix::{and_prefix_circuit, halved_adder, lf_carry_adder, lf_combined_adder, lf_plan, ripple_adder};
use monosynth::verify::{verify_equivalence, VerifyMode};
use monosynth::{Circuit, NodeId};
use proptest::prelude::*;

fn ceil_log2(n: usize) -> u32 {
    let mut d = 0;
    while (1usize << d) < n {
        d += 1;
    }
    d
}

/// Carries by the recurrence, over interleaved `p0, g0, p1, g1, ...` lanes.
fn carries_by_recurrence(lanes: &[u64]) -> Vec<u64> {
    let mut c = 0u64;
    lanes
        .chunks(2)
        .map(|pg| {
            c = pg[1] | (pg[0] & c);
            c
        })
        .collect()
}

fn pairs(c: &mut Circuit, n: usize) -> (Vec<NodeId>, Vec<NodeId>) {
    let mut p = Vec::new();
    let mut g = Vec::new();
    for i in 0..n {
        p.push(c.add_input(format!("p{i}")));
        g.push(c.add_input(format!("g{i}")));
    }
    (p, g)
}

fn mode(inputs: usize) -> VerifyMode {
    if inputs <= 20 {
        VerifyMode::Exhaustive
    } else {
        VerifyMode::Random { trials: 2000, seed: 3 }
    }
}

fn assert_carries(c: &mut Circuit, carries: Vec<NodeId>) {
    for (i, v) in carries.into_iter().enumerate() {
        c.add_output(format!("c{}", i + 1), v).unwrap();
    }
    let v = verify_equivalence(c, &carries_by_recurrence, mode(c.num_inputs())).unwrap();
    assert!(v.passed(), "{v:?}");
}

#[test]
fn prefix_plan_bounds() {
    for n in 1..=300usize {
        for f in 0..=ceil_log2(n) {
            let plan = lf_plan(n, f).unwrap();
            assert!(plan.depth() <= ceil_log2(n) + f, "n={n} f={f}");
            assert!(plan.size() as f64 <= 2.0 * (1.0 + 0.5f64.powi(f as i32)) * n as f64, "n={n} f={f}");
        }
    }
}

#[test]
fn prefix_examples() {
    let plan = lf_plan(5, 1).unwrap();
    assert!(plan.depth() <= 4);
    assert!(plan.size() * 3 <= 15);
    let plan = lf_plan(1024, 2).unwrap();
    assert!(plan.depth() <= 12);
    assert!(plan.size() <= 2560);
}

#[test]
fn and_prefix_exhaustive() {
    for n in 1..=20usize {
        for f in 0..=ceil_log2(n).min(3) {
            let mut c = Circuit::new();
            let xs: Vec<NodeId> = (0..n).map(|i| c.add_input(format!("z{i}"))).collect();
            let out = and_prefix_circuit(&mut c, &xs, f).unwrap();
            for (i, o) in out.into_iter().enumerate() {
                c.add_output(format!("y{i}"), o).unwrap();
            }
            assert!(c.depth() <= ceil_log2(n) + f);
            let oracle = |lanes: &[u64]| {
                (0..lanes.len()).map(|i| lanes[..=i].iter().fold(!0u64, |a, &b| a & b)).collect::<Vec<_>>()
            };
            assert!(verify_equivalence(&c, &oracle, VerifyMode::Exhaustive).unwrap().passed());
        }
    }
}

#[test]
fn carry_operator_is_associative() {
    // (g, p) pairs, high operand first
    let op = |(g1, p1): (bool, bool), (g0, p0): (bool, bool)| (g1 || (p1 && g0), p1 && p0);
    for bits in 0u32..64 {
        let v = |i: u32| (bits >> (2 * i) & 1 == 1, bits >> (2 * i + 1) & 1 == 1);
        let (c, b, a) = (v(2), v(1), v(0));
        assert_eq!(op(op(c, b), a), op(c, op(b, a)));
    }
}

#[test]
fn combined_network_outputs() {
    for n in 1..=10usize {
        for f in 0..=ceil_log2(n) {
            let mut c = Circuit::new();
            let (p, g) = pairs(&mut c, n);
            let out = lf_combined_adder(&mut c, &p, &g, f).unwrap();
            let steps = lf_plan(n, f).unwrap().size();
            assert_eq!(c.size(), 3 * steps);
            assert!(c.depth() <= 2 * (ceil_log2(n) + f));
            let mut reference = Circuit::new();
            let (rp, _) = pairs(&mut reference, n);
            let chain = and_prefix_circuit(&mut reference, &rp, f).unwrap();
            assert_eq!(out.and_prefix.len(), chain.len());
            // x outputs compute the AND-prefix of the propagate signals
            for (i, &x) in out.and_prefix.iter().enumerate() {
                c.add_output(format!("x{i}"), x).unwrap();
            }
            let oracle = |lanes: &[u64]| {
                let mut acc = !0u64;
                lanes.chunks(2).map(|pg| {
                    acc &= pg[0];
                    acc
                }).collect::<Vec<_>>()
            };
            assert!(verify_equivalence(&c, &oracle, VerifyMode::Exhaustive).unwrap().passed());
            let mut c = Circuit::new();
            let (p, g) = pairs(&mut c, n);
            let out = lf_combined_adder(&mut c, &p, &g, f).unwrap();
            assert_carries(&mut c, out.carries);
        }
    }
}

#[test]
fn carry_network_drops_unused_conjunctions() {
    for n in 1..=40usize {
        for f in 0..=ceil_log2(n).min(3) {
            let mut full = Circuit::new();
            let (p, g) = pairs(&mut full, n);
            lf_combined_adder(&mut full, &p, &g, f).unwrap();
            let mut c = Circuit::new();
            let (p, g) = pairs(&mut c, n);
            let carries = lf_carry_adder(&mut c, &p, &g, f).unwrap();
            assert!(c.size() <= full.size());
            assert_carries(&mut c, carries);
            assert!(c.depth() <= 2 * (ceil_log2(n) + f));
        }
    }
}

#[test]
fn ripple_shape() {
    for n in 1..=12usize {
        let mut c = Circuit::new();
        let (p, g) = pairs(&mut c, n);
        let carries = ripple_adder(&mut c, &p, &g).unwrap();
        assert_eq!(c.size(), 2 * n - 2);
        assert_carries(&mut c, carries);
        assert_eq!(c.depth() as usize, 2 * n - 2);
    }
}

#[test]
fn halved_adder_bounds() {
    for n in 0..256usize {
        let mut c = Circuit::new();
        let (p, g) = pairs(&mut c, n);
        let carries = halved_adder(&mut c, &p, &g).unwrap();
        assert_eq!(carries.len(), n);
        assert!(c.size() as f64 <= 3.5 * n as f64, "n={n}");
        if n > 0 {
            assert_carries(&mut c, carries);
            assert!(c.depth() as usize <= n + 2, "n={n}");
        }
    }
}

#[test]
fn mismatched_pairs_are_rejected() {
    let mut c = Circuit::new();
    let (p, g) = pairs(&mut c, 3);
    assert!(ripple_adder(&mut c, &p, &g[..2]).is_err());
    assert!(lf_combined_adder(&mut c, &[], &[], 0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn plan_outputs_cover_prefixes(n in 1usize..=2000, f in 0u32..=4) {
        let f = f.min(ceil_log2(n));
        let plan = lf_plan(n, f).unwrap();
        let segs: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
        let mut adjacent = true;
        let out = plan.instantiate(&segs, |&(lo1, hi1), &(lo0, hi0)| {
            adjacent &= hi0 + 1 == lo1;
            (lo0, hi1)
        });
        prop_assert!(adjacent);
        for (i, seg) in out.into_iter().enumerate() {
            prop_assert_eq!(seg, (0, i));
        }
        prop_assert!(plan.depth() <= ceil_log2(n) + f);
    }

    #[test]
    fn random_lf_adders(n in 1usize..=150, f in 0u32..=3) {
        let f = f.min(ceil_log2(n));
        let mut c = Circuit::new();
        let (p, g) = pairs(&mut c, n);
        let carries = lf_combined_adder(&mut c, &p, &g, f).unwrap().carries;
        assert_carries(&mut c, carries);
    }
}
