use monosynth::export::{parse_blif, to_blif, to_dot, to_json};
use monosynth::reference::{aop_lanes, aop_reference, carry_reference, extended_aop_reference, Polarity};
use monosynth::verify::{verify_equivalence, Verdict, VerifyMode};
use monosynth::{Circuit, Error, GateKind, Node, NodeId};
use proptest::prelude::*;

/// The plain right-leaning path on five inputs.
fn standard_path() -> Circuit {
    let mut c = Circuit::new();
    let t: Vec<NodeId> = (0..5).map(|i| c.add_input(format!("t{i}"))).collect();
    let a = c.or(t[3], t[4]);
    let b = c.and(t[2], a);
    let d = c.or(t[1], b);
    let root = c.and(t[0], d);
    c.add_output("f", root).unwrap();
    c
}

/// Depth-3 form of the same function:
/// (t0 ∧ (t1 ∨ t2)) ∧ (t1 ∨ t3 ∨ t4).
fn restructured_path() -> Circuit {
    let mut c = Circuit::new();
    let t: Vec<NodeId> = (0..5).map(|i| c.add_input(format!("t{i}"))).collect();
    let a = c.or(t[1], t[2]);
    let b = c.and(t[0], a);
    let d = c.or(t[1], t[3]);
    let e = c.or(d, t[4]);
    let root = c.and(b, e);
    c.add_output("f", root).unwrap();
    c
}

fn path_oracle(polarity: Polarity) -> impl Fn(&[u64]) -> Vec<u64> {
    move |lanes: &[u64]| vec![aop_lanes(lanes, polarity).unwrap()]
}

#[test]
fn ids_are_contiguous_and_labels_are_metadata() {
    let mut c = Circuit::new();
    let a = c.add_input("x");
    let b = c.add_input("x");
    assert_ne!(a, b);
    let g = c.and(a, b);
    assert_eq!(c.add_input("g2"), NodeId(3));
    assert_eq!(g, NodeId(2));
}

#[test]
fn gate_depths_and_errors() {
    let mut c = Circuit::new();
    let x = c.add_input("x");
    let y = c.add_input("y");
    let g = c.add_gate(GateKind::And, x, y).unwrap();
    assert_eq!(c.node_depth(g), 1);
    let h = c.or(g, x);
    let k = c.and(h, y);
    assert_eq!(c.node_depth(k), 3);
    assert!(matches!(c.add_gate(GateKind::Or, x, NodeId(99)), Err(Error::UnknownNode { .. })));
    assert!(c.add_output("bad", NodeId(42)).is_err());
    let empty = Circuit::new();
    assert_eq!((empty.depth(), empty.size(), empty.fanout()), (0, 0, 0));
}

#[test]
fn evaluation_basics() {
    let mut c = Circuit::new();
    let x = c.add_input("x");
    let y = c.add_input("y");
    let a = c.and(x, y);
    let o = c.or(x, y);
    c.add_output("a", a).unwrap();
    c.add_output("o", o).unwrap();
    assert_eq!(c.evaluate(&[true, true]).unwrap(), vec![true, true]);
    assert_eq!(c.evaluate(&[false, false]).unwrap(), vec![false, false]);
    assert!(matches!(c.evaluate(&[true]), Err(Error::AssignmentLength { .. })));
}

#[test]
fn five_input_path_circuits() {
    let c1 = standard_path();
    assert_eq!((c1.depth(), c1.size()), (4, 4));
    let c2 = restructured_path();
    assert_eq!((c2.depth(), c2.size()), (3, 5));
    assert_eq!(c2.evaluate(&[true, false, true, false, true]).unwrap(), vec![true]);
    for c in [&c1, &c2] {
        let v = verify_equivalence(c, &path_oracle(Polarity::F), VerifyMode::Exhaustive).unwrap();
        assert_eq!(v, Verdict::Pass { checked: 32 });
    }
}

#[test]
fn mismatch_reports_a_counterexample() {
    let mut c = Circuit::new();
    let t: Vec<NodeId> = (0..3).map(|i| c.add_input(format!("t{i}"))).collect();
    let g = c.and(t[0], t[1]);
    c.add_output("f", g).unwrap();
    let v = verify_equivalence(&c, &path_oracle(Polarity::F), VerifyMode::Exhaustive).unwrap();
    // t0 ∧ (t1 ∨ t2) differs from t0 ∧ t1 exactly at (1, 0, 1)
    match v {
        Verdict::Fail { assignment, expected, actual } => {
            assert_eq!(assignment, vec![true, false, true]);
            assert_eq!((expected, actual), (vec![true], vec![false]));
        }
        other => panic!("expected a mismatch, got {other:?}"),
    }
    let self_oracle = |lanes: &[u64]| vec![lanes[0] & lanes[1]];
    assert!(verify_equivalence(&c, &self_oracle, VerifyMode::Exhaustive).unwrap().passed());
    assert!(verify_equivalence(&c, &self_oracle, VerifyMode::random_default()).unwrap().passed());
}

#[test]
fn exhaustive_cap() {
    let mut c = Circuit::new();
    let xs: Vec<NodeId> = (0..25).map(|i| c.add_input(format!("x{i}"))).collect();
    c.add_output("y", xs[0]).unwrap();
    let id = |lanes: &[u64]| vec![lanes[0]];
    assert!(matches!(
        verify_equivalence(&c, &id, VerifyMode::Exhaustive),
        Err(Error::ExhaustiveTooLarge { .. })
    ));
    assert!(verify_equivalence(&c, &id, VerifyMode::random_default()).unwrap().passed());
}

#[test]
fn random_mode_catches_single_hot_differences() {
    // differs from the oracle only when exactly input 17 is set alone
    let mut c = Circuit::new();
    let xs: Vec<NodeId> = (0..40).map(|i| c.add_input(format!("x{i}"))).collect();
    let mut acc = xs[0];
    for &x in &xs[1..] {
        if x != xs[17] {
            acc = c.or(acc, x);
        }
    }
    c.add_output("y", acc).unwrap();
    let any = |lanes: &[u64]| vec![lanes.iter().fold(0, |a, &b| a | b)];
    let v = verify_equivalence(&c, &any, VerifyMode::Random { trials: 0, seed: 1 }).unwrap();
    assert!(!v.passed());
}

#[test]
fn path_reference_examples() {
    assert!(aop_reference(&[true], Polarity::F).unwrap());
    assert!(aop_reference(&[true, false, true, true, true], Polarity::F).unwrap());
    assert!(!aop_reference(&[false, true, false], Polarity::FStar).unwrap());
    assert!(aop_reference(&[], Polarity::F).is_err());
    assert!(extended_aop_reference(&[true, true], &[], Polarity::F).unwrap());
    assert!(!extended_aop_reference(&[true, false], &[true], Polarity::F).unwrap());
    assert!(extended_aop_reference(&[true], &[true, false, true], Polarity::F).unwrap());
    assert!(extended_aop_reference(&[], &[], Polarity::F).is_err());
}

#[test]
fn carry_reference_examples() {
    assert_eq!(carry_reference(&[false], &[true]).unwrap(), vec![true]);
    assert_eq!(carry_reference(&[false, true], &[true, false]).unwrap(), vec![true, true]);
    assert_eq!(carry_reference(&[false, false, true], &[false, true, false]).unwrap(), vec![false, true, true]);
    assert!(carry_reference(&[true], &[true, false]).is_err());
    // p0 is never read
    for bits in 0u32..64 {
        let p: Vec<bool> = (0..3).map(|i| bits >> i & 1 == 1).collect();
        let g: Vec<bool> = (3..6).map(|i| bits >> i & 1 == 1).collect();
        let mut flipped = p.clone();
        flipped[0] = !flipped[0];
        assert_eq!(carry_reference(&p, &g).unwrap(), carry_reference(&flipped, &g).unwrap());
    }
}

#[test]
fn dualize_swaps_gate_kinds() {
    let mut c = Circuit::new();
    let x = c.add_input("x");
    let y = c.add_input("y");
    let a = c.and(x, y);
    c.add_output("y", a).unwrap();
    let d = c.dualize();
    assert!(matches!(d.node(a), Node::Gate { kind: GateKind::Or, .. }));
    assert_eq!(d.dualize(), c);
}

#[test]
fn export_formats() {
    let c = restructured_path();
    let dot = to_dot(&c);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("shape=box").count(), 5);
    let json = to_json(&c);
    assert_eq!(json["nodes"].as_array().unwrap().len(), c.num_nodes());
    assert_eq!(json["metrics"]["depth"], 3);
    assert_eq!(json["metrics"]["size"], 5);

    let mut wire = Circuit::new();
    let a = wire.add_input("a");
    wire.add_output("y", a).unwrap();
    let blif = to_blif(&wire, "wire");
    assert!(blif.contains(".names a y\n1 1\n"), "{blif}");
    let back = parse_blif(&blif).unwrap();
    assert_eq!(back.evaluate(&[true]).unwrap(), vec![true]);
}

#[test]
fn ripple_blif_has_four_gates() {
    let a = monosynth::adder::build_adder(monosynth::adder::Construction::Ripple, 3).unwrap();
    let blif = to_blif(&a.circuit, "ripple");
    let gate_rows = blif.lines().filter(|l| *l == "11 1" || *l == "1- 1").count();
    assert_eq!(gate_rows, 4);
}

#[test]
fn blif_rejects_garbage() {
    assert!(parse_blif(".model x\n.inputs a\n.outputs y\n.names a b y\n10 1\n.end\n").is_err());
    assert!(parse_blif(".model x\n.inputs a\n.outputs y\n.end\n").is_err());
}

#[derive(Clone, Debug)]
struct Recipe {
    inputs: usize,
    gates: Vec<(bool, usize, usize)>,
    outputs: Vec<usize>,
}

fn recipe(max_inputs: usize) -> impl Strategy<Value = Recipe> {
    (1..=max_inputs, 0usize..40).prop_flat_map(|(inputs, gates)| {
        let gate_specs = (0..gates)
            .map(|i| (any::<bool>(), 0..inputs + i, 0..inputs + i))
            .collect::<Vec<_>>();
        (Just(inputs), gate_specs, prop::collection::vec(0..inputs + gates, 1..4))
            .prop_map(|(inputs, gates, outputs)| Recipe { inputs, gates, outputs })
    })
}

fn build(r: &Recipe) -> Circuit {
    let mut c = Circuit::new();
    for i in 0..r.inputs {
        c.add_input(format!("x{i}"));
    }
    for &(is_and, a, b) in &r.gates {
        let kind = if is_and { GateKind::And } else { GateKind::Or };
        c.add_gate(kind, NodeId(a), NodeId(b)).unwrap();
    }
    for (k, &o) in r.outputs.iter().enumerate() {
        c.add_output(format!("y{k}"), NodeId(o)).unwrap();
    }
    c
}

/// Scalar evaluation straight from the recipe.
fn eval_recipe(r: &Recipe, x: &[bool]) -> Vec<bool> {
    let mut v: Vec<bool> = x.to_vec();
    for &(is_and, a, b) in &r.gates {
        v.push(if is_and { v[a] && v[b] } else { v[a] || v[b] });
    }
    r.outputs.iter().map(|&o| v[o]).collect()
}

proptest! {
    #[test]
    fn metrics_match_recomputation(r in recipe(8)) {
        let c = build(&r);
        let mut depth = vec![0u32; r.inputs];
        let mut succ = vec![0usize; r.inputs + r.gates.len()];
        for &(_, a, b) in &r.gates {
            depth.push(1 + depth[a].max(depth[b]));
            succ[a] += 1;
            succ[b] += 1;
        }
        let want_depth = r.outputs.iter().map(|&o| depth[o]).max().unwrap();
        prop_assert_eq!(c.depth(), want_depth);
        prop_assert_eq!(c.size(), r.gates.len());
        prop_assert_eq!(c.fanout(), succ.iter().copied().max().unwrap());
        for (i, node) in c.nodes().iter().enumerate() {
            if let Node::Gate { left, right, .. } = node {
                prop_assert!(left.index() < i && right.index() < i);
            }
        }
    }

    #[test]
    fn evaluation_matches_scalar_model(r in recipe(8), bits in any::<u8>()) {
        let c = build(&r);
        let x: Vec<bool> = (0..r.inputs).map(|i| bits >> i & 1 == 1).collect();
        prop_assert_eq!(c.evaluate(&x).unwrap(), eval_recipe(&r, &x));
    }

    #[test]
    fn de_morgan_duality(r in recipe(10)) {
        let c = build(&r);
        let d = c.dualize();
        for bits in 0u32..(1 << r.inputs) {
            let x: Vec<bool> = (0..r.inputs).map(|i| bits >> i & 1 == 1).collect();
            let nx: Vec<bool> = x.iter().map(|b| !b).collect();
            let lhs = d.evaluate(&nx).unwrap();
            let rhs: Vec<bool> = c.evaluate(&x).unwrap().into_iter().map(|b| !b).collect();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn blif_round_trip(r in recipe(12)) {
        let c = build(&r);
        let back = parse_blif(&to_blif(&c, "rt")).unwrap();
        prop_assert_eq!(back.num_inputs(), c.num_inputs());
        let oracle = |lanes: &[u64]| c.eval_lanes(lanes).unwrap();
        prop_assert!(verify_equivalence(&back, &oracle, VerifyMode::Exhaustive).unwrap().passed());
    }

    #[test]
    fn dot_lists_every_node(r in recipe(6)) {
        let c = build(&r);
        let dot = to_dot(&c);
        let declared = dot.lines().filter(|l| l.trim_start().starts_with('n') && l.contains("[label")).count();
        prop_assert_eq!(declared, c.num_nodes());
    }
}
