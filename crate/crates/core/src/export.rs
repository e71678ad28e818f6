//! DOT, BLIF and JSON writers, plus a reader for the BLIF subset we emit.

use crate::circuit::{Circuit, GateKind, Node, NodeId};
use crate::{Error, Result};
use serde_json::json;
use std::collections::{HashMap, HashSet};
use std::fmt::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Dot,
    Blif,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Dot => "dot",
            Format::Blif => "blif",
            Format::Json => "json",
        }
    }
}

pub fn export(circuit: &Circuit, format: Format) -> String {
    match format {
        Format::Dot => to_dot(circuit),
        Format::Blif => to_blif(circuit, "circuit"),
        Format::Json => to_json(circuit).to_string(),
    }
}

fn output_names(circuit: &Circuit) -> HashMap<usize, Vec<&str>> {
    let mut names: HashMap<usize, Vec<&str>> = HashMap::new();
    for (name, v) in circuit.outputs() {
        names.entry(v.0).or_default().push(name.as_str());
    }
    names
}

pub fn to_dot(circuit: &Circuit) -> String {
    let outs = output_names(circuit);
    let mut s = String::from("digraph circuit {\n  rankdir=BT;\n");
    for (i, node) in circuit.nodes().iter().enumerate() {
        let xlabel = outs
            .get(&i)
            .map(|n| format!(", xlabel=\"out: {}\"", n.join(",")))
            .unwrap_or_default();
        match node {
            Node::Input { label } => {
                let _ = writeln!(s, "  n{i} [label=\"{}\", shape=box{xlabel}];", escape(label));
            }
            Node::Gate { kind, .. } => {
                let color = match kind {
                    GateKind::And => "red",
                    GateKind::Or => "green",
                };
                let _ = writeln!(s, "  n{i} [label=\"{}\", color={color}{xlabel}];", kind.name());
            }
        }
    }
    for (i, node) in circuit.nodes().iter().enumerate() {
        if let Node::Gate { left, right, .. } = node {
            let _ = writeln!(s, "  n{} -> n{i};", left.0);
            let _ = writeln!(s, "  n{} -> n{i};", right.0);
        }
    }
    s.push_str("}\n");
    s
}

fn escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Signal names: input labels when they are unique and free of whitespace,
/// `n<index>` otherwise.
fn signal_names(circuit: &Circuit) -> Vec<String> {
    let mut seen = HashSet::new();
    let labels_ok = circuit.inputs().iter().all(|&v| match circuit.node(v) {
        Node::Input { label } => {
            !label.is_empty()
                && !label.chars().any(char::is_whitespace)
                && !label.starts_with('n')
                && seen.insert(label.clone())
        }
        Node::Gate { .. } => false,
    });
    let output_set: HashSet<&str> = circuit.outputs().iter().map(|(n, _)| n.as_str()).collect();
    let labels_ok = labels_ok && seen.iter().all(|l| !output_set.contains(l.as_str()));
    circuit
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, node)| match node {
            Node::Input { label } if labels_ok => label.clone(),
            _ => format!("n{i}"),
        })
        .collect()
}

pub fn to_blif(circuit: &Circuit, model: &str) -> String {
    let names = signal_names(circuit);
    let mut s = format!(".model {model}\n.inputs");
    for v in circuit.inputs() {
        s.push(' ');
        s.push_str(&names[v.0]);
    }
    s.push_str("\n.outputs");
    for (name, _) in circuit.outputs() {
        s.push(' ');
        s.push_str(name);
    }
    s.push('\n');
    for (i, node) in circuit.nodes().iter().enumerate() {
        if let Node::Gate { kind, left, right } = node {
            let _ = writeln!(s, ".names {} {} {}", names[left.0], names[right.0], names[i]);
            match kind {
                GateKind::And => s.push_str("11 1\n"),
                GateKind::Or => s.push_str("1- 1\n-1 1\n"),
            }
        }
    }
    for (name, v) in circuit.outputs() {
        let _ = writeln!(s, ".names {} {}\n1 1", names[v.0], name);
    }
    s.push_str(".end\n");
    s
}

pub fn to_json(circuit: &Circuit) -> serde_json::Value {
    let nodes: Vec<_> = circuit
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, node)| match node {
            Node::Input { label } => json!({ "id": i, "type": "input", "label": label }),
            Node::Gate { kind, left, right } => json!({
                "id": i,
                "type": match kind { GateKind::And => "and", GateKind::Or => "or" },
                "left": left.0,
                "right": right.0,
            }),
        })
        .collect();
    let outputs: Vec<_> = circuit
        .outputs()
        .iter()
        .map(|(name, v)| json!({ "name": name, "node": v.0 }))
        .collect();
    json!({
        "nodes": nodes,
        "outputs": outputs,
        "metrics": {
            "inputs": circuit.num_inputs(),
            "depth": circuit.depth(),
            "size": circuit.size(),
            "fanout": circuit.fanout(),
        }
    })
}

/// Reads back the BLIF subset written by [`to_blif`]: two-input AND/OR
/// covers and single-input buffers, listed in topological order.
pub fn parse_blif(text: &str) -> Result<Circuit> {
    let mut circuit = Circuit::new();
    let mut signals: HashMap<String, NodeId> = HashMap::new();
    let mut outputs: Vec<String> = Vec::new();
    let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    let mut i = 0;
    while i < lines.len() {
        let mut words = lines[i].split_whitespace();
        let head = words.next().unwrap_or_default();
        let args: Vec<&str> = words.collect();
        i += 1;
        match head {
            ".model" | ".end" => {}
            ".inputs" => {
                for a in args {
                    let id = circuit.add_input(a);
                    signals.insert(a.to_string(), id);
                }
            }
            ".outputs" => outputs.extend(args.iter().map(|a| a.to_string())),
            ".names" => {
                let mut rows = Vec::new();
                while i < lines.len() && !lines[i].starts_with('.') {
                    rows.push(lines[i]);
                    i += 1;
                }
                let lookup = |name: &str, signals: &HashMap<String, NodeId>| {
                    signals.get(name).copied().ok_or_else(|| Error::Parse(format!("undefined signal {name}")))
                };
                match (args.len(), rows.as_slice()) {
                    (2, ["1 1"]) => {
                        let src = lookup(args[0], &signals)?;
                        signals.insert(args[1].to_string(), src);
                    }
                    (3, ["11 1"]) | (3, ["1- 1", "-1 1"]) | (3, ["-1 1", "1- 1"]) => {
                        let kind = if rows.len() == 1 { GateKind::And } else { GateKind::Or };
                        let a = lookup(args[0], &signals)?;
                        let b = lookup(args[1], &signals)?;
                        let g = circuit.add_gate(kind, a, b)?;
                        signals.insert(args[2].to_string(), g);
                    }
                    _ => return Err(Error::Parse(format!("unsupported cover for .names {}", args.join(" ")))),
                }
            }
            other => return Err(Error::Parse(format!("unsupported directive {other}"))),
        }
    }
    for name in outputs {
        let v = signals.get(&name).copied().ok_or_else(|| Error::Parse(format!("undriven output {name}")))?;
        circuit.add_output(name, v)?;
    }
    Ok(circuit)
}
