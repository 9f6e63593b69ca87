//! Graphviz emission: Hasse diagrams for lattices, spectra and sites, and
//! annotated base spaces for sheaves. Output is deterministic.

use crate::lattice::FiniteLattice;
use crate::priestley::PriestleySpace;
use crate::sheaf::SheafTriple;
use crate::site::FiniteSite;
use std::fmt::Write;

fn hasse_edges(leq: impl Fn(usize, usize) -> bool, n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b || !leq(a, b) {
                continue;
            }
            let between = (0..n).any(|c| c != a && c != b && leq(a, c) && leq(c, b));
            if !between {
                out.push((a, b));
            }
        }
    }
    out
}

pub fn lattice_dot(l: &FiniteLattice) -> String {
    let mut s = String::from("digraph lattice {\n  rankdir=BT;\n");
    for a in l.elements() {
        let _ = writeln!(s, "  n{} [label=\"{}\"];", a, l.label(a));
    }
    for (a, b) in hasse_edges(|x, y| l.leq(x, y), l.size()) {
        let _ = writeln!(s, "  n{a} -> n{b};");
    }
    s.push_str("}\n");
    s
}

pub fn spectrum_dot(space: &PriestleySpace) -> String {
    let mut s = String::from("digraph spectrum {\n  rankdir=BT;\n");
    for (i, p) in space.points().iter().enumerate() {
        let carrier: Vec<String> = p.carrier().iter().map(|e| e.to_string()).collect();
        let _ = writeln!(s, "  p{} [label=\"{{{}}}\"];", i, carrier.join(","));
    }
    for (a, b) in hasse_edges(|x, y| space.leq(x, y), space.len()) {
        let _ = writeln!(s, "  p{a} -> p{b};");
    }
    s.push_str("}\n");
    s
}

/// Base space with per-point stalk sizes.
pub fn sheaf_dot(sheaf: &SheafTriple) -> String {
    let base = sheaf.base();
    let mut s = String::from("digraph sheaf {\n  rankdir=BT;\n");
    for i in 0..base.len() {
        let carrier: Vec<String> = sheaf
            .point_carrier_in_host(i)
            .iter()
            .map(|e| e.to_string())
            .collect();
        let _ = writeln!(
            s,
            "  p{} [label=\"{{{}}} | stalk {}\"];",
            i,
            carrier.join(","),
            sheaf.stalk(i).algebra.size()
        );
    }
    for (a, b) in hasse_edges(|x, y| base.leq(x, y), base.len()) {
        let _ = writeln!(s, "  p{a} -> p{b};");
    }
    s.push_str("}\n");
    s
}

pub fn site_dot(site: &FiniteSite) -> String {
    let mut s = String::from("digraph site {\n  rankdir=BT;\n");
    for i in site.points() {
        let _ = writeln!(s, "  p{i} [label=\"{i}\"];");
    }
    for (a, b) in hasse_edges(|x, y| site.leq(x, y), site.size()) {
        let _ = writeln!(s, "  p{a} -> p{b};");
    }
    s.push_str("}\n");
    s
}
