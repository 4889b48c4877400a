// SPDX-License-Identifier: Apache-2.0

//! Graphviz rendering of portraits and orbital graphs.

use std::fmt::Write;

use crate::scheme::OrbitalStructure;
use crate::tree::Vertex;
use crate::wreath::{Portrait, WreathPresentation};

const PALETTE: [&str; 10] = [
    "black",
    "red",
    "blue",
    "darkgreen",
    "orange",
    "purple",
    "brown",
    "magenta",
    "cyan4",
    "gold3",
];

pub fn class_color(class: usize) -> &'static str {
    PALETTE[class % PALETTE.len()]
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Inner nodes show their root permutation; leaves show the section word,
/// or `()` when it is empty.
pub fn portrait_dot(pres: &WreathPresentation, portrait: &Portrait) -> String {
    let mut out = String::from("digraph portrait {\n  node [shape=box];\n");
    for node in portrait.nodes() {
        let id = quote(&node.vertex.to_string());
        let label = match &node.word {
            Some(w) if !w.is_empty() => pres.render_word(w),
            _ => node.root_perm.to_string(),
        };
        writeln!(out, "  {id} [label={}];", quote(&label)).unwrap();
        for child in &node.children {
            writeln!(out, "  {id} -> {};", quote(&child.vertex.to_string())).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// All non-diagonal arcs `x -> y`, colored by class.
pub fn orbital_graph_dot(structure: &OrbitalStructure) -> String {
    let sub = structure.parabolic().suborbits();
    let (d, n) = (sub.degree(), sub.level());
    let names: Vec<String> = (0..structure.point_count())
        .map(|x| Vertex::from_index(d, n, x).to_string())
        .collect();
    let mut out = String::from("digraph orbitals {\n");
    for name in &names {
        writeln!(out, "  {};", quote(name)).unwrap();
    }
    for (x, from) in names.iter().enumerate() {
        for (y, to) in names.iter().enumerate() {
            let class = structure.label(x, y);
            if class != 0 {
                writeln!(
                    out,
                    "  {} -> {} [color={}, label=\"{class}\"];",
                    quote(from),
                    quote(to),
                    class_color(class)
                )
                .unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin;
    use crate::wreath::portrait;

    #[test]
    fn portrait_of_d() {
        let e = builtin("grigorchuk").unwrap();
        let p = &e.presentation;
        let dot = portrait_dot(p, &portrait(p, &p.parse_word("d").unwrap(), 1));
        assert!(dot.starts_with("digraph portrait {"));
        assert!(dot.contains("\"-\" [label=\"()\"];"));
        assert!(dot.contains("\"1\" [label=\"()\"];"));
        assert!(dot.contains("\"2\" [label=\"b\"];"));
        assert_eq!(dot.matches("->").count(), 2);
    }

    #[test]
    fn portrait_of_identity() {
        let e = builtin("gupta-sidki").unwrap();
        let p = &e.presentation;
        let dot = portrait_dot(p, &portrait(p, &p.parse_word("e").unwrap(), 2));
        assert_eq!(dot.matches("[label=\"()\"]").count(), 13);
    }

    #[test]
    fn two_point_orbital_graph() {
        let e = builtin("grigorchuk").unwrap();
        let s = OrbitalStructure::build(&e.presentation, 1, &e.default_ray, 1 << 10).unwrap();
        let dot = orbital_graph_dot(&s);
        assert!(dot.contains("  \"1\";\n  \"2\";\n"));
        assert!(dot.contains("\"1\" -> \"2\" [color=red, label=\"1\"];"));
        assert!(dot.contains("\"2\" -> \"1\" [color=red, label=\"1\"];"));
        assert_eq!(dot.matches("->").count(), 2);
    }
}
