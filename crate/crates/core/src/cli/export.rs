//! Text, JSON and DOT renderings of tables and graphs.

use serde_json::{json, Value};

use crate::chars::CharacterTable;
use crate::dyson::DysonType;
use crate::mckay::{self, McKayGraph};

/// Left-aligned columns separated by two spaces, trailing blanks trimmed.
pub fn align(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut width = vec![0; cols];
    for r in rows {
        for (k, cell) in r.iter().enumerate() {
            width[k] = width[k].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for r in rows {
        let mut line = String::new();
        for (k, cell) in r.iter().enumerate() {
            line.push_str(cell);
            if k + 1 < r.len() {
                let pad = width[k] - cell.chars().count() + 2;
                line.extend(std::iter::repeat_n(' ', pad));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Class/Size/Order header followed by one row per character.
pub fn chartable_text(name: &str, t: &CharacterTable) -> String {
    let r = t.num_classes();
    let mut rows = vec![
        std::iter::once("Class".to_string())
            .chain((1..=r).map(|c| c.to_string()))
            .collect::<Vec<_>>(),
        std::iter::once("Size".to_string())
            .chain(t.class_sizes.iter().map(|s| s.to_string()))
            .collect(),
        std::iter::once("Order".to_string())
            .chain(t.class_orders.iter().map(|s| s.to_string()))
            .collect(),
    ];
    for (i, row) in t.chars.iter().enumerate() {
        rows.push(
            std::iter::once(format!("χ{}", i + 1))
                .chain(row.iter().map(|v| v.to_string()))
                .collect(),
        );
    }
    format!("{name}, order {}\n{}", t.group_order, align(&rows))
}

pub fn chartable_json(name: &str, t: &CharacterTable) -> Value {
    json!({
        "group": name,
        "order": t.group_order,
        "sizes": t.class_sizes,
        "orders": t.class_orders,
        "rows": t.chars.iter().map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn rho(i: usize) -> String {
    format!("rho_{}", i + 1)
}

pub fn mckay_text(name: &str, g: &McKayGraph) -> String {
    let c = mckay::collapse(g);
    let nat: Vec<String> = g.natural.iter().map(|&i| rho(i)).collect();
    let mut out = format!(
        "{name}: {} vertices, natural = {}, shape {}\n",
        g.len(),
        nat.join(" + "),
        mckay::classify_ade(&c)
    );
    for &(i, j, m) in &c.edges {
        out.push_str(&format!("{} -- {}{}\n", rho(i), rho(j), mult(m)));
    }
    for &(i, j, m) in &c.arcs {
        out.push_str(&format!("{} -> {}{}\n", rho(i), rho(j), mult(m)));
    }
    out
}

fn mult(m: i64) -> String {
    if m == 1 {
        String::new()
    } else {
        format!(" (x{m})")
    }
}

pub fn mckay_json(name: &str, g: &McKayGraph, types: Option<&[DysonType]>) -> Value {
    let c = mckay::collapse(g);
    json!({
        "group": name,
        "degrees": g.degrees,
        "natural": g.natural.iter().map(|&i| rho(i)).collect::<Vec<_>>(),
        "shape": mckay::classify_ade(&c).to_string(),
        "edges": c.edges.iter().map(|&(i, j, m)| json!([rho(i), rho(j), m])).collect::<Vec<_>>(),
        "arcs": c.arcs.iter().map(|&(i, j, m)| json!([rho(i), rho(j), m])).collect::<Vec<_>>(),
        "dyson": types.map(|ts| ts.iter().map(|t| t.roman()).collect::<Vec<_>>()),
    })
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT text of a McKay graph. Without directed arcs it is a `graph` with
/// `--` edges. Otherwise it is a `digraph`: arcs use `->` and reciprocal
/// pairs are written `->` with `dir=none`, since DOT forbids mixing `--`
/// and `->` in one graph. Multiple edges are repeated.
pub fn to_dot(name: &str, g: &McKayGraph, types: Option<&[DysonType]>) -> String {
    let c = mckay::collapse(g);
    let directed = !c.arcs.is_empty();
    let (kind, op) = if directed { ("digraph", "->") } else { ("graph", "--") };
    let mut out = format!("{kind} {} {{\n", quote(name));
    if g.is_empty() {
        out.push_str("}\n");
        return out;
    }
    out.push_str("  node [shape=circle, style=filled, fillcolor=\"#ffffff\"];\n");
    for i in 0..g.len() {
        let mut attrs = vec![format!("label=\"{}\\n{}\"", i + 1, g.degrees[i])];
        if let Some(t) = types.and_then(|ts| ts.get(i)) {
            attrs.push(format!("dyson={}", quote(t.roman())));
            attrs.push(format!("fillcolor={}", quote(t.colour())));
            if matches!(t, DysonType::I | DysonType::II | DysonType::III | DysonType::V | DysonType::VIII) {
                attrs.push("fontcolor=\"#ffffff\"".to_string());
            }
        }
        if i == g.trivial {
            attrs.push("shape=doublecircle".to_string());
        }
        out.push_str(&format!("  {} [{}];\n", rho(i), attrs.join(", ")));
    }
    let plain = if directed { " [dir=none]" } else { "" };
    for &(i, j, m) in &c.edges {
        for _ in 0..m {
            out.push_str(&format!("  {} {op} {}{plain};\n", rho(i), rho(j)));
        }
    }
    for &(i, j, m) in &c.arcs {
        for _ in 0..m {
            out.push_str(&format!("  {} -> {};\n", rho(i), rho(j)));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(arcs: Vec<Vec<i64>>) -> McKayGraph {
        McKayGraph {
            degrees: vec![1; arcs.len()],
            arcs,
            trivial: 0,
            natural: vec![],
        }
    }

    #[test]
    fn empty_graph_is_header_only() {
        assert_eq!(to_dot("E", &graph(vec![]), None), "graph \"E\" {\n}\n");
    }

    #[test]
    fn mixed_graph_uses_digraph() {
        let d = to_dot("M", &graph(vec![vec![0, 1, 1], vec![1, 0, 0], vec![0, 1, 0]]), None);
        assert!(d.starts_with("digraph"));
        assert!(d.contains("rho_1 -> rho_2 [dir=none];"));
        assert!(d.contains("rho_1 -> rho_3;"));
        assert!(d.contains("rho_3 -> rho_2;"));
        assert!(!d.contains("--"));
    }

    #[test]
    fn double_edges_repeat() {
        let d = to_dot("A1", &graph(vec![vec![0, 2], vec![2, 0]]), Some(&[DysonType::I, DysonType::IV]));
        assert_eq!(d.matches("rho_1 -- rho_2;").count(), 2);
        assert!(d.contains("dyson=\"IV\""));
        assert!(d.contains("fillcolor=\"#4daf4a\""));
    }

    #[test]
    fn aligned_columns() {
        let s = align(&[vec!["a".into(), "bb".into()], vec!["ccc".into(), "d".into()]]);
        assert_eq!(s, "a    bb\nccc  d\n");
    }
}
