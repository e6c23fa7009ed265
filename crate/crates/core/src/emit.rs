//! Text emitters: LaTeX `clusterpicture` source and Graphviz DOT.

use std::fmt::Write;

use crate::clusters::{Child, ClusterPicture};
use crate::fiber::ComponentFamily;
use crate::graph::DualGraph;

/// `clusterpicture` source for the cluster tree.
///
/// `s_max` is subscripted with its depth, every other cluster with its
/// relative depth.
pub fn latex_cluster_picture(picture: &ClusterPicture) -> String {
    let order = picture.root_order();
    let mut root_name = vec![0usize; order.len()];
    for (k, &r) in order.iter().enumerate() {
        root_name[r] = k + 1;
    }

    // Number of clusters that end right after each root in the DFS order.
    let mut closes = vec![0usize; order.len()];
    for c in &picture.clusters {
        let last = c.members.iter().map(|&m| root_name[m]).max().unwrap_or(1);
        closes[last - 1] += 1;
    }

    let mut out = String::from("\\clusterpicture\n");
    for (k, _) in order.iter().enumerate() {
        let spacing = if k == 0 {
            "1".to_string()
        } else if closes[k - 1] == 0 {
            String::new()
        } else {
            (1 + 2 * closes[k - 1]).to_string()
        };
        let prev = if k == 0 {
            "first".to_string()
        } else {
            format!("r{k}")
        };
        let sep = if k + 1 == order.len() { "" } else { ";" };
        let _ = writeln!(out, "  \\Root {{{spacing}}} {{{prev}}} {{r{}}}{sep}", k + 1);
    }

    // Post-order so children are declared first.
    let mut post = Vec::new();
    fn visit(picture: &ClusterPicture, id: usize, post: &mut Vec<usize>) {
        for ch in &picture.get(id).children {
            if let Child::Cluster(k) = ch {
                visit(picture, *k, post);
            }
        }
        post.push(id);
    }
    visit(picture, picture.smax_id, &mut post);

    let mut name = vec![0usize; picture.len()];
    for (k, &id) in post.iter().enumerate() {
        name[id] = k + 1;
    }
    for &id in &post {
        let c = picture.get(id);
        let mut parts = String::new();
        let mut tails = String::new();
        for ch in &c.children {
            match ch {
                Child::Root(r) => {
                    let _ = write!(parts, "(r{})", root_name[*r]);
                }
                Child::Cluster(k) => {
                    let _ = write!(parts, "(c{})", name[*k]);
                    let _ = write!(tails, "(c{}n)", name[*k]);
                }
            }
        }
        let (sub, label) = if id == picture.smax_id {
            (c.depth, "s_{\\text{max}}".to_string())
        } else {
            (
                c.relative_depth.unwrap_or(c.depth),
                format!("\\mathfrak s_{id}"),
            )
        };
        let _ = writeln!(
            out,
            "  \\ClusterLDName c{}[][{sub}][{label}] = {parts}{tails};",
            name[id]
        );
    }
    out.push_str("\\endclusterpicture\n");
    out
}

fn vertex_label(graph: &DualGraph, families: &[ComponentFamily], v: usize) -> String {
    let vx = graph.vertices[v];
    let genus = families
        .iter()
        .find(|f| f.cluster == vx.cluster)
        .map_or(0, |f| f.genus_each);
    format!("s{}:{} g={}", vx.cluster, vx.ell, genus)
}

/// Dual graph with one node per component and one edge per intersection point.
pub fn dot_dual_graph(graph: &DualGraph, families: &[ComponentFamily]) -> String {
    let mut out = String::from("graph dual {\n");
    for v in 0..graph.vertices.len() {
        let _ = writeln!(
            out,
            "  v{v} [label=\"{}\"];",
            vertex_label(graph, families, v)
        );
    }
    for e in &graph.edges {
        let _ = writeln!(out, "  v{} -- v{} [label=\"{}\"];", e.tail, e.head, e.point);
    }
    out.push_str("}\n");
    out
}

const PALETTE: [&str; 8] = [
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628", "#f781bf", "#999999",
];

/// Dual graph with vertices and edges colored by Frobenius orbit.
pub fn dot_frobenius_orbits(graph: &DualGraph, families: &[ComponentFamily]) -> String {
    let mut out = String::from("graph frobenius {\n  node [style=filled];\n");
    let mut vcolor = vec![0usize; graph.vertices.len()];
    for (k, orbit) in graph.vertex_orbits().iter().enumerate() {
        for &v in orbit {
            vcolor[v] = k;
        }
    }
    for v in 0..graph.vertices.len() {
        let _ = writeln!(
            out,
            "  v{v} [label=\"{}\", fillcolor=\"{}\"];",
            vertex_label(graph, families, v),
            PALETTE[vcolor[v] % PALETTE.len()]
        );
    }

    let mut ecolor = vec![usize::MAX; graph.edges.len()];
    let mut next = 0;
    for start in 0..graph.edges.len() {
        if ecolor[start] != usize::MAX {
            continue;
        }
        let mut cur = start;
        while ecolor[cur] == usize::MAX {
            ecolor[cur] = next;
            cur = graph.frobenius_edge_perm[cur];
        }
        next += 1;
    }
    for (k, e) in graph.edges.iter().enumerate() {
        let _ = writeln!(
            out,
            "  v{} -- v{} [label=\"{}\", color=\"{}\"];",
            e.tail,
            e.head,
            e.point,
            PALETTE[ecolor[k] % PALETTE.len()]
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clusters::tests::example1;
    use crate::report::{assemble_report, AnalysisOptions};

    #[test]
    fn latex_matches_figure_layout() {
        let a = assemble_report(&example1(7), AnalysisOptions::default()).unwrap();
        let tex = latex_cluster_picture(&a.picture);
        let roots: Vec<&str> = tex.lines().filter(|l| l.contains("\\Root")).collect();
        assert_eq!(roots.len(), 9);
        assert!(roots[0].contains("{1} {first} {r1}"));
        assert!(roots[2].contains("{3} {r2} {r3}"));
        assert!(roots[6].contains("{5} {r6} {r7}"));
        assert!(roots[8].ends_with("{r9}"));
        assert!(tex.contains("[][1][\\mathfrak s_2] = (r1)(r2);"));
        assert!(tex.contains("[][1][\\mathfrak s_1] = (c1)(c2)(c3)(c1n)(c2n)(c3n);"));
        assert!(tex.contains("[][0][s_{\\text{max}}] = (c4)(c5)(c4n)(c5n);"));
    }

    #[test]
    fn dot_labels() {
        let a = assemble_report(&example1(7), AnalysisOptions::default()).unwrap();
        let dot = dot_dual_graph(&a.graph, &a.families);
        assert!(dot.contains("label=\"s0:2 g=0\""));
        assert!(dot.contains("label=\"s5:0 g=4\""));
        assert_eq!(dot.matches(" -- ").count(), 15);
        let orb = dot_frobenius_orbits(&a.graph, &a.families);
        assert_eq!(orb.matches("fillcolor").count(), 9);
    }
}
