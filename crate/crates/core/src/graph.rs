//! Dual graph of the special fiber and the Frobenius action on its cycles.
//!
//! Vertices are pairs `(cluster, l)` with `l < d_cluster`. A child `t` of a
//! cluster `s` meets it in `r = gcd(n, |t|)` points `Q_i`; point `i` lies on
//! component `i mod d_s` of `s` and on component `i mod d_t` of `t`. When
//! `s_max` carries no component, its two children are glued directly.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::arith::{dlog_mu, gcd};
use crate::clusters::{Child, ClusterPicture, CurveInput};
use crate::error::{Error, Result};
use crate::fiber::ComponentFamily;
use crate::poly::{charpoly, cyclotomic_multiplicities, format_poly, IntPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub cluster: usize,
    pub ell: u64,
}

/// An intersection point, oriented from the parent component to the child.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    /// Index `i` of the point `Q_i`.
    pub point: u64,
    /// Number of points shared by the two clusters.
    pub modulus: u64,
    /// `(parent cluster, child cluster)`, or the two maximal clusters by id.
    pub pair: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub frobenius_vertex_perm: Vec<usize>,
    pub frobenius_edge_perm: Vec<usize>,
}

fn family_index(families: &[ComponentFamily]) -> BTreeMap<usize, &ComponentFamily> {
    families.iter().map(|f| (f.cluster, f)).collect()
}

/// Assemble vertices, edges and the Frobenius permutations.
pub fn build_dual_graph(
    picture: &ClusterPicture,
    families: &[ComponentFamily],
    input: &CurveInput,
) -> Result<DualGraph> {
    let fam = family_index(families);
    let n = input.n;

    let mut vertices = Vec::new();
    let mut offset = BTreeMap::new();
    for f in families {
        offset.insert(f.cluster, vertices.len());
        vertices.extend((0..f.d).map(|ell| Vertex {
            cluster: f.cluster,
            ell,
        }));
    }
    let vertex_of =
        |cluster: usize, i: u64| -> usize { offset[&cluster] + (i % fam[&cluster].d) as usize };

    let mut edges = Vec::new();
    let mut join = |s: usize, t: usize, r: u64| {
        for i in 0..r {
            edges.push(Edge {
                tail: vertex_of(s, i),
                head: vertex_of(t, i),
                point: i,
                modulus: r,
                pair: (s, t),
            });
        }
    };
    for c in picture.clusters.iter().skip(1) {
        let parent = c.parent.expect("non-maximal cluster has a parent");
        if picture.in_image(parent) {
            join(parent, c.id, gcd(n, c.size() as u64));
        }
    }
    if !picture.smax_in_image {
        let tops: Vec<usize> = picture
            .smax()
            .children
            .iter()
            .filter_map(|ch| match ch {
                Child::Cluster(k) => Some(*k),
                Child::Root(_) => None,
            })
            .collect();
        if let [a, b] = tops[..] {
            join(a, b, gcd(n, picture.get(a).size() as u64));
        }
    }

    let mut graph = DualGraph {
        vertices,
        edges,
        frobenius_vertex_perm: Vec::new(),
        frobenius_edge_perm: Vec::new(),
    };
    if !graph.is_connected() {
        return Err(Error::Internal("dual graph is disconnected".into()));
    }
    let (vp, ep) = frobenius_on_graph(&graph, families, input.p)?;
    graph.frobenius_vertex_perm = vp;
    graph.frobenius_edge_perm = ep;
    graph.check_incidence()?;
    Ok(graph)
}

/// Frobenius permutations of vertices and edges.
///
/// Component `l` of a cluster moves to `l + shift`. The points shared with a
/// child `t` are the `r`-th roots of the child's residue constant, so point
/// `i` moves to `i + k` with `k = dlog(c_t, r)`. The shift on points must
/// reduce to the component shifts at both ends.
pub fn frobenius_on_graph(
    graph: &DualGraph,
    families: &[ComponentFamily],
    p: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let fam = family_index(families);
    let mut vertex_index = BTreeMap::new();
    for (i, v) in graph.vertices.iter().enumerate() {
        vertex_index.insert(*v, i);
    }
    let vertex_perm: Vec<usize> = graph
        .vertices
        .iter()
        .map(|v| {
            let f = fam[&v.cluster];
            vertex_index[&Vertex {
                cluster: v.cluster,
                ell: (v.ell + f.frobenius_shift) % f.d,
            }]
        })
        .collect();

    let mut edge_index = BTreeMap::new();
    for (i, e) in graph.edges.iter().enumerate() {
        edge_index.insert((e.pair, e.point), i);
    }
    let mut edge_perm = Vec::with_capacity(graph.edges.len());
    for e in &graph.edges {
        let (s, t) = e.pair;
        let (fs, ft) = (fam[&s], fam[&t]);
        let k = dlog_mu(ft.c_residue, e.modulus, p)?;
        for f in [fs, ft] {
            if k % f.d != f.frobenius_shift {
                return Err(Error::InconsistentNormalization(format!(
                    "edge shift {k} mod {} between clusters {s} and {t} disagrees with \
                     component shift {} of cluster {}",
                    e.modulus, f.frobenius_shift, f.cluster
                )));
            }
        }
        edge_perm.push(edge_index[&(e.pair, (e.point + k) % e.modulus)]);
    }
    Ok((vertex_perm, edge_perm))
}

/// `sum over non-maximal proper clusters of gcd(n, |s|)` minus
/// `sum over proper clusters of gcd(n, child sizes)` plus one.
pub fn rank_formula(picture: &ClusterPicture, n: u64) -> i64 {
    let edges: u64 = picture
        .clusters
        .iter()
        .skip(1)
        .map(|c| gcd(n, c.size() as u64))
        .sum();
    let vertices: u64 = (0..picture.len())
        .map(|id| picture.children_gcd(id, n))
        .sum();
    edges as i64 - vertices as i64 + 1
}

impl DualGraph {
    pub fn betti(&self) -> i64 {
        self.edges.len() as i64 - self.vertices.len() as i64 + 1
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.tail].push((i, e.head));
            adj[e.head].push((i, e.tail));
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &(_, w) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.vertices.len()
    }

    /// Frobenius maps each edge's endpoints onto the endpoints of its image.
    pub fn check_incidence(&self) -> Result<()> {
        for (i, e) in self.edges.iter().enumerate() {
            let img = self.edges[self.frobenius_edge_perm[i]];
            let mut a = [
                self.frobenius_vertex_perm[e.tail],
                self.frobenius_vertex_perm[e.head],
            ];
            let mut b = [img.tail, img.head];
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return Err(Error::Internal(format!(
                    "Frobenius breaks incidence at edge {i}"
                )));
            }
        }
        Ok(())
    }

    /// Sign with which Frobenius carries edge `i` onto its image.
    fn orientation_sign(&self, i: usize) -> i64 {
        let e = self.edges[i];
        let img = self.edges[self.frobenius_edge_perm[i]];
        if self.frobenius_vertex_perm[e.tail] == img.tail {
            1
        } else {
            -1
        }
    }

    /// Breadth-first spanning tree from vertex 0 (the first `s_max` component,
    /// or the least vertex when `s_max` carries none). Returns, per vertex,
    /// the tree edge to its parent.
    fn spanning_tree(&self) -> Vec<Option<usize>> {
        let adj = self.adjacency();
        let mut via = vec![None; self.vertices.len()];
        let mut seen = vec![false; self.vertices.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for &(ei, w) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    via[w] = Some(ei);
                    queue.push_back(w);
                }
            }
        }
        via
    }

    /// Frobenius on `H^1` of the graph in the basis of fundamental cycles.
    pub fn h1_frobenius(&self) -> Result<H1Action> {
        let via = self.spanning_tree();
        let mut is_tree = vec![false; self.edges.len()];
        for ei in via.iter().flatten() {
            is_tree[*ei] = true;
        }
        let other = |ei: usize, v: usize| {
            let e = self.edges[ei];
            if e.tail == v {
                e.head
            } else {
                e.tail
            }
        };
        // Signed path from v up to the tree root.
        let path_to_root = |mut v: usize| {
            let mut steps = Vec::new();
            while let Some(ei) = via[v] {
                let sign = if self.edges[ei].tail == v { 1 } else { -1 };
                steps.push((v, ei, sign));
                v = other(ei, v);
            }
            steps
        };

        let cotree: Vec<usize> = (0..self.edges.len()).filter(|&i| !is_tree[i]).collect();
        let mut basis = Vec::with_capacity(cotree.len());
        for &ei in &cotree {
            let e = self.edges[ei];
            let mut z = vec![0i64; self.edges.len()];
            z[ei] = 1;
            // close the loop: head -> root -> tail
            for (_, te, s) in path_to_root(e.head) {
                z[te] += s;
            }
            for (_, te, s) in path_to_root(e.tail) {
                z[te] -= s;
            }
            basis.push(z);
        }

        let betti = basis.len();
        let mut matrix = vec![vec![0i64; betti]; betti];
        for (col, z) in basis.iter().enumerate() {
            let mut image = vec![0i64; self.edges.len()];
            for (ei, &c) in z.iter().enumerate() {
                if c != 0 {
                    image[self.frobenius_edge_perm[ei]] += c * self.orientation_sign(ei);
                }
            }
            let mut rebuilt = vec![0i64; self.edges.len()];
            for (row, &ci) in cotree.iter().enumerate() {
                let coef = image[ci];
                matrix[row][col] = coef;
                if coef != 0 {
                    for (acc, b) in rebuilt.iter_mut().zip(&basis[row]) {
                        *acc += coef * b;
                    }
                }
            }
            if rebuilt != image {
                return Err(Error::Internal(
                    "Frobenius image of a cycle is not a cycle".into(),
                ));
            }
        }

        let bound = 2 * self.edge_perm_order();
        let order = matrix_order(&matrix, bound).ok_or_else(|| {
            Error::Internal(format!("Frobenius matrix has no order dividing {bound}"))
        })?;
        let poly = charpoly(&matrix);
        let multiplicities = cyclotomic_multiplicities(&poly, order).ok_or_else(|| {
            Error::Internal(format!("charpoly {} is not cyclotomic", format_poly(&poly)))
        })?;
        let sign = if betti % 2 == 0 { 1 } else { -1 };
        let determinant = BigInt::from(sign) * &poly[0];

        Ok(H1Action {
            betti,
            cycle_basis: basis
                .iter()
                .map(|z| {
                    z.iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(i, &c)| (i, c))
                        .collect()
                })
                .collect(),
            frobenius_matrix: matrix,
            order,
            determinant: determinant.try_into().unwrap_or(0),
            charpoly: poly,
            eigenvalue_multiplicities: multiplicities,
        })
    }

    fn edge_perm_order(&self) -> u64 {
        let mut seen = vec![false; self.edges.len()];
        let mut order = 1u64;
        for start in 0..self.edges.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = self.frobenius_edge_perm[cur];
                len += 1;
            }
            order = order / gcd(order, len) * len;
        }
        order
    }

    /// Frobenius orbits of vertices, each sorted.
    pub fn vertex_orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertices.len()];
        let mut out = Vec::new();
        for start in 0..self.vertices.len() {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                orbit.push(cur);
                cur = self.frobenius_vertex_perm[cur];
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.vertices.iter().map(|v| json!({"cluster": v.cluster, "component": v.ell})).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| json!({
                "from": e.tail, "to": e.head, "point": e.point, "of": e.modulus,
                "clusters": [e.pair.0, e.pair.1],
            })).collect::<Vec<_>>(),
            "num_vertices": self.vertices.len(),
            "num_edges": self.edges.len(),
            "betti": self.betti(),
            "frobenius_vertex_perm": self.frobenius_vertex_perm,
            "frobenius_edge_perm": self.frobenius_edge_perm,
        })
    }
}

fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for l in 0..n {
            if a[i][l] != 0 {
                for j in 0..n {
                    out[i][j] += a[i][l] * b[l][j];
                }
            }
        }
    }
    out
}

/// Least `k <= bound` with `A^k = I`.
fn matrix_order(a: &[Vec<i64>], bound: u64) -> Option<u64> {
    let n = a.len();
    let identity: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut power = a.to_vec();
    for k in 1..=bound {
        if power == identity {
            return Some(k);
        }
        power = matmul(&power, a);
    }
    None
}

/// Frobenius on the cycle space of the dual graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Action {
    pub betti: usize,
    /// Fundamental cycles as signed edge lists.
    pub cycle_basis: Vec<Vec<(usize, i64)>>,
    /// Column `j` holds the coordinates of the image of basis cycle `j`.
    pub frobenius_matrix: Vec<Vec<i64>>,
    pub order: u64,
    pub determinant: i64,
    pub charpoly: IntPoly,
    /// Multiplicity of each cyclotomic factor, keyed by root-of-unity order.
    pub eigenvalue_multiplicities: BTreeMap<u64, u64>,
}

impl H1Action {
    pub fn to_json(&self) -> Value {
        json!({
            "betti": self.betti,
            "order": self.order,
            "determinant": self.determinant,
            "charpoly": format_poly(&self.charpoly),
            "eigenvalue_multiplicities": self
                .eigenvalue_multiplicities
                .iter()
                .map(|(k, v)| (k.to_string(), json!(v)))
                .collect::<serde_json::Map<_, _>>(),
            "cycle_basis": self.cycle_basis,
            "matrix": self.frobenius_matrix,
        })
    }
}
