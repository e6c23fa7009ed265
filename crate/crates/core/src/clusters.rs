//! Cluster pictures of the root set.
//!
//! A proper cluster is a set of at least two roots cut out by a p-adic disc.
//! Clusters are numbered in depth-first preorder starting from `s_max = 0`,
//! children ordered by their smallest input root index.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_prime, vp_finite, Rational};
use crate::error::{Error, Result};

/// Default bound on the number of roots accepted by [`CurveInput::validate`].
pub const DEFAULT_MAX_ROOTS: usize = 64;

/// The curve `y^n = c * prod (x - r)` over Q_p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveInput {
    pub p: u64,
    pub n: u64,
    #[serde(default = "Rational::one")]
    pub leading_coefficient: Rational,
    pub roots: Vec<Rational>,
}

impl CurveInput {
    pub fn new(p: u64, n: u64, leading_coefficient: Rational, roots: Vec<Rational>) -> Self {
        CurveInput {
            p,
            n,
            leading_coefficient,
            roots,
        }
    }

    /// Monic curve from integer roots.
    pub fn monic(p: u64, n: u64, roots: &[i64]) -> Self {
        CurveInput::new(
            p,
            n,
            Rational::one(),
            roots.iter().map(|&r| r.into()).collect(),
        )
    }

    pub fn degree(&self) -> u64 {
        self.roots.len() as u64
    }

    /// The point at infinity is a branch point iff `n` does not divide `deg f`.
    pub fn has_infinity(&self) -> bool {
        !self.degree().is_multiple_of(self.n)
    }

    /// Check every standing hypothesis, naming the first one violated.
    pub fn validate(&self, max_roots: usize) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::NotPrime(self.p));
        }
        if self.n < 2 {
            return Err(Error::ExponentTooSmall(self.n));
        }
        if self.n.is_multiple_of(self.p) {
            return Err(Error::ResidueCharDividesN {
                p: self.p,
                n: self.n,
            });
        }
        if !(self.p - 1).is_multiple_of(self.n) {
            return Err(Error::NoRootsOfUnityInBase {
                p: self.p,
                n: self.n,
            });
        }
        if self.leading_coefficient.is_zero() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        if self.roots.len() > max_roots {
            return Err(Error::TooManyRoots {
                count: self.roots.len(),
                limit: max_roots,
            });
        }
        let mut seen: BTreeMap<&Rational, usize> = BTreeMap::new();
        for (i, r) in self.roots.iter().enumerate() {
            if let Some(&j) = seen.get(r) {
                return Err(Error::NotSeparable(j, i));
            }
            seen.insert(r, i);
        }
        let marked = self.roots.len() + usize::from(self.has_infinity());
        if marked < 3 || crate::report::whole_curve_genus(self.n, self.degree()) == 0 {
            return Err(Error::GenusZero);
        }
        Ok(())
    }
}

/// A child of a cluster: either a proper subcluster or a single root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "lowercase")]
pub enum Child {
    Cluster(usize),
    Root(usize),
}

/// A root or a cluster, as accepted by [`ClusterPicture::wedge`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Node {
    Root(usize),
    Cluster(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cluster {
    pub id: usize,
    /// Sorted input indices of the member roots.
    pub members: Vec<usize>,
    pub depth: i64,
    pub parent: Option<usize>,
    pub children: Vec<Child>,
    /// Depth minus parent depth; `None` for `s_max`.
    pub relative_depth: Option<i64>,
}

impl Cluster {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Canonical center: the member with the smallest input index.
    pub fn center(&self) -> usize {
        self.members[0]
    }

    pub fn contains(&self, root: usize) -> bool {
        self.members.binary_search(&root).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterPicture {
    pub clusters: Vec<Cluster>,
    pub smax_id: usize,
    pub has_infinity: bool,
    pub smax_in_image: bool,
    /// Smallest proper cluster containing each root.
    pub root_parent: Vec<usize>,
}

/// Pairwise valuations `v(r_i - r_j)`; the diagonal is unused.
pub(crate) fn valuation_matrix(roots: &[Rational], p: u64) -> Vec<Vec<i64>> {
    let m = roots.len();
    let mut v = vec![vec![i64::MAX; m]; m];
    for i in 0..m {
        for j in (i + 1)..m {
            let x = vp_finite(&(&roots[i] - &roots[j]), p);
            v[i][j] = x;
            v[j][i] = x;
        }
    }
    v
}

/// Build the cluster tree.
///
/// Candidate discs are `D(r_i, v(r_i - r_j))` for every pair; deduplicated
/// member sets are then arranged by containment. Cubic in the root count.
pub fn build_cluster_picture(input: &CurveInput) -> Result<ClusterPicture> {
    let m = input.roots.len();
    if m < 2 {
        return Err(Error::GenusZero);
    }
    for i in 0..m {
        for j in (i + 1)..m {
            if input.roots[i] == input.roots[j] {
                return Err(Error::NotSeparable(i, j));
            }
        }
    }
    let v = valuation_matrix(&input.roots, input.p);

    let mut sets: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
    for (i, row) in v.iter().enumerate() {
        for (j, &mu) in row.iter().enumerate() {
            if i == j {
                continue;
            }
            let members: Vec<usize> = (0..m).filter(|&k| k == i || row[k] >= mu).collect();
            sets.insert(members, mu);
        }
    }

    // Parents are the smallest strict supersets; laminarity makes this unique.
    let mut by_size: Vec<(Vec<usize>, i64)> = sets.into_iter().collect();
    by_size.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));
    let k = by_size.len();
    let mut parent_of: Vec<Option<usize>> = vec![None; k];
    for c in 1..k {
        let set: BTreeSet<usize> = by_size[c].0.iter().copied().collect();
        for cand in (0..c).rev() {
            if by_size[cand].0.len() > set.len()
                && set.iter().all(|x| by_size[cand].0.binary_search(x).is_ok())
            {
                parent_of[c] = Some(cand);
                break;
            }
        }
        if parent_of[c].is_none() {
            return Err(Error::Internal("cluster family is not a tree".into()));
        }
    }
    if by_size[0].0.len() != m {
        return Err(Error::Internal(
            "largest cluster is not the full root set".into(),
        ));
    }

    let mut raw_children: Vec<Vec<usize>> = vec![Vec::new(); k];
    for c in 1..k {
        raw_children[parent_of[c].unwrap()].push(c);
    }

    // Renumber in depth-first preorder.
    let mut new_id = vec![usize::MAX; k];
    let mut order = Vec::with_capacity(k);
    let mut stack = vec![0usize];
    while let Some(c) = stack.pop() {
        new_id[c] = order.len();
        order.push(c);
        let mut kids = raw_children[c].clone();
        kids.sort_by_key(|&x| by_size[x].0[0]);
        stack.extend(kids.into_iter().rev());
    }

    let mut root_parent = vec![0usize; m];
    let mut clusters = Vec::with_capacity(k);
    for (id, &c) in order.iter().enumerate() {
        let members = by_size[c].0.clone();
        let depth = by_size[c].1;
        let parent = parent_of[c].map(|x| new_id[x]);
        let mut covered = BTreeSet::new();
        let mut children: Vec<(usize, Child)> = Vec::new();
        for &kid in &raw_children[c] {
            covered.extend(by_size[kid].0.iter().copied());
            children.push((by_size[kid].0[0], Child::Cluster(new_id[kid])));
        }
        for &r in &members {
            if !covered.contains(&r) {
                children.push((r, Child::Root(r)));
                root_parent[r] = id;
            }
        }
        children.sort_by_key(|x| x.0);
        clusters.push(Cluster {
            id,
            members,
            depth,
            parent,
            children: children.into_iter().map(|x| x.1).collect(),
            relative_depth: None,
        });
    }
    for id in 1..clusters.len() {
        let pd = clusters[clusters[id].parent.unwrap()].depth;
        clusters[id].relative_depth = Some(clusters[id].depth - pd);
    }

    let has_infinity = input.has_infinity();
    let smax_in_image = has_infinity || clusters[0].children.len() >= 3;
    Ok(ClusterPicture {
        clusters,
        smax_id: 0,
        has_infinity,
        smax_in_image,
        root_parent,
    })
}

impl ClusterPicture {
    pub fn smax(&self) -> &Cluster {
        &self.clusters[self.smax_id]
    }

    pub fn get(&self, id: usize) -> &Cluster {
        &self.clusters[id]
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Whether the cluster corresponds to a component of the stable marked line.
    pub fn in_image(&self, id: usize) -> bool {
        id != self.smax_id || self.smax_in_image
    }

    /// Clusters carrying a component, in id order.
    pub fn image_ids(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.clusters.len()).filter(move |&id| self.in_image(id))
    }

    /// Size of a child, singletons counting 1.
    pub fn child_size(&self, child: Child) -> usize {
        match child {
            Child::Cluster(c) => self.clusters[c].size(),
            Child::Root(_) => 1,
        }
    }

    /// Any root in the child; for clusters its canonical center.
    pub fn child_representative(&self, child: Child) -> usize {
        match child {
            Child::Cluster(c) => self.clusters[c].center(),
            Child::Root(r) => r,
        }
    }

    fn ancestors(&self, mut id: usize) -> Vec<usize> {
        let mut out = vec![id];
        while let Some(p) = self.clusters[id].parent {
            out.push(p);
            id = p;
        }
        out
    }

    /// Smallest proper cluster containing both nodes.
    ///
    /// A root stands for the smallest proper cluster containing it, so
    /// `wedge(r, r)` is that cluster.
    pub fn wedge(&self, a: Node, b: Node) -> usize {
        let lift = |n: Node| match n {
            Node::Root(r) => self.root_parent[r],
            Node::Cluster(c) => c,
        };
        let (a, b) = (lift(a), lift(b));
        let anc_a = self.ancestors(a);
        let anc_b: BTreeSet<usize> = self.ancestors(b).into_iter().collect();
        anc_a
            .into_iter()
            .find(|x| anc_b.contains(x))
            .unwrap_or(self.smax_id)
    }

    /// Valuation of the content of `f` rewritten in the chart of cluster `id`:
    /// `v(c) + sum over roots r of depth(r ^ s)`.
    pub fn content_valuation(&self, id: usize, input: &CurveInput) -> i64 {
        let lc = vp_finite(&input.leading_coefficient, input.p);
        lc + (0..input.roots.len())
            .map(|r| self.clusters[self.wedge(Node::Root(r), Node::Cluster(id))].depth)
            .sum::<i64>()
    }

    /// Relative depth of every cluster; `s_max` reports its absolute depth.
    pub fn relative_depths(&self) -> Vec<i64> {
        self.clusters
            .iter()
            .map(|c| c.relative_depth.unwrap_or(c.depth))
            .collect()
    }

    /// `gcd(n, |child_1|, ..., |child_N|)`.
    pub fn children_gcd(&self, id: usize, n: u64) -> u64 {
        self.clusters[id]
            .children
            .iter()
            .fold(n, |g, &c| gcd(g, self.child_size(c) as u64))
    }

    /// Roots in depth-first order, so every cluster is a contiguous run.
    pub fn root_order(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_roots(self.smax_id, &mut out);
        out
    }

    fn collect_roots(&self, id: usize, out: &mut Vec<usize>) {
        for &c in &self.clusters[id].children {
            match c {
                Child::Root(r) => out.push(r),
                Child::Cluster(k) => self.collect_roots(k, out),
            }
        }
    }
}
