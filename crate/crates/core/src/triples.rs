//! Brute-force oracle over triples of marked points.
//!
//! Components of the stable marked line correspond to equivalence classes of
//! triples of distinct marked points. This module enumerates them directly
//! and checks that the induced map to clusters agrees with
//! [`crate::clusters`]. It is quadratic in the number of triples and exists
//! to validate, not to scale.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::{vp, Rational, Valuation};
use crate::clusters::{ClusterPicture, CurveInput};
use crate::error::{Error, Result};

/// Default bound on the number of marked points the oracle accepts.
pub const DEFAULT_ORACLE_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SPoint {
    Root(Rational),
    Infinity,
}

/// `v(a - b)` with `v(x - inf) = -inf`.
pub fn point_distance(a: &SPoint, b: &SPoint, p: u64) -> Valuation {
    match (a, b) {
        (SPoint::Root(x), SPoint::Root(y)) => vp(&(x - y), p),
        _ => Valuation::MinusInfinity,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple {
    pub a: SPoint,
    pub b: SPoint,
    pub c: SPoint,
}

impl Triple {
    pub fn new(a: SPoint, b: SPoint, c: SPoint) -> Self {
        Triple { a, b, c }
    }

    /// `v(a-c) == v(b-c) <= v(a-b)`.
    pub fn is_ordered(&self, p: u64) -> bool {
        let ac = point_distance(&self.a, &self.c, p);
        let bc = point_distance(&self.b, &self.c, p);
        ac == bc && ac <= point_distance(&self.a, &self.b, p)
    }
}

/// Permute the triple so the closest pair comes first.
///
/// Among `v(b-c), v(a-c), v(a-b)` the two smallest coincide, so putting the
/// pair with the largest valuation in front yields an ordered triple.
pub fn order_triple(t: &Triple, p: u64) -> Triple {
    let pts = [&t.a, &t.b, &t.c];
    let pairs = [(0, 1, 2), (0, 2, 1), (1, 2, 0)];
    let (i, j, k) = pairs
        .into_iter()
        .max_by(|x, y| {
            point_distance(pts[x.0], pts[x.1], p).cmp(&point_distance(pts[y.0], pts[y.1], p))
        })
        .unwrap();
    Triple::new(pts[i].clone(), pts[j].clone(), pts[k].clone())
}

pub fn radius(t: &Triple, p: u64) -> Valuation {
    point_distance(&t.a, &t.b, p)
}

/// Two ordered triples are equivalent iff they share the radius `mu` and
/// their first entries agree modulo `p^mu`.
pub fn equivalent(t1: &Triple, t2: &Triple, p: u64) -> bool {
    let mu = radius(t1, p);
    mu == radius(t2, p) && point_distance(&t1.a, &t2.a, p) >= mu
}

/// Roots in the disc of radius `radius(t)` around `t.a`, as sorted indices.
fn disc_members(t: &Triple, input: &CurveInput) -> Vec<usize> {
    let mu = radius(t, input.p);
    let SPoint::Root(a) = &t.a else {
        return Vec::new();
    };
    input
        .roots
        .iter()
        .enumerate()
        .filter(|(_, r)| vp(&(*r - a), input.p) >= mu)
        .map(|(i, _)| i)
        .collect()
}

/// The cluster `D(a, radius) ∩ R` of an ordered triple.
pub fn phi(t: &Triple, input: &CurveInput, picture: &ClusterPicture) -> Result<usize> {
    let members = disc_members(t, input);
    picture
        .clusters
        .iter()
        .find(|c| c.members == members)
        .map(|c| c.id)
        .ok_or_else(|| {
            Error::Internal(format!(
                "disc {members:?} of a triple is not a stored cluster"
            ))
        })
}

#[derive(Clone, Debug, Serialize)]
pub struct TripleClass {
    /// Representative as indices into the marked points (`None` = infinity).
    pub representative: [Option<usize>; 3],
    pub radius: i64,
    pub size: usize,
    /// Member root set of the image disc.
    pub image_members: Vec<usize>,
    pub has_infinity_representative: bool,
    /// Every member triple cuts out the same disc.
    pub phi_constant: bool,
}

fn marked_points(input: &CurveInput) -> Vec<SPoint> {
    let mut pts: Vec<SPoint> = input.roots.iter().cloned().map(SPoint::Root).collect();
    if input.has_infinity() {
        pts.push(SPoint::Infinity);
    }
    pts
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// All equivalence classes of triples of distinct marked points.
///
/// Classes are found by union-find over the pairwise equivalence test, with
/// no reference to the cluster tree.
pub fn enumerate_classes(input: &CurveInput, limit: usize) -> Result<Vec<TripleClass>> {
    let pts = marked_points(input);
    if pts.len() > limit {
        return Err(Error::OracleTooLarge {
            count: pts.len(),
            limit,
        });
    }
    let p = input.p;
    let m = pts.len();
    let dist: Vec<Vec<Valuation>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| point_distance(&pts[i], &pts[j], p))
                .collect()
        })
        .collect();

    // Ordered triples as index triples, radius cached alongside.
    let mut ordered: Vec<([usize; 3], Valuation)> = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            for k in (j + 1)..m {
                let (a, b, c) = [(i, j, k), (i, k, j), (j, k, i)]
                    .into_iter()
                    .max_by_key(|&(a, b, _)| dist[a][b])
                    .unwrap();
                debug_assert!(dist[a][c] == dist[b][c] && dist[a][c] <= dist[a][b]);
                ordered.push(([a, b, c], dist[a][b]));
            }
        }
    }

    let mut parent: Vec<usize> = (0..ordered.len()).collect();
    for x in 0..ordered.len() {
        for y in (x + 1)..ordered.len() {
            let ((tx, mx), (ty, my)) = (&ordered[x], &ordered[y]);
            if mx == my && dist[tx[0]][ty[0]] >= *mx {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                if rx != ry {
                    parent[ry] = rx;
                }
            }
        }
    }
    let as_triple =
        |t: &[usize; 3]| Triple::new(pts[t[0]].clone(), pts[t[1]].clone(), pts[t[2]].clone());
    let index_of = |i: usize| (i < input.roots.len()).then_some(i);

    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 0..ordered.len() {
        let r = find(&mut parent, x);
        groups.entry(r).or_default().push(x);
    }

    let mut classes = Vec::new();
    for (rep, group) in groups {
        let (idx, mu) = &ordered[rep];
        let t = as_triple(idx);
        let radius = mu
            .finite()
            .ok_or_else(|| Error::Internal("triple with infinite radius".into()))?;
        let image = disc_members(&t, input);
        classes.push(TripleClass {
            representative: [index_of(idx[0]), index_of(idx[1]), index_of(idx[2])],
            radius,
            size: group.len(),
            phi_constant: group
                .iter()
                .all(|&g| disc_members(&as_triple(&ordered[g].0), input) == image),
            image_members: image,
            has_infinity_representative: group
                .iter()
                .any(|&g| ordered[g].0[2] >= input.roots.len()),
        });
    }
    Ok(classes)
}

/// Outcome of cross-validating the cluster tree against the triple oracle.
#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub classes: usize,
    pub image_size: usize,
    pub passed: bool,
    pub first_discrepancy: Option<String>,
}

/// Check that classes biject with the clusters carrying a component.
pub fn cross_check(
    input: &CurveInput,
    picture: &ClusterPicture,
    limit: usize,
) -> Result<OracleReport> {
    let classes = enumerate_classes(input, limit)?;
    let pts = marked_points(input);
    let mut problems: Vec<String> = Vec::new();
    let mut note = |msg: String| problems.push(msg);

    let mut images = Vec::new();
    for class in &classes {
        let [a, b, c] = class.representative;
        let pt = |i: Option<usize>| pts[i.unwrap_or(pts.len() - 1)].clone();
        let t = Triple::new(pt(a), pt(b), pt(c));
        match phi(&t, input, picture) {
            Ok(id) => images.push(id),
            Err(e) => note(format!(
                "class with representative {:?}: {e}",
                class.representative
            )),
        }
        if !class.phi_constant {
            note(format!(
                "disc map not constant on class {:?}",
                class.representative
            ));
        }
        if picture.has_infinity && !class.has_infinity_representative {
            note(format!(
                "class {:?} has no (a, b, inf) representative",
                class.representative
            ));
        }
    }

    let mut sorted = images.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != images.len() {
        note("two classes map to the same cluster".into());
    }
    let expected: Vec<usize> = picture.image_ids().collect();
    if sorted != expected {
        note(format!(
            "image {sorted:?} differs from expected clusters {expected:?}"
        ));
    }
    let discrepancy = problems.into_iter().next();

    Ok(OracleReport {
        classes: classes.len(),
        image_size: sorted.len(),
        passed: discrepancy.is_none(),
        first_discrepancy: discrepancy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clusters::build_cluster_picture;

    fn r(x: i64) -> SPoint {
        SPoint::Root(x.into())
    }

    #[test]
    fn ordering_and_radius() {
        let t = order_triple(&Triple::new(r(0), SPoint::Infinity, r(49)), 7);
        assert_eq!(t, Triple::new(r(0), r(49), SPoint::Infinity));
        assert_eq!(radius(&t, 7), Valuation::Finite(2));

        let t = order_triple(&Triple::new(SPoint::Infinity, r(1), r(8)), 7);
        assert_eq!(t.c, SPoint::Infinity);
        assert_eq!(radius(&t, 7), Valuation::Finite(1));

        let t = order_triple(&Triple::new(r(0), r(7), SPoint::Infinity), 7);
        assert_eq!(radius(&t, 7), Valuation::Finite(1));
        let t = order_triple(&Triple::new(r(0), r(1), SPoint::Infinity), 7);
        assert_eq!(radius(&t, 7), Valuation::Finite(0));

        let t = order_triple(&Triple::new(r(1), r(0), r(49)), 7);
        assert!(t.is_ordered(7));
        assert_eq!(t.c, r(1));
    }

    #[test]
    fn equivalence_examples() {
        let t = |a, b| Triple::new(r(a), r(b), SPoint::Infinity);
        assert!(equivalent(&t(0, 7), &t(0, 14), 7));
        assert!(!equivalent(&t(0, 49), &t(7, 56), 7));
        assert!(equivalent(&t(0, 49), &t(0, 49), 7));
        assert!(!equivalent(&t(0, 7), &t(0, 49), 7));
    }

    #[test]
    fn phi_examples() {
        let input = crate::clusters::tests::example1(7);
        let pic = build_cluster_picture(&input).unwrap();
        let t = |a, b| Triple::new(r(a), r(b), SPoint::Infinity);
        assert_eq!(phi(&t(0, 7), &input, &pic).unwrap(), 1);
        assert_eq!(phi(&t(0, 1), &input, &pic).unwrap(), 0);
        assert_eq!(phi(&t(1, 8), &input, &pic).unwrap(), 5);
    }

    #[test]
    fn class_counts() {
        let input = crate::clusters::tests::example1(7);
        let classes = enumerate_classes(&input, DEFAULT_ORACLE_LIMIT).unwrap();
        assert_eq!(classes.len(), 6);
        assert_eq!(classes.iter().map(|c| c.size).sum::<usize>(), 120);

        let two_lines = CurveInput::monic(7, 6, &[0, 7, 1, -6, -13, -20]);
        let pic = build_cluster_picture(&two_lines).unwrap();
        let rep = cross_check(&two_lines, &pic, DEFAULT_ORACLE_LIMIT).unwrap();
        assert!(rep.passed, "{:?}", rep.first_discrepancy);
        assert_eq!(rep.classes, 2);

        let tiny = CurveInput::monic(7, 3, &[0, 1, 2]);
        assert_eq!(enumerate_classes(&tiny, 16).unwrap().len(), 1);
    }

    #[test]
    fn refuses_large_inputs() {
        let big = CurveInput::monic(7, 6, &(0..20).collect::<Vec<_>>());
        assert!(matches!(
            enumerate_classes(&big, DEFAULT_ORACLE_LIMIT),
            Err(Error::OracleTooLarge {
                count: 21,
                limit: 16
            })
        ));
    }
}
