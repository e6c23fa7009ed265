//! Galois-representation summary assembled from the reduction data.
//!
//! Over `K2 = K(p^(1/n))` inertia acts through `toric_rank` unipotent 2x2
//! blocks and Frobenius on the toric part through its action on the cycles
//! of the dual graph. Over `K` the abelian part of each component family
//! additionally picks up ramified characters, read off the content
//! valuations: a d-new part is twisted exactly when `d` does not divide `e_t`.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{divisors, euler_phi, gcd};
use crate::clusters::{build_cluster_picture, ClusterPicture, CurveInput, DEFAULT_MAX_ROOTS};
use crate::error::{Error, Result};
use crate::fiber::{cover_genus, reduce_all, ComponentFamily};
use crate::graph::{build_dual_graph, rank_formula, DualGraph, H1Action};
use crate::triples::{cross_check, OracleReport, DEFAULT_ORACLE_LIMIT};

/// Marker for data this library deliberately does not compute.
pub const ABELIAN_FROBENIUS_OUT_OF_SCOPE: &str =
    "requires point counting on the abelian components (out of scope)";

/// Riemann-Hurwitz genus of `y^n = f(x)` with `deg f` distinct roots, clamped at 0.
pub fn whole_curve_genus(n: u64, deg: u64) -> u64 {
    if deg == 0 {
        return 0;
    }
    let twice = (deg as i64 - 1) * (n as i64 - 1) + 1 - gcd(n, deg) as i64;
    (twice.max(0) / 2) as u64
}

/// Genus of `y^n = f(x)`; errors when the curve is rational.
pub fn curve_genus(n: u64, deg: u64) -> Result<u64> {
    match whole_curve_genus(n, deg) {
        0 => Err(Error::GenusZero),
        g => Ok(g),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DnewGenus {
    pub genus: u64,
    pub new_genus: u64,
}

/// Subtract the contributions of proper divisors from a genus ladder.
fn new_parts(genus_of: impl Fn(u64) -> Result<u64>, n: u64) -> Result<BTreeMap<u64, DnewGenus>> {
    let mut out: BTreeMap<u64, DnewGenus> = BTreeMap::new();
    for d in divisors(n) {
        let genus = genus_of(d)?;
        let older: u64 = out
            .iter()
            .filter(|(e, _)| d % **e == 0)
            .map(|(_, g)| g.new_genus)
            .sum();
        let new_genus = genus.checked_sub(older).ok_or_else(|| {
            Error::Internal(format!("negative {d}-new genus ({genus} - {older})"))
        })?;
        out.insert(d, DnewGenus { genus, new_genus });
    }
    Ok(out)
}

/// Genus of each quotient `y^d = f(x)` and of its d-new part.
pub fn dnew_genera(n: u64, deg: u64) -> BTreeMap<u64, DnewGenus> {
    new_parts(|d| Ok(whole_curve_genus(d, deg)), n)
        .expect("quotient genera increase along divisors")
}

/// A ramified character of inertia acting on a d-new part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistCharacter {
    pub d: u64,
    pub ramified: bool,
    /// Order of the character; the twist is by `Q_p(p^(1/order))`.
    pub order: u64,
    /// Copies of the sum of `chi^i` over `i` prime to `d`.
    pub multiplicity: u64,
    /// The exponents `i` prime to `d`, reduced mod `order`.
    pub exponents: Vec<u64>,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InertiaOnPart {
    /// The d-new part vanishes.
    Empty,
    /// Inertia acts trivially; Frobenius needs point counts.
    Trivial,
    Twisted(TwistCharacter),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DnewRow {
    pub divisor: u64,
    pub genus_d: u64,
    pub genus_d_new: u64,
    pub ramified: bool,
    pub inertia: InertiaOnPart,
}

/// d-new decomposition of the reduced curve over one cluster, `d > 1`.
pub fn inertia_characters(family: &ComponentFamily, p: u64) -> Result<Vec<DnewRow>> {
    let ladder = new_parts(
        |d| cover_genus(d, &family.children_mults).map(|(comps, g)| comps * g),
        family.n,
    )?;
    let total: u64 = ladder.values().map(|g| g.new_genus).sum();
    if total != family.total_genus() {
        return Err(Error::Internal(format!(
            "cluster {}: d-new genera sum to {total}, expected {}",
            family.cluster,
            family.total_genus()
        )));
    }

    let e = family.e_t.rem_euclid(family.n as i64) as u64;
    let mut rows = Vec::new();
    for (&d, g) in ladder.iter().filter(|(d, _)| **d > 1) {
        let ramified = !e.is_multiple_of(d);
        let inertia = if g.new_genus == 0 {
            InertiaOnPart::Empty
        } else if !ramified {
            InertiaOnPart::Trivial
        } else {
            let phi = euler_phi(d);
            if (2 * g.new_genus) % phi != 0 {
                return Err(Error::Internal(format!(
                    "cluster {}: {d}-new part of genus {} is not a multiple of phi({d}) = {phi}",
                    family.cluster, g.new_genus
                )));
            }
            let order = d / gcd(d, e);
            let mut exponents: Vec<u64> = (1..=d)
                .filter(|i| gcd(*i, d) == 1)
                .map(|i| i % order)
                .collect();
            exponents.sort_unstable();
            InertiaOnPart::Twisted(TwistCharacter {
                d,
                ramified,
                order,
                multiplicity: 2 * g.new_genus / phi,
                exponents,
                description: format!("Q_{p}({p}^(1/{order}))"),
            })
        };
        rows.push(DnewRow {
            divisor: d,
            genus_d: g.genus,
            genus_d_new: g.new_genus,
            ramified,
            inertia,
        });
    }
    Ok(rows)
}

/// How inertia of `K` (not only of `K2`) acts on the dual graph.
///
/// A tame inertia generator rescales `y_t = y / p^(e_t/n)` by `zeta_n^(e_t)`,
/// moving component `l` of a cluster to `l + e_t mod d` and point `Q_i` to
/// `Q_(i + e_t mod r)`. When every such shift vanishes the graph action
/// descends unchanged; otherwise the descent is left undetermined.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphInertiaDescent {
    pub certified_trivial: bool,
    /// Clusters whose components or points inertia would move.
    pub moving_clusters: Vec<usize>,
}

fn graph_inertia_descent(graph: &DualGraph, families: &[ComponentFamily]) -> GraphInertiaDescent {
    let fam: BTreeMap<usize, &ComponentFamily> = families.iter().map(|f| (f.cluster, f)).collect();
    let mut moving = Vec::new();
    for f in families {
        if f.e_t.rem_euclid(f.d as i64) != 0 {
            moving.push(f.cluster);
        }
    }
    for e in &graph.edges {
        let child = fam[&e.pair.1];
        if child.e_t.rem_euclid(e.modulus as i64) != 0 {
            moving.push(child.cluster);
        }
    }
    moving.sort_unstable();
    moving.dedup();
    GraphInertiaDescent {
        certified_trivial: moving.is_empty(),
        moving_clusters: moving,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClusterReport {
    pub cluster: usize,
    pub equation: String,
    pub d: u64,
    pub genus_each: u64,
    pub definition_field_degree: u64,
    pub dnew_rows: Vec<DnewRow>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisReport {
    pub curve_genus: u64,
    pub abelian_genus_sum: u64,
    pub toric_rank: u64,
    pub rank_formula: i64,
    /// Unipotent 2x2 Jordan blocks of inertia over `K2`.
    pub inertia_k2_blocks: u64,
    pub per_cluster: Vec<ClusterReport>,
    pub h1_action: H1Action,
    pub dnew: BTreeMap<u64, DnewGenus>,
    pub graph_inertia: GraphInertiaDescent,
}

impl GaloisReport {
    pub fn twist_characters(&self) -> impl Iterator<Item = (usize, &TwistCharacter)> {
        self.per_cluster.iter().flat_map(|c| {
            c.dnew_rows.iter().filter_map(move |r| match &r.inertia {
                InertiaOnPart::Twisted(t) => Some((c.cluster, t)),
                _ => None,
            })
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AnalysisOptions {
    pub max_roots: usize,
    pub run_oracle: bool,
    pub oracle_limit: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            max_roots: DEFAULT_MAX_ROOTS,
            run_oracle: false,
            oracle_limit: DEFAULT_ORACLE_LIMIT,
        }
    }
}

/// Everything computed for one curve.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub input: CurveInput,
    pub picture: ClusterPicture,
    pub families: Vec<ComponentFamily>,
    pub graph: DualGraph,
    pub report: GaloisReport,
    pub oracle: Option<OracleReport>,
}

/// Run the full pipeline: clusters, reduced components, dual graph, characters.
pub fn assemble_report(input: &CurveInput, options: AnalysisOptions) -> Result<Analysis> {
    input.validate(options.max_roots)?;
    let picture = build_cluster_picture(input)?;
    let families = reduce_all(input, &picture)?;
    let graph = build_dual_graph(&picture, &families, input)?;
    let h1_action = graph.h1_frobenius()?;

    let curve_genus = curve_genus(input.n, input.degree())?;
    let abelian_genus_sum: u64 = families.iter().map(ComponentFamily::total_genus).sum();
    let betti = graph.betti();
    let formula = rank_formula(&picture, input.n);
    if betti != formula {
        return Err(Error::Internal(format!(
            "graph Betti number {betti} differs from the cluster rank formula {formula}"
        )));
    }
    let toric_rank = betti as u64;
    if abelian_genus_sum + toric_rank != curve_genus {
        let dump: Vec<String> = families
            .iter()
            .map(|f| format!("cluster {}: {} x genus {}", f.cluster, f.d, f.genus_each))
            .collect();
        return Err(Error::Internal(format!(
            "genus conservation failed: {abelian_genus_sum} + {toric_rank} != {curve_genus} [{}]",
            dump.join("; ")
        )));
    }

    let per_cluster = families
        .iter()
        .map(|f| {
            Ok(ClusterReport {
                cluster: f.cluster,
                equation: f.equation(),
                d: f.d,
                genus_each: f.genus_each,
                definition_field_degree: f.definition_field_degree,
                dnew_rows: inertia_characters(f, input.p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let oracle = if options.run_oracle {
        Some(cross_check(input, &picture, options.oracle_limit)?)
    } else {
        None
    };

    let report = GaloisReport {
        curve_genus,
        abelian_genus_sum,
        toric_rank,
        rank_formula: formula,
        inertia_k2_blocks: toric_rank,
        per_cluster,
        dnew: dnew_genera(input.n, input.degree()),
        graph_inertia: graph_inertia_descent(&graph, &families),
        h1_action,
    };
    Ok(Analysis {
        input: input.clone(),
        picture,
        families,
        graph,
        report,
        oracle,
    })
}

impl Analysis {
    pub fn oracle_status(&self) -> &'static str {
        match &self.oracle {
            None => "SKIPPED",
            Some(o) if o.passed => "PASS",
            Some(_) => "FAIL",
        }
    }

    pub fn to_json(&self) -> Value {
        let r = &self.report;
        let clusters: Vec<Value> = self
            .picture
            .clusters
            .iter()
            .map(|c| {
                json!({
                    "id": c.id,
                    "members": c.members,
                    "roots": c.members.iter().map(|&i| self.input.roots[i].to_string()).collect::<Vec<_>>(),
                    "depth": c.depth,
                    "relative_depth": c.relative_depth,
                    "parent": c.parent,
                    "children": c.children,
                    "in_image": self.picture.in_image(c.id),
                    "content_valuation": self.picture.content_valuation(c.id, &self.input),
                })
            })
            .collect();
        let twists: Vec<Value> = r
            .twist_characters()
            .map(|(cluster, t)| json!({"cluster": cluster, "character": t}))
            .collect();
        json!({
            "input": self.input,
            "has_infinity": self.picture.has_infinity,
            "smax_in_image": self.picture.smax_in_image,
            "clusters": clusters,
            "components": self.families.iter().map(ComponentFamily::fragment).collect::<Vec<_>>(),
            "dual_graph": self.graph.to_json(),
            "galois": {
                "curve_genus": r.curve_genus,
                "toric_rank": r.toric_rank,
                "abelian_genus_sum": r.abelian_genus_sum,
                "inertia_K2_blocks": r.inertia_k2_blocks,
                "h1_frobenius": r.h1_action.to_json(),
                "dnew": r.dnew.iter().map(|(d, g)| json!({"d": d, "genus": g.genus, "new_genus": g.new_genus})).collect::<Vec<_>>(),
                "per_cluster": r.per_cluster,
                "twist_characters": twists,
                "graph_inertia_over_K": {
                    "status": if r.graph_inertia.certified_trivial { "TRIVIAL" } else { "UNDETERMINED" },
                    "moving_clusters": r.graph_inertia.moving_clusters,
                },
                "abelian_frobenius": ABELIAN_FROBENIUS_OUT_OF_SCOPE,
            },
            "checks": {
                "conservation": "PASS",
                "rank_formula": "PASS",
                "oracle": self.oracle_status(),
                "oracle_discrepancy": self.oracle.as_ref().and_then(|o| o.first_discrepancy.clone()),
            },
        })
    }
}
