//! Reduction data of the special fiber above each cluster.
//!
//! Above a cluster `s` with children of sizes `a_1..a_N` the reduced curve is
//! `y^n = c * prod (x - alpha_i)^(a_i)` over F_p. It splits into
//! `d = gcd(n, a_1, .., a_N)` components indexed by `l` in `[0, d)`, namely
//! `y^(n/d) = zeta_d^l * c^(1/d) * prod (x - alpha_i)^(a_i/d)`.

use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{dlog_mu, gcd, gcd_all, residue, unit_residue, FpElem, Rational};
use crate::clusters::{ClusterPicture, CurveInput};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentFamily {
    pub cluster: usize,
    pub n: u64,
    /// Input index of the canonical center root.
    pub center: usize,
    pub center_value: Rational,
    /// Cluster depth; the chart is `x = center + p^scale * x_t`.
    pub scale: i64,
    pub children_mults: Vec<u64>,
    pub reduced_roots: Vec<FpElem>,
    pub d: u64,
    pub e_t: i64,
    pub c_residue: FpElem,
    pub genus_each: u64,
    pub frobenius_shift: u64,
    pub definition_field_degree: u64,
}

/// Number of components and genus of each for `y^n = c * prod (x - alpha_i)^(a_i)`
/// with distinct `alpha_i`, by Riemann-Hurwitz on each component.
pub fn cover_genus(n: u64, mults: &[u64]) -> Result<(u64, u64)> {
    let d = gcd_all(std::iter::once(n).chain(mults.iter().copied()));
    let big_n = mults.len() as i64;
    let (n_i, d_i) = (n as i64, d as i64);
    let total: u64 = mults.iter().sum();
    let mut twice =
        n_i * (big_n - 2) - mults.iter().map(|&a| gcd(n, a) as i64).sum::<i64>() + 2 * d_i;
    if !total.is_multiple_of(n) {
        twice += n_i - gcd(n, total) as i64;
    }
    if twice < 0 || twice % (2 * d_i) != 0 {
        return Err(Error::Internal(format!(
            "genus formula gives {twice}/{} for n = {n}, multiplicities {mults:?}",
            2 * d
        )));
    }
    Ok((d, (twice / (2 * d_i)) as u64))
}

/// Reduced equation data for a cluster carrying a component.
pub fn reduce_component(
    id: usize,
    input: &CurveInput,
    picture: &ClusterPicture,
) -> Result<ComponentFamily> {
    if !picture.in_image(id) {
        return Err(Error::Internal(format!(
            "cluster {id} carries no component"
        )));
    }
    let p = input.p;
    let cluster = picture.get(id);
    let center = cluster.center();
    let center_value = &input.roots[center];
    let scale = cluster.depth;

    let reduce = |root: usize| -> Result<FpElem> {
        residue(
            &(&input.roots[root] - center_value).scale_by_power(p, -scale),
            p,
        )
    };

    let mut children_mults = Vec::with_capacity(cluster.children.len());
    let mut reduced_roots = Vec::with_capacity(cluster.children.len());
    for &child in &cluster.children {
        children_mults.push(picture.child_size(child) as u64);
        let alpha = reduce(picture.child_representative(child))?;
        if cfg!(debug_assertions) {
            if let crate::clusters::Child::Cluster(k) = child {
                for &m in &picture.get(k).members {
                    debug_assert_eq!(reduce(m)?, alpha, "child residues disagree");
                }
            }
        }
        reduced_roots.push(alpha);
    }
    for i in 0..reduced_roots.len() {
        for j in (i + 1)..reduced_roots.len() {
            if reduced_roots[i] == reduced_roots[j] {
                return Err(Error::Internal(format!(
                    "cluster {id}: children {i} and {j} reduce to the same point"
                )));
            }
        }
    }

    let mut c_residue = unit_residue(&input.leading_coefficient, p)?;
    for (beta, value) in input.roots.iter().enumerate() {
        if !cluster.contains(beta) {
            c_residue = c_residue * unit_residue(&(center_value - value), p)?;
        }
    }

    let (d, genus_each) = cover_genus(input.n, &children_mults)?;
    let frobenius_shift = dlog_mu(c_residue, d, p)?;
    let definition_field_degree = d / gcd(d, frobenius_shift);

    Ok(ComponentFamily {
        cluster: id,
        n: input.n,
        center,
        center_value: center_value.clone(),
        scale,
        children_mults,
        reduced_roots,
        d,
        e_t: picture.content_valuation(id, input),
        c_residue,
        genus_each,
        frobenius_shift,
        definition_field_degree,
    })
}

/// Component families for every cluster in the image, in cluster order.
pub fn reduce_all(input: &CurveInput, picture: &ClusterPicture) -> Result<Vec<ComponentFamily>> {
    picture
        .image_ids()
        .map(|id| reduce_component(id, input, picture))
        .collect()
}

impl ComponentFamily {
    pub fn num_irreducible(&self) -> u64 {
        self.d
    }

    /// Total genus of the reduced curve over this cluster.
    pub fn total_genus(&self) -> u64 {
        self.d * self.genus_each
    }

    /// Human-readable reduced equation, e.g. `y^6 = -1*x^2*(x-1)^2*(x-2)^2`.
    pub fn equation(&self) -> String {
        let mut out = format!("y^{} = {}", self.n, self.c_residue.signed());
        for (alpha, &a) in self.reduced_roots.iter().zip(&self.children_mults) {
            let shift = alpha.signed();
            let factor = match shift {
                0 => "x".to_string(),
                s if s > 0 => format!("(x-{s})"),
                s => format!("(x+{})", -s),
            };
            out.push('*');
            out.push_str(&factor);
            if a > 1 {
                out.push_str(&format!("^{a}"));
            }
        }
        out
    }

    /// Components permute as `l -> l + shift mod d` under Frobenius.
    pub fn frobenius_orbit_of(&self, ell: u64) -> Vec<u64> {
        let mut orbit = vec![ell % self.d];
        let mut cur = (ell + self.frobenius_shift) % self.d;
        while cur != orbit[0] {
            orbit.push(cur);
            cur = (cur + self.frobenius_shift) % self.d;
        }
        orbit
    }

    /// JSON fragment describing this family.
    pub fn fragment(&self) -> Value {
        json!({
            "cluster": self.cluster,
            "equation": {
                "n": self.n,
                "constant_mod_p": self.c_residue.value,
                "roots": self
                    .reduced_roots
                    .iter()
                    .zip(&self.children_mults)
                    .map(|(alpha, a)| json!([alpha.value, a]))
                    .collect::<Vec<_>>(),
                "text": self.equation(),
            },
            "d": self.d,
            "genus_each": self.genus_each,
            "e_t": self.e_t,
            "frobenius_shift": self.frobenius_shift,
            "definition_field_degree": self.definition_field_degree,
        })
    }
}
