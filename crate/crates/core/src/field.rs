//! Node-indexed scalar fields over a [`Domain`].

use std::io::Write;

use crate::error::{Error, Result};
use crate::geometry::{Domain, NodeClass};

/// The odd power `|v|^{beta-1} v = sign(v) |v|^beta`, with the value at
/// `v = 0` defined as 0 for every `beta > 0`.
pub fn signed_pow(v: f64, beta: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v.signum() * v.abs().powf(beta)
    }
}

/// A real value per grid node. Exterior nodes of masked domains are kept at
/// zero; solution-type fields also vanish on the boundary.
#[derive(Clone, Debug)]
pub struct ScalarField {
    domain: Domain,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(domain: &Domain) -> Self {
        ScalarField {
            domain: domain.clone(),
            values: vec![0.0; domain.num_nodes()],
        }
    }

    /// Constant value on interior and boundary nodes (zero on exterior).
    pub fn constant(domain: &Domain, c: f64) -> Self {
        let mut f = Self::zeros(domain);
        for i in 0..domain.num_nodes() {
            if domain.node_class(i) != NodeClass::Exterior {
                f.values[i] = c;
            }
        }
        f
    }

    /// Sample `f(x, y)` at every non-exterior node.
    pub fn from_fn(domain: &Domain, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let mut out = Self::zeros(domain);
        for i in 0..domain.num_nodes() {
            if domain.node_class(i) != NodeClass::Exterior {
                let [x, y] = domain.coords()[i];
                out.values[i] = f(x, y);
            }
        }
        out
    }

    /// Sample `f(x, y)` at interior nodes only, keeping the boundary at zero.
    pub fn dirichlet_from_fn(domain: &Domain, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let mut out = Self::zeros(domain);
        for &i in domain.interior() {
            let [x, y] = domain.coords()[i];
            out.values[i] = f(x, y);
        }
        out
    }

    pub fn from_values(domain: &Domain, values: Vec<f64>) -> Result<Self> {
        if values.len() != domain.num_nodes() {
            return Err(Error::invalid(
                "value vector length does not match the domain",
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("fields must have finite entries"));
        }
        Ok(ScalarField {
            domain: domain.clone(),
            values,
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Sup norm over non-exterior nodes.
    pub fn sup_norm(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.values.len() {
            if self.domain.node_class(i) != NodeClass::Exterior {
                m = m.max(self.values[i].abs());
            }
        }
        m
    }

    pub fn interior_min(&self) -> f64 {
        self.fold_interior(f64::INFINITY, f64::min)
    }

    pub fn interior_max(&self) -> f64 {
        self.fold_interior(f64::NEG_INFINITY, f64::max)
    }

    fn fold_interior(&self, init: f64, f: impl Fn(f64, f64) -> f64) -> f64 {
        self.domain
            .interior()
            .iter()
            .fold(init, |acc, &i| f(acc, self.values[i]))
    }

    /// Whether all boundary values vanish (to a tiny relative tolerance).
    pub fn vanishes_on_boundary(&self) -> bool {
        let scale = self.sup_norm().max(1.0);
        self.domain
            .boundary()
            .iter()
            .all(|&b| self.values[b].abs() <= 1e-12 * scale)
    }

    /// Elementwise map over non-exterior nodes.
    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Self {
        let mut out = self.clone();
        for i in 0..out.values.len() {
            if self.domain.node_class(i) != NodeClass::Exterior {
                out.values[i] = f(self.values[i]);
            }
        }
        out
    }

    /// Elementwise combination with another field on the same domain.
    pub fn zip_map(&self, other: &ScalarField, mut f: impl FnMut(f64, f64) -> f64) -> Result<Self> {
        self.check_same_domain(other)?;
        let mut out = self.clone();
        for i in 0..out.values.len() {
            if self.domain.node_class(i) != NodeClass::Exterior {
                out.values[i] = f(self.values[i], other.values[i]);
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, t: f64) -> Self {
        self.map(|v| t * v)
    }

    /// `|self|^{beta-1} self` nodewise.
    pub fn signed_pow(&self, beta: f64) -> Self {
        self.map(|v| signed_pow(v, beta))
    }

    /// Nonnegative part, `max(self, 0)` nodewise.
    pub fn positive_part(&self) -> Self {
        self.map(|v| v.max(0.0))
    }

    /// Sup norm of the difference with another field on the same domain.
    pub fn sup_distance(&self, other: &ScalarField) -> Result<f64> {
        self.check_same_domain(other)?;
        let mut m = 0.0f64;
        for i in 0..self.values.len() {
            if self.domain.node_class(i) != NodeClass::Exterior {
                m = m.max((self.values[i] - other.values[i]).abs());
            }
        }
        Ok(m)
    }

    pub fn check_same_domain(&self, other: &ScalarField) -> Result<()> {
        if !self.domain.same_as(other.domain()) {
            return Err(Error::invalid("fields live on different domains"));
        }
        Ok(())
    }

    /// One-sided boundary quotients approximating the outward normal
    /// derivative (see [`Domain::boundary_normal_quotient`]).
    pub fn boundary_normal_quotient(&self) -> Result<Vec<f64>> {
        self.domain.boundary_normal_quotient(&self.values)
    }

    /// One smoothing pass: each interior value is averaged with the mean of
    /// its interior-or-boundary grid neighbors. Preserves nonnegativity.
    pub fn smoothed(&self) -> Self {
        let dom = &self.domain;
        let mut out = self.clone();
        if dom.dim() == 1 {
            for &i in dom.interior() {
                let nb = 0.5 * (self.values[i - 1] + self.values[i + 1]);
                out.values[i] = 0.5 * (self.values[i] + nb);
            }
        } else {
            let (nx, ny) = dom.nodes_per_axis();
            for &i in dom.interior() {
                let (ix, iy) = (i % nx, i / nx);
                let mut sum = 0.0;
                let mut cnt = 0.0;
                for (dx, dy) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)] {
                    let (jx, jy) = (ix as i64 + dx, iy as i64 + dy);
                    if jx < 0 || jy < 0 || jx as usize >= nx || jy as usize >= ny {
                        continue;
                    }
                    let j = jx as usize + jy as usize * nx;
                    if dom.node_class(j) != NodeClass::Exterior {
                        sum += self.values[j];
                        cnt += 1.0;
                    }
                }
                if cnt > 0.0 {
                    out.values[i] = 0.5 * (self.values[i] + sum / cnt);
                }
            }
        }
        out
    }

    /// Write the field as CSV with node coordinate columns and the value.
    pub fn write_csv(&self, mut w: impl Write, header_comment: Option<&str>) -> Result<()> {
        if let Some(c) = header_comment {
            writeln!(w, "# {c}")?;
        }
        if self.domain.dim() == 1 {
            writeln!(w, "x,value")?;
            for i in 0..self.values.len() {
                writeln!(
                    w,
                    "{},{}",
                    fmt_f64(self.domain.coords()[i][0]),
                    fmt_f64(self.values[i])
                )?;
            }
        } else {
            writeln!(w, "x,y,value")?;
            for i in 0..self.values.len() {
                if self.domain.node_class(i) == NodeClass::Exterior {
                    continue;
                }
                let [x, y] = self.domain.coords()[i];
                writeln!(
                    w,
                    "{},{},{}",
                    fmt_f64(x),
                    fmt_f64(y),
                    fmt_f64(self.values[i])
                )?;
            }
        }
        Ok(())
    }
}

/// Locale-independent float formatting shared by all CSV writers.
pub(crate) fn fmt_f64(v: f64) -> String {
    let mut s = format!("{v}");
    if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN") {
        s.push_str(".0");
    }
    s
}
