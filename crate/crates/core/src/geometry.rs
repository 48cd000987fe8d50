//! Discretized domains with Dirichlet boundary.
//!
//! Supported shapes: an interval `(0, L)`, an axis-aligned rectangle
//! `(0, Lx) × (0, Ly)`, and a disk of radius `R` realized as a mask on a
//! bounding grid. Grids are uniform tensor grids; `resolution` counts grid
//! cells per axis, so an axis of length `L` has spacing `h = L / resolution`
//! and `resolution + 1` nodes.
//!
//! In 2D every grid cell is split into two right triangles along the
//! anti-diagonal, which keeps the triangulation non-obtuse and the assembled
//! operators comparison-friendly. Boundary conditions are imposed by
//! elimination: boundary nodes are explicit grid nodes pinned to zero.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Domain shape descriptor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DomainKind {
    Interval { length: f64 },
    Rectangle { lx: f64, ly: f64 },
    Disk { radius: f64 },
}

/// Classification of a grid node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeClass {
    /// Strictly inside the domain; carries an unknown.
    Interior,
    /// Pinned to zero by the Dirichlet condition.
    Boundary,
    /// Outside a masked domain; ignored entirely.
    Exterior,
}

/// One boundary node together with its inward neighbor, used for the
/// one-sided difference quotient approximating the outward normal
/// derivative.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryAdjacency {
    pub boundary_node: usize,
    pub inward_node: usize,
    pub spacing: f64,
}

#[derive(Debug)]
struct DomainData {
    kind: DomainKind,
    resolution: usize,
    dim: usize,
    /// Nodes per axis (resolution + 1); `nodes_y == 1` in 1D.
    nodes_x: usize,
    nodes_y: usize,
    h: [f64; 2],
    coords: Vec<[f64; 2]>,
    class: Vec<NodeClass>,
    interior: Vec<usize>,
    boundary: Vec<usize>,
    /// node id -> index into `interior` (unknown numbering), or usize::MAX.
    interior_index: Vec<usize>,
    adjacency: Vec<BoundaryAdjacency>,
    /// 2D only: triangles with at least one interior vertex.
    triangles: Vec<[usize; 3]>,
    /// 1D only: cells as (left, right) node pairs.
    cells: Vec<(usize, usize)>,
    /// Lumped mass per node (zero at exterior nodes).
    lumped_mass: Vec<f64>,
    measure: f64,
    diameter: f64,
}

/// An immutable discretized domain. Cheap to clone and safe to share across
/// threads; all fields referencing the same `Domain` share one allocation.
#[derive(Clone)]
pub struct Domain {
    data: Arc<DomainData>,
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Domain({:?}, resolution {})",
            self.data.kind, self.data.resolution
        )
    }
}

impl Domain {
    /// Interval `(0, length)` with `resolution` cells.
    pub fn interval(length: f64, resolution: usize) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::invalid(format!(
                "interval length must be positive and finite, got {length}"
            )));
        }
        if resolution < 2 {
            return Err(Error::invalid(
                "resolution must be at least 2 so the interior is nonempty",
            ));
        }
        let n = resolution;
        let h = length / n as f64;
        let nodes = n + 1;
        let mut coords = Vec::with_capacity(nodes);
        let mut class = Vec::with_capacity(nodes);
        for i in 0..nodes {
            coords.push([i as f64 * h, 0.0]);
            class.push(if i == 0 || i == n {
                NodeClass::Boundary
            } else {
                NodeClass::Interior
            });
        }
        let adjacency = vec![
            BoundaryAdjacency {
                boundary_node: 0,
                inward_node: 1,
                spacing: h,
            },
            BoundaryAdjacency {
                boundary_node: n,
                inward_node: n - 1,
                spacing: h,
            },
        ];
        let cells = (0..n).map(|i| (i, i + 1)).collect();
        let mut lumped_mass = vec![0.0; nodes];
        for i in 0..nodes {
            lumped_mass[i] = if i == 0 || i == n { h / 2.0 } else { h };
        }
        Ok(Self::finish(DomainData {
            kind: DomainKind::Interval { length },
            resolution,
            dim: 1,
            nodes_x: nodes,
            nodes_y: 1,
            h: [h, 0.0],
            coords,
            class,
            interior: Vec::new(),
            boundary: Vec::new(),
            interior_index: Vec::new(),
            adjacency,
            triangles: Vec::new(),
            cells,
            lumped_mass,
            measure: length,
            diameter: length,
        }))
    }

    /// Rectangle `(0, lx) × (0, ly)` with `resolution` cells per axis.
    pub fn rectangle(lx: f64, ly: f64, resolution: usize) -> Result<Self> {
        if !(lx > 0.0 && ly > 0.0) || !lx.is_finite() || !ly.is_finite() {
            return Err(Error::invalid(format!(
                "rectangle sides must be positive and finite, got {lx} x {ly}"
            )));
        }
        if resolution < 2 {
            return Err(Error::invalid(
                "resolution must be at least 2 so the interior is nonempty",
            ));
        }
        let n = resolution;
        let (hx, hy) = (lx / n as f64, ly / n as f64);
        let nodes_x = n + 1;
        let nodes_y = n + 1;
        let mut coords = Vec::with_capacity(nodes_x * nodes_y);
        let mut class = Vec::with_capacity(nodes_x * nodes_y);
        for iy in 0..nodes_y {
            for ix in 0..nodes_x {
                coords.push([ix as f64 * hx, iy as f64 * hy]);
                let edge = ix == 0 || iy == 0 || ix == n || iy == n;
                class.push(if edge {
                    NodeClass::Boundary
                } else {
                    NodeClass::Interior
                });
            }
        }
        Self::build_2d(
            DomainKind::Rectangle { lx, ly },
            resolution,
            nodes_x,
            nodes_y,
            [hx, hy],
            coords,
            class,
            lx * ly,
            lx.hypot(ly),
        )
    }

    /// Disk of radius `radius`, masked on the bounding grid `[-R, R]²` with
    /// `resolution` cells per axis. Its measure is the cell-center mask
    /// quadrature, which converges to `πR²` as the grid is refined.
    pub fn disk(radius: f64, resolution: usize) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::invalid(format!(
                "disk radius must be positive and finite, got {radius}"
            )));
        }
        if resolution < 4 {
            return Err(Error::invalid(
                "disk resolution must be at least 4 so the mask has an interior",
            ));
        }
        let n = resolution;
        let h = 2.0 * radius / n as f64;
        let nodes_x = n + 1;
        let nodes_y = n + 1;
        let r2 = radius * radius;
        let mut coords = Vec::with_capacity(nodes_x * nodes_y);
        let mut inside = Vec::with_capacity(nodes_x * nodes_y);
        for iy in 0..nodes_y {
            for ix in 0..nodes_x {
                let x = -radius + ix as f64 * h;
                let y = -radius + iy as f64 * h;
                coords.push([x, y]);
                inside.push(x * x + y * y < r2);
            }
        }
        // Interior = strictly inside; boundary = outside but 8-adjacent to an
        // interior node; everything else is exterior.
        let idx = |ix: usize, iy: usize| ix + iy * nodes_x;
        let mut class = vec![NodeClass::Exterior; nodes_x * nodes_y];
        for iy in 0..nodes_y {
            for ix in 0..nodes_x {
                if inside[idx(ix, iy)] {
                    class[idx(ix, iy)] = NodeClass::Interior;
                }
            }
        }
        for iy in 0..nodes_y {
            for ix in 0..nodes_x {
                if class[idx(ix, iy)] != NodeClass::Exterior {
                    continue;
                }
                'scan: for dy in -1i64..=1 {
                    for dx in -1i64..=1 {
                        let (jx, jy) = (ix as i64 + dx, iy as i64 + dy);
                        if jx < 0 || jy < 0 || jx >= nodes_x as i64 || jy >= nodes_y as i64 {
                            continue;
                        }
                        if class[idx(jx as usize, jy as usize)] == NodeClass::Interior {
                            class[idx(ix, iy)] = NodeClass::Boundary;
                            break 'scan;
                        }
                    }
                }
            }
        }
        // Mask quadrature over cell centers.
        let mut inside_cells = 0usize;
        for cy in 0..n {
            for cx in 0..n {
                let x = -radius + (cx as f64 + 0.5) * h;
                let y = -radius + (cy as f64 + 0.5) * h;
                if x * x + y * y < r2 {
                    inside_cells += 1;
                }
            }
        }
        let measure = inside_cells as f64 * h * h;
        if measure <= 0.0 {
            return Err(Error::invalid("disk mask is empty at this resolution"));
        }
        Self::build_2d(
            DomainKind::Disk { radius },
            resolution,
            nodes_x,
            nodes_y,
            [h, h],
            coords,
            class,
            measure,
            2.0 * radius,
        )
    }

    /// Build a domain from a kind descriptor.
    pub fn from_kind(kind: DomainKind, resolution: usize) -> Result<Self> {
        match kind {
            DomainKind::Interval { length } => Self::interval(length, resolution),
            DomainKind::Rectangle { lx, ly } => Self::rectangle(lx, ly, resolution),
            DomainKind::Disk { radius } => Self::disk(radius, resolution),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn build_2d(
        kind: DomainKind,
        resolution: usize,
        nodes_x: usize,
        nodes_y: usize,
        h: [f64; 2],
        coords: Vec<[f64; 2]>,
        class: Vec<NodeClass>,
        measure: f64,
        diameter: f64,
    ) -> Result<Self> {
        let idx = |ix: usize, iy: usize| ix + iy * nodes_x;
        // Anti-diagonal split: lower triangle (i,j)-(i+1,j)-(i,j+1) and upper
        // triangle (i+1,j)-(i+1,j+1)-(i,j+1). Keep triangles with at least one
        // interior vertex; their remaining vertices are interior or boundary.
        let mut triangles = Vec::new();
        let has_interior = |t: &[usize; 3]| t.iter().any(|&v| class[v] == NodeClass::Interior);
        let all_in_domain = |t: &[usize; 3]| t.iter().all(|&v| class[v] != NodeClass::Exterior);
        for cy in 0..nodes_y - 1 {
            for cx in 0..nodes_x - 1 {
                let lower = [idx(cx, cy), idx(cx + 1, cy), idx(cx, cy + 1)];
                let upper = [idx(cx + 1, cy), idx(cx + 1, cy + 1), idx(cx, cy + 1)];
                for t in [lower, upper] {
                    if has_interior(&t) {
                        debug_assert!(all_in_domain(&t));
                        triangles.push(t);
                    }
                }
            }
        }
        if triangles.is_empty() {
            return Err(Error::invalid("domain has no interior at this resolution"));
        }
        let tri_area = 0.5 * h[0] * h[1];
        let mut lumped_mass = vec![0.0; coords.len()];
        for t in &triangles {
            for &v in t {
                lumped_mass[v] += tri_area / 3.0;
            }
        }
        // Inward neighbor of each boundary node: the adjacent interior node,
        // axis-aligned preferred over diagonal, nearest the domain's center
        // among ties so the quotient points inward.
        let center = match kind {
            DomainKind::Rectangle { lx, ly } => [lx / 2.0, ly / 2.0],
            DomainKind::Disk { .. } => [0.0, 0.0],
            DomainKind::Interval { .. } => unreachable!(),
        };
        let mut adjacency = Vec::new();
        for iy in 0..nodes_y {
            for ix in 0..nodes_x {
                let b = idx(ix, iy);
                if class[b] != NodeClass::Boundary {
                    continue;
                }
                let mut best: Option<(usize, f64, f64)> = None; // (node, spacing, dist-to-center)
                for (dx, dy) in [
                    (1i64, 0i64),
                    (-1, 0),
                    (0, 1),
                    (0, -1),
                    (1, 1),
                    (1, -1),
                    (-1, 1),
                    (-1, -1),
                ] {
                    let (jx, jy) = (ix as i64 + dx, iy as i64 + dy);
                    if jx < 0 || jy < 0 || jx >= nodes_x as i64 || jy >= nodes_y as i64 {
                        continue;
                    }
                    let j = idx(jx as usize, jy as usize);
                    if class[j] != NodeClass::Interior {
                        continue;
                    }
                    let spacing = ((dx as f64 * h[0]).powi(2) + (dy as f64 * h[1]).powi(2)).sqrt();
                    let c = coords[j];
                    let dist = (c[0] - center[0]).hypot(c[1] - center[1]);
                    let better = match best {
                        None => true,
                        Some((_, s, d)) => spacing < s - 1e-12 || (spacing < s + 1e-12 && dist < d),
                    };
                    if better {
                        best = Some((j, spacing, dist));
                    }
                }
                if let Some((inward, spacing, _)) = best {
                    adjacency.push(BoundaryAdjacency {
                        boundary_node: b,
                        inward_node: inward,
                        spacing,
                    });
                }
            }
        }
        Ok(Self::finish(DomainData {
            kind,
            resolution,
            dim: 2,
            nodes_x,
            nodes_y,
            h,
            coords,
            class,
            interior: Vec::new(),
            boundary: Vec::new(),
            interior_index: Vec::new(),
            adjacency,
            triangles,
            cells: Vec::new(),
            lumped_mass,
            measure,
            diameter,
        }))
    }

    fn finish(mut data: DomainData) -> Self {
        let n = data.coords.len();
        let mut interior = Vec::new();
        let mut boundary = Vec::new();
        let mut interior_index = vec![usize::MAX; n];
        for i in 0..n {
            match data.class[i] {
                NodeClass::Interior => {
                    interior_index[i] = interior.len();
                    interior.push(i);
                }
                NodeClass::Boundary => boundary.push(i),
                NodeClass::Exterior => {}
            }
        }
        data.interior = interior;
        data.boundary = boundary;
        data.interior_index = interior_index;
        Domain {
            data: Arc::new(data),
        }
    }

    /// Lebesgue measure `|Ω|`: exact for intervals and rectangles, mask
    /// quadrature for disks.
    pub fn measure(&self) -> f64 {
        self.data.measure
    }

    /// Diameter `d = diam(Ω)`.
    pub fn diameter(&self) -> f64 {
        self.data.diameter
    }

    pub fn kind(&self) -> DomainKind {
        self.data.kind
    }

    pub fn resolution(&self) -> usize {
        self.data.resolution
    }

    /// Spatial dimension, 1 or 2.
    pub fn dim(&self) -> usize {
        self.data.dim
    }

    /// Grid spacing per axis (`h[1]` is zero in 1D).
    pub fn spacing(&self) -> [f64; 2] {
        self.data.h
    }

    pub fn num_nodes(&self) -> usize {
        self.data.coords.len()
    }

    /// Nodes per axis as `(nx, ny)`; `ny` is 1 in 1D.
    pub fn nodes_per_axis(&self) -> (usize, usize) {
        (self.data.nodes_x, self.data.nodes_y)
    }

    pub fn coords(&self) -> &[[f64; 2]] {
        &self.data.coords
    }

    pub fn node_class(&self, node: usize) -> NodeClass {
        self.data.class[node]
    }

    /// Interior node ids in unknown order.
    pub fn interior(&self) -> &[usize] {
        &self.data.interior
    }

    pub fn boundary(&self) -> &[usize] {
        &self.data.boundary
    }

    /// Unknown index of an interior node, or `None`.
    pub fn interior_index(&self, node: usize) -> Option<usize> {
        let k = self.data.interior_index[node];
        (k != usize::MAX).then_some(k)
    }

    pub fn boundary_adjacency(&self) -> &[BoundaryAdjacency] {
        &self.data.adjacency
    }

    pub(crate) fn triangles(&self) -> &[[usize; 3]] {
        &self.data.triangles
    }

    pub(crate) fn cells_1d(&self) -> &[(usize, usize)] {
        &self.data.cells
    }

    /// Lumped mass of a node (area of its dual cell).
    pub fn lumped_mass(&self, node: usize) -> f64 {
        self.data.lumped_mass[node]
    }

    /// Whether two handles refer to the same discretized domain.
    pub fn same_as(&self, other: &Domain) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
            || (self.data.kind == other.data.kind && self.data.resolution == other.data.resolution)
    }

    /// One-sided difference quotient `(u(boundary) - u(inward)) / spacing`
    /// approximating the outward normal derivative at each boundary node, in
    /// `boundary_adjacency` order. Rejects fields that do not vanish on the
    /// boundary.
    pub fn boundary_normal_quotient(&self, values: &[f64]) -> Result<Vec<f64>> {
        if values.len() != self.num_nodes() {
            return Err(Error::invalid("field length does not match domain"));
        }
        let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for &b in self.boundary() {
            if values[b].abs() > 1e-12 * scale.max(1.0) {
                return Err(Error::invalid(
                    "boundary normal quotient requires a field vanishing on the boundary",
                ));
            }
        }
        Ok(self
            .boundary_adjacency()
            .iter()
            .map(|adj| (values[adj.boundary_node] - values[adj.inward_node]) / adj.spacing)
            .collect())
    }

    /// Product of distances to the boundary along each constraint; strictly
    /// positive inside, zero on the boundary. Used as a generic positive
    /// start field.
    pub fn boundary_distance_product(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.num_nodes()];
        match self.data.kind {
            DomainKind::Interval { length } => {
                for &i in self.interior() {
                    let x = self.data.coords[i][0];
                    out[i] = x * (length - x);
                }
            }
            DomainKind::Rectangle { lx, ly } => {
                for &i in self.interior() {
                    let [x, y] = self.data.coords[i];
                    out[i] = x * (lx - x) * y * (ly - y);
                }
            }
            DomainKind::Disk { radius } => {
                for &i in self.interior() {
                    let [x, y] = self.data.coords[i];
                    out[i] = radius - x.hypot(y);
                }
            }
        }
        out
    }
}
