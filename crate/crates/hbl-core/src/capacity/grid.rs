//! Independent grid oracle for ring capacities.
//!
//! Solves the Laplace problem (potential 0 on the inner component, 1 on the
//! outer component) with 5-point finite differences on a uniform Cartesian
//! grid and returns the Dirichlet energy of the solution, which equals the
//! conformal modulus of the family of curves connecting the components.
//! Circle and segment interfaces get Shortley-Weller corrected stencils
//! (fractional arms cut at the exact interface), which keeps the staircase
//! error well below the coarse-grid budget.
//!
//! Unbounded configurations (disk vs. truncated ray) are conformally
//! normalized by the inversion `w = ρ/z` before gridding; capacity is a
//! conformal invariant, so the inverted bounded problem has the same value.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{point_polyline_distance, segment_segment_distance};

use super::{CapacityMethod, CapacityResult};

/// One complementary component of a ring domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RingBoundary {
    /// A solid closed disk. As the *outer* component this denotes the
    /// unbounded complement `{|z - center| ≥ radius}`, which is how a
    /// bounded annulus-type ring is specified.
    Disk { center: Complex64, radius: f64 },
    /// A straight segment; a truncated ray `[s, R]` is `Segment` from `s`
    /// to `R` on the real axis.
    Segment { a: Complex64, b: Complex64 },
    /// An open polyline continuum.
    Polyline { points: Vec<Complex64> },
}

impl RingBoundary {
    fn validate(&self) -> Result<()> {
        match self {
            RingBoundary::Disk { radius, .. } => {
                if !(*radius > 0.0) || !radius.is_finite() {
                    return Err(Error::InvalidInput(format!(
                        "disk radius must be positive, got {radius}"
                    )));
                }
            }
            RingBoundary::Segment { a, b } => {
                if (a - b).norm() == 0.0 {
                    return Err(Error::InvalidInput("degenerate segment".into()));
                }
            }
            RingBoundary::Polyline { points } => {
                if points.len() < 2 {
                    return Err(Error::InvalidInput(
                        "polyline needs at least two vertices".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// A ring domain between an inner and an outer component plus the grid
/// resolution (nodes along the longer box side).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingDomainSpec {
    pub inner: RingBoundary,
    pub outer: RingBoundary,
    pub grid_resolution: usize,
}

impl RingDomainSpec {
    pub fn new(inner: RingBoundary, outer: RingBoundary, grid_resolution: usize) -> Result<Self> {
        inner.validate()?;
        outer.validate()?;
        if grid_resolution < 32 {
            return Err(Error::InvalidInput(format!(
                "grid resolution must be at least 32, got {grid_resolution}"
            )));
        }
        let spec = Self {
            inner,
            outer,
            grid_resolution,
        };
        spec.check_disjoint()?;
        Ok(spec)
    }

    fn check_disjoint(&self) -> Result<()> {
        let gap = match (&self.inner, &self.outer) {
            (RingBoundary::Disk { center, radius }, RingBoundary::Disk { center: c2, radius: r2 }) => {
                // outer disk is a complement component: inner must sit inside it
                r2 - ((center - c2).norm() + radius)
            }
            (RingBoundary::Disk { center, radius }, RingBoundary::Segment { a, b }) => {
                crate::geom::point_segment_distance(*center, *a, *b) - radius
            }
            (RingBoundary::Disk { center, radius }, RingBoundary::Polyline { points }) => {
                point_polyline_distance(*center, points) - radius
            }
            (RingBoundary::Polyline { points }, RingBoundary::Polyline { points: q }) => {
                let mut d = f64::INFINITY;
                for w1 in points.windows(2) {
                    for w2 in q.windows(2) {
                        d = d.min(segment_segment_distance(w1[0], w1[1], w2[0], w2[1]));
                    }
                }
                d
            }
            _ => {
                return Err(Error::InvalidInput(
                    "unsupported ring component combination".into(),
                ))
            }
        };
        if !(gap > 0.0) {
            return Err(Error::InvalidInput(format!(
                "ring components are not disjoint (gap {gap:.3e})"
            )));
        }
        Ok(())
    }
}

/// Convergence target for the relaxation sweeps (max-norm of the discrete
/// residual).
const RESIDUAL_TARGET: f64 = 1e-8;

/// Capacity of the ring via the grid solver, with a Richardson error
/// estimate from a half-resolution solve.
pub fn ring_capacity_numeric(spec: &RingDomainSpec) -> Result<CapacityResult> {
    spec.check_disjoint()?;
    let coarse = solve_capacity(spec, spec.grid_resolution / 2)?;
    let fine = solve_capacity(spec, spec.grid_resolution)?;
    let error_estimate = (fine - coarse).abs().max(f64::EPSILON * fine.abs());
    let truncation_radius = match &spec.outer {
        RingBoundary::Segment { a, b } => Some(a.norm().max(b.norm())),
        _ => None,
    };
    Ok(CapacityResult {
        value: fine,
        method: CapacityMethod::GridOracle,
        error_estimate,
        truncation_radius,
    })
}

fn solve_capacity(spec: &RingDomainSpec, resolution: usize) -> Result<f64> {
    let resolution = resolution.max(32);
    match (&spec.inner, &spec.outer) {
        (RingBoundary::Disk { center, radius }, RingBoundary::Disk { center: oc, radius: or }) => {
            let problem = Problem::two_circles(*center, *radius, *oc, *or, resolution);
            problem.solve()
        }
        (RingBoundary::Disk { center, radius }, RingBoundary::Segment { a, b }) => {
            // Invert about the disk center: w = radius / (z - center) maps the
            // disk to {|w| ≥ 1} and the collinear segment to a bounded one.
            let (s1, s2) = invert_segment(*center, *radius, *a, *b)?;
            let h = 2.0 * (1.0 + 6.0 / resolution as f64) / (resolution - 1) as f64;
            if s2 - s1 < 2.0 * h {
                return Err(Error::InvalidInput(format!(
                    "grid resolution {resolution} is too coarse for the inverted segment of length {:.3e}",
                    s2 - s1
                )));
            }
            let problem = Problem::disk_exterior_vs_segment(s1, s2, resolution);
            problem.solve()
        }
        (inner, outer) => {
            let inner_pts = boundary_as_polyline(inner);
            let outer_pts = boundary_as_polyline(outer);
            let problem = Problem::generic(&inner_pts, &outer_pts, resolution);
            problem.solve()
        }
    }
}

fn boundary_as_polyline(b: &RingBoundary) -> Vec<Complex64> {
    match b {
        RingBoundary::Polyline { points } => points.clone(),
        RingBoundary::Segment { a, b } => vec![*a, *b],
        RingBoundary::Disk { center, radius } => (0..=96)
            .map(|k| {
                center
                    + Complex64::from_polar(*radius, std::f64::consts::TAU * k as f64 / 96.0)
            })
            .collect(),
    }
}

/// Map the segment through the inversion `w = radius/(z - center)`, checking
/// that its supporting line passes through the center (so the image is again
/// a straight segment).
fn invert_segment(
    center: Complex64,
    radius: f64,
    a: Complex64,
    b: Complex64,
) -> Result<(f64, f64)> {
    let pa = a - center;
    let pb = b - center;
    let cross = pa.re * pb.im - pa.im * pb.re;
    if cross.abs() > 1e-9 * pa.norm() * pb.norm() {
        return Err(Error::InvalidInput(
            "segment outer component must be radial with respect to the inner disk center"
                .into(),
        ));
    }
    if pa.norm() <= radius || pb.norm() <= radius || (pa / pa.norm() - pb / pb.norm()).norm() > 1e-9
    {
        return Err(Error::InvalidInput(
            "segment must lie strictly outside the inner disk, on one side".into(),
        ));
    }
    // after rotating the common direction onto the positive axis the image
    // endpoints are radius/|pb| and radius/|pa|
    let lo = radius / pa.norm().max(pb.norm());
    let hi = radius / pa.norm().min(pb.norm());
    Ok((lo, hi))
}

const FREE: u8 = 0;
const PIN_ZERO: u8 = 1;
const PIN_ONE: u8 = 2;

/// Uniform-grid Dirichlet problem with per-arm fractional cuts at the
/// pinned interfaces.
struct Problem {
    nx: usize,
    ny: usize,
    h: f64,
    x0: f64,
    y0: f64,
    status: Vec<u8>,
    /// For each free node, fractional arm lengths (E, W, N, S) in units of h
    /// and the Dirichlet value met at each shortened arm.
    arms: Vec<[f64; 4]>,
    arm_values: Vec<[f64; 4]>,
}

impl Problem {
    fn blank(nx: usize, ny: usize, h: f64, x0: f64, y0: f64) -> Self {
        Self {
            nx,
            ny,
            h,
            x0,
            y0,
            status: vec![FREE; nx * ny],
            arms: vec![[1.0; 4]; nx * ny],
            arm_values: vec![[0.0; 4]; nx * ny],
        }
    }

    fn point(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.x0 + i as f64 * self.h, self.y0 + j as f64 * self.h)
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Bounded ring between an inner circle (pinned 0) and an outer circle
    /// (pinned 1 outside).
    fn two_circles(
        ic: Complex64,
        ir: f64,
        oc: Complex64,
        or: f64,
        resolution: usize,
    ) -> Self {
        let pad = 2.0 * (2.0 * or) / resolution as f64;
        let x0 = oc.re - or - pad;
        let y0 = oc.im - or - pad;
        let side = 2.0 * (or + pad);
        let n = resolution;
        let h = side / (n - 1) as f64;
        let mut p = Self::blank(n, n, h, x0, y0);
        for j in 0..n {
            for i in 0..n {
                let z = p.point(i, j);
                let id = p.idx(i, j);
                if (z - ic).norm() <= ir {
                    p.status[id] = PIN_ZERO;
                } else if (z - oc).norm() >= or {
                    p.status[id] = PIN_ONE;
                }
            }
        }
        p.cut_arms_at_circle(ic, ir, 0.0, true);
        p.cut_arms_at_circle(oc, or, 1.0, false);
        p
    }

    /// Exterior of the unit circle pinned 0, real segment `[s1, s2] ⊂ (0, 1)`
    /// pinned 1 (the inverted disk-vs-ray configuration).
    fn disk_exterior_vs_segment(s1: f64, s2: f64, resolution: usize) -> Self {
        let n = if resolution % 2 == 0 {
            resolution + 1
        } else {
            resolution
        };
        let half = 1.0 + 6.0 / n as f64;
        let h = 2.0 * half / (n - 1) as f64;
        // symmetric box keeps y = 0 exactly on the middle grid row
        let mut p = Self::blank(n, n, h, -half, -half);
        let mid = (n - 1) / 2;
        for j in 0..n {
            for i in 0..n {
                let z = p.point(i, j);
                let id = p.idx(i, j);
                if z.norm() >= 1.0 {
                    p.status[id] = PIN_ZERO;
                } else if j == mid && z.re >= s1 && z.re <= s2 {
                    p.status[id] = PIN_ONE;
                }
            }
        }
        p.cut_arms_at_circle(Complex64::new(0.0, 0.0), 1.0, 0.0, false);
        p.cut_arms_at_real_segment(s1, s2, mid, 1.0);
        p
    }

    /// Fallback: polyline components on a padded bounding box with free
    /// (Neumann-like) box edges; nodes within half a cell of a component are
    /// pinned. Coarser than the fitted paths, but fully general.
    fn generic(inner: &[Complex64], outer: &[Complex64], resolution: usize) -> Self {
        let all: Vec<Complex64> = inner.iter().chain(outer.iter()).copied().collect();
        let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for z in &all {
            xmin = xmin.min(z.re);
            xmax = xmax.max(z.re);
            ymin = ymin.min(z.im);
            ymax = ymax.max(z.im);
        }
        let span = (xmax - xmin).max(ymax - ymin).max(1e-9);
        let pad = 0.75 * span;
        let (x0, y0) = (xmin - pad, ymin - pad);
        let side = span + 2.0 * pad;
        let n = resolution;
        let h = side / (n - 1) as f64;
        let mut p = Self::blank(n, n, h, x0, y0);
        for j in 0..n {
            for i in 0..n {
                let z = p.point(i, j);
                let id = p.idx(i, j);
                if point_polyline_distance(z, inner) <= 0.5 * h {
                    p.status[id] = PIN_ZERO;
                } else if point_polyline_distance(z, outer) <= 0.5 * h {
                    p.status[id] = PIN_ONE;
                }
            }
        }
        p
    }

    /// Shorten arms that cross the circle `|z - c| = r`; `inside_pinned`
    /// tells whether the pinned side is the inside of the circle.
    fn cut_arms_at_circle(&mut self, c: Complex64, r: f64, value: f64, inside_pinned: bool) {
        let offsets = [(1isize, 0isize), (-1, 0), (0, 1), (0, -1)];
        for j in 0..self.ny {
            for i in 0..self.nx {
                let id = self.idx(i, j);
                if self.status[id] != FREE {
                    continue;
                }
                let z = self.point(i, j);
                for (arm, (di, dj)) in offsets.iter().enumerate() {
                    let ni = i as isize + di;
                    let nj = j as isize + dj;
                    if ni < 0 || nj < 0 || ni >= self.nx as isize || nj >= self.ny as isize {
                        continue;
                    }
                    let nid = self.idx(ni as usize, nj as usize);
                    let pinned_here = match self.status[nid] {
                        PIN_ZERO => value == 0.0,
                        PIN_ONE => value == 1.0,
                        _ => false,
                    };
                    if !pinned_here {
                        continue;
                    }
                    let zn = self.point(ni as usize, nj as usize);
                    // find the crossing fraction along the arm
                    if let Some(t) = circle_crossing(z - c, zn - c, r) {
                        let crosses_to_pinned = if inside_pinned {
                            (zn - c).norm() <= r
                        } else {
                            (zn - c).norm() >= r
                        };
                        if crosses_to_pinned {
                            self.arms[id][arm] = t.max(1e-3);
                            self.arm_values[id][arm] = value;
                        }
                    }
                }
            }
        }
    }

    /// Shorten horizontal arms ending at the tips of the pinned segment on
    /// the middle row (vertical arms meet the row exactly at distance h).
    fn cut_arms_at_real_segment(&mut self, s1: f64, s2: f64, mid: usize, value: f64) {
        for i in 0..self.nx {
            let id = self.idx(i, mid);
            if self.status[id] != FREE {
                continue;
            }
            let x = self.point(i, mid).re;
            // east arm toward the segment tip (only when the neighbor node
            // actually landed on the pinned segment)
            if x < s1 {
                let xe = x + self.h;
                if xe >= s1 && xe <= s2 {
                    self.arms[id][0] = ((s1 - x) / self.h).max(1e-3);
                    self.arm_values[id][0] = value;
                }
            }
            // west arm toward the segment tip
            if x > s2 {
                let xw = x - self.h;
                if xw <= s2 && xw >= s1 {
                    self.arms[id][1] = ((x - s2) / self.h).max(1e-3);
                    self.arm_values[id][1] = value;
                }
            }
        }
    }

    fn neighbor_value(&self, u: &[f64], i: usize, j: usize, arm: usize) -> f64 {
        let id = self.idx(i, j);
        if self.arms[id][arm] < 1.0 {
            return self.arm_values[id][arm];
        }
        let (ni, nj) = match arm {
            0 => (i + 1, j),
            1 => (i - 1, j),
            2 => (i, j + 1),
            _ => (i, j - 1),
        };
        let nid = self.idx(ni, nj);
        match self.status[nid] {
            PIN_ZERO => 0.0,
            PIN_ONE => 1.0,
            _ => u[nid],
        }
    }

    fn in_range(&self, i: usize, j: usize, arm: usize) -> bool {
        match arm {
            0 => i + 1 < self.nx,
            1 => i > 0,
            2 => j + 1 < self.ny,
            _ => j > 0,
        }
    }

    fn solve(&self) -> Result<f64> {
        let n_nodes = self.nx * self.ny;
        let mut u = vec![0.5f64; n_nodes];
        for id in 0..n_nodes {
            match self.status[id] {
                PIN_ZERO => u[id] = 0.0,
                PIN_ONE => u[id] = 1.0,
                _ => {}
            }
        }
        // SOR with the uniform-grid optimal factor, slightly damped for the
        // cut-cell stencils
        let n_long = self.nx.max(self.ny) as f64;
        let omega = (2.0 / (1.0 + (std::f64::consts::PI / n_long).sin())).min(1.97);
        let max_sweeps = 60 * self.nx.max(self.ny) + 2000;
        for sweep in 0..max_sweeps {
            let mut max_delta = 0.0f64;
            for j in 0..self.ny {
                for i in 0..self.nx {
                    let id = self.idx(i, j);
                    if self.status[id] != FREE {
                        continue;
                    }
                    let (target, diag) = self.stencil_apply(&u, i, j);
                    let delta = target / diag - u[id];
                    max_delta = max_delta.max(delta.abs());
                    u[id] += omega * delta;
                }
            }
            // max_delta bounds the residual of the normalized equations
            if sweep % 16 == 15 && max_delta < RESIDUAL_TARGET && self.true_residual(&u) < RESIDUAL_TARGET {
                return Ok(self.energy(&u));
            }
        }
        let residual = self.true_residual(&u);
        if residual < RESIDUAL_TARGET {
            return Ok(self.energy(&u));
        }
        Err(Error::NonConvergence {
            residual,
            sweeps: max_sweeps,
        })
    }

    /// Weighted neighbor sum and diagonal of the Shortley-Weller stencil.
    /// Arms leaving the box (generic fallback only) mirror the opposite
    /// neighbor, giving a zero-flux box edge.
    fn stencil_apply(&self, u: &[f64], i: usize, j: usize) -> (f64, f64) {
        let id = self.idx(i, j);
        let a = &self.arms[id];
        let mut num = 0.0;
        let mut diag = 0.0;
        // E/W pair
        let (ae, aw) = (a[0], a[1]);
        let ue = if self.in_range(i, j, 0) || ae < 1.0 {
            self.neighbor_value(u, i, j, 0)
        } else {
            self.neighbor_value(u, i, j, 1)
        };
        let uw = if self.in_range(i, j, 1) || aw < 1.0 {
            self.neighbor_value(u, i, j, 1)
        } else {
            self.neighbor_value(u, i, j, 0)
        };
        num += 2.0 / (ae * (ae + aw)) * ue + 2.0 / (aw * (ae + aw)) * uw;
        diag += 2.0 / (ae * aw);
        // N/S pair
        let (an, as_) = (a[2], a[3]);
        let un = if self.in_range(i, j, 2) || an < 1.0 {
            self.neighbor_value(u, i, j, 2)
        } else {
            self.neighbor_value(u, i, j, 3)
        };
        let us = if self.in_range(i, j, 3) || as_ < 1.0 {
            self.neighbor_value(u, i, j, 3)
        } else {
            self.neighbor_value(u, i, j, 2)
        };
        num += 2.0 / (an * (an + as_)) * un + 2.0 / (as_ * (an + as_)) * us;
        diag += 2.0 / (an * as_);
        (num, diag)
    }

    fn true_residual(&self, u: &[f64]) -> f64 {
        let mut r = 0.0f64;
        for j in 0..self.ny {
            for i in 0..self.nx {
                let id = self.idx(i, j);
                if self.status[id] != FREE {
                    continue;
                }
                let (num, diag) = self.stencil_apply(u, i, j);
                r = r.max((num / diag - u[id]).abs());
            }
        }
        r
    }

    /// Edge-based Dirichlet energy; cut edges are weighted by their
    /// fractional length.
    fn energy(&self, u: &[f64]) -> f64 {
        let mut e = 0.0f64;
        for j in 0..self.ny {
            for i in 0..self.nx {
                let id = self.idx(i, j);
                if self.status[id] != FREE {
                    continue;
                }
                // east and north edges from each free node, cut or full
                for arm in [0usize, 2] {
                    let a = self.arms[id][arm];
                    if a < 1.0 {
                        let ub = self.arm_values[id][arm];
                        e += (ub - u[id]).powi(2) / a;
                    } else if self.in_range(i, j, arm) {
                        let un = self.neighbor_value(u, i, j, arm);
                        e += (un - u[id]).powi(2);
                    }
                }
                // west/south cut edges are owned by this free node when the
                // neighbor is pinned (no free node on the other side emits them)
                for arm in [1usize, 3] {
                    let a = self.arms[id][arm];
                    if a < 1.0 {
                        let ub = self.arm_values[id][arm];
                        e += (ub - u[id]).powi(2) / a;
                    } else if self.in_range(i, j, arm) {
                        let (ni, nj) = if arm == 1 { (i - 1, j) } else { (i, j - 1) };
                        if self.status[self.idx(ni, nj)] != FREE {
                            let un = self.neighbor_value(u, i, j, arm);
                            e += (un - u[id]).powi(2);
                        }
                    }
                }
            }
        }
        e
    }
}

/// Crossing parameter `t ∈ (0, 1]` where the segment from `p` to `q`
/// (relative to the circle center) meets `|w| = r`.
fn circle_crossing(p: Complex64, q: Complex64, r: f64) -> Option<f64> {
    let d = q - p;
    let a = d.norm_sqr();
    if a == 0.0 {
        return None;
    }
    let b = 2.0 * (p.re * d.re + p.im * d.im);
    let c = p.norm_sqr() - r * r;
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let mut best: Option<f64> = None;
    for t in [(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)] {
        if t > 0.0 && t <= 1.0 {
            best = Some(best.map_or(t, |x: f64| x.min(t)));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn origin() -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    #[test]
    fn spec_validation() {
        assert!(RingDomainSpec::new(
            RingBoundary::Disk {
                center: origin(),
                radius: 1.0
            },
            RingBoundary::Disk {
                center: origin(),
                radius: 2.0
            },
            16,
        )
        .is_err());
        // overlapping components rejected
        assert!(RingDomainSpec::new(
            RingBoundary::Disk {
                center: origin(),
                radius: 2.0
            },
            RingBoundary::Disk {
                center: origin(),
                radius: 1.5
            },
            64,
        )
        .is_err());
    }

    #[test]
    fn annulus_capacity_small_grid() {
        // quick sanity at modest resolution; the acceptance suite runs 512
        let spec = RingDomainSpec::new(
            RingBoundary::Disk {
                center: origin(),
                radius: 1.0,
            },
            RingBoundary::Disk {
                center: origin(),
                radius: 2.0,
            },
            128,
        )
        .unwrap();
        let cap = ring_capacity_numeric(&spec).unwrap();
        let exact = TAU / 2.0f64.ln();
        assert!(
            (cap.value - exact).abs() / exact < 0.05,
            "got {} vs {}",
            cap.value,
            exact
        );
        assert!(cap.error_estimate > 0.0);
    }

    #[test]
    fn segment_inversion_geometry() {
        let (lo, hi) = invert_segment(
            origin(),
            1.0,
            Complex64::new(3.0, 0.0),
            Complex64::new(50.0, 0.0),
        )
        .unwrap();
        assert!((lo - 0.02).abs() < 1e-12);
        assert!((hi - 1.0 / 3.0).abs() < 1e-12);
        // non-radial segments are rejected
        assert!(invert_segment(
            origin(),
            1.0,
            Complex64::new(3.0, 0.5),
            Complex64::new(50.0, 0.0)
        )
        .is_err());
    }
}
