//! Planar geometry of up to four points on the unit circle.
//!
//! A phase `φ` stands for the point `(cos φ, sin φ)`. Distances to the origin
//! and convex-combination weights are invariant under reflection in the real
//! axis, so callers holding phases of `e^{-iω}` may pass either `ω` or `-ω`.

use std::f64::consts::{PI, TAU};

use crate::canonical::PhaseSet;
use crate::error::{Error, Result};

/// A point in the plane.
pub type Point = [f64; 2];

/// Phases closer than this are the same hull vertex.
pub const VERTEX_MERGE_TOL: f64 = 1e-12;
/// Arc spreads within this of π count as enclosing the origin.
pub const SEMICIRCLE_TOL: f64 = 1e-12;
/// Sign-test slack for barycentric coordinates.
const BARY_TOL: f64 = 1e-12;
/// Allowed recombination error for convex weights.
pub const RECOMBINE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirclePoint {
    pub phase: f64,
}

impl CirclePoint {
    pub fn cartesian(&self) -> Point {
        [self.phase.cos(), self.phase.sin()]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HullResult {
    /// Distinct points in counter-clockwise order.
    pub vertices: Vec<CirclePoint>,
    /// Indices into the input phase set carried by each vertex.
    pub members: Vec<Vec<usize>>,
    pub contains_origin: bool,
    pub min_distance: f64,
    pub nearest_point: Point,
    /// Vertex indices of the chord nearest the origin, when it is outside.
    pub nearest_edge: Option<(usize, usize)>,
    /// Input indices of the two angular extremes (clockwise end, counter-clockwise end)
    /// when the origin is outside.
    pub extremes: Option<(usize, usize)>,
    pub spread: f64,
}

/// Input indices sorted counter-clockwise by phase (stable on ties).
pub fn circular_order(phases: &PhaseSet) -> [usize; 4] {
    let mut order = [0, 1, 2, 3];
    order.sort_by(|&a, &b| phases.0[a].total_cmp(&phases.0[b]));
    order
}

/// Position `k` in `order` such that the arc from `order[k]` to `order[k+1]`
/// is the largest empty arc, and its length.
fn largest_gap(phases: &PhaseSet, order: &[usize; 4]) -> (usize, f64) {
    (0..4)
        .map(|k| {
            let a = phases.0[order[k]];
            let b = phases.0[order[(k + 1) % 4]];
            let gap = if k == 3 { b + TAU - a } else { b - a };
            (k, gap)
        })
        .fold(
            (0, f64::NEG_INFINITY),
            |best, cur| if cur.1 > best.1 { cur } else { best },
        )
}

/// Length of the smallest arc holding every phase, in `[0, 2π)`.
pub fn arc_spread(phases: &PhaseSet) -> f64 {
    let order = circular_order(phases);
    let (_, gap) = largest_gap(phases, &order);
    (TAU - gap).max(0.0)
}

fn clusters(phases: &PhaseSet, tol: f64) -> Vec<(f64, Vec<usize>)> {
    let order = circular_order(phases);
    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    for &idx in &order {
        let p = phases.0[idx];
        match groups.last_mut() {
            Some((_, members)) if p - phases.0[*members.last().unwrap()] <= tol => members.push(idx),
            _ => groups.push((p, vec![idx])),
        }
    }
    if groups.len() > 1 {
        let first = phases.0[groups[0].1[0]];
        let last_group = groups.last().unwrap();
        let last = phases.0[*last_group.1.last().unwrap()];
        if first + TAU - last <= tol {
            let (_, head) = groups.remove(0);
            groups.last_mut().unwrap().1.extend(head);
        }
    }
    groups
}

/// Merges phases within `tol` of one another (modulo 2π).
pub fn dedupe_phases(phases: &PhaseSet, tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = clusters(phases, tol)
        .into_iter()
        .map(|(p, members)| (p, members.len()))
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

fn unit(phase: f64) -> Point {
    [phase.cos(), phase.sin()]
}

fn midpoint(a: Point, b: Point) -> Point {
    [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0]
}

fn norm(p: Point) -> f64 {
    p[0].hypot(p[1])
}

/// Convex hull of the points `e^{iφ_k}` and its distance to the origin.
pub fn hull_of_phases(phases: &PhaseSet) -> HullResult {
    let mut groups = clusters(phases, VERTEX_MERGE_TOL);
    groups.sort_by(|a, b| a.0.total_cmp(&b.0));
    let vertices: Vec<CirclePoint> = groups.iter().map(|(p, _)| CirclePoint { phase: *p }).collect();
    let members: Vec<Vec<usize>> = groups.into_iter().map(|(_, m)| m).collect();

    let order = circular_order(phases);
    let (k, gap) = largest_gap(phases, &order);
    let spread = (TAU - gap).max(0.0);
    let vertex_of = |idx: usize| members.iter().position(|m| m.contains(&idx)).unwrap();

    if spread >= PI - SEMICIRCLE_TOL {
        return HullResult {
            vertices,
            members,
            contains_origin: true,
            min_distance: 0.0,
            nearest_point: [0.0, 0.0],
            nearest_edge: None,
            extremes: None,
            spread,
        };
    }

    // Everything sits inside an open semicircle; the chord between the two
    // ends of the occupied arc faces the origin and its midpoint is the foot
    // of the perpendicular from O.
    let end = order[k];
    let start = order[(k + 1) % 4];
    let nearest = midpoint(unit(phases.0[end]), unit(phases.0[start]));
    let (ve, vs) = (vertex_of(end), vertex_of(start));
    HullResult {
        vertices,
        members,
        contains_origin: false,
        min_distance: norm(nearest),
        nearest_point: nearest,
        nearest_edge: (ve != vs).then_some((ve, vs)),
        extremes: Some((end, start)),
        spread,
    }
}

/// Midpoints `(P_i + P_{i+1})/2` of a closed vertex cycle.
pub fn midpoints_of_cycle(points: &[Point]) -> Vec<Point> {
    let n = points.len();
    (0..n).map(|i| midpoint(points[i], points[(i + 1) % n])).collect()
}

/// Side midpoints of the hull polygon.
pub fn midpoint_quad(hull: &HullResult) -> Result<Vec<Point>> {
    if hull.vertices.len() < 2 {
        return Err(Error::DegenerateHull(format!(
            "midpoints need at least two vertices, got {}",
            hull.vertices.len()
        )));
    }
    let pts: Vec<Point> = hull.vertices.iter().map(CirclePoint::cartesian).collect();
    Ok(midpoints_of_cycle(&pts))
}

fn recombine(points: &[Point], weights: &[f64]) -> Point {
    points
        .iter()
        .zip(weights)
        .fold([0.0, 0.0], |acc, (p, w)| [acc[0] + w * p[0], acc[1] + w * p[1]])
}

fn distance(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Nonnegative weights summing to one that recombine `points` into `target`.
///
/// Fan triangles from the first point are tried first, then every other
/// triangle, segment and single point; the first candidate whose weights pass
/// the sign test and recombine within tolerance wins.
pub fn convex_coefficients(points: &[Point], target: Point) -> Result<Vec<f64>> {
    let n = points.len();
    if n == 0 {
        return Err(Error::DegenerateHull("no points".into()));
    }
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    for j in 1..n.saturating_sub(1) {
        candidates.push(vec![0, j, j + 1]);
    }
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let tri = vec![a, b, c];
                if !candidates.contains(&tri) {
                    candidates.push(tri);
                }
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            candidates.push(vec![a, b]);
        }
    }
    for a in 0..n {
        candidates.push(vec![a]);
    }

    let mut best_residual = f64::INFINITY;
    for cand in candidates {
        let local = match cand.len() {
            3 => barycentric(points[cand[0]], points[cand[1]], points[cand[2]], target),
            2 => segment_weights(points[cand[0]], points[cand[1]], target),
            _ => Some(vec![1.0]),
        };
        let Some(local) = local else { continue };
        if local.iter().any(|w| *w < -BARY_TOL) {
            continue;
        }
        let mut weights = vec![0.0; n];
        for (idx, w) in cand.iter().zip(&local) {
            weights[*idx] = w.max(0.0);
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        let residual = distance(recombine(points, &weights), target);
        if residual <= RECOMBINE_TOL {
            return Ok(weights);
        }
        best_residual = best_residual.min(residual);
    }
    Err(Error::NotInHull {
        residual: best_residual,
    })
}

fn barycentric(a: Point, b: Point, c: Point, t: Point) -> Option<Vec<f64>> {
    let det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
    let scale = distance(a, b).max(distance(a, c)).max(distance(b, c));
    if det.abs() <= 1e-14 * scale * scale || scale == 0.0 {
        return None;
    }
    let wb = ((t[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (t[1] - a[1])) / det;
    let wc = ((b[0] - a[0]) * (t[1] - a[1]) - (t[0] - a[0]) * (b[1] - a[1])) / det;
    Some(vec![1.0 - wb - wc, wb, wc])
}

fn segment_weights(a: Point, b: Point, t: Point) -> Option<Vec<f64>> {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    if len2 <= 1e-28 {
        return None;
    }
    let s = ((t[0] - a[0]) * d[0] + (t[1] - a[1]) * d[1]) / len2;
    Some(vec![1.0 - s, s])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn ps(p: [f64; 4]) -> PhaseSet {
        PhaseSet::new(p).unwrap()
    }

    #[test]
    fn dedupe_examples() {
        assert_eq!(dedupe_phases(&ps([0.0; 4]), 1e-9), vec![(0.0, 4)]);
        assert_eq!(dedupe_phases(&ps([0.0, PI, 0.0, PI]), 1e-9), vec![(0.0, 2), (PI, 2)]);
        let groups = dedupe_phases(&ps([0.1, 0.1 + 1e-12, 2.0, -2.0]), 1e-9);
        let mut mult: Vec<usize> = groups.iter().map(|g| g.1).collect();
        mult.sort();
        assert_eq!(mult, vec![1, 1, 2]);
    }

    #[test]
    fn dedupe_wraps_across_pi() {
        let groups = dedupe_phases(&ps([PI, -PI + 1e-13, 0.0, 1.0]), 1e-9);
        assert_eq!(groups.len(), 3);
        assert_eq!(groups.iter().map(|g| g.1).sum::<usize>(), 4);
    }

    #[test]
    fn hull_examples() {
        let square = hull_of_phases(&ps([0.0, FRAC_PI_2, PI, -FRAC_PI_2]));
        assert!(square.contains_origin);
        assert_eq!(square.min_distance, 0.0);
        assert_eq!(square.vertices.len(), 4);

        let arc = hull_of_phases(&ps([0.0, PI / 3.0, PI / 6.0, PI / 4.0]));
        assert!(!arc.contains_origin);
        assert!((arc.min_distance - (PI / 6.0).cos()).abs() < 1e-15);
        assert_eq!(arc.extremes, Some((1, 0)));
        // Brute force over the weight simplex never beats the chord midpoint.
        let mut brute = f64::INFINITY;
        let n = 60;
        for i in 0..=n {
            for j in 0..=n - i {
                for k in 0..=n - i - j {
                    let w = [i, j, k, n - i - j - k].map(|x| x as f64 / n as f64);
                    let p = recombine(&arc_phases().iter().map(|&t| unit(t)).collect::<Vec<_>>(), &w);
                    brute = brute.min(norm(p));
                }
            }
        }
        assert!(brute >= arc.min_distance - 1e-15);
        assert!(brute - arc.min_distance < 1e-12);

        let antipodal = hull_of_phases(&ps([0.0, PI, 0.0, PI]));
        assert!(antipodal.contains_origin);
        assert_eq!(antipodal.min_distance, 0.0);
        assert_eq!(antipodal.vertices.len(), 2);
    }

    fn arc_phases() -> [f64; 4] {
        [0.0, PI / 3.0, PI / 6.0, PI / 4.0]
    }

    #[test]
    fn single_point_hull() {
        let h = hull_of_phases(&ps([0.4; 4]));
        assert_eq!(h.vertices.len(), 1);
        assert!((h.min_distance - 1.0).abs() < 1e-15);
        assert_eq!(h.nearest_edge, None);
        assert!(midpoint_quad(&h).is_err());
    }

    #[test]
    fn spread_examples() {
        assert_eq!(arc_spread(&ps([0.0; 4])), 0.0);
        assert!((arc_spread(&ps([0.0, PI, 0.0, PI])) - PI).abs() < 1e-15);
        assert!((arc_spread(&ps(arc_phases())) - PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn midpoint_examples() {
        let square = hull_of_phases(&ps([0.0, FRAC_PI_2, PI, -FRAC_PI_2]));
        let mids = midpoint_quad(&square).unwrap();
        assert_eq!(mids.len(), 4);
        let mut angles: Vec<f64> = mids.iter().map(|m| m[1].atan2(m[0])).collect();
        angles.sort_by(f64::total_cmp);
        let want = [-3.0, -1.0, 1.0, 3.0].map(|k| k * PI / 4.0);
        for (m, (a, w)) in mids.iter().zip(angles.iter().zip(want)) {
            assert!((norm(*m) - 0.5_f64.sqrt()).abs() < 1e-15);
            assert!((a - w).abs() < 1e-15);
        }

        let seg = midpoint_quad(&hull_of_phases(&ps([0.0, PI, 0.0, PI]))).unwrap();
        assert_eq!(seg.len(), 2);
        assert!(seg.iter().all(|m| norm(*m) < 1e-15));

        let arc = hull_of_phases(&ps(arc_phases()));
        let mids = midpoint_quad(&arc).unwrap();
        let pts: Vec<Point> = arc.vertices.iter().map(CirclePoint::cartesian).collect();
        for i in 0..pts.len() {
            let j = (i + 1) % pts.len();
            assert_eq!(mids[i], [(pts[i][0] + pts[j][0]) / 2.0, (pts[i][1] + pts[j][1]) / 2.0]);
        }
    }

    #[test]
    fn coefficient_examples() {
        let square = midpoint_quad(&hull_of_phases(&ps([0.0, FRAC_PI_2, PI, -FRAC_PI_2]))).unwrap();
        let w = convex_coefficients(&square, [0.0, 0.0]).unwrap();
        // A parallelogram admits a one-parameter family; check validity instead of symmetry.
        assert!(w.iter().all(|x| *x >= 0.0));
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(norm(recombine(&square, &w)) < 1e-15);

        let r = 0.7;
        let w = convex_coefficients(&[[-r, 0.0], [r, 0.0]], [0.0, 0.0]).unwrap();
        assert!((w[0] - 0.5).abs() < 1e-15 && (w[1] - 0.5).abs() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut found = 0;
        while found < 200 {
            let tri: Vec<Point> = (0..3)
                .map(|_| [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
                .collect();
            let Ok(w) = convex_coefficients(&tri, [0.0, 0.0]) else {
                continue;
            };
            found += 1;
            assert!(w.iter().all(|x| *x >= 0.0));
            assert!(norm(recombine(&tri, &w)) <= RECOMBINE_TOL);
        }
    }

    #[test]
    fn coefficients_reject_outside_target() {
        let tri = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]];
        assert!(matches!(
            convex_coefficients(&tri, [0.0, 0.0]),
            Err(Error::NotInHull { .. })
        ));
    }

    fn random_phases(rng: &mut ChaCha8Rng) -> PhaseSet {
        ps(std::array::from_fn(|_| rng.random_range(-PI..PI)))
    }

    #[test]
    fn semicircle_test_matches_spread_and_cosine_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20_000 {
            let p = random_phases(&mut rng);
            let hull = hull_of_phases(&p);
            let spread = arc_spread(&p);
            assert_eq!(hull.contains_origin, spread >= PI - SEMICIRCLE_TOL);
            assert_eq!(hull.min_distance == 0.0, hull.contains_origin);
            if !hull.contains_origin {
                assert!((hull.min_distance - (spread / 2.0).cos()).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn chord_midpoint_is_perpendicular_foot() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10_000 {
            let a = unit(rng.random_range(-PI..PI));
            let b = unit(rng.random_range(-PI..PI));
            let d = [b[0] - a[0], b[1] - a[1]];
            let len2 = d[0] * d[0] + d[1] * d[1];
            if len2 < 1e-12 {
                continue;
            }
            let s = -(a[0] * d[0] + a[1] * d[1]) / len2;
            let foot = [a[0] + s * d[0], a[1] + s * d[1]];
            assert!(distance(foot, midpoint(a, b)) <= 1e-12);
        }
    }

    #[test]
    fn origin_in_hull_implies_origin_in_midpoint_quad() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut checked = 0;
        while checked < 100_000 {
            let p = random_phases(&mut rng);
            let hull = hull_of_phases(&p);
            if !hull.contains_origin {
                continue;
            }
            checked += 1;
            let mids = midpoint_quad(&hull).unwrap();
            let w = convex_coefficients(&mids, [0.0, 0.0]).unwrap_or_else(|e| panic!("{p:?}: {e}"));
            assert!(norm(recombine(&mids, &w)) <= 1e-10);
        }
    }
}
