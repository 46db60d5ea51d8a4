//! Convex hulls in dimensions 2..=6.
//!
//! The general-dimension path is an incremental quickhull that keeps the
//! boundary as simplicial (n-1)-cells with outward unit normals and neighbor
//! links. Coplanar cells produced by the triangulation are merged into honest
//! facets later (see `Polytope::from_points`). Dimension 2 uses a monotone
//! chain, which lands in the same output format.

use crate::linalg::{hyperplane_normal, Vector, MAX_DIM};
use crate::Error;

/// One simplicial boundary cell of a hull.
#[derive(Clone, Debug)]
pub struct HullSimplex {
    /// Indices into `HullOutput::vertices`; the first `n` entries are used.
    pub verts: [u32; MAX_DIM],
    pub normal: Vector,
    pub offset: f64,
}

#[derive(Clone, Debug)]
pub struct HullOutput {
    pub vertices: Vec<Vector>,
    pub simplices: Vec<HullSimplex>,
}

/// Relative tolerance for hull predicates, scaled by the input's extent.
pub const HULL_EPS: f64 = 1e-9;

/// Running count of hull builds that needed the joggle backstop; exposed so
/// stress tests can assert the backstop stays rare.
pub static JOGGLE_RETRIES: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);
pub static HULL_BUILDS: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);

fn extent(points: &[Vector]) -> f64 {
    let n = points[0].dim();
    let mut span: f64 = 0.0;
    for i in 0..n {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in points {
            lo = lo.min(p[i]);
            hi = hi.max(p[i]);
        }
        span = span.max(hi - lo);
    }
    span
}

/// Hull construction with a validation backstop. Floating-point ties can
/// leave an incremental hull with a structurally inconsistent boundary, so
/// every result is checked (all inputs inside, boundary closed); on a bad
/// build the input is retried under a deterministic joggle that breaks the
/// ties. Genuinely flat input is reported as degenerate, never joggled.
pub fn convex_hull(points: &[Vector]) -> Result<HullOutput, Error> {
    if points.is_empty() {
        return Err(Error::DegenerateInput("no input points".into()));
    }
    let n = points[0].dim();
    if points.iter().any(|p| p.dim() != n) {
        return Err(Error::DimensionMismatch(n, 0));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::DegenerateInput("non-finite coordinates".into()));
    }
    if points.len() < n + 1 {
        return Err(Error::DegenerateInput(format!(
            "need at least {} points in dimension {n}, got {}",
            n + 1,
            points.len()
        )));
    }
    let scale = extent(points).max(f64::MIN_POSITIVE);
    HULL_BUILDS.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
    match convex_hull_once(points) {
        Ok(h) if hull_is_sound(points, &h, 100.0 * HULL_EPS * scale) => return Ok(h),
        Err(HullError::Flat(msg)) => return Err(Error::DegenerateInput(msg)),
        _ => {}
    }
    JOGGLE_RETRIES.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
    for (level, j) in [1e-11, 1e-10, 1e-9, 1e-8, 1e-7, 3e-6].iter().enumerate() {
        let jog = j * scale;
        let pts = joggle(points, jog, level as u64);
        if let Ok(h) = convex_hull_once(&pts) {
            if hull_is_sound(&pts, &h, (100.0 * HULL_EPS + 10.0 * j) * scale) {
                return Ok(h);
            }
        }
    }
    Err(Error::DegenerateInput("hull construction failed validation at all joggle levels".into()))
}

fn convex_hull_once(points: &[Vector]) -> Result<HullOutput, HullError> {
    if points[0].dim() == 2 {
        hull_2d(points)
    } else {
        QuickHull::new(points)?.run()
    }
}

enum HullError {
    /// The input itself spans too few dimensions.
    Flat(String),
    /// The incremental construction went inconsistent.
    #[allow(dead_code)] // the message is diagnostic only
    Build(String),
}

/// Soundness: every input point lies inside every boundary plane, and the
/// area-weighted normals cancel (a closed boundary).
fn hull_is_sound(points: &[Vector], hull: &HullOutput, tol: f64) -> bool {
    let n = points[0].dim();
    for s in &hull.simplices {
        for p in points {
            if s.normal.dot(p) - s.offset > tol {
                return false;
            }
        }
    }
    let factorial: f64 = (1..n).map(|k| k as f64).product();
    let mut flux = Vector::zeros(n);
    let mut total = 0.0;
    let mut cols: Vec<Vector> = Vec::with_capacity(n);
    for s in &hull.simplices {
        let p0 = hull.vertices[s.verts[0] as usize];
        cols.clear();
        for &vi in &s.verts[1..n] {
            cols.push(hull.vertices[vi as usize] - p0);
        }
        cols.push(s.normal);
        let area = crate::linalg::det_of_columns(&cols).abs() / factorial;
        flux += s.normal.scale(area);
        total += area;
    }
    flux.norm() <= 1e-7 * total
}

/// Deterministic tie-breaking perturbation (splitmix64-driven).
fn joggle(points: &[Vector], magnitude: f64, level: u64) -> Vec<Vector> {
    let n = points[0].dim();
    points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut q = *p;
            for c in 0..n {
                let mut z = (i as u64)
                    .wrapping_mul(0x9E3779B97F4A7C15)
                    .wrapping_add(c as u64)
                    .wrapping_add(level << 32);
                z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
                z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
                z ^= z >> 31;
                let u = (z >> 11) as f64 / (1u64 << 53) as f64; // [0,1)
                q[c] += magnitude * (2.0 * u - 1.0);
            }
            q
        })
        .collect()
}

/// Monotone chain; emits vertices in counter-clockwise order and one edge
/// cell per consecutive pair.
fn hull_2d(points: &[Vector]) -> Result<HullOutput, HullError> {
    let scale = extent(points).max(f64::MIN_POSITIVE);
    let eps_area = HULL_EPS * scale * scale;

    let mut idx: Vec<u32> = (0..points.len() as u32).collect();
    idx.sort_by(|&a, &b| points[a as usize].lex_cmp(&points[b as usize]));
    idx.dedup_by(|&mut a, &mut b| points[a as usize] == points[b as usize]);

    let cross = |o: &Vector, a: &Vector, b: &Vector| -> f64 {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };

    let build = |iter: &mut dyn Iterator<Item = u32>| -> Vec<u32> {
        let mut chain: Vec<u32> = Vec::new();
        for i in iter {
            while chain.len() >= 2 {
                let o = &points[chain[chain.len() - 2] as usize];
                let a = &points[chain[chain.len() - 1] as usize];
                if cross(o, a, &points[i as usize]) <= eps_area {
                    chain.pop();
                } else {
                    break;
                }
            }
            chain.push(i);
        }
        chain
    };

    let mut lower = build(&mut idx.iter().copied());
    let mut upper = build(&mut idx.iter().rev().copied());
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(HullError::Flat("points are collinear".into()));
    }

    let vertices: Vec<Vector> = lower.iter().map(|&i| points[i as usize]).collect();
    let m = vertices.len();
    let mut simplices = Vec::with_capacity(m);
    for i in 0..m {
        let j = (i + 1) % m;
        let e = vertices[j] - vertices[i];
        let normal = Vector::from_slice(&[e[1], -e[0]])
            .normalized()
            .ok_or_else(|| HullError::Build("zero-length hull edge".into()))?;
        let offset = 0.5 * (normal.dot(&vertices[i]) + normal.dot(&vertices[j]));
        let mut verts = [0u32; MAX_DIM];
        verts[0] = i as u32;
        verts[1] = j as u32;
        simplices.push(HullSimplex { verts, normal, offset });
    }
    Ok(HullOutput { vertices, simplices })
}

struct QhFacet {
    verts: [u32; MAX_DIM],
    neighbors: [u32; MAX_DIM],
    normal: Vector,
    offset: f64,
    outside: Vec<u32>,
    alive: bool,
}

struct QuickHull<'a> {
    points: &'a [Vector],
    n: usize,
    eps: f64,
    interior: Vector,
    facets: Vec<QhFacet>,
    pending: Vec<u32>,
    /// Per-facet visibility stamp for the current insertion: 0 unknown,
    /// 1 visible, 2 hidden. Grows with the facet list.
    stamp: Vec<u8>,
}

impl<'a> QuickHull<'a> {
    fn new(points: &'a [Vector]) -> Result<Self, HullError> {
        let n = points[0].dim();
        let eps = HULL_EPS * extent(points).max(f64::MIN_POSITIVE);
        let simplex = initial_simplex(points, eps)?;

        let mut interior = Vector::zeros(n);
        for &i in &simplex {
            interior += points[i as usize];
        }
        interior = interior.scale(1.0 / (n + 1) as f64);

        let mut hull = QuickHull {
            points,
            n,
            eps,
            interior,
            facets: Vec::new(),
            pending: Vec::new(),
            stamp: Vec::new(),
        };

        // One facet per excluded simplex vertex; the neighbor across the
        // ridge opposite local vertex `i` is the facet excluding that vertex.
        for k in 0..=n {
            let mut verts = [0u32; MAX_DIM];
            let mut vi = 0;
            for (j, &s) in simplex.iter().enumerate() {
                if j != k {
                    verts[vi] = s;
                    vi += 1;
                }
            }
            let (normal, offset) = hull.plane_of(&verts, None)?;
            let mut neighbors = [0u32; MAX_DIM];
            for i in 0..n {
                let excluded = simplex.iter().position(|&s| s == verts[i]).unwrap();
                neighbors[i] = excluded as u32;
            }
            hull.facets.push(QhFacet { verts, neighbors, normal, offset, outside: Vec::new(), alive: true });
        }

        // Distribute the input over the initial facets.
        for (i, p) in points.iter().enumerate() {
            if simplex.contains(&(i as u32)) {
                continue;
            }
            for f in 0..hull.facets.len() {
                if hull.facets[f].normal.dot(p) - hull.facets[f].offset > hull.eps {
                    hull.facets[f].outside.push(i as u32);
                    break;
                }
            }
        }
        for f in 0..hull.facets.len() {
            if !hull.facets[f].outside.is_empty() {
                hull.pending.push(f as u32);
            }
        }
        Ok(hull)
    }

    fn plane_of(&self, verts: &[u32; MAX_DIM], fallback: Option<Vector>) -> Result<(Vector, f64), HullError> {
        let mut pts = [Vector::zeros(self.n); MAX_DIM];
        for i in 0..self.n {
            pts[i] = self.points[verts[i] as usize];
        }
        let raw = hyperplane_normal(&pts[..self.n]);
        let normal = match raw.normalized() {
            Some(u) => u,
            None => fallback.ok_or_else(|| HullError::Build("degenerate facet".into()))?,
        };
        let mut offset = 0.0;
        for p in &pts[..self.n] {
            offset += normal.dot(p);
        }
        offset /= self.n as f64;
        if normal.dot(&self.interior) > offset {
            Ok((-normal, -offset))
        } else {
            Ok((normal, offset))
        }
    }

    fn run(mut self) -> Result<HullOutput, HullError> {
        while let Some(fid) = self.pending.pop() {
            let fid = fid as usize;
            if !self.facets[fid].alive || self.facets[fid].outside.is_empty() {
                continue;
            }
            let apex = {
                let f = &self.facets[fid];
                *f.outside
                    .iter()
                    .max_by(|&&a, &&b| {
                        let da = f.normal.dot(&self.points[a as usize]);
                        let db = f.normal.dot(&self.points[b as usize]);
                        da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
                    })
                    .unwrap()
            };
            self.insert(fid, apex)?;
        }
        Ok(self.compact())
    }

    fn insert(&mut self, start: usize, apex: u32) -> Result<(), HullError> {
        let p = self.points[apex as usize];
        let n = self.n;

        // Flood fill the region visible from the apex. Facets the apex is
        // merely coplanar with count as visible: hiding them can disconnect
        // the visible region and leave stale facets inside the new cone.
        // Stamps: 1 visible, 2 hidden, 0 untouched.
        self.stamp.clear();
        self.stamp.resize(self.facets.len(), 0);
        let mut visible = vec![start as u32];
        self.stamp[start] = 1;
        let mut horizon: Vec<([u32; MAX_DIM], u32, usize)> = Vec::new(); // (ridge, hidden facet, slot in it)
        let mut cursor = 0;
        while cursor < visible.len() {
            let fid = visible[cursor] as usize;
            cursor += 1;
            for i in 0..n {
                let nb = self.facets[fid].neighbors[i];
                if self.stamp[nb as usize] == 0 {
                    let g = &self.facets[nb as usize];
                    if g.normal.dot(&p) - g.offset > -self.eps {
                        self.stamp[nb as usize] = 1;
                        visible.push(nb);
                    } else {
                        self.stamp[nb as usize] = 2;
                    }
                }
                if self.stamp[nb as usize] == 2 {
                    // Ridge shared with a hidden facet: all verts except slot i.
                    let mut ridge = [0u32; MAX_DIM];
                    let mut ri = 0;
                    for j in 0..n {
                        if j != i {
                            ridge[ri] = self.facets[fid].verts[j];
                            ri += 1;
                        }
                    }
                    let slot = (0..n)
                        .find(|&s| self.facets[nb as usize].neighbors[s] == fid as u32)
                        .ok_or_else(|| HullError::Build("broken hull adjacency".into()))?;
                    horizon.push((ridge, nb, slot));
                }
            }
        }

        for &fid in &visible {
            self.facets[fid as usize].alive = false;
        }

        // One new facet per horizon ridge; the apex takes the last slot.
        // Sibling links go through sub-ridges (ridge minus one vertex plus
        // the apex); the horizon is small, so linear key matching is fine.
        let mut open_ridges: Vec<([u32; MAX_DIM], u32, usize)> = Vec::new(); // (sorted key, facet, slot)
        let first_new = self.facets.len();
        for (ridge, hidden, slot) in &horizon {
            let mut verts = [0u32; MAX_DIM];
            verts[..n - 1].copy_from_slice(&ridge[..n - 1]);
            verts[n - 1] = apex;
            let fallback = Some(self.facets[*hidden as usize].normal);
            let (normal, offset) = self.plane_of(&verts, fallback)?;
            let new_id = self.facets.len() as u32;
            let mut neighbors = [u32::MAX; MAX_DIM];
            neighbors[n - 1] = *hidden;
            self.facets[*hidden as usize].neighbors[*slot] = new_id;

            for drop in 0..n - 1 {
                let mut key = [u32::MAX; MAX_DIM];
                let mut ki = 0;
                for j in 0..n - 1 {
                    if j != drop {
                        key[ki] = ridge[j];
                        ki += 1;
                    }
                }
                key[..n - 2].sort_unstable();
                match open_ridges.iter().position(|(k, _, _)| k[..n - 2] == key[..n - 2]) {
                    Some(pos) => {
                        let (_, other_id, other_slot) = open_ridges.swap_remove(pos);
                        neighbors[drop] = other_id;
                        self.facets[other_id as usize].neighbors[other_slot] = new_id;
                    }
                    None => open_ridges.push((key, new_id, drop)),
                }
            }
            self.facets.push(QhFacet { verts, neighbors, normal, offset, outside: Vec::new(), alive: true });
        }
        if !open_ridges.is_empty() {
            return Err(HullError::Build("open horizon in hull construction".into()));
        }

        // Re-home the outside points of the deleted facets.
        for vi in 0..visible.len() {
            let fid = visible[vi] as usize;
            let orphans = std::mem::take(&mut self.facets[fid].outside);
            for o in orphans {
                if o == apex {
                    continue;
                }
                let q = self.points[o as usize];
                for nf in first_new..self.facets.len() {
                    let f = &mut self.facets[nf];
                    if f.normal.dot(&q) - f.offset > self.eps {
                        f.outside.push(o);
                        break;
                    }
                }
            }
        }
        for fid in first_new..self.facets.len() {
            if !self.facets[fid].outside.is_empty() {
                self.pending.push(fid as u32);
            }
        }
        Ok(())
    }

    fn compact(self) -> HullOutput {
        let mut used: Vec<u32> = Vec::new();
        for f in self.facets.iter().filter(|f| f.alive) {
            used.extend_from_slice(&f.verts[..self.n]);
        }
        used.sort_unstable();
        used.dedup();
        let mut remap = vec![u32::MAX; self.points.len()];
        for (new, &old) in used.iter().enumerate() {
            remap[old as usize] = new as u32;
        }
        let vertices: Vec<Vector> = used.iter().map(|&i| self.points[i as usize]).collect();
        let simplices = self
            .facets
            .iter()
            .filter(|f| f.alive)
            .map(|f| {
                let mut verts = [0u32; MAX_DIM];
                for i in 0..self.n {
                    verts[i] = remap[f.verts[i] as usize];
                }
                HullSimplex { verts, normal: f.normal, offset: f.offset }
            })
            .collect();
        HullOutput { vertices, simplices }
    }
}

/// Greedy selection of n+1 affinely independent points, furthest-first
/// against the growing affine hull (Gram-Schmidt residuals).
fn initial_simplex(points: &[Vector], eps: f64) -> Result<Vec<u32>, HullError> {
    let n = points[0].dim();
    let first = (0..points.len() as u32)
        .min_by(|&a, &b| points[a as usize].lex_cmp(&points[b as usize]))
        .unwrap();
    let mut chosen = vec![first];
    let mut basis: Vec<Vector> = Vec::new();
    while chosen.len() < n + 1 {
        let origin = points[chosen[0] as usize];
        let mut best: Option<(f64, u32, Vector)> = None;
        for (i, p) in points.iter().enumerate() {
            let mut r = *p - origin;
            for b in &basis {
                r = r - b.scale(r.dot(b));
            }
            let d = r.norm();
            if best.as_ref().map_or(true, |(bd, _, _)| d > *bd) {
                best = Some((d, i as u32, r));
            }
        }
        let (d, idx, r) = best.unwrap();
        if d <= eps {
            return Err(HullError::Flat(format!(
                "points span only {} of {n} dimensions",
                basis.len()
            )));
        }
        basis.push(r.scale(1.0 / d));
        chosen.push(idx);
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coords: &[f64]) -> Vector {
        Vector::from_slice(coords)
    }

    /// Every input point must lie inside every facet within tolerance, and
    /// every facet must *touch* its defining vertices.
    fn validate(points: &[Vector], hull: &HullOutput) {
        let n = points[0].dim();
        let scale = extent(points);
        for s in &hull.simplices {
            for p in points {
                assert!(
                    s.normal.dot(p) - s.offset <= 10.0 * HULL_EPS * scale,
                    "point {p:?} outside facet"
                );
            }
            for &vi in &s.verts[..n] {
                let p = &hull.vertices[vi as usize];
                assert!((s.normal.dot(p) - s.offset).abs() <= 10.0 * HULL_EPS * scale);
            }
        }
    }

    #[test]
    fn triangle_with_interior_point() {
        let pts = vec![v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.0, 1.0]), v(&[0.2, 0.2])];
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(hull.vertices.len(), 3);
        validate(&pts, &hull);
    }

    #[test]
    fn collinear_points_rejected() {
        let pts = vec![v(&[0.0, 0.0]), v(&[1.0, 1.0]), v(&[2.0, 2.0])];
        assert!(matches!(convex_hull(&pts), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn cube_corners() {
        let mut pts = Vec::new();
        for sx in [-1.0, 1.0] {
            for sy in [-1.0, 1.0] {
                for sz in [-1.0, 1.0] {
                    pts.push(v(&[sx, sy, sz]));
                }
            }
        }
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(hull.vertices.len(), 8);
        assert_eq!(hull.simplices.len(), 12); // 6 square faces, 2 triangles each
        validate(&pts, &hull);
    }

    #[test]
    fn simplex_4d() {
        let mut pts = vec![Vector::zeros(4)];
        for i in 0..4 {
            pts.push(Vector::basis(4, i));
        }
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(hull.vertices.len(), 5);
        assert_eq!(hull.simplices.len(), 5);
        validate(&pts, &hull);
    }

    #[test]
    fn random_clouds_stay_consistent() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 2..=5usize {
            for _ in 0..20 {
                let count = n + 2 + (rng.random::<u32>() % 12) as usize;
                let pts: Vec<Vector> = (0..count)
                    .map(|_| {
                        let c: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                        v(&c)
                    })
                    .collect();
                match convex_hull(&pts) {
                    Ok(hull) => validate(&pts, &hull),
                    Err(Error::DegenerateInput(_)) => {}
                    Err(e) => panic!("unexpected error {e}"),
                }
            }
        }
    }
}
