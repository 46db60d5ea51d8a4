//! Projection bodies as zonotopes, zonotope volume by determinant
//! expansion, Schneider's affine invariants P and R, polar volumes by
//! sphere quadrature, and a support-function homothety test.

use rand_distr::Distribution;

use crate::bodies::seeded_rng;
use crate::geometry::{Polytope, NORMAL_MERGE_EPS};
use crate::linalg::{det_of_columns, Vector};
use crate::Error;

/// A zonotope `sum_i [-g_i, g_i]` given by its generators.
#[derive(Clone, Debug)]
pub struct Zonotope {
    pub dim: usize,
    pub generators: Vec<Vector>,
}

impl Zonotope {
    /// Support function `h(u) = sum |<g_i, u>|`.
    pub fn support(&self, u: &Vector) -> f64 {
        self.generators.iter().map(|g| g.dot(u).abs()).sum()
    }

    pub fn scale(&self, s: f64) -> Zonotope {
        Zonotope { dim: self.dim, generators: self.generators.iter().map(|g| g.scale(s)).collect() }
    }

    pub fn spans(&self) -> bool {
        let mut basis: Vec<Vector> = Vec::new();
        for g in &self.generators {
            let mut r = *g;
            for b in &basis {
                r = r - b.scale(r.dot(b));
            }
            let nn = r.norm();
            if nn > 1e-12 {
                basis.push(r.scale(1.0 / nn));
                if basis.len() == self.dim {
                    return true;
                }
            }
        }
        false
    }

    /// All sign combinations of the generators; the vertex candidates used
    /// by hull-based cross-checks.
    pub fn vertex_candidates(&self) -> Result<Vec<Vector>, Error> {
        let m = self.generators.len();
        if m > 20 {
            return Err(Error::TooLarge(format!("2^{m} candidate vertices")));
        }
        let mut pts = Vec::with_capacity(1 << m);
        for mask in 0u64..(1 << m) {
            let mut p = Vector::zeros(self.dim);
            for (i, g) in self.generators.iter().enumerate() {
                p += g.scale(if mask >> i & 1 == 1 { 1.0 } else { -1.0 });
            }
            pts.push(p);
        }
        Ok(pts)
    }
}

/// Explicit polytope form of a zonotope (hull of the sign combinations);
/// only viable for modest generator counts.
pub fn zonotope_to_polytope(z: &Zonotope) -> Result<Polytope, Error> {
    Polytope::from_points(&z.vertex_candidates()?)
}

/// The projection body of `K`: one generator `(w/2) u` per atom of the
/// surface measure, antipodal atoms merged into one generator of summed
/// weight. Depends only on the surface area measure.
pub fn projection_body(k: &Polytope) -> Zonotope {
    let mut generators: Vec<Vector> = Vec::new();
    for (u, w) in &k.surface_area_measure().atoms {
        let mut merged = false;
        for g in generators.iter_mut() {
            let dir = g.normalized().expect("generators are nonzero");
            if (dir - *u).norm() < NORMAL_MERGE_EPS || (dir + *u).norm() < NORMAL_MERGE_EPS {
                *g += dir.scale(0.5 * w);
                merged = true;
                break;
            }
        }
        if !merged {
            generators.push(u.scale(0.5 * w));
        }
    }
    Zonotope { dim: k.dim(), generators }
}

/// Volume by determinant expansion: `2^n * sum over n-subsets |det|`.
/// Exposed for n <= 5 and at most 64 generators.
pub fn zonotope_volume(z: &Zonotope) -> Result<f64, Error> {
    let n = z.dim;
    let m = z.generators.len();
    if n > 5 {
        return Err(Error::UnsupportedDim(n));
    }
    if m > 64 {
        return Err(Error::TooLarge(format!("{m} generators")));
    }
    let subsets = binomial(m, n);
    if subsets > 10_000_000 {
        return Err(Error::TooLarge(format!("{subsets} subsets")));
    }
    let mut total = 0.0;
    let mut pick = vec![0usize; n];
    sum_subset_dets(&z.generators, &mut pick, 0, 0, n, &mut total);
    Ok(2f64.powi(n as i32) * total)
}

fn sum_subset_dets(gens: &[Vector], pick: &mut [usize], depth: usize, start: usize, n: usize, total: &mut f64) {
    if depth == n {
        let cols: Vec<Vector> = pick.iter().map(|&i| gens[i]).collect();
        *total += det_of_columns(&cols).abs();
        return;
    }
    for i in start..gens.len() {
        pick[depth] = i;
        sum_subset_dets(gens, pick, depth + 1, i + 1, n, total);
    }
}

fn binomial(m: usize, n: usize) -> u64 {
    if n > m {
        return 0;
    }
    let mut acc: u64 = 1;
    for k in 0..n {
        acc = acc.saturating_mul((m - k) as u64) / (k as u64 + 1);
    }
    acc
}

/// Schneider's invariant `P(K) = |Pi K| / |K|^{n-1}`.
pub fn schneider_p(k: &Polytope) -> Result<f64, Error> {
    let z = projection_body(k);
    let vol = zonotope_volume(&z)?;
    Ok(vol / k.volume().powi(k.dim() as i32 - 1))
}

/// Quasi-uniform unit directions: equal angles in the plane, a Fibonacci
/// spiral on S^2, and seeded Gaussian directions in higher dimensions.
pub fn sphere_directions(dim: usize, count: usize, seed: u64) -> Vec<Vector> {
    match dim {
        2 => (0..count)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
                Vector::from_slice(&[a.cos(), a.sin()])
            })
            .collect(),
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let a = golden * k as f64;
                    Vector::from_slice(&[r * a.cos(), r * a.sin(), z])
                })
                .collect()
        }
        _ => {
            let mut rng = seeded_rng(seed);
            let normal = rand_distr::StandardNormal;
            (0..count)
                .map(|_| loop {
                    let mut v = Vector::zeros(dim);
                    for i in 0..dim {
                        v[i] = normal.sample(&mut rng);
                    }
                    if let Some(u) = v.normalized() {
                        break u;
                    }
                })
                .collect()
        }
    }
}

/// Surface area of the unit sphere `S^{n-1}` in `R^n`.
pub fn sphere_surface_area(dim: usize) -> f64 {
    use std::f64::consts::PI;
    match dim {
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        4 => 2.0 * PI * PI,
        5 => 8.0 * PI * PI / 3.0,
        6 => PI * PI * PI,
        _ => panic!("dimension {dim} out of range"),
    }
}

/// Volume of the polar body by sphere quadrature:
/// `(1/n) * mean of h_Z(u)^{-n} * |S^{n-1}|`, with the standard-error
/// estimate from the sample variance.
pub fn polar_volume(z: &Zonotope, samples: usize, seed: u64) -> Result<(f64, f64), Error> {
    if !z.spans() {
        return Err(Error::DegenerateZonotope);
    }
    let n = z.dim;
    let dirs = sphere_directions(n, samples, seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for u in &dirs {
        let val = z.support(u).powi(-(n as i32));
        sum += val;
        sum_sq += val * val;
    }
    let count = samples as f64;
    let mean = sum / count;
    let var = (sum_sq / count - mean * mean).max(0.0);
    let factor = sphere_surface_area(n) / n as f64;
    Ok((factor * mean, factor * (var / count).sqrt()))
}

/// Schneider's invariant `R(K) = |Pi* K| |K|^{n-1}` with quadrature error.
pub fn schneider_r(k: &Polytope, samples: usize, seed: u64) -> Result<(f64, f64), Error> {
    let z = projection_body(k);
    let (polar, err) = polar_volume(&z, samples, seed)?;
    let factor = k.volume().powi(k.dim() as i32 - 1);
    Ok((polar * factor, err * factor))
}

/// Tests whether `P` and `Q` are homothetic: recentre both at their
/// centroids, scale by `(|P|/|Q|)^{1/n}` and compare support functions on
/// 256 quasi-uniform directions. The tolerance is relative to the support
/// scale of `P`. Returns (verdict, scale, shift) with `x -> scale x + shift`
/// mapping `Q` onto `P` when the verdict is true.
pub fn homothety_check(p: &Polytope, q: &Polytope, tol: f64) -> (bool, f64, Vector) {
    assert_eq!(p.dim(), q.dim());
    let n = p.dim();
    let cp = p.centroid();
    let cq = q.centroid();
    let scale = (p.volume() / q.volume()).powf(1.0 / n as f64);
    let dirs = sphere_directions(n, 256, 0);
    let mut worst = 0.0_f64;
    let mut h_scale = 0.0_f64;
    for u in &dirs {
        let hp = p.support(u).unwrap() - cp.dot(u);
        let hq = q.support(u).unwrap() - cq.dot(u);
        worst = worst.max((hp - scale * hq).abs());
        h_scale = h_scale.max(hp.abs());
    }
    let ok = worst <= tol * h_scale.max(1e-300);
    (ok, scale, cp - cq.scale(scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies;

    fn v(c: &[f64]) -> Vector {
        Vector::from_slice(c)
    }

    #[test]
    fn projection_of_cube_is_cube() {
        let z = projection_body(&bodies::cube(3));
        assert_eq!(z.generators.len(), 3);
        assert!((zonotope_volume(&z).unwrap() - 8.0).abs() < 1e-12);
        // h agrees with the half-sum over the measure atoms.
        let m = bodies::cube(3).surface_area_measure();
        for u in sphere_directions(3, 32, 1) {
            let direct: f64 = 0.5 * m.atoms.iter().map(|(n, w)| w * n.dot(&u).abs()).sum::<f64>();
            assert!((z.support(&u) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn projection_depends_only_on_the_measure() {
        let t = bodies::triangle();
        let z1 = projection_body(&t);
        let z2 = projection_body(&t.negate());
        let z3 = projection_body(&t.translate(&v(&[2.0, -0.4])));
        for u in sphere_directions(2, 64, 2) {
            let h = z1.support(&u);
            assert!((z2.support(&u) - h).abs() < 1e-12);
            assert!((z3.support(&u) - h).abs() < 1e-12);
        }
    }

    #[test]
    fn zonotope_volume_examples() {
        let z = Zonotope { dim: 2, generators: vec![v(&[1.0, 0.0]), v(&[0.0, 1.0])] };
        assert!((zonotope_volume(&z).unwrap() - 4.0).abs() < 1e-14);
        let z3 = Zonotope {
            dim: 2,
            generators: vec![v(&[1.0, 0.0]), v(&[0.0, 1.0]), v(&[1.0, 1.0])],
        };
        assert!((zonotope_volume(&z3).unwrap() - 12.0).abs() < 1e-14);
    }

    #[test]
    fn zonotope_volume_limits() {
        let z = Zonotope { dim: 6, generators: vec![Vector::zeros(6)] };
        assert!(matches!(zonotope_volume(&z), Err(Error::UnsupportedDim(6))));
    }

    #[test]
    fn schneider_p_values() {
        // Simplices: n^n (n+1) / n!
        for (n, expect) in [(2usize, 6.0), (3, 18.0), (4, 160.0 / 3.0)] {
            let p = schneider_p(&bodies::simplex(n)).unwrap();
            assert!((p - expect).abs() < 1e-9 * expect, "n={n}: {p} vs {expect}");
        }
        // Cubes: 2^n, affine invariant.
        for n in 2..=4usize {
            let p = schneider_p(&bodies::cube(n)).unwrap();
            assert!((p - 2f64.powi(n as i32)).abs() < 1e-9);
        }
    }

    #[test]
    fn schneider_p_affine_invariance() {
        let t = bodies::simplex(3);
        let a = crate::linalg::Matrix::from_rows(&[
            vec![2.0, 0.3, 0.0],
            vec![0.0, 1.0, -0.5],
            vec![0.1, 0.0, 0.7],
        ]);
        let mapped = t.affine_map(&a, &v(&[1.0, 2.0, 3.0])).unwrap();
        let p0 = schneider_p(&t).unwrap();
        let p1 = schneider_p(&mapped).unwrap();
        assert!((p0 - p1).abs() < 1e-8 * p0, "{p0} vs {p1}");
    }

    #[test]
    fn polar_volume_of_cube_zonotope() {
        // Z = [-1,1]^3, polar = cross-polytope of volume 4/3.
        let z = Zonotope {
            dim: 3,
            generators: (0..3).map(|i| Vector::basis(3, i)).collect(),
        };
        let (est, err) = polar_volume(&z, 1 << 16, 0).unwrap();
        assert!((est - 4.0 / 3.0).abs() < 3.0 * err.max(1e-4), "est {est} err {err}");
        // Polarity scaling: |(2Z)*| = 2^{-n} |Z*|.
        let (est2, err2) = polar_volume(&z.scale(2.0), 1 << 16, 0).unwrap();
        assert!((est2 - est / 8.0).abs() < 3.0 * (err / 8.0 + err2));
    }

    #[test]
    fn polar_volume_rejects_flat_zonotopes() {
        let z = Zonotope { dim: 3, generators: vec![v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])] };
        assert!(matches!(polar_volume(&z, 128, 0), Err(Error::DegenerateZonotope)));
    }

    #[test]
    fn homothety_examples() {
        let t = bodies::triangle();
        let scaled = t.scale(2.0).translate(&v(&[1.0, 1.0]));
        let (ok, scale, _) = homothety_check(&t, &scaled, 1e-9);
        assert!(ok);
        assert!((scale - 0.5).abs() < 1e-12);

        let sq = bodies::cube(2);
        let (ok2, _, _) = homothety_check(&sq, &t, 1e-5);
        assert!(!ok2);
    }
}
