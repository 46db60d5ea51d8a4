//! Mixed volumes, the Minkowski inequality gap, and surface-measure algebra
//! including the Blaschke symmetrization.

use crate::geometry::{Polytope, SurfaceMeasure, NORMAL_MERGE_EPS};
use crate::linalg::Vector;
use crate::Error;

/// First mixed volume `V_1(L, K) = (1/n) * sum h_K(u_i) w_i` over the atoms
/// of the surface area measure of `L`. `V_1(K, K)` recovers the volume.
pub fn mixed_volume_v1(l: &Polytope, k: &Polytope) -> Result<f64, Error> {
    if l.dim() != k.dim() {
        return Err(Error::DimensionMismatch(l.dim(), k.dim()));
    }
    let n = l.dim() as f64;
    let mut acc = 0.0;
    for (u, w) in &l.surface_area_measure().atoms {
        acc += k.support(u)? * w;
    }
    Ok(acc / n)
}

/// `V_1(L,K) - |K|^{1/n} |L|^{(n-1)/n}`; nonnegative up to roundoff, zero
/// exactly when the bodies are homothetic.
pub fn minkowski_inequality_gap(l: &Polytope, k: &Polytope) -> Result<f64, Error> {
    if l.dim() != k.dim() {
        return Err(Error::DimensionMismatch(l.dim(), k.dim()));
    }
    let n = l.dim() as f64;
    let v1 = mixed_volume_v1(l, k)?;
    let bound = k.volume().powf(1.0 / n) * l.volume().powf((n - 1.0) / n);
    Ok(v1 - bound)
}

/// The even measure `(S_K + S_{-K}) / 2`, built by negating atom normals and
/// merging antipodal coincidences; this is the surface measure of the
/// Blaschke body without constructing `-K`.
pub fn blaschke_measure(k: &Polytope) -> SurfaceMeasure {
    let base = k.surface_area_measure();
    let mut atoms: Vec<(Vector, f64)> = Vec::with_capacity(2 * base.atoms.len());
    for (u, w) in &base.atoms {
        merge_atom(&mut atoms, *u, 0.5 * w);
        merge_atom(&mut atoms, -*u, 0.5 * w);
    }
    SurfaceMeasure { dim: k.dim(), atoms }
}

fn merge_atom(atoms: &mut Vec<(Vector, f64)>, u: Vector, w: f64) {
    for (v, weight) in atoms.iter_mut() {
        if (*v - u).norm() < NORMAL_MERGE_EPS {
            *weight += w;
            return;
        }
    }
    atoms.push((u, w));
}

/// Feasibility diagnostics for the discrete Minkowski problem.
#[derive(Clone, Debug)]
pub struct MeasureDiagnostics {
    /// `|sum w_i u_i| / sum w_i`.
    pub centroid_rel: f64,
    /// Dimension of the linear span of the support.
    pub rank: usize,
    /// Every atom has an antipodal partner of equal weight.
    pub even: bool,
    /// Centroid near zero and full-rank support.
    pub feasible: bool,
}

/// Reports centroid norm, spanning rank and evenness; never errors, callers
/// decide severity.
pub fn validate_measure(s: &SurfaceMeasure) -> MeasureDiagnostics {
    let total = s.total_mass();
    let centroid_rel = if total > 0.0 { s.centroid().norm() / total } else { f64::INFINITY };
    let rank = span_rank(&s.atoms.iter().map(|(u, _)| *u).collect::<Vec<_>>(), s.dim);
    let even = s.atoms.iter().all(|(u, w)| {
        s.atoms
            .iter()
            .any(|(v, x)| (*v + *u).norm() < NORMAL_MERGE_EPS && (x - w).abs() <= 1e-9 * w.max(*x))
    });
    let feasible = centroid_rel <= 1e-8 && rank == s.dim && s.atoms.iter().all(|(_, w)| *w > 0.0);
    MeasureDiagnostics { centroid_rel, rank, even, feasible }
}

fn span_rank(dirs: &[Vector], dim: usize) -> usize {
    // Rank of the Gram-Schmidt residual system.
    let mut basis: Vec<Vector> = Vec::new();
    for d in dirs {
        let mut r = *d;
        for b in &basis {
            r = r - b.scale(r.dot(b));
        }
        if r.norm() > 1e-9 {
            basis.push(r.scale(1.0 / r.norm()));
            if basis.len() == dim {
                break;
            }
        }
    }
    basis.len()
}

/// Numeric derivative of `t -> |tK + L|` at `0+`, used to cross-check the
/// mixed-volume formula (`d/dt = n V_1(L, K)`).
pub fn volume_derivative_at_zero(l: &Polytope, k: &Polytope) -> Result<f64, Error> {
    let base = l.volume();
    let mut quotients = Vec::new();
    for &t in &[1e-3, 1e-4] {
        let grown = l.minkowski_sum(&k.scale(t))?;
        quotients.push((grown.volume() - base) / t);
    }
    // One Richardson step at ratio 10 removes the linear error term.
    Ok((10.0 * quotients[1] - quotients[0]) / 9.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies;

    fn v(c: &[f64]) -> Vector {
        Vector::from_slice(c)
    }

    #[test]
    fn v1_of_body_with_itself_is_volume() {
        let t = bodies::triangle();
        assert!((mixed_volume_v1(&t, &t).unwrap() - t.volume()).abs() < 1e-12);
        let c = bodies::cube(3);
        assert!((mixed_volume_v1(&c, &c).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn v1_boxes_and_derivative() {
        let l = bodies::cube(2);
        let k = l.scale(2.0);
        let v1 = mixed_volume_v1(&l, &k).unwrap();
        assert!((v1 - 2.0).abs() < 1e-12);
        let d = volume_derivative_at_zero(&l, &k).unwrap();
        assert!((d - 2.0 * v1).abs() < 1e-6, "derivative {d} vs {}", 2.0 * v1);
    }

    #[test]
    fn gap_vanishes_for_homothets() {
        let t = bodies::triangle();
        assert!(minkowski_inequality_gap(&t, &t).unwrap().abs() < 1e-12);
        let shifted = t.translate(&v(&[5.0, -1.0]));
        assert!(minkowski_inequality_gap(&t, &shifted).unwrap().abs() < 1e-10);
        let scaled = t.scale(3.0);
        assert!(minkowski_inequality_gap(&t, &scaled).unwrap().abs() < 1e-10);
    }

    #[test]
    fn gap_positive_for_non_homothets() {
        let t = bodies::triangle();
        let sq = bodies::cube(2);
        assert!(minkowski_inequality_gap(&t, &sq).unwrap() > 1e-3);
    }

    #[test]
    fn blaschke_measure_of_triangle() {
        let t = bodies::triangle();
        let m = blaschke_measure(&t);
        assert_eq!(m.atoms.len(), 6);
        let total: f64 = m.total_mass();
        let perimeter = 2.0 + 2f64.sqrt();
        assert!((total - perimeter).abs() < 1e-12);
        let diag = validate_measure(&m);
        assert!(diag.even && diag.feasible && diag.rank == 2);
        // Atom pairs at half the edge lengths.
        let hyp = v(&[1.0, 1.0]).normalized().unwrap();
        for (u, expect) in [
            (v(&[0.0, -1.0]), 0.5),
            (v(&[0.0, 1.0]), 0.5),
            (v(&[-1.0, 0.0]), 0.5),
            (v(&[1.0, 0.0]), 0.5),
            (hyp, 2f64.sqrt() / 2.0),
            (-hyp, 2f64.sqrt() / 2.0),
        ] {
            let w = m
                .atoms
                .iter()
                .find(|(a, _)| (*a - u).norm() < 1e-9)
                .map(|(_, w)| *w)
                .expect("atom present");
            assert!((w - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn blaschke_measure_of_symmetric_body_is_its_own() {
        let sq = bodies::cube(2); // [0,1]^2, symmetric about its center
        let m0 = sq.surface_area_measure();
        let m = blaschke_measure(&sq);
        assert_eq!(m.atoms.len(), m0.atoms.len());
        for (u, w) in &m0.atoms {
            let w2 = m.atoms.iter().find(|(a, _)| (*a - *u).norm() < 1e-9).unwrap().1;
            assert!((w2 - w).abs() < 1e-12);
        }
    }

    #[test]
    fn diagnostics_flag_rank_deficiency() {
        let s = SurfaceMeasure { dim: 2, atoms: vec![(v(&[1.0, 0.0]), 1.0)] };
        let d = validate_measure(&s);
        assert_eq!(d.rank, 1);
        assert!(!d.feasible);
        assert!(d.centroid_rel > 0.5);
    }
}
