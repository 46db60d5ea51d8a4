//! Simulated-annealing search for extremal bodies.
//!
//! The objectives (m(K) and the Blaschke volume ratio) are affine invariant,
//! so the chain quotients out the invariance group by renormalizing every
//! accepted candidate to centroid zero and identity covariance. Proposals
//! are Gaussian vertex jitters whose size follows the temperature.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::bodies::seeded_rng;
use crate::geometry::{hausdorff_2d, Polytope};
use crate::kernel::asymmetry_m;
use crate::linalg::{det_of_columns, Matrix, Vector};
use crate::wulff::blaschke_body;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    /// Minimize m(K).
    MinAsymmetry,
    /// Maximize |∇K| / |K|.
    MaxBlaschkeRatio,
}

impl std::str::FromStr for Objective {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "min-m" => Ok(Objective::MinAsymmetry),
            "max-blaschke-ratio" => Ok(Objective::MaxBlaschkeRatio),
            other => Err(Error::Parse(format!("unknown objective `{other}`"))),
        }
    }
}

impl Objective {
    pub fn as_str(&self) -> &'static str {
        match self {
            Objective::MinAsymmetry => "min-m",
            Objective::MaxBlaschkeRatio => "max-blaschke-ratio",
        }
    }

    /// Internal value that the annealer minimizes.
    fn internal(&self, k: &Polytope) -> Result<f64, Error> {
        match self {
            Objective::MinAsymmetry => asymmetry_m(k),
            Objective::MaxBlaschkeRatio => Ok(-(blaschke_body(k)?.volume() / k.volume())),
        }
    }

    /// Natural reading of an internal value.
    pub fn natural(&self, internal: f64) -> f64 {
        match self {
            Objective::MinAsymmetry => internal,
            Objective::MaxBlaschkeRatio => -internal,
        }
    }
}

/// Chain state: the walker itself plus its bookkeeping.
#[derive(Clone, Debug)]
pub struct SearchState {
    pub dim: usize,
    pub objective: Objective,
    /// Current candidate, affinely normalized.
    pub current: Polytope,
    pub current_value: f64,
    pub best: Polytope,
    pub best_value: f64,
    pub temperature: f64,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// Best body found, affinely normalized (centroid 0, covariance I).
    pub best: Polytope,
    /// Best value in natural units (m for min-m, the ratio for
    /// max-blaschke-ratio).
    pub best_value: f64,
    /// Best-so-far internal value after each evaluation; nonincreasing.
    pub trace: Vec<f64>,
    pub evaluations: usize,
    /// The final stretch of the budget still produced improvements.
    pub budget_exhausted: bool,
}

/// Second moment matrix `E[x x^T]` over the body, from the cone
/// decomposition: per simplex with vertices w_0..w_n the integral is
/// `vol * (sum w_i w_i^T + s s^T) / ((n+1)(n+2))` with `s = sum w_i`.
fn second_moment(p: &Polytope) -> Matrix {
    let n = p.dim();
    let apex = p.interior_point();
    let factorial: f64 = (1..=n).map(|k| k as f64).product();
    let mut acc = vec![vec![0.0; n]; n];
    let mut total = 0.0;
    for cell in p.boundary_cells() {
        let verts: Vec<Vector> = cell.iter().map(|&i| p.vertices()[i]).collect();
        let cols: Vec<Vector> = verts.iter().map(|v| *v - apex).collect();
        let vol = det_of_columns(&cols).abs() / factorial;
        if vol == 0.0 {
            continue;
        }
        let mut s = apex;
        for v in &verts {
            s += *v;
        }
        let scale = vol / ((n + 1) as f64 * (n + 2) as f64);
        for i in 0..n {
            for j in 0..n {
                let mut m = apex[i] * apex[j] + s[i] * s[j];
                for v in &verts {
                    m += v[i] * v[j];
                }
                acc[i][j] += scale * m;
            }
        }
        total += vol;
    }
    let mut out = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, acc[i][j] / total);
        }
    }
    out
}

/// Normalizes to centroid zero and covariance identity (whitening by the
/// Cholesky factor); the affine-invariant objectives are then searched on a
/// compact slice of shape space.
pub fn affine_normalize(p: &Polytope) -> Result<Polytope, Error> {
    let c = p.centroid();
    let centered = p.translate(&-c);
    let cov = second_moment(&centered);
    let l = cov
        .cholesky()
        .ok_or_else(|| Error::DegenerateInput("covariance not positive definite".into()))?;
    let pts: Vec<Vector> = centered.vertices().iter().map(|v| l.solve_lower(v)).collect();
    Polytope::from_points(&pts)
}

/// The canonical normalized triangle: equilateral, centroid zero,
/// covariance identity (circumradius sqrt(8)).
pub fn canonical_triangle() -> Polytope {
    let r = 8f64.sqrt();
    let pts: Vec<Vector> = (0..3)
        .map(|k| {
            let a = std::f64::consts::FRAC_PI_2 + 2.0 * std::f64::consts::PI * k as f64 / 3.0;
            Vector::from_slice(&[r * a.cos(), r * a.sin()])
        })
        .collect();
    Polytope::from_points(&pts).expect("triangle")
}

/// Hausdorff distance from a normalized planar body to the nearest rotation
/// of the canonical triangle (the rotation group is what normalization
/// leaves free; the triangle's own symmetries cover reflections).
pub fn triangle_distance(normalized: &Polytope) -> f64 {
    let tri = canonical_triangle();
    let rotate = |p: &Polytope, a: f64| -> Polytope {
        let m = Matrix::from_rows(&[vec![a.cos(), -a.sin()], vec![a.sin(), a.cos()]]);
        p.affine_map(&m, &Vector::zeros(2)).expect("rotation")
    };
    let eval = |a: f64| hausdorff_2d(normalized, &rotate(&tri, a));
    let third = 2.0 * std::f64::consts::PI / 3.0;
    let coarse = 240;
    let mut best_a = 0.0;
    let mut best = f64::INFINITY;
    for k in 0..coarse {
        let a = third * k as f64 / coarse as f64;
        let d = eval(a);
        if d < best {
            best = d;
            best_a = a;
        }
    }
    // Local refinement by interval thirds around the coarse winner.
    let mut lo = best_a - third / coarse as f64;
    let mut hi = best_a + third / coarse as f64;
    for _ in 0..40 {
        let a1 = lo + (hi - lo) / 3.0;
        let a2 = hi - (hi - lo) / 3.0;
        if eval(a1) < eval(a2) {
            hi = a2;
        } else {
            lo = a1;
        }
    }
    best.min(eval(0.5 * (lo + hi)))
}

/// Simulated annealing over vertex perturbations. Deterministic given the
/// seed: one chain, one RNG stream. Returns the best body found and the
/// best-so-far trace; `budget_exhausted` flags a run that was still
/// improving near the end.
pub fn search_extremal(
    dim: usize,
    objective: Objective,
    budget: usize,
    seed: u64,
) -> Result<SearchOutcome, Error> {
    if !(2..=3).contains(&dim) {
        return Err(Error::UnsupportedDim(dim));
    }
    if budget > 100_000 {
        return Err(Error::TooLarge(format!("budget {budget} exceeds 100000")));
    }
    let max_vertices = 12;
    let mut rng = seeded_rng(seed);

    let start = loop {
        let p = crate::bodies::random_polytope(dim, dim + 3, &mut rng);
        if let Ok(n) = affine_normalize(&p) {
            break n;
        }
    };
    let mut state = SearchState {
        dim,
        objective,
        current_value: objective.internal(&start)?,
        current: start.clone(),
        best: start,
        best_value: f64::INFINITY,
        temperature: 0.0,
        seed,
    };
    state.best_value = state.current_value;

    let t0: f64 = 0.02;
    let t_final: f64 = 2e-5;
    let cooling = (t_final / t0).powf(1.0 / budget.max(2) as f64);
    let mut trace = Vec::with_capacity(budget);
    let mut evaluations = 1usize;
    trace.push(state.best_value);
    let mut last_improvement = 0usize;

    state.temperature = t0;
    while evaluations < budget {
        let sigma = 0.45 * (state.temperature / t0).sqrt() + 0.002;
        let proposal = match propose(&state.current, sigma, max_vertices, &mut rng) {
            Some(p) => p,
            None => {
                state.temperature *= cooling;
                continue;
            }
        };
        let value = match objective.internal(&proposal) {
            Ok(v) => v,
            Err(_) => f64::INFINITY,
        };
        evaluations += 1;

        let delta = value - state.current_value;
        let accept = delta <= 0.0 || {
            let u: f64 = rng.random();
            u < (-delta / state.temperature).exp()
        };
        if accept && value.is_finite() {
            state.current = proposal;
            state.current_value = value;
            if value < state.best_value {
                state.best_value = value;
                state.best = state.current.clone();
                last_improvement = evaluations;
            }
        }
        trace.push(state.best_value);
        state.temperature *= cooling;
    }

    let budget_exhausted = last_improvement * 10 >= budget * 9;
    Ok(SearchOutcome {
        best: state.best,
        best_value: objective.natural(state.best_value),
        trace,
        evaluations,
        budget_exhausted,
    })
}

/// Gaussian jitter of every vertex, an occasional edge-splitting vertex
/// insertion, renormalization, and the 12-vertex cap.
fn propose(
    current: &Polytope,
    sigma: f64,
    max_vertices: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Option<Polytope> {
    let dim = current.dim();
    let normal = StandardNormal;
    let mut pts: Vec<Vector> = current
        .vertices()
        .iter()
        .map(|v| {
            let mut p = *v;
            for i in 0..dim {
                let step: f64 = normal.sample(rng);
                p[i] += sigma * step;
            }
            p
        })
        .collect();
    if pts.len() < max_vertices && rng.random::<f64>() < 0.15 {
        // Split: blend two vertices and push slightly outward.
        let i = rng.random_range(0..pts.len());
        let j = rng.random_range(0..pts.len());
        if i != j {
            let lambda: f64 = rng.random_range(0.3..0.7);
            let mid = pts[i].scale(lambda) + pts[j].scale(1.0 - lambda);
            pts.push(mid.scale(1.0 + 0.05 * sigma));
        }
    }
    let hull = Polytope::from_points(&pts).ok()?;
    if hull.vertices().len() > max_vertices {
        return None;
    }
    affine_normalize(&hull).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies;

    #[test]
    fn normalization_fixes_moments() {
        let mut rng = bodies::seeded_rng(3);
        for dim in 2..=3 {
            let p = bodies::random_polytope(dim, dim + 4, &mut rng);
            let n = affine_normalize(&p).unwrap();
            assert!(n.centroid().norm() < 1e-9 * n.diameter());
            let m = second_moment(&n.translate(&-n.centroid()));
            for i in 0..dim {
                for j in 0..dim {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((m.get(i, j) - expect).abs() < 1e-8, "moment ({i},{j}) = {}", m.get(i, j));
                }
            }
        }
    }

    #[test]
    fn canonical_triangle_is_normalized() {
        let t = canonical_triangle();
        let n = affine_normalize(&t).unwrap();
        assert!(triangle_distance(&n) < 1e-6);
    }

    #[test]
    fn triangle_distance_sees_any_triangle() {
        // A wildly skewed triangle normalizes onto the canonical one.
        let skew = Polytope::from_points(&[
            Vector::from_slice(&[0.0, 0.0]),
            Vector::from_slice(&[7.0, 0.3]),
            Vector::from_slice(&[-1.0, 0.45]),
        ])
        .unwrap();
        let n = affine_normalize(&skew).unwrap();
        assert!(triangle_distance(&n) < 1e-6);
        // A square does not.
        let sq = affine_normalize(&bodies::cube(2)).unwrap();
        assert!(triangle_distance(&sq) > 0.3);
    }

    #[test]
    fn objective_parsing() {
        assert_eq!("min-m".parse::<Objective>().unwrap(), Objective::MinAsymmetry);
        assert_eq!(
            "max-blaschke-ratio".parse::<Objective>().unwrap(),
            Objective::MaxBlaschkeRatio
        );
        assert!("best-shape".parse::<Objective>().is_err());
    }

    #[test]
    fn short_min_m_run_is_deterministic_and_monotone() {
        let a = search_extremal(2, Objective::MinAsymmetry, 300, 9).unwrap();
        let b = search_extremal(2, Objective::MinAsymmetry, 300, 9).unwrap();
        assert_eq!(a.trace, b.trace);
        assert!(a.trace.windows(2).all(|w| w[1] <= w[0]));
        assert!(a.best_value < 1.0);
        assert!(a.best_value >= 2.0 / 3.0 - 1e-6);
    }

    #[test]
    fn rejects_bad_dimensions_and_budgets() {
        assert!(matches!(
            search_extremal(4, Objective::MinAsymmetry, 10, 0),
            Err(Error::UnsupportedDim(4))
        ));
        assert!(matches!(
            search_extremal(2, Objective::MinAsymmetry, 200_000, 0),
            Err(Error::TooLarge(_))
        ));
    }
}
