//! Derivative-free simplex maximizer (Nelder-Mead).
//!
//! Tuned for the concave overlap objective: no randomness, deterministic
//! tie-breaking, convergence measured by the simplex diameter so the caller
//! can pin the location accuracy directly.

use crate::linalg::Vector;

#[derive(Clone, Debug)]
pub struct SimplexResult {
    pub point: Vector,
    pub value: f64,
    pub evals: usize,
    /// Final max distance between simplex vertices.
    pub simplex_diameter: f64,
}

/// Maximizes `f` starting from `x0`, with an initial simplex of edge `step`.
/// Stops when the simplex diameter falls below `tol` or after `max_evals`.
pub fn simplex_max<F: FnMut(&Vector) -> f64>(
    mut f: F,
    x0: &Vector,
    step: f64,
    tol: f64,
    max_evals: usize,
) -> SimplexResult {
    let n = x0.dim();
    let mut evals = 0usize;
    let mut eval = |x: &Vector, evals: &mut usize| -> f64 {
        *evals += 1;
        f(x)
    };

    let mut pts: Vec<Vector> = Vec::with_capacity(n + 1);
    let mut vals: Vec<f64> = Vec::with_capacity(n + 1);
    pts.push(*x0);
    vals.push(eval(x0, &mut evals));
    for i in 0..n {
        let p = *x0 + Vector::basis(n, i).scale(step);
        vals.push(eval(&p, &mut evals));
        pts.push(p);
    }

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);

    loop {
        // Descending by value: order[0] is the best vertex.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[b].partial_cmp(&vals[a]).unwrap_or(std::cmp::Ordering::Equal));

        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];

        let diameter = pts
            .iter()
            .map(|p| p.dist(&pts[best]))
            .fold(0.0, f64::max);
        if diameter < tol || evals >= max_evals {
            return SimplexResult { point: pts[best], value: vals[best], evals, simplex_diameter: diameter };
        }

        let mut centroid = Vector::zeros(n);
        for &i in order.iter().take(n) {
            centroid += pts[i];
        }
        centroid = centroid.scale(1.0 / n as f64);

        let reflected = centroid + (centroid - pts[worst]).scale(alpha);
        let fr = eval(&reflected, &mut evals);

        if fr > vals[best] {
            let expanded = centroid + (centroid - pts[worst]).scale(gamma);
            let fe = eval(&expanded, &mut evals);
            if fe > fr {
                pts[worst] = expanded;
                vals[worst] = fe;
            } else {
                pts[worst] = reflected;
                vals[worst] = fr;
            }
            continue;
        }
        if fr > vals[second_worst] {
            pts[worst] = reflected;
            vals[worst] = fr;
            continue;
        }
        // Contraction: outside when the reflection at least beat the worst.
        let contracted = if fr > vals[worst] {
            centroid + (reflected - centroid).scale(rho)
        } else {
            centroid + (pts[worst] - centroid).scale(rho)
        };
        let fc = eval(&contracted, &mut evals);
        if fc > vals[worst].max(fr) {
            pts[worst] = contracted;
            vals[worst] = fc;
            continue;
        }
        // Shrink toward the best vertex.
        for &i in order.iter().skip(1) {
            pts[i] = pts[best] + (pts[i] - pts[best]).scale(sigma);
            vals[i] = eval(&pts[i], &mut evals);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximizes_concave_quadratic() {
        let target = Vector::from_slice(&[0.3, -0.7]);
        let f = |x: &Vector| -(x.dist(&target)).powi(2);
        let r = simplex_max(f, &Vector::zeros(2), 0.5, 1e-10, 10_000);
        assert!(r.point.dist(&target) < 1e-8, "off by {}", r.point.dist(&target));
    }

    #[test]
    fn handles_plateaus() {
        // Concave roof capped at zero outside a disc, like the overlap
        // objective at the boundary of its support.
        let f = |x: &Vector| (1.0 - x.norm()).max(0.0);
        let r = simplex_max(f, &Vector::from_slice(&[0.6, 0.0]), 0.2, 1e-9, 10_000);
        assert!(r.point.norm() < 1e-7);
        assert!((r.value - 1.0).abs() < 1e-7);
    }

    #[test]
    fn respects_eval_budget() {
        let f = |x: &Vector| -x.norm();
        let r = simplex_max(f, &Vector::from_slice(&[1.0, 1.0, 1.0]), 0.5, 0.0, 57);
        assert!(r.evals <= 57 + 4); // a final sweep may finish the iteration
    }
}
