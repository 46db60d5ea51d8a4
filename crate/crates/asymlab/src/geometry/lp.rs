//! Chebyshev center of a halfspace system by a dense two-phase simplex.
//!
//! Maximizes r subject to <a_i, x> + r <= b_i with unit normals a_i. The
//! center is the anchor for the dual transform in halfspace intersection; it
//! only needs to be strictly interior with a known clearance, not optimal to
//! machine precision.

use crate::linalg::Vector;

#[derive(Clone, Debug)]
pub enum Chebyshev {
    /// Strictly interior point together with its clearance to every plane.
    Interior { center: Vector, radius: f64 },
    Infeasible,
}

/// Caps the inradius variable so the tableau stays bounded when the region
/// is unbounded; boundedness proper is decided later on the dual hull.
const RADIUS_CAP: f64 = 1e7;

pub fn chebyshev_center(dim: usize, halfspaces: &[(Vector, f64)]) -> Chebyshev {
    let m = halfspaces.len();
    let scale = halfspaces.iter().fold(1e-300_f64, |s, (_, b)| s.max(b.abs()));

    // Columns: x+ (dim) | x- (dim) | r | slacks (rows) | artificials | rhs.
    let rows = m + 1; // extra row: r <= RADIUS_CAP
    let r_col = 2 * dim;
    let slack0 = r_col + 1;
    let art0 = slack0 + rows;
    let n_art = halfspaces.iter().filter(|(_, b)| *b < 0.0).count();
    let total_cols = art0 + n_art + 1;

    let mut tab: Vec<Vec<f64>> = Vec::with_capacity(rows);
    let mut basis: Vec<usize> = Vec::with_capacity(rows);
    let mut art_idx = 0;
    for i in 0..rows {
        let (a, b) = if i < m {
            (Some(&halfspaces[i].0), halfspaces[i].1 / scale)
        } else {
            (None, RADIUS_CAP)
        };
        let mut row = vec![0.0; total_cols];
        if let Some(a) = a {
            for j in 0..dim {
                row[j] = a[j];
                row[dim + j] = -a[j];
            }
        }
        row[r_col] = 1.0;
        row[slack0 + i] = 1.0;
        row[total_cols - 1] = b;
        if b < 0.0 {
            for v in row.iter_mut() {
                *v = -*v;
            }
            row[art0 + art_idx] = 1.0;
            basis.push(art0 + art_idx);
            art_idx += 1;
        } else {
            basis.push(slack0 + i);
        }
        tab.push(row);
    }

    let eps = 1e-11;

    // Phase 1: minimize the sum of artificials.
    if n_art > 0 {
        let mut cost = vec![0.0; total_cols - 1];
        for j in art0..art0 + n_art {
            cost[j] = 1.0;
        }
        if !simplex_min(&mut tab, &mut basis, &cost, eps) {
            return Chebyshev::Infeasible;
        }
        let obj: f64 = basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= art0)
            .map(|(i, _)| tab[i][total_cols - 1])
            .sum();
        if obj > 1e-9 {
            return Chebyshev::Infeasible;
        }
        // Pivot any lingering (degenerate) artificial out of the basis.
        for i in 0..rows {
            if basis[i] >= art0 {
                if let Some(j) = (0..art0).find(|&j| tab[i][j].abs() > eps) {
                    pivot(&mut tab, &mut basis, i, j);
                }
            }
        }
    }

    // Phase 2: maximize r, i.e. minimize -r.
    let mut cost = vec![0.0; total_cols - 1];
    cost[r_col] = -1.0;
    for j in art0..art0 + n_art {
        cost[j] = 1e6; // keep artificials out
    }
    if !simplex_min(&mut tab, &mut basis, &cost, eps) {
        return Chebyshev::Infeasible;
    }

    let mut x = Vector::zeros(dim);
    let mut radius = 0.0;
    for (i, &b) in basis.iter().enumerate() {
        let val = tab[i][total_cols - 1];
        if b < dim {
            x[b] += val;
        } else if b < 2 * dim {
            x[b - dim] -= val;
        } else if b == r_col {
            radius = val;
        }
    }
    if radius <= 0.0 {
        return Chebyshev::Infeasible;
    }
    Chebyshev::Interior { center: x.scale(scale), radius: radius * scale }
}

fn pivot(tab: &mut [Vec<f64>], basis: &mut [usize], row: usize, col: usize) {
    let p = tab[row][col];
    let inv = 1.0 / p;
    for v in tab[row].iter_mut() {
        *v *= inv;
    }
    for i in 0..tab.len() {
        if i == row {
            continue;
        }
        let f = tab[i][col];
        if f == 0.0 {
            continue;
        }
        for j in 0..tab[i].len() {
            tab[i][j] -= f * tab[row][j];
        }
        tab[i][col] = 0.0;
    }
    basis[row] = col;
}

/// Primal simplex, Dantzig rule with a Bland fallback; returns false when
/// the iteration cap is exhausted without reaching optimality.
fn simplex_min(tab: &mut [Vec<f64>], basis: &mut [usize], cost: &[f64], eps: f64) -> bool {
    let rows = tab.len();
    let cols = cost.len();
    let rhs = tab[0].len() - 1;
    let cap = 200 * (rows + cols);
    for iter in 0..cap {
        let bland = iter > cap / 2;
        // Reduced costs: d_j = c_j - c_B^T B^{-1} A_j.
        let mut enter: Option<usize> = None;
        let mut best = -eps;
        for j in 0..cols {
            if basis.contains(&j) {
                continue;
            }
            let mut d = cost[j];
            for i in 0..rows {
                d -= cost[basis[i]] * tab[i][j];
            }
            if d < best {
                if bland {
                    enter = Some(j);
                    break;
                }
                best = d;
                enter = Some(j);
            }
        }
        let Some(j) = enter else {
            return true;
        };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..rows {
            if tab[i][j] > eps {
                let ratio = tab[i][rhs] / tab[i][j];
                match leave {
                    Some((li, lr)) if ratio > lr || (ratio == lr && basis[i] >= basis[li]) => {}
                    _ => leave = Some((i, ratio)),
                }
            }
        }
        let Some((i, _)) = leave else {
            return false; // unbounded in the minimized direction
        };
        pivot(tab, basis, i, j);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_box(dim: usize, half: f64) -> Vec<(Vector, f64)> {
        let mut hs = Vec::new();
        for i in 0..dim {
            hs.push((Vector::basis(dim, i), half));
            hs.push((-Vector::basis(dim, i), half));
        }
        hs
    }

    #[test]
    fn centered_box() {
        match chebyshev_center(2, &unit_box(2, 1.0)) {
            Chebyshev::Interior { center, radius } => {
                assert!(center.norm() < 1e-8);
                assert!((radius - 1.0).abs() < 1e-8);
            }
            _ => panic!("expected interior"),
        }
    }

    #[test]
    fn shifted_box_negative_rhs() {
        // Box [2,4] x [1,3]: some offsets force phase-1 rows.
        let hs = vec![
            (Vector::from_slice(&[1.0, 0.0]), 4.0),
            (Vector::from_slice(&[-1.0, 0.0]), -2.0),
            (Vector::from_slice(&[0.0, 1.0]), 3.0),
            (Vector::from_slice(&[0.0, -1.0]), -1.0),
        ];
        match chebyshev_center(2, &hs) {
            Chebyshev::Interior { center, radius } => {
                assert!((center[0] - 3.0).abs() < 1e-7);
                assert!((center[1] - 2.0).abs() < 1e-7);
                assert!((radius - 1.0).abs() < 1e-7);
            }
            _ => panic!("expected interior"),
        }
    }

    #[test]
    fn infeasible_system() {
        let hs = vec![
            (Vector::from_slice(&[1.0, 0.0]), -1.0),
            (Vector::from_slice(&[-1.0, 0.0]), -1.0),
        ];
        assert!(matches!(chebyshev_center(2, &hs), Chebyshev::Infeasible));
    }

    #[test]
    fn unbounded_region_still_yields_a_point() {
        // Single halfspace: radius runs to the cap but a point comes back.
        let hs = vec![(Vector::from_slice(&[1.0, 0.0]), 1.0)];
        match chebyshev_center(2, &hs) {
            Chebyshev::Interior { radius, .. } => assert!(radius > 1.0),
            _ => panic!("expected interior"),
        }
    }

    #[test]
    fn simplex_5d() {
        let mut hs = Vec::new();
        for i in 0..5 {
            hs.push((-Vector::basis(5, i), 0.0));
        }
        let diag = Vector::from_slice(&[1.0; 5]).normalized().unwrap();
        hs.push((diag, 1.0));
        match chebyshev_center(5, &hs) {
            Chebyshev::Interior { center, radius } => {
                assert!(radius > 0.05);
                for i in 0..5 {
                    assert!(center[i] > 0.0);
                }
            }
            _ => panic!("expected interior"),
        }
    }
}
