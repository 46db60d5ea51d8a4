//! Builtin test bodies and seeded random generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::geometry::{Polytope, SurfaceMeasure};
use crate::linalg::Vector;
use crate::Error;

/// `conv{0, e_1, ..., e_n}`.
pub fn simplex(dim: usize) -> Polytope {
    let mut pts = vec![Vector::zeros(dim)];
    for i in 0..dim {
        pts.push(Vector::basis(dim, i));
    }
    Polytope::from_points(&pts).expect("simplex is nondegenerate")
}

/// Unit cube `[0,1]^n`.
pub fn cube(dim: usize) -> Polytope {
    let mut pts = Vec::with_capacity(1 << dim);
    for mask in 0u32..(1 << dim) {
        let mut v = Vector::zeros(dim);
        for i in 0..dim {
            v[i] = if mask >> i & 1 == 1 { 1.0 } else { 0.0 };
        }
        pts.push(v);
    }
    Polytope::from_points(&pts).expect("cube is nondegenerate")
}

/// Cross-polytope `conv{ +-e_i }`.
pub fn cross(dim: usize) -> Polytope {
    let mut pts = Vec::with_capacity(2 * dim);
    for i in 0..dim {
        pts.push(Vector::basis(dim, i));
        pts.push(-Vector::basis(dim, i));
    }
    Polytope::from_points(&pts).expect("cross-polytope is nondegenerate")
}

/// Regular k-gon with circumradius 1, first vertex pointing up.
pub fn regular_polygon(k: usize) -> Polytope {
    assert!(k >= 3);
    let pts: Vec<Vector> = (0..k)
        .map(|j| {
            let a = std::f64::consts::FRAC_PI_2 + 2.0 * std::f64::consts::PI * j as f64 / k as f64;
            Vector::from_slice(&[a.cos(), a.sin()])
        })
        .collect();
    Polytope::from_points(&pts).expect("regular polygon is nondegenerate")
}

/// Right triangle `conv{(0,0), (1,0), (0,1)}`, the workhorse planar example.
pub fn triangle() -> Polytope {
    simplex(2)
}

/// Resolves the builtin names accepted by the JSON loader:
/// `simplex-N`, `cube-N`, `cross-N`, `regular-K-gon`.
pub fn builtin(name: &str) -> Result<Polytope, Error> {
    let parts: Vec<&str> = name.split('-').collect();
    let parse = |s: &str| -> Result<usize, Error> {
        s.parse::<usize>().map_err(|_| Error::Parse(format!("bad number in body name `{name}`")))
    };
    match parts.as_slice() {
        ["simplex", n] => {
            let n = parse(n)?;
            check_dim(n)?;
            Ok(simplex(n))
        }
        ["cube", n] => {
            let n = parse(n)?;
            check_dim(n)?;
            Ok(cube(n))
        }
        ["cross", n] => {
            let n = parse(n)?;
            check_dim(n)?;
            Ok(cross(n))
        }
        ["regular", k, "gon"] => {
            let k = parse(k)?;
            if k < 3 {
                return Err(Error::Parse(format!("regular polygon needs k >= 3, got {k}")));
            }
            Ok(regular_polygon(k))
        }
        _ => Err(Error::Parse(format!("unknown builtin body `{name}`"))),
    }
}

fn check_dim(n: usize) -> Result<(), Error> {
    if (crate::MIN_DIM..=crate::MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::DimOutOfRange(n))
    }
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_point(dim: usize, rng: &mut ChaCha8Rng) -> Vector {
    let mut v = Vector::zeros(dim);
    for i in 0..dim {
        v[i] = StandardNormal.sample(rng);
    }
    v
}

pub fn random_direction(dim: usize, rng: &mut ChaCha8Rng) -> Vector {
    loop {
        if let Some(u) = gaussian_point(dim, rng).normalized() {
            return u;
        }
    }
}

/// Hull of `count` standard-normal points; retries until full-dimensional.
pub fn random_polytope(dim: usize, count: usize, rng: &mut ChaCha8Rng) -> Polytope {
    loop {
        let pts: Vec<Vector> = (0..count.max(dim + 1)).map(|_| gaussian_point(dim, rng)).collect();
        if let Ok(p) = Polytope::from_points(&pts) {
            return p;
        }
    }
}

/// Random polygon with a vertex count in `lo..=hi`.
pub fn random_polygon(lo: usize, hi: usize, rng: &mut ChaCha8Rng) -> Polytope {
    let count = rng.random_range(lo..=hi);
    random_polytope(2, count, rng)
}

/// Nested pair `K` inside `K'` (the outer body is the hull of the inner
/// vertices plus extra points).
pub fn random_nested_pair(dim: usize, rng: &mut ChaCha8Rng) -> (Polytope, Polytope) {
    let inner = random_polytope(dim, dim + 3, rng);
    let mut pts = inner.vertices().to_vec();
    for _ in 0..dim + 2 {
        pts.push(gaussian_point(dim, rng).scale(1.5));
    }
    let outer = Polytope::from_points(&pts).expect("outer hull contains a full-dim body");
    (inner, outer)
}

/// Even measure with `pairs` antipodal atom pairs, full-rank support and
/// centroid zero by construction.
pub fn random_even_measure(dim: usize, pairs: usize, rng: &mut ChaCha8Rng) -> SurfaceMeasure {
    loop {
        let mut atoms = Vec::with_capacity(2 * pairs);
        for _ in 0..pairs.max(dim) {
            let u = random_direction(dim, rng);
            let w: f64 = rng.random_range(0.5..2.0);
            atoms.push((u, w));
            atoms.push((-u, w));
        }
        let s = SurfaceMeasure { dim, atoms };
        if crate::measures::validate_measure(&s).feasible {
            return s;
        }
    }
}
