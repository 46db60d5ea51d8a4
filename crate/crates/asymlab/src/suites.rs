//! Batch verification suites: each runs a fixed list of identity and
//! inequality checks and returns a `Report`.

use rand::RngCore;
use rayon::prelude::*;

use crate::bodies;
use crate::geometry::{hausdorff_2d, Polytope};
use crate::kernel::symmetric_kernel;
use crate::measures::minkowski_inequality_gap;
use crate::projection::{projection_body, schneider_p, sphere_directions, zonotope_to_polytope};
use crate::report::{Check, Provenance, Report};
use crate::wulff::blaschke_body;
use crate::Error;

pub const SUITES: [&str; 5] = ["planar", "simplex", "inequalities", "asymptotics", "problem3"];

/// Runs one named suite. The seed fixes every random corpus inside.
pub fn run_verify_suite(suite: &str, seed: u64) -> Result<Report, Error> {
    match suite {
        "planar" => Ok(planar(seed)),
        "simplex" => Ok(simplex_suite(seed)),
        "inequalities" => Ok(inequalities(seed)),
        "asymptotics" => Ok(asymptotics(seed)),
        "problem3" => Ok(problem3(seed)),
        other => Err(Error::UnknownSuite(other.into())),
    }
}

fn planar(seed: u64) -> Report {
    let mut report = Report::new("planar", seed);

    let t = bodies::triangle();
    let kr = symmetric_kernel(&t).expect("kernel of the triangle");
    report.push(Check::close(
        "planar/triangle-m",
        "asymmetry ratio of a triangle (planar minimum, attained only by triangles)",
        2.0 / 3.0,
        kr.m_value,
        1e-6,
        Provenance::Oracle,
    ));

    // Blaschke body vs half difference body on seeded polygons.
    let mut rng = bodies::seeded_rng(seed);
    let polys: Vec<Polytope> = (0..12).map(|_| bodies::random_polygon(3, 9, &mut rng)).collect();
    let worst = polys
        .par_iter()
        .map(|k| {
            let nabla = blaschke_body(k).expect("planar Blaschke body");
            let half_diff = k.minkowski_sum(&k.negate()).expect("difference body").scale(0.5);
            let centered = half_diff.translate(&-half_diff.centroid());
            hausdorff_2d(&nabla, &centered) / k.diameter()
        })
        .reduce(|| 0.0, f64::max);
    report.push(Check::upper_bound(
        "planar/blaschke-half-difference",
        "planar Blaschke body equals the recentred half difference body (12 seeded polygons, relative Hausdorff)",
        0.0,
        worst,
        1e-6,
        Provenance::Literature,
    ));

    // The kernel of the recentred triangle is 2/3 times its Blaschke body.
    let kc = t.translate(&kr.center.scale(0.5));
    let cap = kr.kernel.clone(); // == K_c ∩ -K_c, origin-symmetric
    let nabla = blaschke_body(&kc).expect("Blaschke body of the triangle");
    let m2 = 2.0 / 3.0;
    let worst_support = sphere_directions(2, 256, seed)
        .iter()
        .map(|u| {
            let a = cap.support(u).unwrap();
            let b = m2 * nabla.support(u).unwrap();
            (a - b).abs()
        })
        .fold(0.0, f64::max);
    report.push(Check::upper_bound(
        "planar/kernel-vs-scaled-blaschke",
        "K ∩ -K of the recentred triangle matches (2/3) ∇K on 256 directions",
        0.0,
        worst_support,
        1e-6,
        Provenance::Oracle,
    ));

    report
}

fn simplex_suite(seed: u64) -> Report {
    let mut report = Report::new("simplex", seed);
    let expected = [(2usize, 6.0), (3, 18.0), (4, 160.0 / 3.0)];
    for (n, want) in expected {
        let p = schneider_p(&bodies::simplex(n)).expect("projection invariant");
        report.push(Check::close(
            &format!("simplex/p-simplex-{n}"),
            &format!("P of the {n}-simplex equals n^n (n+1) / n!"),
            want,
            p,
            1e-6 * want,
            Provenance::Literature,
        ));
    }
    for n in 2..=4usize {
        let p = schneider_p(&bodies::cube(n)).expect("projection invariant");
        report.push(Check::close(
            &format!("simplex/p-cube-{n}"),
            &format!("P of the {n}-cube equals 2^n"),
            2f64.powi(n as i32),
            p,
            1e-9,
            Provenance::Literature,
        ));
    }
    report
}

fn inequalities(seed: u64) -> Report {
    let mut report = Report::new("inequalities", seed);

    // Corpus: recentred random bodies in dimensions 2 and 3.
    let mut rng = bodies::seeded_rng(seed);
    let mut specs: Vec<(usize, u64)> = Vec::new();
    for dim in [2usize, 3] {
        for _ in 0..50 {
            specs.push((dim, rng.next_u64()));
        }
    }
    let results: Vec<(usize, f64, f64)> = specs
        .par_iter()
        .map(|&(dim, s)| {
            let mut r = bodies::seeded_rng(s);
            let k = bodies::random_polytope(dim, dim + 4, &mut r);
            let kr = symmetric_kernel(&k).expect("kernel");
            let kc = k.translate(&kr.center.scale(0.5));
            let nabla = blaschke_body(&kc).expect("Blaschke body");
            let n = dim as f64;
            let lhs = kr.q_value.powf(1.0 / n) * nabla.volume().powf((n - 1.0) / n);
            (dim, lhs / k.volume() - 1.0, kr.m_value * 2f64.powi(dim as i32) - 1.0)
        })
        .collect();

    let worst_lemma5 = results.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    report.push(Check::upper_bound(
        "inequalities/kernel-blaschke-volume",
        "|K ∩ -K|^{1/n} |∇K|^{(n-1)/n} <= |K| on 100 recentred random bodies (n = 2, 3)",
        0.0,
        worst_lemma5,
        1e-9,
        Provenance::Literature,
    ));

    let worst_stein = results.iter().map(|r| -r.2).fold(f64::NEG_INFINITY, f64::max);
    report.push(Check::upper_bound(
        "inequalities/stein-bound",
        "m(K) > 2^{-n} on the same corpus (reported: 2^{-n} - m, must stay negative)",
        0.0,
        worst_stein,
        0.0,
        Provenance::Literature,
    ));

    // Minkowski's inequality on random pairs.
    let mut pair_seeds: Vec<(usize, u64)> = Vec::new();
    for dim in [2usize, 3] {
        for _ in 0..50 {
            pair_seeds.push((dim, rng.next_u64()));
        }
    }
    let worst_gap = pair_seeds
        .par_iter()
        .map(|&(dim, s)| {
            let mut r = bodies::seeded_rng(s);
            let l = bodies::random_polytope(dim, dim + 4, &mut r);
            let k = bodies::random_polytope(dim, dim + 4, &mut r);
            -minkowski_inequality_gap(&l, &k).expect("gap") / l.volume()
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    report.push(Check::upper_bound(
        "inequalities/mixed-volume-gap",
        "V_1(L,K) >= |K|^{1/n} |L|^{(n-1)/n} on 100 random pairs (reported: -gap/|L|)",
        0.0,
        worst_gap,
        1e-9,
        Provenance::Literature,
    ));

    report
}

fn asymptotics(seed: u64) -> Report {
    let mut report = Report::new("asymptotics", seed);

    let ratios: Vec<(usize, f64)> = (2..=5usize)
        .map(|n| {
            let s = bodies::simplex(n);
            let nabla = blaschke_body(&s).expect("Blaschke body of the simplex");
            (n, nabla.volume() / s.volume())
        })
        .collect();

    report.push(Check::close(
        "asymptotics/planar-simplex-ratio",
        "|∇K|/|K| = 3/2 for the triangle (half difference body, equality case)",
        1.5,
        ratios[0].1,
        1e-7,
        Provenance::Oracle,
    ));

    // r_n = ratio / (sqrt(3/2) e (e/2)^n); |r_n - 1| must decrease in n.
    let e = std::f64::consts::E;
    let r: Vec<f64> = ratios
        .iter()
        .map(|&(n, ratio)| ratio / ((1.5f64).sqrt() * e * (e / 2.0).powi(n as i32)))
        .collect();
    let devs: Vec<f64> = r.iter().map(|x| (x - 1.0).abs()).collect();
    let worst_step = devs.windows(2).map(|w| w[1] / w[0]).fold(f64::NEG_INFINITY, f64::max);
    let desc = format!(
        "|r_n - 1| strictly decreasing for n = 2..5 (r = [{}]; reported: max adjacent ratio)",
        r.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(", ")
    );
    report.push(Check {
        id: "asymptotics/simplex-ratio-trend".into(),
        description: desc,
        expected: 1.0,
        observed: worst_step,
        tolerance: 0.0,
        pass: worst_step < 1.0,
        provenance: Provenance::Literature,
    });

    report
}

fn problem3(seed: u64) -> Report {
    let mut report = Report::new("problem3", seed);

    let cases: Vec<(String, Polytope, bool)> = vec![
        ("regular-5-gon".into(), bodies::regular_polygon(5), true),
        ("regular-7-gon".into(), bodies::regular_polygon(7), true),
        ("simplex-2".into(), bodies::simplex(2), true),
        ("simplex-3".into(), bodies::simplex(3), true),
        ("irregular-quadrilateral".into(), irregular_quadrilateral(seed), false),
    ];

    for (name, k, expect) in cases {
        let verdict = projection_homothety(&k).expect("homothety test");
        report.push(Check {
            id: format!("problem3/{name}"),
            description: format!(
                "projection bodies of K and K ∩ -K homothetic for {name} (recentred so Q(K) = 0)"
            ),
            expected: if expect { 1.0 } else { 0.0 },
            observed: if verdict { 1.0 } else { 0.0 },
            tolerance: 0.0,
            pass: verdict == expect,
            provenance: Provenance::Literature,
        });
    }
    report
}

/// Whether Pi(K) and Pi(K ∩ -K) are homothetic once K is translated so its
/// pseudo-center sits at the origin.
pub fn projection_homothety(k: &Polytope) -> Result<bool, Error> {
    let kr = symmetric_kernel(k)?;
    let kc = k.translate(&kr.center.scale(0.5));
    let pk = zonotope_to_polytope(&projection_body(&kc))?;
    let pcap = zonotope_to_polytope(&projection_body(&kr.kernel))?;
    let (ok, _, _) = crate::projection::homothety_check(&pk, &pcap, 1e-5);
    Ok(ok)
}

fn irregular_quadrilateral(seed: u64) -> Polytope {
    let mut rng = bodies::seeded_rng(seed.wrapping_add(40));
    loop {
        let q = bodies::random_polytope(2, 4, &mut rng);
        if q.vertices().len() == 4 {
            return q;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_errors() {
        assert!(matches!(run_verify_suite("nope", 0), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn simplex_suite_passes() {
        let r = run_verify_suite("simplex", 0).unwrap();
        assert!(r.all_pass(), "{}", r.to_json());
        assert_eq!(r.checks.len(), 6);
    }

    #[test]
    fn reports_are_bit_identical_across_runs() {
        let a = run_verify_suite("simplex", 3).unwrap().to_json();
        let b = run_verify_suite("simplex", 3).unwrap().to_json();
        assert_eq!(a, b);
    }
}
