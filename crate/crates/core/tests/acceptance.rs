//! Acceptance suite: one test per criterion, each printing a pass line
//! with the quantities it pinned. Everything except the two statistical
//! sampler checks is exact rational arithmetic.
//!
//! Run with `cargo test -p unispec-core --test acceptance -- --nocapture`
//! to see the per-criterion lines.

use num_bigint::BigInt;
use num_traits::One;

use unispec_core::arcs::{
    mean_arc_over, mean_xr_exact_over, mean_xr_gl_closed, mean_xr_tn_closed, model_dist,
    second_moment_exact_over, second_moment_gl_closed,
};
use unispec_core::growth::{
    borodin_column_probs, coin_limit_law_prob, empirical_distribution, total_variation,
    SamplerSpec,
};
use unispec_core::lines::{
    brute_force_line_orbits, count_fixed_flags, enumerate_triangular, enumerate_unipotent_gl,
    jordan_census, orbit_profile_formula,
};
use unispec_core::matrix::jordan_matrix;
use unispec_core::measures::{
    gl_unipotent_dist, triangular_dist, triangular_prob_chain_form, verify_sum_identity,
};
use unispec_core::partition::{enumerate_partitions, Partition};
use unispec_core::qseries::{hl_principal, pow_of, rational_int, Rational};
use unispec_core::tableau::enumerate_syt;
use unispec_core::verify::{run, Suite, VerifyBounds};
use unispec_core::Model;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().expect("finite display value")
}

#[test]
fn a01_normalization_identity() {
    let mut instances = 0;
    for p in [2u64, 3, 5] {
        for n in 1..=12 {
            let report = verify_sum_identity(n, p).unwrap();
            assert!(report.equal, "n = {n}, p = {p}: {} != {}", report.lhs, report.rhs);
            instances += 1;
        }
    }
    println!("acceptance 01 normalization-sum: PASS ({instances} exact instances)");
}

#[test]
fn a02_gl_census_matches_distribution() {
    for (n, p) in [(2usize, 2u64), (2, 3), (3, 2), (3, 3)] {
        let census = jordan_census(enumerate_unipotent_gl(n, p).unwrap()).unwrap();
        let total: u64 = census.values().sum();
        assert_eq!(BigInt::from(total), pow_of(p, n * (n - 1)), "unipotent count at ({n},{p})");
        let dist = gl_unipotent_dist(n, p).unwrap();
        for lambda in enumerate_partitions(n).unwrap() {
            let counted = census.get(&lambda).copied().unwrap_or(0);
            let expected = dist.prob(&lambda) * rational_int(pow_of(p, n * (n - 1)));
            assert_eq!(
                rational_int(BigInt::from(counted)),
                expected,
                "λ = {lambda} at ({n},{p})"
            );
        }
    }
    println!("acceptance 02 gl-census-vs-distribution: PASS (4 full censuses)");
}

#[test]
fn a03_triangular_census_matches_distribution() {
    for (n, p) in [(2usize, 2u64), (3, 2), (4, 2), (5, 2), (2, 3), (3, 3), (4, 3)] {
        let census = jordan_census(enumerate_triangular(n, p).unwrap()).unwrap();
        let order = pow_of(p, n * (n - 1) / 2);
        let total: u64 = census.values().sum();
        assert_eq!(BigInt::from(total), order);
        let dist = triangular_dist(n, p).unwrap();
        for lambda in enumerate_partitions(n).unwrap() {
            let counted = census.get(&lambda).copied().unwrap_or(0);
            let expected = dist.prob(&lambda) * rational_int(order.clone());
            assert_eq!(
                rational_int(BigInt::from(counted)),
                expected,
                "λ = {lambda} at ({n},{p})"
            );
        }
    }
    println!("acceptance 03 triangular-census-vs-distribution: PASS (7 full censuses)");
}

#[test]
fn a04_triangular_route_consistency() {
    // Tableau-sum route vs chain-count route, n ≤ 8.
    for p in [2u64, 3] {
        for n in 1..=8 {
            let dist = triangular_dist(n, p).unwrap();
            for lambda in enumerate_partitions(n).unwrap() {
                assert_eq!(
                    dist.prob(&lambda),
                    &triangular_prob_chain_form(&lambda, p).unwrap(),
                    "chain route at λ = {lambda}, p = {p}"
                );
            }
        }
    }
    // Flag-fixing route, n ≤ 4.
    for p in [2u64, 3] {
        for n in 1..=4 {
            let dist = triangular_dist(n, p).unwrap();
            for lambda in enumerate_partitions(n).unwrap() {
                let flags = count_fixed_flags(&jordan_matrix(&lambda, p).unwrap()).unwrap();
                let via_flags = rational_int(BigInt::from(p - 1).pow(n as u32))
                    * hl_principal(&lambda, p)
                    * rational_int(BigInt::from(flags))
                    / rational_int(pow_of(p, lambda.n_stat()));
                assert_eq!(dist.prob(&lambda), &via_flags, "flag route at λ = {lambda}, p = {p}");
            }
        }
    }
    println!("acceptance 04 triangular-route-consistency: PASS (tableau, chain, and flag routes)");
}

#[test]
fn a05_orbit_profile_matches_enumeration() {
    let mut instances = 0;
    for p in [2u64, 3] {
        for n in 1..=5 {
            for lambda in enumerate_partitions(n).unwrap() {
                let m = jordan_matrix(&lambda, p).unwrap();
                // Power-of-p orbit sizes are asserted inside the oracle.
                let enumerated = brute_force_line_orbits(&m).unwrap();
                let predicted = orbit_profile_formula(&lambda, p);
                assert_eq!(enumerated, predicted, "λ = {lambda}, p = {p}");
                let total = (pow_of(p, n) - BigInt::one()) / BigInt::from(p - 1);
                assert_eq!(enumerated.total_lines(), total, "λ = {lambda}, p = {p}");
                instances += 1;
            }
        }
    }
    println!("acceptance 05 orbit-profile-vs-enumeration: PASS ({instances} profiles, sizes all powers of p)");
}

#[test]
fn a06_gl_mean_closed_form() {
    let spot = mean_xr_gl_closed(2, 2, 1).unwrap();
    assert_eq!(spot, rat(3, 2), "spot value at n=2, p=2, r=1");
    let mut instances = 0;
    for p in [2u64, 3, 5] {
        for n in 1..=10 {
            let dist = gl_unipotent_dist(n, p).unwrap();
            for r in 1..=n {
                assert_eq!(
                    mean_xr_exact_over(&dist, r),
                    mean_xr_gl_closed(n, p, r).unwrap(),
                    "n = {n}, p = {p}, r = {r}"
                );
                instances += 1;
            }
        }
    }
    println!("acceptance 06 gl-mean-xr-closed-form: PASS ({instances} instances, spot 3/2)");
}

#[test]
fn a07_triangular_mean_closed_form() {
    let spot = mean_xr_tn_closed(2, 2, 1).unwrap();
    assert_eq!(spot, rat(2, 1), "spot value at n=2, p=2, r=1");
    let mut instances = 0;
    for p in [2u64, 3] {
        for n in 1..=9 {
            let dist = triangular_dist(n, p).unwrap();
            for r in 1..=n {
                assert_eq!(
                    mean_xr_exact_over(&dist, r),
                    mean_xr_tn_closed(n, p, r).unwrap(),
                    "n = {n}, p = {p}, r = {r}"
                );
                instances += 1;
            }
        }
    }
    println!("acceptance 07 triangular-mean-xr-closed-form: PASS ({instances} instances, spot 2)");
}

#[test]
fn a08_gl_second_moment() {
    assert_eq!(second_moment_gl_closed(2, 2, 1, 1).unwrap(), rat(3, 1), "spot value");
    let mut instances = 0;
    let mut extended_agree = 0;
    let mut extended_total = 0;
    for p in [2u64, 3] {
        for n in 1..=8 {
            let dist = gl_unipotent_dist(n, p).unwrap();
            for r in 1..=n {
                for s in r..=n {
                    let exact = second_moment_exact_over(&dist, r, s);
                    let closed = second_moment_gl_closed(n, p, r, s).unwrap();
                    if r + s <= n {
                        assert_eq!(exact, closed, "n = {n}, p = {p}, r = {r}, s = {s}");
                        instances += 1;
                    } else {
                        // Outside the stated range: a finding, not a failure.
                        extended_total += 1;
                        if exact == closed {
                            extended_agree += 1;
                        } else {
                            println!(
                                "acceptance 08 finding: extended range n={n} p={p} r={r} s={s}: exact {exact} vs closed {closed}"
                            );
                        }
                    }
                }
            }
        }
    }
    println!(
        "acceptance 08 gl-second-moment: PASS ({instances} in-range instances, spot 3; finding: {extended_agree}/{extended_total} extended-range cases also agree)"
    );
}

#[test]
fn a09_arc_mean_bounds() {
    let thetas = [rat(1, 3), rat(1, 2), rat(7, 10)];
    let mut instances = 0;
    for model in [Model::GlUnipotent, Model::Triangular] {
        for p in [2u64, 3] {
            for n in 1..=8 {
                let dist = model_dist(model, n, p).unwrap();
                for theta in &thetas {
                    let arc = mean_arc_over(&dist, theta).unwrap();
                    assert!(
                        arc.contains_exact(),
                        "{model}, n = {n}, p = {p}, θ = {theta}: {} not in [{}, {}]",
                        arc.exact,
                        arc.lower,
                        arc.upper
                    );
                    instances += 1;
                }
            }
        }
    }
    println!("acceptance 09 arc-mean-bounds: PASS ({instances} containments, exact arithmetic)");
}

#[test]
fn a10_borodin_sampler_total_variation() {
    let trials = 200_000u64;
    let spec = SamplerSpec::Borodin { n: 6, p: 2 };
    let counts = empirical_distribution(&spec, trials, 1).unwrap();
    let dist = triangular_dist(6, 2).unwrap();
    let tv = total_variation(&counts, trials, &dist);
    assert!(tv < rat(1, 100), "TV = {tv}");
    println!(
        "acceptance 10 borodin-sampler-tv: PASS (TV = {:.5} < 0.01 at {trials} samples)",
        to_f64(&tv)
    );
}

#[test]
fn a11_coin_sampler_limit_law() {
    let trials = 500_000u64;
    let spec = SamplerSpec::Coins { p: 2, limit: 64 };
    let counts = empirical_distribution(&spec, trials, 1).unwrap();
    let targets = [
        Partition::empty(),
        Partition::new(vec![1]),
        Partition::new(vec![2]),
        Partition::new(vec![1, 1]),
    ];
    let mut lines = Vec::new();
    for lambda in targets {
        let q = to_f64(&coin_limit_law_prob(&lambda, 2, 64));
        let freq = counts.get(&lambda).copied().unwrap_or(0) as f64 / trials as f64;
        let sigma = (q * (1.0 - q) / trials as f64).sqrt();
        let deviations = (freq - q).abs() / sigma;
        assert!(
            deviations < 4.0,
            "λ = {lambda}: freq {freq:.6} vs law {q:.6} is {deviations:.2}σ"
        );
        lines.push(format!("{lambda}:{deviations:.2}σ"));
    }
    println!(
        "acceptance 11 coin-sampler-limit-law: PASS ({} at {trials} samples)",
        lines.join(", ")
    );
}

#[test]
fn a12_path_product_identity() {
    let p = 2u64;
    let mut instances = 0;
    for n in 1..=7 {
        let dist = triangular_dist(n, p).unwrap();
        for lambda in enumerate_partitions(n).unwrap() {
            let mut total = Rational::new(0.into(), 1.into());
            for tableau in enumerate_syt(&lambda).unwrap() {
                let mut product = Rational::one();
                let mut shape = Partition::empty();
                for j in 1..=tableau.size() {
                    let col = tableau.column_of(j);
                    product *= &borodin_column_probs(&shape, p)[&col];
                    shape = shape.add_cell_in_column(col);
                }
                total += product;
            }
            assert_eq!(&total, dist.prob(&lambda), "λ = {lambda}");
            instances += 1;
        }
    }
    println!("acceptance 12 borodin-path-products: PASS ({instances} exact reconstructions)");
}

#[test]
fn a13_verify_all_suite() {
    let started = std::time::Instant::now();
    let report = run(Suite::All, VerifyBounds::default());
    let elapsed = started.elapsed();
    assert!(
        report.all_passed(),
        "{} of {} checks failed",
        report.failed,
        report.total
    );
    assert!(
        elapsed.as_secs() < 600,
        "suite took {elapsed:?}, over the ten-minute budget"
    );
    println!(
        "acceptance 13 verify-all: PASS ({} checks, {} advisory mismatches, {:.1}s)",
        report.total,
        report.advisory_mismatches,
        elapsed.as_secs_f64()
    );
}
