//! The verification suite: every closed-form identity and every
//! oracle-equivalence in the crate, run at desk-scale bounds, collected
//! into a deterministic machine-readable report.
//!
//! Checks run in parallel but the report is assembled in sorted order
//! (check id, then context), so repeated runs are byte-identical.

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::arcs::{
    mean_arc_over, mean_xr_exact_over, mean_xr_gl_closed, mean_xr_tn_closed, model_dist,
    second_moment_exact_over, second_moment_gl_closed, x_theta_from_orbits,
    x_theta_from_telescope,
};
use crate::lines::{
    brute_force_line_orbits, count_fixed_flags, count_fixed_lines, enumerate_triangular,
    enumerate_unipotent_gl, jordan_census, orbit_profile_formula,
};
use crate::matrix::jordan_matrix;
use crate::measures::{
    chain_count, class_weight, gl_prob_hl_form, gl_unipotent_dist, triangular_dist,
    triangular_prob_chain_form, verify_sum_identity, Model,
};
use crate::partition::{enumerate_partitions, Partition};
use crate::pgroup::AbelianPGroup;
use crate::qseries::{hl_principal, poch_inv, pow_of, rational_int, Rational};
use crate::report::CheckResult;
use crate::Result;

/// Which family of checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Closed-form identities: summation identities, route equivalences,
    /// closed-form means and moments, arc bounds.
    Identities,
    /// Brute-force enumeration oracles: matrix censuses, line orbits,
    /// fixed flags, subgroup lattices.
    Oracle,
    All,
}

impl std::str::FromStr for Suite {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "identities" => Ok(Suite::Identities),
            "oracle" => Ok(Suite::Oracle),
            "all" => Ok(Suite::All),
            other => Err(crate::Error::InvalidParameter(format!(
                "unknown suite {other:?} (expected identities | oracle | all)"
            ))),
        }
    }
}

/// Optional narrowing of the default desk-scale ranges.
#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyBounds {
    /// Caps every family's n range.
    pub n_max: Option<usize>,
    /// Restricts every family to a single p.
    pub p_only: Option<u64>,
}

impl VerifyBounds {
    fn ns(&self, default_max: usize) -> std::ops::RangeInclusive<usize> {
        1..=default_max.min(self.n_max.unwrap_or(default_max))
    }

    fn ps(&self, defaults: &[u64]) -> Vec<u64> {
        match self.p_only {
            Some(p) => defaults.iter().copied().filter(|&d| d == p).collect(),
            None => defaults.to_vec(),
        }
    }
}

/// Full run outcome; serializes to the versioned JSON report.
#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub suite: String,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub advisory_mismatches: usize,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Runs a suite and assembles the deterministic report.
pub fn run(suite: Suite, bounds: VerifyBounds) -> VerifyReport {
    type Family = Box<dyn Fn() -> Vec<CheckResult> + Send + Sync>;
    let mut families: Vec<Family> = Vec::new();

    if matches!(suite, Suite::Identities | Suite::All) {
        families.push(Box::new(move || normalization_family(bounds)));
        families.push(Box::new(move || subgroup_sum_formula_family(bounds)));
        families.push(Box::new(move || subgroup_sum_oracle_family(bounds)));
        families.push(Box::new(move || duality_family(bounds)));
        families.push(Box::new(move || gl_form_family(bounds)));
        families.push(Box::new(move || triangular_route_family(bounds)));
        families.push(Box::new(move || mean_xr_family(bounds)));
        families.push(Box::new(move || second_moment_family(bounds)));
        families.push(Box::new(move || arc_bounds_family(bounds)));
        families.push(Box::new(move || xtheta_route_family(bounds)));
    }
    if matches!(suite, Suite::Oracle | Suite::All) {
        families.push(Box::new(move || gl_census_family(bounds)));
        families.push(Box::new(move || triangular_census_family(bounds)));
        families.push(Box::new(move || orbit_profile_family(bounds)));
        families.push(Box::new(move || fixed_line_family(bounds)));
        families.push(Box::new(move || flag_route_family(bounds)));
        families.push(Box::new(move || chain_lattice_family(bounds)));
    }

    let mut checks: Vec<CheckResult> = families.par_iter().flat_map_iter(|family| family()).collect();
    checks.sort_by_key(|c| c.sort_key());

    let advisory_mismatches = checks.iter().filter(|c| c.advisory && !c.equal).count();
    let failed = checks.iter().filter(|c| !c.advisory && !c.equal).count();
    let passed = checks.iter().filter(|c| c.equal).count();
    VerifyReport {
        schema: 1,
        suite: match suite {
            Suite::Identities => "identities",
            Suite::Oracle => "oracle",
            Suite::All => "all",
        }
        .into(),
        total: checks.len(),
        passed,
        failed,
        advisory_mismatches,
        checks,
    }
}

fn ctx_np(n: usize, p: u64) -> Vec<(&'static str, String)> {
    vec![("n", n.to_string()), ("p", p.to_string())]
}

fn normalization_family(bounds: VerifyBounds) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for p in bounds.ps(&[2, 3, 5]) {
        for n in bounds.ns(12) {
            out.push(verify_sum_identity(n, p).expect("within enumeration bounds"));
        }
    }
    out
}

fn subgroup_sum_formula_family(bounds: VerifyBounds) -> Vec<CheckResult> {
    // Single-part μ = (r): counts from the closed form, any p.
    let mut out = Vec::new();
    for p in bounds.ps(&[2, 3, 5]) {
        for n in bounds.ns(8) {
            for r in 1..=n {
                let mu = Partition::new(vec![r]);
                out.push(
                    crate::measures::verify_likemac(n, &mu, p).expect("formula path has no oracle bound"),
                );
            }
        }
    }
    out
}

fn subgroup_sum_oracle_family(bounds: VerifyBounds) -> Vec<CheckResult> {
    // General μ with counts from the subgroup lattice; one census per λ.
    let mut out = Vec::new();
    for p in bounds.ps(&[2, 3]) {
        for n in bounds.ns(4) {
            let lambdas = enumerate_partitions(n).unwrap();
            let censuses: Vec<_> = lambdas
                .iter()
                .map(|lambda| AbelianPGroup::new(lambda, p).unwrap().type_census())
                .collect();
            for m in 0..=n {
                for mu in enumerate_partitions(m).unwrap() {
                    let mut lhs = Rational::from_integer(0.into());
                    for (lambda, census) in lambdas.iter().zip(&censuses) {
                        let count = census.get(&mu).copied().unwrap_or(0);
                        lhs += rational_int(BigInt::from(count)) * class_weight(lambda, p);
                    }
                    let tail = n - m;
                    let rhs = class_weight(&mu, p)
                        / (rational_int(pow_of(p, tail)) * poch_inv(p, tail));
                    out.push(CheckResult::new(
                        "subgroup-sum-lattice",
                        &[
                            ("n", n.to_string()),
                            ("p", p.to_string()),
                            ("mu", mu.to_string()),
                        ],
                        &lhs,
                        &rhs,
                        lhs == rhs,
                    ));
                }
            }
        }
    }
    out
}

fn duality_family(bounds: VerifyBounds) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for p in bounds.ps(&[2, 3]) {
        for n in bounds.ns(4) {
            for lambda in enumerate_partitions(n).unwrap() {
                let census = AbelianPGroup::new(&lambda, p).unwrap().type_cotype_census();
                for m in 0..=n {
                    for mu in enumerate_partitions(m).unwrap() {
                        for nu in enumerate_partitions(n - m).unwrap() {
                            if mu > nu {
                                continue; // symmetric pair reported once
                            }
                            let forward =
                                census.get(&(nu.clone(), mu.clone())).copied().unwrap_or(0);
                            let swapped =
                                census.get(&(mu.clone(), nu.clone())).copied().unwrap_or(0);
                            out.push(CheckResult::new(
                                "hall-duality",
                                &[
                                    ("lambda", lambda.to_string()),
                                    ("p", p.to_string()),
                                    ("mu", mu.to_string()),
                                    ("nu", nu.to_string()),
                                ],
                                forward,
                                swapped,
                                forward == swapped,
                            ));
                        }
                    }
                }
            }
        }
    }
    out
}

fn gl_form_family(bounds: VerifyBounds) -> Vec<CheckResult> {
    // Class-size form vs Hall-Littlewood form, aggregated per (n, p).
    let mut out = Vec::new();
    for p in bounds.ps(&[2, 3, 5]) {
        for n in bounds.ns(10) {
            let dist = gl_unipotent_dist(n, p).unwrap();
            let lambdas = enumerate_partitions(n).unwrap();
            let agreeing = lambdas
                .iter()
                .filter(|lambda| dist.prob(lambda) == &gl_prob_hl_form(lambda, p))
                .count();
            out.push(CheckResult::new(
                "gl-class-form-vs-hl-form",
                &ctx_np(n, p),
                format!("{agreeing} classes agree"),
                format!("{} classes total", lambdas.len()),
                agreeing == lambdas.len(),
            ));
        }
    }
    out
}

fn triangular_route_family(bounds: VerifyBounds) -> Vec<CheckResult> {
    // Tableau-sum route vs chain-count route, aggregated per (n, p).
    let mut out = Vec::new();
    for p in bounds.ps(&[2, 3]) {
        for n in bounds.ns(8) {
            let dist = triangular_dist(n, p).unwrap();
            let lambdas = enumerate_partitions(n).unwrap();
            let agreeing = lambdas
                .iter()
                .filter(|lambda| {
                    dist.prob(lambda) == &triangular_prob_chain_form(lambda, p).unwrap()
                })
                .count();
            out.push(CheckResult::new(
                "triangular-tableau-vs-chain-route",
                &ctx_np(n, p),
                format!("{agreeing} classes agree"),
                format!("{} classes total", lambdas.len()),
                agreeing == lambdas.len(),
            ));
        }
    }
    out
}

fn mean_xr_family(bounds: VerifyBounds) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for p in bounds.ps(&[2, 3, 5]) {
        for n in bounds.ns(10) {
            let dist = gl_unipotent_dist(n, p).unwrap();
            for r in 1..=n {
                let exact = mean_xr_exact_over(&dist, r);
                let closed = mean_xr_gl_closed(n, p, r).unwrap();
                out.push(CheckResult::new(
                    "gl-mean-xr-closed-form",
                    &[("n", n.to_string()), ("p", p.to_string()), ("r", r.to_string())],
                    &exact,
                    &closed,
                    exact == closed,
                ));
            }
        }
    }
    for p in bounds.ps(&[2, 3]) {
        for n in bounds.ns(9) {
            let dist = triangular_dist(n, p).unwrap();
            for r in 1..=n {
                let exact = mean_xr_exact_over(&dist, r);
                let closed = mean_xr_tn_closed(n, p, r).unwrap();
                out.push(CheckResult::new(
                    "triangular-mean-xr-closed-form",
                    &[("n", n.to_string()), ("p", p.to_string()), ("r", r.to_string())],
                    &exact,
                    &closed,
                    exact == closed,
                ));
            }
        }
    }
    out
}

fn second_moment_family(bounds: VerifyBounds) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for p in bounds.ps(&[2, 3]) {
        for n in bounds.ns(8) {
            let dist = gl_unipotent_dist(n, p).unwrap();
            for r in 1..=n {
                for s in r..=n {
                    let exact = second_moment_exact_over(&dist, r, s);
                    let closed = second_moment_gl_closed(n, p, r, s).unwrap();
                    let ctx = [
                        ("n", n.to_string()),
                        ("p", p.to_string()),
                        ("r", r.to_string()),
                        ("s", s.to_string()),
                    ];
                    if r + s <= n {
                        out.push(CheckResult::new(
                            "gl-second-moment-closed-form",
                            &ctx,
                            &exact,
                            &closed,
                            exact == closed,
                        ));
                    } else {
                        // Outside the derivation's stated range: evaluated
                        // literally and reported as a finding either way.
                        out.push(
                            CheckResult::new(
                                "gl-second-moment-extended-range",
                                &ctx,
                                &exact,
                                &closed,
                                exact == closed,
                            )
                            .advisory(),
                        );
                    }
                }
            }
        }
    }
    out
}

fn thetas() -> Vec<Rational> {
    vec![
        Rational::new(1.into(), 3.into()),
        Rational::new(1.into(), 2.into()),
        Rational::new(7.into(), 10.into()),
    ]
}

fn arc_bounds_family(bounds: VerifyBounds) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for model in [Model::GlUnipotent, Model::Triangular] {
        for p in bounds.ps(&[2, 3]) {
            for n in bounds.ns(8) {
                let dist = model_dist(model, n, p).unwrap();
                for theta in thetas() {
                    let arc = mean_arc_over(&dist, &theta).unwrap();
                    out.push(CheckResult::new(
                        "arc-mean-within-bounds",
                        &[
                            ("model", model.to_string()),
                            ("n", n.to_string()),
                            ("p", p.to_string()),
                            ("theta", theta.to_string()),
                        ],
                        &arc.exact,
                        format!("[{}, {}]", arc.lower, arc.upper),
                        arc.contains_exact(),
                    ));
                }
            }
        }
    }
    out
}

fn xtheta_route_family(bounds: VerifyBounds) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for p in bounds.ps(&[2, 3]) {
        for n in bounds.ns(8) {
            let lambdas = enumerate_partitions(n).unwrap();
            for theta in thetas() {
                let agreeing = lambdas
                    .iter()
                    .filter(|lambda| {
                        x_theta_from_telescope(lambda, p, &theta).unwrap()
                            == x_theta_from_orbits(lambda, p, &theta).unwrap()
                    })
                    .count();
                out.push(CheckResult::new(
                    "xtheta-telescope-vs-orbit-route",
                    &[
                        ("n", n.to_string()),
                        ("p", p.to_string()),
                        ("theta", theta.to_string()),
                    ],
                    format!("{agreeing} classes agree"),
                    format!("{} classes total", lambdas.len()),
                    agreeing == lambdas.len(),
                ));
            }
        }
    }
    out
}

fn gl_census_family(bounds: VerifyBounds) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for (n, p) in [(2usize, 2u64), (2, 3), (3, 2), (3, 3)] {
        if n > bounds.n_max.unwrap_or(n) || bounds.p_only.is_some_and(|only| only != p) {
            continue;
        }
        let census = jordan_census(enumerate_unipotent_gl(n, p).unwrap()).unwrap();
        let total: u64 = census.values().sum();
        out.push(CheckResult::new(
            "gl-census-total-count",
            &ctx_np(n, p),
            total,
            pow_of(p, n * (n - 1)),
            BigInt::from(total) == pow_of(p, n * (n - 1)),
        ));
        let dist = gl_unipotent_dist(n, p).unwrap();
        for lambda in enumerate_partitions(n).unwrap() {
            let counted = census.get(&lambda).copied().unwrap_or(0);
            let expected = dist.prob(&lambda) * rational_int(pow_of(p, n * (n - 1)));
            out.push(CheckResult::new(
                "gl-census-vs-distribution",
                &[
                    ("n", n.to_string()),
                    ("p", p.to_string()),
                    ("lambda", lambda.to_string()),
                ],
                counted,
                &expected,
                rational_int(BigInt::from(counted)) == expected,
            ));
        }
    }
    out
}

fn triangular_census_family(bounds: VerifyBounds) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for (n, p) in [
        (2usize, 2u64),
        (3, 2),
        (4, 2),
        (5, 2),
        (2, 3),
        (3, 3),
        (4, 3),
    ] {
        if n > bounds.n_max.unwrap_or(n) || bounds.p_only.is_some_and(|only| only != p) {
            continue;
        }
        let census = jordan_census(enumerate_triangular(n, p).unwrap()).unwrap();
        let order = pow_of(p, n * (n - 1) / 2);
        let dist = triangular_dist(n, p).unwrap();
        for lambda in enumerate_partitions(n).unwrap() {
            let counted = census.get(&lambda).copied().unwrap_or(0);
            let expected = dist.prob(&lambda) * rational_int(order.clone());
            out.push(CheckResult::new(
                "triangular-census-vs-distribution",
                &[
                    ("n", n.to_string()),
                    ("p", p.to_string()),
                    ("lambda", lambda.to_string()),
                ],
                counted,
                &expected,
                rational_int(BigInt::from(counted)) == expected,
            ));
        }
    }
    out
}

fn orbit_profile_family(bounds: VerifyBounds) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for p in bounds.ps(&[2, 3]) {
        for n in bounds.ns(5) {
            for lambda in enumerate_partitions(n).unwrap() {
                let enumerated =
                    brute_force_line_orbits(&jordan_matrix(&lambda, p).unwrap()).unwrap();
                let predicted = orbit_profile_formula(&lambda, p);
                let render = |profile: &crate::lines::LineOrbitProfile| {
                    profile
                        .lines()
                        .iter()
                        .map(|(r, count)| format!("r={r}:{count} lines"))
                        .collect::<Vec<_>>()
                        .join("; ")
                };
                out.push(CheckResult::new(
                    "orbit-profile-formula-vs-enumeration",
                    &[("lambda", lambda.to_string()), ("p", p.to_string())],
                    render(&enumerated),
                    render(&predicted),
                    enumerated == predicted,
                ));
            }
        }
    }
    out
}

fn fixed_line_family(bounds: VerifyBounds) -> Vec<CheckResult> {
    // lines_r = fix(M^{p^r}) − fix(M^{p^{r−1}}) for r ≥ 1.
    let mut out = Vec::new();
    for p in bounds.ps(&[2, 3]) {
        for n in bounds.ns(4) {
            for lambda in enumerate_partitions(n).unwrap() {
                let m = jordan_matrix(&lambda, p).unwrap();
                let profile = orbit_profile_formula(&lambda, p);
                let max_r = profile.lines().keys().max().copied().unwrap_or(0);
                for r in 1..=max_r {
                    let difference = count_fixed_lines(&m.pow(p.pow(r))).unwrap()
                        - count_fixed_lines(&m.pow(p.pow(r - 1))).unwrap();
                    let formula = profile.lines_at(r);
                    out.push(CheckResult::new(
                        "fixed-line-telescope",
                        &[
                            ("lambda", lambda.to_string()),
                            ("p", p.to_string()),
                            ("r", r.to_string()),
                        ],
                        &formula,
                        &difference,
                        formula == difference,
                    ));
                }
            }
        }
    }
    out
}

fn flag_route_family(bounds: VerifyBounds) -> Vec<CheckResult> {
    // Triangular probability via fixed complete flags:
    // (p−1)^n P_λ(1/p,…;1/p) fix_λ(p) / p^{n(λ)}.
    let mut out = Vec::new();
    for p in bounds.ps(&[2, 3]) {
        for n in bounds.ns(4) {
            let dist = triangular_dist(n, p).unwrap();
            for lambda in enumerate_partitions(n).unwrap() {
                let flags = count_fixed_flags(&jordan_matrix(&lambda, p).unwrap()).unwrap();
                let via_flags = rational_int(BigInt::from(p - 1).pow(n as u32))
                    * hl_principal(&lambda, p)
                    * rational_int(BigInt::from(flags))
                    / rational_int(pow_of(p, lambda.n_stat()));
                out.push(CheckResult::new(
                    "triangular-flag-route",
                    &[("lambda", lambda.to_string()), ("p", p.to_string())],
                    dist.prob(&lambda),
                    &via_flags,
                    dist.prob(&lambda) == &via_flags,
                ));
            }
        }
    }
    out
}

fn chain_lattice_family(bounds: VerifyBounds) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for p in bounds.ps(&[2, 3]) {
        for n in bounds.ns(4) {
            for lambda in enumerate_partitions(n).unwrap() {
                let closed = chain_count(&lambda, p).unwrap();
                let lattice = AbelianPGroup::new(&lambda, p).unwrap().maximal_chain_count();
                out.push(CheckResult::new(
                    "chain-count-vs-lattice",
                    &[("lambda", lambda.to_string()), ("p", p.to_string())],
                    &closed,
                    lattice,
                    closed == BigInt::from(lattice),
                ));
            }
        }
    }
    out
}

/// True when every probability in a distribution is nonnegative and the
/// total is exactly one; used by sanity tests.
pub fn distribution_is_normalized(model: Model, n: usize, p: u64) -> Result<bool> {
    let dist = model_dist(model, n, p)?;
    let total: Rational = dist.iter_revlex().map(|(_, prob)| prob.clone()).sum();
    Ok(total.is_one())
}
