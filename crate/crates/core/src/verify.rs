//! Check suites behind `dtransform verify` and `dtransform copula-check`.
//!
//! The analytic suite evaluates every exact identity on a grid of levels and
//! points derived from the distribution's own knots. The stochastic suite
//! samples with fixed seeds and compares against the exact answers.

use serde::Serialize;

use crate::cdf::{Cdf, LevelSet};
use crate::copula::{
    copula_at_flat_alpha, copula_eval, dt_copula, flat_level_vectors, knot_grid,
    sklar_identity_check, Dependence, JointSample,
};
use crate::error::Result;
use crate::measure::{measure_interval, measure_set};
use crate::realset::{Interval, RealSet};
use crate::stochastic::{
    distributional_transform, image_law_atoms, image_law_cdf, inversion_check, ks_threshold,
    ks_uniformity, quantile_cdf, sample_inverse, transform_cdf_exact, transform_cdf_monte_carlo,
    transform_pair_correlation, SeededStream, INVERSION_TOLERANCE,
};
use crate::transform::{
    invert_transform, null_set, phi, phi_inverse, quantile_range_of_point, transform,
    TransformParam,
};

/// Arithmetic tolerance for the exact identities.
pub const EXACT_TOLERANCE: f64 = 1e-12;
/// Tolerance for sampled copula comparisons.
pub const COPULA_TOLERANCE: f64 = 0.01;
/// Monte Carlo estimates must fall within this many binomial standard errors.
pub const MC_SIGMAS: f64 = 4.0;

const LAMBDAS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

/// One check: passes when `measured <= threshold`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub subject: String,
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub threshold: f64,
}

impl Check {
    pub fn at_most(subject: &str, name: &str, measured: f64, threshold: f64) -> Self {
        Self {
            subject: subject.into(),
            name: name.into(),
            passed: measured <= threshold,
            measured,
            threshold,
        }
    }

    fn count(subject: &str, name: &str, violations: usize) -> Self {
        Self::at_most(subject, name, violations as f64, 0.0)
    }
}

/// A measured quantity reported without a pass/fail verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Note {
    pub subject: String,
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Everything a run reports. Identical inputs, seed and `n` give an
/// identical report; timing is kept out of it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub seed: u64,
    pub n: usize,
    pub checks: Vec<Check>,
    pub notes: Vec<Note>,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data always serializes")
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "command: {}\nseed: {}  n: {}\n",
            self.command, self.seed, self.n
        );
        for i in &self.inputs {
            out += &format!("input: {}  sha256 {}\n", i.path, i.sha256);
        }
        let width = self
            .checks
            .iter()
            .map(|c| c.subject.len() + c.name.len() + 2)
            .max()
            .unwrap_or(0);
        for c in &self.checks {
            let label = format!("{}: {}", c.subject, c.name);
            let status = if c.passed { "pass" } else { "FAIL" };
            out += &format!(
                "{status}  {label:<width$}  {:<10.3e} <= {:.0e}\n",
                c.measured, c.threshold
            );
        }
        for n in &self.notes {
            out += &format!("note  {}: {} = {}\n", n.subject, n.name, n.value);
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        out += &format!("{} checks, {} failed\n", self.checks.len(), failed);
        out
    }
}

/// Levels to probe: a 99-point grid, every plateau level, points inside each
/// jump interval, and every value and left limit of `F` inside (0,1).
pub fn alpha_grid(f: &Cdf) -> Vec<f64> {
    let mut alphas: Vec<f64> = (1..100).map(|j| j as f64 / 100.0).collect();
    alphas.extend(f.plateau_levels());
    for &x in f.jump_points() {
        let (lo, hi) = (f.eval_left(x), f.eval(x));
        alphas.extend([0.25, 0.5, 0.75].map(|t| lo + t * (hi - lo)));
    }
    alphas.extend(f.body().left_limits());
    alphas.extend(f.body().knot_values());
    finish(alphas, |a| a > 0.0 && a < 1.0)
}

/// Points to probe: every knot, nearby points on both sides, midpoints
/// between knots and points outside the support.
pub fn x_grid(f: &Cdf) -> Vec<f64> {
    let knots = f.knots();
    let mut xs = Vec::new();
    for &x in knots {
        xs.extend([x, x - 1e-6, x + 1e-6, x - 0.01, x + 0.01]);
    }
    xs.extend(knots.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    if let (Some(first), Some(last)) = (knots.first(), knots.last()) {
        xs.extend([first - 1.0, last + 1.0]);
    }
    finish(xs, f64::is_finite)
}

fn finish(mut v: Vec<f64>, keep: impl Fn(f64) -> bool) -> Vec<f64> {
    v.retain(|&a| keep(a));
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn same_point(f: &Cdf, x: f64, y: f64) -> bool {
    if f.knots().contains(&x) {
        x == y
    } else {
        (x - y).abs() <= INVERSION_TOLERANCE
    }
}

/// The exact identities for one distribution.
pub fn analytic_checks(subject: &str, f: &Cdf) -> Result<Vec<Check>> {
    let alphas = alpha_grid(f);
    let xs = x_grid(f);
    let mut checks = Vec::new();

    let df = f.body().df_condition_report();
    checks.push(Check::count(
        subject,
        "distribution function conditions agree",
        usize::from(!(df.all_agree() && df.cond_limits)),
    ));
    let total = measure_interval(f, &Interval::everything())?.value();
    checks.push(Check::at_most(
        subject,
        "total mass is 1",
        (total - 1.0).abs(),
        0.0,
    ));

    let mut sandwich = 0;
    let mut strict = 0;
    let mut case_split = 0;
    let mut sets = 0;
    for &a in &alphas {
        let q = f.quantile_pair(a)?;
        if !(f.eval_left(q.xi) <= a
            && a <= f.eval(q.xi)
            && f.eval_left(q.eta) <= a
            && a <= f.eval(q.eta))
        {
            sandwich += 1;
        }
        if [1e-6, 1e-2].iter().any(|d| f.eval(q.xi - d) >= a) || q.xi > q.eta {
            strict += 1;
        }
        let shape = f.level_set_shape(a)?;
        let nonempty = shape != LevelSet::Empty;
        let thin = matches!(shape, LevelSet::Empty | LevelSet::Singleton(_));
        let mut ok = nonempty == (f.eval(q.xi) == a) && thin == (q.xi == q.eta);
        if q.xi < q.eta {
            ok &= (f.eval(q.eta) == a) == (f.jump(q.eta) == 0.0);
        }
        let level = shape.to_set();
        ok &= xs.iter().all(|&x| level.contains(x) == (f.eval(x) == a));
        if !ok {
            case_split += 1;
        }
        if f.level_at_least(a)? != RealSet::from(Interval::at_least(q.xi))
            || f.level_below(a)? != RealSet::from(Interval::below(q.xi))
            || xs
                .iter()
                .any(|&x| f.level_at_least(a).unwrap().contains(x) != (f.eval(x) >= a))
        {
            sets += 1;
        }
    }
    checks.push(Check::count(subject, "quantile sandwiches", sandwich));
    checks.push(Check::count(
        subject,
        "strict left-quantile inequality",
        strict,
    ));
    checks.push(Check::count(subject, "level-set case split", case_split));
    checks.push(Check::count(
        subject,
        "superlevel and strict sublevel sets",
        sets,
    ));

    let mut transform_bad = 0;
    let mut range_bad = 0;
    for &x in &xs {
        let (lo, hi) = (f.eval_left(x), f.eval(x));
        let values: Vec<f64> = [0.0, 0.25, 0.5, 0.75, 1.0]
            .iter()
            .map(|&l| transform(f, x, TransformParam::new(l).unwrap()))
            .collect();
        let in_sandwich = values.iter().all(|&u| lo <= u && u <= hi);
        let ends = values[0] == lo && values[4] == hi;
        let flat = hi > lo || values.iter().all(|&u| u == values[0]);
        if !(in_sandwich && ends && flat) {
            transform_bad += 1;
        }
        let range = quantile_range_of_point(f, x);
        let outer = RealSet::from(Interval::closed(lo, hi));
        let mut ok = range.difference(&outer).is_empty();
        if lo < hi {
            ok &= range.contains(0.5 * (lo + hi));
        }
        for a in [lo, hi, 0.5 * (lo + hi)] {
            if a > 0.0 && a < 1.0 {
                ok &= range.contains(a) == same_point(f, x, f.left_quantile(a)?);
            }
        }
        if !ok {
            range_bad += 1;
        }
    }
    checks.push(Check::count(
        subject,
        "transform sandwich and endpoints",
        transform_bad,
    ));
    checks.push(Check::count(
        subject,
        "quantile range of a point",
        range_bad,
    ));

    let mut a_union = 0;
    let mut a_plus_mass: f64 = 0.0;
    for &l in &LAMBDAS {
        for &a in &alphas {
            let d = f.a_decomposition(l, a)?;
            a_plus_mass = a_plus_mass.max(measure_set(f, &d.plus)?.value());
            let union = d.union();
            let param = TransformParam::new(l)?;
            if xs
                .iter()
                .chain([d.minus.components()[0].upper().value().unwrap()].iter())
                .any(|&x| union.contains(x) != (transform(f, x, param) <= a))
            {
                a_union += 1;
            }
        }
    }
    checks.push(Check::count(subject, "A-decomposition union", a_union));
    checks.push(Check::at_most(
        subject,
        "measure of A+ pieces",
        a_plus_mass,
        0.0,
    ));

    let mut level_mass: f64 = 0.0;
    for &a in f.plateau_levels() {
        let info = f.quantile_pair(a)?;
        let m = measure_set(f, &f.level_set(a)?)?.value();
        let expected = a - f.eval_left(info.xi);
        level_mass = level_mass
            .max((m - expected).abs())
            .max((m - f.jump(info.xi)).abs());
        level_mass = level_mass.max((crate::measure::measure_level_set(f, a)?.value() - m).abs());
    }
    checks.push(Check::at_most(
        subject,
        "measure of flat level sets",
        level_mass,
        EXACT_TOLERANCE,
    ));

    let mut plateau_mass: f64 = 0.0;
    let mut inversion_bad = 0;
    let mut upper_bound_bad = 0;
    let mut null_mass: f64 = 0.0;
    for &l in &LAMBDAS {
        let report = null_set(f, l)?;
        plateau_mass = plateau_mass.max(report.plateau_measure);
        for &x in &xs {
            if let Ok(y) = invert_transform(f, x, l) {
                if y > x {
                    upper_bound_bad += 1;
                }
                if !report.contains(x) && !same_point(f, x, y) {
                    inversion_bad += 1;
                }
            }
        }
        if report.hypothesis_holds() {
            null_mass = null_mass.max(report.total_measure);
        }
    }
    checks.push(Check::at_most(
        subject,
        "measure of plateau pieces of the null set",
        plateau_mass,
        0.0,
    ));
    checks.push(Check::at_most(
        subject,
        "null set measure when 0 < F_λ < 1 a.e.",
        null_mass,
        0.0,
    ));
    checks.push(Check::count(
        subject,
        "inverse of transform never exceeds x",
        upper_bound_bad,
    ));
    checks.push(Check::count(
        subject,
        "inverse of transform off the null set",
        inversion_bad,
    ));

    let mut law_error: f64 = 0.0;
    for &a in &alphas {
        law_error = law_error.max((transform_cdf_exact(f, f, a)?.total - a).abs());
    }
    checks.push(Check::at_most(
        subject,
        "exact law of the transform is uniform",
        law_error,
        EXACT_TOLERANCE,
    ));

    let mut flat_law: f64 = 0.0;
    for &a in f.plateau_levels() {
        flat_law = flat_law
            .max((image_law_cdf(f, a)? - a).abs())
            .max((quantile_cdf(f, a)? - a).abs());
    }
    checks.push(Check::at_most(
        subject,
        "P(F(X) <= α) = α at flat levels",
        flat_law,
        EXACT_TOLERANCE,
    ));

    let m = f.jump_points().len();
    let mut round_trip: f64 = 0.0;
    let mut attained = 0;
    for t in [0.001, 0.1, 0.37, 0.5, 0.9, 0.999] {
        let lambdas: Vec<f64> = (0..m)
            .map(|n| (t + n as f64 * 0.293).fract().max(1e-3))
            .collect();
        let alphas = phi(f, &lambdas)?;
        attained += alphas.iter().filter(|&&a| f.attains(a)).count();
        for (l, back) in lambdas.iter().zip(phi_inverse(f, &alphas)?) {
            round_trip = round_trip.max((l - back).abs());
        }
    }
    checks.push(Check::at_most(
        subject,
        "jump bijection round trip",
        round_trip,
        EXACT_TOLERANCE,
    ));
    checks.push(Check::count(
        subject,
        "jump bijection avoids attained values",
        attained,
    ));
    Ok(checks)
}

/// Sampled checks for one distribution: uniformity of the transform,
/// almost-sure inversion, and Monte Carlo against the exact law.
pub fn stochastic_checks(
    subject: &str,
    f: &Cdf,
    seed: u64,
    n: usize,
) -> Result<(Vec<Check>, Vec<Note>)> {
    let stream = SeededStream::new(seed, 0);
    let xs = sample_inverse(f, stream, n);
    let us = distributional_transform(f, &xs, stream.companion())?;
    let mut checks = vec![Check::at_most(
        subject,
        "KS distance of F_V(X) to uniform",
        ks_uniformity(&us)?,
        ks_threshold(n),
    )];

    let inv = inversion_check(f, SeededStream::new(seed, 1), n);
    checks.push(Check::count(
        subject,
        "sampled inversion failures",
        inv.failures,
    ));
    if let Some(s) = inv.shortcut_failures {
        checks.push(Check::count(
            subject,
            "sampled inversion failures without randomization",
            s,
        ));
    }

    let mut levels = vec![0.1, 0.25, 0.5, 0.75, 0.9];
    levels.extend(f.plateau_levels());
    let mut worst: f64 = 0.0;
    for (k, &a) in levels.iter().enumerate() {
        let exact = transform_cdf_exact(f, f, a)?.total;
        let mc = transform_cdf_monte_carlo(f, f, a, SeededStream::new(seed, 2 + k as u64), n)?;
        let se = (exact * (1.0 - exact) / n as f64).sqrt();
        let z = if se > 0.0 {
            (mc - exact).abs() / se
        } else if mc == exact {
            0.0
        } else {
            f64::INFINITY
        };
        worst = worst.max(z);
    }
    checks.push(Check::at_most(
        subject,
        "Monte Carlo vs exact law (standard errors)",
        worst,
        MC_SIGMAS,
    ));

    let mut notes = vec![Note {
        subject: subject.into(),
        name: "correlation of F_V(X) and F(X-)".into(),
        value: transform_pair_correlation(f, SeededStream::new(seed, 100), n)?,
    }];
    if let Some(&(at, mass)) = image_law_atoms(f).iter().max_by(|a, b| a.1.total_cmp(&b.1)) {
        notes.push(Note {
            subject: subject.into(),
            name: format!("largest atom of the law of F(X), at {at}"),
            value: mass,
        });
    }
    Ok((checks, notes))
}

/// Generates a joint sample, extracts its copula through the distributional
/// transform and compares it with the sample and with the generating copula.
pub fn copula_checks(
    subject: &str,
    marginals: &[Cdf],
    dependence: Dependence,
    seed: u64,
    n: usize,
    grid: Option<&[f64]>,
) -> Result<Vec<Check>> {
    let analytic = dependence.copula(marginals.len())?;
    let sample = JointSample::generate(marginals, dependence, seed, n)?;
    let c_hat = dt_copula(&sample, SeededStream::new(seed, u64::MAX))?;
    let crate::copula::CopulaSpec::Empirical(e) = &c_hat else {
        unreachable!("dt_copula is empirical")
    };

    let mut checks = Vec::new();
    for j in 0..marginals.len() {
        let ks = ks_uniformity(&e.column(j))?;
        checks.push(Check::at_most(
            subject,
            &format!("KS distance of copula margin {j}"),
            ks,
            ks_threshold(n),
        ));
    }

    let points = match grid {
        Some(axis) => {
            let axes = vec![axis.to_vec(); marginals.len()];
            axes.iter().fold(vec![Vec::new()], |acc, axis| {
                acc.iter()
                    .flat_map(|p| {
                        axis.iter().map(move |&x| {
                            let mut v: Vec<f64> = p.clone();
                            v.push(x);
                            v
                        })
                    })
                    .collect()
            })
        }
        None => knot_grid(marginals),
    };
    checks.push(Check::at_most(
        subject,
        "Sklar identity deviation",
        sklar_identity_check(&sample, &c_hat, &points)?,
        COPULA_TOLERANCE,
    ));

    let mut vs_analytic: f64 = 0.0;
    for x in &points {
        let gamma: Vec<f64> = marginals.iter().zip(x).map(|(f, &xj)| f.eval(xj)).collect();
        vs_analytic =
            vs_analytic.max((copula_eval(&c_hat, &gamma)? - copula_eval(&analytic, &gamma)?).abs());
    }
    checks.push(Check::at_most(
        subject,
        "empirical vs generating copula on the ranges",
        vs_analytic,
        COPULA_TOLERANCE,
    ));

    let mut flat: f64 = 0.0;
    for alphas in flat_level_vectors(marginals) {
        let (lhs, rhs) = copula_at_flat_alpha(&sample, &c_hat, &alphas)?;
        flat = flat.max((lhs - rhs).abs());
    }
    checks.push(Check::at_most(
        subject,
        "copula at flat levels",
        flat,
        COPULA_TOLERANCE,
    ));
    Ok(checks)
}
