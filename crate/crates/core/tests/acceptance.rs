//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits non-zero if any fails.

mod common;

use std::time::Instant;

use common::{alphas_for, points_for, population, Reference};
use dtransform::copula::{
    copula_at_flat_alpha, dt_copula, flat_level_vectors, knot_grid, sklar_compose,
    sklar_identity_check,
};
use dtransform::measure::{measure_level_set, measure_set};
use dtransform::presets::{bernoulli, mixed, uniform};
use dtransform::stochastic::{
    distributional_transform, image_law_atoms, inversion_check, ks_uniformity, sample_inverse,
    transform_cdf_exact, transform_cdf_monte_carlo,
};
use dtransform::transform::{
    invert_transform, null_set, phi, phi_inverse, quantile_range_of_point, transform,
};
use dtransform::{
    Cdf, CopulaSpec, Dependence, Interval, JointSample, LevelSet, RealSet, SeededStream,
    TransformParam,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Arithmetic tolerance for the exact identities.
const EXACT: f64 = 1e-12;
/// Tolerance on `x` for inversion at continuity points.
const X_TOL: f64 = 1e-9;
const POPULATION: usize = 200;
const POPULATION_SEED: u64 = 20_240_601;
const N: usize = 100_000;
const KS_CRITICAL: f64 = 1.6276;
const COPULA_TOL: f64 = 0.01;
const LAMBDAS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

type Outcome = Result<String, String>;
type Criterion = fn(&[(Reference, Cdf)]) -> Outcome;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn same_x(r: &Reference, x: f64, y: f64) -> bool {
    if r.jump(x) > 0.0 {
        x == y
    } else {
        close(x, y, X_TOL)
    }
}

/// Sandwiches, quantile ranges, the level-set case split, null pieces and
/// the decomposition of `{F_λ ≤ α}`, against the reference evaluator.
fn criterion_1(pop: &[(Reference, Cdf)]) -> Outcome {
    let mut alpha_count = usize::MAX;
    let mut checks = 0usize;
    for (k, (r, f)) in pop.iter().enumerate() {
        let alphas = alphas_for(f, 60);
        alpha_count = alpha_count.min(alphas.len());
        let xs = points_for(f);
        let ctx = |what: &str, detail: String| format!("F#{k}: {what}: {detail}");

        for &x in &xs {
            let (lo, hi) = (r.eval_left(x), r.eval(x));
            for l in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let u = transform(f, x, TransformParam::new(l).unwrap());
                ensure(lo - EXACT <= u && u <= hi + EXACT, || {
                    ctx("transform sandwich", format!("x={x} λ={l} u={u}"))
                })?;
                checks += 1;
            }
            let range = quantile_range_of_point(f, x);
            let hull = Interval::closed(lo - EXACT, hi + EXACT);
            ensure(
                range.difference(&RealSet::from_interval(hull)).is_empty(),
                || ctx("range inside [F(x-), F(x)]", format!("x={x} range={range}")),
            )?;
            if lo < hi {
                ensure(range.contains(0.5 * (lo + hi)), || {
                    ctx("range contains open jump", format!("x={x}"))
                })?;
            }
            let (flo, fhi) = (f.eval_left(x), f.eval(x));
            for a in [flo, fhi, 0.5 * (flo + fhi)] {
                if a > 0.0 && a < 1.0 {
                    let hit = same_x(r, x, r.left_quantile(a));
                    ensure(range.contains(a) == hit, || {
                        ctx("range endpoint", format!("x={x} α={a} range={range}"))
                    })?;
                }
            }
            checks += 1;
        }

        for &a in &alphas {
            let q = f
                .quantile_pair(a)
                .map_err(|e| ctx("quantile", e.to_string()))?;
            let (xi_ref, eta_ref) = (r.left_quantile(a), r.right_quantile(a));
            ensure(
                close(q.xi, xi_ref, X_TOL) && close(q.eta, eta_ref, X_TOL),
                || {
                    ctx(
                        "quantiles vs reference",
                        format!("α={a} got ({}, {}) want ({xi_ref}, {eta_ref})", q.xi, q.eta),
                    )
                },
            )?;
            ensure(
                r.eval_left(q.xi) <= a + EXACT && a <= r.eval(q.xi) + EXACT,
                || ctx("left sandwich", format!("α={a}")),
            )?;
            ensure(
                r.eval_left(q.eta) <= a + EXACT && a <= r.eval(q.eta) + EXACT,
                || ctx("right sandwich", format!("α={a}")),
            )?;
            for d in [1e-7, 1e-3, 0.5] {
                ensure(r.eval(q.xi - d) < a, || {
                    ctx("strict sandwich", format!("α={a} δ={d}"))
                })?;
                ensure(a <= r.eval(q.xi + d) + EXACT, || {
                    ctx("strict sandwich", format!("α={a} ε={d}"))
                })?;
            }

            let shape = f.level_set_shape(a).unwrap();
            let f_xi_is_a = close(r.eval(q.xi), a, EXACT);
            let expected = if q.xi < q.eta {
                if close(r.eval(q.eta), a, EXACT) {
                    LevelSet::Closed(q.xi, q.eta)
                } else {
                    LevelSet::HalfOpen(q.xi, q.eta)
                }
            } else if f_xi_is_a {
                LevelSet::Singleton(q.xi)
            } else {
                LevelSet::Empty
            };
            ensure(shape == expected, || {
                ctx(
                    "level-set case",
                    format!("α={a} got {shape:?} want {expected:?}"),
                )
            })?;
            ensure((shape != LevelSet::Empty) == f_xi_is_a, || {
                ctx("non-empty iff F(ξ) = α", format!("α={a}"))
            })?;
            if q.xi < q.eta {
                ensure(
                    close(r.eval(q.eta), a, EXACT) == (r.jump(q.eta) == 0.0),
                    || ctx("F(η) = α iff no jump at η", format!("α={a}")),
                )?;
                let m = measure_level_set(f, a).unwrap().value();
                ensure(
                    close(m, a - r.eval_left(q.xi), EXACT) && close(m, r.jump(q.xi), EXACT),
                    || ctx("measure of flat level set", format!("α={a} m={m}")),
                )?;
            }

            for &l in &LAMBDAS {
                let d = f.a_decomposition(l, a).unwrap();
                let plus_mass: f64 = d
                    .plus
                    .components()
                    .iter()
                    .map(|c| {
                        let (lo, hi) = (c.lower().value().unwrap(), c.upper().value().unwrap());
                        let top = if c.upper().is_closed() {
                            r.eval(hi)
                        } else {
                            r.eval_left(hi)
                        };
                        top - r.eval(lo)
                    })
                    .sum();
                ensure(plus_mass.abs() <= EXACT, || {
                    ctx("μ(A+) = 0", format!("α={a} λ={l} μ={plus_mass}"))
                })?;
                let union = d.union();
                for &x in xs.iter().chain([q.xi, q.eta].iter()) {
                    let u = r.eval_left(x) + l * r.jump(x);
                    ensure(union.contains(x) == (u <= a + EXACT), || {
                        ctx(
                            "A+ ∪ A~ ∪ A- = {F_λ ≤ α}",
                            format!("α={a} λ={l} x={x} F_λ={u} union={union}"),
                        )
                    })?;
                    checks += 1;
                }
            }
        }
    }
    ensure(alpha_count >= 50, || {
        format!("only {alpha_count} levels for some F")
    })?;
    Ok(format!(
        "{} CDFs, ≥{alpha_count} levels each, {checks} pointwise checks",
        pop.len()
    ))
}

/// `P(F_V(X) ≤ α)` for `X ~ G`, summed atom by atom plus the continuous part.
fn fubini_oracle(f: &Reference, g: &Reference, alpha: f64) -> f64 {
    let atoms: f64 = g
        .atoms
        .iter()
        .map(|&(z, m)| {
            let (lo, jump) = (f.eval_left(z), f.jump(z));
            let p = if jump > 0.0 {
                ((alpha - lo) / jump).clamp(0.0, 1.0)
            } else {
                f64::from(f.eval(z) <= alpha)
            };
            m * p
        })
        .sum();
    atoms + g.continuous(f.right_quantile(alpha))
}

fn criterion_2(pop: &[(Reference, Cdf)]) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (_, f) in pop {
        for a in alphas_for(f, 60) {
            let b = transform_cdf_exact(f, f, a).map_err(|e| e.to_string())?;
            worst = worst.max((b.total - a).abs());
            count += 1;
        }
    }
    ensure(worst <= EXACT, || format!("max |total - α| = {worst:e}"))?;

    // the general decomposition against the summation oracle, X with another law
    let mut cross: f64 = 0.0;
    for pair in pop.windows(2).take(50) {
        let ((rf, f), (rg, g)) = (&pair[0], &pair[1]);
        for a in alphas_for(f, 20) {
            let total = transform_cdf_exact(f, g, a).unwrap().total;
            cross = cross.max((total - fubini_oracle(rf, rg, a)).abs());
        }
    }
    ensure(cross <= EXACT, || {
        format!("decomposition vs summation oracle: {cross:e}")
    })?;

    let mut worst_z: f64 = 0.0;
    for (k, (_, f)) in pop.iter().take(20).enumerate() {
        let a = f.plateau_levels().first().copied().unwrap_or(0.37);
        let exact = transform_cdf_exact(f, f, a).unwrap().total;
        let mc = transform_cdf_monte_carlo(f, f, a, SeededStream::new(42, k as u64), N).unwrap();
        let z = (mc - exact).abs() / (exact * (1.0 - exact) / N as f64).sqrt();
        ensure(z <= 4.0, || {
            format!("F#{k}: Monte Carlo {mc} vs exact {exact} at α={a}: {z:.2} standard errors")
        })?;
        worst_z = worst_z.max(z);
    }
    Ok(format!("max |total-α| {worst:.1e} over {count} levels; vs oracle {cross:.1e}; Monte Carlo worst {worst_z:.2}σ of 4σ"))
}

fn criterion_3(pop: &[(Reference, Cdf)]) -> Outcome {
    let mut verified = 0usize;
    let mut flagged = 0usize;
    for (k, (r, f)) in pop.iter().enumerate() {
        for &l in &LAMBDAS {
            let report = null_set(f, l).map_err(|e| e.to_string())?;
            // only a jump onto level 1 can carry {F_λ ∈ {0,1}}, and only at λ = 1
            let top_knot = r.left_quantile(1.0);
            let expected_boundary = if l == 1.0 { r.jump(top_knot) } else { 0.0 };
            ensure(report.boundary_measure == expected_boundary, || {
                format!(
                    "F#{k} λ={l}: boundary measure {} want {expected_boundary}",
                    report.boundary_measure
                )
            })?;
            ensure(report.plateau_measure == 0.0, || {
                format!("F#{k} λ={l}: plateau pieces carry mass")
            })?;
            if !report.hypothesis_holds() {
                flagged += 1;
                continue;
            }
            ensure(report.total_measure == 0.0, || {
                format!("F#{k} λ={l}: μ(N_λ) = {}", report.total_measure)
            })?;

            // points drawn from μ itself, so purely atomic laws are covered too
            let mut candidates: Vec<f64> = f.knots().to_vec();
            candidates.extend(sample_inverse(f, SeededStream::new(3, k as u64), 2000).values);
            let mut tested = 0;
            for x in candidates {
                if report.contains(x) {
                    continue;
                }
                let y = invert_transform(f, x, l).map_err(|e| format!("F#{k} λ={l} x={x}: {e}"))?;
                ensure(same_x(r, x, y), || {
                    format!("F#{k} λ={l}: F^∧(F_λ({x})) = {y}")
                })?;
                tested += 1;
                if tested == 1000 {
                    break;
                }
            }
            ensure(tested == 1000, || {
                format!("F#{k} λ={l}: only {tested} points off the null set")
            })?;
            verified += 1;
        }
    }
    let b = null_set(&bernoulli(), 1.0).unwrap();
    ensure(
        !b.hypothesis_holds() && b.boundary_measure == 0.5 && b.total_measure == 0.5,
        || format!("Bernoulli at λ=1 not flagged: {b:?}"),
    )?;
    Ok(format!("{verified} (F, λ) cases × 1000 points inverted; {flagged} flagged; Bernoulli λ=1 measure 0.5"))
}

fn test_distributions(pop: &[(Reference, Cdf)]) -> Vec<(String, Cdf)> {
    let mut out = vec![
        ("F_B".to_string(), bernoulli()),
        ("F_M".to_string(), mixed()),
        ("F_U".to_string(), uniform()),
    ];
    let mixed_ones = pop.iter().enumerate().filter(|(_, (r, f))| {
        !r.atoms.is_empty() && !r.segments.is_empty() && !f.plateau_levels().is_empty()
    });
    out.extend(
        mixed_ones
            .take(2)
            .map(|(k, (_, f))| (format!("F#{k}"), f.clone())),
    );
    out
}

fn criterion_4(pop: &[(Reference, Cdf)]) -> Outcome {
    let dists = test_distributions(pop);
    ensure(dists.len() == 5, || {
        "fewer than two random mixed distributions".into()
    })?;
    let mut slowest: f64 = 0.0;
    for (name, f) in &dists {
        let started = Instant::now();
        for seed in [1, 2, 3] {
            let r = inversion_check(f, SeededStream::new(seed, 0), N);
            ensure(r.failures == 0, || {
                format!("{name} seed {seed}: {} failures", r.failures)
            })?;
            ensure(r.shortcut_failures.unwrap_or(0) == 0, || {
                format!("{name} seed {seed}: shortcut failures")
            })?;
        }
        let secs = started.elapsed().as_secs_f64();
        slowest = slowest.max(secs);
        ensure(secs < 5.0, || format!("{name}: {secs:.2} s"))?;
    }
    Ok(format!(
        "5 distributions × seeds {{1,2,3}} × n={N}: 0 failures; slowest {slowest:.2} s"
    ))
}

fn criterion_5(pop: &[(Reference, Cdf)]) -> Outcome {
    let threshold = KS_CRITICAL / (N as f64).sqrt();
    let mut worst: f64 = 0.0;
    for (name, f) in test_distributions(pop) {
        for seed in [1, 2, 3] {
            let xs = sample_inverse(&f, SeededStream::new(seed, 0), N);
            let us = distributional_transform(&f, &xs, SeededStream::new(seed, 1)).unwrap();
            let d = ks_uniformity(&us).unwrap();
            ensure(d < threshold, || {
                format!("{name} seed {seed}: KS {d:.5} ≥ {threshold:.5}")
            })?;
            worst = worst.max(d);
        }
    }
    let fb = bernoulli();
    let atom = image_law_atoms(&fb)
        .into_iter()
        .find(|&(v, _)| v == 0.5)
        .map(|(_, m)| m);
    let level_mass = measure_set(&fb, &fb.level_set(0.5).unwrap())
        .unwrap()
        .value();
    ensure(atom == Some(0.5) && level_mass == 0.5, || {
        format!("law of F_B(X) at 0.5: {atom:?}, {level_mass}")
    })?;
    Ok(format!(
        "worst KS {worst:.5} < {threshold:.5}; law of F_B(X) has mass 0.5 at 0.5"
    ))
}

fn criterion_6(pop: &[(Reference, Cdf)]) -> Outcome {
    let started = Instant::now();
    let mut recovered = 0usize;
    for (k, chunk) in pop.chunks(3).take(20).enumerate() {
        let marginals: Vec<Cdf> = chunk.iter().map(|(_, f)| f.clone()).collect();
        let dim = marginals.len();
        let above: Vec<f64> = marginals
            .iter()
            .map(|f| f.knots()[f.knots().len() - 1] + 1.0)
            .collect();
        let mut specs = vec![CopulaSpec::Independence(dim), CopulaSpec::Comonotone(dim)];
        if dim == 2 {
            specs.push(CopulaSpec::Countermonotone(2));
        }
        for c in &specs {
            for (j, h) in marginals.iter().enumerate() {
                for x in points_for(h) {
                    let mut point = above.clone();
                    point[j] = x;
                    let v = sklar_compose(c, &marginals, &point).unwrap();
                    ensure(close(v, h.eval(x), EXACT), || {
                        format!("group {k} {} coordinate {j} x={x}", c.name())
                    })?;
                    recovered += 1;
                }
            }
        }
    }

    let pairs = [
        ("F_B,F_B", bernoulli(), bernoulli()),
        ("F_M,F_U", mixed(), uniform()),
        ("F_B,F_M", bernoulli(), mixed()),
    ];
    let mut worst_sklar: f64 = 0.0;
    let mut worst_flat: f64 = 0.0;
    let mut flat_count = 0;
    for (name, a, b) in pairs {
        let marginals = [a, b];
        for dep in [Dependence::Independent, Dependence::Comonotone] {
            let sample = JointSample::generate(&marginals, dep, 42, N).unwrap();
            let c_hat = dt_copula(&sample, SeededStream::new(42, 1 << 20)).unwrap();
            let dev = sklar_identity_check(&sample, &c_hat, &knot_grid(&marginals)).unwrap();
            ensure(dev < COPULA_TOL, || {
                format!("{name} {dep:?}: Sklar deviation {dev}")
            })?;
            worst_sklar = worst_sklar.max(dev);
            for alphas in flat_level_vectors(&marginals) {
                let (lhs, rhs) = copula_at_flat_alpha(&sample, &c_hat, &alphas).unwrap();
                ensure((lhs - rhs).abs() < COPULA_TOL, || {
                    format!("{name} {dep:?} at {alphas:?}: {lhs} vs {rhs}")
                })?;
                worst_flat = worst_flat.max((lhs - rhs).abs());
                flat_count += 1;
            }
        }
    }
    let secs = started.elapsed().as_secs_f64();
    ensure(secs < 30.0, || format!("took {secs:.1} s"))?;
    Ok(format!(
        "{recovered} marginal recoveries exact; Sklar deviation ≤ {worst_sklar:.1e}; {flat_count} flat vectors ≤ {worst_flat:.1e}; {secs:.1} s"
    ))
}

fn criterion_7(pop: &[(Reference, Cdf)]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let with_jumps: Vec<&(Reference, Cdf)> = pop
        .iter()
        .filter(|(_, f)| !f.jump_points().is_empty())
        .collect();
    let mut vectors = 0;
    let mut worst: f64 = 0.0;
    while vectors < 1000 {
        let (r, f) = with_jumps[vectors % with_jumps.len()];
        let lambdas: Vec<f64> = f
            .jump_points()
            .iter()
            .map(|_| dtransform::stochastic::open_uniform(&mut rng))
            .collect();
        let alphas = phi(f, &lambdas).map_err(|e| e.to_string())?;
        for (&x, &a) in f.jump_points().iter().zip(&alphas) {
            ensure(r.eval_left(x) < a && a < r.eval(x), || {
                format!("Φ output {a} outside the jump at {x}")
            })?;
            ensure(!r.attains(a) && !f.attains(a), || {
                format!("Φ output {a} is a value of F or F-")
            })?;
        }
        let back = phi_inverse(f, &alphas).map_err(|e| e.to_string())?;
        for (l, b) in lambdas.iter().zip(&back) {
            worst = worst.max((l - b).abs());
        }
        vectors += 1;
    }
    ensure(worst <= EXACT, || format!("round trip error {worst:e}"))?;
    Ok(format!(
        "{vectors} λ-vectors over {} CDFs; max round-trip error {worst:.1e}",
        with_jumps.len()
    ))
}

fn main() {
    let pop = population(POPULATION, POPULATION_SEED);
    let criteria: [(&str, Criterion); 7] = [
        ("1 exact identities", criterion_1),
        ("2 law of the distributional transform", criterion_2),
        ("3 almost-everywhere inversion", criterion_3),
        ("4 sampled almost-sure inversion", criterion_4),
        ("5 uniformity of the transform", criterion_5),
        ("6 Sklar in both directions", criterion_6),
        ("7 jump bijection round trip", criterion_7),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let started = Instant::now();
        let outcome = run(&pop);
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {name}: PASS ({detail}) [{secs:.1} s]"),
            Err(detail) => {
                failed += 1;
                println!("criterion {name}: FAIL ({detail}) [{secs:.1} s]");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
