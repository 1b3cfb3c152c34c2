//! Random step-linear distribution functions and an independent reference
//! evaluator built straight from the generated pieces.
#![allow(dead_code)]

use dtransform::{Cdf, DistFile};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Masses are multiples of `1 / MASS_UNITS`, so sums of masses are exact.
pub const MASS_UNITS: u32 = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Piece {
    Atom,
    Rise,
    Flat,
}

/// A distribution given by its atoms and linear segments, evaluated by direct
/// summation.
#[derive(Debug, Clone)]
pub struct Reference {
    pub atoms: Vec<(f64, f64)>,
    pub segments: Vec<(f64, f64, f64)>,
}

impl Reference {
    pub fn eval(&self, x: f64) -> f64 {
        let jumps: f64 = self.atoms.iter().filter(|a| a.0 <= x).map(|a| a.1).sum();
        jumps + self.continuous(x)
    }

    pub fn eval_left(&self, x: f64) -> f64 {
        let jumps: f64 = self.atoms.iter().filter(|a| a.0 < x).map(|a| a.1).sum();
        jumps + self.continuous(x)
    }

    /// The continuous part alone.
    pub fn continuous(&self, x: f64) -> f64 {
        self.segments
            .iter()
            .map(|&(a, b, m)| m * ((x - a) / (b - a)).clamp(0.0, 1.0))
            .sum()
    }

    pub fn jump(&self, x: f64) -> f64 {
        self.atoms.iter().filter(|a| a.0 == x).map(|a| a.1).sum()
    }

    pub fn support(&self) -> (f64, f64) {
        let xs = self
            .atoms
            .iter()
            .map(|a| a.0)
            .chain(self.segments.iter().flat_map(|s| [s.0, s.1]));
        xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
            (lo.min(x), hi.max(x))
        })
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        let mut xs: Vec<f64> = self
            .atoms
            .iter()
            .map(|a| a.0)
            .chain(self.segments.iter().flat_map(|s| [s.0, s.1]))
            .collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        xs
    }

    /// Smallest `x` with `pred(x)` for a predicate that is false far left and
    /// true far right and switches once, by bisection on floats.
    fn first_true(&self, pred: impl Fn(f64) -> bool) -> f64 {
        let (lo, hi) = self.support();
        let (mut a, mut b) = (lo - 1.0, hi + 1.0);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if pred(m) {
                b = m;
            } else {
                a = m;
            }
        }
        // snap onto a breakpoint the bisection has converged to
        self.breakpoints()
            .into_iter()
            .find(|&k| (k - b).abs() <= 1e-12 && pred(k))
            .unwrap_or(b)
    }

    /// `min {x : F(x) ≥ α}`.
    pub fn left_quantile(&self, alpha: f64) -> f64 {
        self.first_true(|x| self.eval(x) >= alpha)
    }

    /// `inf {x : F(x) > α}`.
    pub fn right_quantile(&self, alpha: f64) -> f64 {
        self.first_true(|x| self.eval(x) > alpha)
    }

    /// Whether `v` is a value of `F` or of its left limits.
    pub fn attains(&self, v: f64) -> bool {
        if v == 0.0 || v == 1.0 {
            return true;
        }
        let bps = self.breakpoints();
        if bps
            .iter()
            .any(|&x| self.eval(x) == v || self.eval_left(x) == v)
        {
            return true;
        }
        bps.windows(2).any(|w| {
            let (lo, hi) = (self.eval(w[0]), self.eval_left(w[1]));
            lo < v && v < hi
        })
    }

    pub fn to_file(&self) -> DistFile {
        let mut file = DistFile::new();
        for &(x, m) in &self.atoms {
            file = file.atom(x, m);
        }
        for &(a, b, m) in &self.segments {
            file = file.segment(a, b, m);
        }
        file
    }

    pub fn to_cdf(&self) -> Cdf {
        self.to_file()
            .to_cdf()
            .expect("generated distributions are valid")
    }
}

/// Splits `MASS_UNITS` into `k` positive parts.
fn split_mass(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    let weights: Vec<u32> = (0..k).map(|_| rng.random_range(1..=20)).collect();
    let total: u32 = weights.iter().sum();
    let mut units: Vec<u32> = weights.iter().map(|w| w * MASS_UNITS / total).collect();
    let used: u32 = units.iter().sum();
    *units.last_mut().unwrap() += MASS_UNITS - used;
    units
        .into_iter()
        .map(|u| u as f64 / MASS_UNITS as f64)
        .collect()
}

/// Up to 10 atoms, 10 rising segments and 5 flat gaps in random order, with
/// knots on a grid of width 1/16.
pub fn random_reference(rng: &mut impl Rng) -> Reference {
    let n_atoms = rng.random_range(0..=10);
    let n_rises = if n_atoms == 0 {
        rng.random_range(1..=10)
    } else {
        rng.random_range(0..=10)
    };
    let n_flats = rng.random_range(0..=5);
    let mut pieces: Vec<Piece> = std::iter::repeat_n(Piece::Atom, n_atoms)
        .chain(std::iter::repeat_n(Piece::Rise, n_rises))
        .chain(std::iter::repeat_n(Piece::Flat, n_flats))
        .collect();
    pieces.shuffle(rng);
    let masses = split_mass(rng, n_atoms + n_rises);
    let mut masses = masses.into_iter();

    let mut x = rng.random_range(-32..=32) as f64 / 16.0;
    let mut atoms: Vec<(f64, f64)> = Vec::new();
    let mut segments = Vec::new();
    for p in pieces {
        match p {
            Piece::Atom => {
                let m = masses.next().unwrap();
                match atoms.last_mut() {
                    Some(last) if last.0 == x => last.1 += m,
                    _ => atoms.push((x, m)),
                }
            }
            Piece::Rise => {
                let w = rng.random_range(1..=16) as f64 / 16.0;
                segments.push((x, x + w, masses.next().unwrap()));
                x += w;
            }
            Piece::Flat => x += rng.random_range(1..=16) as f64 / 16.0,
        }
    }
    Reference { atoms, segments }
}

/// The reproducible population used by the acceptance criteria.
pub fn population(count: usize, seed: u64) -> Vec<(Reference, Cdf)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r = random_reference(&mut rng);
            let f = r.to_cdf();
            (r, f)
        })
        .collect()
}

pub fn arb_reference() -> impl Strategy<Value = Reference> {
    any::<u64>().prop_map(|seed| random_reference(&mut ChaCha8Rng::seed_from_u64(seed)))
}

pub fn arb_cdf() -> impl Strategy<Value = (Reference, Cdf)> {
    arb_reference().prop_map(|r| {
        let f = r.to_cdf();
        (r, f)
    })
}

/// Levels to probe: a grid of `grid` points, all flat levels, points inside
/// every jump interval and every value taken at a knot.
pub fn alphas_for(f: &Cdf, grid: usize) -> Vec<f64> {
    let mut alphas: Vec<f64> = (1..=grid).map(|j| j as f64 / (grid + 1) as f64).collect();
    alphas.extend(f.plateau_levels());
    for &x in f.jump_points() {
        let (lo, hi) = (f.eval_left(x), f.eval(x));
        alphas.extend([0.25, 0.5, 0.75].map(|t| lo + t * (hi - lo)));
    }
    alphas.extend(f.body().left_limits());
    alphas.extend(f.body().knot_values());
    alphas.retain(|&a| a > 0.0 && a < 1.0);
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();
    alphas
}

/// Knots, points next to them, midpoints and points outside the support.
pub fn points_for(f: &Cdf) -> Vec<f64> {
    let knots = f.knots();
    let mut xs = Vec::new();
    for &x in knots {
        xs.extend([x, x - 1e-7, x + 1e-7, x - 1e-3, x + 1e-3]);
    }
    xs.extend(
        knots
            .windows(2)
            .flat_map(|w| [0.5 * (w[0] + w[1]), 0.75 * w[0] + 0.25 * w[1]]),
    );
    xs.extend([knots[0] - 1.0, knots[knots.len() - 1] + 1.0]);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}
