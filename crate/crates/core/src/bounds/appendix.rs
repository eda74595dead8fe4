//! Numeric verifiers for the optimisation steps behind the average-rank and
//! anti-rank bounds: a candidate-minimum evaluation of
//! `f(α,β) = α/Δ + β/Δ + (−α² + sα − β² + sβ)/(δ(δ−1))`, and integer
//! enumerations of the two σ-count programs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::BoundsError;
use crate::{rat, Rational};

/// Enumeration bounds for the σ-count programs.
pub const MAX_ENUM_N: usize = 6;
pub const MAX_ENUM_DEGREE: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppendixACandidates {
    pub s: Rational,
    pub min_degree: usize,
    pub max_degree: usize,
    pub f_half_half: Rational,
    pub f_half_s: Rational,
    pub f_halfminus_s: Rational,
    pub min_candidate: Rational,
    /// `δ² − δ > Δ − 2Δs`.
    pub branch_condition: bool,
}

/// `f(α, β)` in exact arithmetic.
pub fn f_exact(s: Rational, min_degree: usize, max_degree: usize, alpha: Rational, beta: Rational) -> Rational {
    let dd = rat((min_degree * (min_degree - 1)) as i64);
    let big = rat(max_degree as i64);
    alpha / big + beta / big + (-alpha * alpha + s * alpha - beta * beta + s * beta) / dd
}

pub fn f_float(s: f64, min_degree: usize, max_degree: usize, alpha: f64, beta: f64) -> f64 {
    let dd = (min_degree * (min_degree - 1)) as f64;
    let big = max_degree as f64;
    alpha / big + beta / big + (-alpha * alpha + s * alpha - beta * beta + s * beta) / dd
}

/// The corner values of `f` and their minimum. `f(½,½)` joins the candidate
/// set only when `Δ > 2δ² − 2δ`; otherwise it dominates `f(½,s)`.
pub fn appendix_a_candidates(s: Rational, min_degree: usize, max_degree: usize) -> Result<AppendixACandidates, BoundsError> {
    if s <= rat(0) || s > Rational::new(1, 2) {
        return Err(BoundsError::DomainError(format!("s = {s} outside (0, 1/2]")));
    }
    if min_degree < 2 || max_degree < min_degree {
        return Err(BoundsError::DomainError(format!("needs Δ ≥ δ ≥ 2 (δ = {min_degree}, Δ = {max_degree})")));
    }
    let (d, big) = (min_degree as i64, max_degree as i64);
    let half = Rational::new(1, 2);
    let f_half_half = (rat(2 * big) * s + rat(2 * d * d - 2 * d - big)) / rat(2 * big * d * (d - 1));
    let f_half_s = (rat(2 * big) * s - rat(2 * d + big) - rat(4 * d) * s + rat(4 * d * d) * s + rat(2 * d * d)) / rat(4 * big * d * (d - 1));
    let f_halfminus_s = (rat(-8 * big) * s * s + rat(6 * big) * s + rat(2 * d * d - 2 * d - big)) / rat(4 * big * d * (d - 1));
    debug_assert_eq!(f_half_half, f_exact(s, min_degree, max_degree, half, half));
    debug_assert_eq!(f_half_s, f_exact(s, min_degree, max_degree, half, s));
    debug_assert_eq!(f_halfminus_s, f_exact(s, min_degree, max_degree, half - s, s));
    let mut min_candidate = f_half_s.min(f_halfminus_s);
    if big > 2 * d * d - 2 * d {
        min_candidate = min_candidate.min(f_half_half);
    }
    Ok(AppendixACandidates {
        s,
        min_degree,
        max_degree,
        f_half_half,
        f_half_s,
        f_halfminus_s,
        min_candidate,
        branch_condition: rat(d * d - d) > rat(big) - rat(2 * big) * s,
    })
}

/// Seeded `(s, δ, Δ)` with `0 < s ≤ ½`, `2 ≤ δ ≤ 5` and
/// `δ ≤ Δ ≤ 2δ² − 2δ`.
pub fn sample_triples(count: usize, seed: u64) -> Vec<(Rational, usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let d: usize = rng.gen_range(2..=5);
            let big = rng.gen_range(d..=2 * d * d - 2 * d);
            let q: i64 = rng.gen_range(2..=60);
            let p = rng.gen_range(1..=q / 2);
            (Rational::new(p, q), d, big)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridCheck {
    pub points: usize,
    pub grid_min: f64,
    pub holds: bool,
}

/// Evaluates `f` on a `steps × steps` grid over `[s, ½]²` restricted to
/// `α + β > ½` and checks that `min_candidate` never exceeds it.
pub fn appendix_a_grid_check(c: &AppendixACandidates, steps: usize, tolerance: f64) -> GridCheck {
    let s = *c.s.numer() as f64 / *c.s.denom() as f64;
    let bound = *c.min_candidate.numer() as f64 / *c.min_candidate.denom() as f64;
    let step = if steps > 1 { (0.5 - s) / (steps - 1) as f64 } else { 0.0 };
    let mut grid_min = f64::INFINITY;
    let mut points = 0;
    for a in 0..steps {
        let alpha = s + step * a as f64;
        for b in 0..steps {
            let beta = s + step * b as f64;
            if alpha + beta <= 0.5 {
                continue;
            }
            points += 1;
            grid_min = grid_min.min(f_float(s, c.min_degree, c.max_degree, alpha, beta));
        }
    }
    GridCheck { points, grid_min, holds: points == 0 || bound <= grid_min + tolerance }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EnumerationCheck {
    pub minimum: i64,
    pub bound: i64,
    pub points: u64,
    pub holds: bool,
}

struct Var {
    weight: i64,
    cost: i64,
}

/// Minimum of `Σ cost·x` over nonnegative integers with `Σ weight·x ≤ budget`,
/// with `tail(x_last)` added for the final variable's value.
fn enumerate(vars: &[Var], budget: i64, tail: &dyn Fn(i64) -> i64) -> (i64, u64) {
    fn go(vars: &[Var], idx: usize, budget: i64, acc: i64, tail: &dyn Fn(i64) -> i64, best: &mut i64, points: &mut u64) {
        let v = &vars[idx];
        let mut x = 0;
        while x * v.weight <= budget {
            let acc = acc + v.cost * x;
            if idx + 1 == vars.len() {
                *points += 1;
                *best = (*best).min(acc + tail(x));
            } else {
                go(vars, idx + 1, budget - x * v.weight, acc, tail, best, points);
            }
            x += 1;
        }
    }
    let (mut best, mut points) = (i64::MAX, 0);
    go(vars, 0, budget, 0, tail, &mut best, &mut points);
    (best, points)
}

fn pairs(n: usize) -> i64 {
    (n * n.saturating_sub(1) / 2) as i64
}

fn check_size(n: usize, max_degree: usize) -> Result<(), BoundsError> {
    if n > MAX_ENUM_N || max_degree > MAX_ENUM_DEGREE {
        return Err(BoundsError::TooLarge(format!("n' = {n}, Δ = {max_degree}; limits {MAX_ENUM_N} and {MAX_ENUM_DEGREE}")));
    }
    Ok(())
}

/// Variables `σ_i^j` for `2 ≤ j ≤ i ≤ Δ` ordered with `σ_2^2` last. The
/// off-diagonal cost is `−(j−1)`; the diagonal costs `−i` for `δ ≤ i`, except
/// `σ_2^2`, which costs `diag2`.
fn sigma_vars(min_degree: usize, max_degree: usize, diag2: i64) -> Vec<Var> {
    let mut vars = Vec::new();
    for i in 2..=max_degree {
        for j in 2..=i {
            if (i, j) == (2, 2) {
                continue;
            }
            let cost = if j < i {
                -(j as i64 - 1)
            } else if i >= min_degree {
                -(i as i64)
            } else {
                0
            };
            vars.push(Var { weight: pairs(j), cost });
        }
    }
    vars.push(Var { weight: 1, cost: diag2 });
    vars
}

/// Minimises `−Σ_{j<i}(j−1)σ_i^j − Σ_{i≥δ} iσ_i^i` over integer σ-counts with
/// `Σ j(j−1)/2·σ_i^j ≤ n'(n'−1)/2`, and checks the minimum is `−n'(n'−1)/2`.
/// When `δ = 2`, `σ_2^2` carries coefficient 1: one pair of edges per vertex.
pub fn appendix_b_min_check(n_prime: usize, min_degree: usize, max_degree: usize) -> Result<EnumerationCheck, BoundsError> {
    check_size(n_prime, max_degree)?;
    if min_degree < 2 || max_degree < min_degree {
        return Err(BoundsError::DomainError(format!("needs Δ ≥ δ ≥ 2 (δ = {min_degree}, Δ = {max_degree})")));
    }
    let diag2 = if min_degree == 2 { -1 } else { 0 };
    let bound = -pairs(n_prime);
    let (minimum, points) = enumerate(&sigma_vars(min_degree, max_degree, diag2), pairs(n_prime), &|_| 0);
    Ok(EnumerationCheck { minimum, bound, points, holds: minimum == bound })
}

/// The `δ = 2` program with the extra parts: objective adds
/// `−σ_2^2(A∪B) − σ_2^2(A) − σ_2^2(B)` under `σ_2^2(A) + σ_2^2(B) ≤ σ_2^2(A∪B)`,
/// `σ_2^2(A) ≤ n1(n1−1)/2`, `σ_2^2(B) ≤ n2(n2−1)/2`. Checks the minimum is at
/// least `−n'(n'−1)/2 − n1(n1−1)/2 − n2(n2−1)/2`.
pub fn appendix_c_min_check(n_prime: usize, n1: usize, n2: usize, max_degree: usize) -> Result<EnumerationCheck, BoundsError> {
    check_size(n_prime, max_degree)?;
    if n1 > n_prime || n2 > n_prime {
        return Err(BoundsError::DomainError(format!("parts {n1}, {n2} exceed n' = {n_prime}")));
    }
    if max_degree < 2 {
        return Err(BoundsError::DomainError("needs Δ ≥ 2".into()));
    }
    let (p1, p2) = (pairs(n1), pairs(n2));
    // best −a − b for each value of σ_2^2(A∪B)
    let cap = pairs(n_prime);
    let inner: Vec<i64> = (0..=cap)
        .map(|total| {
            let mut best = 0;
            for a in 0..=p1.min(total) {
                for b in 0..=p2.min(total - a) {
                    best = best.min(-a - b);
                }
            }
            best
        })
        .collect();
    let bound = -cap - p1 - p2;
    let (minimum, points) = enumerate(&sigma_vars(2, max_degree, -1), cap, &|x| inner[x as usize]);
    Ok(EnumerationCheck { minimum, bound, points, holds: minimum >= bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidate_examples() {
        let c = appendix_a_candidates(Rational::new(1, 4), 2, 2).unwrap();
        assert_eq!(c.f_half_s, Rational::new(5, 16));
        assert_eq!(c.f_halfminus_s, Rational::new(1, 4));
        assert_eq!(c.min_candidate, Rational::new(1, 4));
        let c = appendix_a_candidates(Rational::new(1, 2), 2, 2).unwrap();
        assert_eq!(c.f_half_s, c.f_half_half);
        assert!(appendix_a_candidates(rat(1), 2, 2).is_err());
        assert!(appendix_a_candidates(Rational::new(1, 4), 1, 2).is_err());
    }

    #[test]
    fn branch_condition_matches_comparison() {
        for d in 2..6 {
            for big in d..=2 * d * d - 2 * d {
                for q in 2..20 {
                    let c = appendix_a_candidates(Rational::new(1, q), d, big).unwrap();
                    assert_eq!(c.branch_condition, c.f_half_s > c.f_halfminus_s);
                    assert!(c.f_half_half >= c.f_half_s);
                }
            }
        }
    }

    #[test]
    fn grid_envelope() {
        let c = appendix_a_candidates(Rational::new(1, 6), 3, 7).unwrap();
        let g = appendix_a_grid_check(&c, 200, 1e-9);
        assert!(g.points > 0 && g.holds);
    }

    #[test]
    fn program_b_examples() {
        assert_eq!(appendix_b_min_check(3, 2, 3).unwrap().minimum, -3);
        for big in 2..=5 {
            assert_eq!(appendix_b_min_check(2, 2, big).unwrap().minimum, -1);
        }
        let one = appendix_b_min_check(1, 2, 4).unwrap();
        assert!(one.holds && one.minimum == 0);
        assert!(appendix_b_min_check(7, 2, 3).is_err());
    }

    #[test]
    fn program_c_examples() {
        let c = appendix_c_min_check(3, 1, 2, 3).unwrap();
        assert_eq!((c.minimum, c.bound), (-4, -4));
        assert!(c.holds);
        assert!(appendix_c_min_check(2, 1, 1, 2).unwrap().holds);
        let c = appendix_c_min_check(4, 0, 0, 4).unwrap();
        assert_eq!(c.minimum, appendix_b_min_check(4, 2, 4).unwrap().minimum);
    }
}
