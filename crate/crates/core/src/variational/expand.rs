use nalgebra::DVector;

use crate::error::{check_dim, Error, Result};
use crate::models::OperatorPool;
use crate::operator::WeightedPauliSum;
use crate::pauli::PauliString;

use super::ansatz::Ansatz;
use super::geometry::{distance_from_squared, Candidate, TangentSpace};
use super::solve::factor;

/// A candidate must lower `Delta^2` by more than this to be appended.
const MIN_IMPROVEMENT: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpansionConfig {
    pub delta_cut: f64,
    pub lambda: f64,
    pub max_generators: usize,
}

impl Default for ExpansionConfig {
    fn default() -> Self {
        Self {
            delta_cut: 0.05,
            lambda: 1e-6,
            max_generators: 500,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExpansionOutcome {
    /// Generators appended (at zero angle), in order.
    pub added: Vec<PauliString>,
    /// McLachlan distance with `theta_dot` below.
    pub distance: f64,
    /// `Delta > delta_cut` remained because the size cap was hit or no
    /// candidate lowered the distance.
    pub degraded: bool,
    /// Regularized real-time solution for the final ansatz.
    pub theta_dot: DVector<f64>,
    pub energy: f64,
    pub variance: f64,
}

struct Step {
    theta_dot: DVector<f64>,
    squared: f64,
}

/// `theta_dot = (A + lambda I)^{-1} C` and
/// `Delta^2 = 2 Var - C . theta_dot - lambda |theta_dot|^2`, which equals
/// `theta_dot^T A theta_dot - 2 theta_dot . C + 2 Var` at the solution.
fn current(space: &TangentSpace, lambda: f64) -> Result<(Step, Option<nalgebra::Cholesky<f64, nalgebra::Dyn>>, DVector<f64>)> {
    let (a, c) = space.realtime();
    if space.len() == 0 {
        let step = Step {
            theta_dot: DVector::zeros(0),
            squared: 2.0 * space.variance,
        };
        return Ok((step, None, c));
    }
    let chol = factor(&a, lambda)?;
    let theta_dot = chol.solve(&c);
    let squared = 2.0 * space.variance - c.dot(&theta_dot) - lambda * theta_dot.norm_squared();
    Ok((Step { theta_dot, squared }, Some(chol), c))
}

/// Greedy expansion on an existing tangent space; see [`adaptive_expand`].
pub(crate) fn expand_in_place(ansatz: &mut Ansatz, space: &mut TangentSpace, pool: &OperatorPool, config: &ExpansionConfig) -> Result<ExpansionOutcome> {
    check_dim(ansatz.n_qubits(), pool.n_qubits())?;
    check_dim(ansatz.len(), space.len())?;
    if !(config.delta_cut >= 0.0) {
        return Err(Error::invalid(format!("delta_cut must be non-negative, got {}", config.delta_cut)));
    }
    let cut_sq = config.delta_cut * config.delta_cut;
    let mut added = Vec::new();
    loop {
        let (step, chol, c) = current(space, config.lambda)?;
        let done = |degraded: bool, step: Step, added: Vec<PauliString>| -> Result<ExpansionOutcome> {
            Ok(ExpansionOutcome {
                added,
                distance: distance_from_squared(step.squared)?,
                degraded,
                theta_dot: step.theta_dot,
                energy: space.energy,
                variance: space.variance,
            })
        };
        if step.squared <= cut_sq {
            return done(false, step, added);
        }
        if ansatz.len() >= config.max_generators {
            return done(true, step, added);
        }
        let c_dot_theta = c.dot(&step.theta_dot);
        let theta_sq = step.theta_dot.norm_squared();
        let last = ansatz.generators().last().copied();
        let generators: Vec<PauliString> = pool.operators().iter().copied().filter(|p| Some(*p) != last).collect();
        let mut best: Option<(f64, usize, Candidate)> = None;
        space.scan(&generators, |k, cand| {
            let (a_col, alpha, c_new) = cand.realtime_border(space);
            // Bordered solve of the enlarged system through the Schur complement.
            let (z, schur) = match &chol {
                Some(chol) => {
                    let z = chol.solve(&a_col);
                    let schur = alpha + config.lambda - a_col.dot(&z);
                    (z, schur)
                }
                None => (DVector::zeros(0), alpha + config.lambda),
            };
            if !(schur > 0.0) {
                return;
            }
            let beta = (c_new - a_col.dot(&step.theta_dot)) / schur;
            let c_dot = c_dot_theta - c.dot(&z) * beta + c_new * beta;
            let norm_sq = theta_sq - 2.0 * beta * step.theta_dot.dot(&z) + beta * beta * (z.norm_squared() + 1.0);
            let squared = 2.0 * space.variance - c_dot - config.lambda * norm_sq;
            if best.as_ref().map_or(true, |(b, _, _)| squared < *b) {
                best = Some((squared, k, cand));
            }
        });
        match best {
            Some((squared, k, cand)) if squared < step.squared - MIN_IMPROVEMENT => {
                let generator = generators[k];
                space.push(cand);
                ansatz.push(generator, 0.0)?;
                added.push(generator);
            }
            _ => return done(true, step, added),
        }
    }
}

/// Appends pool generators at zero angle, each time the one minimizing the
/// McLachlan distance (first in pool order on ties), until
/// `Delta <= delta_cut`, the size cap is reached, or nothing helps.
///
/// The generator currently last in the ansatz is skipped: appending it again
/// would duplicate its tangent vector.
pub fn adaptive_expand(ansatz: &mut Ansatz, hamiltonian: &WeightedPauliSum, pool: &OperatorPool, config: &ExpansionConfig) -> Result<ExpansionOutcome> {
    let mut space = TangentSpace::new(ansatz, &hamiltonian.compile())?;
    expand_in_place(ansatz, &mut space, pool, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_h_ad, build_pool, sample_sk};
    use crate::variational::geometry::{geometry, mclachlan_distance};
    use crate::variational::solve::solve_regularized;

    #[test]
    fn bordered_update_matches_full_rebuild() {
        let inst = sample_sk(4, 3).unwrap();
        let h = build_h_ad(&inst, 0.35).unwrap();
        let pool = build_pool(4).unwrap();
        let mut ansatz = Ansatz::plus(4).unwrap();
        let config = ExpansionConfig {
            delta_cut: 1e-4,
            ..ExpansionConfig::default()
        };
        let outcome = adaptive_expand(&mut ansatz, &h, &pool, &config).unwrap();
        assert!(!outcome.added.is_empty());
        let snap = geometry(&ansatz, &h).unwrap();
        let direct = solve_regularized(&snap.a, &snap.c, config.lambda).unwrap();
        assert!((&direct.x - &outcome.theta_dot).norm() < 1e-8);
        let distance = mclachlan_distance(&snap.a, &snap.c, snap.variance, &direct.x).unwrap();
        assert!((distance - outcome.distance).abs() < 1e-6);
    }

    #[test]
    fn greedy_choice_is_optimal_among_candidates() {
        let inst = sample_sk(3, 5).unwrap();
        let h = build_h_ad(&inst, 0.2).unwrap();
        let pool = build_pool(3).unwrap();
        let mut ansatz = Ansatz::plus(3).unwrap();
        let config = ExpansionConfig {
            delta_cut: 0.0,
            max_generators: 1,
            ..ExpansionConfig::default()
        };
        let outcome = adaptive_expand(&mut ansatz, &h, &pool, &config).unwrap();
        assert_eq!(outcome.added.len(), 1);
        let distance_with = |p: PauliString| {
            let mut trial = Ansatz::plus(3).unwrap();
            trial.push(p, 0.0).unwrap();
            let snap = geometry(&trial, &h).unwrap();
            let x = solve_regularized(&snap.a, &snap.c, config.lambda).unwrap().x;
            mclachlan_distance(&snap.a, &snap.c, snap.variance, &x).unwrap()
        };
        let chosen = distance_with(outcome.added[0]);
        for p in pool.operators() {
            assert!(chosen <= distance_with(*p) + 1e-9);
        }
        assert!(outcome.degraded);
    }

    #[test]
    fn satisfied_ansatz_is_left_alone() {
        let inst = sample_sk(3, 1).unwrap();
        // |+>^n is an eigenstate of the driver, so nothing needs adding at s = 0.
        let h = build_h_ad(&inst, 0.0).unwrap();
        let mut ansatz = Ansatz::plus(3).unwrap();
        let outcome = adaptive_expand(&mut ansatz, &h, &build_pool(3).unwrap(), &ExpansionConfig::default()).unwrap();
        assert!(outcome.added.is_empty());
        assert!(ansatz.is_empty());
        assert!(outcome.distance < 1e-7);
    }
}
