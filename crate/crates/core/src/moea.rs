//! Elitist non-dominated-sorting genetic algorithm (NSGA-II) for
//! two-objective, constraint-annotated problems.
//!
//! Each generation produces N children by binary tournament on the
//! crowded-comparison operator, simulated-binary crossover, and polynomial
//! mutation; parents and children are merged and the next population is
//! refilled front by front, splitting the last front by descending crowding
//! distance. All randomness flows from a single seeded ChaCha8 generator,
//! so identical configurations produce identical fronts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::Evaluation;

/// A problem the optimizer can evolve: fixed real gene bounds plus a total
/// evaluation function. Evaluations must be pure.
pub trait MoeaProblem {
    fn bounds(&self) -> Vec<(f64, f64)>;
    fn evaluate(&self, genes: &[f64]) -> Evaluation;
}

/// Optimizer configuration. Defaults: population 100, 250 generations,
/// crossover probability 0.9 with distribution index 20, per-gene mutation
/// probability 1/3 with distribution index 20.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoeaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_probability: f64,
    pub crossover_distribution_index: f64,
    pub mutation_probability_per_gene: f64,
    pub mutation_distribution_index: f64,
    pub rng_seed: u64,
}

impl Default for MoeaConfig {
    fn default() -> Self {
        Self {
            population_size: 100,
            generations: 250,
            crossover_probability: 0.9,
            crossover_distribution_index: 20.0,
            mutation_probability_per_gene: 1.0 / 3.0,
            mutation_distribution_index: 20.0,
            rng_seed: 0,
        }
    }
}

impl MoeaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 4 || self.population_size % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "population size must be even and at least 4, got {}",
                self.population_size
            )));
        }
        if self.generations < 1 {
            return Err(Error::InvalidParameter(
                "generation count must be at least 1".into(),
            ));
        }
        for (name, p) in [
            ("crossover probability", self.crossover_probability),
            (
                "per-gene mutation probability",
                self.mutation_probability_per_gene,
            ),
        ] {
            if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must lie in [0, 1], got {p}"
                )));
            }
        }
        for (name, eta) in [
            (
                "crossover distribution index",
                self.crossover_distribution_index,
            ),
            (
                "mutation distribution index",
                self.mutation_distribution_index,
            ),
        ] {
            if !(eta.is_finite() && eta > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {eta}"
                )));
            }
        }
        Ok(())
    }
}

/// A candidate solution together with its evaluation and the rank/crowding
/// values from the most recent sorting pass.
#[derive(Debug, Clone)]
pub struct Individual {
    pub genes: Vec<f64>,
    pub evaluation: Evaluation,
    pub rank: usize,
    pub crowding: f64,
}

impl Individual {
    fn new(genes: Vec<f64>, evaluation: Evaluation) -> Self {
        Self {
            genes,
            evaluation,
            rank: usize::MAX,
            crowding: 0.0,
        }
    }
}

/// One row of a returned front.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontPoint {
    pub genes: Vec<f64>,
    pub objectives: [f64; 2],
    pub violation: f64,
    pub feasible: bool,
}

/// The non-dominated result set, sorted ascending by the first objective
/// (and therefore descending in the second), with duplicate objective rows
/// collapsed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParetoFront {
    pub points: Vec<FrontPoint>,
}

impl ParetoFront {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Build a front from evaluated candidates: keep the feasible ones
    /// (all of them, if nothing is feasible), sort by the first objective,
    /// and drop rows with duplicated objectives.
    pub fn from_candidates(mut candidates: Vec<FrontPoint>) -> Self {
        if candidates.iter().any(|p| p.feasible) {
            candidates.retain(|p| p.feasible);
        }
        candidates.sort_by(|a, b| {
            a.objectives[0]
                .total_cmp(&b.objectives[0])
                .then(a.objectives[1].total_cmp(&b.objectives[1]))
        });
        candidates.dedup_by(|a, b| a.objectives == b.objectives);
        Self { points: candidates }
    }
}

/// Per-generation summary used for elitism and determinism checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationStats {
    pub generation: usize,
    pub population_size: usize,
    /// Minimum value of each objective among feasible individuals, if any.
    pub min_feasible: [Option<f64>; 2],
}

/// Partition a population into non-dominated fronts under constrained
/// dominance, setting each individual's `rank` to its front index.
/// Returns the fronts as index lists; an empty population yields no fronts.
pub fn fast_non_dominated_sort(population: &mut [Individual]) -> Vec<Vec<usize>> {
    let n = population.len();
    if n == 0 {
        return Vec::new();
    }
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];

    for i in 0..n {
        for j in (i + 1)..n {
            let a = &population[i].evaluation;
            let b = &population[j].evaluation;
            if a.constrained_dominates(b) {
                dominated_by[i].push(j);
                domination_count[j] += 1;
            } else if b.constrained_dominates(a) {
                dominated_by[j].push(i);
                domination_count[i] += 1;
            }
        }
    }
    let mut current: Vec<usize> = (0..n).filter(|&i| domination_count[i] == 0).collect();

    let mut fronts = Vec::new();
    let mut rank = 0;
    while !current.is_empty() {
        for &i in &current {
            population[i].rank = rank;
        }
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by[i] {
                domination_count[j] -= 1;
                if domination_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        fronts.push(std::mem::replace(&mut current, next));
        rank += 1;
    }
    fronts
}

/// Assign crowding distances to the members of one front. Boundary members
/// of each objective get infinite distance; interior members accumulate
/// neighbour gaps normalized by the objective range (a zero range
/// contributes nothing).
pub fn crowding_distance(population: &mut [Individual], front: &[usize]) {
    if front.is_empty() {
        return;
    }
    if front.len() <= 2 {
        for &i in front {
            population[i].crowding = f64::INFINITY;
        }
        return;
    }
    for &i in front {
        population[i].crowding = 0.0;
    }
    let mut order: Vec<usize> = front.to_vec();
    for objective in 0..2 {
        order.sort_by(|&a, &b| {
            population[a].evaluation.objectives[objective]
                .total_cmp(&population[b].evaluation.objectives[objective])
        });
        let first = order[0];
        let last = *order.last().unwrap();
        population[first].crowding = f64::INFINITY;
        population[last].crowding = f64::INFINITY;
        let range = population[last].evaluation.objectives[objective]
            - population[first].evaluation.objectives[objective];
        if range <= 0.0 {
            continue;
        }
        for w in 0..order.len().saturating_sub(2) {
            let (prev, mid, next) = (order[w], order[w + 1], order[w + 2]);
            let gap = population[next].evaluation.objectives[objective]
                - population[prev].evaluation.objectives[objective];
            population[mid].crowding += gap / range;
        }
    }
}

/// Crowded-comparison operator: lower rank wins, ties prefer the higher
/// crowding distance, full ties prefer the first argument.
pub fn crowded_compare<'a>(a: &'a Individual, b: &'a Individual) -> &'a Individual {
    if b.rank < a.rank || (b.rank == a.rank && b.crowding > a.crowding) {
        b
    } else {
        a
    }
}

/// Run the optimizer and return the final non-dominated front.
pub fn evolve<P: MoeaProblem>(problem: &P, config: &MoeaConfig) -> Result<ParetoFront> {
    evolve_traced(problem, config).map(|(front, _)| front)
}

/// Like [`evolve`], also returning per-generation population summaries.
pub fn evolve_traced<P: MoeaProblem>(
    problem: &P,
    config: &MoeaConfig,
) -> Result<(ParetoFront, Vec<GenerationStats>)> {
    config.validate()?;
    let bounds = problem.bounds();
    if bounds.is_empty() {
        return Err(Error::InvalidParameter("problem has no genes".into()));
    }
    for &(lo, hi) in &bounds {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidParameter(format!(
                "gene bounds must satisfy lower < upper, got ({lo}, {hi})"
            )));
        }
    }

    let n = config.population_size;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);

    let mut population: Vec<Individual> = (0..n)
        .map(|_| {
            let genes: Vec<f64> = bounds
                .iter()
                .map(|&(lo, hi)| lo + rng.random::<f64>() * (hi - lo))
                .collect();
            let evaluation = problem.evaluate(&genes);
            Individual::new(genes, evaluation)
        })
        .collect();
    assign_rank_and_crowding(&mut population);

    let mut history = Vec::with_capacity(config.generations + 1);
    history.push(summarize(0, &population));

    for generation in 1..=config.generations {
        let mut children = Vec::with_capacity(n);
        while children.len() < n {
            let parent_a = tournament(&population, &mut rng);
            let parent_b = tournament(&population, &mut rng);
            let (mut genes_a, mut genes_b) = simulated_binary_crossover(
                &population[parent_a].genes,
                &population[parent_b].genes,
                &bounds,
                config,
                &mut rng,
            );
            polynomial_mutation(&mut genes_a, &bounds, config, &mut rng);
            polynomial_mutation(&mut genes_b, &bounds, config, &mut rng);
            let eval_a = problem.evaluate(&genes_a);
            children.push(Individual::new(genes_a, eval_a));
            if children.len() < n {
                let eval_b = problem.evaluate(&genes_b);
                children.push(Individual::new(genes_b, eval_b));
            }
        }

        let mut combined = population;
        combined.append(&mut children);
        let fronts = fast_non_dominated_sort(&mut combined);

        let mut selected: Vec<usize> = Vec::with_capacity(n);
        for front in &fronts {
            crowding_distance(&mut combined, front);
            if selected.len() + front.len() <= n {
                selected.extend_from_slice(front);
            } else {
                let mut partial = front.clone();
                partial.sort_by(|&a, &b| {
                    combined[b].crowding.total_cmp(&combined[a].crowding)
                });
                selected.extend(partial.into_iter().take(n - selected.len()));
            }
            if selected.len() == n {
                break;
            }
        }

        // Pull the survivors out without cloning gene vectors.
        let mut slots: Vec<Option<Individual>> = combined.into_iter().map(Some).collect();
        population = selected
            .into_iter()
            .map(|i| slots[i].take().expect("selection indices are unique"))
            .collect();
        history.push(summarize(generation, &population));
    }

    let candidates: Vec<FrontPoint> = population
        .iter()
        .filter(|ind| ind.rank == 0)
        .map(|ind| FrontPoint {
            genes: ind.genes.clone(),
            objectives: ind.evaluation.objectives,
            violation: ind.evaluation.violation,
            feasible: ind.evaluation.feasible,
        })
        .collect();
    Ok((ParetoFront::from_candidates(candidates), history))
}

fn assign_rank_and_crowding(population: &mut [Individual]) {
    let fronts = fast_non_dominated_sort(population);
    for front in &fronts {
        crowding_distance(population, front);
    }
}

fn summarize(generation: usize, population: &[Individual]) -> GenerationStats {
    let mut min_feasible = [None, None];
    for individual in population {
        if !individual.evaluation.feasible {
            continue;
        }
        for objective in 0..2 {
            let value = individual.evaluation.objectives[objective];
            min_feasible[objective] = Some(match min_feasible[objective] {
                Some(best) if best <= value => best,
                _ => value,
            });
        }
    }
    GenerationStats {
        generation,
        population_size: population.len(),
        min_feasible,
    }
}

fn tournament<R: Rng>(population: &[Individual], rng: &mut R) -> usize {
    let i = rng.random_range(0..population.len());
    let j = rng.random_range(0..population.len());
    let winner = crowded_compare(&population[i], &population[j]);
    if std::ptr::eq(winner, &population[i]) {
        i
    } else {
        j
    }
}

fn simulated_binary_crossover<R: Rng>(
    parent_a: &[f64],
    parent_b: &[f64],
    bounds: &[(f64, f64)],
    config: &MoeaConfig,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let mut child_a = parent_a.to_vec();
    let mut child_b = parent_b.to_vec();
    if rng.random::<f64>() > config.crossover_probability {
        return (child_a, child_b);
    }
    let eta = config.crossover_distribution_index;
    for k in 0..parent_a.len() {
        if rng.random::<f64>() > 0.5 {
            continue;
        }
        let (a, b) = (parent_a[k], parent_b[k]);
        if (a - b).abs() <= 1e-14 {
            continue;
        }
        let u: f64 = rng.random();
        let beta = if u <= 0.5 {
            (2.0 * u).powf(1.0 / (eta + 1.0))
        } else {
            (1.0 / (2.0 * (1.0 - u))).powf(1.0 / (eta + 1.0))
        };
        let (lo_gene, hi_gene) = (a.min(b), a.max(b));
        let spread = hi_gene - lo_gene;
        let low_child =
            (0.5 * ((lo_gene + hi_gene) - beta * spread)).clamp(bounds[k].0, bounds[k].1);
        let high_child =
            (0.5 * ((lo_gene + hi_gene) + beta * spread)).clamp(bounds[k].0, bounds[k].1);
        if a <= b {
            child_a[k] = low_child;
            child_b[k] = high_child;
        } else {
            child_a[k] = high_child;
            child_b[k] = low_child;
        }
    }
    (child_a, child_b)
}

fn polynomial_mutation<R: Rng>(
    genes: &mut [f64],
    bounds: &[(f64, f64)],
    config: &MoeaConfig,
    rng: &mut R,
) {
    let eta = config.mutation_distribution_index;
    for (gene, &(lo, hi)) in genes.iter_mut().zip(bounds) {
        if rng.random::<f64>() > config.mutation_probability_per_gene {
            continue;
        }
        let span = hi - lo;
        let u: f64 = rng.random();
        let delta = if u < 0.5 {
            let gap = 1.0 - (*gene - lo) / span;
            let value = 2.0 * u + (1.0 - 2.0 * u) * gap.powf(eta + 1.0);
            value.powf(1.0 / (eta + 1.0)) - 1.0
        } else {
            let gap = 1.0 - (hi - *gene) / span;
            let value = 2.0 * (1.0 - u) + (2.0 * u - 1.0) * gap.powf(eta + 1.0);
            1.0 - value.powf(1.0 / (eta + 1.0))
        };
        *gene = (*gene + delta * span).clamp(lo, hi);
    }
}
