//! Genetic refinement of placements.
//!
//! Chromosomes are variable orders (offset `i` holds `order[i]`). The initial
//! population is the supplied seed placements topped up with random
//! permutations. Each generation keeps the elite unchanged and breeds the rest
//! by binary tournament, order crossover and swap mutation. All randomness
//! comes from one ChaCha stream seeded from the config, so a fixed seed
//! reproduces the run exactly.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{AccessGraph, Placement, VarId};

#[derive(Clone, Debug, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub elite_count: usize,
    pub tournament_size: usize,
    /// Stop after this many generations without improvement.
    pub stagnation_limit: usize,
    pub rng_seed: u64,
}

impl GaConfig {
    /// Default parameters for an instance with `n` variables:
    /// `100 * ceil(log2(n + 1))` generations, capped at 2000.
    pub fn for_size(n: usize, rng_seed: u64) -> Self {
        let x = n + 1;
        let log2_ceil = if x <= 1 {
            0
        } else {
            (usize::BITS - (x - 1).leading_zeros()) as usize
        };
        GaConfig {
            population_size: 30,
            generations: (100 * log2_ceil).min(2000),
            crossover_rate: 0.9,
            mutation_rate: 0.1,
            elite_count: 2,
            tournament_size: 2,
            stagnation_limit: 200,
            rng_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.elite_count == 0 || self.elite_count >= self.population_size {
            return Err(Error::domain(format!(
                "elite count {} must be in 1..{}",
                self.elite_count, self.population_size
            )));
        }
        for (name, rate) in [
            ("crossover", self.crossover_rate),
            ("mutation", self.mutation_rate),
        ] {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::domain(format!("{name} rate {rate} outside [0, 1]")));
            }
        }
        if self.tournament_size == 0 {
            return Err(Error::domain("tournament size must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Chromosome {
    // field order gives (cost, order) lexicographic ranking
    cost: u64,
    order: Vec<usize>,
}

impl Chromosome {
    fn new(graph: &AccessGraph, order: Vec<usize>) -> Self {
        let mut offsets = vec![0; order.len()];
        for (pos, &v) in order.iter().enumerate() {
            offsets[v] = pos;
        }
        Chromosome {
            cost: graph.cost_of_offsets(&offsets),
            order,
        }
    }

    pub fn cost(&self) -> u64 {
        self.cost
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    fn to_placement(&self) -> Placement {
        let order: Vec<VarId> = self.order.iter().map(|&v| VarId::new(v)).collect();
        Placement::from_order(&order).expect("chromosomes are permutations")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaOutcome {
    pub placement: Placement,
    pub cost: u64,
    /// Best cost seen after initialisation and after each generation.
    pub best_per_generation: Vec<u64>,
}

pub fn ga_refine(graph: &AccessGraph, seeds: &[Placement], cfg: &GaConfig) -> Result<Placement> {
    ga_refine_detailed(graph, seeds, cfg).map(|o| o.placement)
}

pub fn ga_refine_detailed(
    graph: &AccessGraph,
    seeds: &[Placement],
    cfg: &GaConfig,
) -> Result<GaOutcome> {
    cfg.validate()?;
    let n = graph.num_vertices();
    if let Some(bad) = seeds.iter().find(|s| s.len() != n) {
        return Err(Error::domain(format!(
            "seed placement covers {} variables, graph has {n}",
            bad.len()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut population: Vec<Chromosome> = seeds
        .iter()
        .map(|s| Chromosome::new(graph, s.order().iter().map(|v| v.index()).collect()))
        .collect();
    while population.len() < cfg.population_size {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        population.push(Chromosome::new(graph, order));
    }
    population.sort();
    population.truncate(cfg.population_size);

    let mut best = population[0].clone();
    let mut history = vec![best.cost];
    let mut stagnant = 0;

    for _ in 0..cfg.generations {
        let mut next: Vec<Chromosome> = population[..cfg.elite_count].to_vec();
        while next.len() < cfg.population_size {
            let first = tournament(&population, cfg.tournament_size, &mut rng);
            let second = tournament(&population, cfg.tournament_size, &mut rng);
            let mut child = if rng.gen::<f64>() < cfg.crossover_rate {
                order_crossover(&first.order, &second.order, &mut rng)
            } else {
                first.order.clone()
            };
            if rng.gen::<f64>() < cfg.mutation_rate && n >= 2 {
                let i = rng.gen_range(0..n);
                let j = rng.gen_range(0..n);
                child.swap(i, j);
            }
            next.push(Chromosome::new(graph, child));
        }
        next.sort();
        population = next;

        if population[0].cost < best.cost {
            best = population[0].clone();
            stagnant = 0;
        } else {
            stagnant += 1;
        }
        history.push(best.cost);
        if stagnant >= cfg.stagnation_limit {
            break;
        }
    }

    Ok(GaOutcome {
        placement: best.to_placement(),
        cost: best.cost,
        best_per_generation: history,
    })
}

/// Best of `size` uniformly drawn individuals; `population` is sorted so the
/// lowest index wins.
fn tournament<'p>(population: &'p [Chromosome], size: usize, rng: &mut ChaCha8Rng) -> &'p Chromosome {
    let winner = (0..size)
        .map(|_| rng.gen_range(0..population.len()))
        .min()
        .unwrap();
    &population[winner]
}

/// OX1: copy a random slice from the first parent, fill the remaining slots
/// with the second parent's genes in order, starting after the slice.
fn order_crossover(first: &[usize], second: &[usize], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = first.len();
    if n < 2 {
        return first.to_vec();
    }
    let (mut lo, mut hi) = (rng.gen_range(0..n), rng.gen_range(0..n));
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let mut child = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for k in lo..=hi {
        child[k] = first[k];
        used[first[k]] = true;
    }
    let mut slot = (hi + 1) % n;
    for k in 0..n {
        let gene = second[(hi + 1 + k) % n];
        if used[gene] {
            continue;
        }
        child[slot] = gene;
        used[gene] = true;
        slot = (slot + 1) % n;
    }
    child
}
