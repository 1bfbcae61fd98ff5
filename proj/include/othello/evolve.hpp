#pragma once

// (mu + lambda) evolution strategy over n-tuple network weights. Fitness is
// the league score against the Standard WPC Heuristic.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "othello/arch.hpp"
#include "othello/eval.hpp"
#include "othello/league.hpp"
#include "othello/parallel.hpp"
#include "othello/random.hpp"

namespace othello {

struct EsConfig {
  std::size_t mu = 10;
  std::size_t lambda = 90;
  std::size_t generations = 5000;
  double sigma = 1.0;
  double init_low = -0.1;
  double init_high = 0.1;
  std::size_t fitness_doubles = 1000;
  double epsilon = kLeagueEpsilon;
  ArchitectureSpec architecture = ArchitectureSpec::all_straight(2);
  Perspective perspective = Perspective::BoardInversion;
  std::uint64_t seed = 0;
  /// Measure the fittest every this many generations; 0 disables.
  std::size_t measure_interval = 10;
  std::size_t measure_doubles = 50000;
  double measure_epsilon = kLeagueEpsilon;
  /// Every individual in every generation plays the same fitness games.
  bool common_random_numbers = false;
  unsigned workers = 1;

  void validate() const {
    if (mu < 1 || lambda < 1) throw std::invalid_argument("mu and lambda must be at least 1");
    if (!(sigma >= 0)) throw std::invalid_argument("sigma must be non-negative");
    if (!(init_low <= init_high)) throw std::invalid_argument("init_low must not exceed init_high");
    if (fitness_doubles < 1) throw std::invalid_argument("fitness_doubles must be at least 1");
    if (!(epsilon >= 0 && epsilon <= 1)) throw std::invalid_argument("epsilon must be in [0, 1]");
  }
};

struct Individual {
  std::vector<double> genome;
  std::optional<double> fitness;
};

struct GenerationRecord {
  std::size_t generation = 0;
  double best_fitness = 0.0;
  /// Mean fitness over the mu survivors.
  double mean_fitness = 0.0;
  std::optional<PerformanceEstimate> measured;
  std::size_t evaluations = 0;
};

struct RunLog {
  /// Generation 0: the evaluated initial population.
  GenerationRecord initial;
  std::vector<GenerationRecord> generations;
};

inline std::size_t genome_length(const NTupleNetwork& skeleton, Perspective perspective) {
  return skeleton.weight_count() * (perspective == Perspective::Doubled ? 2 : 1);
}

/// Player whose lookup tables are `genome`, laid out tuple by tuple; doubled
/// players store the black network first, then the white one.
inline Player make_player(const NTupleNetwork& skeleton, std::span<const double> genome, Perspective perspective) {
  if (genome.size() != genome_length(skeleton, perspective)) throw std::invalid_argument("genome length mismatch");
  NTupleNetwork black = skeleton;
  const std::size_t w = skeleton.weight_count();
  black.set_flat_weights(genome.first(w));
  if (perspective != Perspective::Doubled) return Player(std::move(black), perspective);
  NTupleNetwork white = skeleton;
  white.set_flat_weights(genome.subspan(w));
  return Player::doubled(std::move(black), std::move(white));
}

inline std::vector<Individual> init_population(const EsConfig& cfg, const NTupleNetwork& skeleton,
                                               RandomStream& rng) {
  const std::size_t len = genome_length(skeleton, cfg.perspective);
  std::vector<Individual> pop(cfg.mu);
  for (auto& ind : pop) {
    ind.genome.resize(len);
    for (double& g : ind.genome) g = cfg.init_low == cfg.init_high ? cfg.init_low : rng.uniform(cfg.init_low, cfg.init_high);
  }
  return pop;
}

/// Child with every weight perturbed by N(0, sigma^2); fitness unset.
inline Individual mutate(const Individual& parent, double sigma, RandomStream& rng) {
  if (!(sigma >= 0)) throw std::invalid_argument("sigma must be non-negative");
  Individual child{parent.genome, std::nullopt};
  if (sigma == 0) return child;
  std::normal_distribution<double> noise(0.0, sigma);
  for (double& g : child.genome) g += noise(rng);
  return child;
}

/// Everything fixed for one run.
class EsProblem {
 public:
  EsProblem(EsConfig cfg, NTupleNetwork skeleton)
      : cfg_(std::move(cfg)), skeleton_(std::move(skeleton)), opponent_(swh_player()) {
    cfg_.validate();
  }
  explicit EsProblem(const EsConfig& cfg) : EsProblem(cfg, build_architecture(cfg.architecture)) {}

  const EsConfig& config() const { return cfg_; }
  const NTupleNetwork& skeleton() const { return skeleton_; }
  Player player(const Individual& ind) const { return make_player(skeleton_, ind.genome, cfg_.perspective); }

  /// Fitness games of individual `index` in `generation`.
  MatchConfig fitness_match(std::size_t generation, std::size_t index) const {
    const std::uint64_t base = RandomStream::mix(cfg_.seed ^ 0x66697465737321ULL);
    const std::uint64_t seed = cfg_.common_random_numbers
                                   ? base
                                   : RandomStream::mix(base ^ RandomStream::mix(generation)) ^ RandomStream::mix(~index);
    return {cfg_.epsilon, cfg_.fitness_doubles, seed};
  }

  MatchConfig measure_match(std::size_t generation) const {
    return {cfg_.measure_epsilon, cfg_.measure_doubles,
            RandomStream::mix(cfg_.seed ^ 0x6d6561737572ULL) ^ RandomStream::mix(generation)};
  }

  RandomStream offspring_stream(std::size_t generation) const {
    return RandomStream::substream(cfg_.seed ^ 0x6f6666737072ULL, generation);
  }
  RandomStream init_stream() const { return RandomStream::substream(cfg_.seed ^ 0x696e6974ULL, 0); }

  /// Evaluates every individual fresh; returns the number of evaluations.
  std::size_t evaluate(std::vector<Individual>& pop, std::size_t generation) const {
    parallel_for(pop.size(), cfg_.workers, [&](std::size_t i) {
      pop[i].fitness = performance(player(pop[i]), opponent_, fitness_match(generation, i)).mean_score;
    });
    evaluations_ += pop.size();
    return pop.size();
  }

  PerformanceEstimate measure(const Individual& ind, std::size_t generation) const {
    return performance(player(ind), opponent_, measure_match(generation), cfg_.workers);
  }

  std::size_t total_evaluations() const { return evaluations_.load(); }

 private:
  EsConfig cfg_;
  NTupleNetwork skeleton_;
  Player opponent_;
  mutable std::atomic<std::size_t> evaluations_{0};
};

namespace detail {

/// Stable: equal fitness keeps the earlier individual first.
inline void keep_best(std::vector<Individual>& pop, std::size_t mu) {
  std::stable_sort(pop.begin(), pop.end(),
                   [](const Individual& a, const Individual& b) { return a.fitness.value() > b.fitness.value(); });
  pop.resize(std::min(mu, pop.size()));
}

inline GenerationRecord record_of(const std::vector<Individual>& parents, std::size_t generation,
                                  std::size_t evaluations) {
  GenerationRecord r;
  r.generation = generation;
  r.best_fitness = parents.front().fitness.value();
  double sum = 0;
  for (const auto& p : parents) sum += p.fitness.value();
  r.mean_fitness = sum / static_cast<double>(parents.size());
  r.evaluations = evaluations;
  return r;
}

}  // namespace detail

/// One plus-selection step: lambda offspring from uniformly chosen parents,
/// all mu + lambda re-evaluated, best mu kept (parents win ties).
inline std::pair<std::vector<Individual>, GenerationRecord> es_generation(const EsProblem& problem,
                                                                          std::vector<Individual> parents,
                                                                          std::size_t generation,
                                                                          RandomStream& rng) {
  const EsConfig& cfg = problem.config();
  if (parents.size() != cfg.mu) throw std::invalid_argument("parent count must equal mu");
  std::vector<Individual> pool = std::move(parents);
  pool.reserve(cfg.mu + cfg.lambda);
  for (std::size_t k = 0; k < cfg.lambda; ++k) {
    const auto& parent = pool[rng.below(static_cast<std::uint32_t>(cfg.mu))];
    pool.push_back(mutate(parent, cfg.sigma, rng));
  }
  const std::size_t evaluations = problem.evaluate(pool, generation);
  detail::keep_best(pool, cfg.mu);
  GenerationRecord rec = detail::record_of(pool, generation, evaluations);
  return {std::move(pool), rec};
}

/// Population snapshot after `generation` completed; enough to resume.
struct EsState {
  std::size_t generation = 0;
  std::vector<Individual> parents;
  RunLog log;
};

struct RunHooks {
  std::function<void(const EsState&)> on_generation;
};

struct RunResult {
  Individual best;
  RunLog log;
};

inline RunResult run(const EsProblem& problem, std::optional<EsState> resume = std::nullopt,
                     const RunHooks& hooks = {}) {
  const EsConfig& cfg = problem.config();
  EsState state;
  if (resume) {
    state = std::move(*resume);
    if (state.parents.size() != cfg.mu) throw std::invalid_argument("checkpoint parent count differs from mu");
  } else {
    RandomStream rng = problem.init_stream();
    state.parents = init_population(cfg, problem.skeleton(), rng);
    const std::size_t evals = problem.evaluate(state.parents, 0);
    detail::keep_best(state.parents, cfg.mu);
    state.log.initial = detail::record_of(state.parents, 0, evals);
    if (cfg.measure_interval > 0) state.log.initial.measured = problem.measure(state.parents.front(), 0);
    if (hooks.on_generation) hooks.on_generation(state);
  }
  for (std::size_t g = state.generation + 1; g <= cfg.generations; ++g) {
    RandomStream rng = problem.offspring_stream(g);
    auto [next, rec] = es_generation(problem, std::move(state.parents), g, rng);
    if (cfg.measure_interval > 0 && g % cfg.measure_interval == 0) rec.measured = problem.measure(next.front(), g);
    state.parents = std::move(next);
    state.generation = g;
    state.log.generations.push_back(rec);
    if (hooks.on_generation) hooks.on_generation(state);
  }
  return {state.parents.front(), std::move(state.log)};
}

inline RunResult run(const EsConfig& cfg) { return run(EsProblem(cfg)); }

inline constexpr const char* kRunLogCsvHeader = "generation,best_fitness,mean_fitness,measured_performance";

inline std::string run_log_csv_row(const GenerationRecord& r) {
  char buf[160];
  if (r.measured) {
    std::snprintf(buf, sizeof buf, "%zu,%.6f,%.6f,%.6f", r.generation, r.best_fitness, r.mean_fitness,
                  r.measured->mean_score);
  } else {
    std::snprintf(buf, sizeof buf, "%zu,%.6f,%.6f,", r.generation, r.best_fitness, r.mean_fitness);
  }
  return buf;
}

}  // namespace othello
