#pragma once

// Epsilon-Othello match harness: double games against a fixed opponent,
// scored win = 1, draw = 0.5, loss = 0.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "othello/eval.hpp"
#include "othello/game.hpp"
#include "othello/parallel.hpp"
#include "othello/random.hpp"

namespace othello {

inline constexpr double kLeagueEpsilon = 0.1;

struct MatchConfig {
  double epsilon = kLeagueEpsilon;
  std::size_t n_double_games = 50000;
  std::uint64_t master_seed = 0;
};

struct PerformanceEstimate {
  std::size_t wins = 0;
  std::size_t draws = 0;
  std::size_t losses = 0;
  double mean_score = 0.0;
  double ci95_halfwidth = 0.0;

  std::size_t games() const { return wins + draws + losses; }
  bool operator==(const PerformanceEstimate&) const = default;
};

/// Mean and normal-approximation 95% half-width over single-game scores.
inline PerformanceEstimate summarize(std::size_t wins, std::size_t draws, std::size_t losses) {
  PerformanceEstimate est{wins, draws, losses, 0.0, 0.0};
  const auto n = static_cast<double>(est.games());
  if (n == 0) return est;
  est.mean_score = (static_cast<double>(wins) + 0.5 * static_cast<double>(draws)) / n;
  if (n > 1) {
    const double second_moment = (static_cast<double>(wins) + 0.25 * static_cast<double>(draws)) / n;
    const double variance = std::max(0.0, second_moment - est.mean_score * est.mean_score) * n / (n - 1);
    est.ci95_halfwidth = 1.959963984540054 * std::sqrt(variance / n);
  }
  return est;
}

struct DoubleGameResult {
  double points = 0.0;
  /// games[0]: player black; games[1]: player white.
  std::array<GameOutcome, 2> games{};
};

inline double points_for(const GameOutcome& g, Color c) {
  if (g.winner == Winner::Draw) return 0.5;
  return (g.winner == Winner::Black) == (c == Color::Black) ? 1.0 : 0.0;
}

/// Two games with colours swapped, both driven by `rng` in play order.
template <MoveSelector P, MoveSelector Q>
DoubleGameResult play_double_game(const P& player, const Q& opponent, double epsilon, RandomStream& rng) {
  DoubleGameResult r;
  r.games[0] = play_game(player, opponent, epsilon, rng);
  r.games[1] = play_game(opponent, player, epsilon, rng);
  r.points = points_for(r.games[0], Color::Black) + points_for(r.games[1], Color::White);
  return r;
}

/// League performance of `player` against `opponent`. Double game i uses
/// substream(master_seed, i), so results do not depend on `workers`.
template <MoveSelector P, MoveSelector Q>
PerformanceEstimate performance(const P& player, const Q& opponent, const MatchConfig& cfg, unsigned workers = 1) {
  if (cfg.n_double_games < 1) throw std::invalid_argument("need at least one double game");
  struct Tally {
    std::size_t wins = 0, draws = 0, losses = 0;
  };
  const std::size_t n = cfg.n_double_games;
  const std::size_t chunks = std::min<std::size_t>(n, std::max(1U, workers) * 16U);
  std::vector<Tally> tallies(chunks);
  parallel_for(chunks, workers, [&](std::size_t chunk) {
    Tally& t = tallies[chunk];
    for (std::size_t i = chunk * n / chunks; i < (chunk + 1) * n / chunks; ++i) {
      RandomStream rng = RandomStream::substream(cfg.master_seed, i);
      const DoubleGameResult r = play_double_game(player, opponent, cfg.epsilon, rng);
      for (int g = 0; g < 2; ++g) {
        const double pts = points_for(r.games[g], g == 0 ? Color::Black : Color::White);
        if (pts == 1.0) ++t.wins;
        else if (pts == 0.5) ++t.draws;
        else ++t.losses;
      }
    }
  });
  Tally total;
  for (const Tally& t : tallies) {
    total.wins += t.wins;
    total.draws += t.draws;
    total.losses += t.losses;
  }
  return summarize(total.wins, total.draws, total.losses);
}

struct Throughput {
  std::size_t games = 0;
  double seconds = 0.0;
  double games_per_second() const { return seconds > 0 ? static_cast<double>(games) / seconds : 0.0; }
};

/// Plays league double games until `seconds` of wall time have passed.
template <MoveSelector P, MoveSelector Q>
Throughput measure_throughput(const P& player, const Q& opponent, double seconds, unsigned workers = 1) {
  std::atomic<std::size_t> games{0};
  const auto start = std::chrono::steady_clock::now();
  const auto deadline = start + std::chrono::duration<double>(seconds);
  workers = std::max(1U, workers);
  parallel_for(workers, workers, [&](std::size_t w) {
    std::size_t local = 0;
    for (std::uint64_t i = 0; std::chrono::steady_clock::now() < deadline; ++i) {
      RandomStream rng = RandomStream::substream(w, i);
      play_double_game(player, opponent, kLeagueEpsilon, rng);
      local += 2;
    }
    games += local;
  });
  return {games.load(), std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()};
}

/// Standard WPC Heuristic; it reads its board with output negation.
inline Player swh_player() { return Player(swh_weights(), Perspective::OutputNegation); }

/// Plays uniformly at random: every after-state ties at zero.
inline Player random_player() { return Player(WpcWeights{}, Perspective::OutputNegation); }

inline constexpr const char* kResultCsvHeader = "player_id,opponent_id,epsilon,n_doubles,wins,draws,losses,mean,ci95";

inline std::string result_csv_row(const std::string& player_id, const std::string& opponent_id,
                                  const MatchConfig& cfg, const PerformanceEstimate& est) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s,%s,%g,%zu,%zu,%zu,%zu,%.6f,%.6f", player_id.c_str(), opponent_id.c_str(),
                cfg.epsilon, cfg.n_double_games, est.wins, est.draws, est.losses, est.mean_score,
                est.ci95_halfwidth);
  return buf;
}

}  // namespace othello
