// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Set OTHELLO_NIGHTLY=1 to include the long trend check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "othello/arch.hpp"
#include "othello/evolve.hpp"
#include "othello/league.hpp"
#include "othello/netfmt.hpp"

using namespace othello;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  bool skipped = false;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Board random_board(RandomStream& rng) {
  Board b;
  for (int loc = 0; loc < kBoardCells; ++loc) b = b.with(loc, static_cast<CellState>(rng.below(3)));
  return b;
}

oracle::Grid to_grid(const Board& b) {
  oracle::Grid g{};
  for (int loc = 0; loc < kBoardCells; ++loc) g[loc] = static_cast<int>(b.at(loc));
  return g;
}

// ---------------------------------------------------------------------------

Outcome champion_replay() {
  const MatchConfig cfg{0.1, 50000, 3};
  const PerformanceEstimate e = performance(load_champion(), swh_player(), cfg, default_workers());
  return {e.mean_score >= 0.948 && e.mean_score <= 0.968,
          fmt("mean %.4f +- %.4f over %zu doubles (want [0.948, 0.968])", e.mean_score, e.ci95_halfwidth,
              cfg.n_double_games)};
}

Outcome architecture_counts() {
  const std::map<int, std::pair<std::size_t, std::size_t>> expected = {
      {1, {10, 30}}, {2, {32, 288}}, {3, {24, 648}}, {4, {21, 1701}}};
  bool ok = true;
  std::string detail;
  for (const auto& [n, counts] : expected) {
    const NTupleNetwork net = all_straight(n);
    ok &= net.tuples().size() == counts.first && net.weight_count() == counts.second;
    detail += fmt("n=%d %zu/%zu ", n, net.tuples().size(), net.weight_count());
  }
  for (int n = 1; n <= 8; ++n) {
    if (static_cast<int>(all_straight(n).tuples().size()) != oracle::orbit_count(n)) {
      ok = false;
      detail += fmt("oracle mismatch at n=%d ", n);
    }
  }
  return {ok, detail + "(orbit oracle n=1..8)"};
}

Outcome symmetric_sampling_example() {
  // Edge 4-tuple a1-d1 with black on b1 and white on h8.
  NTuple tuple = NTuple::symmetric({0, 1, 2, 3});
  const Board b = Board().with(1, CellState::Black).with(63, CellState::White);
  std::map<std::size_t, int> seen;
  for (const auto& e : tuple.expansions()) {
    std::vector<int> pattern;
    for (int loc : e) pattern.push_back(static_cast<int>(b.at(loc)));
    ++seen[tuple_index(pattern)];
  }
  if (seen != std::map<std::size_t, int>{{39, 2}, {40, 5}, {43, 1}}) return {false, "unexpected pattern multiplicities"};
  tuple.lut()[40] = -1.01;
  tuple.lut()[39] = 5.89;
  tuple.lut()[43] = -9.18;
  const double v = network_value(NTupleNetwork({tuple}), b);
  return {std::fabs(v - -2.45) <= 1e-12, fmt("value %.15g (want -2.45 within 1e-12)", v)};
}

Outcome self_play_calibration() {
  const MatchConfig cfg{0.1, 20000, 1};
  const PerformanceEstimate e = performance(swh_player(), swh_player(), cfg, default_workers());
  return {std::fabs(e.mean_score - 0.5) <= 0.01, fmt("mean %.4f over %zu doubles (want 0.5 +- 0.01)", e.mean_score,
                                                    cfg.n_double_games)};
}

Outcome rules_oracle() {
  RandomStream rng(2718);
  std::size_t positions = 0;
  std::size_t mismatches = 0;
  while (positions < 10000) {
    Board b = initial_board();
    Color side = Color::Black;
    int passes = 0;
    while (passes < 2) {
      ++positions;
      const oracle::Grid g = to_grid(b);
      const int me = side == Color::Black ? 2 : 0;
      const LocationSet moves = legal_moves(b, side);
      mismatches += moves.to_vector() != oracle::legal(g, me);
      mismatches += legal_moves(invert(b), opposite(side)) != moves;
      for (int loc : moves.to_vector()) {
        const Board after = apply_move(b, side, loc);
        mismatches += to_grid(after) != oracle::play(g, me, loc);
        mismatches += after.disc_total() != b.disc_total() + 1;
        mismatches += invert(after) != apply_move(invert(b), opposite(side), loc);
      }
      if (moves.empty()) {
        ++passes;
      } else {
        passes = 0;
        b = apply_move(b, side, moves.nth(static_cast<int>(rng.below(static_cast<std::uint32_t>(moves.size())))));
      }
      side = opposite(side);
    }
  }
  return {mismatches == 0, fmt("%zu positions, %zu mismatches", positions, mismatches)};
}

Outcome index_and_invariance() {
  bool bijective = true;
  for (int n = 1; n <= 5; ++n) {
    std::set<std::size_t> seen;
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    for (;;) {
      const std::size_t idx = tuple_index(digits);
      bijective &= idx < pow3(n);
      seen.insert(idx);
      std::size_t j = 0;
      while (j < digits.size() && ++digits[j] == 3) digits[j++] = 0;
      if (j == digits.size()) break;
    }
    bijective &= seen.size() == pow3(n);
  }
  RandomStream rng(31415);
  double worst = 0.0;
  for (int n = 2; n <= 4; ++n) {
    NTupleNetwork net = all_straight(n);
    std::vector<double> w(net.weight_count());
    for (double& x : w) x = rng.uniform(-1.0, 1.0);
    net.set_flat_weights(w);
    for (int i = 0; i < 1000; ++i) {
      const Board b = random_board(rng);
      const double v = network_value(net, b);
      for (Symmetry s : kAllSymmetries) worst = std::max(worst, std::fabs(network_value(net, transform(b, s)) - v));
    }
  }
  return {bijective && worst <= 1e-9,
          fmt("bijective n<=5: %s; max symmetry deviation %.3g over 3x1000 boards (want <= 1e-9)",
              bijective ? "yes" : "no", worst)};
}

Outcome format_round_trip() {
  std::size_t failures = 0;
  const NTupleNetwork champ = load_network(asset_path("all2-champion.ntn"));
  failures += parse_network(serialize_network(champ)) != champ;
  RandomStream rng(1618);
  for (int i = 0; i < 100; ++i) {
    NTupleNetwork net = rand_snake(1 + static_cast<int>(rng.below(6)), 2 + static_cast<int>(rng.below(4)), rng);
    std::vector<double> w(net.weight_count());
    for (double& x : w) x = rng.normal(0.0, 100.0);
    net.set_flat_weights(w);
    const std::string text = serialize_network(net);
    const NTupleNetwork back = parse_network(text);
    failures += back != net || serialize_network(back) != text;
  }
  std::size_t corpus = 0;
  std::size_t undiagnosed = 0;
  for (const auto& entry : std::filesystem::directory_iterator(OTHELLO_CORPUS_DIR)) {
    ++corpus;
    try {
      parse_network(detail::read_file(entry.path().string()));
      ++undiagnosed;
    } catch (const FormatError& e) {
      undiagnosed += std::string(e.what()).empty();
    }
  }
  return {failures == 0 && undiagnosed == 0 && corpus > 0,
          fmt("101 round trips, %zu failures; %zu malformed files, %zu without diagnostic", failures, corpus,
              undiagnosed)};
}

Outcome learning_smoke() {
  EsConfig cfg;
  cfg.architecture = ArchitectureSpec::all_straight(2);
  cfg.generations = 50;
  cfg.fitness_doubles = 50;
  cfg.seed = 7;
  cfg.measure_interval = 50;
  cfg.measure_doubles = 5000;
  cfg.workers = default_workers();
  const RunResult r = run(cfg);
  const double before = r.log.initial.measured->mean_score;
  const double after = r.log.generations.back().measured->mean_score;

  EsConfig det;
  det.mu = 4;
  det.lambda = 12;
  det.generations = 20;
  det.fitness_doubles = 20;
  det.epsilon = 0.0;
  det.common_random_numbers = true;
  det.measure_interval = 0;
  det.seed = 7;
  det.workers = default_workers();
  const RunResult d = run(det);
  bool monotone = true;
  double prev = d.log.initial.best_fitness;
  for (const auto& g : d.log.generations) {
    monotone &= g.best_fitness >= prev;
    prev = g.best_fitness;
  }
  return {after - before >= 0.15 && monotone,
          fmt("performance %.4f -> %.4f (gain %.4f, want >= 0.15); deterministic-fitness best %s", before, after,
              after - before, monotone ? "non-decreasing" : "DECREASED")};
}

Outcome trend_check() {
  const char* nightly = std::getenv("OTHELLO_NIGHTLY");
  if (!nightly || std::string(nightly) != "1") return {true, "skipped (set OTHELLO_NIGHTLY=1)", true};
  auto median_final = [](const ArchitectureSpec& arch) {
    std::vector<double> finals;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      EsConfig cfg;
      cfg.architecture = arch.kind == ArchitectureSpec::Kind::RandomSnake
                             ? ArchitectureSpec::random_snake(arch.m, arch.n, seed)
                             : arch;
      cfg.generations = 300;
      cfg.fitness_doubles = 200;
      cfg.seed = seed;
      cfg.measure_interval = 300;
      cfg.measure_doubles = 5000;
      cfg.workers = default_workers();
      finals.push_back(run(cfg).log.generations.back().measured->mean_score);
    }
    std::sort(finals.begin(), finals.end());
    return finals[2];
  };
  const double straight = median_final(ArchitectureSpec::all_straight(2));
  const double snake = median_final(ArchitectureSpec::random_snake(10, 3, 0));
  return {straight > snake, fmt("median final all-2 %.4f vs rand-10x3 %.4f", straight, snake)};
}

Outcome throughput() {
  const Player champ = load_champion();
  const Player swh = swh_player();
  double best = 0.0;
  for (int i = 0; i < 3; ++i) best = std::max(best, measure_throughput(champ, swh, 2.0, 1).games_per_second());
  double baseline = 0.0;
  std::ifstream in(OTHELLO_BENCH_BASELINE);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("games_per_sec=", 0) == 0) baseline = std::stod(line.substr(14));
  }
  if (baseline <= 0) return {false, "no recorded baseline in " OTHELLO_BENCH_BASELINE};
  return {best >= 1000.0 && best >= 0.85 * baseline,
          fmt("%.0f games/s on one worker (want >= 1000 and >= 85%% of recorded %.0f)", best, baseline)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"champion replay", champion_replay},
      {"architecture counts", architecture_counts},
      {"symmetric sampling example", symmetric_sampling_example},
      {"self-play calibration", self_play_calibration},
      {"rules oracle equivalence", rules_oracle},
      {"index bijectivity and symmetry invariance", index_and_invariance},
      {"format round trip", format_round_trip},
      {"learning smoke test", learning_smoke},
      {"trend check", trend_check},
      {"throughput", throughput},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::printf("%s %2zu %s: %s [%.1fs]\n", o.skipped ? "SKIP" : o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
