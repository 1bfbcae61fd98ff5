#pragma once

// Network skeletons: systematic straight n-tuples and random snake-shaped
// n-tuples. All lookup tables start at zero.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "othello/eval.hpp"
#include "othello/random.hpp"

namespace othello {

struct ArchitectureSpec {
  enum class Kind : std::uint8_t { AllStraight, RandomSnake };

  Kind kind = Kind::AllStraight;
  int n = 2;
  int m = 1;               // RandomSnake only
  std::uint64_t seed = 0;  // RandomSnake only

  static ArchitectureSpec all_straight(int n) { return validated({Kind::AllStraight, n, 1, 0}); }
  static ArchitectureSpec random_snake(int m, int n, std::uint64_t seed) {
    return validated({Kind::RandomSnake, n, m, seed});
  }

  /// Accepts "all-N" and "rand-MxN".
  static ArchitectureSpec parse(const std::string& text, std::uint64_t seed = 0) {
    try {
      if (text.rfind("all-", 0) == 0) {
        std::size_t used = 0;
        const int n = std::stoi(text.substr(4), &used);
        if (used + 4 == text.size()) return all_straight(n);
      } else if (text.rfind("rand-", 0) == 0) {
        const auto x = text.find('x', 5);
        if (x != std::string::npos) {
          std::size_t used_m = 0;
          std::size_t used_n = 0;
          const int m = std::stoi(text.substr(5, x - 5), &used_m);
          const int n = std::stoi(text.substr(x + 1), &used_n);
          if (used_m == x - 5 && x + 1 + used_n == text.size()) return random_snake(m, n, seed);
        }
      }
    } catch (const std::logic_error&) {
    }
    throw std::invalid_argument("bad architecture '" + text + "' (expected all-N or rand-MxN)");
  }

  std::string name() const {
    return kind == Kind::AllStraight ? "all-" + std::to_string(n)
                                     : "rand-" + std::to_string(m) + "x" + std::to_string(n);
  }

 private:
  static ArchitectureSpec validated(ArchitectureSpec s) {
    if (s.n < 1 || s.n > kBoardSide) throw std::invalid_argument("tuple length must be in 1..8");
    if (s.kind == Kind::RandomSnake && (s.m < 1 || s.n < 2)) {
      throw std::invalid_argument("random snake networks need m >= 1 and n >= 2");
    }
    return s;
  }
};

/// Every straight horizontal, vertical or diagonal run of n cells, each listed
/// once with ascending locations.
inline std::vector<LocationSequence> straight_runs(int n) {
  static constexpr int kDirs[4][2] = {{0, 1}, {1, 0}, {1, 1}, {1, -1}};
  std::vector<LocationSequence> runs;
  std::vector<std::uint64_t> seen;
  for (int r = 0; r < kBoardSide; ++r) {
    for (int c = 0; c < kBoardSide; ++c) {
      for (const auto& d : kDirs) {
        const int end_r = r + d[0] * (n - 1);
        const int end_c = c + d[1] * (n - 1);
        if (end_r < 0 || end_r >= kBoardSide || end_c < 0 || end_c >= kBoardSide) continue;
        LocationSequence run;
        std::uint64_t mask = 0;
        for (int j = 0; j < n; ++j) {
          const int loc = location(r + d[0] * j, c + d[1] * j);
          run.push_back(loc);
          mask |= 1ULL << loc;
        }
        // n == 1 yields the same cell in every direction.
        if (std::find(seen.begin(), seen.end(), mask) != seen.end()) continue;
        seen.push_back(mask);
        runs.push_back(std::move(run));
      }
    }
  }
  return runs;
}

/// One tuple per symmetry orbit of straight runs. The main tuple is the
/// lexicographically smallest run of its orbit; tuples are ordered by main.
inline NTupleNetwork all_straight(int n) {
  if (n < 1 || n > kBoardSide) throw std::invalid_argument("tuple length must be in 1..8");
  std::vector<LocationSequence> runs = straight_runs(n);
  std::sort(runs.begin(), runs.end());
  std::vector<std::uint64_t> covered;
  std::vector<NTuple> tuples;
  for (const auto& run : runs) {
    std::uint64_t mask = 0;
    for (int loc : run) mask |= 1ULL << loc;
    if (std::find(covered.begin(), covered.end(), mask) != covered.end()) continue;
    NTuple t = NTuple::symmetric(run);
    for (const auto& e : t.expansions()) {
      std::uint64_t m = 0;
      for (int loc : e) m |= 1ULL << loc;
      covered.push_back(m);
    }
    tuples.push_back(std::move(t));
  }
  return NTupleNetwork(std::move(tuples));
}

/// m snake-shaped tuples. Each walk starts on a uniform random cell and steps
/// to a uniformly chosen on-board king neighbour; cells already in the tuple
/// are stepped over without being added, until n distinct cells are collected.
inline NTupleNetwork rand_snake(int m, int n, RandomStream& rng) {
  if (m < 1 || n < 2 || n > kBoardSide) throw std::invalid_argument("rand_snake needs m >= 1 and 2 <= n <= 8");
  std::vector<NTuple> tuples;
  tuples.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    int cur = static_cast<int>(rng.below(kBoardCells));
    LocationSequence seq{cur};
    std::uint64_t used = 1ULL << cur;
    while (static_cast<int>(seq.size()) < n) {
      int neighbours[8];
      int count = 0;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const int r = row_of(cur) + dr;
          const int c = col_of(cur) + dc;
          if ((dr != 0 || dc != 0) && r >= 0 && r < kBoardSide && c >= 0 && c < kBoardSide) {
            neighbours[count++] = location(r, c);
          }
        }
      }
      cur = neighbours[rng.below(static_cast<std::uint32_t>(count))];
      if (!((used >> cur) & 1U)) {
        used |= 1ULL << cur;
        seq.push_back(cur);
      }
    }
    tuples.push_back(NTuple::symmetric(seq));
  }
  return NTupleNetwork(std::move(tuples));
}

inline NTupleNetwork build_architecture(const ArchitectureSpec& spec) {
  if (spec.kind == ArchitectureSpec::Kind::AllStraight) return all_straight(spec.n);
  RandomStream rng(spec.seed);
  return rand_snake(spec.m, spec.n, rng);
}

}  // namespace othello
