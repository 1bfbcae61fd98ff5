#pragma once

// Position evaluation: weighted piece counters, n-tuple networks with
// symmetric sampling, and the 1-ply move selector.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "othello/game.hpp"
#include "othello/random.hpp"

namespace othello {

// ---------------------------------------------------------------------------
// Weighted piece counter

struct WpcWeights {
  std::array<double, kBoardCells> w{};
  bool operator==(const WpcWeights&) const = default;
};

/// Standard WPC Heuristic weights, rank 1 first. The table is symmetric under
/// all 8 transforms so the orientation is immaterial.
inline WpcWeights swh_weights() {
  return WpcWeights{{
      1.00,  -0.25, 0.10, 0.05, 0.05, 0.10, -0.25, 1.00,   //
      -0.25, -0.25, 0.01, 0.01, 0.01, 0.01, -0.25, -0.25,  //
      0.10,  0.01,  0.05, 0.02, 0.02, 0.05, 0.01,  0.10,   //
      0.05,  0.01,  0.02, 0.01, 0.01, 0.02, 0.01,  0.05,   //
      0.05,  0.01,  0.02, 0.01, 0.01, 0.02, 0.01,  0.05,   //
      0.10,  0.01,  0.05, 0.02, 0.02, 0.05, 0.01,  0.10,   //
      -0.25, -0.25, 0.01, 0.01, 0.01, 0.01, -0.25, -0.25,  //
      1.00,  -0.25, 0.10, 0.05, 0.05, 0.10, -0.25, 1.00,   //
  }};
}

inline double wpc_value(const WpcWeights& weights, const Board& b) {
  // Separate sums, so invert(b) evaluates to exactly -value.
  double black = 0.0;
  double white = 0.0;
  for (std::uint64_t bits = b.black(); bits != 0; bits &= bits - 1) black += weights.w[std::countr_zero(bits)];
  for (std::uint64_t bits = b.white(); bits != 0; bits &= bits - 1) white += weights.w[std::countr_zero(bits)];
  return black - white;
}

// ---------------------------------------------------------------------------
// N-tuples

inline constexpr int kCellValues = 3;
inline constexpr int kMaxTupleSize = 12;

constexpr std::size_t pow3(int n) {
  std::size_t p = 1;
  for (int i = 0; i < n; ++i) p *= kCellValues;
  return p;
}

/// Base-c index of a pattern; the first value is the least-significant digit.
inline std::size_t tuple_index(std::span<const int> pattern, int base = kCellValues) {
  std::size_t index = 0;
  std::size_t weight = 1;
  for (int v : pattern) {
    if (v < 0 || v >= base) throw std::invalid_argument("pattern value out of range");
    index += static_cast<std::size_t>(v) * weight;
    weight *= static_cast<std::size_t>(base);
  }
  return index;
}

using LocationSequence = std::vector<int>;

/// Images of `main` under the 8 symmetries, main first, each distinct
/// ordered sequence once. A self-symmetric set such as {28, 35} appears in
/// both reading orders.
inline std::vector<LocationSequence> expand_symmetries(const LocationSequence& main) {
  std::vector<LocationSequence> out;
  for (Symmetry s : kAllSymmetries) {
    LocationSequence image;
    image.reserve(main.size());
    for (int loc : main) image.push_back(transform_loc(loc, s));
    if (std::find(out.begin(), out.end(), image) == out.end()) out.push_back(std::move(image));
  }
  return out;
}

class NTuple {
 public:
  /// Validates every invariant; throws std::invalid_argument otherwise.
  NTuple(std::vector<LocationSequence> expansions, std::vector<double> lut)
      : expansions_(std::move(expansions)), lut_(std::move(lut)) {
    if (expansions_.empty() || expansions_.size() > 8) {
      throw std::invalid_argument("n-tuple needs between 1 and 8 expansions");
    }
    const std::size_t n = expansions_.front().size();
    if (n < 1 || n > static_cast<std::size_t>(kMaxTupleSize)) {
      throw std::invalid_argument("n-tuple size must be in 1.." + std::to_string(kMaxTupleSize));
    }
    for (const auto& e : expansions_) {
      if (e.size() != n) throw std::invalid_argument("expansion length differs from main tuple");
      std::uint64_t mask = 0;
      for (int loc : e) {
        if (loc < 0 || loc >= kBoardCells) throw std::invalid_argument("location out of range");
        if ((mask >> loc) & 1U) throw std::invalid_argument("repeated location in expansion");
        mask |= 1ULL << loc;
      }
    }
    if (lut_.size() != pow3(static_cast<int>(n))) {
      throw std::invalid_argument("lookup table must hold 3^n values");
    }
    for (double v : lut_) {
      if (!std::isfinite(v)) throw std::invalid_argument("lookup table value is not finite");
    }
    cells_.reserve(n * expansions_.size());
    for (const auto& e : expansions_) cells_.insert(cells_.end(), e.begin(), e.end());
  }

  /// Main sequence expanded by symmetry, zero lookup table.
  static NTuple symmetric(const LocationSequence& main) {
    return NTuple(expand_symmetries(main), std::vector<double>(pow3(static_cast<int>(main.size())), 0.0));
  }

  int size() const { return static_cast<int>(expansions_.front().size()); }
  const LocationSequence& main_locations() const { return expansions_.front(); }
  const std::vector<LocationSequence>& expansions() const { return expansions_; }
  std::span<const double> lut() const { return lut_; }
  std::span<double> lut() { return lut_; }

  std::size_t index_at(const Board& b, const LocationSequence& expansion) const {
    std::size_t index = 0;
    std::size_t weight = 1;
    for (int loc : expansion) {
      index += static_cast<std::size_t>(b.at(loc)) * weight;
      weight *= kCellValues;
    }
    return index;
  }

  /// Sum of lookup-table values over all expansions.
  double value(const Board& b) const {
    const std::uint64_t black = b.black();
    const std::uint64_t white = b.white();
    const std::size_t n = expansions_.front().size();
    double v = 0.0;
    for (auto it = cells_.begin(); it != cells_.end();) {
      std::size_t index = 0;
      std::size_t weight = 1;
      for (std::size_t j = 0; j < n; ++j, ++it) {
        const unsigned loc = *it;
        index += (1U + ((black >> loc) & 1U) - ((white >> loc) & 1U)) * weight;
        weight *= kCellValues;
      }
      v += lut_[index];
    }
    return v;
  }

  bool operator==(const NTuple& other) const {
    return expansions_ == other.expansions_ && lut_ == other.lut_;
  }

 private:
  std::vector<LocationSequence> expansions_;
  std::vector<double> lut_;
  std::vector<std::uint8_t> cells_;  // expansions, concatenated
};

class NTupleNetwork {
 public:
  NTupleNetwork() = default;
  explicit NTupleNetwork(std::vector<NTuple> tuples) : tuples_(std::move(tuples)) {}

  const std::vector<NTuple>& tuples() const { return tuples_; }
  std::vector<NTuple>& tuples() { return tuples_; }

  std::size_t weight_count() const {
    std::size_t total = 0;
    for (const auto& t : tuples_) total += t.lut().size();
    return total;
  }

  std::vector<double> flat_weights() const {
    std::vector<double> out;
    out.reserve(weight_count());
    for (const auto& t : tuples_) out.insert(out.end(), t.lut().begin(), t.lut().end());
    return out;
  }

  void set_flat_weights(std::span<const double> weights) {
    if (weights.size() != weight_count()) throw std::invalid_argument("genome length mismatch");
    auto it = weights.begin();
    for (auto& t : tuples_) {
      std::copy_n(it, t.lut().size(), t.lut().begin());
      it += static_cast<std::ptrdiff_t>(t.lut().size());
    }
  }

  /// True iff both networks have the same tuples and expansions.
  bool same_architecture(const NTupleNetwork& other) const {
    if (tuples_.size() != other.tuples_.size()) return false;
    for (std::size_t i = 0; i < tuples_.size(); ++i) {
      if (tuples_[i].expansions() != other.tuples_[i].expansions()) return false;
    }
    return true;
  }

  bool operator==(const NTupleNetwork&) const = default;

 private:
  std::vector<NTuple> tuples_;
};

inline double network_value(const NTupleNetwork& net, const Board& b) {
  double v = 0.0;
  for (const auto& t : net.tuples()) v += t.value(b);
  return v;
}

inline std::size_t weight_count(const NTupleNetwork& net) { return net.weight_count(); }

// ---------------------------------------------------------------------------
// Players

using Evaluator = std::variant<WpcWeights, NTupleNetwork>;

inline double evaluate(const Evaluator& e, const Board& b) {
  if (const auto* w = std::get_if<WpcWeights>(&e)) return wpc_value(*w, b);
  return network_value(std::get<NTupleNetwork>(e), b);
}

/// How a single evaluator is interpreted when its owner plays white.
enum class Perspective : std::uint8_t { OutputNegation, BoardInversion, Doubled };

inline std::string to_string(Perspective p) {
  switch (p) {
    case Perspective::OutputNegation: return "negation";
    case Perspective::BoardInversion: return "inversion";
    case Perspective::Doubled: return "doubled";
  }
  return "?";
}

inline Perspective parse_perspective(const std::string& s) {
  if (s == "negation" || s == "neg") return Perspective::OutputNegation;
  if (s == "inversion" || s == "inv") return Perspective::BoardInversion;
  if (s == "doubled") return Perspective::Doubled;
  throw std::invalid_argument("unknown perspective '" + s + "'");
}

class NoLegalMove : public std::logic_error {
 public:
  NoLegalMove() : std::logic_error("no legal move available") {}
};

class Player {
 public:
  Player(Evaluator evaluator, Perspective perspective) : black_(std::move(evaluator)), perspective_(perspective) {
    if (perspective == Perspective::Doubled) {
      throw std::invalid_argument("doubled players need a white evaluator; use Player::doubled");
    }
  }

  static Player doubled(Evaluator black, Evaluator white) {
    if (black.index() != white.index()) throw std::invalid_argument("doubled evaluators differ in kind");
    if (const auto* n = std::get_if<NTupleNetwork>(&black)) {
      if (!n->same_architecture(std::get<NTupleNetwork>(white))) {
        throw std::invalid_argument("doubled networks differ in architecture");
      }
    }
    Player p(std::move(black), Perspective::OutputNegation);
    p.perspective_ = Perspective::Doubled;
    p.white_ = std::move(white);
    return p;
  }

  const Evaluator& evaluator() const { return black_; }
  const Evaluator& white_evaluator() const { return white_ ? *white_ : black_; }
  Perspective perspective() const { return perspective_; }

  /// Value of an after-state from the point of view of `mover`; larger is better.
  double utility(const Board& after, Color mover) const {
    if (mover == Color::Black) return evaluate(black_, after);
    switch (perspective_) {
      case Perspective::OutputNegation: return -evaluate(black_, after);
      case Perspective::BoardInversion: return evaluate(black_, invert(after));
      case Perspective::Doubled: return evaluate(*white_, after);
    }
    return 0.0;
  }

  int operator()(const Board& b, Color c, RandomStream& rng) const;

 private:
  Evaluator black_;
  Perspective perspective_;
  std::optional<Evaluator> white_;
};

/// 1-ply greedy choice over after-states, moves scanned in ascending location
/// order. Equal values are broken uniformly at random by reservoir sampling,
/// which consumes one draw per tie encountered.
inline int select_move(const Player& p, const Board& b, Color c, RandomStream& rng) {
  const LocationSet moves = legal_moves(b, c);
  if (moves.empty()) throw NoLegalMove();
  std::uint64_t bits = moves.bits();
  int best = std::countr_zero(bits);
  if ((bits & (bits - 1)) == 0) return best;
  double best_value = p.utility(apply_move(b, c, best), c);
  std::uint32_t ties = 1;
  for (bits &= bits - 1; bits != 0; bits &= bits - 1) {
    const int loc = std::countr_zero(bits);
    const double v = p.utility(apply_move(b, c, loc), c);
    if (v > best_value) {
      best_value = v;
      best = loc;
      ties = 1;
    } else if (v == best_value) {
      ++ties;
      if (rng.below(ties) == 0) best = loc;
    }
  }
  return best;
}

inline int Player::operator()(const Board& b, Color c, RandomStream& rng) const { return select_move(*this, b, c, rng); }

}  // namespace othello
