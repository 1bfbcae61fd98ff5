#pragma once

// Othello rules on a pair of 64-bit occupancy planes.
//
// Locations are numbered 8 * row + col with row 0 = rank 1, so a1 = 0,
// h1 = 7, a8 = 56, h8 = 63. Bit `loc` of a plane is set iff the disc on
// `loc` belongs to that plane's color.

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "othello/random.hpp"

namespace othello {

inline constexpr int kBoardSide = 8;
inline constexpr int kBoardCells = 64;

/// Encoding used directly by n-tuple indexing.
enum class CellState : std::uint8_t { White = 0, Empty = 1, Black = 2 };

enum class Color : std::uint8_t { Black, White };

constexpr Color opposite(Color c) { return c == Color::Black ? Color::White : Color::Black; }

/// +1 for black, -1 for white; the sign convention of the weighted piece counter.
constexpr int to_wpc_sign(Color c) { return c == Color::Black ? 1 : -1; }

constexpr int row_of(int loc) { return loc / kBoardSide; }
constexpr int col_of(int loc) { return loc % kBoardSide; }
constexpr int location(int row, int col) { return row * kBoardSide + col; }

class IllegalMove : public std::logic_error {
 public:
  explicit IllegalMove(const std::string& what) : std::logic_error(what) {}
};

/// Set of board locations as a bitmask.
class LocationSet {
 public:
  constexpr LocationSet() = default;
  constexpr explicit LocationSet(std::uint64_t bits) : bits_(bits) {}

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(int loc) const { return (bits_ >> loc) & 1U; }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  /// The k-th location in ascending order; k < size().
  int nth(int k) const {
    std::uint64_t b = bits_;
    for (; k > 0; --k) b &= b - 1;
    return std::countr_zero(b);
  }

  constexpr bool operator==(const LocationSet&) const = default;

 private:
  std::uint64_t bits_ = 0;
};

class Board {
 public:
  constexpr Board() = default;
  constexpr Board(std::uint64_t black, std::uint64_t white) : black_(black), white_(white & ~black) {}

  static constexpr Board initial() {
    // white on d4, e5; black on e4, d5
    return Board((1ULL << 28) | (1ULL << 35), (1ULL << 27) | (1ULL << 36));
  }

  constexpr std::uint64_t black() const { return black_; }
  constexpr std::uint64_t white() const { return white_; }
  constexpr std::uint64_t plane(Color c) const { return c == Color::Black ? black_ : white_; }
  constexpr std::uint64_t occupied() const { return black_ | white_; }
  constexpr std::uint64_t empty_cells() const { return ~occupied(); }

  constexpr CellState at(int loc) const {
    return static_cast<CellState>(1 + static_cast<int>((black_ >> loc) & 1U) -
                                  static_cast<int>((white_ >> loc) & 1U));
  }

  constexpr Board with(int loc, CellState s) const {
    const std::uint64_t bit = 1ULL << loc;
    Board b(black_ & ~bit, white_ & ~bit);
    if (s == CellState::Black) b.black_ |= bit;
    if (s == CellState::White) b.white_ |= bit;
    return b;
  }

  constexpr int count(Color c) const { return std::popcount(plane(c)); }
  constexpr int disc_total() const { return std::popcount(occupied()); }

  constexpr bool operator==(const Board&) const = default;

  /// Rows listed from rank 8 down to rank 1, 'X' black, 'O' white, '.' empty.
  std::string to_string() const {
    std::string s;
    for (int r = kBoardSide - 1; r >= 0; --r) {
      for (int c = 0; c < kBoardSide; ++c) {
        const CellState v = at(location(r, c));
        s += v == CellState::Black ? 'X' : v == CellState::White ? 'O' : '.';
      }
      s += '\n';
    }
    return s;
  }

 private:
  std::uint64_t black_ = 0;
  std::uint64_t white_ = 0;
};

constexpr Board initial_board() { return Board::initial(); }

struct DiscCount {
  int black = 0;
  int white = 0;
  constexpr bool operator==(const DiscCount&) const = default;
};

constexpr DiscCount disc_count(const Board& b) { return {b.count(Color::Black), b.count(Color::White)}; }

/// Black <-> White, empty unchanged.
constexpr Board invert(const Board& b) { return Board(b.white(), b.black()); }

namespace detail {

inline constexpr std::uint64_t kNotFileA = 0xfefefefefefefefeULL;
inline constexpr std::uint64_t kNotFileH = 0x7f7f7f7f7f7f7f7fULL;

// Direction index: 0 E, 1 W, 2 N (row+1), 3 S, 4 NE, 5 NW, 6 SE, 7 SW.
template <int Dir>
constexpr std::uint64_t shift(std::uint64_t b) {
  if constexpr (Dir == 0) return (b << 1) & kNotFileA;
  else if constexpr (Dir == 1) return (b >> 1) & kNotFileH;
  else if constexpr (Dir == 2) return b << 8;
  else if constexpr (Dir == 3) return b >> 8;
  else if constexpr (Dir == 4) return (b << 9) & kNotFileA;
  else if constexpr (Dir == 5) return (b << 7) & kNotFileH;
  else if constexpr (Dir == 6) return (b >> 7) & kNotFileA;
  else return (b >> 9) & kNotFileH;
}

template <int Dir>
constexpr std::uint64_t moves_along(std::uint64_t own, std::uint64_t opp, std::uint64_t empty) {
  std::uint64_t x = shift<Dir>(own) & opp;
  x |= shift<Dir>(x) & opp;
  x |= shift<Dir>(x) & opp;
  x |= shift<Dir>(x) & opp;
  x |= shift<Dir>(x) & opp;
  x |= shift<Dir>(x) & opp;
  return shift<Dir>(x) & empty;
}

template <int Dir>
constexpr std::uint64_t flips_along(std::uint64_t own, std::uint64_t opp, std::uint64_t start) {
  std::uint64_t run = 0;
  std::uint64_t m = shift<Dir>(start);
  while (m & opp) {
    run |= m;
    m = shift<Dir>(m);
  }
  return (m & own) ? run : 0;
}

constexpr std::uint64_t move_mask(std::uint64_t own, std::uint64_t opp) {
  const std::uint64_t empty = ~(own | opp);
  return moves_along<0>(own, opp, empty) | moves_along<1>(own, opp, empty) | moves_along<2>(own, opp, empty) |
         moves_along<3>(own, opp, empty) | moves_along<4>(own, opp, empty) | moves_along<5>(own, opp, empty) |
         moves_along<6>(own, opp, empty) | moves_along<7>(own, opp, empty);
}

constexpr std::uint64_t flip_mask(std::uint64_t own, std::uint64_t opp, int loc) {
  const std::uint64_t start = 1ULL << loc;
  return flips_along<0>(own, opp, start) | flips_along<1>(own, opp, start) | flips_along<2>(own, opp, start) |
         flips_along<3>(own, opp, start) | flips_along<4>(own, opp, start) | flips_along<5>(own, opp, start) |
         flips_along<6>(own, opp, start) | flips_along<7>(own, opp, start);
}

}  // namespace detail

constexpr LocationSet legal_moves(const Board& b, Color c) {
  return LocationSet(detail::move_mask(b.plane(c), b.plane(opposite(c))));
}

constexpr bool has_legal_move(const Board& b, Color c) { return !legal_moves(b, c).empty(); }

/// Places a disc of `c` on `loc` and flips every bracketed opponent run.
constexpr Board apply_move(const Board& b, Color c, int loc) {
  if (loc < 0 || loc >= kBoardCells || ((b.occupied() >> loc) & 1U)) {
    throw IllegalMove("location " + std::to_string(loc) + " is not empty");
  }
  const std::uint64_t own = b.plane(c);
  const std::uint64_t opp = b.plane(opposite(c));
  const std::uint64_t flips = detail::flip_mask(own, opp, loc);
  if (flips == 0) throw IllegalMove("location " + std::to_string(loc) + " flips nothing");
  const std::uint64_t new_own = own | flips | (1ULL << loc);
  const std::uint64_t new_opp = opp & ~flips;
  return c == Color::Black ? Board(new_own, new_opp) : Board(new_opp, new_own);
}

// ---------------------------------------------------------------------------
// Symmetries of the square

/// The 8 dihedral transforms. Rotations are clockwise when the board is drawn
/// with rank 8 at the top.
enum class Symmetry : std::uint8_t {
  Identity,
  Rot90,
  Rot180,
  Rot270,
  FlipRows,     // rank r -> rank 9 - r
  FlipCols,     // file a <-> file h
  Transpose,    // a1-h8 diagonal
  AntiTranspose // a8-h1 diagonal
};

inline constexpr std::array<Symmetry, 8> kAllSymmetries = {
    Symmetry::Identity, Symmetry::Rot90,    Symmetry::Rot180,    Symmetry::Rot270,
    Symmetry::FlipRows, Symmetry::FlipCols, Symmetry::Transpose, Symmetry::AntiTranspose};

constexpr int transform_loc(int loc, Symmetry s) {
  const int r = row_of(loc);
  const int c = col_of(loc);
  constexpr int m = kBoardSide - 1;
  switch (s) {
    case Symmetry::Identity: return location(r, c);
    case Symmetry::Rot90: return location(m - c, r);
    case Symmetry::Rot180: return location(m - r, m - c);
    case Symmetry::Rot270: return location(c, m - r);
    case Symmetry::FlipRows: return location(m - r, c);
    case Symmetry::FlipCols: return location(r, m - c);
    case Symmetry::Transpose: return location(c, r);
    case Symmetry::AntiTranspose: return location(m - c, m - r);
  }
  return loc;
}

/// The transform applying `second` after `first`.
constexpr Symmetry compose(Symmetry first, Symmetry second) {
  // Two non-collinear probe cells determine a dihedral transform.
  const int p = transform_loc(transform_loc(1, first), second);
  const int q = transform_loc(transform_loc(8 * 2, first), second);
  for (Symmetry s : kAllSymmetries) {
    if (transform_loc(1, s) == p && transform_loc(16, s) == q) return s;
  }
  return Symmetry::Identity;
}

constexpr Symmetry inverse(Symmetry s) {
  for (Symmetry t : kAllSymmetries) {
    if (compose(s, t) == Symmetry::Identity) return t;
  }
  return Symmetry::Identity;
}

constexpr std::uint64_t transform_bits(std::uint64_t bits, Symmetry s) {
  std::uint64_t out = 0;
  for (; bits != 0; bits &= bits - 1) out |= 1ULL << transform_loc(std::countr_zero(bits), s);
  return out;
}

constexpr Board transform(const Board& b, Symmetry s) {
  return Board(transform_bits(b.black(), s), transform_bits(b.white(), s));
}

constexpr LocationSet transform(LocationSet set, Symmetry s) {
  return LocationSet(transform_bits(set.bits(), s));
}

// ---------------------------------------------------------------------------
// Playing a game

enum class Winner : std::uint8_t { Black, White, Draw };

struct GameOutcome {
  int black_discs = 0;
  int white_discs = 0;
  Winner winner = Winner::Draw;
  int placements = 0;
  constexpr bool operator==(const GameOutcome&) const = default;
};

constexpr GameOutcome outcome_of(const Board& b, int placements = 0) {
  const int black = b.count(Color::Black);
  const int white = b.count(Color::White);
  const Winner w = black > white ? Winner::Black : white > black ? Winner::White : Winner::Draw;
  return {black, white, w, placements};
}

/// Move selector: callable as `int(const Board&, Color, RandomStream&)`,
/// returning a legal location. Called only when a legal move exists.
template <class F>
concept MoveSelector = requires(F f, const Board& b, Color c, RandomStream& rng) {
  { f(b, c, rng) } -> std::convertible_to<int>;
};

/// Plays one epsilon-Othello game from `start` with `to_move` first. Each turn
/// with a legal move flips one epsilon coin; on success a uniformly random
/// legal move is played, otherwise the selector picks. A turn without legal
/// moves is a pass and consumes no randomness. Two consecutive passes end the
/// game.
template <MoveSelector BlackSel, MoveSelector WhiteSel>
GameOutcome play_game(BlackSel&& black, WhiteSel&& white, double epsilon, RandomStream& rng,
                      Board start = initial_board(), Color to_move = Color::Black) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must be in [0, 1]");
  Board board = start;
  Color side = to_move;
  int passes = 0;
  int placements = 0;
  while (passes < 2) {
    const LocationSet moves = legal_moves(board, side);
    if (moves.empty()) {
      ++passes;
      side = opposite(side);
      continue;
    }
    passes = 0;
    int loc;
    if (epsilon > 0.0 && rng.bernoulli(epsilon)) {
      loc = moves.nth(static_cast<int>(rng.below(static_cast<std::uint32_t>(moves.size()))));
    } else {
      loc = side == Color::Black ? static_cast<int>(black(board, side, rng))
                                 : static_cast<int>(white(board, side, rng));
      if (loc < 0 || loc >= kBoardCells || !moves.contains(loc)) {
        throw IllegalMove("selector returned illegal move " + std::to_string(loc));
      }
    }
    board = apply_move(board, side, loc);
    ++placements;
    side = opposite(side);
  }
  return outcome_of(board, placements);
}

}  // namespace othello
