#pragma once

// Text format for n-tuple networks:
//
//   { <tuple count>
//     { <n> <k> { loc ... } x k { 3^n weights } }
//     ...
//   }
//
// Whitespace of any kind separates tokens; braces delimit themselves.
// Expansions are taken exactly as listed. A separate plain grid of 64 numbers
// stores weighted piece counters.

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "othello/eval.hpp"

#ifndef OTHELLO_ASSET_DIR
#define OTHELLO_ASSET_DIR "assets"
#endif

namespace othello {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed token stream: unbalanced braces, bad numbers, trailing input.
class SyntaxError : public FormatError {
 public:
  SyntaxError(int line, int column, const std::string& message)
      : FormatError(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Well-formed tokens that violate the network schema; `block` is the
/// zero-based tuple block, or -1 for the document header.
class SchemaError : public FormatError {
 public:
  SchemaError(int block, const std::string& message)
      : FormatError((block < 0 ? std::string("network") : "tuple block " + std::to_string(block)) + ": " + message),
        block_(block) {}
  int block() const { return block_; }

 private:
  int block_;
};

namespace detail {

struct Token {
  enum class Kind { Open, Close, Number, End } kind = Kind::End;
  std::string_view text;
  int line = 1;
  int column = 1;
};

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() && is_space(text_[pos_])) advance();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= text_.size()) return t;
    const char ch = text_[pos_];
    if (ch == '{' || ch == '}') {
      t.kind = ch == '{' ? Token::Kind::Open : Token::Kind::Close;
      t.text = text_.substr(pos_, 1);
      advance();
      return t;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_]) && text_[pos_] != '{' && text_[pos_] != '}') advance();
    t.kind = Token::Kind::Number;
    t.text = text_.substr(start, pos_ - start);
    return t;
  }

 private:
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(text) { look_ = tokens_.next(); }

  NTupleNetwork document() {
    expect_open("network");
    const long declared = integer("tuple count");
    if (declared < 0) throw SchemaError(-1, "negative tuple count");
    std::vector<NTuple> tuples;
    while (look_.kind == Token::Kind::Open) {
      tuples.push_back(block(static_cast<int>(tuples.size())));
    }
    expect_close("network");
    if (look_.kind != Token::Kind::End) {
      throw SyntaxError(look_.line, look_.column, "unexpected input after network");
    }
    if (static_cast<long>(tuples.size()) != declared) {
      throw SchemaError(-1, "declares " + std::to_string(declared) + " tuples but contains " +
                                std::to_string(tuples.size()));
    }
    return NTupleNetwork(std::move(tuples));
  }

 private:
  NTuple block(int index) {
    expect_open("tuple block");
    block_ = index;
    const long n = integer("tuple size");
    const long k = integer("expansion count");
    if (n < 1 || n > kMaxTupleSize) throw SchemaError(index, "tuple size " + std::to_string(n) + " out of range");
    if (k < 1 || k > 8) throw SchemaError(index, "expansion count " + std::to_string(k) + " out of range 1..8");
    std::vector<LocationSequence> expansions;
    std::vector<double> weights;
    // k location lists followed by one weight list; all are brace groups.
    std::vector<std::vector<std::pair<Token, double>>> groups;
    while (look_.kind == Token::Kind::Open) groups.push_back(group());
    expect_close("tuple block");
    if (groups.size() != static_cast<std::size_t>(k) + 1) {
      throw SchemaError(index, "expected " + std::to_string(k) + " location lists and one weight list, found " +
                                   std::to_string(groups.size()) + " lists");
    }
    for (std::size_t g = 0; g < static_cast<std::size_t>(k); ++g) {
      if (groups[g].size() != static_cast<std::size_t>(n)) {
        throw SchemaError(index, "location list " + std::to_string(g) + " has " + std::to_string(groups[g].size()) +
                                     " entries, expected " + std::to_string(n));
      }
      LocationSequence locs;
      std::uint64_t mask = 0;
      for (const auto& [tok, value] : groups[g]) {
        if (value != std::floor(value) || value < 0 || value >= kBoardCells) {
          throw SchemaError(index, "location '" + std::string(tok.text) + "' is not an integer in 0..63");
        }
        const int loc = static_cast<int>(value);
        if ((mask >> loc) & 1U) throw SchemaError(index, "location " + std::to_string(loc) + " repeated");
        mask |= 1ULL << loc;
        locs.push_back(loc);
      }
      expansions.push_back(std::move(locs));
    }
    const auto& wlist = groups.back();
    if (wlist.size() != pow3(static_cast<int>(n))) {
      throw SchemaError(index, "expected " + std::to_string(pow3(static_cast<int>(n))) + " weights, found " +
                                   std::to_string(wlist.size()));
    }
    for (const auto& entry : wlist) weights.push_back(entry.second);
    return NTuple(std::move(expansions), std::move(weights));
  }

  std::vector<std::pair<Token, double>> group() {
    expect_open("list");
    std::vector<std::pair<Token, double>> out;
    while (look_.kind == Token::Kind::Number) {
      out.emplace_back(look_, number(look_));
      look_ = tokens_.next();
    }
    if (look_.kind == Token::Kind::Open) throw SyntaxError(look_.line, look_.column, "unexpected '{' inside list");
    expect_close("list");
    return out;
  }

  static double number(const Token& t) {
    std::string_view s = t.text;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw SyntaxError(t.line, t.column, "'" + std::string(t.text) + "' is not a number");
    }
    return v;
  }

  long integer(const char* what) {
    if (look_.kind != Token::Kind::Number) throw unexpected(std::string("expected ") + what);
    const double v = number(look_);
    if (v != std::floor(v) || std::fabs(v) > 1e9) {
      throw SchemaError(block_, std::string(what) + " '" + std::string(look_.text) + "' is not an integer");
    }
    look_ = tokens_.next();
    return static_cast<long>(v);
  }

  void expect_open(const char* what) {
    if (look_.kind != Token::Kind::Open) throw unexpected(std::string("expected '{' opening ") + what);
    look_ = tokens_.next();
  }

  void expect_close(const char* what) {
    if (look_.kind != Token::Kind::Close) throw unexpected(std::string("expected '}' closing ") + what);
    look_ = tokens_.next();
  }

  SyntaxError unexpected(const std::string& message) const {
    const std::string found = look_.kind == Token::Kind::End ? "end of input" : "'" + std::string(look_.text) + "'";
    return SyntaxError(look_.line, look_.column, message + ", found " + found);
  }

  Tokenizer tokens_;
  Token look_;
  int block_ = -1;
};

inline std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, ptr);
  // Keep a decimal point on integral values so weights read as reals.
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

/// Parses a whole document. Returns a network satisfying every NTuple
/// invariant or throws SyntaxError / SchemaError.
inline NTupleNetwork parse_network(std::string_view text) {
  try {
    return detail::Parser(text).document();
  } catch (const FormatError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw SchemaError(-1, e.what());
  }
}

/// Canonical layout: one tuple block per line pair, locations as integers,
/// weights in shortest round-trip decimal form.
inline std::string serialize_network(const NTupleNetwork& net) {
  std::string out = "{ " + std::to_string(net.tuples().size()) + "\n";
  for (const auto& t : net.tuples()) {
    out += "  { " + std::to_string(t.size()) + " " + std::to_string(t.expansions().size());
    for (const auto& e : t.expansions()) {
      out += " {";
      for (int loc : e) out += " " + std::to_string(loc);
      out += " }";
    }
    out += "\n    {";
    for (double w : t.lut()) out += " " + detail::format_double(w);
    out += " } }\n";
  }
  out += "}\n";
  return out;
}

inline NTupleNetwork load_network(const std::string& path) { return parse_network(detail::read_file(path)); }

inline void save_network(const NTupleNetwork& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << serialize_network(net);
}

/// 64 whitespace-separated numbers, rank 1 first.
inline WpcWeights parse_wpc(std::string_view text) {
  detail::Tokenizer tokens(text);
  WpcWeights w;
  std::size_t count = 0;
  for (detail::Token t = tokens.next(); t.kind != detail::Token::Kind::End; t = tokens.next()) {
    if (t.kind != detail::Token::Kind::Number) throw SyntaxError(t.line, t.column, "unexpected brace in WPC grid");
    if (count == kBoardCells) throw SchemaError(-1, "WPC grid has more than 64 weights");
    std::string_view s = t.text;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw SyntaxError(t.line, t.column, "'" + std::string(t.text) + "' is not a number");
    }
    w.w[count++] = v;
  }
  if (count != kBoardCells) throw SchemaError(-1, "WPC grid has " + std::to_string(count) + " weights, expected 64");
  return w;
}

inline std::string serialize_wpc(const WpcWeights& w) {
  std::string out;
  for (int r = 0; r < kBoardSide; ++r) {
    for (int c = 0; c < kBoardSide; ++c) {
      if (c) out += ' ';
      out += detail::format_double(w.w[static_cast<std::size_t>(location(r, c))]);
    }
    out += '\n';
  }
  return out;
}

inline WpcWeights load_wpc(const std::string& path) { return parse_wpc(detail::read_file(path)); }

inline std::string asset_path(const std::string& name) { return std::string(OTHELLO_ASSET_DIR) + "/" + name; }

/// The bundled evolved all-2 network, played with board inversion.
inline Player load_champion(const std::string& path = asset_path("all2-champion.ntn")) {
  return Player(load_network(path), Perspective::BoardInversion);
}

}  // namespace othello
