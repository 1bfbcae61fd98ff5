#pragma once

// Resumable training checkpoints: one network file per parent plus a small
// key=value state record and the run log so far.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "othello/evolve.hpp"
#include "othello/netfmt.hpp"

namespace othello {

namespace fs = std::filesystem;

/// Reads `key=value` lines; blank lines and lines starting with '#' are skipped.
inline std::map<std::string, std::string> read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("'" + path + "': malformed line '" + line + "'");
    out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

namespace detail {

inline std::string parent_file(std::size_t i, bool white) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "parent_%03zu%s.ntn", i, white ? ".white" : "");
  return buf;
}

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

inline GenerationRecord parse_log_row(const std::string& row) {
  GenerationRecord r;
  std::stringstream ss(row);
  std::string cell;
  std::getline(ss, cell, ',');
  r.generation = std::stoull(cell);
  std::getline(ss, cell, ',');
  r.best_fitness = std::stod(cell);
  std::getline(ss, cell, ',');
  r.mean_fitness = std::stod(cell);
  if (std::getline(ss, cell, ',') && !cell.empty()) {
    PerformanceEstimate est;
    est.mean_score = std::stod(cell);
    r.measured = est;
  }
  return r;
}

}  // namespace detail

/// Networks holding each parent's genome, in selection order.
inline std::vector<NTupleNetwork> genome_networks(const NTupleNetwork& skeleton, const Individual& ind,
                                                  Perspective perspective) {
  const std::size_t w = skeleton.weight_count();
  std::vector<NTupleNetwork> nets;
  NTupleNetwork black = skeleton;
  black.set_flat_weights(std::span<const double>(ind.genome).first(w));
  nets.push_back(std::move(black));
  if (perspective == Perspective::Doubled) {
    NTupleNetwork white = skeleton;
    white.set_flat_weights(std::span<const double>(ind.genome).subspan(w));
    nets.push_back(std::move(white));
  }
  return nets;
}

/// Writes into `dir` through a sibling temporary directory, then swaps it in.
inline void save_checkpoint(const fs::path& dir, const EsState& state, const EsProblem& problem) {
  const fs::path tmp = dir.string() + ".tmp";
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  const auto& cfg = problem.config();
  std::string record = "generation=" + std::to_string(state.generation) + "\n";
  record += "parents=" + std::to_string(state.parents.size()) + "\n";
  record += "architecture=" + cfg.architecture.name() + "\n";
  record += "perspective=" + to_string(cfg.perspective) + "\n";
  record += "seed=" + std::to_string(cfg.seed) + "\n";
  detail::write_text(tmp / "state.txt", record);
  for (std::size_t i = 0; i < state.parents.size(); ++i) {
    const auto nets = genome_networks(problem.skeleton(), state.parents[i], cfg.perspective);
    for (std::size_t k = 0; k < nets.size(); ++k) {
      detail::write_text(tmp / detail::parent_file(i, k == 1), serialize_network(nets[k]));
    }
  }
  std::string log = std::string(kRunLogCsvHeader) + "\n" + run_log_csv_row(state.log.initial) + "\n";
  for (const auto& r : state.log.generations) log += run_log_csv_row(r) + "\n";
  detail::write_text(tmp / "runlog.csv", log);
  fs::remove_all(dir);
  fs::rename(tmp, dir);
}

inline EsState load_checkpoint(const fs::path& dir, const EsProblem& problem) {
  const auto kv = read_key_values((dir / "state.txt").string());
  const auto& cfg = problem.config();
  auto get = [&](const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw std::runtime_error("checkpoint is missing '" + key + "'");
    return it->second;
  };
  if (get("architecture") != cfg.architecture.name() || get("perspective") != to_string(cfg.perspective) ||
      get("seed") != std::to_string(cfg.seed)) {
    throw std::runtime_error("checkpoint was written by a different configuration");
  }
  EsState state;
  state.generation = std::stoull(get("generation"));
  const std::size_t parents = std::stoull(get("parents"));
  for (std::size_t i = 0; i < parents; ++i) {
    Individual ind;
    const int files = cfg.perspective == Perspective::Doubled ? 2 : 1;
    for (int k = 0; k < files; ++k) {
      const NTupleNetwork net = load_network((dir / detail::parent_file(i, k == 1)).string());
      if (!net.same_architecture(problem.skeleton())) {
        throw std::runtime_error("checkpoint parent " + std::to_string(i) + " has a different architecture");
      }
      const auto w = net.flat_weights();
      ind.genome.insert(ind.genome.end(), w.begin(), w.end());
    }
    state.parents.push_back(std::move(ind));
  }
  std::ifstream log(dir / "runlog.csv");
  std::string row;
  std::getline(log, row);  // header
  bool first = true;
  while (std::getline(log, row)) {
    if (row.empty()) continue;
    GenerationRecord r = detail::parse_log_row(row);
    if (first) state.log.initial = r;
    else state.log.generations.push_back(r);
    first = false;
  }
  return state;
}

}  // namespace othello
