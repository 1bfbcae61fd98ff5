// Command-line front end: architecture generation, training, league
// evaluation, throughput benchmark and network-file tooling.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "othello/arch.hpp"
#include "othello/checkpoint.hpp"
#include "othello/evolve.hpp"
#include "othello/league.hpp"
#include "othello/netfmt.hpp"
#include "othello/parallel.hpp"

#ifndef OTHELLO_VERSION
#define OTHELLO_VERSION "dev"
#endif

namespace fs = std::filesystem;
using namespace othello;

namespace {

std::string now_utc() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

/// Fills options not given on the command line from a key=value file. Keys
/// are long option names without dashes; unknown keys are ignored.
void apply_config_file(CLI::App& app, const std::string& path) {
  for (const auto& [key, value] : read_key_values(path)) {
    CLI::Option* opt = app.get_option_no_throw("--" + key);
    if (opt == nullptr || opt->count() > 0) continue;
    opt->clear();
    opt->add_result(value);
    opt->run_callback();
  }
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// "swh", "random", a .wpc grid, or a network file.
Player load_player(const std::string& spec, const std::string& perspective, const std::string& white_path) {
  if (spec == "swh") return swh_player();
  if (spec == "random") return random_player();
  const bool wpc = has_suffix(spec, ".wpc");
  const Perspective p = perspective.empty() ? (wpc ? Perspective::OutputNegation : Perspective::BoardInversion)
                                            : parse_perspective(perspective);
  Evaluator black = wpc ? Evaluator(load_wpc(spec)) : Evaluator(load_network(spec));
  if (p == Perspective::Doubled) {
    if (white_path.empty()) throw std::invalid_argument("doubled perspective needs --white <file>");
    Evaluator white = wpc ? Evaluator(load_wpc(white_path)) : Evaluator(load_network(white_path));
    return Player::doubled(std::move(black), std::move(white));
  }
  return Player(std::move(black), p);
}

std::string player_id(const std::string& spec) {
  return spec == "swh" || spec == "random" ? spec : fs::path(spec).filename().string();
}

// ---------------------------------------------------------------------------

struct ArchArgs {
  std::string kind;
  std::vector<int> numbers;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_arch(const ArchArgs& a) {
  ArchitectureSpec spec;
  if (a.kind == "all" && a.numbers.size() == 1) {
    spec = ArchitectureSpec::all_straight(a.numbers[0]);
  } else if (a.kind == "rand" && a.numbers.size() == 2) {
    spec = ArchitectureSpec::random_snake(a.numbers[0], a.numbers[1], a.seed);
  } else {
    throw CLI::ValidationError("arch", "expected 'all N' or 'rand M N'");
  }
  const NTupleNetwork net = build_architecture(spec);
  const std::string out = a.out.empty() ? spec.name() + ".ntn" : a.out;
  save_network(net, out);
  std::printf("%zu tuples, %zu weights\n", net.tuples().size(), net.weight_count());
  return 0;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  EsConfig cfg;
  std::string arch = "all-2";
  std::string perspective = "inversion";
  std::string out_dir;
  std::string resume;
  std::string config;
  std::size_t checkpoint_every = 10;
  bool desk = false;
};

std::string manifest_text(const TrainArgs& a, const std::string& out_dir, const std::string& start,
                          const std::string& end) {
  const EsConfig& c = a.cfg;
  char buf[2048];
  std::snprintf(buf, sizeof buf,
                "# othello train manifest; replay with: othello train --config <this file> --out-dir <dir>\n"
                "tool-version=%s\ncommand=train\n"
                "arch=%s\nperspective=%s\nmu=%zu\nlambda=%zu\ngenerations=%zu\nsigma=%.17g\n"
                "init-low=%.17g\ninit-high=%.17g\nfitness-doubles=%zu\nepsilon=%.17g\nseed=%llu\n"
                "measure-interval=%zu\nmeasure-doubles=%zu\nmeasure-epsilon=%.17g\ncommon-seeds=%s\n"
                "checkpoint-every=%zu\nworkers=%u\n"
                "fitness-policy=all mu+lambda re-evaluated every generation\n"
                "start-time=%s\nend-time=%s\n"
                "output-champion=%s\noutput-runlog=%s\noutput-checkpoint=%s\n",
                OTHELLO_VERSION, a.arch.c_str(), a.perspective.c_str(), c.mu, c.lambda, c.generations, c.sigma,
                c.init_low, c.init_high, c.fitness_doubles, c.epsilon, static_cast<unsigned long long>(c.seed),
                c.measure_interval, c.measure_doubles, c.measure_epsilon, c.common_random_numbers ? "true" : "false",
                a.checkpoint_every, c.workers, start.c_str(), end.c_str(),
                (fs::path(out_dir) / "champion.ntn").string().c_str(),
                (fs::path(out_dir) / "runlog.csv").string().c_str(),
                (fs::path(out_dir) / "checkpoint").string().c_str());
  return buf;
}

int cmd_train(TrainArgs a) {
  a.cfg.architecture = ArchitectureSpec::parse(a.arch, a.cfg.seed);
  a.cfg.perspective = parse_perspective(a.perspective);
  a.perspective = to_string(a.cfg.perspective);
  const EsProblem problem(a.cfg);
  const EsConfig& c = problem.config();
  const std::string out_dir = a.out_dir.empty() ? "run-" + a.arch + "-s" + std::to_string(c.seed) : a.out_dir;
  fs::create_directories(out_dir);

  std::printf("train %s (%zu weights, perspective %s)\n", c.architecture.name().c_str(),
              problem.skeleton().weight_count(), a.perspective.c_str());
  std::printf("mu=%zu lambda=%zu sigma=%g epsilon=%g generations=%zu fitness_doubles=%zu seed=%llu%s\n", c.mu,
              c.lambda, c.sigma, c.epsilon, c.generations, c.fitness_doubles,
              static_cast<unsigned long long>(c.seed), a.desk ? " (desk preset)" : "");
  std::fflush(stdout);

  std::optional<EsState> resume;
  if (!a.resume.empty()) {
    resume = load_checkpoint(a.resume, problem);
    std::printf("resuming after generation %zu\n", resume->generation);
  }

  const std::string start = now_utc();
  const fs::path checkpoint_dir = fs::path(out_dir) / "checkpoint";
  RunHooks hooks;
  hooks.on_generation = [&](const EsState& s) {
    if (s.generation > 0) {
      const auto& r = s.log.generations.back();
      std::printf("gen %zu best %.4f mean %.4f", r.generation, r.best_fitness, r.mean_fitness);
      if (r.measured) std::printf(" performance %.4f +- %.4f", r.measured->mean_score, r.measured->ci95_halfwidth);
      std::printf("\n");
      std::fflush(stdout);
    }
    if (a.checkpoint_every > 0 && (s.generation % a.checkpoint_every == 0 || s.generation == c.generations)) {
      save_checkpoint(checkpoint_dir, s, problem);
    }
  };
  const RunResult result = run(problem, std::move(resume), hooks);

  const auto nets = genome_networks(problem.skeleton(), result.best, c.perspective);
  save_network(nets[0], (fs::path(out_dir) / "champion.ntn").string());
  if (nets.size() > 1) save_network(nets[1], (fs::path(out_dir) / "champion.white.ntn").string());
  std::ofstream log(fs::path(out_dir) / "runlog.csv");
  log << kRunLogCsvHeader << "\n";
  for (const auto& r : result.log.generations) log << run_log_csv_row(r) << "\n";
  std::ofstream(fs::path(out_dir) / "manifest.txt") << manifest_text(a, out_dir, start, now_utc());
  if (result.log.initial.measured) {
    std::printf("initial performance %.4f\n", result.log.initial.measured->mean_score);
  }
  std::printf("wrote %s\n", out_dir.c_str());
  return 0;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string player;
  std::string opponent = "swh";
  std::string perspective;
  std::string white;
  std::string opponent_perspective;
  MatchConfig match;
  unsigned workers = 1;
  std::string csv;
  std::vector<std::string> runs;
  std::string table;
  std::string label;
};

void append_line(const std::string& path, const std::string& header, const std::string& row) {
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (fresh) out << header << "\n";
  out << row << "\n";
}

int cmd_eval(const EvalArgs& a) {
  const Player opponent = load_player(a.opponent, a.opponent_perspective, "");
  std::vector<std::string> players{a.player};
  players.insert(players.end(), a.runs.begin(), a.runs.end());
  std::vector<double> means;
  std::printf("%s\n", kResultCsvHeader);
  for (const auto& spec : players) {
    const Player p = load_player(spec, a.perspective, spec == a.player ? a.white : "");
    const PerformanceEstimate est = performance(p, opponent, a.match, a.workers);
    const std::string row = result_csv_row(player_id(spec), player_id(a.opponent), a.match, est);
    std::printf("%s\n", row.c_str());
    std::fflush(stdout);
    if (!a.csv.empty()) append_line(a.csv, kResultCsvHeader, row);
    means.push_back(est.mean_score);
  }
  if (!a.table.empty()) {
    // One row per method: mean, median, then each run's score.
    std::vector<double> sorted = means;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t k = sorted.size();
    const double median = k % 2 ? sorted[k / 2] : 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]);
    double sum = 0;
    for (double m : means) sum += m;
    std::string header = "architecture,mean,median";
    for (std::size_t i = 0; i < k; ++i) header += "," + std::to_string(i);
    char buf[64];
    std::snprintf(buf, sizeof buf, ",%.5f,%.5f", sum / static_cast<double>(k), median);
    std::string row = (a.label.empty() ? player_id(a.player) : a.label) + buf;
    for (double m : means) {
      std::snprintf(buf, sizeof buf, ",%.4f", m);
      row += buf;
    }
    append_line(a.table, header, row);
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  double seconds = 5.0;
  unsigned workers = 1;
  std::string player;
};

int cmd_bench(const BenchArgs& a) {
  const Player player = a.player.empty() ? load_champion() : load_player(a.player, "", "");
  const unsigned workers = std::max(1U, a.workers);
  const Throughput t = measure_throughput(player, swh_player(), a.seconds, workers);
  const double rate = t.games_per_second();
  std::printf("games=%zu seconds=%.2f workers=%u games_per_sec=%.0f per_worker=%.0f\n", t.games, t.seconds, workers,
              rate, rate / workers);
  return 0;
}

// ---------------------------------------------------------------------------

struct FmtArgs {
  std::string mode;
  std::string path;
  std::string out;
};

int cmd_fmt(const FmtArgs& a) {
  NTupleNetwork net;
  try {
    net = load_network(a.path);
  } catch (const FormatError& e) {
    std::fprintf(stderr, "%s:%s\n", a.path.c_str(), e.what());
    return 1;
  }
  if (a.mode == "check") {
    std::printf("%s: ok, %zu tuples, %zu weights\n", a.path.c_str(), net.tuples().size(), net.weight_count());
  } else if (a.mode == "print") {
    std::printf("%zu tuples, %zu weights\n", net.tuples().size(), net.weight_count());
    for (std::size_t i = 0; i < net.tuples().size(); ++i) {
      const auto& t = net.tuples()[i];
      std::printf("tuple %zu: n=%d expansions=%zu main={", i, t.size(), t.expansions().size());
      for (int loc : t.main_locations()) std::printf(" %d", loc);
      double lo = t.lut()[0], hi = t.lut()[0];
      for (double w : t.lut()) {
        lo = std::min(lo, w);
        hi = std::max(hi, w);
      }
      std::printf(" } weights in [%g, %g]\n", lo, hi);
    }
  } else {
    const std::string text = serialize_network(net);
    if (a.out.empty()) std::fputs(text.c_str(), stdout);
    else detail::write_text(a.out, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"N-tuple network Othello players: architectures, evolution, league evaluation"};
  app.set_version_flag("--version", OTHELLO_VERSION);
  app.require_subcommand(1);
  const unsigned default_w = default_workers();

  ArchArgs arch;
  auto* arch_cmd = app.add_subcommand("arch", "Write a zero-weight network skeleton");
  arch_cmd->add_option("kind", arch.kind, "all | rand")->required()->check(CLI::IsMember({"all", "rand"}));
  arch_cmd->add_option("sizes", arch.numbers, "N for 'all', M N for 'rand'")->required();
  arch_cmd->add_option("--seed", arch.seed, "Random snake seed");
  arch_cmd->add_option("-o,--out", arch.out, "Output file (default: <arch>.ntn)");

  TrainArgs train;
  train.cfg.workers = default_w;
  auto* train_cmd = app.add_subcommand("train", "Evolve network weights against SWH");
  train_cmd->add_option("--arch", train.arch, "all-N or rand-MxN")->capture_default_str();
  train_cmd->add_option("--perspective", train.perspective, "negation | inversion | doubled")->capture_default_str();
  train_cmd->add_option("--mu", train.cfg.mu)->capture_default_str();
  train_cmd->add_option("--lambda", train.cfg.lambda)->capture_default_str();
  train_cmd->add_option("--generations", train.cfg.generations)->capture_default_str();
  train_cmd->add_option("--sigma", train.cfg.sigma)->capture_default_str();
  train_cmd->add_option("--init-low", train.cfg.init_low)->capture_default_str();
  train_cmd->add_option("--init-high", train.cfg.init_high)->capture_default_str();
  train_cmd->add_option("--fitness-doubles", train.cfg.fitness_doubles)->capture_default_str();
  train_cmd->add_option("--epsilon", train.cfg.epsilon)->capture_default_str();
  train_cmd->add_option("--seed", train.cfg.seed)->capture_default_str();
  train_cmd->add_option("--measure-interval", train.cfg.measure_interval, "0 disables")->capture_default_str();
  train_cmd->add_option("--measure-doubles", train.cfg.measure_doubles)->capture_default_str();
  train_cmd->add_option("--measure-epsilon", train.cfg.measure_epsilon)->capture_default_str();
  train_cmd->add_option("--common-seeds", train.cfg.common_random_numbers,
                        "All individuals play the same fitness games every generation")
      ->capture_default_str();
  train_cmd->add_option("--workers", train.cfg.workers, "Default from OTHELLO_WORKERS")->capture_default_str();
  train_cmd->add_option("--out-dir", train.out_dir);
  train_cmd->add_option("--checkpoint-every", train.checkpoint_every, "0 disables")->capture_default_str();
  train_cmd->add_option("--resume", train.resume, "Checkpoint directory to continue from");
  train_cmd->add_option("--config", train.config, "key=value file (flags take precedence)");
  train_cmd->add_flag("--desk", train.desk, "Desk-scale preset: 50 generations, 50 fitness doubles, 2000 measure doubles");

  EvalArgs eval;
  eval.workers = default_w;
  auto* eval_cmd = app.add_subcommand("eval", "League performance of a player against an opponent");
  eval_cmd->add_option("player", eval.player, "Network file, .wpc grid, 'swh' or 'random'")->required();
  eval_cmd->add_option("opponent", eval.opponent, "Same forms as player")->capture_default_str();
  eval_cmd->add_option("--doubles", eval.match.n_double_games)->capture_default_str();
  eval_cmd->add_option("--epsilon", eval.match.epsilon)->capture_default_str();
  eval_cmd->add_option("--seed", eval.match.master_seed)->capture_default_str();
  eval_cmd->add_option("--workers", eval.workers)->capture_default_str();
  eval_cmd->add_option("--perspective", eval.perspective, "Player perspective (default: inversion for networks)");
  eval_cmd->add_option("--white", eval.white, "White evaluator file for the doubled perspective");
  eval_cmd->add_option("--opponent-perspective", eval.opponent_perspective);
  eval_cmd->add_option("--csv", eval.csv, "Append result records to this file");
  eval_cmd->add_option("--runs", eval.runs, "Further runs of the same method");
  eval_cmd->add_option("--table", eval.table, "Append a per-method row (mean, median, per-run) to this file");
  eval_cmd->add_option("--label", eval.label, "Method name for --table");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Epsilon-Othello throughput, champion vs SWH");
  bench_cmd->add_option("seconds", bench.seconds)->capture_default_str();
  bench_cmd->add_option("--workers", bench.workers)->capture_default_str();
  bench_cmd->add_option("--player", bench.player, "Player file instead of the bundled champion");

  FmtArgs fmt;
  auto* fmt_cmd = app.add_subcommand("fmt", "Validate, summarize or normalize a network file");
  fmt_cmd->add_option("mode", fmt.mode)->required()->check(CLI::IsMember({"check", "print", "normalize"}));
  fmt_cmd->add_option("path", fmt.path)->required();
  fmt_cmd->add_option("-o,--out", fmt.out, "normalize: write here instead of stdout");

  try {
    app.parse(argc, argv);
    if (train_cmd->parsed()) {
      if (train.desk) {
        if (train_cmd->count("--generations") == 0) train.cfg.generations = 50;
        if (train_cmd->count("--fitness-doubles") == 0) train.cfg.fitness_doubles = 50;
        if (train_cmd->count("--measure-doubles") == 0) train.cfg.measure_doubles = 2000;
      }
      if (!train.config.empty()) apply_config_file(*train_cmd, train.config);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (arch_cmd->parsed()) return cmd_arch(arch);
    if (train_cmd->parsed()) return cmd_train(train);
    if (eval_cmd->parsed()) return cmd_eval(eval);
    if (bench_cmd->parsed()) return cmd_bench(bench);
    if (fmt_cmd->parsed()) return cmd_fmt(fmt);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const FormatError& e) {
    std::fprintf(stderr, "format error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
