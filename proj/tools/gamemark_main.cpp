#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gamemark/error.hpp"

#include "gamemark/chess/pgn.hpp"
#include "gamemark/chess/position.hpp"
#include "gamemark/detect/detect.hpp"
#include "gamemark/efg/games.hpp"
#include "gamemark/efg/random_tree.hpp"
#include "gamemark/efg/verify.hpp"
#include "gamemark/match/harness.hpp"
#include "gamemark/match/synthetic.hpp"
#include "gamemark/uci/proxy.hpp"

using namespace gamemark;

namespace {

// Exit codes for `detect`, so scripts can branch on the verdict.
constexpr int kExitNotDetected = 0;
constexpr int kExitDetected = 2;
constexpr int kExitInsufficient = 3;

std::string key_from_env() {
  const char* key = std::getenv("GAMEMARK_KEY");
  return key == nullptr ? std::string{} : std::string(key);
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> values;
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) values.push_back(std::stod(item));
  }
  return values;
}

// A minimal static line chart: one polyline per series plus the threshold.
void write_z_svg(const std::string& path, const std::vector<double>& z_series,
                 double threshold) {
  std::ofstream out(path);
  if (!out) throw gamemark::ParseError("svg: cannot write " + path);
  const int width = 640, height = 360, pad = 40;
  double z_max = threshold + 1.0, z_min = 0.0;
  for (double z : z_series) {
    z_max = std::max(z_max, z + 1.0);
    z_min = std::min(z_min, z - 1.0);
  }
  const auto x_of = [&](std::size_t i) {
    const double frac = z_series.size() <= 1 ? 0.0 : double(i) / double(z_series.size() - 1);
    return pad + frac * (width - 2 * pad);
  };
  const auto y_of = [&](double z) {
    return height - pad - (z - z_min) / (z_max - z_min) * (height - 2 * pad);
  };
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<line x1='" << pad << "' y1='" << y_of(threshold) << "' x2='"
      << width - pad << "' y2='" << y_of(threshold)
      << "' stroke='crimson' stroke-dasharray='6,4'/>\n";
  out << "<text x='" << width - pad + 4 << "' y='" << y_of(threshold) + 4
      << "' font-size='12'>z=" << threshold << "</text>\n";
  out << "<polyline fill='none' stroke='steelblue' stroke-width='2' points='";
  for (std::size_t i = 0; i < z_series.size(); ++i)
    out << x_of(i) << ',' << y_of(z_series[i]) << ' ';
  out << "'/>\n";
  out << "<line x1='" << pad << "' y1='" << y_of(0) << "' x2='" << width - pad
      << "' y2='" << y_of(0) << "' stroke='gray'/>\n"
      << "</svg>\n";
}

int run_detect(const std::string& trace_path, const std::string& pgn_path,
               wm::WatermarkParams params, int player, const std::string& side,
               double threshold, const std::string& csv_path,
               const std::string& svg_path) {
  std::vector<detect::MoveRecord> records;
  if (!trace_path.empty()) {
    records = detect::read_trace_file(trace_path);
  } else {
    std::ifstream in(pgn_path);
    if (!in) throw gamemark::ParseError("detect: cannot open " + pgn_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::vector<chess::PgnGame> games = chess::parse_pgn(buffer.str());
    int round = 0;
    for (const chess::PgnGame& game : games) {
      const auto game_records = chess::to_move_records(game, round++);
      records.insert(records.end(), game_records.begin(), game_records.end());
    }
    player = side == "black" ? 1 : 0;
  }

  const detect::DetectionReport report = detect::analyze(records, params, player);
  std::cout << detect::report_text(report, threshold);
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    detect::write_report_csv(csv, report);
  }
  if (!svg_path.empty()) write_z_svg(svg_path, report.z_by_round, threshold);

  if (report.insufficient_data) return kExitInsufficient;
  return report.detected(threshold) ? kExitDetected : kExitNotDetected;
}

int run_verify(const std::string& games_path, int seeds, int trials,
               std::uint64_t base_seed) {
  const std::vector<double> gammas = {0.1, 0.25, 0.5, 0.75, 0.9};
  const std::vector<double> deltas = {0.0, 0.1, 0.5, 1.0, 10.0};
  bool all_ok = true;
  auto line = [&](const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name;
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << '\n';
    all_ok = all_ok && ok;
  };

  // game suite: from file, or generated
  std::vector<efg::RandomTreeSpec> specs;
  if (!games_path.empty()) {
    std::ifstream in(games_path);
    if (!in) throw gamemark::ParseError("verify: cannot open " + games_path);
    std::string text;
    while (std::getline(in, text)) {
      const std::size_t first = text.find_first_not_of(" \t");
      if (first == std::string::npos || text[first] == '#') continue;
      specs.push_back(efg::RandomTreeSpec::parse(text.substr(first)));
    }
  } else {
    wm::SplitMix64 rng(base_seed);
    for (int i = 0; i < seeds; ++i) {
      efg::RandomTreeSpec spec;
      spec.depth = 1 + int(rng.next_bounded(6));
      spec.branching = 2 + int(rng.next_bounded(3));
      spec.players = 1 + int(rng.next_bounded(2));
      spec.payoff_seed = rng.next();
      specs.push_back(spec);
    }
  }

  // deterministic loss bound on every game x parameter cell
  long long violations = 0, trajectories = 0;
  double worst_telescope = 0.0;
  for (const efg::RandomTreeSpec& spec : specs) {
    const efg::RandomTreeGame game(spec);
    for (double gamma : gammas) {
      for (double delta : deltas) {
        wm::WatermarkParams params;
        params.gamma = gamma;
        params.delta = delta;
        for (int player = 0; player < spec.players; ++player) {
          const efg::LossReport report =
              efg::verify_loss_bound(game, params, player);
          violations += report.violations;
          trajectories += long(report.trajectories.size());
          for (const efg::TrajectoryLoss& traj : report.trajectories) {
            const double gap = std::abs(report.oracle_root_value -
                                        traj.realized_utility -
                                        traj.total_loss - traj.chance_deviation);
            worst_telescope = std::max(worst_telescope, gap);
          }
        }
      }
    }
  }
  {
    std::ostringstream detail;
    detail << specs.size() << " games, " << trajectories << " trajectories, "
           << violations << " violations";
    line("loss bound: L <= n*delta*(1+gamma/(1-gamma))", violations == 0,
         detail.str());
    line("regret telescoping vs realized utility", worst_telescope <= 1e-9,
         "max gap " + std::to_string(worst_telescope));
  }

  // concentration bound grid
  {
    bool ok = true;
    std::ostringstream detail;
    for (double p : {0.0, 0.25, 0.5, 0.9, 1.0}) {
      for (int n : {10, 100}) {
        for (double t : {1.0, 5.0, 30.0}) {
          const efg::Theorem1Report rep =
              efg::simulate_theorem1(p, n, t, 0.25, 0.5, trials);
          if (!rep.satisfied) {
            ok = false;
            detail << "p=" << p << " n=" << n << " t=" << t << " empirical "
                   << rep.empirical_probability << " < bound " << rep.paper_bound
                   << "; ";
          }
        }
      }
    }
    line("concentration bound: empirical >= 1 - exp(-2t^2/n^2)", ok, detail.str());
  }

  // action/expected-utility watermark consistency
  {
    long long checked = 0, mismatches = 0;
    double worst = 0.0;
    wm::WatermarkParams params;
    params.gamma = 0.25;
    params.delta = 0.5;
    for (const efg::RandomTreeSpec& spec : specs) {
      if (spec.depth > 5) continue;  // keep prefix enumeration cheap
      const efg::RandomTreeGame game(spec);
      const efg::ConsistencyReport rep = efg::check_consistency(game, params);
      checked += rep.decisions_checked;
      mismatches += rep.argmax_mismatches;
      worst = std::max(worst, rep.max_inversion_error);
    }
    std::ostringstream detail;
    detail << checked << " decisions, " << mismatches << " mismatches, max undo error "
           << worst;
    line("action vs expected-utility watermark consistency",
         mismatches == 0 && worst <= 1e-12, detail.str());
  }

  // zero-mean adjustment identity
  {
    double worst = 0.0;
    for (double gamma : gammas) {
      for (double delta : deltas) {
        wm::WatermarkParams params;
        params.gamma = gamma;
        params.delta = delta;
        worst = std::max(worst, std::abs(gamma * delta +
                                         (1.0 - gamma) * params.red_adjustment()));
      }
    }
    line("zero-mean adjustment identity", worst <= 1e-12,
         "max residual " + std::to_string(worst));
  }

  return all_ok ? 0 : 1;
}

void print_vectors() {
  std::cout << "# golden vectors (see PARTITION-FORMAT.md)\n\n";
  std::cout << std::hex << std::setfill('0');
  std::cout << "fnv1a64(\"abc\")                        = 0x" << std::setw(16)
            << wm::fnv1a64("abc") << '\n';
  std::cout << "seed_from_observation(\"abc\", \"\")      = 0x" << std::setw(16)
            << wm::seed_from_observation("abc", "") << '\n';
  std::cout << "seed_from_observation(\"abc\", \"k\")     = 0x" << std::setw(16)
            << wm::seed_from_observation("abc", "k") << '\n';
  wm::SplitMix64 rng(1234);
  std::cout << "splitmix64(1234) outputs              = 0x" << std::setw(16)
            << rng.next() << " 0x" << std::setw(16) << rng.next() << " 0x"
            << std::setw(16) << rng.next() << '\n';
  std::cout << std::dec;

  const std::vector<std::string> actions = {"a", "b", "c", "d"};
  const std::uint64_t seed = wm::seed_from_observation("x", "");
  const wm::Partition part = wm::partition_actions(actions, seed, 0.25);
  std::cout << "partition({a,b,c,d}, obs=\"x\", gamma=0.25): green = { ";
  for (const std::string& a : part.green) std::cout << a << ' ';
  std::cout << "}\n";

  const chess::Position start = chess::parse_fen(chess::kStartFen);
  std::cout << "chess observation(startpos)          = \""
            << chess::observation(start) << "\"\n";
  const std::vector<chess::Move> legal = chess::legal_moves(start);
  std::vector<std::string> moves;
  for (const chess::Move& m : legal) moves.push_back(m.uci());
  const wm::Partition chess_part = wm::partition_actions(
      moves, wm::seed_from_observation(chess::observation(start), ""), 0.25);
  std::cout << "startpos green moves (gamma=0.25)    = { ";
  for (const std::string& m : chess_part.green) std::cout << m << ' ';
  std::cout << "}\n";

  detect::MoveRecord rec;
  rec.observation = chess::observation(start);
  rec.actions = moves;
  rec.chosen = "e2e4";
  rec.player = 0;
  rec.round = 0;
  rec.move = 0;
  std::cout << "sample trace record                  = "
            << detect::encode_record(rec) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gamemark: watermarking and detection for game-playing strategies"};
  app.require_subcommand(1);

  // ---- wrap ----
  auto* wrap = app.add_subcommand("wrap", "run the UCI proxy around an engine");
  std::string wrap_config, wrap_engine, wrap_trace;
  double wrap_gamma = 0.25, wrap_delta = 0.5;
  int wrap_minbranch = 2, wrap_multipv = 256;
  std::vector<std::string> wrap_options;
  wrap->add_option("--config", wrap_config, "proxy config file");
  wrap->add_option("--engine", wrap_engine, "engine executable (overrides config)");
  wrap->add_option("--gamma", wrap_gamma, "green list fraction");
  wrap->add_option("--delta", wrap_delta, "hardness in centipawns");
  wrap->add_option("--min-branching", wrap_minbranch, "watermark threshold on |A|");
  wrap->add_option("--multipv-cap", wrap_multipv, "MultiPV ceiling");
  wrap->add_option("--trace", wrap_trace, "decision trace output file");
  wrap->add_option("--option", wrap_options, "engine option Name=Value")
      ->take_all();

  // ---- detect ----
  auto* det = app.add_subcommand("detect", "detect the watermark in gameplay");
  std::string det_trace, det_pgn, det_side = "white", det_csv, det_svg;
  double det_gamma = 0.25, det_threshold = 4.0;
  int det_player = 0, det_minbranch = 2;
  det->add_option("--trace", det_trace, "trace file (gamemark-trace v1)");
  det->add_option("--pgn", det_pgn, "PGN file");
  det->add_option("--player", det_player, "player id to test (trace input)");
  det->add_option("--side", det_side, "white|black (PGN input)")
      ->check(CLI::IsMember({"white", "black"}));
  det->add_option("--gamma", det_gamma, "green list fraction");
  det->add_option("--min-branching", det_minbranch, "watermark threshold on |A|");
  det->add_option("--threshold", det_threshold, "detection threshold z");
  det->add_option("--csv", det_csv, "per-decision CSV output");
  det->add_option("--svg", det_svg, "z-vs-round chart output");

  // ---- match ----
  auto* match_cmd = app.add_subcommand("match", "engine vs engine match");
  std::string match_config, match_book, match_out;
  int match_rounds = -1, match_movetime = -1, match_depth = -1;
  long long match_nodes = -1;
  match_cmd->add_option("--config", match_config, "match config file")->required();
  match_cmd->add_option("--rounds", match_rounds, "override round count");
  match_cmd->add_option("--movetime", match_movetime, "override movetime (ms)");
  match_cmd->add_option("--nodes", match_nodes, "override node limit");
  match_cmd->add_option("--depth", match_depth, "override depth limit");
  match_cmd->add_option("--book", match_book, "override opening book");
  match_cmd->add_option("--out", match_out, "override output directory");

  // ---- ablate ----
  auto* abl = app.add_subcommand("ablate", "gamma x delta ablation grid");
  std::string abl_config, abl_gammas = "0.25", abl_deltas = "0.5,2,10", abl_out;
  abl->add_option("--config", abl_config, "match config file")->required();
  abl->add_option("--gammas", abl_gammas, "comma-separated gamma values");
  abl->add_option("--deltas", abl_deltas, "comma-separated delta values");
  abl->add_option("--out", abl_out, "CSV output path (default stdout)");

  // ---- verify ----
  auto* ver = app.add_subcommand("verify", "theory checks on synthetic games");
  std::string ver_games;
  int ver_seeds = 20, ver_trials = 20000;
  std::uint64_t ver_seed = 0xbadc0ffee;
  ver->add_option("--games", ver_games, "game spec file (one spec per line)");
  ver->add_option("--seeds", ver_seeds, "number of generated games");
  ver->add_option("--trials", ver_trials, "Monte-Carlo trials per cell");
  ver->add_option("--seed", ver_seed, "base RNG seed");

  // ---- perft ----
  auto* per = app.add_subcommand("perft", "move generator node count");
  std::string per_fen = chess::kStartFen;
  int per_depth = 5;
  bool per_divide = false;
  per->add_option("--fen", per_fen, "position (default: start)");
  per->add_option("--depth", per_depth, "search depth")->required();
  per->add_flag("--divide", per_divide, "per-move subtotals");

  // ---- vectors ----
  app.add_subcommand("vectors", "print the golden partition test vectors");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("wrap")) {
      uci::ProxyConfig config;
      if (!wrap_config.empty()) config = uci::ProxyConfig::load(wrap_config);
      if (!wrap_engine.empty()) config.engine_path = wrap_engine;
      if (config.engine_path.empty())
        throw gamemark::ParseError("wrap: an engine is required (--engine or config)");
      if (wrap->count("--gamma")) config.params.gamma = wrap_gamma;
      if (wrap->count("--delta")) config.params.delta = wrap_delta;
      if (wrap->count("--min-branching")) config.params.min_branching = wrap_minbranch;
      if (wrap->count("--multipv-cap")) config.multipv_cap = wrap_multipv;
      if (wrap->count("--trace")) config.trace_path = wrap_trace;
      if (const std::string key = key_from_env(); !key.empty()) config.params.key = key;
      for (const std::string& option : wrap_options) {
        const std::size_t eq = option.find('=');
        if (eq == std::string::npos)
          throw gamemark::ParseError("wrap: --option expects Name=Value");
        config.engine_options.emplace_back(option.substr(0, eq), option.substr(eq + 1));
      }
      return uci::run_proxy(config, std::cin, std::cout);
    }

    if (app.got_subcommand("detect")) {
      if (det_trace.empty() == det_pgn.empty())
        throw gamemark::ParseError("detect: exactly one of --trace or --pgn is required");
      wm::WatermarkParams params;
      params.gamma = det_gamma;
      params.min_branching = det_minbranch;
      params.key = key_from_env();
      return run_detect(det_trace, det_pgn, params, det_player, det_side,
                        det_threshold, det_csv, det_svg);
    }

    if (app.got_subcommand("match") || app.got_subcommand("ablate")) {
      const bool is_match = app.got_subcommand("match");
      match::MatchConfig config =
          match::MatchConfig::load(is_match ? match_config : abl_config);
      if (is_match) {
        if (match_rounds > 0) config.rounds = match_rounds;
        if (match_movetime > 0) config.limits.movetime_ms = match_movetime;
        if (match_nodes > 0) config.limits.nodes = match_nodes;
        if (match_depth > 0) config.limits.depth = match_depth;
        if (!match_book.empty()) config.book_path = match_book;
        if (!match_out.empty()) config.out_dir = match_out;

        const match::MatchReport report = match::play_match(config);
        std::cout << "rounds: " << report.rounds.size() << "  +" << report.wins
                  << " =" << report.draws << " -" << report.losses << '\n';
        if (report.elo.degenerate) {
          std::cout << "elo: " << (report.elo.score >= 1.0 ? "+inf" : "-inf")
                    << " (score " << report.elo.score << ")\n";
        } else {
          std::cout << "elo: " << std::showpos << report.elo.elo << std::noshowpos
                    << " +/- " << report.elo.margin95 << '\n';
        }
        std::cout << "loi: " << report.elo.loi << '\n'
                  << "z (watermarked side): " << report.detection_watermarked.z << '\n'
                  << "z (baseline side):    " << report.detection_baseline.z << '\n'
                  << "auc (per-round z):    " << report.auc << '\n';
        if (!config.out_dir.empty())
          std::cout << "artifacts written to " << config.out_dir << '\n';
        return 0;
      }

      const std::vector<match::AblationCell> cells =
          match::ablate(config, parse_list(abl_gammas), parse_list(abl_deltas));
      if (abl_out.empty()) {
        match::write_ablation_csv(std::cout, cells);
      } else {
        std::ofstream out(abl_out);
        match::write_ablation_csv(out, cells);
        std::cout << "wrote " << abl_out << '\n';
      }
      return 0;
    }

    if (app.got_subcommand("verify"))
      return run_verify(ver_games, ver_seeds, ver_trials, ver_seed);

    if (app.got_subcommand("perft")) {
      const chess::Position p = chess::parse_fen(per_fen);
      if (per_divide) {
        std::uint64_t total = 0;
        for (const chess::Move& m : chess::legal_moves(p)) {
          const std::uint64_t nodes =
              per_depth <= 1 ? 1 : chess::perft(chess::apply_move(p, m), per_depth - 1);
          std::cout << m.uci() << ": " << nodes << '\n';
          total += nodes;
        }
        std::cout << "total: " << total << '\n';
      } else {
        std::cout << chess::perft(p, per_depth) << '\n';
      }
      return 0;
    }

    if (app.got_subcommand("vectors")) {
      print_vectors();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
