#include "gamemark/match/harness.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "gamemark/error.hpp"
#include "gamemark/util/config.hpp"

namespace gamemark::match {

namespace {

EngineSide load_side(const util::Config& cfg, const std::string& prefix) {
  EngineSide side;
  side.path = cfg.require(prefix + ".engine");
  side.name = cfg.get(prefix + ".name", side.path);
  for (const auto& [key, value] : cfg.entries()) {
    const std::string opt_prefix = prefix + ".option.";
    if (key.rfind(opt_prefix, 0) == 0)
      side.options.emplace_back(key.substr(opt_prefix.size()), value);
  }
  if (cfg.has(prefix + ".gamma") || cfg.has(prefix + ".delta")) {
    wm::WatermarkParams params;
    params.gamma = cfg.get_double(prefix + ".gamma", params.gamma);
    params.delta = cfg.get_double(prefix + ".delta", params.delta);
    params.key = cfg.get(prefix + ".key", "");
    params.min_branching = cfg.get_int(prefix + ".min_branching", params.min_branching);
    params.validate();
    side.watermark = params;
  }
  return side;
}

}  // namespace

MatchConfig MatchConfig::load(const std::string& path) {
  const util::Config cfg = util::Config::load(path);
  MatchConfig config;
  config.watermarked = load_side(cfg, "a");
  config.baseline = load_side(cfg, "b");
  config.book_path = cfg.get("book", "");
  config.rounds = cfg.get_int("rounds", config.rounds);
  config.ply_cap = cfg.get_int("ply_cap", config.ply_cap);
  config.multipv_cap = cfg.get_int("multipv_cap", config.multipv_cap);
  config.out_dir = cfg.get("out_dir", "");
  if (cfg.has("movetime_ms")) config.limits.movetime_ms = cfg.get_int("movetime_ms", 100);
  if (cfg.has("nodes")) config.limits.nodes = cfg.get_int64("nodes", 10000);
  if (cfg.has("depth")) config.limits.depth = cfg.get_int("depth", 4);
  if (config.rounds < 1) throw ParseError("match config: rounds must be >= 1");
  return config;
}

RoundRecord play_round(uci::EngineSession& white, uci::EngineSession& black,
                       const std::optional<wm::WatermarkParams>& white_wm,
                       const std::optional<wm::WatermarkParams>& black_wm,
                       const chess::Position& opening, const uci::GoLimits& limits,
                       int ply_cap, int round_index, int multipv_cap) {
  RoundRecord record;
  record.round = round_index;

  const std::string opening_fen = chess::emit_fen(opening);
  uci::PositionContext ctx = uci::PositionContext::from_fen(opening_fen);
  record.game.start_fen = opening_fen;

  std::optional<double> forfeit_score_white;  // white's score on forfeit
  try {
    white.new_game();
  } catch (const SessionError& e) {
    forfeit_score_white = 0.0;
    record.termination = std::string("forfeit: ") + e.what();
  }
  try {
    if (!forfeit_score_white) black.new_game();
  } catch (const SessionError& e) {
    forfeit_score_white = 1.0;
    record.termination = std::string("forfeit: ") + e.what();
  }

  int ply = 0;
  chess::Status status = chess::game_status(ctx.position);
  while (!forfeit_score_white && status == chess::Status::kOngoing &&
         ply < ply_cap) {
    const bool white_to_move = ctx.position.side_to_move == chess::Color::White;
    uci::EngineSession& engine = white_to_move ? white : black;
    const auto& wm_params = white_to_move ? white_wm : black_wm;

    chess::Move move;
    try {
      const uci::ScoredMoveSet scored =
          engine.score_all_moves(ctx, limits, multipv_cap);
      if (wm_params.has_value()) {
        const uci::ProxyDecision decision = uci::choose_move(
            ctx.position, scored, *wm_params, round_index, ply);
        move = decision.move;
      } else {
        move = scored.engine_best;
      }
    } catch (const SessionError& e) {
      forfeit_score_white = white_to_move ? 0.0 : 1.0;
      record.termination = std::string("forfeit: ") + e.what();
      break;
    }

    detect::MoveRecord mr;
    mr.observation = chess::observation(ctx.position);
    const std::vector<chess::Move> legal = chess::legal_moves(ctx.position);
    mr.actions.reserve(legal.size());
    for (const chess::Move& lm : legal) mr.actions.push_back(lm.uci());
    mr.chosen = move.uci();
    mr.player = white_to_move ? 0 : 1;
    mr.round = round_index;
    mr.move = ply;
    record.records.push_back(std::move(mr));

    record.game.moves.push_back(move);
    ctx.push(move);
    status = chess::game_status(ctx.position);
    ++ply;
  }

  double score_white;
  if (forfeit_score_white.has_value()) {
    score_white = *forfeit_score_white;
  } else if (status == chess::Status::kOngoing) {
    score_white = 0.5;  // adjudicated draw at the ply cap
    record.termination = "draw (adjudicated at ply cap)";
  } else {
    score_white = chess::status_score_white(ctx.position, status);
    record.termination = chess::status_name(status);
  }

  record.game.result = score_white == 1.0   ? "1-0"
                       : score_white == 0.0 ? "0-1"
                                            : "1/2-1/2";
  return record;
}

MatchReport play_match(const MatchConfig& config) {
  std::vector<chess::Position> book;
  if (!config.book_path.empty()) {
    book = chess::load_fen_book(config.book_path);
  } else {
    book.push_back(chess::parse_fen(chess::kStartFen));
  }

  auto start_engine = [](const EngineSide& side) {
    auto session = std::make_unique<uci::EngineSession>(side.path, side.args);
    session->handshake();
    for (const auto& [name, value] : side.options) session->set_option(name, value);
    return session;
  };
  std::unique_ptr<uci::EngineSession> engine_a = start_engine(config.watermarked);
  std::unique_ptr<uci::EngineSession> engine_b = start_engine(config.baseline);

  MatchReport report;
  std::vector<detect::MoveRecord> all_records;
  std::vector<double> per_round_z_w, per_round_z_b;

  for (int round = 0; round < config.rounds; ++round) {
    // a side that died in an earlier round gets one fresh process; a side
    // that cannot even start again aborts the match as incomplete
    try {
      if (!engine_a->running()) engine_a = start_engine(config.watermarked);
      if (!engine_b->running()) engine_b = start_engine(config.baseline);
    } catch (const SessionError&) {
      report.complete = false;
      break;
    }

    // paired openings: two rounds per opening with colors swapped
    const chess::Position& opening = book[(round / 2) % book.size()];
    const bool a_is_white = round % 2 == 0;

    RoundRecord rec = play_round(
        a_is_white ? *engine_a : *engine_b, a_is_white ? *engine_b : *engine_a,
        a_is_white ? config.watermarked.watermark : config.baseline.watermark,
        a_is_white ? config.baseline.watermark : config.watermarked.watermark,
        opening, config.limits, config.ply_cap, round, config.multipv_cap);

    rec.watermarked_is_white = a_is_white;
    const double score_white = rec.game.result == "1-0"   ? 1.0
                               : rec.game.result == "0-1" ? 0.0
                                                          : 0.5;
    rec.score_watermarked = a_is_white ? score_white : 1.0 - score_white;
    if (rec.score_watermarked == 1.0) ++report.wins;
    else if (rec.score_watermarked == 0.0) ++report.losses;
    else ++report.draws;

    rec.game.tags.emplace_back("Event", "gamemark match");
    rec.game.tags.emplace_back("Round", std::to_string(round + 1));
    rec.game.tags.emplace_back(
        "White", a_is_white ? config.watermarked.name : config.baseline.name);
    rec.game.tags.emplace_back(
        "Black", a_is_white ? config.baseline.name : config.watermarked.name);

    // the detector's view: replay-derived records, suspected player by color
    const wm::WatermarkParams& detect_params =
        config.watermarked.watermark.value_or(wm::WatermarkParams{});
    const int wm_color = a_is_white ? 0 : 1;
    const auto z_of = [&](int player) {
      const detect::DetectionReport r =
          detect::analyze(rec.records, detect_params, player);
      return r.insufficient_data ? 0.0 : r.z;
    };
    rec.z_watermarked = z_of(wm_color);
    rec.z_baseline = z_of(1 - wm_color);
    per_round_z_w.push_back(rec.z_watermarked);
    per_round_z_b.push_back(rec.z_baseline);

    // pooled cumulative z needs a per-player record stream: remap the
    // watermarked side to player 0 and the baseline to player 1
    for (detect::MoveRecord mr : rec.records) {
      mr.player = mr.player == wm_color ? 0 : 1;
      all_records.push_back(std::move(mr));
    }

    report.rounds.push_back(std::move(rec));
  }

  const wm::WatermarkParams& detect_params =
      config.watermarked.watermark.value_or(wm::WatermarkParams{});
  report.detection_watermarked = detect::analyze(all_records, detect_params, 0);
  report.detection_baseline = detect::analyze(all_records, detect_params, 1);
  report.cumulative_z_watermarked = report.detection_watermarked.z_by_round;
  report.cumulative_z_baseline = report.detection_baseline.z_by_round;
  report.elo = elo_and_loi(report.wins, report.draws, report.losses);
  report.auc = detect::roc(per_round_z_w, per_round_z_b).auc;

  engine_a->quit();
  engine_b->quit();

  if (!config.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    std::ofstream pgn(fs::path(config.out_dir) / "match.pgn");
    for (const RoundRecord& rec : report.rounds) pgn << chess::emit_pgn(rec.game) << '\n';
    detect::write_trace_file((fs::path(config.out_dir) / "trace.txt").string(),
                             all_records);
    std::ofstream csv(fs::path(config.out_dir) / "zcurve.csv");
    write_match_csv(csv, report);
    std::ofstream detail(fs::path(config.out_dir) / "detection.csv");
    detect::write_report_csv(detail, report.detection_watermarked);
  }
  return report;
}

std::vector<AblationCell> ablate(const MatchConfig& base,
                                 const std::vector<double>& gammas,
                                 const std::vector<double>& deltas) {
  if (!base.watermarked.watermark.has_value())
    throw ContractError("ablate: side a must be the watermarked side");
  std::vector<AblationCell> cells;
  for (double gamma : gammas) {
    for (double delta : deltas) {
      AblationCell cell;
      cell.gamma = gamma;
      cell.delta = delta;
      MatchConfig config = base;
      config.watermarked.watermark->gamma = gamma;
      config.watermarked.watermark->delta = delta;
      if (!config.out_dir.empty()) {
        std::ostringstream dir;
        dir << config.out_dir << "/g" << gamma << "_d" << delta;
        config.out_dir = dir.str();
      }
      try {
        cell.report = play_match(config);
      } catch (const std::exception& e) {
        cell.failed = true;
        cell.error = e.what();
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

void write_match_csv(std::ostream& out, const MatchReport& report) {
  out << "round,score_watermarked,cum_z_watermarked,cum_z_baseline,"
         "round_z_watermarked,round_z_baseline\n";
  for (std::size_t r = 0; r < report.rounds.size(); ++r) {
    const double cz_w = r < report.cumulative_z_watermarked.size()
                            ? report.cumulative_z_watermarked[r]
                            : 0.0;
    const double cz_b = r < report.cumulative_z_baseline.size()
                            ? report.cumulative_z_baseline[r]
                            : 0.0;
    out << r << ',' << report.rounds[r].score_watermarked << ',' << cz_w << ','
        << cz_b << ',' << report.rounds[r].z_watermarked << ','
        << report.rounds[r].z_baseline << '\n';
  }
}

void write_ablation_csv(std::ostream& out, const std::vector<AblationCell>& cells) {
  out << "gamma,delta,elo,margin95,loi,draws,z_baseline,z_watermarked,auc\n";
  for (const AblationCell& cell : cells) {
    out << cell.gamma << ',' << cell.delta << ',';
    if (cell.failed) {
      out << ",,,,,,\n";
      continue;
    }
    const MatchReport& r = cell.report;
    out << r.elo.elo << ',' << r.elo.margin95 << ',' << r.elo.loi << ','
        << r.draws << ',' << r.detection_baseline.z << ','
        << r.detection_watermarked.z << ',' << r.auc << '\n';
  }
}

}  // namespace gamemark::match
