#include "gamemark/uci/proxy.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "gamemark/error.hpp"
#include "gamemark/util/config.hpp"

namespace gamemark::uci {

ProxyDecision choose_move(const chess::Position& position,
                          const ScoredMoveSet& scored,
                          const wm::WatermarkParams& params, int round,
                          int move_index) {
  params.validate();
  if (scored.scores.empty())
    throw ContractError("choose_move: no scored moves");

  const std::vector<chess::Move> legal = chess::legal_moves(position);
  std::vector<std::string> actions;
  actions.reserve(legal.size());
  for (const chess::Move& m : legal) actions.push_back(m.uci());

  ProxyDecision decision;
  decision.record.observation = chess::observation(position);
  decision.record.actions = actions;
  decision.record.player = position.side_to_move == chess::Color::White ? 0 : 1;
  decision.record.round = round;
  decision.record.move = move_index;

  if (legal.size() < static_cast<std::size_t>(params.min_branching)) {
    // forced or near-forced: plain argmax, unwatermarked and uncounted
    decision.move = scored.scores.begin()->first;
    double best = scored.scores.begin()->second;
    for (const auto& [move, score] : scored.scores) {
      if (score > best) {
        best = score;
        decision.move = move;
      }
    }
    decision.record.chosen = decision.move.uci();
    return decision;
  }

  const std::uint64_t seed =
      wm::seed_from_observation(decision.record.observation, params.key);
  const wm::Partition part = wm::partition_actions(actions, seed, params.gamma);
  const double red_adj = params.red_adjustment();

  // adjusted argmax over the scored subset; green-first on exact ties,
  // then canonical move order (scores iterate in that order already)
  bool have_best = false;
  double best_value = 0.0;
  bool best_green = false;
  for (const auto& [move, score] : scored.scores) {
    const std::string text = move.uci();
    const auto it = std::lower_bound(actions.begin(), actions.end(), text);
    if (it == actions.end() || *it != text)
      throw ContractError("choose_move: scored move " + text + " is not legal");
    const auto index = static_cast<std::size_t>(it - actions.begin());
    const bool green = part.is_green(index);
    const double adjusted = score + (green ? params.delta : red_adj);
    if (!have_best || adjusted > best_value ||
        (adjusted == best_value && green && !best_green)) {
      have_best = true;
      best_value = adjusted;
      best_green = green;
      decision.move = move;
    }
  }

  decision.watermarked = true;
  decision.green = best_green;
  decision.record.chosen = decision.move.uci();
  return decision;
}

ProxyConfig ProxyConfig::load(const std::string& path) {
  const util::Config cfg = util::Config::load(path);
  ProxyConfig out;
  out.engine_path = cfg.require("engine");
  out.params.gamma = cfg.get_double("gamma", out.params.gamma);
  out.params.delta = cfg.get_double("delta", out.params.delta);
  out.params.key = cfg.get("key", "");
  out.params.min_branching = cfg.get_int("min_branching", out.params.min_branching);
  out.multipv_cap = cfg.get_int("multipv_cap", out.multipv_cap);
  out.trace_path = cfg.get("trace", "");
  for (const auto& [key, value] : cfg.entries()) {
    if (key.rfind("option.", 0) == 0) {
      out.engine_options.emplace_back(key.substr(7), value);
    }
  }
  out.params.validate();
  return out;
}

namespace {

// round index = completed ucinewgame commands; move index = decisions made
// in the current round.
struct ProxyState {
  PositionContext ctx = PositionContext::from_fen(chess::kStartFen);
  int round = 0;
  int move_index = 0;
};

void handle_position(ProxyState& state, std::istringstream& rest) {
  std::string token;
  rest >> token;
  PositionContext ctx;
  bool has_moves = false;
  if (token == "startpos") {
    ctx = PositionContext::from_fen(chess::kStartFen);
    has_moves = bool(rest >> token) && token == "moves";
  } else if (token == "fen") {
    std::string fen, word;
    while (rest >> word) {
      if (word == "moves") {
        has_moves = true;
        break;
      }
      if (!fen.empty()) fen.push_back(' ');
      fen += word;
    }
    ctx = PositionContext::from_fen(fen);
  } else {
    throw ParseError("position: expected 'startpos' or 'fen'");
  }
  if (has_moves) {
    std::string text;
    while (rest >> text) ctx.push(chess::Move::parse(text));
  }
  state.ctx = std::move(ctx);
}

}  // namespace

int run_proxy(const ProxyConfig& config, std::istream& in, std::ostream& out) {
  config.params.validate();
  EngineSession engine(config.engine_path, config.engine_args);
  ProxyState state;

  std::ofstream trace;
  if (!config.trace_path.empty()) {
    trace.open(config.trace_path, std::ios::app);
    if (!trace) throw ParseError("proxy: cannot open trace file " + config.trace_path);
    trace << "# gamemark-trace v1\n";
  }

  std::string line;
  bool handshook = false;
  while (std::getline(in, line)) {
    std::istringstream rest(line);
    std::string command;
    if (!(rest >> command)) continue;

    try {
      if (command == "uci") {
        engine.write_line("uci");
        for (;;) {
          const auto reply = engine.read_line(10'000);
          if (!reply) throw SessionError("proxy: engine silent during uci");
          out << *reply << '\n';
          if (*reply == "uciok") break;
        }
        out.flush();
      } else if (command == "isready") {
        engine.sync();
        out << "readyok\n" << std::flush;
        if (!handshook) {
          for (const auto& [name, value] : config.engine_options)
            engine.set_option(name, value);
          handshook = true;
        }
      } else if (command == "setoption") {
        engine.write_line(line);
      } else if (command == "ucinewgame") {
        engine.new_game();
        if (state.move_index > 0) ++state.round;
        state.move_index = 0;
        state.ctx = PositionContext::from_fen(chess::kStartFen);
      } else if (command == "position") {
        handle_position(state, rest);
      } else if (command == "go") {
        std::string args;
        std::getline(rest, args);
        if (!args.empty() && args.front() == ' ') args.erase(0, 1);
        GoLimits limits;
        limits.raw = args;
        const ScoredMoveSet scored =
            engine.score_all_moves(state.ctx, limits, config.multipv_cap);
        const ProxyDecision decision =
            choose_move(state.ctx.position, scored, config.params, state.round,
                        state.move_index);
        ++state.move_index;
        if (trace.is_open()) {
          trace << detect::encode_record(decision.record) << '\n' << std::flush;
        }
        out << "bestmove " << decision.move.uci() << '\n' << std::flush;
      } else if (command == "stop" || command == "ponderhit") {
        engine.write_line(command);
      } else if (command == "quit") {
        engine.quit();
        return 0;
      } else {
        std::cerr << "proxy: ignoring unknown command: " << line << '\n';
      }
    } catch (const SessionError& e) {
      // engine died mid-game: surface a forfeit signal and stop serving
      out << "info string gamemark proxy forfeit: engine failure\n" << std::flush;
      std::cerr << "proxy: engine failure: " << e.what() << '\n';
      return 2;
    }
  }
  engine.quit();
  return 0;
}

}  // namespace gamemark::uci
