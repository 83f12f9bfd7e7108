#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "gamemark/detect/record.hpp"
#include "gamemark/uci/session.hpp"
#include "gamemark/watermark/watermark.hpp"

namespace gamemark::uci {

// One watermarked move decision at the chess layer: the chosen move plus the
// record detection consumes.
struct ProxyDecision {
  chess::Move move{};
  detect::MoveRecord record;
  bool watermarked = false;
  bool green = false;
};

// Applies the watermark in centipawn space. The partition covers the FULL
// legal move set, so detectors reproduce it with no engine access; the
// adjusted argmax runs over the scored subset only, so an unscored move is
// never selected.
ProxyDecision choose_move(const chess::Position& position,
                          const ScoredMoveSet& scored,
                          const wm::WatermarkParams& params, int round = 0,
                          int move_index = 0);

struct ProxyConfig {
  std::string engine_path;
  std::vector<std::string> engine_args;
  std::vector<std::pair<std::string, std::string>> engine_options;
  wm::WatermarkParams params;
  int multipv_cap = 256;
  std::string trace_path;  // empty = no side-channel trace

  // Key/value config file: engine, option.<Name>, gamma, delta, key,
  // min_branching, multipv_cap, trace. See docs/FORMATS.md.
  static ProxyConfig load(const std::string& path);
};

// Serves UCI on in/out, wrapping the configured engine: passthrough for
// handshake and options, interception of `go` via MultiPV scoring plus the
// watermark. Returns the engine's exit reason. Blocks until `quit` or EOF.
int run_proxy(const ProxyConfig& config, std::istream& in, std::ostream& out);

}  // namespace gamemark::uci
