#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "gamemark/chess/position.hpp"
#include "gamemark/uci/score.hpp"

namespace gamemark::uci {

// The position an engine searches: a base FEN plus the moves played since,
// exactly as a "position" command conveys it.
struct PositionContext {
  std::string base_fen = chess::kStartFen;
  std::vector<std::string> moves;  // uci strings
  chess::Position position;        // the resulting position

  static PositionContext from_fen(const std::string& fen);
  void push(const chess::Move& m);
  std::string to_command() const;  // "position fen ... [moves ...]"
};

// Search limits for one "go".
struct GoLimits {
  std::optional<int> movetime_ms;
  std::optional<long long> nodes;
  std::optional<int> depth;
  std::string raw;  // verbatim go arguments; wins over the fields above

  std::string to_command() const;
  int wait_budget_ms() const;  // read timeout for the reply
};

// One UCI engine subprocess: serialized line-oriented commands in, a reader
// thread draining stdout into a queue. One outstanding `go` at a time.
class EngineSession {
 public:
  EngineSession(const std::string& executable,
                const std::vector<std::string>& args = {});
  ~EngineSession();

  EngineSession(const EngineSession&) = delete;
  EngineSession& operator=(const EngineSession&) = delete;

  // uci/uciok then isready/readyok; collects id and option declarations.
  void handshake(int timeout_ms = 10000);

  void write_line(const std::string& line);
  std::optional<std::string> read_line(int timeout_ms);

  void set_option(const std::string& name, const std::string& value);
  void new_game();
  void sync(int timeout_ms = 10000);  // isready / readyok

  // MultiPV search over every legal move (capped); parses info lines and
  // keeps the deepest complete depth. Forced moves skip the engine.
  ScoredMoveSet score_all_moves(const PositionContext& ctx, const GoLimits& limits,
                                int multipv_cap = 256);

  // Plain single-bestmove search (passes MultiPV through unchanged).
  chess::Move bestmove(const PositionContext& ctx, const GoLimits& limits);

  void quit();
  bool running() const;

  const std::string& name() const { return name_; }
  int max_multipv() const { return max_multipv_; }
  const std::vector<std::string>& handshake_lines() const { return handshake_lines_; }

  // Most recent protocol traffic, newest last; attached to session errors.
  std::vector<std::string> transcript_tail(std::size_t lines = 40) const;

 private:
  void reader_loop();
  void note(const std::string& direction, const std::string& line);
  [[noreturn]] void fail(const std::string& what);
  void ensure_multipv(int value);

  int in_fd_ = -1;   // engine stdin (we write)
  int out_fd_ = -1;  // engine stdout (reader drains)
  long pid_ = -1;

  std::thread reader_;
  mutable std::mutex mutex_;
  std::condition_variable lines_ready_;
  std::deque<std::string> lines_;
  bool closed_ = false;

  mutable std::mutex write_mutex_;
  std::deque<std::string> transcript_;

  std::string name_;
  int max_multipv_ = 1;
  int current_multipv_ = 1;
  std::vector<std::string> handshake_lines_;
};

}  // namespace gamemark::uci
