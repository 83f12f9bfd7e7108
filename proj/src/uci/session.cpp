#include "gamemark/uci/session.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstring>
#include <sstream>

#include "gamemark/error.hpp"

namespace gamemark::uci {

PositionContext PositionContext::from_fen(const std::string& fen) {
  PositionContext ctx;
  ctx.base_fen = fen;
  ctx.position = chess::parse_fen(fen);
  return ctx;
}

void PositionContext::push(const chess::Move& m) {
  position = chess::apply_move(position, m);
  moves.push_back(m.uci());
}

std::string PositionContext::to_command() const {
  std::ostringstream out;
  if (base_fen == chess::kStartFen) out << "position startpos";
  else out << "position fen " << base_fen;
  if (!moves.empty()) {
    out << " moves";
    for (const std::string& m : moves) out << ' ' << m;
  }
  return out.str();
}

std::string GoLimits::to_command() const {
  if (!raw.empty()) return "go " + raw;
  std::ostringstream out;
  out << "go";
  if (depth) out << " depth " << *depth;
  if (nodes) out << " nodes " << *nodes;
  if (movetime_ms) out << " movetime " << *movetime_ms;
  if (!depth && !nodes && !movetime_ms) out << " movetime 100";
  return out.str();
}

int GoLimits::wait_budget_ms() const {
  if (!raw.empty()) return 120'000;
  if (movetime_ms) return *movetime_ms + 5'000;
  return 60'000;
}

EngineSession::EngineSession(const std::string& executable,
                             const std::vector<std::string>& args) {
  // a dead engine must surface as a SessionError, not a SIGPIPE kill
  static const bool sigpipe_ignored = [] {
    signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)sigpipe_ignored;

  int to_child[2], from_child[2];
  if (pipe(to_child) != 0 || pipe(from_child) != 0)
    throw SessionError("engine: pipe() failed: " + std::string(strerror(errno)));

  const pid_t pid = fork();
  if (pid < 0) throw SessionError("engine: fork() failed");
  if (pid == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    std::vector<char*> argv;
    argv.push_back(const_cast<char*>(executable.c_str()));
    for (const std::string& a : args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    execvp(executable.c_str(), argv.data());
    // exec failed; make it visible to the parent by dying
    std::fprintf(stderr, "engine: cannot exec %s: %s\n", executable.c_str(),
                 strerror(errno));
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);
  in_fd_ = to_child[1];
  out_fd_ = from_child[0];
  pid_ = pid;
  name_ = executable;
  reader_ = std::thread([this] { reader_loop(); });
}

EngineSession::~EngineSession() {
  try {
    if (running()) quit();
  } catch (...) {
    // teardown must not throw
  }
  if (reader_.joinable()) reader_.join();
  if (in_fd_ >= 0) close(in_fd_);
  if (out_fd_ >= 0) close(out_fd_);
}

void EngineSession::reader_loop() {
  std::string pending;
  char buffer[4096];
  for (;;) {
    const ssize_t n = read(out_fd_, buffer, sizeof(buffer));
    if (n <= 0) break;
    pending.append(buffer, size_t(n));
    std::size_t start = 0;
    for (;;) {
      const std::size_t nl = pending.find('\n', start);
      if (nl == std::string::npos) break;
      std::string line = pending.substr(start, nl - start);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      {
        std::lock_guard lock(mutex_);
        note("<", line);
        lines_.push_back(std::move(line));
      }
      lines_ready_.notify_all();
      start = nl + 1;
    }
    pending.erase(0, start);
  }
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  lines_ready_.notify_all();
}

void EngineSession::note(const std::string& direction, const std::string& line) {
  // callers hold mutex_
  transcript_.push_back(direction + " " + line);
  if (transcript_.size() > 400) transcript_.pop_front();
}

std::vector<std::string> EngineSession::transcript_tail(std::size_t count) const {
  std::lock_guard lock(mutex_);
  const std::size_t n = std::min(count, transcript_.size());
  return {transcript_.end() - long(n), transcript_.end()};
}

void EngineSession::fail(const std::string& what) {
  std::ostringstream out;
  out << what << "\n--- recent protocol traffic ---\n";
  for (const std::string& line : transcript_tail()) out << line << '\n';
  throw SessionError(out.str());
}

void EngineSession::write_line(const std::string& line) {
  std::lock_guard wlock(write_mutex_);
  bool dead = false;
  {
    std::lock_guard lock(mutex_);
    dead = closed_;
    if (!dead) note(">", line);
  }
  if (dead) fail("engine: process is gone while sending '" + line + "'");
  const std::string payload = line + "\n";
  std::size_t written = 0;
  while (written < payload.size()) {
    const ssize_t n = write(in_fd_, payload.data() + written, payload.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail("engine: write failed: " + std::string(strerror(errno)));
    }
    written += size_t(n);
  }
}

std::optional<std::string> EngineSession::read_line(int timeout_ms) {
  std::unique_lock lock(mutex_);
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  lines_ready_.wait_until(lock, deadline,
                          [this] { return !lines_.empty() || closed_; });
  if (lines_.empty()) return std::nullopt;
  std::string line = std::move(lines_.front());
  lines_.pop_front();
  return line;
}

bool EngineSession::running() const {
  std::lock_guard lock(mutex_);
  return !closed_ && pid_ > 0;
}

void EngineSession::handshake(int timeout_ms) {
  write_line("uci");
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  for (;;) {
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    const auto line = read_line(int(std::max<long long>(1, remaining.count())));
    if (!line) fail("engine: no uciok within handshake timeout");
    handshake_lines_.push_back(*line);
    std::istringstream in(*line);
    std::string word;
    in >> word;
    if (word == "uciok") break;
    if (word == "id") {
      std::string kind;
      in >> kind;
      if (kind == "name") {
        std::string rest;
        std::getline(in, rest);
        if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
        name_ = rest;
      }
    } else if (word == "option") {
      // option name MultiPV type spin default 1 min 1 max 256
      std::string token, name;
      bool is_multipv = false;
      while (in >> token) {
        if (token == "name") {
          in >> name;
          is_multipv = name == "MultiPV";
        } else if (token == "max" && is_multipv) {
          in >> max_multipv_;
        }
      }
    }
  }
  sync(timeout_ms);
}

void EngineSession::sync(int timeout_ms) {
  write_line("isready");
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  for (;;) {
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    const auto line = read_line(int(std::max<long long>(1, remaining.count())));
    if (!line) fail("engine: no readyok within timeout");
    if (*line == "readyok") return;
  }
}

void EngineSession::set_option(const std::string& name, const std::string& value) {
  write_line("setoption name " + name + " value " + value);
  if (name == "MultiPV") current_multipv_ = std::stoi(value);
}

void EngineSession::ensure_multipv(int value) {
  if (current_multipv_ != value) set_option("MultiPV", std::to_string(value));
}

void EngineSession::new_game() {
  write_line("ucinewgame");
  sync();
}

namespace {

struct InfoLine {
  int depth = 0;
  int multipv = 1;
  std::string score_kind;
  long long score_value = 0;
  std::string first_move;
};

std::optional<InfoLine> parse_info(const std::string& line) {
  std::istringstream in(line);
  std::string word;
  in >> word;
  if (word != "info") return std::nullopt;
  InfoLine info;
  bool have_score = false, have_pv = false;
  while (in >> word) {
    if (word == "depth") in >> info.depth;
    else if (word == "multipv") in >> info.multipv;
    else if (word == "score") {
      in >> info.score_kind >> info.score_value;
      have_score = true;
    } else if (word == "pv") {
      in >> info.first_move;
      have_pv = true;
      break;
    }
  }
  if (!have_score || !have_pv) return std::nullopt;
  return info;
}

}  // namespace

ScoredMoveSet EngineSession::score_all_moves(const PositionContext& ctx,
                                             const GoLimits& limits,
                                             int multipv_cap) {
  const std::vector<chess::Move> legal = chess::legal_moves(ctx.position);
  if (legal.empty()) fail("engine: asked to search a finished position");

  ScoredMoveSet result;
  if (legal.size() == 1) {
    result.forced = true;
    result.scores.emplace(legal[0], 0.0);
    result.engine_best = legal[0];
    result.depth = 0;
    return result;
  }

  const int want = int(std::min<std::size_t>(
      {legal.size(), std::size_t(std::max(1, multipv_cap)),
       std::size_t(std::max(1, max_multipv_))}));
  ensure_multipv(want);
  write_line(ctx.to_command());
  write_line(limits.to_command());

  // deepest report per (depth, move); a depth is complete once it has
  // `want` distinct moves
  std::map<int, std::map<chess::Move, double>> by_depth;
  std::string best_text;
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::milliseconds(limits.wait_budget_ms());
  for (;;) {
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) fail("engine: no bestmove within time budget");
    const auto line = read_line(int(remaining.count()));
    if (!line) fail("engine: died while searching");
    if (line->rfind("bestmove", 0) == 0) {
      std::istringstream in(*line);
      std::string word;
      in >> word >> best_text;
      break;
    }
    const auto info = parse_info(*line);
    if (!info) continue;
    chess::Move move;
    try {
      move = chess::Move::parse(info->first_move);
    } catch (const ParseError&) {
      continue;  // pv in some other notation; ignore the line
    }
    if (!std::binary_search(legal.begin(), legal.end(), move))
      fail("engine: reported illegal pv move " + info->first_move);
    by_depth[info->depth][move] = map_score(info->score_kind, info->score_value);
  }

  // pick the deepest complete depth, falling back to the deepest partial
  const std::map<chess::Move, double>* chosen = nullptr;
  for (auto it = by_depth.rbegin(); it != by_depth.rend(); ++it) {
    if (int(it->second.size()) >= want) {
      result.depth = it->first;
      chosen = &it->second;
      break;
    }
  }
  if (chosen == nullptr) {
    for (auto it = by_depth.rbegin(); it != by_depth.rend(); ++it) {
      if (!it->second.empty()) {
        result.depth = it->first;
        chosen = &it->second;
        break;
      }
    }
  }
  if (chosen == nullptr) fail("engine: search produced no scored moves");
  result.scores = *chosen;

  for (const chess::Move& m : legal) {
    if (!result.scores.contains(m)) result.unscored.push_back(m);
  }
  if (best_text.empty()) fail("engine: empty bestmove");
  result.engine_best = chess::Move::parse(best_text);
  if (!std::binary_search(legal.begin(), legal.end(), result.engine_best))
    fail("engine: bestmove " + best_text + " is illegal");
  return result;
}

chess::Move EngineSession::bestmove(const PositionContext& ctx,
                                    const GoLimits& limits) {
  return score_all_moves(ctx, limits).engine_best;
}

void EngineSession::quit() {
  try {
    write_line("quit");
  } catch (...) {
    // already gone
  }
  if (pid_ > 0) {
    int status = 0;
    for (int i = 0; i < 50; ++i) {
      const pid_t done = waitpid(pid_t(pid_), &status, WNOHANG);
      if (done == pid_) {
        pid_ = -1;
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    if (pid_ > 0) {
      kill(pid_t(pid_), SIGKILL);
      waitpid(pid_t(pid_), &status, 0);
      pid_ = -1;
    }
  }
  if (reader_.joinable()) reader_.join();
}

}  // namespace gamemark::uci
