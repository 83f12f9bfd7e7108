// A minimal deterministic UCI engine: fixed-depth material negamax with
// MultiPV support. It exists so the proxy and match harness can run against
// a real subprocess out of the box; it is not a strong engine.

#include <algorithm>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gamemark/chess/position.hpp"

using namespace gamemark;

namespace {

constexpr int kMate = 32000;

int material(const chess::Position& p) {
  static constexpr int kValue[7] = {0, 100, 320, 330, 500, 900, 0};
  int score = 0;
  for (chess::Square sq = 0; sq < 64; ++sq) {
    const chess::PieceCode pc = p.board[sq];
    if (pc == chess::kEmpty) continue;
    const int v = kValue[chess::piece_type(pc)];
    score += chess::is_white(pc) ? v : -v;
  }
  return p.side_to_move == chess::Color::White ? score : -score;
}

int negamax(const chess::Position& p, int depth, int ply) {
  const std::vector<chess::Move> moves = chess::legal_moves(p);
  if (moves.empty()) return chess::in_check(p) ? -(kMate - ply) : 0;
  if (depth == 0) return material(p);
  int best = -kMate - 1;
  for (const chess::Move& m : moves) {
    const int v = -negamax(chess::apply_move(p, m), depth - 1, ply + 1);
    best = std::max(best, v);
  }
  return best;
}

struct RootScore {
  chess::Move move;
  int score;
};

std::vector<RootScore> search_root(const chess::Position& p, int depth) {
  std::vector<RootScore> scores;
  for (const chess::Move& m : chess::legal_moves(p)) {
    scores.push_back({m, -negamax(chess::apply_move(p, m), depth - 1, 1)});
  }
  std::stable_sort(scores.begin(), scores.end(),
                   [](const RootScore& a, const RootScore& b) {
                     return a.score > b.score;
                   });
  return scores;
}

std::string score_token(int score) {
  if (score > kMate - 1000) {
    return "mate " + std::to_string((kMate - score + 1) / 2);
  }
  if (score < -(kMate - 1000)) {
    return "mate -" + std::to_string((kMate + score + 1) / 2);
  }
  return "cp " + std::to_string(score);
}

}  // namespace

int main() {
  std::ios::sync_with_stdio(false);

  chess::Position position = chess::parse_fen(chess::kStartFen);
  int multipv = 1;
  int max_depth = 2;

  std::string line;
  while (std::getline(std::cin, line)) {
    std::istringstream in(line);
    std::string command;
    if (!(in >> command)) continue;

    if (command == "uci") {
      std::cout << "id name gamemark-toy-engine\n"
                << "id author gamemark\n"
                << "option name MultiPV type spin default 1 min 1 max 256\n"
                << "option name Depth type spin default 2 min 1 max 4\n"
                << "uciok\n"
                << std::flush;
    } else if (command == "isready") {
      std::cout << "readyok\n" << std::flush;
    } else if (command == "setoption") {
      std::string word, name, value;
      while (in >> word) {
        if (word == "name") in >> name;
        else if (word == "value") in >> value;
      }
      if (name == "MultiPV") multipv = std::max(1, std::stoi(value));
      if (name == "Depth") max_depth = std::clamp(std::stoi(value), 1, 4);
    } else if (command == "ucinewgame") {
      position = chess::parse_fen(chess::kStartFen);
    } else if (command == "position") {
      std::string token;
      in >> token;
      bool has_moves = false;
      if (token == "startpos") {
        position = chess::parse_fen(chess::kStartFen);
        has_moves = bool(in >> token) && token == "moves";
      } else if (token == "fen") {
        std::string fen, word;
        while (in >> word) {
          if (word == "moves") {
            has_moves = true;
            break;
          }
          if (!fen.empty()) fen.push_back(' ');
          fen += word;
        }
        position = chess::parse_fen(fen);
      }
      if (has_moves) {
        std::string text;
        while (in >> text)
          position = chess::apply_move(position, chess::Move::parse(text));
      }
    } else if (command == "go") {
      int depth = max_depth;
      std::string word;
      while (in >> word) {
        if (word == "depth") in >> depth;
        else if (word == "movetime" || word == "nodes" || word == "wtime" ||
                 word == "btime" || word == "winc" || word == "binc" ||
                 word == "movestogo") {
          long long ignored;
          in >> ignored;  // deterministic fixed-depth search regardless
        }
      }
      depth = std::clamp(depth, 1, 6);
      std::vector<RootScore> scores;
      for (int d = 1; d <= depth; ++d) {
        scores = search_root(position, d);
        const int lines = std::min<int>(multipv, int(scores.size()));
        for (int i = 0; i < lines; ++i) {
          std::cout << "info depth " << d << " multipv " << i + 1 << " score "
                    << score_token(scores[i].score) << " pv "
                    << scores[i].move.uci() << '\n';
        }
      }
      if (scores.empty()) {
        std::cout << "bestmove 0000\n" << std::flush;
      } else {
        std::cout << "bestmove " << scores.front().move.uci() << '\n'
                  << std::flush;
      }
    } else if (command == "quit") {
      break;
    }
    // unknown commands are ignored per the UCI convention
  }
  return 0;
}
