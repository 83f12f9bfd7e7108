#include "gamemark/chess/pgn.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "gamemark/error.hpp"

namespace gamemark::chess {

namespace {

bool is_result_token(std::string_view tok) {
  return tok == "1-0" || tok == "0-1" || tok == "1/2-1/2" || tok == "*";
}

char piece_letter(int type) {
  switch (type) {
    case kKnight: return 'N';
    case kBishop: return 'B';
    case kRook: return 'R';
    case kQueen: return 'Q';
    case kKing: return 'K';
    default: return 0;
  }
}

int piece_type_from_letter(char c) {
  switch (c) {
    case 'N': return kKnight;
    case 'B': return kBishop;
    case 'R': return kRook;
    case 'Q': return kQueen;
    case 'K': return kKing;
    default: return 0;
  }
}

}  // namespace

std::string to_san(const Position& p, const Move& m) {
  const std::vector<Move> legal = legal_moves(p);
  if (!std::binary_search(legal.begin(), legal.end(), m))
    throw ContractError("to_san: illegal move " + m.uci());

  const PieceCode pc = p.board[m.from];
  const int type = piece_type(pc);
  const bool is_capture =
      p.board[m.to] != kEmpty ||
      (type == kPawn && file_of(m.from) != file_of(m.to));

  std::string san;
  if (type == kKing && std::abs(file_of(m.to) - file_of(m.from)) == 2) {
    san = file_of(m.to) == 6 ? "O-O" : "O-O-O";
  } else if (type == kPawn) {
    if (is_capture) {
      san.push_back(char('a' + file_of(m.from)));
      san.push_back('x');
    }
    san += square_name(m.to);
    if (m.promotion != 0) {
      san.push_back('=');
      san.push_back(char(std::toupper(m.promotion)));
    }
  } else {
    san.push_back(piece_letter(type));
    bool need_file = false, need_rank = false, any_other = false;
    for (const Move& other : legal) {
      if (other.from == m.from || other.to != m.to) continue;
      if (p.board[other.from] != pc) continue;
      any_other = true;
      if (file_of(other.from) == file_of(m.from)) need_rank = true;
      if (rank_of(other.from) == rank_of(m.from)) need_file = true;
    }
    if (any_other && !need_file && !need_rank) need_file = true;
    if (need_file) san.push_back(char('a' + file_of(m.from)));
    if (need_rank) san.push_back(char('1' + rank_of(m.from)));
    if (is_capture) san.push_back('x');
    san += square_name(m.to);
  }

  const Position next = apply_move(p, m);
  const Status status = game_status(next);
  if (status == Status::kCheckmate) san.push_back('#');
  else if (in_check(next)) san.push_back('+');
  return san;
}

Move from_san(const Position& p, std::string_view san) {
  std::string body(san);
  // strip annotations and the optional "e.p." marker
  while (!body.empty() && (body.back() == '+' || body.back() == '#' ||
                           body.back() == '!' || body.back() == '?'))
    body.pop_back();
  if (body.size() > 4 && body.ends_with("e.p.")) body.resize(body.size() - 4);
  if (body.empty()) throw ParseError("san: empty move text");

  const std::vector<Move> legal = legal_moves(p);
  auto resolve = [&](auto&& predicate) -> Move {
    Move found{};
    int matches = 0;
    for (const Move& m : legal) {
      if (predicate(m)) {
        found = m;
        ++matches;
      }
    }
    if (matches == 0)
      throw ParseError("san: no legal move matches '" + std::string(san) + "'");
    if (matches > 1)
      throw ParseError("san: ambiguous move '" + std::string(san) + "'");
    return found;
  };

  if (body == "O-O" || body == "0-0") {
    return resolve([&](const Move& m) {
      return piece_type(p.board[m.from]) == kKing &&
             file_of(m.to) - file_of(m.from) == 2;
    });
  }
  if (body == "O-O-O" || body == "0-0-0") {
    return resolve([&](const Move& m) {
      return piece_type(p.board[m.from]) == kKing &&
             file_of(m.from) - file_of(m.to) == 2;
    });
  }

  // promotions written as "e8=Q" or "e8Q"
  char promo = 0;
  if (!body.empty() && piece_type_from_letter(body.back()) != 0 &&
      body.size() >= 3) {
    promo = char(std::tolower(body.back()));
    body.pop_back();
    if (!body.empty() && body.back() == '=') body.pop_back();
  }

  if (body.size() < 2) throw ParseError("san: malformed move '" + std::string(san) + "'");
  const std::string target_text = body.substr(body.size() - 2);
  Square target;
  try {
    target = parse_square(target_text);
  } catch (const ParseError&) {
    throw ParseError("san: malformed target square in '" + std::string(san) + "'");
  }
  body.resize(body.size() - 2);

  int type = kPawn;
  if (!body.empty() && piece_type_from_letter(body.front()) != 0) {
    type = piece_type_from_letter(body.front());
    body.erase(body.begin());
  }

  int hint_file = -1, hint_rank = -1;
  bool saw_capture = false;
  for (char c : body) {
    if (c == 'x') saw_capture = true;
    else if (c >= 'a' && c <= 'h') hint_file = c - 'a';
    else if (c >= '1' && c <= '8') hint_rank = c - '1';
    else throw ParseError("san: unexpected character in '" + std::string(san) + "'");
  }

  return resolve([&](const Move& m) {
    if (m.to != target) return false;
    if (piece_type(p.board[m.from]) != type) return false;
    if (char(std::tolower(m.promotion)) != (promo == 0 ? 0 : promo)) return false;
    if (hint_file >= 0 && file_of(m.from) != hint_file) return false;
    if (hint_rank >= 0 && rank_of(m.from) != hint_rank) return false;
    if (saw_capture) {
      const bool captures = p.board[m.to] != kEmpty ||
                            (type == kPawn && file_of(m.from) != file_of(m.to));
      if (!captures) return false;
    }
    // a bare pawn move like "d5" is a push, never a capture
    if (type == kPawn && hint_file < 0 && file_of(m.from) != file_of(m.to))
      return false;
    return true;
  });
}

std::string PgnGame::tag(const std::string& name, const std::string& fallback) const {
  for (const auto& [key, value] : tags) {
    if (key == name) return value;
  }
  return fallback;
}

namespace {

class PgnLexer {
 public:
  explicit PgnLexer(std::string_view text) : text_(text) {}

  // token kinds: tag ("[Key Value]" pair), san, result, end
  struct Token {
    enum Kind { kTag, kSan, kResult, kEnd } kind;
    std::string a, b;
  };

  Token next() {
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) return {Token::kEnd, {}, {}};
      const char c = text_[pos_];
      if (c == '[') return read_tag();
      if (c == '{') {
        skip_until('}');
        continue;
      }
      if (c == ';') {
        skip_until('\n');
        continue;
      }
      if (c == '(') {
        skip_variation();
        continue;
      }
      if (c == '$') {
        ++pos_;
        while (pos_ < text_.size() && std::isdigit((unsigned char)text_[pos_])) ++pos_;
        continue;
      }
      std::string tok = read_word();
      if (tok.empty()) continue;
      if (is_result_token(tok)) return {Token::kResult, tok, {}};
      // strip leading move numbers like "12." / "12..."
      std::size_t i = 0;
      while (i < tok.size() && std::isdigit((unsigned char)tok[i])) ++i;
      if (i > 0 && i < tok.size() && tok[i] == '.') {
        while (i < tok.size() && tok[i] == '.') ++i;
        tok = tok.substr(i);
        if (tok.empty()) continue;
      } else if (i == tok.size() && i > 0) {
        continue;  // bare move number
      }
      return {Token::kSan, tok, {}};
    }
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace((unsigned char)text_[pos_])) ++pos_;
  }
  void skip_until(char end) {
    while (pos_ < text_.size() && text_[pos_] != end) ++pos_;
    if (pos_ < text_.size()) ++pos_;
  }
  void skip_variation() {
    int depth = 0;
    while (pos_ < text_.size()) {
      if (text_[pos_] == '(') ++depth;
      if (text_[pos_] == ')') {
        --depth;
        if (depth == 0) {
          ++pos_;
          return;
        }
      }
      ++pos_;
    }
  }
  Token read_tag() {
    ++pos_;  // '['
    skip_space();
    std::string key = read_word();
    skip_space();
    std::string value;
    if (pos_ < text_.size() && text_[pos_] == '"') {
      ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
        value.push_back(text_[pos_++]);
      }
      if (pos_ < text_.size()) ++pos_;
    }
    skip_until(']');
    return {Token::kTag, key, value};
  }
  std::string read_word() {
    std::string word;
    while (pos_ < text_.size() && !std::isspace((unsigned char)text_[pos_]) &&
           text_[pos_] != '{' && text_[pos_] != ';' && text_[pos_] != '(' &&
           text_[pos_] != ')' && text_[pos_] != '[' && text_[pos_] != ']') {
      word.push_back(text_[pos_++]);
    }
    return word;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<PgnGame> parse_pgn(std::string_view text) {
  std::vector<PgnGame> games;
  PgnLexer lexer(text);

  PgnGame game;
  Position position = parse_fen(kStartFen);
  bool in_movetext = false;
  bool any_content = false;

  auto flush = [&]() {
    if (any_content) games.push_back(std::move(game));
    game = PgnGame{};
    position = parse_fen(kStartFen);
    in_movetext = false;
    any_content = false;
  };

  for (;;) {
    const PgnLexer::Token tok = lexer.next();
    if (tok.kind == PgnLexer::Token::kEnd) {
      flush();
      break;
    }
    if (tok.kind == PgnLexer::Token::kTag) {
      if (in_movetext) flush();  // a fresh tag pair starts the next game
      game.tags.emplace_back(tok.a, tok.b);
      if (tok.a == "FEN") {
        game.start_fen = tok.b;
        position = parse_fen(tok.b);
      }
      any_content = true;
      continue;
    }
    if (tok.kind == PgnLexer::Token::kResult) {
      game.result = tok.a;
      any_content = true;
      flush();
      continue;
    }
    in_movetext = true;
    any_content = true;
    const Move m = from_san(position, tok.a);
    game.moves.push_back(m);
    position = apply_move(position, m);
  }
  return games;
}

std::string emit_pgn(const PgnGame& game) {
  std::ostringstream out;
  const bool custom_start = game.start_fen != kStartFen;
  auto emit_tag = [&](const std::string& name, const std::string& value) {
    out << '[' << name << " \"" << value << "\"]\n";
  };
  emit_tag("Event", game.tag("Event"));
  emit_tag("Site", game.tag("Site"));
  emit_tag("Date", game.tag("Date", "????.??.??"));
  emit_tag("Round", game.tag("Round"));
  emit_tag("White", game.tag("White"));
  emit_tag("Black", game.tag("Black"));
  emit_tag("Result", game.result);
  if (custom_start) {
    emit_tag("SetUp", "1");
    emit_tag("FEN", game.start_fen);
  }
  out << '\n';

  Position position = parse_fen(game.start_fen);
  std::string line;
  auto push_token = [&](const std::string& tok) {
    if (line.size() + tok.size() + 1 > 80) {
      out << line << '\n';
      line.clear();
    }
    if (!line.empty()) line.push_back(' ');
    line += tok;
  };
  bool first = true;
  for (const Move& m : game.moves) {
    if (position.side_to_move == Color::White) {
      push_token(std::to_string(position.fullmove_number) + ". " + to_san(position, m));
    } else if (first) {
      push_token(std::to_string(position.fullmove_number) + "... " + to_san(position, m));
    } else {
      push_token(to_san(position, m));
    }
    first = false;
    position = apply_move(position, m);
  }
  push_token(game.result);
  if (!line.empty()) out << line << '\n';
  return out.str();
}

std::vector<detect::MoveRecord> to_move_records(const PgnGame& game, int round) {
  std::vector<detect::MoveRecord> records;
  Position position = parse_fen(game.start_fen);
  int ply = 0;
  for (const Move& m : game.moves) {
    detect::MoveRecord rec;
    rec.observation = observation(position);
    const std::vector<Move> legal = legal_moves(position);
    rec.actions.reserve(legal.size());
    for (const Move& lm : legal) rec.actions.push_back(lm.uci());
    rec.chosen = m.uci();
    rec.player = position.side_to_move == Color::White ? 0 : 1;
    rec.round = round;
    rec.move = ply++;
    records.push_back(std::move(rec));
    position = apply_move(position, m);
  }
  return records;
}

}  // namespace gamemark::chess
