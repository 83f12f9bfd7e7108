#include "gamemark/chess/position.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "gamemark/error.hpp"
#include "gamemark/watermark/hashing.hpp"

namespace gamemark::chess {

namespace {

constexpr int kSliderDirs[8][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                                   {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
constexpr int kKnightDirs[8][2] = {{1, 2},  {2, 1},  {2, -1}, {1, -2},
                                   {-1, -2}, {-2, -1}, {-2, 1}, {-1, 2}};

}  // namespace

Square Position::king_square(Color c) const {
  const PieceCode king = c == Color::White ? kKing : PieceCode(-kKing);
  for (Square sq = 0; sq < 64; ++sq) {
    if (board[sq] == king) return sq;
  }
  throw StructuralError("position has no king for one side");
}

bool square_attacked(const Position& p, Square sq, Color by) {
  const int sign = by == Color::White ? 1 : -1;
  const int f = file_of(sq), r = rank_of(sq);

  // pawns: a white pawn attacks from one rank below, black from one above
  const int pawn_rank = r - sign;
  if (pawn_rank >= 0 && pawn_rank < 8) {
    if (f > 0 && p.board[make_square(f - 1, pawn_rank)] == sign * kPawn) return true;
    if (f < 7 && p.board[make_square(f + 1, pawn_rank)] == sign * kPawn) return true;
  }

  for (const auto& d : kKnightDirs) {
    const int nf = f + d[0], nr = r + d[1];
    if (nf >= 0 && nf < 8 && nr >= 0 && nr < 8 &&
        p.board[make_square(nf, nr)] == sign * kKnight)
      return true;
  }

  for (int dir = 0; dir < 8; ++dir) {
    const int df = kSliderDirs[dir][0], dr = kSliderDirs[dir][1];
    int nf = f + df, nr = r + dr;
    bool first_step = true;
    while (nf >= 0 && nf < 8 && nr >= 0 && nr < 8) {
      const PieceCode pc = p.board[make_square(nf, nr)];
      if (pc != kEmpty) {
        if (piece_color(pc) == by) {
          const int type = piece_type(pc);
          const bool straight = dir < 4;
          if (type == kQueen || (straight && type == kRook) ||
              (!straight && type == kBishop))
            return true;
          if (first_step && type == kKing) return true;
        }
        break;
      }
      first_step = false;
      nf += df;
      nr += dr;
    }
  }
  return false;
}

bool in_check(const Position& p) {
  return square_attacked(p, p.king_square(p.side_to_move),
                         opponent(p.side_to_move));
}

namespace {

void generate_pseudo_moves(const Position& p, std::vector<Move>& out) {
  const Color us = p.side_to_move;
  const int sign = us == Color::White ? 1 : -1;
  const int push = 8 * sign;
  const int promo_rank = us == Color::White ? 7 : 0;
  const int double_rank = us == Color::White ? 1 : 6;

  auto add_pawn_move = [&](Square from, Square to) {
    if (rank_of(to) == promo_rank) {
      for (char promo : {'q', 'r', 'b', 'n'}) out.push_back({from, to, promo});
    } else {
      out.push_back({from, to, 0});
    }
  };

  for (Square from = 0; from < 64; ++from) {
    const PieceCode pc = p.board[from];
    if (pc == kEmpty || piece_color(pc) != us) continue;
    const int type = piece_type(pc);
    const int f = file_of(from), r = rank_of(from);

    if (type == kPawn) {
      const Square ahead = from + push;
      if (p.board[ahead] == kEmpty) {
        add_pawn_move(from, ahead);
        if (r == double_rank && p.board[from + 2 * push] == kEmpty)
          out.push_back({from, Square(from + 2 * push), 0});
      }
      for (int df : {-1, 1}) {
        const int nf = f + df;
        if (nf < 0 || nf > 7) continue;
        const Square to = make_square(nf, r + sign);
        const PieceCode target = p.board[to];
        if ((target != kEmpty && piece_color(target) != us) || to == p.ep_square)
          add_pawn_move(from, to);
      }
      continue;
    }

    if (type == kKnight || type == kKing) {
      const auto& dirs = type == kKnight ? kKnightDirs : kSliderDirs;
      for (const auto& d : dirs) {
        const int nf = f + d[0], nr = r + d[1];
        if (nf < 0 || nf > 7 || nr < 0 || nr > 7) continue;
        const Square to = make_square(nf, nr);
        const PieceCode target = p.board[to];
        if (target == kEmpty || piece_color(target) != us)
          out.push_back({from, to, 0});
      }
      continue;
    }

    const int dir_begin = type == kBishop ? 4 : 0;
    const int dir_end = type == kRook ? 4 : 8;
    for (int dir = dir_begin; dir < dir_end; ++dir) {
      int nf = f + kSliderDirs[dir][0], nr = r + kSliderDirs[dir][1];
      while (nf >= 0 && nf < 8 && nr >= 0 && nr < 8) {
        const Square to = make_square(nf, nr);
        const PieceCode target = p.board[to];
        if (target == kEmpty) {
          out.push_back({from, to, 0});
        } else {
          if (piece_color(target) != us) out.push_back({from, to, 0});
          break;
        }
        nf += kSliderDirs[dir][0];
        nr += kSliderDirs[dir][1];
      }
    }
  }

  // castling; legality of the king path is checked here, occupancy of the
  // rook path too, so the later king-safety filter has nothing to add
  const Color them = opponent(us);
  const int home = us == Color::White ? 0 : 7;
  const Square e = make_square(4, home);
  const std::uint8_t kingside = us == Color::White ? kWhiteKingside : kBlackKingside;
  const std::uint8_t queenside =
      us == Color::White ? kWhiteQueenside : kBlackQueenside;
  if ((p.castling & kingside) && p.board[make_square(5, home)] == kEmpty &&
      p.board[make_square(6, home)] == kEmpty && !square_attacked(p, e, them) &&
      !square_attacked(p, make_square(5, home), them) &&
      !square_attacked(p, make_square(6, home), them)) {
    out.push_back({e, make_square(6, home), 0});
  }
  if ((p.castling & queenside) && p.board[make_square(1, home)] == kEmpty &&
      p.board[make_square(2, home)] == kEmpty &&
      p.board[make_square(3, home)] == kEmpty && !square_attacked(p, e, them) &&
      !square_attacked(p, make_square(3, home), them) &&
      !square_attacked(p, make_square(2, home), them)) {
    out.push_back({e, make_square(2, home), 0});
  }
}

// Core make-move without legality checks or repetition upkeep.
Position apply_unchecked(const Position& p, const Move& m) {
  Position q = p;
  const PieceCode pc = q.board[m.from];
  const Color us = p.side_to_move;
  const int sign = us == Color::White ? 1 : -1;
  const bool pawn_move = piece_type(pc) == kPawn;
  bool capture = q.board[m.to] != kEmpty;

  if (pawn_move && m.to == p.ep_square && file_of(m.from) != file_of(m.to) &&
      !capture) {
    q.board[m.to - 8 * sign] = kEmpty;  // the bypassed pawn
    capture = true;
  }

  q.board[m.to] = m.promotion != 0
                      ? PieceCode(sign * piece_type(piece_from_char(m.promotion)))
                      : pc;
  q.board[m.from] = kEmpty;

  if (piece_type(pc) == kKing && file_of(m.from) == 4) {
    const int home = rank_of(m.from);
    if (file_of(m.to) == 6) {
      q.board[make_square(5, home)] = q.board[make_square(7, home)];
      q.board[make_square(7, home)] = kEmpty;
    } else if (file_of(m.to) == 2) {
      q.board[make_square(3, home)] = q.board[make_square(0, home)];
      q.board[make_square(0, home)] = kEmpty;
    }
  }

  auto clear_rights_at = [&](Square sq) {
    switch (sq) {
      case 0: q.castling &= ~kWhiteQueenside; break;
      case 7: q.castling &= ~kWhiteKingside; break;
      case 56: q.castling &= ~kBlackQueenside; break;
      case 63: q.castling &= ~kBlackKingside; break;
      default: break;
    }
  };
  if (piece_type(pc) == kKing) {
    q.castling &= us == Color::White ? ~(kWhiteKingside | kWhiteQueenside)
                                     : ~(kBlackKingside | kBlackQueenside);
  }
  clear_rights_at(m.from);
  clear_rights_at(m.to);

  q.ep_square = pawn_move && std::abs(rank_of(m.to) - rank_of(m.from)) == 2
                    ? Square(m.from + 8 * sign)
                    : kNoSquare;
  q.halfmove_clock = (pawn_move || capture) ? 0 : p.halfmove_clock + 1;
  if (us == Color::Black) ++q.fullmove_number;
  q.side_to_move = opponent(us);
  return q;
}

bool leaves_king_safe(const Position& p, const Move& m) {
  const Position q = apply_unchecked(p, m);
  return !square_attacked(q, q.king_square(p.side_to_move), q.side_to_move);
}

bool on_line_with(Square a, Square b) {
  const int df = std::abs(file_of(a) - file_of(b));
  const int dr = std::abs(rank_of(a) - rank_of(b));
  return df == 0 || dr == 0 || df == dr;
}

// Appends legal moves; unsorted.
void generate_legal(const Position& p, std::vector<Move>& out) {
  std::vector<Move> pseudo;
  pseudo.reserve(64);
  generate_pseudo_moves(p, pseudo);
  const Square ksq = p.king_square(p.side_to_move);
  const bool check = square_attacked(p, ksq, opponent(p.side_to_move));
  for (const Move& m : pseudo) {
    const bool needs_test =
        check || m.from == ksq ||
        (p.ep_square != kNoSquare && m.to == p.ep_square &&
         piece_type(p.board[m.from]) == kPawn) ||
        on_line_with(m.from, ksq);
    if (!needs_test || leaves_king_safe(p, m)) out.push_back(m);
  }
}

}  // namespace

std::vector<Move> legal_moves(const Position& p) {
  std::vector<Move> moves;
  generate_legal(p, moves);
  std::sort(moves.begin(), moves.end());
  return moves;
}

namespace {

// The en-passant field is reported only when the capture is actually legal,
// so transpositions that differ only in an unusable ep right share an
// observation (and a repetition key).
Square canonical_ep(const Position& p) {
  if (p.ep_square == kNoSquare) return kNoSquare;
  const int sign = p.side_to_move == Color::White ? 1 : -1;
  const int f = file_of(p.ep_square), r = rank_of(p.ep_square);
  for (int df : {-1, 1}) {
    const int nf = f + df;
    if (nf < 0 || nf > 7) continue;
    const Square from = make_square(nf, r - sign);
    if (p.board[from] != sign * kPawn) continue;
    if (leaves_king_safe(p, {from, p.ep_square, 0})) return p.ep_square;
  }
  return kNoSquare;
}

std::string placement_field(const Position& p) {
  std::string out;
  for (int r = 7; r >= 0; --r) {
    int empty = 0;
    for (int f = 0; f < 8; ++f) {
      const PieceCode pc = p.board[make_square(f, r)];
      if (pc == kEmpty) {
        ++empty;
        continue;
      }
      if (empty > 0) {
        out.push_back(char('0' + empty));
        empty = 0;
      }
      out.push_back(piece_char(pc));
    }
    if (empty > 0) out.push_back(char('0' + empty));
    if (r > 0) out.push_back('/');
  }
  return out;
}

std::string castling_field(const Position& p) {
  if (p.castling == 0) return "-";
  std::string out;
  if (p.castling & kWhiteKingside) out.push_back('K');
  if (p.castling & kWhiteQueenside) out.push_back('Q');
  if (p.castling & kBlackKingside) out.push_back('k');
  if (p.castling & kBlackQueenside) out.push_back('q');
  return out;
}

}  // namespace

std::string observation(const Position& p) {
  const Square ep = canonical_ep(p);
  std::string out = placement_field(p);
  out.push_back(' ');
  out.push_back(p.side_to_move == Color::White ? 'w' : 'b');
  out.push_back(' ');
  out += castling_field(p);
  out.push_back(' ');
  out += ep == kNoSquare ? "-" : square_name(ep);
  return out;
}

std::uint64_t observation_key(const Position& p) {
  return wm::fnv1a64(observation(p));
}

std::string emit_fen(const Position& p) {
  std::ostringstream out;
  out << observation(p) << ' ' << p.halfmove_clock << ' ' << p.fullmove_number;
  return out.str();
}

Position parse_fen(std::string_view fen) {
  std::istringstream in{std::string(fen)};
  std::vector<std::string> fields;
  std::string field;
  while (in >> field) fields.push_back(field);
  if (fields.size() < 4 || fields.size() > 6)
    throw ParseError("fen: expected 4-6 fields, got " +
                     std::to_string(fields.size()));

  Position p;

  // field 1: placement
  std::vector<std::string> ranks;
  std::size_t start = 0;
  while (true) {
    const std::size_t slash = fields[0].find('/', start);
    ranks.push_back(fields[0].substr(
        start, slash == std::string::npos ? std::string::npos : slash - start));
    if (slash == std::string::npos) break;
    start = slash + 1;
  }
  if (ranks.size() != 8)
    throw ParseError("fen: placement field has " + std::to_string(ranks.size()) +
                     " ranks, expected 8");
  for (int r = 0; r < 8; ++r) {
    const std::string& row = ranks[r];  // ranks[0] is rank 8
    int f = 0;
    for (char c : row) {
      if (c >= '1' && c <= '8') {
        f += c - '0';
      } else {
        if (f >= 8) throw ParseError("fen: rank " + std::to_string(8 - r) + " overflows");
        p.board[make_square(f, 7 - r)] = piece_from_char(c);
        ++f;
      }
    }
    if (f != 8)
      throw ParseError("fen: rank " + std::to_string(8 - r) + " has " +
                       std::to_string(f) + " files");
  }

  // field 2: side to move
  if (fields[1] == "w") p.side_to_move = Color::White;
  else if (fields[1] == "b") p.side_to_move = Color::Black;
  else throw ParseError("fen: side-to-move field must be 'w' or 'b'");

  // field 3: castling
  if (fields[2] != "-") {
    for (char c : fields[2]) {
      std::uint8_t bit = 0;
      switch (c) {
        case 'K': bit = kWhiteKingside; break;
        case 'Q': bit = kWhiteQueenside; break;
        case 'k': bit = kBlackKingside; break;
        case 'q': bit = kBlackQueenside; break;
        default: throw ParseError("fen: bad castling field");
      }
      if (p.castling & bit) throw ParseError("fen: duplicate castling right");
      p.castling |= bit;
    }
  }

  // field 4: en passant
  if (fields[3] != "-") {
    p.ep_square = parse_square(fields[3]);
    const int r = rank_of(p.ep_square);
    if (r != 2 && r != 5) throw ParseError("fen: en-passant square on wrong rank");
  }

  // fields 5-6: clocks
  try {
    if (fields.size() >= 5) p.halfmove_clock = std::stoi(fields[4]);
    if (fields.size() >= 6) p.fullmove_number = std::stoi(fields[5]);
  } catch (const std::exception&) {
    throw ParseError("fen: bad clock field");
  }
  if (p.halfmove_clock < 0 || p.fullmove_number < 1)
    throw ParseError("fen: bad clock field");

  // structural validation
  int white_kings = 0, black_kings = 0;
  for (Square sq = 0; sq < 64; ++sq) {
    const PieceCode pc = p.board[sq];
    if (pc == kKing) ++white_kings;
    if (pc == -kKing) ++black_kings;
    if (piece_type(pc) == kPawn && (rank_of(sq) == 0 || rank_of(sq) == 7))
      throw ParseError("fen: pawn on back rank");
  }
  if (white_kings != 1 || black_kings != 1)
    throw ParseError("fen: each side needs exactly one king");

  auto require_piece = [&](Square sq, PieceCode pc, const char* what) {
    if (p.board[sq] != pc)
      throw ParseError(std::string("fen: castling rights impossible: ") + what);
  };
  if (p.castling & kWhiteKingside) {
    require_piece(4, kKing, "white king not on e1");
    require_piece(7, kRook, "white rook not on h1");
  }
  if (p.castling & kWhiteQueenside) {
    require_piece(4, kKing, "white king not on e1");
    require_piece(0, kRook, "white rook not on a1");
  }
  if (p.castling & kBlackKingside) {
    require_piece(60, -kKing, "black king not on e8");
    require_piece(63, -kRook, "black rook not on h8");
  }
  if (p.castling & kBlackQueenside) {
    require_piece(60, -kKing, "black king not on e8");
    require_piece(56, -kRook, "black rook not on a8");
  }

  if (p.ep_square != kNoSquare) {
    const int sign = p.side_to_move == Color::White ? 1 : -1;
    const int r = rank_of(p.ep_square);
    if ((p.side_to_move == Color::White && r != 5) ||
        (p.side_to_move == Color::Black && r != 2))
      throw ParseError("fen: en-passant square inconsistent with side to move");
    if (p.board[p.ep_square] != kEmpty ||
        p.board[p.ep_square + 8 * sign] != kEmpty ||
        p.board[p.ep_square - 8 * sign] != PieceCode(-sign * kPawn))
      throw ParseError("fen: en-passant square without a double pawn push");
  }

  if (square_attacked(p, p.king_square(opponent(p.side_to_move)),
                      p.side_to_move))
    throw ParseError("fen: side not to move is in check");

  p.repetition_keys.push_back(observation_key(p));
  return p;
}

Position apply_move(const Position& p, const Move& m) {
  const std::vector<Move> legal = legal_moves(p);
  if (!std::binary_search(legal.begin(), legal.end(), m))
    throw ContractError("apply_move: illegal move " + m.uci());
  Position q = apply_unchecked(p, m);
  if (q.halfmove_clock == 0) q.repetition_keys.clear();
  q.repetition_keys.push_back(observation_key(q));
  return q;
}

bool is_draw_status(Status s) {
  return s == Status::kStalemate || s == Status::kDrawFiftyMove ||
         s == Status::kDrawThreefold || s == Status::kDrawInsufficient;
}

double status_score_white(const Position& p, Status s) {
  if (s == Status::kCheckmate)
    return p.side_to_move == Color::White ? 0.0 : 1.0;
  if (is_draw_status(s)) return 0.5;
  throw ContractError("status_score_white: game still ongoing");
}

std::string status_name(Status s) {
  switch (s) {
    case Status::kOngoing: return "ongoing";
    case Status::kCheckmate: return "checkmate";
    case Status::kStalemate: return "stalemate";
    case Status::kDrawFiftyMove: return "draw (fifty-move rule)";
    case Status::kDrawThreefold: return "draw (threefold repetition)";
    case Status::kDrawInsufficient: return "draw (insufficient material)";
  }
  return "unknown";
}

namespace {

bool insufficient_material(const Position& p) {
  int knights = 0, white_sq_bishops = 0, dark_sq_bishops = 0;
  for (Square sq = 0; sq < 64; ++sq) {
    switch (piece_type(p.board[sq])) {
      case 0:
      case kKing: break;
      case kKnight: ++knights; break;
      case kBishop:
        ((file_of(sq) + rank_of(sq)) % 2 ? white_sq_bishops : dark_sq_bishops)++;
        break;
      default: return false;  // pawn, rook, or queen on board
    }
  }
  const int bishops = white_sq_bishops + dark_sq_bishops;
  if (knights + bishops == 0) return true;                  // K vs K
  if (knights + bishops == 1) return true;                  // K+N or K+B vs K
  if (knights == 0 && (white_sq_bishops == 0 || dark_sq_bishops == 0))
    return true;  // bishops all on one color complex
  return false;
}

}  // namespace

Status game_status(const Position& p) {
  if (legal_moves(p).empty())
    return in_check(p) ? Status::kCheckmate : Status::kStalemate;
  if (p.halfmove_clock >= 100) return Status::kDrawFiftyMove;
  if (!p.repetition_keys.empty()) {
    const std::uint64_t current = p.repetition_keys.back();
    const auto seen = std::count(p.repetition_keys.begin(),
                                 p.repetition_keys.end(), current);
    if (seen >= 3) return Status::kDrawThreefold;
  }
  if (insufficient_material(p)) return Status::kDrawInsufficient;
  return Status::kOngoing;
}

namespace {

std::uint64_t perft_inner(const Position& p, int depth) {
  std::vector<Move> pseudo;
  pseudo.reserve(64);
  generate_pseudo_moves(p, pseudo);
  const Square ksq = p.king_square(p.side_to_move);
  const bool check = square_attacked(p, ksq, opponent(p.side_to_move));

  std::uint64_t nodes = 0;
  for (const Move& m : pseudo) {
    const bool needs_test =
        check || m.from == ksq ||
        (p.ep_square != kNoSquare && m.to == p.ep_square &&
         piece_type(p.board[m.from]) == kPawn) ||
        on_line_with(m.from, ksq);
    if (depth == 1) {
      if (!needs_test || leaves_king_safe(p, m)) ++nodes;
      continue;
    }
    const Position q = apply_unchecked(p, m);
    if (needs_test &&
        square_attacked(q, q.king_square(p.side_to_move), q.side_to_move))
      continue;
    nodes += perft_inner(q, depth - 1);
  }
  return nodes;
}

}  // namespace

std::uint64_t perft(const Position& p, int depth) {
  if (depth < 0) throw ContractError("perft: negative depth");
  if (depth == 0) return 1;
  Position root = p;
  root.repetition_keys.clear();  // keep node copies lean
  return perft_inner(root, depth);
}

std::vector<Position> load_fen_book(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("opening book: cannot open " + path);
  std::vector<Position> book;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      book.push_back(parse_fen(line.substr(first)));
    } catch (const ParseError& e) {
      throw ParseError("opening book line " + std::to_string(line_number) + ": " +
                       e.what());
    }
  }
  if (book.empty()) throw ParseError("opening book: no positions in " + path);
  return book;
}

}  // namespace gamemark::chess
