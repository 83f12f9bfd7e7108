#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "gamemark/chess/pgn.hpp"
#include "gamemark/chess/position.hpp"
#include "gamemark/error.hpp"
#include "gamemark/watermark/hashing.hpp"

using namespace gamemark;
using namespace gamemark::chess;

namespace {

Move mv(const std::string& text) { return Move::parse(text); }

// Deterministic random playout used to build test corpora.
std::vector<Position> random_line(std::uint64_t seed, int max_plies) {
  wm::SplitMix64 rng(seed);
  std::vector<Position> line;
  Position p = parse_fen(kStartFen);
  line.push_back(p);
  for (int ply = 0; ply < max_plies; ++ply) {
    if (game_status(p) != Status::kOngoing) break;
    const std::vector<Move> moves = legal_moves(p);
    p = apply_move(p, moves[rng.next_bounded(moves.size())]);
    line.push_back(p);
  }
  return line;
}

}  // namespace

TEST_CASE("start position parses and emits canonically") {
  const Position p = parse_fen(kStartFen);
  CHECK(p.side_to_move == Color::White);
  int pieces = 0;
  for (Square sq = 0; sq < 64; ++sq)
    if (p.board[sq] != kEmpty) ++pieces;
  CHECK(pieces == 32);
  CHECK(emit_fen(p) == kStartFen);
  CHECK(observation(p) == "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq -");

  SUBCASE("four-field EPD input defaults the clocks") {
    const Position epd = parse_fen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq -");
    CHECK(epd.halfmove_clock == 0);
    CHECK(epd.fullmove_number == 1);
  }
}

TEST_CASE("fen parser names the offending field") {
  CHECK_THROWS_WITH_AS(parse_fen("8/8/8/8/8/8/8/8/8 w - - 0 1"),
                       doctest::Contains("ranks"), ParseError);
  CHECK_THROWS_WITH_AS(parse_fen("8/8/8/8/8/8/8/8 w - - 0 1"),
                       doctest::Contains("king"), ParseError);
  CHECK_THROWS_WITH_AS(parse_fen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR x KQkq -"),
                       doctest::Contains("side"), ParseError);
  CHECK_THROWS_WITH_AS(parse_fen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KK -"),
                       doctest::Contains("castling"), ParseError);
  CHECK_THROWS_WITH_AS(parse_fen("4k3/8/8/8/8/8/8/4K3 w KQkq - 0 1"),
                       doctest::Contains("castling"), ParseError);
  CHECK_THROWS_WITH_AS(parse_fen("4k3/8/8/8/8/8/8/4K3 w - e4 0 1"),
                       doctest::Contains("en-passant"), ParseError);
  CHECK_THROWS_WITH_AS(parse_fen("4k3/8/8/8/8/8/8/4K3 w - e6 0 1"),
                       doctest::Contains("en-passant"), ParseError);
  CHECK_THROWS_WITH_AS(parse_fen("4k3/8/8/8/8/8/4p3/4K3 w - - 0 1 extra junk"),
                       doctest::Contains("fields"), ParseError);
  // side not to move may not be in check
  CHECK_THROWS_WITH_AS(parse_fen("4k3/8/8/8/8/8/4r3/4K3 b - - 0 1"),
                       doctest::Contains("check"), ParseError);
  // kings adjacent is also a not-to-move check
  CHECK_THROWS_AS(parse_fen("8/8/8/8/4kK2/8/8/8 w - - 0 1"), ParseError);
}

TEST_CASE("fen round-trips over a random corpus") {
  int positions = 0;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    for (const Position& p : random_line(seed, 40)) {
      const std::string fen = emit_fen(p);
      CHECK(emit_fen(parse_fen(fen)) == fen);
      ++positions;
    }
  }
  CHECK(positions >= 1000);
}

TEST_CASE("startpos has the canonical 20 moves") {
  const std::vector<Move> moves = legal_moves(parse_fen(kStartFen));
  CHECK(moves.size() == 20);
  CHECK(std::is_sorted(moves.begin(), moves.end()));
  CHECK(moves.front().uci() == "a2a3");
  CHECK(moves.back().uci() == "h2h4");
  std::set<std::string> unique;
  for (const Move& m : moves) unique.insert(m.uci());
  CHECK(unique.size() == 20);
}

TEST_CASE("stalemate position has no moves and is a draw") {
  const Position p = parse_fen("7k/5Q2/6K1/8/8/8/8/8 b - - 0 1");
  CHECK(legal_moves(p).empty());
  CHECK(!in_check(p));
  CHECK(game_status(p) == Status::kStalemate);
}

TEST_CASE("apply_move updates clocks, rights, and en passant") {
  const Position start = parse_fen(kStartFen);

  SUBCASE("double push sets the ep target and resets the clock") {
    const Position p = apply_move(start, mv("e2e4"));
    CHECK(p.ep_square == parse_square("e3"));
    CHECK(p.halfmove_clock == 0);
    CHECK(p.fullmove_number == 1);
    CHECK(p.side_to_move == Color::Black);
    // no black pawn can take on e3, so the observation hides the ep square
    CHECK(observation(p).ends_with(" -"));
  }
  SUBCASE("captures reset the halfmove clock") {
    Position p = apply_move(start, mv("e2e4"));
    p = apply_move(p, mv("d7d5"));
    CHECK(p.halfmove_clock == 0);
    p = apply_move(p, mv("b1c3"));
    CHECK(p.halfmove_clock == 1);
    p = apply_move(p, mv("d5e4"));
    CHECK(p.halfmove_clock == 0);
  }
  SUBCASE("castling relocates the rook and clears both rights") {
    Position p = parse_fen("r3k2r/pppppppp/8/8/8/8/PPPPPPPP/R3K2R w KQkq - 0 1");
    const Position castled = apply_move(p, mv("e1g1"));
    CHECK(castled.board[parse_square("f1")] == kRook);
    CHECK(castled.board[parse_square("h1")] == kEmpty);
    CHECK((castled.castling & (kWhiteKingside | kWhiteQueenside)) == 0);
    CHECK((castled.castling & kBlackKingside) != 0);

    const Position long_castled = apply_move(p, mv("e1c1"));
    CHECK(long_castled.board[parse_square("d1")] == kRook);
    CHECK(long_castled.board[parse_square("a1")] == kEmpty);
  }
  SUBCASE("rook moves clear one right") {
    Position p = parse_fen("r3k2r/pppppppp/8/8/8/8/PPPPPPPP/R3K2R w KQkq - 0 1");
    const Position q = apply_move(p, mv("h1g1"));
    CHECK((q.castling & kWhiteKingside) == 0);
    CHECK((q.castling & kWhiteQueenside) != 0);
  }
  SUBCASE("en passant capture removes the bypassed pawn") {
    Position p = parse_fen("4k3/8/8/8/4p3/8/3P4/4K3 w - - 0 1");
    p = apply_move(p, mv("d2d4"));
    CHECK(observation(p).ends_with(" d3"));  // capturable, so visible
    p = apply_move(p, mv("e4d3"));
    CHECK(p.board[parse_square("d4")] == kEmpty);
    CHECK(p.board[parse_square("d3")] == -kPawn);
  }
  SUBCASE("illegal moves are rejected") {
    CHECK_THROWS_AS(apply_move(start, mv("e2e5")), ContractError);
    CHECK_THROWS_AS(apply_move(start, mv("e7e5")), ContractError);
  }
}

TEST_CASE("observation excludes the clocks and nothing else") {
  const Position a = parse_fen("4k3/8/8/8/8/8/4P3/4K3 w - - 0 1");
  const Position b = parse_fen("4k3/8/8/8/8/8/4P3/4K3 w - - 13 37");
  CHECK(observation(a) == observation(b));
  CHECK(emit_fen(a) != emit_fen(b));

  const Position c1 = parse_fen("r3k2r/8/8/8/8/8/8/R3K2R w KQkq - 0 1");
  const Position c2 = parse_fen("r3k2r/8/8/8/8/8/8/R3K2R w Kkq - 0 1");
  CHECK(observation(c1) != observation(c2));
}

TEST_CASE("game status covers the adjudication cases") {
  SUBCASE("fool's mate") {
    Position p = parse_fen(kStartFen);
    for (const char* text : {"f2f3", "e7e5", "g2g4", "d8h4"})
      p = apply_move(p, mv(text));
    CHECK(game_status(p) == Status::kCheckmate);
    CHECK(status_score_white(p, Status::kCheckmate) == 0.0);
  }
  SUBCASE("bare kings are insufficient material") {
    CHECK(game_status(parse_fen("4k3/8/8/8/8/8/8/4K3 w - - 0 1")) ==
          Status::kDrawInsufficient);
    CHECK(game_status(parse_fen("4k3/8/8/8/8/8/8/3NK3 w - - 0 1")) ==
          Status::kDrawInsufficient);
    CHECK(game_status(parse_fen("4k3/8/8/8/8/8/8/3QK3 w - - 0 1")) ==
          Status::kOngoing);
  }
  SUBCASE("fifty-move rule") {
    CHECK(game_status(parse_fen("4k3/8/8/8/8/8/3R4/4K3 w - - 100 80")) ==
          Status::kDrawFiftyMove);
  }
  SUBCASE("threefold repetition via knight shuffles") {
    Position p = parse_fen(kStartFen);
    const char* cycle[] = {"g1f3", "g8f6", "f3g1", "f6g8"};
    Status status = Status::kOngoing;
    for (int lap = 0; lap < 3 && status == Status::kOngoing; ++lap) {
      for (const char* text : cycle) {
        p = apply_move(p, mv(text));
        status = game_status(p);
        if (status != Status::kOngoing) break;
      }
    }
    CHECK(status == Status::kDrawThreefold);
  }
}

TEST_CASE("perft matches the published tables at shallow depth") {
  const Position start = parse_fen(kStartFen);
  CHECK(perft(start, 1) == 20);
  CHECK(perft(start, 2) == 400);
  CHECK(perft(start, 3) == 8902);

  const Position kiwipete =
      parse_fen("r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq -");
  CHECK(perft(kiwipete, 1) == 48);
  CHECK(perft(kiwipete, 2) == 2039);
  CHECK(perft(kiwipete, 3) == 97862);

  const Position pinning = parse_fen("8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - -");
  CHECK(perft(pinning, 1) == 14);
  CHECK(perft(pinning, 2) == 191);
  CHECK(perft(pinning, 3) == 2812);
  CHECK(perft(pinning, 4) == 43238);
}

TEST_CASE("legal move lists never leave the king in check") {
  for (std::uint64_t seed = 50; seed < 58; ++seed) {
    for (const Position& p : random_line(seed, 60)) {
      for (const Move& m : legal_moves(p)) {
        const Position q = apply_move(p, m);
        CHECK(!square_attacked(q, q.king_square(p.side_to_move), q.side_to_move));
      }
    }
  }
}

TEST_CASE("san handles the notation corners") {
  const Position start = parse_fen(kStartFen);
  CHECK(from_san(start, "e4") == mv("e2e4"));
  CHECK(from_san(start, "Nf3") == mv("g1f3"));
  CHECK(from_san(start, "Nf3!?") == mv("g1f3"));
  CHECK_THROWS_AS(from_san(start, "Ke2"), ParseError);  // illegal

  SUBCASE("ambiguity requires disambiguation") {
    // two knights reach d2
    const Position p = parse_fen("4k3/8/8/8/8/5N2/8/1N2K3 w - - 0 1");
    CHECK_THROWS_WITH_AS(from_san(p, "Nd2"), doctest::Contains("ambiguous"),
                         ParseError);
    CHECK(from_san(p, "Nbd2") == mv("b1d2"));
    CHECK(from_san(p, "Nfd2") == mv("f3d2"));
    CHECK(to_san(p, mv("b1d2")) == "Nbd2");
  }
  SUBCASE("promotion, capture, and check suffixes") {
    const Position p = parse_fen("3r3k/4P3/8/8/8/8/8/4K3 w - - 0 1");
    CHECK(from_san(p, "exd8=Q+") == mv("e7d8q"));
    CHECK(from_san(p, "exd8Q+") == mv("e7d8q"));
    CHECK(from_san(p, "e8=N") == mv("e7e8n"));
    CHECK(to_san(p, mv("e7d8q")) == "exd8=Q+");
  }
  SUBCASE("castling notation") {
    const Position p = parse_fen("r3k2r/pppppppp/8/8/8/8/PPPPPPPP/R3K2R w KQkq - 0 1");
    CHECK(from_san(p, "O-O") == mv("e1g1"));
    CHECK(from_san(p, "O-O-O") == mv("e1c1"));
    CHECK(to_san(p, mv("e1g1")) == "O-O");
  }
  SUBCASE("bare pawn moves never resolve to captures") {
    Position p = parse_fen(kStartFen);
    p = apply_move(p, mv("e2e4"));
    p = apply_move(p, mv("d7d5"));
    CHECK(from_san(p, "exd5") == mv("e4d5"));
    CHECK_THROWS_AS(from_san(p, "d5"), ParseError);  // push is blocked
  }
}

TEST_CASE("pgn parses tags, comments, and move text") {
  const std::string text = R"([Event "test"]
[White "A"]
[Black "B"]
[Result "*"]

1. e4 {king pawn} e5 2. Nf3 $1 (2. f4 exf4) Nc6 ; rest of line
3. Bb5 *
)";
  const std::vector<PgnGame> games = parse_pgn(text);
  REQUIRE(games.size() == 1);
  const PgnGame& game = games[0];
  CHECK(game.tag("Event") == "test");
  CHECK(game.result == "*");
  REQUIRE(game.moves.size() == 5);
  CHECK(game.moves[0] == mv("e2e4"));
  CHECK(game.moves[4] == mv("f1b5"));

  const auto records = to_move_records(game, 7);
  REQUIRE(records.size() == 5);
  CHECK(records[0].player == 0);
  CHECK(records[1].player == 1);
  CHECK(records[0].round == 7);
  CHECK(records[2].move == 2);
  CHECK(records[0].actions.size() == 20);
  CHECK(records[0].chosen == "e2e4");
  CHECK(records[0].observation ==
        "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq -");
}

TEST_CASE("pgn round-trips a random game corpus") {
  int games_checked = 0;
  for (std::uint64_t seed = 100; seed < 150; ++seed) {
    const std::vector<Position> line = random_line(seed, 60);
    PgnGame game;
    Position p = parse_fen(kStartFen);
    wm::SplitMix64 rng(seed);
    for (int ply = 0; ply + 1 < int(line.size()); ++ply) {
      const std::vector<Move> moves = legal_moves(line[ply]);
      // recover the move actually played in random_line
      const Move played = moves[rng.next_bounded(moves.size())];
      game.moves.push_back(played);
    }
    game.result = "*";
    const std::string text = emit_pgn(game);
    const std::vector<PgnGame> parsed = parse_pgn(text);
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0].moves == game.moves);
    ++games_checked;
  }
  CHECK(games_checked == 50);
}

TEST_CASE("multiple games per pgn stream") {
  const std::string text =
      "[Event \"one\"]\n[Result \"1-0\"]\n\n1. e4 e5 1-0\n"
      "[Event \"two\"]\n[Result \"0-1\"]\n\n1. d4 d5 0-1\n";
  const auto games = parse_pgn(text);
  REQUIRE(games.size() == 2);
  CHECK(games[0].result == "1-0");
  CHECK(games[1].moves[0] == mv("d2d4"));
}

TEST_CASE("custom start positions carry the FEN tag") {
  PgnGame game;
  game.start_fen = "4k3/8/8/8/8/8/4P3/4K3 w - - 0 1";
  game.moves = {mv("e2e4"), mv("e8d7")};
  game.result = "1/2-1/2";
  const std::string text = emit_pgn(game);
  CHECK(text.find("[FEN \"") != std::string::npos);
  const auto parsed = parse_pgn(text);
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].start_fen == game.start_fen);
  CHECK(parsed[0].moves == game.moves);
}

TEST_CASE("opening book loader validates every line") {
  std::ostringstream path;
  path << "/tmp/gamemark_book_" << ::getpid() << ".fen";
  {
    std::ofstream out(path.str());
    out << "# comment\n\n" << kStartFen << "\n4k3/8/8/8/8/8/4P3/4K3 w - - 0 1\n";
  }
  const std::vector<Position> book = load_fen_book(path.str());
  CHECK(book.size() == 2);
  {
    std::ofstream out(path.str());
    out << "not a fen line\n";
  }
  CHECK_THROWS_WITH_AS(load_fen_book(path.str()), doctest::Contains("line 1"),
                       ParseError);
  std::remove(path.str().c_str());
}
