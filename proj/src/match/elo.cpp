#include "gamemark/match/elo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gamemark/error.hpp"

namespace gamemark::match {

namespace {
double elo_of_score(double s) { return -400.0 * std::log10(1.0 / s - 1.0); }
}  // namespace

EloEstimate elo_and_loi(int wins, int draws, int losses) {
  const int games = wins + draws + losses;
  if (games < 1) throw ContractError("elo_and_loi: no games");

  EloEstimate est;
  est.score = (double(wins) + 0.5 * double(draws)) / double(games);

  // LOI = 1 - LOS; all-draw matches carry no decisive information
  est.loi = wins + losses == 0
                ? 0.5
                : 0.5 * std::erfc(double(wins - losses) /
                                  std::sqrt(2.0 * double(wins + losses)));

  if (est.score <= 0.0 || est.score >= 1.0) {
    est.degenerate = true;
    est.elo = est.score <= 0.0 ? -std::numeric_limits<double>::infinity()
                               : std::numeric_limits<double>::infinity();
    est.margin95 = std::numeric_limits<double>::infinity();
    return est;
  }

  est.elo = elo_of_score(est.score);

  const double s = est.score;
  const double per_game_var =
      (double(wins) * (1.0 - s) * (1.0 - s) + double(draws) * (0.5 - s) * (0.5 - s) +
       double(losses) * s * s) /
      double(games);
  const double score_stderr = std::sqrt(per_game_var / double(games));

  // propagate the 95% score interval through the Elo curve
  constexpr double kZ95 = 1.959963984540054;
  constexpr double kEps = 1e-9;
  const double lo = std::clamp(s - kZ95 * score_stderr, kEps, 1.0 - kEps);
  const double hi = std::clamp(s + kZ95 * score_stderr, kEps, 1.0 - kEps);
  est.margin95 = 0.5 * (elo_of_score(hi) - elo_of_score(lo));
  return est;
}

}  // namespace gamemark::match
