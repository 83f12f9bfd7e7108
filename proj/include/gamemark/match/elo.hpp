#pragma once

namespace gamemark::match {

// Elo difference with a 95% margin from the draw-aware normal
// approximation, plus LOI (likelihood of inferiority, 1 - LOS).
struct EloEstimate {
  double elo = 0.0;       // +inf/-inf when the score is 1 or 0
  double margin95 = 0.0;
  double loi = 0.5;
  double score = 0.5;     // (w + d/2) / N
  bool degenerate = false;  // score was exactly 0 or 1
};

EloEstimate elo_and_loi(int wins, int draws, int losses);

}  // namespace gamemark::match
