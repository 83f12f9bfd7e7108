#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gamemark/detect/record.hpp"
#include "gamemark/watermark/watermark.hpp"

namespace gamemark::detect {

// z = (n_G - gamma*n) / sqrt(n * gamma * (1 - gamma))
double z_score(long long n_green, long long n, double gamma);

// One-sided standard-normal upper tail, 0.5 * erfc(z / sqrt(2)).
double p_value(double z);

enum class Classification { kGreen, kRed, kSkipped };

// Replays the partition from (observation, key, gamma) and returns the
// membership of the played action. Decisions below min_branching are
// skipped. Throws TraceError when the played action is not in the legal
// set (corrupt trace, or the detector's rules disagree with the game).
Classification classify_move(const MoveRecord& rec,
                             const wm::WatermarkParams& params);

// One row of the per-decision trace: the running statistic after this
// counted decision.
struct DecisionPoint {
  int round = 0;
  int move = 0;
  Classification cls = Classification::kSkipped;
  long long n = 0;        // counted decisions so far
  long long n_green = 0;  // green decisions so far
  double z = 0.0;
};

struct DetectionReport {
  long long n = 0;
  long long n_green = 0;
  long long skipped = 0;
  double z = 0.0;
  double p = 1.0;
  bool insufficient_data = false;  // zero counted decisions
  std::vector<DecisionPoint> trace;          // one entry per counted decision
  std::vector<double> z_by_round;            // cumulative z at each round's end

  bool detected(double threshold) const {
    return !insufficient_data && z >= threshold;
  }
};

// Filters to the suspected player, classifies each record in order, and
// accumulates the pooled statistic with cumulative traces by move and round.
DetectionReport analyze(std::span<const MoveRecord> records,
                        const wm::WatermarkParams& params, int player);

// CSV with columns: round,move,n,n_g,z,p (one row per counted decision).
void write_report_csv(std::ostream& out, const DetectionReport& report);
std::string report_text(const DetectionReport& report, double threshold);

// ROC over z thresholds swept across both samples' observed values.
struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // from (1,1) at -inf threshold to (0,0)
  double auc = 0.0;              // trapezoidal
};

RocCurve roc(std::span<const double> z_watermarked,
             std::span<const double> z_clean);

}  // namespace gamemark::detect
