#include "gamemark/detect/detect.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "gamemark/error.hpp"

namespace gamemark::detect {

double z_score(long long n_green, long long n, double gamma) {
  if (n < 1) throw ContractError("z_score: n must be >= 1");
  if (n_green < 0 || n_green > n)
    throw ContractError("z_score: n_green must be in [0, n]");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw ContractError("z_score: gamma must be in (0, 1)");
  return (double(n_green) - gamma * double(n)) /
         std::sqrt(double(n) * gamma * (1.0 - gamma));
}

double p_value(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

Classification classify_move(const MoveRecord& rec,
                             const wm::WatermarkParams& params) {
  params.validate();
  if (rec.actions.empty()) throw TraceError("classify_move: empty legal set");
  const auto it =
      std::lower_bound(rec.actions.begin(), rec.actions.end(), rec.chosen);
  if (it == rec.actions.end() || *it != rec.chosen)
    throw TraceError("classify_move: played action '" + rec.chosen +
                     "' is not in the recorded legal set");
  if (rec.actions.size() < static_cast<std::size_t>(params.min_branching))
    return Classification::kSkipped;

  const std::uint64_t seed =
      wm::seed_from_observation(rec.observation, params.key);
  const wm::Partition part =
      wm::partition_actions(rec.actions, seed, params.gamma);
  const auto index = static_cast<std::size_t>(it - rec.actions.begin());
  return part.is_green(index) ? Classification::kGreen : Classification::kRed;
}

DetectionReport analyze(std::span<const MoveRecord> records,
                        const wm::WatermarkParams& params, int player) {
  params.validate();
  DetectionReport report;
  int last_round = -1;
  for (const MoveRecord& rec : records) {
    if (rec.player != player) continue;
    if (rec.round != last_round) {
      // close out any rounds that ended before this one
      while (last_round >= 0 &&
             static_cast<int>(report.z_by_round.size()) <= last_round) {
        report.z_by_round.push_back(report.n > 0 ? report.z : 0.0);
      }
      last_round = rec.round;
    }
    const Classification cls = classify_move(rec, params);
    if (cls == Classification::kSkipped) {
      ++report.skipped;
      continue;
    }
    ++report.n;
    if (cls == Classification::kGreen) ++report.n_green;
    report.z = z_score(report.n_green, report.n, params.gamma);
    report.trace.push_back(
        {rec.round, rec.move, cls, report.n, report.n_green, report.z});
  }
  while (last_round >= 0 &&
         static_cast<int>(report.z_by_round.size()) <= last_round) {
    report.z_by_round.push_back(report.n > 0 ? report.z : 0.0);
  }
  if (report.n == 0) {
    report.insufficient_data = true;
    report.z = 0.0;
    report.p = 1.0;
  } else {
    report.p = p_value(report.z);
  }
  return report;
}

void write_report_csv(std::ostream& out, const DetectionReport& report) {
  out << "round,move,n,n_g,z,p\n";
  for (const DecisionPoint& pt : report.trace) {
    out << pt.round << ',' << pt.move << ',' << pt.n << ',' << pt.n_green << ','
        << pt.z << ',' << p_value(pt.z) << '\n';
  }
}

std::string report_text(const DetectionReport& report, double threshold) {
  std::ostringstream out;
  if (report.insufficient_data) {
    out << "verdict: insufficient data (no counted decisions; " << report.skipped
        << " skipped)\n";
    return out.str();
  }
  out << "counted decisions: " << report.n << "\n"
      << "green decisions:   " << report.n_green << "\n"
      << "skipped (forced):  " << report.skipped << "\n"
      << "z-score:           " << report.z << "\n"
      << "p-value:           " << report.p << "\n"
      << "verdict:           "
      << (report.z >= threshold ? "WATERMARK DETECTED" : "no watermark")
      << " (threshold z=" << threshold << ")\n";
  return out.str();
}

RocCurve roc(std::span<const double> z_watermarked,
             std::span<const double> z_clean) {
  if (z_watermarked.empty() || z_clean.empty())
    throw ContractError("roc: both samples must be non-empty");

  std::vector<double> thresholds(z_watermarked.begin(), z_watermarked.end());
  thresholds.insert(thresholds.end(), z_clean.begin(), z_clean.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  auto rate_at_least = [](std::span<const double> xs, double t) {
    std::size_t hits = 0;
    for (double x : xs)
      if (x >= t) ++hits;
    return double(hits) / double(xs.size());
  };

  RocCurve curve;
  curve.points.push_back({-std::numeric_limits<double>::infinity(), 1.0, 1.0});
  for (double t : thresholds) {
    curve.points.push_back(
        {t, rate_at_least(z_clean, t), rate_at_least(z_watermarked, t)});
  }
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});

  // trapezoid over decreasing FPR
  double auc = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    auc += (a.fpr - b.fpr) * 0.5 * (a.tpr + b.tpr);
  }
  curve.auc = auc;
  return curve;
}

}  // namespace gamemark::detect
