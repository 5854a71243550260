#include "sherdreg/metrics.hpp"

#include "sherdreg/errors.hpp"
#include "sherdreg/neighbor_index.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace sherdreg {

double percentile(std::vector<double> values, double p) {
  require(!values.empty(), "percentile of an empty set");
  require(p >= 0.0 && p <= 100.0, "percentile must lie in [0, 100]");
  std::sort(values.begin(), values.end());
  const double rank = p / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

EvalReport evaluate(const PointCloud& recon, const PointCloud& gt, double completeness_threshold,
                    double accuracy_percentile) {
  if (recon.empty() || gt.empty()) throw Error(ErrorCode::EmptyCloud, "evaluation needs two non-empty clouds");
  require(completeness_threshold > 0.0, "completeness threshold must be positive");

  const NeighborIndex gt_index(gt);
  std::vector<double> d;
  d.reserve(recon.size());
  double sum = 0.0;
  for (const auto& p : recon.points()) {
    d.push_back(gt_index.nearest(p).distance);
    sum += d.back();
  }
  const double mean = sum / static_cast<double>(d.size());
  double var = 0.0;
  for (double x : d) var += (x - mean) * (x - mean);
  var /= static_cast<double>(d.size());

  const NeighborIndex recon_index(recon);
  std::size_t covered = 0;
  for (const auto& g : gt.points()) {
    if (recon_index.nearest(g).distance < completeness_threshold) ++covered;
  }

  EvalReport r;
  r.accuracy_mm = percentile(std::move(d), accuracy_percentile);
  r.completeness_pct = 100.0 * static_cast<double>(covered) / static_cast<double>(gt.size());
  r.mae_mm = mean;
  r.sd_mm = std::sqrt(var);
  r.completeness_threshold_mm = completeness_threshold;
  r.accuracy_percentile = accuracy_percentile;
  return r;
}

EvalReport batch_mean(const std::vector<FragmentEval>& rows) {
  require(!rows.empty(), "batch mean of no fragments");
  EvalReport m;
  m.completeness_threshold_mm = rows.front().report.completeness_threshold_mm;
  m.accuracy_percentile = rows.front().report.accuracy_percentile;
  for (const auto& r : rows) {
    m.accuracy_mm += r.report.accuracy_mm;
    m.completeness_pct += r.report.completeness_pct;
    m.mae_mm += r.report.mae_mm;
    m.sd_mm += r.report.sd_mm;
  }
  const double n = static_cast<double>(rows.size());
  m.accuracy_mm /= n;
  m.completeness_pct /= n;
  m.mae_mm /= n;
  m.sd_mm /= n;
  return m;
}

std::string format_eval_csv(const std::vector<FragmentEval>& rows) {
  std::ostringstream out;
  out << "id,accuracy_mm,completeness_pct,mae_mm,sd_mm\n";
  auto row = [&](const std::string& id, const EvalReport& r) {
    out << id << ',' << std::fixed << std::setprecision(2) << r.accuracy_mm << ',' << r.completeness_pct << ','
        << r.mae_mm << ',' << r.sd_mm << '\n';
  };
  for (const auto& r : rows) row(r.id, r.report);
  if (!rows.empty()) row("Mean", batch_mean(rows));
  return out.str();
}

}  // namespace sherdreg
