#include "msl/metrics.hpp"

#include <algorithm>
#include <tuple>

namespace msl {

Matching match(const PointSet& g, const PointSet& g_star, double tau) {
  if (!(tau > 0.0)) throw ConfigError("metrics.tau must be > 0");
  struct Candidate {
    double d2;
    std::size_t pred;
    std::size_t truth;
  };
  std::vector<Candidate> cands;
  const double tau2 = tau * tau;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g_star.size(); ++j) {
      const double dx = g[i].x - g_star[j].x, dy = g[i].y - g_star[j].y;
      const double d2 = dx * dx + dy * dy;
      if (d2 <= tau2) cands.push_back({d2, i, j});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.d2, a.pred, a.truth) < std::tie(b.d2, b.pred, b.truth);
  });

  Matching m;
  std::vector<bool> pred_used(g.size(), false), truth_used(g_star.size(), false);
  for (const Candidate& c : cands) {
    if (pred_used[c.pred] || truth_used[c.truth]) continue;
    pred_used[c.pred] = truth_used[c.truth] = true;
    m.pairs.emplace_back(c.pred, c.truth);
  }
  m.tp = m.pairs.size();
  m.fp = g.size() - m.tp;
  m.fn = g_star.size() - m.tp;
  return m;
}

double f1_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  const std::size_t denom = 2 * tp + fp + fn;
  return denom == 0 ? 1.0 : static_cast<double>(2 * tp) / static_cast<double>(denom);
}

double detection_loss(const PointSet& g, const PointSet& g_star, double tau) {
  const Matching m = match(g, g_star, tau);
  return 1.0 - f1_from_counts(m.tp, m.fp, m.fn);
}

DetectionReport report_from_counts(std::size_t tp, std::size_t fp, std::size_t fn, double tau) {
  DetectionReport r;
  r.tp = tp;
  r.fp = fp;
  r.fn = fn;
  r.tau = tau;
  // An empty denominator scores 1 only when the other error count is also zero.
  r.precision = tp + fp == 0 ? (fn == 0 ? 1.0 : 0.0) : static_cast<double>(tp) / static_cast<double>(tp + fp);
  r.recall = tp + fn == 0 ? (fp == 0 ? 1.0 : 0.0) : static_cast<double>(tp) / static_cast<double>(tp + fn);
  r.f1 = f1_from_counts(tp, fp, fn);
  r.loss = 1.0 - r.f1;
  return r;
}

DetectionReport report(std::span<const PointSet> g_list, std::span<const PointSet> g_star_list, double tau) {
  if (g_list.size() != g_star_list.size()) throw ShapeError("report: prediction and truth lists differ in length");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t k = 0; k < g_list.size(); ++k) {
    const Matching m = match(g_list[k], g_star_list[k], tau);
    tp += m.tp;
    fp += m.fp;
    fn += m.fn;
  }
  return report_from_counts(tp, fp, fn, tau);
}

void to_json(nlohmann::json& j, const DetectionReport& r) {
  j = {{"precision", r.precision}, {"recall", r.recall}, {"f1", r.f1}, {"loss", r.loss},
       {"tp", r.tp},               {"fp", r.fp},         {"fn", r.fn}, {"tau", r.tau}};
}

void from_json(const nlohmann::json& j, DetectionReport& r) {
  r.precision = j.at("precision").get<double>();
  r.recall = j.at("recall").get<double>();
  r.f1 = j.at("f1").get<double>();
  r.loss = j.at("loss").get<double>();
  r.tp = j.at("tp").get<std::size_t>();
  r.fp = j.at("fp").get<std::size_t>();
  r.fn = j.at("fn").get<std::size_t>();
  r.tau = j.at("tau").get<double>();
}

}  // namespace msl
