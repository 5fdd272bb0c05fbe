#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "msl/grid.hpp"

namespace msl {

struct Matching {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (predicted, truth)
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

struct DetectionReport {
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
  double loss = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double tau = 0.0;

  friend bool operator==(const DetectionReport&, const DetectionReport&) = default;
};

/// Greedy matching: all pairs within tau, ascending distance (ties by predicted
/// then truth index), accepted while both endpoints are free.
Matching match(const PointSet& g, const PointSet& g_star, double tau);

/// 2TP / (2TP + FP + FN); 1 when all three counts are zero.
double f1_from_counts(std::size_t tp, std::size_t fp, std::size_t fn);

/// 1 - F1 of the greedy matching.
double detection_loss(const PointSet& g, const PointSet& g_star, double tau);

/// Micro-averaged report: counts are pooled over samples before the ratios.
DetectionReport report(std::span<const PointSet> g_list, std::span<const PointSet> g_star_list, double tau);
DetectionReport report_from_counts(std::size_t tp, std::size_t fp, std::size_t fn, double tau);

void to_json(nlohmann::json& j, const DetectionReport& r);
void from_json(const nlohmann::json& j, DetectionReport& r);

}  // namespace msl
