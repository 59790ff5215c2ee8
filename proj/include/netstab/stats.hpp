#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "netstab/types.hpp"

namespace netstab {

struct CorrelationResult {
  std::optional<double> pearson_r;
  std::optional<double> spearman_rho;
  std::optional<double> p_value;  // two-sided, for pearson_r
  std::size_t n_pairs = 0;
  std::vector<std::string> flags;  // "too few pairs", "degenerate variance"
};

/// Pearson product-moment r of two equal-length vectors. Returns exactly 1
/// for identical vectors; clamps to [-1, 1]. Absent with fewer than 2
/// values or zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

/// Average (mid) ranks, 1-based.
std::vector<double> average_ranks(std::span<const double> x);

std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

/// Two-sided p of t = r sqrt((n-2)/(1-r^2)) against Student-t with n-2 df.
double correlation_p_value(double r, std::size_t n);

/// Pairwise deletion over aligned optional vectors, then Pearson, Spearman
/// and the t-test p-value. Needs at least 3 complete pairs.
CorrelationResult correlate(std::span<const std::optional<double>> full,
                            std::span<const std::optional<double>> reduced);

using NodeValues = std::unordered_map<NodeId, std::optional<double>>;

/// Keyed form: only `surviving` nodes enter, and only where both sides
/// are defined.
CorrelationResult correlate(const NodeValues& full, const NodeValues& reduced,
                            std::span<const NodeId> surviving);

}  // namespace netstab
