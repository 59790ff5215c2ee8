#include "netstab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

namespace netstab {

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) return std::nullopt;
  if (std::equal(x.begin(), x.end(), y.begin())) {
    const bool constant = std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
    if (constant) return std::nullopt;
    return 1.0;
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0 || syy <= 0) return std::nullopt;
  return std::clamp(sxy / (std::sqrt(sxx) * std::sqrt(syy)), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

double correlation_p_value(double r, std::size_t n) {
  if (n < 3) return 1.0;
  if (std::abs(r) >= 1.0) return 0.0;
  const double df = static_cast<double>(n - 2);
  const double t = r * std::sqrt(df / (1.0 - r * r));
  const boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

CorrelationResult correlate(std::span<const std::optional<double>> full,
                            std::span<const std::optional<double>> reduced) {
  CorrelationResult result;
  std::vector<double> x, y;
  const std::size_t n = std::min(full.size(), reduced.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (full[i] && reduced[i]) {
      x.push_back(*full[i]);
      y.push_back(*reduced[i]);
    }
  }
  result.n_pairs = x.size();
  if (result.n_pairs < 3) {
    result.flags.emplace_back("too few pairs");
    return result;
  }
  result.pearson_r = pearson(x, y);
  if (!result.pearson_r) {
    result.flags.emplace_back("degenerate variance");
    return result;
  }
  result.spearman_rho = spearman(x, y);
  result.p_value = correlation_p_value(*result.pearson_r, result.n_pairs);
  return result;
}

CorrelationResult correlate(const NodeValues& full, const NodeValues& reduced,
                            std::span<const NodeId> surviving) {
  std::vector<std::optional<double>> x, y;
  x.reserve(surviving.size());
  y.reserve(surviving.size());
  for (const NodeId& id : surviving) {
    const auto a = full.find(id);
    const auto b = reduced.find(id);
    x.push_back(a == full.end() ? std::nullopt : a->second);
    y.push_back(b == reduced.end() ? std::nullopt : b->second);
  }
  return correlate(x, y);
}

}  // namespace netstab
