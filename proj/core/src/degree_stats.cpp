#include "pkgnet/degree_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pkgnet/errors.hpp"

namespace pkgnet {

std::string to_string(FitModel model) {
  switch (model) {
    case FitModel::exponential: return "exponential";
    case FitModel::power_law: return "power_law";
    case FitModel::linear: return "linear";
  }
  return "unknown";
}

std::vector<CumulativePoint> cumulative_degree_distribution(
    const DependencyGraph& graph, EdgeKind kind, Direction direction) {
  std::vector<std::size_t> degrees;
  for (NodeId n = 0; n < graph.node_count(); ++n) {
    const std::size_t d = graph.degree(n, kind, direction);
    if (d >= 1) degrees.push_back(d);
  }
  if (degrees.empty()) {
    throw DataError("no node has degree >= 1 for the requested kind");
  }
  std::sort(degrees.begin(), degrees.end());

  const auto total = static_cast<double>(degrees.size());
  std::vector<CumulativePoint> points;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (i > 0 && degrees[i] == degrees[i - 1]) continue;
    // Everything from position i on has degree >= degrees[i].
    points.push_back({static_cast<double>(degrees[i]),
                      static_cast<double>(degrees.size() - i) / total});
  }
  return points;
}

int multiplicative_bin_index(double k, double base) {
  if (base <= 1.0) throw std::invalid_argument("bin base must exceed 1");
  if (k <= 0.0) throw std::invalid_argument("degree must be positive");
  int b = static_cast<int>(std::floor(std::log(k) / std::log(base)));
  // log() rounding can misplace exact powers; nudge onto the right bin.
  while (std::pow(base, b + 1) <= k) ++b;
  while (std::pow(base, b) > k) --b;
  return b;
}

std::vector<CumulativePoint> multiplicative_bin(
    const std::vector<CumulativePoint>& points, double base) {
  if (base <= 1.0) throw std::invalid_argument("bin base must exceed 1");
  if (points.empty()) throw std::invalid_argument("no points to bin");

  std::vector<CumulativePoint> sorted = points;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.k < b.k; });

  std::vector<CumulativePoint> binned;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const int b = multiplicative_bin_index(sorted[i].k, base);
    const double upper = std::pow(base, b + 1);
    double sum = 0.0;
    std::size_t count = 0;
    while (i < sorted.size() && sorted[i].k < upper) {
      sum += sorted[i].p;
      ++count;
      ++i;
    }
    binned.push_back({std::pow(base, b + 0.5), sum / count});
  }
  return binned;
}

namespace {

double ln_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 300;
  constexpr double kEpsilon = 1e-15;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEpsilon) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - ln_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_test_pvalue(double f, std::size_t df2) {
  if (df2 == 0) return 1.0;
  if (std::isinf(f)) return 0.0;
  if (f <= 0.0) return 1.0;
  const double m = static_cast<double>(df2);
  return incomplete_beta(m / 2.0, 0.5, m / (m + f));
}

FitResult fit_model(const std::vector<CumulativePoint>& points,
                    FitModel model) {
  if (points.size() < 3) {
    throw DataError("regression needs at least 3 points, got " +
                    std::to_string(points.size()));
  }

  // Sorting first makes the fit exactly invariant under input reordering.
  std::vector<CumulativePoint> sorted = points;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.k < b.k || (a.k == b.k && a.p < b.p);
  });

  std::vector<double> xs, ys;
  xs.reserve(sorted.size());
  ys.reserve(sorted.size());
  for (const auto& pt : sorted) {
    double x = pt.k;
    double y = pt.p;
    if (model == FitModel::power_law) {
      if (pt.k <= 0.0) throw DataError("power-law fit needs positive k");
      x = std::log(pt.k);
    }
    if (model != FitModel::linear) {
      if (pt.p <= 0.0) {
        throw DataError("log-scale fit needs positive p values");
      }
      y = std::log(pt.p);
    }
    xs.push_back(x);
    ys.push_back(y);
  }

  const auto n = static_cast<double>(xs.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;

  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0) {
    throw DataError("degenerate regression: zero variance in x");
  }

  FitResult fit;
  fit.model = model;
  fit.n_points = xs.size();
  fit.df_denominator = xs.size() - 2;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  fit.r_squared = syy == 0.0 ? 0.0 : (sxy * sxy) / (sxx * syy);
  const double df = static_cast<double>(fit.df_denominator);
  fit.f_stat = fit.r_squared >= 1.0
                   ? std::numeric_limits<double>::infinity()
                   : fit.r_squared * df / (1.0 - fit.r_squared);
  fit.p_value = f_test_pvalue(fit.f_stat, fit.df_denominator);
  return fit;
}

BestFit best_fit(const std::vector<CumulativePoint>& points) {
  BestFit result;
  result.exponential = fit_model(points, FitModel::exponential);
  result.power_law = fit_model(points, FitModel::power_law);
  result.winner = result.power_law.f_stat > result.exponential.f_stat
                      ? FitModel::power_law
                      : FitModel::exponential;
  return result;
}

}  // namespace pkgnet
