#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pkgnet/graph.hpp"

namespace pkgnet {

// One point of a cumulative degree distribution: the fraction p of
// interacting nodes whose degree is at least k.
struct CumulativePoint {
  double k;
  double p;
};

enum class FitModel { exponential, power_law, linear };

std::string to_string(FitModel model);

// Simple regression summary. The F statistic tests the regression slope:
// F = r^2 (n-2) / (1 - r^2) with (1, n-2) degrees of freedom.
struct FitResult {
  FitModel model = FitModel::linear;
  double slope = 0.0;
  double intercept = 0.0;  // in transformed coordinates (ln p for log models)
  double r_squared = 0.0;
  double f_stat = 0.0;
  std::size_t df_denominator = 0;
  double p_value = 1.0;
  std::size_t n_points = 0;
};

// P(k) over nodes with degree >= 1 of the given kind/direction; one point
// per observed degree value.
std::vector<CumulativePoint> cumulative_degree_distribution(
    const DependencyGraph& graph, EdgeKind kind, Direction direction);

// Multiplicative (logarithmic) binning: bin b covers [base^b, base^(b+1)),
// the representative degree is the geometric mean of the bin bounds and the
// bin probability the arithmetic mean of its members. Empty bins vanish.
std::vector<CumulativePoint> multiplicative_bin(
    const std::vector<CumulativePoint>& points, double base = 2.0);

// Index of the multiplicative bin containing degree k.
int multiplicative_bin_index(double k, double base);

// Least-squares fit in the model's coordinates: exponential regresses ln p
// on k, power_law regresses ln p on ln k, linear regresses p on k.
FitResult fit_model(const std::vector<CumulativePoint>& points,
                    FitModel model);

struct BestFit {
  FitResult exponential;
  FitResult power_law;
  FitModel winner = FitModel::exponential;

  const FitResult& best() const {
    return winner == FitModel::power_law ? power_law : exponential;
  }
};

// Fits both candidate models and keeps whichever has the larger F statistic.
BestFit best_fit(const std::vector<CumulativePoint>& points);

// Survival function of the F(1, df2) distribution.
double f_test_pvalue(double f, std::size_t df2);

// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

}  // namespace pkgnet
