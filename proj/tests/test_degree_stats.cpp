#include "pkgnet/degree_stats.hpp"

#include <cmath>
#include <string>

#include "doctest.h"
#include "pkgnet/errors.hpp"
#include "pkgnet/rng.hpp"

using namespace pkgnet;

namespace {

std::vector<CumulativePoint> exact_series(FitModel model, double amplitude,
                                          double rate, int n) {
  std::vector<CumulativePoint> points;
  for (int i = 1; i <= n; ++i) {
    const double k = i;
    double p = 0.0;
    switch (model) {
      case FitModel::exponential: p = amplitude * std::exp(rate * k); break;
      case FitModel::power_law: p = amplitude * std::pow(k, rate); break;
      case FitModel::linear: p = amplitude + rate * k; break;
    }
    points.push_back({k, p});
  }
  return points;
}

}  // namespace

TEST_CASE("cumulative degree distribution") {
  SUBCASE("degrees 1,1,2,4") {
    // Out-degrees: a1=1, a2=1, b=2, c=4; targets have out-degree 0.
    const auto g = read_edge_list(
        "DEP a1 x\nDEP a2 x\nDEP b x\nDEP b y\n"
        "DEP c w\nDEP c x\nDEP c y\nDEP c z\n");
    const auto points = cumulative_degree_distribution(
        g, EdgeKind::dependency, Direction::out);
    REQUIRE(points.size() == 3);
    CHECK(points[0].k == 1);
    CHECK(points[0].p == doctest::Approx(1.0));
    CHECK(points[1].k == 2);
    CHECK(points[1].p == doctest::Approx(0.5));
    CHECK(points[2].k == 4);
    CHECK(points[2].p == doctest::Approx(0.25));
  }
  SUBCASE("all nodes degree 1") {
    const auto g = read_edge_list("DEP a x\nDEP b y\n");
    const auto points = cumulative_degree_distribution(
        g, EdgeKind::dependency, Direction::out);
    REQUIRE(points.size() == 1);
    CHECK(points[0].k == 1);
    CHECK(points[0].p == 1.0);
  }
  SUBCASE("mutual star, incoming direction") {
    // Hub and 5 spokes needing each other: in-degrees hub=5, spokes=1.
    std::string text;
    for (int i = 0; i < 5; ++i) {
      text += "DEP s" + std::to_string(i) + " hub\n";
      text += "DEP hub s" + std::to_string(i) + "\n";
    }
    const auto g = read_edge_list(text);
    const auto points = cumulative_degree_distribution(
        g, EdgeKind::dependency, Direction::in);
    REQUIRE(points.size() == 2);
    CHECK(points[0].p == doctest::Approx(1.0));
    CHECK(points[1].k == 5);
    CHECK(points[1].p == doctest::Approx(1.0 / 6.0));
  }
  SUBCASE("no qualifying nodes is an error") {
    const auto g = read_edge_list("DEP a b\n");
    CHECK_THROWS_AS(cumulative_degree_distribution(g, EdgeKind::conflict,
                                                   Direction::in),
                    DataError);
  }
}

TEST_CASE("multiplicative binning") {
  SUBCASE("base-2 bin boundaries") {
    CHECK(multiplicative_bin_index(1, 2.0) == 0);
    CHECK(multiplicative_bin_index(2, 2.0) == 1);
    CHECK(multiplicative_bin_index(3, 2.0) == 1);
    CHECK(multiplicative_bin_index(4, 2.0) == 2);
    CHECK(multiplicative_bin_index(7, 2.0) == 2);
    CHECK(multiplicative_bin_index(8, 2.0) == 3);
    CHECK(multiplicative_bin_index(1024, 2.0) == 10);
  }
  SUBCASE("bins aggregate members and use the geometric mean") {
    std::vector<CumulativePoint> points{{1, 1.0}, {2, 0.6}, {3, 0.4}, {8, 0.1}};
    const auto binned = multiplicative_bin(points, 2.0);
    REQUIRE(binned.size() == 3);
    CHECK(binned[0].k == doctest::Approx(std::sqrt(2.0)));
    CHECK(binned[0].p == doctest::Approx(1.0));
    CHECK(binned[1].k == doctest::Approx(std::sqrt(2.0 * 4.0)));
    CHECK(binned[1].p == doctest::Approx(0.5));
    CHECK(binned[2].p == doctest::Approx(0.1));
  }
  SUBCASE("single point stays put") {
    const auto binned = multiplicative_bin({{3, 0.7}}, 2.0);
    REQUIRE(binned.size() == 1);
    CHECK(binned[0].p == 0.7);
  }
  SUBCASE("bad base is rejected") {
    CHECK_THROWS_AS(multiplicative_bin({{1, 1.0}}, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(multiplicative_bin({{1, 1.0}}, 0.5),
                    std::invalid_argument);
  }
  SUBCASE("binning preserves monotonicity") {
    Rng rng(55);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<CumulativePoint> points;
      double p = 1.0;
      double k = 1.0;
      while (p > 1e-4 && points.size() < 40) {
        points.push_back({k, p});
        k += 1.0 + static_cast<double>(rng.below(4));
        p *= 0.5 + 0.45 * rng.unit();
      }
      const auto binned = multiplicative_bin(points, 2.0);
      for (std::size_t i = 1; i < binned.size(); ++i) {
        CHECK(binned[i].k > binned[i - 1].k);
        CHECK(binned[i].p <= binned[i - 1].p + 1e-12);
      }
    }
  }
  SUBCASE("a four-bin spread gives df (1, 2) after fitting") {
    // Degrees spanning [1,2), [2,4), [4,8), [8,16) collapse to 4 points.
    std::vector<CumulativePoint> points{
        {1, 1.0}, {2, 0.7}, {3, 0.5}, {5, 0.3}, {9, 0.1}};
    const auto binned = multiplicative_bin(points, 2.0);
    REQUIRE(binned.size() == 4);
    const auto fit = fit_model(binned, FitModel::exponential);
    CHECK(fit.df_denominator == 2);
  }
}

TEST_CASE("model fitting") {
  SUBCASE("exact exponential recovery") {
    const auto fit = fit_model(exact_series(FitModel::exponential, 3.0, -0.5, 8),
                               FitModel::exponential);
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(std::exp(fit.intercept) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(fit.p_value < 1e-6);
  }
  SUBCASE("exact power-law recovery") {
    const auto fit = fit_model(exact_series(FitModel::power_law, 1.0, -2.0, 8),
                               FitModel::power_law);
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fit.slope == doctest::Approx(-2.0).epsilon(1e-9));
  }
  SUBCASE("exact linear recovery") {
    const auto fit = fit_model(exact_series(FitModel::linear, 1.0, 3.0, 6),
                               FitModel::linear);
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fit.slope == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("too few points") {
    CHECK_THROWS_AS(fit_model({{1, 1.0}, {2, 0.5}}, FitModel::linear),
                    DataError);
  }
  SUBCASE("degenerate x variance") {
    CHECK_THROWS_AS(
        fit_model({{2, 1.0}, {2, 0.5}, {2, 0.2}}, FitModel::linear),
        DataError);
  }
  SUBCASE("nonpositive p under a log model") {
    CHECK_THROWS_AS(
        fit_model({{1, 1.0}, {2, 0.0}, {3, 0.1}}, FitModel::exponential),
        DataError);
  }
  SUBCASE("F statistic matches its defining formula on noisy data") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<CumulativePoint> points;
      const std::size_t n = 4 + rng.below(10);
      for (std::size_t i = 1; i <= n; ++i) {
        points.push_back({static_cast<double>(i),
                          0.1 + rng.unit()});
      }
      const auto fit = fit_model(points, FitModel::linear);
      const double expected = fit.r_squared *
                              static_cast<double>(n - 2) /
                              (1.0 - fit.r_squared);
      CHECK(fit.f_stat == doctest::Approx(expected).epsilon(1e-9));
      CHECK(fit.df_denominator == n - 2);
    }
  }
  SUBCASE("F magnitude for r_squared 0.9828 with 4 points") {
    const double r2 = 0.9828;
    const double f = r2 * 2.0 / (1.0 - r2);
    CHECK(f == doctest::Approx(114.2).epsilon(0.002));
  }
}

TEST_CASE("F-test p-values match reference values") {
  // Frozen from scipy.stats.f.sf(f, 1, m).
  struct Case {
    double f;
    std::size_t m;
    double p;
  };
  const Case cases[] = {
      {114.2, 2, 8.643204471111e-03}, {30.45, 8, 5.616021707010e-04},
      {0.05, 8, 8.286676661519e-01},  {1.5, 8, 2.555081504311e-01},
      {163.9, 4, 2.145515529873e-04}, {0.078, 8, 7.871105933304e-01},
      {5.0, 8, 5.576652890100e-02},   {40.1, 8, 2.248009065675e-04},
      {0.059, 5, 8.177333897402e-01},
  };
  for (const auto& c : cases) {
    CHECK(f_test_pvalue(c.f, c.m) == doctest::Approx(c.p).epsilon(1e-9));
  }
  CHECK(f_test_pvalue(std::numeric_limits<double>::infinity(), 5) == 0.0);
  CHECK(f_test_pvalue(0.0, 5) == 1.0);
}

TEST_CASE("best fit selection") {
  SUBCASE("exact exponential data picks exponential") {
    const auto fits = best_fit(exact_series(FitModel::exponential, 1.0, -0.4, 10));
    CHECK(fits.winner == FitModel::exponential);
    CHECK(fits.best().r_squared == doctest::Approx(1.0));
  }
  SUBCASE("exact power-law data picks power law") {
    const auto fits = best_fit(exact_series(FitModel::power_law, 1.0, -1.5, 10));
    CHECK(fits.winner == FitModel::power_law);
  }
  SUBCASE("selection is invariant under reordering") {
    Rng rng(21);
    auto points = exact_series(FitModel::power_law, 1.0, -1.2, 12);
    for (auto& pt : points) pt.p *= 0.9 + 0.2 * rng.unit();
    const auto base = best_fit(points);
    for (int trial = 0; trial < 10; ++trial) {
      rng.shuffle(points);
      const auto again = best_fit(points);
      CHECK(again.winner == base.winner);
      CHECK(again.exponential.f_stat == base.exponential.f_stat);
      CHECK(again.power_law.f_stat == base.power_law.f_stat);
    }
  }
}
