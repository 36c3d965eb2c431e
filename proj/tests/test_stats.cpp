#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/LU>

#include "arcminer/error.hpp"
#include "arcminer/stats.hpp"
#include "oracles.hpp"

using namespace arcminer;

namespace {

std::vector<std::string> names(std::initializer_list<const char*> n) { return {n.begin(), n.end()}; }

MovieRecord film(std::string id, double domestic) {
  MovieRecord m;
  m.imdb_id = std::move(id);
  m.domestic_gross = domestic;
  return m;
}

} // namespace

TEST_CASE("summaries") {
  const std::vector<double> a{1, 2, 3}, b{1, 2, 3, 4}, c{7};
  const auto sa = summarize(a);
  CHECK(sa.mean == 2);
  CHECK(sa.median == 2);
  CHECK(sa.sd == doctest::Approx(1));
  CHECK(sa.n == 3);
  CHECK(summarize(b).median == 2.5);
  CHECK(summarize(c).sd == 0);
  CHECK_THROWS(summarize(std::vector<double>{}));
}

TEST_CASE("grouped summaries") {
  std::vector<MovieRecord> movies = {film("a", 1), film("b", 3), film("c", 10)};
  movies[2].budget = 4;
  const std::map<std::string, std::string> g = {{"a", "X"}, {"b", "X"}, {"c", "Y"}};
  const auto t = summarize_groups(movies, g, {"domestic_gross"}, {"X", "Y"});
  CHECK(t.at("X", "domestic_gross").mean == 2);
  CHECK(t.at("Y", "domestic_gross").n == 1);
  CHECK(t.at("Total", "domestic_gross").mean == doctest::Approx(14.0 / 3));
  try {
    summarize_groups(movies, g, {"domestic_gross"}, {"X", "Y", "Z"});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("Z") != std::string::npos);
  }
  CHECK_THROWS_AS(summarize_groups(movies, g, {"budget"}, {"X", "Y"}), Error);
}

TEST_CASE("dummy regression by hand") {
  const Eigen::Vector4d y(1, 2, 3, 4);
  Eigen::MatrixXd X(4, 2);
  X << 1, 0, 1, 0, 1, 1, 1, 1;
  const auto r = ols(y, X, names({"(Intercept)", "d"}));
  CHECK(r.coefficient("(Intercept)").estimate == doctest::Approx(1.5));
  CHECK(r.coefficient("d").estimate == doctest::Approx(2.0));
  CHECK(r.coefficient("d").standard_error == doctest::Approx(std::sqrt(0.5 / 2.0 * 2)));
  CHECK(r.r_squared == doctest::Approx(0.8));
  CHECK(r.degrees_of_freedom == 2);
  CHECK_THROWS_AS(r.coefficient("nope"), Error);
}

TEST_CASE("dummy identity on random data") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g(3, 4);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 10 + trial;
    Eigen::VectorXd y(n);
    Eigen::MatrixXd X(n, 2);
    double s1 = 0, s0 = 0;
    int n1 = 0;
    for (int i = 0; i < n; ++i) {
      y[i] = g(rng);
      const bool d = i % 3 == 0;
      X(i, 0) = 1;
      X(i, 1) = d;
      (d ? s1 : s0) += y[i];
      n1 += d;
    }
    const auto r = ols(y, X, names({"(Intercept)", "d"}));
    CHECK(std::abs(r.coefficients[1].estimate - (s1 / n1 - s0 / (n - n1))) < 1e-10);
    CHECK(std::abs(r.coefficients[0].estimate - s0 / (n - n1)) < 1e-10);
    for (const auto& c : r.coefficients) {
      CHECK(c.standard_error > 0);
      CHECK(c.p_value >= 0);
      CHECK(c.p_value <= 1);
    }
  }
}

TEST_CASE("rank deficiency names the dependent columns") {
  Eigen::MatrixXd X(5, 3);
  X << 1, 1, 2, 1, 2, 4, 1, 3, 6, 1, 4, 8, 1, 5, 10;
  try {
    ols(Eigen::VectorXd::LinSpaced(5, 0, 1), X, names({"(Intercept)", "a", "twice_a"}));
    FAIL("expected an error");
  } catch (const RankDeficient& e) {
    CHECK(e.dependent_columns() == std::vector<std::string>{"twice_a"});
  }
  CHECK_THROWS_AS(ols(Eigen::Vector2d(1, 2), Eigen::MatrixXd::Ones(2, 2), names({"a", "b"})), Error);
  const std::vector<std::string> one_cluster(5, "g");
  CHECK_THROWS_AS(ols(Eigen::VectorXd::LinSpaced(5, 0, 1), X.leftCols(2), names({"(Intercept)", "a"}),
                      SeType::cluster_robust, one_cluster),
                  Error);
}

TEST_CASE("cluster-robust errors match explicit summation") {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 30, p = 3;
    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd y(n);
    std::vector<std::string> cl;
    oracle::Matrix xo;
    for (int i = 0; i < n; ++i) {
      X(i, 0) = 1;
      X(i, 1) = g(rng);
      X(i, 2) = g(rng) + (i % 6);
      const double shock = 0.3 * (i % 6);
      y[i] = 1 + 2 * X(i, 1) - X(i, 2) + shock + g(rng);
      cl.push_back("c" + std::to_string(i % 6));
      xo.push_back({X(i, 0), X(i, 1), X(i, 2)});
    }
    const auto r = ols(y, X, names({"(Intercept)", "x1", "x2"}), SeType::cluster_robust, cl);
    const auto ref = oracle::cluster_robust(xo, std::vector<double>(y.data(), y.data() + n), cl);
    CHECK(*r.cluster_count == 6);
    CHECK(r.degrees_of_freedom == 5);
    for (int k = 0; k < p; ++k) {
      CHECK(std::abs(r.coefficients[static_cast<std::size_t>(k)].estimate - ref.beta[static_cast<std::size_t>(k)]) < 1e-9);
      CHECK(std::abs(r.coefficients[static_cast<std::size_t>(k)].standard_error - ref.se[static_cast<std::size_t>(k)]) <
            1e-9);
    }
  }
}

TEST_CASE("singleton clusters reduce to HC1, and to classical for the mean") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  const int n = 25;
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd y(n);
  std::vector<std::string> cl;
  for (int i = 0; i < n; ++i) {
    X(i, 0) = 1;
    X(i, 1) = g(rng);
    y[i] = X(i, 1) * X(i, 1) + g(rng);
    cl.push_back(std::to_string(i));
  }
  // HC1: n/(n-p) (X'X)^-1 X' diag(e^2) X (X'X)^-1
  const Eigen::MatrixXd bread = (X.transpose() * X).inverse();
  const Eigen::VectorXd e = y - X * (bread * X.transpose() * y);
  const Eigen::MatrixXd meat = X.transpose() * e.array().square().matrix().asDiagonal() * X;
  const Eigen::MatrixXd hc1 = double(n) / (n - 2) * bread * meat * bread;
  const auto r = ols(y, X, names({"(Intercept)", "x"}), SeType::cluster_robust, cl);
  for (int k = 0; k < 2; ++k) CHECK(std::abs(r.coefficients[static_cast<std::size_t>(k)].standard_error - std::sqrt(hc1(k, k))) < 1e-9);

  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n, 1);
  const auto robust = ols(y, ones, names({"(Intercept)"}), SeType::cluster_robust, cl);
  const auto classical = ols(y, ones, names({"(Intercept)"}));
  CHECK(std::abs(robust.coefficients[0].standard_error - classical.coefficients[0].standard_error) < 1e-9);
}

TEST_CASE("t p-values") {
  CHECK(t_test_p_value(0, 10) == 1.0);
  CHECK(t_test_p_value(1.959963984540054, 1e7) == doctest::Approx(0.05).epsilon(1e-5));
  CHECK(t_test_p_value(2.228138851986, 10) == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(t_test_p_value(-2.228138851986, 10) == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("series of dummy regressions") {
  std::vector<MovieRecord> m;
  std::map<std::string, std::string> g;
  for (int i = 0; i < 10; ++i) {
    const auto id = "m" + std::to_string(i);
    m.push_back(film(id, i < 5 ? 10.0 + (i - 2) : 20.0 + (i - 7)));
    g[id] = i < 5 ? "A" : "B";
  }
  const auto s = series_of_dummy_ols(m, "domestic_gross", g, {"A", "B"});
  REQUIRE(s.size() == 2);
  CHECK(s[0].fit->coefficients[1].estimate == doctest::Approx(-10));
  CHECK(s[1].fit->coefficients[1].estimate == doctest::Approx(10));
  CHECK(s[0].members == 5);

  for (auto& x : m) x.domestic_gross = 4.0;
  for (const auto& r : series_of_dummy_ols(m, "domestic_gross", g, {"A", "B"}))
    CHECK(std::abs(r.fit->coefficients[1].estimate) < 1e-12);

  for (auto& x : m) x.domestic_gross.reset();
  CHECK_THROWS_AS(series_of_dummy_ols(m, "domestic_gross", g, {"A", "B"}), Error);
}

TEST_CASE("Mann-Whitney") {
  const std::vector<double> a{1, 2}, b{3, 4};
  const auto r = mann_whitney(a, b);
  CHECK(r.statistic == 0);
  CHECK(r.exact);
  CHECK(r.p_value == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(mann_whitney(a, a).p_value == 1.0);
  CHECK(mann_whitney(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}).p_value == 1.0);
  CHECK_THROWS(mann_whitney(a, std::vector<double>{}));

  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t na = 1 + rng() % 5, nb = 1 + rng() % 5;
    std::vector<double> x(na), y(nb);
    for (auto& v : x) v = u(rng);
    for (auto& v : y) v = u(rng) + 0.2;
    const auto res = mann_whitney(x, y);
    CHECK(res.exact);
    CHECK(res.statistic == oracle::mann_whitney_u(x, y));
    CHECK(std::abs(res.p_value - oracle::mann_whitney_enumerated_p(x, y)) < 1e-12);
    CHECK(res.p_value == doctest::Approx(mann_whitney(y, x).p_value).epsilon(1e-12));
  }
}

TEST_CASE("Mann-Whitney normal approximation") {
  std::vector<double> a, b;
  for (int i = 0; i < 30; ++i) a.push_back(i % 7);
  for (int i = 0; i < 25; ++i) b.push_back(i % 5 + 2);
  const auto r = mann_whitney(a, b);
  CHECK_FALSE(r.exact);
  CHECK(r.statistic + mann_whitney(b, a).statistic == doctest::Approx(30 * 25));
  CHECK(r.statistic == oracle::mann_whitney_u(a, b));
  CHECK(r.p_value > 0);
  CHECK(r.p_value < 1);

  // Tie-corrected z by hand.
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::map<double, int> ties;
  for (const double v : pooled) ++ties[v];
  double tsum = 0;
  for (const auto& [v, t] : ties) tsum += double(t) * t * t - t;
  const double n = 55, var = 30.0 * 25 / 12 * ((n + 1) - tsum / (n * (n - 1)));
  const double z = (std::abs(r.statistic - 375) - 0.5) / std::sqrt(var);
  CHECK(r.p_value == doctest::Approx(std::erfc(z / std::sqrt(2.0))).epsilon(1e-12));

  std::vector<double> big_a(30), big_b(30);
  for (int i = 0; i < 30; ++i) big_a[static_cast<std::size_t>(i)] = i, big_b[static_cast<std::size_t>(i)] = i + 100.5;
  CHECK_FALSE(mann_whitney(big_a, big_b).exact);
}

TEST_CASE("exact Mann-Whitney distribution") {
  CHECK(mann_whitney_exact_p(2, 2, 0) == doctest::Approx(1.0 / 3));
  CHECK(mann_whitney_exact_p(3, 3, 4.5) == 1.0);
  CHECK(mann_whitney_exact_p(1, 1, 0) == 1.0);
}

TEST_CASE("Kolmogorov-Smirnov") {
  const std::vector<double> a{1, 2}, b{3, 4};
  CHECK(ks_two_sample(a, b).statistic == 1.0);
  CHECK(ks_two_sample(a, a).statistic == 0.0);
  CHECK(ks_two_sample(a, a).p_value == 1.0);
  CHECK(ks_two_sample(std::vector<double>{1, 3, 5}, std::vector<double>{2, 4, 6}).statistic ==
        doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK_THROWS(ks_two_sample(std::vector<double>{}, b));

  std::mt19937_64 rng(25);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(1 + rng() % 40), y(1 + rng() % 40);
    for (auto& v : x) v = std::round(g(rng) * 3) / 3;  // ties on purpose
    for (auto& v : y) v = std::round(g(rng) * 3) / 3 + 0.3;
    const auto r = ks_two_sample(x, y);
    CHECK(std::abs(r.statistic - oracle::ks_statistic(x, y)) < 1e-12);
    CHECK(r.statistic >= 0);
    CHECK(r.statistic <= 1);
    std::vector<double> ex(x), ey(y);
    for (auto& v : ex) v = std::exp(v);
    for (auto& v : ey) v = std::exp(v);
    CHECK(ks_two_sample(ex, ey).statistic == r.statistic);
  }
}

TEST_CASE("Kolmogorov distribution tail") {
  CHECK(kolmogorov_survival(0) == 1.0);
  CHECK(kolmogorov_survival(0.5) == doctest::Approx(0.9639452436648751).epsilon(1e-10));
  CHECK(kolmogorov_survival(1.0) == doctest::Approx(0.26999967167735456).epsilon(1e-10));
  CHECK(kolmogorov_survival(1.1803) == doctest::Approx(kolmogorov_survival(1.1797)).epsilon(1e-3));
  CHECK(kolmogorov_survival(1.3580986) == doctest::Approx(0.05).epsilon(1e-5));
  CHECK(kolmogorov_survival(3.0) < 1e-7);
}

TEST_CASE("budget bins") {
  CHECK(bin_budget(0.5) == BudgetBin::upTo1);
  CHECK(bin_budget(1.0) == BudgetBin::upTo1);
  CHECK(bin_budget(std::nextafter(1.0, 2.0)) == BudgetBin::upTo5);
  CHECK(bin_budget(25.0) == BudgetBin::upTo30);
  CHECK(bin_budget(100.0) == BudgetBin::upTo100);
  CHECK(bin_budget(100.01) == BudgetBin::over100);
  CHECK(to_string(BudgetBin::upTo5) == "(1,5]");
  CHECK(to_string(BudgetBin::over100) == "(100,inf)");
  CHECK_THROWS(bin_budget(0));
  CHECK_THROWS(bin_budget(-3));
}

TEST_CASE("heat codes") {
  CHECK(heat_code(6.5613, 0.0004).code == 5);
  CHECK(heat_code(-3.4599, 0.052).code == -2);
  CHECK(heat_code(1.0, 0.5).code == 1);
  CHECK(heat_code(0.0, 0.0001).code == 5);
  CHECK(HeatCell{}.to_string() == "n.a.");
  CHECK(heat_code(-1, 0.02).to_string() == "-3");
  CHECK(significance_stars(0.0009) == "***");
  CHECK(significance_stars(0.009) == "**");
  CHECK(significance_stars(0.049) == "*");
  CHECK(significance_stars(0.09) == "+");
  CHECK(significance_stars(0.1) == "");
  std::mt19937_64 rng(26);
  std::uniform_real_distribution<double> u(-1, 1), p(0, 1);
  for (int i = 0; i < 1000; ++i) {
    const double e = u(rng);
    const auto c = heat_code(e, p(rng));
    CHECK((*c.code > 0) == (e > 0));
  }
}

TEST_CASE("genre partitions") {
  std::vector<MovieRecord> m = {film("a", 1), film("b", 1)};
  m[0].genres = {Genre::Action, Genre::Thriller};
  m[1].genres = {Genre::Drama};
  CHECK(genre_partition(m, Genre::Action).size() == 1);
  CHECK(genre_partition(m, "Thriller").size() == 1);
  CHECK(genre_partition(m, Genre::News).empty());
  CHECK(genre_partition({}, Genre::Drama).empty());
  CHECK_THROWS_AS(genre_partition(m, "Space Opera"), Error);
}
