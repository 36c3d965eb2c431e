#include "arcminer/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

namespace arcminer {

// ---------------------------------------------------------------- summaries

SummaryCell summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("summarize: no values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  SummaryCell cell;
  cell.n = n;
  cell.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
  cell.median = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  if (n > 1) {
    double ss = 0.0;
    for (const double v : sorted) ss += (v - cell.mean) * (v - cell.mean);
    cell.sd = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return cell;
}

const SummaryCell& SummaryTable::at(std::string_view group, std::string_view variable) const {
  const auto it = cells.find({std::string(group), std::string(variable)});
  if (it == cells.end()) throw Error("no summary for " + std::string(group) + " / " + std::string(variable));
  return it->second;
}

SummaryTable summarize_groups(const std::vector<MovieRecord>& records, const std::map<std::string, std::string>& grouping,
                              const std::vector<std::string>& variables, const std::vector<std::string>& group_order) {
  SummaryTable table;
  table.groups = group_order;
  table.groups.emplace_back(kTotalGroup);
  table.variables = variables;

  std::map<std::string, std::vector<const MovieRecord*>> members;
  for (const auto& g : group_order) members[g];
  for (const auto& r : records) {
    const auto it = grouping.find(r.imdb_id);
    if (it != grouping.end() && members.contains(it->second)) members[it->second].push_back(&r);
  }
  std::vector<const MovieRecord*> all;
  for (const auto& r : records) all.push_back(&r);
  members[std::string(kTotalGroup)] = all;

  for (const auto& g : table.groups) {
    const auto& rows = members[g];
    if (rows.empty()) throw Error("group '" + g + "' has no records");
    for (const auto& v : variables) {
      std::vector<double> values;
      for (const auto* r : rows) {
        if (const auto x = field_value(*r, v)) values.push_back(*x);
      }
      if (values.empty()) throw Error("group '" + g + "' has no values for " + v);
      table.cells[{g, v}] = summarize(values);
    }
  }
  return table;
}

// ---------------------------------------------------------------------- OLS

namespace {

std::string join_names(const std::vector<std::string>& names) {
  std::string s;
  for (const auto& n : names) {
    if (!s.empty()) s += ", ";
    s += n;
  }
  return s;
}

constexpr double kRankThreshold = 1e-10;

Eigen::Index rank_of(const Eigen::MatrixXd& X) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(kRankThreshold);
  return qr.rank();
}

} // namespace

RankDeficient::RankDeficient(std::vector<std::string> dependent)
    : Error("design matrix is rank deficient; dependent columns: " + join_names(dependent)), dependent_(std::move(dependent)) {}

const Coefficient& RegressionResult::coefficient(std::string_view name) const {
  for (const auto& c : coefficients) {
    if (c.name == name) return c;
  }
  throw Error("no coefficient named '" + std::string(name) + "'");
}

double t_test_p_value(double t, double degrees_of_freedom) {
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  boost::math::students_t dist(degrees_of_freedom);
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))), 0.0, 1.0);
}

RegressionResult ols(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::MatrixXd>& X,
                     const std::vector<std::string>& names, SeType se, std::span<const std::string> clusters) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (y.size() != n) throw std::invalid_argument("ols: y and X row counts differ");
  if (static_cast<Eigen::Index>(names.size()) != p) throw std::invalid_argument("ols: one name per column required");
  if (p == 0) throw std::invalid_argument("ols: empty design");
  if (n <= p) throw Error("ols: " + std::to_string(n) + " observations cannot identify " + std::to_string(p) + " coefficients");
  if (se == SeType::cluster_robust && static_cast<Eigen::Index>(clusters.size()) != n)
    throw std::invalid_argument("ols: one cluster id per row required");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(kRankThreshold);
  if (qr.rank() < p) {
    std::vector<std::string> dependent;
    Eigen::MatrixXd kept(n, 0);
    for (Eigen::Index j = 0; j < p; ++j) {
      Eigen::MatrixXd trial(n, kept.cols() + 1);
      trial << kept, X.col(j);
      if (rank_of(trial) > kept.cols()) {
        kept = std::move(trial);
      } else {
        dependent.push_back(names[static_cast<std::size_t>(j)]);
      }
    }
    throw RankDeficient(std::move(dependent));
  }

  const Eigen::VectorXd beta = qr.solve(y);
  const Eigen::VectorXd resid = y - X * beta;
  const double rss = resid.squaredNorm();
  const double tss = (y.array() - y.mean()).square().sum();

  // (X'X)^-1 = P R^-1 R^-T P^T
  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv = r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const auto perm = qr.colsPermutation();
  const Eigen::MatrixXd bread = perm * (r_inv * r_inv.transpose()) * perm.transpose();

  RegressionResult result;
  result.n = static_cast<std::size_t>(n);
  result.se_type = se;
  result.r_squared = tss > 0.0 ? std::clamp(1.0 - rss / tss, 0.0, 1.0) : 0.0;

  Eigen::MatrixXd cov;
  if (se == SeType::classical) {
    const double s2 = rss / static_cast<double>(n - p);
    cov = s2 * bread;
    result.degrees_of_freedom = static_cast<double>(n - p);
  } else {
    std::map<std::string_view, Eigen::Index> cluster_index;
    for (const auto& c : clusters) cluster_index.emplace(c, static_cast<Eigen::Index>(cluster_index.size()));
    const auto g = static_cast<Eigen::Index>(cluster_index.size());
    if (g < 2) throw Error("ols: cluster-robust errors need at least 2 clusters");
    Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(p, g);
    for (Eigen::Index i = 0; i < n; ++i) {
      scores.col(cluster_index.at(clusters[static_cast<std::size_t>(i)])) += X.row(i).transpose() * resid[i];
    }
    const Eigen::MatrixXd meat = scores * scores.transpose();
    const double factor = (static_cast<double>(g) / static_cast<double>(g - 1)) *
                          (static_cast<double>(n - 1) / static_cast<double>(n - p));
    cov = factor * bread * meat * bread;
    result.cluster_count = static_cast<std::size_t>(g);
    result.degrees_of_freedom = static_cast<double>(g - 1);
  }

  for (Eigen::Index j = 0; j < p; ++j) {
    Coefficient c;
    c.name = names[static_cast<std::size_t>(j)];
    c.estimate = beta[j];
    c.standard_error = std::sqrt(std::max(cov(j, j), 0.0));
    if (c.standard_error > 0.0) {
      c.t_value = c.estimate / c.standard_error;
      c.p_value = t_test_p_value(c.t_value, result.degrees_of_freedom);
    } else {
      c.t_value = c.estimate == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), c.estimate);
      c.p_value = c.estimate == 0.0 ? 1.0 : 0.0;
    }
    result.coefficients.push_back(std::move(c));
  }
  return result;
}

std::vector<GroupRegression> series_of_dummy_ols(const std::vector<MovieRecord>& records, std::string_view outcome,
                                                 const std::map<std::string, std::string>& groups,
                                                 const std::vector<std::string>& group_order) {
  std::vector<double> ys;
  std::vector<const std::string*> row_groups;
  for (const auto& r : records) {
    const auto g = groups.find(r.imdb_id);
    if (g == groups.end()) continue;
    if (const auto v = field_value(r, outcome)) {
      ys.push_back(*v);
      row_groups.push_back(&g->second);
    }
  }
  if (ys.empty()) throw Error("outcome '" + std::string(outcome) + "' is absent for every row");

  const auto n = static_cast<Eigen::Index>(ys.size());
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(ys.data(), n);
  std::vector<GroupRegression> out;
  for (const auto& group : group_order) {
    GroupRegression gr;
    gr.group = group;
    Eigen::MatrixXd X(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      X(i, 0) = 1.0;
      X(i, 1) = (*row_groups[static_cast<std::size_t>(i)] == group) ? 1.0 : 0.0;
    }
    gr.members = static_cast<std::size_t>(X.col(1).sum());
    if (gr.members > 0 && gr.members < static_cast<std::size_t>(n) && n > 2) {
      gr.fit = ols(y, X, {std::string(kInterceptName), group});
    }
    out.push_back(std::move(gr));
  }
  return out;
}

// ---------------------------------------------------------- rank-based tests

namespace {

void require_nonempty(std::span<const double> a, std::span<const double> b, const char* name) {
  if (a.empty() || b.empty()) throw Error(std::string(name) + ": both samples must be nonempty");
}

} // namespace

double mann_whitney_exact_p(std::size_t n_a, std::size_t n_b, double u) {
  // counts[i][j][u]: arrangements of i a-values and j b-values with U_a = u.
  // The largest pooled value is either an a (adding j pairs) or a b.
  std::vector<std::vector<std::vector<double>>> counts(n_a + 1, std::vector<std::vector<double>>(n_b + 1));
  for (std::size_t i = 0; i <= n_a; ++i) {
    for (std::size_t j = 0; j <= n_b; ++j) {
      auto& cell = counts[i][j];
      cell.assign(i * j + 1, 0.0);
      if (i == 0 || j == 0) {
        cell[0] = 1.0;
        continue;
      }
      const auto& from_a = counts[i - 1][j];
      for (std::size_t v = 0; v < from_a.size(); ++v) cell[v + j] += from_a[v];
      const auto& from_b = counts[i][j - 1];
      for (std::size_t v = 0; v < from_b.size(); ++v) cell[v] += from_b[v];
    }
  }
  const auto& dist = counts[n_a][n_b];
  const double total = std::accumulate(dist.begin(), dist.end(), 0.0);
  double lower = 0.0, upper = 0.0;
  for (std::size_t v = 0; v < dist.size(); ++v) {
    if (static_cast<double>(v) <= u + 1e-9) lower += dist[v];
    if (static_cast<double>(v) >= u - 1e-9) upper += dist[v];
  }
  return std::min(1.0, 2.0 * std::min(lower, upper) / total);
}

TestResult mann_whitney(std::span<const double> a, std::span<const double> b) {
  require_nonempty(a, b, "mann_whitney");
  const std::size_t na = a.size(), nb = b.size();
  const std::size_t n = na + nb;

  std::vector<std::pair<double, bool>> pooled;  // (value, from a)
  pooled.reserve(n);
  for (const double v : a) pooled.emplace_back(v, true);
  for (const double v : b) pooled.emplace_back(v, false);
  std::sort(pooled.begin(), pooled.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

  double rank_sum_a = 0.0;
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && pooled[j].first == pooled[i].first) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (pooled[k].second) rank_sum_a += midrank;
    }
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }

  TestResult result;
  result.test = TestKind::mann_whitney;
  result.statistic = rank_sum_a - static_cast<double>(na * (na + 1)) / 2.0;

  if (na * nb <= 400 && tie_term == 0.0) {
    result.exact = true;
    result.p_value = mann_whitney_exact_p(na, nb, result.statistic);
    return result;
  }
  const double dna = static_cast<double>(na), dnb = static_cast<double>(nb), dn = static_cast<double>(n);
  const double mean = dna * dnb / 2.0;
  const double var = dna * dnb / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
  if (!(var > 0.0)) {
    result.p_value = 1.0;
    return result;
  }
  const double z = std::max(0.0, std::abs(result.statistic - mean) - 0.5) / std::sqrt(var);
  result.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return result;
}

double kolmogorov_survival(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  constexpr double pi = 3.14159265358979323846;
  if (lambda < 1.18) {
    // P(K <= x) = sqrt(2 pi) / x * sum exp(-(2j-1)^2 pi^2 / (8 x^2))
    double sum = 0.0;
    for (int j = 1; j <= 60; ++j) {
      const double odd = 2.0 * j - 1.0;
      const double term = std::exp(-odd * odd * pi * pi / (8.0 * lambda * lambda));
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1) ? term : -term;
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  require_nonempty(a, b, "ks_two_sample");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  TestResult result;
  result.test = TestKind::ks_two_sample;
  result.statistic = d;
  result.p_value = kolmogorov_survival(std::sqrt(na * nb / (na + nb)) * d);
  return result;
}

// ------------------------------------------------------------ budget bins

const std::array<BudgetBin, kBudgetBinCount>& all_budget_bins() {
  static constexpr std::array<BudgetBin, kBudgetBinCount> bins = {
      BudgetBin::upTo1,  BudgetBin::upTo5,  BudgetBin::upTo10,  BudgetBin::upTo20,
      BudgetBin::upTo30, BudgetBin::upTo50, BudgetBin::upTo100, BudgetBin::over100};
  return bins;
}

std::string_view to_string(BudgetBin bin) {
  switch (bin) {
    case BudgetBin::upTo1: return "(0,1]";
    case BudgetBin::upTo5: return "(1,5]";
    case BudgetBin::upTo10: return "(5,10]";
    case BudgetBin::upTo20: return "(10,20]";
    case BudgetBin::upTo30: return "(20,30]";
    case BudgetBin::upTo50: return "(30,50]";
    case BudgetBin::upTo100: return "(50,100]";
    case BudgetBin::over100: return "(100,inf)";
  }
  return "";
}

BudgetBin bin_budget(double budget) {
  if (!(budget > 0.0)) throw Error("budget must be positive, got " + std::to_string(budget));
  static constexpr std::array<double, 7> upper = {1, 5, 10, 20, 30, 50, 100};
  for (std::size_t i = 0; i < upper.size(); ++i) {
    if (budget <= upper[i]) return static_cast<BudgetBin>(i);
  }
  return BudgetBin::over100;
}

// ---------------------------------------------------------------- heat map

std::string HeatCell::to_string() const { return code ? std::to_string(*code) : "n.a."; }

HeatCell heat_code(double estimate, double p_value) {
  int tier = 1;
  if (p_value < 0.001) tier = 5;
  else if (p_value < 0.01) tier = 4;
  else if (p_value < 0.05) tier = 3;
  else if (p_value < 0.1) tier = 2;
  return {estimate < 0.0 ? -tier : tier};
}

HeatCell heat_code(const RegressionResult& result, std::string_view coefficient_name) {
  const auto& c = result.coefficient(coefficient_name);
  return heat_code(c.estimate, c.p_value);
}

std::string_view significance_stars(double p_value) {
  if (p_value < 0.001) return "***";
  if (p_value < 0.01) return "**";
  if (p_value < 0.05) return "*";
  if (p_value < 0.1) return "+";
  return "";
}

// ----------------------------------------------------------------- genres

std::vector<MovieRecord> genre_partition(const std::vector<MovieRecord>& records, Genre genre) {
  std::vector<MovieRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [&](const MovieRecord& r) { return r.genres.contains(genre); });
  return out;
}

std::vector<MovieRecord> genre_partition(const std::vector<MovieRecord>& records, std::string_view genre) {
  return genre_partition(records, parse_genre(genre));
}

} // namespace arcminer
