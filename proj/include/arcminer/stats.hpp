#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "arcminer/corpus.hpp"
#include "arcminer/error.hpp"

namespace arcminer {

// ---------------------------------------------------------------- summaries

struct SummaryCell {
  double mean = 0.0;
  double median = 0.0;
  double sd = 0.0;  // sample sd (n - 1 divisor); 0 when n == 1
  std::size_t n = 0;
};

SummaryCell summarize(std::span<const double> values);

inline constexpr std::string_view kTotalGroup = "Total";

struct SummaryTable {
  std::vector<std::string> groups;  // requested order, then "Total"
  std::vector<std::string> variables;
  std::map<std::pair<std::string, std::string>, SummaryCell> cells;  // (group, variable)

  const SummaryCell& at(std::string_view group, std::string_view variable) const;
};

// Absent values are excluded per variable. The Total column covers every
// record passed in. Throws Error naming the group when a group has no
// records, or no value for some variable.
SummaryTable summarize_groups(const std::vector<MovieRecord>& records, const std::map<std::string, std::string>& grouping,
                              const std::vector<std::string>& variables, const std::vector<std::string>& group_order);

// ---------------------------------------------------------------------- OLS

enum class SeType { classical, cluster_robust };

struct Coefficient {
  std::string name;
  double estimate = 0.0;
  double standard_error = 0.0;
  double t_value = 0.0;
  double p_value = 1.0;
};

struct RegressionResult {
  std::vector<Coefficient> coefficients;
  double r_squared = 0.0;
  std::size_t n = 0;
  SeType se_type = SeType::classical;
  std::optional<std::size_t> cluster_count;
  double degrees_of_freedom = 0.0;

  // Throws Error for an unknown name.
  const Coefficient& coefficient(std::string_view name) const;
};

class RankDeficient : public Error {
public:
  explicit RankDeficient(std::vector<std::string> dependent);
  const std::vector<std::string>& dependent_columns() const noexcept { return dependent_; }

private:
  std::vector<std::string> dependent_;
};

// X must already contain the intercept column. Cluster-robust errors use the
// sandwich with factor G/(G-1) * (n-1)/(n-p) and t(G-1) p-values; classical
// errors use s^2 (X'X)^-1 and t(n-p).
RegressionResult ols(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::MatrixXd>& X,
                     const std::vector<std::string>& names, SeType se = SeType::classical,
                     std::span<const std::string> clusters = {});

// Two-sided p-value of a t statistic.
double t_test_p_value(double t, double degrees_of_freedom);

inline constexpr std::string_view kInterceptName = "(Intercept)";

struct GroupRegression {
  std::string group;
  std::optional<RegressionResult> fit;  // absent when the dummy is degenerate
  std::size_t members = 0;              // rows with the dummy set
};

// One bivariate regression per group: outcome ~ 1 + [group == g]. Rows are
// the grouped records with the outcome present. Throws Error when no row
// has the outcome.
std::vector<GroupRegression> series_of_dummy_ols(const std::vector<MovieRecord>& records, std::string_view outcome,
                                                 const std::map<std::string, std::string>& groups,
                                                 const std::vector<std::string>& group_order);

// ---------------------------------------------------------- rank-based tests

enum class TestKind { mann_whitney, ks_two_sample };

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  TestKind test = TestKind::mann_whitney;
  bool exact = false;
};

// U counts pairs (a_i > b_j) with ties as one half. Exact two-sided p when
// n_a * n_b <= 400 and there are no ties, else the tie-corrected normal
// approximation with continuity correction.
TestResult mann_whitney(std::span<const double> a, std::span<const double> b);

// Exact two-sided p of U_a under the permutation null; requires no ties.
double mann_whitney_exact_p(std::size_t n_a, std::size_t n_b, double u);

TestResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

// ------------------------------------------------------------ budget bins

enum class BudgetBin { upTo1, upTo5, upTo10, upTo20, upTo30, upTo50, upTo100, over100 };
inline constexpr std::size_t kBudgetBinCount = 8;
const std::array<BudgetBin, kBudgetBinCount>& all_budget_bins();
std::string_view to_string(BudgetBin bin);  // "(0,1]", ..., "(100,inf)"

// Right-closed bins of a budget in million USD; throws for budget <= 0.
BudgetBin bin_budget(double budget);

// ---------------------------------------------------------------- heat map

struct HeatCell {
  std::optional<int> code;  // absent means no observations

  std::string to_string() const;  // "n.a." when absent
};

// Sign of the estimate times the significance tier (1..5); a zero estimate
// counts as positive.
HeatCell heat_code(double estimate, double p_value);
HeatCell heat_code(const RegressionResult& result, std::string_view coefficient_name);

// Significance stars: "***", "**", "*", "+" (p < 0.1) or "".
std::string_view significance_stars(double p_value);

// ----------------------------------------------------------------- genres

std::vector<MovieRecord> genre_partition(const std::vector<MovieRecord>& records, Genre genre);
// Throws Error listing the vocabulary for an unknown name.
std::vector<MovieRecord> genre_partition(const std::vector<MovieRecord>& records, std::string_view genre);

} // namespace arcminer
