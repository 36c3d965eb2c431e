#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arcminer/corpus.hpp"
#include "arcminer/stats.hpp"

namespace arcminer {

// Movies with their group label (archetype or cluster name), in column order.
struct GroupedMovies {
  std::vector<MovieRecord> movies;
  std::map<std::string, std::string> group_of;  // imdb_id -> group
  std::vector<std::string> group_order;
};

const std::vector<std::string>& summary_variables();
const std::vector<std::string>& dummy_outcomes();
const std::vector<std::string>& success_covariates();

struct HeatRow {
  std::string label;
  std::vector<GroupRegression> regressions;  // one per group, group_order
};

struct Table3Column {
  std::string outcome;
  std::optional<RegressionResult> fit;
  std::string note;  // why the fit is absent
};

struct Table4Row {
  std::string group;
  std::optional<SummaryCell> domestic_all;
  std::size_t n_subsample = 0;
  std::optional<SummaryCell> budget, domestic, worldwide;
};

struct PairTest {
  std::string group_a, group_b;
  std::size_t n_a = 0, n_b = 0;
  std::optional<TestResult> mann_whitney, ks;
};

struct StatsReport {
  std::vector<std::string> groups;
  std::map<std::pair<std::string, std::string>, SummaryCell> table1;  // (group incl. Total, variable)
  std::vector<std::pair<std::string, std::vector<GroupRegression>>> table2;  // per outcome
  std::vector<Table3Column> table3;
  std::vector<Table4Row> table4;  // groups then Total
  std::vector<HeatRow> table5;    // 8 budget bins then 3 all-data rows
  std::vector<HeatRow> table6;    // genre vocabulary order
  std::vector<PairTest> budget_tests;
};

// Throws Error when no movie carries a domestic gross.
StatsReport build_stats_report(const GroupedMovies& data);

std::vector<std::vector<HeatCell>> heat_grid(const std::vector<HeatRow>& rows);

std::string table1_csv(const StatsReport& r);
std::string table2_csv(const StatsReport& r);
std::string table3_csv(const StatsReport& r);
std::string table4_csv(const StatsReport& r);
std::string heat_csv(const std::vector<HeatRow>& rows, const std::vector<std::string>& groups, std::string_view first_column);
std::string heat_detail_csv(const std::vector<HeatRow>& rows, std::string_view first_column);
std::string budget_tests_csv(const StatsReport& r);
std::string heat_legend_text();

} // namespace arcminer
