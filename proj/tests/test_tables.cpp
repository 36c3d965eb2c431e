#include <doctest.h>

#include <cmath>
#include <sstream>

#include "arcminer/csv.hpp"
#include "arcminer/error.hpp"
#include "arcminer/tables.hpp"
#include "oracles.hpp"
#include "paper_fixture.hpp"

using namespace arcminer;

TEST_CASE("published group means imply the published dummy coefficients") {
  for (std::size_t g = 0; g < 6; ++g) {
    const double coef = oracle::dummy_coefficient(fixture::kMeans[g], fixture::kSizes[g], fixture::kTotalMean,
                                                  fixture::kTotalSize);
    CHECK(std::abs(coef - fixture::kCoefficients[g]) < 0.05);
  }
}

TEST_CASE("dummy regressions on a corpus matching the published summaries") {
  const auto c = fixture::corpus();
  const auto series = series_of_dummy_ols(c.movies, "domestic_gross", c.groups, c.order);
  REQUIRE(series.size() == 6);
  for (std::size_t g = 0; g < 6; ++g) {
    const auto& fit = *series[g].fit;
    const auto& d = fit.coefficients[1];
    CHECK(std::abs(d.estimate - fixture::kCoefficients[g]) < 0.05);
    CHECK(std::abs(d.standard_error - fixture::kStandardErrors[g]) < 0.005);
    CHECK(heat_code(fit, d.name).code == fixture::kAllDataHeat[g]);
    CHECK(fit.n == 6174);
  }
  const auto& rr = series[1].fit->coefficients[1];
  CHECK(rr.p_value > 0.05);
  CHECK(rr.p_value < 0.1);
  CHECK(series[2].fit->coefficients[1].p_value < 0.001);
}

namespace {

GroupedMovies toy(int groups, int per_group) {
  GroupedMovies d;
  int serial = 0;
  for (int g = 0; g < groups; ++g) d.group_order.push_back("G" + std::to_string(g));
  for (int g = 0; g < groups; ++g)
    for (int i = 0; i < per_group; ++i, ++serial) {
      MovieRecord m;
      m.imdb_id = "tt" + std::to_string(serial);
      m.domestic_gross = 5.0 + g + 0.37 * ((serial * 7) % 11);
      m.worldwide_gross = *m.domestic_gross * 2.1 + 0.1 * (serial % 5);
      if (serial % 3) m.budget = 0.5 + 13.0 * ((serial * 5) % 9);
      m.imdb_rating = 5.0 + 0.1 * (serial % 30);
      m.metascore = 40.0 + (serial * 7) % 50;
      m.rating_count = 1000 + static_cast<std::uint64_t>(serial * 37 % 500);
      m.user_reviews = static_cast<std::uint64_t>(serial * 13 % 97);
      m.critic_reviews = static_cast<std::uint64_t>(serial * 17 % 61);
      m.oscars_won = static_cast<std::uint64_t>(serial % 4 == 0);
      m.other_awards = static_cast<std::uint64_t>(serial * 3 % 7);
      m.other_award_nominations = static_cast<std::uint64_t>(serial * 5 % 13);
      m.runtime_min = 90.0 + serial % 40;
      m.genres = {serial % 2 ? Genre::Drama : Genre::Action};
      if (serial % 5 == 0) m.genres.insert(Genre::Thriller);
      d.group_of[m.imdb_id] = d.group_order[static_cast<std::size_t>(g)];
      d.movies.push_back(std::move(m));
    }
  return d;
}

std::vector<csv::Row> rows_of(const std::string& text) {
  std::istringstream in(text);
  csv::Reader r(in);
  std::vector<csv::Row> out;
  while (auto row = r.next()) out.push_back(*row);
  return out;
}

} // namespace

TEST_CASE("two-cluster toy report") {
  const auto report = build_stats_report(toy(2, 15));
  for (const auto& [outcome, regs] : report.table2) CHECK(regs.size() == 2);
  const auto t2 = rows_of(table2_csv(report));
  std::size_t domestic = 0;
  for (const auto& r : t2) domestic += r[0] == "domestic_gross";
  CHECK(domestic == 2);

  CHECK(report.table5.size() == 11);
  CHECK(report.table5[8].label == "All budget (gross domestic revenue)");
  CHECK(report.table5[10].label == "All data (gross domestic revenue)");
  CHECK(report.table6.size() == 22);
  const auto grid6 = heat_grid(report.table6);
  for (const auto& cell : grid6[21]) CHECK_FALSE(cell.code.has_value());  // News
  const auto t5 = rows_of(heat_csv(report.table5, report.groups, "budget"));
  CHECK(t5.size() == 12);
  for (const auto& r : t5) CHECK(r.size() == 3);
  CHECK(t5[0][0] == "budget");

  REQUIRE(report.table3.size() == 2);
  INFO(report.table3[0].note);
  REQUIRE(report.table3[0].fit.has_value());
  CHECK(*report.table3[0].fit->cluster_count == 2);
  CHECK(report.budget_tests.size() == 1);
  CHECK(report.table4.back().group == "Total");
}

TEST_CASE("heat grid shape for six groups") {
  const auto report = build_stats_report(toy(6, 12));
  const auto grid = heat_grid(report.table5);
  CHECK(grid.size() == 11);
  for (const auto& row : grid) CHECK(row.size() == 6);
  CHECK(rows_of(heat_csv(report.table6, report.groups, "genre")).size() == 23);
  CHECK(report.budget_tests.size() == 15);
  const auto legend = heat_legend_text();
  CHECK(legend.find("n.a.") != std::string::npos);
}

TEST_CASE("report needs a domestic outcome") {
  auto d = toy(2, 5);
  for (auto& m : d.movies) m.domestic_gross.reset();
  CHECK_THROWS_AS(build_stats_report(d), Error);
}

TEST_CASE("csv output is stable") {
  const auto a = build_stats_report(toy(3, 10)), b = build_stats_report(toy(3, 10));
  CHECK(table1_csv(a) == table1_csv(b));
  CHECK(table3_csv(a) == table3_csv(b));
  CHECK(budget_tests_csv(a) == budget_tests_csv(b));
  CHECK(csv::format_fixed(-0.0000001) == "0.000000");
  CHECK(csv::format_fixed(1.5) == "1.500000");
}
