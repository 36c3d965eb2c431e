#include "arcminer/tables.hpp"

#include <algorithm>
#include <functional>

#include "arcminer/csv.hpp"

namespace arcminer {

namespace {

using csv::format_fixed;

std::optional<SummaryCell> summary_of(const std::vector<const MovieRecord*>& rows, std::string_view field) {
  std::vector<double> values;
  for (const auto* r : rows) {
    if (const auto v = field_value(*r, field)) values.push_back(*v);
  }
  if (values.empty()) return std::nullopt;
  return summarize(values);
}

std::vector<GroupRegression> safe_series(const std::vector<MovieRecord>& records, std::string_view outcome,
                                         const GroupedMovies& data) {
  try {
    return series_of_dummy_ols(records, outcome, data.group_of, data.group_order);
  } catch (const Error&) {
    std::vector<GroupRegression> empty;
    for (const auto& g : data.group_order) empty.push_back({g, std::nullopt, 0});
    return empty;
  }
}

std::vector<MovieRecord> filter(const std::vector<MovieRecord>& movies, const std::function<bool(const MovieRecord&)>& keep) {
  std::vector<MovieRecord> out;
  for (const auto& m : movies) {
    if (keep(m)) out.push_back(m);
  }
  return out;
}

void append_summary(csv::Row& row, const std::optional<SummaryCell>& cell) {
  if (!cell) {
    row.insert(row.end(), 4, "n.a.");
    return;
  }
  row.push_back(std::to_string(cell->n));
  row.push_back(format_fixed(cell->mean));
  row.push_back(format_fixed(cell->median));
  row.push_back(format_fixed(cell->sd));
}

} // namespace

const std::vector<std::string>& summary_variables() {
  static const std::vector<std::string> v = {"domestic_gross", "imdb_rating",  "metascore",
                                             "rating_count",   "user_reviews", "critic_reviews",
                                             "oscars_won",     "other_awards", "other_award_nominations",
                                             "runtime_min"};
  return v;
}

const std::vector<std::string>& dummy_outcomes() {
  static const std::vector<std::string> v = {"domestic_gross", "imdb_rating",  "metascore",
                                             "rating_count",   "user_reviews", "critic_reviews",
                                             "oscars_won",     "other_awards", "other_award_nominations"};
  return v;
}

const std::vector<std::string>& success_covariates() {
  static const std::vector<std::string> v = {"imdb_rating", "metascore",  "rating_count", "user_reviews",
                                             "critic_reviews", "oscars_won", "other_awards",
                                             "other_award_nominations"};
  return v;
}

StatsReport build_stats_report(const GroupedMovies& data) {
  StatsReport report;
  report.groups = data.group_order;

  std::map<std::string, std::vector<const MovieRecord*>> members;
  std::vector<const MovieRecord*> grouped;
  for (const auto& m : data.movies) {
    const auto it = data.group_of.find(m.imdb_id);
    if (it == data.group_of.end()) continue;
    members[it->second].push_back(&m);
    grouped.push_back(&m);
  }
  if (std::none_of(grouped.begin(), grouped.end(), [](const MovieRecord* m) { return m->domestic_gross.has_value(); }))
    throw Error("no movie has a domestic_gross value");

  std::vector<std::string> with_total = data.group_order;
  with_total.emplace_back(kTotalGroup);
  members[std::string(kTotalGroup)] = grouped;

  for (const auto& g : with_total) {
    for (const auto& v : summary_variables()) {
      if (const auto cell = summary_of(members[g], v)) report.table1[{g, v}] = *cell;
    }
  }

  for (const auto& outcome : dummy_outcomes()) report.table2.emplace_back(outcome, safe_series(data.movies, outcome, data));

  for (const std::string outcome : {"domestic_gross", "worldwide_gross"}) {
    Table3Column col{outcome, std::nullopt, {}};
    std::vector<double> ys;
    std::vector<std::vector<double>> xs;
    std::vector<std::string> clusters;
    for (const auto* m : grouped) {
      const auto y = field_value(*m, outcome);
      if (!y) continue;
      std::vector<double> row{1.0};
      bool complete = true;
      for (const auto& c : success_covariates()) {
        const auto v = field_value(*m, c);
        if (!v) {
          complete = false;
          break;
        }
        row.push_back(*v);
      }
      if (!complete) continue;
      ys.push_back(*y);
      xs.push_back(std::move(row));
      clusters.push_back(data.group_of.at(m->imdb_id));
    }
    const auto n = static_cast<Eigen::Index>(ys.size());
    const auto p = static_cast<Eigen::Index>(success_covariates().size() + 1);
    Eigen::VectorXd y(n);
    Eigen::MatrixXd X(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
      y[i] = ys[static_cast<std::size_t>(i)];
      for (Eigen::Index j = 0; j < p; ++j) X(i, j) = xs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    std::vector<std::string> names{"Constant"};
    names.insert(names.end(), success_covariates().begin(), success_covariates().end());
    try {
      col.fit = ols(y, X, names, SeType::cluster_robust, clusters);
    } catch (const Error& e) {
      col.note = e.what();
    }
    report.table3.push_back(std::move(col));
  }

  for (const auto& g : with_total) {
    Table4Row row;
    row.group = g;
    row.domestic_all = summary_of(members[g], "domestic_gross");
    std::vector<const MovieRecord*> sub;
    for (const auto* m : members[g]) {
      if (m->budget && m->domestic_gross && m->worldwide_gross) sub.push_back(m);
    }
    row.n_subsample = sub.size();
    row.budget = summary_of(sub, "budget");
    row.domestic = summary_of(sub, "domestic_gross");
    row.worldwide = summary_of(sub, "worldwide_gross");
    report.table4.push_back(std::move(row));
  }

  for (const auto bin : all_budget_bins()) {
    const auto subset = filter(data.movies, [&](const MovieRecord& m) { return m.budget && *m.budget > 0 && bin_budget(*m.budget) == bin; });
    report.table5.push_back({std::string(to_string(bin)), safe_series(subset, "domestic_gross", data)});
  }
  const auto with_budget = filter(data.movies, [](const MovieRecord& m) { return m.budget.has_value(); });
  report.table5.push_back({"All budget (gross domestic revenue)", safe_series(with_budget, "domestic_gross", data)});
  report.table5.push_back({"All budget (worldwide revenue)", safe_series(with_budget, "worldwide_gross", data)});
  report.table5.push_back({"All data (gross domestic revenue)", safe_series(data.movies, "domestic_gross", data)});

  for (const auto genre : all_genres()) {
    report.table6.push_back({std::string(to_string(genre)), safe_series(genre_partition(data.movies, genre), "domestic_gross", data)});
  }

  for (std::size_t i = 0; i < data.group_order.size(); ++i) {
    for (std::size_t j = i + 1; j < data.group_order.size(); ++j) {
      PairTest t;
      t.group_a = data.group_order[i];
      t.group_b = data.group_order[j];
      std::vector<double> a, b;
      for (const auto* m : members[t.group_a]) if (m->budget) a.push_back(*m->budget);
      for (const auto* m : members[t.group_b]) if (m->budget) b.push_back(*m->budget);
      t.n_a = a.size();
      t.n_b = b.size();
      if (!a.empty() && !b.empty()) {
        t.mann_whitney = mann_whitney(a, b);
        t.ks = ks_two_sample(a, b);
      }
      report.budget_tests.push_back(std::move(t));
    }
  }
  return report;
}

std::vector<std::vector<HeatCell>> heat_grid(const std::vector<HeatRow>& rows) {
  std::vector<std::vector<HeatCell>> grid;
  for (const auto& row : rows) {
    std::vector<HeatCell> cells;
    for (const auto& gr : row.regressions) {
      cells.push_back(gr.fit ? heat_code(*gr.fit, gr.group) : HeatCell{});
    }
    grid.push_back(std::move(cells));
  }
  return grid;
}

std::string table1_csv(const StatsReport& r) {
  std::string out = "variable,group,n,mean,median,sd\n";
  std::vector<std::string> groups = r.groups;
  groups.emplace_back(kTotalGroup);
  for (const auto& v : summary_variables()) {
    for (const auto& g : groups) {
      csv::Row row{v, g};
      const auto it = r.table1.find({g, v});
      append_summary(row, it == r.table1.end() ? std::nullopt : std::optional<SummaryCell>(it->second));
      out += csv::join(row) + "\n";
    }
  }
  return out;
}

std::string table2_csv(const StatsReport& r) {
  std::string out = "outcome,group,estimate,std_error,p_value,stars,n,r_squared\n";
  for (const auto& [outcome, regs] : r.table2) {
    for (const auto& gr : regs) {
      csv::Row row{outcome, gr.group};
      if (gr.fit) {
        const auto& c = gr.fit->coefficient(gr.group);
        row.insert(row.end(), {format_fixed(c.estimate), format_fixed(c.standard_error), format_fixed(c.p_value),
                               std::string(significance_stars(c.p_value)), std::to_string(gr.fit->n),
                               format_fixed(gr.fit->r_squared)});
      } else {
        row.insert(row.end(), 6, "n.a.");
      }
      out += csv::join(row) + "\n";
    }
  }
  return out;
}

std::string table3_csv(const StatsReport& r) {
  std::string out = "outcome,term,estimate,std_error,p_value,stars,n,clusters,r_squared,se_type\n";
  for (const auto& col : r.table3) {
    if (!col.fit) {
      out += csv::join({col.outcome, "n.a.", "n.a.", "n.a.", "n.a.", "", "0", "0", "n.a.", col.note}) + "\n";
      continue;
    }
    for (const auto& c : col.fit->coefficients) {
      out += csv::join({col.outcome, c.name, format_fixed(c.estimate), format_fixed(c.standard_error),
                        format_fixed(c.p_value), std::string(significance_stars(c.p_value)),
                        std::to_string(col.fit->n), std::to_string(col.fit->cluster_count.value_or(0)),
                        format_fixed(col.fit->r_squared), "cluster_robust G/(G-1)*(n-1)/(n-p), t(G-1)"}) +
             "\n";
    }
  }
  return out;
}

std::string table4_csv(const StatsReport& r) {
  std::string out =
      "group,n_all,domestic_all_mean,domestic_all_median,domestic_all_sd,n_budget,budget_mean,budget_median,budget_sd,"
      "domestic_mean,domestic_median,domestic_sd,worldwide_mean,worldwide_median,worldwide_sd\n";
  for (const auto& row : r.table4) {
    csv::Row cells{row.group};
    cells.push_back(row.domestic_all ? std::to_string(row.domestic_all->n) : "0");
    const auto three = [&](const std::optional<SummaryCell>& c) {
      if (!c) {
        cells.insert(cells.end(), 3, "n.a.");
        return;
      }
      cells.insert(cells.end(), {format_fixed(c->mean), format_fixed(c->median), format_fixed(c->sd)});
    };
    three(row.domestic_all);
    cells.push_back(std::to_string(row.n_subsample));
    three(row.budget);
    three(row.domestic);
    three(row.worldwide);
    out += csv::join(cells) + "\n";
  }
  return out;
}

std::string heat_csv(const std::vector<HeatRow>& rows, const std::vector<std::string>& groups, std::string_view first_column) {
  csv::Row header{std::string(first_column)};
  header.insert(header.end(), groups.begin(), groups.end());
  std::string out = csv::join(header) + "\n";
  const auto grid = heat_grid(rows);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    csv::Row row{rows[i].label};
    for (const auto& cell : grid[i]) row.push_back(cell.to_string());
    out += csv::join(row) + "\n";
  }
  return out;
}

std::string heat_detail_csv(const std::vector<HeatRow>& rows, std::string_view first_column) {
  std::string out = std::string(first_column) + ",group,members,n,estimate,std_error,p_value,code\n";
  for (const auto& row : rows) {
    for (const auto& gr : row.regressions) {
      csv::Row cells{row.label, gr.group, std::to_string(gr.members)};
      if (gr.fit) {
        const auto& c = gr.fit->coefficient(gr.group);
        cells.insert(cells.end(), {std::to_string(gr.fit->n), format_fixed(c.estimate), format_fixed(c.standard_error),
                                   format_fixed(c.p_value), heat_code(*gr.fit, gr.group).to_string()});
      } else {
        cells.insert(cells.end(), {"0", "n.a.", "n.a.", "n.a.", "n.a."});
      }
      out += csv::join(cells) + "\n";
    }
  }
  return out;
}

std::string budget_tests_csv(const StatsReport& r) {
  std::string out = "group_a,group_b,n_a,n_b,mann_whitney_u,mann_whitney_p,mann_whitney_exact,ks_d,ks_p\n";
  for (const auto& t : r.budget_tests) {
    csv::Row row{t.group_a, t.group_b, std::to_string(t.n_a), std::to_string(t.n_b)};
    if (t.mann_whitney && t.ks) {
      row.insert(row.end(), {format_fixed(t.mann_whitney->statistic), format_fixed(t.mann_whitney->p_value),
                             t.mann_whitney->exact ? "true" : "false", format_fixed(t.ks->statistic),
                             format_fixed(t.ks->p_value)});
    } else {
      row.insert(row.end(), 5, "n.a.");
    }
    out += csv::join(row) + "\n";
  }
  return out;
}

std::string heat_legend_text() {
  return "1 and -1 - not significant with positive and negative effect respectively\n"
         "2 and -2 - significant at 10% (p < 0.1) with positive and negative effect respectively\n"
         "3 and -3 - significant at 5% (p < 0.05) with positive and negative effect respectively\n"
         "4 and -4 - significant at 1% (p < 0.01) with positive and negative effect respectively\n"
         "5 and -5 - significant at 0.1% (p < 0.001) with positive and negative effect respectively\n"
         "n.a. - no observations\n";
}

} // namespace arcminer
