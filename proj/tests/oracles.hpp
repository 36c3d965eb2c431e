#pragma once

// Reference implementations written from the textbook definitions with plain
// loops; they share no code with the library.

#include <cstddef>
#include <string>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;  // row-major

// c_k = s_k sum_n x_n cos(pi (2n+1) k / 2N), s_0 = sqrt(1/N), s_k = sqrt(2/N).
std::vector<double> dct2(const std::vector<double>& x);

// Gauss-Jordan inverse with partial pivoting.
Matrix inverse(Matrix a);

// Coefficients and cluster-robust standard errors by explicit summation:
// V = c (X'X)^-1 [sum_g (sum_{i in g} x_i e_i)(...)'] (X'X)^-1,
// c = G/(G-1) (n-1)/(n-p).
struct Sandwich {
  std::vector<double> beta, se;
};
Sandwich cluster_robust(const Matrix& x, const std::vector<double>& y, const std::vector<std::string>& cluster);

// Two-sided exact Mann-Whitney p from enumerating every split of the pooled
// sample; U counts pairs with a_i > b_j, ties half.
double mann_whitney_enumerated_p(const std::vector<double>& a, const std::vector<double>& b);
double mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b);

// max_x |F_a(x) - F_b(x)| by counting at every pooled point.
double ks_statistic(const std::vector<double>& a, const std::vector<double>& b);

// In-group minus out-group mean from published group means and sizes.
double dummy_coefficient(double group_mean, double group_n, double total_mean, double total_n);

} // namespace oracle
