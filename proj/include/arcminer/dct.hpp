#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace arcminer {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

namespace detail {

template <typename Scalar>
Scalar dct_scale(Eigen::Index k, Eigen::Index n) {
  using std::sqrt;
  return k == 0 ? sqrt(Scalar(1) / Scalar(n)) : sqrt(Scalar(2) / Scalar(n));
}

// cos(pi * m / (2n)) for m in [0, 4n); every DCT-II kernel entry is one of these.
template <typename Scalar>
Vector<Scalar> quarter_wave_table(Eigen::Index n) {
  const Scalar pi = static_cast<Scalar>(EIGEN_PI);
  Vector<Scalar> table(4 * n);
  for (Eigen::Index m = 0; m < 4 * n; ++m) table[m] = std::cos(pi * Scalar(m) / Scalar(2 * n));
  return table;
}

inline Eigen::Index kernel_index(Eigen::Index sample, Eigen::Index k, Eigen::Index n) {
  return static_cast<Eigen::Index>((static_cast<std::int64_t>(2 * sample + 1) * k) % (4 * n));
}

} // namespace detail

// Orthonormal DCT-II: c_k = s_k sum_n x_n cos(pi (2n+1) k / 2N).
template <typename Derived>
Vector<typename Derived::Scalar> dct_forward(const Eigen::MatrixBase<Derived>& series) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = series.size();
  if (n == 0) throw std::invalid_argument("dct_forward: empty series");
  const auto table = detail::quarter_wave_table<Scalar>(n);
  Vector<Scalar> coeffs(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Scalar acc(0);
    for (Eigen::Index i = 0; i < n; ++i) acc += series(i) * table[detail::kernel_index(i, k, n)];
    coeffs[k] = detail::dct_scale<Scalar>(k, n) * acc;
  }
  return coeffs;
}

// Inverse of dct_forward (orthonormal DCT-III).
template <typename Derived>
Vector<typename Derived::Scalar> dct_inverse(const Eigen::MatrixBase<Derived>& coeffs) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = coeffs.size();
  if (n == 0) throw std::invalid_argument("dct_inverse: empty coefficients");
  const auto table = detail::quarter_wave_table<Scalar>(n);
  Vector<Scalar> scaled(n);
  for (Eigen::Index k = 0; k < n; ++k) scaled[k] = detail::dct_scale<Scalar>(k, n) * coeffs(k);
  Vector<Scalar> series(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Scalar acc(0);
    for (Eigen::Index k = 0; k < n; ++k) acc += scaled[k] * table[detail::kernel_index(i, k, n)];
    series[i] = acc;
  }
  return series;
}

// Evaluates the synthesis sum of the first `retained` coefficients as a
// continuous function of the sample position u, at `output_length` points
// spaced uniformly over [0, N-1]. At integer u this is the inverse DCT of
// the truncated spectrum.
template <typename Derived>
Vector<typename Derived::Scalar> dct_low_pass(const Eigen::MatrixBase<Derived>& coeffs, Eigen::Index retained,
                                              Eigen::Index output_length) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = coeffs.size();
  if (n == 0) throw std::invalid_argument("dct_low_pass: empty coefficients");
  if (retained < 1 || retained > n)
    throw std::invalid_argument("dct_low_pass: retained coefficient count must lie in [1, " + std::to_string(n) + "]");
  if (output_length < 2) throw std::invalid_argument("dct_low_pass: output_length must be at least 2");

  const Scalar pi = static_cast<Scalar>(EIGEN_PI);
  const Scalar step = Scalar(n - 1) / Scalar(output_length - 1);
  Vector<Scalar> scaled(retained);
  for (Eigen::Index k = 0; k < retained; ++k) scaled[k] = detail::dct_scale<Scalar>(k, n) * coeffs(k);
  Vector<Scalar> out(output_length);
  for (Eigen::Index j = 0; j < output_length; ++j) {
    const Scalar u = (j == output_length - 1) ? Scalar(n - 1) : step * Scalar(j);
    // cos(k theta) by the Chebyshev recurrence.
    const Scalar c1 = std::cos(pi * (Scalar(2) * u + Scalar(1)) / Scalar(2 * n));
    Scalar prev(1), cur = c1, acc = scaled[0];
    for (Eigen::Index k = 1; k < retained; ++k) {
      acc += scaled[k] * cur;
      const Scalar next = Scalar(2) * c1 * cur - prev;
      prev = cur;
      cur = next;
    }
    out[j] = acc;
  }
  return out;
}

} // namespace arcminer
