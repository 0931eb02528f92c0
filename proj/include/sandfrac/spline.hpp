#ifndef SANDFRAC_SPLINE_HPP
#define SANDFRAC_SPLINE_HPP

#include <algorithm>
#include <cmath>
#include <sstream>
#include <span>
#include <vector>

#include "sandfrac/error.hpp"

namespace sandfrac {

/// Interpolating cubic spline with not-a-knot end conditions (third
/// derivative continuous across the second and second-to-last knots).
/// Stored as knot values plus second derivatives M_i.
class CubicSpline {
 public:
  CubicSpline(std::span<const double> t, std::span<const double> y)
      : t_(t.begin(), t.end()), y_(y.begin(), y.end()) {
    if (t_.size() != y_.size())
      throw ParameterError("spline: knot times and values differ in length");
    if (t_.size() < 4) throw ParameterError("spline: at least 4 knots are required");
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (!std::isfinite(t_[i]) || !std::isfinite(y_[i]))
        throw ParameterError("spline: non-finite knot");
      if (i > 0 && !(t_[i] > t_[i - 1]))
        throw ParameterError("spline: knot times must be strictly increasing");
    }
    solve_second_derivatives();
  }

  double front() const noexcept { return t_.front(); }
  double back() const noexcept { return t_.back(); }

  bool contains(double t) const noexcept { return t >= t_.front() && t <= t_.back(); }

  /// Evaluate inside the knot span; refuses to extrapolate.
  double operator()(double t) const {
    if (!contains(t)) {
      std::ostringstream os;
      os.precision(17);
      os << "spline: query time " << t << " outside knot span [" << t_.front() << ", "
         << t_.back() << "]";
      throw InputError(os.str());
    }
    return eval(t);
  }

  const std::vector<double>& second_derivatives() const noexcept { return m_; }

 private:
  double eval(double t) const {
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    std::size_t i = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
    if (t_[i] == t) return y_[i];
    if (i >= t_.size() - 1) i = t_.size() - 2;
    const double h = t_[i + 1] - t_[i];
    const double l = t_[i + 1] - t;
    const double r = t - t_[i];
    return m_[i] * l * l * l / (6.0 * h) + m_[i + 1] * r * r * r / (6.0 * h) +
           (y_[i] / h - m_[i] * h / 6.0) * l + (y_[i + 1] / h - m_[i + 1] * h / 6.0) * r;
  }

  // Interior moment equations for M_1..M_{n-2}, with M_0 and M_{n-1}
  // eliminated through the not-a-knot conditions; the result is
  // tridiagonal and solved with the Thomas algorithm.
  void solve_second_derivatives() {
    const std::size_t n = t_.size();
    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = t_[i + 1] - t_[i];

    const std::size_t k = n - 2;
    std::vector<double> lower(k, 0.0), diag(k, 0.0), upper(k, 0.0), rhs(k, 0.0);
    for (std::size_t r = 0; r < k; ++r) {
      const std::size_t i = r + 1;
      lower[r] = h[i - 1];
      diag[r] = 2.0 * (h[i - 1] + h[i]);
      upper[r] = h[i];
      rhs[r] = 6.0 * ((y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1]);
    }
    // M_0 = (1 + h0/h1) M_1 - (h0/h1) M_2
    {
      const double q = h[0] / h[1];
      diag[0] += h[0] * (1.0 + q);
      upper[0] -= h[0] * q;
      lower[0] = 0.0;
    }
    // M_{n-1} = (1 + h_{n-2}/h_{n-3}) M_{n-2} - (h_{n-2}/h_{n-3}) M_{n-3}
    {
      const double q = h[n - 2] / h[n - 3];
      diag[k - 1] += h[n - 2] * (1.0 + q);
      lower[k - 1] -= h[n - 2] * q;
      upper[k - 1] = 0.0;
    }

    for (std::size_t r = 1; r < k; ++r) {
      const double w = lower[r] / diag[r - 1];
      diag[r] -= w * upper[r - 1];
      rhs[r] -= w * rhs[r - 1];
    }
    std::vector<double> inner(k);
    inner[k - 1] = rhs[k - 1] / diag[k - 1];
    for (std::size_t r = k - 1; r-- > 0;) inner[r] = (rhs[r] - upper[r] * inner[r + 1]) / diag[r];

    m_.assign(n, 0.0);
    for (std::size_t r = 0; r < k; ++r) m_[r + 1] = inner[r];
    const double q0 = h[0] / h[1];
    m_[0] = (1.0 + q0) * m_[1] - q0 * m_[2];
    const double qn = h[n - 2] / h[n - 3];
    m_[n - 1] = (1.0 + qn) * m_[n - 2] - qn * m_[n - 3];
  }

  std::vector<double> t_;
  std::vector<double> y_;
  std::vector<double> m_;
};

/// Resample knot data at `query_t`. Every query must lie inside the knot
/// span; otherwise the error lists the offending times.
inline std::vector<double> spline_resample(std::span<const double> knots_t,
                                           std::span<const double> knots_y,
                                           std::span<const double> query_t) {
  CubicSpline s(knots_t, knots_y);
  std::vector<double> bad;
  for (double q : query_t)
    if (!s.contains(q)) bad.push_back(q);
  if (!bad.empty()) {
    std::ostringstream os;
    os.precision(17);
    os << "spline: " << bad.size() << " query time(s) outside [" << s.front() << ", "
       << s.back() << "]:";
    for (std::size_t i = 0; i < bad.size() && i < 10; ++i) os << ' ' << bad[i];
    if (bad.size() > 10) os << " ...";
    throw InputError(os.str());
  }
  std::vector<double> out(query_t.size());
  for (std::size_t i = 0; i < query_t.size(); ++i) out[i] = s(query_t[i]);
  return out;
}

}  // namespace sandfrac

#endif  // SANDFRAC_SPLINE_HPP
