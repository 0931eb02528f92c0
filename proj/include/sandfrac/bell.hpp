#ifndef SANDFRAC_BELL_HPP
#define SANDFRAC_BELL_HPP

#include <cmath>

#include "sandfrac/error.hpp"

namespace sandfrac {

/// Generalized bell membership function
///
///   f(x; a, b, c) = 1 / (1 + |(x - c) / a|^(2b))
///
/// `a` is the half-width at the 0.5 crossover, `b` sets the slope at the
/// crossover points and `c` is the center.
struct BellMf {
  double a = 1.0;
  double b = 2.0;
  double c = 0.0;

  bool valid() const noexcept {
    return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) &&
           a > 0.0 && b > 0.0;
  }

  friend bool operator==(const BellMf&, const BellMf&) = default;
};

struct BellGrad {
  double da = 0.0;
  double db = 0.0;
  double dc = 0.0;
};

namespace detail {

// ln|(x - c)/a| * 2b, i.e. the log of the power term; -inf at x == c.
inline double bell_log_power(const BellMf& mf, double x) noexcept {
  const double t = std::abs(x - mf.c) / mf.a;
  return 2.0 * mf.b * std::log(t);
}

// Unchecked evaluation; the power is formed as exp(2b ln t) since b need not
// be an integer.
inline double bell_value(const BellMf& mf, double x) noexcept {
  if (x == mf.c) return 1.0;
  const double u = std::exp(bell_log_power(mf, x));
  return 1.0 / (1.0 + u);
}

// log f = -softplus(2b ln t), stable for arguments far in the tails.
inline double bell_log_value(const BellMf& mf, double x) noexcept {
  if (x == mf.c) return 0.0;
  const double s = bell_log_power(mf, x);
  return s > 0.0 ? -(s + std::log1p(std::exp(-s))) : -std::log1p(std::exp(s));
}

inline BellGrad bell_gradient(const BellMf& mf, double x) noexcept {
  if (x == mf.c) return {};
  const double d = x - mf.c;
  const double t = std::abs(d) / mf.a;
  const double log_t = std::log(t);
  const double u = std::exp(2.0 * mf.b * log_t);
  const double f = 1.0 / (1.0 + u);
  const double f2u = f * f * u;
  BellGrad g;
  g.da = f2u * 2.0 * mf.b / mf.a;
  g.db = -f2u * 2.0 * log_t;
  g.dc = f2u * 2.0 * mf.b / d;
  return g;
}

inline void check_bell(const BellMf& mf, double x) {
  if (!mf.valid())
    throw ParameterError("bell membership function requires finite a > 0, b > 0");
  if (!std::isfinite(x))
    throw ParameterError("bell membership function evaluated at non-finite x");
}

}  // namespace detail

inline double bell_eval(const BellMf& mf, double x) {
  detail::check_bell(mf, x);
  return detail::bell_value(mf, x);
}

/// Partial derivatives of the bell function with respect to (a, b, c).
/// All three are zero at x == c.
inline BellGrad bell_grad(const BellMf& mf, double x) {
  detail::check_bell(mf, x);
  return detail::bell_gradient(mf, x);
}

}  // namespace sandfrac

#endif  // SANDFRAC_BELL_HPP
