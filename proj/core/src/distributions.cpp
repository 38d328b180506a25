#include "choicestat/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "choicestat/errors.hpp"

namespace choicestat {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InputError("normal quantile needs 0 < p < 1");
  if (p > 0.5) return -normal_quantile(1.0 - p);
  if (p == 0.5) return 0.0;

  double lo = -40.0;
  double hi = 0.0;
  double x = -1.0;
  for (int i = 0; i < 200; ++i) {
    const double f = normal_cdf(x) - p;
    if (f == 0.0) return x;
    if (f < 0.0) lo = x; else hi = x;
    double next = x - f / normal_pdf(x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-15 * std::max(1.0, std::abs(x)) || hi - lo < 1e-13) return next;
    x = next;
  }
  return x;
}

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxTerms = 10000;

// Series for P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxTerms; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction (modified Lentz) for Q(a, x), valid for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  const double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

void check_gamma_args(double a, double x) {
  if (!(a > 0.0)) throw InputError("incomplete gamma needs a > 0");
  if (!(x >= 0.0)) throw InputError("incomplete gamma needs x >= 0");
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_fraction(a, x);
}

double chisq_cdf(double x, int df) {
  if (df < 1) throw InputError("chi-square needs at least one degree of freedom");
  if (!(x >= 0.0)) throw InputError("chi-square CDF is defined for x >= 0");
  return regularized_gamma_p(0.5 * df, 0.5 * x);
}

double chisq_sf(double x, int df) {
  if (df < 1) throw InputError("chi-square needs at least one degree of freedom");
  if (!(x >= 0.0)) throw InputError("chi-square CDF is defined for x >= 0");
  return regularized_gamma_q(0.5 * df, 0.5 * x);
}

}  // namespace choicestat
