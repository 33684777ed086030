#include "otcap/statutil.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace otcap {

namespace {

constexpr int kMaxIter = 500;
constexpr double kEps = 1e-15;

// Lower regularized gamma P(a, x) by series, valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma Q(a, x) by modified Lentz continued fraction,
// valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double frac = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    frac *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return frac * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
  if (!(a > 0.0)) throw std::invalid_argument("gamma_q: shape must be positive");
  if (x <= 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi_square_tail(double x, int df) {
  if (df < 1) throw std::invalid_argument("chi_square_tail: df must be >= 1");
  return gamma_q(0.5 * static_cast<double>(df), 0.5 * x);
}

WilsonInterval wilson_interval(int successes, int trials, double z) {
  if (trials < 1 || successes < 0 || successes > trials) {
    throw std::invalid_argument("wilson_interval: bad counts");
  }
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  WilsonInterval w;
  w.lo = std::max(0.0, center - half);
  w.hi = std::min(1.0, center + half);
  return w;
}

double chi_square_homogeneity_p(const std::vector<double>& a, const std::vector<double>& b,
                                int max_bins) {
  if (a.empty() || b.empty() || max_bins < 2) return 1.0;
  std::vector<double> pooled;
  pooled.reserve(a.size() + b.size());
  pooled.insert(pooled.end(), a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());

  // Quantile edges; duplicates collapse when the statistic is discrete.
  std::vector<double> edges;
  for (int i = 1; i < max_bins; ++i) {
    const std::size_t idx = pooled.size() * static_cast<std::size_t>(i) /
                            static_cast<std::size_t>(max_bins);
    const double e = pooled[idx];
    if (edges.empty() || e > edges.back()) edges.push_back(e);
  }
  const int bins = static_cast<int>(edges.size()) + 1;
  if (bins < 2) return 1.0;

  const auto bin_of = [&edges](double v) {
    return static_cast<int>(std::upper_bound(edges.begin(), edges.end(), v) - edges.begin());
  };
  std::vector<double> ca(static_cast<std::size_t>(bins), 0.0);
  std::vector<double> cb(static_cast<std::size_t>(bins), 0.0);
  for (double v : a) ca[static_cast<std::size_t>(bin_of(v))] += 1.0;
  for (double v : b) cb[static_cast<std::size_t>(bin_of(v))] += 1.0;

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double n = na + nb;
  double x2 = 0.0;
  int used = 0;
  for (int k = 0; k < bins; ++k) {
    const double col = ca[static_cast<std::size_t>(k)] + cb[static_cast<std::size_t>(k)];
    if (col <= 0.0) continue;
    ++used;
    const double ea = col * na / n;
    const double eb = col * nb / n;
    x2 += (ca[static_cast<std::size_t>(k)] - ea) * (ca[static_cast<std::size_t>(k)] - ea) / ea;
    x2 += (cb[static_cast<std::size_t>(k)] - eb) * (cb[static_cast<std::size_t>(k)] - eb) / eb;
  }
  if (used < 2) return 1.0;
  return chi_square_tail(x2, used - 1);
}

}  // namespace otcap
