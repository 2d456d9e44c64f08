#pragma once

// Independent reference computations. Nothing here calls into the library's
// statistics or scoring code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace oracle {

// Two-sided Student-t tail by composite Simpson integration of the density.
inline double t_two_sided_p(double t, double df, int intervals = 200000) {
  const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * M_PI);
  auto f = [&](double x) { return c * std::pow(1 + x * x / df, -(df + 1) / 2); };
  const double b = std::fabs(t);
  const double h = b / intervals;
  double s = f(0) + f(b);
  for (int i = 1; i < intervals; ++i) s += f(i * h) * (i % 2 ? 4 : 2);
  const double central = s * h / 3;  // integral over [0, |t|]
  return std::max(0.0, 1.0 - 2.0 * central);
}

struct Pearson {
  double r;
  double p;
};

inline Pearson pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<long double>(x.size());
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double r = static_cast<double>(sxy / std::sqrt(sxx * syy));
  const double df = static_cast<double>(x.size()) - 2;
  if (std::fabs(r) >= 1.0) return {r, 0.0};
  return {r, t_two_sided_p(r * std::sqrt(df / (1 - r * r)), df)};
}

// Likert answer of the persona-linear backend, integer arithmetic only.
inline int linear_rating(std::int64_t s, std::int64_t n, int lo, int hi) {
  const std::int64_t k = hi - lo + 1;
  return static_cast<int>(std::clamp<std::int64_t>(lo + (s * k) / n, lo, hi));
}

// Expected grid RMSE (0-100 scale) for profiles drawn uniformly from 0..n.
inline double uniform_grid_rmse(int n, int lo, int hi) {
  double sum = 0;
  for (int s = 0; s <= n; ++s) {
    const double assigned = 100.0 * s / n;
    const double measured = 100.0 * (linear_rating(s, n, lo, hi) - lo) / (hi - lo);
    sum += (assigned - measured) * (assigned - measured);
  }
  return std::sqrt(sum / (n + 1));
}

inline std::string read_file(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) return {};
  std::string out;
  char buf[4096];
  for (std::size_t got; (got = std::fread(buf, 1, sizeof buf, f)) > 0;) out.append(buf, got);
  std::fclose(f);
  return out;
}

}  // namespace oracle
