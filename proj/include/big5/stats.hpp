#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>

#include "big5/errors.hpp"

namespace big5 {

namespace detail {

// Continued fraction for I_x(a, b), modified Lentz.
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw StatisticsError("incomplete beta continued fraction did not converge");
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
inline double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0) || !(b > 0)) throw StatisticsError("incomplete beta needs a, b > 0");
  if (x < 0.0 || x > 1.0) throw StatisticsError("incomplete beta needs x in [0, 1]");
  if (x == 0.0 || x == 1.0) return x;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

// Two-sided P(|T| >= |t|) for Student's t with `df` degrees of freedom.
inline double student_t_two_sided_p(double t, double df) {
  if (!(df > 0)) throw StatisticsError("degrees of freedom must be positive");
  if (std::isinf(t)) return 0.0;
  return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

struct CorrelationResult {
  double r = 0;
  double p_value = 1;
  std::size_t sample_count = 0;
};

inline CorrelationResult pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw StatisticsError("pearson: series lengths differ");
  const std::size_t n = xs.size();
  if (n < 3) throw StatisticsError("pearson: need at least 3 samples");
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(n);
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw StatisticsError("pearson: zero variance in a series");
  const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  CorrelationResult out{r, 0.0, n};
  if (std::fabs(r) < 1.0) {
    // t = r sqrt(df / (1 - r^2)); the beta argument df/(df + t^2) reduces to 1 - r^2.
    const double df = static_cast<double>(n - 2);
    out.p_value = regularized_incomplete_beta(df / 2.0, 0.5, 1.0 - r * r);
  }
  return out;
}

inline double rmse(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw StatisticsError("rmse: lengths differ");
  if (xs.empty()) throw StatisticsError("rmse: empty input");
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) ss += (xs[i] - ys[i]) * (xs[i] - ys[i]);
  return std::sqrt(ss / static_cast<double>(xs.size()));
}

// Lowercased, punctuation-free, whitespace-split term counts.
inline std::map<std::string, double> term_frequencies(std::string_view text) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 128 && std::ispunct(u)) continue;
    cleaned += static_cast<char>(u < 128 ? std::tolower(u) : u);
  }
  std::map<std::string, double> tf;
  std::istringstream in(cleaned);
  for (std::string tok; in >> tok;) tf[tok] += 1.0;
  return tf;
}

inline double tf_cosine(std::string_view a, std::string_view b) {
  const auto ta = term_frequencies(a);
  const auto tb = term_frequencies(b);
  if (ta.empty() || tb.empty()) throw StatisticsError("tf_cosine: text has no tokens");
  double dot = 0, na = 0, nb = 0;
  for (const auto& [tok, c] : ta) {
    na += c * c;
    if (auto it = tb.find(tok); it != tb.end()) dot += c * it->second;
  }
  for (const auto& [tok, c] : tb) nb += c * c;
  return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

}  // namespace big5
