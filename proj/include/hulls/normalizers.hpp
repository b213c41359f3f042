#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Normalizing functions for the hull experiments.
//
//   b(t) = sqrt(2 ln t),        t > e        (the LLN scale for Gaussian maxima)
//   c(t) = sqrt(2 ln ln t),     t > e^e      (the LIL scale)
//
// plus an exploratory family g: iterated-log(k, alpha) evaluates
// (2 ln^(k) t)^alpha where ln^(k) is the k-fold logarithm, a constant, and a
// piecewise-linear user table. The k-fold-log kinds are accepted only where
// the innermost log exceeds 1 (t > e for k=1, t > e^e for k=2, ...), which
// keeps every normalizer strictly positive and nondecreasing. The boundary is
// excluded: b(e) and c(e^e) are domain errors.

namespace hulls {

enum class NormalizerKind { B, C, IteratedLog, Constant, UserTable };

namespace detail {
// e, e^e, e^(e^e), ...
inline double exp_tower(int k) {
  double v = 1.0;
  for (int i = 0; i < k; ++i) v = std::exp(v);
  return v;
}
}  // namespace detail

inline double eval_b(double t) {
  if (!(t > std::numbers::e)) {
    throw std::domain_error("b(t): domain is t > e");
  }
  return std::sqrt(2.0 * std::log(t));
}

inline double eval_c(double t) {
  static const double ee = std::exp(std::numbers::e);
  if (!(t > ee)) {
    throw std::domain_error("c(t): domain is t > e^e");
  }
  return std::sqrt(2.0 * std::log(std::log(t)));
}

class Normalizer {
 public:
  static Normalizer b() { return Normalizer(NormalizerKind::B, 1, 0.5, 0.0, {}); }
  static Normalizer c() { return Normalizer(NormalizerKind::C, 2, 0.5, 0.0, {}); }

  static Normalizer iterated_log(int k, double alpha) {
    if (k < 1) throw std::invalid_argument("iterated-log: k must be >= 1");
    if (!(alpha > 0.0)) throw std::invalid_argument("iterated-log: alpha must be > 0");
    return Normalizer(NormalizerKind::IteratedLog, k, alpha, 0.0, {});
  }

  static Normalizer constant(double value) {
    if (!(value > 0.0)) throw std::invalid_argument("constant normalizer must be > 0");
    return Normalizer(NormalizerKind::Constant, 0, 0.0, value, {});
  }

  // Piecewise-linear interpolation of (t, g) knots; defined on [t_first, t_last].
  static Normalizer table(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2) throw std::invalid_argument("table normalizer: need >= 2 knots");
    for (std::size_t i = 0; i < knots.size(); ++i) {
      if (!(knots[i].second > 0.0)) {
        throw std::invalid_argument("table normalizer: values must be > 0");
      }
      if (i > 0) {
        if (!(knots[i].first > knots[i - 1].first)) {
          throw std::invalid_argument("table normalizer: t knots must be strictly increasing");
        }
        if (knots[i].second < knots[i - 1].second) {
          throw std::invalid_argument("table normalizer: values must be nondecreasing");
        }
      }
    }
    return Normalizer(NormalizerKind::UserTable, 0, 0.0, 0.0, std::move(knots));
  }

  NormalizerKind kind() const { return kind_; }

  double operator()(double t) const {
    switch (kind_) {
      case NormalizerKind::B:
        return eval_b(t);
      case NormalizerKind::C:
        return eval_c(t);
      case NormalizerKind::IteratedLog: {
        if (!in_domain(t)) {
          throw std::domain_error("iterated-log(" + std::to_string(k_) +
                                  "): domain is t > exp^(" + std::to_string(k_) + ")(1)");
        }
        double v = t;
        for (int i = 0; i < k_; ++i) v = std::log(v);
        return std::pow(2.0 * v, alpha_);
      }
      case NormalizerKind::Constant:
        return value_;
      case NormalizerKind::UserTable: {
        if (!in_domain(t)) {
          throw std::domain_error("table normalizer: t outside knot range");
        }
        auto hi = std::upper_bound(
            knots_.begin(), knots_.end(), t,
            [](double x, const std::pair<double, double>& kn) { return x < kn.first; });
        if (hi == knots_.begin()) return knots_.front().second;
        if (hi == knots_.end()) return knots_.back().second;
        auto lo = hi - 1;
        const double w = (t - lo->first) / (hi->first - lo->first);
        return lo->second + w * (hi->second - lo->second);
      }
    }
    throw std::logic_error("unreachable");
  }

  bool in_domain(double t) const {
    switch (kind_) {
      case NormalizerKind::B:
        return t > std::numbers::e;
      case NormalizerKind::C:
      case NormalizerKind::IteratedLog:
        return t > detail::exp_tower(k_);
      case NormalizerKind::Constant:
        return true;
      case NormalizerKind::UserTable:
        return t >= knots_.front().first && t <= knots_.back().first;
    }
    return false;
  }

  // Infimum of the domain (exclusive for the log kinds, inclusive for tables).
  double domain_infimum() const {
    switch (kind_) {
      case NormalizerKind::B:
        return std::numbers::e;
      case NormalizerKind::C:
      case NormalizerKind::IteratedLog:
        return detail::exp_tower(k_);
      case NormalizerKind::Constant:
        return -std::numeric_limits<double>::infinity();
      case NormalizerKind::UserTable:
        return knots_.front().first;
    }
    return 0.0;
  }

  std::string describe() const {
    std::ostringstream os;
    switch (kind_) {
      case NormalizerKind::B: os << "b"; break;
      case NormalizerKind::C: os << "c"; break;
      case NormalizerKind::IteratedLog:
        os << "iterated-log(" << k_ << "," << alpha_ << ")";
        break;
      case NormalizerKind::Constant: os << "constant(" << value_ << ")"; break;
      case NormalizerKind::UserTable:
        os << "table[" << knots_.size() << " knots]";
        break;
    }
    return os.str();
  }

 private:
  Normalizer(NormalizerKind kind, int k, double alpha, double value,
             std::vector<std::pair<double, double>> knots)
      : kind_(kind), k_(k), alpha_(alpha), value_(value), knots_(std::move(knots)) {}

  NormalizerKind kind_;
  int k_;
  double alpha_;
  double value_;
  std::vector<std::pair<double, double>> knots_;
};

}  // namespace hulls
