#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hulls/geometry.hpp"
#include "hulls/rng.hpp"

// Seeded Gaussian sequence generators, each paired with an exact covariance
// oracle rho(m,n). Kinds:
//
//   iid(Sigma)             X_n ~ N(0, Sigma), independent
//   scaled-iid(Sigma, s)   X_n = s_n * Y_n with Y_n ~ N(0, Sigma) iid; the
//                          schedule s_n -> 1, so X_n converges weakly
//   ar1(phi)               scalar, X_1 ~ N(0,1), X_{k+1} = phi X_k +
//                          sqrt(1-phi^2) xi  (stationary N(0,1) marginals)
//   normalized-walk        scalar, S_k = S_{k-1} + xi_k, emits S_k / sqrt(k);
//                          weak limit N(0,1) but corr(X_m, X_{m+k}) =
//                          (1 + k/m)^{-1/2} does not vanish for k ~ m
//   polytope-lines(a, p)   picks class k with probability p_k and emits
//                          zeta * a_k, zeta ~ N(0,1): a Gaussian concentrated
//                          on the line through a_k, sd |a_k| along it
//
// A (spec, seed) pair fully determines the emitted path.

namespace hulls {

enum class SequenceKind { Iid, ScaledIid, Ar1, NormalizedWalk, PolytopeLines };

inline const char* to_string(SequenceKind k) {
  switch (k) {
    case SequenceKind::Iid: return "iid";
    case SequenceKind::ScaledIid: return "scaled-iid";
    case SequenceKind::Ar1: return "ar1";
    case SequenceKind::NormalizedWalk: return "normalized-walk";
    case SequenceKind::PolytopeLines: return "polytope-lines";
  }
  return "?";
}

// sigma_n = 1 + c * n^(-q); positive for all n >= 1 and -> 1.
struct SigmaSchedule {
  double c = 1.0;
  double q = 0.5;

  static SigmaSchedule one_plus_inv_sqrt() { return {1.0, 0.5}; }

  double operator()(std::uint64_t n) const {
    return 1.0 + c * std::pow(static_cast<double>(n), -q);
  }
  void validate() const {
    if (!(q > 0.0)) throw std::invalid_argument("sigma schedule: q must be > 0");
    if (!(c > -1.0)) throw std::invalid_argument("sigma schedule: c must be > -1");
  }
};

struct SequenceSpec {
  SequenceKind kind = SequenceKind::Iid;
  int d = 1;
  Eigen::MatrixXd sigma;           // iid / scaled-iid
  SigmaSchedule schedule;          // scaled-iid
  double phi = 0.0;                // ar1
  std::vector<std::vector<double>> line_vectors;  // polytope-lines
  std::vector<double> line_probs;

  static SequenceSpec iid(Eigen::MatrixXd cov) {
    SequenceSpec s;
    s.kind = SequenceKind::Iid;
    s.d = static_cast<int>(cov.rows());
    s.sigma = std::move(cov);
    return s;
  }
  static SequenceSpec iid1d(double variance = 1.0) {
    Eigen::MatrixXd m(1, 1);
    m(0, 0) = variance;
    return iid(std::move(m));
  }
  static SequenceSpec scaled_iid(Eigen::MatrixXd cov,
                                 SigmaSchedule sched = SigmaSchedule::one_plus_inv_sqrt()) {
    SequenceSpec s = iid(std::move(cov));
    s.kind = SequenceKind::ScaledIid;
    s.schedule = sched;
    return s;
  }
  static SequenceSpec ar1(double phi) {
    SequenceSpec s;
    s.kind = SequenceKind::Ar1;
    s.d = 1;
    s.phi = phi;
    return s;
  }
  static SequenceSpec normalized_walk() {
    SequenceSpec s;
    s.kind = SequenceKind::NormalizedWalk;
    s.d = 1;
    return s;
  }
  static SequenceSpec polytope_lines(std::vector<std::vector<double>> vectors,
                                     std::vector<double> probs) {
    SequenceSpec s;
    s.kind = SequenceKind::PolytopeLines;
    if (vectors.empty()) throw std::invalid_argument("polytope-lines: no vectors");
    s.d = static_cast<int>(vectors.front().size());
    s.line_vectors = std::move(vectors);
    s.line_probs = std::move(probs);
    return s;
  }

  void validate() const {
    switch (kind) {
      case SequenceKind::Iid:
      case SequenceKind::ScaledIid:
        if (sigma.rows() != d || sigma.cols() != d || d < 1) {
          throw std::invalid_argument("sequence spec: sigma must be d x d");
        }
        Ellipsoid(sigma);  // symmetry/PSD check
        if (kind == SequenceKind::ScaledIid) schedule.validate();
        break;
      case SequenceKind::Ar1:
        if (d != 1) throw std::invalid_argument("ar1: d must be 1");
        if (!(std::abs(phi) < 1.0)) throw std::invalid_argument("ar1: |phi| must be < 1");
        break;
      case SequenceKind::NormalizedWalk:
        if (d != 1) throw std::invalid_argument("normalized-walk: d must be 1");
        break;
      case SequenceKind::PolytopeLines: {
        if (line_vectors.empty()) throw std::invalid_argument("polytope-lines: no vectors");
        if (line_vectors.size() != line_probs.size()) {
          throw std::invalid_argument("polytope-lines: vectors and probs sizes differ");
        }
        double total = 0.0;
        for (double p : line_probs) {
          if (!(p > 0.0)) throw std::invalid_argument("polytope-lines: probs must be > 0");
          total += p;
        }
        if (std::abs(total - 1.0) > 1e-9) {
          throw std::invalid_argument("polytope-lines: probs must sum to 1");
        }
        for (const auto& a : line_vectors) {
          if (static_cast<int>(a.size()) != d) {
            throw std::invalid_argument("polytope-lines: vector dimension mismatch");
          }
          double n2 = 0.0;
          for (double v : a) n2 += v * v;
          if (!(n2 > 0.0)) throw std::invalid_argument("polytope-lines: zero vector");
        }
        break;
      }
    }
  }

  // Weak-limit target of the normalized hulls, where one exists.
  Target limit_target() const {
    switch (kind) {
      case SequenceKind::Iid:
      case SequenceKind::ScaledIid:
        if (d == 1) {
          const double s = std::sqrt(std::max(sigma(0, 0), 0.0));
          return Interval(-s, s);
        }
        return Ellipsoid(sigma);
      case SequenceKind::Ar1:
      case SequenceKind::NormalizedWalk:
        return Interval(-1.0, 1.0);
      case SequenceKind::PolytopeLines:
        return Polytope::central_symmetric(line_vectors);
    }
    throw std::logic_error("unreachable");
  }

  std::string describe() const;
};

// Recurrence state of one path. next() returns a view into an internal
// buffer, valid until the following call.
class PathState {
 public:
  PathState(const SequenceSpec& spec, std::uint64_t path_seed)
      : kind_(spec.kind), d_(spec.d), eng_(make_engine(path_seed)), buf_(spec.d, 0.0) {
    spec.validate();
    switch (kind_) {
      case SequenceKind::Iid:
      case SequenceKind::ScaledIid: {
        const Eigen::MatrixXd a = Ellipsoid(spec.sigma).sqrt_factor();
        factor_.assign(a.data(), a.data() + a.size());  // column-major d x d
        schedule_ = spec.schedule;
        z_.resize(d_);
        break;
      }
      case SequenceKind::Ar1:
        phi_ = spec.phi;
        noise_scale_ = std::sqrt(1.0 - spec.phi * spec.phi);
        break;
      case SequenceKind::NormalizedWalk:
        break;
      case SequenceKind::PolytopeLines: {
        lines_ = spec.line_vectors;
        cum_probs_.resize(spec.line_probs.size());
        std::partial_sum(spec.line_probs.begin(), spec.line_probs.end(),
                         cum_probs_.begin());
        cum_probs_.back() = 1.0;
        category_counts_.assign(lines_.size(), 0);
        break;
      }
    }
  }

  int dim() const { return d_; }
  std::uint64_t count() const { return k_; }
  SequenceKind kind() const { return kind_; }
  const std::vector<std::uint64_t>& category_counts() const { return category_counts_; }

  // Emit X_{k+1}.
  std::span<const double> next() {
    ++k_;
    switch (kind_) {
      case SequenceKind::Iid:
      case SequenceKind::ScaledIid: {
        for (int i = 0; i < d_; ++i) z_[i] = std_normal(eng_);
        const double s = kind_ == SequenceKind::ScaledIid ? schedule_(k_) : 1.0;
        for (int i = 0; i < d_; ++i) {
          double acc = 0.0;
          for (int j = 0; j < d_; ++j) acc += factor_[j * d_ + i] * z_[j];
          buf_[i] = s * acc;
        }
        break;
      }
      case SequenceKind::Ar1:
        prev_ = (k_ == 1) ? std_normal(eng_)
                          : phi_ * prev_ + noise_scale_ * std_normal(eng_);
        buf_[0] = prev_;
        break;
      case SequenceKind::NormalizedWalk:
        walk_sum_ += std_normal(eng_);
        buf_[0] = walk_sum_ / std::sqrt(static_cast<double>(k_));
        break;
      case SequenceKind::PolytopeLines: {
        const double u = u01(eng_);
        std::size_t cat = 0;
        while (cat + 1 < cum_probs_.size() && u > cum_probs_[cat]) ++cat;
        ++category_counts_[cat];
        const double zeta = std_normal(eng_);
        for (int i = 0; i < d_; ++i) buf_[i] = zeta * lines_[cat][i];
        break;
      }
    }
    return buf_;
  }

  // Scalar fast path (d == 1).
  double next1() { return next()[0]; }

 private:
  SequenceKind kind_;
  int d_;
  Engine eng_;
  std::uint64_t k_ = 0;

  std::vector<double> buf_;
  std::vector<double> z_;
  std::vector<double> factor_;  // column-major sqrt of sigma
  SigmaSchedule schedule_;
  double phi_ = 0.0;
  double noise_scale_ = 0.0;
  double prev_ = 0.0;
  double walk_sum_ = 0.0;
  std::vector<std::vector<double>> lines_;
  std::vector<double> cum_probs_;
  std::vector<std::uint64_t> category_counts_;
};

inline PathState spawn(const SequenceSpec& spec, std::uint64_t path_seed) {
  return PathState(spec, path_seed);
}

// Exact covariance of (X_m, X_n) for scalar kinds.
inline double rho(const SequenceSpec& spec, std::uint64_t m, std::uint64_t n) {
  if (m < 1 || n < 1) throw std::invalid_argument("rho: indices must be >= 1");
  if (spec.d != 1) throw std::invalid_argument("rho: defined for d = 1 kinds");
  switch (spec.kind) {
    case SequenceKind::Iid:
      return m == n ? spec.sigma(0, 0) : 0.0;
    case SequenceKind::ScaledIid:
      return m == n ? spec.schedule(m) * spec.schedule(n) * spec.sigma(0, 0) : 0.0;
    case SequenceKind::Ar1:
      return std::pow(spec.phi, static_cast<double>(m > n ? m - n : n - m));
    case SequenceKind::NormalizedWalk:
      // E S_m S_n / sqrt(mn) = min(m,n) / sqrt(mn); for n = m + k this is
      // (1 + k/m)^{-1/2}
      return std::sqrt(static_cast<double>(std::min(m, n)) /
                       static_cast<double>(std::max(m, n)));
    case SequenceKind::PolytopeLines:
      throw std::invalid_argument("rho: not defined for polytope-lines");
  }
  throw std::logic_error("unreachable");
}

// Scan of |rho(m,n)| over m,n <= horizon with m, n, |m-n| all >= horizon/2.
// separated_worst additionally scans pairs (m, horizon) with m <= sqrt(horizon),
// whose index gap ratio grows without bound; the walk passes that scan but
// fails the plain one.
struct Condition2Report {
  bool satisfied_at_horizon = true;
  std::uint64_t worst_m = 0;
  std::uint64_t worst_n = 0;
  double worst_value = 0.0;
  double separated_worst = 0.0;
};

inline Condition2Report check_condition2(const SequenceSpec& spec, double epsilon,
                                         std::uint64_t horizon) {
  if (horizon < 2) throw std::invalid_argument("check_condition2: horizon must be >= 2");
  if (!(epsilon > 0.0)) throw std::invalid_argument("check_condition2: epsilon must be > 0");
  Condition2Report rep;
  const std::uint64_t half = (horizon + 1) / 2;
  for (std::uint64_t m = half; m <= horizon; ++m) {
    for (std::uint64_t n = m + half; n <= horizon; ++n) {
      const double v = std::abs(rho(spec, m, n));
      if (v > rep.worst_value) {
        rep.worst_value = v;
        rep.worst_m = m;
        rep.worst_n = n;
      }
    }
  }
  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(horizon)));
  for (std::uint64_t m = 1; m <= root; ++m) {
    rep.separated_worst = std::max(rep.separated_worst, std::abs(rho(spec, m, horizon)));
  }
  rep.satisfied_at_horizon = rep.worst_value < epsilon;
  return rep;
}

inline std::string SequenceSpec::describe() const {
  std::ostringstream os;
  os << to_string(kind) << ";d=" << d;
  switch (kind) {
    case SequenceKind::Iid:
    case SequenceKind::ScaledIid:
      os << ";sigma=";
      for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (i) os << ",";
        os << sigma(i / d, i % d);
      }
      if (kind == SequenceKind::ScaledIid) {
        os << ";schedule=1+" << schedule.c << "*n^-" << schedule.q;
      }
      break;
    case SequenceKind::Ar1:
      os << ";phi=" << phi;
      break;
    case SequenceKind::NormalizedWalk:
      break;
    case SequenceKind::PolytopeLines:
      os << ";lines=";
      for (std::size_t k = 0; k < line_vectors.size(); ++k) {
        if (k) os << "|";
        for (std::size_t i = 0; i < line_vectors[k].size(); ++i) {
          if (i) os << ",";
          os << line_vectors[k][i];
        }
        os << ":" << line_probs[k];
      }
      break;
  }
  return os.str();
}

}  // namespace hulls
