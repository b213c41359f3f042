#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

// Convex compacts in R^d represented through their support functions sampled
// on a fixed direction grid. For convex bodies the Hausdorff distance equals
// the sup over unit directions of the support gap; on a finite grid the max
// is a lower approximation of that sup (exact in d=1, and controlled in d=2:
// for bodies inside a ball of radius R the grid value under-estimates the
// true distance by at most R*(1-cos(pi/M))).

namespace hulls {

inline constexpr double kUnitNormTol = 1e-12;
inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// A unit vector in R^d.
struct Direction {
  std::vector<double> coords;

  explicit Direction(std::vector<double> c) : coords(std::move(c)) {
    if (coords.empty()) throw std::invalid_argument("Direction: empty coordinates");
    double n2 = 0.0;
    for (double v : coords) n2 += v * v;
    if (std::abs(std::sqrt(n2) - 1.0) > kUnitNormTol) {
      throw std::invalid_argument("Direction: norm must be 1 within 1e-12");
    }
  }
  int dim() const { return static_cast<int>(coords.size()); }
};

enum class GridKind { AxisPair1d, Equiangular2d, FibonacciSphere };

inline const char* to_string(GridKind k) {
  switch (k) {
    case GridKind::AxisPair1d: return "axis-pair-1d";
    case GridKind::Equiangular2d: return "equiangular-2d";
    case GridKind::FibonacciSphere: return "fibonacci-sphere";
  }
  return "?";
}

// Deterministic direction grid: {+1,-1} in d=1, M equiangular unit vectors in
// d=2 (direction i at angle 2*pi*i/M), and a Fibonacci-sphere lattice in d=3.
class DirectionGrid {
 public:
  DirectionGrid(int d, int M) : d_(d) {
    if (d < 1) throw std::invalid_argument("DirectionGrid: d must be >= 1");
    if (M < 2) throw std::invalid_argument("DirectionGrid: M must be >= 2");
    if (d > 3) throw std::invalid_argument("DirectionGrid: grids exist for d <= 3");
    if (d == 1) {
      kind_ = GridKind::AxisPair1d;
      flat_ = {+1.0, -1.0};
    } else if (d == 2) {
      kind_ = GridKind::Equiangular2d;
      flat_.resize(2 * static_cast<std::size_t>(M));
      for (int i = 0; i < M; ++i) {
        double c, s;
        if ((4LL * i) % M == 0) {
          // axis directions come out exact
          switch ((4LL * i / M) % 4) {
            case 0: c = 1; s = 0; break;
            case 1: c = 0; s = 1; break;
            case 2: c = -1; s = 0; break;
            default: c = 0; s = -1; break;
          }
        } else {
          const double ang = 2.0 * std::numbers::pi * i / M;
          c = std::cos(ang);
          s = std::sin(ang);
        }
        flat_[2 * i] = c;
        flat_[2 * i + 1] = s;
      }
    } else {
      kind_ = GridKind::FibonacciSphere;
      flat_.resize(3 * static_cast<std::size_t>(M));
      const double ga = std::numbers::pi * (3.0 - std::sqrt(5.0));  // golden angle
      for (int i = 0; i < M; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / M;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = ga * i;
        double p[3] = {r * std::cos(phi), r * std::sin(phi), z};
        const double nrm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        flat_[3 * i] = p[0] / nrm;
        flat_[3 * i + 1] = p[1] / nrm;
        flat_[3 * i + 2] = p[2] / nrm;
      }
    }
    planes_.resize(d_);
    const std::size_t m = size();
    for (int j = 0; j < d_; ++j) {
      planes_[j].resize(m);
      for (std::size_t i = 0; i < m; ++i) planes_[j][i] = flat_[i * d_ + j];
    }
  }

  int dim() const { return d_; }
  std::size_t size() const { return flat_.size() / d_; }
  GridKind kind() const { return kind_; }

  std::span<const double> coords(std::size_t i) const {
    return {flat_.data() + i * d_, static_cast<std::size_t>(d_)};
  }
  Direction direction(std::size_t i) const {
    auto c = coords(i);
    return Direction(std::vector<double>(c.begin(), c.end()));
  }
  // coordinate j of every direction, contiguous (used by the streaming tracker)
  std::span<const double> plane(int j) const { return planes_[j]; }

  double dot_with(std::size_t i, std::span<const double> x) const {
    return hulls::dot(coords(i), x);
  }

  // Worst-case under-estimation of the support sup for a body inside radius R.
  double approximation_bound(double R = 1.0) const {
    if (d_ == 1) return 0.0;
    return R * (1.0 - std::cos(std::numbers::pi / static_cast<double>(size())));
  }

 private:
  int d_;
  GridKind kind_;
  std::vector<double> flat_;  // M x d, row-major
  std::vector<std::vector<double>> planes_;
};

using GridPtr = std::shared_ptr<const DirectionGrid>;

// d=1 forces M=2. Grids are immutable and shared.
inline GridPtr make_direction_grid(int d, int M) {
  return std::make_shared<const DirectionGrid>(d, M);
}

inline bool same_grid(const DirectionGrid& a, const DirectionGrid& b) {
  return &a == &b ||
         (a.kind() == b.kind() && a.dim() == b.dim() && a.size() == b.size());
}

// Support function of a convex compact sampled on a grid.
struct SupportProfile {
  GridPtr grid;
  std::vector<double> values;
};

// values[i] = max over points of <x, theta_i>
inline SupportProfile profile_of_points(std::span<const std::vector<double>> points,
                                        const GridPtr& grid) {
  if (points.empty()) throw std::domain_error("profile_of_points: empty point list");
  const int d = grid->dim();
  for (const auto& p : points) {
    if (static_cast<int>(p.size()) != d) {
      throw std::invalid_argument("profile_of_points: point dimension mismatch");
    }
  }
  SupportProfile prof{grid, std::vector<double>(grid->size(),
                                               -std::numeric_limits<double>::infinity())};
  for (const auto& p : points) {
    for (std::size_t i = 0; i < grid->size(); ++i) {
      prof.values[i] = std::max(prof.values[i], grid->dot_with(i, p));
    }
  }
  return prof;
}

// Concentration ellipsoid of a centered Gaussian law with covariance sigma:
// the image of the unit ball under sigma^{1/2}, support sqrt(theta' sigma theta).
class Ellipsoid {
 public:
  explicit Ellipsoid(Eigen::MatrixXd sigma) {
    if (sigma.rows() < 1 || sigma.rows() != sigma.cols()) {
      throw std::invalid_argument("Ellipsoid: sigma must be square and nonempty");
    }
    for (Eigen::Index i = 0; i < sigma.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < sigma.cols(); ++j) {
        if (std::abs(sigma(i, j) - sigma(j, i)) > kSymmetryTol) {
          throw std::invalid_argument("Ellipsoid: sigma not symmetric within 1e-12");
        }
      }
    }
    Eigen::MatrixXd sym = 0.5 * (sigma + sigma.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("Ellipsoid: eigendecomposition failed");
    }
    Eigen::VectorXd lam = es.eigenvalues();
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      if (lam(i) < -kPsdTol) {
        throw std::domain_error("Ellipsoid: sigma has eigenvalue below -1e-10");
      }
      lam(i) = std::max(lam(i), 0.0);  // rank-deficient sigma is accepted
    }
    sigma_ = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
    sqrt_ = es.eigenvectors() * lam.cwiseSqrt().asDiagonal() *
            es.eigenvectors().transpose();
  }

  static Ellipsoid unit(int d) {
    return Ellipsoid(Eigen::MatrixXd::Identity(d, d));
  }

  int dim() const { return static_cast<int>(sigma_.rows()); }
  const Eigen::MatrixXd& sigma() const { return sigma_; }
  // A with A*A = sigma (symmetric square root), usable to sample N(0, sigma)
  const Eigen::MatrixXd& sqrt_factor() const { return sqrt_; }

  double support(std::span<const double> theta) const {
    if (static_cast<int>(theta.size()) != dim()) {
      throw std::invalid_argument("Ellipsoid: direction dimension mismatch");
    }
    double q = 0.0;
    for (int i = 0; i < dim(); ++i) {
      double row = 0.0;
      for (int j = 0; j < dim(); ++j) row += sigma_(i, j) * theta[j];
      q += theta[i] * row;
    }
    return std::sqrt(std::max(q, 0.0));
  }

 private:
  Eigen::MatrixXd sigma_;
  Eigen::MatrixXd sqrt_;
};

inline double ellipsoid_support(const Ellipsoid& e, const Direction& theta) {
  return e.support(theta.coords);
}

// Convex polytope given by its vertices; support = max over vertices.
struct Polytope {
  std::vector<std::vector<double>> vertices;

  explicit Polytope(std::vector<std::vector<double>> v) : vertices(std::move(v)) {
    if (vertices.empty()) throw std::invalid_argument("Polytope: no vertices");
    const std::size_t d = vertices.front().size();
    if (d == 0) throw std::invalid_argument("Polytope: zero-dimensional vertex");
    for (const auto& x : vertices) {
      if (x.size() != d) throw std::invalid_argument("Polytope: mixed dimensions");
    }
  }

  // conv{+a_k, -a_k}
  static Polytope central_symmetric(const std::vector<std::vector<double>>& a) {
    std::vector<std::vector<double>> v;
    v.reserve(2 * a.size());
    for (const auto& ak : a) {
      v.push_back(ak);
      std::vector<double> neg(ak.size());
      for (std::size_t i = 0; i < ak.size(); ++i) neg[i] = -ak[i];
      v.push_back(std::move(neg));
    }
    return Polytope(std::move(v));
  }

  int dim() const { return static_cast<int>(vertices.front().size()); }

  double support(std::span<const double> theta) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : vertices) best = std::max(best, hulls::dot(v, theta));
    return best;
  }
};

struct Interval {
  double lo;
  double hi;
  Interval(double l, double h) : lo(l), hi(h) {
    if (!(lo <= hi)) throw std::invalid_argument("Interval: lo must be <= hi");
  }
};

using Target = std::variant<Interval, Ellipsoid, Polytope>;

inline int target_dim(const Target& t) {
  if (std::holds_alternative<Interval>(t)) return 1;
  if (const auto* e = std::get_if<Ellipsoid>(&t)) return e->dim();
  return std::get<Polytope>(t).dim();
}

// Support profile of a target on a grid. An Interval is a 1-D body:
// support along +1 is hi, along -1 is -lo.
inline SupportProfile target_profile(const Target& t, const GridPtr& grid) {
  if (target_dim(t) != grid->dim()) {
    throw std::invalid_argument("target_profile: dimension mismatch");
  }
  SupportProfile prof{grid, std::vector<double>(grid->size(), 0.0)};
  for (std::size_t i = 0; i < grid->size(); ++i) {
    auto th = grid->coords(i);
    if (const auto* iv = std::get_if<Interval>(&t)) {
      prof.values[i] = th[0] > 0 ? iv->hi : -iv->lo;
    } else if (const auto* e = std::get_if<Ellipsoid>(&t)) {
      prof.values[i] = e->support(th);
    } else {
      prof.values[i] = std::get<Polytope>(t).support(th);
    }
  }
  return prof;
}

// Grid Hausdorff distance: max_i |p_i - q_i| on a shared grid. Exact for d=1,
// a lower approximation otherwise (see header note).
inline double hausdorff_profiles(const SupportProfile& p, const SupportProfile& q) {
  if (!p.grid || !q.grid || !same_grid(*p.grid, *q.grid)) {
    throw std::invalid_argument("hausdorff_profiles: profiles on different grids");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    m = std::max(m, std::abs(p.values[i] - q.values[i]));
  }
  return m;
}

inline double hausdorff_intervals(const Interval& a, const Interval& b) {
  return std::max(std::abs(a.lo - b.lo), std::abs(a.hi - b.hi));
}

// ---------------------------------------------------------------------------
// Exact incremental 2-D convex hull.

struct Point2 {
  double x;
  double y;
  friend bool operator==(const Point2& a, const Point2& b) {
    return a.x == b.x && a.y == b.y;
  }
};

inline double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew monotone chain. Returns vertices in CCW order starting at the
// lexicographically smallest point; collinear middles are dropped.
inline std::vector<Point2> convex_hull_2d(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n <= 2) return pts;
  std::vector<Point2> h(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower chain
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {  // upper chain
    while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

// Streaming exact hull: inserted points accumulate in a small pending buffer
// that is folded into the hull by a monotone-chain rebuild. Memory is
// O(hull vertices + buffer), independent of the number of inserts.
class Hull2d {
 public:
  void insert(double x, double y) { insert(Point2{x, y}); }
  void insert(Point2 p) {
    pending_.push_back(p);
    if (pending_.size() >= kPendingCap) flush();
  }

  // Folds any pending points first; the logical hull is unchanged by that.
  const std::vector<Point2>& vertices() const {
    flush();
    return hull_;
  }

  std::size_t stored_points() const { return hull_.size() + pending_.size(); }

 private:
  void flush() const {
    if (pending_.empty()) return;
    hull_.insert(hull_.end(), pending_.begin(), pending_.end());
    pending_.clear();
    hull_ = convex_hull_2d(std::move(hull_));
  }

  static constexpr std::size_t kPendingCap = 1024;
  mutable std::vector<Point2> hull_;
  mutable std::vector<Point2> pending_;
};

// Max pairwise vertex distance. Hull vertex counts here are tiny, so the
// quadratic scan is fine.
inline double diameter2d(std::span<const Point2> vertices) {
  if (vertices.empty()) throw std::invalid_argument("diameter2d: no vertices");
  double best = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      const double dx = vertices[i].x - vertices[j].x;
      const double dy = vertices[i].y - vertices[j].y;
      best = std::max(best, dx * dx + dy * dy);
    }
  }
  return std::sqrt(best);
}

// Shoelace area, nonnegative; zero for fewer than 3 vertices.
inline double area2d(std::span<const Point2> vertices) {
  if (vertices.empty()) throw std::invalid_argument("area2d: no vertices");
  if (vertices.size() < 3) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Point2& a = vertices[i];
    const Point2& b = vertices[(i + 1) % vertices.size()];
    s += a.x * b.y - b.x * a.y;
  }
  return std::abs(s) * 0.5;
}

}  // namespace hulls
