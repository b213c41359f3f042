#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hulls/geometry.hpp"
#include "hulls/normalizers.hpp"

// Streaming maintenance of conv{X_1..X_n} through per-direction running
// maxima: the support function of the hull at theta is max_{k<=n} <X_k,theta>,
// so one O(M) pass per point maintains the whole hull summary in O(M) memory
// regardless of n. The hull itself is only materialized (optionally) in d=2.

namespace hulls {

struct HullSnapshot {
  std::uint64_t n = 0;
  SupportProfile profile;                         // raw_max / g(t)
  std::optional<Interval> interval;               // d=1 only, normalized
  std::optional<std::vector<Point2>> vertices;    // d=2 exact hull, normalized
};

class HullTracker {
 public:
  explicit HullTracker(GridPtr grid, bool keep_hull2d = false)
      : grid_(std::move(grid)),
        d_(grid_->dim()),
        raw_max_(grid_->size(), -std::numeric_limits<double>::infinity()) {
    if (keep_hull2d) {
      if (d_ != 2) throw std::invalid_argument("HullTracker: exact hull needs d = 2");
      hull2d_.emplace();
    }
  }

  int dim() const { return d_; }
  std::uint64_t count() const { return n_; }
  const DirectionGrid& grid() const { return *grid_; }
  GridPtr grid_ptr() const { return grid_; }
  std::span<const double> raw_max() const { return raw_max_; }

  void update(std::span<const double> x) {
    if (static_cast<int>(x.size()) != d_) {
      throw std::invalid_argument("HullTracker::update: dimension mismatch");
    }
    if (d_ == 1) {
      update1(x[0]);
      return;
    }
    if (d_ == 2) {
      const double x0 = x[0], x1 = x[1];
      const double* gx = grid_->plane(0).data();
      const double* gy = grid_->plane(1).data();
      double* rm = raw_max_.data();
      const std::size_t m = raw_max_.size();
      for (std::size_t i = 0; i < m; ++i) {
        const double v = x0 * gx[i] + x1 * gy[i];
        if (v > rm[i]) rm[i] = v;
      }
      if (hull2d_) hull2d_->insert(x0, x1);
    } else {
      for (std::size_t i = 0; i < raw_max_.size(); ++i) {
        const double v = grid_->dot_with(i, x);
        if (v > raw_max_[i]) raw_max_[i] = v;
      }
    }
    ++n_;
  }

  // d=1 fast path; keeps raw_max over {+1,-1} equal to (max, -min).
  void update1(double x) {
    if (x > max1_) {
      max1_ = x;
      raw_max_[0] = x;
    }
    if (x < min1_) {
      min1_ = x;
      raw_max_[1] = -x;
    }
    ++n_;
  }

  Interval raw_interval() const {
    require_points();
    if (d_ != 1) throw std::invalid_argument("raw_interval: d must be 1");
    return Interval(min1_, max1_);
  }

  // Exact hull vertices (d=2 with retention enabled).
  const std::vector<Point2>& hull_vertices() const {
    if (!hull2d_) throw std::logic_error("HullTracker: exact hull not enabled");
    return hull2d_->vertices();
  }
  bool hull_enabled() const { return hull2d_.has_value(); }

  HullSnapshot snapshot(const Normalizer& g) const { return snapshot(g, static_cast<double>(n_)); }

  HullSnapshot snapshot(const Normalizer& g, double t) const {
    require_points();
    const double gv = g(t);  // out-of-domain t propagates as std::domain_error
    HullSnapshot snap;
    snap.n = n_;
    snap.profile.grid = grid_;
    snap.profile.values.resize(raw_max_.size());
    for (std::size_t i = 0; i < raw_max_.size(); ++i) {
      snap.profile.values[i] = raw_max_[i] / gv;
    }
    if (d_ == 1) snap.interval = Interval(min1_ / gv, max1_ / gv);
    if (hull2d_) {
      const auto& verts = hull2d_->vertices();
      std::vector<Point2> scaled(verts.size());
      for (std::size_t i = 0; i < verts.size(); ++i) {
        scaled[i] = Point2{verts[i].x / gv, verts[i].y / gv};
      }
      snap.vertices = std::move(scaled);
    }
    return snap;
  }

 private:
  void require_points() const {
    if (n_ == 0) throw std::logic_error("HullTracker: no points consumed yet");
  }

  GridPtr grid_;
  int d_;
  std::vector<double> raw_max_;
  double min1_ = std::numeric_limits<double>::infinity();
  double max1_ = -std::numeric_limits<double>::infinity();
  std::uint64_t n_ = 0;
  std::optional<Hull2d> hull2d_;  // opt-in: costs a per-insert buffer append
};

inline double distance_to_target(const HullSnapshot& snap, const Target& target) {
  if (target_dim(target) != snap.profile.grid->dim()) {
    throw std::invalid_argument("distance_to_target: dimension mismatch");
  }
  if (snap.interval && std::holds_alternative<Interval>(target)) {
    return hausdorff_intervals(*snap.interval, std::get<Interval>(target));
  }
  return hausdorff_profiles(snap.profile, target_profile(target, snap.profile.grid));
}

}  // namespace hulls
