#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "hyperpursuit/errors.hpp"

namespace hyperpursuit {

// Uniform grid of n nodes over [t0, tf].
class TimeGrid {
 public:
  TimeGrid(double t0, double tf, std::size_t n) : t0_(t0), tf_(tf), n_(n) {
    if (!(tf > t0) || !std::isfinite(t0) || !std::isfinite(tf)) {
      throw ContractViolation("TimeGrid requires finite tf > t0");
    }
    if (n < 2) {
      throw ContractViolation("TimeGrid requires at least 2 nodes");
    }
  }

  // Grid whose step is the largest value <= dt that divides [t0, tf] evenly.
  static TimeGrid with_max_step(double t0, double tf, double dt) {
    if (!(dt > 0.0)) {
      throw ContractViolation("TimeGrid step must be positive");
    }
    const auto intervals = static_cast<std::size_t>(std::ceil((tf - t0) / dt - 1e-9));
    return TimeGrid(t0, tf, (intervals < 1 ? 1 : intervals) + 1);
  }

  double t0() const noexcept { return t0_; }
  double tf() const noexcept { return tf_; }
  std::size_t size() const noexcept { return n_; }
  std::size_t intervals() const noexcept { return n_ - 1; }
  double dt() const noexcept { return (tf_ - t0_) / static_cast<double>(n_ - 1); }

  // Node k is computed from the endpoints so the last node is exactly tf.
  double time(std::size_t k) const noexcept {
    if (k + 1 == n_) return tf_;
    return t0_ + (tf_ - t0_) * (static_cast<double>(k) / static_cast<double>(n_ - 1));
  }

  bool contains(double t, double slack = 1e-9) const noexcept {
    const double tol = slack * (tf_ - t0_);
    return t >= t0_ - tol && t <= tf_ + tol;
  }

  // Interval index k and local fraction s in [0, 1] with t = time(k) + s*dt.
  struct Locator {
    std::size_t interval;
    double fraction;
  };

  Locator locate(double t) const {
    if (!contains(t)) {
      throw RangeError("time " + std::to_string(t) + " outside horizon [" +
                       std::to_string(t0_) + ", " + std::to_string(tf_) + "]");
    }
    const double u = (t - t0_) / dt();
    if (u <= 0.0) return {0, 0.0};
    const auto last = static_cast<double>(n_ - 1);
    if (u >= last) return {n_ - 2, 1.0};
    auto k = static_cast<std::size_t>(std::floor(u));
    if (k > n_ - 2) k = n_ - 2;
    return {k, u - static_cast<double>(k)};
  }

  bool operator==(const TimeGrid&) const = default;

 private:
  double t0_;
  double tf_;
  std::size_t n_;
};

}  // namespace hyperpursuit
