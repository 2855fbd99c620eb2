#pragma once

// f-divergences between finite probability vectors, including the singular
// part: D_f(P,Q) = sum_{q_i>0} q_i f(p_i/q_i) + f_inf * sum_{q_i=0} p_i.

#include <functional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "povcal/kernels.hpp"

namespace povcal {

/// A finite real or +infinity. 0 * inf = 0 (measure-theoretic convention).
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double v) : value_(v) {}  // NOLINT(google-explicit-constructor)

  static constexpr ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    return r;
  }

  [[nodiscard]] constexpr bool is_infinite() const noexcept { return infinite_; }
  [[nodiscard]] constexpr bool is_finite() const noexcept { return !infinite_; }
  /// The finite value; +inf as a double for infinite values.
  [[nodiscard]] double value() const noexcept;

  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return {a.value_ + b.value_};
  }
  /// Scaling by a nonnegative weight.
  friend ExtendedReal operator*(double w, ExtendedReal a) {
    if (w == 0.0) return {0.0};
    if (a.infinite_) return infinity();
    return {w * a.value_};
  }
  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

  [[nodiscard]] std::string to_string() const;

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

/// Convex generator f on (0, inf) together with its boundary behavior.
struct ConvexGenerator {
  std::string name;
  std::function<double(double)> f;
  ExtendedReal f_at_0;  ///< lim_{u -> 0+} f(u)
  ExtendedReal f_inf;   ///< lim_{u -> inf} f(u) / u
  bool strictly_convex = false;
  double f_at_1 = 0.0;
};

/// Checks midpoint convexity on 1000 seeded points of (0, 50] and
/// |f(1) - f_at_1| <= 1e-12. Throws InvalidGenerator.
void validate_generator(const ConvexGenerator& gen);

/// "tv", "kl" or "hellinger". Throws UnknownGenerator.
ConvexGenerator builtin(std::string_view name);

ExtendedReal f_divergence(const ConvexGenerator& gen, const Eigen::VectorXd& p, const Eigen::VectorXd& q);

/// Hellinger distance 1 - sum_i sqrt(p_i q_i).
double hellinger(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

/// D_f(p,q) - D_f(nu p, nu q). +inf when D_f(p,q) is infinite; throws
/// MonotonicityViolation when only the image divergence is infinite.
ExtendedReal monotonicity_gap(const ConvexGenerator& gen, const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                              const MarkovKernel& nu);

}  // namespace povcal
