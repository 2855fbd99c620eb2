#include "povcal/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

namespace povcal {

double ExtendedReal::value() const noexcept {
  return infinite_ ? std::numeric_limits<double>::infinity() : value_;
}

std::string ExtendedReal::to_string() const {
  if (infinite_) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

void validate_generator(const ConvexGenerator& gen) {
  if (!gen.f) throw Error(Errc::InvalidGenerator, gen.name + ": no function");
  const double at_one = gen.f(1.0);
  if (!(std::abs(at_one - gen.f_at_1) <= 1e-12))
    throw Error(Errc::InvalidGenerator, gen.name + ": f(1) = " + std::to_string(at_one) +
                                            " but f_at_1 = " + std::to_string(gen.f_at_1));
  std::mt19937_64 rng(0x5eed'c0de);
  std::uniform_real_distribution<double> unif(1e-6, 50.0);
  for (int k = 0; k < 1000; ++k) {
    const double x = unif(rng);
    const double y = unif(rng);
    const double fx = gen.f(x);
    const double fy = gen.f(y);
    const double fm = gen.f(0.5 * (x + y));
    const double slack = 1e-12 * (1.0 + std::abs(fx) + std::abs(fy));
    if (!(fm <= 0.5 * (fx + fy) + slack))
      throw Error(Errc::InvalidGenerator, gen.name + ": midpoint convexity fails between " +
                                              std::to_string(x) + " and " + std::to_string(y));
  }
}

ConvexGenerator builtin(std::string_view name) {
  ConvexGenerator gen;
  if (name == "tv") {
    gen = {"tv", [](double u) { return std::abs(u - 1.0); }, 1.0, 1.0, false, 0.0};
  } else if (name == "kl") {
    gen = {"kl", [](double u) { return -std::log(u); }, ExtendedReal::infinity(), 0.0, true, 0.0};
  } else if (name == "hellinger") {
    gen = {"hellinger", [](double u) { return 1.0 - std::sqrt(u); }, 1.0, 0.0, true, 0.0};
  } else {
    throw Error(Errc::UnknownGenerator, "unknown generator '" + std::string(name) + "' (tv|kl|hellinger)");
  }
  return gen;
}

ExtendedReal f_divergence(const ConvexGenerator& gen, const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size())
    throw Error(Errc::DimMismatch,
                "f_divergence: sizes " + std::to_string(p.size()) + " and " + std::to_string(q.size()));
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(p.size()));
  ExtendedReal boundary = 0.0;
  double singular_mass = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    if (q(i) > 0.0) {
      if (p(i) > 0.0)
        terms.push_back(q(i) * gen.f(p(i) / q(i)));
      else
        boundary = boundary + q(i) * gen.f_at_0;
    } else if (p(i) > 0.0) {
      singular_mass += p(i);
    }
  }
  // Summing in sorted order makes the result independent of outcome order.
  std::sort(terms.begin(), terms.end());
  double acc = 0.0;
  for (double t : terms) acc += t;
  return ExtendedReal(acc) + boundary + singular_mass * gen.f_inf;
}

double hellinger(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size())
    throw Error(Errc::DimMismatch, "hellinger: sizes " + std::to_string(p.size()) + " and " + std::to_string(q.size()));
  return 1.0 - (p.array() * q.array()).sqrt().sum();
}

ExtendedReal monotonicity_gap(const ConvexGenerator& gen, const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                              const MarkovKernel& nu) {
  const ExtendedReal before = f_divergence(gen, p, q);
  const ExtendedReal after = f_divergence(gen, apply_to_measure(nu, p), apply_to_measure(nu, q));
  if (before.is_infinite()) return ExtendedReal::infinity();
  if (after.is_infinite())
    throw Error(Errc::MonotonicityViolation,
                gen.name + ": image divergence is infinite while the source divergence is finite");
  return before.value() - after.value();
}

}  // namespace povcal
