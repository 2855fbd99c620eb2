#include <doctest.h>

#include "povcal/sampling.hpp"
#include "support/oracles.hpp"

using namespace povcal;
using oracle::diag;

namespace {

Eigen::MatrixXd m2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

const MarkovKernel nu83() { return MarkovKernel(m2(0.8, 0.2, 0.3, 0.7)); }

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("construction") {
  CHECK_THROWS_AS(MarkovKernel(m2(0.8, 0.3, 0.3, 0.7)), Error);
  CHECK_THROWS_AS(MarkovKernel(m2(1.1, -0.1, 0.3, 0.7)), Error);
  const MarkovKernel noisy(m2(0.8 + 1e-13, 0.2, 0.3, 0.7 - 1e-13));
  CHECK(std::abs(noisy.matrix().row(0).sum() - 1.0) < 1e-15);
  CHECK(MarkovKernel::trivial(3).matrix() == Eigen::MatrixXd::Ones(3, 1));
}

TEST_CASE("compose") {
  const MarkovKernel nu = nu83();
  CHECK(compose(nu, MarkovKernel::identity(2)).matrix() == nu.matrix());
  const MarkovKernel swap(m2(0, 1, 1, 0));
  CHECK(compose(swap, swap).matrix() == Eigen::MatrixXd::Identity(2, 2));
  const Eigen::MatrixXd got = compose(nu, swap).matrix();
  CHECK((got - m2(0.2, 0.8, 0.7, 0.3)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(compose(nu, MarkovKernel::identity(3)), Error);
}

TEST_CASE("compose is associative") {
  Rng rng(53);
  for (int t = 0; t < 100; ++t) {
    const MarkovKernel a = random_kernel(rng, 3, 4);
    const MarkovKernel b = random_kernel(rng, 4, 2);
    const MarkovKernel c = random_kernel(rng, 2, 5);
    const Eigen::MatrixXd lhs = compose(compose(a, b), c).matrix();
    const Eigen::MatrixXd rhs = compose(a, compose(b, c)).matrix();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("deterministic kernels") {
  const std::vector<double> labels{1.0, 2.0};
  CHECK(deterministic_kernel(labels, labels, {{1, 1}, {2, 2}}).matrix() == Eigen::MatrixXd::Identity(2, 2));
  const std::vector<double> one{0.0};
  CHECK(deterministic_kernel(labels, one, {{1, 0}, {2, 0}}).matrix() == Eigen::MatrixXd::Ones(2, 1));
  CHECK(deterministic_kernel(labels, labels, {{1, 2}, {2, 1}}).matrix() == m2(0, 1, 1, 0));
  CHECK_THROWS_AS(deterministic_kernel(labels, labels, {{1, 2}}), Error);
}

TEST_CASE("smear") {
  const Observable pvm = make_observable({Effect::hilbert(diag({1, 0})), Effect::hilbert(diag({0, 1}))});
  CHECK(atom_distance(smear(pvm, MarkovKernel::identity(2)), pvm) == 0.0);
  const Observable triv = smear(pvm, MarkovKernel::trivial(2));
  REQUIRE(triv.size() == 1);
  CHECK(approx_equal(triv.atom(0), Effect::one(Backend::hilbert, 2)));
  const Observable eta = smear(pvm, nu83());
  CHECK(oracle::sup(eta.atom(0).matrix() - diag({0.8, 0.3})) < 1e-15);
  CHECK(oracle::sup(eta.atom(1).matrix() - diag({0.2, 0.7})) < 1e-15);
  CHECK_THROWS_AS(smear(pvm, MarkovKernel::identity(3)), Error);
}

TEST_CASE("smearing commutes with distributions") {
  Rng rng(59);
  for (int t = 0; t < 100; ++t) {
    const Index d = 2 + t % 3;
    const Observable xi = random_povm(rng, d, 3, 2);
    const MarkovKernel nu = random_kernel(rng, 3, 4);
    const Observable eta = smear(xi, nu);
    // Atoms by an explicit weighted sum.
    std::vector<CMatrix> atoms;
    for (const auto& a : xi.atoms()) atoms.push_back(a.matrix());
    for (Index j = 0; j < 4; ++j) {
      std::vector<double> w;
      for (Index i = 0; i < 3; ++i) w.push_back(nu(i, j));
      CHECK(oracle::sup(eta.atom(static_cast<std::size_t>(j)).matrix() - oracle::weighted(atoms, w)) <= 1e-14);
    }
    const State m = random_density(rng, d);
    const Eigen::VectorXd lhs = distribution(eta, m);
    const Eigen::VectorXd rhs = apply_to_measure(nu, distribution(xi, m));
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10);
    // smear(smear(xi, a), b) == smear(xi, a b)
    const MarkovKernel nu2 = random_kernel(rng, 4, 2);
    CHECK(atom_distance(smear(eta, nu2), smear(xi, compose(nu, nu2))) <= tolerances().eq);
  }
}

TEST_CASE("apply_to_measure") {
  const MarkovKernel nu = nu83();
  CHECK(apply_to_measure(nu, Eigen::Vector2d(0, 1)) == Eigen::Vector2d(0.3, 0.7));
  const Eigen::VectorXd fixed = apply_to_measure(nu, Eigen::Vector2d(0.6, 0.4));
  CHECK(fixed(0) == doctest::Approx(0.6));
  CHECK(fixed(1) == doctest::Approx(0.4));
  const Eigen::VectorXd u = apply_to_measure(MarkovKernel(m2(0, 1, 1, 0)), Eigen::Vector2d(0.5, 0.5));
  CHECK(u == Eigen::Vector2d(0.5, 0.5));
  CHECK_THROWS_AS(apply_to_measure(nu, Eigen::Vector3d(0.2, 0.3, 0.5)), Error);
  const WeakMarkovKernel weak(m2(0.5, 0.5, 7.0, -3.0), {true, false});
  CHECK(apply_to_measure(weak, Eigen::Vector2d(1, 0)) == Eigen::Vector2d(0.5, 0.5));
  try {
    apply_to_measure(weak, Eigen::Vector2d(0.5, 0.5));
    FAIL("expected MaskViolation");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MaskViolation);
  }
  CHECK(weak.regularized().matrix() == m2(0.5, 0.5, 1.0, 0.0));
}

TEST_CASE("absolute continuity is preserved") {
  Rng rng(61);
  for (int t = 0; t < 100; ++t) {
    const MarkovKernel nu = random_kernel(rng, 4, 3);
    Eigen::VectorXd p = random_probability(rng, 4);
    Eigen::VectorXd q = random_probability(rng, 4);
    p(t % 4) = 0;
    q(t % 4) = 0;
    p /= p.sum();
    q /= q.sum();
    const Eigen::VectorXd np = apply_to_measure(nu, p);
    const Eigen::VectorXd nq = apply_to_measure(nu, q);
    for (Index j = 0; j < 3; ++j)
      if (np(j) == 0.0) CHECK(nq(j) == 0.0);
  }
}

TEST_CASE("reverse kernel") {
  Rng rng(67);
  SUBCASE("permutation") {
    const MarkovKernel perm = random_permutation(rng, 4);
    const WeakMarkovKernel rev = reverse_kernel(perm, random_probability(rng, 4));
    CHECK((rev.matrix() - perm.matrix().transpose()).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("merge with uniform prior") {
    const WeakMarkovKernel rev = reverse_kernel(MarkovKernel(m2(1, 0, 1, 0)), Eigen::Vector2d(0.5, 0.5));
    CHECK(rev.support_mask() == std::vector<bool>{true, false});
    CHECK(rev.matrix().row(0) == Eigen::RowVector2d(0.5, 0.5));
  }
  SUBCASE("point mass prior") {
    const WeakMarkovKernel rev = reverse_kernel(nu83(), Eigen::Vector2d(1, 0));
    for (Index j = 0; j < 2; ++j)
      if (rev.in_support(j)) CHECK(rev.matrix().row(j) == Eigen::RowVector2d(1, 0));
  }
  SUBCASE("recovery identity") {
    for (int t = 0; t < 100; ++t) {
      const MarkovKernel nu = random_kernel(rng, 3, 4);
      Eigen::VectorXd p = random_probability(rng, 3);
      if (t % 3 == 0) {
        p(0) = 0;
        p /= p.sum();
      }
      const WeakMarkovKernel rev = reverse_kernel(nu, p);
      const Eigen::VectorXd back = apply_to_measure(rev, apply_to_measure(nu, p));
      CHECK((back - p).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("product measure") {
  const MarkovKernel nu = nu83();
  const ProductMeasure delta = product_measure(Eigen::Vector2d(0, 1), nu);
  CHECK(delta.joint == m2(0, 0, 0.3, 0.7));
  const ProductMeasure diagonal = product_measure(Eigen::Vector3d::Constant(1.0 / 3), MarkovKernel::identity(3));
  CHECK((diagonal.joint - Eigen::MatrixXd::Identity(3, 3) / 3.0).cwiseAbs().maxCoeff() < 1e-15);
  const ProductMeasure half = product_measure(Eigen::Vector2d(0.5, 0.5), nu);
  CHECK((half.joint - m2(0.4, 0.1, 0.15, 0.35)).cwiseAbs().maxCoeff() < 1e-15);
  Rng rng(71);
  for (int t = 0; t < 50; ++t) {
    const MarkovKernel k = random_kernel(rng, 4, 3);
    const Eigen::VectorXd p = random_probability(rng, 4);
    const ProductMeasure pm = product_measure(p, k);
    CHECK((pm.source_marginal() - p).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((pm.target_marginal() - apply_to_measure(k, p)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

}
