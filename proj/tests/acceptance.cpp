// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "povcal/sampling.hpp"
#include "povcal/sufficiency.hpp"

using namespace povcal;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures; `detail` holds a short summary or the first failure.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_++ == 0) first_ = what;
  }
  Outcome outcome(const std::string& summary) const {
    std::ostringstream os;
    os << summary << "; " << checks_ << " checks";
    if (failures_ > 0) os << ", " << failures_ << " failed, first: " << first_;
    return {failures_ == 0, os.str()};
  }

 private:
  long checks_ = 0;
  long failures_ = 0;
  std::string first_;
};

std::string str(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

MarkovKernel split_kernel(Rng& rng, Index k, Index block) {
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(k, k * block);
  for (Index i = 0; i < k; ++i) rows.block(i, i * block, 1, block) = random_probability(rng, block).transpose();
  return MarkovKernel(rows);
}

// Split-then-label: split every outcome into a private block, then permute targets.
MarkovKernel split_then_label(Rng& rng, Index k, Index block) {
  return compose(split_kernel(rng, k, block), random_permutation(rng, k * block));
}

Effect unit_like(const Effect& a) { return Effect::one(a.backend(), a.dim()); }

Effect random_element(Rng& rng, Backend backend, Index n, double hi) {
  if (backend == Backend::hilbert) return random_effect(rng, n, 0.0, hi);
  std::uniform_real_distribution<double> unif(0.0, hi);
  Eigen::VectorXd f(n);
  for (Index i = 0; i < n; ++i) f(i) = unif(rng);
  return Effect::tribe(f);
}

State random_state(Rng& rng, Backend backend, Index n) {
  if (backend == Backend::hilbert) return random_density(rng, n);
  return State::probability(random_probability(rng, n));
}

Outcome ac1_effect_axioms() {
  constexpr double tol = 1e-10;
  Tally t;
  Rng rng(1001);
  std::uniform_int_distribution<int> dim(1, 4);
  std::uniform_real_distribution<double> scale(0.3, 1.0);
  long defined = 0;
  for (Backend backend : {Backend::hilbert, Backend::tribe}) {
    for (int i = 0; i < 1000; ++i) {
      const Index n = dim(rng);
      const Effect a = random_element(rng, backend, n, scale(rng));
      const Effect b = random_element(rng, backend, n, scale(rng));
      const Effect c = random_element(rng, backend, n, scale(rng));
      const std::string tag = std::string(to_string(backend)) + " pair " + std::to_string(i);

      // Commutativity.
      const auto ab = oplus(a, b);
      const auto ba = oplus(b, a);
      t.expect(ab.has_value() == ba.has_value(), tag + ": oplus defined one way only");
      if (ab && ba) t.expect(sup_distance(*ab, *ba) <= tol, tag + ": a+b != b+a");
      defined += ab.has_value();

      // Associativity.
      if (const auto bc = oplus(b, c)) {
        if (const auto a_bc = oplus(a, *bc)) {
          t.expect(ab.has_value(), tag + ": a+(b+c) defined but a+b not");
          if (ab) {
            const auto ab_c = oplus(*ab, c);
            t.expect(ab_c.has_value(), tag + ": (a+b)+c undefined");
            if (ab_c) t.expect(sup_distance(*ab_c, *a_bc) <= tol, tag + ": associativity");
          }
        }
      }

      // Orthosupplement: exists and is unique.
      const Effect ap = orthosupplement(a);
      const auto full = oplus(a, ap);
      t.expect(full && sup_distance(*full, unit_like(a)) <= tol, tag + ": a + a' != 1");
      t.expect(sup_distance(ominus(unit_like(a), a), ap) <= tol, tag + ": 1 - a != a'");
      if (const auto other = oplus(a, b); other && sup_distance(*other, unit_like(a)) <= tol)
        t.expect(sup_distance(b, ap) <= tol, tag + ": second complement");

      // Zero-one law: a (+) 1 is defined only for a = 0.
      const auto with_one = oplus(a, unit_like(a));
      const bool a_zero = sup_distance(a, Effect::zero(backend, n)) <= tolerances().psd;
      t.expect(with_one.has_value() == a_zero, tag + ": zero-one law");
      t.expect(oplus(Effect::zero(backend, n), unit_like(a)).has_value(), tag + ": 0 + 1 undefined");

      // State additivity.
      const State m = random_state(rng, backend, n);
      if (ab) t.expect(std::abs(state_eval(m, *ab) - state_eval(m, a) - state_eval(m, b)) <= tol, tag + ": additivity");
      t.expect(state_eval(m, unit_like(a)) == 1.0 || std::abs(state_eval(m, unit_like(a)) - 1.0) <= tol,
               tag + ": m(1) != 1");
    }
  }
  return t.outcome("2000 pairs, " + std::to_string(defined) + " with a+b defined");
}

Outcome ac2_monotonicity() {
  Tally t;
  Rng rng(2002);
  std::uniform_int_distribution<int> size(1, 6);
  std::bernoulli_distribution sparse(0.3);
  long finite = 0;
  double worst = 0.0;
  for (const char* name : {"tv", "kl", "hellinger"}) {
    const ConvexGenerator gen = builtin(name);
    for (int i = 0; i < 500; ++i) {
      const Index k = size(rng), l = size(rng);
      Eigen::VectorXd p = random_probability(rng, k), q = random_probability(rng, k);
      if (k > 1 && sparse(rng)) p(0) = 0, p /= p.sum();
      if (k > 1 && sparse(rng)) q(k - 1) = 0, q /= q.sum();
      const MarkovKernel nu = random_kernel(rng, k, l);
      const ExtendedReal gap = monotonicity_gap(gen, p, q, nu);
      if (gap.is_infinite()) continue;
      ++finite;
      worst = std::min(worst, gap.value());
      t.expect(gap.value() >= -1e-9, std::string(name) + " instance " + std::to_string(i) + ": gap " + str(gap.value()));
    }
  }
  return t.outcome("1500 instances, " + std::to_string(finite) + " finite, min gap " + str(worst));
}

Outcome ac3_sufficiency_vs_blackwell() {
  Tally t;
  Rng rng(3003);
  std::uniform_int_distribution<int> size(2, 5);
  long both_true = 0;
  for (int i = 0; i < 200; ++i) {
    const Index k = size(rng), l = size(rng);
    const Eigen::VectorXd p = random_probability(rng, k), q = random_probability(rng, k);
    const MarkovKernel nu = random_kernel(rng, k, l);
    const bool pw = pairwise_sufficient(nu, p, q).sufficient;
    const bool bw = blackwell_sufficient(nu, {p, q}).sufficient;
    both_true += pw && bw;
    t.expect(pw == bw, "random instance " + std::to_string(i) + ": pairwise " + std::to_string(pw) +
                           " vs blackwell " + std::to_string(bw));
  }
  double worst_gap = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Index k = size(rng);
    const MarkovKernel nu = i % 2 == 0 ? random_permutation(rng, k) : split_then_label(rng, k, 2);
    const Eigen::VectorXd p = random_probability(rng, k), q = random_probability(rng, k);
    const PairwiseSufficiency pw = pairwise_sufficient(nu, p, q);
    const BlackwellSufficiency bw = blackwell_sufficient(nu, {p, q});
    worst_gap = std::max(worst_gap, pw.gap);
    t.expect(pw.sufficient && bw.sufficient, "constructed kernel " + std::to_string(i) + " not sufficient");
    t.expect(pw.gap <= 1e-10, "constructed kernel " + std::to_string(i) + ": gap " + str(pw.gap));
  }
  return t.outcome("200 random (" + std::to_string(both_true) + " sufficient) + 50 constructed, max constructed gap " +
                   str(worst_gap));
}

Outcome ac4_pvm_mother() {
  Tally t;
  Rng rng(4004);
  std::uniform_int_distribution<int> dim(2, 4);
  std::uniform_int_distribution<int> targets(1, 5);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Index d = dim(rng);
    std::uniform_int_distribution<int> parts(1, static_cast<int>(d));
    const Observable pvm = random_pvm(rng, d, parts(rng));
    const MarkovKernel nu = random_kernel(rng, static_cast<Index>(pvm.size()), targets(rng));
    const Observable eta = smear(pvm, nu);
    const auto mother = pvm_mother(eta);
    t.expect(mother.has_value(), "instance " + std::to_string(i) + ": commuting range reported non-commuting");
    if (!mother) continue;
    t.expect(is_sharp_observable(mother->xi), "instance " + std::to_string(i) + ": mother not sharp");
    const double err = atom_distance(smear(mother->xi, mother->nu, eta.labels()), eta);
    worst = std::max(worst, err);
    t.expect(err <= 1e-8, "instance " + std::to_string(i) + ": re-smearing error " + str(err));
  }
  for (int i = 0; i < 20; ++i) {
    const Index d = dim(rng);
    // d rank-one atoms summing to I are forced to be orthogonal projections.
    const Observable povm = random_povm(rng, d, d + 1 + i % 3, 1);
    t.expect(!pvm_mother(povm).has_value(), "non-commuting POVM " + std::to_string(i) + " got a mother");
  }
  return t.outcome("100 round trips, max error " + str(worst) + "; 20 non-commuting");
}

// Rank-two atoms whose nonzero eigenvalues stay away from zero, so the
// refinement is strictly finer by a clear margin.
Observable non_clean_instance(Rng& rng, int i) {
  if (i % 5 == 0) {
    const Index d = 3 + i % 2;
    return random_pvm(rng, d, 2);
  }
  for (;;) {
    const Index d = 2 + i % 3;
    const Observable eta = random_povm(rng, d, 2 + i % 2, 2);
    bool separated = true;
    for (const auto& a : eta.atoms()) {
      const Eigen::VectorXd ev = eigenvalues_h(a.matrix());
      separated = separated && ev(ev.size() - 2) >= 0.05;
    }
    if (separated) return eta;
  }
}

Outcome ac5_clean() {
  Tally t;
  Rng rng(5005);
  for (int i = 0; i < 25; ++i) {
    const Index d = 2 + i % 3;
    const Observable eta = random_povm(rng, d, d + i % 3, 1);
    const CleanReport r = is_clean(eta, true);
    t.expect(r.clean, "rank-one instance " + std::to_string(i) + " reported not clean");
    t.expect(r.refinement_below.value_or(false) && r.eta_below.value_or(false),
             "rank-one instance " + std::to_string(i) + ": refinement not equivalent");
  }
  for (int i = 0; i < 25; ++i) {
    const Observable eta = non_clean_instance(rng, i);
    const CleanReport r = is_clean(eta, true);
    t.expect(!r.clean, "rank-two instance " + std::to_string(i) + " reported clean");
    t.expect(r.refinement_below.value_or(false), "rank-two instance " + std::to_string(i) + ": refinement not below");
    t.expect(!r.eta_below.value_or(true), "rank-two instance " + std::to_string(i) + ": eta below its refinement");
  }
  return t.outcome("25 clean + 25 non-clean, LP evidence attached");
}

Outcome ac6_two_valued() {
  Tally t;
  Rng rng(6006);
  std::uniform_int_distribution<int> dim(2, 4);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  long holds = 0;
  for (int i = 0; i < 200; ++i) {
    const Index d = dim(rng);
    const Effect b = random_effect(rng, d);
    Effect a = random_effect(rng, d);
    if (i % 2 == 0) {
      const double tt = unif(rng), ss = unif(rng);
      a = Effect::hilbert(tt * b.matrix() + ss * orthosupplement(b).matrix());
    }
    const bool fast = two_valued_leq(b, a).has_value();
    const bool lp = preorder_leq(two_valued(b), two_valued(a)).holds;
    holds += lp;
    t.expect(fast == lp, "pair " + std::to_string(i) + ": two_valued_leq " + std::to_string(fast) + " vs LP " +
                             std::to_string(lp));
    const auto half = two_valued_leq(b, Effect::hilbert(CMatrix::Identity(d, d) / 2.0));
    t.expect(half && std::abs(half->t - 0.5) <= 1e-8 && std::abs(half->s - 0.5) <= 1e-8,
             "I/2 not dominated by sample " + std::to_string(i));
  }
  for (int i = 0; i < 20; ++i) {
    const Index d = dim(rng);
    std::uniform_int_distribution<int> rank(1, static_cast<int>(d) - 1);
    t.expect(two_valued_is_minimal(random_projection(rng, d, rank(rng))), "projection " + std::to_string(i));
    t.expect(!two_valued_is_minimal(random_effect(rng, d, 0.05, 0.95)), "contraction " + std::to_string(i));
  }
  return t.outcome("200 pairs (" + std::to_string(holds) + " comparable), 20 projections, 20 contractions");
}

Outcome ac7_battery() {
  Tally t;
  Rng rng(7007);
  long equivalent = 0;
  double worst_true = 0.0, weakest_false = 1.0;
  for (int i = 0; i < 50; ++i) {
    const Index d = 2 + i % 2;
    std::uniform_int_distribution<int> outcomes(static_cast<int>(d), static_cast<int>(std::min<Index>(d * d, 4)));
    const Index k = outcomes(rng);
    const Observable xi = random_povm(rng, d, k, 1);
    MarkovKernel nu = MarkovKernel::identity(k);
    switch (i % 4) {
      case 0: nu = random_permutation(rng, k); break;
      case 1: nu = split_then_label(rng, k, 2); break;
      default: nu = random_kernel(rng, k, 2 + i % 3); break;
    }
    const Observable eta = smear(xi, nu);
    const State m0 = State::maximally_mixed(Backend::hilbert, d);
    const SufficiencyReport r = equivalence_battery(xi, eta, nu, m0, 24, 7007 + static_cast<std::uint64_t>(i));
    const std::string tag = "scenario " + std::to_string(i);
    t.expect(r.agree, tag + ": blackwell " + std::to_string(r.blackwell) + " vs equivalence " +
                          std::to_string(r.fuzzy_equivalent));
    if (r.blackwell && r.fuzzy_equivalent) {
      ++equivalent;
      worst_true = std::max(worst_true, r.hellinger_max_gap);
      t.expect(r.hellinger_max_gap <= 1e-8, tag + ": equivalent but gap " + str(r.hellinger_max_gap));
    } else if (!r.blackwell && !r.fuzzy_equivalent) {
      weakest_false = std::min(weakest_false, r.hellinger_max_gap);
      t.expect(r.hellinger_max_gap > 1e-6, tag + ": no refuting state found");
    }
  }
  return t.outcome("50 scenarios, " + std::to_string(equivalent) + " equivalent, max gap when equivalent " +
                   str(worst_true) + ", min gap otherwise " + str(weakest_false));
}

Outcome ac8_transitivity() {
  Tally t;
  Rng rng(8008);
  std::uniform_int_distribution<int> dim(2, 4);
  std::uniform_int_distribution<int> outcomes(2, 5);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Index d = dim(rng);
    const Observable xi = random_povm(rng, d, std::max<Index>(d, outcomes(rng)), 1 + i % 2);
    const Observable eta = smear(xi, random_kernel(rng, static_cast<Index>(xi.size()), outcomes(rng)));
    const Observable zeta = smear(eta, random_kernel(rng, static_cast<Index>(eta.size()), outcomes(rng)));
    const PreorderWitness w1 = preorder_leq(xi, eta);
    const PreorderWitness w2 = preorder_leq(eta, zeta);
    t.expect(w1.holds && w2.holds, "chain " + std::to_string(i) + ": link not found");
    if (!w1.holds || !w2.holds) continue;
    const double err = atom_distance(smear(xi, compose(*w1.witness, *w2.witness)), zeta);
    worst = std::max(worst, err);
    t.expect(err <= 1e-8, "chain " + std::to_string(i) + ": composed residual " + str(err));
  }
  return t.outcome("100 chains, max composed residual " + str(worst));
}

Outcome ac9_tribe_integral() {
  Tally t;
  Rng rng(9009);
  std::uniform_int_distribution<int> size(1, 8);
  for (int i = 0; i < 100; ++i) {
    const Index n = size(rng);
    const Effect f = random_tribe_effect(rng, n);
    const State p = State::probability(random_probability(rng, n));
    double sum = 0.0;
    for (Index x = 0; x < n; ++x) sum += f.values()(x) * p.weights()(x);
    t.expect(state_eval(p, f) == sum, "instance " + std::to_string(i) + ": not bitwise equal");
  }
  return t.outcome("100 tribe elements, exact equality");
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"AC1 effect-algebra axioms and state additivity", ac1_effect_axioms},
      {"AC2 f-divergence monotonicity under kernels", ac2_monotonicity},
      {"AC3 Hellinger sufficiency agrees with recovery-kernel LP", ac3_sufficiency_vs_blackwell},
      {"AC4 sharp-observable decomposition round trip", ac4_pvm_mother},
      {"AC5 clean observables and rank-one refinement", ac5_clean},
      {"AC6 two-outcome observables", ac6_two_valued},
      {"AC7 equivalence battery agreement", ac7_battery},
      {"AC8 preorder transitivity by composed witnesses", ac8_transitivity},
      {"AC9 tribe state evaluation as a finite sum", ac9_tribe_integral},
  };
  int failed = 0;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %s (%s; %.2fs)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
    failed += !o.pass;
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d/9 criteria passed in %.2fs\n", 9 - failed, total);
  return failed == 0 ? 0 : 1;
}
