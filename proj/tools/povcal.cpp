// povcal: batch front-end over scenario files.
//
// Exit codes: 0 true / feasible / valid, 1 false / infeasible, 2 input error,
// 3 numerical failure (or disagreeing battery items).

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "povcal/scenario.hpp"

using nlohmann::json;
using namespace povcal;

namespace {

constexpr int kTrue = 0;
constexpr int kFalse = 1;
constexpr int kInputError = 2;
constexpr int kNumerical = 3;

constexpr const char* kKernelNote =
    "Kernel rows align with the sorted-label atom order of the source observable:\n"
    "row i is the distribution of outcome i, labels ascending.";

struct Globals {
  bool json_out = false;
  double tol = 1.0;
  std::uint64_t seed = 3405691582ULL;
};

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

std::string fmt_complex(std::complex<double> z) {
  if (z.imag() == 0.0) return fmt(z.real());
  std::ostringstream os;
  os << fmt(z.real()) << (z.imag() < 0 ? "-" : "+") << fmt(std::abs(z.imag())) << "i";
  return os.str();
}

void print_matrix(std::ostream& os, const Eigen::MatrixXd& m, const std::string& indent = "  ") {
  for (Index r = 0; r < m.rows(); ++r) {
    os << indent << "[";
    for (Index c = 0; c < m.cols(); ++c) os << (c ? ", " : "") << fmt(m(r, c));
    os << "]\n";
  }
}

void print_observable(std::ostream& os, const Observable& xi) {
  for (std::size_t i = 0; i < xi.size(); ++i) {
    os << "  label " << fmt(xi.label(i)) << ":\n";
    const Effect& a = xi.atom(i);
    if (a.backend() == Backend::tribe) {
      print_matrix(os, a.values().transpose(), "    ");
      continue;
    }
    const CMatrix& m = a.matrix();
    for (Index r = 0; r < m.rows(); ++r) {
      os << "    [";
      for (Index c = 0; c < m.cols(); ++c) os << (c ? ", " : "") << fmt_complex(m(r, c));
      os << "]\n";
    }
  }
}

void emit_json(const json& j) { std::cout << j.dump(2) << "\n"; }

std::vector<std::string> split_names(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

Scenario open(const std::string& file, const Globals& g) {
  Scenario sc = load_scenario(file, g.tol);
  set_tolerances(sc.tolerance);
  return sc;
}

int cmd_check(const std::string& file, const Globals& g) {
  const Scenario sc = open(file, g);
  if (g.json_out) {
    json names = json::object();
    for (const auto& [n, _] : sc.observables) names["observables"].push_back(n);
    for (const auto& [n, _] : sc.kernels) names["kernels"].push_back(n);
    for (const auto& [n, _] : sc.states) names["states"].push_back(n);
    for (const auto& [n, _] : sc.distributions) names["distributions"].push_back(n);
    emit_json({{"valid", true}, {"backend", to_string(sc.backend)}, {"dim", sc.dim}, {"objects", names}});
  } else {
    std::cout << "VALID " << file << ": " << to_string(sc.backend) << ", dim " << sc.dim << ", "
              << sc.observables.size() << " observables, " << sc.kernels.size() << " kernels, "
              << sc.states.size() + sc.distributions.size() << " states\n";
  }
  return kTrue;
}

int cmd_smear(const std::string& file, const std::string& obs, const std::string& kernel, const std::string& out,
              const std::string& as, const Globals& g) {
  const Scenario sc = open(file, g);
  const Observable eta = smear(sc.observable(obs), sc.kernel(kernel));
  if (!out.empty()) {
    json doc = sc.document;
    doc["observables"][as] = to_json(eta);
    std::ofstream f(out);
    if (!f) throw Error(Errc::ParseError, out + ": cannot write file");
    f << doc.dump(2) << "\n";
  }
  if (g.json_out) {
    emit_json({{"observable", to_json(eta)}, {"name", as}});
  } else {
    std::cout << as << " = smear(" << obs << ", " << kernel << "):\n";
    print_observable(std::cout, eta);
    if (!out.empty()) std::cout << "written to " << out << "\n";
  }
  return kTrue;
}

int cmd_preorder(const std::string& file, const std::string& lhs, const std::string& rhs, const Globals& g) {
  const Scenario sc = open(file, g);
  const PreorderWitness w = preorder_leq(sc.observable(lhs), sc.observable(rhs));
  if (g.json_out) {
    json j = {{"holds", w.holds}};
    if (w.witness) {
      j["witness"] = to_json(*w.witness);
      j["residual"] = w.residual;
    }
    emit_json(j);
  } else if (w.witness) {
    std::cout << "witness kernel (" << lhs << " -> " << rhs << "), residual " << fmt(w.residual) << ":\n";
    print_matrix(std::cout, w.witness->matrix());
  } else {
    std::cout << "INFEASIBLE\n";
  }
  return w.holds ? kTrue : kFalse;
}

int cmd_equiv(const std::string& file, const std::string& lhs, const std::string& rhs, const Globals& g) {
  const Scenario sc = open(file, g);
  const FuzzyEquivalence e = fuzzy_equivalent(sc.observable(lhs), sc.observable(rhs));
  if (g.json_out) {
    json j = {{"equivalent", e.equivalent}, {"forward", e.forward.holds}, {"backward", e.backward.holds}};
    if (e.forward.witness) j["forward_witness"] = to_json(*e.forward.witness);
    if (e.backward.witness) j["backward_witness"] = to_json(*e.backward.witness);
    emit_json(j);
  } else {
    std::cout << (e.equivalent ? "EQUIVALENT" : "NOT_EQUIVALENT") << "\n";
    std::cout << lhs << " <= " << rhs << ": " << (e.forward.holds ? "holds" : "INFEASIBLE") << "\n";
    if (e.forward.witness) print_matrix(std::cout, e.forward.witness->matrix());
    std::cout << rhs << " <= " << lhs << ": " << (e.backward.holds ? "holds" : "INFEASIBLE") << "\n";
    if (e.backward.witness) print_matrix(std::cout, e.backward.witness->matrix());
  }
  return e.equivalent ? kTrue : kFalse;
}

int cmd_clean(const std::string& file, const std::string& obs, bool witness, const Globals& g) {
  const Scenario sc = open(file, g);
  const CleanReport r = is_clean(sc.observable(obs), witness);
  if (g.json_out) {
    json j = {{"clean", r.clean}};
    if (r.refinement) {
      j["refinement"] = to_json(r.refinement->xi);
      j["refinement_below"] = *r.refinement_below;
      j["eta_below_refinement"] = *r.eta_below;
    }
    emit_json(j);
  } else {
    std::cout << (r.clean ? "CLEAN" : "NOT_CLEAN") << "\n";
    if (r.refinement) {
      std::cout << "rank-one refinement:\n";
      print_observable(std::cout, r.refinement->xi);
      std::cout << "refinement <= " << obs << ": " << (*r.refinement_below ? "holds" : "INFEASIBLE") << "\n";
      std::cout << obs << " <= refinement: " << (*r.eta_below ? "holds" : "INFEASIBLE") << "\n";
    }
  }
  return r.clean ? kTrue : kFalse;
}

int cmd_mother(const std::string& file, const std::string& obs, const Globals& g) {
  const Scenario sc = open(file, g);
  const auto m = pvm_mother(sc.observable(obs));
  if (g.json_out) {
    json j = {{"commuting", m.has_value()}};
    if (m) {
      j["pvm"] = to_json(m->xi);
      j["kernel"] = to_json(m->nu);
    }
    emit_json(j);
  } else if (m) {
    std::cout << "sharp observable:\n";
    print_observable(std::cout, m->xi);
    std::cout << "kernel:\n";
    print_matrix(std::cout, m->nu.matrix());
  } else {
    std::cout << "NOT_COMMUTING\n";
  }
  return m ? kTrue : kFalse;
}

int cmd_divergence(const std::string& file, const std::string& p, const std::string& q, const std::string& f,
                   const Globals& g) {
  const Scenario sc = open(file, g);
  const ExtendedReal d = f_divergence(builtin(f), sc.distribution(p), sc.distribution(q));
  if (g.json_out) {
    emit_json({{"generator", f}, {"finite", d.is_finite()}, {"value", d.is_finite() ? json(d.value()) : json("inf")}});
  } else {
    std::cout << (d.is_finite() ? fmt(d.value()) : std::string("inf")) << "\n";
  }
  return kTrue;
}

int cmd_sufficiency(const std::string& file, const std::string& kernel, const std::string& family_list,
                    bool blackwell, const Globals& g) {
  const Scenario sc = open(file, g);
  std::vector<Eigen::VectorXd> family;
  for (const auto& name : split_names(family_list)) family.push_back(sc.distribution(name));
  const MarkovKernel& nu = sc.kernel(kernel);
  const FamilySufficiency fs = sufficient_for_family(nu, family);
  std::optional<BlackwellSufficiency> bw;
  if (blackwell) bw = blackwell_sufficient(nu, family);
  const bool verdict = fs.sufficient && (!bw || bw->sufficient);
  if (g.json_out) {
    json j = {{"sufficient", verdict}, {"hellinger", fs.sufficient}, {"max_gap", fs.max_gap}};
    if (bw) {
      j["blackwell"] = bw->sufficient;
      if (bw->recovery) j["recovery_kernel"] = to_json(*bw->recovery);
    }
    emit_json(j);
  } else {
    std::cout << (verdict ? "SUFFICIENT" : "NOT_SUFFICIENT") << "\n";
    std::cout << "hellinger: " << (fs.sufficient ? "preserved" : "not preserved") << ", max gap " << fmt(fs.max_gap)
              << "\n";
    if (bw) {
      std::cout << "blackwell: " << (bw->sufficient ? "recovery kernel found" : "INFEASIBLE") << "\n";
      if (bw->recovery) print_matrix(std::cout, bw->recovery->matrix());
    }
  }
  return verdict ? kTrue : kFalse;
}

int cmd_battery(const std::string& file, const std::string& xi, const std::string& eta, const std::string& kernel,
                const std::string& state, std::size_t samples, const Globals& g) {
  const Scenario sc = open(file, g);
  const SufficiencyReport r =
      equivalence_battery(sc.observable(xi), sc.observable(eta), sc.kernel(kernel), sc.state(state), samples, g.seed);
  if (g.json_out) {
    json j = to_json(r);
    j["seed"] = g.seed;
    emit_json(j);
  } else {
    auto yn = [](bool b) { return b ? "true" : "false"; };
    std::cout << "exact items\n"
              << "  blackwell (spanning states): " << yn(r.blackwell) << "\n"
              << "  fuzzy equivalent:            " << yn(r.fuzzy_equivalent) << "\n"
              << "sampled evidence (" << r.canonical_states << " canonical + " << r.sampled_states
              << " random states, seed " << g.seed << ")\n"
              << "  pairwise hellinger:          " << yn(r.pairwise) << ", max gap " << fmt(r.pairwise_max_gap) << "\n"
              << "  against reference state:     " << yn(r.vs_mixture) << ", max gap " << fmt(r.vs_mixture_max_gap)
              << "\n"
              << (r.agree ? (r.fuzzy_equivalent ? "EQUIVALENT" : "NOT_EQUIVALENT") : "DISAGREE") << "\n";
  }
  if (!r.agree) return kNumerical;
  return r.fuzzy_equivalent ? kTrue : kFalse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"povcal: smearing preorder, clean observables and sufficiency checks on scenario files"};
  app.footer(kKernelNote);
  app.require_subcommand(1);

  Globals g;
  if (const char* env = std::getenv("POVCAL_TOL")) {
    try {
      g.tol = std::stod(env);
    } catch (const std::exception&) {
      std::cerr << "error: POVCAL_TOL is not a number: " << env << "\n";
      return kInputError;
    }
  }
  app.add_flag("--json", g.json_out, "Machine-readable output");
  app.add_option("--tol", g.tol, "Scale factor for the equality and feasibility tolerances (env POVCAL_TOL)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for sampled states")->capture_default_str();

  std::string file, obs, kernel, out, as = "smeared", lhs, rhs, p, q, f, family, xi, eta, state;
  bool witness = false, blackwell = false;
  std::size_t samples = 32;
  int code = kInputError;

  auto add_file = [&](CLI::App* sub) {
    sub->add_option("file", file, "Scenario JSON file")->required();
    sub->fallthrough();
  };

  auto* check = app.add_subcommand("check", "Validate every object in the scenario");
  add_file(check);
  check->callback([&] { code = cmd_check(file, g); });

  auto* sm = app.add_subcommand("smear", "Smear an observable by a kernel");
  add_file(sm);
  sm->add_option("--observable", obs)->required();
  sm->add_option("--kernel", kernel)->required();
  sm->add_option("--out", out, "Write the scenario with the smeared observable added");
  sm->add_option("--as", as, "Name of the smeared observable")->capture_default_str();
  sm->footer(kKernelNote);
  sm->callback([&] { code = cmd_smear(file, obs, kernel, out, as, g); });

  auto* pre = app.add_subcommand("preorder", "Decide lhs <= rhs; prints the witness kernel or INFEASIBLE");
  add_file(pre);
  pre->add_option("--lhs", lhs)->required();
  pre->add_option("--rhs", rhs)->required();
  pre->footer(kKernelNote);
  pre->callback([&] { code = cmd_preorder(file, lhs, rhs, g); });

  auto* eq = app.add_subcommand("equiv", "Decide fuzzy equivalence of lhs and rhs");
  add_file(eq);
  eq->add_option("--lhs", lhs)->required();
  eq->add_option("--rhs", rhs)->required();
  eq->callback([&] { code = cmd_equiv(file, lhs, rhs, g); });

  auto* cl = app.add_subcommand("clean", "Rank-one criterion; exit 0 when every nonzero atom has rank one");
  add_file(cl);
  cl->add_option("--observable", obs)->required();
  cl->add_flag("--witness", witness, "Also report the rank-one refinement and both preorder verdicts");
  cl->callback([&] { code = cmd_clean(file, obs, witness, g); });

  auto* mo = app.add_subcommand("mother", "Sharp observable and kernel reproducing a commutative observable");
  add_file(mo);
  mo->add_option("--observable", obs)->required();
  mo->callback([&] { code = cmd_mother(file, obs, g); });

  auto* dv = app.add_subcommand("divergence", "f-divergence between two distributions");
  add_file(dv);
  dv->add_option("--p", p)->required();
  dv->add_option("--q", q)->required();
  dv->add_option("--f", f)->required()->check(CLI::IsMember({"tv", "kl", "hellinger"}));
  dv->callback([&] { code = cmd_divergence(file, p, q, f, g); });

  auto* su = app.add_subcommand("sufficiency", "Is the kernel sufficient for the family of distributions");
  add_file(su);
  su->add_option("--kernel", kernel)->required();
  su->add_option("--family", family, "Comma-separated distribution names")->required();
  su->add_flag("--blackwell", blackwell, "Also search for a common recovery kernel");
  su->callback([&] { code = cmd_sufficiency(file, kernel, family, blackwell, g); });

  auto* ba = app.add_subcommand("battery", "Cross-check fuzzy equivalence against sufficiency of the kernel");
  add_file(ba);
  ba->add_option("--xi", xi)->required();
  ba->add_option("--eta", eta)->required();
  ba->add_option("--kernel", kernel)->required();
  ba->add_option("--state", state, "Faithful reference density")->required();
  ba->add_option("--samples", samples, "Random states on top of the canonical spanning family")
      ->capture_default_str();
  ba->footer("Exit 0 when equivalent, 1 when not, 3 when the exact items disagree.\n" + std::string(kKernelNote));
  ba->callback([&] { code = cmd_battery(file, xi, eta, kernel, state, samples, g); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == Errc::NumericalFailure ? kNumerical : kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return code;
}
