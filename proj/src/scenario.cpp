#include "povcal/scenario.hpp"

#include <fstream>
#include <sstream>

namespace povcal {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(Errc::ParseError, where + ": " + what);
}

double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

std::complex<double> complex_at(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2)
    return {number_at(j[0], where + "[0]"), number_at(j[1], where + "[1]")};
  fail(where, "expected a number or an [re, im] pair");
}

CMatrix complex_matrix_at(const json& j, Index dim, const std::string& where) {
  if (!j.is_array() || static_cast<Index>(j.size()) != dim)
    fail(where, "expected an array of " + std::to_string(dim) + " rows");
  CMatrix m(dim, dim);
  for (Index r = 0; r < dim; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    const std::string rw = where + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Index>(row.size()) != dim)
      fail(rw, "expected a row of " + std::to_string(dim) + " entries");
    for (Index c = 0; c < dim; ++c)
      m(r, c) = complex_at(row[static_cast<std::size_t>(c)], rw + "[" + std::to_string(c) + "]");
  }
  return m;
}

Eigen::VectorXd vector_at(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of numbers");
  Eigen::VectorXd v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = number_at(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

Eigen::MatrixXd real_matrix_at(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Eigen::MatrixXd m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string rw = where + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols || cols == 0)
      fail(rw, "expected a row of " + std::to_string(cols) + " numbers");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Index>(r), static_cast<Index>(c)) = number_at(j[r][c], rw + "[" + std::to_string(c) + "]");
  }
  return m;
}

// Runs `build`, prefixing any validation error with the JSON location.
template <typename F>
auto located(const std::string& where, F&& build) {
  try {
    return build();
  } catch (const Error& e) {
    if (e.code() == Errc::ParseError) throw;
    throw Error(e.code(), where + ": " + e.what());
  }
}

template <typename Map>
const auto& lookup(const Map& map, const std::string& name, const char* kind) {
  const auto it = map.find(name);
  if (it == map.end()) throw Error(Errc::ParseError, std::string("no ") + kind + " named '" + name + "'");
  return it->second;
}

void apply_overrides(Tolerances& t, const json& j) {
  if (!j.is_object()) fail("tolerances", "expected an object");
  const std::pair<const char*, double Tolerances::*> fields[] = {
      {"herm", &Tolerances::herm},   {"eig", &Tolerances::eig},         {"comm", &Tolerances::comm},
      {"simdiag", &Tolerances::simdiag}, {"psd", &Tolerances::psd},     {"eq", &Tolerances::eq},
      {"trace", &Tolerances::trace}, {"feas", &Tolerances::feas},       {"suff", &Tolerances::suff},
      {"cluster", &Tolerances::cluster}, {"rank", &Tolerances::rank},   {"pivot", &Tolerances::pivot},
  };
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto& [name, member] : fields)
      if (key == name) {
        const double v = number_at(value, "tolerances." + key);
        if (!(v > 0.0)) fail("tolerances." + key, "must be positive");
        t.*member = v;
        known = true;
      }
    if (!known) fail("tolerances." + key, "unknown tolerance");
  }
}

}  // namespace

const Observable& Scenario::observable(const std::string& name) const { return lookup(observables, name, "observable"); }
const MarkovKernel& Scenario::kernel(const std::string& name) const { return lookup(kernels, name, "kernel"); }
const State& Scenario::state(const std::string& name) const { return lookup(states, name, "state"); }
const Eigen::VectorXd& Scenario::distribution(const std::string& name) const {
  return lookup(distributions, name, "distribution");
}

Scenario parse_scenario(const json& doc, double tol_scale) {
  if (!doc.is_object()) fail("$", "scenario must be a JSON object");
  Scenario sc;
  sc.document = doc;

  if (doc.contains("backend")) {
    const json& b = doc["backend"];
    if (b == "hilbert")
      sc.backend = Backend::hilbert;
    else if (b == "tribe")
      sc.backend = Backend::tribe;
    else
      fail("backend", "expected \"hilbert\" or \"tribe\"");
  }
  if (!doc.contains("dim") || !doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 1)
    fail("dim", "expected a positive integer");
  sc.dim = doc["dim"].get<Index>();
  if (doc.contains("tolerances")) apply_overrides(sc.tolerance, doc["tolerances"]);
  if (!(tol_scale > 0.0)) fail("--tol", "scale must be positive");
  sc.tolerance = sc.tolerance.scaled(tol_scale);
  const ScopedTolerances scoped(sc.tolerance);

  if (doc.contains("observables")) {
    const json& obs = doc["observables"];
    if (!obs.is_object()) fail("observables", "expected an object of named observables");
    for (const auto& [name, body] : obs.items()) {
      const std::string where = "observables." + name;
      if (!body.is_object() || !body.contains("atoms")) fail(where, "expected {\"labels\": [...], \"atoms\": [...]}");
      const json& atoms_json = body["atoms"];
      if (!atoms_json.is_array() || atoms_json.empty()) fail(where + ".atoms", "expected a nonempty array");
      std::vector<Effect> atoms;
      for (std::size_t i = 0; i < atoms_json.size(); ++i) {
        const std::string aw = where + ".atoms[" + std::to_string(i) + "]";
        if (sc.backend == Backend::hilbert) {
          CMatrix m = complex_matrix_at(atoms_json[i], sc.dim, aw);
          atoms.push_back(located(aw, [&] { return Effect::hilbert(std::move(m)); }));
        } else {
          Eigen::VectorXd f = vector_at(atoms_json[i], aw);
          if (f.size() != sc.dim) fail(aw, "expected " + std::to_string(sc.dim) + " coordinates");
          atoms.push_back(located(aw, [&] { return Effect::tribe(std::move(f)); }));
        }
      }
      std::vector<double> labels;
      if (body.contains("labels")) {
        const Eigen::VectorXd l = vector_at(body["labels"], where + ".labels");
        labels.assign(l.data(), l.data() + l.size());
      } else {
        for (std::size_t i = 0; i < atoms.size(); ++i) labels.push_back(static_cast<double>(i));
      }
      sc.observables.emplace(name, located(where, [&] { return make_observable(labels, atoms); }));
    }
  }

  if (doc.contains("kernels")) {
    const json& ks = doc["kernels"];
    if (!ks.is_object()) fail("kernels", "expected an object of named kernels");
    for (const auto& [name, body] : ks.items()) {
      const std::string where = "kernels." + name;
      Eigen::MatrixXd rows = real_matrix_at(body, where);
      sc.kernels.emplace(name, located(where, [&] { return MarkovKernel(std::move(rows)); }));
    }
  }

  if (doc.contains("states")) {
    const json& ss = doc["states"];
    if (!ss.is_object()) fail("states", "expected an object of named states");
    for (const auto& [name, body] : ss.items()) {
      const std::string where = "states." + name;
      if (!body.is_array() || body.empty()) fail(where, "expected a matrix or a probability vector");
      if (body[0].is_array()) {
        if (sc.backend != Backend::hilbert) fail(where, "density matrices need the hilbert backend");
        CMatrix rho = complex_matrix_at(body, sc.dim, where);
        sc.states.emplace(name, located(where, [&] { return State::density(std::move(rho)); }));
      } else {
        Eigen::VectorXd p = vector_at(body, where);
        p = located(where, [&] { return checked_probability(p); });
        if (sc.backend == Backend::tribe && p.size() == sc.dim)
          sc.states.emplace(name, located(where, [&] { return State::probability(p); }));
        sc.distributions.emplace(name, std::move(p));
      }
    }
  }
  return sc;
}

Scenario load_scenario(const std::string& path, double tol_scale) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, path + ": cannot open file");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, path + ": " + e.what());
  }
  try {
    return parse_scenario(doc, tol_scale);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

json to_json(const CMatrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const Effect& e) {
  return e.backend() == Backend::hilbert ? to_json(e.matrix()) : to_json(e.values());
}

json to_json(const Observable& xi) {
  json atoms = json::array();
  for (const auto& a : xi.atoms()) atoms.push_back(to_json(a));
  return {{"labels", xi.labels()}, {"atoms", std::move(atoms)}};
}

json to_json(const MarkovKernel& nu) { return to_json(nu.matrix()); }

json to_json(const WeakMarkovKernel& nu) {
  std::vector<bool> mask = nu.support_mask();
  return {{"rows", to_json(nu.matrix())}, {"support_mask", mask}};
}

json to_json(const SufficiencyReport& report) {
  json out = {
      {"pairwise", report.pairwise},
      {"vs_mixture", report.vs_mixture},
      {"hellinger_max_gap", report.hellinger_max_gap},
      {"blackwell", report.blackwell},
      {"fuzzy_equivalent", report.fuzzy_equivalent},
      {"agree", report.agree},
      {"evidence",
       {{"pairwise_max_gap", report.pairwise_max_gap},
        {"vs_mixture_max_gap", report.vs_mixture_max_gap},
        {"sampled_states", report.sampled_states},
        {"canonical_states", report.canonical_states},
        {"sampled_items", "pairwise and vs_mixture are sampled evidence; they can refute but not prove"},
        {"exact_items", "blackwell (spanning state family) and fuzzy_equivalent (operator-level)"}}},
  };
  if (report.recovery) out["recovery_kernel"] = to_json(*report.recovery);
  if (report.backward_witness) out["backward_witness"] = to_json(*report.backward_witness);
  return out;
}

}  // namespace povcal
