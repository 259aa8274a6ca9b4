#include "mslift/io.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>

#include "mslift/errors.hpp"
#include "mslift/tolerances.hpp"

namespace mslift::io {
namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

double as_number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::size_t as_index(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned()) fail(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

bool as_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

const Json& as_array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

std::vector<double> as_numbers(const Json& j, const std::string& path) {
  std::vector<double> out;
  for (std::size_t i = 0; i < as_array(j, path).size(); ++i) {
    out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::pair<double, double> as_pair(const Json& j, const std::string& path) {
  const auto v = as_numbers(j, path);
  if (v.size() != 2) fail(path, "expected two numbers");
  return {v[0], v[1]};
}

std::string item(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

/// Object with a fixed key set.
class Fields {
 public:
  Fields(const Json& j, std::string path, std::initializer_list<const char*> required,
         std::initializer_list<const char*> optional = {})
      : j_(j), path_(std::move(path)) {
    if (!j.is_object()) fail(path_, "expected an object");
    for (const auto& [key, value] : j.items()) {
      const auto known = [&](std::initializer_list<const char*> keys) {
        for (const char* k : keys) {
          if (key == k) return true;
        }
        return false;
      };
      if (!known(required) && !known(optional)) fail(path_ + "." + key, "unknown field");
    }
    for (const char* k : required) {
      if (!j.contains(k)) fail(path_ + "." + k, "missing field");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  const Json& operator[](const char* key) const { return j_.at(key); }
  std::string path(const char* key) const { return path_ + "." + key; }
  double number(const char* key) const { return as_number(j_.at(key), path(key)); }
  std::size_t index(const char* key) const { return as_index(j_.at(key), path(key)); }
  bool boolean(const char* key) const { return as_bool(j_.at(key), path(key)); }
  std::string string(const char* key) const {
    if (!j_.at(key).is_string()) fail(path(key), "expected a string");
    return j_.at(key).get<std::string>();
  }

 private:
  const Json& j_;
  std::string path_;
};

StepKind step_kind_from_string(const std::string& s, const std::string& path) {
  for (StepKind k : {StepKind::kCancellationSwap, StepKind::kPeel, StepKind::kAdjacentSwap, StepKind::kRematch}) {
    if (to_string(k) == s) return k;
  }
  fail(path, "unknown step kind '" + s + "'");
}

Verdict verdict_from_string(const std::string& s, const std::string& path) {
  for (Verdict v : {Verdict::kCertified, Verdict::kNotCertified, Verdict::kBoundaryMismatch}) {
    if (to_string(v) == s) return v;
  }
  fail(path, "unknown verdict '" + s + "'");
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot write file");
  out << j.dump(2) << '\n';
}

Json to_json(const SbvFunction& u) {
  Json pieces = Json::array();
  for (const auto& p : u.pieces()) pieces.push_back({{"nodes", p.nodes}, {"values", p.values}});
  return {{"domain", {u.interval().a, u.interval().b}}, {"pieces", pieces}};
}

SbvFunction sbv_from_json(const Json& j, const std::string& path) {
  const Fields f(j, path, {"domain", "pieces"});
  const auto [a, b] = as_pair(f["domain"], f.path("domain"));
  std::vector<Piece> pieces;
  const Json& arr = as_array(f["pieces"], f.path("pieces"));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string pp = item(f.path("pieces"), i);
    const Fields pf(arr[i], pp, {"nodes", "values"});
    pieces.push_back({as_numbers(pf["nodes"], pf.path("nodes")), as_numbers(pf["values"], pf.path("values"))});
  }
  try {
    return SbvFunction(Interval{a, b}, std::move(pieces));
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
}

Json to_json(const GraphCombination& t) {
  Json terms = Json::array();
  for (const auto& term : t.terms()) terms.push_back({{"weight", term.weight}, {"func", to_json(term.func)}});
  return {{"domain", {t.interval().a, t.interval().b}}, {"terms", terms}};
}

GraphCombination combination_from_json(const Json& j, const std::string& path) {
  const Fields f(j, path, {"terms"}, {"domain"});
  std::vector<Term> terms;
  const Json& arr = as_array(f["terms"], f.path("terms"));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string tp = item(f.path("terms"), i);
    const Fields tf(arr[i], tp, {"weight", "func"});
    terms.push_back({tf.number("weight"), sbv_from_json(tf["func"], tf.path("func"))});
  }
  std::optional<Interval> iv;
  if (f.has("domain")) {
    const auto [a, b] = as_pair(f["domain"], f.path("domain"));
    iv = Interval{a, b};
  } else if (!terms.empty()) {
    iv = terms.front().func.interval();
  } else {
    fail(f.path("domain"), "required when there are no terms");
  }
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!(terms[i].func.interval() == *iv)) fail(item(f.path("terms"), i) + ".func.domain", "differs from the combination's");
  }
  try {
    return GraphCombination(*iv, std::move(terms));
  } catch (const ValidationError& e) {
    fail(f.path("terms"), e.what());
  }
}

Json to_json(const DirichletSpec& s) {
  const Domain& d = s.domain();
  return {{"domain", {d.a(), d.b()}}, {"inner", {d.inner_a(), d.inner_b()}}, {"boundary", to_json(s.boundary())}};
}

DirichletSpec dirichlet_from_json(const Json& j, const std::string& path) {
  const Fields f(j, path, {"domain", "inner", "boundary"});
  const auto [a, b] = as_pair(f["domain"], f.path("domain"));
  const auto [ia, ib] = as_pair(f["inner"], f.path("inner"));
  try {
    return DirichletSpec(Domain(a, b, ia, ib), sbv_from_json(f["boundary"], f.path("boundary")));
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

Json to_json(const ColumnProfile& p) {
  return {{"x", p.x}, {"breakpoints", p.breakpoints}, {"levels", p.levels}};
}

ColumnProfile profile_from_json(const Json& j, const std::string& path) {
  const Fields f(j, path, {"x", "breakpoints", "levels"});
  ColumnProfile p;
  p.x = f.number("x");
  p.breakpoints = as_numbers(f["breakpoints"], f.path("breakpoints"));
  p.levels = as_numbers(f["levels"], f.path("levels"));
  if (!p.levels.empty() && p.breakpoints.size() != p.levels.size() + 1) {
    fail(f.path("breakpoints"), "needs one more entry than levels");
  }
  return p;
}

Json to_json(const LiftReport& r) {
  Json cols = Json::array();
  for (const auto& c : r.columns) cols.push_back({{"x", c.x}, {"energy", c.energy}, {"profile", to_json(c.profile)}});
  return {{"total", r.total},
          {"regular", r.regular},
          {"singular", r.singular},
          {"dirichlet_term", kDirichletTermConvention},
          {"columns", cols}};
}

LiftReport lift_report_from_json(const Json& j, const std::string& path) {
  const Fields f(j, path, {"total", "regular", "singular", "columns"}, {"dirichlet_term"});
  if (f.has("dirichlet_term") && f.string("dirichlet_term") != kDirichletTermConvention) {
    fail(f.path("dirichlet_term"), "unsupported convention");
  }
  LiftReport r;
  r.total = f.number("total");
  r.regular = f.number("regular");
  r.singular = f.number("singular");
  const Json& arr = as_array(f["columns"], f.path("columns"));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const Fields cf(arr[i], item(f.path("columns"), i), {"x", "energy", "profile"});
    r.columns.push_back({cf.number("x"), cf.number("energy"), profile_from_json(cf["profile"], cf.path("profile"))});
  }
  return r;
}

Json to_json(const Decomposition& d) {
  Json parts = Json::array();
  for (const auto& p : d.parts) parts.push_back({{"mu", p.mu}, {"func", to_json(p.w)}});
  Json prov = Json::array();
  for (const auto& s : d.provenance) {
    prov.push_back({{"kind", to_string(s.kind)}, {"layer", s.layer}, {"x", s.x}, {"i", s.i}, {"j", s.j},
                    {"weight", s.weight}});
  }
  const auto& c = d.checks;
  return {{"domain", {d.interval.a, d.interval.b}},
          {"parts", parts},
          {"provenance", prov},
          {"checks",
           {{"current_equal", c.current_equal},
            {"energy_gap", c.energy_gap},
            {"lifted_energy", c.lifted_energy},
            {"parts_energy", c.parts_energy},
            {"weight_gap", c.weight_gap}}}};
}

Decomposition decomposition_from_json(const Json& j, const std::string& path) {
  const Fields f(j, path, {"parts", "provenance", "checks"}, {"domain"});
  Decomposition d;
  const Json& parts = as_array(f["parts"], f.path("parts"));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const Fields pf(parts[i], item(f.path("parts"), i), {"mu", "func"});
    d.parts.push_back({pf.number("mu"), sbv_from_json(pf["func"], pf.path("func"))});
  }
  if (f.has("domain")) {
    const auto [a, b] = as_pair(f["domain"], f.path("domain"));
    d.interval = {a, b};
  } else if (!d.parts.empty()) {
    d.interval = d.parts.front().w.interval();
  }
  const Json& prov = as_array(f["provenance"], f.path("provenance"));
  for (std::size_t i = 0; i < prov.size(); ++i) {
    const Fields sf(prov[i], item(f.path("provenance"), i), {"kind", "layer", "x", "i", "j", "weight"});
    d.provenance.push_back({step_kind_from_string(sf.string("kind"), sf.path("kind")), sf.index("layer"),
                            sf.number("x"), sf.index("i"), sf.index("j"), sf.number("weight")});
  }
  const Fields cf(f["checks"], f.path("checks"), {"current_equal", "energy_gap"},
                  {"lifted_energy", "parts_energy", "weight_gap"});
  d.checks.current_equal = cf.boolean("current_equal");
  d.checks.energy_gap = cf.number("energy_gap");
  if (cf.has("lifted_energy")) d.checks.lifted_energy = cf.number("lifted_energy");
  if (cf.has("parts_energy")) d.checks.parts_energy = cf.number("parts_energy");
  if (cf.has("weight_gap")) d.checks.weight_gap = cf.number("weight_gap");
  return d;
}

Json to_json(const CertificateReport& r) {
  Json certs = Json::array();
  for (const auto& c : r.certificates) {
    certs.push_back({{"competitor_id", c.competitor_id},
                     {"weight_sum", c.weight_sum},
                     {"margin", c.margin},
                     {"verdict", to_string(c.verdict)},
                     {"lifted_energy", c.lifted_energy},
                     {"decomposed_energy", c.decomposed_energy},
                     {"parts", c.parts}});
  }
  return {{"candidate_energy", r.candidate_energy}, {"certified", r.certified}, {"certificates", certs}};
}

CertificateReport certificate_report_from_json(const Json& j, const std::string& path) {
  const Fields f(j, path, {"certificates"}, {"candidate_energy", "certified"});
  CertificateReport r;
  if (f.has("candidate_energy")) r.candidate_energy = f.number("candidate_energy");
  const Json& arr = as_array(f["certificates"], f.path("certificates"));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const Fields cf(arr[i], item(f.path("certificates"), i), {"competitor_id", "weight_sum", "margin", "verdict"},
                    {"lifted_energy", "decomposed_energy", "parts"});
    Certificate c{cf.index("competitor_id")};
    c.weight_sum = cf.number("weight_sum");
    c.margin = cf.number("margin");
    c.verdict = verdict_from_string(cf.string("verdict"), cf.path("verdict"));
    if (cf.has("lifted_energy")) c.lifted_energy = cf.number("lifted_energy");
    if (cf.has("decomposed_energy")) c.decomposed_energy = cf.number("decomposed_energy");
    if (cf.has("parts")) c.parts = cf.index("parts");
    r.certificates.push_back(c);
  }
  r.certified = f.has("certified")
                    ? f.boolean("certified")
                    : std::none_of(r.certificates.begin(), r.certificates.end(),
                                   [](const Certificate& c) { return c.verdict == Verdict::kNotCertified; });
  return r;
}

Json to_json(const MinimizeResult& r) {
  return {{"func", to_json(r.u)}, {"energy", r.energy}, {"jumps", r.jumps}, {"runtime_ms", r.runtime_ms}};
}

MinimizeResult minimize_result_from_json(const Json& j, const std::string& path) {
  const Fields f(j, path, {"func", "energy", "jumps"}, {"runtime_ms"});
  MinimizeResult r{sbv_from_json(f["func"], f.path("func")), f.number("energy"),
                   as_numbers(f["jumps"], f.path("jumps")), 0.0};
  if (f.has("runtime_ms")) r.runtime_ms = f.number("runtime_ms");
  return r;
}

void write_profile_csv(std::ostream& os, const LiftReport& r) {
  std::ostringstream line;
  line.precision(17);
  os << "x,a_i,a_{i+1},level\n";
  for (const auto& c : r.columns) {
    for (std::size_t i = 0; i < c.profile.intervals(); ++i) {
      line.str("");
      line << c.x << ',' << c.profile.breakpoints[i] << ',' << c.profile.breakpoints[i + 1] << ','
           << c.profile.levels[i] << '\n';
      os << line.str();
    }
  }
}

}  // namespace mslift::io
