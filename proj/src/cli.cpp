#include "orbitlab/cli.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "orbitlab/chebdickson.hpp"
#include "orbitlab/decomp.hpp"
#include "orbitlab/errors.hpp"
#include "orbitlab/heights.hpp"
#include "orbitlab/intersect.hpp"
#include "orbitlab/lines.hpp"
#include "orbitlab/normal_forms.hpp"
#include "orbitlab/parse.hpp"
#include "orbitlab/siegel.hpp"

namespace orbitlab::cli {

namespace {

using json = nlohmann::ordered_json;

// Malformed input text; reported with exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Outcome {
  json inputs = json::object();
  json result = json::object();
  std::optional<std::string> completeness;
  std::string text;
};

// Every option any subcommand binds to.
struct Args {
  std::string f, g, x0, y0, x, a = "1", p = "1", fs, ms, alpha, line;
  unsigned long n = 0, m = 0, r = 0, K = 8, cap = 64, max_steps = 64, max_bits = 1UL << 16,
                max_exponent = 12, inner_degree = 0, search = 0;
  int kind = 0;
  double radius = 1e-6;
  bool classical = false;
};

RatPoly poly_arg(const std::string& text) { return parse_poly(text); }

Rational rational_arg(const std::string& text) {
  try {
    return rational_from_string(text);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<RatPoly> poly_list(const std::string& text) {
  std::vector<RatPoly> out;
  for (const auto& part : split(text, ',')) out.push_back(poly_arg(part));
  return out;
}

std::vector<Rational> rational_list(const std::string& text) {
  std::vector<Rational> out;
  for (const auto& part : split(text, ',')) out.push_back(rational_arg(part));
  return out;
}

std::vector<unsigned long> index_list(const std::string& text) {
  std::vector<unsigned long> out;
  for (const auto& part : split(text, ',')) {
    const std::string t = trim(part);
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("expected a nonnegative integer, got '" + part + "'");
    }
    out.push_back(std::stoul(t));
  }
  return out;
}

// "X; 2*X + 1; =5": a linear polynomial in X, or "=value" for a constant.
LineSpec line_arg(const std::string& text) {
  std::vector<LineSpec::Coordinate> coords;
  for (const auto& part : split(text, ';')) {
    const std::string t = trim(part);
    if (!t.empty() && t[0] == '=') {
      coords.push_back(LineSpec::Constant{rational_arg(t.substr(1))});
      continue;
    }
    RatPoly p = poly_arg(t);
    if (p.degree() != 1) throw UsageError("line coordinate '" + t + "' is not of degree one");
    coords.push_back(LineSpec::Linked{LinearMap::from_poly(p)});
  }
  return LineSpec(std::move(coords));
}

std::string real_string(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

json poly_json(const RatPoly& p) { return to_string(p); }
json rat_json(const Rational& q) { return to_string(q); }

json index_json(const std::vector<unsigned long>& v) { return json(v); }

Outcome poly_outcome(json inputs, const RatPoly& p) {
  Outcome o;
  o.inputs = std::move(inputs);
  o.result["poly"] = poly_json(p);
  o.text = to_string(p);
  return o;
}

Outcome run_compose(const Args& a) {
  RatPoly f = poly_arg(a.f), g = poly_arg(a.g);
  return poly_outcome({{"f", poly_json(f)}, {"g", poly_json(g)}}, compose(f, g));
}

Outcome run_iterate(const Args& a) {
  RatPoly f = poly_arg(a.f);
  if (a.n > 0 && f.degree() > 1) {
    Integer deg;
    mpz_ui_pow_ui(deg.get_mpz_t(), static_cast<unsigned long>(f.degree()), a.n);
    if (deg > kMaxExpandedDegree) throw BudgetExceeded("iterate degree exceeds the expansion cap", 0);
  }
  return poly_outcome({{"f", poly_json(f)}, {"n", a.n}}, iterate(f, a.n));
}

Outcome run_cheb(const Args& a) {
  RatPoly t = a.classical ? classical_chebyshev(a.n) : chebyshev_t(a.n);
  json in{{"n", a.n}};
  if (a.classical) in["classical"] = true;
  return poly_outcome(std::move(in), t);
}

Outcome run_dickson(const Args& a) {
  Rational c = rational_arg(a.a);
  return poly_outcome({{"n", a.n}, {"a", rat_json(c)}}, dickson(a.n, c));
}

Outcome run_decompose(const Args& a) {
  RatPoly f = poly_arg(a.f);
  Outcome o;
  o.inputs["f"] = poly_json(f);
  if (a.inner_degree > 0) {
    o.inputs["inner_degree"] = a.inner_degree;
    auto d = decompose_at(f, a.inner_degree);
    if (d) {
      o.result["outer"] = poly_json(d->outer);
      o.result["inner"] = poly_json(d->inner);
      o.text = to_string(d->outer) + " o " + to_string(d->inner);
    } else {
      o.result["outer"] = nullptr;
      o.result["inner"] = nullptr;
      o.text = "no decomposition with inner degree " + std::to_string(a.inner_degree);
    }
    return o;
  }
  o.inputs["cap"] = a.cap;
  auto chains = complete_decompositions(f, a.cap);
  json arr = json::array();
  for (const auto& c : chains) {
    json chain = json::array();
    std::string line;
    for (const auto& factor : c.factors) {
      chain.push_back(poly_json(factor));
      line += (line.empty() ? "" : " o ") + to_string(factor);
    }
    arr.push_back(std::move(chain));
    o.text += line + "\n";
  }
  o.result["indecomposable"] = is_indecomposable(f);
  o.result["decompositions"] = std::move(arr);
  if (!o.text.empty()) o.text.pop_back();
  return o;
}

Outcome run_normal_form(const Args& a) {
  RatPoly f = poly_arg(a.f);
  NormalFormReport nf = conjugacy_normal_form(f);
  Outcome o;
  o.inputs["f"] = poly_json(f);
  o.result["kind"] = to_string(nf.kind);
  std::ostringstream text;
  text << to_string(nf.kind);
  if (nf.kind == NormalFormReport::Kind::PowerLike || nf.kind == NormalFormReport::Kind::ChebyshevLike) {
    o.result["n"] = nf.n;
    if (nf.kind == NormalFormReport::Kind::PowerLike) {
      o.result["alpha"] = rat_json(nf.alpha);
    } else {
      o.result["epsilon"] = nf.epsilon;
    }
    o.result["target"] = poly_json(nf.target());
    o.result["witness"] = nf.witness.to_string();
    json alts = json::array();
    for (const auto& l : nf.alternates) alts.push_back(l.to_string());
    o.result["alternates"] = std::move(alts);
    text << ": l o f o l^-1 = " << to_string(nf.target()) << " with l = " << nf.witness.to_string();
  }
  o.text = text.str();
  return o;
}

json params_json(const StandardPairParams& p) {
  return {{"kind", p.kind}, {"m", p.m}, {"n", p.n}, {"r", p.r}, {"p", poly_json(p.p)}};
}

Outcome run_classify(const Args& a) {
  RatPoly f = poly_arg(a.f), g = poly_arg(a.g);
  Outcome o;
  o.inputs = {{"f", poly_json(f)}, {"g", poly_json(g)}};
  auto w = classify_pair(f, g);
  o.result["found"] = w.has_value();
  if (!w) {
    o.text = "no standard-pair witness found";
    return o;
  }
  o.result["kind"] = w->params.kind;
  o.result["params"] = params_json(w->params);
  o.result["E"] = poly_json(w->E);
  o.result["mu"] = w->mu.to_string();
  o.result["nu"] = w->nu.to_string();
  o.result["F1"] = poly_json(w->F1);
  o.result["G1"] = poly_json(w->G1);
  o.result["swapped"] = w->swapped;
  o.text = "kind " + std::to_string(w->params.kind) + ": E = " + to_string(w->E) + ", F1 = " +
           to_string(w->F1) + ", G1 = " + to_string(w->G1) + ", mu = " + w->mu.to_string() +
           ", nu = " + w->nu.to_string() + (w->swapped ? " (swapped)" : "");
  return o;
}

Outcome run_verify_witness(const Args& a) {
  StandardPairParams params{a.kind, a.m, a.n, a.r, poly_arg(a.p)};
  Outcome o;
  o.inputs = params_json(params);
  auto [F1, G1] = standard_pair(params);
  auto w = siegel_witness(params);
  const bool ok = verify_composition_identity(to_scalar_poly(F1), w.phi, to_scalar_poly(G1), w.psi);
  o.result["F1"] = poly_json(F1);
  o.result["G1"] = poly_json(G1);
  o.result["phi"] = to_string(w.phi);
  o.result["psi"] = to_string(w.psi);
  o.result["ring"] = w.ring_description();
  o.result["verified"] = ok;
  o.text = std::string(ok ? "verified" : "FAILED") + ": F1(phi) = G1(psi) over " + w.ring_description() +
           " with phi = " + to_string(w.phi) + ", psi = " + to_string(w.psi);
  return o;
}

Outcome run_orbit(const Args& a) {
  RatPoly f = poly_arg(a.f);
  Rational x0 = rational_arg(a.x0);
  OrbitTrace t = orbit(f, x0, {a.max_steps, a.max_bits});
  Outcome o;
  o.inputs = {{"f", poly_json(f)}, {"x0", rat_json(x0)}, {"max_steps", a.max_steps}, {"max_bits", a.max_bits}};
  json pts = json::array();
  std::string line;
  for (const auto& p : t.points) {
    pts.push_back(rat_json(p));
    line += (line.empty() ? "" : ", ") + to_string(p);
  }
  const bool pre = t.status == OrbitTrace::Status::Preperiodic;
  o.result["points"] = std::move(pts);
  o.result["status"] = pre ? "Preperiodic" : "Wandering";
  o.result["steps"] = t.steps;
  if (pre) {
    o.result["tail_length"] = t.tail_length;
    o.result["cycle_length"] = t.cycle_length;
  } else {
    o.result["height_capped"] = t.height_capped;
  }
  o.text = "[" + line + "]\n" +
           (pre ? "Preperiodic: tail " + std::to_string(t.tail_length) + ", cycle " + std::to_string(t.cycle_length)
                : "Wandering after " + std::to_string(t.steps) + " steps");
  return o;
}

Outcome run_height(const Args& a) {
  RatPoly f = poly_arg(a.f);
  Rational x = rational_arg(a.x);
  HeightValue h = canonical_height(f, x, a.radius);
  Outcome o;
  o.inputs = {{"f", poly_json(f)}, {"x", rat_json(x)}, {"radius", real_string(a.radius)}};
  o.result["value"] = real_string(h.value);
  o.result["radius"] = real_string(h.radius);
  o.result["exact_zero"] = h.exact_zero;
  o.result["iterations"] = h.iterations;
  o.result["weil_height"] = real_string(weil_height(x));
  o.text = h.exact_zero ? "0 (exact: cycle detected)"
                        : real_string(h.value) + " +/- " + real_string(h.radius);
  return o;
}

Outcome run_preperiodic(const Args& a) {
  RatPoly f = poly_arg(a.f);
  Rational x = rational_arg(a.x);
  const bool pre = is_preperiodic(f, x);
  Outcome o;
  o.inputs = {{"f", poly_json(f)}, {"x", rat_json(x)}};
  o.result["preperiodic"] = pre;
  o.text = pre ? "preperiodic" : "wandering";
  return o;
}

Outcome run_intersect(const Args& a) {
  RatPoly f = poly_arg(a.f), g = poly_arg(a.g);
  Rational x0 = rational_arg(a.x0), y0 = rational_arg(a.y0);
  IntersectionReport rep = orbit_intersection(f, g, x0, y0, {a.max_steps, a.max_bits});
  Outcome o;
  o.inputs = {{"f", poly_json(f)}, {"g", poly_json(g)}, {"x0", rat_json(x0)}, {"y0", rat_json(y0)}};
  json pts = json::array();
  std::ostringstream text;
  for (const auto& h : rep.finite_points) {
    pts.push_back({{"value", rat_json(h.value)}, {"m", h.m}, {"n", h.n}});
    text << to_string(h.value) << " at (" << h.m << ", " << h.n << ")\n";
  }
  o.result["finite_points"] = std::move(pts);
  if (const auto& fam = rep.infinite_family) {
    o.result["infinite_family"] = {{"base", {fam->m0, fam->n0}},
                                   {"step", {fam->dm, fam->dn}},
                                   {"common_iterate", poly_json(fam->common_iterate)}};
    text << "family: (" << fam->m0 << " + " << fam->dm << "k, " << fam->n0 << " + " << fam->dn
         << "k) with f^" << fam->dm << " = g^" << fam->dn << " = " << to_string(fam->common_iterate) << "\n";
  }
  if (rep.degenerate) o.result["degenerate"] = true;
  o.completeness = to_string(rep.completeness);
  if (!rep.note.empty()) text << "note: " << rep.note << "\n";
  text << "completeness: " << *o.completeness;
  o.text = text.str();
  return o;
}

Outcome run_common_iterate(const Args& a) {
  RatPoly f = poly_arg(a.f), g = poly_arg(a.g);
  CommonIterateResult r = common_iterate(f, g, a.K);
  Outcome o;
  o.inputs = {{"f", poly_json(f)}, {"g", poly_json(g)}, {"K", a.K}};
  o.result["verdict"] = to_string(r.verdict);
  if (r.verdict == CommonIterateResult::Verdict::Found) {
    o.result["m1"] = r.m1;
    o.result["m2"] = r.m2;
    o.result["iterate"] = poly_json(r.iterate);
    o.text = "Found (" + std::to_string(r.m1) + "," + std::to_string(r.m2) + "): " + to_string(r.iterate);
  } else {
    o.result["reason"] = r.reason;
    o.text = std::string(to_string(r.verdict)) + ": " + r.reason;
  }
  return o;
}

json poly_list_json(const std::vector<RatPoly>& fs) {
  json arr = json::array();
  for (const auto& f : fs) arr.push_back(poly_json(f));
  return arr;
}

std::string join(const std::vector<unsigned long>& v) {
  std::string s;
  for (auto x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return "(" + s + ")";
}

Outcome run_line_invariance(const Args& a) {
  auto fs = poly_list(a.fs);
  LineSpec line = line_arg(a.line);
  Outcome o;
  o.inputs = {{"fs", poly_list_json(fs)}, {"line", line.to_string()}};
  if (!a.ms.empty()) {
    auto ms = index_list(a.ms);
    o.inputs["ms"] = index_json(ms);
    const bool ok = line_invariant_check(fs, ms, line);
    o.result["invariant"] = ok;
    o.text = ok ? "invariant" : "not invariant";
    return o;
  }
  auto ms = find_invariant_exponents(fs, line, a.K);
  o.result["exponents"] = ms ? index_json(*ms) : json(nullptr);
  o.text = ms ? "invariant under exponents " + join(*ms) : "no invariant exponents found";
  return o;
}

Outcome run_line_intersect(const Args& a) {
  auto fs = poly_list(a.fs);
  auto alpha = rational_list(a.alpha);
  LineSpec line = line_arg(a.line);
  LineIntersection res = intersection_cosets(fs, alpha, line, {a.max_exponent, a.max_bits});
  Outcome o;
  json alpha_json = json::array();
  for (const auto& q : alpha) alpha_json.push_back(rat_json(q));
  o.inputs = {{"fs", poly_list_json(fs)}, {"alpha", std::move(alpha_json)}, {"line", line.to_string()}};
  json cosets = json::array();
  std::ostringstream text;
  for (const auto& e : res.cosets.entries) {
    cosets.push_back({{"offsets", index_json(e.offsets)}, {"period", index_json(e.period)}});
    text << "coset " << join(e.offsets) << " + j*" << join(e.period) << "\n";
  }
  json extras = json::array();
  for (const auto& e : res.extras) {
    extras.push_back(index_json(e));
    text << "point " << join(e) << "\n";
  }
  o.result["cosets"] = std::move(cosets);
  o.result["extras"] = std::move(extras);
  o.result["invariant_exponents"] = res.invariant_exponents ? index_json(*res.invariant_exponents) : json(nullptr);
  o.result["truncated"] = res.truncated;
  o.completeness = to_string(res.completeness);
  text << "completeness: " << *o.completeness;
  o.text = text.str();
  return o;
}

const char* error_type(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const RingMismatch*>(&e)) return "RingMismatch";
  if (dynamic_cast<const BudgetExceeded*>(&e)) return "BudgetExceeded";
  if (dynamic_cast<const CapExceeded*>(&e)) return "CapExceeded";
  if (dynamic_cast<const FactorizationFailure*>(&e)) return "FactorizationFailure";
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  if (dynamic_cast<const UsageError*>(&e)) return "UsageError";
  return "Error";
}

int run_batch(const std::string& path, unsigned workers, std::ostream& out, std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "orbitlab: cannot open batch file '" << path << "'\n";
    return 2;
  }
  json jobs;
  try {
    jobs = json::parse(in);
  } catch (const json::exception& e) {
    err << "orbitlab: batch file is not valid JSON: " << e.what() << "\n";
    return 2;
  }
  if (!jobs.is_array()) {
    err << "orbitlab: batch file must hold a JSON array of job objects\n";
    return 2;
  }
  // Each job becomes an argument vector for a nested --json dispatch.
  std::vector<std::vector<std::string>> argvs;
  for (const auto& job : jobs) {
    if (!job.is_object() || !job.contains("op") || !job["op"].is_string() || job["op"] == "batch") {
      err << "orbitlab: every batch job needs a string \"op\"\n";
      return 2;
    }
    std::vector<std::string> argv{job["op"].get<std::string>(), "--json"};
    for (const auto& [key, value] : job.items()) {
      if (key == "op") continue;
      if (value.is_boolean()) {
        if (value.get<bool>()) argv.push_back("--" + key);
        continue;
      }
      argv.push_back("--" + key);
      if (value.is_string()) {
        argv.push_back(value.get<std::string>());
      } else if (value.is_array()) {
        std::string joined;
        for (const auto& v : value) joined += (joined.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
        argv.push_back(joined);
      } else {
        argv.push_back(value.dump());
      }
    }
    argvs.push_back(std::move(argv));
  }

  const std::size_t n = argvs.size();
  std::vector<std::optional<std::string>> results(n);
  std::mutex mu;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      std::ostringstream o, e;
      dispatch(argvs[i], o, e);
      std::string line = o.str();
      if (line.empty()) {
        json fallback{{"op", argvs[i][0]}, {"inputs", json::object()},
                      {"error", {{"type", "UsageError"}, {"message", trim(e.str())}}}};
        line = fallback.dump() + "\n";
      }
      std::lock_guard<std::mutex> lock(mu);
      results[i] = std::move(line);
      ready.notify_all();
    }
  };
  const unsigned cap = workers > 0 ? workers : std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(cap, n); ++t) pool.emplace_back(worker);
  for (std::size_t i = 0; i < n; ++i) {
    std::unique_lock<std::mutex> lock(mu);
    ready.wait(lock, [&] { return results[i].has_value(); });
    out << *results[i] << std::flush;
  }
  for (auto& t : pool) t.join();
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact polynomial dynamics toolkit", "orbitlab"};
  app.fallthrough();
  app.require_subcommand(0, 1);
  bool json_out = false;
  std::string batch;
  unsigned workers = 0;
  std::optional<unsigned long> factor_bound;
  std::optional<unsigned long> bit_budget;
  app.add_flag("--json", json_out, "Emit a JSON envelope instead of text");
  app.add_option("--batch", batch, "Run a JSON array of job objects, one result per line");
  app.add_option("--workers", workers, "Concurrent batch jobs (default: hardware threads, at most 8)");
  app.add_option("--factor-bound", factor_bound, "Trial-division bound (overrides ORBITLAB_FACTOR_BOUND)");
  app.add_option("--bit-budget", bit_budget, "Height iteration bit budget (overrides ORBITLAB_BIT_BUDGET)");

  Args a;
  std::map<std::string, std::function<Outcome(const Args&)>> handlers;
  auto sub = [&](const std::string& name, const std::string& help, std::function<Outcome(const Args&)> fn) {
    handlers[name] = std::move(fn);
    return app.add_subcommand(name, help);
  };
  auto req = [](CLI::App* s, const std::string& flag, auto& var, const std::string& help) {
    s->add_option(flag, var, help)->required();
  };

  auto* c = sub("compose", "f o g", run_compose);
  req(c, "--f", a.f, "outer polynomial");
  req(c, "--g", a.g, "inner polynomial");
  c = sub("iterate", "n-fold iterate of f", run_iterate);
  req(c, "--f", a.f, "polynomial");
  req(c, "--n", a.n, "number of iterations");
  c = sub("cheb", "normalized Chebyshev polynomial T_n", run_cheb);
  req(c, "--n", a.n, "degree");
  c->add_flag("--classical", a.classical, "classical cos-normalized polynomial instead");
  c = sub("dickson", "Dickson polynomial D_n(X, a)", run_dickson);
  req(c, "--n", a.n, "degree");
  c->add_option("--a", a.a, "parameter a (default 1)");
  c = sub("decompose", "complete functional decompositions", run_decompose);
  req(c, "--f", a.f, "polynomial");
  c->add_option("--cap", a.cap, "maximum number of chains");
  c->add_option("--inner-degree", a.inner_degree, "only split with this inner degree");
  c = sub("normal-form", "linear conjugacy normal form", run_normal_form);
  req(c, "--f", a.f, "polynomial");
  c = sub("classify-pair", "standard-pair witness for (f, g)", run_classify);
  req(c, "--f", a.f, "first polynomial");
  req(c, "--g", a.g, "second polynomial");
  c = sub("verify-witness", "check the Laurent witness of a standard pair", run_verify_witness);
  req(c, "--kind", a.kind, "standard pair kind 1-5");
  c->add_option("--m", a.m, "parameter m");
  c->add_option("--n", a.n, "parameter n");
  c->add_option("--r", a.r, "parameter r");
  c->add_option("--p", a.p, "polynomial p (kinds 1 and 2)");
  c = sub("orbit", "forward orbit with cycle detection", run_orbit);
  req(c, "--f", a.f, "polynomial");
  req(c, "--x0", a.x0, "start point");
  c->add_option("--max-steps", a.max_steps, "step cap");
  c->add_option("--max-bits", a.max_bits, "bit-length cap for iterates");
  c = sub("height", "canonical height with error radius", run_height);
  req(c, "--f", a.f, "polynomial of degree >= 2");
  req(c, "--x", a.x, "rational point");
  c->add_option("--radius", a.radius, "target radius (default 1e-6)");
  c = sub("preperiodic", "exact preperiodicity decision", run_preperiodic);
  req(c, "--f", a.f, "polynomial of degree >= 2");
  req(c, "--x", a.x, "rational point");
  c = sub("intersect", "intersection of two orbits", run_intersect);
  req(c, "--f", a.f, "first map");
  req(c, "--g", a.g, "second map");
  req(c, "--x0", a.x0, "start of the f-orbit");
  req(c, "--y0", a.y0, "start of the g-orbit");
  c->add_option("--max-steps", a.max_steps, "bounded-search step cap");
  c->add_option("--max-bits", a.max_bits, "bounded-search bit cap");
  c = sub("common-iterate", "decide f^m = g^n", run_common_iterate);
  req(c, "--f", a.f, "first map");
  req(c, "--g", a.g, "second map");
  c->add_option("--K", a.K, "multiples of the minimal exponent pair to test");
  c = sub("line-invariance", "check or find iterate tuples preserving a line", run_line_invariance);
  req(c, "--fs", a.fs, "comma-separated maps");
  req(c, "--line", a.line, "coordinates separated by ';', e.g. \"X;2*X;=5\"");
  c->add_option("--ms", a.ms, "comma-separated exponents; omit to search");
  c->add_option("--K", a.K, "common-iterate search bound");
  c = sub("line-intersect", "orbit-line intersection cosets", run_line_intersect);
  req(c, "--fs", a.fs, "comma-separated maps");
  req(c, "--alpha", a.alpha, "comma-separated start point");
  req(c, "--line", a.line, "coordinates separated by ';'");
  c->add_option("--max-exponent", a.max_exponent, "per-coordinate search depth");
  c->add_option("--max-bits", a.max_bits, "bit cap for iterates");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "orbitlab: " << e.what() << "\n";
    return 2;
  }

  if (factor_bound) setenv("ORBITLAB_FACTOR_BOUND", std::to_string(*factor_bound).c_str(), 1);
  if (bit_budget) setenv("ORBITLAB_BIT_BUDGET", std::to_string(*bit_budget).c_str(), 1);
  if (!batch.empty()) return run_batch(batch, workers, out, err);

  const auto parsed = app.get_subcommands();
  if (parsed.empty()) {
    err << "orbitlab: a subcommand is required\n" << app.help();
    return 2;
  }
  const std::string op = parsed.front()->get_name();
  json error;
  int status = 1;
  try {
    Outcome o = handlers.at(op)(a);
    json envelope{{"op", op}, {"inputs", std::move(o.inputs)}, {"result", std::move(o.result)}};
    if (o.completeness) envelope["completeness"] = *o.completeness;
    out << (json_out ? envelope.dump() : o.text) << "\n";
    return 0;
  } catch (const ParseError& e) {
    status = 2;
    error = {{"type", error_type(e)}, {"message", e.what()}, {"position", e.position()}};
  } catch (const UsageError& e) {
    status = 2;
    error = {{"type", error_type(e)}, {"message", e.what()}};
  } catch (const std::exception& e) {
    error = {{"type", error_type(e)}, {"message", e.what()}};
    if (const auto* b = dynamic_cast<const BudgetExceeded*>(&e)) error["completed_steps"] = b->completed_steps();
  }
  if (json_out) {
    out << json{{"op", op}, {"inputs", json::object()}, {"error", error}}.dump() << "\n";
  } else {
    err << "orbitlab " << op << ": " << error["type"].get<std::string>() << ": "
        << error["message"].get<std::string>() << "\n";
  }
  return status;
}

}  // namespace orbitlab::cli
