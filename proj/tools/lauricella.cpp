#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lauricella/claims.hpp"

using namespace lauricella;
using lauricella::verify::Json;

namespace {

constexpr int kOk = 0, kClaimFailure = 1, kUsage = 2, kBudget = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, sep);) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Rational parse_rational(const std::string& s) {
  Rational r;
  if (s.empty() || r.set_str(s, 10) != 0 || r.get_den() == 0) throw UsageError("not a rational: '" + s + "'");
  r.canonicalize();
  return r;
}

std::vector<Rational> parse_point(const std::string& s) {
  std::vector<Rational> out;
  for (const auto& item : split(s)) out.push_back(parse_rational(item));
  return out;
}

std::string format_point(const std::vector<Rational>& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) out += (i ? "," : "") + to_string(p[i]);
  return out;
}

/// "a=5/3,b=1/3,c=7/3" with b shared, or b1=..,b2=.. per coordinate.
Bindings parse_params(const std::string& text, const VarTablePtr& vt, std::size_t n) {
  if (text.empty()) return symbolic_bindings(vt, n);
  std::map<std::string, Rational> kv;
  for (const auto& item : split(text)) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("parameter '" + item + "' needs name=value");
    kv[item.substr(0, eq)] = parse_rational(item.substr(eq + 1));
  }
  auto take = [&](const std::string& name) -> Rational {
    auto it = kv.find(name);
    if (it == kv.end()) throw UsageError("missing parameter " + name);
    Rational v = it->second;
    kv.erase(it);
    return v;
  };
  Rational a = take("a"), c = take("c");
  std::vector<Rational> b;
  if (kv.count("b")) {
    b.assign(n, take("b"));
  } else {
    for (std::size_t i = 1; i <= n; ++i) b.push_back(take("b" + std::to_string(i)));
  }
  if (!kv.empty()) throw UsageError("unknown parameter " + kv.begin()->first);
  return numeric_bindings(vt, a, b, c);
}

int run_verify(const std::string& claims, std::uint64_t seed, const std::string& depth, const std::string& report, double cap, unsigned workers) {
  verify::RunOptions opt;
  opt.seed = seed;
  if (depth != "quick" && depth != "full") throw UsageError("depth must be quick or full");
  opt.depth = depth == "quick" ? verify::Depth::Quick : verify::Depth::Full;
  if (cap > 0) opt.time_cap = cap;
  opt.workers = workers;
  auto reports = verify::run_claims(split(claims), opt);
  Json doc = verify::report_json(reports, opt);
  if (report.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::ofstream(report) << doc.dump(2) << "\n";
    for (const auto& r : reports)
      std::cout << r.id << " " << verify::status_name(r.status) << (r.status == verify::Status::Discrepancy ? (r.matches_ledger ? " (recorded)" : " (new)") : "")
                << "  " << r.wall_seconds << " s\n";
  }
  const auto& summary = doc["summary"];
  const int code = summary["budget_exceeded"].get<bool>() ? kBudget : summary["ok"].get<bool>() ? kOk : kClaimFailure;
  if (code == kBudget) {
    // Timed-out checkers are still running on detached threads.
    std::cout.flush();
    std::fflush(nullptr);
    std::_Exit(code);
  }
  return code;
}

int run_build(const std::string& name, std::size_t n, const std::string& params, bool normal, bool pform) {
  if (name != "ED" && name != "scriptE") throw UsageError("--name must be ED or scriptE");
  auto vt = hypergeometric_table(n, n);
  auto p = parse_params(params, vt, n);
  auto sys = name == "ED" ? build_ed(n, p) : build_script_e(n, p);
  if (normal) sys = normal_form(sys);
  if (pform) sys = dform_to_pform(sys);
  std::cout << serialize(sys);
  return kOk;
}

int run_map(const std::string& apply, const std::string& invert) {
  if (apply.empty() == invert.empty()) throw UsageError("give exactly one of --apply or --invert");
  auto pt = parse_point(apply.empty() ? invert : apply);
  if (pt.size() != 4) throw UsageError("points have four coordinates");
  cover::Point p{pt[0], pt[1], pt[2], pt[3]};
  if (!apply.empty()) {
    auto z = cover::apply_f(p);
    std::cout << format_point({z.begin(), z.end()}) << "\n";
  } else {
    for (const auto& x : cover::invert_f(p).preimages) std::cout << format_point({x.begin(), x.end()}) << "\n";
  }
  return kOk;
}

int run_eval(const std::string& a, const std::string& b, const std::string& c, const std::string& x, unsigned order, const std::string& mode) {
  if (mode != "series" && mode != "integral" && mode != "both") throw UsageError("--mode must be series, integral or both");
  SeriesParams p{parse_rational(a), parse_point(b), parse_rational(c), order};
  auto pt = parse_point(x);
  if (p.b.size() != pt.size()) throw UsageError("--b and --x need the same length");
  std::cout.precision(18);
  if (mode != "integral") {
    auto r = fd_eval(p, pt);
    std::cout << "series value " << r.value << "\nseries tail_bound " << r.tail_bound << "\nseries terms " << r.terms << "\n";
  }
  if (mode != "series") {
    auto r = euler_integral_eval(p, pt);
    std::cout << "integral value " << r.value << "\nintegral error " << r.error << "\nintegral beta " << r.beta
              << "\nintegral normalized " << r.value / r.beta << "\n";
  }
  return kOk;
}

int run_compare(const std::string& file, int samples, std::uint64_t seed) {
  std::ifstream in(file);
  if (!in) throw UsageError("cannot read " + file);
  std::stringstream text;
  text << in.rdbuf();
  auto r = cover::compare_external(text.str(), verify::detail::invariant_pushforward(), samples, seed);
  Json coeffs = Json::array();
  for (const auto& c : r.coefficients)
    coeffs.push_back({{"k", c.k}, {"i", c.i}, {"j", c.j}, {"pointwise", c.pointwise}, {"points", c.points}, {"symbolic", c.symbolic ? Json(*c.symbolic) : Json()}});
  Json bad = Json::array();
  for (const auto& c : r.disagreements()) bad.push_back({{"k", c.k}, {"i", c.i}, {"j", c.j}});
  std::cout << Json{{"agrees", r.agrees()}, {"disagreements", bad}, {"coefficients", coeffs}}.dump(2) << "\n";
  return r.agrees() ? kOk : kClaimFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lauricella systems, the double cover f and claim checks"};
  app.require_subcommand(1);

  std::string claims, depth = "full", report;
  std::uint64_t seed = 42;
  double cap = 0;
  unsigned workers = 0;
  auto* v = app.add_subcommand("verify", "run claim checks and emit a JSON report");
  v->add_option("--claims", claims, "comma-separated ids, default all");
  v->add_option("--seed", seed);
  v->add_option("--depth", depth)->check(CLI::IsMember({"quick", "full"}));
  v->add_option("--report", report, "write the JSON report here");
  v->add_option("--time-cap", cap, "per-claim cap in seconds");
  v->add_option("--workers", workers);

  std::string name, params;
  std::size_t n = 1;
  bool normal = false, pform = false;
  auto* b = app.add_subcommand("build-system", "print a system in the text table format");
  b->add_option("--name", name)->required()->check(CLI::IsMember({"ED", "scriptE"}));
  b->add_option("--n", n)->required()->check(CLI::Range(1, 6));
  b->add_option("--params", params, "a=..,b=..,c=.. (symbolic when omitted)");
  b->add_flag("--normal-form", normal);
  b->add_flag("--pform", pform);

  std::string apply, invert;
  auto* m = app.add_subcommand("map", "apply f or invert it");
  m->add_option("--apply", apply);
  m->add_option("--invert", invert);

  std::string ea, eb, ec, ex, mode = "both";
  unsigned order = 20;
  auto* e = app.add_subcommand("eval-fd", "evaluate F_D by series and/or Euler integral");
  e->add_option("--a", ea)->required();
  e->add_option("--b", eb)->required();
  e->add_option("--c", ec)->required();
  e->add_option("--x", ex)->required();
  e->add_option("--order", order);
  e->add_option("--mode", mode)->check(CLI::IsMember({"series", "integral", "both"}));

  std::string file;
  int samples = 10;
  std::uint64_t cseed = 42;
  auto* c = app.add_subcommand("compare-external", "compare a partial-form system file with the pushforward");
  c->add_option("file", file)->required();
  c->add_option("--samples", samples);
  c->add_option("--seed", cseed);

  auto* x = app.add_subcommand("export", "print the pushforward of script_E(5/3,1/3,7/3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int code = app.exit(err);
    return code == 0 ? kOk : kUsage;
  }
  try {
    if (*v) return run_verify(claims, seed, depth, report, cap, workers);
    if (*b) return run_build(name, n, params, normal, pform);
    if (*m) return run_map(apply, invert);
    if (*e) return run_eval(ea, eb, ec, ex, order, mode);
    if (*c) return run_compare(file, samples, cseed);
    if (*x) {
      std::cout << serialize(verify::detail::invariant_pushforward());
      return kOk;
    }
  } catch (const UsageError& err) {
    std::cerr << "usage: " << err.what() << "\n";
    return kUsage;
  } catch (const Error& err) {
    std::cerr << errc_name(err.code()) << ": " << err.what() << "\n";
    return err.code() == Errc::UnknownClaimId || err.code() == Errc::ParseError || err.code() == Errc::InvalidArgument || err.code() == Errc::ShapeMismatch ? kUsage : kClaimFailure;
  }
  return kUsage;
}
