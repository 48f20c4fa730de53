// Acceptance run: one PASS/FAIL line per criterion. Exit status 0 when every
// failing line is a ledgered discrepancy whose observed correction equals
// the recorded one; any other failure gives exit status 1.
#include <chrono>
#include <cstdio>

#include "lauricella/claims.hpp"
#include "polygen.hpp"

using namespace lauricella;
using namespace lauricella::verify;
namespace checks = lauricella::verify::detail;

namespace {

constexpr double kSeriesTol = 1e-9;    // F_D(1;1;2|1/2) against 2 ln 2
constexpr double kIntegralTol = 1e-6;  // Euler integral against B(a,c-a) F_D
constexpr std::uint64_t kSeed = 42;
constexpr int kFuzzCases = 1000;

struct Result {
  bool pass = false;
  std::string detail;
  // Set when the failure is the ledgered one: the criterion asks for
  // equality with a display that the computation contradicts.
  bool ledgered = false;
};

Outcome run(Outcome (*check)(const Context&), Depth depth = Depth::Full) { return check({kSeed, depth}); }

std::string checks_summary(const Json& details) {
  std::string out;
  if (!details.contains("checks")) return "no checks recorded";
  for (auto it = details["checks"].begin(); it != details["checks"].end(); ++it)
    if (!it.value().get<bool>()) out += (out.empty() ? "failed: " : ", ") + it.key();
  return out.empty() ? "all checks hold" : out;
}

Result criterion1() {
  auto o = run(checks::check_gauss);
  return {o.status == Status::Pass, "u'' coefficients " + o.details["first_order"].get<std::string>() + " and " + o.details["zeroth_order"].get<std::string>()};
}

Result criterion2() {
  auto o = run(checks::check_iota_sufficiency);
  return {o.status == Status::Pass, "symbolic n = 1, 2; n = 4 at " + o.details["n4_points"].dump() + " parameter points; " + checks_summary(o.details)};
}

Result criterion3() {
  auto o = run(checks::check_iota_necessity);
  return {o.status == Status::Pass, o.details["violations_with_nonzero_residual"].dump() + "/10 violating tuples leave a nonzero residual; " + checks_summary(o.details)};
}

Result criterion4() {
  auto o = run(checks::check_power_substitution);
  return {o.status == Status::Pass, "n = 1..4 with symbolic parameters; " + checks_summary(o.details)};
}

Result criterion5() {
  auto reg = run(checks::check_regularity);
  auto inv = run(checks::check_invariant_parameters);
  const bool structured = reg.status == Status::Discrepancy && reg.details["correction"] == find_claim("C4").recorded;
  return {structured && inv.status == Status::Pass,
          "regular along each x_j = 0 at (5/3, 1/3, 7/3); condition value " + reg.details["value_at_invariant_parameters"].get<std::string>() +
              "; derived right-hand side 1 (printed 0 reported as discrepancy); on a = (n+1)b, c = nb+1 the value is " +
              inv.details["regularity_value_on_solution"].get<std::string>() + " so b = 1/(n-1)"};
}

Result criterion6() {
  auto pi = run(checks::check_pi_table);
  auto nf = run(checks::check_normal_forms);
  const bool first_order = pi.details["checks"]["first_order_table"].get<bool>();
  const bool protocol = nf.details["checks"]["random_points_off_conditions"].get<bool>() && nf.details["checks"]["sufficiency_n3"].get<bool>();
  const std::string factor = pi.details["correction"]["zeroth_order_factor"].get<std::string>();
  Result r;
  r.pass = first_order && factor == "1" && protocol;
  r.detail = std::string("first-order table ") + (first_order ? "equal" : "differs") + "; zeroth-order ratio computed/printed = " + factor +
             "; sufficiency n <= 3 and necessity at 10 random points " + (protocol ? "hold" : "fail") +
             "; the iff is sharper: coincidence exactly on a + c - 1 = sum b (witness with unequal b coincides: " +
             nf.details["witness"]["normal_forms_coincide"].dump() + ")";
  r.ledgered = !r.pass && first_order && protocol && factor == find_claim("C6").recorded["zeroth_order_factor"];
  return r;
}

Result criterion7() {
  auto cover = run(checks::check_double_cover);
  auto jac = run(checks::check_jacobian);
  const bool rest = cover.status == Status::Pass;
  const std::string ratio = jac.details["correction"]["ratio"].get<std::string>();
  Result r;
  r.pass = rest && ratio == "1";
  r.detail = "oracle " + cover.details["oracle_matches"].dump() + "/100, round trips " + cover.details["round_trips"].dump() +
             "/100, f o # = f symbolic: " + cover.details["checks"]["components_sharp_invariant"].dump() +
             "; symbolic Jacobian / printed display = " + ratio;
  r.ledgered = !r.pass && rest && ratio == find_claim("C10").recorded["ratio"];
  return r;
}

Result criterion8() {
  auto d = run(checks::check_divisor_pullback);
  auto s = run(checks::check_discriminant);
  return {d.status == Status::Pass && s.status == Status::Pass,
          "f*(D): exponents equal, constant ratio " + d.details["constant_ratio"].get<std::string>() + "; discriminant exact: " + s.details["exact"].dump()};
}

Result criterion9() {
  auto o = run(checks::check_pushforward);
  return {o.status == Status::Pass, "flat at " + o.details["flat_points"].dump() + "/" + o.details["sampled_points"].dump() + " points, stray denominators " +
                                        o.details["stray_denominators"].dump() + ", self comparison over " + o.details["self_comparison_coefficients"].dump() +
                                        " coefficients; " + checks_summary(o.details)};
}

Result criterion10() {
  auto o = run(checks::check_series);
  const double series = o.details["gauss_log_error"], grid = o.details["integral_grid_max_error"], restricted = o.details["restricted_instance_error"];
  const bool ok = o.status == Status::Pass && series < kSeriesTol && grid < kIntegralTol && restricted < kIntegralTol;
  char buf[256];
  std::snprintf(buf, sizeof buf, "2ln2 error %.2e, grid max error %.2e, n=9 instance error %.2e, FD residual %.2e; ", series, grid, restricted,
                o.details["finite_difference_residual"].get<double>());
  return {ok, buf + checks_summary(o.details)};
}

// ---- kernel fuzz ------------------------------------------------------------

Result criterion11() {
  auto vt = VarTable::make({"x1", "x2", "x3"}, {"a"});
  lauricella::testing::PolyGen gen{std::mt19937_64(kSeed), vt};
  int ring = 0, leibniz = 0, hom = 0, print = 0;
  for (int i = 0; i < kFuzzCases; ++i) {
    auto p = gen.poly(), q = gen.poly(), r = gen.poly();
    ring += (p * q) * r == p * (q * r) && p * (q + r) == p * q + p * r && p * q == q * p && (p + q) - q == p;
    leibniz += diff(p * q, 0) == p * diff(q, 0) + q * diff(p, 0) && diff(p * q, 2) == p * diff(q, 2) + q * diff(p, 2);
    auto pt = gen.point();
    hom += (p * q).eval(pt) == p.eval(pt) * q.eval(pt) && (p + r).eval(pt) == p.eval(pt) + r.eval(pt);
  }
  auto vt2 = VarTable::make({"x1", "x2"}, {"b1"});
  lauricella::testing::PolyGen rgen{std::mt19937_64(kSeed + 1), vt2};
  auto x1 = parse_expr("x1", vt2), x2 = parse_expr("x2", vt2), b = parse_expr("b1", vt2);
  const auto one_minus = parse_expr("1 - x1", vt2);
  for (int i = 0; i < kFuzzCases; ++i) {
    RationalFunction f = RationalFunction(rgen.poly()) / one_minus + b * x2 / (x1 - x2) * RationalFunction(rgen.poly()) +
                         RationalFunction(rgen.poly()) / (x1 + x2).pow(2);
    auto text = print_expr(f);
    auto g = parse_expr(text, vt2);
    print += equal(g, f) && print_expr(g) == text && equal(reduce(f), f);
  }
  const bool ok = ring == kFuzzCases && leibniz == kFuzzCases && hom == kFuzzCases && print == kFuzzCases;
  return {ok, "ring axioms " + std::to_string(ring) + ", Leibniz " + std::to_string(leibniz) + ", evaluation homomorphism " + std::to_string(hom) +
                  ", parse/print round trip " + std::to_string(print) + " of " + std::to_string(kFuzzCases) + " cases each"};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  Result (*body)();
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Gauss degeneration (C1)", 1, criterion1},
      {2, "restriction sufficiency (C2/C3)", 60, criterion2},
      {3, "restriction necessity", 30, criterion3},
      {4, "square substitution (C5)", 120, criterion4},
      {5, "regularity and b = 1/(n-1) (C4, C9)", 60, criterion5},
      {6, "inversion table and normal forms (C6-C8)", 120, criterion6},
      {7, "map f (C10-C12)", 300, criterion7},
      {8, "f*(D) and discriminant (C11, C13)", 1800, criterion8},
      {9, "pushforward structure (C15)", 1800, criterion9},
      {10, "series and integral (C16)", 120, criterion10},
      {11, "kernel properties", 60, criterion11},
  };
  int unexpected = 0, ledgered = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.body();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = r.pass && in_time;
    const bool known = !pass && r.ledgered && in_time;
    std::printf("[%s] %2d %s: %s (%.2f s, limit %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id, c.name, r.detail.c_str(), secs, c.limit_seconds,
                known ? " [ledgered discrepancy]" : !in_time ? " [over time limit]" : "");
    std::fflush(stdout);
    if (!pass) ++(known ? ledgered : unexpected);
  }
  std::printf("summary: %zu criteria, %d failed (%d ledgered, %d unexpected)\n", criteria.size(), ledgered + unexpected, ledgered, unexpected);
  return unexpected == 0 ? 0 : 1;
}
