#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lauricella/expression.hpp"
#include "lauricella/rational_function.hpp"

namespace lauricella {

/// D-form: D_i D_j u = sum_k p^k_ij D_k u + p^0_ij u with D_i = x_i d/dx_i.
/// Partial form: the same shape with plain partial derivatives.
enum class Form { D, Partial };

inline std::string form_name(Form f) { return f == Form::D ? "D" : "partial"; }

/// Second-order system in n unknown directions. Coefficients are indexed
/// p(k, i, j) with 1 <= i, j <= n and 0 <= k <= n (k = 0 is the zeroth-order
/// coefficient); storage is symmetric in (i, j).
class PdeSystem {
 public:
  PdeSystem(std::string name, Form form, VarTablePtr vars, std::vector<std::size_t> coords, bool with_zeroth = true)
      : name_(std::move(name)), form_(form), vars_(std::move(vars)), coords_(std::move(coords)), has_zeroth_(with_zeroth) {
    if (coords_.empty()) throw Error(Errc::InvalidDimension, "system needs at least one coordinate");
    for (auto c : coords_)
      if (c >= vars_->size() || !vars_->is_coordinate(c)) throw Error(Errc::NotACoordinate, "system coordinate index");
    const std::size_t n = coords_.size();
    coeffs_.assign((n + 1) * n * (n + 1) / 2, RationalFunction(Polynomial(vars_)));
  }

  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  std::size_t n() const noexcept { return coords_.size(); }
  Form form() const noexcept { return form_; }
  const VarTablePtr& vars() const noexcept { return vars_; }
  const std::vector<std::size_t>& coords() const noexcept { return coords_; }
  /// Table index of coordinate i (1-based).
  std::size_t coord(std::size_t i) const { return coords_.at(i - 1); }
  bool has_zeroth() const noexcept { return has_zeroth_; }

  const RationalFunction& p(std::size_t k, std::size_t i, std::size_t j) const {
    if (k == 0 && !has_zeroth_) throw Error(Errc::MissingZerothOrder, "system '" + name_ + "' has no zeroth-order coefficients");
    return coeffs_[index(k, i, j)];
  }

  void set(std::size_t k, std::size_t i, std::size_t j, RationalFunction value) {
    require_same_table(value.vars(), vars_);
    value.rebind(vars_);
    coeffs_[index(k, i, j)] = std::move(value);
  }

  void drop_zeroth() {
    has_zeroth_ = false;
    for (std::size_t i = 1; i <= n(); ++i)
      for (std::size_t j = i; j <= n(); ++j) coeffs_[index(0, i, j)] = RationalFunction(Polynomial(vars_));
  }
  void enable_zeroth() { has_zeroth_ = true; }

  /// For systems whose unknown lives on other coordinates than the table's:
  /// derivation j acts as sum_a frame[j-1][a-1] d/dx_a on coefficients.
  const std::vector<std::vector<RationalFunction>>& frame() const noexcept { return frame_; }
  void set_frame(std::vector<std::vector<RationalFunction>> frame) { frame_ = std::move(frame); }

  template <typename F>
  PdeSystem map_coefficients(F&& f) const {
    PdeSystem out = *this;
    for (std::size_t k = has_zeroth_ ? 0 : 1; k <= n(); ++k)
      for (std::size_t i = 1; i <= n(); ++i)
        for (std::size_t j = i; j <= n(); ++j) out.coeffs_[index(k, i, j)] = f(k, i, j, coeffs_[index(k, i, j)]);
    return out;
  }

 private:
  std::size_t index(std::size_t k, std::size_t i, std::size_t j) const {
    const std::size_t n = coords_.size();
    if (k > n || i < 1 || j < 1 || i > n || j > n) throw Error(Errc::ShapeMismatch, "coefficient index out of range");
    if (i > j) std::swap(i, j);
    std::size_t pair = (i - 1) * n - (i - 1) * (i - 2) / 2 + (j - i);
    return k * (n * (n + 1) / 2) + pair;
  }

  std::string name_;
  Form form_;
  VarTablePtr vars_;
  std::vector<std::size_t> coords_;
  bool has_zeroth_;
  std::vector<RationalFunction> coeffs_;
  std::vector<std::vector<RationalFunction>> frame_;
};

/// Text table: header "system <name> n=<n> form=<D|partial>" then one line
/// "p[k][i][j] = <expr>" per stored coefficient (i <= j).
inline std::string serialize(const PdeSystem& sys) {
  std::ostringstream out;
  out << "system " << sys.name() << " n=" << sys.n() << " form=" << form_name(sys.form()) << "\n";
  for (std::size_t k = sys.has_zeroth() ? 0 : 1; k <= sys.n(); ++k)
    for (std::size_t i = 1; i <= sys.n(); ++i)
      for (std::size_t j = i; j <= sys.n(); ++j)
        out << "p[" << k << "][" << i << "][" << j << "] = " << print_expr(sys.p(k, i, j)) << "\n";
  return out.str();
}

/// Inverse of serialize. The first n coordinates of `vars` are the system's.
inline PdeSystem deserialize(const std::string& text, const VarTablePtr& vars) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& why) { throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": " + why); };
  std::optional<PdeSystem> sys;
  bool saw_zeroth = false;
  std::vector<std::vector<bool>> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!sys) {
      std::istringstream h(line);
      std::string kw, name, nfield, ffield;
      if (!(h >> kw >> name >> nfield >> ffield) || kw != "system" || nfield.rfind("n=", 0) != 0 || ffield.rfind("form=", 0) != 0)
        fail("bad header");
      std::size_t n = 0;
      try {
        n = std::stoul(nfield.substr(2));
      } catch (...) {
        fail("bad dimension");
      }
      auto form_text = ffield.substr(5);
      if (form_text != "D" && form_text != "partial") fail("bad form '" + form_text + "'");
      auto coords = vars->coordinates();
      if (n == 0 || coords.size() < n) throw Error(Errc::ShapeMismatch, "table has fewer than n coordinates");
      coords.resize(n);
      sys.emplace(name, form_text == "D" ? Form::D : Form::Partial, vars, coords, true);
      seen.assign(n + 1, std::vector<bool>(n * n, false));
      continue;
    }
    std::size_t k, i, j;
    char rest[2];
    if (std::sscanf(line.c_str(), " p[%zu][%zu][%zu] %1[=]", &k, &i, &j, rest) != 4) fail("expected 'p[k][i][j] = expr'");
    auto eq = line.find('=');
    if (k > sys->n() || i < 1 || j < 1 || i > sys->n() || j > sys->n()) fail("coefficient index out of range");
    RationalFunction value = [&] {
      try {
        return parse_expr(line.substr(eq + 1), vars);
      } catch (const Error& e) {
        if (e.code() == Errc::SyntaxError || e.code() == Errc::UnknownVariable || e.code() == Errc::DivisionByZeroFunction)
          fail(e.what());
        throw;
      }
    }();
    std::size_t a = std::min(i, j), b = std::max(i, j);
    if (seen[k][(a - 1) * sys->n() + (b - 1)] && !equal(sys->p(k, a, b), value)) fail("asymmetric coefficient p[" + std::to_string(k) + "]");
    seen[k][(a - 1) * sys->n() + (b - 1)] = true;
    if (k == 0) saw_zeroth = true;
    sys->set(k, i, j, value);
  }
  if (!sys) throw Error(Errc::ParseError, "missing header");
  if (!saw_zeroth) sys->drop_zeroth();
  return *sys;
}

}  // namespace lauricella
