#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lauricella/error.hpp"

namespace lauricella {

enum class VarClass { Coordinate, Parameter };

/// Ordered, immutable list of variable names. Polynomials refer to their
/// variables by position in this table.
class VarTable {
 public:
  static constexpr std::size_t kMaxVars = 24;

  static std::shared_ptr<const VarTable> make(std::vector<std::string> coordinates,
                                              std::vector<std::string> parameters = {}) {
    std::vector<std::string> names;
    std::vector<VarClass> classes;
    for (auto& c : coordinates) {
      names.push_back(std::move(c));
      classes.push_back(VarClass::Coordinate);
    }
    for (auto& p : parameters) {
      names.push_back(std::move(p));
      classes.push_back(VarClass::Parameter);
    }
    return std::shared_ptr<const VarTable>(new VarTable(std::move(names), std::move(classes)));
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  VarClass var_class(std::size_t i) const { return classes_.at(i); }
  bool is_coordinate(std::size_t i) const { return classes_.at(i) == VarClass::Coordinate; }
  const std::vector<std::string>& names() const noexcept { return names_; }

  std::optional<std::size_t> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t index_of(std::string_view name) const {
    auto i = find(name);
    if (!i) throw Error(Errc::UnknownVariable, std::string(name));
    return *i;
  }

  std::vector<std::size_t> coordinates() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i)
      if (is_coordinate(i)) out.push_back(i);
    return out;
  }

  bool operator==(const VarTable& other) const {
    return names_ == other.names_ && classes_ == other.classes_;
  }

  /// Lazily built per-table cache slot (used for the factor candidate set).
  template <typename T, typename Build>
  const T& cached(Build&& build) const {
    std::call_once(cache_once_, [&] { cache_ = std::make_shared<T>(build()); });
    return *std::static_pointer_cast<const T>(cache_);
  }

 private:
  VarTable(std::vector<std::string> names, std::vector<VarClass> classes)
      : names_(std::move(names)), classes_(std::move(classes)) {
    if (names_.size() > kMaxVars)
      throw Error(Errc::InvalidArgument, "too many variables (" + std::to_string(names_.size()) + ")");
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (!index_.emplace(names_[i], i).second)
        throw Error(Errc::InvalidArgument, "duplicate variable name " + names_[i]);
    }
  }

  std::vector<std::string> names_;
  std::vector<VarClass> classes_;
  std::unordered_map<std::string, std::size_t> index_;
  mutable std::once_flag cache_once_;
  mutable std::shared_ptr<const void> cache_;
};

using VarTablePtr = std::shared_ptr<const VarTable>;

inline bool same_table(const VarTablePtr& a, const VarTablePtr& b) {
  return a == b || (a && b && *a == *b);
}

inline void require_same_table(const VarTablePtr& a, const VarTablePtr& b) {
  if (!same_table(a, b)) throw Error(Errc::VarTableMismatch, "operands live over different variable tables");
}

/// "x" + 1..n style names.
inline std::vector<std::string> indexed_names(std::string_view stem, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(std::string(stem) + std::to_string(i));
  return out;
}

}  // namespace lauricella
