#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace recipe {

enum class ErrorCode {
  cycle_detected,
  multiple_roots,
  no_root,
  dangling_edge,
  duplicate_alias,
  unknown_type,
  unknown_node,
  untyped_node,
  kind_mismatch,
  comparable_comestible_pair,
  invalid_recipe,
  kind_conflict,
  not_isomorphic,
  not_subrecipe,
  budget_exceeded,
  schema_error,
  unknown_reference,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::cycle_detected: return "CycleDetected";
    case ErrorCode::multiple_roots: return "MultipleRoots";
    case ErrorCode::no_root: return "NoRoot";
    case ErrorCode::dangling_edge: return "DanglingEdge";
    case ErrorCode::duplicate_alias: return "DuplicateAlias";
    case ErrorCode::unknown_type: return "UnknownType";
    case ErrorCode::unknown_node: return "UnknownNode";
    case ErrorCode::untyped_node: return "UntypedNode";
    case ErrorCode::kind_mismatch: return "KindMismatch";
    case ErrorCode::comparable_comestible_pair: return "ComparableComestiblePair";
    case ErrorCode::invalid_recipe: return "InvalidRecipe";
    case ErrorCode::kind_conflict: return "KindConflict";
    case ErrorCode::not_isomorphic: return "NotIsomorphic";
    case ErrorCode::not_subrecipe: return "NotSubrecipe";
    case ErrorCode::budget_exceeded: return "BudgetExceeded";
    case ErrorCode::schema_error: return "SchemaError";
    case ErrorCode::unknown_reference: return "UnknownReference";
  }
  return "Unknown";
}

/// Raised for malformed input and for searches that run out of budget.
/// Negative mathematical answers are never reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Value-or-failure for operations whose failure is a legitimate answer
/// (a failed composition, a rejected rewrite) rather than an input error.
template <typename T, typename E>
class Expected {
 public:
  Expected(T value) : data_(std::in_place_index<0>, std::move(value)) {}
  Expected(E error) : data_(std::in_place_index<1>, std::move(error)) {}

  bool has_value() const noexcept { return data_.index() == 0; }
  explicit operator bool() const noexcept { return has_value(); }

  const T& value() const& {
    if (!has_value()) throw std::logic_error("Expected::value() on failure");
    return std::get<0>(data_);
  }
  T&& value() && {
    if (!has_value()) throw std::logic_error("Expected::value() on failure");
    return std::get<0>(std::move(data_));
  }
  const E& error() const& {
    if (has_value()) throw std::logic_error("Expected::error() on success");
    return std::get<1>(data_);
  }

  const T& operator*() const& { return value(); }
  const T* operator->() const { return &value(); }

 private:
  std::variant<T, E> data_;
};

}  // namespace recipe
