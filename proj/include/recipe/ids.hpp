#pragma once

#include <compare>
#include <ostream>
#include <string>
#include <string_view>

namespace recipe {

enum class Kind { action, comestible };

inline std::string_view to_string(Kind kind) {
  return kind == Kind::action ? "action" : "comestible";
}

// Text identifiers get distinct types so a node can't be passed where a type
// is expected.
template <typename Tag>
struct TextId {
  std::string value;

  TextId() = default;
  explicit TextId(std::string v) : value(std::move(v)) {}
  explicit TextId(const char* v) : value(v) {}

  const std::string& str() const noexcept { return value; }
  bool empty() const noexcept { return value.empty(); }

  friend auto operator<=>(const TextId&, const TextId&) = default;
  friend bool operator==(const TextId&, const TextId&) = default;
  friend std::ostream& operator<<(std::ostream& os, const TextId& id) { return os << id.value; }
};

struct NodeTag {};
struct TypeTag {};

/// Workspace-global node identity; the same node may appear in several recipes.
using NodeId = TextId<NodeTag>;
/// Canonical type name inside one hierarchy (aliases already resolved).
using TypeId = TextId<TypeTag>;

namespace literals {
inline NodeId operator""_n(const char* s, std::size_t n) { return NodeId(std::string(s, n)); }
inline TypeId operator""_t(const char* s, std::size_t n) { return TypeId(std::string(s, n)); }
}  // namespace literals

}  // namespace recipe
