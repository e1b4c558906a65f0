#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "recipe/all.hpp"

#ifndef RECIPE_SOURCE_DIR
#define RECIPE_SOURCE_DIR "."
#endif

namespace fixtures {

inline std::string source_path(const std::string& rel) { return std::string(RECIPE_SOURCE_DIR) + "/" + rel; }

inline std::string read_text(const std::string& rel) {
  std::ifstream in(source_path(rel), std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline const std::string& bundle_text() {
  static const std::string text = read_text("data/paper_bundle.json");
  return text;
}

/// The shipped bundle, parsed once.
inline const recipe::WorkspaceBundle& bundle() {
  static const recipe::WorkspaceBundle ws = recipe::parse_bundle(bundle_text());
  return ws;
}

inline const recipe::Hierarchies& h() { return bundle().hierarchies; }

inline recipe::Recipe get(const std::string& id) { return bundle().recipe(id); }

inline recipe::TypeId com(const std::string& name) { return h().comestible.resolve(name); }
inline recipe::TypeId act(const std::string& name) { return h().action.resolve(name); }

}  // namespace fixtures
