#pragma once

// Game file format (JSON):
//
//   {
//     "start": "s0",
//     "states": [
//       {"id": "s0", "kind": "coin", "arcs": ["s0", "bot"]},
//       {"id": "bot", "kind": "terminal"}
//     ]
//   }
//
// Canonical output keeps declaration order and uses two-space indentation.

#include <string>
#include <string_view>

#include <json.hpp>

#include "ssg/game.hpp"

namespace ssg {

class parse_error : public std::runtime_error {
 public:
  parse_error(std::size_t line, std::string field, const std::string& what)
      : std::runtime_error(format(line, field, what)), line_(line), field_(std::move(field)) {}
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  static std::string format(std::size_t line, const std::string& field, const std::string& what) {
    std::string s = "parse error";
    if (line > 0) s += " at line " + std::to_string(line);
    if (!field.empty()) s += " in '" + field + "'";
    return s + ": " + what;
  }
  std::size_t line_;
  std::string field_;
};

namespace detail {

inline std::size_t line_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace detail

/// Parses without validating the arena itself.
inline GameDescription parse_game_description(std::string_view text) {
  using nlohmann::ordered_json;
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw parse_error(detail::line_of(text, e.byte), "", e.what());
  }
  if (!doc.is_object()) throw parse_error(1, "", "top level must be an object");
  for (const auto& [key, _] : doc.items())
    if (key != "start" && key != "states") throw parse_error(0, key, "unknown field");
  if (!doc.contains("start") || !doc["start"].is_string())
    throw parse_error(0, "start", "missing or not a string");
  if (!doc.contains("states") || !doc["states"].is_array())
    throw parse_error(0, "states", "missing or not an array");

  GameDescription d;
  d.start = doc["start"].get<std::string>();
  std::size_t n = 0;
  for (const auto& s : doc["states"]) {
    const std::string where = "states[" + std::to_string(n++) + "]";
    if (!s.is_object()) throw parse_error(0, where, "state must be an object");
    for (const auto& [key, _] : s.items())
      if (key != "id" && key != "kind" && key != "arcs") throw parse_error(0, where + "." + key, "unknown field");
    if (!s.contains("id") || !s["id"].is_string()) throw parse_error(0, where + ".id", "missing or not a string");
    if (!s.contains("kind") || !s["kind"].is_string())
      throw parse_error(0, where + ".kind", "missing or not a string");
    StateDecl decl;
    decl.id = s["id"].get<std::string>();
    try {
      decl.kind = parse_state_kind(s["kind"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw parse_error(0, where + ".kind", e.what());
    }
    if (s.contains("arcs")) {
      if (!s["arcs"].is_array()) throw parse_error(0, where + ".arcs", "not an array");
      for (const auto& a : s["arcs"]) {
        if (!a.is_string()) throw parse_error(0, where + ".arcs", "arc destination must be a string");
        decl.arcs.push_back(a.get<std::string>());
      }
    }
    d.states.push_back(std::move(decl));
  }
  return d;
}

/// Parses and validates; throws parse_error or invalid_game.
inline Game load_game(std::string_view text) { return Game(parse_game_description(text)); }

inline nlohmann::ordered_json to_json(const GameDescription& d) {
  nlohmann::ordered_json doc;
  doc["start"] = d.start;
  doc["states"] = nlohmann::ordered_json::array();
  for (const auto& s : d.states) {
    nlohmann::ordered_json j;
    j["id"] = s.id;
    j["kind"] = to_string(s.kind);
    if (s.kind != StateKind::terminal) j["arcs"] = s.arcs;
    doc["states"].push_back(std::move(j));
  }
  return doc;
}

inline std::string store_game(const Game& g) { return to_json(g.describe()).dump(2) + "\n"; }

}  // namespace ssg
