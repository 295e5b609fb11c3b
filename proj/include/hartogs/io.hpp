#pragma once

// JSON exchange formats: points as arrays of [re, im] pairs (z_1, ..., z_d, w),
// pairs as two such arrays, and a writer that prints every number with 17
// significant digits.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hartogs/hartogs_domain.hpp"

namespace hartogs::io {

using nlohmann::json;

inline json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ParameterError("complex scalars are numbers or [re, im] pairs, got " + j.dump());
}

inline json point_to_json(const HartogsPoint& p) {
  json a = json::array();
  for (const auto& c : p.z) a.push_back(complex_to_json(c));
  a.push_back(complex_to_json(p.w));
  return a;
}

inline HartogsPoint point_from_json(const json& j, int d) {
  if (!j.is_array() || static_cast<int>(j.size()) != d + 1)
    throw ParameterError("a point is an array of d + 1 = " + std::to_string(d + 1) + " coordinates (z..., w)");
  HartogsPoint p{BasePoint(d), Complex(0.0)};
  for (int i = 0; i < d; ++i) p.z(i) = complex_from_json(j[i]);
  p.w = complex_from_json(j[d]);
  return p;
}

inline HartogsPoint parse_point(const std::string& text, int d) {
  try {
    return point_from_json(json::parse(text), d);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("cannot parse point: ") + e.what());
  }
}

inline PointPair parse_pair(const std::string& text, int d) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("cannot parse pair: ") + e.what());
  }
  if (!j.is_array() || j.size() != 2) throw ParameterError("a pair is an array of two points");
  return {point_from_json(j[0], d), point_from_json(j[1], d)};
}

inline std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Pretty-prints with two-space indentation; floats use 17 significant digits.
inline void write_json(std::ostream& os, const json& j, int indent = 0) {
  const std::string pad(indent, ' ');
  const std::string inner(indent + 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << inner << json(key).dump() << ": ";
        write_json(os, value, indent + 2);
      }
      os << "\n" << pad << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      if (flat) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write_json(os, j[i], indent + 2);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << inner;
        write_json(os, j[i], indent + 2);
      }
      os << "\n" << pad << "]";
      return;
    }
    case json::value_t::number_float:
      os << format_number(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

inline std::string to_text(const json& j) {
  std::ostringstream os;
  write_json(os, j);
  os << "\n";
  return os.str();
}

}  // namespace hartogs::io
