#pragma once

// Patch document parsing and serialization (JSON). This header pulls in the
// vendored nlohmann/json; the rest of the library has no dependency on it.

#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "json.hpp"
#include "steiner/error.hpp"
#include "steiner/patch.hpp"

namespace steiner {

// On-disk patch description: six points and six weights keyed by the
// multi-index strings, plus an optional tolerance override.
//
//   {"net":{"002":[0,0,1], ...}, "weights":{"002":1, ...}, "tolerance":1e-9}
struct PatchDocument {
  std::array<std::array<double, 3>, 6> points{};
  std::array<double, 6> weights{};
  std::optional<double> tolerance;

  bool operator==(const PatchDocument&) const = default;
};

inline PatchDocument parse_patch(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, e.what());
  }
  if (!doc.is_object() || !doc.contains("net") || !doc.contains("weights")) {
    fail(ErrorKind::ValidationError, "document must contain \"net\" and \"weights\" objects");
  }
  const auto& net = doc["net"];
  const auto& weights = doc["weights"];
  if (!net.is_object() || !weights.is_object()) {
    fail(ErrorKind::ValidationError, "\"net\" and \"weights\" must be objects");
  }

  PatchDocument out;
  for (std::size_t k = 0; k < 6; ++k) {
    const std::string key = kNetKeys[k];
    if (!net.contains(key)) {
      fail(ErrorKind::ValidationError, "missing key: net." + key);
    }
    const auto& p = net[key];
    if (!p.is_array() || p.size() != 3) {
      fail(ErrorKind::ValidationError, "net." + key + " must be an array of 3 numbers");
    }
    for (std::size_t i = 0; i < 3; ++i) {
      if (!p[i].is_number()) {
        fail(ErrorKind::ValidationError, "net." + key + " must be an array of 3 numbers");
      }
      const double value = p[i].get<double>();
      if (!std::isfinite(value)) {
        fail(ErrorKind::ValidationError, "net." + key + " must be finite");
      }
      out.points[k][i] = value;
    }
    if (!weights.contains(key)) {
      fail(ErrorKind::ValidationError, "missing key: weights." + key);
    }
    const auto& w = weights[key];
    if (!w.is_number()) {
      fail(ErrorKind::ValidationError, "weights." + key + " must be a number");
    }
    out.weights[k] = w.get<double>();
    if (!std::isfinite(out.weights[k])) {
      fail(ErrorKind::ValidationError, "weights." + key + " must be finite");
    }
    if (out.weights[k] == 0.0) {
      fail(ErrorKind::ValidationError, "zero weight at weights." + key);
    }
  }
  if (doc.contains("tolerance")) {
    const auto& tol = doc["tolerance"];
    if (!tol.is_number() || tol.get<double>() <= 0.0) {
      fail(ErrorKind::ValidationError, "tolerance must be a positive number");
    }
    out.tolerance = tol.get<double>();
  }
  return out;
}

inline ControlNet to_control_net(const PatchDocument& doc, double eps = kDefaultTolerance) {
  std::array<Vec3, 6> points;
  for (std::size_t k = 0; k < 6; ++k) {
    points[k] = {doc.points[k][0], doc.points[k][1], doc.points[k][2]};
  }
  ControlNet net(points, doc.weights);
  net.validate_corners(eps);
  return net;
}

inline std::string serialize_patch(const PatchDocument& doc) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json net, weights;
  for (std::size_t k = 0; k < 6; ++k) {
    net[kNetKeys[k]] = doc.points[k];
    weights[kNetKeys[k]] = doc.weights[k];
  }
  j["net"] = net;
  j["weights"] = weights;
  if (doc.tolerance) j["tolerance"] = *doc.tolerance;
  return j.dump();
}

}  // namespace steiner
