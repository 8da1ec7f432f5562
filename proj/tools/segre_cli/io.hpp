#pragma once

// JSON encoding of shapes, points and tangents. Every document carries
// "schema": 1.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "segre/aggregate.hpp"
#include "segre/segre.hpp"

namespace segre::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;
// Largest |<w, u>| accepted for a file-supplied tangent w at factor u, relative
// to max(1, |w|); the remainder is projected away.
inline constexpr double kTangentTolerance = 1e-9;

inline void check_schema(const json& doc) {
  if (!doc.is_object()) throw ShapeMismatch("document must be a JSON object");
  if (!doc.contains("schema")) throw ShapeMismatch("missing \"schema\" field");
  const json& v = doc.at("schema");
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion) {
    throw ShapeMismatch("unsupported schema version " + v.dump() + " (expected " +
                        std::to_string(kSchemaVersion) + ")");
  }
}

inline json with_schema(json body) {
  body["schema"] = kSchemaVersion;
  return body;
}

// `alpha_override` wins over the file's alpha; one of the two must exist.
inline ManifoldShape shape_from_json(const json& j, std::optional<double> alpha_override = {}) {
  auto dims = j.at("dims").get<std::vector<int>>();
  auto mults = j.contains("mults") ? j.at("mults").get<std::vector<int>>()
                                   : std::vector<int>(dims.size(), 1);
  double alpha = 0.0;
  if (alpha_override) {
    alpha = *alpha_override;
  } else if (j.contains("alpha") && !j.at("alpha").is_null()) {
    alpha = j.at("alpha").get<double>();
  } else {
    throw ShapeMismatch("shape has no alpha and none was given on the command line");
  }
  return ManifoldShape(std::move(dims), std::move(mults), alpha);
}

inline json shape_to_json(const ManifoldShape& s) {
  return {{"dims", s.dims()}, {"mults", s.mults()}, {"alpha", s.alpha()}};
}

inline Vector vector_from_json(const json& j) {
  const auto xs = j.get<std::vector<double>>();
  Vector v(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i])) throw ShapeMismatch("non-finite coordinate");
    v[static_cast<Eigen::Index>(i)] = xs[i];
  }
  return v;
}

inline json vector_to_json(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

inline RawTerm raw_term_from_json(const json& j) {
  RawTerm t;
  t.lambda = j.at("lambda").get<double>();
  for (const auto& f : j.at("factors")) t.factors.push_back(vector_from_json(f));
  return t;
}

// Factors are normalized on load with their norms folded into lambda.
inline SegrePoint point_from_json(const ManifoldShape& shape, const json& j) {
  return normalize_term(shape, raw_term_from_json(j));
}

// Like point_from_json but keeps the representative exactly as given (up to
// normalization), which matters when a tangent refers to it.
inline PreSegrePoint pre_point_from_json(const ManifoldShape& shape, const json& j) {
  const RawTerm t = raw_term_from_json(j);
  if (!(t.lambda > 0.0)) throw ShapeMismatch("a base point needs a positive lambda");
  if (t.factors.size() != shape.order()) throw ShapeMismatch("wrong number of factors");
  double lambda = t.lambda;
  std::vector<UnitVector> factors;
  for (std::size_t i = 0; i < t.factors.size(); ++i) {
    factors.push_back(UnitVector::normalize(t.factors[i]));
    lambda *= std::pow(t.factors[i].norm(), shape.mult(i));
  }
  return PreSegrePoint(shape, lambda, std::move(factors));
}

inline json point_to_json(const PreSegrePoint& p) {
  json factors = json::array();
  for (const auto& u : p.factors()) factors.push_back(vector_to_json(u.coords()));
  return {{"lambda", p.lambda()}, {"factors", factors}};
}

inline json point_to_json(const SegrePoint& p) { return point_to_json(p.rep()); }

inline PreSegreTangent tangent_from_json(const PreSegrePoint& base, const json& j) {
  const double lambda_dot = j.at("lambda_dot").get<double>();
  const json& dots = j.at("factor_dots");
  if (dots.size() != base.order()) throw ShapeMismatch("wrong number of factor tangents");
  std::vector<Vector> vecs;
  for (std::size_t i = 0; i < base.order(); ++i) {
    Vector w = vector_from_json(dots.at(i));
    if (w.size() != base.factor(i).size()) {
      throw ShapeMismatch("factor tangent " + std::to_string(i) + " has the wrong dimension");
    }
    const double radial = w.dot(base.factor(i).coords());
    if (std::abs(radial) > kTangentTolerance * std::max(1.0, w.norm())) {
      throw ShapeMismatch("factor tangent " + std::to_string(i) +
                          " is not orthogonal to its factor");
    }
    vecs.push_back(std::move(w));
  }
  return PreSegreTangent::project(base, lambda_dot, vecs);
}

inline json tangent_to_json(const PreSegreTangent& v) {
  json dots = json::array();
  for (const auto& w : v.factor_dots()) dots.push_back(vector_to_json(w.vec()));
  return {{"lambda_dot", v.lambda_dot()}, {"factor_dots", dots}};
}

inline Decomposition decomposition_from_json(const ManifoldShape& shape, const json& terms) {
  if (!terms.is_array()) throw ShapeMismatch("a decomposition must be a list of terms");
  Decomposition d;
  for (const auto& t : terms) d.push_back(point_from_json(shape, t));
  return d;
}

inline json decomposition_to_json(const Decomposition& d) {
  json out = json::array();
  for (const auto& t : d) out.push_back(point_to_json(t));
  return out;
}

}  // namespace segre::io
