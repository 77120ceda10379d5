#pragma once

// JSON encodings of graphs, gadgets, certificates and reports.
//
// Output is deterministic: objects have sorted keys and every float is
// rounded to 12 significant digits before printing, so identical runs give
// byte-identical documents.

#include <json.hpp>
#include <string>

#include "twospin/construct.hpp"
#include "twospin/gadgets.hpp"
#include "twospin/recursion.hpp"
#include "twospin/reductions.hpp"
#include "twospin/spin_core.hpp"

namespace twospin {

using Json = nlohmann::json;

inline constexpr int kJsonSchemaVersion = 1;

/// x rounded to 12 significant digits.
double round12(double x);

inline Json number_json(double x) { return round12(x); }

/// Number for doubles; for exact scalars the rounded value plus the exact
/// text under `<key>_exact` is added by put_scalar().
template <class Scalar>
void put_scalar(Json& object, const std::string& key, const Scalar& value) {
  object[key] = number_json(to_double(value));
  if constexpr (is_exact_v<Scalar>) object[key + "_exact"] = to_string(value);
}

/// Reads a JSON number or string into Scalar. In exact mode a number is
/// read through its shortest decimal form, so 0.8 becomes 4/5; strings may
/// be decimals or fractions such as "4/5".
template <class Scalar>
Scalar scalar_from_json(const Json& j) {
  if (j.is_string()) return scalar_from_text<Scalar>(j.get<std::string>());
  if (!j.is_number()) throw DomainError("expected a number, got " + j.dump());
  if constexpr (is_exact_v<Scalar>) {
    if (j.is_number_integer()) return scalar_from_text<Scalar>(j.dump());
    return scalar_from_double<Scalar>(j.get<double>());
  } else {
    return j.get<double>();
  }
}

/// {"beta", "gamma", "vertices": [{"id", "field"}], "edges": [[u, v]], "output"}
template <class Scalar>
Json graph_to_json(const FieldedGraph<Scalar>& g, const SpinParams<Scalar>& p) {
  Json j;
  put_scalar(j, "beta", p.beta);
  put_scalar(j, "gamma", p.gamma);
  Json vertices = Json::array();
  for (const auto& vertex : g.vertices()) {
    Json v;
    v["id"] = vertex.id;
    put_scalar(v, "field", vertex.field);
    vertices.push_back(std::move(v));
  }
  j["vertices"] = std::move(vertices);
  Json edges = Json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back(Json::array({g.id(u), g.id(v)}));
  j["edges"] = std::move(edges);
  j["output"] = g.output() ? Json(g.id(*g.output())) : Json(nullptr);
  return j;
}

/// Parses graph JSON. The instance mu is the "mu" key when present,
/// otherwise the largest vertex field (1 for an empty graph).
template <class Scalar>
Instance<Scalar> graph_from_json(const Json& j) {
  if (!j.is_object()) throw DomainError("graph JSON must be an object");
  for (const char* key : {"beta", "gamma", "vertices"}) {
    if (!j.contains(key)) throw DomainError(std::string("graph JSON lacks \"") + key + "\"");
  }
  Instance<Scalar> out;
  Scalar largest(0);
  for (const Json& vertex : j.at("vertices")) {
    if (!vertex.contains("id") || !vertex.contains("field")) {
      throw DomainError("every vertex needs \"id\" and \"field\"");
    }
    const Json& id = vertex.at("id");
    std::string name = id.is_string() ? id.get<std::string>() : id.dump();
    Scalar field = scalar_from_json<Scalar>(vertex.at("field"));
    if (largest < field) largest = field;
    out.graph.add_vertex(std::move(name), std::move(field));
  }
  if (j.contains("edges")) {
    for (const Json& edge : j.at("edges")) {
      if (!edge.is_array() || edge.size() != 2) throw DomainError("edges must be [u, v] pairs");
      auto name = [](const Json& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
      out.graph.add_edge(name(edge[0]), name(edge[1]));
    }
  }
  if (j.contains("output") && !j.at("output").is_null()) {
    const Json& o = j.at("output");
    out.graph.set_output(out.graph.require(o.is_string() ? o.get<std::string>() : o.dump()));
  }
  Scalar mu = j.contains("mu") ? scalar_from_json<Scalar>(j.at("mu"))
                               : (largest > Scalar(0) ? largest : Scalar(1));
  out.params = SpinParams<Scalar>(scalar_from_json<Scalar>(j.at("beta")),
                                  scalar_from_json<Scalar>(j.at("gamma")), std::move(mu));
  return out;
}

Json gadget_to_json(const Gadget& g);
Gadget gadget_from_json(const Json& j);

template <class Scalar>
Json certificate_to_json(const ReductionCertificate<Scalar>& cert) {
  Json j;
  j["kind"] = cert.kind;
  j["input"] = graph_to_json(cert.input.graph, cert.input.params);
  j["output"] = graph_to_json(cert.output.graph, cert.output.params);
  put_scalar(j, "scale", cert.scale);
  j["relation"] = cert.relation == ScaleRelation::OutputIsScaledInput ? "Z_out = scale * Z_in"
                                                                      : "Z_in = scale * Z_out";
  j["verified"] = cert.verified ? Json(*cert.verified) : Json("not-checked");
  if (cert.z_input) put_scalar(j, "z_input", *cert.z_input);
  if (cert.z_output) put_scalar(j, "z_output", *cert.z_output);
  if (cert.verified) j["relative_error"] = number_json(cert.relative_error);
  return j;
}

Json decay_constants_to_json(const DecayConstants& c);
Json thresholds_to_json(const HardnessThresholds& t);
Json report_to_json(const ConstructReport& report, bool include_gadget);
Json selfloop_to_json(const SelfLoopRealization& r, const SpinParams<double>& p, double target,
                      long long m);

/// Adds "schema": 1 and prints with two-space indentation.
std::string dump_document(Json j);

}  // namespace twospin
