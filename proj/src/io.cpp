#include "twospin/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace twospin {

double round12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.12g", x);
  return std::strtod(buffer, nullptr);
}

Json gadget_to_json(const Gadget& g) {
  Json j;
  switch (g.kind()) {
    case Gadget::Kind::Star:
      j["kind"] = "star";
      j["w"] = g.star_size();
      break;
    case Gadget::Kind::Tree:
      j["kind"] = "tree";
      j["d"] = g.arity();
      j["t"] = g.depth_parameter();
      break;
    case Gadget::Kind::Comb: {
      j["kind"] = "comb";
      Json children = Json::array();
      for (const Gadget& child : g.children()) children.push_back(gadget_to_json(child));
      j["children"] = std::move(children);
      break;
    }
    case Gadget::Kind::Leaf:
      j["kind"] = "leaf";
      j["field"] = number_json(g.leaf_field());
      break;
  }
  return j;
}

Gadget gadget_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw DomainError("gadget JSON needs a \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  auto integer = [&](const char* key) {
    if (!j.contains(key) || !j.at(key).is_number_integer()) {
      throw DomainError(kind + " gadget needs an integer \"" + key + "\"");
    }
    return j.at(key).get<long long>();
  };
  if (kind == "star") {
    const long long w = integer("w");
    if (w < 0) throw DomainError("star size must be non-negative");
    return Gadget::star(static_cast<std::uint64_t>(w));
  }
  if (kind == "tree") return Gadget::tree(static_cast<int>(integer("d")), static_cast<int>(integer("t")));
  if (kind == "comb") {
    if (!j.contains("children") || !j.at("children").is_array()) {
      throw DomainError("comb gadget needs a \"children\" array");
    }
    std::vector<Gadget> children;
    for (const Json& child : j.at("children")) children.push_back(gadget_from_json(child));
    return Gadget::comb(std::move(children));
  }
  if (kind == "leaf") {
    if (!j.contains("field")) throw DomainError("leaf gadget needs a \"field\"");
    return Gadget::leaf(j.at("field").get<double>());
  }
  throw DomainError("unknown gadget kind '" + kind + "'");
}

Json decay_constants_to_json(const DecayConstants& c) {
  return Json{{"alpha", number_json(c.alpha)},
              {"decay_rate", number_json(c.decay_rate)},
              {"eta", number_json(c.eta)},
              {"iota", number_json(c.iota)},
              {"t0", c.t0},
              {"mu_star", number_json(c.mu_star)},
              {"g_at_fixed_point", number_json(c.g_at_fixed_point)}};
}

Json thresholds_to_json(const HardnessThresholds& t) {
  Json j{{"delta", t.delta},
         {"d", t.d},
         {"anti_ferro_edge", number_json(t.anti_ferro_edge)},
         {"mu_bound_bounded", number_json(t.mu_bound_bounded)},
         {"note", t.note}};
  auto optional = [](const std::optional<double>& x) { return x ? Json(number_json(*x)) : Json(nullptr); };
  j["mu_bound_uniform"] = optional(t.mu_bound_uniform);
  j["mu_bound_large_beta"] = optional(t.mu_bound_large_beta);
  j["lemma_mu_bound"] = optional(t.lemma_mu_bound);
  return j;
}

namespace {

Json level_to_json(const LevelRecord& level) {
  Json branches = Json::array();
  for (const BranchRecord& b : level.branches) {
    branches.push_back(Json{{"i", b.i},
                            {"mu_i", number_json(b.mu_i)},
                            {"zero_branch", b.zero_branch},
                            {"condition_lhs", number_json(b.condition_lhs)},
                            {"y", number_json(b.y)},
                            {"parameter", b.parameter},
                            {"basic_field", number_json(b.basic_field)},
                            {"log_slack", number_json(b.log_slack)}});
  }
  return Json{{"ell", level.ell},
              {"target", number_json(level.target)},
              {"k", level.k},
              {"branches", std::move(branches)},
              {"mu_d", number_json(level.mu_d)},
              {"next_target", number_json(level.next_target)},
              {"cutoff", number_json(level.cutoff)},
              {"cut_off", level.cut_off},
              {"cutoff_star", level.cutoff_star},
              {"cutoff_log_slack", number_json(level.cutoff_log_slack)}};
}

}  // namespace

Json report_to_json(const ConstructReport& report, bool include_gadget) {
  Json trace = Json::array();
  for (const LevelRecord& level : report.trace) trace.push_back(level_to_json(level));
  Json j{{"target", number_json(report.target)},
         {"achieved", number_json(report.achieved)},
         {"log_error", number_json(report.log_error)},
         {"bound", number_json(report.bound)},
         {"within_bound", std::abs(report.log_error) <= report.bound},
         {"size", report.size},
         {"height", report.height},
         {"depth", report.depth},
         {"alpha", number_json(report.alpha)},
         {"base_error_const", number_json(report.base_error_const)},
         {"trace", std::move(trace)}};
  if (include_gadget) j["gadget"] = gadget_to_json(report.gadget);
  return j;
}

Json selfloop_to_json(const SelfLoopRealization& r, const SpinParams<double>& p, double target,
                      long long m) {
  Json j{{"loops", r.loops},
         {"bristles", r.bristles},
         {"achieved", number_json(r.achieved)},
         {"target", number_json(target)},
         {"m", m},
         {"log_error", number_json(r.log_error)},
         {"tolerance", number_json(r.tolerance)},
         {"within_tolerance", std::abs(r.log_error) <= r.tolerance}};
  if (r.gadget.size() <= 64) j["gadget"] = graph_to_json(r.gadget, p);
  return j;
}

std::string dump_document(Json j) {
  j["schema"] = kJsonSchemaVersion;
  return j.dump(2);
}

}  // namespace twospin
