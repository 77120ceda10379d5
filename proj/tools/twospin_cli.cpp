// twospin: command-line front end for the two-spin library.
//
// Exit codes: 0 success, 1 numeric or internal failure, 2 domain error
// (including bad flags), 3 capacity error, 4 verification failure.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "twospin/construct.hpp"
#include "twospin/gadgets.hpp"
#include "twospin/io.hpp"
#include "twospin/random_instances.hpp"
#include "twospin/recursion.hpp"
#include "twospin/reductions.hpp"
#include "twospin/spin_core.hpp"

using namespace twospin;

namespace {

enum ExitCode { kOk = 0, kNumeric = 1, kDomain = 2, kCapacity = 3, kVerification = 4 };

struct Options {
  std::string beta, gamma, mu, target;
  int d = 1;
  int ell = 0;
  long long m = 100;
  int delta_reg = 0;
  std::string input;
  std::string output;
  std::string mode = "float";
  std::uint64_t seed = 1;
  std::size_t enum_limit = kDefaultEnumerationLimit;
  int max = 20;
  std::vector<std::string> pins;
  std::string materialize;
  bool emit_gadget = false;
  bool no_verify = false;
  std::string branching = "delta";
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw DomainError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

Json read_json_file(const std::string& path) {
  if (path.empty()) throw DomainError("--input is required");
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open input file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DomainError("malformed JSON in '" + path + "': " + e.what());
  }
}

void emit(const Options& o, const Json& j) {
  Output out(o.output);
  out.stream() << dump_document(j) << '\n';
}

double require_double(const std::string& value, const char* flag) {
  if (value.empty()) throw DomainError(std::string("--") + flag + " is required");
  return scalar_from_text<double>(value);
}

template <class Scalar>
Scalar require_scalar(const std::string& value, const char* flag) {
  if (value.empty()) throw DomainError(std::string("--") + flag + " is required");
  return scalar_from_text<Scalar>(value);
}

RecursionParams recursion_params(const Options& o) {
  return RecursionParams(require_double(o.beta, "beta"), require_double(o.gamma, "gamma"),
                         require_double(o.mu, "mu"), o.d);
}

// Instance from --input, with --beta/--gamma/--mu overriding the file.
template <class Scalar>
Instance<Scalar> load_instance(const Options& o) {
  Json j = read_json_file(o.input);
  if (!o.beta.empty()) j["beta"] = o.beta;
  if (!o.gamma.empty()) j["gamma"] = o.gamma;
  if (!o.mu.empty()) j["mu"] = o.mu;
  return graph_from_json<Scalar>(j);
}

template <class Scalar>
int run_eval(const Options& o) {
  const Instance<Scalar> inst = load_instance<Scalar>(o);
  PinAssignment pins;
  for (const std::string& spec : o.pins) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw DomainError("--pin expects id=spin, got '" + spec + "'");
    const std::string value = spec.substr(eq + 1);
    if (value != "0" && value != "1") throw DomainError("pinned spin must be 0 or 1");
    pins.pin(inst.graph.require(spec.substr(0, eq)), value == "1" ? 1 : 0);
  }
  Json j;
  j["vertices"] = inst.graph.size();
  j["edges"] = inst.graph.num_edges();
  const Scalar z = pinned_partition(inst.graph, inst.params, pins, o.enum_limit);
  put_scalar(j, "Z", z);
  if (o.pins.empty() && inst.graph.output()) {
    put_scalar(j, "effective_field", effective_field(inst.graph, inst.params, o.enum_limit));
  }
  if constexpr (std::is_same_v<Scalar, double>) {
    if (o.pins.empty()) j["log_Z"] = number_json(log_partition_function(inst.graph, inst.params, o.enum_limit));
  }
  emit(o, j);
  return kOk;
}

int run_fixpoint(const Options& o) {
  const RecursionParams rp = recursion_params(o);
  const DecayConstants c = decay_constants(rp);
  const double lower = rp.mu() / std::pow(rp.gamma(), rp.d);
  const double upper = std::pow(rp.beta(), rp.d) * rp.mu();
  const bool holds = lower < c.mu_star && c.mu_star < upper;
  Json j{{"mu_star", number_json(c.mu_star)},
         {"lower_bound", number_json(lower)},
         {"upper_bound", number_json(upper)},
         {"bounds_hold", holds},
         {"iterations", mu_star_iterates(rp).size() - 1},
         {"lemma_mu_bound", number_json(lemma_mu_bound(rp.beta(), rp.gamma(), rp.d))},
         {"constants", decay_constants_to_json(c)}};
  emit(o, j);
  return holds ? kOk : kVerification;
}

int run_construct(const Options& o) {
  const GadgetBuilder builder(recursion_params(o));
  const double target = o.target.empty() ? builder.mu_star() : require_double(o.target, "target");
  const ConstructReport report = builder.certify(o.ell, target);
  if (!o.materialize.empty()) {
    const auto g = materialize(report.gadget, builder.params().mu());
    std::ofstream file(o.materialize);
    if (!file) throw DomainError("cannot open '" + o.materialize + "'");
    Json graph = graph_to_json(g, builder.params().params);
    graph["schema"] = kJsonSchemaVersion;
    file << graph.dump(2) << '\n';
  }
  emit(o, report_to_json(report, o.emit_gadget));
  return std::abs(report.log_error) <= report.bound ? kOk : kVerification;
}

template <class Scalar>
int finish_certificate(const Options& o, ReductionCertificate<Scalar> cert) {
  if (!o.no_verify) cert = verify_reduction(std::move(cert), o.enum_limit);
  emit(o, certificate_to_json(cert));
  return cert.verified.value_or(true) ? kOk : kVerification;
}

template <class Scalar>
int run_reduce(const std::string& kind, const Options& o) {
  if (kind == "selfloop") {
    const SpinParams<double> p(require_double(o.beta, "beta"), require_double(o.gamma, "gamma"),
                               require_double(o.mu, "mu"));
    const double target = require_double(o.target, "target");
    const SelfLoopRealization r = realize_field_selfloops(target, o.m, p);
    Json j = selfloop_to_json(r, p, target, o.m);
    bool ok = std::abs(r.log_error) <= r.tolerance;
    if (!o.no_verify && r.gadget.size() <= o.enum_limit) {
      const double brute = effective_field(r.gadget, p, o.enum_limit);
      const double rel = std::abs(brute - r.achieved) / r.achieved;
      j["brute_force_field"] = number_json(brute);
      j["verified"] = rel <= kFloatVerificationTolerance;
      ok = ok && rel <= kFloatVerificationTolerance;
    }
    emit(o, j);
    return ok ? kOk : kVerification;
  }

  if (kind == "bipartite") {
    FieldedGraph<Scalar> topology;
    std::vector<VertexIndex> left;
    if (o.input.empty()) {
      Rng rng(o.seed);
      BipartiteTopology sample = random_bipartite(rng);
      topology = with_uniform_field(sample.graph, Scalar(1));
      left = sample.left;
    } else {
      const Json j = read_json_file(o.input);
      Json shaped = j;
      if (!shaped.contains("beta")) shaped["beta"] = 1;
      if (!shaped.contains("gamma")) shaped["gamma"] = 1;
      topology = graph_from_json<Scalar>(shaped).graph;
      if (j.contains("left")) {
        for (const Json& id : j.at("left")) {
          left.push_back(topology.require(id.is_string() ? id.get<std::string>() : id.dump()));
        }
      } else {
        auto coloring = bipartition(topology);
        if (!coloring) throw DomainError("input graph is not bipartite");
        left = *coloring;
      }
    }
    return finish_certificate(o, bipartite_transform(topology, left, require_scalar<Scalar>(o.beta, "beta"),
                                                     require_scalar<Scalar>(o.gamma, "gamma"),
                                                     require_scalar<Scalar>(o.mu, "mu")));
  }

  Instance<Scalar> inst;
  if (o.input.empty() && kind == "pipeline") {
    Rng rng(o.seed);
    const Scalar beta = require_scalar<Scalar>(o.beta, "beta");
    const Scalar gamma = require_scalar<Scalar>(o.gamma, "gamma");
    const Scalar mu = o.mu.empty() ? gamma / beta : require_scalar<Scalar>(o.mu, "mu");
    inst = {with_uniform_field(random_connected_graph(rng), mu), SpinParams<Scalar>(beta, gamma, mu)};
  } else {
    inst = load_instance<Scalar>(o);
  }
  if (kind == "contract") return finish_certificate(o, contraction_certificate(inst.graph, inst.params));
  if (kind == "ising") return finish_certificate(o, to_ising(inst.graph, inst.params));
  if (kind == "pipeline") return finish_certificate(o, contract_then_ising(inst.graph, inst.params));
  throw DomainError("unknown reduction '" + kind + "'");
}

TreeBranching branching_of(const Options& o) {
  if (o.branching == "delta") return TreeBranching::Delta;
  if (o.branching == "delta-minus-one") return TreeBranching::DeltaMinusOne;
  throw DomainError("--branching must be delta or delta-minus-one");
}

int run_thresholds(const Options& o) {
  const double beta = require_double(o.beta, "beta");
  const double gamma = require_double(o.gamma, "gamma");
  Json j = thresholds_to_json(hardness_thresholds(beta, gamma));
  if (o.delta_reg > 0) {
    // anti-ferromagnetic source system of the bipartite transform
    const double a = 1.0 / std::sqrt(beta * gamma);
    j["uniqueness"] = Json{{"delta", o.delta_reg},
                           {"edge", number_json(a)},
                           {"mu_c", number_json(uniqueness_threshold(a, o.delta_reg, branching_of(o)))}};
  }
  emit(o, j);
  return kOk;
}

std::string csv_number(double x) {
  std::ostringstream s;
  s << std::setprecision(12) << x;
  return s.str();
}

int run_sweep(const std::string& kind, const Options& o) {
  Output out(o.output);
  std::ostream& csv = out.stream();
  bool all_hold = true;
  if (kind == "star") {
    const SpinParams<double> p(require_double(o.beta, "beta"), require_double(o.gamma, "gamma"),
                               require_double(o.mu, "mu"));
    csv << "w,field,bound,log_ratio,holds\n";
    for (const ConvergenceRow& row : star_convergence(p, o.max)) {
      csv << row.index << ',' << csv_number(row.field) << ',' << csv_number(row.bound) << ','
          << csv_number(row.log_ratio) << ',' << (row.holds ? 1 : 0) << '\n';
      all_hold = all_hold && row.holds;
    }
  } else if (kind == "tree") {
    const RecursionParams rp = recursion_params(o);
    const double mu_star = solve_mu_star(rp);
    csv << "t,field,mu_star,log_ratio,log_bound,holds\n";
    for (const ConvergenceRow& row : tree_convergence(rp, o.max)) {
      csv << row.index << ',' << csv_number(row.field) << ',' << csv_number(mu_star) << ','
          << csv_number(row.log_ratio) << ',' << csv_number(std::log(row.bound)) << ','
          << (row.holds ? 1 : 0) << '\n';
      all_hold = all_hold && row.holds;
    }
  } else if (kind == "construct-error") {
    const GadgetBuilder builder(recursion_params(o));
    const double target = o.target.empty() ? builder.mu_star() : require_double(o.target, "target");
    csv << "ell,target,achieved,log_error,bound,size,height,holds\n";
    for (int ell = 0; ell <= o.max; ++ell) {
      const ConstructReport r = builder.certify(ell, target);
      const bool holds = std::abs(r.log_error) <= r.bound;
      csv << ell << ',' << csv_number(r.target) << ',' << csv_number(r.achieved) << ','
          << csv_number(r.log_error) << ',' << csv_number(r.bound) << ',' << r.size << ','
          << r.height << ',' << (holds ? 1 : 0) << '\n';
      all_hold = all_hold && holds;
    }
  } else if (kind == "uniqueness") {
    const double beta = require_double(o.beta, "beta");
    const TreeBranching branching = branching_of(o);
    csv << "delta,beta,mu_c\n";
    for (int delta = std::max(3, o.delta_reg); delta <= o.max; ++delta) {
      csv << delta << ',' << csv_number(beta) << ',';
      try {
        csv << csv_number(uniqueness_threshold(beta, delta, branching)) << '\n';
      } catch (const DomainError&) {
        csv << "nan\n";  // beta already in uniqueness for this delta
      }
    }
  } else {
    throw DomainError("unknown sweep '" + kind + "'");
  }
  return all_hold ? kOk : kVerification;
}

template <class Scalar>
int dispatch_exact(const std::string& command, const std::string& kind, const Options& o) {
  if (command == "eval") return run_eval<Scalar>(o);
  return run_reduce<Scalar>(kind, o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-state spin systems: partition functions, gadgets and reductions"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--mode", o.mode, "Arithmetic: float or rational (exact, for eval and reduce)")
      ->check(CLI::IsMember({"float", "rational"}));
  app.add_option("--output", o.output, "Write the result here instead of stdout");
  app.add_option("--enum-limit", o.enum_limit, "Largest graph evaluated by enumeration");
  app.add_option("--seed", o.seed, "Seed for generated instances");

  auto add_params = [&](CLI::App* sub, bool with_mu) {
    sub->add_option("--beta", o.beta, "Edge weight A00");
    sub->add_option("--gamma", o.gamma, "Edge weight A11");
    if (with_mu) sub->add_option("--mu", o.mu, "Uniform external field");
  };

  CLI::App* eval = app.add_subcommand("eval", "Exact partition function of a graph JSON file");
  eval->add_option("--input", o.input, "Graph JSON")->required();
  eval->add_option("--pin", o.pins, "Pin a vertex, id=0 or id=1 (repeatable)");
  add_params(eval, false);

  CLI::App* fixpoint = app.add_subcommand("fixpoint", "mu_star, its bounds and the decay constants");
  add_params(fixpoint, true);
  fixpoint->add_option("--d", o.d, "Tree arity");

  CLI::App* construct_cmd = app.add_subcommand("construct", "Build and certify a gadget for a target field");
  add_params(construct_cmd, true);
  construct_cmd->add_option("--d", o.d, "Tree arity");
  construct_cmd->add_option("--ell", o.ell, "Recursion depth");
  construct_cmd->add_option("--target", o.target, "Target field in (0, mu_star]; default mu_star");
  construct_cmd->add_flag("--emit-gadget", o.emit_gadget, "Include the gadget JSON in the report");
  construct_cmd->add_option("--materialize", o.materialize, "Also write the gadget as graph JSON here");

  CLI::App* reduce = app.add_subcommand("reduce", "Partition-function preserving reductions");
  reduce->require_subcommand(1);
  std::string reduce_kind;
  for (const char* name : {"bipartite", "selfloop", "contract", "ising", "pipeline"}) {
    CLI::App* sub = reduce->add_subcommand(name);
    add_params(sub, true);
    sub->add_option("--input", o.input, "Graph JSON (bipartite and pipeline draw a random graph from --seed if absent)");
    sub->add_flag("--no-verify", o.no_verify, "Skip the exhaustive check");
    sub->callback([&reduce_kind, name] { reduce_kind = name; });
  }
  reduce->get_subcommand("bipartite")->description("Anti-ferromagnetic Ising (1/sqrt(bg), mu') to ferromagnetic (beta, gamma); --mu is mu'");
  reduce->get_subcommand("selfloop")->description("Realize a target field with self-loops and bristles (gamma > beta > 1)");
  reduce->get_subcommand("selfloop")->add_option("--target", o.target, "Target field")->required();
  reduce->get_subcommand("selfloop")->add_option("--m", o.m, "Accuracy: |log error| <= 1/m");
  reduce->get_subcommand("contract")->description("Remove degree-one vertices");
  reduce->get_subcommand("ising")->description("Map a min-degree-2 instance to the Ising system (sqrt(bg), sqrt(bg))");
  reduce->get_subcommand("pipeline")->description("contract followed by ising, one composed certificate");

  CLI::App* thresholds = app.add_subcommand("thresholds", "Hardness thresholds for (beta, gamma)");
  add_params(thresholds, false);
  thresholds->add_option("--delta-reg", o.delta_reg, "Also report the uniqueness field for this degree");
  thresholds->add_option("--branching", o.branching, "delta or delta-minus-one children per tree vertex");

  CLI::App* sweep = app.add_subcommand("sweep", "CSV tables");
  sweep->require_subcommand(1);
  std::string sweep_kind;
  auto add_sweep = [&](const char* name, const char* help) {
    CLI::App* sub = sweep->add_subcommand(name, help);
    sub->callback([&sweep_kind, name] { sweep_kind = name; });
    return sub;
  };
  CLI::App* star = add_sweep("star", "Columns w,field,bound,log_ratio,holds: mu(S_w) against mu beta^w");
  add_params(star, true);
  star->add_option("--max", o.max, "Largest w");
  CLI::App* tree = add_sweep("tree",
                             "Columns t,field,mu_star,log_ratio,log_bound,holds: ln(mu(T_t)/mu_star) "
                             "against c^t iota");
  add_params(tree, true);
  tree->add_option("--d", o.d, "Tree arity");
  tree->add_option("--max", o.max, "Largest t");
  CLI::App* construct_error =
      add_sweep("construct-error",
                "Columns ell,target,achieved,log_error,bound,size,height,holds for ell = 0..max");
  add_params(construct_error, true);
  construct_error->add_option("--d", o.d, "Tree arity");
  construct_error->add_option("--target", o.target, "Target field; default mu_star");
  construct_error->add_option("--max", o.max, "Largest ell")->default_val(8);
  CLI::App* uniqueness =
      add_sweep("uniqueness", "Columns delta,beta,mu_c for delta = max(3, delta-reg)..max; nan when unique");
  add_params(uniqueness, false);
  uniqueness->add_option("--delta-reg", o.delta_reg, "Smallest degree");
  uniqueness->add_option("--max", o.max, "Largest degree");
  uniqueness->add_option("--branching", o.branching, "delta or delta-minus-one");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kDomain;
  }

  try {
    const bool exact = o.mode == "rational";
    if (exact && (fixpoint->parsed() || construct_cmd->parsed() || thresholds->parsed() || sweep->parsed())) {
      throw DomainError("rational mode applies to eval and reduce only");
    }
    if (eval->parsed() || reduce->parsed()) {
      const std::string command = eval->parsed() ? "eval" : "reduce";
      if (exact && reduce_kind == "selfloop") throw DomainError("selfloop runs in float mode only");
      return exact ? dispatch_exact<QuadraticNumber>(command, reduce_kind, o)
                   : dispatch_exact<double>(command, reduce_kind, o);
    }
    if (fixpoint->parsed()) return run_fixpoint(o);
    if (construct_cmd->parsed()) return run_construct(o);
    if (thresholds->parsed()) return run_thresholds(o);
    if (sweep->parsed()) return run_sweep(sweep_kind, o);
  } catch (const ApproximationFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kVerification;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCapacity;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  }
  return kDomain;
}
