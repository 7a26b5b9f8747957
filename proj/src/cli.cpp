#include "entangleid/cli.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "entangleid/approximation.hpp"
#include "entangleid/catalysis.hpp"
#include "entangleid/io.hpp"
#include "entangleid/majorization.hpp"
#include "entangleid/protocol.hpp"
#include "entangleid/schmidt.hpp"
#include "entangleid/types.hpp"

namespace entangleid::cli {

namespace {

using io::json;

// --tol sets both comparison tolerances; the normalization gate never drops
// below its default so legitimately rounded inputs keep parsing.
ToleranceConfig tolerances(double tol_value) {
  ToleranceConfig tol;
  if (tol_value > 0.0) {
    tol.eq_tol = tol_value;
    tol.majorization_tol = tol_value;
    tol.normalization_tol = std::max(1e-9, tol_value);
  }
  tol.validate();
  return tol;
}

std::uint64_t default_seed() {
  const char* s = std::getenv("ENTANGLE_ID_SEED");
  if (!s || !*s) return 0;
  if (s[0] == '-') throw Error(Errc::DomainError, "ENTANGLE_ID_SEED must be nonnegative");
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(s, &end, 10);
  if (errno != 0 || end == s || *end != '\0')
    throw Error(Errc::DomainError, "ENTANGLE_ID_SEED must be a nonnegative integer");
  return v;
}

json index_array(const std::vector<Index>& xs) {
  json arr = json::array();
  for (Index x : xs) arr.push_back(x);
  return arr;
}

json bool_array(const std::vector<bool>& xs) {
  json arr = json::array();
  for (bool x : xs) arr.push_back(x);
  return arr;
}

json solve_json(const OptimizationResult& res) {
  return json{{"active_set", index_array(res.active_set)},
              {"kkt_residual", io::number(res.kkt_residual)},
              {"lambda", io::vector_json(res.lambda)},
              {"method", method_name(res.method)},
              {"mu", io::number(res.mu)},
              {"p_error", io::number(res.p_error)},
              {"q_star", io::spectrum_json(res.q_star)}};
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Schmidt-spectrum orderings, catalysis checks, impostor optimization, "
               "and authentication protocol simulation"};
  app.require_subcommand(1);

  double tol_value = -1.0;
  app.add_option("--tol", tol_value, "override eq/majorization tolerances")
      ->check(CLI::PositiveNumber);

  auto emit = [&out](const json& rep) { out << io::render(rep); };

  // osc: canonical ordered spectrum of a state document; the schmidt form is
  // taken as raw weights here, making this the lenient entry point.
  auto* osc = app.add_subcommand("osc", "canonicalize a state into its ordered spectrum");
  std::string osc_path;
  osc->add_option("--state", osc_path, "state JSON file")->required();
  osc->callback([&] {
    ToleranceConfig tol = tolerances(tol_value);
    json doc = io::load_document(osc_path);
    SchmidtVector spec =
        io::as_spectrum(io::state_from_document(doc, tol, io::SpectrumPolicy::Weights), tol);
    emit(io::report("osc", json{{"state", doc}},
                    json{{"dim", spec.dim()}, {"schmidt", io::spectrum_json(spec)}}));
  });

  auto* majorize = app.add_subcommand("majorize", "does spectrum a majorize spectrum b");
  std::string maj_a, maj_b;
  majorize->add_option("--a", maj_a, "first state JSON file")->required();
  majorize->add_option("--b", maj_b, "second state JSON file")->required();
  majorize->callback([&] {
    ToleranceConfig tol = tolerances(tol_value);
    SchmidtVector a = io::load_spectrum(maj_a, tol);
    SchmidtVector b = io::load_spectrum(maj_b, tol);
    emit(io::report("majorize",
                    json{{"a", io::spectrum_json(a)}, {"b", io::spectrum_json(b)}},
                    json{{"majorizes", majorizes(a, b, tol)}}));
  });

  auto* convertible =
      app.add_subcommand("convertible", "is the source reachable to the target by LOCC");
  std::string conv_source, conv_target;
  convertible->add_option("--source", conv_source, "source state JSON file")->required();
  convertible->add_option("--target", conv_target, "target state JSON file")->required();
  convertible->callback([&] {
    ToleranceConfig tol = tolerances(tol_value);
    SchmidtVector source = io::load_spectrum(conv_source, tol);
    SchmidtVector target = io::load_spectrum(conv_target, tol);
    emit(io::report(
        "convertible",
        json{{"source", io::spectrum_json(source)}, {"target", io::spectrum_json(target)}},
        json{{"convertible", locc_convertible(source, target, tol)}}));
  });

  auto* cmp = app.add_subcommand("compare", "entanglement ordering of two spectra");
  std::string cmp_a, cmp_b;
  cmp->add_option("--a", cmp_a, "first state JSON file")->required();
  cmp->add_option("--b", cmp_b, "second state JSON file")->required();
  cmp->callback([&] {
    ToleranceConfig tol = tolerances(tol_value);
    SchmidtVector a = io::load_spectrum(cmp_a, tol);
    SchmidtVector b = io::load_spectrum(cmp_b, tol);
    emit(io::report("compare",
                    json{{"a", io::spectrum_json(a)}, {"b", io::spectrum_json(b)}},
                    json{{"ordering", ordering_name(compare(a, b, tol))}}));
  });

  auto* catalyze = app.add_subcommand("catalyze", "catalyst verification and search");
  catalyze->require_subcommand(1);

  auto* verify = catalyze->add_subcommand("verify", "check a specific catalyst");
  std::string ver_source, ver_target, ver_catalyst;
  verify->add_option("--source", ver_source, "source state JSON file")->required();
  verify->add_option("--target", ver_target, "target state JSON file")->required();
  verify->add_option("--catalyst", ver_catalyst, "catalyst state JSON file")->required();
  verify->callback([&] {
    ToleranceConfig tol = tolerances(tol_value);
    SchmidtVector source = io::load_spectrum(ver_source, tol);
    SchmidtVector target = io::load_spectrum(ver_target, tol);
    SchmidtVector catalyst = io::load_spectrum(ver_catalyst, tol);
    CatalysisReport rep = verify_catalyst(source, target, catalyst, tol);
    emit(io::report("catalyze verify",
                    json{{"catalyst", io::spectrum_json(catalyst)},
                         {"source", io::spectrum_json(source)},
                         {"target", io::spectrum_json(target)}},
                    json{{"catalyzed", rep.catalyzed},
                         {"satisfied_with", bool_array(rep.satisfied_with)},
                         {"violated_prefixes_without",
                          index_array(rep.violated_prefixes_without)}}));
  });

  auto* search = catalyze->add_subcommand("search", "grid search for a working catalyst");
  std::string sea_source, sea_target;
  Index sea_dim = 2;
  int sea_resolution = 10;
  search->add_option("--source", sea_source, "source state JSON file")->required();
  search->add_option("--target", sea_target, "target state JSON file")->required();
  search->add_option("--catalyst-dim", sea_dim, "catalyst dimension (default 2)");
  search->add_option("--resolution", sea_resolution, "grid denominator (default 10)");
  search->callback([&] {
    ToleranceConfig tol = tolerances(tol_value);
    SchmidtVector source = io::load_spectrum(sea_source, tol);
    SchmidtVector target = io::load_spectrum(sea_target, tol);
    auto found = search_catalyst(source, target, sea_dim, sea_resolution, tol);
    json result{{"found", found.has_value()},
                {"catalyst", found ? io::spectrum_json(*found) : json(nullptr)}};
    emit(io::report("catalyze search",
                    json{{"catalyst_dim", sea_dim},
                         {"resolution", sea_resolution},
                         {"source", io::spectrum_json(source)},
                         {"target", io::spectrum_json(target)}},
                    result));
  });

  auto* approx = app.add_subcommand("approx", "best impostor approximation");
  approx->require_subcommand(1);

  auto* bound = approx->add_subcommand("bound", "tightest single-prefix relaxation");
  std::string bnd_target, bnd_source;
  bound->add_option("--target", bnd_target, "spectrum to imitate, JSON file")->required();
  bound->add_option("--source", bnd_source, "spectrum the impostor holds, JSON file")->required();
  bound->callback([&] {
    ToleranceConfig tol = tolerances(tol_value);
    SchmidtVector target = io::load_spectrum(bnd_target, tol);
    SchmidtVector source = io::load_spectrum(bnd_source, tol);
    auto res = min_over_k_bound(target, source, tol);
    emit(io::report(
        "approx bound",
        json{{"source", io::spectrum_json(source)}, {"target", io::spectrum_json(target)}},
        json{{"bound", io::number(res.bound)}, {"k_star", res.k_star}}));
  });

  auto* solve = approx->add_subcommand("solve", "full constrained optimum");
  std::string sol_target, sol_source;
  bool sol_oracle = false;
  int sol_resolution = 120;
  solve->add_option("--target", sol_target, "spectrum to imitate, JSON file")->required();
  solve->add_option("--source", sol_source, "spectrum the impostor holds, JSON file")->required();
  solve->add_flag("--oracle", sol_oracle, "cross-check against the brute-force grid");
  solve->add_option("--oracle-resolution", sol_resolution, "grid denominator (default 120)")
      ->check(CLI::Range(1, max_oracle_resolution));
  solve->callback([&] {
    ToleranceConfig tol = tolerances(tol_value);
    SchmidtVector target = io::load_spectrum(sol_target, tol);
    SchmidtVector source = io::load_spectrum(sol_source, tol);
    OptimizationResult res = solve_pure_approximation(target, source, tol);
    json result = solve_json(res);
    json inputs{{"source", io::spectrum_json(source)}, {"target", io::spectrum_json(target)}};
    if (sol_oracle) {
      OptimizationResult oracle = brute_force_oracle(target, source, sol_resolution, tol);
      result["oracle"] = json{{"gap", io::number(res.p_error - oracle.p_error)},
                              {"p_error", io::number(oracle.p_error)},
                              {"q_star", io::spectrum_json(oracle.q_star)}};
      inputs["oracle_resolution"] = sol_resolution;
    }
    emit(io::report("approx solve", inputs, result));
  });

  auto* protocol = app.add_subcommand("protocol", "authentication protocol simulation");
  protocol->require_subcommand(1);

  auto* simulate = protocol->add_subcommand("simulate", "Monte Carlo false-accept estimate");
  std::string sim_kind, sim_strategy;
  std::string sim_source, sim_target, sim_catalyst, sim_impostor;
  long long sim_rounds = 0, sim_trials = 0;
  Index sim_dim = 0;
  std::uint64_t sim_seed = 0;
  simulate->add_option("--kind", sim_kind, "protocol kind")
      ->required()
      ->check(CLI::IsMember({"max-entangled", "catalysis"}));
  simulate->add_option("--strategy", sim_strategy, "adversary strategy")
      ->required()
      ->check(CLI::IsMember({"honest", "separable", "locc", "fixed"}));
  simulate->add_option("--rounds", sim_rounds, "rounds per session")
      ->required()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--trials", sim_trials, "independent sessions")
      ->required()
      ->check(CLI::PositiveNumber);
  auto* seed_opt = simulate->add_option("--seed", sim_seed, "rng seed (default ENTANGLE_ID_SEED)");
  simulate->add_option("--dim", sim_dim, "local dimension, max-entangled kind");
  simulate->add_option("--source", sim_source, "source state JSON file, catalysis kind");
  simulate->add_option("--target", sim_target, "target state JSON file, catalysis kind");
  simulate->add_option("--catalyst", sim_catalyst, "catalyst state JSON file, catalysis kind");
  simulate->add_option("--impostor-state", sim_impostor, "spectrum held by the fixed impostor");
  simulate->callback([&] {
    ToleranceConfig tol = tolerances(tol_value);
    std::uint64_t seed = (seed_opt->count() > 0) ? sim_seed : default_seed();

    json inputs{{"kind", sim_kind},
                {"rounds", sim_rounds},
                {"seed", seed},
                {"strategy", sim_strategy},
                {"trials", sim_trials}};

    std::optional<ProtocolConfig> config;
    if (sim_kind == "max-entangled") {
      if (sim_dim == 0)
        throw CLI::ValidationError("protocol simulate", "--dim is required for max-entangled");
      config = ProtocolConfig::maximally_entangled(sim_dim, sim_rounds, tol);
      inputs["dim"] = sim_dim;
    } else {
      if (sim_source.empty() || sim_target.empty() || sim_catalyst.empty())
        throw CLI::ValidationError(
            "protocol simulate", "--source, --target, --catalyst are required for catalysis");
      SchmidtVector source = io::load_spectrum(sim_source, tol);
      SchmidtVector target = io::load_spectrum(sim_target, tol);
      SchmidtVector catalyst = io::load_spectrum(sim_catalyst, tol);
      config = ProtocolConfig::catalysis(source, target, catalyst, sim_rounds, tol);
      inputs["source"] = io::spectrum_json(source);
      inputs["target"] = io::spectrum_json(target);
      inputs["catalyst"] = io::spectrum_json(catalyst);
    }

    AdversaryStrategy strategy{HonestBob{}};
    if (sim_strategy == "separable") strategy = SeparableImpostor{};
    if (sim_strategy == "locc") strategy = LoccImpostor{};
    if (sim_strategy == "fixed") {
      if (sim_impostor.empty())
        throw CLI::ValidationError("protocol simulate",
                                   "--impostor-state is required for the fixed strategy");
      SchmidtVector held = io::load_spectrum(sim_impostor, tol);
      inputs["impostor"] = io::spectrum_json(held);
      strategy = FixedStateImpostor{held};
    }

    double p = round_pass_probability(*config, strategy);
    FalseAcceptEstimate est = estimate_false_accept(*config, strategy, sim_trials, seed);
    emit(io::report("protocol simulate", inputs,
                    json{{"accepted", est.accepted},
                         {"analytic", io::number(std::pow(p, static_cast<double>(sim_rounds)))},
                         {"rate", io::number(est.rate)},
                         {"round_pass_probability", io::number(p)},
                         {"rounds", sim_rounds},
                         {"std_error", io::number(est.std_error)},
                         {"trials", sim_trials}}));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace entangleid::cli
