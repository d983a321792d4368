// percobound: command-line front end.
//
//   percobound generate  --family paley --q 13 --output paley13.json
//   percobound certify   --graph paley13.json
//   percobound bound     --family cycle --n 4 --p 0.9 --alpha 1.8 --epsilon 0.1
//   percobound simulate  --graph g.json --p 0.95 --trials 10000 --seed 7
//   percobound threshold --n 1000 --d 20 --lambda 10 --mode inequality5
//   percobound oracle    --family path --n 3 --p 0.5 --kind connectivity
//
// Exit status: 0 success, 1 a checked inequality failed, 2 usage or domain
// error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "percobound/percobound.hpp"

namespace pb = percobound;
using pb::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

struct GraphOptions {
  std::string file;
  std::string family;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t q = 0;
  std::size_t d = 0;
};

struct ProfileOptions {
  std::optional<double> p;
  std::string file;
};

struct Globals {
  std::uint64_t seed = 0;
  std::string output;
  std::string format;  // empty: the subcommand's natural format
};

void add_graph_options(CLI::App* cmd, GraphOptions& g) {
  auto* file = cmd->add_option("--graph", g.file, "Graph JSON file");
  auto* family = cmd->add_option("--family", g.family,
                                 "Generator: complete, cycle, path, hypercube, paley, "
                                 "random_regular, petersen, star");
  file->excludes(family);
  cmd->add_option("--n", g.n, "Vertex count (complete, cycle, path, random_regular, star)");
  cmd->add_option("--k", g.k, "Hypercube dimension");
  cmd->add_option("--q", g.q, "Paley order (prime, 1 mod 4)");
  cmd->add_option("--d", g.d, "Degree (random_regular)");
}

void add_profile_options(CLI::App* cmd, ProfileOptions& p) {
  auto* uniform = cmd->add_option("--p", p.p, "Uniform survival probability");
  auto* file = cmd->add_option("--profile", p.file,
                               "Per-vertex survival probabilities: JSON array or {\"p\": [...]}");
  uniform->excludes(file);
}

pb::WeightedGraph load_graph(const GraphOptions& opt, std::uint64_t seed) {
  if (!opt.file.empty()) return pb::read_graph_file(opt.file);
  if (opt.family.empty()) throw pb::ParameterError("a graph is required: --graph or --family");
  pb::GeneratorSpec spec;
  spec.family = pb::family_from_string(opt.family);
  spec.n = opt.n;
  spec.k = opt.k;
  spec.q = opt.q;
  spec.d = opt.d;
  return pb::generate(spec, seed);
}

std::string graph_source(const GraphOptions& opt) {
  if (!opt.file.empty()) return opt.file;
  std::ostringstream s;
  s << "family=" << opt.family;
  const auto family = pb::family_from_string(opt.family);
  switch (family) {
    case pb::GraphFamily::kHypercube: s << " k=" << opt.k; break;
    case pb::GraphFamily::kPaley: s << " q=" << opt.q; break;
    case pb::GraphFamily::kRandomRegular: s << " n=" << opt.n << " d=" << opt.d; break;
    case pb::GraphFamily::kPetersen: break;
    default: s << " n=" << opt.n; break;
  }
  return s.str();
}

pb::SurvivalProfile load_profile(const ProfileOptions& opt, std::size_t n) {
  if (opt.p) return pb::SurvivalProfile::uniform(n, *opt.p);
  if (opt.file.empty()) throw pb::ParameterError("a survival profile is required: --p or --profile");
  const auto j = pb::parse_json_text(pb::read_text_file(opt.file), opt.file);
  const auto& arr = j.is_object() && j.contains("p") ? j.at("p") : j;
  if (!arr.is_array()) throw pb::ParameterError(opt.file + ": expected an array of probabilities");
  std::vector<double> p;
  for (const auto& x : arr) {
    if (!x.is_number()) throw pb::ParameterError(opt.file + ": probabilities must be numbers");
    p.push_back(x.get<double>());
  }
  if (p.size() != n)
    throw pb::ParameterError(opt.file + ": profile has " + std::to_string(p.size()) +
                             " entries, graph has " + std::to_string(n) + " vertices");
  return pb::SurvivalProfile(std::move(p));
}

std::string profile_source(const ProfileOptions& opt) {
  if (opt.p) return "uniform:" + ordered_json(*opt.p).dump();
  return opt.file;
}

std::optional<double> parse_alpha(const std::string& text) {
  if (text == "auto") return std::nullopt;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size()) throw pb::ParameterError("--alpha must be 'auto' or a number");
  pb::require_alpha(v);
  return v;
}

void emit(const Globals& g, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(g.output, std::ios::binary);
  if (!out) throw pb::ParameterError("cannot write '" + g.output + "'");
  out << text;
}

void flatten(const ordered_json& j, const std::string& prefix, std::ostringstream& out) {
  for (const auto& [key, value] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object())
      flatten(value, name, out);
    else
      out << name << ',' << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  }
}

// JSON reports as indented JSON, or as key,value rows with nested keys
// dotted.
std::string render(const ordered_json& report, const std::string& format) {
  if (format.empty() || format == "json") return report.dump(2) + "\n";
  std::ostringstream out;
  out << "key,value\n";
  flatten(report, "", out);
  return out.str();
}

ordered_json with_provenance(ordered_json report, ordered_json config) {
  report["config"] = std::move(config);
  report["version"] = pb::kVersion;
  return report;
}

std::string edge_csv(const pb::WeightedGraph& g) {
  std::ostringstream out;
  out << "i,j,w\n";
  for (const pb::Edge& e : g.edges()) out << e.i << ',' << e.j << ',' << pb::format_real(e.w) << '\n';
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral lower bounds on algebraic connectivity under site percolation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pb::kVersion));

  Globals globals;
  app.add_option("--seed", globals.seed, "Random seed (64-bit)")->capture_default_str();
  app.add_option("--output", globals.output, "Write the result here instead of stdout");
  app.add_option("--format", globals.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  // Subcommands also accept the global options after their name.
  auto* generate = app.add_subcommand("generate", "Build a graph from a generator family");
  auto* certify = app.add_subcommand("certify", "Certify a graph as an (n, d, lambda)-graph");
  auto* bound = app.add_subcommand("bound", "Evaluate the deviation bound and the lower bound on a_delta");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo validation of the bound");
  auto* threshold = app.add_subcommand("threshold", "Survival threshold for (n, d, lambda)-graphs");
  auto* oracle = app.add_subcommand("oracle", "Exact distribution by enumerating deletion patterns");
  for (auto* cmd : {generate, certify, bound, simulate, threshold, oracle}) cmd->fallthrough();

  GraphOptions graph;
  ProfileOptions profile;
  std::string alpha_text = "auto";
  double epsilon = 0.1;
  std::size_t alpha_grid = pb::kDefaultAlphaGrid;
  std::size_t trials = 1000;
  std::string trial_csv;
  std::string mode = "corollary";
  std::string kind = "deviation_norm";
  std::optional<double> th_n, th_d, th_lambda;

  for (auto* cmd : {generate, certify, bound, simulate, oracle}) add_graph_options(cmd, graph);
  for (auto* cmd : {bound, simulate, oracle}) add_profile_options(cmd, profile);
  for (auto* cmd : {bound, simulate, oracle})
    cmd->add_option("--alpha", alpha_text, "Ghost-vertex weight: 'auto' or a real >= 0")
        ->capture_default_str();
  for (auto* cmd : {bound, simulate, threshold})
    cmd->add_option("--epsilon", epsilon, "Failure probability in (0, 1)")->capture_default_str();
  for (auto* cmd : {bound, simulate, oracle})
    cmd->add_option("--alpha-grid", alpha_grid, "Grid size for alpha = auto")->capture_default_str();
  simulate->add_option("--trials", trials, "Number of Monte Carlo trials")->capture_default_str();
  simulate->add_option("--trial-csv", trial_csv, "Also write per-trial records as CSV");
  threshold->add_option("--n", th_n, "Vertex count");
  threshold->add_option("--d", th_d, "Degree");
  threshold->add_option("--lambda", th_lambda, "Second largest absolute adjacency eigenvalue");
  threshold->add_option("--graph", graph.file, "Certify this graph file instead of --n/--d/--lambda");
  threshold->add_option("--mode", mode, "corollary or inequality5")
      ->check(CLI::IsMember({"corollary", "inequality5"}))
      ->capture_default_str();
  oracle->add_option("--kind", kind, "deviation_norm, a_delta or connectivity")
      ->check(CLI::IsMember({"deviation_norm", "a_delta", "connectivity", "connectivity_indicator"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (generate->parsed()) {
      if (graph.family.empty()) throw pb::ParameterError("generate needs --family");
      const pb::WeightedGraph g = load_graph(graph, globals.seed);
      emit(globals, globals.format == "csv" ? edge_csv(g) : pb::graph_to_json(g).dump() + "\n");
      return kExitOk;
    }

    if (certify->parsed()) {
      const pb::WeightedGraph g = load_graph(graph, globals.seed);
      ordered_json config{{"graph_source", graph_source(graph)}, {"seed", globals.seed}};
      emit(globals, render(with_provenance(pb::to_json(pb::certify_ndl(g)), config), globals.format));
      return kExitOk;
    }

    if (bound->parsed()) {
      const pb::WeightedGraph g = load_graph(graph, globals.seed);
      const pb::SurvivalProfile p = load_profile(profile, g.n());
      const std::optional<double> alpha = parse_alpha(alpha_text);
      pb::require_epsilon(epsilon);
      const pb::DeviationBound db(g, p);
      ordered_json report;
      if (alpha) {
        report = pb::to_json(db.report(*alpha, epsilon));
        report["alpha_optimized"] = false;
      } else {
        const pb::AlphaOptimum best = pb::optimize_alpha(db, epsilon, alpha_grid);
        report = pb::to_json(best.report);
        report["alpha_optimized"] = true;
        report["alpha_evaluations"] = best.evaluations;
      }
      ordered_json config{{"graph_source", graph_source(graph)},
                          {"profile_source", profile_source(profile)},
                          {"alpha", alpha ? ordered_json(*alpha) : ordered_json("auto")},
                          {"epsilon", epsilon},
                          {"alpha_grid", alpha_grid},
                          {"seed", globals.seed}};
      emit(globals, render(with_provenance(report, config), globals.format));
      return kExitOk;
    }

    if (simulate->parsed()) {
      const pb::WeightedGraph g = load_graph(graph, globals.seed);
      const pb::SurvivalProfile p = load_profile(profile, g.n());
      pb::ExperimentConfig config;
      config.graph_source = graph_source(graph);
      config.profile_source = profile_source(profile);
      config.alpha = parse_alpha(alpha_text);
      config.epsilon = epsilon;
      config.trials = trials;
      config.seed = globals.seed;
      config.alpha_grid = alpha_grid;
      config.output = globals.output;
      const pb::ExperimentResult result = pb::run_experiment(g, p, config);
      if (!trial_csv.empty()) {
        std::ofstream out(trial_csv, std::ios::binary);
        if (!out) throw pb::ParameterError("cannot write '" + trial_csv + "'");
        pb::write_trials_csv(result.records, out);
      }
      emit(globals, render(with_provenance(pb::to_json(result.summary), pb::to_json(config)),
                           globals.format));
      if (!result.summary.passed()) {
        std::cerr << "validation failed: eq3 violations " << result.summary.per_trial_eq3_violations
                  << ", tail " << result.summary.empirical_tail_at_bound << " vs allowance "
                  << result.summary.tail_allowance << '\n';
        return kExitValidation;
      }
      return kExitOk;
    }

    if (threshold->parsed()) {
      double n = 0, d = 0, lambda = 0;
      std::string source;
      if (!graph.file.empty()) {
        const pb::RegularityCertificate c = pb::certify_ndl(pb::read_graph_file(graph.file));
        if (!c.is_regular) throw pb::DomainError(graph.file + " is not a unit-weight regular graph");
        n = static_cast<double>(c.n);
        d = *c.d;
        lambda = *c.lambda;
        source = graph.file;
      } else {
        if (!th_n || !th_d || !th_lambda)
          throw pb::ParameterError("threshold needs --n, --d and --lambda (or --graph)");
        n = *th_n;
        d = *th_d;
        lambda = *th_lambda;
      }
      const pb::ThresholdReport r =
          pb::survival_threshold(n, d, lambda, epsilon, pb::threshold_mode_from_string(mode));
      ordered_json config{{"graph_source", source.empty() ? ordered_json(nullptr) : ordered_json(source)},
                          {"n", n},
                          {"d", d},
                          {"lambda", lambda},
                          {"epsilon", epsilon},
                          {"mode", mode}};
      emit(globals, render(with_provenance(pb::to_json(r), config), globals.format));
      return kExitOk;
    }

    if (oracle->parsed()) {
      const pb::WeightedGraph g = load_graph(graph, globals.seed);
      const pb::SurvivalProfile p = load_profile(profile, g.n());
      const pb::StatisticKind k = pb::statistic_kind_from_string(kind);
      std::optional<double> alpha = parse_alpha(alpha_text);
      if (!alpha) alpha = pb::optimize_alpha(g, p, 0.1, alpha_grid).alpha_star;
      const pb::ExactDistribution dist = pb::exact_distribution(g, p, *alpha, k);

      if (k == pb::StatisticKind::kConnectivityIndicator)
        std::cerr << "P(connected)=" << pb::format_real(pb::exact_mean(dist));
      else
        std::cerr << "E[" << pb::to_string(k) << "]=" << pb::format_real(pb::exact_mean(dist));
      std::cerr << " patterns=" << dist.entries.size()
                << " total_probability=" << pb::format_real(dist.total_probability) << '\n';

      if (globals.format == "json") {
        ordered_json config{{"graph_source", graph_source(graph)},
                            {"profile_source", profile_source(profile)},
                            {"alpha", *alpha},
                            {"kind", std::string(pb::to_string(k))}};
        emit(globals, with_provenance(pb::to_json(dist), config).dump(2) + "\n");
      } else {
        std::ostringstream out;
        pb::write_distribution_csv(dist, out);
        emit(globals, out.str());
      }
      return kExitOk;
    }
  } catch (const pb::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
