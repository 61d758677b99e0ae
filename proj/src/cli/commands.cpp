#include "ilseval/cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>

#include <CLI11.hpp>

#include "ilseval/cli/pipeline.hpp"
#include "ilseval/dtree/learn.hpp"
#include "ilseval/synthgen/case_study.hpp"
#include "ilseval/util/text.hpp"

namespace ilseval::cli {

namespace fs = std::filesystem;

namespace {

int exit_for(const Error& e) { return is_config_error(e.code()) ? kExitConfig : kExitData; }

/// Runs body; library errors map to exit codes by their Errc group.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_for(e);
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

/// Problems while reading a configuration input are always exit 2.
template <class T, class F>
std::optional<T> load_config(std::ostream& err, const std::string& what, F&& load) {
  try {
    return load();
  } catch (const std::exception& e) {
    err << "error: " << what << ": " << e.what() << "\n";
    return std::nullopt;
  }
}

std::optional<ingest::Manifest> load_manifest(const RunConfig& config, std::ostream& err) {
  if (config.manifest.empty()) {
    err << "error: --manifest is required\n";
    return std::nullopt;
  }
  return load_config<ingest::Manifest>(err, "manifest", [&] { return ingest::parse_scenario_manifest(config.manifest); });
}

std::vector<SchemeKind> selected_kinds(const std::string& scheme) {
  if (scheme == "both") return {SchemeKind::Application, SchemeKind::Technology};
  return {parse_scheme_kind(scheme)};
}

std::string path_in(const std::string& dir, const char* name) { return (fs::path(dir) / name).string(); }

}  // namespace

int cmd_evaluate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  auto manifest = load_manifest(config, err);
  if (!manifest) return kExitConfig;
  return guarded(err, [&] {
    const auto result = pipeline::evaluate(*manifest, config.percentile, config.max_gap);
    for (const auto& w : result.warnings) err << "warning: " << w << "\n";
    pipeline::write_evaluation(result, config.out_dir);
    out << "evaluated " << result.experiments.size() << " experiments in " << result.scenarios.size()
        << " scenarios -> " << config.out_dir << "\n";
    return kExitOk;
  });
}

int cmd_categorize(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<SchemeKind> kinds;
  try {
    kinds = selected_kinds(config.scheme);
  } catch (const Error& e) {
    err << "error: --scheme: " << e.what() << "\n";
    return kExitConfig;
  }
  std::optional<PerformanceClassScheme> application;
  if (std::find(kinds.begin(), kinds.end(), SchemeKind::Application) != kinds.end()) {
    auto manifest = load_manifest(config, err);
    if (!manifest) return kExitConfig;
    if (!manifest->performance_classes) {
      err << "error: application categorization needs performance_classes in the manifest\n";
      return kExitConfig;
    }
    application = manifest->performance_classes;
  }
  return guarded(err, [&] {
    const auto reports = pipeline::read_scenario_report(path_in(config.out_dir, "scenarios.csv"));
    const auto metrics = pipeline::to_scenario_metrics(reports);
    std::vector<pipeline::Categorization> results;
    for (SchemeKind kind : kinds) {
      if (kind == SchemeKind::Application) {
        results.push_back(pipeline::categorize_application(metrics, *application));
      } else {
        results.push_back(pipeline::categorize_technology(metrics, config.k_max));
        out << "technology scheme: k = " << results.back().clusters->k << "\n";
      }
    }
    pipeline::write_categorizations(results, config.out_dir);
    out << "categorized " << metrics.size() << " scenarios -> " << config.out_dir << "\n";
    return kExitOk;
  });
}

int cmd_learn(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<SchemeKind> kinds;
  try {
    kinds = selected_kinds(config.scheme);
  } catch (const Error& e) {
    err << "error: --scheme: " << e.what() << "\n";
    return kExitConfig;
  }
  auto manifest = load_manifest(config, err);
  if (!manifest) return kExitConfig;
  return guarded(err, [&] {
    const auto rows = pipeline::read_categories(path_in(config.out_dir, "categories.csv"));
    std::vector<std::pair<SchemeKind, dtree::DecisionTree>> trees;
    for (SchemeKind kind : kinds) {
      const auto records = pipeline::labeled_records(*manifest, rows, kind);
      if (records.empty()) {
        if (config.scheme != "both") throw Error(Errc::EmptyInput, "no categories for scheme " + config.scheme);
        continue;
      }
      trees.emplace_back(kind, dtree::learn_tree(records, manifest->schema.factors()));
    }
    if (trees.empty()) throw Error(Errc::EmptyInput, "categories.csv holds no labeled scenarios");
    for (const auto& [kind, tree] : trees) {
      for (std::size_t leaf : tree.leaves()) {
        if (!tree.node(leaf).leaf.impure) continue;
        err << (config.strict ? "error" : "warning") << ": " << to_string(kind) << " tree leaf " << leaf
            << " mixes labels of identical feature vectors\n";
        if (config.strict) return kExitConfig;
      }
    }
    for (const auto& [kind, tree] : trees) {
      pipeline::write_tree_artifacts(tree, kind, config.out_dir);
      out << to_string(kind) << " tree: " << tree.internal_count() << " internal nodes, " << tree.leaf_count()
          << " leaves\n";
    }
    return kExitOk;
  });
}

int cmd_report(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (int rc = cmd_evaluate(config, out, err); rc != kExitOk) return rc;
  if (int rc = cmd_categorize(config, out, err); rc != kExitOk) return rc;
  return cmd_learn(config, out, err);
}

int cmd_map_quality(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.map_a.empty() || config.map_b.empty()) {
    err << "error: --map-a and --map-b are required\n";
    return kExitConfig;
  }
  return guarded(err, [&] {
    const auto a = align::parse_point_cloud_csv(config.map_a);
    const auto b = align::parse_point_cloud_csv(config.map_b);
    const auto score = align::icp_fitness(a, b, config.inlier_radius, config.max_iters);
    out << "fitness: " << text::format_double(score.fitness) << "\n";
    out << "inlier_rmse: " << text::format_double(score.inlier_rmse) << "\n";
    out << "yaw_deg: " << text::format_double(score.transform.yaw() * 180.0 / M_PI) << "\n";
    out << "translation: " << text::format_double(score.transform.translation.x()) << " "
        << text::format_double(score.transform.translation.y()) << "\n";
    const std::string doc = ingest::dump_json(align::score_to_json(score));
    out << doc;
    if (!config.out_dir.empty()) {
      fs::create_directories(config.out_dir);
      text::write_file(path_in(config.out_dir, "map_quality.json"), doc);
    }
    return kExitOk;
  });
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  auto plan = load_config<synthgen::SimulationPlan>(err, "plan", [&] {
    return config.plan.empty() ? synthgen::case_study::default_plan() : synthgen::load_plan_file(config.plan);
  });
  if (!plan) return kExitConfig;
  if (config.seed) plan->seed = *config.seed;
  return guarded(err, [&] {
    const auto ds = synthgen::write_dataset(*plan, config.out_dir);
    std::size_t experiments = 0;
    for (const auto& s : ds.manifest.scenarios) experiments += s.experiments.size();
    out << "simulated " << ds.manifest.scenarios.size() << " scenarios, " << experiments << " experiments -> "
        << config.out_dir << "\n";
    return kExitOk;
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Indoor localization evaluation: metrics, performance classes and decision trees"};
  app.name("ilseval");
  app.require_subcommand(1);
  RunConfig config;
  std::uint64_t seed = 0;

  auto add_manifest = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--manifest", config.manifest, "Scenario manifest (JSON)");
    if (required) opt->required();
  };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", config.out_dir, "Output directory")->capture_default_str();
  };
  auto add_scheme = [&](CLI::App* sub) {
    sub->add_option("--scheme", config.scheme, "application | technology | both")
        ->check(CLI::IsMember({"application", "technology", "both"}))
        ->capture_default_str();
  };
  auto add_evaluate_opts = [&](CLI::App* sub) {
    sub->add_option("--percentile", config.percentile, "Percentile q driving categorization")
        ->check(CLI::Bound(0.0, 1.0))
        ->capture_default_str();
    sub->add_option("--max-gap", config.max_gap, "Largest sample gap bridged by interpolation [s]")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };
  auto add_categorize_opts = [&](CLI::App* sub) {
    sub->add_option("--k-max", config.k_max, "Largest cluster count tried by the elbow")
        ->check(CLI::Range(3, 64))
        ->capture_default_str();
  };

  auto* evaluate = app.add_subcommand("evaluate", "Per-experiment and per-scenario metrics");
  add_manifest(evaluate, true);
  add_out(evaluate);
  add_evaluate_opts(evaluate);

  auto* categorize = app.add_subcommand("categorize", "Performance classes for each scenario");
  add_manifest(categorize, false);
  add_out(categorize);
  add_scheme(categorize);
  add_categorize_opts(categorize);

  auto* learn = app.add_subcommand("learn", "Decision trees over the influencing factors");
  add_manifest(learn, true);
  add_out(learn);
  add_scheme(learn);
  learn->add_flag("--strict", config.strict, "Fail on leaves mixing labels");

  auto* report = app.add_subcommand("report", "evaluate, categorize and learn in one run");
  add_manifest(report, true);
  add_out(report);
  add_evaluate_opts(report);
  add_scheme(report);
  add_categorize_opts(report);
  report->add_flag("--strict", config.strict, "Fail on leaves mixing labels");

  auto* mapq = app.add_subcommand("map-quality", "ICP fitness of one 2-D map against another");
  mapq->add_option("--map-a", config.map_a, "Source cloud CSV (x,y)")->required();
  mapq->add_option("--map-b", config.map_b, "Target cloud CSV (x,y)")->required();
  mapq->add_option("--inlier-radius", config.inlier_radius, "Inlier radius [m]")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  mapq->add_option("--max-iters", config.max_iters, "ICP iteration limit")->check(CLI::Range(1, 100000))->capture_default_str();
  auto* mapq_out = mapq->add_option("--out", config.out_dir, "Directory for map_quality.json");

  auto* simulate = app.add_subcommand("simulate", "Synthetic dataset with a planted decision tree");
  simulate->add_option("--plan", config.plan, "Simulation plan (JSON); case-study default when omitted");
  add_out(simulate);
  auto* seed_opt = simulate->add_option("--seed", seed, "Overrides the plan seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitConfig;
  }
  if (seed_opt->count() > 0) config.seed = seed;

  if (*evaluate) return cmd_evaluate(config, out, err);
  if (*categorize) return cmd_categorize(config, out, err);
  if (*learn) return cmd_learn(config, out, err);
  if (*report) return cmd_report(config, out, err);
  if (*mapq) {
    if (mapq_out->count() == 0) config.out_dir.clear();
    return cmd_map_quality(config, out, err);
  }
  if (*simulate) return cmd_simulate(config, out, err);
  return kExitConfig;
}

}  // namespace ilseval::cli
