#include "ilseval/cli/pipeline.hpp"

#include <filesystem>
#include <map>
#include <set>

#include "ilseval/align/umeyama.hpp"
#include "ilseval/dtree/render.hpp"
#include "ilseval/ingest/sync.hpp"
#include "ilseval/util/text.hpp"

namespace ilseval::pipeline {

using nlohmann::json;
namespace fs = std::filesystem;

bool csv_safe(const std::string& field) {
  return !field.empty() && field.find_first_of(",\"\r\n") == std::string::npos;
}

namespace {

std::string experiment_tag(const std::string& id, int rep) { return id + "_r" + std::to_string(rep); }

/// Rethrows with the experiment named; ParseError already names its file.
[[noreturn]] void rethrow_for(const Error& e, const std::string& id, int rep) {
  throw Error(e.code(), "scenario '" + id + "' repetition " + std::to_string(rep) + ": " + e.what());
}

CalibrationResult calibrate(const ingest::Manifest& manifest, double max_gap) {
  const ingest::AlignmentSpec& spec = *manifest.alignment;
  const ingest::ScenarioEntry* entry = manifest.find(spec.scenario_id);
  if (entry == nullptr || spec.repetition < 1 || static_cast<std::size_t>(spec.repetition) > entry->experiments.size()) {
    throw Error(Errc::SchemaError, "$.alignment: no experiment '" + spec.scenario_id + "' repetition " +
                                       std::to_string(spec.repetition));
  }
  std::vector<Eigen::Vector3d> src, dst;
  try {
    const ExperimentRecord rec = ingest::load_experiment(entry->experiments[static_cast<std::size_t>(spec.repetition - 1)],
                                                         spec.scenario_id, spec.repetition);
    for (const auto& p : ingest::sync_poses(rec, max_gap)) {
      src.emplace_back(p.estimate.x, p.estimate.y, p.estimate.z);
      dst.emplace_back(p.reference.x, p.reference.y, p.reference.z);
    }
  } catch (const Error& e) {
    rethrow_for(e, spec.scenario_id, spec.repetition);
  }
  CalibrationResult out;
  out.transform = align::umeyama_align(src, dst, spec.with_scale);
  out.rmse = align::alignment_rmse(out.transform, src, dst);
  out.pairs = src.size();
  return out;
}

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> out;
  for (auto f : text::split(line, ',')) out.emplace_back(text::trim(f));
  return out;
}

/// Header-checked CSV read; rows keyed by column name.
std::vector<std::map<std::string, std::string>> read_csv(const std::string& path, const std::vector<std::string>& required) {
  const std::string contents = text::read_file(path);
  std::vector<std::map<std::string, std::string>> rows;
  std::vector<std::string> header;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    std::size_t end = contents.find('\n', pos);
    if (end == std::string::npos) end = contents.size();
    std::string_view line(contents.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty()) continue;
    auto fields = split_line(line);
    if (header.empty()) {
      header = fields;
      for (const auto& r : required) {
        if (std::find(header.begin(), header.end(), r) == header.end()) {
          throw ParseError(Errc::MalformedRow, path, line_no, "missing column '" + r + "'");
        }
      }
      continue;
    }
    if (fields.size() != header.size()) {
      throw ParseError(Errc::MalformedRow, path, line_no,
                       "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
    }
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = fields[i];
    row["#line"] = std::to_string(line_no);
    rows.push_back(std::move(row));
  }
  if (header.empty()) throw ParseError(Errc::EmptyFile, path, 0, "no header");
  return rows;
}

double number_field(const std::map<std::string, std::string>& row, const std::string& key, const std::string& path) {
  auto v = text::parse_double(row.at(key));
  if (!v) {
    throw ParseError(Errc::MalformedRow, path, std::stoul(row.at("#line")), "column '" + key + "' is not a number");
  }
  return *v;
}

std::string num(double v) { return text::format_double(v); }

}  // namespace

EvaluationResult evaluate(const ingest::Manifest& manifest, double q, double max_gap) {
  if (!(q > 0.0 && q < 1.0)) throw Error(Errc::InvalidArgument, "percentile must lie in (0, 1)");
  if (!(max_gap > 0.0)) throw Error(Errc::InvalidArgument, "max gap must be > 0");
  for (const auto& s : manifest.scenarios) {
    if (!csv_safe(s.scenario.id)) throw Error(Errc::SchemaError, "scenario id '" + s.scenario.id + "' contains , \" or a line break");
  }
  EvaluationResult out;
  if (manifest.alignment) out.calibration = calibrate(manifest, max_gap);

  for (const auto& entry : manifest.scenarios) {
    const std::string& id = entry.scenario.id;
    std::vector<double> metric, h95, median;
    std::vector<metrics::CdfCurve> curves;
    for (std::size_t r = 0; r < entry.experiments.size(); ++r) {
      const int rep = static_cast<int>(r + 1);
      try {
        ExperimentRecord rec = ingest::load_experiment(entry.experiments[r], id, rep);
        if (out.calibration) rec.estimate = align::apply_transform(out.calibration->transform, rec.estimate);
        const auto pairs = ingest::sync_pairs(rec, max_gap);
        const auto values = metrics::error_values(metrics::horizontal_errors(pairs));
        const auto summary = metrics::summarize(id, rep, values, q);
        metric.push_back(summary.metric);
        h95.push_back(summary.h95);
        median.push_back(summary.median);
        curves.push_back(metrics::cdf(values));
        out.cdfs.emplace_back(experiment_tag(id, rep), curves.back());
        out.experiments.push_back(summary);
      } catch (const Error& e) {
        rethrow_for(e, id, rep);
      }
    }
    auto agg = metrics::aggregate_scenario(id, metric, manifest.repetitions);
    out.warnings.insert(out.warnings.end(), agg.warnings.begin(), agg.warnings.end());
    ScenarioReport rep;
    rep.scenario_id = id;
    rep.repetitions = static_cast<int>(metric.size());
    rep.metric_q = q;
    rep.mean_metric = agg.metrics.mean_h95;
    rep.mean_h95 = metrics::mean(h95);
    rep.mean_median = metrics::mean(median);
    out.scenarios.push_back(rep);
    if (curves.size() >= 2) out.repeatability.push_back({id, rep.repetitions, metrics::repeatability(curves)});
  }
  return out;
}

void write_evaluation(const EvaluationResult& result, const std::string& out_dir) {
  const fs::path root(out_dir);
  fs::create_directories(root / "cdf");
  std::string exp = "scenario_id,repetition,n_samples,h95,median,mean\n";
  for (const auto& e : result.experiments) {
    exp += e.scenario_id + "," + std::to_string(e.repetition) + "," + std::to_string(e.n_samples) + "," + num(e.h95) +
           "," + num(e.median) + "," + num(e.mean) + "\n";
  }
  text::write_file((root / "experiments.csv").string(), exp);

  std::string sc = "scenario_id,repetitions,metric_q,mean_metric,mean_h95,mean_median\n";
  for (const auto& s : result.scenarios) {
    sc += s.scenario_id + "," + std::to_string(s.repetitions) + "," + num(s.metric_q) + "," + num(s.mean_metric) + "," +
          num(s.mean_h95) + "," + num(s.mean_median) + "\n";
  }
  text::write_file((root / "scenarios.csv").string(), sc);

  std::string rp = "scenario_id,repetitions,max_ks\n";
  for (const auto& r : result.repeatability) {
    rp += r.scenario_id + "," + std::to_string(r.repetitions) + "," + num(r.max_ks) + "\n";
  }
  text::write_file((root / "repeatability.csv").string(), rp);

  for (const auto& [tag, curve] : result.cdfs) {
    std::string c = "error,fraction\n";
    for (const auto& p : curve.points()) c += num(p.error) + "," + num(p.fraction) + "\n";
    text::write_file((root / "cdf" / (tag + ".csv")).string(), c);
  }
  if (result.calibration) {
    json j = align::transform_to_json(result.calibration->transform);
    j["rmse"] = result.calibration->rmse;
    j["pairs"] = result.calibration->pairs;
    text::write_file((root / "alignment.json").string(), ingest::dump_json(j));
  }
}

std::vector<ScenarioReport> read_scenario_report(const std::string& path) {
  std::vector<ScenarioReport> out;
  for (const auto& row : read_csv(path, {"scenario_id", "repetitions", "metric_q", "mean_metric", "mean_h95", "mean_median"})) {
    ScenarioReport r;
    r.scenario_id = row.at("scenario_id");
    r.repetitions = static_cast<int>(number_field(row, "repetitions", path));
    r.metric_q = number_field(row, "metric_q", path);
    r.mean_metric = number_field(row, "mean_metric", path);
    r.mean_h95 = number_field(row, "mean_h95", path);
    r.mean_median = number_field(row, "mean_median", path);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ScenarioMetrics> to_scenario_metrics(const std::vector<ScenarioReport>& reports) {
  std::vector<ScenarioMetrics> out;
  for (const auto& r : reports) {
    ScenarioMetrics m;
    m.scenario_id = r.scenario_id;
    m.mean_h95 = r.mean_metric;
    out.push_back(std::move(m));
  }
  return out;
}

Categorization categorize_application(const std::vector<ScenarioMetrics>& metrics, const PerformanceClassScheme& scheme) {
  Categorization out;
  out.scheme = scheme;
  for (const auto& m : metrics) out.labeled.push_back(categorize::classify_application(m, scheme));
  return out;
}

Categorization categorize_technology(const std::vector<ScenarioMetrics>& metrics, int k_max) {
  std::vector<double> values;
  for (const auto& m : metrics) values.push_back(m.mean_h95);
  const int cap = std::min<int>(k_max, static_cast<int>(values.size()) - 1);
  if (cap < 3) {
    throw Error(Errc::InvalidK, "technology categorization needs k_max >= 3 and more than k_max scenarios");
  }
  Categorization out;
  out.sse = categorize::sse_curve(values, cap);
  const int k = categorize::elbow_from_sse(out.sse);
  out.clusters = categorize::kmeans_1d_exact(values, k);
  const auto labels = categorize::roman_labels(k);
  out.scheme = categorize::scheme_from_clusters(*out.clusters, labels, SchemeKind::Technology);
  for (const auto& m : metrics) {
    ScenarioMetrics l = m;
    l.class_label = out.scheme.classify(m.mean_h95);
    out.labeled.push_back(std::move(l));
  }
  return out;
}

void write_categorizations(const std::vector<Categorization>& results, const std::string& out_dir) {
  const fs::path root(out_dir);
  fs::create_directories(root);
  std::string cats = "scenario_id,mean_h95,class_label,scheme_kind\n";
  for (const auto& c : results) {
    const std::string kind(to_string(c.scheme.kind()));
    for (const auto& m : c.labeled) cats += m.scenario_id + "," + num(m.mean_h95) + "," + *m.class_label + "," + kind + "\n";
    text::write_file((root / ("scheme_" + kind + ".json")).string(), ingest::dump_json(ingest::scheme_to_json(c.scheme)));
    if (c.clusters) {
      std::string elbow = "k,sse\n";
      for (std::size_t k = 0; k < c.sse.size(); ++k) elbow += std::to_string(k + 1) + "," + num(c.sse[k]) + "\n";
      text::write_file((root / "elbow.csv").string(), elbow);
      json j;
      j["k"] = c.clusters->k;
      j["centers"] = c.clusters->centers;
      j["minima"] = c.clusters->minima;
      j["maxima"] = c.clusters->maxima;
      j["sse"] = c.clusters->sse;
      text::write_file((root / "clusters.json").string(), ingest::dump_json(j));
    }
  }
  text::write_file((root / "categories.csv").string(), cats);

  if (results.size() == 2 && results[0].labeled.size() == results[1].labeled.size()) {
    std::string wide = "scenario_id,mean_h95," + std::string(to_string(results[0].scheme.kind())) + "_label," +
                       std::string(to_string(results[1].scheme.kind())) + "_label\n";
    for (std::size_t i = 0; i < results[0].labeled.size(); ++i) {
      const auto& a = results[0].labeled[i];
      const auto& b = results[1].labeled[i];
      wide += a.scenario_id + "," + num(a.mean_h95) + "," + *a.class_label + "," + *b.class_label + "\n";
    }
    text::write_file((root / "categories_wide.csv").string(), wide);
  }
}

std::vector<CategoryRow> read_categories(const std::string& path) {
  std::vector<CategoryRow> out;
  for (const auto& row : read_csv(path, {"scenario_id", "mean_h95", "class_label", "scheme_kind"})) {
    CategoryRow r;
    r.scenario_id = row.at("scenario_id");
    r.value = number_field(row, "mean_h95", path);
    r.label = row.at("class_label");
    try {
      r.kind = parse_scheme_kind(row.at("scheme_kind"));
    } catch (const Error&) {
      throw ParseError(Errc::MalformedRow, path, std::stoul(row.at("#line")), "unknown scheme kind '" + row.at("scheme_kind") + "'");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<dtree::LabeledRecord> labeled_records(const ingest::Manifest& manifest, const std::vector<CategoryRow>& rows,
                                                  SchemeKind kind) {
  std::vector<dtree::LabeledRecord> out;
  for (const auto& r : rows) {
    if (r.kind != kind) continue;
    const ingest::ScenarioEntry* entry = manifest.find(r.scenario_id);
    if (entry == nullptr) throw Error(Errc::InvalidArgument, "categorized scenario '" + r.scenario_id + "' is not in the manifest");
    out.push_back({r.scenario_id, entry->scenario.assignment, r.label});
  }
  return out;
}

json relevance_report(const dtree::DecisionTree& tree, SchemeKind kind) {
  json j;
  j["scheme_kind"] = std::string(to_string(kind));
  j["leaves"] = json::array();
  for (std::size_t leaf : tree.leaves()) {
    const auto rel = dtree::relevance(tree, leaf);
    const auto& l = tree.node(leaf).leaf;
    j["leaves"].push_back({{"node", leaf},
                           {"label", l.label},
                           {"support", l.support},
                           {"impure", l.impure},
                           {"relevant", rel.relevant},
                           {"irrelevant", rel.irrelevant}});
  }
  j["factor_usage"] = json::array();
  for (const auto& u : dtree::factor_usage(tree)) {
    j["factor_usage"].push_back({{"factor", u.factor}, {"tests", u.tests}, {"relevant_leaves", u.relevant_leaves}});
  }
  return j;
}

void write_tree_artifacts(const dtree::DecisionTree& tree, SchemeKind kind, const std::string& out_dir) {
  const fs::path root(out_dir);
  fs::create_directories(root);
  const std::string k(to_string(kind));
  text::write_file((root / ("tree_" + k + ".json")).string(), dtree::render(tree, dtree::RenderFormat::Json));
  text::write_file((root / ("tree_" + k + ".dot")).string(), dtree::render(tree, dtree::RenderFormat::Dot));
  text::write_file((root / ("tree_" + k + ".txt")).string(), dtree::render(tree, dtree::RenderFormat::Text));
  text::write_file((root / ("relevance_" + k + ".json")).string(), ingest::dump_json(relevance_report(tree, kind)));
}

}  // namespace ilseval::pipeline
