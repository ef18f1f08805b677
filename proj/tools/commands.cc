/*
 * Copyright 2026 The sdm Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "commands.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sdm/error.h"
#include "sdm/map_predict.h"
#include "sdm/metrics.h"
#include "sdm/model_io.h"
#include "sdm/random.h"
#include "sdm/synth.h"
#include "sdm/text.h"

namespace sdm::cli {

namespace fs = std::filesystem;

FeatureRasters load_feature_rasters(const fs::path& elevation,
                                    const fs::path& precipitation,
                                    const fs::path& temperature) {
  return FeatureRasters{load_ascii_grid(elevation),
                        load_ascii_grid(precipitation),
                        load_ascii_grid(temperature)};
}

IngestResult ingest_pipeline(const IngestOptions& options) {
  if (options.species.empty()) throw ConfigError("--species is required");
  const FeatureRasters rasters = load_feature_rasters(
      options.elevation, options.precipitation, options.temperature);
  const auto records = filter_species(
      parse_observations_csv(text::read_file(options.observations)),
      options.species);
  if (records.empty()) {
    throw DataError("no observations for species '" + options.species + "'");
  }

  IngestResult result;
  result.presences = records.size();
  std::vector<GeoPoint> presence_points;
  presence_points.reserve(records.size());
  for (const auto& r : records) presence_points.push_back(r.point);
  result.region = options.region
                      ? *options.region
                      : BoundingBox::around(presence_points,
                                            options.region_margin_deg);

  PseudoAbsenceOptions pa;
  pa.count = options.absences == 0 ? 2 * options.per_class : options.absences;
  pa.min_dist_km = options.min_dist_km;
  pa.seed = stream_seed(options.seed, kAbsenceStream);
  pa.max_attempts = options.max_attempts;
  const auto absences =
      generate_pseudo_absences(presence_points, result.region, pa);

  auto assembled = assemble_dataset(records, absences, rasters);
  result.dropped = assembled.dropped;
  result.balanced =
      balanced_sample(assembled.dataset, options.per_class,
                      stream_seed(options.seed, kBalanceStream));
  result.split = split(result.balanced, stream_seed(options.seed, kSplitStream));
  return result;
}

namespace {

struct Paths3 {
  std::string elevation, precipitation, temperature;
};

void add_raster_flags(CLI::App* cmd, Paths3& paths) {
  cmd->add_option("--elevation", paths.elevation, "Elevation raster (.asc)")
      ->required();
  cmd->add_option("--precipitation", paths.precipitation,
                  "Precipitation raster (.asc)")
      ->required();
  cmd->add_option("--temperature", paths.temperature,
                  "Temperature raster (.asc)")
      ->required();
}

BoundingBox parse_bbox(const std::string& spec) {
  const auto parts = text::split_csv_line(spec);
  if (parts.size() != 4) {
    throw ConfigError("bounding box must be min_lat,max_lat,min_lon,max_lon");
  }
  double v[4];
  for (int i = 0; i < 4; ++i) {
    const auto d = text::parse_double(parts[static_cast<std::size_t>(i)]);
    if (!d) throw ConfigError("bounding box value '" + parts[i] + "' is not a number");
    v[i] = *d;
  }
  return BoundingBox::make(v[0], v[1], v[2], v[3]);
}

Dataset read_dataset(const std::string& path) {
  return parse_dataset_csv(text::read_file(path));
}

void write_text(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  text::write_file(path, contents);
}

void require_pipeline_schema(const Dataset& d, const std::string& path) {
  if (d.feature_names != pipeline_feature_names()) {
    std::string got;
    for (const auto& n : d.feature_names) got += (got.empty() ? "" : ",") + n;
    throw ConfigError(path +
                      ": dataset columns must be label,latitude,longitude,"
                      "elevation,precipitation,temperature; got label," +
                      got);
  }
}

void require_model_schema(const Model& model, const Dataset& d,
                          const std::string& path) {
  if (feature_names(model) != d.feature_names) {
    throw ConfigError(path + ": feature columns do not match the model's "
                             "feature_names");
  }
}

std::string model_short_name(const Model& model) {
  return std::holds_alternative<RandomForestModel>(model) ? "rf" : "gbt";
}

const std::string& model_species(const Model& model) {
  return std::visit([](const auto& m) -> const std::string& { return m.species; },
                    model);
}

void print_report(std::ostream& out, const MetricsReport& r,
                  const ReportContext& ctx, double theta) {
  out << ctx.split << " [" << ctx.model << "] theta=" << text::format_double(theta)
      << " n=" << r.confusion.total() << "\n"
      << "  accuracy  " << text::format_fixed(r.accuracy, 4) << "\n"
      << "  precision " << text::format_fixed(r.precision, 4)
      << (r.precision_degenerate ? " (degenerate)" : "") << "\n"
      << "  recall    " << text::format_fixed(r.recall, 4)
      << (r.recall_degenerate ? " (degenerate)" : "") << "\n"
      << "  f1        " << text::format_fixed(r.f1, 4)
      << (r.f1_degenerate ? " (degenerate)" : "") << "\n"
      << "  auc       " << text::format_fixed(r.auc, 4) << "\n"
      << "  confusion tp=" << r.confusion.tp << " fp=" << r.confusion.fp
      << " fn=" << r.confusion.fn << " tn=" << r.confusion.tn << "\n";
}

std::string importance_json(const FeatureImportance& imp, const Model& model) {
  nlohmann::ordered_json j;
  j["species"] = model_species(model);
  j["model"] = model_short_name(model);
  j["has_splits"] = imp.has_splits;
  nlohmann::ordered_json weights = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < imp.feature_names.size(); ++i) {
    weights[imp.feature_names[i]] = imp.weights[i];
  }
  j["weights"] = std::move(weights);
  return j.dump(2) + "\n";
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

// Horizontal bar chart, one bar per feature in model order.
std::string importance_svg(const FeatureImportance& imp, const std::string& title) {
  constexpr int kLabelWidth = 140;
  constexpr int kBarWidth = 320;
  constexpr int kRowHeight = 28;
  constexpr int kTop = 40;
  const int height = kTop + static_cast<int>(imp.weights.size()) * kRowHeight + 20;
  const int width = kLabelWidth + kBarWidth + 80;
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n"
      << "  <text x=\"10\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
      << xml_escape(title) << "</text>\n";
  for (std::size_t i = 0; i < imp.weights.size(); ++i) {
    const int y = kTop + static_cast<int>(i) * kRowHeight;
    const double w = imp.weights[i];
    svg << "  <text x=\"10\" y=\"" << y + 16
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << xml_escape(imp.feature_names[i]) << "</text>\n"
        << "  <rect x=\"" << kLabelWidth << "\" y=\"" << y + 4 << "\" width=\""
        << text::format_fixed(w * kBarWidth, 2) << "\" height=\""
        << kRowHeight - 8 << "\" fill=\"#4477aa\"/>\n"
        << "  <text x=\"" << kLabelWidth + kBarWidth + 8 << "\" y=\"" << y + 16
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << text::format_fixed(w, 3) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::optional<std::size_t> parse_max_features(const std::string& spec,
                                              std::size_t arity, bool forest) {
  if (spec.empty()) {
    if (!forest) return std::nullopt;
    return resolve_forest_config({}, arity).max_features;
  }
  if (spec == "all") return std::nullopt;
  if (spec == "sqrt") return resolve_forest_config({}, arity).max_features;
  const auto v = text::parse_int(spec);
  if (!v || *v < 1) {
    throw ConfigError("--max-features must be a positive integer, 'sqrt' or 'all'");
  }
  return static_cast<std::size_t>(*v);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Species distribution modelling with random forests and "
               "gradient boosted trees"};
  app.require_subcommand(1);
  std::function<void()> action;

  // ingest / export-dataset share their inputs.
  IngestOptions ingest;
  Paths3 ingest_rasters;
  std::string region_spec;
  std::string ingest_out_dir;
  std::string export_out;
  const auto add_ingest_flags = [&](CLI::App* cmd) {
    cmd->add_option("--observations", ingest.observations,
                    "Observation CSV (species,latitude,longitude,date)")
        ->required();
    cmd->add_option("--species", ingest.species, "Species to model")->required();
    add_raster_flags(cmd, ingest_rasters);
    cmd->add_option("--seed", ingest.seed, "Random seed")->required();
    cmd->add_option("--per-class", ingest.per_class,
                    "Samples per class after balancing")
        ->capture_default_str();
    cmd->add_option("--absences", ingest.absences,
                    "Pseudo-absence candidates before the nodata filter "
                    "(default 2 x per-class)");
    cmd->add_option("--min-dist-km", ingest.min_dist_km,
                    "Exclusion radius around presences")
        ->capture_default_str();
    cmd->add_option("--region", region_spec,
                    "Pseudo-absence region min_lat,max_lat,min_lon,max_lon");
    cmd->add_option("--region-margin", ingest.region_margin_deg,
                    "Margin around the presence bounding box (degrees)")
        ->capture_default_str();
    cmd->add_option("--max-attempts", ingest.max_attempts,
                    "Rejection sampling budget (default 1000 x absences)");
  };
  const auto finish_ingest_options = [&] {
    ingest.elevation = ingest_rasters.elevation;
    ingest.precipitation = ingest_rasters.precipitation;
    ingest.temperature = ingest_rasters.temperature;
    if (!region_spec.empty()) ingest.region = parse_bbox(region_spec);
  };
  const auto report_ingest = [&](const IngestResult& r) {
    err << "species '" << ingest.species << "': " << r.presences
        << " presences, " << r.dropped << " points dropped for nodata, "
        << "balanced to " << r.balanced.size() << " samples\n";
  };

  auto* ingest_cmd = app.add_subcommand(
      "ingest", "Build train/val/test CSVs from observations and rasters");
  add_ingest_flags(ingest_cmd);
  ingest_cmd->add_option("--out-dir", ingest_out_dir, "Output directory")
      ->required();
  ingest_cmd->callback([&] {
    action = [&] {
      finish_ingest_options();
      const auto r = ingest_pipeline(ingest);
      report_ingest(r);
      const fs::path dir = ingest_out_dir;
      write_text(dir / "train.csv", format_dataset_csv(r.split.train));
      write_text(dir / "val.csv", format_dataset_csv(r.split.val));
      write_text(dir / "test.csv", format_dataset_csv(r.split.test));
      out << "train " << r.split.train.size() << ", val " << r.split.val.size()
          << ", test " << r.split.test.size() << " rows written to "
          << dir.string() << "\n";
    };
  });

  auto* export_cmd = app.add_subcommand(
      "export-dataset", "Write the balanced, unsplit dataset CSV");
  add_ingest_flags(export_cmd);
  export_cmd->add_option("--out", export_out, "Output CSV")->required();
  export_cmd->callback([&] {
    action = [&] {
      finish_ingest_options();
      const auto r = ingest_pipeline(ingest);
      report_ingest(r);
      write_text(export_out, format_dataset_csv(r.balanced));
      out << r.balanced.size() << " rows written to " << export_out << "\n";
    };
  });

  // train
  std::string model_kind, train_path, val_path, model_out, species;
  std::uint64_t train_seed = 0;
  std::size_t num_trees = 100;
  std::optional<std::size_t> max_depth;
  std::size_t min_samples_split = 2;
  std::string max_features;
  double eta = 0.1;
  std::size_t threads = 0;
  double train_theta = kDefaultThreshold;
  bool tune_theta = false;
  bool train_json = false;
  auto* train_cmd = app.add_subcommand("train", "Train a model on a split");
  train_cmd->add_option("--model", model_kind, "rf or gbt")
      ->required()
      ->check(CLI::IsMember({"rf", "gbt"}));
  train_cmd->add_option("--train", train_path, "Training CSV")->required();
  train_cmd->add_option("--val", val_path, "Validation CSV");
  train_cmd->add_option("--out", model_out, "Model JSON to write")->required();
  train_cmd->add_option("--seed", train_seed, "Random seed")->required();
  train_cmd->add_option("--species", species, "Species name stored in the model");
  train_cmd->add_option("--trees", num_trees, "Number of trees")
      ->capture_default_str();
  train_cmd->add_option("--max-depth", max_depth,
                        "Maximum depth (default 10 for rf, 3 for gbt)");
  train_cmd->add_option("--min-samples-split", min_samples_split,
                        "Minimum rows to split a node")
      ->capture_default_str();
  train_cmd->add_option("--max-features", max_features,
                        "Features per split: integer, sqrt or all "
                        "(default sqrt for rf, all for gbt)");
  train_cmd->add_option("--eta", eta, "Learning rate (gbt)")->capture_default_str();
  train_cmd->add_option("--threads", threads,
                        "Worker threads for rf (0 = all cores)")
      ->capture_default_str();
  train_cmd->add_option("--theta", train_theta, "Decision threshold")
      ->capture_default_str();
  train_cmd->add_flag("--tune-theta", tune_theta,
                      "Pick the accuracy-maximising threshold on validation");
  train_cmd->add_flag("--json", train_json, "Print the validation report as JSON");
  train_cmd->callback([&] {
    action = [&] {
      const Dataset train = read_dataset(train_path);
      require_pipeline_schema(train, train_path);
      const FeatureMatrix X = train.feature_matrix();
      const auto y = train.targets();
      const std::size_t arity = X.cols();
      Model model;
      if (model_kind == "rf") {
        RandomForestParams p;
        p.num_trees = num_trees;
        p.tree.max_depth = max_depth.value_or(10);
        p.tree.min_samples_split = min_samples_split;
        p.tree.max_features = parse_max_features(max_features, arity, true);
        auto rf = train_random_forest(X, y, p, train_seed, threads);
        rf.feature_names = train.feature_names;
        rf.species = species;
        model = std::move(rf);
      } else {
        GradientBoostingParams p;
        p.num_trees = num_trees;
        p.eta = eta;
        p.tree.max_depth = max_depth.value_or(3);
        p.tree.min_samples_split = min_samples_split;
        p.tree.max_features = parse_max_features(max_features, arity, false);
        auto gbt = train_gbt(X, y, p, train_seed);
        gbt.feature_names = train.feature_names;
        gbt.species = species;
        model = std::move(gbt);
      }
      write_text(model_out, model_to_json(model));
      out << "model written to " << model_out << "\n";

      if (val_path.empty()) return;
      const Dataset val = read_dataset(val_path);
      require_model_schema(model, val, val_path);
      if (val.size() == 0) {
        err << "validation split is empty; skipping report\n";
        return;
      }
      const auto pred = predict(model, val.feature_matrix());
      const auto labels = val.labels();
      double theta = train_theta;
      if (tune_theta) {
        theta = sweep_threshold(labels, pred.probabilities);
        err << "tuned theta on validation: " << text::format_double(theta) << "\n";
      }
      const auto report = classification_report(labels, pred.probabilities, theta);
      const ReportContext ctx{species, model_kind, "val"};
      if (train_json) {
        out << report_to_json(report, ctx);
      } else {
        print_report(out, report, ctx, theta);
      }
    };
  });

  // evaluate
  std::string model_path, data_path, metrics_out, split_name = "test";
  double eval_theta = kDefaultThreshold;
  bool eval_json = false;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score a model on a split");
  eval_cmd->add_option("--model-file", model_path, "Model JSON")->required();
  eval_cmd->add_option("--data", data_path, "Dataset CSV")->required();
  eval_cmd->add_option("--theta", eval_theta, "Decision threshold")
      ->capture_default_str();
  eval_cmd->add_option("--split", split_name, "Split name for the report")
      ->capture_default_str();
  eval_cmd->add_option("--out", metrics_out, "Metrics JSON to write");
  eval_cmd->add_flag("--json", eval_json, "Print the report as JSON");
  eval_cmd->callback([&] {
    action = [&] {
      const Model model = load_model(model_path);
      const Dataset data = read_dataset(data_path);
      require_model_schema(model, data, data_path);
      const auto pred = predict(model, data.feature_matrix());
      const auto report =
          classification_report(data.labels(), pred.probabilities, eval_theta);
      const ReportContext ctx{model_species(model), model_short_name(model),
                              split_name};
      const std::string json = report_to_json(report, ctx);
      if (!metrics_out.empty()) write_text(metrics_out, json);
      if (eval_json) {
        out << json;
      } else {
        print_report(out, report, ctx, eval_theta);
      }
    };
  });

  // importance
  std::string imp_model, imp_out, imp_svg;
  auto* imp_cmd = app.add_subcommand("importance", "Feature importance report");
  imp_cmd->add_option("--model-file", imp_model, "Model JSON")->required();
  imp_cmd->add_option("--out", imp_out, "Importance JSON to write");
  imp_cmd->add_option("--svg", imp_svg, "Bar chart SVG to write");
  imp_cmd->callback([&] {
    action = [&] {
      const Model model = load_model(imp_model);
      const auto imp = feature_importance(model);
      if (!imp.has_splits) {
        err << "warning: model has no splits; all importances are zero\n";
      }
      const std::string json = importance_json(imp, model);
      if (!imp_out.empty()) write_text(imp_out, json);
      if (!imp_svg.empty()) {
        const std::string title = "Feature importance (" +
                                  model_short_name(model) +
                                  (model_species(model).empty()
                                       ? ""
                                       : ", " + model_species(model)) +
                                  ")";
        write_text(imp_svg, importance_svg(imp, title));
      }
      out << json;
    };
  });

  // map
  std::string map_model, bbox_spec, map_csv, map_pgm;
  Paths3 map_rasters;
  double step = kDefaultGridStepDeg;
  auto* map_cmd = app.add_subcommand("map", "Predicted distribution map");
  map_cmd->add_option("--model-file", map_model, "Model JSON")->required();
  add_raster_flags(map_cmd, map_rasters);
  map_cmd->add_option("--bbox", bbox_spec, "min_lat,max_lat,min_lon,max_lon")
      ->required();
  map_cmd->add_option("--step", step, "Cell size in degrees")->capture_default_str();
  map_cmd->add_option("--csv", map_csv, "Grid CSV to write")->required();
  map_cmd->add_option("--pgm", map_pgm, "Heatmap PGM to write");
  map_cmd->callback([&] {
    action = [&] {
      const Model model = load_model(map_model);
      const auto rasters = load_feature_rasters(
          map_rasters.elevation, map_rasters.precipitation, map_rasters.temperature);
      const auto grid = predict_grid(model, rasters, parse_bbox(bbox_spec), step);
      std::ostringstream csv;
      const std::size_t rows = write_grid_csv(grid, csv);
      write_text(map_csv, csv.str());
      if (!map_pgm.empty()) {
        std::ostringstream pgm;
        write_heatmap_pgm(grid, pgm);
        write_text(map_pgm, pgm.str());
      }
      out << grid.rows << " x " << grid.cols << " grid, " << rows
          << " scored cells written to " << map_csv << "\n";
    };
  });

  // synth
  std::size_t synth_n = 500;
  double separation = 4.0;
  std::uint64_t synth_seed = 0;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand(
      "synth", "Two-cluster synthetic dataset in the export schema");
  synth_cmd->add_option("--n", synth_n, "Total rows")->capture_default_str();
  synth_cmd->add_option("--separation", separation,
                        "Per-axis distance between class means (std devs)")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth_seed, "Random seed")->required();
  synth_cmd->add_option("--out-dir", synth_out, "Output directory")->required();
  synth_cmd->callback([&] {
    action = [&] {
      const Dataset data = make_synthetic_clusters(synth_n, separation, synth_seed);
      const auto parts = split(data, stream_seed(synth_seed, kSplitStream));
      const fs::path dir = synth_out;
      write_text(dir / "dataset.csv", format_dataset_csv(data));
      write_text(dir / "train.csv", format_dataset_csv(parts.train));
      write_text(dir / "val.csv", format_dataset_csv(parts.val));
      write_text(dir / "test.csv", format_dataset_csv(parts.test));
      out << "train " << parts.train.size() << ", val " << parts.val.size()
          << ", test " << parts.test.size() << " rows written to "
          << dir.string() << "\n";
    };
  });

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (action) action();
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace sdm::cli
