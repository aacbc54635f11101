// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mcbench/errors.hpp"
#include "mcbench/pipeline.hpp"
#include "mcbench/util.hpp"

namespace {

using mcbench::Error;
using mcbench::Json;
using mcbench::RunConfig;

struct GlobalFlags {
  std::string config_path;
  std::vector<std::string> inputs;
  std::string out_dir;
  std::string format = "json";
  std::uint64_t seed = 0;
  bool seed_given = false;
};

RunConfig build_config(const GlobalFlags& flags) {
  RunConfig cfg;
  if (!flags.config_path.empty()) {
    cfg = mcbench::load_run_config(flags.config_path);
  }
  if (!flags.inputs.empty()) {
    cfg.inputs.clear();
    for (const std::string& path : flags.inputs) {
      mcbench::InputSpec spec;
      spec.path = path;
      spec.dataset = path;
      if (path.size() >= 6 && path.compare(path.size() - 6, 6, ".jsonl") == 0) {
        spec.format = mcbench::InputSpec::Format::Jsonl;
      }
      cfg.inputs.push_back(std::move(spec));
    }
  }
  if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
  if (flags.seed_given) cfg.seed = flags.seed;
  return cfg;
}

void emit(const GlobalFlags& flags, const std::string& kind, const Json& report) {
  if (flags.format == "table") {
    std::fputs(mcbench::render_table(kind, report).c_str(), stdout);
  } else {
    std::fputs((report.dump(2) + "\n").c_str(), stdout);
  }
  if (!flags.out_dir.empty()) {
    std::filesystem::create_directories(flags.out_dir);
    mcbench::write_file(flags.out_dir + "/" + kind + ".json", report.dump(2) + "\n");
  }
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Multicriteria benchmarking of text-generation decoding methods"};
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_option("--config", flags.config_path, "Run configuration JSON file");
  app.add_option("--seed", flags.seed, "Random seed (overrides the config)")
      ->each([&](const std::string&) { flags.seed_given = true; });
  app.add_option("--out", flags.out_dir, "Output directory for report files");
  app.add_option("--format", flags.format, "Output format")
      ->check(CLI::IsMember({"json", "table"}));

  auto add_inputs = [&](CLI::App* cmd) {
    cmd->add_option("--input,input", flags.inputs,
                    "Metric table files (CSV or JSON-lines)");
  };

  CLI::App* cmd_ingest = app.add_subcommand("ingest", "Validate and summarize inputs");
  add_inputs(cmd_ingest);
  bool raw_input = false;
  cmd_ingest->add_flag("--raw", raw_input,
                       "Treat CSV inputs as raw token/log-prob files");

  CLI::App* cmd_dominance =
      app.add_subcommand("dominance", "Pairwise dominance tallies");
  add_inputs(cmd_dominance);

  CLI::App* cmd_bt = app.add_subcommand("bt", "Fit the paired-comparison model");
  add_inputs(cmd_bt);
  std::string zero_policy = "error";
  cmd_bt->add_option("--zero-policy", zero_policy, "Zero-cell handling")
      ->check(CLI::IsMember({"error", "haldane"}));

  CLI::App* cmd_ufg = app.add_subcommand("ufg", "Union-free generic depth analysis");
  add_inputs(cmd_ufg);
  std::vector<std::string> ufg_methods;
  std::size_t ufg_max_size = 0;
  std::string ufg_mode;
  cmd_ufg->add_option("--methods", ufg_methods, "Restrict to these methods");
  cmd_ufg->add_option("--max-size", ufg_max_size, "Largest candidate set size");
  cmd_ufg->add_option("--mode", ufg_mode, "Depth weighting")
      ->check(CLI::IsMember({"weighted", "uniform_count"}));

  CLI::App* cmd_qtext = app.add_subcommand("qtext", "Composite scoring");
  cmd_qtext->require_subcommand(1);
  CLI::App* cmd_qtext_score =
      cmd_qtext->add_subcommand("score", "Score records with fixed parameters");
  add_inputs(cmd_qtext_score);
  std::string params_path;
  cmd_qtext_score->add_option("--params", params_path, "Parameter JSON file");
  std::string normalization;
  cmd_qtext_score->add_option("--normalization", normalization, "Bounds population")
      ->check(CLI::IsMember({"per_dataset", "pooled"}));
  CLI::App* cmd_qtext_tune =
      cmd_qtext->add_subcommand("tune", "Search parameters against human ratings");
  add_inputs(cmd_qtext_tune);
  std::string ratings_path;
  std::size_t trials = 0;
  std::size_t restarts = 0;
  cmd_qtext_tune->add_option("--ratings", ratings_path, "Ratings CSV (key,rating)");
  cmd_qtext_tune->add_option("--trials", trials, "Search trials per restart");
  cmd_qtext_tune->add_option("--restarts", restarts, "Independent restarts");
  cmd_qtext_tune->add_option("--normalization", normalization, "Bounds population")
      ->check(CLI::IsMember({"per_dataset", "pooled"}));

  CLI::App* cmd_agreement =
      app.add_subcommand("agreement", "Rank agreement between the two engines");
  add_inputs(cmd_agreement);
  cmd_agreement->add_option("--params", params_path, "Parameter JSON file");

  CLI::App* cmd_report =
      app.add_subcommand("report", "Run all configured engines and write reports");
  add_inputs(cmd_report);

  CLI11_PARSE(app, argc, argv);

  RunConfig cfg = build_config(flags);

  if (cmd_ingest->parsed()) {
    if (raw_input) {
      for (mcbench::InputSpec& spec : cfg.inputs) {
        spec.format = mcbench::InputSpec::Format::RawCsv;
      }
    }
    mcbench::TaggedRecords tagged = mcbench::load_inputs(cfg);
    Json summary;
    summary["records"] = tagged.records.size();
    summary["methods"] = mcbench::method_roster(tagged.records);
    summary["instances"] = mcbench::group_by_instance(tagged.records).size();
    if (!tagged.providers.empty()) summary["logprob_providers"] = tagged.providers;
    emit(flags, "ingest", summary);
    return 0;
  }

  if (cmd_dominance->parsed()) {
    mcbench::TaggedRecords tagged = mcbench::load_inputs(cfg);
    emit(flags, "dominance", mcbench::dominance_report(tagged.records, cfg.schema));
    return 0;
  }

  if (cmd_bt->parsed()) {
    if (zero_policy == "haldane") {
      cfg.davidson.zero_policy = mcbench::FitConfig::ZeroPolicy::Haldane;
    }
    mcbench::TaggedRecords tagged = mcbench::load_inputs(cfg);
    emit(flags, "bt", mcbench::bt_report(tagged.records, cfg.schema, cfg.davidson));
    return 0;
  }

  if (cmd_ufg->parsed()) {
    if (!ufg_methods.empty()) cfg.ufg.method_filter = ufg_methods;
    if (ufg_max_size > 0) cfg.ufg.max_size = ufg_max_size;
    if (ufg_mode == "uniform_count") cfg.ufg.mode = mcbench::DepthMode::UniformCount;
    if (ufg_mode == "weighted") cfg.ufg.mode = mcbench::DepthMode::Weighted;
    mcbench::TaggedRecords tagged = mcbench::load_inputs(cfg);
    Json report = mcbench::ufg_report(tagged.records, cfg.schema, cfg.ufg);
    bool truncated = report.at("truncated").get<bool>();
    emit(flags, "ufg", report);
    return truncated ? 3 : 0;
  }

  if (cmd_qtext_score->parsed()) {
    if (!params_path.empty()) cfg.qtext.params_path = params_path;
    if (normalization == "pooled") {
      cfg.qtext.normalization = mcbench::QTextOptions::Normalization::Pooled;
    }
    mcbench::TaggedRecords tagged = mcbench::load_inputs(cfg);
    mcbench::QTextParams params = mcbench::QTextParams::tuned_defaults();
    if (!cfg.qtext.params_path.empty()) {
      params = mcbench::qtext_params_from_json(
          Json::parse(mcbench::read_file(cfg.qtext.params_path)));
    }
    emit(flags, "qtext",
         mcbench::qtext_score_report(tagged, cfg.schema, params,
                                     cfg.qtext.normalization));
    return 0;
  }

  if (cmd_qtext_tune->parsed()) {
    if (!ratings_path.empty()) cfg.qtext.ratings_path = ratings_path;
    if (trials > 0) cfg.qtext.tune_config.max_trials = trials;
    if (restarts > 0) cfg.qtext.tune_config.restarts = restarts;
    if (normalization == "pooled") {
      cfg.qtext.normalization = mcbench::QTextOptions::Normalization::Pooled;
    }
    if (cfg.qtext.ratings_path.empty()) {
      throw Error(mcbench::ErrorCode::ParseError, "tuning needs --ratings");
    }
    mcbench::TaggedRecords tagged = mcbench::load_inputs(cfg);
    mcbench::Ratings ratings =
        mcbench::load_ratings_csv(mcbench::read_file(cfg.qtext.ratings_path));
    emit(flags, "tune",
         mcbench::qtext_tune_report(tagged, cfg.schema, ratings, cfg.qtext, cfg.seed));
    return 0;
  }

  if (cmd_agreement->parsed()) {
    if (!params_path.empty()) cfg.qtext.params_path = params_path;
    mcbench::TaggedRecords tagged = mcbench::load_inputs(cfg);
    mcbench::WorthTable table = mcbench::fit(
        mcbench::tally(tagged.records, cfg.schema), cfg.davidson);
    mcbench::QTextParams params = mcbench::QTextParams::tuned_defaults();
    if (!cfg.qtext.params_path.empty()) {
      params = mcbench::qtext_params_from_json(
          Json::parse(mcbench::read_file(cfg.qtext.params_path)));
    }
    Json score_report = mcbench::qtext_score_report(tagged, cfg.schema, params,
                                                    cfg.qtext.normalization);
    std::map<std::string, double> means;
    for (const auto& [method, mean] : score_report.at("method_means").items()) {
      means[method] = mean.get<double>();
    }
    emit(flags, "agreement",
         mcbench::agreement_to_json(mcbench::agreement(table, means)));
    return 0;
  }

  if (cmd_report->parsed()) {
    mcbench::RunResult result = mcbench::run(cfg);
    mcbench::write_reports(result, cfg.out_dir);
    Json summary;
    summary["out_dir"] = cfg.out_dir;
    Json names = Json::array();
    for (const auto& [name, doc] : result.reports) names.push_back(name + ".json");
    names.push_back("manifest.json");
    summary["written"] = std::move(names);
    summary["truncated"] = result.truncated;
    std::fputs((summary.dump(2) + "\n").c_str(), stdout);
    return result.truncated ? 3 : 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return mcbench::error_exit_code(e.code());
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "[ParseError] %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
