#include "coldstart/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "coldstart/common.hpp"
#include "coldstart/config.hpp"
#include "coldstart/data_model.hpp"
#include "coldstart/harness.hpp"

namespace coldstart::cli {

namespace {

using json = nlohmann::ordered_json;

int cmd_ingest(const std::string& ratings, const std::string& attributes, double rmin,
               double rmax, bool as_json, std::ostream& out) {
  const RatingStore store = ingest(ratings, attributes, RatingScale{rmin, rmax, 0.5});
  if (as_json) {
    json j;
    j["users"] = store.num_users();
    j["items"] = store.num_items();
    j["ratings"] = store.ratings().size();
    j["attributes"] = store.num_attrs();
    out << j.dump(2) << '\n';
  } else {
    out << "users: " << store.num_users() << '\n'
        << "items: " << store.num_items() << '\n'
        << "ratings: " << store.ratings().size() << '\n'
        << "attributes: " << store.num_attrs() << '\n';
  }
  return 0;
}

int cmd_synth(const SyntheticSpec& spec, const std::string& out_ratings,
              const std::string& out_attributes, std::ostream& out) {
  const RatingStore store = generate_synthetic(spec);
  write_corpus(store, out_ratings, out_attributes);
  out << "wrote " << store.ratings().size() << " ratings for " << store.num_users()
      << " users x " << store.num_items() << " items (" << store.num_attrs()
      << " attributes)\n";
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& output_override,
            std::ostream& out) {
  ExperimentConfig config = parse_config_file(config_path);
  if (!output_override.empty()) config.output_path = output_override;
  const ExperimentReport report = run_experiment(config);
  out << "report written to " << config.output_path << '\n';
  for (const StrategyMetrics& m : report.mean) {
    out << "  " << strategy_name(m.strategy) << ": ";
    if (m.pfr) out << "pfr=" << *m.pfr << " ast=" << *m.ast << " ";
    out << "rmse=" << m.rmse << " mae=" << m.mae << '\n';
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, std::vector<double> alphas,
              const std::string& output_path, std::ostream& out) {
  ExperimentConfig config = parse_config_file(config_path);
  config.validate();
  if (alphas.size() < 2) throw ValidationError("sweep: need at least 2 alpha values");
  const RatingStore store = config.synth
                                ? generate_synthetic(*config.synth)
                                : ingest(*config.ratings_path, *config.attributes_path,
                                         config.scale);

  // Mean over the configured repetitions, criteria cached per run.
  std::vector<AlphaSweepRow> total(alphas.size());
  for (int run = 0; run < config.repetitions; ++run) {
    ExperimentContext ctx(store, config, static_cast<std::uint64_t>(run));
    const std::vector<AlphaSweepRow> rows = alpha_sweep(ctx, alphas);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      total[i].alpha = rows[i].alpha;
      total[i].pfr += rows[i].pfr / config.repetitions;
      total[i].rmse += rows[i].rmse / config.repetitions;
    }
  }

  out << "alpha,pfr,rmse\n";
  json sweep = json::array();
  for (const AlphaSweepRow& row : total) {
    out << row.alpha << ',' << row.pfr << ',' << row.rmse << '\n';
    json r;
    r["alpha"] = row.alpha;
    r["pfr"] = row.pfr;
    r["rmse"] = row.rmse;
    sweep.push_back(r);
  }
  if (!output_path.empty()) {
    std::ofstream f(output_path);
    if (!f) throw ValidationError("cannot write sweep file: " + output_path);
    json j;
    j["sweep"] = sweep;
    f << j.dump(2) << '\n';
    out << "sweep written to " << output_path << '\n';
  }
  return 0;
}

int cmd_report(const std::string& input, std::ostream& out) {
  std::ifstream f(input);
  if (!f) throw ValidationError("cannot open report file: " + input);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ValidationError("bad report file " + input + ": " + e.what());
  }
  out << "strategies:\n";
  for (const auto& m : j.at("strategies")) {
    out << "  " << m.at("strategy").get<std::string>() << ":";
    for (const char* key : {"pfr", "ast", "rmse", "mae", "precision@5", "recall@5", "ndcg@5"}) {
      out << ' ' << key << '=';
      if (m.at(key).is_null()) out << 'x';
      else out << m.at(key).dump();
    }
    out << '\n';
  }
  if (j.contains("paired_tests") && !j.at("paired_tests").empty()) {
    out << "paired tests:\n";
    for (const auto& t : j.at("paired_tests"))
      out << "  " << t.at("method").get<std::string>() << " vs "
          << t.at("baseline").get<std::string>() << " on " << t.at("metric").get<std::string>()
          << ": t=" << t.at("t").dump() << " p=" << t.at("p").dump()
          << (t.at("significant").get<bool>() ? " (significant)" : "") << '\n';
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"attribute-driven active learning simulator for item cold-start"};
  app.require_subcommand(1);

  auto* ingest_cmd = app.add_subcommand("ingest", "validate a corpus and print statistics");
  std::string ratings_path, attributes_path;
  double rmin = 1.0, rmax = 5.0;
  bool as_json = false;
  ingest_cmd->add_option("--ratings", ratings_path, "ratings CSV")->required();
  ingest_cmd->add_option("--attributes", attributes_path, "attributes CSV")->required();
  ingest_cmd->add_option("--rating-min", rmin, "scale lower bound");
  ingest_cmd->add_option("--rating-max", rmax, "scale upper bound");
  ingest_cmd->add_flag("--json", as_json, "print statistics as JSON");

  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus");
  SyntheticSpec spec;
  std::string out_ratings = "ratings.csv", out_attributes = "attributes.csv";
  synth_cmd->add_option("--users", spec.users);
  synth_cmd->add_option("--items", spec.items);
  synth_cmd->add_option("--attrs", spec.attrs);
  synth_cmd->add_option("--latent-dim", spec.latent_dim);
  synth_cmd->add_option("--density", spec.density);
  synth_cmd->add_option("--noise-std", spec.noise_std);
  synth_cmd->add_option("--seed", spec.seed);
  synth_cmd->add_option("--out-ratings", out_ratings);
  synth_cmd->add_option("--out-attributes", out_attributes);

  auto* run_cmd = app.add_subcommand("run", "run an experiment from a config file");
  std::string config_path, output_override;
  run_cmd->add_option("--config", config_path, "key=value config file")->required();
  run_cmd->add_option("--output", output_override, "override the report path");

  auto* sweep_cmd = app.add_subcommand("sweep", "sweep the willingness weight alpha");
  std::string sweep_config, sweep_output;
  std::vector<double> alphas;
  sweep_cmd->add_option("--config", sweep_config, "key=value config file")->required();
  sweep_cmd->add_option("--alphas", alphas, "alpha values")->required()->delimiter(',');
  sweep_cmd->add_option("--output", sweep_output, "optional JSON output");

  auto* report_cmd = app.add_subcommand("report", "pretty-print a report file");
  std::string report_input;
  report_cmd->add_option("--input", report_input, "report JSON")->required();

  try {
    std::vector<const char*> argv;
    argv.push_back("coldstart");
    for (const std::string& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (ingest_cmd->parsed())
      return cmd_ingest(ratings_path, attributes_path, rmin, rmax, as_json, out);
    if (synth_cmd->parsed()) return cmd_synth(spec, out_ratings, out_attributes, out);
    if (run_cmd->parsed()) return cmd_run(config_path, output_override, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_config, alphas, sweep_output, out);
    if (report_cmd->parsed()) return cmd_report(report_input, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  err << "error: no subcommand\n";
  return 2;
}

}  // namespace coldstart::cli
