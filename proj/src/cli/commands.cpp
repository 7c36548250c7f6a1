#include "climact/cli.hpp"

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "climact/csv.hpp"
#include "climact/dates.hpp"
#include "climact/experiments.hpp"
#include "climact/fit.hpp"
#include "climact/forward.hpp"
#include "climact/ingest.hpp"
#include "climact/serialize.hpp"
#include "report.hpp"

namespace climact {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::vector<double> parse_double_list(const std::string& s,
                                      const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw std::invalid_argument(flag + ": bad number '" + tok + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument(flag + ": empty list");
  return out;
}

std::vector<std::string> parse_string_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw std::invalid_argument("cannot create output directory '" + dir +
                                "'");
}

/// Reproducibility record of one CLI run: resolved options, seed,
/// version and input digests.
void write_manifest(const std::string& out_dir, const std::string& command,
                    const std::map<std::string, std::string>& options,
                    const std::vector<std::string>& inputs) {
  json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["options"] = options;
  json digests = json::object();
  for (const std::string& path : inputs) digests[path] = file_digest(path);
  j["inputs"] = digests;
  write_text_file(out_dir + "/manifest.json", j.dump(2) + "\n");
}

// Shared fit/experiment options.
struct FitFlags {
  std::string data_dir;
  std::string out_dir;
  std::string var_s_list = "0.01,1,100";
  FitConfig config;
  std::string gap = "on";
  std::string t_a;
  std::string groups = "E,I,M,D";

  void add_common(CLI::App* cmd, bool with_var_s_list) {
    cmd->add_option("--data", data_dir, "Directory with catalog.csv and users.csv")
        ->required();
    cmd->add_option("--out", out_dir, "Output directory")->required();
    if (with_var_s_list)
      cmd->add_option("--var-s", var_s_list,
                      "Comma-separated sympathy prior variances");
    cmd->add_option("--restarts", config.n_restarts, "Random restarts");
    cmd->add_option("--lr", config.learning_rate, "Adam learning rate");
    cmd->add_option("--steps", config.n_steps, "Max optimization steps");
    cmd->add_option("--mc-samples", config.mc_samples_per_step,
                    "Monte-Carlo samples per step");
    cmd->add_option("--predictive-samples", config.n_predictive_samples,
                    "Posterior predictive samples for accuracy");
    cmd->add_option("--seed", config.seed, "Master seed");
    cmd->add_option("--minibatch-fraction", config.minibatch_fraction,
                    "Fraction of users per step (1 = full batch)");
    cmd->add_option("--gap", gap, "Four-week gap between windows: on|off")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--t-a", t_a,
                    "Activation reference date YYYY-MM-DD (needed when "
                    "media features come from media.csv)");
  }

  LoadedData load() const {
    const std::string catalog = data_dir + "/catalog.csv";
    const std::string users = data_dir + "/users.csv";
    std::optional<std::string> media;
    if (fs::exists(data_dir + "/media.csv")) media = data_dir + "/media.csv";
    LoadOptions opts;
    opts.gap_enabled = gap == "on";
    if (!t_a.empty()) opts.t_a = parse_date(t_a);
    return load_dataset(catalog, users, media, std::nullopt, opts);
  }

  std::vector<std::string> input_files() const {
    std::vector<std::string> files = {data_dir + "/catalog.csv",
                                      data_dir + "/users.csv"};
    if (fs::exists(data_dir + "/media.csv"))
      files.push_back(data_dir + "/media.csv");
    return files;
  }

  std::map<std::string, std::string> option_map() const {
    return {{"data", data_dir},
            {"out", out_dir},
            {"var_s", var_s_list},
            {"restarts", std::to_string(config.n_restarts)},
            {"lr", format_double(config.learning_rate)},
            {"steps", std::to_string(config.n_steps)},
            {"mc_samples", std::to_string(config.mc_samples_per_step)},
            {"predictive_samples",
             std::to_string(config.n_predictive_samples)},
            {"seed", std::to_string(config.seed)},
            {"minibatch_fraction", format_double(config.minibatch_fraction)},
            {"gap", gap},
            {"t_a", t_a},
            {"groups", groups}};
  }
};

std::pair<double, double> accuracy_mean_sd(const FitResult& result,
                                           const Dataset& data,
                                           const Hyperparameters& hyper,
                                           const FitConfig& config,
                                           const ModelStructure& st) {
  Hyperparameters h = hyper;
  h.var_s = result.var_s;
  const JointModel model(data, h, st);
  const std::vector<double> acc = posterior_predictive_accuracy_samples(
      result.best_guide, model, config.n_predictive_samples,
      derive_seed(config.seed, 0xacc0, 0));
  double mean = 0.0;
  for (double a : acc) mean += a;
  mean /= static_cast<double>(acc.size());
  double ss = 0.0;
  for (double a : acc) ss += (a - mean) * (a - mean);
  const double sd = acc.size() > 1
                        ? std::sqrt(ss / static_cast<double>(acc.size() - 1))
                        : 0.0;
  return {mean, sd};
}

std::string fit_file_name(const std::string& variant, double var_s) {
  return "fit_" + variant + "_var_s_" + format_double(var_s) + ".json";
}

int cmd_simulate(const std::string& params_path,
                 const std::string& catalog_path, std::size_t n_users,
                 std::uint64_t seed, const std::string& out_dir,
                 const std::string& media_gen, double var_s) {
  const SubredditCatalog catalog = load_catalog(catalog_path);
  const ModelParameters params =
      params_from_json(read_text_file(params_path), params_path);
  const MediaGenerator gen = MediaGenerator::parse(media_gen);
  Hyperparameters hyper;
  hyper.var_s = var_s;

  const auto [users, latents] =
      forward_sample(params, catalog, hyper, n_users, gen, seed);
  Dataset data{catalog, users};

  ensure_out_dir(out_dir);
  write_text_file(out_dir + "/catalog.csv", catalog_to_csv(catalog));
  write_text_file(out_dir + "/users.csv", users_to_csv(data));
  write_text_file(out_dir + "/latents.csv", latents_to_csv(data, latents));
  write_text_file(out_dir + "/params.json", params_to_json(params));
  write_manifest(out_dir, "simulate",
                 {{"params", params_path},
                  {"catalog", catalog_path},
                  {"n_users", std::to_string(n_users)},
                  {"seed", std::to_string(seed)},
                  {"media_gen", media_gen},
                  {"var_s", format_double(var_s)},
                  {"out", out_dir}},
                 {params_path, catalog_path});
  return 0;
}

int cmd_fit(const FitFlags& flags) {
  const LoadedData loaded = flags.load();
  const std::vector<double> sweep =
      parse_double_list(flags.var_s_list, "--var-s");
  ensure_out_dir(flags.out_dir);
  const Hyperparameters hyper;

  for (double var_s : sweep) {
    FitConfig cfg = flags.config;
    cfg.var_s = var_s;
    const FitResult result = fit(loaded.data, hyper, cfg);
    const auto [mean, sd] =
        accuracy_mean_sd(result, loaded.data, hyper, cfg, ModelStructure{});
    const FitDocument doc =
        make_fit_document(result, loaded.data, "full", mean, sd);
    write_text_file(flags.out_dir + "/" + fit_file_name("full", var_s),
                    fit_document_to_json(doc));
  }
  write_manifest(flags.out_dir, "fit", flags.option_map(),
                 flags.input_files());
  return 0;
}

int cmd_ablate(const FitFlags& flags) {
  const LoadedData loaded = flags.load();
  const std::vector<double> sweep =
      parse_double_list(flags.var_s_list, "--var-s");
  const std::vector<std::string> groups = parse_string_list(flags.groups);
  ensure_out_dir(flags.out_dir);
  const Hyperparameters hyper;

  const std::vector<AblationEntry> entries =
      run_ablation(loaded.data, hyper, flags.config, groups, sweep);

  std::ostringstream csv;
  csv << "var_s,variant,accuracy_mean,accuracy_sd\n";
  for (const AblationEntry& e : entries) {
    csv << format_double(e.var_s) << ',' << e.variant << ','
        << format_double(e.accuracy_mean) << ',' << format_double(e.accuracy_sd)
        << '\n';
    const FitDocument doc = make_fit_document(e.fit, loaded.data, e.variant,
                                              e.accuracy_mean, e.accuracy_sd);
    write_text_file(flags.out_dir + "/" + fit_file_name(e.variant, e.var_s),
                    fit_document_to_json(doc));
  }
  write_text_file(flags.out_dir + "/ablation.csv", csv.str());
  write_manifest(flags.out_dir, "ablate", flags.option_map(),
                 flags.input_files());
  return 0;
}

int cmd_robustness(const FitFlags& flags) {
  if (!fs::exists(flags.data_dir + "/media.csv"))
    throw std::invalid_argument(
        "robustness: requires media.csv in the data directory (the two "
        "regimes differ only through media windows)");
  FitFlags on = flags;
  on.gap = "on";
  FitFlags off = flags;
  off.gap = "off";
  const LoadedData data_on = on.load();
  const LoadedData data_off = off.load();
  ensure_out_dir(flags.out_dir);
  const Hyperparameters hyper;

  const RobustnessResult result =
      run_robustness(data_on.data, data_off.data, hyper, flags.config);

  json j;
  j["correlation"] = result.correlation;
  j["pairs"] = json::array();
  for (const RobustnessPair& p : result.pairs)
    j["pairs"].push_back({{"name", p.name},
                          {"mean_gap_on", p.mean_gap_on},
                          {"mean_gap_off", p.mean_gap_off}});
  write_text_file(flags.out_dir + "/robustness.json", j.dump(2) + "\n");

  std::ostringstream csv;
  csv << "name,mean_gap_on,mean_gap_off\n";
  for (const RobustnessPair& p : result.pairs)
    csv << p.name << ',' << format_double(p.mean_gap_on) << ','
        << format_double(p.mean_gap_off) << '\n';
  write_text_file(flags.out_dir + "/robustness.csv", csv.str());

  const auto [mean_on, sd_on] = accuracy_mean_sd(
      result.fit_gap_on, data_on.data, hyper, flags.config, ModelStructure{});
  write_text_file(
      flags.out_dir + "/fit_gap_on.json",
      fit_document_to_json(make_fit_document(result.fit_gap_on, data_on.data,
                                             "full", mean_on, sd_on)));
  const auto [mean_off, sd_off] =
      accuracy_mean_sd(result.fit_gap_off, data_off.data, hyper, flags.config,
                       ModelStructure{});
  write_text_file(
      flags.out_dir + "/fit_gap_off.json",
      fit_document_to_json(make_fit_document(result.fit_gap_off, data_off.data,
                                             "full", mean_off, sd_off)));
  write_manifest(flags.out_dir, "robustness", flags.option_map(),
                 flags.input_files());
  return 0;
}

int cmd_report(const std::string& in_dir, const std::string& out_dir) {
  write_report(in_dir, out_dir);
  std::vector<std::string> inputs;
  for (const auto& entry : fs::directory_iterator(in_dir)) {
    const std::string name = entry.path().filename().string();
    if ((name.rfind("fit_", 0) == 0 && entry.path().extension() == ".json") ||
        name == "ablation.csv")
      inputs.push_back(entry.path().string());
  }
  std::sort(inputs.begin(), inputs.end());
  write_manifest(out_dir, "report", {{"in", in_dir}, {"out", out_dir}},
                 inputs);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Causal Bayesian-network engine for activation on social "
               "platforms: simulation, SVI fitting and experiment "
               "protocols"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "",
                 "Config file with key=value lines under a [subcommand] "
                 "section; command-line flags win");

  // simulate
  std::string sim_params, sim_catalog, sim_out, sim_media = "normal";
  std::size_t sim_n = 1000;
  std::uint64_t sim_seed = 0;
  double sim_var_s = 1.0;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Sample a synthetic dataset");
  simulate->add_option("--params", sim_params, "Model parameter JSON file")
      ->required();
  simulate->add_option("--catalog", sim_catalog, "Subreddit catalog CSV")
      ->required();
  simulate->add_option("--n-users", sim_n, "Number of users")->required();
  simulate->add_option("--seed", sim_seed, "Seed");
  simulate->add_option("--out", sim_out, "Output directory")->required();
  simulate->add_option("--media-gen", sim_media,
                       "Media feature generator: normal[:MEAN,SD] or "
                       "constant:V[,V2,V3]");
  simulate->add_option("--var-s", sim_var_s, "Sympathy prior variance");

  // fit / ablate / robustness
  FitFlags fit_flags, ablate_flags, robust_flags;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit the model by SVI");
  fit_flags.add_common(fit_cmd, true);

  CLI::App* ablate_cmd = app.add_subcommand(
      "ablate", "Refit with variable groups structurally removed");
  ablate_flags.add_common(ablate_cmd, true);
  ablate_cmd->add_option("--groups", ablate_flags.groups,
                         "Comma-separated groups from E,I,M,D");

  CLI::App* robust_cmd = app.add_subcommand(
      "robustness", "Compare gap-on vs gap-off window regimes");
  robust_flags.add_common(robust_cmd, false);

  // report
  std::string rep_in, rep_out;
  CLI::App* report_cmd =
      app.add_subcommand("report", "Render tables and figures from fits");
  report_cmd->add_option("--in", rep_in, "Directory with fit_*.json")
      ->required();
  report_cmd->add_option("--out", rep_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (simulate->parsed())
      return cmd_simulate(sim_params, sim_catalog, sim_n, sim_seed, sim_out,
                          sim_media, sim_var_s);
    if (fit_cmd->parsed()) return cmd_fit(fit_flags);
    if (ablate_cmd->parsed()) return cmd_ablate(ablate_flags);
    if (robust_cmd->parsed()) return cmd_robustness(robust_flags);
    if (report_cmd->parsed()) return cmd_report(rep_in, rep_out);
  } catch (const InferenceError& e) {
    std::cerr << "inference error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("climact");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace climact
