// wug: command-line driver for training, evaluation and the analysis reports.
#include <CLI11.hpp>

#include <iostream>

#include "wug/errors.hpp"
#include "wug/harness/experiment.hpp"
#include "wug/report.hpp"

namespace {

constexpr int kValidation = 1;
constexpr int kRuntime = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace wug;
  CLI::App app{"Neural wug-test experiments: train inflection models, score nonce verbs, compare with humans"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_path, seeds, freq_mode, out;
  std::size_t epochs = 0, samples = 0, workers = 0;
  app.add_option("--config", config_path, "key = value experiment file (default: synthetic data)");
  app.add_option("--seeds", seeds, "comma-separated seed list, overrides the config");
  app.add_option("--epochs", epochs, "training epochs, overrides the config");
  app.add_option("--samples", samples, "samples per item and seed for 'aggregate'");
  app.add_option("--freq-mode", freq_mode, "type | token | log-token")->check(CLI::IsMember({"type", "token", "log-token"}));
  app.add_option("--out", out, "output directory");
  app.add_option("--workers", workers, "seeds trained or evaluated in parallel");

  auto* train = app.add_subcommand("train", "train one model per seed, saving checkpoints and accuracy logs");
  auto* evaluate = app.add_subcommand("evaluate", "correlations, CR@5, accuracy and second-place reports");
  auto* aggregate = app.add_subcommand("aggregate", "sample productions from every seed and compare with humans");
  auto* sweep = app.add_subcommand("epoch-sweep", "correlation and top-probability curves over saved epochs");
  auto* rules = app.add_subcommand("rules", "rule-learner baseline scored like the neural model");
  auto* probe = app.add_subcommand("probe", "encoder and decoder vector exports, PCA and the reversed-input control");
  auto* synth = app.add_subcommand("synth", "write the synthetic corpus and nonce files");
  auto* show = app.add_subcommand("show-config", "print the effective configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidation;
  }

  try {
    harness::ExperimentConfig config =
        config_path.empty() ? harness::ExperimentConfig{} : harness::ExperimentConfig::load(config_path);
    if (!seeds.empty()) config.seeds = harness::parse_seed_list(seeds);
    if (epochs) config.hp.epochs = epochs;
    if (samples) config.samples = samples;
    if (workers) config.workers = workers;
    if (!freq_mode.empty()) config.frequency_mode = *data::parse_frequency_mode(freq_mode);
    if (!out.empty()) config.out = out;
    config.validate();

    if (*show) {
      std::cout << config.to_text() << "# hash " << config.hash() << '\n';
    } else if (*train) {
      const auto r = harness::cmd_train(config);
      for (std::size_t k = 0; k < r.seeds.size(); ++k) {
        const auto& last = r.logs[k].back();
        std::cout << "seed " << r.seeds[k] << ": epoch " << last.epoch << " accuracy "
                  << (last.accuracy ? last.accuracy->overall : 0.0) << "%\n";
      }
    } else if (*evaluate) {
      const auto r = harness::cmd_evaluate(config);
      for (const auto& s : r.seeds) {
        std::cout << "seed " << s.seed << ": accuracy " << s.accuracy.overall << "% CR@5 " << s.cr5.value
                  << " rho(reg) " << report::fmt(s.correlations.front().regular) << " rho(irr) "
                  << report::fmt(s.correlations.front().irregular) << '\n';
      }
    } else if (*aggregate) {
      const auto r = harness::cmd_aggregate(config);
      std::cout << "rho(reg) " << report::fmt(r.comparison.regular_rho) << " rho(irr) "
                << report::fmt(r.comparison.irregular_rho) << " preference disagreements "
                << r.comparison.disagreements() << '\n';
    } else if (*sweep) {
      for (const auto& row : harness::cmd_epoch_sweep(config)) {
        std::cout << "seed " << row.seed << " epoch " << row.epoch << " rho(reg) " << report::fmt(row.rho_regular)
                  << " top p " << row.mean_top_probability << '\n';
      }
    } else if (*rules) {
      const auto r = harness::cmd_rules(config);
      std::cout << r.grammar.rules.size() << " rules; rho(reg) " << report::fmt(r.correlations.front().regular)
                << " rho(irr) " << report::fmt(r.correlations.front().irregular) << '\n';
    } else if (*probe) {
      const auto r = harness::cmd_probe(config);
      for (const auto& n : r.neighbours)
        std::cout << n.model << ' ' << n.key << " knn agreement " << n.agreement << " (chance " << n.chance << ")\n";
      std::cout << "phoneme class nearest-centroid accuracy " << r.phoneme_separability << '\n';
    } else if (*synth) {
      for (const auto& f : harness::cmd_synth(config)) std::cout << f.string() << '\n';
    }
    if (!*show && !*synth) std::cout << "reports under " << config.out.string() << '\n';
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const IngestionError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
}
