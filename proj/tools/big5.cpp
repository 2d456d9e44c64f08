// big5: run persona experiments from JSON configs.
//
//   big5 sweep --config configs/sweep_scripted.json
//   big5 plot results/sweep/.../sweep_simple_toy.json --out series.csv
//
// Exit status: 0 ok, 1 a task failed, 2 bad configuration or input.

#include <iostream>

#include <CLI11.hpp>

#include "big5/big5.hpp"

namespace {

int run(const std::string& config, big5::ExperimentKind kind, const std::string& out, bool dry_run, int verbosity) {
  try {
    const auto cfg = big5::load_experiment_config(config, kind);
    if (dry_run) {
      std::cout << "config ok: " << big5::experiment_name(cfg.kind) << ", seed " << cfg.seed << ", "
                << cfg.backends.size() << " backend(s)\n";
      return 0;
    }
    std::optional<std::filesystem::path> override_dir;
    if (!out.empty()) override_dir = out;
    const auto manifest = big5::run_experiment(cfg, override_dir);
    std::cout << manifest.run_dir.string() << '\n';
    for (const auto& t : manifest.tasks)
      if (!t.ok || verbosity > 0)
        std::cerr << (t.ok ? "ok     " : "FAILED ") << t.name << (t.ok ? "" : ": " + t.error) << '\n';
    if (verbosity > 0)
      for (const auto& [backend, n] : manifest.request_counts) std::cerr << backend << ": " << n << " requests\n";
    return manifest.ok() ? 0 : 1;
  } catch (const big5::ConfigValidationError& e) {
    std::cerr << "invalid configuration " << config << ":\n";
    for (const auto& v : e.violations) std::cerr << "  - " << v << '\n';
    return 2;
  } catch (const big5::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const big5::LoadError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const big5::InputError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Big Five persona experiments"};
  app.require_subcommand(1);
  std::string out;
  bool dry_run = false;
  int verbosity = 0;
  app.add_option("--out", out, "Output root (overrides output_dir)");
  app.add_flag("--dry-run", dry_run, "Validate the configuration and stop");
  app.add_flag("-v,--verbose", verbosity, "Report every task");

  const std::map<std::string, std::string> blurbs = {
      {"induce", "Administer a questionnaire under each prompt kind"},
      {"sweep", "Vary one trait at a time and correlate level with measured score"},
      {"dialogue", "Generate two-agent dialogues"},
      {"consistency", "Score per-agent consistency over transcripts"},
      {"judge", "Ask a judge model to pick the higher-scoring agent"},
      {"imitate", "Prompt with human trait scores and measure RMSE"},
      {"grid", "Scale x prompt kind x questionnaire fidelity grid"},
      {"score", "Administer a questionnaire to explicit profiles"},
  };
  std::map<std::string, std::string> configs;
  for (auto name : big5::kExperimentNames) {
    auto* sub = app.add_subcommand(std::string(name), blurbs.at(std::string(name)));
    sub->add_option("-c,--config", configs[std::string(name)], "Experiment config (JSON)")->required();
  }

  std::string report, plot_out;
  auto* plot = app.add_subcommand("plot", "Write trait/level/score series from a sweep report");
  plot->add_option("report", report, "Sweep report JSON")->required()->check(CLI::ExistingFile);
  plot->add_option("-o,--out", plot_out, "Output CSV (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  if (plot->parsed()) {
    try {
      if (plot_out.empty()) {
        std::ifstream in(report);
        big5::emit_plot_series(nlohmann::json::parse(in), std::cout);
      } else {
        big5::emit_plot_series(report, plot_out);
      }
      return 0;
    } catch (const std::exception& e) {
      std::cerr << e.what() << '\n';
      return 2;
    }
  }
  for (auto name : big5::kExperimentNames) {
    if (app.get_subcommand(std::string(name))->parsed())
      return run(configs[std::string(name)], *big5::find_experiment(name), out, dry_run, verbosity);
  }
  return 2;
}
