// Command-line front end: run, sweep, compare-oracle, coeffs.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "entlaser/app.hpp"
#include "entlaser/errors.hpp"

namespace {

enum Exit : int {
  kOk = 0,
  kFailed = 1,
  kValidation = 2,
  kSolver = 3,
  kLeakage = 4,
};

struct Source {
  std::string config;
  std::string preset;
  std::string preset_dir;
  std::vector<std::string> overrides;

  void add_to(CLI::App* cmd) {
    cmd->add_option("config", config, "Config file");
    cmd->add_option("--preset", preset, "Named preset (fig2, fig3-I, fig3-II, fig4-I, fig4-II)");
    cmd->add_option("--preset-dir", preset_dir, "Directory holding preset files");
    cmd->add_option("--set", overrides, "Override a value: section.key=value")->take_all();
  }

  entlaser::RunConfig load() const {
    using namespace entlaser;
    if (config.empty() == preset.empty()) {
      throw InvalidParameter("config", "give exactly one of a config file or --preset");
    }
    ConfigSections sections;
    if (!preset.empty()) {
      sections = preset_dir.empty() ? load_preset_sections(preset)
                                    : load_preset_sections(preset, preset_dir);
    } else {
      std::ifstream in(config);
      if (!in) throw InvalidParameter("config", "cannot read " + config);
      std::stringstream buf;
      buf << in.rdbuf();
      sections = parse_config_text(buf.str());
    }
    for (const auto& o : overrides) apply_override(sections, o);
    return config_from_sections(sections);
  }
};

// Opens `path` for writing, or returns std::cout for "-".
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw entlaser::InvalidParameter("output.path", "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  bool is_stdout() const { return !file_.is_open(); }

 private:
  std::ofstream file_;
};

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(entlaser::parse_number(item, "values"));
  if (out.empty()) throw entlaser::InvalidParameter("values", "must list at least one value");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-mode single-atom laser: field moments, entanglement and Fock-space checks"};
  app.require_subcommand(1);

  Source run_src, sweep_src, oracle_src, coeffs_src;
  std::string run_output, run_format, run_method;
  std::string sweep_axis, sweep_values, sweep_output;
  unsigned sweep_threads = 0;
  std::string oracle_kind = "field", oracle_output;
  int oracle_nmax = 24;
  double oracle_threshold = 1e-3;
  std::size_t oracle_samples = 0;

  CLI::App* run = app.add_subcommand("run", "Simulate a trajectory and report entanglement");
  run_src.add_to(run);
  run->add_option("-o,--output", run_output, "Output path ('-' for stdout)");
  run->add_option("--format", run_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--method", run_method, "spectral, numeric or parametric")
      ->check(CLI::IsMember({"spectral", "numeric", "parametric"}));

  CLI::App* sweep = app.add_subcommand("sweep", "Entanglement report per parameter value");
  sweep_src.add_to(sweep);
  sweep->add_option("--param", sweep_axis, "Parameter field, or kappa / gamma")->required();
  sweep->add_option("--values", sweep_values, "Comma-separated values")->required();
  sweep->add_option("--threads", sweep_threads, "Worker threads (0: all cores)");
  sweep->add_option("-o,--output", sweep_output, "Output path ('-' for stdout)");

  CLI::App* oracle = app.add_subcommand("compare-oracle", "Check moments against a Fock oracle");
  oracle_src.add_to(oracle);
  oracle->add_option("--oracle", oracle_kind, "field or micro")
      ->check(CLI::IsMember({"field", "micro"}));
  oracle->add_option("--n-max", oracle_nmax, "Photon truncation per mode");
  oracle->add_option("--threshold", oracle_threshold, "Maximum accepted deviation");
  oracle->add_option("--samples", oracle_samples, "Comparison grid size (default: sim.samples)");
  oracle->add_option("-o,--output", oracle_output, "CSV of leakage and trace series");

  CLI::App* coeffs = app.add_subcommand("coeffs", "Print the coefficient set as JSON");
  coeffs_src.add_to(coeffs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  using namespace entlaser;
  try {
    if (*run) {
      RunConfig cfg = run_src.load();
      if (!run_output.empty()) cfg.output.path = run_output;
      if (!run_format.empty()) {
        cfg.output.format = run_format == "json" ? OutputFormat::Json : OutputFormat::Csv;
      }
      if (!run_method.empty()) cfg.sim.method = sim_method_from_string(run_method);
      const RunOutcome out = execute_run(cfg);
      Sink sink(cfg.output.path);
      if (cfg.output.format == OutputFormat::Json) {
        write_json(sink.stream(), cfg, out);
      } else {
        write_csv(sink.stream(), cfg, out);
      }
      (sink.is_stdout() ? std::cerr : std::cout) << report_summary(out);
      return kOk;
    }
    if (*sweep) {
      const RunConfig cfg = sweep_src.load();
      const std::vector<double> values = parse_values(sweep_values);
      const auto rows = run_sweep(cfg, sweep_axis, values, sweep_threads);
      Sink sink(sweep_output.empty() ? "-" : sweep_output);
      write_sweep_csv(sink.stream(), sweep_axis, rows);
      for (const auto& row : rows) {
        if (!row.error.empty()) std::cerr << "row " << row.value << ": " << row.error << '\n';
      }
      return kOk;
    }
    if (*oracle) {
      const RunConfig cfg = oracle_src.load();
      OracleOptions opts;
      opts.kind = oracle_kind_from_string(oracle_kind);
      opts.n_max = oracle_nmax;
      opts.threshold = oracle_threshold;
      opts.samples = oracle_samples ? oracle_samples : cfg.sim.samples;
      const OracleComparison cmp = compare_oracle(cfg, opts);
      if (!oracle_output.empty()) {
        Sink sink(oracle_output);
        write_oracle_csv(sink.stream(), cmp);
      }
      std::cout << oracle_summary(cmp);
      if (cmp.leakage_exceeded) {
        std::cerr << "error: truncation leakage exceeded; last valid time " << cmp.last_valid_time
                  << '\n';
        return kLeakage;
      }
      return cmp.passed() ? kOk : kFailed;
    }
    if (*coeffs) {
      std::cout << coefficients_json(coeffs_src.load()) << '\n';
      return kOk;
    }
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const RegimeMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const TruncationTooSmall& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const LeakageExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kLeakage;
  } catch (const Error& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolver;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolver;
  }
  return kOk;
}
