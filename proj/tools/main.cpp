// graphgauge: run one experiment kind and write its report.
//
// Exit status: 0 all checks passed, 1 a threshold in the spec was violated
// (a failure record goes to stderr), 2 bad spec or usage, 3 output not
// writable, 4 any other runtime error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "graphgauge/error.hpp"
#include "graphgauge/experiment.hpp"
#include "graphgauge/report.hpp"

namespace gg = graphgauge;

namespace {

enum Exit { kOk = 0, kThreshold = 1, kSpec = 2, kOutput = 3, kRuntime = 4 };

struct Overrides {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  std::string format;
  int threads = 0;
  bool deterministic = false;
  std::vector<std::string> params;
};

std::string read_file(const std::string& path, const char* field) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw gg::ConfigError(field, "cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double parse_value(const std::string& key, const std::string& text) {
  if (text == "true") return 1.0;
  if (text == "false") return 0.0;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw gg::ConfigError(key, "parameter '" + key + "' has a non-numeric value '" + text + "'");
}

gg::ExperimentSpec build_spec(gg::ExperimentKind kind, const Overrides& o, const CLI::App& sub) {
  gg::ExperimentSpec spec;
  if (!o.config.empty()) {
    spec = gg::spec_from_json(read_file(o.config, "config"));
    if (spec.kind != kind) {
      throw gg::ConfigError("kind", "config is for '" + std::string(gg::kind_name(spec.kind)) +
                                        "', not '" + std::string(gg::kind_name(kind)) + "'");
    }
  }
  spec.kind = kind;
  if (sub.count("--seed")) spec.seed = o.seed;
  if (sub.count("--out")) spec.output_path = o.out;
  if (sub.count("--format")) spec.format = gg::parse_format(o.format);
  if (sub.count("--threads")) spec.threads = o.threads;
  if (o.deterministic) spec.deterministic = true;
  for (const std::string& kv : o.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw gg::ConfigError("param", "expected key=value, got '" + kv + "'");
    }
    const std::string key = kv.substr(0, eq);
    spec.parameters[key] = parse_value(key, kv.substr(eq + 1));
  }
  return spec;
}

// Fail before a long run rather than after it.
void probe_output(const std::string& path) {
  if (path.empty()) return;
  std::ofstream probe(path, std::ios::app);
  if (!probe) throw gg::OutputError("cannot open '" + path + "' for writing");
}

int run(gg::ExperimentKind kind, const Overrides& o, const CLI::App& sub) {
  const gg::ExperimentSpec spec = gg::resolve(build_spec(kind, o, sub));
  probe_output(spec.output_path);
  const gg::ExperimentReport rep = gg::run_experiment(spec);
  gg::write_report(rep);
  if (!rep.passed()) {
    std::cerr << gg::failure_json(rep) << '\n';
    return kThreshold;
  }
  return kOk;
}

int list_parameters() {
  for (gg::ExperimentKind k : gg::all_kinds()) {
    std::cout << gg::kind_name(k) << (gg::kind_needs_seed(k) ? "  (needs --seed)" : "") << '\n';
    for (const gg::ParameterInfo& p : gg::parameter_table(k)) {
      std::cout << "  " << p.name << " = ";
      if (p.default_value) {
        std::cout << *p.default_value;
      } else {
        std::cout << "<required>";
      }
      std::cout << "    " << p.help << '\n';
    }
  }
  return kOk;
}

// Decodes a report (which re-derives its summary) and optionally re-runs
// its spec, comparing summaries.
int verify(const std::string& path, bool rerun) {
  const gg::ExperimentReport stored = gg::decode_report(read_file(path, "report"));
  std::cout << "summary consistent with records: " << path << '\n';
  if (!rerun) return stored.passed() ? kOk : kThreshold;
  gg::ExperimentSpec spec = stored.spec;
  spec.output_path.clear();
  const gg::ExperimentReport again = gg::run_experiment(spec);
  bool same = again.summary.values.size() == stored.summary.values.size();
  for (std::size_t i = 0; same && i < again.summary.values.size(); ++i) {
    same = again.summary.values[i] == stored.summary.values[i];
  }
  for (std::size_t i = 0; i < again.summary.values.size(); ++i) {
    const auto& [name, v] = again.summary.values[i];
    const double old = i < stored.summary.values.size() ? stored.summary.values[i].second : 0.0;
    std::cout << "  " << name << " stored " << old << " rerun " << v << '\n';
  }
  std::cout << (same ? "rerun reproduces the summary exactly\n"
                     : "rerun summary differs (expected only for thread-count dependent "
                       "reductions)\n");
  return same ? kOk : kThreshold;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph-based lattice gauge experiments"};
  app.require_subcommand(1);

  Overrides o;
  std::vector<std::pair<gg::ExperimentKind, CLI::App*>> kinds;
  for (gg::ExperimentKind k : gg::all_kinds()) {
    CLI::App* sub = app.add_subcommand(std::string(gg::kind_name(k)), "run " +
                                                                          std::string(gg::kind_name(k)));
    sub->add_option("--config", o.config, "JSON spec file");
    sub->add_option("--seed", o.seed, "RNG seed (required by randomized kinds)");
    sub->add_option("--out", o.out, "report path (default: stdout)");
    sub->add_option("--format", o.format, "csv or json");
    sub->add_option("--threads", o.threads, "worker threads");
    sub->add_flag("--deterministic", o.deterministic, "thread-count independent reductions");
    sub->add_option("-p,--param", o.params, "key=value parameter override")->take_all();
    kinds.emplace_back(k, sub);
  }
  CLI::App* list = app.add_subcommand("params", "list parameters and defaults per kind");
  std::string report_path;
  bool rerun = false;
  CLI::App* check = app.add_subcommand("verify", "check a report, optionally re-running it");
  check->add_option("report", report_path, "report file")->required();
  check->add_flag("--rerun", rerun, "re-run the embedded spec and compare summaries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kSpec;
  }

  try {
    if (list->parsed()) return list_parameters();
    if (check->parsed()) return verify(report_path, rerun);
    for (const auto& [k, sub] : kinds) {
      if (sub->parsed()) return run(k, o, *sub);
    }
  } catch (const gg::ConfigError& e) {
    std::cerr << "graphgauge: spec error [" << e.field() << "]: " << e.what() << '\n';
    return kSpec;
  } catch (const gg::OutputError& e) {
    std::cerr << "graphgauge: output error: " << e.what() << '\n';
    return kOutput;
  } catch (const std::exception& e) {
    std::cerr << "graphgauge: error: " << e.what() << '\n';
    return kRuntime;
  }
  return kSpec;
}
