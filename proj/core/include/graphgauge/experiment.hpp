#pragma once

// Batch experiments: a kind, numeric parameters with per-kind defaults, and a
// seed. run_experiment dispatches to the library and returns a report whose
// summary is a pure function of its records (see summarize).

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace graphgauge {

enum class ExperimentKind {
  CovarianceSweep,
  OnedDemo,
  EmbeddedViolation,
  ContinuumCheck,
  McRun,
  FlatnessCheck,
};

std::string_view kind_name(ExperimentKind kind);
// Throws ConfigError("kind") for an unknown name.
ExperimentKind parse_kind(std::string_view name);
std::span<const ExperimentKind> all_kinds();

enum class OutputFormat { Csv, Json };

std::string_view format_name(OutputFormat f);
// Throws ConfigError("format").
OutputFormat parse_format(std::string_view name);

struct ParameterInfo {
  std::string_view name;
  std::optional<double> default_value;  // empty: required
  std::string_view help;
};

std::span<const ParameterInfo> parameter_table(ExperimentKind kind);

// Randomized kinds refuse to run without an explicit seed.
bool kind_needs_seed(ExperimentKind kind);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::CovarianceSweep;
  std::map<std::string, double> parameters;
  std::optional<std::uint64_t> seed;
  std::string output_path;  // empty: standard output
  OutputFormat format = OutputFormat::Csv;
  int threads = 1;
  bool deterministic = false;
};

// Fills defaults. Throws ConfigError naming the field for an unknown or
// missing parameter, a missing seed, or a bad thread count.
ExperimentSpec resolve(const ExperimentSpec& spec);

// {"kind": ..., "seed": ..., "parameters": {...}, "threads": ...,
//  "deterministic": ..., "format": ..., "out": ...}; only "kind" is needed.
// Throws ConfigError on malformed text.
ExperimentSpec spec_from_json(std::string_view text);
std::string spec_to_json(const ExperimentSpec& spec);

struct FailureRecord {
  std::string check;
  double observed = 0.0;
  double threshold = 0.0;
  std::string relation;  // the relation that should have held, e.g. "<=" or ">="

  bool operator==(const FailureRecord&) const = default;
};

struct Summary {
  std::vector<std::pair<std::string, double>> values;
  std::vector<FailureRecord> failures;
};

// Summary statistics and threshold checks from records alone. `spec` must be
// resolved. Throws Error if the columns do not match the kind.
Summary summarize(const ExperimentSpec& spec, std::span<const std::string> columns,
                  std::span<const std::vector<double>> records);

std::vector<std::string> record_columns(ExperimentKind kind);

struct ExperimentReport;

// Resolves the spec and runs it; does not write anything.
ExperimentReport run_experiment(const ExperimentSpec& spec);

}  // namespace graphgauge
