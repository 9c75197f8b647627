#pragma once

// Experiment reports and their CSV / JSON encodings.
//
// CSV layout:
//   # spec <the resolved spec as one line of JSON>
//   # summary <name> <value>          (one line per summary value)
//   # failure <check> <threshold> <observed> <relation>
//   # wall_seconds <value>
//   <column>,<column>,...
//   one row per record
// JSON layout: {"spec": {...}, "columns": [...], "records": [{column: value}],
//   "summary": {...}, "failures": [...], "wall_seconds": ...}
// Numbers are written so that they read back to the same double.

#include <string>
#include <string_view>
#include <vector>

#include "graphgauge/experiment.hpp"

namespace graphgauge {

struct ExperimentReport {
  ExperimentSpec spec;  // resolved, every default filled in
  std::vector<std::string> columns;
  std::vector<std::vector<double>> records;
  Summary summary;
  double wall_seconds = 0.0;

  bool passed() const { return summary.failures.empty(); }
};

std::string encode_csv(const ExperimentReport& report);
std::string encode_json(const ExperimentReport& report);
std::string encode(const ExperimentReport& report, OutputFormat format);

// Decoding re-derives the summary from the records and throws Error when it
// disagrees with the stored one.
ExperimentReport decode_csv(std::string_view text);
ExperimentReport decode_json(std::string_view text);
// Picks the decoder by the first non-blank character.
ExperimentReport decode_report(std::string_view text);

// Writes to report.spec.output_path in report.spec.format (standard output
// when the path is empty). Throws OutputError if the file cannot be written.
void write_report(const ExperimentReport& report);

// "{"failures": [...]}" on one line, for machine consumption.
std::string failure_json(const ExperimentReport& report);

}  // namespace graphgauge
