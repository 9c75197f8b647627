#include "graphgauge/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "graphgauge/error.hpp"

namespace graphgauge {

namespace {

using json = nlohmann::json;

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw Error("report: bad number '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

void cross_check(ExperimentReport& rep) {
  const Summary derived = summarize(rep.spec, rep.columns, rep.records);
  auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
  bool ok = derived.values.size() == rep.summary.values.size() &&
            derived.failures.size() == rep.summary.failures.size();
  for (std::size_t i = 0; ok && i < derived.values.size(); ++i) {
    ok = derived.values[i].first == rep.summary.values[i].first &&
         same(derived.values[i].second, rep.summary.values[i].second);
  }
  for (std::size_t i = 0; ok && i < derived.failures.size(); ++i) {
    const FailureRecord& a = derived.failures[i];
    const FailureRecord& b = rep.summary.failures[i];
    ok = a.check == b.check && a.relation == b.relation && same(a.observed, b.observed) &&
         same(a.threshold, b.threshold);
  }
  if (!ok) throw Error("report: stored summary does not match its records");
}

json failure_array(const Summary& s) {
  json arr = json::array();
  for (const FailureRecord& f : s.failures) {
    arr.push_back({{"check", f.check},
                   {"relation", f.relation},
                   {"threshold", f.threshold},
                   {"observed", f.observed}});
  }
  return arr;
}

}  // namespace

std::string encode_csv(const ExperimentReport& rep) {
  std::ostringstream out;
  out << "# spec " << spec_to_json(rep.spec) << '\n';
  for (const auto& [name, v] : rep.summary.values) {
    out << "# summary " << name << ' ' << number(v) << '\n';
  }
  for (const FailureRecord& f : rep.summary.failures) {
    // The relation can contain spaces, so it comes last.
    out << "# failure " << f.check << ' ' << number(f.threshold) << ' ' << number(f.observed)
        << ' ' << f.relation << '\n';
  }
  out << "# wall_seconds " << number(rep.wall_seconds) << '\n';
  for (std::size_t i = 0; i < rep.columns.size(); ++i) out << (i ? "," : "") << rep.columns[i];
  out << '\n';
  for (const auto& r : rep.records) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << number(r[i]);
    out << '\n';
  }
  return out.str();
}

std::string encode_json(const ExperimentReport& rep) {
  json j;
  j["spec"] = json::parse(spec_to_json(rep.spec));
  j["columns"] = rep.columns;
  json records = json::array();
  for (const auto& r : rep.records) {
    json row = json::object();
    for (std::size_t i = 0; i < r.size(); ++i) row[rep.columns[i]] = r[i];
    records.push_back(std::move(row));
  }
  j["records"] = std::move(records);
  // Summary order matters for the cross-check, so it is kept as an ordered
  // list of pairs alongside the keyed object.
  json summary = json::object();
  json order = json::array();
  for (const auto& [name, v] : rep.summary.values) {
    summary[name] = v;
    order.push_back(name);
  }
  j["summary"] = std::move(summary);
  j["summary_order"] = std::move(order);
  j["failures"] = failure_array(rep.summary);
  j["passed"] = rep.passed();
  j["wall_seconds"] = rep.wall_seconds;
  return j.dump(2) + "\n";
}

std::string encode(const ExperimentReport& rep, OutputFormat format) {
  return format == OutputFormat::Csv ? encode_csv(rep) : encode_json(rep);
}

ExperimentReport decode_csv(std::string_view text) {
  ExperimentReport rep;
  bool have_spec = false, have_header = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::string_view rest = line.substr(1);
      while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
      const std::size_t sp = rest.find(' ');
      const std::string_view key = rest.substr(0, sp);
      const std::string_view body = sp == std::string_view::npos ? "" : rest.substr(sp + 1);
      if (key == "spec") {
        rep.spec = spec_from_json(body);
        have_spec = true;
      } else if (key == "summary") {
        const auto parts = split(body, ' ');
        if (parts.size() != 2) throw Error("report: malformed summary line");
        rep.summary.values.emplace_back(std::string(parts[0]), parse_double(parts[1]));
      } else if (key == "failure") {
        const auto parts = split(body, ' ');
        if (parts.size() < 4) throw Error("report: malformed failure line");
        FailureRecord f;
        f.check = std::string(parts[0]);
        f.threshold = parse_double(parts[1]);
        f.observed = parse_double(parts[2]);
        const std::size_t off = parts[3].data() - body.data();
        f.relation = std::string(body.substr(off));
        rep.summary.failures.push_back(std::move(f));
      } else if (key == "wall_seconds") {
        rep.wall_seconds = parse_double(body);
      }
      continue;
    }
    const auto cells = split(line, ',');
    if (!have_header) {
      for (auto c : cells) rep.columns.emplace_back(c);
      have_header = true;
      continue;
    }
    if (cells.size() != rep.columns.size()) throw Error("report: record has the wrong width");
    std::vector<double> row;
    for (auto c : cells) row.push_back(parse_double(c));
    rep.records.push_back(std::move(row));
  }
  if (!have_spec) throw Error("report: missing '# spec' line");
  if (!have_header) throw Error("report: missing column header");
  cross_check(rep);
  return rep;
}

ExperimentReport decode_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("report: not valid JSON: ") + e.what());
  }
  auto get_double = [](const json& v) {
    return v.is_null() ? std::nan("") : v.get<double>();
  };
  ExperimentReport rep;
  try {
    rep.spec = spec_from_json(j.at("spec").dump());
    rep.columns = j.at("columns").get<std::vector<std::string>>();
    for (const json& row : j.at("records")) {
      std::vector<double> r;
      for (const std::string& c : rep.columns) r.push_back(get_double(row.at(c)));
      rep.records.push_back(std::move(r));
    }
    const json& summary = j.at("summary");
    for (const json& name : j.at("summary_order")) {
      const std::string n = name.get<std::string>();
      rep.summary.values.emplace_back(n, get_double(summary.at(n)));
    }
    for (const json& f : j.at("failures")) {
      rep.summary.failures.push_back({f.at("check").get<std::string>(),
                                      get_double(f.at("observed")),
                                      get_double(f.at("threshold")),
                                      f.at("relation").get<std::string>()});
    }
    rep.wall_seconds = get_double(j.at("wall_seconds"));
  } catch (const json::exception& e) {
    throw Error(std::string("report: malformed JSON report: ") + e.what());
  }
  cross_check(rep);
  return rep;
}

ExperimentReport decode_report(std::string_view text) {
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return decode_json(text);
  return decode_csv(text);
}

void write_report(const ExperimentReport& rep) {
  const std::string body = encode(rep, rep.spec.format);
  if (rep.spec.output_path.empty()) {
    std::cout << body;
    std::cout.flush();
    return;
  }
  std::ofstream out(rep.spec.output_path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot open '" + rep.spec.output_path + "' for writing");
  out << body;
  out.close();
  if (!out) throw OutputError("failed writing '" + rep.spec.output_path + "'");
}

std::string failure_json(const ExperimentReport& rep) {
  json j;
  j["kind"] = kind_name(rep.spec.kind);
  j["failures"] = failure_array(rep.summary);
  return j.dump();
}

}  // namespace graphgauge
