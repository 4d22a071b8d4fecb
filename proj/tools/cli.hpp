#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nhsense/optimize.hpp"

namespace nhsense::cli {

enum class Format { Csv, Json };

struct RunConfig {
  ScenarioSpec scenario;
  std::string out;  // empty means standard output
  Format format = Format::Json;
  bool format_set = false;
};

// Throws DomainError on unknown fields, wrong types or inconsistent chain input.
void apply_config_json(const std::string& text, RunConfig& cfg);

// "name=v1,v2,..." or "name=log:lo:hi:count"; m accepts the token N.
SweepAxis parse_axis(const std::string& text);

struct ScalingCase {
  std::string name;
  ScenarioSpec base;
  double exponent_over_2a;  // caption exponent in units of 2A
};

std::vector<std::string> preset_names();
// Figure presets; throws DomainError for unknown names.
SweepGrid preset_grid(const std::string& name);
ScalingCase scaling_case(const std::string& name);

std::string format_number(double v);
std::string csv_header();
std::string csv_row(const SweepRow& row);
std::string csv_table(const std::vector<SweepRow>& rows);
std::string json_report(const SensingReport& r);
std::string json_table(const std::vector<SweepRow>& rows);

// Entry point shared by the executable and the tests. Returns the exit code:
// 0 ok, 2 validation, 3 numerical, 4 I/O.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nhsense::cli
