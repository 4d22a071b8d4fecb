#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "nhsense/errors.hpp"

namespace nhsense::cli {
namespace {

using nlohmann::json;

constexpr double kHalfPi = std::numbers::pi / 2;

class IoError : public Error {
 public:
  using Error::Error;
};

ScenarioSpec defaults() { return ScenarioSpec{}; }

PerturbationKind parse_kind(const std::string& s) {
  if (s == "nhse") return PerturbationKind::Nhse;
  if (s == "localn") return PerturbationKind::LocalN;
  throw DomainError("pert must be 'nhse' or 'localn', got '" + s + "'");
}

Regime parse_regime(const std::string& s) {
  if (s == "linear") return Regime::Linear;
  if (s == "beyond") return Regime::Beyond;
  throw DomainError("regime must be 'linear' or 'beyond', got '" + s + "'");
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw DomainError("format must be 'csv' or 'json', got '" + s + "'");
}

int parse_site(const std::string& s) {
  if (s == "N") return -1;
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw DomainError("m must be an integer or 'N', got '" + s + "'");
  }
  if (pos != s.size()) throw DomainError("m must be an integer or 'N', got '" + s + "'");
  return v;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw DomainError("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw DomainError("not a number: '" + s + "'");
  return v;
}

bool close_rel(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

// Merges (w, delta) and (J, A) inputs into the scenario.
void set_chain_inputs(ScenarioSpec& s, std::optional<double> w, std::optional<double> delta,
                      std::optional<double> j, std::optional<double> a) {
  const bool wd = w || delta, ja = j || a;
  if (!wd && !ja) return;
  double cur_w = s.w, cur_d = s.delta, cur_j = s.j, cur_a = s.a;
  if (s.has_hopping) {
    cur_w = s.j * std::cosh(s.a);
    cur_d = s.j * std::sinh(s.a);
  } else if (s.w > s.delta && s.delta >= 0) {
    cur_j = std::sqrt((s.w - s.delta) * (s.w + s.delta));
    cur_a = 0.5 * std::log((s.w + s.delta) / (s.w - s.delta));
  }
  if (ja) {
    s.has_hopping = true;
    s.j = j.value_or(cur_j);
    s.a = a.value_or(cur_a);
    if (wd) {
      const double ww = w.value_or(cur_w), dd = delta.value_or(cur_d);
      if (!(ww > dd && dd >= 0)) throw DomainError("w must exceed delta >= 0");
      const double jj = std::sqrt((ww - dd) * (ww + dd));
      const double aa = 0.5 * std::log((ww + dd) / (ww - dd));
      if (!close_rel(jj, s.j) || !close_rel(aa, s.a))
        throw DomainError("(w, delta) and (J, A) are inconsistent");
    }
  } else {
    s.has_hopping = false;
    s.w = w.value_or(cur_w);
    s.delta = delta.value_or(cur_d);
  }
}

double number_field(const json& v, const std::string& key) {
  if (!v.is_number()) throw DomainError("config field '" + key + "' must be a number");
  return v.get<double>();
}

std::string string_field(const json& v, const std::string& key) {
  if (!v.is_string()) throw DomainError("config field '" + key + "' must be a string");
  return v.get<std::string>();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read '" + path + "'");
  return ss.str();
}

void write_output(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    out.flush();
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + cfg.out + "' for writing");
  f << text;
  f.close();
  if (!f) throw IoError("cannot write '" + cfg.out + "'");
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) {
    if (c == '"') o += '"';
    o += c;
  }
  return o + "\"";
}

// Echo of the configuration of one point as ordered (key, text, is_string).
struct Field {
  std::string key;
  std::string value;
  bool is_string;
};

std::vector<Field> config_fields(const ScenarioSpec& s) {
  double w = s.w, delta = s.delta, j = s.j, a = s.a;
  if (s.has_hopping) {
    w = s.j * std::cosh(s.a);
    delta = s.j * std::sinh(s.a);
  } else if (s.w > s.delta && s.delta >= 0) {
    j = std::sqrt((s.w - s.delta) * (s.w + s.delta));
    a = 0.5 * std::log((s.w + s.delta) / (s.w - s.delta));
  }
  const double varphi = s.kind == PerturbationKind::Nhse ? s.varphi : 0.0;
  return {
      {"N", std::to_string(s.n), false},
      {"w", format_number(w), false},
      {"delta", format_number(delta), false},
      {"kappa", format_number(s.kappa), false},
      {"J", format_number(j), false},
      {"A", format_number(a), false},
      {"theta", format_number(s.theta), false},
      {"m", std::to_string(s.m), false},
      {"beta", format_number(s.beta), false},
      {"nth", format_number(s.n_th), false},
      {"pert", to_string(s.kind), true},
      {"epsilon", format_number(s.epsilon), false},
      {"varphi", format_number(varphi), false},
      {"phi", format_number(s.phi), false},
      {"tau", format_number(s.tau), false},
      {"regime", to_string(s.regime), true},
  };
}

std::vector<std::pair<std::string, double>> metric_fields(const SensingReport& r) {
  return {{"signal", r.signal},
          {"noise", r.noise},
          {"n_tot", r.n_tot},
          {"n_tot_dominant", r.n_tot_dominant},
          {"snr", r.snr},
          {"snr_per_photon", r.snr_per_photon},
          {"snr_per_photon_dominant", r.snr_per_photon_dominant}};
}

const char* kMetricNames[] = {"signal", "noise", "n_tot", "n_tot_dominant",
                              "snr", "snr_per_photon", "snr_per_photon_dominant"};

std::string json_number(double v) { return std::isfinite(v) ? format_number(v) : "null"; }

std::string json_object(const ScenarioSpec& s, const SensingReport* r, const std::string& error,
                        bool with_error) {
  std::string o = "{";
  bool first = true;
  auto add = [&](const std::string& k, const std::string& v) {
    if (!first) o += ",";
    first = false;
    o += json(k).dump() + ":" + v;
  };
  for (const auto& f : config_fields(s)) add(f.key, f.is_string ? json(f.value).dump() : f.value);
  if (r) {
    for (const auto& [k, v] : metric_fields(*r)) add(k, json_number(v));
  } else {
    for (const char* k : kMetricNames) add(k, "null");
  }
  if (with_error) add("error", json(error).dump());
  return o + "}";
}

ScenarioSpec linear_case(PerturbationKind kind, double theta, int m, double phi) {
  ScenarioSpec s = defaults();
  s.a = 1.5;
  s.kind = kind;
  s.varphi = kind == PerturbationKind::Nhse ? kHalfPi : 0.0;
  s.theta = theta;
  s.m = m;
  s.phi = phi;
  s.epsilon = 1e-8;
  s.regime = Regime::Linear;
  return s;
}

struct CaseRow {
  const char* name;
  PerturbationKind kind;
  double theta;
  int m;
  double phi;
  double exponent;
};

const CaseRow kCases[] = {
    {"fig2a", PerturbationKind::Nhse, 0.0, 1, 0.0, 0.0},
    {"fig2b", PerturbationKind::Nhse, 0.0, -1, 0.0, 1.0},
    {"fig2c", PerturbationKind::Nhse, kHalfPi, 1, kHalfPi, 1.0},
    {"fig2d", PerturbationKind::Nhse, kHalfPi, -1, kHalfPi, 0.0},
    {"fig3a", PerturbationKind::LocalN, 0.0, 1, kHalfPi, 1.0},
    {"fig3b", PerturbationKind::LocalN, 0.0, -1, kHalfPi, 0.0},
    {"fig3c", PerturbationKind::LocalN, kHalfPi, 1, 0.0, -2.0},
    {"fig3d", PerturbationKind::LocalN, kHalfPi, -1, 0.0, -1.0},
};

const std::vector<double> kDefaultNs = {3, 5, 7, 9};

ScenarioSpec beyond_case(PerturbationKind kind) {
  ScenarioSpec s = defaults();
  s.n = 3;
  s.kind = kind;
  s.epsilon = 1e-3;
  s.regime = Regime::Beyond;
  s.theta = 0.0;
  if (kind == PerturbationKind::LocalN) {
    s.m = 1;
    s.phi = kHalfPi;
  } else {
    s.m = -1;
    s.phi = 0.0;
    s.varphi = kHalfPi;
  }
  return s;
}

std::vector<double> parse_list(const std::string& body) {
  std::vector<double> v;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(parse_double(item));
  if (v.empty()) throw DomainError("empty value list");
  return v;
}

struct Flags {
  std::string config;
  std::optional<int> n;
  std::optional<double> w, delta, j, a, kappa, theta, beta, nth, epsilon, varphi, phi, tau;
  std::optional<std::string> m, pert, regime, out, format;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON config file");
  app->add_option("--N", f.n, "number of sites (odd, >= 3)");
  app->add_option("--w", f.w, "hopping rate w");
  app->add_option("--delta", f.delta, "two-photon drive rate");
  app->add_option("--J", f.j, "effective hopping J");
  app->add_option("--A", f.a, "amplification factor A");
  app->add_option("--kappa", f.kappa, "waveguide coupling rate");
  app->add_option("--theta", f.theta, "drive phase");
  app->add_option("--m", f.m, "drive site (odd integer or N)");
  app->add_option("--beta", f.beta, "drive amplitude |beta|");
  app->add_option("--nth", f.nth, "thermal occupation");
  app->add_option("--pert", f.pert, "perturbation: nhse or localn");
  app->add_option("--epsilon", f.epsilon, "perturbation strength");
  app->add_option("--varphi", f.varphi, "tunneling phase (nhse)");
  app->add_option("--phi", f.phi, "homodyne angle in [0, pi/2]");
  app->add_option("--tau", f.tau, "integration time");
  app->add_option("--regime", f.regime, "linear or beyond");
  app->add_option("--out", f.out, "output path (default stdout)");
  app->add_option("--format", f.format, "csv or json");
}

void apply_flags(const Flags& f, RunConfig& cfg) {
  if (!f.config.empty()) apply_config_json(read_file(f.config), cfg);
  ScenarioSpec& s = cfg.scenario;
  if (f.n) s.n = *f.n;
  set_chain_inputs(s, f.w, f.delta, f.j, f.a);
  if (f.kappa) s.kappa = *f.kappa;
  if (f.theta) s.theta = *f.theta;
  if (f.m) s.m = parse_site(*f.m);
  if (f.beta) s.beta = *f.beta;
  if (f.nth) s.n_th = *f.nth;
  if (f.pert) s.kind = parse_kind(*f.pert);
  if (f.epsilon) s.epsilon = *f.epsilon;
  if (f.varphi) s.varphi = *f.varphi;
  if (f.phi) s.phi = *f.phi;
  if (f.tau) s.tau = *f.tau;
  if (f.regime) s.regime = parse_regime(*f.regime);
  if (f.out) cfg.out = *f.out;
  if (f.format) {
    cfg.format = parse_format(*f.format);
    cfg.format_set = true;
  }
}

int cmd_report(RunConfig cfg, std::ostream& out) {
  if (cfg.scenario.m == -1) cfg.scenario.m = cfg.scenario.n;
  const SensingReport r = evaluate_scenario(cfg.scenario);
  std::string text;
  if (cfg.format == Format::Csv) {
    SweepRow row{cfg.scenario, r, {}, ErrorClass::None};
    text = csv_header() + csv_row(row);
  } else {
    text = json_report(r) + "\n";
  }
  write_output(cfg, text, out);
  return 0;
}

int cmd_sweep(const SweepGrid& grid, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto rows = sweep(grid);
  const std::string text = cfg.format == Format::Json ? json_table(rows) : csv_table(rows);
  write_output(cfg, text, out);
  bool any_ok = false, any_numerical = false;
  for (const auto& r : rows) {
    any_ok = any_ok || r.report.has_value();
    any_numerical = any_numerical || r.error_class == ErrorClass::Numerical;
  }
  if (any_ok) return 0;
  err << "error: no grid point succeeded\n";
  return any_numerical ? 3 : 2;
}

int cmd_scaling(const ScalingCase& sc, const RunConfig& cfg, const std::vector<double>& ns,
                std::ostream& out) {
  if (ns.size() < 3) throw DomainError("scaling needs at least 3 values of N");
  const bool last_site = cfg.scenario.m == -1;
  std::vector<std::pair<double, double>> pts;
  double a = 0;
  std::string ns_text;
  for (double nv : ns) {
    ScenarioSpec s = cfg.scenario;
    s.n = static_cast<int>(std::lround(nv));
    if (s.n != nv) throw DomainError("N values must be integers");
    if (last_site) s.m = s.n;
    const SensingReport r = evaluate_scenario(s);
    a = r.chain.amplification();
    pts.emplace_back(s.n, r.snr_per_photon_dominant);
    ns_text += (ns_text.empty() ? "" : ";") + std::to_string(s.n);
  }
  if (!(a > 0)) throw DomainError("scaling fit needs A > 0");
  const FitResult fit = fit_scaling_exponent(pts);
  const double expected = sc.exponent_over_2a * 2.0 * a;
  const double dev = expected != 0.0 ? std::abs(fit.slope - expected) / std::abs(expected)
                                     : std::abs(fit.slope) / (2.0 * a);
  std::string text;
  if (cfg.format == Format::Json) {
    text = "{\"case\":" + json(sc.name).dump() + ",\"A\":" + json_number(a) + ",\"Ns\":" +
           json(ns_text).dump() + ",\"slope\":" + json_number(fit.slope) +
           ",\"expected_slope\":" + json_number(expected) +
           ",\"relative_deviation\":" + json_number(dev) +
           ",\"r_squared\":" + json_number(fit.r_squared) + "}\n";
  } else {
    text = "case,A,Ns,slope,expected_slope,relative_deviation,r_squared\n" + sc.name + "," +
           format_number(a) + "," + ns_text + "," + format_number(fit.slope) + "," +
           format_number(expected) + "," + format_number(dev) + "," +
           format_number(fit.r_squared) + "\n";
  }
  write_output(cfg, text, out);
  return 0;
}

}  // namespace

void apply_config_json(const std::string& text, RunConfig& cfg) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DomainError("config must be a JSON object");
  ScenarioSpec& s = cfg.scenario;
  std::optional<double> w, delta, j, a;
  for (const auto& [key, v] : doc.items()) {
    if (key == "N") {
      if (!v.is_number_integer()) throw DomainError("config field 'N' must be an integer");
      s.n = v.get<int>();
    } else if (key == "w") {
      w = number_field(v, key);
    } else if (key == "delta") {
      delta = number_field(v, key);
    } else if (key == "J") {
      j = number_field(v, key);
    } else if (key == "A") {
      a = number_field(v, key);
    } else if (key == "kappa") {
      s.kappa = number_field(v, key);
    } else if (key == "theta") {
      s.theta = number_field(v, key);
    } else if (key == "m") {
      if (v.is_number_integer()) {
        s.m = v.get<int>();
      } else if (v.is_string() && v.get<std::string>() == "N") {
        s.m = -1;
      } else {
        throw DomainError("config field 'm' must be an integer or \"N\"");
      }
    } else if (key == "beta") {
      s.beta = number_field(v, key);
    } else if (key == "nth") {
      s.n_th = number_field(v, key);
    } else if (key == "pert") {
      s.kind = parse_kind(string_field(v, key));
    } else if (key == "epsilon") {
      s.epsilon = number_field(v, key);
    } else if (key == "varphi") {
      s.varphi = number_field(v, key);
    } else if (key == "phi") {
      s.phi = number_field(v, key);
    } else if (key == "tau") {
      s.tau = number_field(v, key);
    } else if (key == "regime") {
      s.regime = parse_regime(string_field(v, key));
    } else if (key == "out") {
      cfg.out = string_field(v, key);
    } else if (key == "format") {
      cfg.format = parse_format(string_field(v, key));
      cfg.format_set = true;
    } else {
      throw DomainError("unknown config field '" + key + "'");
    }
  }
  set_chain_inputs(s, w, delta, j, a);
}

SweepAxis parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw DomainError("axis must look like name=values");
  SweepAxis ax;
  ax.name = text.substr(0, eq);
  const std::string body = text.substr(eq + 1);
  if (body.rfind("log:", 0) == 0) {
    std::stringstream ss(body.substr(4));
    std::string lo, hi, count;
    if (!std::getline(ss, lo, ':') || !std::getline(ss, hi, ':') || !std::getline(ss, count) ||
        count.find(':') != std::string::npos)
      throw DomainError("log axis must look like name=log:lo:hi:count");
    const double c = parse_double(count);
    if (c != std::floor(c) || c < 1) throw DomainError("log axis count must be a positive integer");
    ax.values = log_spaced(parse_double(lo), parse_double(hi), static_cast<int>(c));
  } else if (ax.name == "m") {
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ','))
      ax.values.push_back(item == "N" ? kLastSite : static_cast<double>(parse_site(item)));
    if (ax.values.empty()) throw DomainError("empty value list");
  } else {
    ax.values = parse_list(body);
  }
  return ax;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> v;
  for (const auto& c : kCases) v.emplace_back(c.name);
  v.emplace_back("figure4a");
  v.emplace_back("figure4b");
  return v;
}

ScalingCase scaling_case(const std::string& name) {
  for (const auto& c : kCases)
    if (name == c.name) return {c.name, linear_case(c.kind, c.theta, c.m, c.phi), c.exponent};
  throw DomainError("unknown scaling case '" + name + "'");
}

SweepGrid preset_grid(const std::string& name) {
  SweepGrid g;
  if (name == "figure4a" || name == "figure4b") {
    g.base = beyond_case(name == "figure4a" ? PerturbationKind::LocalN : PerturbationKind::Nhse);
    g.axes = {{"eta", log_spaced(1.0, 1e3, 61)}};
    return g;
  }
  g.base = scaling_case(name).base;
  g.axes = {{"N", kDefaultNs}};
  return g;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_header() {
  std::string h;
  for (const auto& f : config_fields(defaults())) h += f.key + ",";
  for (const char* k : kMetricNames) h += std::string(k) + ",";
  return h + "error\n";
}

std::string csv_row(const SweepRow& row) {
  std::string o;
  for (const auto& f : config_fields(row.point)) o += csv_escape(f.value) + ",";
  if (row.report) {
    for (const auto& [k, v] : metric_fields(*row.report)) o += format_number(v) + ",";
  } else {
    for (std::size_t i = 0; i < std::size(kMetricNames); ++i) o += ",";
  }
  return o + csv_escape(row.error) + "\n";
}

std::string csv_table(const std::vector<SweepRow>& rows) {
  std::string o = csv_header();
  for (const auto& r : rows) o += csv_row(r);
  return o;
}

std::string json_report(const SensingReport& r) {
  ScenarioSpec s;
  s.n = r.chain.sites();
  s.has_hopping = true;
  s.j = r.chain.effective_hopping();
  s.a = r.chain.amplification();
  s.kappa = r.chain.coupling();
  s.theta = r.drive.theta;
  s.m = r.drive.m;
  s.beta = r.drive.beta_abs;
  s.n_th = r.drive.n_th;
  s.kind = r.pert.kind;
  s.epsilon = r.pert.epsilon;
  s.varphi = r.pert.varphi;
  s.phi = r.homodyne.phi;
  s.tau = r.homodyne.tau;
  s.regime = r.regime;
  return json_object(s, &r, "", false);
}

std::string json_table(const std::vector<SweepRow>& rows) {
  std::string o = "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) o += ",\n";
    const auto& r = rows[i];
    o += json_object(r.point, r.report ? &*r.report : nullptr, r.error, true);
  }
  return o + "]\n";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sensing with coupled Hatano-Nelson chains", "nhsense"};
  app.require_subcommand(1);
  Flags report_flags, sweep_flags, scaling_flags;
  std::string preset, case_name;
  std::vector<std::string> axes;
  std::string ns_text;

  auto* report = app.add_subcommand("report", "evaluate one configuration");
  add_common(report, report_flags);
  auto* sw = app.add_subcommand("sweep", "evaluate a parameter grid");
  add_common(sw, sweep_flags);
  sw->add_option("--preset", preset, "figure preset: fig2a..fig3d, figure4a, figure4b");
  sw->add_option("--axis", axes, "name=v1,v2,... or name=log:lo:hi:count")->take_all();
  auto* sc = app.add_subcommand("scaling", "fit the exponent of SNR per photon versus N");
  add_common(sc, scaling_flags);
  sc->add_option("--case", case_name, "fig2a..fig3d")->required();
  sc->add_option("--Ns", ns_text, "comma-separated odd N values (default 3,5,7,9)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      std::ostringstream ss;
      app.exit(e, ss, ss);
      out << ss.str();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    RunConfig cfg;
    cfg.scenario = defaults();
    if (report->parsed()) {
      apply_flags(report_flags, cfg);
      return cmd_report(cfg, out);
    }
    if (sw->parsed()) {
      SweepGrid grid;
      if (!preset.empty()) {
        grid = preset_grid(preset);
        cfg.scenario = grid.base;
      }
      apply_flags(sweep_flags, cfg);
      if (!cfg.format_set) cfg.format = Format::Csv;
      grid.base = cfg.scenario;
      if (!axes.empty()) {
        grid.axes.clear();
        for (const auto& a : axes) grid.axes.push_back(parse_axis(a));
      }
      return cmd_sweep(grid, cfg, out, err);
    }
    const ScalingCase scase = scaling_case(case_name);
    cfg.scenario = scase.base;
    apply_flags(scaling_flags, cfg);
    if (!cfg.format_set) cfg.format = Format::Csv;
    return cmd_scaling(scase, cfg, ns_text.empty() ? kDefaultNs : parse_list(ns_text), out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace nhsense::cli
