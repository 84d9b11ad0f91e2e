#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mfotto/errors.hpp"
#include "mfotto/otto.hpp"
#include "mfotto/parallel.hpp"
#include "mfotto/response.hpp"
#include "mfotto/semiclassical.hpp"
#include "mfotto/validation.hpp"

namespace mfotto::cli {

namespace {

enum class LogLevel { Quiet, Error, Info, Debug };

LogLevel log_level() {
  const char* env = std::getenv("OTTO_LOG");
  const std::string v = env ? env : "";
  if (v == "quiet" || v == "off") return LogLevel::Quiet;
  if (v == "info") return LogLevel::Info;
  if (v == "debug" || v == "trace") return LogLevel::Debug;
  return LogLevel::Error;
}

class Logger {
 public:
  explicit Logger(std::ostream& err) : err_(err), level_(log_level()) {}
  void error(const std::string& msg) const { emit(LogLevel::Error, "error", msg); }
  void info(const std::string& msg) const { emit(LogLevel::Info, "info", msg); }
  void debug(const std::string& msg) const { emit(LogLevel::Debug, "debug", msg); }

 private:
  void emit(LogLevel at, const char* tag, const std::string& msg) const {
    if (level_ >= at) err_ << "mfotto [" << tag << "] " << msg << '\n';
  }
  std::ostream& err_;
  LogLevel level_;
};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct RunConfig {
  std::string command;
  std::vector<int> n{4};
  double j1 = 1.0;
  double j2 = -1.0;
  double b = 1.0;
  double e_field = 0.0;
  double e_field_low = 3.5;
  double t = 1.0;
  double t_hot = 30.0;
  double t_cold = 10.0;
  std::string mode = "both";
  std::vector<std::string> sweep_text;
  std::string format = "csv";
  std::string out;
  int jobs = 1;
  std::string table = "entropy";
  double perturb = 0.0;
  std::vector<Sweep> sweeps;
};

/// Values at one point of the sweep grid.
struct Point {
  int n = 4;
  double j1 = 1.0, j2 = -1.0, b = 1.0, e_field = 0.0, e_field_low = 3.5;
  double t = 1.0, t_hot = 30.0, t_cold = 10.0;

  [[nodiscard]] ChainParams params() const { return {n, j1, j2, b, e_field}; }
};

const std::vector<std::string>& sweepable() {
  static const std::vector<std::string> vars{"t", "t-hot", "t-cold", "b-field", "e-field", "e-field-low", "j1", "j2"};
  return vars;
}

void assign(Point& p, const std::string& var, double v) {
  if (var == "t") p.t = v;
  else if (var == "t-hot") p.t_hot = v;
  else if (var == "t-cold") p.t_cold = v;
  else if (var == "b-field") p.b = v;
  else if (var == "e-field") p.e_field = v;
  else if (var == "e-field-low") p.e_field_low = v;
  else if (var == "j1") p.j1 = v;
  else if (var == "j2") p.j2 = v;
  else throw ParameterError("unknown sweep variable '" + var + "'");
}

// Cartesian product of all sweeps for every n; the first sweep varies slowest.
std::vector<Point> grid(const RunConfig& cfg) {
  Point base;
  base.j1 = cfg.j1;
  base.j2 = cfg.j2;
  base.b = cfg.b;
  base.e_field = cfg.e_field;
  base.e_field_low = cfg.e_field_low;
  base.t = cfg.t;
  base.t_hot = cfg.t_hot;
  base.t_cold = cfg.t_cold;
  std::vector<Point> points;
  for (int n : cfg.n) {
    Point p = base;
    p.n = n;
    points.push_back(p);
  }
  for (const Sweep& s : cfg.sweeps) {
    const auto values = s.values();
    std::vector<Point> next;
    next.reserve(points.size() * values.size());
    for (const Point& p : points) {
      for (double v : values) {
        Point q = p;
        assign(q, s.var, v);
        next.push_back(q);
      }
    }
    points = std::move(next);
  }
  return points;
}

using Rows = std::vector<std::vector<Cell>>;

// Evaluates `row_fn` on every grid point with the worker pool and
// concatenates the results in grid order.
template <typename RowFn>
Rows evaluate(const std::vector<Point>& points, int jobs, RowFn&& row_fn) {
  std::vector<Rows> parts(points.size());
  parallel_for(points.size(), jobs, [&](std::size_t i) { parts[i] = row_fn(points[i]); });
  Rows rows;
  for (auto& part : parts) {
    for (auto& r : part) rows.push_back(std::move(r));
  }
  return rows;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Table cmd_spectrum(const RunConfig& cfg, const std::vector<Point>& points) {
  Table t;
  t.columns = {"n", "j1", "j2", "b_field", "e_field", "level", "energy", "sz"};
  t.rows = evaluate(points, cfg.jobs, [](const Point& p) {
    const SpectrumPtr spec = solve(p.params());
    Rows rows;
    for (Eigen::Index k = 0; k < spec->size(); ++k) {
      rows.push_back({static_cast<long long>(p.n), p.j1, p.j2, p.b, p.e_field, static_cast<long long>(k),
                      spec->energies(k), static_cast<long long>(spec->sz_sector[static_cast<std::size_t>(k)])});
    }
    return rows;
  });
  return t;
}

Table cmd_tangles(const RunConfig& cfg, const std::vector<Point>& points) {
  const int max_n = *std::max_element(cfg.n.begin(), cfg.n.end());
  Table t;
  t.columns = {"n", "t", "b_field", "e_field", "tau1", "tau2", "chirality"};
  for (int r = 1; r <= max_n / 2; ++r) t.columns.push_back("c_r" + std::to_string(r));
  t.rows = evaluate(points, cfg.jobs, [max_n](const Point& p) {
    const SpectrumPtr spec = solve(p.params());
    const DensityMatrix rho = density_matrix(gibbs(spec, p.t));
    std::vector<Cell> row{static_cast<long long>(p.n), p.t, p.b, p.e_field, one_tangle(rho), two_tangle(rho, p.n),
                          chirality_expectation(rho, build_chirality_operator(p.n))};
    const auto c = concurrence_by_distance(rho);
    for (int r = 1; r <= max_n / 2; ++r) {
      row.emplace_back(r <= static_cast<int>(c.size()) ? c[static_cast<std::size_t>(r - 1)] : kNaN);
    }
    return Rows{row};
  });
  return t;
}

Table cmd_susceptibility(const RunConfig& cfg, const std::vector<Point>& points) {
  Table t;
  t.columns = {"n", "t", "b_field", "e_field", "chi_b", "chi_e"};
  t.rows = evaluate(points, cfg.jobs, [](const Point& p) {
    const ChainParams params = p.params();
    return Rows{{static_cast<long long>(p.n), p.t, p.b, p.e_field, susceptibility(params, Field::Magnetic, p.t),
                 susceptibility(params, Field::Electric, p.t)}};
  });
  return t;
}

void append_cycle(std::vector<Cell>& row, const std::optional<CycleResult>& r) {
  if (!r) {
    row.insert(row.end(), {kNaN, kNaN, kNaN, kNaN, 0LL});
    return;
  }
  row.insert(row.end(), {r->q_in, r->q_out, r->work, r->efficiency, static_cast<long long>(r->is_engine())});
}

Table cmd_otto(const RunConfig& cfg, const std::vector<Point>& points) {
  const bool thermo = cfg.mode != "quantum";
  const bool quantum = cfg.mode != "thermo";
  Table t;
  t.columns = {"n", "b_field", "e_field", "e_field_low", "ratio", "t_hot", "t_cold", "carnot"};
  for (const char* m : {"thermo", "quantum"}) {
    if ((m[0] == 't' && !thermo) || (m[0] == 'q' && !quantum)) continue;
    for (const char* col : {"q_in", "q_out", "work", "eta", "engine"}) t.columns.push_back(std::string(col) + "_" + m);
  }
  if (quantum) t.columns.push_back("quantum_status");
  t.columns.insert(t.columns.end(), {"tau2_hot", "tau1_hot"});

  t.rows = evaluate(points, cfg.jobs, [&](const Point& p) {
    CycleSpec spec;
    spec.params = p.params();
    spec.t_hot = p.t_hot;
    spec.t_cold = p.t_cold;
    spec.p_high = p.e_field;
    spec.p_low = p.e_field_low;
    spec.validate();
    std::vector<Cell> row{static_cast<long long>(p.n), p.b, p.e_field, p.e_field_low,
                          p.e_field_low > 0.0 ? p.e_field / p.e_field_low : kNaN, p.t_hot, p.t_cold,
                          1.0 - p.t_cold / p.t_hot};
    if (thermo) {
      spec.mode = CycleMode::ThermodynamicAdiabatic;
      append_cycle(row, run_cycle(spec));
    }
    if (quantum) {
      spec.mode = CycleMode::QuantumAdiabatic;
      std::string status = "ok";
      std::optional<CycleResult> r;
      try {
        r = run_cycle(spec);
      } catch (const ContinuationError&) {
        status = "continuation-error";
      }
      append_cycle(row, r);
      row.emplace_back(status);
    }
    const DensityMatrix rho = density_matrix(gibbs(solve(spec.params.with_e_field(p.e_field)), p.t_hot));
    row.emplace_back(two_tangle(rho, p.n));
    row.emplace_back(one_tangle(rho));
    return Rows{row};
  });
  return t;
}

Table cmd_semiclassical(const RunConfig& cfg, const std::vector<Point>& points) {
  for (const Point& p : points) {
    if (p.n != 4) throw ParameterError("semiclassical: only the four-site ring is supported");
    if (std::abs(p.j1 + p.j2) > 1e-12) throw ParameterError("semiclassical: requires j2 = -j1");
  }
  Table t;
  if (cfg.table == "entropy") {
    t.columns = {"j1", "b_field", "t", "e_field", "entropy_sc", "entropy_valid", "free_energy_sc", "free_energy_valid"};
    t.rows = evaluate(points, cfg.jobs, [](const Point& p) {
      const ScConfig sc = ScConfig::make(p.j1, p.b);
      const ScValue s = entropy_sc(p.t, p.e_field, sc);
      const ScValue f = free_energy_sc(p.t, p.e_field, sc);
      return Rows{{p.j1, p.b, p.t, p.e_field, s.value, static_cast<long long>(s.valid), f.value,
                   static_cast<long long>(f.valid)}};
    });
    return t;
  }
  t.columns = {"j1", "b_field", "t_cold", "t_hot", "delta_t", "e_field", "e_field_low", "eta_sc"};
  t.rows = evaluate(points, cfg.jobs, [](const Point& p) {
    const ScConfig sc = ScConfig::make(p.j1, p.b);
    return Rows{{p.j1, p.b, p.t_cold, p.t_hot, p.t_hot - p.t_cold, p.e_field, p.e_field_low,
                 efficiency_sc(p.t_cold, p.t_hot, p.e_field, p.e_field_low, sc)}};
  });
  return t;
}

Table cmd_validate(const RunConfig& cfg, bool& passed) {
  ValidationOptions options;
  options.perturb = cfg.perturb;
  options.jobs = cfg.jobs;
  const Report report = run_validation(options);
  passed = report.passed();
  Table t;
  t.columns = {"check", "samples", "max_deviation", "tolerance", "status"};
  for (const Check& c : report.checks) {
    t.rows.push_back({c.name, static_cast<long long>(c.samples), c.max_deviation, c.tolerance,
                      std::string(c.passed() ? "pass" : "FAIL")});
  }
  return t;
}

std::vector<std::pair<std::string, std::string>> metadata(const RunConfig& cfg) {
  std::string n_list;
  for (std::size_t i = 0; i < cfg.n.size(); ++i) n_list += (i ? "," : "") + std::to_string(cfg.n[i]);
  std::string sweeps;
  for (std::size_t i = 0; i < cfg.sweep_text.size(); ++i) sweeps += (i ? ";" : "") + cfg.sweep_text[i];
  std::vector<std::pair<std::string, std::string>> meta{
      {"command", cfg.command},
      {"n", n_list},
      {"j1", format_double(cfg.j1)},
      {"j2", format_double(cfg.j2)},
      {"b_field", format_double(cfg.b)},
      {"e_field", format_double(cfg.e_field)},
      {"e_field_low", format_double(cfg.e_field_low)},
      {"t", format_double(cfg.t)},
      {"t_hot", format_double(cfg.t_hot)},
      {"t_cold", format_double(cfg.t_cold)},
      {"mode", cfg.mode},
      {"sweep", sweeps},
  };
  if (cfg.command == "semiclassical") meta.emplace_back("table", cfg.table);
  if (cfg.command == "validate") meta.emplace_back("perturb", format_double(cfg.perturb));
  return meta;
}

}  // namespace

std::vector<double> Sweep::values() const {
  if (count < 1) throw ParameterError("sweep count must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = count == 1 ? start : start + (stop - start) * i / (count - 1);
  }
  if (count > 1) out.back() = stop;
  return out;
}

Sweep parse_sweep(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 4) throw ParameterError("sweep must look like <var>:<start>:<stop>:<count>, got '" + text + "'");
  Sweep s;
  s.var = parts[0];
  if (std::find(sweepable().begin(), sweepable().end(), s.var) == sweepable().end()) {
    throw ParameterError("unknown sweep variable '" + s.var + "'");
  }
  try {
    std::size_t used = 0;
    s.start = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("start");
    s.stop = std::stod(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("stop");
    s.count = std::stoi(parts[3], &used);
    if (used != parts[3].size()) throw std::invalid_argument("count");
  } catch (const std::logic_error&) {
    throw ParameterError("malformed number in sweep '" + text + "'");
  }
  if (!std::isfinite(s.start) || !std::isfinite(s.stop)) throw ParameterError("sweep bounds must be finite");
  if (s.count < 1) throw ParameterError("sweep count must be >= 1");
  return s;
}

void write_csv(const Table& table, std::ostream& out) {
  for (const auto& [key, value] : table.meta) out << "# " << key << '=' << value << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      std::visit(
          [&out](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>) out << format_double(v);
            else out << v;
          },
          row[i]);
    }
    out << '\n';
  }
}

void write_json(const Table& table, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["meta"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : table.meta) doc["meta"][key] = value;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>) {
              if (std::isfinite(v)) obj[table.columns[i]] = v;
              else obj[table.columns[i]] = nullptr;
            } else {
              obj[table.columns[i]] = v;
            }
          },
          row[i]);
    }
    doc["rows"].push_back(std::move(obj));
  }
  out << doc.dump(1) << '\n';
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const Logger log(err);
  RunConfig cfg;

  CLI::App app{"Exact-diagonalization Otto engine with a multiferroic spin ring", "mfotto"};
  app.set_config("--config", "", "Flat key = value file; command-line flags take precedence");
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--n", cfg.n, "Ring size(s), comma separated")->delimiter(',')->check(CLI::Range(kMinSites, kMaxSites));
  app.add_option("--j1", cfg.j1, "Nearest-neighbour exchange");
  app.add_option("--j2", cfg.j2, "Next-nearest-neighbour exchange");
  app.add_option("--b-field", cfg.b, "Magnetic field");
  app.add_option("--e-field", cfg.e_field, "Electric coupling (hot-side field for otto)");
  app.add_option("--e-field-low", cfg.e_field_low, "Cold-side electric field");
  app.add_option("--t", cfg.t, "Temperature");
  app.add_option("--t-hot", cfg.t_hot, "Hot bath temperature");
  app.add_option("--t-cold", cfg.t_cold, "Cold bath temperature");
  app.add_option("--mode", cfg.mode, "Otto adiabats")->check(CLI::IsMember({"quantum", "thermo", "both"}));
  app.add_option("--sweep", cfg.sweep_text, "<var>:<start>:<stop>:<count>, repeatable");
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", cfg.out, "Output file (default stdout)");
  app.add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);

  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"spectrum", "Energies and Sz sectors"},
      {"tangles", "One/two tangle, pair concurrences and chirality"},
      {"susceptibility", "Magnetic and electric susceptibilities"},
      {"otto", "Otto cycle heats and efficiencies"},
      {"semiclassical", "Perturbative entropy and efficiency (four sites)"},
      {"validate", "Closed-form oracle and invariant suite"},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->fallthrough();
    sub->callback([&cfg, name = std::string(c.name)] { cfg.command = name; });
    if (std::string(c.name) == "semiclassical") {
      sub->add_option("--table", cfg.table, "entropy or efficiency")->check(CLI::IsMember({"entropy", "efficiency"}));
    }
    if (std::string(c.name) == "validate") {
      sub->add_option("--perturb", cfg.perturb, "Shift added to the numeric ground energy (negative control)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kParameterError;
  }

  try {
    for (const auto& s : cfg.sweep_text) cfg.sweeps.push_back(parse_sweep(s));
    if (cfg.n.empty()) throw ParameterError("--n needs at least one ring size");

    std::ofstream file;
    std::ostream* sink = &out;
    if (!cfg.out.empty()) {
      file.open(cfg.out, std::ios::binary);
      if (!file) throw ParameterError("cannot open output file '" + cfg.out + "'");
      sink = &file;
    }

    log.info("command " + cfg.command);
    Table table;
    bool passed = true;
    if (cfg.command == "validate") {
      table = cmd_validate(cfg, passed);
    } else {
      const std::vector<Point> points = grid(cfg);
      log.debug(std::to_string(points.size()) + " grid points");
      if (cfg.command == "spectrum") table = cmd_spectrum(cfg, points);
      else if (cfg.command == "tangles") table = cmd_tangles(cfg, points);
      else if (cfg.command == "susceptibility") table = cmd_susceptibility(cfg, points);
      else if (cfg.command == "otto") table = cmd_otto(cfg, points);
      else table = cmd_semiclassical(cfg, points);
    }
    table.meta = metadata(cfg);
    if (cfg.format == "json") write_json(table, *sink);
    else write_csv(table, *sink);
    sink->flush();
    log.info(std::to_string(table.rows.size()) + " rows written");
    if (!passed) {
      log.error("validation failed");
      return kValidationFailure;
    }
    return kOk;
  } catch (const ParameterError& e) {
    log.error(e.what());
    return kParameterError;
  } catch (const NumericError& e) {
    log.error(e.what());
    return kNumericFailure;
  } catch (const std::exception& e) {
    log.error(e.what());
    return kNumericFailure;
  }
}

}  // namespace mfotto::cli
