#include "pb/report_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>


namespace pb {

using nlohmann::json;

namespace {

const std::map<std::string, std::vector<std::string>>& model_param_keys() {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"ex1", {"eps", "xi", "a", "b"}},
      {"ex2", {"A", "B"}},
      {"ex3", {"A", "B", "theta", "theta_tilde"}},
  };
  return keys;
}

std::map<std::string, double> canonical_params(const std::string& model) {
  if (model == "ex1") return {{"eps", 0.5}, {"xi", 1.0}, {"a", 1.0}, {"b", 1.0}};
  if (model == "ex2") return {{"A", 0.3}, {"B", 0.2}};
  return {{"A", 0.3}, {"B", 0.2}, {"theta", 0.05}, {"theta_tilde", 0.03}};
}

ModelParams make_params(const std::string& model,
                        const std::map<std::string, double>& p) {
  auto get = [&](const char* k) { return p.at(k); };
  if (model == "ex1") {
    Ex1Params q;
    q.eps = get("eps");
    q.xi = static_cast<int>(get("xi"));
    q.a = get("a");
    q.b = get("b");
    if (q.xi != 1 && q.xi != -1)
      throw std::invalid_argument("params.xi: must be +1 or -1");
    if (std::abs(q.eps) > 1.0 - q.delta_guard)
      throw std::invalid_argument("params.eps: |eps| must be <= " +
                                  format_double(1.0 - q.delta_guard));
    if (q.a == 0.0) throw std::invalid_argument("params.a: must be nonzero");
    if (q.b == 0.0) throw std::invalid_argument("params.b: must be nonzero");
    return q;
  }
  if (model == "ex2") {
    Ex2Params q;
    q.A = get("A");
    q.B = get("B");
    return q;
  }
  Ex3Params q;
  q.A = get("A");
  q.B = get("B");
  q.theta = get("theta");
  q.theta_tilde = get("theta_tilde");
  if (std::abs(q.theta) > q.regime_guard)
    throw std::invalid_argument("params.theta: |theta| must be <= " +
                                format_double(q.regime_guard));
  if (std::abs(q.theta_tilde) > q.regime_guard)
    throw std::invalid_argument("params.theta_tilde: |theta_tilde| must be <= " +
                                format_double(q.regime_guard));
  return q;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<ModelParams> RunConfig::run_points() const {
  const auto& keys = model_param_keys().at(model);
  std::vector<std::map<std::string, double>> points{{}};
  for (const auto& k : keys) {
    const auto& grid = param_grid.at(k);
    std::vector<std::map<std::string, double>> next;
    for (const auto& base : points)
      for (double v : grid) {
        auto p = base;
        p[k] = v;
        next.push_back(std::move(p));
      }
    points = std::move(next);
  }
  std::vector<ModelParams> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(make_params(model, p));
  return out;
}

SuiteOptions RunConfig::suite_options() const {
  SuiteOptions o;
  o.nmax = nmax;
  o.quasi_nmax = quasi_nmax;
  o.seed = seed;
  o.toggles = toggles;
  o.tol_overrides = tol_overrides;
  return o;
}

RunConfig parse_config(const json& j) {
  RunConfig c;
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  if (!j.contains("model") || !j.at("model").is_string())
    throw std::invalid_argument("config.model: required, one of ex1|ex2|ex3");
  c.model = j.at("model").get<std::string>();
  if (!model_param_keys().count(c.model))
    throw std::invalid_argument("config.model: unknown model '" + c.model + "'");

  const auto& keys = model_param_keys().at(c.model);
  auto is_param = [&](const std::string& k) {
    return std::find(keys.begin(), keys.end(), k) != keys.end();
  };

  auto read_grid = [&](const std::string& path, const json& v) {
    std::vector<double> grid;
    if (v.is_number()) {
      grid.push_back(v.get<double>());
    } else if (v.is_array()) {
      for (const auto& e : v) {
        if (!e.is_number())
          throw std::invalid_argument(path + ": sweep entries must be numbers");
        grid.push_back(e.get<double>());
      }
      if (grid.empty()) throw std::invalid_argument(path + ": sweep grid is empty");
    } else {
      throw std::invalid_argument(path + ": expected number or array of numbers");
    }
    return grid;
  };

  for (const auto& [key, value] : j.items()) {
    if (key == "model") continue;
    if (is_param(key)) {
      c.param_grid[key] = read_grid(key, value);
    } else if (key == "params") {
      for (const auto& [pk, pv] : value.items()) {
        if (!is_param(pk))
          throw std::invalid_argument("params." + pk + ": unknown parameter for " +
                                      c.model);
        c.param_grid[pk] = read_grid("params." + pk, pv);
      }
    } else if (key == "nmax") {
      c.nmax = value.get<int>();
      if (c.nmax < 0) throw std::invalid_argument("nmax: must be >= 0");
    } else if (key == "quasi_nmax") {
      c.quasi_nmax = value.get<int>();
      if (c.quasi_nmax < 0) throw std::invalid_argument("quasi_nmax: must be >= 0");
    } else if (key == "checks") {
      c.toggles.clear();
      for (const auto& e : value) {
        const std::string name = e.get<std::string>();
        if (!SuiteOptions::all_check_names().count(name))
          throw std::invalid_argument("checks: unknown check '" + name + "'");
        c.toggles.insert(name);
      }
    } else if (key == "tolerances") {
      for (const auto& [tk, tv] : value.items()) {
        if (!SuiteOptions::all_check_names().count(tk))
          throw std::invalid_argument("tolerances." + tk + ": unknown check");
        c.tol_overrides[tk] = tv.get<double>();
      }
    } else if (key == "out") {
      c.out_dir = value.get<std::string>();
    } else if (key == "formats") {
      c.formats.clear();
      for (const auto& e : value) {
        const std::string f = e.get<std::string>();
        if (f != "json" && f != "csv" && f != "md")
          throw std::invalid_argument("formats: unknown format '" + f + "'");
        c.formats.insert(f);
      }
    } else if (key == "jobs") {
      c.jobs = value.get<int>();
      if (c.jobs < 1) throw std::invalid_argument("jobs: must be >= 1");
    } else if (key == "seed") {
      c.seed = value.get<unsigned>();
    } else {
      throw std::invalid_argument("config." + key + ": unknown key");
    }
  }

  // Fill canonical defaults for parameters left unspecified.
  for (const auto& [k, v] : canonical_params(c.model))
    if (!c.param_grid.count(k)) c.param_grid[k] = {v};

  // Validate guards eagerly so bad configs fail before any run starts.
  (void)c.run_points();
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config file not readable: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config file " + path + ": " + e.what());
  }
  return parse_config(j);
}

json report_to_json(const Report& r) {
  json jr;
  jr["model"] = r.model;
  jr["nmax"] = r.nmax;
  jr["seed"] = r.seed;
  jr["error"] = r.error;
  jr["all_passed"] = r.all_passed();
  json params = json::object();
  for (const auto& [k, v] : r.params) params[k] = format_double(v);
  jr["params"] = params;
  json checks = json::array();
  for (const auto& c : r.checks) {
    json jc;
    jc["name"] = c.name;
    jc["max_abs_deviation"] = format_double(c.max_abs_deviation);
    jc["tolerance"] = format_double(c.tolerance);
    jc["pass"] = c.pass;
    json details = json::array();
    for (const auto& [label, dev] : c.details)
      details.push_back({{"index", label}, {"deviation", format_double(dev)}});
    jc["details"] = details;
    checks.push_back(std::move(jc));
  }
  jr["checks"] = checks;
  json timings = json::object();
  for (const auto& [k, v] : r.timings_sec) timings[k] = format_double(v);
  jr["timings_sec"] = timings;
  return jr;
}

Report report_from_json(const json& j) {
  Report r;
  r.model = j.at("model").get<std::string>();
  r.nmax = j.at("nmax").get<int>();
  r.seed = j.at("seed").get<unsigned>();
  r.error = j.at("error").get<std::string>();
  for (const auto& [k, v] : j.at("params").items())
    r.params[k] = std::strtod(v.get<std::string>().c_str(), nullptr);
  for (const auto& jc : j.at("checks")) {
    CheckResult c;
    c.name = jc.at("name").get<std::string>();
    c.max_abs_deviation =
        std::strtod(jc.at("max_abs_deviation").get<std::string>().c_str(), nullptr);
    c.tolerance = std::strtod(jc.at("tolerance").get<std::string>().c_str(), nullptr);
    c.pass = jc.at("pass").get<bool>();
    for (const auto& jd : jc.at("details"))
      c.details.emplace_back(
          jd.at("index").get<std::string>(),
          std::strtod(jd.at("deviation").get<std::string>().c_str(), nullptr));
    r.checks.push_back(std::move(c));
  }
  for (const auto& [k, v] : j.at("timings_sec").items())
    r.timings_sec[k] = std::strtod(v.get<std::string>().c_str(), nullptr);
  return r;
}

std::vector<std::string> emit_reports(const std::vector<Report>& reports,
                                      const std::string& out_dir,
                                      const std::set<std::string>& formats) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  std::vector<std::string> written;
  auto open = [&](const std::string& name) {
    const std::string path = (fs::path(out_dir) / name).string();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_reports: cannot write " + path);
    written.push_back(path);
    return out;
  };

  if (formats.count("json")) {
    json doc;
    doc["schema"] = "pb-report/1";
    doc["runs"] = json::array();
    for (const auto& r : reports) doc["runs"].push_back(report_to_json(r));
    auto out = open("report.json");
    out << doc.dump(2) << "\n";
  }

  if (formats.count("csv")) {
    auto out = open("checks.csv");
    out << "run,model,params,check,max_abs_deviation,tolerance,pass\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      std::string params;
      for (const auto& [k, v] : r.params) {
        if (!params.empty()) params += ";";
        params += k + "=" + format_double(v);
      }
      for (const auto& c : r.checks)
        out << i << "," << r.model << "," << params << "," << c.name << ","
            << format_double(c.max_abs_deviation) << ","
            << format_double(c.tolerance) << "," << (c.pass ? "true" : "false")
            << "\n";
    }

    // Plot data: quasi-basis partial-sum deviations and g_n growth values.
    auto plot = open("plotdata.csv");
    plot << "run,model,series,label,k,value\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      for (const auto& c : reports[i].checks) {
        if (c.name == "quasi_basis") {
          for (const auto& [label, dev] : c.details) {
            const auto pos = label.find("N=");
            if (pos == std::string::npos) continue;
            plot << i << "," << reports[i].model << ",quasi_partial_dev,\"" << label
                 << "\"," << label.substr(pos + 2) << "," << format_double(dev)
                 << "\n";
          }
        } else if (c.name == "riesz_growth") {
          for (const auto& [label, dev] : c.details) {
            if (label.rfind("g_value_", 0) != 0) continue;
            plot << i << "," << reports[i].model << ",riesz_g,\"" << label << "\","
                 << label.substr(8) << "," << format_double(dev) << "\n";
          }
        }
      }
    }
  }

  if (formats.count("md")) {
    auto out = open("summary.md");
    out << "# Verification summary\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      out << "\n## run " << i << ": " << r.model << " (";
      bool first = true;
      for (const auto& [k, v] : r.params) {
        if (!first) out << ", ";
        out << k << "=" << v;
        first = false;
      }
      out << ")\n\n";
      if (!r.error.empty()) {
        out << "**construction failed:** " << r.error << "\n";
        continue;
      }
      out << "| check | max deviation | tolerance | pass |\n";
      out << "|---|---|---|---|\n";
      for (const auto& c : r.checks)
        out << "| " << c.name << " | " << format_double(c.max_abs_deviation)
            << " | " << format_double(c.tolerance) << " | "
            << (c.pass ? "pass" : "FAIL") << " |\n";
    }
  }

  return written;
}

}  // namespace pb
