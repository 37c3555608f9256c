#include "tn/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tn {

namespace {

std::string trim(const std::string &s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
    ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
    --b;
  return s.substr(a, b - a);
}

double parse_number(std::size_t line, const std::string &key,
                    const std::string &value) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception &) {
    throw ConfigError(line, "value of '" + key + "' is not a number: '" +
                                value + "'");
  }
  if (pos != value.size())
    throw ConfigError(line, "value of '" + key + "' is not a number: '" +
                                value + "'");
  return v;
}

std::size_t parse_count(std::size_t line, const std::string &key,
                        const std::string &value) {
  const double v = parse_number(line, key, value);
  if (v < 0 || v != std::floor(v))
    throw ConfigError(line, "value of '" + key +
                                "' must be a nonnegative integer");
  return static_cast<std::size_t>(v);
}

bool parse_bool(std::size_t line, const std::string &key,
                const std::string &value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on")
    return true;
  if (value == "false" || value == "0" || value == "no" || value == "off")
    return false;
  throw ConfigError(line, "value of '" + key + "' is not a boolean: '" +
                              value + "'");
}

std::vector<Measurement> parse_measurements(std::size_t line,
                                            const std::string &value) {
  std::vector<Measurement> out;
  std::stringstream ss(value);
  std::string token;
  while (std::getline(ss, token, ',')) {
    token = trim(token);
    if (token.empty())
      continue;
    if (token == "energy") {
      out.push_back({Measurement::Kind::Energy, "", ""});
    } else if (token == "sz_profile") {
      out.push_back({Measurement::Kind::SzProfile, "", ""});
    } else if (token.rfind("correlation:", 0) == 0) {
      const std::string rest = token.substr(std::string("correlation:").size());
      const std::size_t colon = rest.find(':');
      if (colon == std::string::npos || colon == 0 ||
          colon + 1 == rest.size())
        throw ConfigError(line,
                          "correlation measurement needs the form "
                          "correlation:<opA>:<opB>");
      out.push_back({Measurement::Kind::Correlation, rest.substr(0, colon),
                     rest.substr(colon + 1)});
    } else {
      throw ConfigError(line, "unknown measurement '" + token + "'");
    }
  }
  if (out.empty())
    throw ConfigError(line, "empty measurement list");
  return out;
}

} // namespace

RunConfig parse_config(const std::string &text) {
  RunConfig config;
  bool have_model = false, have_sites = false, have_j = false, have_jz = false;

  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos)
      raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty())
      continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(line_no, "missing key before '='");
    if (value.empty())
      throw ConfigError(line_no, "missing value for '" + key + "'");

    if (key == "model") {
      have_model = true;
      if (value == "heisenberg")
        config.model = ModelKind::Heisenberg;
      else if (value == "xxz")
        config.model = ModelKind::Xxz;
      else if (value == "hubbard")
        config.model = ModelKind::Hubbard;
      else if (value == "tj")
        config.model = ModelKind::TJ;
      else
        throw ConfigError(line_no, "unknown model '" + value + "'");
    } else if (key == "sites") {
      config.sites = parse_count(line_no, key, value);
      have_sites = true;
    } else if (key == "spin") {
      config.spin = parse_number(line_no, key, value);
    } else if (key == "J") {
      config.coupling_j = parse_number(line_no, key, value);
      have_j = true;
    } else if (key == "Jz") {
      config.coupling_jz = parse_number(line_no, key, value);
      have_jz = true;
    } else if (key == "t") {
      config.hopping_t = parse_number(line_no, key, value);
    } else if (key == "U") {
      config.hubbard_u = parse_number(line_no, key, value);
    } else if (key == "mu") {
      config.mu = parse_number(line_no, key, value);
    } else if (key == "seed") {
      config.seed = static_cast<std::uint64_t>(parse_count(line_no, key, value));
    } else if (key == "output") {
      config.output_dir = value;
    } else if (key == "measurements") {
      config.measurements = parse_measurements(line_no, value);
    } else if (key == "storage") {
      if (value == "memory")
        config.disk_storage = false;
      else if (value == "disk")
        config.disk_storage = true;
      else
        throw ConfigError(line_no, "storage must be 'memory' or 'disk'");
    } else if (key == "storage.dir") {
      config.storage_dir = value;
    } else if (key == "dmrg.sweeps") {
      config.dmrg.sweeps = parse_count(line_no, key, value);
      if (config.dmrg.sweeps == 0)
        throw ConfigError(line_no, "dmrg.sweeps must be at least 1");
    } else if (key == "dmrg.method") {
      if (value != "twosite")
        throw ConfigError(
            line_no, "dmrg.method '" + value +
                         "' is not available; only 'twosite' is implemented "
                         "(single-site/3S updates are intentionally out of "
                         "scope, see README)");
      config.dmrg.method = value;
    } else if (key == "dmrg.m") {
      config.dmrg.trunc.max_keep = parse_count(line_no, key, value);
    } else if (key == "dmrg.minm") {
      config.dmrg.trunc.min_keep = parse_count(line_no, key, value);
    } else if (key == "dmrg.cutoff") {
      config.dmrg.trunc.cutoff = parse_number(line_no, key, value);
      if (config.dmrg.trunc.cutoff < 0 || config.dmrg.trunc.cutoff >= 1)
        throw ConfigError(line_no, "dmrg.cutoff must lie in [0, 1)");
    } else if (key == "dmrg.convergence") {
      config.dmrg.convergence = parse_number(line_no, key, value);
      if (config.dmrg.convergence <= 0)
        throw ConfigError(line_no, "dmrg.convergence must be positive");
    } else if (key == "dmrg.solver_max_iter") {
      config.dmrg.solver_max_iter = parse_count(line_no, key, value);
    } else if (key == "dmrg.solver_tol") {
      config.dmrg.solver_tol = parse_number(line_no, key, value);
      if (config.dmrg.solver_tol <= 0)
        throw ConfigError(line_no, "dmrg.solver_tol must be positive");
    } else {
      throw ConfigError(line_no, "unknown key '" + key + "'");
    }
  }

  if (!have_model)
    throw ConfigError(line_no, "missing required key 'model'");
  if (!have_sites)
    throw ConfigError(line_no, "missing required key 'sites'");
  if (config.sites < 2)
    throw ConfigError(line_no, "sites must be at least 2");
  const double two_s = 2.0 * config.spin;
  if (config.spin <= 0 || std::abs(two_s - std::round(two_s)) > 1e-12)
    throw ConfigError(line_no, "spin must be a positive half-integer");
  if (have_j && !have_jz &&
      (config.model == ModelKind::Heisenberg))
    config.coupling_jz = config.coupling_j; // isotropic default
  for (double v : {config.coupling_j, config.coupling_jz, config.hopping_t,
                   config.hubbard_u, config.mu})
    if (!std::isfinite(v))
      throw ConfigError(line_no, "couplings must be finite");
  if (config.measurements.empty())
    config.measurements.push_back({Measurement::Kind::Energy, "", ""});
  return config;
}

RunConfig parse_config_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError(0, "cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

} // namespace tn
