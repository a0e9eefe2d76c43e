#include "wenlr/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <stdexcept>

#include "wenlr/image_io.hpp"

namespace wenlr {

// Shortest representation that parses back to the same double.
std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

KeyValues config_to_key_values(const SolverConfig& c) {
  auto d = format_double;
  auto i = [](auto v) { return std::to_string(v); };
  return {
      {"iterations", i(c.iterations)},
      {"gamma", d(c.gamma)},
      {"eta", d(c.eta_init)},
      {"mu", d(c.mu_init)},
      {"rho", d(c.rho)},
      {"c1", d(c.c1)},
      {"intensity-scale", d(c.intensity_scale)},
      {"k2", d(c.k2)},
      {"epsilon", d(c.epsilon)},
      {"cg-tol", d(c.cg_tol)},
      {"cg-max-iter", i(c.cg_max_iter)},
      {"patch-size", i(c.patch_size)},
      {"stride", i(c.stride)},
      {"window", i(c.window)},
      {"nlr-neighbors", i(c.nlr_neighbors)},
      {"prior-neighbors", i(c.prior_neighbors)},
      {"training-samples", i(c.training_samples)},
      {"h1", d(c.effective_h1())},
      {"noise-level", d(c.noise_level)},
      {"sigma", d(c.sigma)},
      {"chi", d(c.chi)},
      {"verify-dictionaries", c.verify_dictionaries ? "1" : "0"},
  };
}

namespace {

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid value for " + key + ": '" + v + "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long n = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid integer for " + key + ": '" + v + "'");
  }
}

std::size_t parse_count(const std::string& key, const std::string& v) {
  const long long n = parse_int(key, v);
  if (n < 0) throw std::invalid_argument(key + " must be non-negative");
  return static_cast<std::size_t>(n);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw std::invalid_argument("invalid boolean for " + key + ": '" + v + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

bool apply_config_value(SolverConfig& c, const std::string& key, const std::string& v) {
  if (key == "iterations") c.iterations = static_cast<int>(parse_int(key, v));
  else if (key == "gamma") c.gamma = parse_double(key, v);
  else if (key == "eta") c.eta_init = parse_double(key, v);
  else if (key == "mu") c.mu_init = parse_double(key, v);
  else if (key == "rho") c.rho = parse_double(key, v);
  else if (key == "c1") c.c1 = parse_double(key, v);
  else if (key == "intensity-scale") c.intensity_scale = parse_double(key, v);
  else if (key == "k2") c.k2 = parse_double(key, v);
  else if (key == "epsilon") c.epsilon = parse_double(key, v);
  else if (key == "cg-tol") c.cg_tol = parse_double(key, v);
  else if (key == "cg-max-iter") c.cg_max_iter = static_cast<int>(parse_int(key, v));
  else if (key == "patch-size") c.patch_size = static_cast<int>(parse_int(key, v));
  else if (key == "stride") c.stride = static_cast<int>(parse_int(key, v));
  else if (key == "window") c.window = static_cast<int>(parse_int(key, v));
  else if (key == "nlr-neighbors") c.nlr_neighbors = parse_count(key, v);
  else if (key == "prior-neighbors") c.prior_neighbors = parse_count(key, v);
  else if (key == "training-samples") c.training_samples = parse_count(key, v);
  else if (key == "h1") c.h1 = parse_double(key, v);
  else if (key == "noise-level") c.noise_level = parse_double(key, v);
  else if (key == "sigma") c.sigma = parse_double(key, v);
  else if (key == "chi") c.chi = parse_double(key, v);
  else if (key == "verify-dictionaries") c.verify_dictionaries = parse_bool(key, v);
  else return false;
  return true;
}

KeyValues parse_config(std::istream& in) {
  KeyValues out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.size() > 2 && key.starts_with("--")) key.erase(0, 2);
    if (key.empty()) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

KeyValues read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  return parse_config(in);
}

std::string config_fingerprint(const KeyValues& canonical) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& [k, v] : canonical) {
    mix(k);
    mix("=");
    mix(v);
    mix("\n");
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_fingerprint(const SolverConfig& cfg) {
  return config_fingerprint(config_to_key_values(cfg));
}

}  // namespace wenlr
