#include "run_config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hvqm::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double x = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(x)) {
      throw std::invalid_argument("trailing characters");
    }
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid numeric value for '" + key +
                                "': " + value);
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  return parts;
}

// key sets per command; `command` itself is stored separately
const std::map<std::string, std::map<std::string, std::string>>& schemas() {
  static const std::map<std::string, std::map<std::string, std::string>> s = {
      {"profile",
       {{"hbar", "1"},
        {"sigma", "0.2"},
        {"l", "3"},
        {"family", "lognormal"},
        {"n_grid", "512"},
        {"seed", "0"},
        {"out", "profile.csv"}}},
      {"moments",
       {{"hbar", "1"},
        {"sigma", "0.2"},
        {"family", "lognormal"},
        {"levels", "1,2"},
        {"amps", ""},
        {"weights", "0.25,0.75"},
        {"seed", "0"},
        {"out", "moments.csv"}}},
      {"born",
       {{"hbar", "1"},
        {"sigma", "0.2"},
        {"family", "lognormal"},
        {"levels", "1,2"},
        {"amps", ""},
        {"weights", "0.25,0.75"},
        {"n_grid", "512"},
        {"seed", "0"},
        {"out", "born.csv"}}},
      {"simulate",
       {{"hbar", "1"},
        {"sigma", "0.2"},
        {"family", "lognormal"},
        {"levels", "1,2"},
        {"amps", ""},
        {"weights", "0.25,0.75"},
        {"g", "1"},
        {"t", "1"},
        {"n_events", "100000"},
        {"seed", "0"},
        {"workers", "1"},
        {"out", "events.csv"}}},
      {"sg",
       {{"hbar", "1"},
        {"lambda", "1.2"},
        {"sigma0", "1"},
        {"mu", "0.5"},
        {"T", "1"},
        {"m_a", "1"},
        {"l", "2"},
        {"t", "1.5"},
        {"n_grid", "4096"},
        {"dt", "0"},
        {"dump_density", ""},
        {"seed", "0"},
        {"out", "sg.csv"}}},
      {"evolve-check",
       {{"sigma0", "1"},
        {"speed", "2"},
        {"t", "1"},
        {"n_grid", "512"},
        {"dt", "0.004"},
        {"refinements", "3"},
        {"seed", "0"},
        {"out", "evolve_check.csv"}}},
      {"limit",
       {{"hbar", "1"},
        {"sigmas", "0.3,0.1,0.03,0.01"},
        {"seed", "0"},
        {"out", "limit.csv"}}},
      {"bound",
       {{"sigma", "0.1"},
        {"delta_l", "1"},
        {"seed", "0"},
        {"out", "bound.csv"}}},
  };
  return s;
}

const std::set<std::string> kNumericKeys = {
    "hbar",   "sigma", "l",     "g",        "t",  "mu",     "T",
    "m_a",    "sigma0", "lambda", "speed",  "dt", "delta_l"};
const std::set<std::string> kIntegerKeys = {"n_grid", "n_events", "seed",
                                            "workers", "refinements"};
const std::set<std::string> kListKeys = {"levels", "weights", "sigmas"};

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

RunConfig RunConfig::defaults_for(const std::string& command) {
  const auto it = schemas().find(command);
  if (it == schemas().end()) {
    throw std::invalid_argument("unknown command: " + command);
  }
  RunConfig cfg;
  cfg.command_ = command;
  cfg.kv_ = it->second;
  return cfg;
}

std::string RunConfig::peek_command(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    if (trim(line.substr(0, eq)) == "command") return trim(line.substr(eq + 1));
  }
  throw std::invalid_argument("config file has no 'command' key: " + path);
}

void RunConfig::merge_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  " is not 'key = value': " + line);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "command") {
      if (value != command_) {
        throw std::invalid_argument("config file is for command '" + value +
                                    "', not '" + command_ + "'");
      }
      continue;
    }
    set(key, value);
  }
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (kv_.find(key) == kv_.end()) {
    throw std::invalid_argument("key '" + key + "' is not valid for command '" +
                                command_ + "'");
  }
  kv_[key] = value;
}

std::string RunConfig::get_string(const std::string& key) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) {
    throw std::invalid_argument("missing key '" + key + "'");
  }
  return it->second;
}

double RunConfig::get_double(const std::string& key) const {
  return parse_double(key, get_string(key));
}

std::uint64_t RunConfig::get_u64(const std::string& key) const {
  const std::string v = get_string(key);
  try {
    std::size_t used = 0;
    const unsigned long long x = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid integer value for '" + key +
                                "': " + v);
  }
}

std::vector<double> RunConfig::get_double_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& part : split(get_string(key), ',')) {
    if (part.empty()) continue;
    out.push_back(parse_double(key, part));
  }
  if (out.empty()) {
    throw std::invalid_argument("list key '" + key + "' is empty");
  }
  return out;
}

std::vector<std::complex<double>> RunConfig::get_amplitudes() const {
  const std::string amps = kv_.count("amps") ? kv_.at("amps") : "";
  if (!amps.empty()) {
    std::vector<std::complex<double>> out;
    for (const auto& part : split(amps, ',')) {
      const auto colon = part.find(':');
      if (colon == std::string::npos) {
        out.emplace_back(parse_double("amps", part), 0.0);
      } else {
        out.emplace_back(parse_double("amps", part.substr(0, colon)),
                         parse_double("amps", part.substr(colon + 1)));
      }
    }
    return out;
  }
  // weights are |c_k|^2; phases are irrelevant to every computed quantity
  std::vector<std::complex<double>> out;
  for (double w : get_double_list("weights")) {
    if (w < 0.0) throw std::invalid_argument("weights must be non-negative");
    out.emplace_back(std::sqrt(w), 0.0);
  }
  return out;
}

void RunConfig::canonicalize() {
  if (kv_.count("amps") && kv_.count("weights")) {
    // fold weights into canonical amplitudes, drop the convenience key
    std::string amps;
    for (const auto& c : get_amplitudes()) {
      if (!amps.empty()) amps += ',';
      amps += format_double(c.real()) + ':' + format_double(c.imag());
    }
    kv_["amps"] = amps;
    kv_.erase("weights");
  }
  for (auto& [key, value] : kv_) {
    if (kNumericKeys.count(key)) {
      value = format_double(parse_double(key, value));
    } else if (kIntegerKeys.count(key)) {
      value = std::to_string(get_u64(key));
    } else if (kListKeys.count(key)) {
      std::string rebuilt;
      for (double x : get_double_list(key)) {
        if (!rebuilt.empty()) rebuilt += ',';
        rebuilt += format_double(x);
      }
      value = rebuilt;
    } else if (key == "amps" && !value.empty()) {
      std::string rebuilt;
      for (const auto& part : split(value, ',')) {
        const auto colon = part.find(':');
        const double re = parse_double(
            "amps", colon == std::string::npos ? part : part.substr(0, colon));
        const double im = colon == std::string::npos
                              ? 0.0
                              : parse_double("amps", part.substr(colon + 1));
        if (!rebuilt.empty()) rebuilt += ',';
        rebuilt += format_double(re) + ':' + format_double(im);
      }
      value = rebuilt;
    }
  }
}

std::string RunConfig::serialize() const {
  std::string out = "command = " + command_ + "\n";
  for (const auto& [key, value] : kv_) {  // std::map: keys already sorted
    out += key + " = " + value + "\n";
  }
  return out;
}

}  // namespace hvqm::cli
