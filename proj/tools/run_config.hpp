#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hvqm::cli {

std::string format_double(double x);  // %.17g, canonical for all CSV output

// Flat key -> value run configuration. Precedence: built-in defaults, then
// config-file values, then command-line flags. Every run serializes the
// fully resolved map next to its output, and a resolved config replayed
// through --config reproduces the outputs byte for byte.
class RunConfig {
 public:
  static RunConfig defaults_for(const std::string& command);
  static std::string peek_command(const std::string& path);

  const std::string& command() const { return command_; }

  void merge_file(const std::string& path);
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<std::complex<double>> get_amplitudes() const;

  // Re-formats every numeric value through parse -> %.17g and converts the
  // `weights` convenience key into canonical `amps`, so serialization is a
  // fixed point of the replay cycle.
  void canonicalize();

  std::string serialize() const;  // "key = value\n", keys sorted

 private:
  std::string command_;
  std::map<std::string, std::string> kv_;
};

}  // namespace hvqm::cli
