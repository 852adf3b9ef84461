#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tvspec::cli {

/// SHA-256 of a file's bytes as lowercase hex.
std::string sha256_file(const std::string& path);

/// Provenance record written as manifest.json next to every output.
class RunManifest {
public:
  RunManifest(std::string command, std::vector<std::string> args);

  void add_input(const std::string& path);
  void add_output(const std::string& path);
  void set_seed(std::uint64_t seed) { seed_ = seed; has_seed_ = true; }
  void set_config(std::string text) { config_ = std::move(text); }
  void add_iteration_seconds(double s) { iteration_seconds_.push_back(s); }

  /// Writes <dir>/manifest.json.
  void write(const std::string& dir) const;

private:
  std::string command_;
  std::vector<std::string> args_;
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<std::string> outputs_;
  std::uint64_t seed_ = 0;
  bool has_seed_ = false;
  std::string config_;
  std::vector<double> iteration_seconds_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace tvspec::cli
