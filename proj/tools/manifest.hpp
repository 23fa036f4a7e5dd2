#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace aray::cli {

/// Wall-clock scope that writes run_manifest.json on success. The manifest
/// records everything needed to reproduce the run's data artifacts.
class ManifestScope {
  public:
    ManifestScope(std::string command, std::filesystem::path out_dir)
        : command_(std::move(command)), out_dir_(std::move(out_dir)),
          start_(std::chrono::steady_clock::now()) {}

    nlohmann::json& config() { return config_; }
    void add_input(const std::filesystem::path& p) { inputs_.push_back(p.string()); }
    void add_output(const std::filesystem::path& p) { outputs_.push_back(p.string()); }
    void set_seed(std::uint64_t seed) { seed_ = seed; }

    void write();

  private:
    std::string command_;
    std::filesystem::path out_dir_;
    std::chrono::steady_clock::time_point start_;
    nlohmann::json config_;
    std::vector<std::string> inputs_;
    std::vector<std::string> outputs_;
    std::uint64_t seed_ = 0;
};

}  // namespace aray::cli
