#include "manifest.hpp"

#include "aray/io.hpp"
#include "aray/parallel.hpp"
#include "aray/version.hpp"

namespace aray::cli {

void ManifestScope::write() {
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start_)
                             .count();
    nlohmann::json root;
    root["command"] = command_;
    root["version"] = kVersion;
    root["seed"] = seed_;
    root["config"] = config_;
    root["inputs"] = inputs_;
    root["outputs"] = outputs_;
    root["duration_ms"] = elapsed;
    root["threads"] = thread_cap();
    const std::filesystem::path dir = out_dir_.empty() ? "." : out_dir_;
    std::filesystem::create_directories(dir);
    write_file_atomic(dir / "run_manifest.json", root.dump(2) + "\n");
}

}  // namespace aray::cli
