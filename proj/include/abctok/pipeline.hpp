// Batch plumbing for the CLI: manifest/directory expansion, byte-faithful
// file I/O, and an ordered parallel map over files. Output order always
// follows input order regardless of scheduling.
#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace abctok {

// Inputs in deterministic order: positional paths first (directories expand
// to their sorted *.abc files), then the manifest's newline-separated paths.
std::vector<std::filesystem::path> expand_inputs(
    const std::vector<std::string>& positionals,
    const std::string& manifest_path = {});

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Worker count: explicit flag if > 0, else the ABCTOK_THREADS environment
// variable, else the OpenMP default.
int resolve_threads(int flag_value);

struct FileResult {
  std::filesystem::path path;
  std::string output;
  std::string error;  // empty on success
  bool ok() const { return error.empty(); }
};

// Apply fn to every file's contents in parallel; results land at the
// input's index. Exceptions become per-file errors.
std::vector<FileResult> run_over_files(
    const std::vector<std::filesystem::path>& files, int threads,
    const std::function<std::string(const std::filesystem::path&,
                                    const std::string&)>& fn);

}  // namespace abctok
