#include "abctok/pipeline.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "abctok/errors.hpp"

namespace abctok {

namespace fs = std::filesystem;

std::vector<fs::path> expand_inputs(const std::vector<std::string>& positionals,
                                    const std::string& manifest_path) {
  std::vector<fs::path> files;
  auto add = [&](const fs::path& path) {
    if (fs::is_directory(path)) {
      std::vector<fs::path> in_dir;
      for (const auto& entry : fs::directory_iterator(path))
        if (entry.is_regular_file() && entry.path().extension() == ".abc")
          in_dir.push_back(entry.path());
      std::sort(in_dir.begin(), in_dir.end());
      files.insert(files.end(), in_dir.begin(), in_dir.end());
    } else {
      files.push_back(path);
    }
  };
  for (const std::string& positional : positionals) add(positional);
  if (!manifest_path.empty()) {
    std::ifstream manifest(manifest_path);
    if (!manifest) throw Error("cannot read manifest " + manifest_path);
    std::string line;
    while (std::getline(manifest, line)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
        line.pop_back();
      if (!line.empty() && line.front() != '#') add(line);
    }
  }
  return files;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("ABCTOK_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
}

std::vector<FileResult> run_over_files(
    const std::vector<fs::path>& files, int threads,
    const std::function<std::string(const fs::path&, const std::string&)>&
        fn) {
  std::vector<FileResult> results(files.size());
  #pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(files.size()); ++i) {
    FileResult& result = results[i];
    result.path = files[i];
    try {
      result.output = fn(files[i], read_file(files[i]));
    } catch (const std::exception& e) {
      result.error = e.what();
    }
  }
  return results;
}

}  // namespace abctok
