#pragma once

// The `scarlab` command line: subcommand dispatch, CSV emission and run
// manifests. Kept as a library so tests can drive it in-process.

#include <string>
#include <vector>

namespace scarlab::cli {

// Exit codes: 0 ok, 2 bad input, 3 numerical failure or failed reproduction.
int run(const std::vector<std::string>& args);  // args without the program name
int run(int argc, const char* const* argv);

std::string format_double(double v);  // %.12e
std::string sha256_file(const std::string& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // Index of a header column; ValidationError when missing.
  std::size_t column(const std::string& name) const;
};
CsvTable read_csv(const std::string& path);

}  // namespace scarlab::cli
