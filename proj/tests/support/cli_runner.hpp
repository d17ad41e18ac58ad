#pragma once

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "support/fixtures.hpp"

namespace cli_runner {

struct Result {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') q += "'\\''";
    else q += c;
  }
  return q + "'";
}

// Runs the CLI binary with `args`, capturing stdout and stderr.
inline Result run(const std::vector<std::string>& args, const std::filesystem::path& scratch) {
  std::string cmd = quote(AESTHREC_CLI_PATH);
  for (const auto& a : args) cmd += " " + quote(a);
  const auto out_path = scratch / "cli_stdout.txt";
  const auto err_path = scratch / "cli_stderr.txt";
  cmd += " >" + quote(out_path.string()) + " 2>" + quote(err_path.string());
  const int status = std::system(cmd.c_str());
  Result r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = fixtures::read_file(out_path);
  r.err = fixtures::read_file(err_path);
  return r;
}

}  // namespace cli_runner
