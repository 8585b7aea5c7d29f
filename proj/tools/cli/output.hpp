// Copyright 2026 The vtcamo Authors
#ifndef VTCAMO_CLI_OUTPUT_HPP_
#define VTCAMO_CLI_OUTPUT_HPP_

#include <string>
#include <utility>
#include <vector>

namespace vtcamo::cli {

// Throws kIo when the file cannot be read.
std::string read_text(const std::string& path);

// Files produced by one command. commit() writes each to a temporary sibling
// and only renames them into place once all writes succeeded, so a failure
// never leaves a partial output behind.
class PendingFiles {
 public:
  void add(std::string path, std::string contents) {
    files_.emplace_back(std::move(path), std::move(contents));
  }
  void commit();

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace vtcamo::cli

#endif  // VTCAMO_CLI_OUTPUT_HPP_
