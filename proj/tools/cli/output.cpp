// Copyright 2026 The vtcamo Authors
#include "cli/output.hpp"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include "vtcamo/error.hpp"

namespace vtcamo::cli {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::kIo, "error while reading '" + path + "'");
  return ss.str();
}

void PendingFiles::commit() {
  namespace fs = std::filesystem;
  std::vector<fs::path> temps;
  auto discard = [&] {
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
  };
  for (const auto& [path, contents] : files_) {
    fs::path target(path);
    fs::path temp = target;
    temp += ".tmp." + std::to_string(::getpid());
    temps.push_back(temp);
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    out << contents;
    out.close();
    if (!out) {
      discard();
      throw Error(ErrorKind::kIo, "cannot write '" + path + "'");
    }
  }
  for (std::size_t i = 0; i < files_.size(); ++i) {
    std::error_code ec;
    fs::rename(temps[i], files_[i].first, ec);
    if (ec) {
      discard();
      throw Error(ErrorKind::kIo, "cannot move output into '" + files_[i].first + "': " + ec.message());
    }
  }
  files_.clear();
}

}  // namespace vtcamo::cli
