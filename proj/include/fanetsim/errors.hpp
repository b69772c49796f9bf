#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

namespace fanetsim {

/// File system failure; the message carries the offending path.
class IoError : public std::runtime_error {
public:
  IoError(const std::filesystem::path& path, const std::string& what)
      : std::runtime_error(path.string() + ": " + what), path_(path)
  {
  }
  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
};

}  // namespace fanetsim
