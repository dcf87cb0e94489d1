#pragma once

#include <stdexcept>
#include <string>

namespace netrisk {

// Error taxonomy mirrors the CLI exit codes: config errors (2),
// instability rejections (3), numerical failures (4).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

class instability_error : public std::runtime_error {
 public:
  explicit instability_error(const std::string& msg) : std::runtime_error(msg) {}
};

class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace netrisk
