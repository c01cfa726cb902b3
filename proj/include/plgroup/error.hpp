#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace plgroup {

// Domain error carrying a stable code string. Extra fields are integer-valued
// details that the CLI copies into its error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  Error& with(std::string key, std::string integer_value) {
    fields_.emplace_back(std::move(key), std::move(integer_value));
    return *this;
  }

  const std::string& code() const { return code_; }
  const std::vector<std::pair<std::string, std::string>>& fields() const { return fields_; }

 private:
  std::string code_;
  std::vector<std::pair<std::string, std::string>> fields_;
};

}  // namespace plgroup
