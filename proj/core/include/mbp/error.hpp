#pragma once

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>

namespace mbp {

// Structured failure carrying a stable code and an optional JSON payload.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message, nlohmann::json payload = {})
      : std::runtime_error(message), code_(std::move(code)), payload_(std::move(payload)) {}

  const std::string& code() const { return code_; }
  const nlohmann::json& payload() const { return payload_; }

 private:
  std::string code_;
  nlohmann::json payload_;
};

}  // namespace mbp
