#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace practice {

enum class ApiErrorCode { NotFound, BadRequest, Conflict, ParseFailure, Internal };

std::string_view toString(ApiErrorCode code);
int httpStatus(ApiErrorCode code);

class ApiError : public std::runtime_error {
 public:
  ApiError(ApiErrorCode code, const std::string& message, nlohmann::json detail = nullptr)
      : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

  ApiErrorCode code() const noexcept { return code_; }
  const nlohmann::json& detail() const noexcept { return detail_; }

  /// {"error": {"code", "message", "detail"?}}
  std::string toJson() const;

 private:
  ApiErrorCode code_;
  nlohmann::json detail_;
};

}  // namespace practice
