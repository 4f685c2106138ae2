#include "practice/api_error.h"

namespace practice {

std::string_view toString(ApiErrorCode code) {
  switch (code) {
    case ApiErrorCode::NotFound: return "notFound";
    case ApiErrorCode::BadRequest: return "badRequest";
    case ApiErrorCode::Conflict: return "conflict";
    case ApiErrorCode::ParseFailure: return "parseFailure";
    case ApiErrorCode::Internal: return "internal";
  }
  return "internal";
}

int httpStatus(ApiErrorCode code) {
  switch (code) {
    case ApiErrorCode::NotFound: return 404;
    case ApiErrorCode::BadRequest: return 400;
    case ApiErrorCode::Conflict: return 409;
    case ApiErrorCode::ParseFailure: return 422;
    case ApiErrorCode::Internal: return 500;
  }
  return 500;
}

std::string ApiError::toJson() const {
  nlohmann::json err = {{"code", std::string(toString(code_))}, {"message", what()}};
  if (!detail_.is_null()) err["detail"] = detail_;
  return nlohmann::json{{"error", err}}.dump();
}

}  // namespace practice
