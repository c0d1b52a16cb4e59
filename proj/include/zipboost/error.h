#ifndef ZIPBOOST_ERROR_H_
#define ZIPBOOST_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zipboost {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Schema or column-layout problems: missing columns, bad config keys.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A single data row failed validation. `row()` is 1-based, header excluded.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& message, std::size_t row)
      : Error("row " + std::to_string(row) + ": " + message), row_(row) {}

  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

/// Model files that cannot be read, or models applied to incompatible data.
class ModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace zipboost

#endif  // ZIPBOOST_ERROR_H_
