#pragma once

#include <cassert>
#include <string>
#include <utility>
#include <variant>

namespace aft::util {

// Error type for Result when the success type is itself a string.
struct Error {
  std::string message;
};

// Minimal value-or-error carrier. Parse and classify paths in this codebase
// are total functions; errors travel as values, not exceptions.
template <typename T, typename E>
class Result {
public:
  Result(T value) : v_(std::in_place_index<0>, std::move(value)) {}
  Result(E error) : v_(std::in_place_index<1>, std::move(error)) {}

  bool ok() const { return v_.index() == 0; }
  explicit operator bool() const { return ok(); }

  T& value() {
    assert(ok());
    return std::get<0>(v_);
  }
  const T& value() const {
    assert(ok());
    return std::get<0>(v_);
  }
  E& error() {
    assert(!ok());
    return std::get<1>(v_);
  }
  const E& error() const {
    assert(!ok());
    return std::get<1>(v_);
  }

  T value_or(T fallback) const {
    return ok() ? std::get<0>(v_) : std::move(fallback);
  }

private:
  std::variant<T, E> v_;
};

}  // namespace aft::util
