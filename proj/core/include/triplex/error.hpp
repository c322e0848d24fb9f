#pragma once

#include <stdexcept>
#include <string>

namespace triplex {

// Machine-readable failure categories. The CLI prints them as
// "error[<category>]: message" and exits nonzero.
enum class ErrorCategory {
  Range,        // argument outside its documented domain
  Congruence,   // a divisibility / residue precondition failed
  Ingredient,   // an ingredient design or resolution failed verification
  Validation,   // a construction spec violated a structural rule
  Overflow,     // 64-bit checked arithmetic overflowed
  Io,           // file read/write or parse failure
  Internal,     // engine self-check failed (always a bug)
};

const char* to_string(ErrorCategory c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory cat, const std::string& msg)
      : std::runtime_error(msg), category_(cat) {}
  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory cat, const std::string& msg) {
  throw Error(cat, msg);
}

}  // namespace triplex
