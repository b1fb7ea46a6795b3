#ifndef INGRAPE_ERRORS_HPP
#define INGRAPE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ingrape {

enum class ErrorCode {
    DimensionMismatch,
    DomainInvalid,   // value outside its mathematical domain (negative rate, n < 0, ...)
    PhysicsInvalid,  // violates a physical invariant (non-Hermitian, trace != 1, ...)
    SchemaInvalid,   // configuration document structure is wrong
    SyntaxInvalid,   // configuration document is not valid JSON
    NumericFailure,  // non-finite values encountered
    IoFailure,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace ingrape

#endif
