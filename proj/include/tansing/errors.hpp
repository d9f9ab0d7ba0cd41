// Exception hierarchy for the tansing library.
//
// Errors are grouped into three categories that map onto the CLI exit
// codes: domain errors (a well-formed input that the mathematics
// rejects), usage errors (bad input files or flags), and internal
// errors (broken invariants; always a bug).
#pragma once

#include <stdexcept>
#include <string>

namespace tansing {

enum class ErrorCategory { domain = 1, usage = 2, internal = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory cat, const std::string& what) : std::runtime_error(what), cat_(cat) {}
    ErrorCategory category() const noexcept { return cat_; }

private:
    ErrorCategory cat_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error(ErrorCategory::domain, w) {}
};
struct UsageError : Error {
    explicit UsageError(const std::string& w) : Error(ErrorCategory::usage, w) {}
};
struct InternalError : Error {
    explicit InternalError(const std::string& w) : Error(ErrorCategory::internal, w) {}
};

// exact-core
struct DivisionNotExact : DomainError {
    explicit DivisionNotExact(const std::string& w) : DomainError("DivisionNotExact: " + w) {}
};
struct NonzeroConstantTerm : DomainError {
    explicit NonzeroConstantTerm(const std::string& w) : DomainError("NonzeroConstantTerm: " + w) {}
};
struct OrderBudgetExceeded : InternalError {
    explicit OrderBudgetExceeded(const std::string& w) : InternalError("OrderBudgetExceeded: " + w) {}
};

// bell
struct BadArity : UsageError {
    explicit BadArity(const std::string& w) : UsageError("BadArity: " + w) {}
};

// model
struct NotTangential : DomainError {
    explicit NotTangential(const std::string& w) : DomainError("NotTangential: " + w) {}
};
struct OddMultiplicity : DomainError {
    explicit OddMultiplicity(const std::string& w) : DomainError("OddMultiplicity: " + w) {}
};
struct NotMonodromic : DomainError {
    explicit NotMonodromic(const std::string& w) : DomainError("NotMonodromic: " + w) {}
};

// lyapunov
struct DegenerateMu : DomainError {
    explicit DegenerateMu(const std::string& w) : DomainError("DegenerateMu: " + w) {}
};

// polar
struct QuadratureFailure : DomainError {
    explicit QuadratureFailure(const std::string& w) : DomainError("QuadratureFailure: " + w) {}
};
struct VanishingF : DomainError {
    explicit VanishingF(const std::string& w) : DomainError("VanishingF: " + w) {}
};

// numeric
struct NoReturn : DomainError {
    explicit NoReturn(const std::string& w) : DomainError("NoReturn: " + w) {}
};
struct DegenerateCrossing : DomainError {
    explicit DegenerateCrossing(const std::string& w) : DomainError("DegenerateCrossing: " + w) {}
};

// bifurcation
struct NoSignChange : DomainError {
    explicit NoSignChange(const std::string& w) : DomainError("NoSignChange: " + w) {}
};
struct NotMonodromicAtPoint : DomainError {
    explicit NotMonodromicAtPoint(const std::string& w) : DomainError("NotMonodromicAtPoint: " + w) {}
};

// input
struct ParseError : UsageError {
    ParseError(const std::string& w, int line, int column)
        : UsageError("parse error at line " + std::to_string(line) + ", column " +
                     std::to_string(column) + ": " + w),
          line(line), column(column) {}
    int line;
    int column;
};

} // namespace tansing
