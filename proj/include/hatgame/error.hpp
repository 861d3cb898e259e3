#ifndef HATGAME_ERROR_HPP
#define HATGAME_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hatgame {

enum class ErrorCode {
    // model validation
    SelfLoop,
    UnknownEndpoint,
    NonPositiveHatness,
    DomainMismatch,
    DuplicateVertex,
    DuplicateEdge,
    InvalidIdentifier,
    EmptySubset,
    UnknownVertex,
    Overflow,
    // solver / strategies
    TooLarge,
    InvalidLimits,
    IncompleteStrategy,
    GuessOutOfRange,
    // classifiers
    FoldDisagreement,
    NotACycle,
    NotAPath,
    NoHatness5Vertex,
    PreconditionViolated,
    Disconnected,
    NotCactus,
    // constructors
    SumBelowOne,
    CertificateInvalid,
    HatnessIncrease,
    SynthesisCapExceeded,
    // text formats
    SyntaxError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// An error raised while reading a text document; line numbers are 1-based.
class ParseError : public Error {
public:
    ParseError(ErrorCode code, std::size_t line, const std::string& message)
        : Error(code, "line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace hatgame

#endif
