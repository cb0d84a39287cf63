#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace folicheck {

/// Base for all library errors. `kind` is a stable machine-readable label.
struct Error : std::runtime_error {
    std::string kind;
    Error(std::string k, const std::string& msg) : std::runtime_error(msg), kind(std::move(k)) {}
};

struct SyntaxError : Error {
    std::size_t offset;
    std::vector<std::string> expected;
    SyntaxError(std::size_t off, std::vector<std::string> exp, const std::string& msg)
        : Error("SyntaxError", msg), offset(off), expected(std::move(exp)) {}
};

struct UnknownFunction : Error {
    std::size_t offset;
    std::string name;
    UnknownFunction(std::size_t off, std::string fn)
        : Error("UnknownFunction", "unknown function '" + fn + "'"), offset(off), name(std::move(fn)) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error("DomainError", msg) {}
};

struct ValidationError : Error {
    std::string field;
    ValidationError(std::string f, const std::string& msg)
        : Error("ValidationError", msg), field(std::move(f)) {}
};

struct BadParams : Error {
    explicit BadParams(const std::string& msg) : Error("BadParams", msg) {}
};

struct FrameError : Error {
    explicit FrameError(const std::string& msg) : Error("FrameError", msg) {}
};

struct DegenerateSection : Error {
    explicit DegenerateSection(const std::string& msg) : Error("DegenerateSection", msg) {}
};

struct SuspectedDegenerate : Error {
    explicit SuspectedDegenerate(const std::string& msg) : Error("SuspectedDegenerate", msg) {}
};

struct GenericityFailed : Error {
    int attempts;
    std::string best_diag;
    GenericityFailed(int tries, std::string diag)
        : Error("GenericityFailed", "no generic perturbation found after " + std::to_string(tries) + " attempts"),
          attempts(tries), best_diag(std::move(diag)) {}
};

struct OpenChainError : Error {
    explicit OpenChainError(const std::string& msg) : Error("OpenChainError", msg) {}
};

struct NonGenericLoopPlacement : Error {
    explicit NonGenericLoopPlacement(const std::string& msg) : Error("NonGenericLoopPlacement", msg) {}
};

struct NoRegularValue : Error {
    explicit NoRegularValue(const std::string& msg) : Error("NoRegularValue", msg) {}
};

struct NotTransverse : Error {
    explicit NotTransverse(const std::string& msg) : Error("NotTransverse", msg) {}
};

struct ParseError : Error {
    std::size_t line;
    ParseError(std::size_t ln, const std::string& msg)
        : Error("ParseError", "line " + std::to_string(ln) + ": " + msg), line(ln) {}
};

struct UnknownScenario : Error {
    explicit UnknownScenario(const std::string& name)
        : Error("UnknownScenario", "unknown scenario '" + name + "'") {}
};

}  // namespace folicheck
