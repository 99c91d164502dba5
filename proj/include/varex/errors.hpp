#pragma once

#include <stdexcept>
#include <string>

namespace varex {

struct UnassignedVariable : std::runtime_error {
    explicit UnassignedVariable(const std::string &name)
        : std::runtime_error("variable not assigned: " + name), variable(name) {}
    std::string variable;
};

struct TooManyVariables : std::runtime_error {
    explicit TooManyVariables(std::size_t count)
        : std::runtime_error("brute-force enumeration capped at 24 variables, got " +
                             std::to_string(count)) {}
};

struct UnbalancedDirectives : std::runtime_error {
    UnbalancedDirectives(const std::string &path, int line)
        : std::runtime_error("unbalanced preprocessor directives in " + path + " at line " +
                             std::to_string(line)),
          path(path), line(line) {}
    std::string path;
    int line;
};

struct SourceTreeMissing : std::runtime_error {
    explicit SourceTreeMissing(const std::string &root)
        : std::runtime_error("source tree not found: " + root) {}
};

struct BuildTreeMissing : std::runtime_error {
    explicit BuildTreeMissing(const std::string &root)
        : std::runtime_error("build tree not found: " + root) {}
};

struct CycleDetected : std::runtime_error {
    explicit CycleDetected(const std::string &path)
        : std::runtime_error("cyclic makefile recursion at " + path) {}
};

struct MalformedHeader : std::runtime_error {
    explicit MalformedHeader(const std::string &detail)
        : std::runtime_error("malformed DIMACS header: " + detail) {}
};

struct LiteralOutOfRange : std::runtime_error {
    explicit LiteralOutOfRange(int literal)
        : std::runtime_error("DIMACS literal out of range: " + std::to_string(literal)) {}
};

struct MissingTerminator : std::runtime_error {
    MissingTerminator() : std::runtime_error("DIMACS clause missing 0 terminator") {}
};

struct MalformedRow : std::runtime_error {
    explicit MalformedRow(int line_no)
        : std::runtime_error("malformed CSV row at line " + std::to_string(line_no)) {}
};

struct FormulaSyntaxError : std::runtime_error {
    explicit FormulaSyntaxError(const std::string &detail)
        : std::runtime_error("formula syntax error: " + detail) {}
};

struct MalformedLine : std::runtime_error {
    explicit MalformedLine(int line_no)
        : std::runtime_error("malformed properties line " + std::to_string(line_no)) {}
};

struct UnknownComponent : std::runtime_error {
    explicit UnknownComponent(const std::string &name)
        : std::runtime_error("unknown pipeline component: " + name) {}
};

struct ArityMismatch : std::runtime_error {
    ArityMismatch(const std::string &name, const std::string &expected, int got)
        : std::runtime_error("component " + name + " expects " + expected + " inputs, got " +
                             std::to_string(got)) {}
};

struct DslSyntaxError : std::runtime_error {
    explicit DslSyntaxError(std::size_t pos)
        : std::runtime_error("pipeline DSL syntax error at position " + std::to_string(pos)) {}
};

struct ConfigInvalid : std::runtime_error {
    explicit ConfigInvalid(const std::string &detail)
        : std::runtime_error("invalid configuration: " + detail) {}
};

struct ExtractorTimeout : std::runtime_error {
    explicit ExtractorTimeout(const std::string &pipeline)
        : std::runtime_error("extractor timeout in pipeline: " + pipeline) {}
};

struct AnalysisFailed : std::runtime_error {
    AnalysisFailed(const std::string &name, const std::string &cause)
        : std::runtime_error("analysis " + name + " failed: " + cause) {}
};

struct CacheCorrupt : std::runtime_error {
    explicit CacheCorrupt(const std::string &path)
        : std::runtime_error("corrupt cache file: " + path) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string &path)
        : std::runtime_error("I/O error: " + path) {}
};

struct ArchiveIncomplete : std::runtime_error {
    explicit ArchiveIncomplete(const std::string &missing)
        : std::runtime_error("archive incomplete, missing: " + missing) {}
};

struct ReproductionMismatch : std::runtime_error {
    ReproductionMismatch(const std::string &file, const std::string &expected,
                         const std::string &got)
        : std::runtime_error("reproduction mismatch for " + file + ": expected " + expected +
                             ", got " + got) {}
};

} // namespace varex
