#pragma once

#include <fstream>
#include <mutex>
#include <string>
#include <vector>

namespace varex {

enum class LogLevel { Debug, Info, Warning, Error };

LogLevel parse_log_level(const std::string &text); // throws ConfigInvalid

/// Process-wide logger with optional console (stderr) and file sinks.
/// Lines are "LEVEL timestamp [stage] message". Thread-safe.
class Logger {
public:
    static Logger &instance();

    void configure(LogLevel level, bool console, const std::string &file_path);
    void log(LogLevel level, const std::string &stage, const std::string &message);

    void debug(const std::string &stage, const std::string &m) { log(LogLevel::Debug, stage, m); }
    void info(const std::string &stage, const std::string &m) { log(LogLevel::Info, stage, m); }
    void warning(const std::string &stage, const std::string &m) { log(LogLevel::Warning, stage, m); }
    void error(const std::string &stage, const std::string &m) { log(LogLevel::Error, stage, m); }

private:
    Logger() = default;
    std::mutex mutex_;
    LogLevel level_ = LogLevel::Warning;
    bool console_ = false;
    std::ofstream file_;
};

/// Thread-safe warning collector shared by extractors and analyses.
/// Warnings also go to the logger.
class Diagnostics {
public:
    void warn(const std::string &stage, const std::string &message);
    std::vector<std::string> warnings() const;
    bool empty() const;

private:
    mutable std::mutex mutex_;
    std::vector<std::string> warnings_;
};

} // namespace varex
