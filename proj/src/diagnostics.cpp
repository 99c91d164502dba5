#include "varex/diagnostics.hpp"

#include <chrono>
#include <ctime>
#include <iostream>

#include "varex/errors.hpp"

namespace varex {

LogLevel parse_log_level(const std::string &text) {
    if (text == "debug")
        return LogLevel::Debug;
    if (text == "info")
        return LogLevel::Info;
    if (text == "warning")
        return LogLevel::Warning;
    if (text == "error")
        return LogLevel::Error;
    throw ConfigInvalid("unknown log.level: " + text);
}

namespace {
const char *level_name(LogLevel l) {
    switch (l) {
    case LogLevel::Debug:
        return "DEBUG";
    case LogLevel::Info:
        return "INFO";
    case LogLevel::Warning:
        return "WARNING";
    case LogLevel::Error:
        return "ERROR";
    }
    return "?";
}

std::string utc_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}
} // namespace

Logger &Logger::instance() {
    static Logger logger;
    return logger;
}

void Logger::configure(LogLevel level, bool console, const std::string &file_path) {
    std::lock_guard lock(mutex_);
    level_ = level;
    console_ = console;
    file_.close();
    file_.clear();
    if (!file_path.empty())
        file_.open(file_path, std::ios::app);
}

void Logger::log(LogLevel level, const std::string &stage, const std::string &message) {
    std::lock_guard lock(mutex_);
    if (static_cast<int>(level) < static_cast<int>(level_))
        return;
    std::string line = std::string(level_name(level)) + " " + utc_timestamp() + " [" + stage +
                       "] " + message;
    if (console_)
        std::cerr << line << '\n';
    if (file_.is_open())
        file_ << line << '\n' << std::flush;
}

void Diagnostics::warn(const std::string &stage, const std::string &message) {
    Logger::instance().warning(stage, message);
    std::lock_guard lock(mutex_);
    warnings_.push_back("[" + stage + "] " + message);
}

std::vector<std::string> Diagnostics::warnings() const {
    std::lock_guard lock(mutex_);
    return warnings_;
}

bool Diagnostics::empty() const {
    std::lock_guard lock(mutex_);
    return warnings_.empty();
}

} // namespace varex
