// Runs a shell command and captures stdout, exit code and wall time.
#ifndef FMCONF_TESTS_RUN_PROCESS_HPP
#define FMCONF_TESTS_RUN_PROCESS_HPP

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

namespace fmconf::testing {

struct ProcessResult {
    int exit_code = -1;
    std::string out;
    double seconds = 0.0;

    std::vector<std::string> lines() const
    {
        std::vector<std::string> result;
        std::string current;
        for (char c : out) {
            if (c == '\n') {
                result.push_back(current);
                current.clear();
            } else {
                current += c;
            }
        }
        if (!current.empty()) result.push_back(current);
        return result;
    }
};

/// Wraps `s` in single quotes for /bin/sh.
inline std::string shell_quote(const std::string& s)
{
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    return out + "'";
}

inline ProcessResult run_process(const std::string& command)
{
    ProcessResult result;
    const auto start = std::chrono::steady_clock::now();
    FILE* pipe = popen(command.c_str(), "r");
    if (pipe == nullptr) return result;
    std::array<char, 4096> buffer{};
    std::size_t n = 0;
    while ((n = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) result.out.append(buffer.data(), n);
    const int status = pclose(pipe);
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

}  // namespace fmconf::testing

#endif  // FMCONF_TESTS_RUN_PROCESS_HPP
