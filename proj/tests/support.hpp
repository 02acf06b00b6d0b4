#pragma once

// Shared helpers for the test binaries: running the CLI as a subprocess and
// capturing its streams, plus small file utilities.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#ifdef __unix__
#include <sys/wait.h>
#include <unistd.h>
#endif

#ifndef BSR_CLI_PATH
#error "BSR_CLI_PATH must point at the built CLI binary"
#endif

namespace testsupport {

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << text;
}

inline std::string temp_path(const std::string& tag) {
    static int counter = 0;
    const auto dir = std::filesystem::temp_directory_path();
    return (dir / ("bsr_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) +
                   "_" + tag))
        .string();
}

// Runs the CLI with the given argument string; returns the process exit code
// and optionally captures stdout/stderr.
inline int run_cli(const std::string& args, std::string* out = nullptr,
                   std::string* err = nullptr) {
    const std::string out_path = temp_path("stdout");
    const std::string err_path = temp_path("stderr");
    const std::string cmd =
        std::string(BSR_CLI_PATH) + " " + args + " > " + out_path + " 2> " + err_path;
    const int status = std::system(cmd.c_str());
    if (out != nullptr) *out = slurp(out_path);
    if (err != nullptr) *err = slurp(err_path);
    std::filesystem::remove(out_path);
    std::filesystem::remove(err_path);
    if (status < 0) return -1;
#ifdef WEXITSTATUS
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#else
    return status;
#endif
}

}  // namespace testsupport
