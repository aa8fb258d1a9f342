#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <sys/types.h>

namespace stainbench {

/// Child process with piped stdin/stdout; stderr is inherited.
class Subprocess {
public:
    /// Starts argv[0] (PATH lookup applies). Throws Error if the program cannot be executed.
    static Subprocess spawn(const std::vector<std::string>& argv);

    Subprocess(Subprocess&& other) noexcept;
    Subprocess& operator=(Subprocess&& other) noexcept;
    Subprocess(const Subprocess&) = delete;
    Subprocess& operator=(const Subprocess&) = delete;
    ~Subprocess();

    /// Writes the whole buffer to the child's stdin. Throws Error if the child has gone away.
    void write(std::string_view data);

    /// Next '\n'-terminated line without the terminator. Returns nullopt at end
    /// of stream; throws TimeoutError when nothing complete arrives in time.
    std::optional<std::string> read_line(std::chrono::milliseconds timeout);

    void close_stdin() noexcept;

    /// Closes stdin, waits up to `grace` for exit, then kills. Returns the raw wait status, if reaped.
    std::optional<int> shutdown(std::chrono::milliseconds grace = std::chrono::milliseconds(2000)) noexcept;

    [[nodiscard]] pid_t pid() const noexcept { return pid_; }
    [[nodiscard]] bool running() const noexcept { return pid_ > 0; }

private:
    Subprocess(pid_t pid, int in_fd, int out_fd) : pid_(pid), stdin_fd_(in_fd), stdout_fd_(out_fd) {}

    pid_t pid_ = -1;
    int stdin_fd_ = -1;
    int stdout_fd_ = -1;
    std::string buffer_;
    bool eof_ = false;
};

} // namespace stainbench
