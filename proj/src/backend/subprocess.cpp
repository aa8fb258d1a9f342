#include "stainbench/backend/subprocess.hpp"

#include "stainbench/error.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <mutex>
#include <thread>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace stainbench {

namespace {

void ignore_sigpipe()
{
    static std::once_flag once;
    std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

void close_fd(int& fd) noexcept
{
    if (fd >= 0) {
        ::close(fd);
        fd = -1;
    }
}

std::string errno_text(int err) { return std::strerror(err); }

} // namespace

Subprocess Subprocess::spawn(const std::vector<std::string>& argv)
{
    if (argv.empty()) {
        throw InvalidArgument("cannot spawn an empty command");
    }
    ignore_sigpipe();

    int to_child[2];
    int from_child[2];
    int exec_status[2];
    if (::pipe2(to_child, O_CLOEXEC) != 0) {
        throw Error("pipe failed: " + errno_text(errno));
    }
    if (::pipe2(from_child, O_CLOEXEC) != 0) {
        ::close(to_child[0]);
        ::close(to_child[1]);
        throw Error("pipe failed: " + errno_text(errno));
    }
    if (::pipe2(exec_status, O_CLOEXEC) != 0) {
        for (const int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) {
            ::close(fd);
        }
        throw Error("pipe failed: " + errno_text(errno));
    }

    std::vector<char*> args;
    args.reserve(argv.size() + 1);
    for (const auto& a : argv) {
        args.push_back(const_cast<char*>(a.c_str()));
    }
    args.push_back(nullptr);

    const pid_t pid = ::fork();
    if (pid < 0) {
        const int err = errno;
        for (const int fd : {to_child[0], to_child[1], from_child[0], from_child[1], exec_status[0], exec_status[1]}) {
            ::close(fd);
        }
        throw Error("fork failed: " + errno_text(err));
    }
    if (pid == 0) {
        // Child: only async-signal-safe calls until exec.
        ::dup2(to_child[0], STDIN_FILENO);
        ::dup2(from_child[1], STDOUT_FILENO);
        ::signal(SIGPIPE, SIG_DFL);
        ::execvp(args[0], args.data());
        const int err = errno;
        [[maybe_unused]] const auto n = ::write(exec_status[1], &err, sizeof err);
        ::_exit(127);
    }

    ::close(to_child[0]);
    ::close(from_child[1]);
    ::close(exec_status[1]);

    // The status pipe closes on successful exec (CLOEXEC) or carries errno.
    int child_errno = 0;
    ssize_t n;
    do {
        n = ::read(exec_status[0], &child_errno, sizeof child_errno);
    } while (n < 0 && errno == EINTR);
    ::close(exec_status[0]);
    if (n == static_cast<ssize_t>(sizeof child_errno)) {
        ::close(to_child[1]);
        ::close(from_child[0]);
        ::waitpid(pid, nullptr, 0);
        throw Error("cannot execute '" + argv.front() + "': " + errno_text(child_errno));
    }
    return Subprocess(pid, to_child[1], from_child[0]);
}

Subprocess::Subprocess(Subprocess&& other) noexcept
    : pid_(other.pid_), stdin_fd_(other.stdin_fd_), stdout_fd_(other.stdout_fd_),
      buffer_(std::move(other.buffer_)), eof_(other.eof_)
{
    other.pid_ = -1;
    other.stdin_fd_ = -1;
    other.stdout_fd_ = -1;
}

Subprocess& Subprocess::operator=(Subprocess&& other) noexcept
{
    if (this != &other) {
        shutdown();
        pid_ = other.pid_;
        stdin_fd_ = other.stdin_fd_;
        stdout_fd_ = other.stdout_fd_;
        buffer_ = std::move(other.buffer_);
        eof_ = other.eof_;
        other.pid_ = -1;
        other.stdin_fd_ = -1;
        other.stdout_fd_ = -1;
    }
    return *this;
}

Subprocess::~Subprocess() { shutdown(); }

void Subprocess::write(std::string_view data)
{
    while (!data.empty()) {
        if (stdin_fd_ < 0) {
            throw Error("backend stdin is closed");
        }
        const ssize_t n = ::write(stdin_fd_, data.data(), data.size());
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw Error("write to backend failed: " + errno_text(errno));
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
}

std::optional<std::string> Subprocess::read_line(std::chrono::milliseconds timeout)
{
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
        if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return line;
        }
        if (eof_ || stdout_fd_ < 0) {
            return std::nullopt;
        }
        const auto remaining =
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (remaining.count() <= 0) {
            throw TimeoutError("backend did not answer within " + std::to_string(timeout.count()) + " ms");
        }
        pollfd pfd{stdout_fd_, POLLIN, 0};
        const int ready = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
        if (ready < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw Error("poll failed: " + errno_text(errno));
        }
        if (ready == 0) {
            continue; // deadline check at the top of the loop
        }
        char chunk[65536];
        const ssize_t n = ::read(stdout_fd_, chunk, sizeof chunk);
        if (n < 0) {
            if (errno == EINTR || errno == EAGAIN) {
                continue;
            }
            throw Error("read from backend failed: " + errno_text(errno));
        }
        if (n == 0) {
            eof_ = true;
        } else {
            buffer_.append(chunk, static_cast<std::size_t>(n));
        }
    }
}

void Subprocess::close_stdin() noexcept { close_fd(stdin_fd_); }

std::optional<int> Subprocess::shutdown(std::chrono::milliseconds grace) noexcept
{
    close_fd(stdin_fd_);
    std::optional<int> status;
    if (pid_ > 0) {
        const auto deadline = std::chrono::steady_clock::now() + grace;
        int raw = 0;
        for (;;) {
            const pid_t r = ::waitpid(pid_, &raw, WNOHANG);
            if (r == pid_ || (r < 0 && errno != EINTR)) {
                break;
            }
            if (std::chrono::steady_clock::now() >= deadline) {
                ::kill(pid_, SIGKILL);
                ::waitpid(pid_, &raw, 0);
                break;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(5));
        }
        status = raw;
        pid_ = -1;
    }
    close_fd(stdout_fd_);
    return status;
}

} // namespace stainbench
