#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace pka {

// Owning POSIX file descriptor.
class UniqueFd {
public:
    UniqueFd() = default;
    explicit UniqueFd(int fd) noexcept : fd_(fd) {}
    UniqueFd(UniqueFd&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
    UniqueFd& operator=(UniqueFd&& o) noexcept;
    UniqueFd(const UniqueFd&) = delete;
    UniqueFd& operator=(const UniqueFd&) = delete;
    ~UniqueFd();

    [[nodiscard]] int get() const noexcept { return fd_; }
    [[nodiscard]] bool valid() const noexcept { return fd_ >= 0; }
    void reset() noexcept;

private:
    int fd_ = -1;
};

UniqueFd open_for_reading(const std::filesystem::path& path);

// Buffered newline splitter over a file or stream socket. A trailing "\r" is
// stripped from each line.
class LineReader {
public:
    // With `require_terminator`, a final fragment without '\n' is dropped and
    // the input is flagged truncated (stream sockets end every record with a
    // newline). Otherwise the fragment is returned as a last line.
    explicit LineReader(int fd, bool require_terminator = false)
        : fd_(fd), require_terminator_(require_terminator) {}

    bool next(std::string& line);

    // Set when the input ended by a read error or an unterminated fragment.
    [[nodiscard]] bool truncated() const noexcept { return truncated_; }
    [[nodiscard]] std::size_t lines_read() const noexcept { return lines_; }

private:
    bool fill();

    int fd_;
    bool require_terminator_;
    bool eof_ = false;
    bool truncated_ = false;
    std::size_t lines_ = 0;
    std::vector<char> buf_ = std::vector<char>(1 << 16);
    std::size_t begin_ = 0;
    std::size_t end_ = 0;
    std::string pending_;
};

}  // namespace pka
