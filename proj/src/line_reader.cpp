#include "pka/line_reader.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>

namespace pka {

UniqueFd& UniqueFd::operator=(UniqueFd&& o) noexcept {
    if (this != &o) {
        reset();
        fd_ = std::exchange(o.fd_, -1);
    }
    return *this;
}

UniqueFd::~UniqueFd() { reset(); }

void UniqueFd::reset() noexcept {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
}

UniqueFd open_for_reading(const std::filesystem::path& path) {
    const int fd = ::open(path.c_str(), O_RDONLY | O_CLOEXEC);
    if (fd < 0) {
        throw std::runtime_error("cannot open " + path.string() + ": " + std::strerror(errno));
    }
    return UniqueFd(fd);
}

bool LineReader::fill() {
    if (eof_) return false;
    for (;;) {
        const ssize_t got = ::read(fd_, buf_.data(), buf_.size());
        if (got > 0) {
            begin_ = 0;
            end_ = static_cast<std::size_t>(got);
            return true;
        }
        if (got == 0) {
            eof_ = true;
            return false;
        }
        if (errno == EINTR) continue;
        eof_ = true;
        truncated_ = true;
        return false;
    }
}

bool LineReader::next(std::string& line) {
    for (;;) {
        if (begin_ == end_ && !fill()) {
            if (pending_.empty()) return false;
            if (require_terminator_) {
                truncated_ = true;
                pending_.clear();
                return false;
            }
            line = std::move(pending_);
            pending_.clear();
            if (!line.empty() && line.back() == '\r') line.pop_back();
            ++lines_;
            return true;
        }
        const char* start = buf_.data() + begin_;
        const void* nl = std::memchr(start, '\n', end_ - begin_);
        if (nl == nullptr) {
            pending_.append(start, end_ - begin_);
            begin_ = end_;
            continue;
        }
        const auto len = static_cast<std::size_t>(static_cast<const char*>(nl) - start);
        pending_.append(start, len);
        begin_ += len + 1;
        line = std::move(pending_);
        pending_.clear();
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++lines_;
        return true;
    }
}

}  // namespace pka
