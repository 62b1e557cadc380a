#include <chrono>
#include <stdexcept>
#include <string>
#include <thread>

#include "pka/net.hpp"
#include "pka/stream.hpp"

namespace pka {

std::int64_t serve_feed(const std::filesystem::path& source, int fd, const FeedOptions& options) {
    if (options.rate && !(*options.rate > 0.0)) throw std::invalid_argument("rate must be > 0");
    const UniqueFd in = open_for_reading(source);
    LineReader lines(in.get());
    std::string line;
    if (!lines.next(line)) return 0;  // header only

    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    std::int64_t sent = 0;
    std::string out;
    while (lines.next(line)) {
        if (options.rate) {
            const auto due = start + std::chrono::duration_cast<Clock::duration>(
                                         std::chrono::duration<double>(
                                             static_cast<double>(sent) / *options.rate));
            std::this_thread::sleep_until(due);
            line.push_back('\n');
            send_all(fd, line);
        } else {
            out.append(line).push_back('\n');
            if (out.size() >= (1 << 16)) {
                send_all(fd, out);
                out.clear();
            }
        }
        ++sent;
    }
    if (!out.empty()) send_all(fd, out);
    return sent;
}

}  // namespace pka
