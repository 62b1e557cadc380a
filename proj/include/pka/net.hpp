#pragma once

// Minimal TCP plumbing for the record feed: newline-delimited UTF-8 text,
// connection close marks end-of-stream, no framing or acknowledgements.

#include <cstdint>
#include <string>
#include <string_view>

#include "pka/line_reader.hpp"

namespace pka {

struct Endpoint {
    std::string host;
    std::uint16_t port = 0;

    // "host:port"; the host may be a name or an IPv4/IPv6 literal
    // ("[::1]:9000").
    static Endpoint parse(std::string_view text);
    [[nodiscard]] std::string str() const;
};

class Listener {
public:
    // Port 0 binds an ephemeral port; see port().
    explicit Listener(const Endpoint& at);

    [[nodiscard]] std::uint16_t port() const noexcept { return port_; }
    UniqueFd accept_one();

private:
    UniqueFd fd_;
    std::uint16_t port_ = 0;
};

UniqueFd connect_to(const Endpoint& to);

// Throws NetError on failure, including a peer that stopped reading.
void send_all(int fd, std::string_view data);

}  // namespace pka
