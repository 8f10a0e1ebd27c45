#pragma once

#include "nfat/timestamp.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace nfat {

enum class Protocol : std::uint8_t { TCP, UDP };

const char* to_string(Protocol protocol);
std::optional<Protocol> parse_protocol(std::string_view text);

// One parsed network event; the row shape of the ingest CSV.
struct LogEvent {
    std::uint64_t event_id = 0; // positive, unique within a case
    Timestamp timestamp;
    std::string src_addr; // IPv4 dotted quad
    std::string dst_addr;
    Protocol protocol = Protocol::TCP;
    std::uint16_t d_port = 0;
    std::uint32_t ip_len = 0;  // bytes
    std::uint8_t tcp_flags = 0; // TCP flag byte; always 0 for UDP

    bool operator==(const LogEvent&) const = default;
};

} // namespace nfat
