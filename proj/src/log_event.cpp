#include "nfat/log_event.hpp"

namespace nfat {

const char* to_string(Protocol protocol) {
    return protocol == Protocol::TCP ? "TCP" : "UDP";
}

std::optional<Protocol> parse_protocol(std::string_view text) {
    if (text == "TCP")
        return Protocol::TCP;
    if (text == "UDP")
        return Protocol::UDP;
    return std::nullopt;
}

} // namespace nfat
