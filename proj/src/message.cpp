#include "fanetsim/message.hpp"

#include <array>

namespace fanetsim {

namespace {
constexpr std::array<std::string_view, 4> kKindNames = {"Beacon", "Publish", "Query", "Reply"};
}

std::string_view to_string(MessageKind kind)
{
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<MessageKind> parse_message_kind(std::string_view text)
{
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == text) return static_cast<MessageKind>(i);
  }
  return std::nullopt;
}

}  // namespace fanetsim
