#include "fanetsim/random.hpp"

#include <stdexcept>

namespace fanetsim {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

RandomStream::RandomStream(std::uint64_t master_seed, NodeId node, std::string_view purpose)
{
  std::uint64_t h = mix64(master_seed + kGolden);
  h = mix64(h ^ (static_cast<std::uint64_t>(node.value) + 1) * kGolden);
  h = mix64(h ^ hash_tag(purpose));
  state_ = h;
}

std::uint64_t RandomStream::next_u64()
{
  state_ += kGolden;
  return mix64(state_);
}

double RandomStream::uniform01()
{
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi)
{
  const double u = uniform01();
  if (lo == hi) return lo;
  return lo + (hi - lo) * u;
}

std::uint64_t RandomStream::below(std::uint64_t bound)
{
  if (bound == 0) throw std::invalid_argument("RandomStream::below: bound must be positive");
  // Rejection sampling keeps the result unbiased.
  const std::uint64_t limit = max() - max() % bound;
  std::uint64_t x = next_u64();
  while (x >= limit) x = next_u64();
  return x % bound;
}

}  // namespace fanetsim
