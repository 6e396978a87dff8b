#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string_view>

namespace levy {

using Engine = std::mt19937_64;

/// Identifies one reproducible random stream: the master seed it was derived
/// from and the derived 64-bit stream id.
struct SeedStream {
  std::uint64_t master = 0;
  std::uint64_t stream = 0;

  bool operator==(const SeedStream&) const = default;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Stream for replica `replica` of experiment `tag` under `master`.
/// stream = splitmix64(splitmix64(master) ^ fnv1a(tag) ^ splitmix64(replica + 1))
SeedStream derive_stream(std::uint64_t master, std::string_view tag,
                         std::uint64_t replica) noexcept;

/// Engine seeded from a stream id only; two equal streams give equal engines.
Engine make_engine(const SeedStream& s);

std::uint64_t fnv1a(std::string_view bytes,
                     std::uint64_t h = 0xcbf29ce484222325ULL) noexcept;

/// Number of hardware threads, at least 1.
unsigned default_threads() noexcept;

/// Runs body(i) for i in [0, count) on up to `threads` workers. Work is
/// assigned by an atomic counter; callers store results by index so the
/// outcome is independent of scheduling. The first exception thrown by any
/// body is rethrown on the calling thread.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace levy
