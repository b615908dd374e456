#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace vqsim {

std::uint64_t splitmix64(std::uint64_t x);

// Counter-based stream key: hash of (master, path...) so a stream depends only on
// its coordinates, never on how many draws other streams consumed.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

inline std::mt19937_64 make_stream(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  return std::mt19937_64(derive_seed(master, path));
}

// Stream coordinates used by the estimator.
struct StreamKey {
  std::uint64_t master = 0;
  std::uint64_t trial = 0;
  std::uint64_t step = 0;
  std::uint64_t stage = 0;
};

}  // namespace vqsim
