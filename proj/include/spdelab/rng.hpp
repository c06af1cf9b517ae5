#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace spdelab {

// Counter-based random numbers (Philox4x32-10).  Every draw is a pure
// function of (seed, path, step, mode, purpose), so ensembles are bitwise
// reproducible regardless of thread count or evaluation order, and any
// single increment can be regenerated in isolation.

namespace detail {

inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t(kMul0) * ctr[0];
    const std::uint64_t p1 = std::uint64_t(kMul1) * ctr[2];
    const std::array<std::uint32_t, 4> next = {
        std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], std::uint32_t(p1),
        std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], std::uint32_t(p0)};
    ctr = next;
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

//! Map two 32-bit words to a uniform double in the open interval (0, 1).
inline double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (std::uint64_t(hi) << 32) | lo;
  const double u = double(bits >> 11) * 0x1.0p-53;
  return u > 0.0 ? u : 0x1.0p-53;
}

}  // namespace detail

//! Independent standard normal pair addressed by (seed, path, step, mode).
//! `purpose` separates logical streams that share the same address space
//! (e.g. noise increments vs. auxiliary sampling).
inline std::array<double, 2> normal_pair(std::uint64_t seed, std::uint64_t path,
                                         std::uint32_t step, std::uint32_t mode,
                                         std::uint32_t purpose = 0) {
  const std::array<std::uint32_t, 2> key = {std::uint32_t(seed),
                                            std::uint32_t(seed >> 32)};
  const std::array<std::uint32_t, 4> ctr = {
      mode, step, std::uint32_t(path),
      std::uint32_t(path >> 32) ^ (purpose * 0x85EBCA6Bu + 0x1B873593u)};
  const auto x = detail::philox4x32(ctr, key);
  const double u1 = detail::to_open_unit(x[0], x[1]);
  const double u2 = detail::to_open_unit(x[2], x[3]);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * 3.14159265358979323846 * u2;
  return {r * std::cos(a), r * std::sin(a)};
}

//! Uniform double in (0,1) with the same addressing scheme.
inline double uniform_open(std::uint64_t seed, std::uint64_t path,
                           std::uint32_t step, std::uint32_t mode,
                           std::uint32_t purpose = 0) {
  const std::array<std::uint32_t, 2> key = {std::uint32_t(seed),
                                            std::uint32_t(seed >> 32)};
  const std::array<std::uint32_t, 4> ctr = {
      mode, step, std::uint32_t(path),
      std::uint32_t(path >> 32) ^ (purpose * 0x85EBCA6Bu + 0x1B873593u)};
  const auto x = detail::philox4x32(ctr, key);
  return detail::to_open_unit(x[0], x[1]);
}

//! FNV-1a 64-bit hash, used for stable config fingerprints in manifests.
inline std::uint64_t fnv1a64(const void* data, std::size_t len,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace spdelab
