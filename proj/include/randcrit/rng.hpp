#pragma once

#include <array>
#include <cstdint>

namespace randcrit {

// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

// Distinct draw families never share counters.
enum class Stream : std::uint32_t {
  ComplexSection = 1,
  RealPolynomial = 2,
  FluxContinuum = 3,
};

// Counter-based stream: every value is a pure function of
// (seed, stream, index, position), so sample k can be drawn on any thread
// in any order and still come out bit-identical.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, Stream stream, std::uint64_t index);

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  // Standard normal via Box-Muller; pairs are consumed in order.
  double normal();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_;
  std::uint64_t index_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace randcrit
