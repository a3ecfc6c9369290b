#include "corrcov/prng.hpp"

#include <cmath>

namespace corrcov {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

namespace detail {

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

}  // namespace detail

void Prng::refill() noexcept {
  // Four consecutive blocks per refill, laid out lane-major so the rounds
  // vectorize. The output equals four single-block calls.
  constexpr int kBlocks = 4;
  std::uint32_t w0[kBlocks], w1[kBlocks], w2[kBlocks], w3[kBlocks];
  for (int b = 0; b < kBlocks; ++b) {
    const std::uint64_t blk = block_ + static_cast<std::uint64_t>(b);
    w0[b] = static_cast<std::uint32_t>(blk);
    w1[b] = static_cast<std::uint32_t>(blk >> 32);
    w2[b] = static_cast<std::uint32_t>(stream_);
    w3[b] = static_cast<std::uint32_t>(stream_ >> 32);
  }
  std::uint32_t k0 = static_cast<std::uint32_t>(seed_);
  std::uint32_t k1 = static_cast<std::uint32_t>(seed_ >> 32);
  for (int round = 0; round < 10; ++round) {
    for (int b = 0; b < kBlocks; ++b) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * w0[b];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * w2[b];
      const std::uint32_t n0 = static_cast<std::uint32_t>(p1 >> 32) ^ w1[b] ^ k0;
      const std::uint32_t n2 = static_cast<std::uint32_t>(p0 >> 32) ^ w3[b] ^ k1;
      w1[b] = static_cast<std::uint32_t>(p1);
      w3[b] = static_cast<std::uint32_t>(p0);
      w0[b] = n0;
      w2[b] = n2;
    }
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  for (int b = 0; b < kBlocks; ++b) {
    buffer_[static_cast<std::size_t>(4 * b)] = w0[b];
    buffer_[static_cast<std::size_t>(4 * b + 1)] = w1[b];
    buffer_[static_cast<std::size_t>(4 * b + 2)] = w2[b];
    buffer_[static_cast<std::size_t>(4 * b + 3)] = w3[b];
  }
  block_ += kBlocks;
  buffered_ = kBufferWords;
}

std::uint64_t Prng::next_u64() noexcept {
  if (buffered_ < 2) refill();
  const std::size_t at = static_cast<std::size_t>(kBufferWords - buffered_);
  const std::uint64_t hi = buffer_[at];
  const std::uint64_t lo = buffer_[at + 1];
  buffered_ -= 2;
  return (hi << 32) | lo;
}

double Prng::uniform() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

namespace {

// 128-layer ziggurat for the standard normal density.
struct Ziggurat {
  static constexpr int kLayers = 128;
  static constexpr double kR = 3.442619855899;          // start of the tail
  static constexpr double kV = 9.91256303526217e-3;     // area of each layer
  double x[kLayers + 1];
  double ratio[kLayers];

  Ziggurat() {
    double f = std::exp(-0.5 * kR * kR);
    x[0] = kV / f;
    x[1] = kR;
    x[kLayers] = 0.0;
    for (int i = 2; i < kLayers; ++i) {
      x[i] = std::sqrt(-2.0 * std::log(kV / x[i - 1] + f));
      f = std::exp(-0.5 * x[i] * x[i]);
    }
    for (int i = 0; i < kLayers; ++i) ratio[i] = x[i + 1] / x[i];
  }
};

const Ziggurat& ziggurat() {
  static const Ziggurat z;
  return z;
}

}  // namespace

double Prng::standard_normal() noexcept {
  const Ziggurat& z = ziggurat();
  for (;;) {
    // Top 53 bits give u in (-1, 1); the low 7 bits pick the layer.
    const std::uint64_t bits = next_u64();
    const double u = 2.0 * ((static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53) - 1.0;
    const int i = static_cast<int>(bits & 0x7f);
    if (std::abs(u) < z.ratio[i]) return u * z.x[i];
    if (i == 0) {
      // Tail beyond R, sampled by Marsaglia's exponential rejection.
      double t, e;
      do {
        t = std::log(uniform()) / Ziggurat::kR;
        e = std::log(uniform());
      } while (-2.0 * e < t * t);
      return u < 0.0 ? t - Ziggurat::kR : Ziggurat::kR - t;
    }
    const double xs = u * z.x[i];
    const double f0 = std::exp(-0.5 * (z.x[i] * z.x[i] - xs * xs));
    const double f1 = std::exp(-0.5 * (z.x[i + 1] * z.x[i + 1] - xs * xs));
    if (f1 + uniform() * (f0 - f1) < 1.0) return xs;
  }
}

}  // namespace corrcov
