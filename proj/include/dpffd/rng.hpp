#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace dpffd {

using Vec = std::vector<double>;

namespace detail {

// splitmix64 finalizer; also used to hash-derive substream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_name(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

// Counter-style deterministic random stream. A stream is a pure function of
// its seed; substream() derives an independent stream from the base seed
// without touching the draw position, so per-particle streams do not depend
// on evaluation order.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : base_(seed), state_(seed) {}

  // Named stream from a master seed ("proposal", "plant", "measure-1", ...).
  static RandomStream derived(std::uint64_t master, std::string_view name) {
    return RandomStream(detail::mix64(master ^ detail::hash_name(name)));
  }

  RandomStream substream(std::uint64_t a, std::uint64_t b = 0) const {
    std::uint64_t s = detail::mix64(base_ ^ detail::mix64(a));
    return RandomStream(detail::mix64(s ^ detail::mix64(b)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // in [0, 1)
  double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double gaussian(double mean, double variance) {
    // Box-Muller, sine partner discarded: two u64 draws per sample.
    double u1 = 1.0 - uniform01();  // (0, 1]
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + std::sqrt(variance) * r * std::cos(6.283185307179586476925286766559 * u2);
  }

  std::uint64_t base_seed() const { return base_; }

 private:
  std::uint64_t base_;
  std::uint64_t state_;
};

enum class NoiseKind { GaussianIid, GaussianDiagonal, UniformBox };

class NoiseSpec {
 public:
  static NoiseSpec gaussian_iid(double mean, double variance, int dim) {
    if (dim < 1) throw std::invalid_argument("NoiseSpec: dim must be >= 1");
    if (variance < 0.0) throw std::invalid_argument("NoiseSpec: negative variance");
    NoiseSpec s;
    s.kind_ = NoiseKind::GaussianIid;
    s.mean_.assign(static_cast<std::size_t>(dim), mean);
    s.var_.assign(static_cast<std::size_t>(dim), variance);
    return s;
  }

  static NoiseSpec gaussian_diagonal(Vec mean, Vec variance) {
    if (mean.empty() || mean.size() != variance.size())
      throw std::invalid_argument("NoiseSpec: mean/variance size mismatch");
    for (double v : variance)
      if (v < 0.0) throw std::invalid_argument("NoiseSpec: negative variance");
    NoiseSpec s;
    s.kind_ = NoiseKind::GaussianDiagonal;
    s.mean_ = std::move(mean);
    s.var_ = std::move(variance);
    return s;
  }

  static NoiseSpec uniform_box(Vec lo, Vec hi) {
    if (lo.empty() || lo.size() != hi.size())
      throw std::invalid_argument("NoiseSpec: box bound size mismatch");
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (lo[i] > hi[i]) throw std::invalid_argument("NoiseSpec: box lower bound above upper");
    NoiseSpec s;
    s.kind_ = NoiseKind::UniformBox;
    s.mean_ = std::move(lo);
    s.var_ = std::move(hi);
    return s;
  }

  static NoiseSpec uniform_box(double lo, double hi, int dim) {
    if (dim < 1) throw std::invalid_argument("NoiseSpec: dim must be >= 1");
    return uniform_box(Vec(static_cast<std::size_t>(dim), lo),
                       Vec(static_cast<std::size_t>(dim), hi));
  }

  NoiseKind kind() const { return kind_; }
  int dim() const { return static_cast<int>(mean_.size()); }
  const Vec& mean() const { return mean_; }
  const Vec& variance() const { return var_; }  // box: upper bounds
  const Vec& box_lo() const { return mean_; }
  const Vec& box_hi() const { return var_; }

 private:
  NoiseSpec() = default;
  NoiseKind kind_ = NoiseKind::GaussianIid;
  Vec mean_;
  Vec var_;
};

inline Vec draw_noise(const NoiseSpec& spec, RandomStream& stream) {
  Vec out(static_cast<std::size_t>(spec.dim()));
  if (spec.kind() == NoiseKind::UniformBox) {
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = stream.uniform(spec.box_lo()[i], spec.box_hi()[i]);
  } else {
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = stream.gaussian(spec.mean()[i], spec.variance()[i]);
  }
  return out;
}

}  // namespace dpffd
