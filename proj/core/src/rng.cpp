#include "svx/rng.hpp"

#include <cmath>

namespace svx {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 6.283185307179586476925286766559 * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

std::vector<StreamSlice> mc_slices(std::uint64_t total, std::uint64_t seed,
                                   std::uint64_t purpose) {
  int n_streams = kMcStreams;
  if (total < static_cast<std::uint64_t>(n_streams)) n_streams = total > 0 ? static_cast<int>(total) : 1;
  std::vector<StreamSlice> slices;
  slices.reserve(n_streams);
  std::uint64_t base = total / n_streams;
  std::uint64_t rem = total % n_streams;
  std::uint64_t at = 0;
  for (int s = 0; s < n_streams; ++s) {
    std::uint64_t cnt = base + (static_cast<std::uint64_t>(s) < rem ? 1 : 0);
    slices.push_back({at, cnt, derive_seed(seed, purpose + kStreamStride * s)});
    at += cnt;
  }
  return slices;
}

}  // namespace svx
