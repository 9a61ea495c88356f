#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <string>
#include <vector>

#include "gnp/errors.hpp"
#include "gnp/kernels.hpp"
#include "gnp/rng.hpp"

using namespace gnp;
using namespace gnp::kernels;

namespace {

std::vector<std::uint64_t> random_u64(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<std::uint64_t> v(n);
  for (auto& x : v) x = rng.next();
  return v;
}

// Strictly ascending u32 values from a small universe so overlaps happen.
std::vector<std::uint32_t> random_sorted_u32(std::size_t n, std::uint32_t hi,
                                             std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<std::uint32_t> v;
  v.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    v.push_back(static_cast<std::uint32_t>(rng.below(hi)));
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

const std::vector<std::size_t> kSizes = {0,  1,  2,  3,  4,  5,  6,
                                         7,  8,  9,  10, 11, 12, 13,
                                         14, 15, 16, 17, 64, 1000};

}  // namespace

TEST_CASE("backend probe is consistent") {
  CHECK(std::string(backend_name()).size() > 0);
  if (avx2_compiled() && avx2_available()) {
    set_backend(Backend::Auto);
    CHECK(active_backend() == Backend::Avx2);
  }
}

TEST_CASE("set_backend rejects unavailable avx2 and accepts scalar") {
  const Backend before = active_backend();
  CHECK_NOTHROW(set_backend(Backend::Scalar));
  CHECK(active_backend() == Backend::Scalar);
  CHECK(std::string(backend_name()) == "scalar");
  if (avx2_compiled() && avx2_available()) {
    CHECK_NOTHROW(set_backend(Backend::Avx2));
    CHECK(active_backend() == Backend::Avx2);
    CHECK(std::string(backend_name()) == "avx2");
  } else {
    CHECK_THROWS_AS(set_backend(Backend::Avx2), InputError);
  }
  set_backend(before);
}

TEST_CASE("minhash_update applies min of the affine hash per lane") {
  for (const std::size_t n :
       {std::size_t{0}, std::size_t{7}, std::size_t{64}, std::size_t{129}}) {
    std::vector<std::uint64_t> sig(n, ~0ull);
    const std::vector<std::uint64_t> mul = random_u64(n, 0x5151u + n);
    const std::vector<std::uint64_t> add = random_u64(n, 0x6262u + n);
    const std::uint64_t key = 0x9e3779b97f4a7c15ull ^ n;
    minhash_update(key, mul.data(), add.data(), sig.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(sig[i] == mul[i] * key + add[i]);
    // A second key can only lower each lane.
    const std::vector<std::uint64_t> before = sig;
    minhash_update(key + 1, mul.data(), add.data(), sig.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(sig[i] <= before[i]);
      CHECK(sig[i] == std::min(before[i], mul[i] * (key + 1) + add[i]));
    }
  }
}

TEST_CASE("elementwise_min_u64 equals per-slot std::min") {
  for (const std::size_t n : kSizes) {
    std::vector<std::uint64_t> a = random_u64(n, 11 * n + 1);
    const std::vector<std::uint64_t> b = random_u64(n, 13 * n + 2);
    std::vector<std::uint64_t> expect(n);
    for (std::size_t i = 0; i < n; ++i) expect[i] = std::min(a[i], b[i]);
    elementwise_min_u64(a.data(), b.data(), n);
    CHECK(a == expect);
  }
}

TEST_CASE("match_count_u64 counts equal slots") {
  for (const std::size_t n : kSizes) {
    const std::vector<std::uint64_t> a = random_u64(n, 3 * n + 5);
    std::vector<std::uint64_t> b = a;
    SplitMix64 rng(99 * n + 7);
    std::size_t expect = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.unit() < 0.5) {
        b[i] ^= 1;
        --expect;
      }
    }
    CHECK(match_count_u64(a.data(), b.data(), n) == expect);
  }
}

TEST_CASE("intersect_count_u32 equals std::set_intersection") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto a = random_sorted_u32(seed * 31 % 70, 80, seed * 2 + 1);
    const auto b = random_sorted_u32(seed * 17 % 90, 80, seed * 2 + 2);
    std::vector<std::uint32_t> inter;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(inter));
    CHECK(intersect_count_u32(a.data(), a.size(), b.data(), b.size()) ==
          inter.size());
    CHECK(intersect_count_u32(b.data(), b.size(), a.data(), a.size()) ==
          inter.size());
  }
  CHECK(intersect_count_u32(nullptr, 0, nullptr, 0) == 0);
}

#if defined(GNP_HAVE_AVX2_TU)
TEST_CASE("avx2 kernels agree with scalar kernels bit for bit") {
  if (!(avx2_compiled() && avx2_available())) return;
  for (const std::size_t n : kSizes) {
    std::vector<std::uint64_t> a = random_u64(n, 7 * n + 3);
    const std::vector<std::uint64_t> b = random_u64(n, 5 * n + 9);
    std::vector<std::uint64_t> a2 = a;
    detail::elementwise_min_u64_scalar(a.data(), b.data(), n);
    detail::elementwise_min_u64_avx2(a2.data(), b.data(), n);
    CHECK(a == a2);
    CHECK(detail::match_count_u64_scalar(a.data(), b.data(), n) ==
          detail::match_count_u64_avx2(a.data(), b.data(), n));

    std::vector<std::uint64_t> sig1 = random_u64(n, 23 * n + 1);
    std::vector<std::uint64_t> sig2 = sig1;
    const std::vector<std::uint64_t> mul = random_u64(n, 17 * n + 1);
    const std::vector<std::uint64_t> add = random_u64(n, 19 * n + 4);
    detail::minhash_update_scalar(0xabcdefull, mul.data(), add.data(),
                                  sig1.data(), n);
    detail::minhash_update_avx2(0xabcdefull, mul.data(), add.data(),
                                sig2.data(), n);
    CHECK(sig1 == sig2);
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = random_sorted_u32(40, 90, seed + 100);
    const auto b = random_sorted_u32(60, 90, seed + 200);
    CHECK(detail::intersect_count_u32_scalar(a.data(), a.size(), b.data(),
                                             b.size()) ==
          detail::intersect_count_u32_avx2(a.data(), a.size(), b.data(),
                                           b.size()));
  }
}
#endif

TEST_CASE("dispatched results are backend independent") {
  const Backend before = active_backend();
  const std::size_t n = 333;
  std::vector<std::uint64_t> a = random_u64(n, 1);
  const std::vector<std::uint64_t> b = random_u64(n, 2);

  set_backend(Backend::Scalar);
  std::vector<std::uint64_t> a_scalar = a;
  elementwise_min_u64(a_scalar.data(), b.data(), n);
  const std::size_t matches_scalar = match_count_u64(a.data(), b.data(), n);

  if (avx2_compiled() && avx2_available()) {
    set_backend(Backend::Avx2);
    std::vector<std::uint64_t> a_vec = a;
    elementwise_min_u64(a_vec.data(), b.data(), n);
    CHECK(a_vec == a_scalar);
    CHECK(match_count_u64(a.data(), b.data(), n) == matches_scalar);
  }
  set_backend(before);
}
