#include "gnp/kernels.hpp"

#include "gnp/errors.hpp"

namespace gnp::kernels {

namespace detail {

void minhash_update_scalar(std::uint64_t key, const std::uint64_t* mul,
                           const std::uint64_t* add, std::uint64_t* sig,
                           std::size_t lanes) {
  for (std::size_t k = 0; k < lanes; ++k) {
    const std::uint64_t h = mul[k] * key + add[k];
    if (h < sig[k]) sig[k] = h;
  }
}

void elementwise_min_u64_scalar(std::uint64_t* dst, const std::uint64_t* src,
                                std::size_t lanes) {
  for (std::size_t k = 0; k < lanes; ++k) {
    if (src[k] < dst[k]) dst[k] = src[k];
  }
}

std::size_t match_count_u64_scalar(const std::uint64_t* x,
                                   const std::uint64_t* y, std::size_t lanes) {
  std::size_t count = 0;
  for (std::size_t k = 0; k < lanes; ++k) count += (x[k] == y[k]);
  return count;
}

std::size_t intersect_count_u32_scalar(const std::uint32_t* a, std::size_t na,
                                       const std::uint32_t* b,
                                       std::size_t nb) {
  std::size_t i = 0, j = 0, count = 0;
  while (i < na && j < nb) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

}  // namespace detail

namespace {

struct Vtable {
  void (*minhash_update)(std::uint64_t, const std::uint64_t*,
                         const std::uint64_t*, std::uint64_t*, std::size_t);
  void (*elementwise_min_u64)(std::uint64_t*, const std::uint64_t*,
                              std::size_t);
  std::size_t (*match_count_u64)(const std::uint64_t*, const std::uint64_t*,
                                 std::size_t);
  std::size_t (*intersect_count_u32)(const std::uint32_t*, std::size_t,
                                     const std::uint32_t*, std::size_t);
};

constexpr Vtable kScalar{
    detail::minhash_update_scalar,
    detail::elementwise_min_u64_scalar,
    detail::match_count_u64_scalar,
    detail::intersect_count_u32_scalar,
};

#if defined(GNP_HAVE_AVX2_TU)
constexpr Vtable kAvx2{
    detail::minhash_update_avx2,
    detail::elementwise_min_u64_avx2,
    detail::match_count_u64_avx2,
    detail::intersect_count_u32_avx2,
};
#endif

Backend probe() {
#if defined(GNP_HAVE_AVX2_TU)
  if (__builtin_cpu_supports("avx2")) return Backend::Avx2;
#endif
  return Backend::Scalar;
}

Backend g_backend = probe();
const Vtable* g_vt =
#if defined(GNP_HAVE_AVX2_TU)
    g_backend == Backend::Avx2 ? &kAvx2 : &kScalar;
#else
    &kScalar;
#endif

}  // namespace

bool avx2_compiled() {
#if defined(GNP_HAVE_AVX2_TU)
  return true;
#else
  return false;
#endif
}

bool avx2_available() {
#if defined(GNP_HAVE_AVX2_TU)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

void set_backend(Backend b) {
  if (b == Backend::Auto) b = probe();
  if (b == Backend::Avx2) {
    if (!avx2_available())
      throw InputError("avx2 kernels requested but not available on this CPU/build");
#if defined(GNP_HAVE_AVX2_TU)
    g_backend = Backend::Avx2;
    g_vt = &kAvx2;
#endif
    return;
  }
  g_backend = Backend::Scalar;
  g_vt = &kScalar;
}

Backend active_backend() { return g_backend; }

const char* backend_name() {
  return g_backend == Backend::Avx2 ? "avx2" : "scalar";
}

void minhash_update(std::uint64_t key, const std::uint64_t* mul,
                    const std::uint64_t* add, std::uint64_t* sig,
                    std::size_t lanes) {
  g_vt->minhash_update(key, mul, add, sig, lanes);
}

void elementwise_min_u64(std::uint64_t* dst, const std::uint64_t* src,
                         std::size_t lanes) {
  g_vt->elementwise_min_u64(dst, src, lanes);
}

std::size_t match_count_u64(const std::uint64_t* x, const std::uint64_t* y,
                            std::size_t lanes) {
  return g_vt->match_count_u64(x, y, lanes);
}

std::size_t intersect_count_u32(const std::uint32_t* a, std::size_t na,
                                const std::uint32_t* b, std::size_t nb) {
  return g_vt->intersect_count_u32(a, na, b, nb);
}

}  // namespace gnp::kernels
