#pragma once

#include <cstddef>
#include <cstdint>

// Dispatched arithmetic kernels behind the sketch and similarity modules.
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant selected at runtime. Both variants are exact integer computations
// and must agree bit for bit; the test suite enforces that equivalence.

namespace gnp::kernels {

enum class Backend { Auto, Scalar, Avx2 };

// Auto re-probes the CPU. Avx2 throws InputError when unavailable.
void set_backend(Backend b);
Backend active_backend();
const char* backend_name();

bool avx2_compiled();
bool avx2_available();

// sig[k] = min(sig[k], mul[k] * key + add[k]) with wrapping 64-bit arithmetic.
void minhash_update(std::uint64_t key, const std::uint64_t* mul,
                    const std::uint64_t* add, std::uint64_t* sig,
                    std::size_t lanes);

// dst[k] = min(dst[k], src[k]) on unsigned 64-bit lanes.
void elementwise_min_u64(std::uint64_t* dst, const std::uint64_t* src,
                         std::size_t lanes);

// Number of positions where x[k] == y[k].
std::size_t match_count_u64(const std::uint64_t* x, const std::uint64_t* y,
                            std::size_t lanes);

// |A ∩ B| for strictly ascending u32 arrays.
std::size_t intersect_count_u32(const std::uint32_t* a, std::size_t na,
                                const std::uint32_t* b, std::size_t nb);

// Direct entry points for the equivalence tests.
namespace detail {

void minhash_update_scalar(std::uint64_t key, const std::uint64_t* mul,
                           const std::uint64_t* add, std::uint64_t* sig,
                           std::size_t lanes);
void elementwise_min_u64_scalar(std::uint64_t* dst, const std::uint64_t* src,
                                std::size_t lanes);
std::size_t match_count_u64_scalar(const std::uint64_t* x,
                                   const std::uint64_t* y, std::size_t lanes);
std::size_t intersect_count_u32_scalar(const std::uint32_t* a, std::size_t na,
                                       const std::uint32_t* b, std::size_t nb);

#if defined(GNP_HAVE_AVX2_TU)
void minhash_update_avx2(std::uint64_t key, const std::uint64_t* mul,
                         const std::uint64_t* add, std::uint64_t* sig,
                         std::size_t lanes);
void elementwise_min_u64_avx2(std::uint64_t* dst, const std::uint64_t* src,
                              std::size_t lanes);
std::size_t match_count_u64_avx2(const std::uint64_t* x,
                                 const std::uint64_t* y, std::size_t lanes);
std::size_t intersect_count_u32_avx2(const std::uint32_t* a, std::size_t na,
                                     const std::uint32_t* b, std::size_t nb);
#endif

}  // namespace detail

}  // namespace gnp::kernels
