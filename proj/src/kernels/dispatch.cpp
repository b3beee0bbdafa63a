#include <atomic>
#include <cstdlib>
#include <string>

#include "funloci/core.hpp"
#include "kernels_impl.hpp"

namespace funloci::kernels {

namespace {

const KernelTable kScalar{"scalar", scalar::sum, scalar::sum_sq_dev, scalar::sum_sq_diff_dev,
                          scalar::accumulate};

#if defined(FUNLOCI_HAVE_AVX2)
const KernelTable kAvx2{"avx2", avx2::sum, avx2::sum_sq_dev, avx2::sum_sq_diff_dev,
                        avx2::accumulate};

bool cpu_has_avx2() noexcept {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
}
#endif

#if defined(FUNLOCI_HAVE_NEON)
const KernelTable kNeon{"neon", neon::sum, neon::sum_sq_dev, neon::sum_sq_diff_dev,
                        neon::accumulate};
#endif

const KernelTable* best_available() noexcept {
  if (const auto* t = avx2_table()) return t;
  if (const auto* t = neon_table()) return t;
  return &kScalar;
}

const KernelTable* lookup(std::string_view name) noexcept {
  if (name == "scalar") return &kScalar;
  if (name == "avx2") return avx2_table();
  if (name == "neon") return neon_table();
  if (name == "auto" || name.empty()) return best_available();
  return nullptr;
}

const KernelTable* initial_table() noexcept {
  if (const char* env = std::getenv("FUNLOCI_KERNEL")) {
    if (const auto* t = lookup(env)) return t;
  }
  return best_available();
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(FUNLOCI_HAVE_AVX2)
  static const bool ok = cpu_has_avx2();
  return ok ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_table() noexcept {
#if defined(FUNLOCI_HAVE_NEON)
  return &kNeon;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_relaxed); }

void select(std::string_view name) {
  const auto* t = lookup(name);
  if (t == nullptr) {
    throw Error(ErrorCode::ConfigError,
                "kernel '" + std::string(name) + "' is unknown or unsupported on this CPU");
  }
  current().store(t, std::memory_order_relaxed);
}

std::vector<std::string> available() {
  std::vector<std::string> out{"scalar"};
  if (avx2_table()) out.emplace_back("avx2");
  if (neon_table()) out.emplace_back("neon");
  return out;
}

}  // namespace funloci::kernels
