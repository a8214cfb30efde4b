#include <atomic>
#include <cstdlib>
#include <cstring>

#include "pns/kernels.hpp"

namespace pns::kernels {

namespace {

constexpr std::uint32_t kVectorModulusLimit = 1u << 26;

// -1: no override, otherwise static_cast<int>(Isa).
std::atomic<int> g_override{-1};

Isa detect() {
  if (const char* env = std::getenv("PNS_ISA"); env != nullptr && std::strcmp(env, "scalar") == 0) {
    return Isa::scalar;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool cpu_has_avx2() {
#if defined(__x86_64__)
  static const bool has = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return has;
#else
  return false;
#endif
}

Isa active_isa() {
  const int forced = g_override.load(std::memory_order_relaxed);
  if (forced >= 0) return static_cast<Isa>(forced);
  static const Isa detected = detect();
  return detected;
}

void set_isa_override(std::optional<Isa> isa) {
  if (isa == Isa::avx2 && !cpu_has_avx2()) isa = Isa::scalar;
  g_override.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

i128 gather_sum(const UnitTableView& table, std::uint32_t a, std::uint32_t b) {
#if defined(__x86_64__)
  if (active_isa() == Isa::avx2 && table.modulus < kVectorModulusLimit) {
    return gather_sum_avx2(table, a, b);
  }
#endif
  return gather_sum_scalar(table, a, b);
}

}  // namespace pns::kernels
