#pragma once

// Inner loop of Kloosterman summation over a precomputed unit table.
//
//   gather_sum(table, a, b) = sum over units x of cos_fixed[(a x + b x^-1) mod c]
//
// The cosine table holds round(cos(2 pi t / c) * 2^52) as int64, so the
// reduction is exact integer addition: every kernel variant returns the
// same value bit for bit, independent of summation order.

#include <cstdint>
#include <optional>
#include <span>

namespace pns::kernels {

using i128 = __int128;

inline constexpr int kTableFractionBits = 52;

struct UnitTableView {
  std::uint32_t modulus = 1;
  std::span<const std::uint32_t> units;
  std::span<const std::uint32_t> inverses;
  std::span<const std::int64_t> cos_fixed;  // size == modulus
};

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);

/// Reference implementation; a, b must already be reduced mod c.
i128 gather_sum_scalar(const UnitTableView& table, std::uint32_t a, std::uint32_t b);

#if defined(__x86_64__)
// Requires AVX2 + FMA at run time and modulus < 2^26.
i128 gather_sum_avx2(const UnitTableView& table, std::uint32_t a, std::uint32_t b);
#endif

bool cpu_has_avx2();

/// Best variant for this CPU unless overridden (PNS_ISA=scalar in the
/// environment, or set_isa_override()).
Isa active_isa();
void set_isa_override(std::optional<Isa> isa);

/// Dispatches to the active variant, falling back to scalar for moduli the
/// vector kernel cannot represent exactly.
i128 gather_sum(const UnitTableView& table, std::uint32_t a, std::uint32_t b);

}  // namespace pns::kernels
