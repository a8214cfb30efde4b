#include "pns/kernels.hpp"

namespace pns::kernels {

i128 gather_sum_scalar(const UnitTableView& table, std::uint32_t a, std::uint32_t b) {
  const std::uint64_t c = table.modulus;
  const std::size_t n = table.units.size();
  i128 sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t t =
        (static_cast<std::uint64_t>(a) * table.units[i] + static_cast<std::uint64_t>(b) * table.inverses[i]) % c;
    sum += table.cos_fixed[t];
  }
  return sum;
}

}  // namespace pns::kernels
