#include "torembed/kernels.hpp"

#include "torembed/budget.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace torembed {

std::uint32_t nonsplit_mask(const CharTable& table, std::uint32_t pattern) {
  if (table.unitary && chi_plus(table.delta_mask, pattern)) return 0;
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < table.comps.size(); ++i)
    if (!char_in_sigma(table.comps[i], pattern)) mask |= (1u << i);
  return mask;
}

MaskWitnesses scan_patterns_serial(const CharTable& table) {
  MaskWitnesses out;
  const std::uint64_t total = 1ull << table.t;
  for (std::uint64_t e = 0; e < total; ++e) {
    std::uint32_t mask = nonsplit_mask(table, static_cast<std::uint32_t>(e));
    if (mask != 0) out.emplace(mask, static_cast<std::uint32_t>(e));  // first hit is the smallest
  }
  return out;
}

int kernel_threads() {
#ifdef _OPENMP
  int t = budget().threads;
  return t > 0 ? t : omp_get_max_threads();
#else
  return 1;
#endif
}

MaskWitnesses scan_patterns_parallel(const CharTable& table) {
#ifndef _OPENMP
  return scan_patterns_serial(table);
#else
  const std::int64_t total = static_cast<std::int64_t>(1ull << table.t);
  if (total < 4096) return scan_patterns_serial(table);
  const int nthreads = kernel_threads();
  std::vector<MaskWitnesses> local(static_cast<std::size_t>(nthreads));
#pragma omp parallel num_threads(nthreads)
  {
    MaskWitnesses& mine = local[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
    for (std::int64_t e = 0; e < total; ++e) {
      std::uint32_t mask = nonsplit_mask(table, static_cast<std::uint32_t>(e));
      if (mask == 0) continue;
      auto it = mine.find(mask);
      if (it == mine.end())
        mine.emplace(mask, static_cast<std::uint32_t>(e));
      else if (static_cast<std::uint32_t>(e) < it->second)
        it->second = static_cast<std::uint32_t>(e);
    }
  }
  // Merge keeping the smallest pattern, so the result matches the serial scan.
  MaskWitnesses out;
  for (const auto& part : local)
    for (const auto& [mask, e] : part) {
      auto it = out.find(mask);
      if (it == out.end())
        out.emplace(mask, e);
      else if (e < it->second)
        it->second = e;
    }
  return out;
#endif
}

}  // namespace torembed
