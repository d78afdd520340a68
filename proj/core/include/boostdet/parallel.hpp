#pragma once

#include <cstddef>
#include <functional>

namespace boostdet {

// Runs body(begin, end) over disjoint chunks of [0, n) on up to `jobs`
// threads. Callers get determinism by writing results into per-index slots;
// the chunking itself never affects what gets computed.
void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace boostdet
