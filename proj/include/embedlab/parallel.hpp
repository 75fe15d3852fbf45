#pragma once

#include <cstddef>
#include <functional>

namespace embedlab::parallel {

// Worker count used by every internal parallel loop. Defaults to 1.
void set_thread_count(unsigned threads);
[[nodiscard]] unsigned thread_count();

// Runs body(block) for block in [0, blocks). Blocks are distributed over the
// configured workers; the caller owns per-block output slots, so any reduction
// performed afterwards in block order is independent of the thread count.
void for_blocks(std::size_t blocks, const std::function<void(std::size_t)>& body);

// Fixed block size used to partition index ranges. Keeping it independent of
// the thread count makes floating-point sums bitwise reproducible.
inline constexpr std::size_t kBlockSize = 4096;

[[nodiscard]] inline std::size_t block_count(std::size_t items, std::size_t block = kBlockSize) {
    return (items + block - 1) / block;
}

}  // namespace embedlab::parallel
