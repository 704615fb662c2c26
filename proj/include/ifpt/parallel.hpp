#pragma once

#include <cstddef>
#include <functional>

namespace ifpt {

/// Caps the number of worker threads used by particle maps (0 = hardware).
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, n).
///
/// Chunks never overlap and callers only write into their own chunk, so the
/// result is independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

} // namespace ifpt
