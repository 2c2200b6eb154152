#pragma once

#include <cstddef>
#include <functional>

namespace eof {

// Worker count: EOF_THREADS if set and positive, else hardware concurrency.
[[nodiscard]] unsigned default_threads();

// Splits [0, n) into contiguous chunks and runs fn(begin, end) on up to
// `threads` workers. Chunk boundaries depend only on n and threads.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace eof
