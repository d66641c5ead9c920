#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace nicd::detail {

/// Splits [0, count) into at most `jobs` contiguous chunks and runs
/// fn(chunk, begin, end) for each, chunk 0 on the calling thread.
template <class Fn>
void for_each_chunk(std::size_t count, int jobs, Fn&& fn) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(jobs > 0 ? jobs : 1, count));
  const std::size_t per = (count + workers - 1) / std::max<std::size_t>(workers, 1);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  auto run = [&](std::size_t chunk) {
    try {
      const std::size_t begin = chunk * per;
      const std::size_t end = std::min(count, begin + per);
      if (begin < end) fn(chunk, begin, end);
    } catch (...) {
      errors[chunk] = std::current_exception();
    }
  };
  for (std::size_t c = 1; c < workers; ++c) threads.emplace_back(run, c);
  run(0);
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline std::size_t chunk_count(std::size_t count, int jobs) {
  return std::max<std::size_t>(1, std::min<std::size_t>(jobs > 0 ? jobs : 1, count));
}

}  // namespace nicd::detail
