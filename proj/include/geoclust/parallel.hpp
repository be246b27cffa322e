#pragma once

#include <cstddef>
#include <functional>

namespace geoclust {

// Worker count: GEOCLUST_THREADS if set to a positive integer, otherwise
// std::thread::hardware_concurrency() (at least 1).
std::size_t thread_count();

// Runs body(i) for i in [0, count). Each index is visited exactly once;
// bodies must only write to state owned by their index. The first exception
// thrown by any body is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace geoclust
