#pragma once

#include <cstddef>
#include <functional>

namespace hur {

/// Worker count used by the node loops; 1 means serial. Results do not
/// depend on this value: every output node is reduced in a fixed order.
void set_thread_count(std::size_t threads);
std::size_t thread_count() noexcept;

/// Runs body(i) for i in [0, count), splitting the range over the
/// configured workers. The first exception thrown by any worker is
/// rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace hur
