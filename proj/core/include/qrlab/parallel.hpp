#pragma once

#include <cstddef>
#include <functional>

namespace qrlab {

/// Worker count used by parallel_for. Defaults to hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; results
/// must be written to per-index slots so that aggregation stays serial.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qrlab
