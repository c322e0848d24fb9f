#pragma once

namespace triplex {

// Worker threads used by the counting passes. Results are bit-identical for
// any value: workers accumulate into private counters that are summed.
void set_threads(int n);
int threads();

}  // namespace triplex
