#pragma once

namespace cl::parallel {

// Worker count for OpenMP regions. Honors COMPREHENSIBILITY_LAB_THREADS
// when set to a positive integer, otherwise the OpenMP default.
int thread_count();

// Overrides the environment for the rest of the process (0 restores it).
void set_thread_count(int n);

}  // namespace cl::parallel
