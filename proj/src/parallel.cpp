#include "halfline/parallel.hpp"

#include <algorithm>

namespace halfline {

namespace {
std::atomic<int> budget{1};
}

void set_worker_budget(int n) { budget = std::max(1, n); }
int worker_budget() { return budget; }

}  // namespace halfline
