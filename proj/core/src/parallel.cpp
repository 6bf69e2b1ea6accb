// SPDX-License-Identifier: Apache-2.0
#include "patchdg/parallel.hpp"

namespace patchdg {

namespace {
std::atomic<int> g_threads{1};
}

void set_num_threads(int threads) { g_threads = std::max(1, threads); }
int num_threads() { return g_threads; }

}  // namespace patchdg
