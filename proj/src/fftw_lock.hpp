// Internal: the FFTW planner is not thread-safe; plan execution is.
#pragma once

#include <mutex>

namespace polariton::detail {
std::mutex& fftw_planner_mutex();
}
