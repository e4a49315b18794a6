#pragma once

#include <charconv>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace legevo {

inline constexpr const char* kVersion = "0.1.0";

// Shortest representation that round-trips the exact double value.
std::string format_double(double v);

std::string trim(std::string_view s);

// Runs fn(i) for i in [0, n) on `threads` workers. threads <= 1 runs inline.
// fn must be safe to call concurrently for distinct i; iteration-to-thread
// assignment is unspecified, so fn must not depend on execution order.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace legevo
