#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "becstate/number_balance.hpp"

namespace becstate {

/// 64-bit FNV-1a hash.
std::uint64_t fnv1a(std::string_view data);

/// Binary snapshot of a balanced state. The key is stored alongside the data and
/// checked on read, so a hash collision reads as a cache miss.
void write_balanced_state(const std::string& path, const BalancedState& state, const std::string& key);
std::optional<BalancedState> read_balanced_state(const std::string& path, const std::string& key);

}  // namespace becstate
