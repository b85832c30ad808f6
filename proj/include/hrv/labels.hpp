#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace hrv {

enum class ThermalState { cold = 0, neutral = 1, hot = 2 };

inline constexpr std::array<ThermalState, 3> kThermalStates{ThermalState::cold, ThermalState::neutral,
                                                            ThermalState::hot};

std::string_view to_string(ThermalState s);
std::optional<ThermalState> thermal_state_from_string(std::string_view s);

} // namespace hrv
