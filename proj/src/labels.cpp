#include "hrv/labels.hpp"

namespace hrv {

std::string_view to_string(ThermalState s) {
  switch (s) {
  case ThermalState::cold: return "cold";
  case ThermalState::neutral: return "neutral";
  case ThermalState::hot: return "hot";
  }
  return "unknown";
}

std::optional<ThermalState> thermal_state_from_string(std::string_view s) {
  for (auto state : kThermalStates)
    if (to_string(state) == s)
      return state;
  return std::nullopt;
}

} // namespace hrv
