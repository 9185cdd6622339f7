// Copyright 2026 the decokin authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string_view>

namespace decokin::constants {

// CODATA 2022 values, full published precision. Single source of truth for
// every unit conversion in the library.
inline constexpr double hbar = 1.054571817e-34;            // J s
inline constexpr double k_boltzmann = 1.380649e-23;        // J/K (exact, SI)
inline constexpr double atomic_mass_unit = 1.66053906892e-27;  // kg
inline constexpr double bohr_radius = 5.29177210544e-11;   // m

// Buffer-gas species presets [kg].
inline constexpr double mass_he3 = 3.0160293 * atomic_mass_unit;
inline constexpr double mass_he4 = 4.002602 * atomic_mass_unit;

inline std::optional<double> species_mass(std::string_view name) {
  if (name == "He-3" || name == "he-3" || name == "He3") return mass_he3;
  if (name == "He-4" || name == "he-4" || name == "He4") return mass_he4;
  return std::nullopt;
}

}  // namespace decokin::constants
