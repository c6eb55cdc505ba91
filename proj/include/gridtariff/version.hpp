#pragma once

namespace gridtariff {

inline constexpr const char* kEngineVersion = "0.1.0";
// Bumped whenever the tariff model semantics change (classification rules,
// solver form, naming).
inline constexpr int kModelRevision = 1;

}  // namespace gridtariff
