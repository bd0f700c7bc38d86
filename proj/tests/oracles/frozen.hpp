#pragma once

// Values printed by compute_oracles.py (mpmath at 50 digits, numpy eigvalsh).
// Regenerate with: python3 tests/oracles/compute_oracles.py

#include <array>
#include <cstdint>

namespace oracle {

inline constexpr std::array<double, 4> kLogistic371FromPoint3 = {0.3, 0.7790999999999999, 0.6385028349000003,
                                                                 0.8563309391285007};

inline constexpr std::array<std::uint64_t, 6> kPiMinus3Coefficients = {0, 7, 15, 1, 292, 1};
inline constexpr std::array<std::array<std::uint64_t, 2>, 5> kPiMinus3Convergents = {
    {{1, 7}, {15, 106}, {16, 113}, {4687, 33102}, {4703, 33215}}};

struct GoldenRow {
  std::uint64_t l;
  double s;
  double h;
  double log_l_over_l;
};

inline constexpr std::array<GoldenRow, 8> kGolden = {{
    {10, 0.18033988749894848205, 0.47190848321803759293, 0.2302585092994045684},
    {5, 0.090169943749474241023, 0.30293083467424825308, 0.32188758248682007492},
    {8, 0.94427190999915878564, 0.21504769867223957534, 0.25993019270997949103},
    {13, 0.03444185374863302666, 0.14985859507366593669, 0.19730379672781051816},
    {21, 0.9787137637477918123, 0.10300356828038892264, 0.14497725893921061888},
    {34, 0.013155617496424838956, 0.070044448717365035002, 0.10371648601812239381},
    {55, 0.99186938124421665125, 0.047222974230737091883, 0.072860603367863107612},
    {89, 0.0050249987406414902082, 0.031611329197763013659, 0.050434116513844267846},
}};

/// S((1 - p) |0><0| + p I/2) for p = 0.1, ..., 0.9.
inline constexpr std::array<double, 9> kDepolarizedPureQubit = {
    0.1985152433458725, 0.3250829733914482, 0.42270908780599087, 0.5004024235381879, 0.5623351446188083,
    0.6108643020548935, 0.6474466390346325, 0.6730116670092565, 0.6881388137135884};

/// Same channel at p = 0.3 on the pure state (cos 0.4, e^{1.1 i} sin 0.4).
inline constexpr double kDepolarizedTiltedP03 = 0.422709087805991;

}  // namespace oracle
