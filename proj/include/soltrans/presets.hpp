#pragma once

// The seven simulation presets reproduced by the figure subcommand and the
// acceptance harness. All use the horizontal symmetry X = F1 with a direction
// V = lambda F2 + mu F3. Expected critical-point counts follow the published
// captions; expected families and end shapes follow the classifier taxonomy.
// Preset 5's caption counts are kept verbatim even though the integrated
// curve has one y critical point, not two: the harness reports the
// discrepancy rather than silently adjusting the table.

#include <array>
#include <stdexcept>

#include "soltrans/classify.hpp"
#include "soltrans/profile.hpp"
#include "soltrans/sol3.hpp"

namespace soltrans {

struct FigurePreset {
    int id = 0;
    KillingField X{1.0, 0.0, 0.0};
    KillingField V{};
    double theta0 = 0.0;
    int count_y = 0;  // expected critical points of y over s in [-30, 30]
    int count_z = 0;  // expected critical points of z
    Family family = Family::general_f1;
    EndKind end_backward = EndKind::horizontal_plane;
    EndKind end_forward = EndKind::horizontal_plane;
};

inline const std::array<FigurePreset, 7>& figure_presets() {
    static const std::array<FigurePreset, 7> table = {{
        {1, {1.0, 0.0, 0.0}, {0.0, 3.0, 0.0}, kPi / 2, 1, 0, Family::grim_reaper_slab,
         EndKind::horizontal_plane, EndKind::horizontal_plane},
        {2, {1.0, 0.0, 0.0}, {0.0, kPi / 4, 0.0}, kPi / 2, 1, 0, Family::half_plane_graph,
         EndKind::horizontal_plane, EndKind::logarithmic},
        {3, {1.0, 0.0, 0.0}, {0.0, -kPi / 8, 0.0}, kPi / 4, 0, 0, Family::half_plane_graph,
         EndKind::horizontal_plane, EndKind::logarithmic},
        {4, {1.0, 0.0, 0.0}, {0.0, 0.0, -1.0}, 0.0, 2, 1, Family::general_f1,
         EndKind::vertical_plane, EndKind::vertical_plane},
        {5, {1.0, 0.0, 0.0}, {0.0, 2.0, -1.0}, 0.0, 2, 1, Family::general_f1,
         EndKind::vertical_plane, EndKind::vertical_plane},
        {6, {1.0, 0.0, 0.0}, {0.0, 0.8, -0.3}, 2.0, 1, 0, Family::general_f1,
         EndKind::vertical_plane, EndKind::logarithmic},
        {7, {1.0, 0.0, 0.0}, {0.0, 3.0, 3.0}, 2.0, 1, 1, Family::general_f1,
         EndKind::logarithmic, EndKind::logarithmic},
    }};
    return table;
}

inline const FigurePreset& figure_preset(int id) {
    if (id < 1 || id > 7) throw std::invalid_argument("figure_preset: id must be in 1..7");
    return figure_presets()[static_cast<std::size_t>(id - 1)];
}

/// Reduced profile parameters of a preset (the F1 coefficient of V is
/// tangent to the swept surface and does not enter).
inline F1Params preset_params(const FigurePreset& fp) {
    return {fp.V.f2, fp.V.f3, fp.theta0};
}

}  // namespace soltrans
