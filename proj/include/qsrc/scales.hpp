#pragma once

#include <stdexcept>

namespace qsrc::scales {

// Physical constants (SI).  CODATA 2018 values.
struct Constants {
    double hbar = 1.054571817e-34;            // J s
    double electron_mass = 9.1093837015e-31;  // kg
    double atomic_mass_unit = 1.66053906660e-27;  // kg
    double rubidium87_mass = 87.0 * 1.66053906660e-27;  // kg, 87 u
    double elementary_charge = 1.602176634e-19;  // C
    double standard_gravity = 9.81;           // m/s^2
};

inline const Constants& codata() {
    static const Constants c;
    return c;
}

enum class Derivation { field_units, cyclotron_units, explicit_units };

// A consistent (length, energy, time) unit triplet.  All numerics in the
// other modules run in these units with hbar = 1; conversions happen only at
// I/O boundaries.
struct ScaleSystem {
    double length = 1;  // m
    double energy = 1;  // J
    double time = 1;    // s  (always hbar / energy)
    Derivation derivation = Derivation::explicit_units;

    double mass_scale() const { return energy * time * time / (length * length); }
    double force_scale() const { return energy / length; }
};

// Exponents of length^a * energy^b * time^c for a physical quantity.
struct Dimension {
    int length = 0;
    int energy = 0;
    int time = 0;
};

namespace dim {
inline constexpr Dimension length{1, 0, 0};
inline constexpr Dimension energy{0, 1, 0};
inline constexpr Dimension time{0, 0, 1};
inline constexpr Dimension mass{-2, 1, 2};
inline constexpr Dimension force{-1, 1, 0};
inline constexpr Dimension velocity{1, 0, -1};
inline constexpr Dimension action{0, 1, 1};
} // namespace dim

// Natural scales for a particle of mass `mass_kg` in uniform fields.
// force_newton is the magnitude of the uniform force, b_tesla the magnetic
// field.  Throws std::invalid_argument when both vanish (no natural scale
// exists; use explicit_scales instead).
ScaleSystem make_scales(double mass_kg, double force_newton, double b_tesla,
                        const Constants& c = codata());

ScaleSystem explicit_scales(double length_m, double energy_j,
                            const Constants& c = codata());

double to_dimensionless(double value, const Dimension& d, const ScaleSystem& s);
double to_physical(double value, const Dimension& d, const ScaleSystem& s);

// Dimensionless magnetic field B~ such that the cyclotron frequency of a
// particle with unit charge magnitude and dimensionless mass m~ is B~/m~.
double dimensionless_b_field(double b_tesla, const ScaleSystem& s,
                             const Constants& c = codata());

} // namespace qsrc::scales
