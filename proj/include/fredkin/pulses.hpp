// Copyright 2026 The fredkin-cca Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file pulses.hpp
 * @brief Drive schedules and gate times for the resonant and dispersive schemes.
 *
 * Both drives share one envelope A(t) with the sign convention
 * Omega1(t) = +A(t), Omega3(t) = -A(t).
 */

#pragma once

#include <string>
#include <string_view>

namespace fredkin {

enum class PulseKind { Constant, Adiabatic };

std::string to_string(PulseKind kind);
/// Parses "constant" or "adiabatic"; throws std::invalid_argument otherwise.
PulseKind parse_pulse_kind(std::string_view text);

/// 2 Omega_max sin^2(sqrt(2/3) Omega_max t).
double adiabatic_amplitude(double omega_max, double t);

/// sqrt3 pi / (sqrt2 Omega_max); the adiabatic envelope vanishes again at this time.
double resonant_gate_time(double omega_max);

/// g pi / Omega^2.
double dispersive_gate_time(double omega, double g);

class DriveSchedule {
public:
    /// `amplitude` is Omega_max for adiabatic pulses and Omega for constant ones.
    DriveSchedule(PulseKind kind, double amplitude, double gate_time);

    /// Adiabatic envelope with the matching resonant gate time.
    static DriveSchedule adiabatic(double omega_max);
    /// Constant drive held for the dispersive gate time.
    static DriveSchedule dispersive(double omega, double g);

    PulseKind kind() const noexcept { return kind_; }
    double amplitude() const noexcept { return amplitude_; }
    double gate_time() const noexcept { return gate_time_; }

    /// Envelope A(t). Outside [0, T] it is evaluated by the same formula.
    double envelope(double t) const;
    double omega1(double t) const { return envelope(t); }
    double omega3(double t) const { return -envelope(t); }

private:
    PulseKind kind_;
    double amplitude_;
    double gate_time_;
};

/// Integral of A(t)/sqrt3 over [0, T] by adaptive Gauss-Kronrod quadrature.
double pulse_area(const DriveSchedule& schedule);

}  // namespace fredkin
