// Copyright 2026 The fredkin-cca Authors
// SPDX-License-Identifier: Apache-2.0

#include "fredkin/pulses.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fredkin {

std::string to_string(PulseKind kind) { return kind == PulseKind::Constant ? "constant" : "adiabatic"; }

PulseKind parse_pulse_kind(std::string_view text) {
    if (text == "constant") return PulseKind::Constant;
    if (text == "adiabatic") return PulseKind::Adiabatic;
    throw std::invalid_argument("unknown pulse kind '" + std::string(text) + "'");
}

double adiabatic_amplitude(double omega_max, double t) {
    const double s = std::sin(std::sqrt(2.0 / 3.0) * omega_max * t);
    return 2.0 * omega_max * s * s;
}

double resonant_gate_time(double omega_max) {
    if (!(omega_max > 0.0)) throw std::invalid_argument("resonant_gate_time: Omega_max must be > 0");
    return std::numbers::sqrt3 * std::numbers::pi / (std::numbers::sqrt2 * omega_max);
}

double dispersive_gate_time(double omega, double g) {
    if (!(omega > 0.0)) throw std::invalid_argument("dispersive_gate_time: Omega must be > 0");
    return g * std::numbers::pi / (omega * omega);
}

DriveSchedule::DriveSchedule(PulseKind kind, double amplitude, double gate_time)
    : kind_(kind), amplitude_(amplitude), gate_time_(gate_time) {
    if (!(amplitude >= 0.0)) throw std::invalid_argument("DriveSchedule: amplitude must be >= 0");
    if (!(gate_time > 0.0)) throw std::invalid_argument("DriveSchedule: gate time must be > 0");
}

DriveSchedule DriveSchedule::adiabatic(double omega_max) {
    return {PulseKind::Adiabatic, omega_max, resonant_gate_time(omega_max)};
}

DriveSchedule DriveSchedule::dispersive(double omega, double g) {
    return {PulseKind::Constant, omega, dispersive_gate_time(omega, g)};
}

double DriveSchedule::envelope(double t) const {
    return kind_ == PulseKind::Constant ? amplitude_ : adiabatic_amplitude(amplitude_, t);
}

double pulse_area(const DriveSchedule& schedule) {
    if (schedule.amplitude() == 0.0) return 0.0;
    auto f = [&](double t) { return schedule.envelope(t) / std::numbers::sqrt3; };
    double error = 0.0;
    const double area = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, 0.0, schedule.gate_time(), 15, 1e-9, &error);
    return area;
}

}  // namespace fredkin
