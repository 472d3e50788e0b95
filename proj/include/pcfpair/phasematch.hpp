#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcfpair/fibre.hpp"

namespace pcfpair {

/// Pump axis -> pair axis.
enum class Scheme { ss_ss, ff_ff, ss_ff, ff_ss };

Scheme parse_scheme(const std::string& text);
std::string to_string(Scheme s);

const DispersionModel& pump_axis(const FibreSpec& f, Scheme s);
const DispersionModel& pair_axis(const FibreSpec& f, Scheme s);

struct PhaseMatchPoint {
  double lambda_p = 0.0;
  double lambda_s = 0.0;
  double lambda_i = 0.0;
  Scheme scheme = Scheme::ss_ff;
  double dk_residual = 0.0;  // 1/m
  double pump_power = 0.0;   // W
  double Np = 0.0, Ns = 0.0, Ni = 0.0;
};

enum class PumpShape { gaussian, tophat };

struct PumpSpec {
  double lambda_p = 705.0;
  double fwhm_nm = 3.0;
  PumpShape shape = PumpShape::gaussian;
  double peak_power = 0.0;
};

/// γ = 2π n₂ / (λ_p A_eff), in 1/(W m).
double gamma(const FibreSpec& fibre, double lambda_p_nm);

double idler_from_energy(double lambda_p_nm, double lambda_s_nm);

/// Δk = 2 n_p ω_p/c − n_s ω_s/c − n_i ω_i/c − 2γP, in 1/m.
double delta_k(const FibreSpec& fibre, Scheme scheme, double lambda_p, double lambda_s,
               double lambda_i, double pump_power);

/// Widest signal window for which signal and idler both stay inside the fibre range,
/// stopping 0.5 nm short of the degenerate point.
std::pair<double, double> default_signal_window(const FibreSpec& fibre, double lambda_p);

std::vector<PhaseMatchPoint> solve_phasematch(const FibreSpec& fibre, Scheme scheme, double lambda_p,
                                              double pump_power,
                                              std::optional<std::pair<double, double>> window = {},
                                              int samples = 2000);

struct CurveSample {
  double lambda_p = 0.0;
  std::vector<PhaseMatchPoint> points;
};

std::vector<CurveSample> phasematch_curve(const FibreSpec& fibre, Scheme scheme, double lambda_p_lo,
                                          double lambda_p_hi, int steps, double pump_power,
                                          std::optional<std::pair<double, double>> window = {});

/// Bluest signal root for this pump, or nothing.
std::optional<PhaseMatchPoint> primary_point(const FibreSpec& fibre, Scheme scheme, double lambda_p,
                                             double pump_power = 0.0);

/// Pump wavelength where N_p equals the idler group index on the primary branch.
double zero_slope_pump(const FibreSpec& fibre, Scheme scheme, double lo_nm, double hi_nm);

struct SignalBandwidth {
  double domega_s = 0.0;     // rad/s
  double dlambda_s_nm = 0.0;
  double first_term = 0.0;   // 2πc / (|N_s − N_i| L)
  double second_term = 0.0;  // pump-bandwidth contribution
};

SignalBandwidth signal_bandwidth(const PhaseMatchPoint& point, double length_m, double domega_p);

}  // namespace pcfpair
