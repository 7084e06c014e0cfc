#ifndef METROPLAN_SPECTRUM_HPP
#define METROPLAN_SPECTRUM_HPP

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "metroplan/common.hpp"

namespace metroplan {

struct ModulationFormat {
  std::string name;
  double snr_db = 0;        // minimum GSNR for the target BER
  double bitrate_gbps = 0;  // carried bitrate at the configured symbol rate
};

/// Switches for the nonlinear-interference model. epsilon is the span
/// accumulation exponent correction (0 = purely incoherent); phi_mfl is a
/// per-format correction vector carried through to the NLI formula.
struct NliConfig {
  bool enable_nli = true;
  bool enable_isrs = true;
  double epsilon = 0.0;
  std::vector<double> phi_mfl;
};

/// Fiber and transceiver constants shared by the QoT engine. Frequencies are
/// THz at the API surface and converted to Hz inside the physics.
struct OpticalParameters {
  double h_plank = 6.626e-34;  // J s
  double target_ber = 0.01;
  double beta2 = -2.17e-26;   // s^2/m
  double beta3 = 1.4e-40;     // s^3/m
  double gamma_nl = 1.21e-3;  // 1/(W m)
  double cr = 2.8e-17;        // Raman slope, 1/(W m Hz)
  double alpha_db = 0.2;      // dB/km
  double noise_figure_c = 3.1622776601683795;  // linear (5 dB)
  double noise_figure_l = 3.5481338923357547;  // linear (5.5 dB)
  double symbol_rate = 64e9;  // baud
  double rolloff = 0.1;
  std::vector<ModulationFormat> modulation_thresholds = default_modulations();
  NliConfig nli;

  static std::vector<ModulationFormat> default_modulations() {
    return {{"PM-BPSK", 4.32, 64},   {"PM-QPSK", 7.33, 120},  {"PM-8QAM", 11.40, 200},
            {"PM-16QAM", 13.90, 260}, {"PM-32QAM", 16.85, 320}, {"PM-64QAM", 19.73, 400}};
  }

  double channel_bandwidth_hz() const { return symbol_rate * (1.0 + rolloff); }

  /// Power attenuation coefficient, 1/m.
  double alpha_norm() const { return alpha_db * std::log(10.0) / 10.0 / 1e3; }

  /// Asymptotic effective length, m.
  double effective_length() const { return 1.0 / alpha_norm(); }

  /// Effective length of one span of the given length, m.
  double effective_length(double span_km) const {
    const double a = alpha_norm();
    return (1.0 - std::exp(-a * span_km * 1e3)) / a;
  }

  void validate() const {
    if (!(alpha_db > 0)) throw ValidationError("alpha_db must be positive");
    if (!(symbol_rate > 0)) throw ValidationError("symbol_rate must be positive");
    if (!(rolloff >= 0 && rolloff < 1)) throw ValidationError("rolloff must be in [0,1)");
    if (modulation_thresholds.empty())
      throw ValidationError("no modulation thresholds configured");
    for (std::size_t i = 1; i < modulation_thresholds.size(); ++i) {
      if (!(modulation_thresholds[i].snr_db > modulation_thresholds[i - 1].snr_db) ||
          !(modulation_thresholds[i].bitrate_gbps > modulation_thresholds[i - 1].bitrate_gbps))
        throw ValidationError("modulation thresholds must increase in SNR and bitrate");
    }
  }
};

/// One optical transmission band with its fixed-grid channel plan.
struct Band {
  std::string name;  // C, SuperC or L
  double start_freq_thz = 0;
  double end_freq_thz = 0;
  double channel_spacing_thz = 0.075;

  int num_channels() const {
    if (!(channel_spacing_thz > 0)) throw ValidationError("non-positive channel spacing");
    if (!(end_freq_thz > start_freq_thz))
      throw ValidationError("band '" + name + "' has end <= start");
    // +1e-9 keeps an exact integer ratio from landing one slot short
    return static_cast<int>(std::floor((end_freq_thz - start_freq_thz) / channel_spacing_thz + 1e-9));
  }
};

/// Channel centers at half-spacing offsets so the channels tile the span.
inline std::vector<double> build_grid(const Band& band) {
  const int n = band.num_channels();
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i)
    grid[i] = band.start_freq_thz + (i + 0.5) * band.channel_spacing_thz;
  return grid;
}

enum class BandName { C = 0, SuperC = 1, L = 2 };

inline const char* band_name_str(BandName b) {
  switch (b) {
    case BandName::C: return "C";
    case BandName::SuperC: return "SuperC";
    case BandName::L: return "L";
  }
  return "?";
}

/// Maps frequency-slot indices onto the three bands: slots below
/// separation[0] are C, below separation[1] SuperC, the rest L.
struct BandLayout {
  std::array<int, 2> separation{};  // last C slot index, last SuperC slot index (exclusive)
  int total_slots = 0;

  void validate() const {
    if (!(0 < separation[0] && separation[0] < separation[1] && separation[1] <= total_slots))
      throw ValidationError("band layout separation indices out of order");
  }
};

inline BandName band_of_slot(const BandLayout& layout, int slot) {
  if (slot < 0 || slot >= layout.total_slots)
    throw ValidationError("slot index out of range: " + std::to_string(slot));
  if (slot < layout.separation[0]) return BandName::C;
  if (slot < layout.separation[1]) return BandName::SuperC;
  return BandName::L;
}

}  // namespace metroplan

#endif  // METROPLAN_SPECTRUM_HPP
