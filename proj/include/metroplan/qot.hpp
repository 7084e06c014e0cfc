#ifndef METROPLAN_QOT_HPP
#define METROPLAN_QOT_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "metroplan/common.hpp"
#include "metroplan/spectrum.hpp"

namespace metroplan {

/// Amplified spans of one link. EDFA gain exactly compensates span loss, so a
/// link is transparent end to end and noise accumulates per span.
struct LinkSpans {
  int spans = 1;
  double span_length_km = 0;

  double gain_linear(double alpha_db) const {
    return std::pow(10.0, alpha_db * span_length_km / 10.0);
  }
};

struct SpanPlan {
  std::vector<LinkSpans> links;

  void validate() const {
    for (const auto& l : links) {
      if (l.spans < 1) throw ValidationError("span count must be at least 1");
      if (!(l.span_length_km > 0)) throw ValidationError("non-positive span length");
    }
  }
};

/// Splits every link into equal spans no longer than max_span_km.
inline SpanPlan make_span_plan(const std::vector<double>& link_km, double max_span_km) {
  if (!(max_span_km > 0)) throw ValidationError("max span length must be positive");
  SpanPlan plan;
  for (double km : link_km) {
    if (!(km > 0)) throw ValidationError("non-positive link length in span plan");
    const int n = std::max(1, static_cast<int>(std::ceil(km / max_span_km - 1e-12)));
    plan.links.push_back({n, km / n});
  }
  return plan;
}

/// WSS filtering penalty looked up by (hop count, node degree); indices clamp
/// to the table edges. Values are bounded to the 0.3–7 dB range.
struct FilterPenaltyTable {
  int min_hops = 1;
  int min_degree = 2;
  std::vector<std::vector<double>> penalty_db;  // [hop row][degree column]

  static FilterPenaltyTable defaults() {
    FilterPenaltyTable t;
    for (int h = 1; h <= 10; ++h) {
      std::vector<double> row;
      for (int d = 2; d <= 9; ++d)
        row.push_back(std::min(7.0, 0.3 + 0.4 * (h - 1) + 0.15 * (d - 2)));
      t.penalty_db.push_back(std::move(row));
    }
    return t;
  }

  void validate() const {
    if (penalty_db.empty()) throw ValidationError("empty filter penalty table");
    for (const auto& row : penalty_db)
      for (double v : row)
        if (!(v >= 0.3 && v <= 7.0))
          throw ValidationError("filter penalty outside the 0.3-7 dB range");
  }

  double lookup(int hops, int degree) const {
    const int r = std::clamp(hops - min_hops, 0, static_cast<int>(penalty_db.size()) - 1);
    const auto& row = penalty_db[r];
    const int c = std::clamp(degree - min_degree, 0, static_cast<int>(row.size()) - 1);
    return row[c];
  }
};

/// Additive SNR penalties of a lightpath. A non-finite trx_snr_db disables the
/// transceiver noise term.
struct QoTPenalties {
  double trx_snr_db = kAbsent;
  double filter_penalty_db = 0;
  double aging_margin_db = 0;
};

namespace detail {

/// One span's NLI power for every channel, closed-form incoherent GN with an
/// optional first-order ISRS tilt of the channel powers. The per-pair kernel
/// is the familiar asinh/log form:
///   SPM  (8/27)  g^2 Leff^2 G_i^3   asinh(pi^2/2 |b2| La B^2) / (2 pi |b2| La)
///   XPM  (16/27) g^2 Leff^2 G_k^2 G_i ln((df+B/2)/(df-B/2)) / (4 pi |b2| La)
/// with the local dispersion b2(i,k) = beta2 + pi beta3 (f_i + f_k - 2 f_ref)
/// and, when ISRS is on, PSDs scaled by exp(Ptot Cr Leff (f_ref - f)).
inline std::vector<double> nli_power_per_span(const std::vector<double>& grid_thz,
                                              double power_w, double span_km,
                                              const OpticalParameters& p) {
  const int n = static_cast<int>(grid_thz.size());
  std::vector<double> out(n, 0.0);
  if (!p.nli.enable_nli || n == 0) return out;

  const double bch = p.channel_bandwidth_hz();
  const double leff = p.effective_length(span_km);
  const double leff_a = p.effective_length();
  const double gamma2 = p.gamma_nl * p.gamma_nl;

  std::vector<double> f_hz(n);
  double f_ref = 0;
  for (int i = 0; i < n; ++i) {
    f_hz[i] = grid_thz[i] * 1e12;
    f_ref += f_hz[i];
  }
  f_ref /= n;

  const double p_tot = power_w * n;
  std::vector<double> psd(n, power_w / bch);
  if (p.nli.enable_isrs) {
    for (int i = 0; i < n; ++i)
      psd[i] *= std::exp(p_tot * p.cr * leff * (f_ref - f_hz[i]));
  }

  for (int i = 0; i < n; ++i) {
    double g_nli = 0;
    for (int k = 0; k < n; ++k) {
      double beta2_eff = p.beta2 + M_PI * p.beta3 * (f_hz[i] + f_hz[k] - 2 * f_ref);
      double b2 = std::max(std::abs(beta2_eff), 1e-29);
      if (k == i) {
        const double psi = std::asinh(0.5 * M_PI * M_PI * b2 * leff_a * bch * bch) /
                           (2 * M_PI * b2 * leff_a);
        g_nli += (8.0 / 27.0) * gamma2 * leff * leff * psd[i] * psd[i] * psd[i] * psi;
      } else {
        const double df = std::abs(f_hz[k] - f_hz[i]);
        // grids narrower than the channel bandwidth would overlap; clamp the
        // lower integration edge instead of producing a negative argument
        const double lo = std::max(df - bch / 2, 1e-3 * bch);
        const double psi = std::log((df + bch / 2) / lo) / (4 * M_PI * b2 * leff_a);
        g_nli += (16.0 / 27.0) * gamma2 * leff * leff * psd[k] * psd[k] * psd[i] * psi;
      }
    }
    out[i] = g_nli * bch;
  }
  return out;
}

}  // namespace detail

/// ASE noise power of one amplified span at the given frequency.
inline double ase_power_per_span(const OpticalParameters& p, double freq_thz,
                                 double span_length_km, double noise_figure_linear) {
  const double gain = std::pow(10.0, p.alpha_db * span_length_km / 10.0);
  return noise_figure_linear * p.h_plank * freq_thz * 1e12 * (gain - 1.0) *
         p.channel_bandwidth_hz();
}

/// Per-link, per-slot QoT at the link's optimal launch power.
struct LinkQoTProfile {
  std::vector<std::vector<double>> gsnr_db;      // [link][slot]
  std::vector<std::vector<double>> gsnr_linear;  // [link][slot]
  std::vector<std::vector<double>> ase_w;        // [link][slot]
  std::vector<std::vector<double>> nli_w;        // [link][slot]
  std::vector<double> optimal_power_dbm;         // [link]
  std::vector<double> optimal_power_w;           // [link]
  std::vector<double> throughput_at_optimum;     // [link] Gbps over all slots
  std::uint64_t cache_key = 0;

  int num_links() const { return static_cast<int>(gsnr_db.size()); }
};

/// Highest-order modulation whose SNR threshold the GSNR meets (boundary
/// inclusive); nullopt marks an infeasible slot.
inline std::optional<ModulationFormat> select_modulation(double gsnr_db,
                                                         const OpticalParameters& p) {
  const auto& t = p.modulation_thresholds;
  for (auto it = t.rbegin(); it != t.rend(); ++it)
    if (gsnr_db >= it->snr_db) return *it;
  return std::nullopt;
}

/// Computes GSNR for every (link, slot) at every candidate launch power and
/// keeps the power that maximizes the link's total supported bitrate, ties
/// resolved toward the lower power. ASE follows the per-span EDFA formula
/// scaled by span count; NLI accumulates as N^(1+epsilon).
inline LinkQoTProfile link_gsnr_profile(const std::vector<double>& grid_thz,
                                        const std::vector<double>& candidate_powers_dbm,
                                        const SpanPlan& spans, const OpticalParameters& params,
                                        const BandLayout& layout) {
  if (grid_thz.empty()) throw ValidationError("empty frequency grid");
  if (candidate_powers_dbm.empty()) throw ValidationError("empty candidate power set");
  if (static_cast<int>(grid_thz.size()) != layout.total_slots)
    throw ValidationError("grid size does not match the band layout");
  params.validate();
  spans.validate();
  layout.validate();

  std::vector<double> powers = candidate_powers_dbm;
  std::sort(powers.begin(), powers.end());

  const int num_slots = static_cast<int>(grid_thz.size());
  LinkQoTProfile prof;
  const int nl = static_cast<int>(spans.links.size());
  prof.gsnr_db.resize(nl);
  prof.gsnr_linear.resize(nl);
  prof.ase_w.resize(nl);
  prof.nli_w.resize(nl);
  prof.optimal_power_dbm.resize(nl);
  prof.optimal_power_w.resize(nl);
  prof.throughput_at_optimum.resize(nl);

  for (int l = 0; l < nl; ++l) {
    const LinkSpans& ls = spans.links[l];
    double best_tp = -1;
    for (double pw_dbm : powers) {
      const double p_tx = dbm_to_watt(pw_dbm);
      const std::vector<double> nli1 =
          detail::nli_power_per_span(grid_thz, p_tx, ls.span_length_km, params);
      const double span_scale = std::pow(static_cast<double>(ls.spans),
                                         1.0 + params.nli.epsilon);
      std::vector<double> gsnr_lin(num_slots), ase(num_slots), nli(num_slots);
      double tp = 0;
      for (int s = 0; s < num_slots; ++s) {
        const BandName band = band_of_slot(layout, s);
        const double nf = band == BandName::L ? params.noise_figure_l : params.noise_figure_c;
        ase[s] = ls.spans * ase_power_per_span(params, grid_thz[s], ls.span_length_km, nf);
        nli[s] = nli1[s] * span_scale;
        gsnr_lin[s] = p_tx / (ase[s] + nli[s]);
        if (auto mod = select_modulation(linear_to_db(gsnr_lin[s]), params))
          tp += mod->bitrate_gbps;
      }
      if (tp > best_tp) {  // strict: equal throughput keeps the lower power
        best_tp = tp;
        prof.optimal_power_dbm[l] = pw_dbm;
        prof.optimal_power_w[l] = p_tx;
        prof.throughput_at_optimum[l] = tp;
        prof.ase_w[l] = std::move(ase);
        prof.nli_w[l] = std::move(nli);
        prof.gsnr_linear[l] = std::move(gsnr_lin);
      }
    }
    prof.gsnr_db[l].resize(num_slots);
    for (int s = 0; s < num_slots; ++s)
      prof.gsnr_db[l][s] = linear_to_db(prof.gsnr_linear[l][s]);
  }
  return prof;
}

/// End-to-end lightpath GSNR: reciprocal sum of the member link GSNRs plus the
/// transceiver term, minus filter and aging penalties.
inline double path_gsnr(const std::vector<double>& link_gsnrs_db, const QoTPenalties& pen) {
  if (link_gsnrs_db.empty()) throw ValidationError("path has no links");
  double inv = 0;
  for (double g : link_gsnrs_db) {
    if (!std::isfinite(g)) throw ValidationError("non-finite link GSNR");
    inv += 1.0 / db_to_linear(g);
  }
  if (std::isfinite(pen.trx_snr_db)) inv += 1.0 / db_to_linear(pen.trx_snr_db);
  return linear_to_db(1.0 / inv) - pen.filter_penalty_db - pen.aging_margin_db;
}

/// Content hash identifying one QoT computation, used to key the on-disk
/// profile cache so stale entries can never be reused.
inline std::uint64_t qot_cache_key(const std::string& topology_name, int level,
                                   const std::vector<double>& grid_thz,
                                   const std::vector<double>& powers_dbm,
                                   const SpanPlan& spans, const OpticalParameters& p,
                                   const BandLayout& layout) {
  std::uint64_t h = fnv1a(topology_name);
  h = fnv1a(static_cast<std::int64_t>(level), h);
  for (double g : grid_thz) h = fnv1a(g, h);
  for (double pw : powers_dbm) h = fnv1a(pw, h);
  for (const auto& l : spans.links) {
    h = fnv1a(static_cast<std::int64_t>(l.spans), h);
    h = fnv1a(l.span_length_km, h);
  }
  h = fnv1a(p.h_plank, h);
  h = fnv1a(p.beta2, h);
  h = fnv1a(p.beta3, h);
  h = fnv1a(p.gamma_nl, h);
  h = fnv1a(p.cr, h);
  h = fnv1a(p.alpha_db, h);
  h = fnv1a(p.noise_figure_c, h);
  h = fnv1a(p.noise_figure_l, h);
  h = fnv1a(p.symbol_rate, h);
  h = fnv1a(p.rolloff, h);
  for (const auto& m : p.modulation_thresholds) {
    h = fnv1a(m.name, h);
    h = fnv1a(m.snr_db, h);
    h = fnv1a(m.bitrate_gbps, h);
  }
  h = fnv1a(static_cast<std::int64_t>(p.nli.enable_nli), h);
  h = fnv1a(static_cast<std::int64_t>(p.nli.enable_isrs), h);
  h = fnv1a(p.nli.epsilon, h);
  for (double v : p.nli.phi_mfl) h = fnv1a(v, h);
  h = fnv1a(static_cast<std::int64_t>(layout.separation[0]), h);
  h = fnv1a(static_cast<std::int64_t>(layout.separation[1]), h);
  h = fnv1a(static_cast<std::int64_t>(layout.total_slots), h);
  return h;
}

inline void save_qot_profile(const LinkQoTProfile& prof, const std::string& path) {
  nlohmann::json j;
  j["cache_key"] = prof.cache_key;
  j["gsnr_db"] = prof.gsnr_db;
  j["gsnr_linear"] = prof.gsnr_linear;
  j["ase_w"] = prof.ase_w;
  j["nli_w"] = prof.nli_w;
  j["optimal_power_dbm"] = prof.optimal_power_dbm;
  j["optimal_power_w"] = prof.optimal_power_w;
  j["throughput_at_optimum"] = prof.throughput_at_optimum;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write QoT cache: " + path);
  out << j.dump(1) << "\n";
}

inline std::optional<LinkQoTProfile> load_qot_profile(const std::string& path,
                                                      std::uint64_t expected_key) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (!j.contains("cache_key") || j["cache_key"].get<std::uint64_t>() != expected_key)
    return std::nullopt;
  LinkQoTProfile p;
  p.cache_key = expected_key;
  p.gsnr_db = j.at("gsnr_db").get<std::vector<std::vector<double>>>();
  p.gsnr_linear = j.at("gsnr_linear").get<std::vector<std::vector<double>>>();
  p.ase_w = j.at("ase_w").get<std::vector<std::vector<double>>>();
  p.nli_w = j.at("nli_w").get<std::vector<std::vector<double>>>();
  p.optimal_power_dbm = j.at("optimal_power_dbm").get<std::vector<double>>();
  p.optimal_power_w = j.at("optimal_power_w").get<std::vector<double>>();
  p.throughput_at_optimum = j.at("throughput_at_optimum").get<std::vector<double>>();
  return p;
}

}  // namespace metroplan

#endif  // METROPLAN_QOT_HPP
