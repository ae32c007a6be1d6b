#pragma once

// Link-budget arithmetic: path loss, log-normal shadowing, SINR and an
// abstract Shannon throughput.

#include <lteu/common.hpp>

#include <random>
#include <span>

namespace lteu::radio {

using Rng = std::mt19937_64;

/// Log-distance model `intercept + slope·log10(R)`, R in metres clamped at 1 m.
struct PathLossModel
{
  double intercept_db;
  double slope_db;

  double loss_db(double distance_m) const;

  static constexpr PathLossModel macro() { return {15.3, 37.6}; }
  static constexpr PathLossModel micro() { return {37.0, 30.0}; }

  friend bool operator==(const PathLossModel&, const PathLossModel&) = default;
};

double macro_path_loss_db(double distance_m);
double micro_path_loss_db(double distance_m, PathLossModel model = PathLossModel::micro());

inline constexpr double kDefaultShadowingStdDb = 8.0;

/// Zero-mean Gaussian in dB (log-normal in linear units).
double shadowing_db(Rng& rng, double std_db = kDefaultShadowingStdDb);

inline double
db_to_linear(double db)
{
  return std::pow(10.0, db / 10.0);
}

inline double
linear_to_db(double lin)
{
  return 10.0 * std::log10(lin);
}

double sinr_db(double signal_dbm, std::span<const double> interferers_dbm, double noise_dbm);

double shannon_throughput_mbps(double sinr_db, double bandwidth_mhz);

/// kT·B at 290 K: -174 dBm/Hz + 10·log10(B).
double thermal_noise_dbm(double bandwidth_hz);

struct TxConfig
{
  double tx_power_dbm = 43.0;
  CellKind kind = CellKind::macro_enb;
  Carrier carrier = Carrier::licensed;

  static TxConfig macro(double dbm = 43.0) { return {dbm, CellKind::macro_enb, Carrier::licensed}; }
  static TxConfig micro(double dbm = 10.0) { return {dbm, CellKind::lteu_microcell, Carrier::unlicensed}; }

  friend bool operator==(const TxConfig&, const TxConfig&) = default;
};

struct LinkBudget
{
  double distance_m = 1.0;
  double path_loss_db = 0.0;
  double shadow_db = 0.0;
  double rx_dbm = 0.0;
};

LinkBudget link_budget(const TxConfig& tx, double distance_m, double shadow_db, const PathLossModel& model);

} // namespace lteu::radio
