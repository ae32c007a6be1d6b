#include <lteu/radio.hpp>

#include <algorithm>
#include <limits>
#include <string>

namespace lteu::radio {

double
PathLossModel::loss_db(double distance_m) const
{
  if (!(distance_m > 0.0))
    {
      throw Error("path loss needs a positive distance, got " + std::to_string(distance_m));
    }
  return intercept_db + slope_db * std::log10(std::max(distance_m, 1.0));
}

double
macro_path_loss_db(double distance_m)
{
  return PathLossModel::macro().loss_db(distance_m);
}

double
micro_path_loss_db(double distance_m, PathLossModel model)
{
  return model.loss_db(distance_m);
}

double
shadowing_db(Rng& rng, double std_db)
{
  if (std_db <= 0.0)
    {
      return 0.0;
    }
  return std::normal_distribution<double>(0.0, std_db)(rng);
}

double
sinr_db(double signal_dbm, std::span<const double> interferers_dbm, double noise_dbm)
{
  double denom = db_to_linear(noise_dbm);
  for (double i : interferers_dbm)
    {
      denom += db_to_linear(i);
    }
  return linear_to_db(db_to_linear(signal_dbm) / denom);
}

double
shannon_throughput_mbps(double sinr_db, double bandwidth_mhz)
{
  if (!(bandwidth_mhz > 0.0))
    {
      throw Error("bandwidth must be positive");
    }
  return bandwidth_mhz * std::log2(1.0 + db_to_linear(sinr_db));
}

double
thermal_noise_dbm(double bandwidth_hz)
{
  return -174.0 + 10.0 * std::log10(bandwidth_hz);
}

LinkBudget
link_budget(const TxConfig& tx, double distance_m, double shadow_db, const PathLossModel& model)
{
  LinkBudget lb;
  lb.distance_m = distance_m;
  lb.path_loss_db = model.loss_db(distance_m);
  lb.shadow_db = shadow_db;
  lb.rx_dbm = tx.tx_power_dbm - lb.path_loss_db - shadow_db;
  return lb;
}

} // namespace lteu::radio
