#include <lteu/common.hpp>

namespace lteu {

const char*
to_string(CellKind kind)
{
  return kind == CellKind::macro_enb ? "macro_enb" : "lteu_microcell";
}

const char*
to_string(TrafficClass traffic)
{
  return traffic == TrafficClass::real_time ? "real_time" : "non_real_time";
}

} // namespace lteu
