#pragma once

#include <string>

#include "paralog/grid.hpp"

namespace paralog {

/// PGF ("pgf v1") grid-function files: an ASCII header followed by the raw
/// little-endian float64 raster, spatial index fastest, time index slowest.
///
///   pgf v1
///   n <dim>
///   shape <N_x...> <N_t>
///   domain <x_lo x_hi ... t_lo t_hi>
///   periodic <0|1>
///   label <string>
///   data
///   <payload>
///
/// Round trips are bit exact. Readers reject malformed headers, size
/// mismatches and non-finite payloads with std::runtime_error.
void write_pgf(const std::string& path, const GridFunction& f);
GridFunction read_pgf(const std::string& path);

}  // namespace paralog
