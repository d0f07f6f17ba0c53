#pragma once

#include <string>

#include "sel/field_state.hpp"
#include "sel/grid.hpp"
#include "sel/params.hpp"

namespace sel {

/// Raw (unmollified) initial density and momentum sampled at cell centres.
struct InitialProfile {
  Field rho0;
  Field m0;
};

/// Knobs of the named presets: a background density and a bump height
/// relative to it.
struct PresetShape {
  double rho_base = 1.0;
  double amplitude = 0.25;
};

/// "constant", "bump", "two_bumps" or "vacuum_patch"; momentum is zero.
InitialProfile preset_profile(const std::string& name, const Grid& grid,
                              const PresetShape& shape = {});

/// Reads rows "x,rho0,m0" (header optional, '#' comments allowed) and
/// linearly interpolates onto the cell centres.
InitialProfile load_profile_csv(const std::string& path, const Grid& grid);

/// Regularised initial data: truncate rho0 below at epsilon, reflect
/// evenly (rho) and oddly (m) across both ends, convolve with a truncated
/// Gaussian of standard deviation epsilon, then pin m = 0 in the two end
/// cells. Throws PreconditionError unless 0 <= rho0 <= M1 and
/// |m0| <= M2 rho0 everywhere.
FieldState mollify_initial_data(const Field& rho0, const Field& m0,
                                const ModelParams& params, const Grid& grid);

}  // namespace sel
