#pragma once

#include "motpaver/paving.hpp"

#include <string>

namespace motpaver {

/// Paving plot for d = 2: nu-atoms as dots scaled by weight, mu-atoms as
/// crosses, component hulls as filled translucent polygons, J-attachments as
/// rings colored by component.
template <class T>
void write_paving_svg(const std::string& path, const DiscreteMeasure<T>& mu,
                      const DiscreteMeasure<T>& nu, const PavingRun<T>& run,
                      const Numerics<T>& num);

}  // namespace motpaver
