#pragma once

#include "kaclab/voronoi.hpp"

#include <string>

namespace kaclab {

/// 2-d cell diagram: hit points, perpendicular-bisector boundaries, closed-cell
/// lattice points, and the hull outline of B when given. Debug artifact only.
std::string render_cell_svg(const HittingSet& w, const VoronoiCells& cells,
                            const std::vector<IVec>& cell_b);

} // namespace kaclab
