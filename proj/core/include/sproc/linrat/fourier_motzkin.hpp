#pragma once

#include <vector>

#include "sproc/linrat/polyhedron.hpp"

namespace sproc {

/// Exact projection of `p` onto the coordinates listed in `keep` (output
/// coordinate i is input coordinate keep[i]). Variables are eliminated one at
/// a time; after each step rows are normalised, deduplicated, filtered by
/// Chernikov's history rule and then pruned with one LP per row.
/// An empty input projects to Polyhedron::empty.
Polyhedron fm_project(const Polyhedron& p, const std::vector<std::size_t>& keep);

/// Drops rows implied by the remaining ones (one LP each). The result
/// describes the same set.
Polyhedron remove_redundant(const Polyhedron& p);

}  // namespace sproc
