#pragma once

#include "scot/graph.hpp"

namespace scot::samples {

// H-shaped six-vertex tree a..f used for the 18-broker example overlay.
Graph h_tree();

// a - b - c
Graph path_abc();

// Fifteen-vertex tree i..xv; vi..x form the inner spine.
Graph roman_tree();

}  // namespace scot::samples
