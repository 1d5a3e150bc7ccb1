#pragma once

// Umbrella header.

#include "costs.hpp"
#include "data_consistency.hpp"
#include "epigraph.hpp"
#include "errors.hpp"
#include "image.hpp"
#include "io.hpp"
#include "metrics.hpp"
#include "oracle.hpp"
#include "solver.hpp"
#include "synth.hpp"

namespace pesc {
inline constexpr const char* kVersion = "0.1.0";
}
