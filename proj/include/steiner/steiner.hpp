#pragma once

// Umbrella header. steiner/io.hpp is kept separate because it requires the
// vendored nlohmann/json single header.

#include "steiner/analysis.hpp"
#include "steiner/error.hpp"
#include "steiner/implicitize.hpp"
#include "steiner/patch.hpp"
#include "steiner/projective.hpp"
