#pragma once

// Umbrella header for the ERDL toolchain.

#include "erdl/model.hpp"      // IWYU pragma: export
#include "erdl/parser.hpp"     // IWYU pragma: export
#include "erdl/json_io.hpp"    // IWYU pragma: export
#include "erdl/validator.hpp"  // IWYU pragma: export
#include "erdl/fixer.hpp"      // IWYU pragma: export
#include "erdl/transformer.hpp" // IWYU pragma: export
#include "erdl/renderer.hpp"   // IWYU pragma: export
