#pragma once

// Umbrella header for the hyperbolic moment system analysis library.

#include "hme/assembly.hpp"
#include "hme/collision.hpp"
#include "hme/hermite.hpp"
#include "hme/moment_basis.hpp"
#include "hme/moment_state.hpp"
#include "hme/multi_index.hpp"
#include "hme/ohme.hpp"
#include "hme/quadrature.hpp"
#include "hme/stability.hpp"
#include "hme/yong.hpp"
