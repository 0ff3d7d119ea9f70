#pragma once

// Von Neumann measuring devices: cyclic pointer registers with impulsive
// shift couplings, two-time difference meters, and partial measurements.

#include "moments/meter/difference.hpp"
#include "moments/meter/pointer.hpp"
