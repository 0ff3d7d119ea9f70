#pragma once

// Dense complex linear algebra over small multi-register systems.

#include "moments/core/algebra.hpp"
#include "moments/core/indexing.hpp"
#include "moments/core/layout.hpp"
#include "moments/core/operator.hpp"
#include "moments/core/random.hpp"
#include "moments/core/spin.hpp"
#include "moments/core/state_vector.hpp"
#include "moments/errors.hpp"
