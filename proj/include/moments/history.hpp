#pragma once

// Time moments linked by identity / unitary / collapse / partial connectors,
// contracted into amplitudes and conditional outcome distributions.

#include "moments/history/chain.hpp"
#include "moments/history/link.hpp"
#include "moments/history/multi_chain.hpp"
