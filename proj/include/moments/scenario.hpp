#pragma once

// Scenario files: parsing, rendering, execution, built-in experiments and
// machine-readable reports.

#include "moments/scenario/builtins.hpp"
#include "moments/scenario/report.hpp"
#include "moments/scenario/runner.hpp"
#include "moments/scenario/scenario.hpp"
