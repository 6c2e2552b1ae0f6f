#pragma once

// Umbrella header for the exact engines (no file I/O).

#include "stabcheck/abelian.hpp"
#include "stabcheck/attraction.hpp"
#include "stabcheck/complex.hpp"
#include "stabcheck/error.hpp"
#include "stabcheck/field.hpp"
#include "stabcheck/scenarios.hpp"
#include "stabcheck/stabilize.hpp"
