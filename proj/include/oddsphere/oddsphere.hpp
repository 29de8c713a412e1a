#pragma once

// Umbrella header for the whole library.

#include "oddsphere/error.hpp"
#include "oddsphere/multiindex.hpp"
#include "oddsphere/gauss_rational.hpp"
#include "oddsphere/polynomial.hpp"
#include "oddsphere/interval.hpp"
#include "oddsphere/sphere.hpp"
#include "oddsphere/bergman.hpp"
#include "oddsphere/toeplitz.hpp"
#include "oddsphere/harmonic.hpp"
#include "oddsphere/zeta.hpp"
#include "oddsphere/simplex.hpp"
#include "oddsphere/lip.hpp"
#include "oddsphere/bridge.hpp"
#include "oddsphere/states.hpp"
#include "oddsphere/state_distance.hpp"
#include "oddsphere/io.hpp"
