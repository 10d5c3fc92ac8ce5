#pragma once

#include "tourncyc/density.hpp"
#include "tourncyc/extremal.hpp"
#include "tourncyc/harness.hpp"
#include "tourncyc/normopt.hpp"
#include "tourncyc/optbound.hpp"
#include "tourncyc/rng.hpp"
#include "tourncyc/spectral.hpp"
#include "tourncyc/tolerances.hpp"
#include "tourncyc/tournament.hpp"
#include "tourncyc/tournament_io.hpp"
