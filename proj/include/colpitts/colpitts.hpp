#pragma once

// Umbrella header: chaotic Colpitts pair synchronization via backstepping,
// with gain tuning by shark smell optimization and a PSO baseline.

#include "colpitts/backstepping.hpp"
#include "colpitts/integrate.hpp"
#include "colpitts/io.hpp"
#include "colpitts/model.hpp"
#include "colpitts/opt.hpp"
#include "colpitts/pso.hpp"
#include "colpitts/rng.hpp"
#include "colpitts/sim.hpp"
#include "colpitts/sso.hpp"
#include "colpitts/version.hpp"
