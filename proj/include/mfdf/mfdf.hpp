#pragma once

#include "mfdf/config.hpp"
#include "mfdf/dispersion.hpp"
#include "mfdf/dynamics.hpp"
#include "mfdf/equation.hpp"
#include "mfdf/errors.hpp"
#include "mfdf/experiments.hpp"
#include "mfdf/grid.hpp"
#include "mfdf/initial_data.hpp"
#include "mfdf/io.hpp"
#include "mfdf/observables.hpp"
#include "mfdf/sim_config.hpp"
#include "mfdf/spectral.hpp"
