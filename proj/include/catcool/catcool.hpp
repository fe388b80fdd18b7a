// catcool.hpp
// Umbrella header

#pragma once

#include "cnu.hpp"
#include "cooling_opt.hpp"
#include "currents.hpp"
#include "errors.hpp"
#include "format.hpp"
#include "multiqubit.hpp"
#include "state.hpp"
#include "sweep_config.hpp"
#include "thermometry.hpp"
