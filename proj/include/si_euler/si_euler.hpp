#pragma once

#include "si_euler/contour.hpp"
#include "si_euler/diagnostics.hpp"
#include "si_euler/flow.hpp"
#include "si_euler/initial_data.hpp"
#include "si_euler/jump_profile.hpp"
#include "si_euler/kernel.hpp"
#include "si_euler/ode_oracle.hpp"
#include "si_euler/steady.hpp"
