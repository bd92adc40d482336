#pragma once

#include "mrta/core.hpp"
#include "mrta/flatten.hpp"
#include "mrta/instance_gen.hpp"
#include "mrta/json_io.hpp"
#include "mrta/solvers.hpp"
#include "mrta/sweep.hpp"
