#pragma once

#include "circbridge/special_fn.hpp"
#include "circbridge/circular_dist.hpp"
#include "circbridge/bridge_approx.hpp"
#include "circbridge/oracle.hpp"
