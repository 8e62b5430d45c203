#pragma once

#include "eolo/cost.hpp"
#include "eolo/deduction.hpp"
#include "eolo/error.hpp"
#include "eolo/ingestion.hpp"
#include "eolo/random.hpp"
#include "eolo/simulator.hpp"
#include "eolo/strategies.hpp"
#include "eolo/types.hpp"
#include "eolo/worlds.hpp"
