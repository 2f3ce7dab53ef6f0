#pragma once

// Umbrella header.

#include "rwlab/error.hpp"
#include "rwlab/walk_model.hpp"
#include "rwlab/law_config.hpp"
#include "rwlab/lattice_distribution.hpp"
#include "rwlab/exact_engine.hpp"
#include "rwlab/ladder_theory.hpp"
#include "rwlab/potential_theory.hpp"
#include "rwlab/asymptotics.hpp"
#include "rwlab/defaults.hpp"
#include "rwlab/verify.hpp"
#include "rwlab/report_io.hpp"
#include "rwlab/standard_laws.hpp"
