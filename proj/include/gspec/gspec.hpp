#pragma once

// Umbrella header for the library (everything except the CLI front end).
#include "gspec/bounds.hpp"
#include "gspec/eigen.hpp"
#include "gspec/error.hpp"
#include "gspec/experiments.hpp"
#include "gspec/graphon.hpp"
#include "gspec/matrix.hpp"
#include "gspec/quadrature.hpp"
#include "gspec/rng.hpp"
#include "gspec/sampling.hpp"
#include "gspec/spectra.hpp"
#include "gspec/stats.hpp"
