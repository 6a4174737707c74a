#pragma once

// Central-configuration bifurcation toolkit: planar N-body geometry, spectra
// of the SO(2)-invariant augmented potential, known families, and degree- and
// Morse-based bifurcation detection along them.

#include "ccbif/bifurcation.hpp"
#include "ccbif/errors.hpp"
#include "ccbif/euler_ring.hpp"
#include "ccbif/families.hpp"
#include "ccbif/finite_diff.hpp"
#include "ccbif/nbody.hpp"
#include "ccbif/parallel.hpp"
#include "ccbif/serialize.hpp"
#include "ccbif/spectral.hpp"
#include "ccbif/types.hpp"
