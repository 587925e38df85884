#pragma once

// Umbrella header for the realmono library: matrix kernels, the real
// positive order, matrix means, free-function evaluation, certifiers,
// hypograph convexity tests and the scalar pluriharmonic toolkit.

#include "realmono/certify.hpp"
#include "realmono/choi.hpp"
#include "realmono/errors.hpp"
#include "realmono/free_function.hpp"
#include "realmono/hypograph.hpp"
#include "realmono/invariance.hpp"
#include "realmono/json_io.hpp"
#include "realmono/matrix.hpp"
#include "realmono/means.hpp"
#include "realmono/pluriharmonic.hpp"
#include "realmono/real_order.hpp"
#include "realmono/sampling.hpp"
