#pragma once

#include "spdcbs/analytic.hpp"
#include "spdcbs/distribution.hpp"
#include "spdcbs/errors.hpp"
#include "spdcbs/fock.hpp"
#include "spdcbs/io.hpp"
#include "spdcbs/matrix.hpp"
#include "spdcbs/montecarlo.hpp"
#include "spdcbs/permanent.hpp"
#include "spdcbs/rng.hpp"
#include "spdcbs/unitary.hpp"
