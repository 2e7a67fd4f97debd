#pragma once

#include "drgf/numeric.hpp"
#include "drgf/core.hpp"
#include "drgf/polynomial.hpp"
#include "drgf/spectral.hpp"
#include "drgf/feasibility.hpp"
#include "drgf/bound.hpp"
#include "drgf/search.hpp"
#include "drgf/oracle.hpp"
