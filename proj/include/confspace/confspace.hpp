#pragma once

// Umbrella header for the whole library.

#include "confspace/abelian_group.hpp"
#include "confspace/bigint.hpp"
#include "confspace/chainalg.hpp"
#include "confspace/combinat.hpp"
#include "confspace/complexes.hpp"
#include "confspace/engine.hpp"
#include "confspace/exactla.hpp"
#include "confspace/golden.hpp"
#include "confspace/reproduce.hpp"
#include "confspace/results.hpp"
#include "confspace/sparse_matrix.hpp"
#include "confspace/verify.hpp"
