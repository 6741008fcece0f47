#pragma once

#include "dilated/error.hpp"
#include "dilated/numeric.hpp"
#include "dilated/polynomial.hpp"
#include "dilated/roots.hpp"
#include "dilated/multi_index.hpp"
#include "dilated/symbol.hpp"
#include "dilated/omega.hpp"
#include "dilated/linalg.hpp"
#include "dilated/gram.hpp"
#include "dilated/dilation1d.hpp"
#include "dilated/coefficient_series.hpp"
#include "dilated/polydisk.hpp"
#include "dilated/quadrature.hpp"
#include "dilated/weighted_torus.hpp"
#include "dilated/io.hpp"
